#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>

namespace qwalk {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double wrap_two_pi(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

inline cplx unit_phase(double a) { return std::polar(1.0, a); }

// Distance between two phases measured along the circle, in [0, pi].
inline double phase_distance(double a, double b) {
    const double d = std::abs(wrap_two_pi(a) - wrap_two_pi(b));
    return std::min(d, kTwoPi - d);
}

inline double sgn(double r) { return (r > 0.0) ? 1.0 : (r < 0.0 ? -1.0 : 0.0); }

// Parses "p/qpi", "ppi", "pi" (optionally signed) or a plain radian value.
// The rational form is evaluated as (p/q)*pi so the same caption string
// always produces the same double.  Returns nullopt on malformed input.
inline std::optional<double> parse_angle(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char ch : text)
        if (ch != ' ' && ch != '\t') s.push_back(ch);
    if (s.empty()) return std::nullopt;

    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        neg = (s[0] == '-');
        i = 1;
    }
    const std::string body = s.substr(i);
    if (body.empty()) return std::nullopt;

    auto parse_number = [](const std::string& u) -> std::optional<double> {
        if (u.empty()) return std::nullopt;
        try {
            std::size_t used = 0;
            const double v = std::stod(u, &used);
            if (used != u.size()) return std::nullopt;
            return v;
        } catch (...) {
            return std::nullopt;
        }
    };

    if (body.size() >= 2 && body.compare(body.size() - 2, 2, "pi") == 0) {
        const std::string frac = body.substr(0, body.size() - 2);
        double num = 1.0, den = 1.0;
        if (!frac.empty()) {
            const auto slash = frac.find('/');
            if (slash == std::string::npos) {
                const auto v = parse_number(frac);
                if (!v) return std::nullopt;
                num = *v;
            } else {
                const auto a = parse_number(frac.substr(0, slash));
                const auto b = parse_number(frac.substr(slash + 1));
                if (!a || !b || *b == 0.0) return std::nullopt;
                num = *a;
                den = *b;
            }
        }
        const double v = (num / den) * kPi;
        return neg ? -v : v;
    }

    const auto v = parse_number(body);
    if (!v) return std::nullopt;
    return neg ? -*v : *v;
}

}  // namespace qwalk
