#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qwalk/grover.hpp"
#include "qwalk/oracle.hpp"

namespace qwalk {

using nlohmann::json;

inline std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

inline cplx complex_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigParse("field " + field + ": complex values must be [re, im] pairs");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

inline double angle_from_json(const json& j, const std::string& field) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto parsed = parse_angle(j.get<std::string>());
        if (parsed) return *parsed;
        throw ConfigParse("field " + field + ": cannot parse angle '" +
                          j.get<std::string>() + "'");
    }
    throw ConfigParse("field " + field + ": expected radians or an \"a/bpi\" string");
}

inline json coin_to_json(const Coin& c) {
    json core = json::array();
    for (int r = 0; r < c.n; ++r) {
        json row = json::array();
        for (int k = 0; k < c.n; ++k) row.push_back(complex_to_json(c.core(r, k)));
        core.push_back(std::move(row));
    }
    return json{{"delta", c.delta}, {"core", std::move(core)}};
}

inline Coin coin_from_json(const json& j, const std::string& field,
                           double unitary_tol = kUnitaryTol) {
    if (!j.is_object() || !j.contains("delta") || !j.contains("core"))
        throw ConfigParse("field " + field + ": coin needs \"delta\" and \"core\"");
    const double delta = angle_from_json(j.at("delta"), field + ".delta");
    const json& core = j.at("core");
    if (!core.is_array() || core.empty())
        throw ConfigParse("field " + field + ".core: expected an n x n matrix");
    const int n = static_cast<int>(core.size());
    Eigen::MatrixXcd mat(n, n);
    for (int r = 0; r < n; ++r) {
        const json& row = core[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ConfigParse("field " + field + ".core: row " + std::to_string(r) +
                              " has the wrong length");
        for (int k = 0; k < n; ++k)
            mat(r, k) = complex_from_json(row[static_cast<std::size_t>(k)],
                                          field + ".core[" + std::to_string(r) + "][" +
                                              std::to_string(k) + "]");
    }
    return make_coin(delta, std::move(mat), unitary_tol);
}

inline json profile_to_json(const CoinProfile& p) {
    json middle = json::array();
    for (const Coin& c : p.middle) middle.push_back(coin_to_json(c));
    return json{{"n", p.n},
                {"x_minus", p.x_minus},
                {"x_plus", p.x_plus},
                {"left", coin_to_json(p.left)},
                {"middle", std::move(middle)},
                {"right", coin_to_json(p.right)}};
}

inline CoinProfile profile_from_json(const json& j,
                                     double unitary_tol = kUnitaryTol) {
    for (const char* key : {"n", "x_minus", "x_plus", "left", "middle", "right"})
        if (!j.contains(key))
            throw ConfigParse(std::string("profile is missing field \"") + key + "\"");
    if (!j.at("x_minus").is_number_integer() || !j.at("x_plus").is_number_integer())
        throw ConfigParse("fields x_minus / x_plus must be integers");
    const int x_minus = j.at("x_minus").get<int>();
    const int x_plus = j.at("x_plus").get<int>();
    Coin left = coin_from_json(j.at("left"), "left", unitary_tol);
    Coin right = coin_from_json(j.at("right"), "right", unitary_tol);
    const json& mid = j.at("middle");
    if (!mid.is_array()) throw ConfigParse("field middle: expected an array of coins");
    std::vector<Coin> middle;
    middle.reserve(mid.size());
    for (std::size_t i = 0; i < mid.size(); ++i)
        middle.push_back(coin_from_json(mid[i], "middle[" + std::to_string(i) + "]",
                                        unitary_tol));
    CoinProfile p = make_profile(std::move(left), std::move(middle), std::move(right),
                                 x_minus, x_plus);
    if (!j.at("n").is_number_integer() || j.at("n").get<int>() != p.n)
        throw ConfigParse("field n disagrees with the coin dimensions");
    return p;
}

inline std::string distribution_csv(const Distribution& d,
                                    const std::string& config_echo = "") {
    std::string out;
    if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
    out += "x,prob\n";
    for (int x = d.lo; x <= d.hi(); ++x)
        out += std::to_string(x) + "," + format_double(d.at(x)) + "\n";
    return out;
}

inline json distribution_json(const Distribution& d) {
    json arr = json::array();
    for (int x = d.lo; x <= d.hi(); ++x)
        arr.push_back(json::array({x, d.at(x)}));
    return arr;
}

inline json grover_model_json(const TwoPhaseOneDefect& m) {
    return json{{"theta_m", m.m.theta}, {"delta_m", m.m.delta},
                {"theta_o", m.o.theta}, {"delta_o", m.o.delta},
                {"theta_p", m.p.theta}, {"delta_p", m.p.delta}};
}

inline json spectrum_report_json(const SpectrumReport& rep) {
    json entries = json::array();
    for (const SpectrumEntry& e : rep.entries) {
        json item{{"phase_re", e.phase.real()},
                  {"phase_im", e.phase.imag()},
                  {"lambda_radians", e.lambda},
                  {"source", to_string(e.source)},
                  {"residual", e.resid ? json(*e.resid) : json(nullptr)},
                  {"flagged", e.flagged}};
        if (!e.note.empty()) item["note"] = e.note;
        entries.push_back(std::move(item));
    }
    json out{{"entries", std::move(entries)}, {"complete", rep.complete}};
    if (rep.model) out["model"] = grover_model_json(*rep.model);
    if (!rep.note.empty()) out["note"] = rep.note;
    return out;
}

inline json eigen_test_report_json(double lambda, const EigenvalueTest& t,
                                   json residual = nullptr) {
    json phi = nullptr;
    if (t.phi)
        phi = json::array({complex_to_json((*t.phi)(0)), complex_to_json((*t.phi)(1))});
    return json{{"lambda", lambda},
                {"pass", t.is_eigenvalue},
                {"phi", std::move(phi)},
                {"zeta_lt_inf", complex_to_json(t.detail.zeta_lt_inf)},
                {"zeta_gt_minf", complex_to_json(t.detail.zeta_gt_minf)},
                {"residual", std::move(residual)}};
}

inline std::string eigenvector_csv(const State& s,
                                   const std::string& config_echo = "") {
    std::string out;
    if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
    out += "x,comp,re,im\n";
    for (int x = s.lo(); x <= s.hi(); ++x)
        for (int k = 0; k < s.n(); ++k) {
            const cplx v = s.cref(x, k);
            out += std::to_string(x) + "," + std::to_string(k + 1) + "," +
                   format_double(v.real()) + "," + format_double(v.imag()) + "\n";
        }
    return out;
}

inline std::string series_csv(const ReturnSeries& rs,
                              const std::string& config_echo = "") {
    std::string out;
    if (!config_echo.empty()) out += "# config: " + config_echo + "\n";
    out += "t,re,im\n";
    for (int t = 0; t < rs.horizon(); ++t) {
        const cplx v = rs.f[static_cast<std::size_t>(t)];
        out += std::to_string(t) + "," + format_double(v.real()) + "," +
               format_double(v.imag()) + "\n";
    }
    return out;
}

inline json peaks_json(const std::vector<SpectralPeak>& peaks) {
    json arr = json::array();
    for (const SpectralPeak& p : peaks)
        arr.push_back(json{{"lambda", p.lambda}, {"weight", p.weight}});
    return arr;
}

}  // namespace qwalk
