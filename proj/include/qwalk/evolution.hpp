#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "qwalk/profile.hpp"
#include "qwalk/state.hpp"

namespace qwalk {

// Sitewise coin action (C psi)(x) = C_x psi(x).  Window unchanged.
inline State apply_coin(const CoinProfile& p, const State& psi) {
    if (psi.n() != p.n)
        throw DimensionMismatch("state has n=" + std::to_string(psi.n()) +
                                ", profile has n=" + std::to_string(p.n));
    State out(psi.n(), psi.lo(), psi.hi());
    const int n = psi.n();
    for (int x = psi.lo(); x <= psi.hi(); ++x) {
        const Eigen::MatrixXcd& c = coin_at(p, x).full;
        for (int j = 0; j < n; ++j) {
            cplx acc(0.0, 0.0);
            for (int k = 0; k < n; ++k) acc += c(j, k) * psi.cref(x, k);
            out.ref(x, j) = acc;
        }
    }
    return out;
}

// Component 1 moves left, component n moves right, self-loops stay put.
// The window grows by one site on each side so the evolution stays exact.
inline State apply_shift(const State& psi) {
    const int n = psi.n();
    State out(n, psi.lo() - 1, psi.hi() + 1);
    for (int x = out.lo(); x <= out.hi(); ++x) {
        out.ref(x, 0) = psi.at(x + 1, 0);
        for (int k = 1; k + 1 < n; ++k) out.ref(x, k) = psi.at(x, k);
        out.ref(x, n - 1) = psi.at(x - 1, n - 1);
    }
    return out;
}

// One step of U = S C.
inline State step(const CoinProfile& p, const State& psi) {
    return apply_shift(apply_coin(p, psi));
}

inline State evolve(const CoinProfile& p, const State& psi0, long t) {
    if (t < 0) throw BadDimension("evolve needs t >= 0");
    State cur = psi0;
    for (long i = 0; i < t; ++i) cur = step(p, cur);
    return cur;
}

// Per-site finding probabilities mu_t(x) = ||psi(x)||^2.
struct Distribution {
    int lo = 0;
    std::vector<double> prob;
    long t = 0;

    int hi() const { return lo + static_cast<int>(prob.size()) - 1; }
    double at(int x) const {
        if (x < lo || x > hi()) return 0.0;
        return prob[static_cast<std::size_t>(x - lo)];
    }
    double total() const {
        double acc = 0.0;
        for (double v : prob) acc += v;
        return acc;
    }
};

inline Distribution distribution(const State& psi, long t) {
    Distribution d;
    d.lo = psi.lo();
    d.t = t;
    d.prob.resize(static_cast<std::size_t>(psi.hi() - psi.lo() + 1), 0.0);
    for (int x = psi.lo(); x <= psi.hi(); ++x) {
        double acc = 0.0;
        for (int k = 0; k < psi.n(); ++k) acc += std::norm(psi.cref(x, k));
        d.prob[static_cast<std::size_t>(x - psi.lo())] = acc;
    }
    return d;
}

// Finite-horizon localization witness: (1/T) sum_{t<T} mu_t(0).  An atom in
// the spectral measure keeps this bounded away from zero as T grows.
inline double time_averaged_return(const CoinProfile& p, const State& psi0,
                                   long horizon) {
    if (horizon < 1) throw BadDimension("time_averaged_return needs T >= 1");
    State cur = psi0;
    double acc = 0.0;
    for (long t = 0; t < horizon; ++t) {
        double mu0 = 0.0;
        for (int k = 0; k < cur.n(); ++k) mu0 += std::norm(cur.at(0, k));
        acc += mu0;
        if (t + 1 < horizon) cur = step(p, cur);
    }
    return acc / static_cast<double>(horizon);
}

// The walk's default initial state: the symmetric unit vector
// [1, i, 1]/sqrt(3) at the origin for n=3, a uniform unit vector otherwise.
inline State default_origin_state(int n) {
    std::vector<cplx> v(static_cast<std::size_t>(n));
    if (n == 3) {
        const double r = 1.0 / std::sqrt(3.0);
        v[0] = cplx(r, 0.0);
        v[1] = cplx(0.0, r);
        v[2] = cplx(r, 0.0);
    } else {
        const double r = 1.0 / std::sqrt(static_cast<double>(n));
        for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = cplx(r, 0.0);
    }
    return State::point_mass(n, 0, v);
}

}  // namespace qwalk
