#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qwalk/angles.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

// Finitely supported n-component amplitude field on the integer lattice,
// stored densely on a contiguous window [lo, hi].  Sites outside the window
// are exactly zero.  Treat instances as values: operations return new states.
class State {
  public:
    State(int n, int lo, int hi) : n_(n), lo_(lo), hi_(hi) {
        if (n < 1) throw BadDimension("state needs n >= 1 components");
        if (hi < lo) throw BadDimension("state window is empty");
        amp_.assign(static_cast<std::size_t>(hi - lo + 1) * n, cplx(0.0, 0.0));
    }

    static State point_mass(int n, int x, const std::vector<cplx>& v) {
        if (static_cast<int>(v.size()) != n)
            throw DimensionMismatch("point mass vector has wrong length");
        State s(n, x, x);
        for (int k = 0; k < n; ++k) s.ref(x, k) = v[static_cast<std::size_t>(k)];
        return s;
    }

    int n() const { return n_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }

    bool in_window(int x) const { return x >= lo_ && x <= hi_; }

    cplx at(int x, int k) const {
        if (!in_window(x)) return cplx(0.0, 0.0);
        return amp_[idx(x, k)];
    }

    cplx& ref(int x, int k) { return amp_[idx(x, k)]; }
    const cplx& cref(int x, int k) const { return amp_[idx(x, k)]; }

  private:
    std::size_t idx(int x, int k) const {
        return static_cast<std::size_t>(x - lo_) * n_ + static_cast<std::size_t>(k);
    }

    int n_;
    int lo_;
    int hi_;
    std::vector<cplx> amp_;
};

inline double state_norm2(const State& s) {
    double acc = 0.0;
    for (int x = s.lo(); x <= s.hi(); ++x)
        for (int k = 0; k < s.n(); ++k) acc += std::norm(s.cref(x, k));
    return acc;
}

inline cplx inner_product(const State& a, const State& b) {
    if (a.n() != b.n()) throw DimensionMismatch("inner product of unequal n");
    const int lo = std::max(a.lo(), b.lo());
    const int hi = std::min(a.hi(), b.hi());
    cplx acc(0.0, 0.0);
    for (int x = lo; x <= hi; ++x)
        for (int k = 0; k < a.n(); ++k)
            acc += std::conj(a.cref(x, k)) * b.cref(x, k);
    return acc;
}

inline State add(const State& a, const State& b) {
    if (a.n() != b.n()) throw DimensionMismatch("adding states of unequal n");
    State out(a.n(), std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
    for (int x = out.lo(); x <= out.hi(); ++x)
        for (int k = 0; k < out.n(); ++k) out.ref(x, k) = a.at(x, k) + b.at(x, k);
    return out;
}

inline State scale(const State& s, cplx factor) {
    State out = s;
    for (int x = out.lo(); x <= out.hi(); ++x)
        for (int k = 0; k < out.n(); ++k) out.ref(x, k) *= factor;
    return out;
}

inline State normalized(const State& s) {
    const double nrm = std::sqrt(state_norm2(s));
    if (nrm <= 0.0) throw ZeroVector("cannot normalize the zero state");
    return scale(s, cplx(1.0 / nrm, 0.0));
}

// Same amplitudes on an enlarged window; padding sites are zero.
inline State padded(const State& s, int pad) {
    State out(s.n(), s.lo() - pad, s.hi() + pad);
    for (int x = s.lo(); x <= s.hi(); ++x)
        for (int k = 0; k < s.n(); ++k) out.ref(x, k) = s.cref(x, k);
    return out;
}

}  // namespace qwalk
