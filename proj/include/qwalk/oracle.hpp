#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwalk/evolution.hpp"

namespace qwalk {

// Return-amplitude samples f(t) = <psi0, U^t psi0>.  Atoms of the spectral
// measure of U show up as persistent oscillations; their phases are the
// eigenphases.
struct ReturnSeries {
    std::vector<cplx> f;
    int horizon() const { return static_cast<int>(f.size()); }
};

inline ReturnSeries return_series(const CoinProfile& p, const State& psi0,
                                  int horizon) {
    if (horizon < 64) throw BadDimension("return series needs a horizon >= 64");
    if (std::abs(state_norm2(psi0) - 1.0) > 1e-12)
        throw OutOfDomain("return series expects a normalized initial state");
    ReturnSeries rs;
    rs.f.resize(static_cast<std::size_t>(horizon));
    State cur = psi0;
    rs.f[0] = inner_product(psi0, psi0);
    for (int t = 1; t < horizon; ++t) {
        cur = step(p, cur);
        rs.f[static_cast<std::size_t>(t)] = inner_product(psi0, cur);
    }
    return rs;
}

// (1/T) |sum_t f(t) e^{-i lambda t}|: the Cesaro estimate of the squared
// overlap of psi0 with the lambda eigenspace.
inline double series_weight(const ReturnSeries& rs, double lambda) {
    const int horizon = rs.horizon();
    cplx acc(0.0, 0.0);
    const cplx w = unit_phase(-lambda);
    cplx ph(1.0, 0.0);
    for (int t = 0; t < horizon; ++t) {
        acc += rs.f[static_cast<std::size_t>(t)] * ph;
        ph *= w;
    }
    return std::abs(acc) / static_cast<double>(horizon);
}

struct SpectralPeak {
    double lambda = 0.0;
    double weight = 0.0;
};

// Windowed-DFT peak finder: local maxima of the weight over the T-bin grid
// that clear the threshold, refined by quadratic interpolation of the peak.
inline std::vector<SpectralPeak> spectral_peaks(const ReturnSeries& rs,
                                                double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw OutOfDomain("peak threshold must sit in (0, 1)");
    const int horizon = rs.horizon();
    const double h = kTwoPi / horizon;
    std::vector<double> mag(static_cast<std::size_t>(horizon));
    for (int j = 0; j < horizon; ++j)
        mag[static_cast<std::size_t>(j)] = series_weight(rs, j * h);

    std::vector<SpectralPeak> peaks;
    for (int j = 0; j < horizon; ++j) {
        const double here = mag[static_cast<std::size_t>(j)];
        if (here <= threshold) continue;
        const double prev = mag[static_cast<std::size_t>((j + horizon - 1) % horizon)];
        const double next = mag[static_cast<std::size_t>((j + 1) % horizon)];
        if (!(here >= prev && here > next)) continue;
        const double denom = prev - 2.0 * here + next;
        double shift = 0.0;
        if (denom != 0.0) shift = 0.5 * (prev - next) / denom;
        shift = std::clamp(shift, -0.5, 0.5);
        SpectralPeak pk;
        pk.lambda = wrap_two_pi((j + shift) * h);
        pk.weight = series_weight(rs, pk.lambda);
        peaks.push_back(pk);
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const SpectralPeak& a, const SpectralPeak& b) {
                  return a.lambda < b.lambda;
              });
    return peaks;
}

inline double overlap_weight(const CoinProfile& p, const State& psi0,
                             double lambda, int horizon) {
    return series_weight(return_series(p, psi0, horizon), lambda);
}

}  // namespace qwalk
