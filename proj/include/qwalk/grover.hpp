#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/transfer.hpp"

namespace qwalk {

inline constexpr double kTolBoundary = 1e-12;  // guard band for strict inequalities
inline constexpr double kDedupPhase = 1e-9;    // spectrum dedup distance on the circle
inline constexpr double kScanSkipBand = 1e-6;  // half-width of the scan bands at coin phases
inline constexpr double kResidualGate = 1e-8;  // eigenvector acceptance residual

// One-parameter 3x3 Grover coin, c = cos(theta), s = sin(theta), plus a
// global phase.  theta = 0 or pi degenerates (|c| = 1 hits the self-loop
// diagonal constraint).
struct GroverParams {
    double theta = kPi / 2.0;
    double delta = 0.0;

    double c() const { return std::cos(theta); }
    double s() const { return std::sin(theta); }
};

inline Coin grover_coin(const GroverParams& gp) {
    const double s = gp.s();
    if (std::abs(s) <= 1e-12)
        throw DegenerateTheta("grover coin needs theta away from 0 and pi");
    const double c = gp.c();
    const double r = s / std::sqrt(2.0);
    Eigen::MatrixXcd core(3, 3);
    core << cplx(-(1.0 + c) / 2.0), cplx(r), cplx((1.0 - c) / 2.0),
            cplx(r),                cplx(c), cplx(r),
            cplx((1.0 - c) / 2.0),  cplx(r), cplx(-(1.0 + c) / 2.0);
    return make_coin(gp.delta, std::move(core));
}

// Closed form of the transfer matrix for the Grover coin.  Matches the
// generic engine on the same coin; det = 1 and the trace
// -2(2cos(lambda-Delta)+1-c)/(1+c) is real for every lambda != Delta.
inline Mat2 grover_transfer(const GroverParams& gp, double lambda,
                            double tol_a = kTolA) {
    const double c = gp.c();
    const cplx z = unit_phase(lambda - gp.delta);
    const cplx a = (1.0 + c) * (1.0 - z) / (2.0 * (z - c));
    if (std::abs(a) <= tol_a)
        throw AZero("grover transfer undefined at lambda = Delta (|A| = " +
                    std::to_string(std::abs(a)) + ")");
    const cplx pre = 1.0 / ((1.0 + c) * (1.0 - z));
    Mat2 t;
    t(0, 0) = 2.0 * z * (z - c) * pre;
    t(0, 1) = -(1.0 - c) * (1.0 + z) * pre;
    t(1, 0) = (1.0 - c) * (1.0 + z) * pre;
    t(1, 1) = -2.0 * (1.0 - c * z) * pre / z;
    return t;
}

// Closed-form spanning vectors of ker(T - zeta^>) and ker(T - zeta^<) for
// e^{i lambda} != +-e^{i Delta}, valid while t2 = cos(lambda-Delta) - c > 0.
struct GroverKernelVectors {
    Vec2 gt;
    Vec2 lt;
};

inline GroverKernelVectors grover_kernel_vectors(const GroverParams& gp,
                                                 double lambda) {
    const double rel = lambda - gp.delta;
    const cplx z = unit_phase(rel);
    if (std::abs(z - cplx(1.0, 0.0)) <= 1e-12 || std::abs(z + cplx(1.0, 0.0)) <= 1e-12)
        throw OutOfDomain("kernel vectors need e^{i lambda} != +-e^{i Delta}");
    const double t1 = 1.0 - std::cos(rel);
    const double t2 = std::cos(rel) - gp.c();
    if (t2 <= 0.0)
        throw OutOfDomain("kernel vectors need cos(lambda - Delta) > c");
    const double root = sgn(std::sin(rel)) * std::sqrt(4.0 * t1 * t2);
    GroverKernelVectors kv;
    kv.gt = Vec2(cplx(t1 + t2, 0.0), cplx(t2 - t1, -root));
    kv.lt = Vec2(cplx(t1 + t2, 0.0), cplx(t2 - t1, root));
    return kv;
}

// Coin C_m for x < 0, C_o at the origin, C_p for x > 0 (cuts fixed at -1, 1).
struct TwoPhaseOneDefect {
    GroverParams m;
    GroverParams o;
    GroverParams p;

    CoinProfile profile() const {
        return make_profile(grover_coin(m), {grover_coin(o)}, grover_coin(p), -1, 1);
    }
};

enum class SpectrumSource { lemma, closed_form, scan };

inline const char* to_string(SpectrumSource s) {
    switch (s) {
        case SpectrumSource::lemma: return "lemma";
        case SpectrumSource::closed_form: return "closed-form";
        case SpectrumSource::scan: return "scan";
    }
    return "?";
}

struct SpectrumEntry {
    cplx phase{1.0, 0.0};
    double lambda = 0.0;  // in [0, 2pi)
    SpectrumSource source = SpectrumSource::closed_form;
    std::optional<State> eigenvector;
    std::optional<double> resid;
    bool flagged = false;
    std::string note;
};

struct SpectrumReport {
    std::vector<SpectrumEntry> entries;
    std::optional<TwoPhaseOneDefect> model;
    bool complete = true;  // false when the closed forms do not cover the shape
    std::string note;

    // Deduplicates on the unit circle; the first entry for a phase wins.
    bool add(SpectrumEntry e) {
        for (const SpectrumEntry& have : entries)
            if (phase_distance(have.lambda, e.lambda) <= kDedupPhase) return false;
        entries.push_back(std::move(e));
        return true;
    }

    void sort_by_lambda() {
        std::sort(entries.begin(), entries.end(),
                  [](const SpectrumEntry& a, const SpectrumEntry& b) {
                      return a.lambda < b.lambda;
                  });
    }

    std::vector<double> lambdas(bool include_flagged = false) const {
        std::vector<double> out;
        for (const SpectrumEntry& e : entries)
            if (include_flagged || !e.flagged) out.push_back(e.lambda);
        return out;
    }
};

namespace detail {

// Two-site tail eigenvector [k, E2 k, 0]^t at x0 and [0, F2 k, k]^t at x0+1,
// normalized; exact for lambda = Delta of the region's coin (E2 = F2 there).
inline State compact_tail_vector(const GroverParams& gp, int x0) {
    const double e2 = gp.s() / (std::sqrt(2.0) * (1.0 - gp.c()));
    const double k = 1.0 / std::sqrt(2.0 + 2.0 * e2 * e2);
    State v(3, x0 - 2, x0 + 3);
    v.ref(x0, 0) = cplx(k, 0.0);
    v.ref(x0, 1) = cplx(e2 * k, 0.0);
    v.ref(x0 + 1, 1) = cplx(e2 * k, 0.0);
    v.ref(x0 + 1, 2) = cplx(k, 0.0);
    return v;
}

// Reconstruction + verification wrapper for a closed-form or scan root.
inline void add_verified(SpectrumReport& rep, const CoinProfile& prof, cplx phase,
                         SpectrumSource src, int window) {
    SpectrumEntry e;
    e.phase = phase;
    e.lambda = wrap_two_pi(std::arg(phase));
    e.source = src;
    if (std::abs(std::abs(phase) - 1.0) > 1e-10) {
        e.flagged = true;
        e.note = "phase is off the unit circle";
        rep.add(std::move(e));
        return;
    }
    try {
        Eigenpair ep = reconstruct_eigenvector(prof, e.lambda, window);
        e.resid = ep.resid;
        if (ep.resid <= kResidualGate) {
            e.eigenvector = std::move(ep.vec);
        } else {
            e.flagged = true;
            e.note = "eigenvector residual above gate";
        }
    } catch (const Error& err) {
        e.flagged = true;
        e.note = err.what();
    }
    rep.add(std::move(e));
}

template <class F>
double golden_minimize(F&& f, double a, double b, double tol = 1e-13,
                       int max_iter = 160) {
    const double gr = 0.61803398874989485;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// The two always-present eigenvalues e^{i Delta_{+-inf}} with their compact
// two-site eigenvectors, placed one site past each cut.  Coinciding tail
// phases are deduplicated.
inline std::vector<SpectrumEntry> tail_phase_eigenpairs(const TwoPhaseOneDefect& model) {
    const CoinProfile prof = model.profile();
    std::vector<SpectrumEntry> out;

    auto build = [&](const GroverParams& gp, int x0) {
        SpectrumEntry e;
        e.lambda = wrap_two_pi(gp.delta);
        e.phase = unit_phase(e.lambda);
        e.source = SpectrumSource::lemma;
        e.eigenvector = detail::compact_tail_vector(gp, x0);
        e.resid = residual(prof, e.lambda, *e.eigenvector);
        return e;
    };

    SpectrumEntry right = build(model.p, prof.x_plus + 1);
    SpectrumEntry left = build(model.m, prof.x_minus - 2);
    out.push_back(std::move(right));
    if (phase_distance(out.front().lambda, left.lambda) > kDedupPhase)
        out.push_back(std::move(left));
    return out;
}

// Closed-form point spectrum for the shapes the theory covers: one-defect
// models (all Deltas equal, c_m = c_p) and the two-phase family (C_o = C_p).
// Every non-tail entry is re-checked through the kernel test and carries a
// reconstructed eigenvector with its residual.
inline SpectrumReport closed_form_spectrum(const TwoPhaseOneDefect& model,
                                           int window = 200) {
    SpectrumReport rep;
    rep.model = model;
    const CoinProfile prof = model.profile();
    for (SpectrumEntry& e : tail_phase_eigenpairs(model)) rep.add(std::move(e));

    auto same_phase = [](double a, double b) { return phase_distance(a, b) <= 1e-12; };
    const double cm = model.m.c(), co = model.o.c(), cp = model.p.c();
    const double so = model.o.s(), sp = model.p.s();

    const bool one_defect = same_phase(model.m.delta, model.p.delta) &&
                            same_phase(model.m.delta, model.o.delta) &&
                            std::abs(cm - cp) <= 1e-12;
    const bool two_phase = same_phase(model.o.delta, model.p.delta) &&
                           std::abs(co - cp) <= 1e-12 && std::abs(so - sp) <= 1e-12;

    if (one_defect) {
        // sigma_p = {e^{i Delta}} plus the lambda_+- pair when c < c_o.
        const double c = cm;
        if (c < co - kTolBoundary) {
            const double rad = 1.0 - c + 2.0 * co - (c + co * co);
            const double den = 1.0 - c + 2.0 * co;
            const double root = std::sqrt(std::max(rad, 0.0));
            for (double sign : {1.0, -1.0}) {
                const cplx phase =
                    cplx(c + co * co, sign * (1.0 + co) * root) / den *
                    unit_phase(model.m.delta);
                detail::add_verified(rep, prof, phase, SpectrumSource::closed_form, window);
            }
        }
        rep.sort_by_lambda();
        return rep;
    }

    if (two_phase) {
        if (same_phase(model.m.delta, model.p.delta)) {
            // Equal tail phases: sigma_p = {e^{i Delta}} and nothing else.
            rep.sort_by_lambda();
            return rep;
        }
        const double alpha = model.m.delta - model.p.delta;
        const double gap = std::sqrt(2.0 * (1.0 - std::cos(alpha)));
        if (std::abs(cm - cp) <= 1e-12) {
            // Candidate phases are +-i (e^{i Delta_p} - e^{i Delta_m}) / gap; the
            // first one has cos(lambda - Delta_m) = r, its antipode has -r.  A
            // candidate is an eigenvalue exactly when its tails are hyperbolic,
            // i.e. when that cosine strictly exceeds c.
            const double c = cm;
            const double r = std::sin(alpha) / gap;
            const bool keep_base = r - c > kTolBoundary;      // cos = r > c
            const bool keep_antipode = -r - c > kTolBoundary;  // cos = -r > c
            const cplx base =
                cplx(0.0, 1.0) * (unit_phase(model.p.delta) - unit_phase(model.m.delta)) / gap;
            if (keep_base)
                detail::add_verified(rep, prof, base, SpectrumSource::closed_form, window);
            if (keep_antipode)
                detail::add_verified(rep, prof, -base, SpectrumSource::closed_form, window);
            rep.sort_by_lambda();
            return rep;
        }
        // Unequal tail cosines: evaluate the candidate quotient and its gates
        // numerically; no completeness claim for this shape.
        const cplx den = (1.0 - cm) * unit_phase(-model.p.delta) -
                         (1.0 - cp) * unit_phase(-model.m.delta);
        const double srad =
            std::sqrt(2.0 * (1.0 - cm) * (1.0 - cp) * (1.0 - std::cos(alpha)));
        for (double sign : {1.0, -1.0}) {
            const cplx cand = cplx(cp - cm, sign * srad) / den;
            const double lam = wrap_two_pi(std::arg(cand));
            const bool gate_sign =
                std::sin(lam - model.p.delta) * std::sin(lam - model.m.delta) <
                -kTolBoundary;
            const bool gate_cos = std::cos(lam - model.m.delta) - cm > kTolBoundary;
            const bool off_tails = phase_distance(lam, model.m.delta) > kDedupPhase &&
                                   phase_distance(lam, model.p.delta) > kDedupPhase;
            if (gate_sign && gate_cos && off_tails)
                detail::add_verified(rep, prof, cand, SpectrumSource::closed_form, window);
        }
        rep.complete = false;
        rep.note = "two-phase candidates with c_m != c_p are gate-checked numerically; "
                   "completeness is not claimed";
        rep.sort_by_lambda();
        return rep;
    }

    rep.complete = false;
    rep.note = "no closed form for this parameter shape; rely on the scan";
    rep.sort_by_lambda();
    return rep;
}

// Closed-form one-defect spectrum from the reduced parameter set.  The point
// spectrum depends on the coins only through their cosines and phases, so a
// canonical theta = acos(c) model is used for the verification pass.
inline SpectrumReport one_defect_spectrum(double c, double c_o, double delta,
                                          int window = 200) {
    if (!(std::abs(c) < 1.0) || !(std::abs(c_o) < 1.0))
        throw OutOfDomain("one-defect spectrum needs |c| < 1 and |c_o| < 1");
    TwoPhaseOneDefect model;
    model.m = {std::acos(c), delta};
    model.o = {std::acos(c_o), delta};
    model.p = {std::acos(c), delta};
    return closed_form_spectrum(model, window);
}

// Closed-form spectrum of the two-phase family (requires C_o = C_p).
inline SpectrumReport two_phase_spectrum(const TwoPhaseOneDefect& model,
                                         int window = 200) {
    if (!(phase_distance(model.o.delta, model.p.delta) <= 1e-12 &&
          std::abs(model.o.c() - model.p.c()) <= 1e-12 &&
          std::abs(model.o.s() - model.p.s()) <= 1e-12))
        throw OutOfDomain("two-phase spectrum needs C_o = C_p");
    return closed_form_spectrum(model, window);
}

// Numeric sweep of the kernel test over [0, 2pi) for an arbitrary profile.
// Bands around the given skip phases are left out (the A = 0 cases are
// covered analytically by the tail eigenpairs and the defect-phase check);
// detected minima of the decisive singular value are refined by
// golden-section bisection and every accepted root is validated through an
// eigenvector residual.
inline SpectrumReport scan_profile(const CoinProfile& prof, int grid_size,
                                   int window = 200,
                                   const std::vector<double>& skip_phases = {}) {
    if (grid_size < 100) throw BadDimension("spectrum scan needs grid_size >= 100");
    SpectrumReport rep;
    const double inf = std::numeric_limits<double>::infinity();

    auto sigma_at = [&](double lam_raw) -> double {
        const double lam = wrap_two_pi(lam_raw);
        for (double b : skip_phases)
            if (phase_distance(lam, b) < kScanSkipBand) return inf;
        const KernelDecision kd = kernel_decision(prof, lam);
        return kd.usable ? kd.rel_sigma : inf;
    };

    const double h = kTwoPi / grid_size;
    std::vector<double> sig(static_cast<std::size_t>(grid_size));
    for (int j = 0; j < grid_size; ++j)
        sig[static_cast<std::size_t>(j)] = sigma_at(j * h);

    for (int j = 0; j < grid_size; ++j) {
        const double here = sig[static_cast<std::size_t>(j)];
        const double prev = sig[static_cast<std::size_t>((j + grid_size - 1) % grid_size)];
        const double next = sig[static_cast<std::size_t>((j + 1) % grid_size)];
        if (!(here < 0.2) || std::isinf(prev) || std::isinf(next)) continue;
        if (!(here <= prev && here < next)) continue;
        const double lam0 = j * h;
        const double lam_min =
            detail::golden_minimize(sigma_at, lam0 - h, lam0 + h);
        const double lam = wrap_two_pi(lam_min);
        const KernelDecision kd = kernel_decision(prof, lam);
        if (!kd.usable || kd.rel_sigma > kTolKer) continue;
        detail::add_verified(rep, prof, unit_phase(lam), SpectrumSource::scan, window);
    }
    rep.sort_by_lambda();
    return rep;
}

inline SpectrumReport spectrum_scan(const TwoPhaseOneDefect& model, int grid_size,
                                    int window = 200) {
    SpectrumReport rep = scan_profile(
        model.profile(), grid_size, window,
        {model.m.delta, model.o.delta, model.p.delta});
    rep.model = model;
    for (SpectrumEntry& e : tail_phase_eigenpairs(model)) rep.add(std::move(e));
    rep.sort_by_lambda();
    return rep;
}

// The defect phase e^{i Delta_o} (Delta_o != Delta) of a one-defect model is
// never an eigenvalue: membership would force [1,1]^t into a tail kernel,
// which the closed-form kernel vectors rule out whenever the cosine gate
// holds, and no square-summable solution exists when it fails.  Kept as an
// executable check to guard against regressions.
inline bool defect_phase_check(const TwoPhaseOneDefect& model, double lambda) {
    if (!(std::abs(model.m.c() - model.p.c()) <= 1e-12 &&
          phase_distance(model.m.delta, model.p.delta) <= 1e-12))
        throw OutOfDomain("defect phase check needs a one-defect tail pair");
    if (phase_distance(lambda, model.m.delta) <= kDedupPhase)
        throw OutOfDomain("defect phase check needs Delta_o != Delta");
    const double c = model.m.c();
    if (!(std::cos(lambda - model.m.delta) - c > 0.0)) return false;
    GroverKernelVectors kv;
    try {
        kv = grover_kernel_vectors(model.m, lambda);
    } catch (const OutOfDomain&) {
        return false;  // e^{i lambda} = -e^{i Delta}: the cosine gate fails there
    }
    auto parallel_to_ones = [](const Vec2& v) {
        return std::abs(v(1) - v(0)) <= 1e-9 * v.norm();
    };
    return parallel_to_ones(kv.lt) || parallel_to_ones(kv.gt);
}

}  // namespace qwalk
