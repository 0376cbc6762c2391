#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/angles.hpp"
#include "qwalk/coin.hpp"
#include "qwalk/evolution.hpp"
#include "qwalk/profile.hpp"

namespace qwalk {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

inline constexpr double kTolA = 1e-10;         // |A(lambda)| floor
inline constexpr double kTolKer = 1e-8;        // relative singular-value kernel threshold
inline constexpr double kTolGate = 1e-8;       // det/trace gates on the tail matrices
inline constexpr double kTolTraceGap = 1e-10;  // strictness of tr^2 - 4 > 0
inline constexpr double kTolInterior = 1e-12;  // singularity of the loop elimination

// Per-site reduced coefficients of the eigen-relations once the self-loop
// components have been eliminated:
//   z Psi_1(x-1) = A Psi_1(x) + B Psi_n(x)
//   z Psi_n(x+1) = C Psi_1(x) + D Psi_n(x)
//   Psi_k(x)     = E_k Psi_1(x) + F_k Psi_n(x),   k = 2..n-1
// with z = e^{i(lambda - Delta_x)}.
struct ReducedCoefficients {
    cplx A, B, C, D;
    std::vector<cplx> E;  // index 0 <-> component 2
    std::vector<cplx> F;
};

// The repeated-substitution elimination, done as one linear solve of the
// (n-2)-dimensional interior system (z I - M_int) psi_int = a_1 Psi_1 + a_n Psi_n.
inline ReducedCoefficients reduce_coefficients(const Coin& coin, double lambda) {
    const int n = coin.n;
    const int m = n - 2;
    const cplx z = unit_phase(lambda - coin.delta);

    Eigen::MatrixXcd g = -coin.core.block(1, 1, m, m);
    g.diagonal().array() += z;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues()(m - 1);
    if (smin <= kTolInterior)
        throw InteriorSingular(
            "self-loop elimination is singular at lambda=" + std::to_string(lambda) +
            " (smallest singular value " + std::to_string(smin) + ")");

    const Eigen::VectorXcd e = svd.solve(coin.core.block(1, 0, m, 1));
    const Eigen::VectorXcd f = svd.solve(coin.core.block(1, n - 1, m, 1));

    ReducedCoefficients rc;
    rc.E.assign(e.data(), e.data() + m);
    rc.F.assign(f.data(), f.data() + m);
    rc.A = coin.core(0, 0);
    rc.B = coin.core(0, n - 1);
    rc.C = coin.core(n - 1, 0);
    rc.D = coin.core(n - 1, n - 1);
    for (int k = 0; k < m; ++k) {
        rc.A += coin.core(0, k + 1) * rc.E[static_cast<std::size_t>(k)];
        rc.B += coin.core(0, k + 1) * rc.F[static_cast<std::size_t>(k)];
        rc.C += coin.core(n - 1, k + 1) * rc.E[static_cast<std::size_t>(k)];
        rc.D += coin.core(n - 1, k + 1) * rc.F[static_cast<std::size_t>(k)];
    }
    return rc;
}

// 2x2 transfer matrix propagating the boundary pair across site x:
//   [Psi_1(x), Psi_n(x+1)]^t = T_x(lambda) [Psi_1(x-1), Psi_n(x)]^t.
inline Mat2 transfer_matrix(const Coin& coin, double lambda, double tol_a = kTolA) {
    const ReducedCoefficients rc = reduce_coefficients(coin, lambda);
    if (std::abs(rc.A) <= tol_a)
        throw AZero("A(lambda) vanishes at lambda=" + std::to_string(lambda) +
                    " (|A| = " + std::to_string(std::abs(rc.A)) + ")");
    const cplx z = unit_phase(lambda - coin.delta);
    Mat2 t;
    t(0, 0) = z / rc.A;
    t(0, 1) = -rc.B / rc.A;
    t(1, 0) = rc.C / rc.A;
    t(1, 1) = -(rc.B * rc.C - rc.A * rc.D) / (z * rc.A);
    return t;
}

// Large/small eigenvalue pair of a tail transfer matrix, |gt| >= 1 >= |lt|.
struct ZetaPair {
    cplx gt;  // zeta^>
    cplx lt;  // zeta^<
};

inline ZetaPair zeta_pair(const Mat2& t) {
    const cplx det = t.determinant();
    const cplx tr = t.trace();
    if (std::abs(det - cplx(1.0, 0.0)) > kTolGate)
        throw AssumptionViolated("det(T) = 1 gate failed, det = (" +
                                 std::to_string(det.real()) + ", " +
                                 std::to_string(det.imag()) + ")");
    if (std::abs(tr.imag()) > kTolGate)
        throw AssumptionViolated("tr(T) real gate failed, Im tr = " +
                                 std::to_string(tr.imag()));

    const double tau = tr.real();
    const double disc = tau * tau - 4.0;
    if (disc > 0.0) {
        const double root = std::sqrt(disc);
        const double branch = tau > 0.0 ? 1.0 : -1.0;
        return {cplx(0.5 * (tau + branch * root), 0.0),
                cplx(0.5 * (tau - branch * root), 0.0)};
    }
    // |tr| <= 2: both roots sit on the unit circle.  The sign function would
    // return 0 at tau = 0 and collapse the radical; we keep the + branch so
    // that gt + lt = tr and gt * lt = det stay exact.  The eigenvalue test
    // rejects this regime anyway (tr^2 - 4 <= 0).
    const double root = std::sqrt(-disc);
    const double branch = tau >= 0.0 ? 1.0 : -1.0;
    return {cplx(0.5 * tau, 0.5 * branch * root),
            cplx(0.5 * tau, -0.5 * branch * root)};
}

// Gate report for the transfer framework at a given lambda:
//   item 1: A_x(lambda) != 0 for every x (checked on both tails and every
//           middle coin; coins are eventually constant so that is exhaustive),
//   item 2: det(T_{+-inf}) = 1,
//   item 3: tr(T_{+-inf}) real.
struct AssumptionReport {
    bool interior_ok = true;
    bool a_nonzero = false;
    bool det_one = false;
    bool trace_real = false;
    double min_abs_a = 0.0;
    int failed_item = 0;  // 0 = pass, else 1..3
    std::string note;

    bool pass() const { return interior_ok && a_nonzero && det_one && trace_real; }
};

inline AssumptionReport assumption_check(const CoinProfile& p, double lambda,
                                         double tol_a = kTolA) {
    AssumptionReport r;
    double mn = std::numeric_limits<double>::infinity();
    try {
        mn = std::min(mn, std::abs(reduce_coefficients(p.left, lambda).A));
        mn = std::min(mn, std::abs(reduce_coefficients(p.right, lambda).A));
        for (const Coin& c : p.middle)
            mn = std::min(mn, std::abs(reduce_coefficients(c, lambda).A));
    } catch (const InteriorSingular& e) {
        r.interior_ok = false;
        r.failed_item = 1;
        r.note = e.what();
        return r;
    }
    r.min_abs_a = mn;
    r.a_nonzero = mn > tol_a;
    if (!r.a_nonzero) {
        r.failed_item = 1;
        return r;
    }

    const Mat2 tm = transfer_matrix(p.left, lambda, tol_a);
    const Mat2 tp = transfer_matrix(p.right, lambda, tol_a);
    r.det_one = std::abs(tm.determinant() - cplx(1.0, 0.0)) <= kTolGate &&
                std::abs(tp.determinant() - cplx(1.0, 0.0)) <= kTolGate;
    if (!r.det_one) {
        r.failed_item = 2;
        return r;
    }
    r.trace_real = std::abs(tm.trace().imag()) <= kTolGate &&
                   std::abs(tp.trace().imag()) <= kTolGate;
    if (!r.trace_real) {
        r.failed_item = 3;
        return r;
    }
    return r;
}

// T_+ = T_{x_+ - 1} ... T_0  (x_+ >= 1, so at least one factor).
inline Mat2 plus_product(const CoinProfile& p, double lambda, double tol_a = kTolA) {
    Mat2 acc = Mat2::Identity();
    for (int x = 0; x < p.x_plus; ++x)
        acc = transfer_matrix(coin_at(p, x), lambda, tol_a) * acc;
    return acc;
}

// T_- = T_{x_-}^{-1} ... T_{-1}^{-1}  (x_- <= -1, so at least one factor).
inline Mat2 minus_product(const CoinProfile& p, double lambda, double tol_a = kTolA) {
    Mat2 acc = Mat2::Identity();
    for (int x = -1; x >= p.x_minus; --x)
        acc = transfer_matrix(coin_at(p, x), lambda, tol_a).inverse() * acc;
    return acc;
}

// Rank-1 kernel extraction for a 2x2 matrix via SVD.  Returns the right
// singular vector of the smallest singular value when that value is below
// tol_ker * (largest + 1); a zero matrix reports full_kernel.
struct KernelResult {
    std::optional<Vec2> vec;
    bool full_kernel = false;
};

inline KernelResult kernel_vector(const Mat2& m, double tol_ker = kTolKer) {
    Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullV);
    const double s0 = svd.singularValues()(0);
    const double s1 = svd.singularValues()(1);
    KernelResult out;
    if (s0 <= tol_ker) {
        out.full_kernel = true;
        out.vec = Vec2(1.0, 0.0);
        return out;
    }
    if (s1 <= tol_ker * (s0 + 1.0)) out.vec = svd.matrixV().col(1);
    return out;
}

// Everything the kernel-intersection eigenvalue test needs at one lambda,
// computed without throwing so grid scans can sweep freely.
struct KernelDecision {
    AssumptionReport assumption;
    bool trace_cond = false;  // tr(T_{+-inf})^2 - 4 > 0 on both tails
    double gap_plus = 0.0;    // tr(T_inf)^2 - 4
    double gap_minus = 0.0;
    cplx zeta_lt_inf{0.0, 0.0};
    cplx zeta_gt_minf{0.0, 0.0};
    double rel_sigma = std::numeric_limits<double>::infinity();
    double sigma_large = 0.0;
    Vec2 candidate = Vec2::Zero();  // minimiser of the stacked kernel system
    bool usable = false;            // assumption && trace_cond
};

inline KernelDecision kernel_decision(const CoinProfile& p, double lambda,
                                      double tol_a = kTolA) {
    KernelDecision d;
    d.assumption = assumption_check(p, lambda, tol_a);
    if (!d.assumption.pass()) return d;

    const Mat2 t_minf = transfer_matrix(p.left, lambda, tol_a);
    const Mat2 t_inf = transfer_matrix(p.right, lambda, tol_a);
    const double tr_m = t_minf.trace().real();
    const double tr_p = t_inf.trace().real();
    d.gap_minus = tr_m * tr_m - 4.0;
    d.gap_plus = tr_p * tr_p - 4.0;
    d.trace_cond = d.gap_minus > kTolTraceGap && d.gap_plus > kTolTraceGap;
    if (!d.trace_cond) return d;

    d.zeta_lt_inf = zeta_pair(t_inf).lt;
    d.zeta_gt_minf = zeta_pair(t_minf).gt;

    const Mat2 m_plus = (t_inf - d.zeta_lt_inf * Mat2::Identity()) *
                        plus_product(p, lambda, tol_a);
    const Mat2 m_minus = (t_minf - d.zeta_gt_minf * Mat2::Identity()) *
                         minus_product(p, lambda, tol_a);

    Eigen::Matrix<cplx, 4, 2> stack;
    stack.topRows<2>() = m_plus;
    stack.bottomRows<2>() = m_minus;
    Eigen::JacobiSVD<Eigen::Matrix<cplx, 4, 2>> svd(stack, Eigen::ComputeFullV);
    d.sigma_large = svd.singularValues()(0);
    d.rel_sigma = svd.singularValues()(1) / (d.sigma_large + 1.0);
    d.candidate = svd.matrixV().col(1);
    d.usable = true;
    return d;
}

// Point-spectrum membership of e^{i lambda}: both tails must be hyperbolic
// (tr^2 - 4 > 0) and ker((T_inf - zeta^<_inf) T_+) must meet
// ker((T_-inf - zeta^>_-inf) T_-) nontrivially.
struct EigenvalueTest {
    bool is_eigenvalue = false;
    std::optional<Vec2> phi;  // unit seed vector on success
    bool marginal = false;    // decision fell inside the tolerance band
    KernelDecision detail;
};

inline EigenvalueTest eigenvalue_test(const CoinProfile& p, double lambda,
                                      double tol_ker = kTolKer,
                                      double tol_a = kTolA) {
    KernelDecision d = kernel_decision(p, lambda, tol_a);
    if (!d.assumption.pass())
        throw AssumptionViolated("eigenvalue test needs the transfer framework "
                                 "gates to pass (failed item " +
                                 std::to_string(d.assumption.failed_item) + ")");
    EigenvalueTest out;
    out.detail = d;
    if (!d.trace_cond) return out;
    out.is_eigenvalue = d.rel_sigma <= tol_ker;
    out.marginal = d.rel_sigma >= 0.1 * tol_ker && d.rel_sigma <= 10.0 * tol_ker;
    if (out.is_eigenvalue) out.phi = d.candidate;
    return out;
}

// Reduced two-component vector on a window, with the tail multipliers kept
// for extrapolation past the window edges.
enum class TailKind {
    geometric,      // past the cuts, multiply by zeta^<_inf / divide by zeta^>_-inf
    transfer_power  // past the cuts, keep applying the (constant) tail transfer
};

struct ReducedVector {
    int lo = 0;
    int hi = 0;
    std::vector<Vec2> values;
    cplx zeta_lt_inf{0.0, 0.0};
    cplx zeta_gt_minf{0.0, 0.0};
    Vec2 phi = Vec2::Zero();
    int x_minus = 0;
    int x_plus = 0;
    TailKind kind = TailKind::geometric;

    const Vec2& at(int x) const { return values[static_cast<std::size_t>(x - lo)]; }
};

inline ReducedVector build_reduced_vector(const CoinProfile& p, double lambda,
                                          const Vec2& phi, int lo, int hi,
                                          TailKind kind = TailKind::geometric,
                                          double tol_a = kTolA) {
    if (!(lo <= p.x_minus && hi >= p.x_plus))
        throw BadDimension("reduced-vector window must contain [x_minus, x_plus]");

    ReducedVector rv;
    rv.lo = lo;
    rv.hi = hi;
    rv.x_minus = p.x_minus;
    rv.x_plus = p.x_plus;
    rv.kind = kind;
    rv.phi = phi;
    rv.values.assign(static_cast<std::size_t>(hi - lo + 1), Vec2::Zero());

    if (kind == TailKind::geometric) {
        rv.zeta_lt_inf = zeta_pair(transfer_matrix(p.right, lambda, tol_a)).lt;
        rv.zeta_gt_minf = zeta_pair(transfer_matrix(p.left, lambda, tol_a)).gt;
    } else {
        // Best-effort multipliers; power mode never uses them to build values.
        try {
            rv.zeta_lt_inf = zeta_pair(transfer_matrix(p.right, lambda, tol_a)).lt;
            rv.zeta_gt_minf = zeta_pair(transfer_matrix(p.left, lambda, tol_a)).gt;
        } catch (const Error&) {
        }
    }

    auto value = [&](int x) -> Vec2& { return rv.values[static_cast<std::size_t>(x - lo)]; };
    value(0) = phi;

    const Mat2 t_right = transfer_matrix(p.right, lambda, tol_a);
    const Mat2 t_left_inv = transfer_matrix(p.left, lambda, tol_a).inverse();

    for (int x = 1; x <= hi; ++x) {
        if (x <= p.x_plus)
            value(x) = transfer_matrix(coin_at(p, x - 1), lambda, tol_a) * value(x - 1);
        else if (kind == TailKind::geometric)
            value(x) = rv.zeta_lt_inf * value(x - 1);
        else
            value(x) = t_right * value(x - 1);
    }
    for (int x = -1; x >= lo; --x) {
        if (x >= p.x_minus)
            value(x) = transfer_matrix(coin_at(p, x), lambda, tol_a).inverse() * value(x + 1);
        else if (kind == TailKind::geometric)
            value(x) = value(x + 1) / rv.zeta_gt_minf;
        else
            value(x) = t_left_inv * value(x + 1);
    }
    return rv;
}

// One step of tilde-Psi past the right window edge, for the slot-1 lookahead.
inline Vec2 reduced_vector_right_ext(const CoinProfile& p, double lambda,
                                     const ReducedVector& rv, double tol_a = kTolA) {
    if (rv.kind == TailKind::geometric && rv.hi >= rv.x_plus)
        return rv.zeta_lt_inf * rv.at(rv.hi);
    return transfer_matrix(coin_at(p, rv.hi), lambda, tol_a) * rv.at(rv.hi);
}

// Inverse of the reduction map iota: rebuilds the n-component amplitudes,
//   Psi_1(x) = tilde_1(x+1),  Psi_n(x) = tilde_2(x),
//   Psi_k(x) = E_k tilde_1(x+1) + F_k tilde_2(x)   for the self-loop slots.
inline State inverse_iota(const CoinProfile& p, double lambda,
                          const ReducedVector& rv, double tol_a = kTolA) {
    const int n = p.n;
    State out(n, rv.lo, rv.hi);
    const Vec2 right_ext = reduced_vector_right_ext(p, lambda, rv, tol_a);
    for (int x = rv.lo; x <= rv.hi; ++x) {
        const Vec2& here = rv.at(x);
        const Vec2& next = (x + 1 <= rv.hi) ? rv.at(x + 1) : right_ext;
        const ReducedCoefficients rc = reduce_coefficients(coin_at(p, x), lambda);
        out.ref(x, 0) = next(0);
        for (int k = 1; k + 1 < n; ++k)
            out.ref(x, k) = rc.E[static_cast<std::size_t>(k - 1)] * next(0) +
                            rc.F[static_cast<std::size_t>(k - 1)] * here(1);
        out.ref(x, n - 1) = here(1);
    }
    return out;
}

// Forward map iota on a window: (iota Psi)(x) = [Psi_1(x-1), Psi_n(x)]^t.
inline std::vector<Vec2> iota(const State& psi) {
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(psi.hi() - psi.lo() + 1));
    for (int x = psi.lo(); x <= psi.hi(); ++x)
        out.emplace_back(psi.at(x - 1, 0), psi.at(x, psi.n() - 1));
    return out;
}

// Relative eigen-equation residual ||U psi - e^{i lambda} psi|| / ||psi||.
// The two window-boundary sites are excluded from the numerator: the walk is
// local with range one, so those are the only sites polluted by truncation.
inline double residual(const CoinProfile& p, double lambda, const State& psi) {
    const double nrm = std::sqrt(state_norm2(psi));
    if (nrm <= 0.0) throw ZeroVector("residual of the zero vector");
    const State stepped = step(p, psi);
    const cplx ph = unit_phase(lambda);
    double acc = 0.0;
    for (int x = psi.lo() + 1; x <= psi.hi() - 1; ++x)
        for (int k = 0; k < psi.n(); ++k)
            acc += std::norm(stepped.at(x, k) - ph * psi.cref(x, k));
    return std::sqrt(acc) / nrm;
}

// Normalized eigenvector on [-window, window] for a lambda that passes the
// eigenvalue test, together with its residual.
struct Eigenpair {
    State vec;
    double resid = 0.0;
    EigenvalueTest test;
};

inline Eigenpair reconstruct_eigenvector(const CoinProfile& p, double lambda,
                                         int window = 200) {
    EigenvalueTest t = eigenvalue_test(p, lambda);
    if (!t.is_eigenvalue)
        throw OutOfDomain("lambda=" + std::to_string(lambda) +
                          " does not pass the eigenvalue test (decisive sigma " +
                          std::to_string(t.detail.rel_sigma) + ")");
    const ReducedVector rv =
        build_reduced_vector(p, lambda, *t.phi, -window, window, TailKind::geometric);
    State vec = normalized(inverse_iota(p, lambda, rv));
    Eigenpair out{std::move(vec), 0.0, std::move(t)};
    out.resid = residual(p, lambda, out.vec);
    return out;
}

}  // namespace qwalk
