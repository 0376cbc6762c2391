#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "qwalk/angles.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kDiagonalTol = 1e-12;

// One site's n-state coin, split into a global phase and a unitary core:
// C = e^{i delta} * core.  Components 2..n-1 are self-loops; their diagonal
// core entries must stay off the unit circle or the loop elimination that
// the transfer engine relies on becomes singular.
struct Coin {
    double delta = 0.0;
    Eigen::MatrixXcd core;
    Eigen::MatrixXcd full;  // e^{i delta} * core, cached
    int n = 0;
};

inline double unitarity_defect(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd g = m * m.adjoint();
    g -= Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return g.cwiseAbs().maxCoeff();
}

inline Coin make_coin(double delta, Eigen::MatrixXcd core,
                      double unitary_tol = kUnitaryTol) {
    if (core.rows() != core.cols())
        throw BadDimension("coin core must be square, got " +
                           std::to_string(core.rows()) + "x" +
                           std::to_string(core.cols()));
    const int n = static_cast<int>(core.rows());
    if (n < 3)
        throw BadDimension("coin needs n >= 3 states, got " + std::to_string(n));

    const double defect = unitarity_defect(core);
    if (defect > unitary_tol)
        throw NonUnitary("coin core unitarity defect " + std::to_string(defect) +
                         " exceeds tolerance");

    // Only the interior diagonal is constrained; the corner entries may sit
    // on the unit circle (the A(lambda)=0 path copes with those).
    for (int k = 1; k + 1 < n; ++k) {
        if (std::abs(1.0 - std::abs(core(k, k))) <= kDiagonalTol)
            throw ForbiddenDiagonal("interior diagonal entry (" +
                                    std::to_string(k + 1) + "," +
                                    std::to_string(k + 1) +
                                    ") has unit modulus");
    }

    Coin c;
    c.delta = delta;
    c.full = unit_phase(delta) * core;
    c.core = std::move(core);
    c.n = n;
    return c;
}

}  // namespace qwalk
