// Copyright 2026 The tfqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Process matrices over the Weyl operator basis and the depolarized-gate
 * model used to turn a fringe visibility into a process fidelity.
 *
 *   rho -> sum_{m,n} chi_{mn} U_m rho U_n^dag,   U_k = weyl(k / d, k % d)
 *
 * The d = 3 formulas are the measured case. The general-d forms
 * ((1 - lambda) I / d, (1 + (d^2 - 1) lambda) / d^2, and the matching
 * visibility relation) are extensions that reduce to them at d = 3.
 */

#pragma once

#include "tfqsim/gate_algebra.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace tfqsim {

/// d^2 x d^2 Hermitian chi matrix in Weyl flat-index order.
class ProcessMatrix {
  public:
    ProcessMatrix(int d, CMatrix chi) : d_{d}, chi_{std::move(chi)} {
        if (d < 2 || chi_.rows() != d * d || chi_.cols() != d * d) {
            throw std::invalid_argument("process matrix must be d^2 x d^2");
        }
        if (max_abs(chi_ - chi_.adjoint()) > kAlgebraTol) {
            throw std::domain_error("process matrix is not Hermitian");
        }
    }

    int d() const { return d_; }
    const CMatrix &chi() const { return chi_; }

    /// sum_{mn} chi_mn U_n^dag U_m == I, i.e. the channel preserves trace.
    bool is_trace_preserving(double tol = kAlgebraTol) const {
        const auto basis = weyl_basis(d_);
        CMatrix s = CMatrix::Zero(d_, d_);
        for (int m = 0; m < d_ * d_; ++m) {
            for (int n = 0; n < d_ * d_; ++n) {
                if (chi_(m, n) != Complex{}) {
                    s += chi_(m, n) * basis[n].entries().adjoint() * basis[m].entries();
                }
            }
        }
        return max_abs(s - CMatrix::Identity(d_, d_)) < tol;
    }

  private:
    int d_;
    CMatrix chi_;
};

/// Unitary gate mixed with white noise: rho -> lambda U rho U^dag + (1 - lambda) I / d.
class DepolarizingModel {
  public:
    DepolarizingModel(double lambda, GateMatrix base) : lambda_{lambda}, base_{std::move(base)} {
        if (!(lambda >= 0.0 && lambda <= 1.0)) {
            throw std::domain_error("depolarizing lambda must lie in [0, 1]");
        }
        if (!base_.is_unitary()) {
            throw std::invalid_argument("depolarizing model needs a unitary base gate");
        }
    }

    double lambda() const { return lambda_; }
    const GateMatrix &base() const { return base_; }

  private:
    double lambda_;
    GateMatrix base_;
};

inline DensityMatrix apply_process(const ProcessMatrix &p, const DensityMatrix &rho) {
    if (rho.dim() != p.d()) {
        throw std::invalid_argument("process dimension " + std::to_string(p.d()) + " does not match state dimension " +
                                    std::to_string(rho.dim()));
    }
    const int d = p.d();
    const auto basis = weyl_basis(d);
    CMatrix out = CMatrix::Zero(d, d);
    for (int m = 0; m < d * d; ++m) {
        CMatrix left = basis[m].entries() * rho.entries();
        for (int n = 0; n < d * d; ++n) {
            const Complex c = p.chi()(m, n);
            if (c != Complex{}) {
                out += c * left * basis[n].entries().adjoint();
            }
        }
    }
    // Clean rounding-level anti-Hermitian residue before validation.
    return DensityMatrix((out + out.adjoint()) / 2.0);
}

inline DensityMatrix depolarize(const DepolarizingModel &model, const DensityMatrix &rho) {
    const int d = rho.dim();
    if (model.base().dim() != d) {
        throw std::invalid_argument("depolarizing model dimension does not match state");
    }
    if (std::abs(rho.entries().trace() - Complex{1.0, 0.0}) > kAlgebraTol) {
        throw std::domain_error("depolarize needs a unit-trace state");
    }
    const CMatrix &u = model.base().entries();
    CMatrix out = model.lambda() * u * rho.entries() * u.adjoint() +
                  (1.0 - model.lambda()) / static_cast<double>(d) * CMatrix::Identity(d, d);
    return DensityMatrix((out + out.adjoint()) / 2.0);
}

/// chi of the single Weyl operator with flat index k.
inline ProcessMatrix chi_weyl(int k, int d) {
    if (k < 0 || k >= d * d) {
        throw std::out_of_range("Weyl flat index outside 0..d^2-1");
    }
    CMatrix chi = CMatrix::Zero(d * d, d * d);
    chi(k, k) = 1.0;
    return ProcessMatrix(d, std::move(chi));
}

/// Ideal X gate: the only nonzero element sits at (1, 1), the U_1 = X slot.
inline ProcessMatrix chi_x(int d = 3) { return chi_weyl(WeylIndex{0, 1}.flat(d), d); }

/// lambda chi_X + (1 - lambda) / d^2 I
inline ProcessMatrix chi_depolarizing(double lambda, int d = 3) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::domain_error("depolarizing lambda must lie in [0, 1]");
    }
    const int dd = d * d;
    CMatrix chi = lambda * chi_x(d).chi() + (1.0 - lambda) / static_cast<double>(dd) * CMatrix::Identity(dd, dd);
    return ProcessMatrix(d, std::move(chi));
}

/// Re Tr(chi_ideal chi_actual)
inline double process_fidelity(const ProcessMatrix &ideal, const ProcessMatrix &actual) {
    if (ideal.d() != actual.d()) {
        throw std::invalid_argument("process fidelity of different dimensions");
    }
    return (ideal.chi() * actual.chi()).trace().real();
}

namespace detail {
inline void require_visibility(double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::domain_error("visibility must lie in [0, 1], got " + std::to_string(v));
    }
}
} // namespace detail

/// Fringe visibility of a depolarized X gate probed with a phase ramp and
/// projected on the uniform superposition: V = d lambda / (lambda (d - 2) + 2).
inline double visibility_from_lambda(double lambda, int d = 3) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::domain_error("depolarizing lambda must lie in [0, 1]");
    }
    return d * lambda / (lambda * (d - 2) + 2.0);
}

/// lambda = 2V / (3 - V) for d = 3.
inline double lambda_from_visibility(double v, int d = 3) {
    detail::require_visibility(v);
    return 2.0 * v / (d - v * (d - 2));
}

/// (1 + (d^2 - 1) lambda) / d^2, which is (1 + 5V) / (9 - 3V) for d = 3.
inline double process_fidelity_from_visibility(double v, int d = 3) {
    const double lambda = lambda_from_visibility(v, d);
    const double dd = static_cast<double>(d * d);
    return (1.0 + (dd - 1.0) * lambda) / dd;
}

/// d F_P / d V, for propagating a visibility error bar.
inline double process_fidelity_slope(double v, int d = 3) {
    detail::require_visibility(v);
    // F = (1 + (d^2-1) * 2V / (d - (d-2)V)) / d^2
    const double den = d - (d - 2) * v;
    const double dlambda = 2.0 * d / (den * den);
    return (d * d - 1.0) * dlambda / (d * d);
}

} // namespace tfqsim
