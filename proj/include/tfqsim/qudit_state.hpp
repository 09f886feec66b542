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
 * State and matrix types for a frequency-bin qudit (control) hyper-encoded
 * with a time-bin qudit (target) in one photon.
 *
 * Every two-qudit vector and matrix in this library uses frequency-major
 * indexing: |m>_f |n>_t lives at flat index m * d_t + n.
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace tfqsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

/// Tolerance for algebraic identities (unitarity, normalization, hermiticity).
inline constexpr double kAlgebraTol = 1e-10;

inline double max_abs(const CMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Dimensions of the frequency (control) and time (target) qudits.
class QuditDims {
  public:
    QuditDims(int freq, int time) : freq_{freq}, time_{time} {
        if (freq < 2 || time < 2) {
            throw std::invalid_argument("qudit dimensions must be >= 2, got d_f=" + std::to_string(freq) +
                                        " d_t=" + std::to_string(time));
        }
    }

    int freq() const { return freq_; }
    int time() const { return time_; }
    int total() const { return freq_ * time_; }

    int index(int m, int n) const {
        if (m < 0 || m >= freq_ || n < 0 || n >= time_) {
            throw std::out_of_range("basis index (" + std::to_string(m) + "," + std::to_string(n) +
                                    ") outside dims");
        }
        return m * time_ + n;
    }

    /// Inverse of index(): returns (frequency index, time index).
    std::pair<int, int> decode(int i) const {
        if (i < 0 || i >= total()) {
            throw std::out_of_range("flat index " + std::to_string(i) + " outside dims");
        }
        return {i / time_, i % time_};
    }

    bool operator==(const QuditDims &) const = default;

  private:
    int freq_;
    int time_;
};

/// Dense square matrix with an optional, verified unitarity flag.
class GateMatrix {
  public:
    explicit GateMatrix(CMatrix entries, bool unitary = false) : entries_{std::move(entries)}, unitary_{unitary} {
        if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
            throw std::invalid_argument("gate matrix must be square and non-empty");
        }
        if (unitary_) {
            const auto n = entries_.rows();
            double err = max_abs(entries_.adjoint() * entries_ - CMatrix::Identity(n, n));
            if (!(err < kAlgebraTol)) {
                throw std::invalid_argument("matrix flagged unitary but |U^dag U - I|_max = " + std::to_string(err));
            }
        }
    }

    static GateMatrix identity(int dim) { return GateMatrix(CMatrix::Identity(dim, dim), true); }

    int dim() const { return static_cast<int>(entries_.rows()); }
    const CMatrix &entries() const { return entries_; }
    bool is_unitary() const { return unitary_; }
    Complex operator()(int row, int col) const { return entries_(row, col); }

    GateMatrix adjoint() const { return GateMatrix(entries_.adjoint(), unitary_); }

    GateMatrix pow(int k) const {
        if (k < 0) {
            return adjoint().pow(-k);
        }
        CMatrix out = CMatrix::Identity(dim(), dim());
        for (int i = 0; i < k; ++i) {
            out = out * entries_;
        }
        return GateMatrix(std::move(out), unitary_);
    }

    friend GateMatrix operator*(const GateMatrix &a, const GateMatrix &b) {
        if (a.dim() != b.dim()) {
            throw std::invalid_argument("gate dimension mismatch in product");
        }
        return GateMatrix(a.entries_ * b.entries_, a.unitary_ && b.unitary_);
    }

  private:
    CMatrix entries_;
    bool unitary_;
};

/// Normalized two-qudit amplitude vector.
class PureState {
  public:
    PureState(QuditDims dims, CVector amplitudes) : dims_{dims}, amps_{std::move(amplitudes)} {
        if (amps_.size() != dims_.total()) {
            throw std::invalid_argument("amplitude vector length does not match d_f * d_t");
        }
        double norm = amps_.squaredNorm();
        if (std::abs(norm - 1.0) > kAlgebraTol) {
            throw std::domain_error("state is not normalized: |a|^2 = " + std::to_string(norm));
        }
    }

    const QuditDims &dims() const { return dims_; }
    const CVector &amplitudes() const { return amps_; }
    Complex operator[](int i) const { return amps_(i); }
    double norm() const { return amps_.norm(); }

  private:
    QuditDims dims_;
    CVector amps_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
  public:
    explicit DensityMatrix(CMatrix entries) : rho_{std::move(entries)} {
        if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
            throw std::invalid_argument("density matrix must be square and non-empty");
        }
        if (max_abs(rho_ - rho_.adjoint()) > kAlgebraTol) {
            throw std::domain_error("density matrix is not Hermitian");
        }
        if (std::abs(rho_.trace() - Complex{1.0, 0.0}) > kAlgebraTol) {
            throw std::domain_error("density matrix trace is not 1");
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho_, Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -kAlgebraTol) {
            throw std::domain_error("density matrix has a negative eigenvalue");
        }
    }

    static DensityMatrix from_vector(const CVector &psi) {
        CVector v = psi / psi.norm();
        return DensityMatrix(v * v.adjoint());
    }

    static DensityMatrix maximally_mixed(int dim) {
        return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
    }

    int dim() const { return static_cast<int>(rho_.rows()); }
    const CMatrix &entries() const { return rho_; }

  private:
    CMatrix rho_;
};

inline PureState basis_state(int m, int n, QuditDims dims) {
    CVector v = CVector::Zero(dims.total());
    v(dims.index(m, n)) = 1.0;
    return PureState(dims, std::move(v));
}

/// Kronecker product U_f (x) U_t in frequency-major ordering.
inline GateMatrix tensor(const GateMatrix &freq_gate, const GateMatrix &time_gate) {
    const int df = freq_gate.dim();
    const int dt = time_gate.dim();
    CMatrix out(df * dt, df * dt);
    for (int m = 0; m < df; ++m) {
        for (int mp = 0; mp < df; ++mp) {
            out.block(m * dt, mp * dt, dt, dt) = freq_gate(m, mp) * time_gate.entries();
        }
    }
    return GateMatrix(std::move(out), freq_gate.is_unitary() && time_gate.is_unitary());
}

/// Matrix-vector product without renormalization. Throws std::domain_error when
/// the gate does not preserve the norm of this state.
inline PureState apply(const GateMatrix &gate, const PureState &state) {
    if (gate.dim() != state.dims().total()) {
        throw std::invalid_argument("gate dimension " + std::to_string(gate.dim()) + " does not match state size " +
                                    std::to_string(state.dims().total()));
    }
    return PureState(state.dims(), gate.entries() * state.amplitudes());
}

/// |<a|b>|^2
inline double overlap_probability(const PureState &a, const PureState &b) {
    if (!(a.dims() == b.dims())) {
        throw std::invalid_argument("overlap of states with different dims");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

} // namespace tfqsim
