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

// Independent helpers for tests: random unitaries and states, plus
// hand-written reference matrices.

#pragma once

#include "tfqsim/qudit_state.hpp"

#include <complex>
#include <numbers>
#include <random>

namespace tfqsim::testing {

inline CMatrix random_complex(int rows, int cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            m(r, c) = Complex{g(rng), g(rng)};
        }
    }
    return m;
}

/// Haar-ish random unitary from the QR decomposition of a Gaussian matrix.
inline CMatrix random_unitary(int n, std::mt19937_64 &rng) {
    Eigen::HouseholderQR<CMatrix> qr(random_complex(n, n, rng));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

inline CVector random_unit_vector(int n, std::mt19937_64 &rng) {
    CVector v = random_complex(n, 1, rng);
    return v / v.norm();
}

/// Random full-rank density matrix A A^dag / Tr.
inline CMatrix random_density(int n, std::mt19937_64 &rng) {
    CMatrix a = random_complex(n, n, rng);
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    return (rho + rho.adjoint()) / 2.0;
}

inline Complex omega3() { return std::polar(1.0, 2.0 * std::numbers::pi / 3.0); }

/// Permutation matrix sending column j to row target(j).
template <class Fn> RMatrix permutation(int n, Fn target) {
    RMatrix p = RMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        p(target(j), j) = 1.0;
    }
    return p;
}

} // namespace tfqsim::testing
