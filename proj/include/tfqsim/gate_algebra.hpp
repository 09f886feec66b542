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
 * Ideal gate matrices: generalized Pauli X and Z, the d^2 Weyl operators,
 * and the frequency-controlled two-qudit gates (CINC, SUM, XOR, SWAP).
 */

#pragma once

#include "tfqsim/qudit_state.hpp"

#include <numbers>
#include <string>
#include <vector>

namespace tfqsim {

inline int mod(int a, int d) {
    int r = a % d;
    return r < 0 ? r + d : r;
}

/// exp(2 pi i k / d)
inline Complex root_of_unity(int k, int d) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(mod(k, d)) / static_cast<double>(d);
    return std::polar(1.0, angle);
}

namespace detail {

inline void require_dim(int d) {
    if (d < 2) {
        throw std::invalid_argument("qudit dimension must be >= 2, got " + std::to_string(d));
    }
}

inline void require_equal_dims(QuditDims dims) {
    if (dims.freq() != dims.time()) {
        throw std::invalid_argument("gate requires d_f == d_t");
    }
}

/// Builds the two-qudit permutation |m,n> -> |m', n'> given by `target`.
template <class Map> GateMatrix permutation_gate(QuditDims dims, Map target) {
    const int n_total = dims.total();
    CMatrix u = CMatrix::Zero(n_total, n_total);
    for (int m = 0; m < dims.freq(); ++m) {
        for (int n = 0; n < dims.time(); ++n) {
            auto [mo, no] = target(m, n);
            u(dims.index(mo, no), dims.index(m, n)) = 1.0;
        }
    }
    return GateMatrix(std::move(u), true);
}

} // namespace detail

/// Cyclic shift X|n> = |n+1 mod d>.
inline GateMatrix generalized_x(int d) {
    detail::require_dim(d);
    CMatrix x = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        x(mod(n + 1, d), n) = 1.0;
    }
    return GateMatrix(std::move(x), true);
}

/// Phase gate Z|n> = exp(2 pi i n / d)|n>.
inline GateMatrix generalized_z(int d) {
    detail::require_dim(d);
    CMatrix z = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        z(n, n) = root_of_unity(n, d);
    }
    return GateMatrix(std::move(z), true);
}

/// Weyl operator label Z^a X^b. The flat index a*d + b enumerates
/// I, X, X^2, Z, ZX, ZX^2, Z^2, Z^2X, Z^2X^2 for d = 3.
struct WeylIndex {
    int a = 0; ///< Z power
    int b = 0; ///< X power

    int flat(int d) const { return a * d + b; }
    static WeylIndex from_flat(int k, int d) { return {k / d, k % d}; }
};

inline GateMatrix weyl(int a, int b, int d) {
    detail::require_dim(d);
    if (a < 0 || a >= d || b < 0 || b >= d) {
        throw std::out_of_range("Weyl index (" + std::to_string(a) + "," + std::to_string(b) + ") outside 0.." +
                                std::to_string(d - 1));
    }
    return generalized_z(d).pow(a) * generalized_x(d).pow(b);
}

inline GateMatrix weyl(WeylIndex w, int d) { return weyl(w.a, w.b, d); }

/// All d^2 Weyl operators in flat-index order.
inline std::vector<GateMatrix> weyl_basis(int d) {
    std::vector<GateMatrix> out;
    out.reserve(static_cast<std::size_t>(d * d));
    for (int k = 0; k < d * d; ++k) {
        out.push_back(weyl(WeylIndex::from_flat(k, d), d));
    }
    return out;
}

/// Controlled increment: X on the time qudit only when the frequency qudit
/// equals `control_value`.
inline GateMatrix cinc(QuditDims dims, int control_value) {
    if (control_value < 0 || control_value >= dims.freq()) {
        throw std::out_of_range("CINC control value " + std::to_string(control_value) + " outside 0.." +
                                std::to_string(dims.freq() - 1));
    }
    const int dt = dims.time();
    return detail::permutation_gate(dims, [&](int m, int n) {
        return std::pair{m, m == control_value ? mod(n + 1, dt) : n};
    });
}

inline GateMatrix cinc(QuditDims dims) { return cinc(dims, dims.freq() - 1); }

/// |m>_f|n>_t -> |m>_f|n+m mod d>_t
inline GateMatrix sum_gate(QuditDims dims) {
    detail::require_equal_dims(dims);
    const int d = dims.time();
    return detail::permutation_gate(dims, [&](int m, int n) { return std::pair{m, mod(n + m, d)}; });
}

/// |m>_f|n>_t -> |m>_f|n-m mod d>_t
inline GateMatrix xor_gate(QuditDims dims) {
    detail::require_equal_dims(dims);
    const int d = dims.time();
    return detail::permutation_gate(dims, [&](int m, int n) { return std::pair{m, mod(n - m, d)}; });
}

/// |m>_f|n>_t -> |n>_f|m>_t
inline GateMatrix swap_gate(QuditDims dims) {
    detail::require_equal_dims(dims);
    return detail::permutation_gate(dims, [](int m, int n) { return std::pair{n, m}; });
}

/// Gate obtained by renaming frequency bins: P U P^dag with P|m>_f = |perm[m]>_f.
inline GateMatrix relabel_frequency(const GateMatrix &gate, QuditDims dims, const std::vector<int> &perm) {
    if (static_cast<int>(perm.size()) != dims.freq()) {
        throw std::invalid_argument("frequency relabeling must cover every bin");
    }
    CMatrix p = CMatrix::Zero(dims.freq(), dims.freq());
    for (int m = 0; m < dims.freq(); ++m) {
        p(perm[static_cast<std::size_t>(m)], m) = 1.0;
    }
    GateMatrix pf = tensor(GateMatrix(p, true), GateMatrix::identity(dims.time()));
    return pf * gate * pf.adjoint();
}

/// For a permutation gate, the output flat index of each basis input.
/// Throws if a column is not a computational basis vector.
inline std::vector<int> permutation_outcomes(const GateMatrix &gate) {
    std::vector<int> out(static_cast<std::size_t>(gate.dim()));
    for (int c = 0; c < gate.dim(); ++c) {
        int hit = -1;
        for (int r = 0; r < gate.dim(); ++r) {
            double p = std::norm(gate(r, c));
            if (std::abs(p - 1.0) < kAlgebraTol) {
                hit = r;
            } else if (p > kAlgebraTol) {
                hit = -2;
                break;
            }
        }
        if (hit < 0) {
            throw std::invalid_argument("gate column " + std::to_string(c) + " is not a basis state");
        }
        out[static_cast<std::size_t>(c)] = hit;
    }
    return out;
}

/// Ideal gate by name: identity, x, z, cinc, sum, xor, swap. Single-qudit
/// names act on the time qudit.
inline GateMatrix named_gate(const std::string &name, QuditDims dims, int control_value = -1) {
    if (name == "identity") {
        return GateMatrix::identity(dims.total());
    }
    if (name == "x") {
        return tensor(GateMatrix::identity(dims.freq()), generalized_x(dims.time()));
    }
    if (name == "z") {
        return tensor(GateMatrix::identity(dims.freq()), generalized_z(dims.time()));
    }
    if (name == "cinc") {
        return control_value < 0 ? cinc(dims) : cinc(dims, control_value);
    }
    if (name == "sum") {
        return sum_gate(dims);
    }
    if (name == "xor") {
        return xor_gate(dims);
    }
    if (name == "swap") {
        return swap_gate(dims);
    }
    throw std::invalid_argument("unknown gate name '" + name + "'");
}

} // namespace tfqsim
