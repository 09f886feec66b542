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
 * Ordered component lists, their propagation, and the post-selected
 * transfer matrices read out on the detection path.
 */

#pragma once

#include "tfqsim/photonic/components.hpp"

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tfqsim::photonic {

/// A component chain together with its detection convention. Output time
/// bin n is read at t = output_time_offset + n on output_path.
struct Circuit {
    std::string name;
    QuditDims dims{3, 3};
    PhysicalGrid grid;
    int input_path = 0;
    int output_path = 0;
    int output_time_offset = 0;
    /// Propagation fails if amplitude shows up later than this.
    int max_time_bin = 0;
    std::vector<Component> components;
    /// Optional ideal gate (see named_gate) used to score a custom circuit.
    std::string ideal_gate;
    int ideal_control = -1;

    /// Walks the chain checking every component reads a path that exists at
    /// that stage. Throws std::invalid_argument on the first violation.
    void validate() const {
        std::set<int> live{input_path};
        for (std::size_t i = 0; i < components.size(); ++i) {
            const auto &c = components[i];
            detail::check_static(c);
            for (int p : input_paths(c)) {
                if (!live.contains(p)) {
                    throw std::invalid_argument("component " + std::to_string(i) + " (" + component_name(c) +
                                                ") reads unknown path " + std::to_string(p));
                }
            }
            for (int p : output_paths(c)) {
                live.insert(p);
            }
        }
        if (!live.contains(output_path)) {
            throw std::invalid_argument("output path " + std::to_string(output_path) + " is never produced");
        }
        if (output_time_offset < 0 || max_time_bin < output_time_offset + dims.time() - 1) {
            throw std::invalid_argument("detection window does not fit under max_time_bin");
        }
    }

    bool operator==(const Circuit &) const = default;
};

/// Per-shot zero-mean Gaussian phase noise on every phase shifter and delay
/// interferometer, drawn from a caller-owned stream.
struct PhaseJitter {
    double sigma = 0.0;
    std::mt19937_64 *rng = nullptr;
};

/// Propagates `s` through every component. Light on non-detected paths is
/// kept in the result.
inline FieldState run_circuit(const Circuit &c, FieldState s, PhaseJitter jitter = {}) {
    if (!s.has_path(c.input_path)) {
        throw std::invalid_argument("input state has no light path " + std::to_string(c.input_path));
    }
    std::normal_distribution<double> noise(0.0, jitter.sigma > 0 ? jitter.sigma : 1.0);
    for (const auto &comp : c.components) {
        if (jitter.sigma > 0 && jitter.rng != nullptr) {
            Component perturbed = comp;
            if (auto *ps = std::get_if<PhaseShifter>(&perturbed)) {
                ps->phase += noise(*jitter.rng);
            } else if (auto *di = std::get_if<DelayInterferometer>(&perturbed)) {
                di->phase += noise(*jitter.rng);
            }
            s = apply_component(perturbed, s, c.grid);
        } else {
            s = apply_component(comp, s, c.grid);
        }
        if (s.max_time() > c.max_time_bin) {
            throw std::runtime_error(c.name + ": amplitude reached time bin " + std::to_string(s.max_time()) +
                                     " beyond the tracked limit " + std::to_string(c.max_time_bin));
        }
    }
    return s;
}

/// A detected (frequency bin, output time bin) pair in the circuit frame.
struct Outcome {
    int f = 0;
    int t = 0;
    bool operator==(const Outcome &) const = default;
};

/// Amplitude of each outcome on the detection path.
inline CVector detected_amplitudes(const Circuit &c, const FieldState &out, const std::vector<Outcome> &outcomes) {
    CVector v(static_cast<Eigen::Index>(outcomes.size()));
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) =
            out.amplitude({c.output_path, outcomes[i].f, c.output_time_offset + outcomes[i].t});
    }
    return v;
}

/// Outcome probabilities renormalized over the listed outcomes. Throws
/// std::runtime_error when no light reaches any of them.
inline Eigen::VectorXd post_selected_probabilities(const Circuit &c, const FieldState &out,
                                                   const std::vector<Outcome> &outcomes) {
    Eigen::VectorXd p = detected_amplitudes(c, out, outcomes).cwiseAbs2();
    double total = p.sum();
    if (!(total > 0)) {
        throw std::runtime_error(c.name + ": all light lost before detection");
    }
    return p / total;
}

/// Every computational mode (f, n) in frequency-major order.
inline std::vector<Outcome> computational_outcomes(QuditDims dims) {
    std::vector<Outcome> o;
    for (int m = 0; m < dims.freq(); ++m) {
        for (int n = 0; n < dims.time(); ++n) {
            o.push_back({m, n});
        }
    }
    return o;
}

/// Time-bin outcomes of a single frequency bin.
inline std::vector<Outcome> time_outcomes(QuditDims dims, int f) {
    std::vector<Outcome> o;
    for (int n = 0; n < dims.time(); ++n) {
        o.push_back({f, n});
    }
    return o;
}

/// Column j is the post-selected outcome distribution for inputs[j].
inline RMatrix transfer_matrix(const Circuit &c, const std::vector<FieldState> &inputs,
                               const std::vector<Outcome> &outcomes) {
    RMatrix t(static_cast<Eigen::Index>(outcomes.size()), static_cast<Eigen::Index>(inputs.size()));
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        t.col(static_cast<Eigen::Index>(j)) = post_selected_probabilities(c, run_circuit(c, inputs[j]), outcomes);
    }
    return t;
}

/// Full N x N probability transfer over ideal basis inputs on the input path.
inline RMatrix transfer_matrix(const Circuit &c) {
    std::vector<FieldState> inputs;
    for (const auto &o : computational_outcomes(c.dims)) {
        inputs.push_back(FieldState::basis(c.dims, c.input_path, o.f, o.t));
    }
    return transfer_matrix(c, inputs, computational_outcomes(c.dims));
}

/// d_t x d_t transfer for inputs and outputs in frequency bin f.
inline RMatrix time_block_transfer(const Circuit &c, int f) {
    std::vector<FieldState> inputs;
    for (const auto &o : time_outcomes(c.dims, f)) {
        inputs.push_back(FieldState::basis(c.dims, c.input_path, o.f, o.t));
    }
    return transfer_matrix(c, inputs, time_outcomes(c.dims, f));
}

/// Unnormalized complex amplitudes on the detection path for basis inputs.
inline CMatrix amplitude_matrix(const Circuit &c) {
    const auto outcomes = computational_outcomes(c.dims);
    CMatrix a(c.dims.total(), c.dims.total());
    for (std::size_t j = 0; j < outcomes.size(); ++j) {
        auto out = run_circuit(c, FieldState::basis(c.dims, c.input_path, outcomes[j].f, outcomes[j].t));
        a.col(static_cast<Eigen::Index>(j)) = detected_amplitudes(c, out, outcomes);
    }
    return a;
}

} // namespace tfqsim::photonic
