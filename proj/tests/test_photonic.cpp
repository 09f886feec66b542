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

#include "test_util.hpp"
#include "tfqsim/gate_algebra.hpp"
#include "tfqsim/photonic/builders.hpp"

#include <gtest/gtest.h>

using namespace tfqsim;
using namespace tfqsim::photonic;

namespace {

const QuditDims k33{3, 3};

FieldState random_field(QuditDims dims, std::vector<int> paths, int t_max, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    FieldState s(dims);
    double norm = 0;
    std::vector<std::pair<ModeKey, Complex>> entries;
    for (int p : paths) {
        for (int f = 0; f < dims.freq(); ++f) {
            for (int t = 0; t <= t_max; ++t) {
                Complex a{g(rng), g(rng)};
                entries.push_back({{p, f, t}, a});
                norm += std::norm(a);
            }
        }
    }
    for (auto &[k, a] : entries) {
        s.add(k, a / std::sqrt(norm));
    }
    return s;
}

/// |U_ij|^2 of a gate-algebra matrix, as an outcome x input matrix.
RMatrix squared_moduli(const GateMatrix &g) { return g.entries().cwiseAbs2(); }

Circuit bare_circuit(std::vector<Component> comps, int out_path, int max_t = 20) {
    Circuit c;
    c.name = "test";
    c.dims = k33;
    c.output_path = out_path;
    c.max_time_bin = max_t;
    c.components = std::move(comps);
    return c;
}

} // namespace

TEST(Components, FiberDelayShiftsByBins) {
    PhysicalGrid grid;
    auto s = apply_component(FiberDelay{0, 3}, FieldState::basis(k33, 0, 1, 0), grid);
    EXPECT_EQ(s.amplitude({0, 1, 3}), Complex(1.0));
    EXPECT_EQ(s.amplitude({0, 1, 0}), Complex(0.0));
}

TEST(Components, NegativeTimeThrows) {
    PhysicalGrid grid;
    EXPECT_THROW(apply_component(FiberDelay{0, -1}, FieldState::basis(k33, 0, 0, 0), grid), std::domain_error);
}

TEST(Components, UnknownPathThrows) {
    PhysicalGrid grid;
    EXPECT_THROW(apply_component(FiberDelay{4, 1}, FieldState::basis(k33, 0, 0, 0), grid), std::invalid_argument);
}

TEST(Components, IntensityModulatorLeakAt25dB) {
    PhysicalGrid grid;
    auto s = apply_component(IntensityModulator{0, {true, false, true}, 25.0}, FieldState::basis(k33, 0, 0, 1), grid);
    EXPECT_NEAR(std::abs(s.amplitude({0, 0, 1})), 0.0562341325, 1e-9);
    EXPECT_NEAR(std::pow(10.0, -25.0 / 20.0), leak_amplitude(25.0), 1e-15);
    auto t = apply_component(IntensityModulator{0, {true, false, true}, kInfiniteExtinction},
                             FieldState::basis(k33, 0, 0, 1), grid);
    EXPECT_EQ(t.norm_squared(), 0.0);
    EXPECT_THROW(leak_amplitude(-1.0), std::invalid_argument);
}

TEST(Components, CouplerConvention) {
    PhysicalGrid grid;
    FieldState s(k33);
    const Complex a{0.6, 0.8};
    s.add({0, 0, 0}, a);
    s.declare_path(1);
    auto out = apply_component(Coupler2x2{{0, 1}, {2, 3}}, s, grid);
    EXPECT_NEAR(std::abs(out.amplitude({2, 0, 0}) - a / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({3, 0, 0}) - Complex(0, 1) * a / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Components, PhaseShifterAndModulator) {
    PhysicalGrid grid;
    auto s = apply_component(PhaseShifter{0, std::numbers::pi / 2}, FieldState::basis(k33, 0, 2, 1), grid);
    EXPECT_NEAR(std::abs(s.amplitude({0, 2, 1}) - Complex(0, 1)), 0.0, 1e-15);
    auto p = apply_component(PhaseModulator{0, {0.0, std::numbers::pi}}, FieldState::basis(k33, 0, 0, 1), grid);
    EXPECT_NEAR(std::abs(p.amplitude({0, 0, 1}) + 1.0), 0.0, 1e-15);
}

TEST(Components, PulseShaperSelectsFrequency) {
    PhysicalGrid grid;
    FieldState s(k33);
    for (int f = 0; f < 3; ++f) {
        s.add({0, f, 0}, 1.0 / std::sqrt(3.0));
    }
    auto out = apply_component(PulseShaper{0, {0.0, 1.0, 0.0}, 40.0}, s, grid);
    EXPECT_NEAR(std::abs(out.amplitude({0, 1, 0})), 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(std::abs(out.amplitude({0, 0, 0})), 0.01 / std::sqrt(3.0), 1e-15);
}

TEST(Components, MzmRoutesByTimeBin) {
    PhysicalGrid grid;
    FieldState s(k33);
    for (int t = 0; t < 3; ++t) {
        s.add({0, 0, t}, 1.0 / std::sqrt(3.0));
    }
    auto out = apply_component(MzmSwitch{0, {1, 2}, {0, 1, 0}, kInfiniteExtinction}, s, grid);
    EXPECT_NEAR(out.path_probability(1), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(out.path_probability(2), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(out.amplitude({2, 0, 0}), Complex(0.0));
    auto leaky = apply_component(MzmSwitch{0, {1, 2}, {0, 1, 0}, 20.0}, s, grid);
    EXPECT_NEAR(std::abs(leaky.amplitude({2, 0, 0})), 0.1 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(leaky.norm_squared(), 1.0, 1e-12);
}

TEST(Components, DwdmDemuxAndMux) {
    PhysicalGrid grid;
    FieldState s(k33);
    for (int f = 0; f < 3; ++f) {
        s.add({0, f, 1}, 1.0 / std::sqrt(3.0));
    }
    Dwdm demux{0, {{{0, 1}, 1}, {{2}, 2}}, false, kInfiniteExtinction};
    auto split = apply_component(demux, s, grid);
    EXPECT_NEAR(split.path_probability(1), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(std::abs(split.amplitude({2, 2, 1})), 1.0 / std::sqrt(3.0), 1e-15);
    Dwdm mux{3, {{{0, 1}, 1}, {{2}, 2}}, true, kInfiniteExtinction};
    auto merged = apply_component(mux, split, grid);
    EXPECT_NEAR(merged.path_probability(3), 1.0, 1e-12);
}

TEST(Components, CfbgDelaysByFrequencyIndex) {
    PhysicalGrid grid;
    auto s = apply_component(Cfbg{0, -2.0}, FieldState::basis(k33, 0, 2, 2), grid);
    EXPECT_EQ(s.amplitude({0, 2, 4}), Complex(1.0));
}

TEST(Components, DelayInterferometerHalvesEachArm) {
    PhysicalGrid grid;
    auto s = apply_component(DelayInterferometer{0, 2, std::numbers::pi}, FieldState::basis(k33, 0, 0, 0), grid);
    EXPECT_NEAR(std::abs(s.amplitude({0, 0, 0}) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(s.amplitude({0, 0, 2}) + 0.5), 0.0, 1e-15);
}

TEST(Components, NormNeverIncreases) {
    std::mt19937_64 rng(21);
    PhysicalGrid grid;
    const std::vector<std::pair<Component, bool>> cases = {
        {IntensityModulator{0, {true, false, true}, 25.0}, false},
        {PhaseModulator{0, {0.3, 1.1, -2.0}}, true},
        {PulseShaper{0, {Complex(0.5, 0.5), 0.0, 1.0}, 40.0}, false},
        {MzmSwitch{0, {2, 3}, {0, 1, 1, 0}, kInfiniteExtinction}, true},
        {MzmSwitch{0, {2, 3}, {0, 1, 1, 0}, 18.0}, true},
        {Coupler2x2{{0, 1}, {2, 3}}, true},
        {FiberDelay{1, 2}, true},
        {Dwdm{0, {{{0}, 2}, {{1, 2}, 3}}, false, kInfiniteExtinction}, true},
        {Dwdm{0, {{{0}, 2}, {{1, 2}, 3}}, false, 30.0}, true},
        {Cfbg{0, -2.0}, true},
        {PhaseShifter{1, 0.7}, true},
        {DelayInterferometer{0, 1, 0.4}, false},
    };
    for (const auto &[comp, preserving] : cases) {
        for (int trial = 0; trial < 20; ++trial) {
            auto s = random_field(k33, {0, 1}, 3, rng);
            auto out = apply_component(comp, s, grid);
            EXPECT_LE(out.norm_squared(), s.norm_squared() + 1e-12) << component_name(comp);
            if (preserving) {
                EXPECT_NEAR(out.norm_squared(), s.norm_squared(), 1e-12) << component_name(comp);
            }
        }
    }
}

TEST(Components, DwdmMuxIsContraction) {
    std::mt19937_64 rng(22);
    PhysicalGrid grid;
    Dwdm mux{4, {{{0}, 0}, {{1, 2}, 1}}, true, 20.0};
    for (int trial = 0; trial < 20; ++trial) {
        auto s = random_field(k33, {0, 1}, 2, rng);
        EXPECT_LE(apply_component(mux, s, grid).norm_squared(), s.norm_squared() + 1e-12);
    }
}

TEST(RunCircuit, EmptyCircuitIsIdentity) {
    std::mt19937_64 rng(1);
    auto s = random_field(k33, {0}, 2, rng);
    auto out = run_circuit(bare_circuit({}, 0), s);
    EXPECT_EQ(out.amplitudes(), s.amplitudes());
}

TEST(RunCircuit, DelaysCompose) {
    auto out = run_circuit(bare_circuit({FiberDelay{0, 1}, FiberDelay{0, 2}}, 0), FieldState::basis(k33, 0, 1, 1));
    EXPECT_EQ(out.amplitude({0, 1, 4}), Complex(1.0));
}

TEST(RunCircuit, Linearity) {
    std::mt19937_64 rng(4);
    auto c = build_sum_circuit(PhysicalGrid{}, 3, {20.0, 25.0});
    for (int trial = 0; trial < 10; ++trial) {
        auto s1 = random_field(k33, {0}, 2, rng);
        auto s2 = random_field(k33, {0}, 2, rng);
        const Complex a{0.3, -1.2}, b{-0.7, 0.4};
        auto lhs = run_circuit(c, s1.scaled(a) + s2.scaled(b));
        auto rhs = run_circuit(c, s1).scaled(a) + run_circuit(c, s2).scaled(b);
        for (const auto &[k, v] : rhs.amplitudes()) {
            EXPECT_NEAR(std::abs(lhs.amplitude(k) - v), 0.0, 1e-12);
        }
        for (const auto &[k, v] : lhs.amplitudes()) {
            EXPECT_NEAR(std::abs(rhs.amplitude(k) - v), 0.0, 1e-12);
        }
    }
}

TEST(RunCircuit, BeyondTrackedWindowThrows) {
    auto c = bare_circuit({FiberDelay{0, 5}}, 0, 4);
    EXPECT_THROW(run_circuit(c, FieldState::basis(k33, 0, 0, 0)), std::runtime_error);
}

TEST(RunCircuit, AllLightLostThrows) {
    auto c = bare_circuit({IntensityModulator{0, {false, false, false}, kInfiniteExtinction}}, 0, 4);
    auto out = run_circuit(c, FieldState::basis(k33, 0, 0, 0));
    EXPECT_THROW(post_selected_probabilities(c, out, computational_outcomes(k33)), std::runtime_error);
}

TEST(Circuit, ValidateRejectsUnknownPath) {
    auto c = bare_circuit({FiberDelay{2, 1}}, 0);
    EXPECT_THROW(c.validate(), std::invalid_argument);
    auto d = bare_circuit({FiberDelay{0, 1}}, 5);
    EXPECT_THROW(d.validate(), std::invalid_argument);
}

TEST(XGateCircuit, ZeroGoesToOneWithHalfProbability) {
    auto c = build_x_gate_circuit(PhysicalGrid{});
    auto out = run_circuit(c, FieldState::basis(c.dims, 0, 0, 0));
    auto amps = detected_amplitudes(c, out, time_outcomes(c.dims, 0));
    EXPECT_NEAR(std::norm(amps(1)), 0.5, 1e-12);
    EXPECT_NEAR(std::norm(amps(0)) + std::norm(amps(2)), 0.0, 1e-15);
    EXPECT_NEAR(out.norm_squared(), 1.0, 1e-12);
}

TEST(XGateCircuit, TransferIsCyclicShift) {
    auto c = build_x_gate_circuit(PhysicalGrid{});
    RMatrix expected = tfqsim::testing::permutation(3, [](int j) { return (j + 1) % 3; });
    for (int f = 0; f < 3; ++f) {
        EXPECT_LT((time_block_transfer(c, f) - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
    auto t = time_block_transfer(c, 0);
    EXPECT_NEAR(t(0, 2), 1.0, 1e-12);
}

TEST(XGateCircuit, IdealBasisFidelityIsOne) {
    auto c = build_x_gate_circuit(PhysicalGrid{});
    auto t = time_block_transfer(c, 0);
    double f = 0;
    for (int n = 0; n < 3; ++n) {
        f += t((n + 1) % 3, n) / 3.0;
    }
    EXPECT_NEAR(f, 1.0, 1e-12);
}

TEST(XGateCircuit, LeakyMzmStaysOutsideTheWindow) {
    auto c = build_x_gate_circuit(PhysicalGrid{}, {15.0, kInfiniteExtinction});
    RMatrix expected = tfqsim::testing::permutation(3, [](int j) { return (j + 1) % 3; });
    EXPECT_LT((time_block_transfer(c, 0) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CincCircuit, Examples) {
    auto c = build_cinc_circuit(PhysicalGrid{});
    auto t = transfer_matrix(c);
    EXPECT_NEAR(t(k33.index(2, 1), k33.index(2, 0)), 1.0, 1e-12);
    EXPECT_NEAR(t(k33.index(1, 0), k33.index(1, 0)), 1.0, 1e-12);
}

TEST(CincCircuit, MatchesGateAlgebraForEveryControl) {
    for (int control = 0; control < 3; ++control) {
        auto c = build_cinc_circuit(PhysicalGrid{}, {}, 3, control);
        EXPECT_LT((transfer_matrix(c) - squared_moduli(cinc(k33, control))).cwiseAbs().maxCoeff(), 1e-9);
    }
    EXPECT_THROW(build_cinc_circuit(PhysicalGrid{}, {}, 3, 3), std::out_of_range);
}

TEST(Sum3Circuit, Examples) {
    auto c = build_sum_circuit(PhysicalGrid{}, 3);
    auto t = transfer_matrix(c);
    EXPECT_NEAR(t(k33.index(2, 1), k33.index(2, 2)), 1.0, 1e-12);
    auto after_cfbg = apply_component(c.components.front(), FieldState::basis(k33, 0, 2, 2), c.grid);
    EXPECT_EQ(after_cfbg.amplitude({0, 2, 4}), Complex(1.0));
    RMatrix oracle = RMatrix::Zero(9, 9);
    for (int m = 0; m < 3; ++m) {
        for (int n = 0; n < 3; ++n) {
            oracle(m * 3 + (n + m) % 3, m * 3 + n) = 1.0;
        }
    }
    EXPECT_LT((t - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Sum16Circuit, BlocksAreCyclicShifts) {
    auto grid = PhysicalGrid::sixteen_bin();
    auto c = build_sum_circuit(grid, 16);
    for (int m : {0, 1, 7, 15}) {
        RMatrix expected = tfqsim::testing::permutation(16, [m](int j) { return (j + m) % 16; });
        EXPECT_LT((time_block_transfer(c, m) - expected).cwiseAbs().maxCoeff(), 1e-12) << "m=" << m;
    }
}

TEST(Sum16Circuit, NoProbabilityOutsideFrequencyBlocks) {
    auto c = build_sum_circuit(PhysicalGrid::sixteen_bin(), 16);
    auto t = transfer_matrix(c);
    for (int j = 0; j < 256; ++j) {
        for (int i = 0; i < 256; ++i) {
            if (i / 16 != j / 16) {
                ASSERT_EQ(t(i, j), 0.0);
            }
        }
    }
}

TEST(SumCircuit, RejectsMismatchedGrid) {
    PhysicalGrid grid;
    grid.freq_spacing_ghz = 300.0;
    EXPECT_THROW(build_sum_circuit(grid, 3), std::invalid_argument);
}

TEST(Physics, CfbgDelays) {
    PhysicalGrid three;
    const double d3 = cfbg_delay_ns(three, -2.0, 1);
    EXPECT_GE(d3, 5.9);
    EXPECT_LE(d3, 6.3);
    EXPECT_EQ(cfbg_delay_bins(three, -2.0, 2), 2);
    const double d16 = cfbg_delay_ns(PhysicalGrid::sixteen_bin(), -2.0, 1);
    EXPECT_NEAR(d16, 1.2, 0.01);
    EXPECT_EQ(cfbg_delay_bins(PhysicalGrid::sixteen_bin(), -2.0, 15), 15);
}

TEST(Physics, PulseSpread) {
    PhysicalGrid g = PhysicalGrid::sixteen_bin();
    g.center_wavelength_nm = 1550.0;
    // lambda^2 * dnu / c * |D|, evaluated by hand
    const double expected = 1550e-9 * 1550e-9 * 22e9 / 299792458.0 * 1e9 * 2.0;
    EXPECT_NEAR(pulse_spread_ns(g, -2.0), expected, 1e-12);
    EXPECT_NEAR(pulse_spread_ns(g, -2.0), 0.353, 0.001);
    EXPECT_GE(pulse_spread_ns(g, -2.0), 0.24);
    EXPECT_LE(pulse_spread_ns(g, -2.0), 0.36);
    EXPECT_EQ(pulse_spread_ns(g, 0.0), 0.0);
    PhysicalGrid narrow;
    EXPECT_NEAR(pulse_spread_ns(narrow, -2.0), 0.004, 0.0005);
}

TEST(Physics, SeparationWarning) {
    EXPECT_FALSE(PhysicalGrid{}.separation_warning());
    EXPECT_FALSE(PhysicalGrid::sixteen_bin().separation_warning());
    PhysicalGrid tight;
    tight.bin_spacing_ns = 0.01;
    EXPECT_TRUE(tight.separation_warning());
}

TEST(Fringe, AnalyzerReproducesInterferencePattern) {
    auto c = with_fringe_analyzer(build_x_gate_circuit(PhysicalGrid{}));
    const ModeKey readout{c.output_path, 0, c.output_time_offset + kFringeReadoutBin};
    const double peak = std::norm(run_circuit(c, prepare_phase_ramp(c.dims, 0.0)).amplitude(readout));
    ASSERT_GT(peak, 0.0);
    for (int k = 0; k < 48; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / 48;
        Complex s{};
        for (int n = 0; n < 3; ++n) {
            s += std::polar(1.0, n * phi);
        }
        const double p = std::norm(run_circuit(c, prepare_phase_ramp(c.dims, phi)).amplitude(readout)) / peak;
        EXPECT_NEAR(p, std::norm(s) / 9.0, 1e-12) << "phi=" << phi;
    }
    const double zero = std::norm(run_circuit(c, prepare_phase_ramp(c.dims, 2 * std::numbers::pi / 3)).amplitude(readout));
    EXPECT_NEAR(zero, 0.0, 1e-15);
    const double zero2 = std::norm(run_circuit(c, prepare_phase_ramp(c.dims, -2 * std::numbers::pi / 3)).amplitude(readout));
    EXPECT_NEAR(zero2, 0.0, 1e-15);
}

TEST(Fringe, JitterIsReproducibleFromTheStream) {
    auto c = with_fringe_analyzer(build_x_gate_circuit(PhysicalGrid{}));
    std::mt19937_64 a(9), b(9);
    auto s1 = run_circuit(c, prepare_phase_ramp(c.dims, 0.3), {0.2, &a});
    auto s2 = run_circuit(c, prepare_phase_ramp(c.dims, 0.3), {0.2, &b});
    EXPECT_EQ(s1.amplitudes(), s2.amplitudes());
    auto s3 = run_circuit(c, prepare_phase_ramp(c.dims, 0.3));
    EXPECT_NE(s1.amplitudes(), s3.amplitudes());
}

TEST(Preparation, BasisInputLeaksAtExtinction) {
    auto s = prepare_basis_input(k33, 1, 2, 25.0, 40.0);
    const double main = std::abs(s.amplitude({0, 1, 2}));
    EXPECT_NEAR(std::abs(s.amplitude({0, 1, 0})) / main, leak_amplitude(25.0), 1e-12);
    EXPECT_NEAR(std::abs(s.amplitude({0, 0, 2})) / main, leak_amplitude(40.0), 1e-12);
    auto ideal = prepare_basis_input(k33, 1, 2, kInfiniteExtinction, kInfiniteExtinction);
    EXPECT_EQ(ideal.amplitudes().size(), 1u);
}
