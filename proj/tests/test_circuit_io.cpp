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

#include "tfqsim/photonic/builders.hpp"
#include "tfqsim/photonic/circuit_io.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace tfqsim;
using namespace tfqsim::photonic;

namespace {

std::vector<Circuit> builtin_circuits() {
    CircuitOptions leaky{22.0, 27.5, -2.0, 0.1};
    return {build_x_gate_circuit(PhysicalGrid{}),
            build_cinc_circuit(PhysicalGrid{}, leaky, 3, 1),
            build_sum_circuit(PhysicalGrid{}, 3),
            build_sum_circuit(PhysicalGrid::sixteen_bin(), 16, leaky),
            with_fringe_analyzer(build_x_gate_circuit(PhysicalGrid{}), 0.25, -1.5)};
}

} // namespace

TEST(CircuitIo, RoundTripIsByteIdentical) {
    for (const auto &c : builtin_circuits()) {
        const auto text = serialize_circuit(c);
        const auto back = parse_circuit(text);
        EXPECT_EQ(back, c) << c.name;
        EXPECT_EQ(serialize_circuit(back), text) << c.name;
    }
}

TEST(CircuitIo, EveryComponentKindRoundTrips) {
    Circuit c;
    c.name = "all-kinds";
    c.dims = {3, 3};
    c.input_path = 0;
    c.components = {IntensityModulator{0, {true, false, true}, 25.0},
                    PhaseModulator{0, {0.0, 0.5, 1.25}},
                    PulseShaper{0, {Complex(1, 0), Complex(0, 0.5), 0.0}, kInfiniteExtinction},
                    MzmSwitch{0, {1, 2}, {0, 1, 0}, 30.0},
                    FiberDelay{1, 2},
                    PhaseShifter{2, -0.75},
                    Coupler2x2{{1, 2}, {3, 4}},
                    Dwdm{3, {{{0}, 5}, {{1, 2}, 6}}, false, 40.0},
                    Dwdm{7, {{{0}, 5}, {{1, 2}, 6}}, true, kInfiniteExtinction},
                    Cfbg{7, -2.0},
                    DelayInterferometer{7, 1, 0.1}};
    c.output_path = 7;
    c.output_time_offset = 2;
    c.max_time_bin = 12;
    c.ideal_gate = "x";
    c.ideal_control = -1;
    const auto text = serialize_circuit(c);
    const auto back = parse_circuit(text);
    EXPECT_EQ(back, c);
    EXPECT_EQ(serialize_circuit(back), text);
}

TEST(CircuitIo, RoundTripPreservesBehavior) {
    for (const auto &c : builtin_circuits()) {
        if (c.dims.total() > 9) {
            continue;
        }
        auto back = parse_circuit(serialize_circuit(c));
        EXPECT_EQ((amplitude_matrix(back) - amplitude_matrix(c)).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(CircuitIo, AcceptsCommentsAndDefaults) {
    const std::string text = R"(// comment
    {
      "dims": {"freq": 3, "time": 3},
      /* block comment */
      "output_path": 0,
      "components": [{"type": "fiber_delay", "path": 0, "bins": 1}]
    })";
    auto c = parse_circuit(text);
    EXPECT_EQ(c.name, "custom");
    EXPECT_EQ(c.max_time_bin, 4);
    EXPECT_EQ(std::get<FiberDelay>(c.components.front()).bins, 1);
}

TEST(CircuitIo, RejectsBadDescriptions) {
    EXPECT_THROW(parse_circuit(R"({"dims": {"freq": 3, "time": 3}, "output_path": 0,
        "components": [{"type": "teleporter", "path": 0}]})"),
                 std::invalid_argument);
    EXPECT_THROW(parse_circuit(R"({"dims": {"freq": 3, "time": 3}, "output_path": 0,
        "components": [{"type": "fiber_delay", "path": 3, "bins": 1}]})"),
                 std::invalid_argument);
    EXPECT_THROW(parse_circuit(R"({"dims": {"freq": 3, "time": 3}, "output_path": 0,
        "components": [{"type": "intensity_modulator", "path": 0, "transmit": [true], "extinction_db": -3}]})"),
                 std::invalid_argument);
    EXPECT_THROW(parse_circuit("{not json"), nlohmann::json::parse_error);
}

TEST(CircuitIo, ShippedExampleLoadsAndActsAsXSquared) {
    auto c = load_circuit(TFQSIM_SOURCE_DIR "/circuits/x_squared.json");
    for (int f = 0; f < 3; ++f) {
        auto t = time_block_transfer(c, f);
        for (int n = 0; n < 3; ++n) {
            EXPECT_NEAR(t((n + 2) % 3, n), 1.0, 1e-12);
        }
    }
    std::ifstream in(TFQSIM_SOURCE_DIR "/circuits/x_squared.json");
    std::stringstream ss;
    ss << in.rdbuf();
    auto original = nlohmann::json::parse(ss.str(), nullptr, true, true);
    auto reserialized = nlohmann::json::parse(serialize_circuit(c));
    EXPECT_EQ(reserialized, original);
}

TEST(CircuitIo, ExportedBuiltinMatchesBuilder) {
    auto c = load_circuit(TFQSIM_SOURCE_DIR "/circuits/sum3.json");
    EXPECT_EQ(c, build_sum_circuit(PhysicalGrid{}, 3));
}

TEST(CircuitIo, MissingFileThrows) { EXPECT_THROW(load_circuit("/nonexistent/circuit.json"), std::runtime_error); }
