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
 * Circuit description files (JSON; comments allowed when loading).
 *
 * Schema, keys listed alphabetically as they are written:
 *
 *   {
 *     "components": [ {"type": "<kind>", ...}, ... ],
 *     "dims": {"freq": 3, "time": 3},
 *     "grid": {"bin_spacing_ns": 6, "bin_width_ns": 3, "center_wavelength_nm": 1553.9,
 *              "freq_linewidth_ghz": 0.25, "freq_spacing_ghz": 380},
 *     "ideal_control": -1,          optional
 *     "ideal_gate": "sum",          optional, see named_gate()
 *     "input_path": 0,
 *     "max_time_bin": 7,
 *     "name": "sum-3",
 *     "output_path": 3,
 *     "output_time_offset": 3
 *   }
 *
 * Component kinds and fields:
 *   intensity_modulator  path, transmit [bool...], extinction_db
 *   phase_modulator      path, phases [rad...]
 *   pulse_shaper         path, mask [[re, im]...], extinction_db
 *   mzm_switch           input_path, output_paths [a, b], ports [0|1 per time bin], extinction_db
 *   coupler_2x2          inputs [a, b], outputs [c, d]
 *   fiber_delay          path, bins
 *   dwdm                 common_path, bands [{"freqs": [...], "path": p}...], multiplex, extinction_db
 *   cfbg                 path, dispersion_ns_per_nm
 *   phase_shifter        path, phase
 *   delay_interferometer path, delay_bins, phase
 *
 * extinction_db is a number of dB or the string "inf".
 */

#pragma once

#include "tfqsim/photonic/circuit.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace tfqsim::photonic {

using nlohmann::json;

inline json extinction_to_json(double db) {
    if (std::isinf(db)) {
        return "inf";
    }
    return db;
}

inline double extinction_from_json(const json &j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") {
            return kInfiniteExtinction;
        }
        throw std::invalid_argument("extinction_db must be a number or \"inf\"");
    }
    double v = j.get<double>();
    if (v < 0) {
        throw std::invalid_argument("extinction_db must be >= 0");
    }
    return v;
}

inline json grid_to_json(const PhysicalGrid &g) {
    return {{"bin_spacing_ns", g.bin_spacing_ns},
            {"bin_width_ns", g.bin_width_ns},
            {"center_wavelength_nm", g.center_wavelength_nm},
            {"freq_linewidth_ghz", g.freq_linewidth_ghz},
            {"freq_spacing_ghz", g.freq_spacing_ghz}};
}

inline PhysicalGrid grid_from_json(const json &j, PhysicalGrid g = {}) {
    g.bin_spacing_ns = j.value("bin_spacing_ns", g.bin_spacing_ns);
    g.bin_width_ns = j.value("bin_width_ns", g.bin_width_ns);
    g.center_wavelength_nm = j.value("center_wavelength_nm", g.center_wavelength_nm);
    g.freq_linewidth_ghz = j.value("freq_linewidth_ghz", g.freq_linewidth_ghz);
    g.freq_spacing_ghz = j.value("freq_spacing_ghz", g.freq_spacing_ghz);
    if (!(g.bin_spacing_ns > 0) || !(g.freq_spacing_ghz > 0) || !(g.center_wavelength_nm > 0)) {
        throw std::invalid_argument("grid spacings and center wavelength must be positive");
    }
    return g;
}

namespace detail {

struct ComponentWriter {
    json operator()(const IntensityModulator &c) const {
        return {{"type", "intensity_modulator"},
                {"path", c.path},
                {"transmit", c.transmit},
                {"extinction_db", extinction_to_json(c.extinction_db)}};
    }
    json operator()(const PhaseModulator &c) const {
        return {{"type", "phase_modulator"}, {"path", c.path}, {"phases", c.phases}};
    }
    json operator()(const PulseShaper &c) const {
        json mask = json::array();
        for (const auto &m : c.mask) {
            mask.push_back({m.real(), m.imag()});
        }
        return {{"type", "pulse_shaper"},
                {"path", c.path},
                {"mask", mask},
                {"extinction_db", extinction_to_json(c.extinction_db)}};
    }
    json operator()(const MzmSwitch &c) const {
        return {{"type", "mzm_switch"},
                {"input_path", c.input_path},
                {"output_paths", c.output_paths},
                {"ports", c.ports},
                {"extinction_db", extinction_to_json(c.extinction_db)}};
    }
    json operator()(const Coupler2x2 &c) const {
        return {{"type", "coupler_2x2"}, {"inputs", c.inputs}, {"outputs", c.outputs}};
    }
    json operator()(const FiberDelay &c) const {
        return {{"type", "fiber_delay"}, {"path", c.path}, {"bins", c.bins}};
    }
    json operator()(const Dwdm &c) const {
        json bands = json::array();
        for (const auto &b : c.bands) {
            bands.push_back({{"freqs", b.freqs}, {"path", b.path}});
        }
        return {{"type", "dwdm"},
                {"common_path", c.common_path},
                {"bands", bands},
                {"multiplex", c.multiplex},
                {"extinction_db", extinction_to_json(c.extinction_db)}};
    }
    json operator()(const Cfbg &c) const {
        return {{"type", "cfbg"}, {"path", c.path}, {"dispersion_ns_per_nm", c.dispersion_ns_per_nm}};
    }
    json operator()(const PhaseShifter &c) const {
        return {{"type", "phase_shifter"}, {"path", c.path}, {"phase", c.phase}};
    }
    json operator()(const DelayInterferometer &c) const {
        return {{"type", "delay_interferometer"}, {"path", c.path}, {"delay_bins", c.delay_bins}, {"phase", c.phase}};
    }
};

inline double extinction_field(const json &j) {
    return j.contains("extinction_db") ? extinction_from_json(j.at("extinction_db")) : kInfiniteExtinction;
}

} // namespace detail

inline json component_to_json(const Component &c) { return std::visit(detail::ComponentWriter{}, c); }

inline Component component_from_json(const json &j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "intensity_modulator") {
        return IntensityModulator{j.at("path").get<int>(), j.at("transmit").get<std::vector<bool>>(),
                                  detail::extinction_field(j)};
    }
    if (type == "phase_modulator") {
        return PhaseModulator{j.at("path").get<int>(), j.at("phases").get<std::vector<double>>()};
    }
    if (type == "pulse_shaper") {
        std::vector<Complex> mask;
        for (const auto &m : j.at("mask")) {
            if (m.is_number()) {
                mask.emplace_back(m.get<double>(), 0.0);
            } else {
                mask.emplace_back(m.at(0).get<double>(), m.at(1).get<double>());
            }
        }
        return PulseShaper{j.at("path").get<int>(), mask, detail::extinction_field(j)};
    }
    if (type == "mzm_switch") {
        return MzmSwitch{j.at("input_path").get<int>(), j.at("output_paths").get<std::array<int, 2>>(),
                         j.at("ports").get<std::vector<int>>(), detail::extinction_field(j)};
    }
    if (type == "coupler_2x2") {
        return Coupler2x2{j.at("inputs").get<std::array<int, 2>>(), j.at("outputs").get<std::array<int, 2>>()};
    }
    if (type == "fiber_delay") {
        return FiberDelay{j.at("path").get<int>(), j.at("bins").get<int>()};
    }
    if (type == "dwdm") {
        std::vector<DwdmBand> bands;
        for (const auto &b : j.at("bands")) {
            bands.push_back({b.at("freqs").get<std::vector<int>>(), b.at("path").get<int>()});
        }
        return Dwdm{j.at("common_path").get<int>(), bands, j.value("multiplex", false), detail::extinction_field(j)};
    }
    if (type == "cfbg") {
        return Cfbg{j.at("path").get<int>(), j.at("dispersion_ns_per_nm").get<double>()};
    }
    if (type == "phase_shifter") {
        return PhaseShifter{j.at("path").get<int>(), j.at("phase").get<double>()};
    }
    if (type == "delay_interferometer") {
        return DelayInterferometer{j.at("path").get<int>(), j.at("delay_bins").get<int>(), j.value("phase", 0.0)};
    }
    throw std::invalid_argument("unknown component type '" + type + "'");
}

inline json circuit_to_json(const Circuit &c) {
    json comps = json::array();
    for (const auto &comp : c.components) {
        comps.push_back(component_to_json(comp));
    }
    json j = {{"name", c.name},
              {"dims", {{"freq", c.dims.freq()}, {"time", c.dims.time()}}},
              {"grid", grid_to_json(c.grid)},
              {"input_path", c.input_path},
              {"output_path", c.output_path},
              {"output_time_offset", c.output_time_offset},
              {"max_time_bin", c.max_time_bin},
              {"components", comps}};
    if (!c.ideal_gate.empty()) {
        j["ideal_gate"] = c.ideal_gate;
        j["ideal_control"] = c.ideal_control;
    }
    return j;
}

/// Parses and validates a circuit description.
inline Circuit circuit_from_json(const json &j) {
    Circuit c;
    c.name = j.value("name", std::string{"custom"});
    const auto &dims = j.at("dims");
    c.dims = QuditDims(dims.at("freq").get<int>(), dims.at("time").get<int>());
    c.grid = grid_from_json(j.value("grid", json::object()));
    c.input_path = j.value("input_path", 0);
    c.output_path = j.at("output_path").get<int>();
    c.output_time_offset = j.value("output_time_offset", 0);
    c.max_time_bin = j.value("max_time_bin", c.output_time_offset + 2 * c.dims.time() - 2);
    for (const auto &comp : j.at("components")) {
        c.components.push_back(component_from_json(comp));
    }
    c.ideal_gate = j.value("ideal_gate", std::string{});
    c.ideal_control = j.value("ideal_control", -1);
    c.validate();
    return c;
}

inline std::string serialize_circuit(const Circuit &c) { return circuit_to_json(c).dump(2) + "\n"; }

inline Circuit parse_circuit(const std::string &text) {
    return circuit_from_json(json::parse(text, nullptr, true, /*ignore_comments=*/true));
}

inline Circuit load_circuit(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open circuit file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_circuit(ss.str());
}

} // namespace tfqsim::photonic
