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
 * Component-level layouts of the time-bin X gate, the frequency-controlled
 * CINC gate, and the dispersion-based SUM gate, plus the input
 * preparation stage and the two-interferometer fringe analyzer.
 *
 * X gate on d time bins: an MZM routes bins 0..d-2 to an arm delayed by d
 * bins and bin d-1 to an undelayed arm; a coupler merges both arms. Read
 * with the frame starting at t = d-1, |n> lands on |n+1 mod d>.
 *
 * SUM gate: a CFBG delays frequency bin m by m bins, which pushes some
 * bins past d-1. An MZM splits in-space bins (t < d) from overflow bins,
 * the in-space arm is delayed by d, and a coupler merges; read from t = d
 * the overflow folds back modulo d.
 */

#pragma once

#include "tfqsim/photonic/circuit.hpp"

#include <cmath>
#include <numbers>

namespace tfqsim::photonic {

/// Non-ideal knobs shared by the builders.
struct CircuitOptions {
    double mzm_extinction_db = kInfiniteExtinction;
    double dwdm_extinction_db = kInfiniteExtinction;
    double dispersion_ns_per_nm = -2.0;
    /// Largest allowed |per-bin CFBG delay / bin spacing - 1|.
    double cfbg_tolerance = 0.1;
};

namespace detail {

/// Appends an X stage reading `in`. Paths `first`..`first+3` are used; the
/// merged output is returned and the stage's frame starts d-1 bins late.
inline int append_x_stage(Circuit &c, int in, int first, int d, const CircuitOptions &opt) {
    const int delayed = first;
    const int direct = first + 1;
    const int kept = first + 2;
    const int dropped = first + 3;
    std::vector<int> ports(static_cast<std::size_t>(d), 0);
    ports.back() = 1;
    c.components.push_back(MzmSwitch{in, {delayed, direct}, ports, opt.mzm_extinction_db});
    c.components.push_back(FiberDelay{delayed, d});
    // Cancels the coupler's i on the cross port so the kept output is X / sqrt2.
    c.components.push_back(PhaseShifter{direct, -std::numbers::pi / 2});
    c.components.push_back(Coupler2x2{{delayed, direct}, {kept, dropped}});
    return kept;
}

} // namespace detail

/// Time-bin X gate. Frequency bins pass untouched.
inline Circuit build_x_gate_circuit(const PhysicalGrid &grid, const CircuitOptions &opt = {}, int d_t = 3,
                                    int d_f = 3) {
    Circuit c;
    c.name = "x-gate";
    c.dims = QuditDims(d_f, d_t);
    c.grid = grid;
    c.input_path = 0;
    c.output_path = detail::append_x_stage(c, 0, 1, d_t, opt);
    c.output_time_offset = d_t - 1;
    c.max_time_bin = c.output_time_offset + 2 * d_t - 2;
    c.ideal_gate = "x";
    c.validate();
    return c;
}

/// CINC: a DWDM sends frequency bin `control` through an X stage and the
/// other bins through a matched d-1 bin delay, then a second DWDM merges.
inline Circuit build_cinc_circuit(const PhysicalGrid &grid, const CircuitOptions &opt = {}, int d = 3,
                                  int control = -1) {
    if (control < 0) {
        control = d - 1;
    }
    if (control >= d) {
        throw std::out_of_range("CINC control value outside frequency qudit");
    }
    Circuit c;
    c.name = "cinc";
    c.dims = QuditDims(d, d);
    c.grid = grid;
    c.input_path = 0;
    const int bypass = 1;
    const int branch = 2;
    std::vector<int> others;
    for (int m = 0; m < d; ++m) {
        if (m != control) {
            others.push_back(m);
        }
    }
    c.components.push_back(Dwdm{0, {{others, bypass}, {{control}, branch}}, false, opt.dwdm_extinction_db});
    const int x_out = detail::append_x_stage(c, branch, 3, d, opt);
    c.components.push_back(FiberDelay{bypass, d - 1});
    const int merged = 7;
    c.components.push_back(Dwdm{merged, {{others, bypass}, {{control}, x_out}}, true, opt.dwdm_extinction_db});
    c.output_path = merged;
    c.output_time_offset = d - 1;
    c.max_time_bin = c.output_time_offset + 2 * d - 2;
    c.ideal_gate = "cinc";
    c.ideal_control = control;
    c.validate();
    return c;
}

/// Checks that the grating delays frequency bin m by exactly m bins on this
/// grid, within the configured tolerance, and returns the per-bin delay in ns.
inline double check_cfbg_grid(const PhysicalGrid &grid, int d, const CircuitOptions &opt) {
    const double per_bin = cfbg_delay_ns(grid, opt.dispersion_ns_per_nm, 1);
    const double ratio = per_bin / grid.bin_spacing_ns;
    if (std::abs(ratio - 1.0) > opt.cfbg_tolerance) {
        throw std::invalid_argument("CFBG per-bin delay " + std::to_string(per_bin) + " ns is not within " +
                                    std::to_string(opt.cfbg_tolerance) + " of one time bin (" +
                                    std::to_string(grid.bin_spacing_ns) + " ns)");
    }
    for (int m = 0; m < d; ++m) {
        if (cfbg_delay_bins(grid, opt.dispersion_ns_per_nm, m) != m) {
            throw std::invalid_argument("CFBG delay for frequency bin " + std::to_string(m) +
                                        " does not round to " + std::to_string(m) + " bins");
        }
    }
    return per_bin;
}

/// SUM gate on d x d via CFBG dispersion and an overflow fold.
inline Circuit build_sum_circuit(const PhysicalGrid &grid, int d, const CircuitOptions &opt = {}) {
    check_cfbg_grid(grid, d, opt);
    Circuit c;
    c.name = "sum-" + std::to_string(d);
    c.dims = QuditDims(d, d);
    c.grid = grid;
    c.input_path = 0;
    const int in_space = 1;
    const int overflow = 2;
    const int kept = 3;
    const int dropped = 4;
    c.components.push_back(Cfbg{0, opt.dispersion_ns_per_nm});
    std::vector<int> ports(static_cast<std::size_t>(2 * d - 1), 1);
    std::fill(ports.begin(), ports.begin() + d, 0);
    c.components.push_back(MzmSwitch{0, {in_space, overflow}, ports, opt.mzm_extinction_db});
    c.components.push_back(FiberDelay{in_space, d});
    c.components.push_back(PhaseShifter{overflow, -std::numbers::pi / 2});
    c.components.push_back(Coupler2x2{{in_space, overflow}, {kept, dropped}});
    c.output_path = kept;
    c.output_time_offset = d;
    c.max_time_bin = c.output_time_offset + 2 * d - 2;
    c.ideal_gate = "sum";
    c.validate();
    return c;
}

/// Appends the 1-bin and 2-bin delay interferometers after a three-bin
/// circuit. All three output bins then overlap at frame bin 2, where the
/// detected amplitude is proportional to their sum.
inline Circuit with_fringe_analyzer(Circuit c, double phase1 = 0.0, double phase2 = 0.0) {
    c.name += "+analyzer";
    c.components.push_back(DelayInterferometer{c.output_path, 1, phase1});
    c.components.push_back(DelayInterferometer{c.output_path, 2, phase2});
    c.max_time_bin += 3;
    c.validate();
    return c;
}

/// Frame time bin at which the analyzer overlaps all three inputs.
inline constexpr int kFringeReadoutBin = 2;

/// Input preparation for basis state |m>_f |n>_t: a pulse shaper selects
/// frequency bin m and an intensity modulator carves time bin n out of a
/// source that fills every bin uniformly. `single_frequency` models a CW
/// laser on bin 0 only (no shaper).
inline FieldState prepare_basis_input(QuditDims dims, int m, int n, double im_extinction_db,
                                      double shaper_extinction_db, bool single_frequency = false, int path = 0) {
    const int nf = single_frequency ? 1 : dims.freq();
    const double amp = 1.0 / std::sqrt(static_cast<double>(nf * dims.time()));
    FieldState s(dims);
    for (int f = 0; f < nf; ++f) {
        for (int t = 0; t < dims.time(); ++t) {
            s.add({path, f, t}, amp);
        }
    }
    PhysicalGrid unused;
    if (!single_frequency) {
        std::vector<Complex> mask(static_cast<std::size_t>(dims.freq()), Complex{});
        mask[static_cast<std::size_t>(m)] = 1.0;
        s = apply_component(PulseShaper{path, mask, shaper_extinction_db}, s, unused);
    } else if (m != 0) {
        throw std::out_of_range("single-frequency source only provides bin 0");
    }
    std::vector<bool> carve(static_cast<std::size_t>(dims.time()), false);
    carve[static_cast<std::size_t>(n)] = true;
    return apply_component(IntensityModulator{path, carve, im_extinction_db}, s, unused);
}

/// Time-bin superposition with relative phases 0, phi, 2 phi, ... on
/// frequency bin 0, carved and phased as in the state-preparation stage.
inline FieldState prepare_phase_ramp(QuditDims dims, double phi, int path = 0) {
    FieldState s(dims);
    const double amp = 1.0 / std::sqrt(static_cast<double>(dims.time()));
    for (int t = 0; t < dims.time(); ++t) {
        s.add({path, 0, t}, std::polar(amp, t * phi));
    }
    return s;
}

} // namespace tfqsim::photonic
