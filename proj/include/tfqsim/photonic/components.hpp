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
 * Passive and electro-optic components acting on a FieldState.
 *
 * Each component is a linear map that sends every input mode to a short
 * list of output modes. Modes on paths a component does not touch pass
 * through unchanged.
 */

#pragma once

#include "tfqsim/photonic/field.hpp"

#include <array>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace tfqsim::photonic {

/// Carves time bins. Blocked bins (and bins past the flag list) leak at the
/// extinction ratio.
struct IntensityModulator {
    int path = 0;
    std::vector<bool> transmit;
    double extinction_db = kInfiniteExtinction;
    bool operator==(const IntensityModulator &) const = default;
};

/// Per-time-bin phase; bins past the list get phase 0.
struct PhaseModulator {
    int path = 0;
    std::vector<double> phases;
    bool operator==(const PhaseModulator &) const = default;
};

/// Per-frequency complex transmission. Zero entries (and bins past the
/// mask) are blocked and leak at the extinction ratio.
struct PulseShaper {
    int path = 0;
    std::vector<Complex> mask;
    double extinction_db = kInfiniteExtinction;
    bool operator==(const PulseShaper &) const = default;
};

/// 1x2 switch: time bin t leaves on output_paths[ports[t]].
struct MzmSwitch {
    int input_path = 0;
    std::array<int, 2> output_paths{1, 2};
    std::vector<int> ports;
    double extinction_db = kInfiniteExtinction;
    bool operator==(const MzmSwitch &) const = default;
};

/// 50/50 coupler with transfer (1/sqrt2)[[1, i], [i, 1]].
struct Coupler2x2 {
    std::array<int, 2> inputs{0, 1};
    std::array<int, 2> outputs{0, 1};
    bool operator==(const Coupler2x2 &) const = default;
};

/// t -> t + bins on one path. Negative values advance the path.
struct FiberDelay {
    int path = 0;
    int bins = 0;
    bool operator==(const FiberDelay &) const = default;
};

struct DwdmBand {
    std::vector<int> freqs;
    int path = 0;
    bool operator==(const DwdmBand &) const = default;
};

/// Wavelength (de)multiplexer between one common path and one path per band.
struct Dwdm {
    int common_path = 0;
    std::vector<DwdmBand> bands;
    bool multiplex = false; ///< false: common -> bands, true: bands -> common
    double extinction_db = kInfiniteExtinction;
    bool operator==(const Dwdm &) const = default;
};

/// Chirped fiber Bragg grating: frequency bin f is delayed by
/// cfbg_delay_bins(grid, dispersion, f) bins.
struct Cfbg {
    int path = 0;
    double dispersion_ns_per_nm = -2.0;
    bool operator==(const Cfbg &) const = default;
};

struct PhaseShifter {
    int path = 0;
    double phase = 0.0;
    bool operator==(const PhaseShifter &) const = default;
};

/// Unbalanced interferometer on one path, kept output only:
/// a(t) -> (a(t) + e^{i phase} a(t - delay)) / 2.
struct DelayInterferometer {
    int path = 0;
    int delay_bins = 1;
    double phase = 0.0;
    bool operator==(const DelayInterferometer &) const = default;
};

using Component = std::variant<IntensityModulator, PhaseModulator, PulseShaper, MzmSwitch, Coupler2x2, FiberDelay,
                               Dwdm, Cfbg, PhaseShifter, DelayInterferometer>;

inline std::string component_name(const Component &c) {
    static constexpr const char *names[] = {"intensity_modulator", "phase_modulator", "pulse_shaper",
                                            "mzm_switch",          "coupler_2x2",     "fiber_delay",
                                            "dwdm",                "cfbg",            "phase_shifter",
                                            "delay_interferometer"};
    return names[c.index()];
}

/// Paths a component reads from; they must exist in the incoming state.
inline std::vector<int> input_paths(const Component &c) {
    return std::visit(
        [](const auto &x) -> std::vector<int> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, MzmSwitch>) {
                return {x.input_path};
            } else if constexpr (std::is_same_v<T, Coupler2x2>) {
                return {x.inputs[0], x.inputs[1]};
            } else if constexpr (std::is_same_v<T, Dwdm>) {
                if (!x.multiplex) {
                    return {x.common_path};
                }
                std::vector<int> p;
                for (const auto &b : x.bands) {
                    p.push_back(b.path);
                }
                return p;
            } else {
                return {x.path};
            }
        },
        c);
}

/// Paths a component writes to.
inline std::vector<int> output_paths(const Component &c) {
    return std::visit(
        [](const auto &x) -> std::vector<int> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, MzmSwitch>) {
                return {x.output_paths[0], x.output_paths[1]};
            } else if constexpr (std::is_same_v<T, Coupler2x2>) {
                return {x.outputs[0], x.outputs[1]};
            } else if constexpr (std::is_same_v<T, Dwdm>) {
                if (x.multiplex) {
                    return {x.common_path};
                }
                std::vector<int> p;
                for (const auto &b : x.bands) {
                    p.push_back(b.path);
                }
                return p;
            } else {
                return {x.path};
            }
        },
        c);
}

namespace detail {

/// Sink that accumulates transformed modes into the next state.
class Emitter {
  public:
    explicit Emitter(const FieldState &in) : out_{in.dims()} {
        for (int p : in.paths()) {
            out_.declare_path(p);
        }
    }
    void emit(const ModeKey &k, Complex a) {
        if (a != Complex{}) {
            out_.add(k, a);
        }
    }
    void declare(int path) { out_.declare_path(path); }
    FieldState take() { return std::move(out_); }

  private:
    FieldState out_;
};

inline int band_of(const Dwdm &d, int f) {
    for (std::size_t b = 0; b < d.bands.size(); ++b) {
        for (int g : d.bands[b].freqs) {
            if (g == f) {
                return static_cast<int>(b);
            }
        }
    }
    return -1;
}

/// Field transmission of band `b` at frequency `f`. Columns are unit norm so
/// demultiplexing is isometric and multiplexing is a contraction.
inline double dwdm_transmission(const Dwdm &d, int b, int f) {
    const double eps = leak_amplitude(d.extinction_db);
    const int home = band_of(d, f);
    if (home < 0) {
        return eps;
    }
    if (home != b) {
        return eps;
    }
    const double leaked = static_cast<double>(d.bands.size() - 1) * eps * eps;
    return std::sqrt(std::max(0.0, 1.0 - leaked));
}

struct ModeMapper {
    const PhysicalGrid &grid;
    const ModeKey &k;
    Complex a;
    Emitter &out;

    void operator()(const IntensityModulator &c) const {
        if (k.path != c.path) {
            return out.emit(k, a);
        }
        bool pass = k.t < static_cast<int>(c.transmit.size()) && c.transmit[static_cast<std::size_t>(k.t)];
        out.emit(k, pass ? a : a * leak_amplitude(c.extinction_db));
    }

    void operator()(const PhaseModulator &c) const {
        if (k.path != c.path || k.t >= static_cast<int>(c.phases.size())) {
            return out.emit(k, a);
        }
        out.emit(k, a * std::polar(1.0, c.phases[static_cast<std::size_t>(k.t)]));
    }

    void operator()(const PulseShaper &c) const {
        if (k.path != c.path) {
            return out.emit(k, a);
        }
        Complex m = k.f < static_cast<int>(c.mask.size()) ? c.mask[static_cast<std::size_t>(k.f)] : Complex{};
        out.emit(k, m != Complex{} ? a * m : a * leak_amplitude(c.extinction_db));
    }

    void operator()(const MzmSwitch &c) const {
        if (k.path != c.input_path) {
            return out.emit(k, a);
        }
        if (k.t >= static_cast<int>(c.ports.size())) {
            throw std::out_of_range("MZM switch has no port assignment for time bin " + std::to_string(k.t));
        }
        const int port = c.ports[static_cast<std::size_t>(k.t)];
        const double eps = leak_amplitude(c.extinction_db);
        out.emit({c.output_paths[static_cast<std::size_t>(port)], k.f, k.t}, a * std::sqrt(1.0 - eps * eps));
        out.emit({c.output_paths[static_cast<std::size_t>(1 - port)], k.f, k.t}, a * eps);
    }

    void operator()(const Coupler2x2 &c) const {
        static const double r = 1.0 / std::numbers::sqrt2;
        static const Complex i_r{0.0, 1.0 / std::numbers::sqrt2};
        if (k.path == c.inputs[0]) {
            out.emit({c.outputs[0], k.f, k.t}, a * r);
            out.emit({c.outputs[1], k.f, k.t}, a * i_r);
        } else if (k.path == c.inputs[1]) {
            out.emit({c.outputs[0], k.f, k.t}, a * i_r);
            out.emit({c.outputs[1], k.f, k.t}, a * r);
        } else {
            out.emit(k, a);
        }
    }

    void operator()(const FiberDelay &c) const {
        if (k.path != c.path) {
            return out.emit(k, a);
        }
        out.emit({k.path, k.f, k.t + c.bins}, a);
    }

    void operator()(const Dwdm &c) const {
        if (!c.multiplex) {
            if (k.path != c.common_path) {
                return out.emit(k, a);
            }
            for (std::size_t b = 0; b < c.bands.size(); ++b) {
                out.emit({c.bands[b].path, k.f, k.t}, a * dwdm_transmission(c, static_cast<int>(b), k.f));
            }
            return;
        }
        for (std::size_t b = 0; b < c.bands.size(); ++b) {
            if (k.path == c.bands[b].path) {
                return out.emit({c.common_path, k.f, k.t}, a * dwdm_transmission(c, static_cast<int>(b), k.f));
            }
        }
        out.emit(k, a);
    }

    void operator()(const Cfbg &c) const {
        if (k.path != c.path) {
            return out.emit(k, a);
        }
        out.emit({k.path, k.f, k.t + cfbg_delay_bins(grid, c.dispersion_ns_per_nm, k.f)}, a);
    }

    void operator()(const PhaseShifter &c) const {
        out.emit(k, k.path == c.path ? a * std::polar(1.0, c.phase) : a);
    }

    void operator()(const DelayInterferometer &c) const {
        if (k.path != c.path) {
            return out.emit(k, a);
        }
        out.emit(k, a * 0.5);
        out.emit({k.path, k.f, k.t + c.delay_bins}, a * std::polar(0.5, c.phase));
    }
};

inline void check_static(const Component &c) {
    std::visit(
        [](const auto &x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, MzmSwitch>) {
                for (int p : x.ports) {
                    if (p != 0 && p != 1) {
                        throw std::invalid_argument("MZM port must be 0 or 1");
                    }
                }
                if (x.output_paths[0] == x.output_paths[1] || x.output_paths[0] == x.input_path ||
                    x.output_paths[1] == x.input_path) {
                    throw std::invalid_argument("MZM switch paths must be distinct");
                }
            } else if constexpr (std::is_same_v<T, Coupler2x2>) {
                if (x.inputs[0] == x.inputs[1] || x.outputs[0] == x.outputs[1]) {
                    throw std::invalid_argument("coupler ports must be distinct");
                }
            } else if constexpr (std::is_same_v<T, PulseShaper>) {
                for (const auto &m : x.mask) {
                    if (std::abs(m) > 1.0 + 1e-12) {
                        throw std::invalid_argument("pulse shaper mask entry exceeds unit transmission");
                    }
                }
            } else if constexpr (std::is_same_v<T, Dwdm>) {
                for (const auto &b : x.bands) {
                    if (b.path == x.common_path) {
                        throw std::invalid_argument("DWDM band path equals common path");
                    }
                }
            } else if constexpr (std::is_same_v<T, DelayInterferometer>) {
                if (x.delay_bins <= 0) {
                    throw std::invalid_argument("delay interferometer needs a positive delay");
                }
            }
        },
        c);
}

} // namespace detail

/// Applies one component. Throws std::invalid_argument for a path the
/// state does not have and std::domain_error for a negative time index.
inline FieldState apply_component(const Component &c, const FieldState &s, const PhysicalGrid &grid) {
    detail::check_static(c);
    for (int p : input_paths(c)) {
        if (!s.has_path(p)) {
            throw std::invalid_argument(component_name(c) + " reads unknown path " + std::to_string(p));
        }
    }
    detail::Emitter out(s);
    for (int p : output_paths(c)) {
        out.declare(p);
    }
    for (const auto &[k, a] : s.amplitudes()) {
        std::visit(detail::ModeMapper{grid, k, a, out}, c);
    }
    return out.take();
}

} // namespace tfqsim::photonic
