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
 * Optical mode bookkeeping: sparse single-photon field amplitudes over
 * (path, frequency bin, time bin), and the physical time/frequency grid.
 */

#pragma once

#include "tfqsim/qudit_state.hpp"

#include <cmath>
#include <compare>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace tfqsim::photonic {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kInfiniteExtinction = std::numeric_limits<double>::infinity();

/// Field amplitude leaking through a blocked port with the given power
/// extinction ratio in dB. Infinite extinction means no leakage.
inline double leak_amplitude(double extinction_db) {
    if (std::isinf(extinction_db) && extinction_db > 0) {
        return 0.0;
    }
    if (extinction_db < 0 || std::isnan(extinction_db)) {
        throw std::invalid_argument("extinction ratio must be >= 0 dB");
    }
    return std::pow(10.0, -extinction_db / 20.0);
}

/// One optical mode. `t` may run past d_t - 1 while light is in flight.
struct ModeKey {
    int path = 0;
    int f = 0;
    int t = 0;

    auto operator<=>(const ModeKey &) const = default;
};

/// Sparse amplitude map over optical modes plus the set of spatial paths
/// that exist at this point in a circuit. Passive optics keep the norm <= 1.
class FieldState {
  public:
    explicit FieldState(QuditDims dims) : dims_{dims} {}

    static FieldState basis(QuditDims dims, int path, int f, int t) {
        FieldState s(dims);
        s.add({path, f, t}, 1.0);
        return s;
    }

    /// Places a computational-space state on `path`, time bins 0..d_t-1.
    static FieldState from_pure(const PureState &psi, int path) {
        FieldState s(psi.dims());
        s.declare_path(path);
        for (int i = 0; i < psi.dims().total(); ++i) {
            auto [m, n] = psi.dims().decode(i);
            if (psi[i] != Complex{}) {
                s.add({path, m, n}, psi[i]);
            }
        }
        return s;
    }

    const QuditDims &dims() const { return dims_; }
    const std::map<ModeKey, Complex> &amplitudes() const { return amps_; }
    const std::set<int> &paths() const { return paths_; }
    bool has_path(int path) const { return paths_.contains(path); }
    void declare_path(int path) { paths_.insert(path); }

    /// Accumulates `a` into mode `key`.
    void add(const ModeKey &key, Complex a) {
        if (key.t < 0) {
            throw std::domain_error("negative time index " + std::to_string(key.t) + " on path " +
                                    std::to_string(key.path));
        }
        declare_path(key.path);
        amps_[key] += a;
    }

    Complex amplitude(const ModeKey &key) const {
        auto it = amps_.find(key);
        return it == amps_.end() ? Complex{} : it->second;
    }

    double norm_squared() const {
        double s = 0;
        for (const auto &[k, a] : amps_) {
            s += std::norm(a);
        }
        return s;
    }

    double path_probability(int path) const {
        double s = 0;
        for (const auto &[k, a] : amps_) {
            if (k.path == path) {
                s += std::norm(a);
            }
        }
        return s;
    }

    /// Largest time index carrying nonzero amplitude, or -1 when dark.
    int max_time() const {
        int t = -1;
        for (const auto &[k, a] : amps_) {
            if (a != Complex{}) {
                t = std::max(t, k.t);
            }
        }
        return t;
    }

    FieldState scaled(Complex c) const {
        FieldState out = *this;
        for (auto &[k, a] : out.amps_) {
            a *= c;
        }
        return out;
    }

    friend FieldState operator+(const FieldState &x, const FieldState &y) {
        if (!(x.dims_ == y.dims_)) {
            throw std::invalid_argument("adding field states with different dims");
        }
        FieldState out = x;
        for (int p : y.paths_) {
            out.declare_path(p);
        }
        for (const auto &[k, a] : y.amps_) {
            out.amps_[k] += a;
        }
        return out;
    }

  private:
    QuditDims dims_;
    std::map<ModeKey, Complex> amps_;
    std::set<int> paths_;
};

/// Physical time/frequency grid of the encoding.
struct PhysicalGrid {
    double bin_spacing_ns = 6.0;       ///< time-bin center spacing
    double bin_width_ns = 3.0;         ///< time-bin width
    double freq_spacing_ghz = 380.0;   ///< frequency-bin spacing
    double freq_linewidth_ghz = 0.25;  ///< frequency-bin width
    double center_wavelength_nm = 1553.9;

    /// Three time bins on a 380 GHz microring comb.
    static PhysicalGrid three_bin() { return {}; }

    /// Sixteen 200 ps bins at 1.2 ns with 22 GHz wide bins on a 75 GHz grid.
    static PhysicalGrid sixteen_bin() { return {1.2, 0.2, 75.0, 22.0, 1546.0}; }

    double time_bandwidth_product() const { return freq_spacing_ghz * bin_spacing_ns; }

    /// Non-empty when bins are not well separated in time-frequency.
    std::optional<std::string> separation_warning() const {
        double p = time_bandwidth_product();
        if (p < 10.0) {
            return "time-bandwidth product " + std::to_string(p) +
                   " is below 10; time and frequency bins are not independent";
        }
        return std::nullopt;
    }

    bool operator==(const PhysicalGrid &) const = default;
};

/// Wavelength offset in nm of a frequency offset in GHz around the grid center.
inline double wavelength_offset_nm(const PhysicalGrid &grid, double freq_offset_ghz) {
    return grid.center_wavelength_nm * grid.center_wavelength_nm * freq_offset_ghz / kSpeedOfLight;
}

/// Group delay in ns that a chirped grating imposes on frequency bin `f`.
inline double cfbg_delay_ns(const PhysicalGrid &grid, double dispersion_ns_per_nm, int f) {
    return std::abs(dispersion_ns_per_nm) * wavelength_offset_nm(grid, f * grid.freq_spacing_ghz);
}

inline int cfbg_delay_bins(const PhysicalGrid &grid, double dispersion_ns_per_nm, int f) {
    return static_cast<int>(std::lround(cfbg_delay_ns(grid, dispersion_ns_per_nm, f) / grid.bin_spacing_ns));
}

/// Temporal broadening of one frequency bin after dispersion.
inline double pulse_spread_ns(const PhysicalGrid &grid, double dispersion_ns_per_nm) {
    if (!(grid.freq_linewidth_ghz > 0)) {
        throw std::invalid_argument("frequency bin width must be positive");
    }
    return std::abs(dispersion_ns_per_nm) * wavelength_offset_nm(grid, grid.freq_linewidth_ghz);
}

} // namespace tfqsim::photonic
