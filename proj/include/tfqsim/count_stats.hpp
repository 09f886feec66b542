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
 * Photon-count sampling, accidental subtraction, Bayesian mean estimation
 * of outcome probabilities under a uniform Dirichlet prior, and
 * fringe-visibility extraction.
 */

#pragma once

#include "tfqsim/matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfqsim {

using Rng = std::mt19937_64;

/// Independent stream for (seed, key...). Identical keys give identical streams
/// regardless of evaluation order or thread.
inline Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (auto k : keys) {
        words.push_back(static_cast<std::uint32_t>(k));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

/// Mean and standard deviation of an estimate.
struct Posterior {
    double mean = 0.0;
    double std = 0.0;
};

/// Multinomial draw of `shots` detections over `probs`, plus independent
/// Poisson(background_mean) counts on every outcome.
inline std::vector<std::uint64_t> sample_counts(std::span<const double> probs, std::uint64_t shots,
                                                double background_mean, Rng &rng) {
    if (probs.empty()) {
        throw std::invalid_argument("empty outcome distribution");
    }
    double total = 0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw std::invalid_argument("negative or NaN outcome probability");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("outcome probabilities sum to " + std::to_string(total));
    }
    if (background_mean < 0) {
        throw std::invalid_argument("negative background rate");
    }
    std::vector<std::uint64_t> counts(probs.size(), 0);
    std::uint64_t left = shots;
    double mass = 1.0;
    for (std::size_t i = 0; i + 1 < probs.size() && left > 0; ++i) {
        double q = mass > 0 ? std::clamp(probs[i] / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> draw(left, q);
        counts[i] = draw(rng);
        left -= counts[i];
        mass -= probs[i];
    }
    counts.back() += left;
    if (background_mean > 0) {
        std::poisson_distribution<std::uint64_t> bg(background_mean);
        for (auto &c : counts) {
            c += bg(rng);
        }
    }
    return counts;
}

/// Background-subtracted counts, floored at zero.
struct CorrectedCounts {
    std::vector<double> values;
    bool floored = false;
};

inline CorrectedCounts subtract_accidentals(std::span<const std::uint64_t> raw, double accidental) {
    if (accidental < 0) {
        throw std::invalid_argument("accidental estimate must be >= 0");
    }
    CorrectedCounts out;
    out.values.reserve(raw.size());
    for (auto c : raw) {
        double v = static_cast<double>(c) - accidental;
        if (v < 0) {
            v = 0;
            out.floored = true;
        }
        out.values.push_back(v);
    }
    return out;
}

/// Posterior mean and standard deviation of one outcome probability given
/// `c_u` hits out of `c_tot` over `n_outcomes` outcomes:
///   (1 + C) / (N + T) +- sqrt((1 + C) / (N + T)^2 * (N + T - C - 1) / (N + T + 1))
inline Posterior bme_probability(std::uint64_t c_u, std::uint64_t c_tot, int n_outcomes) {
    if (c_u > c_tot) {
        throw std::invalid_argument("outcome count exceeds total count");
    }
    if (n_outcomes < 2) {
        throw std::invalid_argument("BME needs at least two outcomes");
    }
    const double c = static_cast<double>(c_u);
    const double nt = static_cast<double>(n_outcomes) + static_cast<double>(c_tot);
    const double mean = (1.0 + c) / nt;
    const double var = (1.0 + c) / (nt * nt) * (nt - c - 1.0) / (nt + 1.0);
    return {mean, std::sqrt(var)};
}

/// Counts for one basis input.
struct CountRow {
    std::vector<std::uint64_t> raw;
    double accidental = 0.0; ///< per-outcome estimate subtracted
    std::vector<double> corrected;
    bool floored = false;

    std::uint64_t raw_total() const { return std::accumulate(raw.begin(), raw.end(), std::uint64_t{0}); }

    /// Corrected counts rounded to integers, as consumed by BME.
    std::vector<std::uint64_t> estimation_counts() const {
        std::vector<std::uint64_t> out;
        out.reserve(corrected.size());
        for (double v : corrected) {
            out.push_back(static_cast<std::uint64_t>(std::llround(v)));
        }
        return out;
    }
};

/// Rows are basis inputs, columns outcomes.
struct CountTable {
    int n_outcomes = 0;
    std::vector<CountRow> rows;
    std::uint64_t shots = 0;
    double background_rate = 0.0;
    bool accidental_subtracted = false;

    int n_inputs() const { return static_cast<int>(rows.size()); }

    void add_row(std::vector<std::uint64_t> raw, double accidental) {
        if (static_cast<int>(raw.size()) != n_outcomes) {
            throw std::invalid_argument("count row width does not match outcome count");
        }
        CountRow r;
        auto corr = subtract_accidentals(raw, accidental);
        r.raw = std::move(raw);
        r.accidental = accidental;
        r.corrected = std::move(corr.values);
        r.floored = corr.floored;
        rows.push_back(std::move(r));
    }

    /// Column-normalized corrected counts (outcome x input).
    RMatrix normalized() const {
        RMatrix m = RMatrix::Zero(n_outcomes, n_inputs());
        for (int j = 0; j < n_inputs(); ++j) {
            const auto &c = rows[static_cast<std::size_t>(j)].corrected;
            double tot = std::accumulate(c.begin(), c.end(), 0.0);
            for (int i = 0; i < n_outcomes; ++i) {
                m(i, j) = tot > 0 ? c[static_cast<std::size_t>(i)] / tot : 0.0;
            }
        }
        return m;
    }
};

/// CSV with header: input,outcome,raw,accidental,corrected
inline void write_count_table_csv(std::ostream &os, const CountTable &t) {
    os << "input,outcome,raw,accidental,corrected\n";
    for (int j = 0; j < t.n_inputs(); ++j) {
        const auto &r = t.rows[static_cast<std::size_t>(j)];
        for (int i = 0; i < t.n_outcomes; ++i) {
            os << j << ',' << i << ',' << r.raw[static_cast<std::size_t>(i)] << ',' << format_real(r.accidental) << ','
               << format_real(r.corrected[static_cast<std::size_t>(i)]) << '\n';
        }
    }
}

/// Mean BME probability of the ideal outcome over all inputs; constituent
/// errors add in quadrature.
inline Posterior computational_fidelity(const CountTable &table, std::span<const int> ideal_outcome) {
    if (table.n_inputs() == 0) {
        throw std::invalid_argument("count table has no inputs");
    }
    if (static_cast<int>(ideal_outcome.size()) != table.n_inputs()) {
        throw std::invalid_argument("ideal outcome map covers " + std::to_string(ideal_outcome.size()) +
                                    " inputs but the table has " + std::to_string(table.n_inputs()));
    }
    double sum = 0;
    double var = 0;
    for (int j = 0; j < table.n_inputs(); ++j) {
        const auto counts = table.rows[static_cast<std::size_t>(j)].estimation_counts();
        const int u = ideal_outcome[static_cast<std::size_t>(j)];
        if (u < 0 || u >= table.n_outcomes) {
            throw std::out_of_range("ideal outcome index out of range");
        }
        const auto tot = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
        auto p = bme_probability(counts[static_cast<std::size_t>(u)], tot, table.n_outcomes);
        sum += p.mean;
        var += p.std * p.std;
    }
    const double n = table.n_inputs();
    return {sum / n, std::sqrt(var) / n};
}

/// Expected projection of a phase-ramp input through a depolarized d-bin X
/// gate onto the uniform superposition:
///   lambda |sum_n e^{i n phi}|^2 / d^2 + (1 - lambda) / d
inline double fringe_expected(double phi, double lambda, int d = 3) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::domain_error("depolarizing lambda must lie in [0, 1]");
    }
    Complex s{};
    for (int n = 0; n < d; ++n) {
        s += std::polar(1.0, n * phi);
    }
    return lambda * std::norm(s) / (d * d) + (1.0 - lambda) / d;
}

/// One fringe point: background-corrected counts and their variance.
struct FringeSample {
    double phi = 0.0;
    double corrected = 0.0;
    double variance = 0.0;
};

/// Single acquisition at one phase setting.
struct FringeMeasurement {
    double phi = 0.0;
    std::uint64_t raw = 0;
    double corrected = 0.0;
};

enum class VisibilityError {
    kPoisson,       ///< variance of the mean from raw Poisson counts
    kRepeatScatter, ///< sample variance of the repeats
};

/// Averages repeated acquisitions that share a phase setting.
inline std::vector<FringeSample> average_repeats(std::span<const FringeMeasurement> ms,
                                                 VisibilityError model = VisibilityError::kPoisson) {
    std::map<double, std::vector<const FringeMeasurement *>> groups;
    for (const auto &m : ms) {
        groups[m.phi].push_back(&m);
    }
    std::vector<FringeSample> out;
    for (const auto &[phi, g] : groups) {
        const double n = static_cast<double>(g.size());
        double mean = 0, raw_mean = 0;
        for (const auto *m : g) {
            mean += m->corrected;
            raw_mean += static_cast<double>(m->raw);
        }
        mean /= n;
        raw_mean /= n;
        double var = 0;
        if (model == VisibilityError::kPoisson) {
            var = raw_mean / n;
        } else if (g.size() > 1) {
            for (const auto *m : g) {
                var += (m->corrected - mean) * (m->corrected - mean);
            }
            var = var / (n - 1.0) / n;
        }
        out.push_back({phi, mean, var});
    }
    return out;
}

/// (max - min) / (max + min) over the extremal samples, with the two
/// extremal variances propagated to first order.
inline Posterior visibility(std::span<const FringeSample> samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument("visibility needs at least two fringe samples");
    }
    auto [lo, hi] = std::minmax_element(samples.begin(), samples.end(),
                                        [](const auto &a, const auto &b) { return a.corrected < b.corrected; });
    const double a = hi->corrected;
    const double b = lo->corrected;
    const double s = a + b;
    if (!(s > 0)) {
        throw std::domain_error("fringe maximum plus minimum is zero");
    }
    const double v = (a - b) / s;
    const double dva = 2.0 * b / (s * s);
    const double dvb = -2.0 * a / (s * s);
    return {v, std::sqrt(dva * dva * hi->variance + dvb * dvb * lo->variance)};
}

/// Convenience overload: (phi, corrected counts) pairs with Poisson variance.
inline Posterior visibility(std::span<const std::pair<double, double>> points) {
    std::vector<FringeSample> s;
    for (auto [phi, c] : points) {
        s.push_back({phi, c, std::max(c, 0.0)});
    }
    return visibility(std::span<const FringeSample>(s));
}

} // namespace tfqsim
