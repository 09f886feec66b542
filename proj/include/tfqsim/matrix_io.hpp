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
 * CSV serialization of dense matrices.
 *
 * One CSV line per matrix row. Complex entries are written as "re+imj" /
 * "re-imj" with 17 significant digits, so a write/read cycle is exact.
 * Real matrices are written as plain decimals; the reader accepts both.
 */

#pragma once

#include "tfqsim/qudit_state.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfqsim {

inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    return buf;
}

inline std::string format_complex(Complex z) {
    double im = z.imag() == 0.0 ? 0.0 : z.imag();
    std::string out = format_real(z.real());
    out += std::signbit(im) ? '-' : '+';
    out += format_real(std::abs(im));
    out += 'j';
    return out;
}

namespace detail {

inline double parse_double_exact(const std::string &text) {
    if (text.empty()) {
        throw std::invalid_argument("empty numeric field");
    }
    char *end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
        throw std::invalid_argument("malformed number '" + text + "'");
    }
    return v;
}

inline std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace detail

/// Parses "re+imj", "re-imj", or a bare real.
inline Complex parse_complex(const std::string &raw) {
    std::string s = detail::trim(raw);
    if (s.empty()) {
        throw std::invalid_argument("empty complex field");
    }
    if (s.back() != 'j') {
        return {detail::parse_double_exact(s), 0.0};
    }
    s.pop_back();
    // The real/imag split is the last sign that is not a leading sign or an exponent sign.
    for (std::size_t i = s.size() - 1; i > 0; --i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            double re = detail::parse_double_exact(s.substr(0, i));
            double im = detail::parse_double_exact(s.substr(i));
            return {re, im};
        }
    }
    return {0.0, detail::parse_double_exact(s)};
}

inline void write_matrix_csv(std::ostream &os, const CMatrix &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) {
                os << ',';
            }
            os << format_complex(m(r, c));
        }
        os << '\n';
    }
}

inline void write_matrix_csv(std::ostream &os, const RMatrix &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) {
                os << ',';
            }
            os << format_real(m(r, c));
        }
        os << '\n';
    }
}

inline CMatrix read_matrix_csv(std::istream &is) {
    std::vector<std::vector<Complex>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (detail::trim(line).empty()) {
            continue;
        }
        std::vector<Complex> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            row.push_back(parse_complex(field));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::invalid_argument("ragged matrix CSV");
        }
        rows.push_back(std::move(row));
    }
    CMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

} // namespace tfqsim
