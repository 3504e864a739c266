// Copyright 2026 The quboform Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <map>
#include <string>
#include <utility>

#include "quboform/rational.hpp"

namespace quboform {

/// Quadratic polynomial P(y, s) over M logical and M̄ slack binary variables.
///
/// Local variable k < M is y_{k+1}; k >= M is s_{k-M+1}. A key (i, i) holds
/// the linear coefficient of variable i (v_i^2 = v_i on binaries), a key
/// (i, j) with i < j the coupling. Zero coefficients are never stored.
class QuadraticPenalty {
 public:
    using Key = std::pair<int, int>;

    QuadraticPenalty() = default;
    QuadraticPenalty(int m_logical, int m_slack);

    /// Reads forms such as "-x1-x2+2x1x2" or "-5s1+2s1x2+1/2". Variables are
    /// x1..xM and s1..sM̄.
    static QuadraticPenalty parse(const std::string& text, int m_logical, int m_slack);

    int m_logical() const { return m_logical_; }
    int m_slack() const { return m_slack_; }
    int size() const { return m_logical_ + m_slack_; }

    const Rational& constant() const { return a0_; }
    void add_constant(const Rational& c) {
        a0_ += c;
        a0_.canonicalize();
    }

    void add(int i, int j, const Rational& c);
    Rational coeff(int i, int j) const;
    const std::map<Key, Rational>& terms() const { return coeffs_; }

    /// Nonzero coefficients including the constant.
    int nonzero_count() const { return static_cast<int>(coeffs_.size()) + (a0_ != 0); }

    Rational eval(const Bits& y, const Bits& s) const;
    Rational eval_joint(const Bits& v) const;

    QuadraticPenalty scaled(const Rational& c) const;
    QuadraticPenalty& operator+=(const QuadraticPenalty& other);
    bool operator==(const QuadraticPenalty& other) const;

    std::string to_string() const;

 private:
    int m_logical_ = 0;
    int m_slack_ = 0;
    Rational a0_;
    std::map<Key, Rational> coeffs_;
};

Rational eval_penalty(const QuadraticPenalty& p, const Bits& y, const Bits& s);

/// max over s of P(y, s).
Rational max_over_slack(const QuadraticPenalty& p, const Bits& y);

/// max over (y, s) of P(y, s).
Rational max_value(const QuadraticPenalty& p);

}  // namespace quboform
