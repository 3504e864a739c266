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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "quboform/penalty.hpp"
#include "quboform/rational.hpp"

namespace quboform {

struct VarLabel {
    enum class Kind { Logical, Slack };

    Kind kind = Kind::Logical;
    int arc = -1;
    int node = -1;
    std::string tag;
    int k = -1;

    static VarLabel logical(int arc);
    static VarLabel slack(int node, std::string tag, int k);

    bool is_slack() const { return kind == Kind::Slack; }
    bool operator==(const VarLabel& o) const;
    std::string to_string() const;
};

/// The constraint that owns a group of slack variables.
struct SlackOwner {
    int node = -1;
    std::string tag;

    auto operator<=>(const SlackOwner&) const = default;
};

/// Upper-triangular quadratic form x^T Q x + offset, to be maximized.
/// Logical variables come first (index = arc id), slacks after them.
class Qubo {
 public:
    using Key = std::pair<int, int>;

    explicit Qubo(int n_logical = 0);

    const std::vector<VarLabel>& labels() const { return labels_; }
    int size() const { return static_cast<int>(labels_.size()); }
    int n_logical() const { return n_logical_; }
    int n_slack() const { return size() - n_logical_; }

    const Rational& offset() const { return offset_; }
    void add_offset(const Rational& c) {
        offset_ += c;
        offset_.canonicalize();
    }

    void add(int i, int j, const Rational& c);
    Rational coeff(int i, int j) const;
    const std::map<Key, Rational>& coeffs() const { return coeffs_; }

    /// Claims an owner; false if it was already claimed.
    bool claim_owner(const SlackOwner& owner);
    const std::set<SlackOwner>& owners() const { return owners_; }
    int add_slack(int node, const std::string& tag, int k);

    /// Number of slack labels owned by (node, tag).
    int slack_count(int node, const std::string& tag) const;

    /// Used by the reader; labels must already be in final order.
    void push_label(const VarLabel& label);

 private:
    int n_logical_ = 0;
    std::vector<VarLabel> labels_;
    std::map<Key, Rational> coeffs_;
    Rational offset_;
    std::set<SlackOwner> owners_;
};

struct Block {
    SlackOwner owner;
    std::vector<int> slacks;
    std::vector<int> logicals;
};

/// Slack groups of a Qubo and the logical variables each one touches.
struct BlockIndex {
    std::vector<Block> blocks;
};

/// Groups slack labels by owner. Throws if a coefficient couples slacks of
/// different owners, since block-wise maximization would then be wrong.
BlockIndex build_block_index(const Qubo& q);

Rational eval_qubo(const Qubo& q, const Bits& a);

/// q += scale * p. Logical variable k of p maps to q's logical logical_map[k];
/// slack variables of p become fresh labels owned by `owner`.
void embed_penalty_into(Qubo& q, const QuadraticPenalty& p, const std::vector<int>& logical_map,
                        const SlackOwner& owner, const Rational& scale);
Qubo embed_penalty(const Qubo& q, const QuadraticPenalty& p, const std::vector<int>& logical_map,
                   const SlackOwner& owner, const Rational& scale);

struct QuboMaximum {
    std::vector<Bits> maximizers;
    Rational value;
    bool truncated = false;
};

constexpr int kDefaultQuboBruteCap = 28;

QuboMaximum brute_force_qubo_max(const Qubo& q, int cap = kDefaultQuboBruteCap,
                                 std::size_t report_cap = 4096);

/// Evaluates max over slack completions of a logical assignment, block by
/// block. Uses scaled 64-bit integers when the coefficients allow it.
class SlackMaximizer {
 public:
    SlackMaximizer(const Qubo& q, const BlockIndex& blocks);
    ~SlackMaximizer();
    SlackMaximizer(SlackMaximizer&&) noexcept;

    Rational operator()(const Bits& x) const;
    /// Same, with x packed as an index (x_0 most significant).
    Rational at_index(std::uint64_t x) const;

    /// Values of at_index for every x in [0, 2^n_logical), in a fast
    /// comparable form: value = scaled_value / scale().
    bool exact_integers() const;
    std::int64_t scaled_at_index(std::uint64_t x) const;
    const Rational& scale() const;

 private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

constexpr int kMaxBlockSlacks = 20;

Rational max_over_slacks(const Qubo& q, const BlockIndex& blocks, const Bits& x);

void write_qubo(std::ostream& out, const Qubo& q);
Qubo read_qubo(std::istream& in);
void write_qubo_file(const std::string& path, const Qubo& q);
Qubo read_qubo_file(const std::string& path);

}  // namespace quboform
