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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "quboform/penalty.hpp"
#include "quboform/rational.hpp"

namespace quboform {

enum class RowKind { Penalty, NoPenalty, Free, Exact };

struct RowLabel {
    RowKind kind = RowKind::Free;
    Rational value;  // used by Exact only

    static RowLabel penalty() { return {RowKind::Penalty, 0}; }
    static RowLabel no_penalty() { return {RowKind::NoPenalty, 0}; }
    static RowLabel free() { return {RowKind::Free, 0}; }
    static RowLabel exact(const Rational& v) { return {RowKind::Exact, v}; }

    bool operator==(const RowLabel& o) const {
        return kind == o.kind && (kind != RowKind::Exact || value == o.value);
    }
};

/// Required behaviour of a penalty at each of the 2^M logical combinations.
/// Row index uses the bit order of bits_from_index.
class SubConstraintTable {
 public:
    SubConstraintTable() = default;
    explicit SubConstraintTable(int m, RowLabel fill = RowLabel::free());

    int m() const { return m_; }
    std::uint64_t rows() const { return labels_.size(); }
    const RowLabel& at(std::uint64_t y) const { return labels_.at(y); }
    const RowLabel& at(const Bits& y) const { return labels_.at(index_from_bits(y)); }
    void set(std::uint64_t y, const RowLabel& l);
    void set(const Bits& y, const RowLabel& l) { set(index_from_bits(y), l); }

    std::uint64_t count(RowKind k) const;
    std::uint64_t constrained_rows() const { return rows() - count(RowKind::Free); }

    bool operator==(const SubConstraintTable& o) const { return m_ == o.m_ && labels_ == o.labels_; }

 private:
    int m_ = 0;
    std::vector<RowLabel> labels_;
};

constexpr int kMaxTableVars = 12;

using Oracle = std::function<bool(const Bits&)>;

enum class TableMode { Master };

/// NoPenalty where the oracle holds, Penalty where it fails.
SubConstraintTable truth_table_from_oracle(const Oracle& oracle, int m, TableMode mode = TableMode::Master);

/// 1 + ((M + M̄)^2 + M + M̄) / 2.
std::int64_t free_param_count(int m, int m_slack);

struct SolveOptions {
    std::int64_t node_budget = 100000;
    bool sparsify = true;
};

struct PenaltySolveReport {
    QuadraticPenalty polynomial;
    int slacks_used = 0;
    /// For every NoPenalty or Exact row, the slack assignment attaining its value.
    std::vector<std::pair<std::uint64_t, Bits>> witness_map;
    std::int64_t branch_count = 0;
    std::int64_t lp_count = 0;
    /// All smaller slack counts were proven infeasible (not cut by budget).
    bool minimal = true;
};

enum class SolveStatus { Feasible, Infeasible, BudgetExhausted };

struct FixedSlackResult {
    SolveStatus status = SolveStatus::Infeasible;
    PenaltySolveReport report;
};

FixedSlackResult solve_fixed_slack(const SubConstraintTable& table, int m_slack,
                                   const SolveOptions& options = {});

constexpr int kMaxEnforceSlacks = 4;

/// Smallest M̄ in [0, max_slacks] admitting a penalty. Throws BudgetExhausted
/// carrying the last M̄ tried when none succeeds.
PenaltySolveReport iqp_enforce(const SubConstraintTable& table, int max_slacks,
                               const SolveOptions& options = {});

struct Counterexample {
    std::uint64_t y = 0;
    Bits s;  // empty when the failure is a missing witness
    Rational value;
    std::string reason;
};

struct PenaltyCheck {
    bool ok = true;
    std::vector<Counterexample> counterexamples;
};

PenaltyCheck verify_penalty(const QuadraticPenalty& p, const SubConstraintTable& table);

void write_table(std::ostream& out, const SubConstraintTable& table);
SubConstraintTable read_table(std::istream& in);

}  // namespace quboform
