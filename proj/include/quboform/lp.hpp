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

#include <optional>
#include <utility>
#include <vector>

#include "quboform/detail/num.hpp"
#include "quboform/rational.hpp"

namespace quboform {

/// Sparse linear form: (variable, coefficient) pairs.
using LinearForm = std::vector<std::pair<int, Rational>>;

/// Exact simplex dictionary over free (unbounded) variables z_0..z_{n-1}.
///
/// Each added inequality g.z <= h introduces a nonnegative slack row; the
/// dictionary is kept primal feasible after every addition, so an
/// infeasible addition is detected at the moment it happens. Copying a
/// dictionary is the intended way to branch.
class Dictionary {
 public:
    explicit Dictionary(int num_vars);

    int num_vars() const { return n_; }
    int num_rows() const { return static_cast<int>(basic_.size()); }
    long pivots() const { return pivots_; }

    /// Adds g.z <= h. Returns false when the system became infeasible; the
    /// dictionary must then be discarded.
    bool add_le(const LinearForm& g, const Rational& h);
    bool add_ge(const LinearForm& g, const Rational& h);

    /// Snapshot of the dictionary size and pivot history. Exact pivots are
    /// involutions, so rollback replays the log backwards and drops rows.
    struct Mark {
        std::size_t pivots;
        std::size_t rows;
        int next_var;
    };
    Mark mark() const;
    void rollback(const Mark& m);

    /// True when the current basic point already satisfies g.z >= h.
    bool satisfies_ge(const LinearForm& g, const Rational& h) const;

    /// Current basic solution.
    std::vector<Rational> point() const;

    enum class Outcome { Optimal, Unbounded };
    /// Minimizes c.z over the current system (which must be feasible).
    Outcome minimize(const LinearForm& c);

 private:
    // Expression in the current nonbasic columns.
    using Num = detail::Num;
    struct Expr {
        Num beta;
        std::vector<Num> alpha;
    };

    Expr express(const LinearForm& g) const;
    void pivot(int row, int col);
    void apply_pivot(int row, int col);
    int add_row(Expr e);
    bool is_free(int var) const { return var < n_; }
    bool restore(int row);

    int n_;
    int next_var_;
    long pivots_ = 0;
    std::vector<int> basic_;
    std::vector<int> nonbasic_;
    std::vector<Num> beta_;
    std::vector<std::vector<Num>> alpha_;
    std::vector<int> row_of_;  // free variable -> row, or -1
    std::vector<std::pair<int, int>> log_;
};

struct LpConstraint {
    LinearForm coef;
    Rational rhs;
};

struct LpProblem {
    int num_vars = 0;
    std::vector<LpConstraint> equalities;
    std::vector<LpConstraint> inequalities;  // coef.z <= rhs
    std::optional<LinearForm> objective;     // minimized
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rational> z;
    Rational value;
    long pivots = 0;
};

LpResult lp_feasible(const LpProblem& problem);

}  // namespace quboform
