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

#include "quboform/lp.hpp"

namespace quboform {

namespace {

constexpr int kObjectiveVar = -1;
constexpr int kDegenerateStreakForBland = 50;

LinearForm negate(const LinearForm& g) {
    LinearForm out;
    out.reserve(g.size());
    for (const auto& [k, c] : g) out.emplace_back(k, -c);
    return out;
}

}  // namespace

Dictionary::Dictionary(int num_vars) : n_(num_vars), next_var_(num_vars), row_of_(num_vars, -1) {
    nonbasic_.resize(n_);
    for (int j = 0; j < n_; ++j) nonbasic_[j] = j;
}

Dictionary::Expr Dictionary::express(const LinearForm& g) const {
    Expr e;
    e.alpha.assign(n_, Num(0));
    for (const auto& [k, c] : g) {
        if (k < 0 || k >= n_) throw Error("lp variable out of range");
        if (c == 0) continue;
        const Num cn(c);
        const bool unit = c == 1;
        int r = row_of_[k];
        if (r < 0) {
            for (int j = 0; j < n_; ++j) {
                if (nonbasic_[j] == k) {
                    e.alpha[j] += cn;
                    break;
                }
            }
            continue;
        }
        e.beta += unit ? beta_[r] : cn * beta_[r];
        const auto& row = alpha_[r];
        for (int j = 0; j < n_; ++j) {
            if (!row[j].is_zero()) e.alpha[j] += unit ? row[j] : cn * row[j];
        }
    }
    return e;
}

int Dictionary::add_row(Expr e) {
    basic_.push_back(next_var_++);
    beta_.push_back(std::move(e.beta));
    alpha_.push_back(std::move(e.alpha));
    return num_rows() - 1;
}

void Dictionary::pivot(int r, int c) {
    ++pivots_;
    log_.emplace_back(r, c);
    apply_pivot(r, c);
}

Dictionary::Mark Dictionary::mark() const { return {log_.size(), basic_.size(), next_var_}; }

void Dictionary::rollback(const Mark& m) {
    while (log_.size() > m.pivots) {
        auto [r, c] = log_.back();
        log_.pop_back();
        apply_pivot(r, c);
    }
    basic_.resize(m.rows);
    beta_.resize(m.rows);
    alpha_.resize(m.rows);
    next_var_ = m.next_var;
}

void Dictionary::apply_pivot(int r, int c) {
    const int entering = nonbasic_[c];
    const int leaving = basic_[r];
    auto& prow = alpha_[r];
    const Num inv = Num(1) / prow[c];
    const Num neg_inv = -inv;
    // entering = (leaving - beta - sum_{j != c} alpha_j n_j) / alpha_c
    beta_[r] = beta_[r] * neg_inv;
    std::vector<int> nz;
    nz.reserve(n_);
    for (int j = 0; j < n_; ++j) {
        if (j == c || prow[j].is_zero()) continue;
        prow[j] = prow[j] * neg_inv;
        nz.push_back(j);
    }
    prow[c] = inv;
    const bool beta_nz = !beta_[r].is_zero();
    for (int i = 0; i < num_rows(); ++i) {
        if (i == r) continue;
        auto& row = alpha_[i];
        if (row[c].is_zero()) continue;
        const Num f = std::move(row[c]);
        if (beta_nz) beta_[i] += f * beta_[r];
        for (int j : nz) row[j] += f * prow[j];
        row[c] = f * inv;
    }
    basic_[r] = entering;
    nonbasic_[c] = leaving;
    if (entering >= 0 && entering < n_) row_of_[entering] = r;
    if (leaving >= 0 && leaving < n_) row_of_[leaving] = -1;
}

bool Dictionary::restore(int row) {
    for (int j = 0; j < n_; ++j) {
        if (is_free(nonbasic_[j]) && !alpha_[row][j].is_zero()) {
            pivot(row, j);
            return true;
        }
    }
    int streak = 0;
    bool bland = false;
    while (beta_[row].sign() < 0) {
        int enter = -1;
        for (int j = 0; j < n_; ++j) {
            if (is_free(nonbasic_[j]) || alpha_[row][j].sign() <= 0) continue;
            if (enter < 0) {
                enter = j;
            } else if (bland ? nonbasic_[j] < nonbasic_[enter] : alpha_[row][j] > alpha_[row][enter]) {
                enter = j;
            }
        }
        if (enter < 0) return false;
        const Num t_self = -beta_[row] / alpha_[row][enter];
        int leave = -1;
        Num t_min;
        for (int i = 0; i < num_rows(); ++i) {
            if (i == row || basic_[i] < n_ || alpha_[i][enter].sign() >= 0) continue;
            Num t = beta_[i] / -alpha_[i][enter];
            if (leave < 0 || t < t_min || (t == t_min && basic_[i] < basic_[leave])) {
                leave = i;
                t_min = std::move(t);
            }
        }
        if (leave >= 0 && t_min < t_self) {
            pivot(leave, enter);
            streak = t_min.is_zero() ? streak + 1 : 0;
            if (streak > kDegenerateStreakForBland) bland = true;
        } else {
            pivot(row, enter);
            return true;
        }
    }
    return true;
}

bool Dictionary::add_le(const LinearForm& g, const Rational& h) {
    Expr e = express(g);
    Expr s;
    s.beta = Num(h) - e.beta;
    s.alpha = std::move(e.alpha);
    for (auto& a : s.alpha) {
        if (!a.is_zero()) a = -a;
    }
    int row = add_row(std::move(s));
    return restore(row);
}

bool Dictionary::add_ge(const LinearForm& g, const Rational& h) { return add_le(negate(g), -h); }

bool Dictionary::satisfies_ge(const LinearForm& g, const Rational& h) const {
    Num v(0);
    for (const auto& [k, c] : g) {
        int r = row_of_[k];
        if (r >= 0) v += c == 1 ? beta_[r] : Num(c) * beta_[r];
    }
    return v >= Num(h);
}

std::vector<Rational> Dictionary::point() const {
    std::vector<Rational> z(n_, Rational(0));
    for (int v = 0; v < n_; ++v) {
        if (row_of_[v] >= 0) z[v] = beta_[row_of_[v]].to_rational();
    }
    return z;
}

Dictionary::Outcome Dictionary::minimize(const LinearForm& c) {
    // The objective travels as an extra unrestricted row so pivots update it.
    Expr e = express(c);
    basic_.push_back(kObjectiveVar);
    beta_.push_back(std::move(e.beta));
    alpha_.push_back(std::move(e.alpha));
    const int obj = num_rows() - 1;
    Outcome outcome = Outcome::Optimal;
    int streak = 0;
    bool bland = false;
    for (;;) {
        int enter = -1;
        bool free_direction = false;
        for (int j = 0; j < n_; ++j) {
            const Num& g = alpha_[obj][j];
            if (is_free(nonbasic_[j])) {
                if (!g.is_zero()) free_direction = true;
                continue;
            }
            if (g.sign() >= 0) continue;
            if (enter < 0 || (bland ? nonbasic_[j] < nonbasic_[enter] : g < alpha_[obj][enter])) enter = j;
        }
        if (free_direction) {
            outcome = Outcome::Unbounded;
            break;
        }
        if (enter < 0) break;
        int leave = -1;
        Num t_min;
        for (int i = 0; i < num_rows(); ++i) {
            if (basic_[i] < n_ || alpha_[i][enter].sign() >= 0) continue;
            Num t = beta_[i] / -alpha_[i][enter];
            if (leave < 0 || t < t_min || (t == t_min && basic_[i] < basic_[leave])) {
                leave = i;
                t_min = std::move(t);
            }
        }
        if (leave < 0) {
            outcome = Outcome::Unbounded;
            break;
        }
        pivot(leave, enter);
        streak = t_min.is_zero() ? streak + 1 : 0;
        if (streak > kDegenerateStreakForBland) bland = true;
    }
    // The objective row sits last and is never a pivot row, so dropping it
    // keeps the pivot log replayable.
    basic_.pop_back();
    beta_.pop_back();
    alpha_.pop_back();
    return outcome;
}

LpResult lp_feasible(const LpProblem& problem) {
    LpResult result;
    Dictionary d(problem.num_vars);
    auto done = [&](LpStatus s) {
        result.status = s;
        result.pivots = d.pivots();
        return result;
    };
    for (const auto& eq : problem.equalities) {
        if (!d.add_le(eq.coef, eq.rhs) || !d.add_ge(eq.coef, eq.rhs)) return done(LpStatus::Infeasible);
    }
    for (const auto& in : problem.inequalities) {
        if (!d.add_le(in.coef, in.rhs)) return done(LpStatus::Infeasible);
    }
    if (problem.objective && d.minimize(*problem.objective) == Dictionary::Outcome::Unbounded) {
        return done(LpStatus::Unbounded);
    }
    result.z = d.point();
    result.value = 0;
    if (problem.objective) {
        for (const auto& [k, c] : *problem.objective) result.value += c * result.z[k];
    }
    return done(LpStatus::Optimal);
}

}  // namespace quboform
