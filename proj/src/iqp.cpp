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

#include "quboform/iqp.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "quboform/lp.hpp"

namespace quboform {

SubConstraintTable::SubConstraintTable(int m, RowLabel fill) : m_(m) {
    if (m < 0 || m > 20) throw Error("table variable count out of range");
    labels_.assign(std::size_t{1} << m, fill);
}

void SubConstraintTable::set(std::uint64_t y, const RowLabel& l) {
    if (l.kind == RowKind::Exact && l.value > 0) throw Error("exact row values must be nonpositive");
    labels_.at(y) = l;
}

std::uint64_t SubConstraintTable::count(RowKind k) const {
    std::uint64_t c = 0;
    for (const auto& l : labels_) c += l.kind == k;
    return c;
}

SubConstraintTable truth_table_from_oracle(const Oracle& oracle, int m, TableMode) {
    if (m > kMaxTableVars) throw Error("truth tables support at most 12 variables");
    SubConstraintTable t(m);
    for (std::uint64_t y = 0; y < t.rows(); ++y) {
        t.set(y, oracle(bits_from_index(y, m)) ? RowLabel::no_penalty() : RowLabel::penalty());
    }
    return t;
}

std::int64_t free_param_count(int m, int m_slack) {
    std::int64_t n = m + m_slack;
    return 1 + (n * n + n) / 2;
}

namespace {

// Unknowns of the generic quadratic: constant, linear terms, then pairs i<j.
class Monomials {
 public:
    explicit Monomials(int n) : n_(n), pair_(n, std::vector<int>(n, -1)) {
        int next = 1 + n;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) pair_[i][j] = next++;
        }
        count_ = next;
    }

    int count() const { return count_; }

    LinearForm features(const Bits& v) const {
        LinearForm f;
        f.emplace_back(0, 1);
        std::vector<int> on;
        for (int i = 0; i < n_; ++i) {
            if (v[i]) on.push_back(i);
        }
        for (int i : on) f.emplace_back(1 + i, 1);
        for (std::size_t a = 0; a < on.size(); ++a) {
            for (std::size_t b = a + 1; b < on.size(); ++b) f.emplace_back(pair_[on[a]][on[b]], 1);
        }
        return f;
    }

    QuadraticPenalty polynomial(const std::vector<Rational>& z, int m, int m_slack) const {
        QuadraticPenalty p(m, m_slack);
        p.add_constant(z[0]);
        for (int i = 0; i < n_; ++i) p.add(i, i, z[1 + i]);
        for (int i = 0; i < n_; ++i) {
            for (int j = i + 1; j < n_; ++j) p.add(i, j, z[pair_[i][j]]);
        }
        return p;
    }

 private:
    int n_;
    int count_;
    std::vector<std::vector<int>> pair_;
};

Bits joint(std::uint64_t y, int m, std::uint64_t s, int m_slack) {
    Bits v = bits_from_index(y, m);
    Bits sb = bits_from_index(s, m_slack);
    v.insert(v.end(), sb.begin(), sb.end());
    return v;
}

Rational row_bound(const RowLabel& l) {
    switch (l.kind) {
        case RowKind::Penalty:
            return -1;
        case RowKind::Exact:
            return l.value;
        default:
            return 0;
    }
}

struct EqRow {
    std::uint64_t y;
    Rational target;
};

class WitnessSearch {
 public:
    WitnessSearch(const Monomials& mono, const std::vector<EqRow>& rows, int m, int m_slack,
                  std::int64_t budget)
            : mono_(mono), rows_(rows), m_(m), ms_(m_slack), budget_(budget), witness_(rows.size(), 0) {}

    enum class Result { Found, Exhausted, Budget };

    Result run(const Dictionary& base) {
        std::vector<std::uint8_t> tied(ms_ > 1 ? ms_ - 1 : 0, 1);
        Dictionary dict(base);
        return descend(0, dict, tied);
    }

    const std::vector<std::uint64_t>& witness() const { return witness_; }
    const std::vector<Rational>& point() const { return point_; }
    std::int64_t branches() const { return branches_; }
    std::int64_t lps() const { return lps_; }

 private:
    bool bit(std::uint64_t w, int k) const { return (w >> (ms_ - 1 - k)) & 1u; }

    Result descend(std::size_t r, Dictionary& dict, const std::vector<std::uint8_t>& tied) {
        if (r == rows_.size()) {
            point_ = dict.point();
            return Result::Found;
        }
        // Row 0 fixes the complement symmetry of each slack; the column order
        // fixes the permutation symmetry among slacks.
        const std::uint64_t limit = r == 0 ? 1 : std::uint64_t{1} << ms_;
        for (std::uint64_t w = 0; w < limit; ++w) {
            bool ordered = true;
            std::vector<std::uint8_t> next_tied(tied);
            for (std::size_t k = 0; k < tied.size(); ++k) {
                if (!tied[k]) continue;
                bool a = bit(w, static_cast<int>(k)), b = bit(w, static_cast<int>(k) + 1);
                if (a < b) {
                    ordered = false;
                    break;
                }
                next_tied[k] = a == b;
            }
            if (!ordered) continue;
            if (++branches_ > budget_) return Result::Budget;
            LinearForm f = mono_.features(joint(rows_[r].y, m_, w, ms_));
            witness_[r] = w;
            if (!dict.satisfies_ge(f, rows_[r].target)) ++lps_;
            const Dictionary::Mark before = dict.mark();
            if (dict.add_ge(f, rows_[r].target)) {
                Result res = descend(r + 1, dict, next_tied);
                if (res != Result::Exhausted) return res;
            }
            dict.rollback(before);
        }
        return Result::Exhausted;
    }

    const Monomials& mono_;
    const std::vector<EqRow>& rows_;
    int m_, ms_;
    std::int64_t budget_;
    std::int64_t branches_ = 0;
    std::int64_t lps_ = 0;
    std::vector<std::uint64_t> witness_;
    std::vector<Rational> point_;
};

// Minimum L1 norm polynomial with the witnesses fixed.
std::vector<Rational> sparsest(const Monomials& mono, const SubConstraintTable& table, int m_slack,
                               const std::vector<EqRow>& rows, const std::vector<std::uint64_t>& witness) {
    const int k = mono.count();
    const int m = table.m();
    LpProblem lp;
    lp.num_vars = 2 * k;
    for (std::uint64_t y = 0; y < table.rows(); ++y) {
        const RowLabel& l = table.at(y);
        if (l.kind == RowKind::Free) continue;
        for (std::uint64_t s = 0; s < (std::uint64_t{1} << m_slack); ++s) {
            lp.inequalities.push_back({mono.features(joint(y, m, s, m_slack)), row_bound(l)});
        }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        lp.equalities.push_back({mono.features(joint(rows[r].y, m, witness[r], m_slack)), rows[r].target});
    }
    LinearForm objective;
    for (int j = 0; j < k; ++j) {
        lp.inequalities.push_back({{{j, 1}, {k + j, -1}}, 0});
        lp.inequalities.push_back({{{j, -1}, {k + j, -1}}, 0});
        objective.emplace_back(k + j, 1);
    }
    lp.objective = objective;
    LpResult res = lp_feasible(lp);
    if (res.status != LpStatus::Optimal) throw std::logic_error("sparsification LP lost feasibility");
    res.z.resize(k);
    return res.z;
}

}  // namespace

FixedSlackResult solve_fixed_slack(const SubConstraintTable& table, int m_slack, const SolveOptions& options) {
    const int m = table.m();
    if (m_slack < 0 || m + m_slack > 10) throw Error("solve_fixed_slack needs M + M̄ <= 10");
    FixedSlackResult out;
    Monomials mono(m + m_slack);
    Dictionary base(mono.count());
    std::vector<EqRow> rows;
    const std::uint64_t n_s = std::uint64_t{1} << m_slack;
    for (std::uint64_t y = 0; y < table.rows(); ++y) {
        const RowLabel& l = table.at(y);
        if (l.kind == RowKind::Free) continue;
        for (std::uint64_t s = 0; s < n_s; ++s) {
            if (!base.add_le(mono.features(joint(y, m, s, m_slack)), row_bound(l))) {
                out.status = SolveStatus::Infeasible;
                out.report.lp_count = 1;
                return out;
            }
        }
        if (l.kind == RowKind::NoPenalty || l.kind == RowKind::Exact) rows.push_back({y, row_bound(l)});
    }
    out.report.lp_count = 1;
    std::vector<std::uint64_t> witness(rows.size(), 0);
    std::vector<Rational> point;
    bool found = false;
    {
        Dictionary uniform(base);
        bool ok = true;
        for (const EqRow& r : rows) {
            if (!uniform.add_ge(mono.features(joint(r.y, m, 0, m_slack)), r.target)) {
                ok = false;
                break;
            }
        }
        ++out.report.lp_count;
        if (ok) {
            found = true;
            point = uniform.point();
        }
    }
    if (!found && m_slack > 0) {
        WitnessSearch search(mono, rows, m, m_slack, options.node_budget);
        auto res = search.run(base);
        out.report.branch_count = search.branches();
        out.report.lp_count += search.lps();
        if (res == WitnessSearch::Result::Budget) {
            out.status = SolveStatus::BudgetExhausted;
            return out;
        }
        if (res == WitnessSearch::Result::Found) {
            found = true;
            witness = search.witness();
            point = search.point();
        }
    }
    if (!found) {
        out.status = SolveStatus::Infeasible;
        return out;
    }
    if (options.sparsify) {
        point = sparsest(mono, table, m_slack, rows, witness);
        ++out.report.lp_count;
    }
    out.status = SolveStatus::Feasible;
    out.report.polynomial = mono.polynomial(point, m, m_slack);
    out.report.slacks_used = m_slack;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.report.witness_map.emplace_back(rows[r].y, bits_from_index(witness[r], m_slack));
    }
    PenaltyCheck check = verify_penalty(out.report.polynomial, table);
    if (!check.ok) throw std::logic_error("solved penalty failed verification");
    return out;
}

PenaltySolveReport iqp_enforce(const SubConstraintTable& table, int max_slacks, const SolveOptions& options) {
    if (max_slacks < 0 || max_slacks > kMaxEnforceSlacks) throw Error("max_slacks must be in [0, 4]");
    bool minimal = true;
    int last = 0;
    for (int ms = 0; ms <= max_slacks && table.m() + ms <= 10; ++ms) {
        last = ms;
        FixedSlackResult r = solve_fixed_slack(table, ms, options);
        if (r.status == SolveStatus::Feasible) {
            r.report.minimal = minimal;
            return std::move(r.report);
        }
        if (r.status == SolveStatus::BudgetExhausted) minimal = false;
    }
    throw BudgetExhausted("no penalty found with at most " + std::to_string(last) + " slack variables", last);
}

PenaltyCheck verify_penalty(const QuadraticPenalty& p, const SubConstraintTable& table) {
    if (p.m_logical() != table.m()) throw Error("penalty and table disagree on M");
    if (p.size() > 20) throw CapExceeded("verify_penalty supports M + M̄ <= 20");
    PenaltyCheck check;
    const int ms = p.m_slack();
    const std::uint64_t n_s = std::uint64_t{1} << ms;
    for (std::uint64_t y = 0; y < table.rows(); ++y) {
        const RowLabel& l = table.at(y);
        if (l.kind == RowKind::Free) continue;
        const Rational bound = row_bound(l);
        bool attained = false;
        Rational best;
        for (std::uint64_t s = 0; s < n_s; ++s) {
            Bits sb = bits_from_index(s, ms);
            Rational v = p.eval(bits_from_index(y, table.m()), sb);
            if (s == 0 || v > best) best = v;
            if (v > bound) {
                std::string why = l.kind == RowKind::Penalty     ? "penalty row above -1"
                                  : l.kind == RowKind::NoPenalty ? "no-penalty row positive"
                                                                 : "exact row above its value";
                check.counterexamples.push_back({y, sb, v, why});
            }
            if (v == bound) attained = true;
        }
        if (l.kind != RowKind::Penalty && !attained) {
            check.counterexamples.push_back({y, {}, best, "row never attains its required value"});
        }
    }
    check.ok = check.counterexamples.empty();
    return check;
}

void write_table(std::ostream& out, const SubConstraintTable& table) {
    out << "table v1\n";
    for (std::uint64_t y = 0; y < table.rows(); ++y) {
        const RowLabel& l = table.at(y);
        out << bits_string(bits_from_index(y, table.m())) << ' ';
        switch (l.kind) {
            case RowKind::Penalty:
                out << "penalty";
                break;
            case RowKind::NoPenalty:
                out << "nopenalty";
                break;
            case RowKind::Free:
                out << "free";
                break;
            case RowKind::Exact:
                out << "exact " << to_string(l.value);
                break;
        }
        out << '\n';
    }
}

SubConstraintTable read_table(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool header = false;
    std::vector<std::pair<Bits, RowLabel>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "table v1") throw ParseError("missing 'table v1' header", lineno);
            header = true;
            continue;
        }
        std::istringstream ss(line);
        std::string bits, kind;
        if (!(ss >> bits >> kind)) throw ParseError("malformed table row", lineno);
        RowLabel l;
        try {
            if (kind == "penalty") {
                l = RowLabel::penalty();
            } else if (kind == "nopenalty") {
                l = RowLabel::no_penalty();
            } else if (kind == "free") {
                l = RowLabel::free();
            } else if (kind == "exact") {
                std::string v;
                if (!(ss >> v)) throw ParseError("exact row needs a value", lineno);
                l = RowLabel::exact(parse_rational(v));
                if (l.value > 0) throw ParseError("exact row values must be nonpositive", lineno);
            } else {
                throw ParseError("unknown row label '" + kind + "'", lineno);
            }
            rows.emplace_back(parse_bits(bits), l);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    if (!header) throw ParseError("missing 'table v1' header", lineno);
    if (rows.empty()) throw ParseError("table has no rows", lineno);
    const int m = static_cast<int>(rows.front().first.size());
    SubConstraintTable table(m);
    std::vector<std::uint8_t> seen(table.rows(), 0);
    for (const auto& [b, l] : rows) {
        if (static_cast<int>(b.size()) != m) throw ParseError("rows of different widths", 0);
        std::uint64_t y = index_from_bits(b);
        if (seen[y]++) throw ParseError("duplicate row " + bits_string(b), 0);
        table.set(y, l);
    }
    if (rows.size() != table.rows()) throw ParseError("table is missing rows", 0);
    return table;
}

}  // namespace quboform
