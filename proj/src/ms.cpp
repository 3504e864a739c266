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


#include "quboform/ms.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

namespace quboform {

std::string to_string(LambdaStrategy s) {
    switch (s) {
        case LambdaStrategy::Local: return "local";
        case LambdaStrategy::Neighbour: return "neigh";
        case LambdaStrategy::Global: return "global";
    }
    return "?";
}

LambdaStrategy parse_lambda_strategy(const std::string& text) {
    if (text == "local") return LambdaStrategy::Local;
    if (text == "neigh" || text == "neighbour" || text == "neighbor") return LambdaStrategy::Neighbour;
    if (text == "global") return LambdaStrategy::Global;
    throw Error("unknown lambda strategy '" + text + "'");
}

SubConstraintTable satellite_table(const std::vector<Oracle>& masters, const Oracle& satellite, int m) {
    if (m > kMaxTableVars) throw CapExceeded("table has too many variables");
    SubConstraintTable t(m);
    for (std::uint64_t y = 0; y < t.rows(); ++y) {
        Bits b = bits_from_index(y, m);
        bool masters_ok = std::all_of(masters.begin(), masters.end(), [&](const Oracle& o) { return o(b); });
        if (!masters_ok) continue;
        t.set(y, satellite(b) ? RowLabel::no_penalty() : RowLabel::penalty());
    }
    return t;
}

Rational accidental_incentive_max(const std::vector<QuadraticPenalty>& satellites) {
    if (satellites.empty()) return 0;
    const int m = satellites.front().m_logical();
    for (const auto& p : satellites) {
        if (p.m_logical() != m) throw Error("satellite penalties differ in logical size");
    }
    std::optional<Rational> best;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << m); ++y) {
        Bits b = bits_from_index(y, m);
        Rational sum = 0;
        for (const auto& p : satellites) sum += max_over_slack(p, b);
        if (!best || sum > *best) best = sum;
    }
    return *best;
}

Rational relative_multiplier(const Rational& incentive_max, const Rational& gamma) {
    if (!(gamma > 1)) throw Error("gamma must exceed 1");
    return 1 + gamma * (incentive_max > 0 ? incentive_max : Rational(0));
}

QuadraticPenalty ConstraintChain::combined() const {
    if (reports.empty()) return {};
    const int m = reports.front().polynomial.m_logical();
    int total = 0;
    for (const auto& r : reports) total += r.polynomial.m_slack();
    QuadraticPenalty out(m, total);
    int base = m;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const QuadraticPenalty& p = reports[i].polynomial;
        auto at = [&](int v) { return v < m ? v : base + (v - m); };
        out.add_constant(multipliers[i] * p.constant());
        for (const auto& [key, c] : p.terms()) out.add(at(key.first), at(key.second), multipliers[i] * c);
        base += p.m_slack();
    }
    return out;
}

ConstraintChain concatenated_enforce(const std::vector<Oracle>& chain, int m,
                                     const std::vector<int>& budgets, const Rational& gamma,
                                     const SolveOptions& options) {
    const std::size_t n = chain.size();
    if (n < 2 || n > 4) throw Error("chain length must be between 2 and 4");
    if (m > 8) throw CapExceeded("chains support at most 8 shared variables");
    if (budgets.size() != n) throw Error("one slack budget per chain position is required");
    if (!(gamma > 1)) throw Error("gamma must exceed 1");
    const std::uint64_t rows = std::uint64_t{1} << m;

    ConstraintChain out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Oracle> earlier(chain.begin(), chain.begin() + i);
        out.tables.push_back(satellite_table(earlier, chain[i], m));
        out.reports.push_back(iqp_enforce(out.tables.back(), budgets[i], options));
    }

    // best[i][y] = max_s P_i(y, s)
    std::vector<std::vector<Rational>> best(n, std::vector<Rational>(rows));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint64_t y = 0; y < rows; ++y) {
            best[i][y] = max_over_slack(out.reports[i].polynomial, bits_from_index(y, m));
        }
    }
    out.multipliers.assign(n, Rational(1));
    std::vector<Rational> tail(rows, Rational(0));  // sum_{j>i} lambda_j best[j][y]
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) {
            for (std::uint64_t y = 0; y < rows; ++y) tail[y] += out.multipliers[i + 1] * best[i + 1][y];
            out.multipliers[i] = relative_multiplier(*std::max_element(tail.begin(), tail.end()), gamma);
        }
    }

    for (std::uint64_t y = 0; y < rows; ++y) {
        Bits b = bits_from_index(y, m);
        bool all = std::all_of(chain.begin(), chain.end(), [&](const Oracle& o) { return o(b); });
        Rational v = 0;
        for (std::size_t i = 0; i < n; ++i) v += out.multipliers[i] * best[i][y];
        if (all ? v != 0 : v > -1) {
            throw std::logic_error("concatenated penalty fails at y=" + bits_string(b));
        }
    }
    return out;
}

std::vector<int> incident_arcs(const MpbsInstance& inst, int u) {
    NodeView v = node_view(inst, u);
    std::vector<int> arcs = v.incoming;
    arcs.insert(arcs.end(), v.outgoing.begin(), v.outgoing.end());
    std::sort(arcs.begin(), arcs.end());
    return arcs;
}

std::vector<int> neighbours(const MpbsInstance& inst, int u) {
    node_view(inst, u);
    std::set<int> out;
    for (const Arc& a : inst.graph.arcs) {
        if (a.origin == u && a.target != u) out.insert(a.target);
        if (a.target == u && a.origin != u) out.insert(a.origin);
    }
    return {out.begin(), out.end()};
}

Rational lambda_node(const MpbsInstance& inst, int u, LambdaStrategy strategy, const Rational& gamma) {
    if (!(gamma > 1)) throw Error("gamma must exceed 1");
    switch (strategy) {
        case LambdaStrategy::Local:
            return gamma * node_weight(inst, u);
        case LambdaStrategy::Neighbour: {
            std::set<int> arcs;
            std::vector<int> nodes = neighbours(inst, u);
            nodes.push_back(u);
            for (int v : nodes) {
                for (int i : incident_arcs(inst, v)) arcs.insert(i);
            }
            Rational w = 0;
            for (int i : arcs) w += inst.arc(i).weight;
            return gamma * w;
        }
        case LambdaStrategy::Global: {
            node_view(inst, u);
            Rational w = 0;
            for (const Arc& a : inst.graph.arcs) w += a.weight;
            return gamma * w;
        }
    }
    throw Error("unknown lambda strategy");
}

Rational lambda_io(const QuadraticPenalty& cf_penalty, const Rational& gamma) {
    return relative_multiplier(max_value(cf_penalty), gamma);
}

}  // namespace quboform
