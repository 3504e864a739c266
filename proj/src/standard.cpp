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


#include "quboform/standard.hpp"

#include <optional>

#include "quboform/ms.hpp"

namespace quboform {

SlackLadder slack_ladder(std::int64_t range) {
    if (range < 0) throw Error("slack ladder range must be nonnegative");
    SlackLadder l;
    l.range = range;
    if (range == 0) return l;
    l.n_vars = ceil_log2(range + 1);
    for (int k = 0; k + 1 < l.n_vars; ++k) l.coefficients.push_back(std::int64_t{1} << k);
    l.coefficients.push_back(range - ((std::int64_t{1} << (l.n_vars - 1)) - 1));
    return l;
}

int ceil_log2(std::int64_t v) {
    if (v < 1) throw Error("ceil_log2 needs a positive argument");
    int k = 0;
    while ((std::int64_t{1} << k) < v) ++k;
    return k;
}

Rational LinearExpr::eval(const Bits& y) const {
    if (static_cast<int>(y.size()) != size()) throw Error("linear expression length mismatch");
    Rational v = constant;
    for (int i = 0; i < size(); ++i) {
        if (y[i]) v += coeffs[i];
    }
    return v;
}

namespace {

// -(c + sum_v d_v v)^2 on binaries, with v^2 = v.
QuadraticPenalty negated_square(const Rational& c, const std::vector<Rational>& d, int m_logical) {
    const int n = static_cast<int>(d.size());
    QuadraticPenalty p(m_logical, n - m_logical);
    p.add_constant(-c * c);
    for (int v = 0; v < n; ++v) {
        if (d[v] == 0) continue;
        p.add(v, v, -(2 * c * d[v] + d[v] * d[v]));
        for (int w = v + 1; w < n; ++w) {
            if (d[w] != 0) p.add(v, w, -2 * d[v] * d[w]);
        }
    }
    return p;
}

}  // namespace

QuadraticPenalty standard_equality_penalty(const LinearExpr& expr) {
    return negated_square(expr.constant, expr.coeffs, expr.size());
}

QuadraticPenalty standard_inequality_penalty(const LinearExpr& expr, std::int64_t range) {
    SlackLadder ladder = slack_ladder(range);
    std::vector<Rational> d = expr.coeffs;
    for (std::int64_t c : ladder.coefficients) d.emplace_back(static_cast<long>(c));
    return negated_square(expr.constant, d, expr.size());
}

StandardInOut standard_inout_penalties(const NodeView& view) {
    const int a = view.n_in(), b = view.n_out();
    if (a < 1 || b < 1) throw Error("IN/OUT needs at least one incoming and one outgoing arc");
    const std::int64_t range = std::int64_t{a} * b - 1;
    // sum_in x - N+ sum_out x <= 0 and sum_out x - N- sum_in x <= 0.
    LinearExpr first, second;
    for (int i = 0; i < a; ++i) {
        first.coeffs.emplace_back(1);
        second.coeffs.emplace_back(-b);
    }
    for (int i = 0; i < b; ++i) {
        first.coeffs.emplace_back(-a);
        second.coeffs.emplace_back(1);
    }
    StandardInOut out;
    out.first = standard_inequality_penalty(first, range);
    out.second = standard_inequality_penalty(second, range);
    out.slack_count = out.first.m_slack() + out.second.m_slack();
    return out;
}

StandardCapFloor standard_capfloor_penalty(const MpbsInstance& inst, int u) {
    NodeView view = node_view(inst, u);
    const Rational cap = inst.cap_of(u), fl = inst.floor_of(u);
    if (!is_integer(cap) || !is_integer(fl)) {
        throw Error("node " + std::to_string(u) +
                    ": standard CAP/FLOOR needs an integer window; use the iqpms method");
    }
    if (cap < fl) throw Error("node " + std::to_string(u) + ": CAP below FLOOR");
    StandardCapFloor out;
    LinearExpr expr;
    expr.constant = -cap;
    auto push = [&](int arc, int sign) {
        const Rational& w = inst.arc(arc).weight;
        if (!is_integer(w)) {
            throw Error("arc " + std::to_string(arc) +
                        ": standard CAP/FLOOR needs integer weights; use the iqpms method");
        }
        out.arcs.push_back(arc);
        expr.coeffs.push_back(sign * w);
    };
    for (int i : view.incoming) push(i, 1);
    for (int i : view.outgoing) push(i, -1);
    Rational range = cap - fl;
    out.polynomial = standard_inequality_penalty(expr, range.get_num().get_si());
    out.slack_count = out.polynomial.m_slack();
    return out;
}

std::int64_t ms_range_reduction(const SubConstraintTable& master, const LinearExpr& expr) {
    if (master.m() != expr.size()) throw Error("master table and expression differ in size");
    std::optional<Rational> lo;
    for (std::uint64_t y = 0; y < master.rows(); ++y) {
        if (master.at(y).kind != RowKind::NoPenalty) continue;
        Rational v = expr.eval(bits_from_index(y, master.m()));
        if (!lo || v < *lo) lo = v;
    }
    if (!lo || *lo >= 0) return 0;
    Rational t = -*lo;
    if (!is_integer(t)) throw Error("range reduction needs an integer-valued expression");
    return t.get_num().get_si();
}

Formulation assemble_standard(const MpbsInstance& inst, const AssemblyOptions& options) {
    if (!(options.gamma > 1)) throw Error("gamma must exceed 1");
    auto problems = validate_instance(inst);
    if (!problems.empty()) throw Error("invalid instance: " + problems.front());
    Formulation f;
    f.qubo = Qubo(inst.num_arcs());
    for (const Arc& a : inst.graph.arcs) f.qubo.add(a.id, a.id, a.weight);
    for (int u = 0; u < inst.num_nodes(); ++u) {
        NodeView view = node_view(inst, u);
        NodeSummary s;
        s.node = u;
        s.n_in = view.n_in();
        s.n_out = view.n_out();
        s.shape = std::to_string(s.n_in) + "in" + std::to_string(s.n_out) + "out";
        auto it = options.lambda_override.find(u);
        s.lambda = it != options.lambda_override.end()
                           ? it->second
                           : lambda_node(inst, u, options.strategy, options.gamma);
        s.lambda_io = 1;

        std::vector<int> arcs = view.incoming;
        arcs.insert(arcs.end(), view.outgoing.begin(), view.outgoing.end());
        StandardInOut io = standard_inout_penalties(view);
        embed_penalty_into(f.qubo, io.first, arcs, {u, "io1"}, s.lambda);
        embed_penalty_into(f.qubo, io.second, arcs, {u, "io2"}, s.lambda);
        s.io_slacks = io.slack_count;

        StandardCapFloor cf = standard_capfloor_penalty(inst, u);
        embed_penalty_into(f.qubo, cf.polynomial, cf.arcs, {u, "cf"}, s.lambda);
        s.cf_slacks = cf.slack_count;
        f.nodes.push_back(std::move(s));
    }
    f.blocks = build_block_index(f.qubo);
    return f;
}

}  // namespace quboform
