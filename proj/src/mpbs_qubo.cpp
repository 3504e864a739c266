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


#include "quboform/mpbs_qubo.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

#include "quboform/ms.hpp"

namespace quboform {

std::string shape_name(NodeShape shape) {
    switch (shape) {
        case NodeShape::OneOne: return "1vs1";
        case NodeShape::OneTwo: return "1vs2";
        case NodeShape::OneThree: return "1vs3";
        case NodeShape::TwoTwo: return "2vs2";
        case NodeShape::OneFour: return "1vs4";
        case NodeShape::TwoThree: return "2vs3";
        case NodeShape::Generic: return "generic";
    }
    return "?";
}

int shape_size(NodeShape shape) {
    switch (shape) {
        case NodeShape::OneOne: return 2;
        case NodeShape::OneTwo: return 3;
        case NodeShape::OneThree:
        case NodeShape::TwoTwo: return 4;
        case NodeShape::OneFour:
        case NodeShape::TwoThree: return 5;
        case NodeShape::Generic: break;
    }
    throw Error("generic shape has no fixed size");
}

int shape_group_a(NodeShape shape) {
    switch (shape) {
        case NodeShape::TwoTwo:
        case NodeShape::TwoThree: return 2;
        case NodeShape::Generic: throw Error("generic shape has no fixed groups");
        default: return 1;
    }
}

NodeScenario classify_node(const MpbsInstance& inst, int u, bool allow_generic) {
    NodeView v = node_view(inst, u);
    const int lo = std::min(v.n_in(), v.n_out()), hi = std::max(v.n_in(), v.n_out());
    NodeScenario s;
    s.node = u;
    if (lo == 1 && hi == 1) s.shape = NodeShape::OneOne;
    else if (lo == 1 && hi == 2) s.shape = NodeShape::OneTwo;
    else if (lo == 1 && hi == 3) s.shape = NodeShape::OneThree;
    else if (lo == 2 && hi == 2) s.shape = NodeShape::TwoTwo;
    else if (lo == 1 && hi == 4) s.shape = NodeShape::OneFour;
    else if (lo == 2 && hi == 3) s.shape = NodeShape::TwoThree;
    else if (allow_generic && lo >= 1) s.shape = NodeShape::Generic;
    else {
        throw Error("node " + std::to_string(u) + " has " + std::to_string(v.degree()) +
                    " arcs; closed forms cover 2 to 5 (enable the generic fallback for larger nodes)");
    }
    // The smaller group goes first; ties keep incoming first.
    s.a_incoming = v.n_in() <= v.n_out();
    if (s.shape == NodeShape::Generic) s.a_incoming = true;
    const auto& a = s.a_incoming ? v.incoming : v.outgoing;
    const auto& b = s.a_incoming ? v.outgoing : v.incoming;
    s.ordering = a;
    s.ordering.insert(s.ordering.end(), b.begin(), b.end());
    s.group_a = static_cast<int>(a.size());
    return s;
}

bool inout_canonical(const Bits& y, int group_a) {
    bool any_a = false, any_b = false;
    for (int i = 0; i < static_cast<int>(y.size()); ++i) {
        if (!y[i]) continue;
        (i < group_a ? any_a : any_b) = true;
    }
    return any_a == any_b;
}

SubConstraintTable io_master_table(int group_a, int group_b) {
    return truth_table_from_oracle([group_a](const Bits& y) { return inout_canonical(y, group_a); },
                                   group_a + group_b);
}

SubConstraintTable io_master_table(NodeShape shape) {
    const int a = shape_group_a(shape);
    return io_master_table(a, shape_size(shape) - a);
}

std::optional<QuadraticPenalty> printed_io_fixture(NodeShape shape) {
    switch (shape) {
        case NodeShape::OneOne:
            return QuadraticPenalty::parse("-x1-x2+2x1x2", 2, 0);
        case NodeShape::OneTwo:
            return QuadraticPenalty::parse("-x1-x2-x3+2x1x2+2x1x3-x2x3", 3, 0);
        case NodeShape::OneThree:
            return QuadraticPenalty::parse(
                    "-x1-x2-x3-x4+x1x2+2x1x3+x1x4-x2x4-s1+s1x1+s1x2-s1x3+s1x4", 4, 1);
        case NodeShape::TwoTwo:
            return QuadraticPenalty::parse(
                    "-x1-x2-x3-x4-x1x2-x3x4+s1+2s1x1+2s1x2+2s1x3+2s1x4", 4, 1);
        case NodeShape::OneFour:
            return QuadraticPenalty::parse(
                    "-x1-x2-x3-x4-x5+2x1x2+2x1x3+2x1x4+2x1x5-x2x3-x2x4-x2x5-x3x4"
                    "-x3x5-x4x5-5s1+2s1x2+2s1x3+2s1x4+2s1x5",
                    5, 1);
        case NodeShape::TwoThree:
            return QuadraticPenalty::parse(
                    "-x1-x2-x3-x4-x5-x1x2-x3x4-x3x5-x4x5-2s1-2s2+2s1x1+2s1x2"
                    "+2s1x3+2s1x4+2s1x5+s2x3+s2x4+s2x5",
                    5, 2);
        case NodeShape::Generic: break;
    }
    return std::nullopt;
}

namespace {

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}

IoClosedForm build_io(NodeShape shape) {
    SubConstraintTable table = io_master_table(shape);
    IoClosedForm out;
    auto printed = printed_io_fixture(shape);
    if (printed && verify_penalty(*printed, table).ok) {
        out.polynomial = *printed;
        out.slacks = printed->m_slack();
        return out;
    }
    PenaltySolveReport r = iqp_enforce(table, kMaxEnforceSlacks);
    out.polynomial = r.polynomial;
    out.slacks = r.slacks_used;
    out.regenerated = true;
    out.note = shape_name(shape) + " IN/OUT: printed polynomial fails verification, regenerated as " +
               r.polynomial.to_string();
    return out;
}

}  // namespace

const IoClosedForm& io_closed_form(NodeShape shape) {
    if (shape == NodeShape::Generic) throw Error("generic nodes have no IN/OUT closed form");
    static std::map<NodeShape, IoClosedForm> cache;
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache.find(shape);
    if (it == cache.end()) it = cache.emplace(shape, build_io(shape)).first;
    return it->second;
}

bool capfloor_canonical(const MpbsInstance& inst, const NodeScenario& scenario, const Bits& y) {
    Rational net = 0;
    for (int i = 0; i < scenario.m(); ++i) {
        if (!y[i]) continue;
        bool incoming = (i < scenario.group_a) == scenario.a_incoming;
        const Rational& w = inst.arc(scenario.ordering[i]).weight;
        if (incoming) net += w;
        else net -= w;
    }
    return inst.floor_of(scenario.node) <= net && net <= inst.cap_of(scenario.node);
}

SigmaTable sigma_table(const MpbsInstance& inst, const NodeScenario& scenario) {
    SigmaTable s;
    const int m = scenario.m();
    for (std::uint64_t y = 1; y < (std::uint64_t{1} << m); ++y) {
        Bits b = bits_from_index(y, m);
        if (!inout_canonical(b, scenario.group_a)) continue;
        s[y] = capfloor_canonical(inst, scenario, b) ? 0 : -1;
    }
    return s;
}

SubConstraintTable cf_satellite_table(const MpbsInstance& inst, const NodeScenario& scenario) {
    const int a = scenario.group_a;
    return satellite_table({[a](const Bits& y) { return inout_canonical(y, a); }},
                           [&](const Bits& y) { return capfloor_canonical(inst, scenario, y); },
                           scenario.m());
}

namespace {

int sigma_at(const SigmaTable& sigma, const char* bits) {
    auto it = sigma.find(index_from_bits(parse_bits(bits)));
    if (it == sigma.end()) throw Error(std::string("sigma table lacks row ") + bits);
    if (it->second != 0 && it->second != -1) throw Error("sigma values must be 0 or -1");
    return it->second;
}

}  // namespace

SubConstraintTable cf_system(NodeShape shape, const SigmaTable& sigma) {
    auto sig = [&](const char* b) { return RowLabel::exact(sigma_at(sigma, b)); };
    auto set = [](SubConstraintTable& t, const char* b, const RowLabel& l) { t.set(parse_bits(b), l); };
    const RowLabel minus1 = RowLabel::exact(-1), zero = RowLabel::exact(0);
    SubConstraintTable t;
    switch (shape) {
        case NodeShape::OneOne:
            t = SubConstraintTable(2);
            set(t, "00", zero);
            set(t, "10", minus1);
            set(t, "01", minus1);
            set(t, "11", sig("11"));
            break;
        case NodeShape::OneTwo:
            t = SubConstraintTable(3);
            set(t, "000", zero);
            for (const char* b : {"011", "001", "100"}) set(t, b, minus1);
            for (const char* b : {"110", "101", "111"}) set(t, b, sig(b));
            break;
        case NodeShape::OneThree:
            t = SubConstraintTable(4);
            set(t, "0000", zero);
            for (const char* b : {"0110", "0011", "0111"}) set(t, b, minus1);
            for (const char* b : {"1100", "1010", "1110", "1001", "1101", "1011", "1111"}) set(t, b, sig(b));
            break;
        case NodeShape::TwoTwo:
            t = SubConstraintTable(4);
            set(t, "0000", zero);
            set(t, "0011", minus1);
            for (const char* b : {"1010", "0110", "1110", "1001", "0101", "1101", "1011", "0111", "1111"}) {
                set(t, b, sig(b));
            }
            break;
        default:
            throw Error("no closed-form CAP/FLOOR system for " + shape_name(shape));
    }
    return t;
}

QuadraticPenalty cf_closed_form(NodeShape shape, const SigmaTable& sigma) {
    auto s = [&](const char* b) { return Rational(sigma_at(sigma, b)); };
    QuadraticPenalty p;
    switch (shape) {
        case NodeShape::OneOne:
            p = QuadraticPenalty(2, 0);
            p.add(0, 0, -1);
            p.add(1, 1, -1);
            p.add(0, 1, 2 + s("11"));
            break;
        case NodeShape::OneTwo:
            p = QuadraticPenalty(3, 0);
            p.add(0, 0, -1);
            p.add(1, 1, 1 + s("101") + s("110") - s("111"));
            p.add(2, 2, -1);
            p.add(0, 1, s("111") - s("101"));
            p.add(0, 2, 2 + s("101"));
            p.add(1, 2, s("111") - s("101") - s("110") - 1);
            break;
        case NodeShape::OneThree:
            p = QuadraticPenalty(4, 0);
            p.add(0, 0, s("1001") + s("1010") - s("1011") + s("1100") - s("1101") - s("1110") + s("1111"));
            p.add(1, 1, 2 * s("1011") - s("1001") - s("1010") + s("1101") + s("1110") - 2 * s("1111"));
            p.add(2, 2, -1 + s("1010") - s("1011") - s("1110") + s("1111"));
            p.add(3, 3, -s("1010") + s("1011") - s("1100") + s("1101") + 2 * s("1110") - 2 * s("1111"));
            p.add(0, 1, -s("1011") + s("1111"));
            p.add(0, 2, 1 - s("1001") - s("1010") + 2 * s("1011") - s("1100") + s("1101") + 2 * s("1110") -
                                2 * s("1111"));
            p.add(0, 3, -s("1110") + s("1111"));
            p.add(1, 2, s("1001") - s("1011") - s("1101") + s("1111"));
            p.add(1, 3, s("1010") - s("1011") - s("1110") + s("1111"));
            p.add(2, 3, s("1100") - s("1101") - s("1110") + s("1111"));
            break;
        case NodeShape::TwoTwo:
            p = QuadraticPenalty(4, 0);
            p.add(0, 0, 1 - s("0101") - s("0110") + 2 * s("0111") + s("1011") + s("1101") + s("1110") -
                                2 * s("1111"));
            p.add(0, 1, -1 - s("0111") - s("1011") + s("1111"));
            p.add(0, 2, s("0101") - s("0111") - s("1101") + s("1111"));
            p.add(0, 3, s("0110") - s("0111") - s("1110") + s("1111"));
            p.add(1, 1, 1 + s("0111") - s("1001") - s("1010") + 2 * s("1011") + s("1101") + s("1110") -
                                2 * s("1111"));
            p.add(1, 2, s("1001") - s("1011") - s("1101") + s("1111"));
            p.add(1, 3, s("1010") - s("1011") - s("1110") + s("1111"));
            p.add(2, 2, -1 + s("0110") - s("0111") + s("1010") - s("1011") - s("1110") + s("1111"));
            p.add(2, 3, 1 - s("0101") - s("0110") + 2 * s("0111") - s("1001") - s("1010") + 2 * s("1011") +
                                s("1101") + s("1110") - 2 * s("1111"));
            p.add(3, 3, -1 + s("0101") - s("0111") + s("1001") - s("1011") - s("1101") + s("1111"));
            break;
        default:
            throw Error("no CAP/FLOOR closed form for " + shape_name(shape));
    }
    if (!verify_penalty(p, cf_system(shape, sigma)).ok) {
        throw std::logic_error("CAP/FLOOR closed form for " + shape_name(shape) + " misses its system");
    }
    return p;
}

namespace {

std::string table_key(const SubConstraintTable& t) {
    std::string key = std::to_string(t.m()) + ":";
    for (std::uint64_t y = 0; y < t.rows(); ++y) key += "PNFE"[static_cast<int>(t.at(y).kind)];
    return key;
}

PenaltySolveReport cached_enforce(const std::string& tag, const SubConstraintTable& table,
                                  const SolveOptions& options) {
    static std::map<std::string, PenaltySolveReport> cache;
    const std::string key = tag + "/" + table_key(table);
    {
        std::lock_guard<std::mutex> lock(cache_mutex());
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    PenaltySolveReport r = iqp_enforce(table, kMaxEnforceSlacks, options);
    std::lock_guard<std::mutex> lock(cache_mutex());
    return cache.emplace(key, std::move(r)).first->second;
}

}  // namespace

CfSolve cf_degree5(const MpbsInstance& inst, int u, const SolveOptions& options) {
    NodeScenario sc = classify_node(inst, u);
    if (sc.m() != 5) throw Error("cf_degree5 needs a node with five arcs");
    SubConstraintTable table = cf_satellite_table(inst, sc);
    PenaltySolveReport r = cached_enforce(shape_name(sc.shape), table, options);
    CfSolve out;
    out.polynomial = r.polynomial;
    out.slacks = r.slacks_used;
    out.anomaly = out.slacks > (sc.shape == NodeShape::OneFour ? 1 : 2);
    return out;
}

NodePenalties node_penalties(const MpbsInstance& inst, int u, const AssemblyOptions& options) {
    NodePenalties out;
    out.scenario = classify_node(inst, u, options.allow_fallback);
    const NodeScenario& sc = out.scenario;
    switch (sc.shape) {
        case NodeShape::OneOne: {
            out.io = QuadraticPenalty(2, 0);
            out.cf = cf_closed_form(sc.shape, sigma_table(inst, sc));
            SubConstraintTable joint = truth_table_from_oracle(
                    [&](const Bits& y) { return inout_canonical(y, 1) && capfloor_canonical(inst, sc, y); }, 2);
            if (!verify_penalty(out.cf, joint).ok) throw std::logic_error("1vs1 penalty misses IN/OUT");
            return out;
        }
        case NodeShape::OneTwo:
        case NodeShape::OneThree:
        case NodeShape::TwoTwo: {
            const IoClosedForm& io = io_closed_form(sc.shape);
            out.io = io.polynomial;
            out.note = io.note;
            out.cf = cf_closed_form(sc.shape, sigma_table(inst, sc));
            break;
        }
        case NodeShape::OneFour:
        case NodeShape::TwoThree: {
            const IoClosedForm& io = io_closed_form(sc.shape);
            out.io = io.polynomial;
            out.note = io.note;
            CfSolve cf = cf_degree5(inst, u, options.iqp);
            out.cf = cf.polynomial;
            if (cf.anomaly) {
                out.note += (out.note.empty() ? "" : "; ") + std::string("CAP/FLOOR needed ") +
                            std::to_string(cf.slacks) + " slacks";
            }
            break;
        }
        case NodeShape::Generic: {
            const std::string tag = "generic" + std::to_string(sc.group_a) + "x" + std::to_string(sc.group_b());
            out.io = cached_enforce(tag, io_master_table(sc.group_a, sc.group_b()), options.iqp).polynomial;
            out.cf = iqp_enforce(cf_satellite_table(inst, sc), kMaxEnforceSlacks, options.iqp).polynomial;
            out.note = "generic IQP fallback";
            break;
        }
    }
    if (!verify_penalty(out.cf, cf_satellite_table(inst, sc)).ok) {
        throw std::logic_error("CAP/FLOOR penalty of node " + std::to_string(u) + " fails its table");
    }
    return out;
}

Formulation assemble_iqpms(const MpbsInstance& inst, const AssemblyOptions& options) {
    if (!(options.gamma > 1)) throw Error("gamma must exceed 1");
    auto problems = validate_instance(inst);
    if (!problems.empty()) throw Error("invalid instance: " + problems.front());
    Formulation f;
    f.qubo = Qubo(inst.num_arcs());
    for (const Arc& a : inst.graph.arcs) f.qubo.add(a.id, a.id, a.weight);
    std::vector<std::string> seen_notes;
    for (int u = 0; u < inst.num_nodes(); ++u) {
        NodePenalties np = node_penalties(inst, u, options);
        NodeSummary s;
        s.node = u;
        NodeView view = node_view(inst, u);
        s.n_in = view.n_in();
        s.n_out = view.n_out();
        s.shape = shape_name(np.scenario.shape);
        auto it = options.lambda_override.find(u);
        s.lambda = it != options.lambda_override.end()
                           ? it->second
                           : lambda_node(inst, u, options.strategy, options.gamma);
        s.lambda_io = lambda_io(np.cf, options.gamma);
        embed_penalty_into(f.qubo, np.io, np.scenario.ordering, {u, "io"}, s.lambda * s.lambda_io);
        embed_penalty_into(f.qubo, np.cf, np.scenario.ordering, {u, "cf"}, s.lambda);
        s.io_slacks = np.io.m_slack();
        s.cf_slacks = np.cf.m_slack();
        s.note = np.note;
        if (!np.note.empty() && std::find(seen_notes.begin(), seen_notes.end(), np.note) == seen_notes.end()) {
            seen_notes.push_back(np.note);
        }
        f.nodes.push_back(std::move(s));
    }
    f.notes = std::move(seen_notes);
    f.blocks = build_block_index(f.qubo);
    return f;
}

FormulationReport verify_formulation(const MpbsInstance& inst, const Qubo& qubo, const BlockIndex& blocks,
                                     int cap) {
    const int n = inst.num_arcs();
    if (n > cap) throw CapExceeded("verification supports at most " + std::to_string(cap) + " arcs");
    if (qubo.n_logical() != n) throw Error("qubo and instance differ in logical variable count");
    FormulationReport rep;
    rep.optimum = brute_force_mpbs(inst, cap);
    FeasibilityOracle oracle(inst);
    SlackMaximizer smax(qubo, blocks);
    const std::uint64_t total = std::uint64_t{1} << n;
    constexpr std::size_t kMaxListed = 8;
    auto record = [&](const std::string& what) {
        if (rep.violations.size() < kMaxListed) rep.violations.push_back(what);
    };

    std::uint64_t best_x = 0;
    if (smax.exact_integers()) {
        const Rational& scale = smax.scale();
        Rational star = rep.optimum.value * scale;
        mpz_class lim;
        mpz_cdiv_q(lim.get_mpz_t(), star.get_num_mpz_t(), star.get_den_mpz_t());
        const std::int64_t below = lim.get_si();  // infeasible needs value < below
        std::int64_t best = 0;
        for (std::uint64_t x = 0; x < total; ++x) {
            std::int64_t v = smax.scaled_at_index(x);
            if (x == 0 || v > best) {
                best = v;
                best_x = x;
            }
            if (oracle.feasible(x)) {
                Bits b = bits_from_index(x, n);
                if (Rational(v) / scale != objective(inst, b)) {
                    rep.feasible_exact = false;
                    record("feasible x=" + bits_string(b) + " has slack-max " + to_string(Rational(v) / scale) +
                           " but W=" + to_string(objective(inst, b)));
                }
            } else if (v >= below) {
                rep.infeasible_below = false;
                record("infeasible x=" + bits_string(bits_from_index(x, n)) + " reaches " +
                       to_string(Rational(v) / scale) + " >= W*=" + to_string(rep.optimum.value));
            }
        }
        rep.qubo_max = Rational(best) / scale;
    } else {
        Rational best;
        for (std::uint64_t x = 0; x < total; ++x) {
            Rational v = smax.at_index(x);
            if (x == 0 || v > best) {
                best = v;
                best_x = x;
            }
            Bits b = bits_from_index(x, n);
            if (oracle.feasible(x)) {
                if (v != objective(inst, b)) {
                    rep.feasible_exact = false;
                    record("feasible x=" + bits_string(b) + " has slack-max " + to_string(v));
                }
            } else if (v >= rep.optimum.value) {
                rep.infeasible_below = false;
                record("infeasible x=" + bits_string(b) + " reaches " + to_string(v));
            }
        }
        rep.qubo_max = best;
    }
    rep.qubo_argmax = bits_from_index(best_x, n);
    if (rep.qubo_argmax != rep.optimum.x || rep.qubo_max != rep.optimum.value) {
        rep.argmax_matches = false;
        record("qubo argmax x=" + bits_string(rep.qubo_argmax) + " value " + to_string(rep.qubo_max) +
               " differs from optimum x=" + bits_string(rep.optimum.x) + " W*=" + to_string(rep.optimum.value));
    }
    rep.ok = rep.feasible_exact && rep.infeasible_below && rep.argmax_matches;
    return rep;
}

}  // namespace quboform
