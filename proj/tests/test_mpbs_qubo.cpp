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


#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "quboform/mpbs_qubo.hpp"
#include "quboform/ms.hpp"
#include "quboform/standard.hpp"

namespace quboform {
namespace {

// Node 0 gets `a` arcs from node 1 and `b` arcs to node 2; arc 2->1 closes
// the loop. Weights are taken from `w` in arc order, the closing arc last.
MpbsInstance star(int a, int b, const std::vector<int>& w, int fl = -7, int cap = 8) {
    std::vector<Arc> arcs;
    int id = 0;
    for (int i = 0; i < a; ++i, ++id) arcs.push_back({id, 1, 0, w.at(id)});
    for (int i = 0; i < b; ++i, ++id) arcs.push_back({id, 0, 2, w.at(id)});
    arcs.push_back({id, 2, 1, w.at(id)});
    return MpbsInstance::from_windows(arcs, {{fl, cap}, {-7, 8}, {-7, 8}});
}

MpbsInstance reversed(const MpbsInstance& inst) {
    std::vector<Arc> arcs = inst.graph.arcs;
    for (Arc& a : arcs) std::swap(a.origin, a.target);
    std::vector<std::pair<Rational, Rational>> windows;
    for (int u = 0; u < inst.num_nodes(); ++u) windows.push_back({-inst.cap_of(u), -inst.floor_of(u)});
    return MpbsInstance::from_windows(arcs, windows);
}

MpbsInstance two_cycle() {
    return MpbsInstance::from_windows({{0, 0, 1, 3}, {1, 1, 0, 4}}, {{-7, 8}, {-7, 8}});
}

std::vector<int> random_weights(std::mt19937_64& rng, int n) {
    std::vector<int> w(n);
    for (int& x : w) x = 1 + static_cast<int>(rng() % 18);
    return w;
}

// Node penalty value with slacks maximized, on the node's canonical variables.
Rational node_value(const NodePenalties& np, const Rational& lambda_io, const Bits& y) {
    return lambda_io * max_over_slack(np.io, y) + max_over_slack(np.cf, y);
}

const std::vector<NodeShape> kShapes{NodeShape::OneOne,  NodeShape::OneTwo,  NodeShape::OneThree,
                                     NodeShape::TwoTwo,  NodeShape::OneFour, NodeShape::TwoThree};

TEST(Classify, OrderingConventions) {
    MpbsInstance in12 = star(1, 2, {5, 6, 7, 1});
    NodeScenario s = classify_node(in12, 0);
    EXPECT_EQ(s.shape, NodeShape::OneTwo);
    EXPECT_EQ(s.ordering, (std::vector<int>{0, 1, 2}));
    EXPECT_TRUE(s.a_incoming);

    MpbsInstance in21 = star(2, 1, {5, 6, 7, 1});
    s = classify_node(in21, 0);
    EXPECT_EQ(s.shape, NodeShape::OneTwo);
    EXPECT_EQ(s.ordering.front(), 2);  // the single outgoing arc
    EXPECT_FALSE(s.a_incoming);

    MpbsInstance in22 = star(2, 2, {1, 2, 3, 4, 1});
    s = classify_node(in22, 0);
    EXPECT_EQ(s.shape, NodeShape::TwoTwo);
    EXPECT_EQ(s.ordering, (std::vector<int>{0, 1, 2, 3}));

    MpbsInstance in32 = star(3, 2, {1, 2, 3, 4, 5, 1});
    s = classify_node(in32, 0);
    EXPECT_EQ(s.shape, NodeShape::TwoThree);
    EXPECT_EQ(s.ordering, (std::vector<int>{3, 4, 0, 1, 2}));
}

TEST(Classify, SixArcsNeedFallback) {
    MpbsInstance in33 = star(3, 3, {1, 1, 1, 1, 1, 1, 1});
    EXPECT_THROW(classify_node(in33, 0), Error);
    EXPECT_EQ(classify_node(in33, 0, true).shape, NodeShape::Generic);
    EXPECT_THROW(assemble_iqpms(in33), Error);
}

TEST(IoClosedForm, SlackCountsAndValidity) {
    std::map<NodeShape, int> expected{{NodeShape::OneOne, 0},   {NodeShape::OneTwo, 0},  {NodeShape::OneThree, 1},
                                      {NodeShape::TwoTwo, 1},   {NodeShape::OneFour, 1}, {NodeShape::TwoThree, 2}};
    for (NodeShape s : kShapes) {
        const IoClosedForm& io = io_closed_form(s);
        EXPECT_EQ(io.slacks, expected[s]) << shape_name(s);
        EXPECT_EQ(io.polynomial.m_slack(), expected[s]);
        EXPECT_TRUE(verify_penalty(io.polynomial, io_master_table(s)).ok) << shape_name(s);
        EXPECT_EQ(io.regenerated, s == NodeShape::TwoTwo) << shape_name(s);
    }
}

TEST(IoClosedForm, PrintedFixtures) {
    for (NodeShape s : {NodeShape::OneTwo, NodeShape::OneThree, NodeShape::OneFour, NodeShape::TwoThree}) {
        EXPECT_TRUE(verify_penalty(*printed_io_fixture(s), io_master_table(s)).ok) << shape_name(s);
    }
    QuadraticPenalty p22 = *printed_io_fixture(NodeShape::TwoTwo);
    EXPECT_EQ(p22.eval({0, 0, 0, 0}, {1}), 1);
    EXPECT_FALSE(verify_penalty(p22, io_master_table(NodeShape::TwoTwo)).ok);
    EXPECT_NE(io_closed_form(NodeShape::TwoTwo).note.find("regenerated"), std::string::npos);
}

TEST(IoClosedForm, Values) {
    const auto& p11 = io_closed_form(NodeShape::OneOne).polynomial;
    EXPECT_EQ(p11.eval({1, 1}, {}), 0);
    EXPECT_EQ(p11.eval({1, 0}, {}), -1);
    EXPECT_EQ(io_closed_form(NodeShape::OneTwo).polynomial.eval({0, 1, 1}, {}), -3);
    const auto& p14 = io_closed_form(NodeShape::OneFour).polynomial;
    EXPECT_EQ(p14.eval({1, 1, 1, 1, 1}, {1}), 0);
    EXPECT_LT(p14.eval({1, 1, 1, 1, 1}, {0}), 0);
    EXPECT_EQ(max_over_slack(p14, {1, 1, 1, 1, 1}), 0);
}

TEST(CfClosedForm, TwoArcs) {
    SigmaTable ok{{3, 0}}, bad{{3, -1}};
    EXPECT_EQ(cf_closed_form(NodeShape::OneOne, ok), QuadraticPenalty::parse("-x1-x2+2x1x2", 2, 0));
    EXPECT_EQ(cf_closed_form(NodeShape::OneOne, bad), QuadraticPenalty::parse("-x1-x2+x1x2", 2, 0));
}

TEST(CfClosedForm, ThreeArcsAllSatisfied) {
    SigmaTable sigma;
    for (const char* b : {"110", "101", "111"}) sigma[index_from_bits(parse_bits(b))] = 0;
    QuadraticPenalty p = cf_closed_form(NodeShape::OneTwo, sigma);
    std::map<std::string, int> expected{{"000", 0},  {"110", 0},  {"101", 0}, {"111", 0},
                                        {"100", -1}, {"001", -1}, {"011", -1}};
    for (auto [b, v] : expected) EXPECT_EQ(p.eval(parse_bits(b), {}), v) << b;
    // 010 is not constrained by the system: the coefficient of x2 is
    // 1 + s101 + s110 - s111 = 1 when every sigma is 0.
    EXPECT_EQ(p.eval(parse_bits("010"), {}), 1);
}

// Every sigma assignment over the rows satisfying IN/OUT: the closed form has
// zero slacks and meets the defining system exactly.
void check_all_sigma(NodeShape shape) {
    const int m = shape_size(shape), a = shape_group_a(shape);
    std::vector<std::uint64_t> rows;
    for (std::uint64_t y = 1; y < (std::uint64_t{1} << m); ++y) {
        if (inout_canonical(bits_from_index(y, m), a)) rows.push_back(y);
    }
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rows.size()); ++mask) {
        SigmaTable sigma;
        for (std::size_t k = 0; k < rows.size(); ++k) sigma[rows[k]] = (mask >> k & 1) ? -1 : 0;
        QuadraticPenalty p = cf_closed_form(shape, sigma);
        ASSERT_EQ(p.m_slack(), 0);
        SubConstraintTable sys = cf_system(shape, sigma);
        for (std::uint64_t y = 0; y < sys.rows(); ++y) {
            const RowLabel& l = sys.at(y);
            if (l.kind != RowKind::Exact) continue;
            ASSERT_EQ(p.eval(bits_from_index(y, m), {}), l.value) << shape_name(shape) << " mask " << mask;
        }
        for (std::uint64_t y : rows) ASSERT_EQ(p.eval(bits_from_index(y, m), {}), sigma[y]);
    }
}

TEST(CfClosedForm, EverySigmaTable) {
    for (NodeShape s : {NodeShape::OneOne, NodeShape::OneTwo, NodeShape::OneThree, NodeShape::TwoTwo}) {
        check_all_sigma(s);
    }
}

TEST(CfClosedForm, PrintedOneVsThreeSignFails) {
    // x3 coefficient with the leading +1 as printed, all sigma 0.
    SigmaTable sigma;
    for (std::uint64_t y = 1; y < 16; ++y) {
        if (inout_canonical(bits_from_index(y, 4), 1)) sigma[y] = 0;
    }
    QuadraticPenalty p = cf_closed_form(NodeShape::OneThree, sigma);
    QuadraticPenalty printed = p;
    printed.add(2, 2, 2);
    EXPECT_EQ(printed.eval(parse_bits("0110"), {}), 1);
    EXPECT_FALSE(verify_penalty(printed, cf_system(NodeShape::OneThree, sigma)).ok);
    EXPECT_EQ(p.eval(parse_bits("0110"), {}), -1);
}

TEST(CfDegree5, AlwaysSatisfiedGivesZero) {
    MpbsInstance inst = star(1, 4, {1, 1, 1, 1, 1, 1});
    CfSolve r = cf_degree5(inst, 0);
    EXPECT_EQ(r.slacks, 0);
    EXPECT_EQ(r.polynomial.nonzero_count(), 0);
    EXPECT_FALSE(r.anomaly);
}

TEST(CfDegree5, RandomNodesWithinTableRange) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 12; ++t) {
        bool one_four = t % 2 == 0;
        int a = one_four ? (t % 4 == 0 ? 1 : 4) : (t % 4 == 1 ? 2 : 3);
        MpbsInstance inst = star(a, 5 - a, random_weights(rng, 6));
        CfSolve r = cf_degree5(inst, 0);
        EXPECT_LE(r.slacks, one_four ? 1 : 2);
        EXPECT_FALSE(r.anomaly);
        EXPECT_TRUE(verify_penalty(r.polynomial, cf_satellite_table(inst, classify_node(inst, 0))).ok);
    }
}

TEST(AssembleIqpms, TwoCycle) {
    Formulation f = assemble_iqpms(two_cycle());
    EXPECT_EQ(f.qubo.size(), 2);
    auto m = brute_force_qubo_max(f.qubo);
    EXPECT_EQ(m.value, 7);
    EXPECT_EQ(m.maximizers, (std::vector<Bits>{{1, 1}}));
}

TEST(AssembleIqpms, TenArcVariableBand) {
    // Node counts of the four ten-arc rows of the instance table.
    std::vector<int> sizes;
    for (int nodes : {6, 6, 5, 5}) {
        for (std::uint64_t r = 0; r < 10; ++r) {
            GeneratorParams p{10, nodes, 1, 18, -7, 8, 5, 700 + 17 * r + static_cast<std::uint64_t>(nodes)};
            sizes.push_back(assemble_iqpms(generate_instance(p)).qubo.size());
        }
    }
    std::sort(sizes.begin(), sizes.end());
    int median = sizes[sizes.size() / 2];
    RecordProperty("median", median);
    EXPECT_GE(median, 14);
    EXPECT_LE(median, 17);
}

TEST(AssembleIqpms, FewerSlacksThanStandard) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        GeneratorParams p{14, 7, 1, 18, -7, 8, 5, seed};
        MpbsInstance inst = generate_instance(p);
        EXPECT_LE(assemble_iqpms(inst).total_slacks(), assemble_standard(inst).total_slacks());
    }
}

TEST(AssembleIqpms, SlackAccountingPerShape) {
    std::map<std::string, int> io{{"1vs1", 0}, {"1vs2", 0}, {"1vs3", 1}, {"2vs2", 1}, {"1vs4", 1}, {"2vs3", 2}};
    std::map<std::string, int> cf{{"1vs1", 0}, {"1vs2", 0}, {"1vs3", 0}, {"2vs2", 0}, {"1vs4", 1}, {"2vs3", 2}};
    std::set<std::string> seen;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        GeneratorParams p{16, 7 + static_cast<int>(seed % 5), 1, 18, -7, 8, 5, seed};
        Formulation f = assemble_iqpms(generate_instance(p));
        for (const NodeSummary& s : f.nodes) {
            seen.insert(s.shape);
            EXPECT_EQ(s.io_slacks, io.at(s.shape)) << s.shape;
            EXPECT_LE(s.cf_slacks, cf.at(s.shape)) << s.shape;
            EXPECT_EQ(f.qubo.slack_count(s.node, "io"), s.io_slacks);
            EXPECT_EQ(f.qubo.slack_count(s.node, "cf"), s.cf_slacks);
        }
    }
    std::string all;
    for (const auto& s : seen) all += s + " ";
    EXPECT_EQ(seen.size(), 6u) << all;
}

TEST(SwapSymmetry, ReversedNodeKeepsPenalties) {
    std::mt19937_64 rng(43);
    const std::vector<std::pair<int, int>> shapes{{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 2},
                                                  {1, 4}, {4, 1}, {2, 3}, {3, 2}};
    for (auto [a, b] : shapes) {
        for (int rep = 0; rep < 3; ++rep) {
            MpbsInstance inst = star(a, b, random_weights(rng, a + b + 1));
            MpbsInstance flip = reversed(inst);
            NodePenalties p = node_penalties(inst, 0);
            NodePenalties q = node_penalties(flip, 0);
            ASSERT_EQ(p.scenario.shape, q.scenario.shape);
            if (a != b) {
                EXPECT_EQ(p.scenario.ordering, q.scenario.ordering);
                EXPECT_EQ(p.io, q.io);
                EXPECT_EQ(p.cf, q.cf);
                continue;
            }
            // Equal groups: incoming stays first, so the canonical variables
            // swap halves. Compare what each penalty decides per arc subset.
            Rational lp = lambda_io(p.cf, 2), lq = lambda_io(q.cf, 2);
            const int m = a + b;
            for (std::uint64_t i = 0; i < (1u << m); ++i) {
                Bits by_arc = bits_from_index(i, m);
                Bits yp(m), yq(m);
                for (int k = 0; k < m; ++k) {
                    yp[k] = by_arc[p.scenario.ordering[k]];
                    yq[k] = by_arc[q.scenario.ordering[k]];
                }
                Rational vp = node_value(p, lp, yp), vq = node_value(q, lq, yq);
                EXPECT_EQ(vp == 0, vq == 0);
                EXPECT_TRUE(vp == 0 || vp <= -1);
                EXPECT_TRUE(vq == 0 || vq <= -1);
            }
        }
    }
}

TEST(Verify, BothAssembliesPassOnTwoCycle) {
    MpbsInstance inst = two_cycle();
    for (const Formulation& f : {assemble_standard(inst), assemble_iqpms(inst)}) {
        FormulationReport r = verify_formulation(inst, f.qubo, f.blocks);
        EXPECT_TRUE(r.ok);
        EXPECT_EQ(r.qubo_argmax, (Bits{1, 1}));
        EXPECT_EQ(r.qubo_max, 7);
    }
}

TEST(Verify, ZeroedMultiplierIsCaught) {
    // The 2-cycle with a weight that breaks CAP/FLOOR at (1,1).
    MpbsInstance inst = MpbsInstance::from_windows({{0, 0, 1, 3}, {1, 1, 0, 14}}, {{-7, 8}, {-7, 8}});
    AssemblyOptions o;
    o.lambda_override = {{0, 0}, {1, 0}};
    Formulation f = assemble_iqpms(inst, o);
    FormulationReport r = verify_formulation(inst, f.qubo, f.blocks);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.infeasible_below);
    ASSERT_FALSE(r.violations.empty());
    EXPECT_NE(r.violations[0].find("infeasible x="), std::string::npos);
    EXPECT_TRUE(verify_formulation(inst, assemble_iqpms(inst).qubo, assemble_iqpms(inst).blocks).ok);
}

TEST(Verify, ArgmaxEquivalenceOnRandomInstances) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        GeneratorParams p{8 + static_cast<int>(seed % 7), 0, 1, 18, -7, 8, 5, seed};
        p.n_nodes = p.n_arcs / 2 + 1;
        MpbsInstance inst = generate_instance(p);
        AssemblyOptions o;
        o.strategy = LambdaStrategy::Global;
        for (const Formulation& f : {assemble_standard(inst, o), assemble_iqpms(inst, o)}) {
            FormulationReport r = verify_formulation(inst, f.qubo, f.blocks);
            EXPECT_TRUE(r.ok) << "seed " << seed << (r.violations.empty() ? "" : ": " + r.violations[0]);
        }
    }
}

TEST(Properties, GapUnderLocalMultipliers) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        GeneratorParams p{12, 6, 1, 18, -7, 8, 5, 900 + seed};
        MpbsInstance inst = generate_instance(p);
        for (const Formulation& f : {assemble_standard(inst), assemble_iqpms(inst)}) {
            SlackMaximizer sm(f.qubo, f.blocks);
            for (std::uint64_t i = 0; i < (1u << 12); ++i) {
                Bits x = bits_from_index(i, 12);
                Rational v = sm.at_index(i);
                Rational w = objective(inst, x);
                for (int u = 0; u < inst.num_nodes(); ++u) {
                    if (inout_ok(inst, u, x) && capfloor_ok(inst, u, x)) continue;
                    ASSERT_LE(v, w - node_weight(inst, u)) << "seed " << seed << " x=" << bits_string(x);
                }
            }
        }
    }
}

}  // namespace
}  // namespace quboform
