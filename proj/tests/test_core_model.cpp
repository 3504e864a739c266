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

#include <random>
#include <sstream>

#include "quboform/graph.hpp"

namespace quboform {
namespace {

MpbsInstance two_cycle(int w0, int w1) {
    return MpbsInstance::from_windows({{0, 0, 1, w0}, {1, 1, 0, w1}}, {{-7, 8}, {-7, 8}});
}

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(parse_rational("3/2"), Rational(3, 2));
    EXPECT_EQ(parse_rational("-7"), Rational(-7));
    EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
    EXPECT_THROW(parse_rational("x"), std::invalid_argument);
}

TEST(Rational, BitsIndexRoundTrip) {
    Bits b = bits_from_index(0b1011, 4);
    EXPECT_EQ(b, (Bits{1, 0, 1, 1}));
    EXPECT_EQ(index_from_bits(b), 0b1011u);
}

TEST(Validate, MinimalTwoCycle) {
    EXPECT_TRUE(validate_instance(two_cycle(3, 4)).empty());
}

TEST(Validate, MissingIncomingArc) {
    auto inst = MpbsInstance::from_windows({{0, 0, 1, 1}, {1, 0, 1, 2}}, {{-7, 8}, {-7, 8}});
    auto report = validate_instance(inst);
    bool found = false;
    for (const auto& r : report) found |= r.find("lacks incoming arc") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(Validate, NonPositiveWeight) {
    auto report = validate_instance(two_cycle(0, 4));
    bool found = false;
    for (const auto& r : report) found |= r.find("non-positive weight") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(NodeView, CountsAndParallelArcs) {
    // node 0: in from 1 and 2, out to 1, 2, 2 (parallel)
    auto inst = MpbsInstance::from_windows(
            {{0, 1, 0, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}, {3, 0, 2, 1}, {4, 0, 2, 1}, {5, 1, 2, 1}, {6, 2, 1, 1}},
            {{-7, 8}, {-7, 8}, {-7, 8}});
    NodeView v = node_view(inst, 0);
    EXPECT_EQ(v.n_in(), 2);
    EXPECT_EQ(v.n_out(), 3);
    EXPECT_EQ(v.outgoing, (std::vector<int>{2, 3, 4}));
    NodeView c = node_view(two_cycle(1, 1), 1);
    EXPECT_EQ(c.n_in(), 1);
    EXPECT_EQ(c.n_out(), 1);
    EXPECT_THROW(node_view(inst, 9), Error);
}

TEST(Generator, RecipeStructure) {
    GeneratorParams p;  // 10 arcs, 6 nodes, weights 1..18, window -7:8, degree 5
    p.seed = 1;
    MpbsInstance inst = generate_instance(p);
    EXPECT_EQ(inst.num_arcs(), 10);
    EXPECT_EQ(inst.num_nodes(), 6);
    EXPECT_TRUE(validate_instance(inst).empty());
    for (int u = 0; u < 6; ++u) {
        NodeView v = node_view(inst, u);
        EXPECT_GE(v.n_in(), 1);
        EXPECT_GE(v.n_out(), 1);
        EXPECT_LE(v.degree(), 5);
        EXPECT_EQ(inst.floor_of(u), -7);
        EXPECT_EQ(inst.cap_of(u), 8);
    }
    for (const auto& a : inst.graph.arcs) {
        EXPECT_TRUE(is_integer(a.weight));
        EXPECT_GE(a.weight, 1);
        EXPECT_LE(a.weight, 18);
    }
}

TEST(Generator, ForcedTwoCycle) {
    GeneratorParams p{2, 2, 1, 1, -7, 8, 5, 42};
    MpbsInstance inst = generate_instance(p);
    ASSERT_EQ(inst.num_arcs(), 2);
    EXPECT_EQ(inst.arc(0).origin, inst.arc(1).target);
    EXPECT_EQ(inst.arc(1).origin, inst.arc(0).target);
    EXPECT_EQ(inst.arc(0).weight, 1);
    EXPECT_EQ(inst.arc(1).weight, 1);
}

TEST(Generator, Deterministic) {
    GeneratorParams p;
    p.n_arcs = 14;
    p.n_nodes = 7;
    p.seed = 99;
    std::ostringstream a, b;
    write_instance(a, generate_instance(p));
    write_instance(b, generate_instance(p));
    EXPECT_EQ(a.str(), b.str());
}

TEST(Generator, InfeasibleParameters) {
    GeneratorParams p{20, 4, 1, 18, -7, 8, 5, 1};  // 20 > 4*5/2
    EXPECT_THROW(generate_instance(p), Error);
}

TEST(Constraints, InOut) {
    auto inst = two_cycle(3, 4);
    EXPECT_TRUE(inout_ok(inst, 0, {0, 0}));
    EXPECT_FALSE(inout_ok(inst, 0, {0, 1}));  // arc 1 enters node 0, nothing leaves
    EXPECT_TRUE(inout_ok(inst, 0, {1, 1}));
}

TEST(Constraints, CapFloor) {
    auto inst = MpbsInstance::from_windows({{0, 1, 0, 4}, {1, 0, 1, 3}}, {{-7, 8}, {-7, 8}});
    EXPECT_TRUE(capfloor_ok(inst, 0, {1, 1}));  // net 4 - 3 = 1
    auto fig = MpbsInstance::from_windows({{0, 1, 0, 5}, {1, 0, 1, 14}}, {{-7, 8}, {-7, 8}});
    EXPECT_FALSE(capfloor_ok(fig, 0, {1, 1}));  // net 5 - 14 = -9
    EXPECT_TRUE(capfloor_ok(fig, 0, {0, 0}));
}

TEST(Constraints, Feasible) {
    auto inst = two_cycle(3, 4);
    EXPECT_TRUE(feasible(inst, {0, 0}));
    EXPECT_TRUE(feasible(inst, {1, 1}));
    EXPECT_FALSE(feasible(inst, {1, 0}));
}

TEST(BruteForce, TwoCycle) {
    auto opt = brute_force_mpbs(two_cycle(3, 4));
    EXPECT_EQ(opt.x, (Bits{1, 1}));
    EXPECT_EQ(opt.value, 7);
    EXPECT_EQ(opt.multiplicity, 1u);
    auto fc = count_feasible(two_cycle(3, 4));
    EXPECT_EQ(fc.count, 2u);
    EXPECT_DOUBLE_EQ(fc.percent, 50.0);
}

TEST(BruteForce, OnlyEmptyFeasible) {
    auto inst = MpbsInstance::from_windows({{0, 0, 1, 10}, {1, 1, 0, 1}}, {{-7, 8}, {-7, 8}});
    auto opt = brute_force_mpbs(inst);
    EXPECT_EQ(opt.x, (Bits{0, 0}));
    EXPECT_EQ(opt.value, 0);
    EXPECT_EQ(count_feasible(inst).count, 1u);
}

TEST(BruteForce, TiesReported) {
    // a: 0->1, b and c: 1->0, all weight 3, window [-1, 1]. {a,b} and {a,c}
    // give W=6; taking all three leaves node 0 with net 3.
    auto inst = MpbsInstance::from_windows({{0, 0, 1, 3}, {1, 1, 0, 3}, {2, 1, 0, 3}}, {{-1, 1}, {-1, 1}});
    auto opt = brute_force_mpbs(inst);
    EXPECT_EQ(opt.value, 6);
    EXPECT_EQ(opt.multiplicity, 2u);
    EXPECT_EQ(opt.x, (Bits{1, 0, 1}));
}

TEST(BruteForce, CapExceeded) {
    GeneratorParams p{26, 13, 1, 18, -7, 8, 5, 1};
    EXPECT_THROW(brute_force_mpbs(generate_instance(p)), CapExceeded);
}

TEST(Properties, EmptySelectionAndDecomposition) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        GeneratorParams p{12, 6, 1, 18, -7, 8, 5, static_cast<std::uint64_t>(t + 1)};
        MpbsInstance inst = generate_instance(p);
        Bits zero(inst.num_arcs(), 0);
        for (int u = 0; u < inst.num_nodes(); ++u) {
            EXPECT_TRUE(inout_ok(inst, u, zero));
            EXPECT_TRUE(capfloor_ok(inst, u, zero));
        }
        FeasibilityOracle oracle(inst);
        for (int k = 0; k < 200; ++k) {
            std::uint64_t idx = rng() & ((1u << 12) - 1);
            Bits x = bits_from_index(idx, 12);
            bool all = true;
            for (int u = 0; u < inst.num_nodes(); ++u) all = all && inout_ok(inst, u, x) && capfloor_ok(inst, u, x);
            EXPECT_EQ(feasible(inst, x), all);
            EXPECT_EQ(oracle.feasible(idx), all);
        }
        auto opt = brute_force_mpbs(inst);
        EXPECT_TRUE(feasible(inst, opt.x));
        for_each_feasible(inst, 24, [&](const Bits& x, const Rational& w) {
            EXPECT_LE(w, opt.value);
            if (w == opt.value) EXPECT_LE(opt.x, x);
        });
    }
}

TEST(InstanceFile, RoundTripWithRationals) {
    auto inst = MpbsInstance::from_windows({{0, 0, 1, Rational(3, 2)}, {1, 1, 0, 4}}, {{-7, 8}, {Rational(-1, 3), 2}});
    std::ostringstream out;
    write_instance(out, inst);
    std::istringstream in(out.str());
    MpbsInstance back = read_instance(in);
    std::ostringstream again;
    write_instance(again, back);
    EXPECT_EQ(out.str(), again.str());
    EXPECT_EQ(back.arc(0).weight, Rational(3, 2));
    EXPECT_EQ(back.floor_of(1), Rational(-1, 3));
}

TEST(InstanceFile, MalformedReportsLine) {
    std::istringstream in("mpbs v1\nnode 0 -7 8\nbogus\n");
    try {
        read_instance(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
}

}  // namespace
}  // namespace quboform
