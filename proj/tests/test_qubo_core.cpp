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

#include "quboform/qubo.hpp"

namespace quboform {
namespace {

QuadraticPenalty random_penalty(std::mt19937_64& rng, int m, int ms) {
    QuadraticPenalty p(m, ms);
    std::uniform_int_distribution<int> coef(-4, 4);
    for (int i = 0; i < m + ms; ++i) {
        for (int j = i; j < m + ms; ++j) p.add(i, j, coef(rng));
    }
    p.add_constant(coef(rng));
    return p;
}

// Max over every slack bit of the whole form, without using any block structure.
Rational enumerate_slacks(const Qubo& q, const Bits& x) {
    const int ns = q.n_slack();
    Rational best;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << ns); ++s) {
        Bits a = x;
        Bits sb = bits_from_index(s, ns);
        a.insert(a.end(), sb.begin(), sb.end());
        Rational v = eval_qubo(q, a);
        if (s == 0 || v > best) best = v;
    }
    return best;
}

TEST(Penalty, EvalExamples) {
    auto p = QuadraticPenalty::parse("-x1-x2+2x1x2", 2, 0);
    EXPECT_EQ(eval_penalty(p, {1, 1}, {}), 0);
    auto io3 = QuadraticPenalty::parse("-x1-x2-x3+2x1x2+2x1x3-x2x3", 3, 0);
    EXPECT_EQ(eval_penalty(io3, {0, 1, 1}, {}), -3);
    EXPECT_EQ(eval_penalty(QuadraticPenalty(3, 1), {1, 0, 1}, {1}), 0);
    EXPECT_THROW(eval_penalty(p, {1}, {}), Error);
}

TEST(Penalty, ParseAndPrintRoundTrip) {
    auto p = QuadraticPenalty::parse("-5s1+2s1x2+1/2-x1", 2, 1);
    EXPECT_EQ(p.constant(), Rational(1, 2));
    EXPECT_EQ(p.coeff(2, 2), -5);
    EXPECT_EQ(p.coeff(1, 2), 2);
    EXPECT_EQ(QuadraticPenalty::parse(p.to_string(), 2, 1), p);
}

TEST(Qubo, EvalExamples) {
    Qubo d(1);
    d.add(0, 0, 5);
    EXPECT_EQ(eval_qubo(d, {1}), 5);
    Qubo q(2);
    q.add(0, 0, 1);
    q.add(1, 1, 1);
    q.add(0, 1, -3);
    EXPECT_EQ(eval_qubo(q, {1, 1}), -1);
    q.add_offset(Rational(7, 3));
    EXPECT_EQ(eval_qubo(q, {0, 0}), Rational(7, 3));
    EXPECT_THROW(eval_qubo(q, {1}), Error);
}

TEST(Embed, ZeroPolynomialIsNoOp) {
    Qubo q(3);
    q.add(0, 1, 2);
    Qubo r = embed_penalty(q, QuadraticPenalty(2, 0), {0, 2}, {0, "io"}, 5);
    EXPECT_EQ(r.coeffs(), q.coeffs());
    EXPECT_EQ(r.offset(), q.offset());
}

TEST(Embed, ScaledTwoArcPolynomial) {
    Qubo q(8);
    Qubo r = embed_penalty(q, QuadraticPenalty::parse("-x1-x2+2x1x2", 2, 0), {3, 7}, {0, "io"}, 14);
    EXPECT_EQ(r.coeff(3, 3), -14);
    EXPECT_EQ(r.coeff(7, 7), -14);
    EXPECT_EQ(r.coeff(3, 7), 28);
    EXPECT_EQ(r.coeffs().size(), 3u);
}

TEST(Embed, DuplicateOwnerRejected) {
    Qubo q(2);
    auto p = QuadraticPenalty::parse("-s1+x1s1", 1, 1);
    embed_penalty_into(q, p, {0}, {0, "cf"}, 1);
    EXPECT_THROW(embed_penalty_into(q, p, {1}, {0, "cf"}, 1), Error);
    EXPECT_THROW(embed_penalty_into(q, QuadraticPenalty(2, 0), {1, 1}, {1, "cf"}, 1), Error);
}

TEST(Embed, ConstantGoesToOffsetAndSlacksRegistered) {
    Qubo q(2);
    embed_penalty_into(q, QuadraticPenalty::parse("-1-s1-s2+x1s2", 1, 2), {1}, {4, "cf"}, 3);
    EXPECT_EQ(q.offset(), -3);
    EXPECT_EQ(q.n_slack(), 2);
    EXPECT_EQ(q.slack_count(4, "cf"), 2);
    BlockIndex bi = build_block_index(q);
    ASSERT_EQ(bi.blocks.size(), 1u);
    EXPECT_EQ(bi.blocks[0].slacks, (std::vector<int>{2, 3}));
    EXPECT_EQ(bi.blocks[0].logicals, (std::vector<int>{1}));
}

TEST(Embed, Linearity) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto p1 = random_penalty(rng, 3, 0);
        auto p2 = random_penalty(rng, 3, 0);
        Qubo a(4), b(4);
        embed_penalty_into(a, p1, {0, 1, 3}, {0, "io"}, 2);
        embed_penalty_into(a, p2, {0, 1, 3}, {1, "io"}, 2);
        QuadraticPenalty sum = p1;
        sum += p2;
        embed_penalty_into(b, sum, {0, 1, 3}, {0, "io"}, 2);
        for (std::uint64_t i = 0; i < 16; ++i) {
            Bits x = bits_from_index(i, 4);
            EXPECT_EQ(eval_qubo(a, x), eval_qubo(b, x));
        }
    }
}

TEST(BruteForceQubo, Examples) {
    Qubo d(2);
    d.add(0, 0, 5);
    d.add(1, 1, -2);
    auto m = brute_force_qubo_max(d);
    EXPECT_EQ(m.value, 5);
    ASSERT_EQ(m.maximizers.size(), 1u);
    EXPECT_EQ(m.maximizers[0], (Bits{1, 0}));

    Qubo q(2);
    q.add(0, 0, 1);
    q.add(1, 1, 1);
    q.add(0, 1, -3);
    m = brute_force_qubo_max(q);
    EXPECT_EQ(m.value, 1);
    EXPECT_EQ(m.maximizers, (std::vector<Bits>{{0, 1}, {1, 0}}));

    Qubo e(0);
    e.add_offset(4);
    m = brute_force_qubo_max(e);
    EXPECT_EQ(m.value, 4);
    ASSERT_EQ(m.maximizers.size(), 1u);
    EXPECT_TRUE(m.maximizers[0].empty());

    EXPECT_THROW(brute_force_qubo_max(Qubo(29)), CapExceeded);
}

TEST(BruteForceQubo, OffsetInvariance) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        Qubo q(6);
        embed_penalty_into(q, random_penalty(rng, 4, 2), {0, 2, 3, 5}, {0, "cf"}, 1);
        embed_penalty_into(q, random_penalty(rng, 3, 1), {1, 2, 4}, {1, "cf"}, 3);
        auto base = brute_force_qubo_max(q);
        for (Rational c : {Rational(-100), Rational(7, 3), Rational(1000000)}) {
            Qubo shifted = q;
            shifted.add_offset(c);
            auto m = brute_force_qubo_max(shifted);
            EXPECT_EQ(m.maximizers, base.maximizers);
            EXPECT_EQ(m.value, base.value + c);
        }
    }
}

TEST(MaxOverSlacks, NoSlacks) {
    Qubo q(3);
    q.add(0, 2, 4);
    q.add(1, 1, -1);
    BlockIndex bi = build_block_index(q);
    EXPECT_EQ(max_over_slacks(q, bi, {1, 1, 1}), eval_qubo(q, {1, 1, 1}));
}

TEST(MaxOverSlacks, SatisfiedBlockContributesZero) {
    // -(x1 - s1)^2 is 0 at x1 = 1 once s1 = 1.
    Qubo q(1);
    embed_penalty_into(q, QuadraticPenalty::parse("-x1-s1+2x1s1", 1, 1), {0}, {0, "io"}, 1);
    EXPECT_EQ(max_over_slacks(q, build_block_index(q), {1}), 0);
    EXPECT_EQ(max_over_slacks(q, build_block_index(q), {0}), 0);
}

TEST(MaxOverSlacks, MatchesFullEnumeration) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 40; ++t) {
        const int n = 5;
        Qubo q(n);
        for (int i = 0; i < n; ++i) q.add(i, i, static_cast<int>(rng() % 9) - 4);
        // Up to 20 slack bits spread over disjoint owners.
        int budget = 4 + static_cast<int>(rng() % 17);
        int owner = 0;
        while (budget > 0) {
            int ms = std::min(budget, 1 + static_cast<int>(rng() % 6));
            budget -= ms;
            std::vector<int> map;
            for (int i = 0; i < n; ++i) {
                if (rng() % 2) map.push_back(i);
            }
            if (map.empty()) map.push_back(0);
            embed_penalty_into(q, random_penalty(rng, static_cast<int>(map.size()), ms), map,
                               {owner++, "cf"}, Rational(1 + static_cast<int>(rng() % 3), 2));
        }
        ASSERT_LE(q.n_slack(), 20);
        BlockIndex bi = build_block_index(q);
        SlackMaximizer sm(q, bi);
        for (std::uint64_t i = 0; i < (1u << n); ++i) {
            Bits x = bits_from_index(i, n);
            Rational oracle = enumerate_slacks(q, x);
            EXPECT_EQ(max_over_slacks(q, bi, x), oracle);
            EXPECT_EQ(sm.at_index(i), oracle);
        }
        if (q.n_slack() > 12) break;  // keep the 2^20 cases few
    }
}

TEST(QuboFile, RoundTrip) {
    Qubo q(2);
    q.add(0, 1, Rational(3, 2));
    q.add(1, 1, -4);
    q.add_offset(Rational(-1, 7));
    embed_penalty_into(q, QuadraticPenalty::parse("-s1-s2+x1s2", 1, 2), {0}, {3, "io1"}, 2);
    std::ostringstream out;
    write_qubo(out, q);
    std::istringstream in(out.str());
    Qubo r = read_qubo(in);
    EXPECT_EQ(r.coeffs(), q.coeffs());
    EXPECT_EQ(r.offset(), q.offset());
    ASSERT_EQ(r.size(), q.size());
    for (int i = 0; i < q.size(); ++i) EXPECT_TRUE(r.labels()[i] == q.labels()[i]);
    EXPECT_EQ(r.coeff(0, 1), Rational(3, 2));
    std::ostringstream again;
    write_qubo(again, r);
    EXPECT_EQ(again.str(), out.str());
}

TEST(QuboFile, MissingHeader) {
    std::istringstream in("vars 1 0\noffset 0\nlabel 0 logical 0\n");
    EXPECT_THROW(read_qubo(in), ParseError);
}

}  // namespace
}  // namespace quboform
