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
#include <vector>

#include "quboform/formulation.hpp"
#include "quboform/graph.hpp"
#include "quboform/iqp.hpp"
#include "quboform/penalty.hpp"

namespace quboform {

/// Binary expansion S(s) = sum_k c_k s_k covering exactly the integers [0, T].
struct SlackLadder {
    std::int64_t range = 0;
    int n_vars = 0;
    /// 1, 2, ..., 2^(n-2), then the remainder T - (2^(n-1) - 1).
    std::vector<std::int64_t> coefficients;
};

SlackLadder slack_ladder(std::int64_t range);

/// ceil(log2(v)) for v >= 1.
int ceil_log2(std::int64_t v);

/// c + sum_k a_k y_k over M local variables.
struct LinearExpr {
    Rational constant;
    std::vector<Rational> coeffs;

    LinearExpr() = default;
    LinearExpr(std::vector<Rational> a, Rational c) : constant(std::move(c)), coeffs(std::move(a)) {}

    int size() const { return static_cast<int>(coeffs.size()); }
    Rational eval(const Bits& y) const;
};

/// -(expr)^2.
QuadraticPenalty standard_equality_penalty(const LinearExpr& expr);

/// -(expr + S(s))^2 with a ladder over [0, range]. Slack variables follow the
/// logical ones.
QuadraticPenalty standard_inequality_penalty(const LinearExpr& expr, std::int64_t range);

/// The two IN/OUT inequalities of a node. Local variables are the incoming
/// arcs followed by the outgoing arcs, as listed in the view.
struct StandardInOut {
    QuadraticPenalty first;
    QuadraticPenalty second;
    int slack_count = 0;
};

StandardInOut standard_inout_penalties(const NodeView& view);

struct StandardCapFloor {
    QuadraticPenalty polynomial;
    /// Arc ids of the local logical variables: incoming then outgoing.
    std::vector<int> arcs;
    int slack_count = 0;
};

/// Throws Error for non-integer weights or windows.
StandardCapFloor standard_capfloor_penalty(const MpbsInstance& inst, int u);

/// Ladder range |min expr| over the rows the master marks NoPenalty,
/// clamped at zero.
std::int64_t ms_range_reduction(const SubConstraintTable& master, const LinearExpr& expr);

/// W(x) plus lambda_u (P_io1 + P_io2 + P_cf) for every node; lambda_io is 1.
Formulation assemble_standard(const MpbsInstance& inst, const AssemblyOptions& options = {});

}  // namespace quboform
