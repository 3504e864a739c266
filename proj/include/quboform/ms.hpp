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

#include <vector>

#include "quboform/formulation.hpp"
#include "quboform/graph.hpp"
#include "quboform/iqp.hpp"
#include "quboform/penalty.hpp"

namespace quboform {

/// Free where any master fails, otherwise Penalty/NoPenalty by the satellite.
SubConstraintTable satellite_table(const std::vector<Oracle>& masters, const Oracle& satellite, int m);

/// max over y of sum_j max_s P_j(y, s). All penalties share the same M
/// logical variables and own disjoint slacks.
Rational accidental_incentive_max(const std::vector<QuadraticPenalty>& satellites);

/// 1 + gamma * max(0, incentive). Throws Error unless gamma > 1.
Rational relative_multiplier(const Rational& incentive_max, const Rational& gamma);

struct ConstraintChain {
    std::vector<SubConstraintTable> tables;
    std::vector<PenaltySolveReport> reports;
    std::vector<Rational> multipliers;

    /// sum_i lambda_i P_i with the slack blocks laid out one after another.
    QuadraticPenalty combined() const;
};

/// Enforces C_1, ..., C_n where position i only has to act on rows that
/// satisfy every earlier constraint. Multipliers are set from the last
/// position backwards so that later, already scaled penalties can never
/// outweigh an earlier one. The combined form is verified exhaustively.
ConstraintChain concatenated_enforce(const std::vector<Oracle>& chain, int m,
                                     const std::vector<int>& budgets, const Rational& gamma,
                                     const SolveOptions& options = {});

/// Arc ids incident to u.
std::vector<int> incident_arcs(const MpbsInstance& inst, int u);

/// Nodes sharing an arc with u (u excluded).
std::vector<int> neighbours(const MpbsInstance& inst, int u);

/// local: gamma w(u); neighbour: gamma times the total weight of the arcs
/// incident to u or to one of its neighbours; global: gamma sum_i w_i.
Rational lambda_node(const MpbsInstance& inst, int u, LambdaStrategy strategy, const Rational& gamma);

/// 1 + gamma max(0, max_{y,s} P_cf).
Rational lambda_io(const QuadraticPenalty& cf_penalty, const Rational& gamma);

}  // namespace quboform
