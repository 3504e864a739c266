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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quboform/formulation.hpp"
#include "quboform/graph.hpp"
#include "quboform/iqp.hpp"
#include "quboform/penalty.hpp"

namespace quboform {

enum class NodeShape { OneOne, OneTwo, OneThree, TwoTwo, OneFour, TwoThree, Generic };

/// "1vs1", "1vs2", ..., "generic".
std::string shape_name(NodeShape shape);

/// How a node's arcs map to the canonical variables x1..xM.
///
/// Positions [0, group_a) hold one arc type and [group_a, M) the other. For
/// 1vsK group A is the singleton, for 2vs3 the pair, for 1vs1, 2vs2 and
/// generic nodes the incoming arcs.
struct NodeScenario {
    int node = 0;
    NodeShape shape = NodeShape::Generic;
    std::vector<int> ordering;
    int group_a = 0;
    bool a_incoming = true;

    int m() const { return static_cast<int>(ordering.size()); }
    int group_b() const { return m() - group_a; }
};

/// Throws Error for nodes outside 2..5 arcs unless allow_generic is set.
NodeScenario classify_node(const MpbsInstance& inst, int u, bool allow_generic = false);

/// IN/OUT on canonical variables: nothing selected, or something from both
/// groups.
bool inout_canonical(const Bits& y, int group_a);
SubConstraintTable io_master_table(int group_a, int group_b);
SubConstraintTable io_master_table(NodeShape shape);

int shape_size(NodeShape shape);
int shape_group_a(NodeShape shape);

/// The IN/OUT polynomial as printed for the shape, if there is one.
std::optional<QuadraticPenalty> printed_io_fixture(NodeShape shape);

struct IoClosedForm {
    QuadraticPenalty polynomial;
    int slacks = 0;
    /// The printed polynomial failed verification and was replaced.
    bool regenerated = false;
    std::string note;
};

/// Printed polynomial when it verifies, otherwise an IQP solve. Cached.
const IoClosedForm& io_closed_form(NodeShape shape);

/// sigma at every IN/OUT-satisfying canonical row except all-zeros:
/// 0 where CAP/FLOOR holds, -1 where it fails. Keys are row indices.
using SigmaTable = std::map<std::uint64_t, int>;

SigmaTable sigma_table(const MpbsInstance& inst, const NodeScenario& scenario);

/// CAP/FLOOR on canonical variables of a node.
bool capfloor_canonical(const MpbsInstance& inst, const NodeScenario& scenario, const Bits& y);

/// The linear system the closed form solves, as Exact rows.
SubConstraintTable cf_system(NodeShape shape, const SigmaTable& sigma);

/// Slack-free CAP/FLOOR polynomial for 1vs1 .. 2vs2 by substitution. For
/// 1vs1 the result also enforces IN/OUT.
QuadraticPenalty cf_closed_form(NodeShape shape, const SigmaTable& sigma);

struct CfSolve {
    QuadraticPenalty polynomial;
    int slacks = 0;
    /// More slacks than the usual 1 (1vs4) or 2 (2vs3).
    bool anomaly = false;
};

/// Satellite IQP solve for a five-arc node, cached per (shape, table).
CfSolve cf_degree5(const MpbsInstance& inst, int u, const SolveOptions& options = {});

/// Satellite table for the node's CAP/FLOOR with IN/OUT as master.
SubConstraintTable cf_satellite_table(const MpbsInstance& inst, const NodeScenario& scenario);

struct NodePenalties {
    NodeScenario scenario;
    QuadraticPenalty io;
    QuadraticPenalty cf;
    std::string note;
};

NodePenalties node_penalties(const MpbsInstance& inst, int u, const AssemblyOptions& options = {});

/// W(x) + sum_u lambda_u (lambda_io_u P_io + P_cf).
Formulation assemble_iqpms(const MpbsInstance& inst, const AssemblyOptions& options = {});

struct FormulationReport {
    bool ok = true;
    bool feasible_exact = true;   // every feasible x has slack-max equal to W(x)
    bool infeasible_below = true; // every infeasible x stays below W*
    bool argmax_matches = true;
    MpbsOptimum optimum;
    Bits qubo_argmax;
    Rational qubo_max;
    std::vector<std::string> violations;
};

constexpr int kVerifyCap = 20;

FormulationReport verify_formulation(const MpbsInstance& inst, const Qubo& qubo, const BlockIndex& blocks,
                                     int cap = kVerifyCap);

}  // namespace quboform
