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

#include <map>
#include <string>
#include <vector>

#include "quboform/iqp.hpp"
#include "quboform/qubo.hpp"
#include "quboform/rational.hpp"

namespace quboform {

enum class LambdaStrategy { Local, Neighbour, Global };

std::string to_string(LambdaStrategy s);
/// Accepts "local", "neigh"/"neighbour", "global".
LambdaStrategy parse_lambda_strategy(const std::string& text);

struct AssemblyOptions {
    Rational gamma = 2;
    LambdaStrategy strategy = LambdaStrategy::Local;
    /// Replaces the computed lambda_u of the listed nodes. Meant for tests
    /// that need a broken formulation.
    std::map<int, Rational> lambda_override;
    /// Nodes with more than five arcs get generic IQP penalties instead of
    /// an error.
    bool allow_fallback = false;
    SolveOptions iqp;
};

struct NodeSummary {
    int node = 0;
    int n_in = 0;
    int n_out = 0;
    std::string shape;
    int io_slacks = 0;
    int cf_slacks = 0;
    Rational lambda;
    Rational lambda_io;
    std::string note;
};

struct Formulation {
    Qubo qubo;
    BlockIndex blocks;
    std::vector<NodeSummary> nodes;
    /// Human-readable remarks, e.g. regenerated fixtures or anomalies.
    std::vector<std::string> notes;

    int total_slacks() const { return qubo.n_slack(); }
};

}  // namespace quboform
