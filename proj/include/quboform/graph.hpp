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
#include <iosfwd>
#include <string>
#include <vector>

#include "quboform/rational.hpp"

namespace quboform {

struct Arc {
    int id = 0;
    int origin = 0;
    int target = 0;
    Rational weight;
};

struct NodeAttributes {
    Rational bl_r;
    Rational bl_a;
    Rational cap;
    Rational fl;
};

/// Directed weighted multigraph. Arc ids are 0..N-1 and double as the
/// logical variable index x_i of every formulation built on top.
struct RMultigraph {
    std::vector<int> nodes;
    std::vector<Arc> arcs;
    std::vector<NodeAttributes> attributes;
};

class MpbsInstance {
 public:
    MpbsInstance() = default;

    /// Builds an instance whose nodes are 0..windows.size()-1 with the given
    /// (FL, CAP) windows. Balances are zero, so cap = CAP and fl = FL.
    static MpbsInstance from_windows(std::vector<Arc> arcs,
                                     const std::vector<std::pair<Rational, Rational>>& windows);

    RMultigraph graph;

    int num_nodes() const { return static_cast<int>(graph.nodes.size()); }
    int num_arcs() const { return static_cast<int>(graph.arcs.size()); }
    const Arc& arc(int i) const { return graph.arcs.at(i); }

    /// FL(u) = fl(u) - bl_a(u).
    Rational floor_of(int u) const;
    /// CAP(u) = cap(u) - bl_r(u).
    Rational cap_of(int u) const;
};

struct NodeView {
    int node = 0;
    std::vector<int> incoming;
    std::vector<int> outgoing;

    int n_in() const { return static_cast<int>(incoming.size()); }
    int n_out() const { return static_cast<int>(outgoing.size()); }
    int degree() const { return n_in() + n_out(); }
};

/// Every violated structural invariant, one message each. Empty means valid.
std::vector<std::string> validate_instance(const MpbsInstance& inst);

NodeView node_view(const MpbsInstance& inst, int u);

struct GeneratorParams {
    int n_arcs = 10;
    int n_nodes = 6;
    int weight_lo = 1;
    int weight_hi = 18;
    int fl = -7;
    int cap = 8;
    int max_degree = 5;
    std::uint64_t seed = 1;
};

MpbsInstance generate_instance(const GeneratorParams& params);

bool inout_ok(const MpbsInstance& inst, int u, const Bits& x);
bool capfloor_ok(const MpbsInstance& inst, int u, const Bits& x);
bool feasible(const MpbsInstance& inst, const Bits& x);
Rational objective(const MpbsInstance& inst, const Bits& x);

/// Sum of the weights of the arcs incident to u.
Rational node_weight(const MpbsInstance& inst, int u);

struct MpbsOptimum {
    Bits x;
    Rational value;
    std::uint64_t multiplicity = 0;
};

constexpr int kDefaultBruteForceCap = 24;

MpbsOptimum brute_force_mpbs(const MpbsInstance& inst, int cap = kDefaultBruteForceCap);

struct FeasibleCount {
    std::uint64_t count = 0;
    double percent = 0.0;
};

FeasibleCount count_feasible(const MpbsInstance& inst, int cap = kDefaultBruteForceCap);

/// Calls visit(x, W(x)) for every feasible x in increasing index order.
template <class Visit>
void for_each_feasible(const MpbsInstance& inst, int cap, Visit&& visit);

void write_instance(std::ostream& out, const MpbsInstance& inst);
MpbsInstance read_instance(std::istream& in);
void write_instance_file(const std::string& path, const MpbsInstance& inst);
MpbsInstance read_instance_file(const std::string& path);

// Table-driven feasibility checks; used by the brute-force enumerators.
class FeasibilityOracle {
 public:
    explicit FeasibilityOracle(const MpbsInstance& inst);

    bool feasible(std::uint64_t index) const;
    int num_arcs() const { return n_; }

 private:
    struct NodeTable {
        std::vector<int> shifts;
        std::vector<std::uint8_t> ok;
    };
    int n_ = 0;
    std::vector<NodeTable> nodes_;
};

template <class Visit>
void for_each_feasible(const MpbsInstance& inst, int cap, Visit&& visit) {
    const int n = inst.num_arcs();
    if (n > cap) {
        throw CapExceeded("instance has " + std::to_string(n) + " arcs, cap is " +
                          std::to_string(cap));
    }
    FeasibilityOracle oracle(inst);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        if (!oracle.feasible(idx)) continue;
        Bits x = bits_from_index(idx, n);
        visit(x, objective(inst, x));
    }
}

}  // namespace quboform
