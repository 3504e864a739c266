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

#include "quboform/graph.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "quboform/random.hpp"

namespace quboform {

MpbsInstance MpbsInstance::from_windows(std::vector<Arc> arcs,
                                        const std::vector<std::pair<Rational, Rational>>& windows) {
    MpbsInstance inst;
    for (int u = 0; u < static_cast<int>(windows.size()); ++u) {
        inst.graph.nodes.push_back(u);
        inst.graph.attributes.push_back({0, 0, windows[u].second, windows[u].first});
    }
    inst.graph.arcs = std::move(arcs);
    return inst;
}

Rational MpbsInstance::floor_of(int u) const {
    const auto& a = graph.attributes.at(u);
    return a.fl - a.bl_a;
}

Rational MpbsInstance::cap_of(int u) const {
    const auto& a = graph.attributes.at(u);
    return a.cap - a.bl_r;
}

std::vector<std::string> validate_instance(const MpbsInstance& inst) {
    std::vector<std::string> report;
    const int v = inst.num_nodes();
    if (static_cast<int>(inst.graph.attributes.size()) != v) {
        report.push_back("attribute count differs from node count");
        return report;
    }
    for (int u = 0; u < v; ++u) {
        if (inst.graph.nodes[u] != u) {
            report.push_back("node ids are not contiguous from 0 (position " + std::to_string(u) + ")");
        }
    }
    std::vector<int> n_in(v, 0), n_out(v, 0);
    for (int i = 0; i < inst.num_arcs(); ++i) {
        const Arc& a = inst.graph.arcs[i];
        std::string tag = "arc " + std::to_string(i);
        if (a.id != i) report.push_back(tag + ": id " + std::to_string(a.id) + " out of sequence");
        if (a.weight <= 0) report.push_back(tag + ": non-positive weight");
        bool endpoints = true;
        if (a.origin < 0 || a.origin >= v) {
            report.push_back(tag + ": unknown origin node " + std::to_string(a.origin));
            endpoints = false;
        }
        if (a.target < 0 || a.target >= v) {
            report.push_back(tag + ": unknown target node " + std::to_string(a.target));
            endpoints = false;
        }
        if (endpoints && a.origin == a.target) report.push_back(tag + ": self-loop");
        if (endpoints) {
            ++n_out[a.origin];
            ++n_in[a.target];
        }
    }
    for (int u = 0; u < v; ++u) {
        std::string tag = "node " + std::to_string(u);
        if (n_in[u] == 0) report.push_back(tag + ": node lacks incoming arc");
        if (n_out[u] == 0) report.push_back(tag + ": node lacks outgoing arc");
        if (inst.floor_of(u) > 0) report.push_back(tag + ": FL > 0");
        if (inst.cap_of(u) < 0) report.push_back(tag + ": CAP < 0");
    }
    return report;
}

NodeView node_view(const MpbsInstance& inst, int u) {
    if (u < 0 || u >= inst.num_nodes()) throw Error("unknown node id " + std::to_string(u));
    NodeView view;
    view.node = u;
    for (const Arc& a : inst.graph.arcs) {
        if (a.target == u) view.incoming.push_back(a.id);
        if (a.origin == u) view.outgoing.push_back(a.id);
    }
    return view;
}

MpbsInstance generate_instance(const GeneratorParams& p) {
    if (p.n_nodes < 2) throw Error("generator needs at least 2 nodes");
    if (p.n_arcs < p.n_nodes) throw Error("generator needs n_arcs >= n_nodes");
    if (p.max_degree < 2) throw Error("generator needs max_degree >= 2");
    if (p.weight_lo < 1 || p.weight_hi < p.weight_lo) throw Error("bad weight range");
    if (p.fl > 0 || p.cap < 0) throw Error("window must satisfy FL <= 0 <= CAP");
    if (static_cast<long long>(p.n_arcs) * 2 > static_cast<long long>(p.n_nodes) * p.max_degree) {
        throw Error("infeasible parameters: n_arcs > n_nodes*max_degree/2");
    }
    std::mt19937_64 rng(p.seed);
    constexpr int kRestarts = 1000;
    for (int attempt = 0; attempt < kRestarts; ++attempt) {
        std::vector<int> perm(p.n_nodes);
        for (int i = 0; i < p.n_nodes; ++i) perm[i] = i;
        shuffle(perm, rng);
        std::vector<std::pair<int, int>> ends;
        std::vector<int> degree(p.n_nodes, 0);
        for (int i = 0; i < p.n_nodes; ++i) {
            int a = perm[i], b = perm[(i + 1) % p.n_nodes];
            ends.emplace_back(a, b);
            ++degree[a];
            ++degree[b];
        }
        bool stuck = false;
        while (static_cast<int>(ends.size()) < p.n_arcs) {
            int open = 0;
            for (int d : degree) open += d < p.max_degree;
            if (open < 2) {
                stuck = true;
                break;
            }
            int a = static_cast<int>(uniform_below(rng, p.n_nodes));
            int b = static_cast<int>(uniform_below(rng, p.n_nodes));
            if (a == b || degree[a] >= p.max_degree || degree[b] >= p.max_degree) continue;
            ends.emplace_back(a, b);
            ++degree[a];
            ++degree[b];
        }
        if (stuck) continue;
        std::vector<Arc> arcs;
        for (int i = 0; i < p.n_arcs; ++i) {
            int w = p.weight_lo + static_cast<int>(uniform_below(rng, p.weight_hi - p.weight_lo + 1));
            arcs.push_back({i, ends[i].first, ends[i].second, Rational(w)});
        }
        std::vector<std::pair<Rational, Rational>> windows(p.n_nodes, {Rational(p.fl), Rational(p.cap)});
        return MpbsInstance::from_windows(std::move(arcs), windows);
    }
    throw Error("generator could not place arcs under the degree limit");
}

namespace {

Rational net_flow(const MpbsInstance& inst, int u, const Bits& x) {
    Rational net = 0;
    for (const Arc& a : inst.graph.arcs) {
        if (!x.at(a.id)) continue;
        if (a.target == u) net += a.weight;
        if (a.origin == u) net -= a.weight;
    }
    return net;
}

void check_length(const MpbsInstance& inst, const Bits& x) {
    if (static_cast<int>(x.size()) != inst.num_arcs()) throw Error("assignment length mismatch");
}

}  // namespace

bool inout_ok(const MpbsInstance& inst, int u, const Bits& x) {
    check_length(inst, x);
    bool any_in = false, any_out = false;
    for (const Arc& a : inst.graph.arcs) {
        if (!x[a.id]) continue;
        if (a.target == u) any_in = true;
        if (a.origin == u) any_out = true;
    }
    return any_in == any_out;
}

bool capfloor_ok(const MpbsInstance& inst, int u, const Bits& x) {
    check_length(inst, x);
    Rational net = net_flow(inst, u, x);
    return inst.floor_of(u) <= net && net <= inst.cap_of(u);
}

bool feasible(const MpbsInstance& inst, const Bits& x) {
    for (int u = 0; u < inst.num_nodes(); ++u) {
        if (!inout_ok(inst, u, x) || !capfloor_ok(inst, u, x)) return false;
    }
    return true;
}

Rational objective(const MpbsInstance& inst, const Bits& x) {
    check_length(inst, x);
    Rational w = 0;
    for (const Arc& a : inst.graph.arcs) {
        if (x[a.id]) w += a.weight;
    }
    return w;
}

Rational node_weight(const MpbsInstance& inst, int u) {
    Rational w = 0;
    for (const Arc& a : inst.graph.arcs) {
        if (a.origin == u || a.target == u) w += a.weight;
    }
    return w;
}

FeasibilityOracle::FeasibilityOracle(const MpbsInstance& inst) : n_(inst.num_arcs()) {
    for (int u = 0; u < inst.num_nodes(); ++u) {
        NodeView view = node_view(inst, u);
        std::vector<int> local;
        std::vector<int> sign;
        for (int a : view.incoming) {
            local.push_back(a);
            sign.push_back(+1);
        }
        for (int a : view.outgoing) {
            local.push_back(a);
            sign.push_back(-1);
        }
        if (local.size() > 20) throw CapExceeded("node degree too large for table oracle");
        NodeTable table;
        for (int a : local) table.shifts.push_back(n_ - 1 - a);
        const int k = static_cast<int>(local.size());
        table.ok.resize(std::size_t{1} << k);
        const Rational lo = inst.floor_of(u), hi = inst.cap_of(u);
        for (std::uint32_t m = 0; m < table.ok.size(); ++m) {
            bool any_in = false, any_out = false;
            Rational net = 0;
            for (int j = 0; j < k; ++j) {
                if (!((m >> j) & 1u)) continue;
                const Rational& w = inst.arc(local[j]).weight;
                if (sign[j] > 0) {
                    any_in = true;
                    net += w;
                } else {
                    any_out = true;
                    net -= w;
                }
            }
            table.ok[m] = any_in == any_out && lo <= net && net <= hi;
        }
        nodes_.push_back(std::move(table));
    }
}

bool FeasibilityOracle::feasible(std::uint64_t index) const {
    for (const NodeTable& t : nodes_) {
        std::uint32_t m = 0;
        for (std::size_t j = 0; j < t.shifts.size(); ++j) {
            m |= static_cast<std::uint32_t>((index >> t.shifts[j]) & 1u) << j;
        }
        if (!t.ok[m]) return false;
    }
    return true;
}

MpbsOptimum brute_force_mpbs(const MpbsInstance& inst, int cap) {
    MpbsOptimum best;
    best.x = Bits(inst.num_arcs(), 0);
    best.value = 0;
    best.multiplicity = 0;
    bool first = true;
    for_each_feasible(inst, cap, [&](const Bits& x, const Rational& w) {
        if (first || w > best.value) {
            best.x = x;
            best.value = w;
            best.multiplicity = 1;
            first = false;
        } else if (w == best.value) {
            ++best.multiplicity;
        }
    });
    return best;
}

FeasibleCount count_feasible(const MpbsInstance& inst, int cap) {
    FeasibleCount c;
    for_each_feasible(inst, cap, [&](const Bits&, const Rational&) { ++c.count; });
    c.percent = 100.0 * static_cast<double>(c.count) /
                static_cast<double>(std::uint64_t{1} << inst.num_arcs());
    return c;
}

void write_instance(std::ostream& out, const MpbsInstance& inst) {
    out << "mpbs v1\n";
    for (int u = 0; u < inst.num_nodes(); ++u) {
        out << "node " << u << ' ' << to_string(inst.floor_of(u)) << ' '
            << to_string(inst.cap_of(u)) << '\n';
    }
    for (const Arc& a : inst.graph.arcs) {
        out << "arc " << a.id << ' ' << a.origin << ' ' << a.target << ' ' << to_string(a.weight)
            << '\n';
    }
}

MpbsInstance read_instance(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool header = false;
    std::vector<std::pair<Rational, Rational>> windows;
    std::vector<Arc> arcs;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        if (!header) {
            std::string version;
            ss >> version;
            if (kind != "mpbs" || version != "v1") throw ParseError("missing 'mpbs v1' header", lineno);
            header = true;
            continue;
        }
        try {
            if (kind == "node") {
                int id;
                std::string fl, cap;
                if (!(ss >> id >> fl >> cap)) throw ParseError("malformed node line", lineno);
                if (id != static_cast<int>(windows.size())) {
                    throw ParseError("node ids must be listed as 0,1,2,...", lineno);
                }
                windows.emplace_back(parse_rational(fl), parse_rational(cap));
            } else if (kind == "arc") {
                Arc a;
                std::string w;
                if (!(ss >> a.id >> a.origin >> a.target >> w)) throw ParseError("malformed arc line", lineno);
                a.weight = parse_rational(w);
                arcs.push_back(a);
            } else {
                throw ParseError("unknown record '" + kind + "'", lineno);
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
        std::string extra;
        if (ss >> extra) throw ParseError("trailing tokens", lineno);
    }
    if (!header) throw ParseError("missing 'mpbs v1' header", lineno);
    return MpbsInstance::from_windows(std::move(arcs), windows);
}

void write_instance_file(const std::string& path, const MpbsInstance& inst) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    write_instance(out, inst);
}

MpbsInstance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    return read_instance(in);
}

}  // namespace quboform
