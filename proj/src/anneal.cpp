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


#include "quboform/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "quboform/random.hpp"

namespace quboform {

Annealer::Annealer(const Qubo& q, double t_hi, double t_lo) : n_(q.size()), linear_(q.size(), 0.0) {
    std::vector<std::vector<std::pair<int, double>>> adj(n_);
    double biggest = 0.0;
    for (const auto& [key, c] : q.coeffs()) {
        double v = c.get_d();
        biggest = std::max(biggest, std::fabs(v));
        if (key.first == key.second) {
            linear_[key.first] += v;
        } else {
            adj[key.first].push_back({key.second, v});
            adj[key.second].push_back({key.first, v});
        }
    }
    t_lo_ = t_lo > 0 ? t_lo : 0.01;
    t_hi_ = t_hi > 0 ? t_hi : biggest;
    if (t_hi_ <= t_lo_) t_hi_ = 2 * t_lo_;
    start_.push_back(0);
    for (const auto& list : adj) {
        for (const auto& [j, v] : list) {
            nbr_.push_back(j);
            weight_.push_back(v);
        }
        start_.push_back(static_cast<int>(nbr_.size()));
    }
}

Bits Annealer::sample(int sweeps, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    Bits x(n_);
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() >> 63);
    // field[i] = gain of setting x_i = 1 given the others
    std::vector<double> field = linear_;
    for (int i = 0; i < n_; ++i) {
        if (!x[i]) continue;
        for (int e = start_[i]; e < start_[i + 1]; ++e) field[nbr_[e]] += weight_[e];
    }
    const double ratio = sweeps > 1 ? std::pow(t_lo_ / t_hi_, 1.0 / (sweeps - 1)) : 1.0;
    double t = sweeps > 1 ? t_hi_ : t_lo_;
    // Energy relative to the starting state; the best state is kept at sweep ends.
    double energy = 0.0, best_energy = 0.0;
    Bits best = x;
    for (int sweep = 0; sweep < sweeps; ++sweep, t *= ratio) {
        for (int i = 0; i < n_; ++i) {
            const double delta = x[i] ? -field[i] : field[i];
            if (delta < 0 && uniform_unit(rng) >= std::exp(delta / t)) continue;
            x[i] ^= 1;
            energy += delta;
            const double sign = x[i] ? 1.0 : -1.0;
            for (int e = start_[i]; e < start_[i + 1]; ++e) field[nbr_[e]] += sign * weight_[e];
        }
        if (energy > best_energy + 1e-9) {
            best_energy = energy;
            best = x;
        }
    }
    return best;
}

Bits sa_sample(const Qubo& q, int sweeps, std::uint64_t seed) { return Annealer(q).sample(sweeps, seed); }

void ExperimentStats::merge(const ExperimentStats& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

ExperimentStats run_experiment(const std::string& instance, const MpbsInstance& inst,
                               const std::vector<MethodQubo>& methods, const AnnealConfig& config) {
    if (config.sweeps < 1 || config.runs < 1 || config.blocks < 1) {
        throw Error("sweeps, runs and blocks must be positive");
    }
    const MpbsOptimum opt = brute_force_mpbs(inst);
    const int n = inst.num_arcs();
    FeasibilityOracle oracle(inst);
    const Rational target95 = opt.value * Rational(95, 100);

    ExperimentStats stats;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        const Qubo& q = methods[m].qubo;
        if (q.n_logical() != n) throw Error("method " + methods[m].name + " has the wrong logical count");
        Annealer annealer(q, config.t_hi, config.t_lo);
        std::vector<std::int64_t> hit(config.blocks, 0), hit95(config.blocks, 0);
        auto run_block = [&](int b) {
            const std::uint64_t block_seed = mix_seed(mix_seed(config.seed, m), static_cast<std::uint64_t>(b));
            for (int r = 0; r < config.runs; ++r) {
                Bits x = annealer.sample(config.sweeps, mix_seed(block_seed, static_cast<std::uint64_t>(r)));
                x.resize(n);
                if (!oracle.feasible(index_from_bits(x))) continue;
                Rational w = objective(inst, x);
                hit[b] += w == opt.value;
                hit95[b] += w >= target95;
            }
        };
        const int threads = std::max(1, std::min(config.threads, config.blocks));
        if (threads == 1) {
            for (int b = 0; b < config.blocks; ++b) run_block(b);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) {
                pool.emplace_back([&, t] {
                    for (int b = t; b < config.blocks; b += threads) run_block(b);
                });
            }
            for (auto& th : pool) th.join();
        }
        MethodStats row;
        row.instance = instance;
        row.method = methods[m].name;
        row.total = std::int64_t{config.blocks} * config.runs;
        row.block_successes = hit;
        for (int b = 0; b < config.blocks; ++b) {
            row.successes += hit[b];
            row.successes95 += hit95[b];
        }
        stats.rows.push_back(std::move(row));
    }
    return stats;
}

std::string format_gain(std::int64_t num, std::int64_t den) {
    if (den == 0) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", static_cast<double>(num) / static_cast<double>(den));
    return buf;
}

std::string gain_report(const ExperimentStats& stats, const std::string& baseline) {
    std::vector<MethodStats> rows = stats.rows;
    std::vector<std::string> methods;
    std::map<std::string, MethodStats> totals;
    for (const auto& r : stats.rows) {
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
        MethodStats& t = totals[r.method];
        t.instance = "total";
        t.method = r.method;
        t.successes += r.successes;
        t.successes95 += r.successes95;
        t.total += r.total;
    }
    for (const auto& m : methods) rows.push_back(totals[m]);

    std::ostringstream out;
    out << "instance\tmethod\tsuccesses\tsuccesses95\tgain\tgain95\n";
    for (const auto& r : rows) {
        const MethodStats* base = nullptr;
        for (const auto& o : rows) {
            if (o.instance == r.instance && o.method == baseline) base = &o;
        }
        out << r.instance << '\t' << r.method << '\t' << r.successes << '\t' << r.successes95 << '\t';
        if (base == nullptr || r.method == baseline) {
            out << "-\t-\n";
        } else {
            out << format_gain(r.successes, base->successes) << '\t'
                << format_gain(r.successes95, base->successes95) << '\n';
        }
    }
    return out.str();
}

}  // namespace quboform
