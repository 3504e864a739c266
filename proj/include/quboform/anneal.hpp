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
#include <string>
#include <vector>

#include "quboform/graph.hpp"
#include "quboform/qubo.hpp"

namespace quboform {

struct AnnealConfig {
    int sweeps = 100;
    int runs = 250;
    int blocks = 16;
    /// Geometric schedule from t_hi down to t_lo. t_hi <= 0 means
    /// max |coefficient| of the QUBO.
    double t_hi = 0.0;
    double t_lo = 0.01;
    std::uint64_t seed = 1;
    int threads = 1;
};

/// Single-flip Metropolis maximizer over a fixed QUBO. Coefficients are
/// converted to double here and nowhere else.
class Annealer {
 public:
    explicit Annealer(const Qubo& q, double t_hi = 0.0, double t_lo = 0.01);

    /// Best state seen at the end of a sweep during one annealing run.
    Bits sample(int sweeps, std::uint64_t seed) const;

    double t_hi() const { return t_hi_; }
    double t_lo() const { return t_lo_; }
    int size() const { return n_; }

 private:
    int n_ = 0;
    double t_hi_ = 0.0;
    double t_lo_ = 0.0;
    std::vector<double> linear_;
    std::vector<int> start_;
    std::vector<int> nbr_;
    std::vector<double> weight_;
};

Bits sa_sample(const Qubo& q, int sweeps, std::uint64_t seed);

struct MethodQubo {
    std::string name;
    Qubo qubo;
};

struct MethodStats {
    std::string instance;
    std::string method;
    std::int64_t successes = 0;
    std::int64_t successes95 = 0;
    std::int64_t total = 0;
    std::vector<std::int64_t> block_successes;
};

struct ExperimentStats {
    std::vector<MethodStats> rows;

    void merge(const ExperimentStats& other);
};

/// Samples every method's QUBO in config.blocks blocks of config.runs runs.
/// A run succeeds when the logical part is feasible and reaches W*, and
/// counts towards successes95 when feasible with W >= 0.95 W*.
ExperimentStats run_experiment(const std::string& instance, const MpbsInstance& inst,
                               const std::vector<MethodQubo>& methods, const AnnealConfig& config);

/// "%.2f" of num/den, or "inf" when den is zero.
std::string format_gain(std::int64_t num, std::int64_t den);

/// TSV with columns instance, method, successes, successes95, gain, gain95.
/// Gains are relative to the method named `baseline` on the same instance
/// and shown as "-" on the baseline itself or when it is absent. A final
/// block of rows with instance "total" aggregates all instances.
std::string gain_report(const ExperimentStats& stats, const std::string& baseline = "standard");

}  // namespace quboform
