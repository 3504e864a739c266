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


// Command-line front end: gen, formulate, solve, verify, bench, report.
// Exit codes: 0 success, 1 usage, 2 validation failure, 3 budget exhausted.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "quboform/anneal.hpp"
#include "quboform/mpbs_qubo.hpp"
#include "quboform/random.hpp"
#include "quboform/standard.hpp"

#ifndef QUBOFORM_VERSION
#define QUBOFORM_VERSION "0.0.0"
#endif

namespace {

using namespace quboform;
using json = nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

struct UsageError : Error {
    using Error::Error;
};
struct ValidationFailure : Error {
    using Error::Error;
};

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char h[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(h, sizeof h, "%02x", md[i]);
        hex += h;
    }
    return hex;
}

struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    json seeds = json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;

    void write(const std::string& artifact) const {
        json j;
        j["tool"] = "quboform";
        j["version"] = QUBOFORM_VERSION;
        j["command"] = command;
        j["argv"] = argv;
        j["seeds"] = seeds;
        auto files = [](const std::vector<std::string>& paths) {
            json arr = json::array();
            for (const auto& p : paths) arr.push_back({{"path", p}, {"sha256", sha256_file(p)}});
            return arr;
        };
        j["inputs"] = files(inputs);
        j["outputs"] = files(outputs);
        std::ofstream out(artifact + ".manifest.json");
        out << j.dump(2) << '\n';
    }
};

std::pair<Rational, Rational> parse_pair(const std::string& text, const char* what) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError(std::string(what) + " must look like a:b");
    try {
        return {parse_rational(text.substr(0, colon)), parse_rational(text.substr(colon + 1))};
    } catch (const std::invalid_argument&) {
        throw UsageError(std::string(what) + " must look like a:b");
    }
}

int as_int(const Rational& r, const char* what) {
    if (!is_integer(r) || !r.get_num().fits_sint_p()) throw UsageError(std::string(what) + " must be integers");
    return static_cast<int>(r.get_num().get_si());
}

int thread_count() {
    const char* env = std::getenv("QUBOFORM_THREADS");
    if (env == nullptr) return 1;
    int t = std::atoi(env);
    return t > 0 ? t : 1;
}

AssemblyOptions assembly_options(const std::string& gamma, const std::string& lambda, bool fallback) {
    AssemblyOptions o;
    try {
        o.gamma = parse_rational(gamma);
    } catch (const std::invalid_argument&) {
        throw UsageError("--gamma must be a rational number");
    }
    if (!(o.gamma > 1)) throw UsageError("--gamma must exceed 1");
    try {
        o.strategy = parse_lambda_strategy(lambda);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    o.allow_fallback = fallback;
    return o;
}

MpbsInstance load_valid_instance(const std::string& path) {
    MpbsInstance inst = read_instance_file(path);
    auto problems = validate_instance(inst);
    if (!problems.empty()) {
        std::string msg = path + " is not a valid instance:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ValidationFailure(msg);
    }
    return inst;
}

Formulation formulate(const MpbsInstance& inst, const std::string& method, const AssemblyOptions& o) {
    if (method == "standard") return assemble_standard(inst, o);
    if (method == "iqpms") return assemble_iqpms(inst, o);
    throw UsageError("unknown method '" + method + "'");
}

void print_summary(std::ostream& out, const Formulation& f) {
    out << "node\tin\tout\tshape\tio_slacks\tcf_slacks\tlambda\tlambda_io\n";
    int io = 0, cf = 0;
    for (const auto& s : f.nodes) {
        out << s.node << '\t' << s.n_in << '\t' << s.n_out << '\t' << s.shape << '\t' << s.io_slacks << '\t'
            << s.cf_slacks << '\t' << to_string(s.lambda) << '\t' << to_string(s.lambda_io) << '\n';
        io += s.io_slacks;
        cf += s.cf_slacks;
    }
    out << "total\t\t\t\t" << io << '\t' << cf << "\t\t\n";
    out << "variables " << f.qubo.size() << " (logical " << f.qubo.n_logical() << ", slack " << f.qubo.n_slack()
        << ")\n";
    for (const auto& n : f.notes) out << "note: " << n << '\n';
}

std::string tuple_string(const Bits& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
    return s + ")";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QUBO formulations of constrained binary problems on multigraphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QUBOFORM_VERSION);
    Manifest manifest;
    for (int i = 0; i < argc; ++i) manifest.argv.emplace_back(argv[i]);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random instance");
    GeneratorParams gp;
    std::string weights = "1:18", window = "-7:8", gen_out;
    gen->add_option("--arcs", gp.n_arcs, "number of arcs")->capture_default_str();
    gen->add_option("--nodes", gp.n_nodes, "number of nodes")->capture_default_str();
    gen->add_option("--seed", gp.seed, "generator seed")->capture_default_str();
    gen->add_option("--weights", weights, "integer weight range lo:hi")->capture_default_str();
    gen->add_option("--window", window, "FL:CAP window")->capture_default_str();
    gen->add_option("--max-degree", gp.max_degree, "maximum arcs per node")->capture_default_str();
    gen->add_option("--out", gen_out, "instance file")->required();

    // formulate
    auto* form = app.add_subcommand("formulate", "build a QUBO from an instance");
    std::string method = "iqpms", gamma = "2", lambda = "local", form_in, form_out;
    bool fallback = false;
    form->add_option("--method", method, "standard or iqpms")->capture_default_str();
    form->add_option("--gamma", gamma, "multiplier scale, > 1")->capture_default_str();
    form->add_option("--lambda", lambda, "local, neigh or global")->capture_default_str();
    form->add_option("--in", form_in, "instance file")->required();
    form->add_option("--out", form_out, "qubo file")->required();
    form->add_flag("--allow-fallback", fallback, "generic IQP penalties for nodes with more than 5 arcs");

    // solve
    auto* solve = app.add_subcommand("solve", "maximize a QUBO");
    std::string solve_method = "brute", solve_qubo, solve_in;
    int solve_sweeps = 1000, solve_runs = 100;
    std::uint64_t solve_seed = 1;
    solve->add_option("--method", solve_method, "brute or sa")->capture_default_str();
    solve->add_option("--qubo", solve_qubo, "qubo file")->required();
    solve->add_option("--in", solve_in, "instance file, to report W and feasibility");
    solve->add_option("--sweeps", solve_sweeps, "sa sweeps per run")->capture_default_str();
    solve->add_option("--runs", solve_runs, "sa runs; the best sample is reported")->capture_default_str();
    solve->add_option("--seed", solve_seed, "sa seed")->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "check that a QUBO encodes an instance exactly");
    std::string verify_qubo, verify_in;
    verify->add_option("--qubo", verify_qubo, "qubo file")->required();
    verify->add_option("--in", verify_in, "instance file")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "compare standard and iqpms under simulated annealing");
    std::vector<std::string> bench_in;
    std::string bench_out, bench_gamma = "2", bench_lambda = "local";
    AnnealConfig cfg;
    bench->add_option("--in", bench_in, "instance files")->required();
    bench->add_option("--blocks", cfg.blocks, "blocks per instance and method")->capture_default_str();
    bench->add_option("--runs", cfg.runs, "runs per block")->capture_default_str();
    bench->add_option("--sweeps", cfg.sweeps, "sweeps per run")->capture_default_str();
    bench->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    bench->add_option("--gamma", bench_gamma, "multiplier scale, > 1")->capture_default_str();
    bench->add_option("--lambda", bench_lambda, "local, neigh or global")->capture_default_str();
    bench->add_option("--out", bench_out, "write the TSV here instead of stdout");

    // report
    auto* report = app.add_subcommand("report", "instance statistics, or per-shape slack counts");
    std::vector<std::string> report_in;
    report->add_option("--in", report_in, "instance files; without any, print slack counts per shape");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen) {
            manifest.command = "gen";
            auto [wlo, whi] = parse_pair(weights, "--weights");
            auto [fl, cap] = parse_pair(window, "--window");
            gp.weight_lo = as_int(wlo, "--weights");
            gp.weight_hi = as_int(whi, "--weights");
            gp.fl = as_int(fl, "--window");
            gp.cap = as_int(cap, "--window");
            MpbsInstance inst;
            try {
                inst = generate_instance(gp);
            } catch (const Error& e) {
                throw ValidationFailure(e.what());
            }
            write_instance_file(gen_out, inst);
            manifest.seeds["generator"] = gp.seed;
            manifest.outputs = {gen_out};
            manifest.write(gen_out);
            std::cout << "wrote " << gen_out << ": " << inst.num_arcs() << " arcs, " << inst.num_nodes()
                      << " nodes\n";
        } else if (*form) {
            manifest.command = "formulate";
            AssemblyOptions o = assembly_options(gamma, lambda, fallback);
            MpbsInstance inst = load_valid_instance(form_in);
            Formulation f;
            try {
                f = formulate(inst, method, o);
            } catch (const BudgetExhausted&) {
                throw;
            } catch (const UsageError&) {
                throw;
            } catch (const Error& e) {
                throw ValidationFailure(e.what());
            }
            write_qubo_file(form_out, f.qubo);
            print_summary(std::cout, f);
            manifest.inputs = {form_in};
            manifest.outputs = {form_out};
            manifest.write(form_out);
        } else if (*solve) {
            Qubo q = read_qubo_file(solve_qubo);
            BlockIndex blocks = build_block_index(q);
            Bits best_full;
            Bits x;
            Rational value;
            if (solve_method == "brute") {
                if (q.n_logical() > kDefaultBruteForceCap) {
                    throw CapExceeded("brute force supports at most " + std::to_string(kDefaultBruteForceCap) +
                                      " logical variables");
                }
                SlackMaximizer sm(q, blocks);
                const std::uint64_t total = std::uint64_t{1} << q.n_logical();
                std::uint64_t arg = 0;
                for (std::uint64_t i = 0; i < total; ++i) {
                    Rational v = sm.at_index(i);
                    if (i == 0 || v > value) {
                        value = v;
                        arg = i;
                    }
                }
                x = bits_from_index(arg, q.n_logical());
            } else if (solve_method == "sa") {
                Annealer annealer(q);
                for (int r = 0; r < solve_runs; ++r) {
                    Bits s = annealer.sample(solve_sweeps, mix_seed(solve_seed, static_cast<std::uint64_t>(r)));
                    Rational v = eval_qubo(q, s);
                    if (r == 0 || v > value) {
                        value = v;
                        best_full = s;
                    }
                }
                x.assign(best_full.begin(), best_full.begin() + q.n_logical());
            } else {
                throw UsageError("unknown solve method '" + solve_method + "'");
            }
            std::cout << "x=" << tuple_string(x) << " W=" << to_string(value);
            if (!solve_in.empty()) {
                MpbsInstance inst = load_valid_instance(solve_in);
                if (inst.num_arcs() != q.n_logical()) throw ValidationFailure("qubo does not match the instance");
                std::cout << " objective=" << to_string(objective(inst, x))
                          << (feasible(inst, x) ? " feasible" : " infeasible");
            }
            std::cout << '\n';
        } else if (*verify) {
            MpbsInstance inst = load_valid_instance(verify_in);
            Qubo q = read_qubo_file(verify_qubo);
            BlockIndex blocks = build_block_index(q);
            FormulationReport rep = verify_formulation(inst, q, blocks);
            std::cout << "feasible values exact: " << (rep.feasible_exact ? "yes" : "no") << '\n'
                      << "infeasible below optimum: " << (rep.infeasible_below ? "yes" : "no") << '\n'
                      << "argmax matches: " << (rep.argmax_matches ? "yes" : "no") << '\n'
                      << "optimum x=" << tuple_string(rep.optimum.x) << " W*=" << to_string(rep.optimum.value)
                      << '\n';
            for (const auto& v : rep.violations) std::cout << "witness: " << v << '\n';
            if (!rep.ok) return kExitValidation;
        } else if (*bench) {
            manifest.command = "bench";
            AssemblyOptions o = assembly_options(bench_gamma, bench_lambda, false);
            cfg.threads = thread_count();
            ExperimentStats all;
            for (const auto& path : bench_in) {
                MpbsInstance inst = load_valid_instance(path);
                std::vector<MethodQubo> methods{{"standard", assemble_standard(inst, o).qubo},
                                                {"iqpms", assemble_iqpms(inst, o).qubo}};
                all.merge(run_experiment(path, inst, methods, cfg));
            }
            std::string tsv = gain_report(all);
            if (bench_out.empty()) {
                std::cout << tsv;
            } else {
                std::ofstream(bench_out) << tsv;
                manifest.seeds["anneal"] = cfg.seed;
                manifest.inputs = bench_in;
                manifest.outputs = {bench_out};
                manifest.write(bench_out);
            }
        } else if (*report) {
            if (report_in.empty()) {
                std::cout << "shape\tstandard_io\tiqpms_io\tiqp_minimal\n";
                for (NodeShape s : {NodeShape::OneOne, NodeShape::OneTwo, NodeShape::OneThree, NodeShape::TwoTwo,
                                    NodeShape::OneFour, NodeShape::TwoThree}) {
                    const int a = shape_group_a(s), b = shape_size(s) - a;
                    NodeView v;
                    for (int i = 0; i < a; ++i) v.incoming.push_back(i);
                    for (int i = 0; i < b; ++i) v.outgoing.push_back(a + i);
                    PenaltySolveReport r = iqp_enforce(io_master_table(s), kMaxEnforceSlacks);
                    std::cout << shape_name(s) << '\t' << standard_inout_penalties(v).slack_count << '\t'
                              << r.slacks_used << '\t' << (r.minimal ? "yes" : "no") << '\n';
                }
            }
            if (!report_in.empty()) {
                std::cout << "instance\tarcs\tnodes\tfeasible\tpercent\tW*\tstandard_vars\tiqpms_vars\n";
            }
            for (const auto& path : report_in) {
                MpbsInstance inst = load_valid_instance(path);
                FeasibleCount fc = count_feasible(inst);
                MpbsOptimum opt = brute_force_mpbs(inst);
                char pct[32];
                std::snprintf(pct, sizeof pct, "%.3f", fc.percent);
                std::cout << path << '\t' << inst.num_arcs() << '\t' << inst.num_nodes() << '\t' << fc.count << '\t'
                          << pct << '\t' << to_string(opt.value) << '\t' << assemble_standard(inst).qubo.size()
                          << '\t' << assemble_iqpms(inst).qubo.size() << '\n';
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const BudgetExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << '\n';
        return kExitBudget;
    } catch (const CapExceeded& e) {
        std::cerr << "budget exhausted: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
