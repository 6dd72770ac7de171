// Command-line front end: solve a single instance, run benchmark sweeps, or
// run the verification suite.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraccd/baselines.hpp"
#include "fraccd/cd.hpp"
#include "fraccd/libsvm.hpp"
#include "fraccd/problems/eig_l4.hpp"
#include "fraccd/problems/sparse_recovery.hpp"
#include "fraccd/synth.hpp"
#include "fraccd/trace.hpp"
#include "fraccd/verify.hpp"

namespace {

using json = nlohmann::json;
using namespace fraccd;

constexpr const char* kVersion = "0.1.0";

struct CommonArgs {
    std::string problem = "sparse";
    std::string method = "pcd";
    std::string input;
    std::string synth;  // "m,n,s"
    double density = 1.0;
    bool nonneg = false;
    double gamma = 0.0;  // 0 = problem default
    std::int64_t k = 0;
    double vartheta = std::numeric_limits<double>::infinity();
    double gamma3 = 0.0;
    double gamma4 = 0.0;
    double g_offset = 0.0;
    double noise = 0.1;
    double theta = 1e-6;
    double eps = 1e-10;
    std::int64_t window = 500;
    double max_time = 100.0;
    std::int64_t max_iters = 1'000'000;
    std::uint64_t seed = 0;
    std::string rule = "cyclic";
    std::int64_t inner_iters = 50;
    std::int64_t support = 0;  // planted support size for --input (default min(100, n))
    std::int64_t trace_every = 1;
};

struct SynthDims {
    index_t m = 0, n = 0, support = 0;
};

SynthDims parse_synth(const std::string& spec) {
    SynthDims d;
    if (std::sscanf(spec.c_str(), "%ld,%ld,%ld", &d.m, &d.n, &d.support) != 3 || d.m < 1 ||
        d.n < 1 || d.support < 0)
        throw ConfigError("--synth expects m,n,s with positive m,n");
    return d;
}

Instance build_instance(const CommonArgs& a, std::uint64_t seed) {
    MatrixGenOptions mopt;
    mopt.density = a.density;
    mopt.nonnegative = a.nonneg;
    if (!a.input.empty()) {
        Instance inst;
        inst.g = load_libsvm(a.input).matrix;
        inst.name = a.input;
        inst.seed = seed;
        if (a.problem == "sparse") {
            // real design matrix, planted signal and observations on top of it
            const index_t support =
                a.support > 0 ? a.support : std::min<index_t>(100, inst.g.cols());
            Rng rng(seed);
            std::vector<double> xbar(inst.g.cols(), 0.0);
            std::vector<index_t> idx(inst.g.cols());
            for (index_t j = 0; j < inst.g.cols(); ++j) idx[j] = j;
            for (index_t j = 0; j < support; ++j) {
                const index_t pick =
                    j + static_cast<index_t>(rng.uniform_index(inst.g.cols() - j));
                std::swap(idx[j], idx[pick]);
                xbar[idx[j]] = rng.normal();
            }
            std::vector<double> gx(inst.g.rows(), 0.0);
            inst.g.matvec(xbar, gx);
            double nrm = 0.0;
            for (double v : gx) nrm += v * v;
            nrm = std::sqrt(nrm);
            inst.y.resize(inst.g.rows());
            for (index_t i = 0; i < inst.g.rows(); ++i)
                inst.y[i] = gx[i] + a.noise * nrm * rng.normal();
            inst.x_true = std::move(xbar);
            inst.noise_level = a.noise;
        }
        return inst;
    }
    if (a.synth.empty()) throw ConfigError("provide --input FILE or --synth m,n,s");
    const auto d = parse_synth(a.synth);
    if (a.problem == "sparse")
        return synth_sparse_instance(d.m, d.n, d.support, a.noise, seed, mopt);
    return synth_eig_instance(d.m, d.n, seed, mopt);
}

SparseRecoveryProblem make_sparse(const CommonArgs& a, const Instance& inst) {
    SparseRecoveryProblem::Options opt;
    opt.gamma = a.gamma > 0.0 ? a.gamma : 0.1 / static_cast<double>(inst.g.rows());
    opt.k = a.k > 0 ? a.k : std::min<index_t>(100, inst.g.cols());
    opt.vartheta = a.vartheta;
    opt.g_offset = a.g_offset;
    return SparseRecoveryProblem(inst.g, inst.y, opt);
}

EigL4Problem make_eig(const CommonArgs& a, const Instance& inst) {
    EigL4Problem::Options opt;
    opt.gamma3 = a.gamma3;
    opt.gamma4 = a.gamma4;
    return EigL4Problem(inst.g, opt);
}

std::vector<double> starting_point(index_t n, std::uint64_t seed) {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);  // stream independent of the instance
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    return x;
}

Rule parse_rule(const std::string& r) {
    if (r == "cyclic") return Rule::Cyclic;
    if (r == "random") return Rule::Random;
    if (r == "greedy") return Rule::Greedy;
    throw ConfigError("unknown rule '" + r + "'");
}

Trace dispatch_run(const CommonArgs& a, const Instance& inst, std::uint64_t seed) {
    const auto x0_for = [&](index_t n) { return starting_point(n, seed); };

    if (a.method == "fcd" || a.method == "pcd") {
        SolverConfig cfg;
        cfg.method = a.method == "fcd" ? Method::Fcd : Method::Pcd;
        cfg.rule = parse_rule(a.rule);
        cfg.theta = a.theta;
        cfg.eps = a.eps;
        cfg.window = a.window;
        cfg.max_time_s = a.max_time;
        cfg.max_iters = a.max_iters;
        cfg.seed = seed;
        cfg.trace_every = a.trace_every;
        if (a.problem == "sparse") {
            const auto problem = make_sparse(a, inst);
            if (cfg.rule == Rule::Greedy)
                cfg.greedy_lipschitz = spectral_norm_sq(problem.design());
            return run_cd(problem, cfg, x0_for(problem.dim())).trace;
        }
        const auto problem = make_eig(a, inst);
        if (cfg.rule == Rule::Greedy) cfg.greedy_lipschitz = 2.0;
        return run_cd(problem, cfg, x0_for(problem.dim())).trace;
    }

    BaselineConfig cfg;
    cfg.inner_iters = a.inner_iters;
    cfg.eps = a.eps;
    cfg.window = a.window;
    cfg.max_time_s = a.max_time;
    cfg.max_iters = a.max_iters;
    cfg.seed = seed;
    cfg.trace_every = a.trace_every;
    if (a.problem == "sparse") {
        const auto problem = make_sparse(a, inst);
        cfg.lipschitz = spectral_norm_sq(problem.design());
        if (a.method == "pgsa") {
            cfg.algorithm = BaselineAlgorithm::Pgsa;
            return run_pgsa(problem, cfg, x0_for(problem.dim())).trace;
        }
        if (a.method == "dpa") {
            cfg.algorithm = BaselineAlgorithm::Dpa;
            return run_dpa(problem, cfg, x0_for(problem.dim())).trace;
        }
        if (a.method == "qtpa") {
            cfg.algorithm = BaselineAlgorithm::Qtpa;
            return run_qtpa(problem, cfg, x0_for(problem.dim())).trace;
        }
        throw UnsupportedVariant("method '" + a.method + "' is not available for sparse");
    }
    const auto problem = make_eig(a, inst);
    cfg.lipschitz = 2.0;
    if (a.method == "pgsa") {
        cfg.algorithm = BaselineAlgorithm::Pgsa;
        return run_pgsa(problem, cfg, x0_for(problem.dim())).trace;
    }
    if (a.method == "power") {
        cfg.algorithm = BaselineAlgorithm::Power;
        return run_power_method(problem, cfg, x0_for(problem.dim())).trace;
    }
    throw UnsupportedVariant("method '" + a.method + "' is not available for eigl4");
}

json config_json(const CommonArgs& a) {
    return json{{"problem", a.problem},
                {"method", a.method},
                {"input", a.input},
                {"synth", a.synth},
                {"density", a.density},
                {"nonneg", a.nonneg},
                {"gamma", a.gamma},
                {"k", a.k},
                {"vartheta", std::isfinite(a.vartheta) ? json(a.vartheta) : json("inf")},
                {"gamma3", a.gamma3},
                {"gamma4", a.gamma4},
                {"g_offset", a.g_offset},
                {"noise", a.noise},
                {"theta", a.theta},
                {"eps", a.eps},
                {"window", a.window},
                {"max_time_s", a.max_time},
                {"max_iters", a.max_iters},
                {"rule", a.rule},
                {"inner_iters", a.inner_iters}};
}

void write_manifest(const std::string& path, const std::string& command, const CommonArgs& a,
                    const std::vector<std::uint64_t>& seeds,
                    const std::vector<Instance>& instances) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["config"] = config_json(a);
    m["rng"] = {{"algorithm", kRngAlgorithmId}, {"seeds", seeds}};
    json insts = json::array();
    for (const auto& inst : instances)
        insts.push_back({{"name", inst.name},
                         {"m", inst.g.rows()},
                         {"n", inst.g.cols()},
                         {"seed", inst.seed},
                         {"noise_level", inst.noise_level}});
    m["instances"] = insts;
    std::ofstream out(path);
    out << m.dump(2) << '\n';
}

int cmd_solve(CommonArgs a, const std::string& trace_path, std::int64_t trace_every) {
    a.trace_every = trace_every;
    const auto inst = build_instance(a, a.seed);
    const auto trace = dispatch_run(a, inst, a.seed);
    if (!trace_path.empty()) {
        std::ofstream tf(trace_path);
        if (!tf) throw ConfigError("cannot open '" + trace_path + "'");
        write_trace_csv(tf, trace);
        write_manifest(trace_path + ".manifest.json", "solve", a, {a.seed}, {inst});
    }
    std::cout << "instance: " << inst.name << "\n"
              << "method: " << a.method << "\n"
              << "iterations: " << trace.iterations << "\n"
              << "status: " << to_string(trace.status) << "\n"
              << "final F: " << std::setprecision(12) << trace.final_objective << "\n";
    return 0;
}

int cmd_bench(const CommonArgs& a, const std::vector<std::string>& methods,
              std::int64_t n_instances, std::int64_t repeats, const std::string& out_path,
              std::int64_t jobs) {
    struct Task {
        std::size_t instance, method;
        std::int64_t repeat;
    };
    std::vector<Instance> instances;
    for (std::int64_t i = 0; i < n_instances; ++i)
        instances.push_back(build_instance(a, a.seed + static_cast<std::uint64_t>(i)));

    std::vector<Task> tasks;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (std::size_t m = 0; m < methods.size(); ++m)
            for (std::int64_t r = 0; r < repeats; ++r) tasks.push_back({i, m, r});

    std::vector<double> results(tasks.size(), 0.0);
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const auto& task = tasks[t];
            CommonArgs run_args = a;
            run_args.method = methods[task.method];
            run_args.trace_every = 1'000'000;  // bench needs only the endpoint
            // distinct, reproducible seed per (instance, repeat); shared
            // across methods so every method sees the same start
            const std::uint64_t run_seed =
                a.seed + 1000003ULL * (task.instance + 1) + 7919ULL * (task.repeat + 1);
            try {
                results[t] = dispatch_run(run_args, instances[task.instance], run_seed)
                                 .final_objective;
            } catch (const std::exception& e) {
                errors[t] = e.what();
            }
        }
    };
    const auto n_workers = std::max<std::int64_t>(
        1, std::min<std::int64_t>(jobs, static_cast<std::int64_t>(tasks.size())));
    std::vector<std::thread> pool;
    for (std::int64_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (std::size_t t = 0; t < tasks.size(); ++t)
        if (!errors[t].empty()) throw SolverError("bench run failed: " + errors[t]);

    std::ostringstream table;
    table << "instance,method,mean,std\n";
    std::cout << std::left << std::setw(36) << "instance";
    for (const auto& m : methods) std::cout << std::setw(22) << m;
    std::cout << "\n";
    for (std::size_t i = 0; i < instances.size(); ++i) {
        std::cout << std::left << std::setw(36) << instances[i].name;
        for (std::size_t m = 0; m < methods.size(); ++m) {
            double mean = 0.0;
            std::int64_t count = 0;
            for (std::size_t t = 0; t < tasks.size(); ++t)
                if (tasks[t].instance == i && tasks[t].method == m) {
                    mean += results[t];
                    ++count;
                }
            mean /= static_cast<double>(count);
            double var = 0.0;
            for (std::size_t t = 0; t < tasks.size(); ++t)
                if (tasks[t].instance == i && tasks[t].method == m)
                    var += (results[t] - mean) * (results[t] - mean);
            const double sd = count > 1 ? std::sqrt(var / static_cast<double>(count - 1)) : 0.0;
            table << instances[i].name << ',' << methods[m] << ',' << std::fixed
                  << std::setprecision(3) << mean << ',' << sd << '\n';
            std::ostringstream cell;
            cell << std::fixed << std::setprecision(3) << mean << " +- " << sd;
            std::cout << std::setw(22) << cell.str();
        }
        std::cout << "\n";
    }
    if (!out_path.empty()) {
        std::ofstream of(out_path);
        if (!of) throw ConfigError("cannot open '" + out_path + "'");
        of << table.str();
        write_manifest(out_path + ".manifest.json", "bench", a, {a.seed}, instances);
    }
    return 0;
}

int cmd_verify(const std::string& only) {
    const auto checks = build_verify_checks();
    int failures = 0, ran = 0;
    for (const auto& check : checks) {
        if (!only.empty() && check.module != only) continue;
        ++ran;
        CheckResult r;
        try {
            r = check.run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = e.what();
        }
        const char* tag = r.informational ? "INFO" : (r.pass ? "PASS" : "FAIL");
        std::cout << "[" << tag << "] " << check.module << "/" << check.name;
        if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
        std::cout << "\n";
        if (!r.pass && !r.informational) ++failures;
    }
    if (ran == 0) {
        std::cerr << "no checks matched module '" << only << "'\n";
        return 2;
    }
    if (failures == 0) {
        std::cout << "verify: all checks passed\n";
        return 0;
    }
    std::cout << "verify: " << failures << " check(s) failed\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coordinate descent solvers for structured fractional minimization"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string trace_path;
    std::int64_t trace_every = 1;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--problem", args.problem, "sparse | eigl4")
            ->check(CLI::IsMember({"sparse", "eigl4"}));
        cmd->add_option("--input", args.input, "design matrix in libsvm format");
        cmd->add_option("--synth", args.synth, "synthetic instance m,n,s");
        cmd->add_option("--support", args.support, "planted support size for --input");
        cmd->add_option("--density", args.density, "Bernoulli keep probability for synthetic G");
        cmd->add_flag("--nonneg", args.nonneg, "use |entries| for synthetic G");
        cmd->add_option("--gamma", args.gamma, "l1 weight (default 0.1/m)");
        cmd->add_option("--k", args.k, "top-k size (default min(100, n))");
        cmd->add_option("--vartheta", args.vartheta, "box bound (default +inf)");
        cmd->add_option("--gamma3", args.gamma3, "numerator offset, eigl4");
        cmd->add_option("--gamma4", args.gamma4, "denominator offset, eigl4");
        cmd->add_option("--g-offset", args.g_offset, "additive denominator offset, sparse");
        cmd->add_option("--noise", args.noise, "observation noise level");
        cmd->add_option("--theta", args.theta, "proximal weight");
        cmd->add_option("--eps", args.eps, "stopping threshold");
        cmd->add_option("--window", args.window, "stopping window");
        cmd->add_option("--max-time", args.max_time, "wall-clock budget in seconds");
        cmd->add_option("--max-iters", args.max_iters, "iteration budget");
        cmd->add_option("--seed", args.seed, "rng seed");
        cmd->add_option("--rule", args.rule, "cyclic | random | greedy")
            ->check(CLI::IsMember({"cyclic", "random", "greedy"}));
        cmd->add_option("--inner-iters", args.inner_iters, "parametric inner budget");
    };

    auto* solve = app.add_subcommand("solve", "run one solver on one instance");
    add_common(solve);
    solve->add_option("--method", args.method, "fcd | pcd | dpa | pgsa | qtpa | power")
        ->check(CLI::IsMember({"fcd", "pcd", "dpa", "pgsa", "qtpa", "power"}));
    solve->add_option("--trace", trace_path, "write the iteration trace CSV here");
    solve->add_option("--trace-every", trace_every, "record every N-th iteration");

    std::vector<std::string> methods{"pcd"};
    std::int64_t n_instances = 1, repeats = 10, jobs = 4;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "mean +- std table over repeated runs");
    add_common(bench);
    bench->add_option("--methods", methods, "methods to compare")->delimiter(',');
    bench->add_option("--instances", n_instances, "number of seeded instances");
    bench->add_option("--repeats", repeats, "runs per cell (default 10)");
    bench->add_option("--out", bench_out, "write instance,method,mean,std CSV here");
    bench->add_option("--jobs", jobs, "worker threads");

    std::string only;
    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_option("--only", only, "restrict to one module");

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return cmd_solve(args, trace_path, trace_every);
        if (bench->parsed())
            return cmd_bench(args, methods, n_instances, repeats, bench_out, jobs);
        return cmd_verify(only);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
