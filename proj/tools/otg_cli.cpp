// Command-line front end: single-shot generation, trajectory sampling,
// waypoint chaining, fuzz harness and benchmark runner.
//
// Exit codes: 0 success, 2 input/validation error, 3 internal failure,
// 4 output I/O error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "otg/problem_io.hpp"
#include "otg/testkit.hpp"
#include "otg/trajectory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;
constexpr int kExitIo = 4;

const char* direction_name(otg::Direction d) {
    return d == otg::Direction::kUp ? "UP" : "DOWN";
}

const char* pattern_name(otg::Pattern p) {
    return p == otg::Pattern::kUDDU ? "UDDU" : "UDUD";
}

int load_or_fail(const std::string& path, otg::io::Problem& problem) {
    const otg::io::LoadResult res = otg::io::load_problem_file(path, problem);
    if (!res.ok) {
        std::cerr << "error: " << res.error << "\n";
        return kExitInput;
    }
    return kExitOk;
}

int cmd_generate(const std::string& path) {
    otg::io::Problem problem;
    if (int rc = load_or_fail(path, problem); rc != kExitOk) {
        return rc;
    }
    const otg::CalcResult r = otg::calculate(problem.input);
    if (!r.ok()) {
        std::cerr << "error: " << r.message << "\n";
        return r.error == otg::CalcError::kInvalidInput ? kExitInput : kExitInternal;
    }
    std::printf("duration: %.9f, limiting dof: %zu\n", r.trajectory.duration,
                r.trajectory.limiting_dof);
    for (std::size_t i = 0; i < r.trajectory.dofs.size(); ++i) {
        const otg::DofTrajectory& d = r.trajectory.dofs[i];
        std::printf("dof %zu: t_min %.9f, brake %.9f, limits %s, pattern %s, direction %s\n", i,
                    d.t_min, d.brake.duration(), otg::limit_tag::to_string(d.profile.limits).c_str(),
                    pattern_name(d.profile.pattern), direction_name(d.profile.direction));
        for (int k = 0; k < d.intervals.count; ++k) {
            std::printf("dof %zu: blocked (%.9f, %.9f)\n", i, d.intervals.items[k].start,
                        d.intervals.items[k].end);
        }
    }
    return kExitOk;
}

void write_row(std::ofstream& out, double t, std::span<const otg::KinematicState> states,
               std::span<const double> jerks) {
    out << t;
    char buf[32];
    for (const otg::KinematicState& s : states) {
        std::snprintf(buf, sizeof buf, ",%.17g", s.p);
        out << buf;
    }
    for (const otg::KinematicState& s : states) {
        std::snprintf(buf, sizeof buf, ",%.17g", s.v);
        out << buf;
    }
    for (const otg::KinematicState& s : states) {
        std::snprintf(buf, sizeof buf, ",%.17g", s.a);
        out << buf;
    }
    for (double j : jerks) {
        std::snprintf(buf, sizeof buf, ",%.17g", j);
        out << buf;
    }
    out << "\n";
}

int sample_segment(std::ofstream& out, const otg::Trajectory& traj, double t_offset, double dt,
                   bool include_start) {
    const std::size_t n = traj.dofs.size();
    std::vector<otg::KinematicState> states(n);
    std::vector<double> jerks(n);
    const long long steps = static_cast<long long>(std::floor(traj.duration / dt + 1e-9));
    for (long long k = include_start ? 0 : 1; k <= steps; ++k) {
        const double t = k * dt;
        traj.at_time(t, states, jerks);
        write_row(out, t_offset + t, states, jerks);
    }
    if (steps * dt < traj.duration - 1e-12) {
        traj.at_time(traj.duration, states, jerks);
        write_row(out, t_offset + traj.duration, states, jerks);
    }
    return kExitOk;
}

int cmd_sample(const std::string& path, double dt_flag, const std::string& output,
               bool with_waypoints) {
    otg::io::Problem problem;
    if (int rc = load_or_fail(path, problem); rc != kExitOk) {
        return rc;
    }
    const double dt = dt_flag > 0 ? dt_flag : problem.control_cycle;

    std::ofstream out(output);
    if (!out) {
        std::cerr << "error: cannot write '" << output << "'\n";
        return kExitIo;
    }
    const std::size_t n = problem.input.dof_count;
    out << "t";
    for (const char* q : {"p", "v", "a", "j"}) {
        for (std::size_t i = 0; i < n; ++i) {
            out << "," << q << i;
        }
    }
    out << "\n";

    otg::InputParameters input = problem.input;
    double t_offset = 0.0;
    bool first = true;
    std::vector<otg::io::Waypoint> chain;
    if (with_waypoints) {
        chain = problem.waypoints;
    }
    for (std::size_t seg = 0;; ++seg) {
        const otg::CalcResult r = otg::calculate(input);
        if (!r.ok()) {
            std::cerr << "error (segment " << seg << "): " << r.message << "\n";
            return r.error == otg::CalcError::kInvalidInput ? kExitInput : kExitInternal;
        }
        sample_segment(out, r.trajectory, t_offset, dt, first);
        first = false;
        t_offset += r.trajectory.duration;
        if (seg >= chain.size()) {
            break;
        }
        // Next segment starts from this segment's terminal state.
        input.current = r.trajectory.at_time(r.trajectory.duration);
        input.target = chain[seg].target;
        if (chain[seg].limits) {
            input.limits = *chain[seg].limits;
        }
    }
    if (!out) {
        return kExitIo;
    }
    std::printf("samples written to %s (duration %.9f)\n", output.c_str(), t_offset);
    return kExitOk;
}

int cmd_fuzz(std::uint64_t count, std::uint64_t seed, int dofs_max, bool directional,
             unsigned threads, const std::string& corpus) {
    otg::testkit::FuzzConfig cfg;
    cfg.count = count;
    cfg.seed = seed;
    cfg.dof_min = 1;
    cfg.dof_max = dofs_max;
    cfg.directional = directional;
    const otg::testkit::FuzzReport rep = otg::testkit::run_fuzz(cfg, threads, corpus, true);
    std::printf("cases: %llu\n", static_cast<unsigned long long>(rep.count));
    std::printf("successes: %llu\n", static_cast<unsigned long long>(rep.successes));
    std::printf("cutoff-excluded: %llu\n", static_cast<unsigned long long>(rep.cutoff_excluded));
    std::printf("redraws: %llu\n", static_cast<unsigned long long>(rep.redraws));
    std::printf("failures: %llu\n", static_cast<unsigned long long>(rep.failures));
    std::printf("cardinality violations: %llu\n",
                static_cast<unsigned long long>(rep.cardinality_violations));
    for (const std::string& f : rep.corpus_files) {
        std::printf("corpus: %s\n", f.c_str());
    }
    if (!rep.first_failure.empty()) {
        std::printf("first failure: %s\n", rep.first_failure.c_str());
    }
    return rep.failures == 0 ? kExitOk : kExitInternal;
}

int cmd_bench(std::vector<int> dofs, int count, int warmup, const std::string& output) {
    if (dofs.empty()) {
        dofs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
    }
    std::sort(dofs.begin(), dofs.end());
    struct Row {
        int dof;
        double mean_us;
        double worst_us;
    };
    std::vector<Row> rows;
    for (int dof : dofs) {
        otg::testkit::FuzzConfig cfg;
        cfg.dof_min = cfg.dof_max = dof;
        cfg.seed = 1234;
        std::vector<otg::InputParameters> inputs;
        inputs.reserve(static_cast<std::size_t>(count));
        otg::testkit::Rng rng(cfg.seed + static_cast<std::uint64_t>(dof));
        for (int i = 0; i < count; ++i) {
            inputs.push_back(otg::testkit::draw_input(cfg, rng));
        }
        for (int i = 0; i < warmup && i < count; ++i) {
            (void)otg::calculate(inputs[static_cast<std::size_t>(i)]);
        }
        double total = 0.0, worst = 0.0;
        for (const otg::InputParameters& in : inputs) {
            const auto t0 = std::chrono::steady_clock::now();
            const otg::CalcResult r = otg::calculate(in);
            const auto t1 = std::chrono::steady_clock::now();
            if (!r.ok()) {
                continue;
            }
            const double us = std::chrono::duration<double, std::micro>(t1 - t0).count();
            total += us;
            worst = std::max(worst, us);
        }
        rows.push_back({dof, total / count, worst});
        std::printf("dof %2d: mean %8.2f us, worst %10.2f us\n", dof, total / count, worst);
    }

    // Least-squares fit of mean time vs dof count.
    const double n = static_cast<double>(rows.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const Row& r : rows) {
        sx += r.dof;
        sy += r.mean_us;
        sxx += r.dof * static_cast<double>(r.dof);
        sxy += r.dof * r.mean_us;
        syy += r.mean_us * r.mean_us;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (const Row& r : rows) {
        const double pred = slope * r.dof + intercept;
        ss_res += (r.mean_us - pred) * (r.mean_us - pred);
        ss_tot += (r.mean_us - sy / n) * (r.mean_us - sy / n);
    }
    const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    std::printf("linear fit: slope %.3f us/dof, intercept %.3f us, R^2 %.4f\n", slope, intercept,
                r2);

    if (!output.empty()) {
        std::ofstream out(output);
        if (!out) {
            std::cerr << "error: cannot write '" << output << "'\n";
            return kExitIo;
        }
        out << "dof,mean_us,worst_us\n";
        for (const Row& r : rows) {
            out << r.dof << "," << r.mean_us << "," << r.worst_us << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"otg: time-optimal jerk-limited online trajectory generation"};
    app.require_subcommand(1);

    std::string problem_path, output = "samples.csv", corpus;
    double dt = 0.0;
    bool waypoints = false, directional = false;
    std::uint64_t count = 100000, seed = 1;
    int dofs_max = 7, bench_count = 1000, warmup = 100;
    std::vector<int> bench_dofs;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    CLI::App* gen = app.add_subcommand("generate", "compute one trajectory and print a summary");
    gen->add_option("input", problem_path, "problem JSON file")->required();

    CLI::App* sample = app.add_subcommand("sample", "sample a trajectory to CSV");
    sample->add_option("input", problem_path, "problem JSON file")->required();
    sample->add_option("--dt", dt, "sample period (default: control_cycle)");
    sample->add_option("-o,--output", output, "output CSV path");
    sample->add_flag("--waypoints", waypoints, "chain the waypoint list");

    CLI::App* fuzz = app.add_subcommand("fuzz", "random-input robustness harness");
    fuzz->add_option("--count", count, "number of cases");
    fuzz->add_option("--seed", seed, "base seed");
    fuzz->add_option("--dofs", dofs_max, "maximum degrees of freedom")->check(CLI::Range(1, 32));
    fuzz->add_flag("--directional", directional, "draw asymmetric velocity/acceleration bounds");
    fuzz->add_option("--threads", threads, "worker threads");
    fuzz->add_option("--corpus", corpus, "failure corpus directory");

    CLI::App* bench = app.add_subcommand("bench", "calculation-duration benchmark");
    bench->add_option("--dofs", bench_dofs, "DoF counts to measure");
    bench->add_option("--count", bench_count, "inputs per DoF count");
    bench->add_option("--warmup", warmup, "warmup iterations");
    bench->add_option("-o,--output", output, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    if (gen->parsed()) {
        return cmd_generate(problem_path);
    }
    if (sample->parsed()) {
        return cmd_sample(problem_path, dt, output, waypoints);
    }
    if (fuzz->parsed()) {
        return cmd_fuzz(count, seed, dofs_max, directional, threads, corpus);
    }
    if (bench->parsed()) {
        return cmd_bench(bench_dofs, bench_count, warmup, bench->count("-o") ? output : "");
    }
    return kExitInput;
}
