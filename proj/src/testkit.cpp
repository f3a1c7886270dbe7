#include "otg/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include "otg/brake.hpp"
#include "otg/problem_io.hpp"
#include "otg/tolerances.hpp"

namespace otg::testkit {

// ---- rng --------------------------------------------------------------------

std::uint64_t Rng::next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    // 53-bit mantissa in (0, 1); never exactly 0.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal(double sigma) {
    // Box-Muller (single value per call keeps the stream layout simple).
    const double u1 = uniform();
    const double u2 = uniform();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::gamma2(double scale) {
    return -scale * (std::log(uniform()) + std::log(uniform()));
}

// ---- input drawing ------------------------------------------------------------

InputParameters draw_input(const FuzzConfig& c, Rng& rng, DrawStats* stats) {
    InputParameters in;
    const int span = c.dof_max - c.dof_min + 1;
    in.dof_count = static_cast<std::size_t>(
        c.dof_min + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(span)));
    in.current.resize(in.dof_count);
    in.target.resize(in.dof_count);
    in.limits.resize(in.dof_count);

    for (std::size_t i = 0; i < in.dof_count; ++i) {
        for (;;) {
            Limits l;
            l.v_max = rng.gamma2(c.gamma_scale) + c.limit_floor;
            l.a_max = rng.gamma2(c.gamma_scale) + c.limit_floor;
            l.j_max = rng.gamma2(c.gamma_scale) + c.limit_floor;
            if (c.directional) {
                l.v_min = -(rng.gamma2(c.gamma_scale) + c.limit_floor);
                l.a_min = -(rng.gamma2(c.gamma_scale) + c.limit_floor);
            } else {
                l.v_min = -l.v_max;
                l.a_min = -l.a_max;
            }
            KinematicState x0{rng.normal(c.sigma_p), rng.normal(c.sigma_kin),
                              rng.normal(c.sigma_kin)};
            KinematicState xf{rng.normal(c.sigma_p), rng.normal(c.sigma_kin),
                              rng.normal(c.sigma_kin)};
            if (c.zero_mode == ZeroTargetMode::kZeroTargetAccel) {
                xf.a = 0.0;
            } else if (c.zero_mode == ZeroTargetMode::kZeroTargetVelAccel) {
                xf.v = 0.0;
                xf.a = 0.0;
            }
            if (!validate_dof(x0, xf, l, i).ok) {
                if (stats) {
                    ++stats->redraws;
                }
                continue;
            }
            in.current[i] = x0;
            in.target[i] = xf;
            in.limits[i] = l;
            break;
        }
    }
    return in;
}

InputParameters draw_velocity_input(const FuzzConfig& c, Rng& rng, DrawStats* stats) {
    InputParameters in;
    const int span = c.dof_max - c.dof_min + 1;
    in.dof_count = static_cast<std::size_t>(
        c.dof_min + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(span)));
    in.current.resize(in.dof_count);
    in.target.resize(in.dof_count);
    in.limits.resize(in.dof_count);
    for (std::size_t i = 0; i < in.dof_count; ++i) {
        for (;;) {
            Limits l;
            l.a_max = rng.gamma2(c.gamma_scale) + c.limit_floor;
            l.j_max = rng.gamma2(c.gamma_scale) + c.limit_floor;
            l.a_min = c.directional ? -(rng.gamma2(c.gamma_scale) + c.limit_floor) : -l.a_max;
            l.v_max = 1e12;  // velocity limits are ignored by this interface
            l.v_min = -1e12;
            KinematicState x0{0.0, rng.normal(c.sigma_kin), rng.normal(c.sigma_kin)};
            KinematicState xf{0.0, rng.normal(c.sigma_kin), rng.normal(c.sigma_kin)};
            if (xf.a < l.a_min || xf.a > l.a_max) {
                if (stats) {
                    ++stats->redraws;
                }
                continue;
            }
            in.current[i] = x0;
            in.target[i] = xf;
            in.limits[i] = l;
            break;
        }
    }
    return in;
}

// ---- verification --------------------------------------------------------------

namespace {

struct Segment {
    double duration;
    double jerk;
};

// Per-constraint violation tracker: a constraint violated at the trajectory
// start — or inevitably violated, because winding the initial acceleration
// down to zero at full jerk already crosses the bound — is excused until
// first satisfied; afterwards it must hold.
struct ConstraintTracker {
    double bound;
    bool upper;
    bool excused = false;  // the first violation episode is excused
    bool in_violation = false;
    double worst = 0.0;  // violation depth beyond the margin

    void observe(double value) {
        const double depth = upper ? value - bound : bound - value;
        if (depth > kLimitMargin) {
            in_violation = true;
            if (!excused) {
                worst = std::max(worst, depth);
            }
        } else if (in_violation) {
            // The excused episode (if any) has recovered; from here on the
            // constraint must hold.
            excused = false;
            in_violation = false;
        }
    }
};

}  // namespace

VerificationReport verify_trajectory(const Trajectory& traj, const InputParameters& input,
                                     bool velocity_mode) {
    VerificationReport rep;
    rep.duration = traj.duration;
    rep.excluded_by_cutoff = traj.duration > kDurationCutoff;

    const int kGrid = 1024;
    double worst_violation = 0.0;

    for (std::size_t i = 0; i < traj.dofs.size(); ++i) {
        const DofTrajectory& d = traj.dofs[i];

        std::vector<Segment> segs;
        for (int k = 0; k < 2; ++k) {
            if (d.brake.t[k] > 0) {
                segs.push_back({d.brake.t[k], d.brake.j[k]});
            }
        }
        for (std::size_t k = 0; k < 7; ++k) {
            if (d.profile.t[k] > 0) {
                segs.push_back({d.profile.t[k], d.profile.step_jerk(static_cast<int>(k))});
            }
        }

        const Limits& l = input.limits[i];
        const double v0 = input.current[i].v;
        const double a0 = input.current[i].a;
        const double settle =
            a0 > 0 ? v0 + a0 * a0 / (2 * l.j_max) : v0 - a0 * a0 / (2 * l.j_max);
        ConstraintTracker cv_hi{l.v_max, true};
        ConstraintTracker cv_lo{l.v_min, false};
        ConstraintTracker ca_hi{l.a_max, true};
        ConstraintTracker ca_lo{l.a_min, false};
        cv_hi.excused = v0 > l.v_max + kLimitMargin || settle > l.v_max + kLimitMargin;
        cv_lo.excused = v0 < l.v_min - kLimitMargin || settle < l.v_min - kLimitMargin;
        ca_hi.excused = a0 > l.a_max + kLimitMargin;
        ca_lo.excused = a0 < l.a_min - kLimitMargin;
        auto observe = [&](const KinematicState& s) {
            if (!velocity_mode) {
                cv_hi.observe(s.v);
                cv_lo.observe(s.v);
            }
            ca_hi.observe(s.a);
            ca_lo.observe(s.a);
        };

        // Fresh forward integration, interleaving segment boundaries, interior
        // velocity extrema and the global sampling grid in time order.
        KinematicState s = input.current[i];
        double t_start = 0.0;   // compensated prefix time
        double t_comp = 0.0;
        int grid_next = 0;
        const double dt_grid = traj.duration > 0 ? traj.duration / (kGrid - 1) : 0.0;
        observe(s);
        for (const Segment& seg : segs) {
            const double t_end = t_start + seg.duration;
            // Interleave the grid samples and the interior velocity extremum
            // in time order (the excusal state machine needs ordered values).
            double t_ext = -1.0;
            if (seg.jerk != 0.0) {
                const double te = -s.a / seg.jerk;
                if (te > 0 && te < seg.duration) {
                    t_ext = te;
                }
            }
            while (dt_grid > 0 && grid_next < kGrid) {
                const double tg = grid_next * dt_grid;
                if (tg >= t_end) {
                    break;
                }
                if (tg >= t_start) {
                    const double local = tg - t_start;
                    if (t_ext >= 0 && t_ext <= local) {
                        observe(integrate_step(s, seg.jerk, t_ext));
                        t_ext = -1.0;
                    }
                    observe(integrate_step(s, seg.jerk, local));
                }
                ++grid_next;
            }
            if (t_ext >= 0) {
                observe(integrate_step(s, seg.jerk, t_ext));
            }
            s = integrate_step(s, seg.jerk, seg.duration);
            observe(s);
            // Kahan-compensated prefix time.
            const double y = seg.duration - t_comp;
            const double t_new = t_start + y;
            t_comp = (t_new - t_start) - y;
            t_start = t_new;
        }

        if (!velocity_mode) {
            rep.dp = std::max(rep.dp, std::abs(s.p - input.target[i].p));
        }
        rep.dv = std::max(rep.dv, std::abs(s.v - input.target[i].v));
        rep.da = std::max(rep.da, std::abs(s.a - input.target[i].a));
        worst_violation = std::max({worst_violation, cv_hi.worst, cv_lo.worst, ca_hi.worst,
                                    ca_lo.worst});
    }

    rep.limit_violation = worst_violation;
    const bool terminal_ok = (velocity_mode || rep.dp < kPositionTol) && rep.dv < kVelocityTol &&
                             rep.da < kAccelTol;
    rep.pass = terminal_ok && worst_violation <= 0.0;
    if (!rep.pass) {
        rep.reason = !terminal_ok ? "terminal deviation" : "limit violation";
    }
    return rep;
}

// ---- optimality probe -----------------------------------------------------------

ProbeReport optimality_probe(const InputParameters& input, const Trajectory& traj) {
    ProbeReport rep;
    const std::size_t n = input.dof_count;

    std::vector<KinematicState> starts(n);
    std::vector<ExtremalSet> sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        starts[i] = traj.dofs[i].brake.empty()
                        ? input.current[i]
                        : traj.dofs[i].brake.integrate(input.current[i]);
        sets[i] = enumerate_extremal(starts[i], input.target[i], input.limits[i]);
    }

    auto dof_feasible = [&](std::size_t i, double tp) {
        if (tp < -kSyncDurationTol) {
            return false;
        }
        return step2_synchronize(std::max(tp, 0.0), starts[i], input.target[i], input.limits[i],
                                 sets[i])
            .has_value();
    };

    // Below the computed duration the synchronization must fail somewhere.
    if (traj.duration > 1e-6) {
        const double t_low = traj.duration * (1.0 - 1e-4);
        bool all_ok = true;
        for (std::size_t i = 0; i < n && all_ok; ++i) {
            all_ok = dof_feasible(i, t_low - traj.dofs[i].brake.duration());
        }
        ++rep.checks;
        if (all_ok) {
            rep.ok = false;
            rep.detail = "feasible below computed duration";
            return rep;
        }
    }

    // Inside each blocked interval Step 2 must fail; just past the right
    // boundary it must succeed.
    for (std::size_t i = 0; i < n; ++i) {
        const BlockedIntervals& bi = traj.dofs[i].intervals;
        for (int k = 0; k < bi.count; ++k) {
            const BlockedInterval& b = bi.items[k];
            if (b.end - b.start > 2e-6) {
                for (int q = 1; q <= 8; ++q) {
                    const double tp = b.start + (b.end - b.start) * q / 9.0;
                    if (tp < b.start + 1e-6 || tp > b.end - 1e-6) {
                        continue;
                    }
                    ++rep.checks;
                    if (dof_feasible(i, tp)) {
                        rep.ok = false;
                        rep.detail = "feasible inside blocked interval (dof " +
                                     std::to_string(i) + ")";
                        return rep;
                    }
                }
            }
            ++rep.checks;
            if (!dof_feasible(i, b.end + 1e-6)) {
                rep.ok = false;
                rep.detail = "infeasible past interval end (dof " + std::to_string(i) + ")";
                return rep;
            }
        }
    }
    return rep;
}

// ---- fuzz loops -------------------------------------------------------------------

namespace {

std::uint64_t case_seed(std::uint64_t base, std::uint64_t index) {
    return base + 0x9E3779B97F4A7C15ull * (index + 1);
}

std::string corpus_directory(const std::string& requested) {
    if (!requested.empty()) {
        return requested;
    }
    if (const char* env = std::getenv("OTG_CORPUS_DIR")) {
        return env;
    }
    return "otg_corpus";
}

struct Shard {
    FuzzReport report;
    std::vector<std::pair<std::uint64_t, InputParameters>> failures;
};

}  // namespace

FuzzReport run_fuzz(const FuzzConfig& config, unsigned threads, const std::string& corpus_dir,
                    bool check_cardinality) {
    if (threads == 0) {
        threads = 1;
    }
    std::vector<Shard> shards(threads);

    auto worker = [&](unsigned tid) {
        Shard& sh = shards[tid];
        for (std::uint64_t idx = tid; idx < config.count; idx += threads) {
            Rng rng(case_seed(config.seed, idx));
            DrawStats ds;
            const InputParameters in = draw_input(config, rng, &ds);
            sh.report.redraws += ds.redraws;
            ++sh.report.count;

            const CalcResult res = calculate(in);
            if (!res.ok()) {
                ++sh.report.failures;
                sh.failures.emplace_back(idx, in);
                if (sh.report.first_failure.empty()) {
                    sh.report.first_failure = "case " + std::to_string(idx) + ": " + res.message;
                }
                continue;
            }
            const VerificationReport v = verify_trajectory(res.trajectory, in);
            if (v.excluded_by_cutoff) {
                ++sh.report.cutoff_excluded;
                continue;
            }
            if (!v.pass) {
                ++sh.report.failures;
                sh.failures.emplace_back(idx, in);
                if (sh.report.first_failure.empty()) {
                    sh.report.first_failure =
                        "case " + std::to_string(idx) + ": " + v.reason +
                        " (dp=" + std::to_string(v.dp) + ", dv=" + std::to_string(v.dv) +
                        ", da=" + std::to_string(v.da) +
                        ", viol=" + std::to_string(v.limit_violation) + ")";
                }
                continue;
            }
            ++sh.report.successes;

            if (check_cardinality) {
                for (std::size_t i = 0; i < in.dof_count; ++i) {
                    const DofTrajectory& d = res.trajectory.dofs[i];
                    const KinematicState start =
                        d.brake.empty() ? in.current[i] : d.brake.integrate(in.current[i]);
                    ExtremalSet set = enumerate_extremal(start, in.target[i], in.limits[i]);
                    const BlockedIntervals bi = derive_blocked_intervals(set);
                    const std::size_t m = set.profiles.size();
                    // Even counts are legitimate only in the post-brake graze
                    // degeneracy, where the fastest profile doubles as the
                    // first interval edge.
                    const bool degenerate_even =
                        (m == 2 || m == 4) && bi.count >= 1 &&
                        std::abs(bi.items[0].start - set.profiles[0].total) <= 1e-9;
                    if (m != 1 && m != 3 && m != 5 && !degenerate_even) {
                        ++sh.report.cardinality_violations;
                    }
                    int max_intervals = 2;
                    if (in.target[i].a == 0.0) {
                        max_intervals = in.target[i].v == 0.0 ? 0 : 1;
                    }
                    if (d.intervals.count > max_intervals) {
                        ++sh.report.interval_law_violations;
                    }
                }
            }
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker, t);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    FuzzReport total;
    std::vector<std::pair<std::uint64_t, InputParameters>> failures;
    for (Shard& sh : shards) {
        total.count += sh.report.count;
        total.successes += sh.report.successes;
        total.cutoff_excluded += sh.report.cutoff_excluded;
        total.redraws += sh.report.redraws;
        total.failures += sh.report.failures;
        total.cardinality_violations += sh.report.cardinality_violations;
        total.interval_law_violations += sh.report.interval_law_violations;
        if (total.first_failure.empty() && !sh.report.first_failure.empty()) {
            total.first_failure = sh.report.first_failure;
        }
        failures.insert(failures.end(), sh.failures.begin(), sh.failures.end());
    }

    if (!failures.empty()) {
        std::sort(failures.begin(), failures.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const std::string dir = corpus_directory(corpus_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        for (const auto& [idx, in] : failures) {
            const std::string path = dir + "/failure_" + std::to_string(config.seed) + "_" +
                                     std::to_string(idx) + ".json";
            if (io::write_problem_file(path, in)) {
                total.corpus_files.push_back(path);
            }
        }
    }
    return total;
}

FuzzReport run_velocity_fuzz(const FuzzConfig& config, unsigned threads) {
    if (threads == 0) {
        threads = 1;
    }
    std::vector<Shard> shards(threads);
    auto worker = [&](unsigned tid) {
        Shard& sh = shards[tid];
        for (std::uint64_t idx = tid; idx < config.count; idx += threads) {
            Rng rng(case_seed(config.seed ^ 0x5DEECE66Dull, idx));
            DrawStats ds;
            const InputParameters in = draw_velocity_input(config, rng, &ds);
            sh.report.redraws += ds.redraws;
            ++sh.report.count;
            const CalcResult res = calculate_velocity_trajectory(in);
            if (!res.ok()) {
                ++sh.report.failures;
                if (sh.report.first_failure.empty()) {
                    sh.report.first_failure = "case " + std::to_string(idx) + ": " + res.message;
                }
                continue;
            }
            const VerificationReport v = verify_trajectory(res.trajectory, in, true);
            if (v.excluded_by_cutoff) {
                ++sh.report.cutoff_excluded;
                continue;
            }
            if (!v.pass) {
                ++sh.report.failures;
                if (sh.report.first_failure.empty()) {
                    sh.report.first_failure = "case " + std::to_string(idx) + ": " + v.reason;
                }
                continue;
            }
            ++sh.report.successes;
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker, t);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    FuzzReport total;
    for (Shard& sh : shards) {
        total.count += sh.report.count;
        total.successes += sh.report.successes;
        total.cutoff_excluded += sh.report.cutoff_excluded;
        total.redraws += sh.report.redraws;
        total.failures += sh.report.failures;
        if (total.first_failure.empty() && !sh.report.first_failure.empty()) {
            total.first_failure = sh.report.first_failure;
        }
    }
    return total;
}

}  // namespace otg::testkit
