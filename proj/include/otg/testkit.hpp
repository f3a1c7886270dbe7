#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "otg/trajectory.hpp"
#include "otg/types.hpp"

namespace otg::testkit {

/// Deterministic counter-based generator (splitmix64 core) with identical
/// streams on every platform. Seeds are recorded in every report so failures
/// replay exactly.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform();  // (0, 1)
    double normal(double sigma);
    /// Gamma(shape=2, scale): sum of two exponentials scaled.
    double gamma2(double scale);

  private:
    std::uint64_t state_;
};

enum class ZeroTargetMode { kNone, kZeroTargetAccel, kZeroTargetVelAccel };

struct FuzzConfig {
    std::uint64_t count = 1000;
    std::uint64_t seed = 0;
    int dof_min = 1;
    int dof_max = 7;
    bool directional = false;
    ZeroTargetMode zero_mode = ZeroTargetMode::kNone;
    double sigma_p = 4.0;
    double sigma_kin = 0.8;
    double gamma_scale = 2.0;   // shape is fixed at 2
    double limit_floor = 0.05;
    double duration_cutoff = 7.1e3;
};

struct DrawStats {
    std::uint64_t redraws = 0;
};

/// One random problem per the evaluation distributions; inputs violating the
/// target-acceleration reachability bound (or targets outside the limits)
/// are redrawn.
InputParameters draw_input(const FuzzConfig& config, Rng& rng, DrawStats* stats = nullptr);

/// Random problem for the velocity-control interface (positions ignored).
InputParameters draw_velocity_input(const FuzzConfig& config, Rng& rng,
                                    DrawStats* stats = nullptr);

struct VerificationReport {
    double dp = 0.0;  // terminal position deviation
    double dv = 0.0;
    double da = 0.0;
    double limit_violation = 0.0;  // worst violation depth beyond the margin
    double duration = 0.0;
    bool excluded_by_cutoff = false;
    bool pass = false;
    std::string reason;
};

/// Independently re-integrate the trajectory (1024 samples plus all step
/// boundaries plus analytic per-step velocity extrema) and apply the pass
/// rule: terminal |dp|,|dv| < 1e-8, |da| < 1e-12, and no limit violated
/// beyond 1e-9 — where a constraint already violated when a segment starts
/// (brake recovery) must only never be violated anew once satisfied.
VerificationReport verify_trajectory(const Trajectory& trajectory, const InputParameters& input,
                                     bool velocity_mode = false);

struct ProbeReport {
    bool ok = true;
    int checks = 0;
    std::string detail;
};

/// Time-optimality evidence: Step 2 must be infeasible below the computed
/// duration and strictly inside every blocked interval, and feasible just
/// past each interval end.
ProbeReport optimality_probe(const InputParameters& input, const Trajectory& trajectory);

struct FuzzReport {
    std::uint64_t count = 0;
    std::uint64_t successes = 0;
    std::uint64_t cutoff_excluded = 0;
    std::uint64_t redraws = 0;
    std::uint64_t failures = 0;
    std::uint64_t cardinality_violations = 0;  // valid-set size not in {1,3,5}
    std::uint64_t interval_law_violations = 0;
    std::vector<std::string> corpus_files;
    std::string first_failure;
};

/// Batched fuzz run; embarrassingly parallel by per-case seeding, so the
/// report is independent of the thread count. Failing inputs are written as
/// problem files into corpus_dir (or OTG_CORPUS_DIR, or ./otg_corpus).
FuzzReport run_fuzz(const FuzzConfig& config, unsigned threads = 1,
                    const std::string& corpus_dir = "", bool check_cardinality = false);

/// Same loop through the velocity-control interface.
FuzzReport run_velocity_fuzz(const FuzzConfig& config, unsigned threads = 1);

}  // namespace otg::testkit
