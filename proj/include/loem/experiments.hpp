#ifndef LOEM_EXPERIMENTS_HPP
#define LOEM_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "loem/manifold.hpp"
#include "loem/solver.hpp"

namespace loem {

enum class StructureKind { Simplex, Flag };

struct StructureSearchConfig {
    int restarts = 100;
    std::uint64_t seed = 1;
    std::uint64_t eval_budget = 2'000'000;
};

struct StructureSearchResult {
    double quality = 0.0;
    std::vector<ManifoldPoint> points;  // flag searches list pair members consecutively
    std::uint64_t evaluations = 0;
    int restarts_completed = 0;
};

// Multi-start coordinate pattern search minimizing the simplex or flag
// quality over k (or 2n) chart-parametrized points. Deterministic given the
// seed. Closed-form variants only.
StructureSearchResult best_structure(const ManifoldModel& model, StructureKind kind, int size,
                                     const StructureSearchConfig& config = {});

struct MonotoneRun {
    bool strictly_monotone = false;
    double min_increment = 0.0;
};

// Evaluates the median residual of (p0, q0) at m evenly spaced points along
// the geodesic from p1 to q1 and reports whether the sequence strictly
// increases.
MonotoneRun monotone_run(const ManifoldModel& model, const ManifoldPoint& p0,
                         const ManifoldPoint& q0, const ManifoldPoint& p1, const ManifoldPoint& q1,
                         int m);

struct MonotonicityReport {
    int samples = 0;
    int m = 0;
    double monotone_fraction = 0.0;
    double min_increment = 0.0;
    std::uint64_t seed = 0;
};

// Draws four-point configurations inside a geodesic ball of the given radius
// whose two chords subtend a chart angle below the bound, then runs
// monotone_run on each. A zero bound asks for exactly parallel chords, which
// only the flat variants can realize.
MonotonicityReport monotonicity_experiment(const ManifoldModel& model, double radius,
                                           double angle_bound, int samples, int m = 100,
                                           std::uint64_t seed = 1);

// Scales so the diameter is exactly 1 and moves the first endpoint of the
// lexicographically smallest diameter-realizing pair to the origin; the
// second endpoint then sits on the unit sphere and everything lies in the
// closed unit ball.
std::vector<double> normalize_to_unit_ball(const std::vector<double>& coords, int n, int dim);

struct RigidAlignment {
    std::vector<double> rotation;     // dim x dim, row-major
    std::vector<double> translation;  // dim
};

// Orthogonal Procrustes with translation: the rigid motion (reflections
// allowed) minimizing the summed squared displacement from source to target.
RigidAlignment align_points(const std::vector<double>& source, const std::vector<double>& target,
                            int n, int dim);

std::vector<double> apply_alignment(const RigidAlignment& motion, const std::vector<double>& coords,
                                    int n, int dim);

struct NetLimitStage {
    int size = 0;
    Verdict verdict = Verdict::Inconclusive;
    SolveDiagnostics diagnostics;
    std::optional<ObstructionReport> obstruction;
    std::vector<double> aligned_coords;
    double normalized_diameter = 0.0;
    double origin_gap = 0.0;  // smallest point norm after normalization
    double sphere_gap = 0.0;  // smallest |norm - 1| after normalization
    std::vector<double> drift;  // per shared point, against the previous stage
};

struct NetLimitReport {
    std::vector<NetLimitStage> stages;
    std::optional<int> failed_stage;
    bool final_weak_le = false;
    std::uint64_t sample_seed = 0;
};

// Solves nested prefixes of one sampled point set, normalizes each stage and
// aligns it onto the previous one; a non-Embedded stage stops the chain.
// Optional initial points are placed at the front of the sample.
NetLimitReport net_limit_experiment(const ManifoldModel& model, const std::vector<int>& chain,
                                    int dim, const SolverConfig& config = {},
                                    std::uint64_t sample_seed = 1,
                                    const std::vector<ManifoldPoint>& initial_points = {});

}  // namespace loem

#endif
