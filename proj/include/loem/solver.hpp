#ifndef LOEM_SOLVER_HPP
#define LOEM_SOLVER_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "loem/metric.hpp"
#include "loem/obstruction.hpp"

namespace loem {

// A concrete map of the space's points into R^dim, with the tolerances the
// verifiers should apply. coords is row-major, point i at [i*dim, (i+1)*dim).
struct EmbeddingCandidate {
    int n = 0;
    int dim = 0;
    std::vector<double> coords;
    double tol_eq = 0.0;
    double tol_sep = 0.0;  // must stay above tol_eq
};

enum class Verdict { Embedded, Obstructed, Inconclusive };

struct SolveDiagnostics {
    double best_penalty = std::numeric_limits<double>::infinity();
    int restarts_used = 0;
    std::uint64_t seed = 0;
};

struct SolveOutcome {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<EmbeddingCandidate> candidate;    // Embedded
    std::optional<ObstructionReport> obstruction;   // Obstructed
    SolveDiagnostics diagnostics;
};

struct SolverConfig {
    int restarts = 20;
    int max_iterations = 5000;
    double armijo = 1e-4;
    double backtrack = 0.5;
    double grad_tol = 1e-10;
    std::optional<double> delta;  // separation margin on squared distances
    std::uint64_t rng_seed = 1;
    std::optional<double> tol_eq, tol_sep;  // defaults scale with image diameter
    double tol_class = 1e-9;
    std::uint64_t flag_budget = kDefaultFlagBudget;
    int threads = 1;
};

// 0.25 * (smallest gap between consecutive class values)^2; 1e-4 when there
// is at most one class.
double default_delta(const DistanceClassification& classification);

// Sum of three nonnegative terms over squared image distances s_ij:
//   spread of s within each class around the class mean,
//   hinge(delta - gap)^2 over consecutive sorted class means,
//   hinge(delta - s_ij)^2 over all pairs.
// Zero exactly when s is constant per class, class levels are delta-separated,
// and all points are delta-separated.
double penalty(const std::vector<double>& coords, const DistanceClassification& classification,
               double delta);

// Analytic gradient of penalty with respect to coords, same layout.
std::vector<double> penalty_gradient(const std::vector<double>& coords,
                                     const DistanceClassification& classification, double delta);

// (a) within each class, image distances spread less than tol_eq;
// (b) any two class representatives differ by more than tol_sep;
// (c) all image points more than tol_sep apart.
bool verify_loose_embedding(const FiniteMetricSpace& space, const EmbeddingCandidate& candidate,
                            double tol_class = 1e-9);

// Conditions (a) and (c) only: equal distances stay equal, points stay apart.
bool verify_weak_le(const FiniteMetricSpace& space, const EmbeddingCandidate& candidate,
                    double tol_class = 1e-9);

// Obstruction check first (a bound above N settles it); otherwise seeded
// multi-start gradient descent with Armijo backtracking, first verified
// restart wins. Inconclusive reports the best penalty reached.
SolveOutcome solve(const FiniteMetricSpace& space, int N, const SolverConfig& config = {});

}  // namespace loem

#endif
