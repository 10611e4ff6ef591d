#ifndef LOEM_OBSTRUCTION_HPP
#define LOEM_OBSTRUCTION_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "loem/metric.hpp"

namespace loem {

// k vertices whose pairwise distances all fall in one class: a regular
// (k-1)-simplex in any faithful image. class_id is -1 only for k = 1.
struct SimplexCertificate {
    std::vector<int> vertices;
    int class_id = -1;
};

// Ordered pairs (p_0,q_0), ..., (p_{n-1},q_{n-1}), each later point
// equidistant from both members of every earlier pair. In any faithful image
// each pair spans a separating hyperplane and the normals are mutually
// orthogonal, so a length-n flag needs at least n dimensions.
struct FlagCertificate {
    std::vector<std::pair<int, int>> pairs;
    int length() const { return static_cast<int>(pairs.size()); }
};

struct ObstructionReport {
    SimplexCertificate best_simplex;
    FlagCertificate best_flag;
    int dim_lower_bound = 0;
    bool budget_exhausted = false;  // flag search hit its node budget; lengths are lower bounds
};

inline constexpr std::uint64_t kDefaultFlagBudget = 10'000'000;

// Maximum vertex set with all pairs in one class. Exact branch and bound with
// a greedy coloring bound, run per class in ascending value order; ties go to
// the lower class, and the returned set is the lexicographically smallest of
// the winning size.
SimplexCertificate max_regular_simplex(const DistanceClassification& classification);

struct FlagSearchResult {
    FlagCertificate flag;
    bool budget_exhausted = false;
    std::uint64_t nodes = 0;
};

// Longest flag via depth-first search over pair sequences; candidate sets
// shrink to the points equidistant from every chosen pair. First longest
// sequence in lexicographic order wins. The node budget caps the search; when
// it runs out the result is still a valid flag, just possibly not maximal.
FlagSearchResult max_median_flag(const DistanceClassification& classification,
                                 std::uint64_t node_budget = kDefaultFlagBudget);

// max(k - 1, n): k mutually equidistant points force dimension k - 1, an
// n-flag forces n mutually orthogonal hyperplane normals.
int dimension_lower_bound(const SimplexCertificate& simplex, const FlagCertificate& flag);

ObstructionReport analyze_obstructions(const DistanceClassification& classification,
                                       std::uint64_t node_budget = kDefaultFlagBudget);

// Independent re-checks straight against the space's distances (exact
// arithmetic when the space is exact). tol_class must match the
// classification the certificate came from.
bool verify_certificate(const FiniteMetricSpace& space, const SimplexCertificate& cert,
                        double tol_class = 1e-9);
bool verify_certificate(const FiniteMetricSpace& space, const FlagCertificate& cert,
                        double tol_class = 1e-9);

}  // namespace loem

#endif
