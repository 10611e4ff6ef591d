#ifndef LOEM_METRIC_HPP
#define LOEM_METRIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "loem/errors.hpp"

namespace loem {

using Rational = boost::multiprecision::cpp_rational;

// Square matrix as parsed, before the metric axioms are checked.
// `exact` is present iff every entry was given in integer/rational form.
struct RawMatrix {
    int n = 0;
    std::vector<std::string> labels;             // size n
    std::vector<double> values;                  // n*n row-major
    std::optional<std::vector<Rational>> exact;  // n*n when exact
};

enum class ViolationKind {
    Asymmetry,
    NegativeDistance,
    NonzeroDiagonal,
    IndistinctPoints,
    Triangle,
};

struct Violation {
    ViolationKind kind;
    int i = -1, j = -1, k = -1;  // Triangle: d(i,j) > d(i,k) + d(k,j)
    std::string message;
};

// n labelled points with a validated distance matrix. Immutable; distances in
// abstract length units. Exact spaces additionally carry the rational matrix.
class FiniteMetricSpace {
  public:
    FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist,
                      std::optional<std::vector<Rational>> exact);

    int size() const { return n_; }
    bool exact() const { return exact_.has_value(); }

    double dist(int i, int j) const {
        check_index(i);
        check_index(j);
        return dist_[static_cast<std::size_t>(i) * n_ + j];
    }
    const Rational& exact_dist(int i, int j) const;

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<double>& matrix() const { return dist_; }
    const std::optional<std::vector<Rational>>& exact_matrix() const { return exact_; }

    // Largest distance; 0 for a single point.
    double diameter() const;

  private:
    void check_index(int i) const;

    int n_;
    std::vector<std::string> labels_;
    std::vector<double> dist_;
    std::optional<std::vector<Rational>> exact_;
};

struct ValidationResult {
    std::optional<FiniteMetricSpace> space;
    std::vector<Violation> violations;
    bool ok() const { return space.has_value(); }
};

// Checks symmetry, zero diagonal, positivity off the diagonal, and the
// triangle inequality (with slack tol_metric on floats; exact matrices are
// compared exactly). Returns either the space or the full violation list.
ValidationResult validate_metric(const RawMatrix& m, double tol_metric = 1e-9);

// validate_metric that throws the first violation as its typed exception.
FiniteMetricSpace make_space(const RawMatrix& m, double tol_metric = 1e-9);

// Conveniences for tests and bindings.
RawMatrix raw_from_rows(const std::vector<std::vector<double>>& rows,
                        std::vector<std::string> labels = {});
RawMatrix raw_from_exact_rows(const std::vector<std::vector<Rational>>& rows,
                              std::vector<std::string> labels = {});

struct PairRef {
    int i, j;  // i < j
    friend bool operator==(const PairRef&, const PairRef&) = default;
};

// Partition of all unordered point pairs into distance-equality classes,
// ordered by ascending representative value. For exact spaces the partition
// is literal equality of rationals; for float spaces it is single-linkage
// with a gap rule at tol_class.
class DistanceClassification {
  public:
    DistanceClassification(int n, std::vector<int> class_of,
                           std::vector<std::vector<PairRef>> classes, std::vector<double> values,
                           std::optional<std::vector<Rational>> exact_values);

    int point_count() const { return n_; }
    int num_classes() const { return static_cast<int>(classes_.size()); }
    bool exact() const { return exact_values_.has_value(); }

    int class_of(int i, int j) const;
    const std::vector<PairRef>& pairs(int c) const { return classes_.at(c); }
    double value(int c) const { return values_.at(c); }
    const Rational& exact_value(int c) const;
    const std::vector<double>& values() const { return values_; }

    // Smallest gap between consecutive class values; +inf with < 2 classes.
    double min_gap() const;

  private:
    int n_;
    std::vector<int> class_of_;  // n*n, -1 on the diagonal
    std::vector<std::vector<PairRef>> classes_;
    std::vector<double> values_;
    std::optional<std::vector<Rational>> exact_values_;
};

// Exact spaces are always partitioned by literal equality (the tol_class = 0
// case the contract requires); tol_class only drives the float gap rule.
DistanceClassification classify_distances(const FiniteMetricSpace& space,
                                          double tol_class = 1e-9);

// Induced subspace on the given indices, order preserved, labels kept.
FiniteMetricSpace restrict_space(const FiniteMetricSpace& space, const std::vector<int>& subset);

}  // namespace loem

#endif
