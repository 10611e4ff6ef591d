#include "loem/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

namespace loem {

namespace {

std::string pair_msg(const char* what, int i, int j) {
    std::ostringstream os;
    os << what << " at (" << i << ", " << j << ")";
    return os.str();
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist,
                                     std::optional<std::vector<Rational>> exact)
    : n_(static_cast<int>(labels.size())),
      labels_(std::move(labels)),
      dist_(std::move(dist)),
      exact_(std::move(exact)) {
    if (dist_.size() != static_cast<std::size_t>(n_) * n_)
        throw DimensionMismatch("distance matrix size does not match label count");
    if (exact_ && exact_->size() != dist_.size())
        throw DimensionMismatch("exact matrix size does not match label count");
}

void FiniteMetricSpace::check_index(int i) const {
    if (i < 0 || i >= n_) throw IndexOutOfRange("point index " + std::to_string(i));
}

const Rational& FiniteMetricSpace::exact_dist(int i, int j) const {
    check_index(i);
    check_index(j);
    if (!exact_) throw Error("space has no exact distances");
    return (*exact_)[static_cast<std::size_t>(i) * n_ + j];
}

double FiniteMetricSpace::diameter() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) best = std::max(best, dist(i, j));
    return best;
}

ValidationResult validate_metric(const RawMatrix& m, double tol_metric) {
    const int n = m.n;
    ValidationResult result;
    if (n < 0 || m.labels.size() != static_cast<std::size_t>(n) ||
        m.values.size() != static_cast<std::size_t>(n) * n)
        throw DimensionMismatch("raw matrix is not square or labels are missing");
    if (m.exact && m.exact->size() != m.values.size())
        throw DimensionMismatch("exact entries do not match matrix size");
    if (!(tol_metric >= 0)) throw Error("tol_metric must be nonnegative");

    const bool exact = m.exact.has_value();
    auto at = [&](int i, int j) { return m.values[static_cast<std::size_t>(i) * n + j]; };
    auto exact_at = [&](int i, int j) -> const Rational& {
        return (*m.exact)[static_cast<std::size_t>(i) * n + j];
    };
    auto add = [&](ViolationKind kind, int i, int j, int k, std::string msg) {
        result.violations.push_back(Violation{kind, i, j, k, std::move(msg)});
    };

    for (int i = 0; i < n; ++i) {
        bool zero = exact ? exact_at(i, i) == 0 : std::abs(at(i, i)) <= tol_metric;
        if (!zero) add(ViolationKind::NonzeroDiagonal, i, i, -1, pair_msg("nonzero diagonal", i, i));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            bool sym = exact ? exact_at(i, j) == exact_at(j, i)
                             : std::abs(at(i, j) - at(j, i)) <= tol_metric;
            if (!sym) add(ViolationKind::Asymmetry, i, j, -1, pair_msg("asymmetric entries", i, j));
            if (exact ? exact_at(i, j) < 0 : at(i, j) < 0)
                add(ViolationKind::NegativeDistance, i, j, -1, pair_msg("negative distance", i, j));
            else {
                bool distinct = exact ? exact_at(i, j) > 0 : at(i, j) > tol_metric;
                if (!distinct)
                    add(ViolationKind::IndistinctPoints, i, j, -1,
                        pair_msg("zero distance between distinct points", i, j));
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                bool bad = exact ? exact_at(i, j) > exact_at(i, k) + exact_at(k, j)
                                 : at(i, j) > at(i, k) + at(k, j) + tol_metric;
                if (bad) {
                    std::ostringstream os;
                    os << "triangle inequality fails: d(" << i << ", " << j << ") > d(" << i
                       << ", " << k << ") + d(" << k << ", " << j << ")";
                    add(ViolationKind::Triangle, i, j, k, os.str());
                }
            }
        }
    }

    if (result.violations.empty()) {
        // Canonicalize: exact zero diagonal, symmetrized entries.
        std::vector<double> dist = m.values;
        for (int i = 0; i < n; ++i) {
            dist[static_cast<std::size_t>(i) * n + i] = 0.0;
            for (int j = i + 1; j < n; ++j) {
                double d = exact ? dist[static_cast<std::size_t>(i) * n + j]
                                 : 0.5 * (at(i, j) + at(j, i));
                dist[static_cast<std::size_t>(i) * n + j] = d;
                dist[static_cast<std::size_t>(j) * n + i] = d;
            }
        }
        result.space.emplace(m.labels, std::move(dist), m.exact);
    }
    return result;
}

FiniteMetricSpace make_space(const RawMatrix& m, double tol_metric) {
    ValidationResult r = validate_metric(m, tol_metric);
    if (r.ok()) return *std::move(r.space);
    const Violation& v = r.violations.front();
    switch (v.kind) {
        case ViolationKind::Asymmetry: throw AsymmetryError(v.i, v.j, v.message);
        case ViolationKind::NegativeDistance: throw NegativeDistanceError(v.i, v.j, v.message);
        case ViolationKind::NonzeroDiagonal: throw NonzeroDiagonalError(v.i, v.message);
        case ViolationKind::IndistinctPoints: throw IndistinctPointsError(v.i, v.j, v.message);
        case ViolationKind::Triangle: throw TriangleViolation(v.i, v.j, v.k, v.message);
    }
    throw Error("unreachable");
}

RawMatrix raw_from_rows(const std::vector<std::vector<double>>& rows,
                        std::vector<std::string> labels) {
    RawMatrix m;
    m.n = static_cast<int>(rows.size());
    if (labels.empty())
        for (int i = 0; i < m.n; ++i) labels.push_back("p" + std::to_string(i));
    m.labels = std::move(labels);
    m.values.reserve(static_cast<std::size_t>(m.n) * m.n);
    for (const auto& row : rows) {
        if (row.size() != static_cast<std::size_t>(m.n))
            throw DimensionMismatch("ragged distance rows");
        m.values.insert(m.values.end(), row.begin(), row.end());
    }
    return m;
}

RawMatrix raw_from_exact_rows(const std::vector<std::vector<Rational>>& rows,
                              std::vector<std::string> labels) {
    RawMatrix m;
    m.n = static_cast<int>(rows.size());
    if (labels.empty())
        for (int i = 0; i < m.n; ++i) labels.push_back("p" + std::to_string(i));
    m.labels = std::move(labels);
    m.exact.emplace();
    m.exact->reserve(static_cast<std::size_t>(m.n) * m.n);
    m.values.reserve(static_cast<std::size_t>(m.n) * m.n);
    for (const auto& row : rows) {
        if (row.size() != static_cast<std::size_t>(m.n))
            throw DimensionMismatch("ragged distance rows");
        for (const Rational& r : row) {
            m.exact->push_back(r);
            m.values.push_back(static_cast<double>(r));
        }
    }
    return m;
}

DistanceClassification::DistanceClassification(int n, std::vector<int> class_of,
                                               std::vector<std::vector<PairRef>> classes,
                                               std::vector<double> values,
                                               std::optional<std::vector<Rational>> exact_values)
    : n_(n),
      class_of_(std::move(class_of)),
      classes_(std::move(classes)),
      values_(std::move(values)),
      exact_values_(std::move(exact_values)) {}

int DistanceClassification::class_of(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw IndexOutOfRange("pair index (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    if (i == j) throw IndexOutOfRange("diagonal pair has no distance class");
    return class_of_[static_cast<std::size_t>(i) * n_ + j];
}

const Rational& DistanceClassification::exact_value(int c) const {
    if (!exact_values_) throw Error("classification has no exact values");
    return exact_values_->at(c);
}

double DistanceClassification::min_gap() const {
    if (values_.size() < 2) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 1; c < values_.size(); ++c)
        best = std::min(best, values_[c] - values_[c - 1]);
    return best;
}

DistanceClassification classify_distances(const FiniteMetricSpace& space, double tol_class) {
    if (!(tol_class >= 0)) throw Error("tol_class must be nonnegative");
    const int n = space.size();

    struct Entry {
        double d;
        int i, j;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) entries.push_back({space.dist(i, j), i, j});

    std::vector<int> class_of(static_cast<std::size_t>(n) * n, -1);
    std::vector<std::vector<PairRef>> classes;
    std::vector<double> values;
    std::optional<std::vector<Rational>> exact_values;

    if (space.exact()) {
        // Group by the rational value itself.
        std::vector<std::pair<Rational, PairRef>> tagged;
        tagged.reserve(entries.size());
        for (const Entry& e : entries) tagged.push_back({space.exact_dist(e.i, e.j), {e.i, e.j}});
        std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            if (a.second.i != b.second.i) return a.second.i < b.second.i;
            return a.second.j < b.second.j;
        });
        exact_values.emplace();
        for (const auto& [val, pr] : tagged) {
            if (exact_values->empty() || exact_values->back() != val) {
                exact_values->push_back(val);
                classes.emplace_back();
            }
            classes.back().push_back(pr);
        }
        for (const Rational& v : *exact_values) values.push_back(static_cast<double>(v));
    } else {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.d != b.d) return a.d < b.d;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
        // Single linkage: a new block starts at every positive gap >= tol_class.
        std::size_t start = 0;
        for (std::size_t t = 0; t <= entries.size(); ++t) {
            bool cut = t == entries.size() ||
                       (t > start && entries[t].d - entries[t - 1].d >= tol_class &&
                        entries[t].d > entries[t - 1].d);
            if (!cut || t == start) continue;
            double spread = entries[t - 1].d - entries[start].d;
            if (spread >= 0.5 * tol_class)
                throw AmbiguousClusteringError(
                    "distance cluster spread " + std::to_string(spread) +
                    " is not well separated at tolerance " + std::to_string(tol_class));
            double mean = 0.0;
            std::vector<PairRef> block;
            for (std::size_t s = start; s < t; ++s) {
                mean += entries[s].d;
                block.push_back({entries[s].i, entries[s].j});
            }
            mean /= static_cast<double>(t - start);
            std::sort(block.begin(), block.end(), [](const PairRef& a, const PairRef& b) {
                return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
            values.push_back(mean);
            classes.push_back(std::move(block));
            start = t;
        }
    }

    for (std::size_t c = 0; c < classes.size(); ++c)
        for (const PairRef& pr : classes[c]) {
            class_of[static_cast<std::size_t>(pr.i) * n + pr.j] = static_cast<int>(c);
            class_of[static_cast<std::size_t>(pr.j) * n + pr.i] = static_cast<int>(c);
        }

    return DistanceClassification(n, std::move(class_of), std::move(classes), std::move(values),
                                  std::move(exact_values));
}

FiniteMetricSpace restrict_space(const FiniteMetricSpace& space, const std::vector<int>& subset) {
    if (subset.empty()) throw EmptySubsetError("restriction to an empty index set");
    const int m = static_cast<int>(subset.size());
    for (std::size_t a = 0; a < subset.size(); ++a) {
        if (subset[a] < 0 || subset[a] >= space.size())
            throw IndexOutOfRange("subset index " + std::to_string(subset[a]));
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            if (subset[a] == subset[b])
                throw IndistinctPointsError(static_cast<int>(a), static_cast<int>(b),
                                            "subset repeats index " + std::to_string(subset[a]));
    }
    std::vector<std::string> labels;
    labels.reserve(subset.size());
    for (int idx : subset) labels.push_back(space.labels()[idx]);
    std::vector<double> dist(static_cast<std::size_t>(m) * m);
    std::optional<std::vector<Rational>> exact;
    if (space.exact()) exact.emplace(static_cast<std::size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            dist[static_cast<std::size_t>(a) * m + b] = space.dist(subset[a], subset[b]);
            if (exact)
                (*exact)[static_cast<std::size_t>(a) * m + b] =
                    space.exact_dist(subset[a], subset[b]);
        }
    return FiniteMetricSpace(std::move(labels), std::move(dist), std::move(exact));
}

}  // namespace loem
