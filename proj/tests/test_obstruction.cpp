#include "loem/obstruction.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include "doctest.h"
#include "loem/io.hpp"
#include "loem/metric.hpp"

using namespace loem;

namespace {

RawMatrix complete_graph(int n) {
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, 1));
    for (int i = 0; i < n; ++i) rows[i][i] = 0;
    return raw_from_exact_rows(rows);
}

// n equally spaced points on the unit circle with arc-length distances.
FiniteMetricSpace circle_points(int n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int steps = std::min(std::abs(i - j), n - std::abs(i - j));
            rows[i][j] = 2.0 * std::numbers::pi * steps / n;
        }
    return make_space(raw_from_rows(rows));
}

// Subset enumeration: largest vertex set all of whose pairs share a class.
SimplexCertificate oracle_simplex(const DistanceClassification& cls) {
    const int n = cls.point_count();
    if (n == 1) return {{0}, -1};
    SimplexCertificate best;
    int best_class = -1;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> verts;
        for (int v = 0; v < n; ++v)
            if (mask & (1u << v)) verts.push_back(v);
        if (verts.size() < 2) continue;
        int cid = cls.class_of(verts[0], verts[1]);
        bool ok = true;
        for (std::size_t a = 0; a < verts.size() && ok; ++a)
            for (std::size_t b = a + 1; b < verts.size() && ok; ++b)
                ok = cls.class_of(verts[a], verts[b]) == cid;
        if (!ok) continue;
        bool better = verts.size() > best.vertices.size() ||
                      (verts.size() == best.vertices.size() &&
                       (cid < best_class || (cid == best_class && verts < best.vertices)));
        if (better) {
            best.vertices = verts;
            best_class = cid;
        }
    }
    best.class_id = best_class;
    return best;
}

// Unpruned enumeration over pair sequences, in lexicographic order.
void oracle_flag_extend(const DistanceClassification& cls,
                        std::vector<std::pair<int, int>>& current,
                        std::vector<std::pair<int, int>>& best) {
    if (current.size() > best.size()) best = current;
    const int n = cls.point_count();
    std::vector<char> used(n, 0);
    for (auto [p, q] : current) used[p] = used[q] = 1;
    for (int p = 0; p < n; ++p) {
        if (used[p]) continue;
        for (int q = p + 1; q < n; ++q) {
            if (used[q]) continue;
            bool ok = true;
            for (auto [ps, qs] : current) {
                if (cls.class_of(p, ps) != cls.class_of(p, qs) ||
                    cls.class_of(q, ps) != cls.class_of(q, qs)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            current.emplace_back(p, q);
            oracle_flag_extend(cls, current, best);
            current.pop_back();
        }
    }
}

FlagCertificate oracle_flag(const DistanceClassification& cls) {
    std::vector<std::pair<int, int>> current, best;
    if (cls.point_count() >= 2) oracle_flag_extend(cls, current, best);
    return FlagCertificate{best};
}

// All symmetric matrices over {1,2,3}; only some satisfy the triangle
// inequality, the rest are skipped.
template <typename Fn>
void for_each_small_space(int n, int stride, Fn&& fn) {
    const int m = n * (n - 1) / 2;
    long long total = 1;
    for (int e = 0; e < m; ++e) total *= 3;
    for (long long code = 0; code < total; code += stride) {
        std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, 0));
        long long rest = code;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                rows[i][j] = rows[j][i] = Rational(1 + rest % 3);
                rest /= 3;
            }
        ValidationResult r = validate_metric(raw_from_exact_rows(rows));
        if (r.ok()) fn(*r.space);
    }
}

}  // namespace

TEST_CASE("complete graphs give the full simplex and a matching flag") {
    FiniteMetricSpace k4 = make_space(complete_graph(4));
    DistanceClassification cls = classify_distances(k4);
    SimplexCertificate simplex = max_regular_simplex(cls);
    CHECK(simplex.vertices == std::vector<int>{0, 1, 2, 3});
    CHECK(simplex.class_id == 0);
    CHECK(verify_certificate(k4, simplex));

    FlagSearchResult flag = max_median_flag(cls);
    CHECK(flag.flag.length() == 2);
    CHECK_FALSE(flag.budget_exhausted);
    CHECK(verify_certificate(k4, flag.flag));

    CHECK(dimension_lower_bound(simplex, flag.flag) == 3);

    FiniteMetricSpace k5 = make_space(complete_graph(5));
    ObstructionReport report = analyze_obstructions(classify_distances(k5));
    CHECK(report.best_simplex.vertices.size() == 5);
    CHECK(report.best_flag.length() == 2);
    CHECK(report.dim_lower_bound == 4);
    CHECK_FALSE(report.budget_exhausted);
}

TEST_CASE("equally spaced circle points") {
    // Three points: all distances equal, a full triangle.
    SimplexCertificate tri = max_regular_simplex(classify_distances(circle_points(3)));
    CHECK(tri.vertices.size() == 3);

    // Four points: the small class is a 4-cycle, the large one a matching.
    FiniteMetricSpace four = circle_points(4);
    DistanceClassification cls = classify_distances(four);
    REQUIRE(cls.num_classes() == 2);
    SimplexCertificate simplex = max_regular_simplex(cls);
    CHECK(simplex.vertices == std::vector<int>{0, 1});
    CHECK(simplex.class_id == 0);

    FlagSearchResult flag = max_median_flag(cls);
    CHECK(flag.flag.pairs == std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});
    CHECK(verify_certificate(four, flag.flag));
    CHECK(dimension_lower_bound(simplex, flag.flag) == 2);
}

TEST_CASE("plane cross configuration carries a 2-flag") {
    std::vector<std::vector<double>> pts = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    FiniteMetricSpace s = make_space(euclidean_matrix(pts));
    FlagSearchResult flag = max_median_flag(classify_distances(s));
    CHECK(flag.flag.pairs == std::vector<std::pair<int, int>>{{0, 1}, {2, 3}});
    CHECK(verify_certificate(s, flag.flag));
}

TEST_CASE("equilateral triangle only has 1-flags") {
    FiniteMetricSpace tri = make_space(complete_graph(3));
    FlagSearchResult flag = max_median_flag(classify_distances(tri));
    CHECK(flag.flag.pairs == std::vector<std::pair<int, int>>{{0, 1}});
}

TEST_CASE("three nested symmetric sphere pairs form a 3-flag") {
    const double p2 = std::numbers::pi / 2, p3 = std::numbers::pi / 3,
                 p4 = std::numbers::pi / 4, p34 = 3 * std::numbers::pi / 4,
                 pi = std::numbers::pi;
    std::vector<std::vector<double>> rows = {
        {0, p2, p3, p3, p4, p34},  //
        {p2, 0, p3, p3, p4, p34},  //
        {p3, p3, 0, p2, p4, p34},  //
        {p3, p3, p2, 0, p4, p34},  //
        {p4, p4, p4, p4, 0, pi},   //
        {p34, p34, p34, p34, pi, 0}};
    FiniteMetricSpace s = make_space(raw_from_rows(rows));
    ObstructionReport report = analyze_obstructions(classify_distances(s));
    CHECK(report.best_flag.pairs ==
          std::vector<std::pair<int, int>>{{0, 1}, {2, 3}, {4, 5}});
    CHECK(report.best_simplex.vertices.size() == 2);
    CHECK(report.dim_lower_bound == 3);
    CHECK(verify_certificate(s, report.best_flag));
}

TEST_CASE("single point space has the trivial report") {
    FiniteMetricSpace one({"a"}, {0.0}, std::nullopt);
    ObstructionReport report = analyze_obstructions(classify_distances(one));
    CHECK(report.best_simplex.vertices == std::vector<int>{0});
    CHECK(report.best_simplex.class_id == -1);
    CHECK(report.best_flag.length() == 0);
    CHECK(report.dim_lower_bound == 0);
    CHECK(verify_certificate(one, report.best_simplex));
    CHECK(verify_certificate(one, report.best_flag));
}

TEST_CASE("detectors match exhaustive enumeration on small spaces") {
    for (int n = 2; n <= 4; ++n) {
        for_each_small_space(n, 1, [&](const FiniteMetricSpace& s) {
            DistanceClassification cls = classify_distances(s);
            SimplexCertificate simplex = max_regular_simplex(cls);
            SimplexCertificate expected = oracle_simplex(cls);
            CHECK(simplex.vertices == expected.vertices);
            CHECK(simplex.class_id == expected.class_id);
            CHECK(verify_certificate(s, simplex));

            FlagSearchResult flag = max_median_flag(cls);
            FlagCertificate expected_flag = oracle_flag(cls);
            CHECK(flag.flag.pairs == expected_flag.pairs);
            CHECK(verify_certificate(s, flag.flag));
        });
    }
    // A sample of the 5-point spaces keeps this fast; the acceptance run
    // sweeps them all.
    for_each_small_space(5, 17, [&](const FiniteMetricSpace& s) {
        DistanceClassification cls = classify_distances(s);
        CHECK(max_regular_simplex(cls).vertices == oracle_simplex(cls).vertices);
        CHECK(max_median_flag(cls).flag.pairs == oracle_flag(cls).pairs);
    });
}

TEST_CASE("restriction never grows either certificate") {
    for_each_small_space(5, 23, [&](const FiniteMetricSpace& s) {
        DistanceClassification cls = classify_distances(s);
        int k = static_cast<int>(max_regular_simplex(cls).vertices.size());
        int f = max_median_flag(cls).flag.length();
        FiniteMetricSpace sub = restrict_space(s, {0, 2, 4});
        DistanceClassification sub_cls = classify_distances(sub);
        CHECK(static_cast<int>(max_regular_simplex(sub_cls).vertices.size()) <= k);
        CHECK(max_median_flag(sub_cls).flag.length() <= f);
    });
}

TEST_CASE("certificates are invariant under rescaling") {
    for_each_small_space(4, 7, [&](const FiniteMetricSpace& s) {
        std::vector<std::vector<Rational>> scaled(s.size(), std::vector<Rational>(s.size()));
        for (int i = 0; i < s.size(); ++i)
            for (int j = 0; j < s.size(); ++j) scaled[i][j] = s.exact_dist(i, j) * 2;
        FiniteMetricSpace t = make_space(raw_from_exact_rows(scaled));
        DistanceClassification cs = classify_distances(s);
        DistanceClassification ct = classify_distances(t);
        CHECK(max_regular_simplex(cs).vertices == max_regular_simplex(ct).vertices);
        CHECK(max_median_flag(cs).flag.pairs == max_median_flag(ct).flag.pairs);
    });
}

TEST_CASE("an exhausted budget still yields a valid flag") {
    FiniteMetricSpace k6 = make_space(complete_graph(6));
    DistanceClassification cls = classify_distances(k6);
    FlagSearchResult full = max_median_flag(cls);
    CHECK(full.flag.length() == 3);
    FlagSearchResult capped = max_median_flag(cls, 2);
    CHECK(capped.budget_exhausted);
    CHECK(capped.flag.length() >= 1);
    CHECK(capped.flag.length() <= 3);
    CHECK(verify_certificate(k6, capped.flag));
    CHECK(capped.nodes <= 3);
}

TEST_CASE("verification rejects broken certificates") {
    FiniteMetricSpace k4 = make_space(complete_graph(4));
    SUBCASE("wrong class id") {
        CHECK_FALSE(verify_certificate(k4, SimplexCertificate{{0, 1, 2}, 1}));
    }
    SUBCASE("duplicate vertex") {
        CHECK_FALSE(verify_certificate(k4, SimplexCertificate{{0, 1, 1}, 0}));
    }
    SUBCASE("empty vertex set") {
        CHECK_FALSE(verify_certificate(k4, SimplexCertificate{{}, 0}));
    }
    SUBCASE("out of range") {
        CHECK_THROWS_AS(verify_certificate(k4, SimplexCertificate{{0, 9}, 0}), IndexOutOfRange);
        CHECK_THROWS_AS(verify_certificate(k4, FlagCertificate{{{0, 9}}}), IndexOutOfRange);
    }
    SUBCASE("mixed-class simplex in a two-class space") {
        FiniteMetricSpace four = circle_points(4);
        CHECK_FALSE(verify_certificate(four, SimplexCertificate{{0, 1, 2}, 0}));
    }
    SUBCASE("flag with a repeated point") {
        CHECK_FALSE(verify_certificate(k4, FlagCertificate{{{0, 1}, {1, 2}}}));
        CHECK_FALSE(verify_certificate(k4, FlagCertificate{{{0, 0}}}));
    }
    SUBCASE("asymmetric cross distances break the flag") {
        std::vector<std::vector<double>> pts = {{1, 0}, {-1, 0}, {0, 1}, {0.1, -1}};
        FiniteMetricSpace s = make_space(euclidean_matrix(pts));
        CHECK_FALSE(verify_certificate(s, FlagCertificate{{{0, 1}, {2, 3}}}));
    }
}

TEST_CASE("bound combines both certificate kinds") {
    CHECK(dimension_lower_bound(SimplexCertificate{{0, 1, 2, 3}, 0}, FlagCertificate{{{0, 1}}}) ==
          3);
    CHECK(dimension_lower_bound(SimplexCertificate{{0, 1}, 0},
                                FlagCertificate{{{0, 1}, {2, 3}}}) == 2);
}
