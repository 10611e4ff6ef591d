#include "loem/solver.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "loem/io.hpp"
#include "loem/metric.hpp"
#include "loem/rng.hpp"

using namespace loem;

namespace {

RawMatrix complete_graph(int n) {
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, 1));
    for (int i = 0; i < n; ++i) rows[i][i] = 0;
    return raw_from_exact_rows(rows);
}

FiniteMetricSpace circle_points(int n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int steps = std::min(std::abs(i - j), n - std::abs(i - j));
            rows[i][j] = 2.0 * std::numbers::pi * steps / n;
        }
    return make_space(raw_from_rows(rows));
}

// Corners of {0,h}^d with their Euclidean metric; squared image distances are
// exact dyadics, so the penalty of the identity map is exactly zero.
std::pair<FiniteMetricSpace, std::vector<double>> hypercube(int d, double h) {
    int n = 1 << d;
    std::vector<std::vector<double>> pts(n, std::vector<double>(d));
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < d; ++b) pts[i][b] = (i >> b & 1) ? h : 0.0;
    std::vector<double> flat;
    for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
    return {make_space(euclidean_matrix(pts)), flat};
}

// Deliberately separate implementation of the objective, for cross-checking.
double naive_penalty(const std::vector<double>& x, const DistanceClassification& cls,
                     double delta) {
    int n = cls.point_count();
    int dim = static_cast<int>(x.size()) / n;
    auto sq = [&](int i, int j) {
        double acc = 0;
        for (int d = 0; d < dim; ++d) {
            double t = x[i * dim + d] - x[j * dim + d];
            acc += t * t;
        }
        return acc;
    };
    auto hinge = [](double v) { return v > 0 ? v : 0.0; };
    double total = 0;
    std::vector<double> means;
    for (int c = 0; c < cls.num_classes(); ++c) {
        double m = 0;
        for (auto pr : cls.pairs(c)) m += sq(pr.i, pr.j);
        m /= cls.pairs(c).size();
        means.push_back(m);
        for (auto pr : cls.pairs(c)) total += std::pow(sq(pr.i, pr.j) - m, 2);
    }
    std::sort(means.begin(), means.end());
    for (std::size_t c = 1; c < means.size(); ++c)
        total += std::pow(hinge(delta - (means[c] - means[c - 1])), 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) total += std::pow(hinge(delta - sq(i, j)), 2);
    return total;
}

std::vector<double> random_coords(Rng& rng, int n, int dim, double scale) {
    std::vector<double> x(static_cast<std::size_t>(n) * dim);
    for (double& v : x) v = scale * rng.gaussian();
    return x;
}

FiniteMetricSpace small_space(std::uint64_t seed, int n) {
    Rng rng(seed);
    for (;;) {
        std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                rows[i][j] = rows[j][i] = Rational(1 + static_cast<int>(rng.next() % 3));
        ValidationResult r = validate_metric(raw_from_exact_rows(rows));
        if (r.ok()) return *std::move(r.space);
    }
}

EmbeddingCandidate with_defaults(int n, int dim, std::vector<double> coords) {
    EmbeddingCandidate c{n, dim, std::move(coords), 0, 0};
    double diam = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double acc = 0;
            for (int d = 0; d < dim; ++d) {
                double t = c.coords[i * dim + d] - c.coords[j * dim + d];
                acc += t * t;
            }
            diam = std::max(diam, std::sqrt(acc));
        }
    c.tol_eq = 1e-9 * diam;
    c.tol_sep = 1e-6 * diam;
    return c;
}

}  // namespace

TEST_CASE("penalty vanishes exactly on a faithful image and not nearby") {
    FiniteMetricSpace tri = make_space(complete_graph(3));
    DistanceClassification cls = classify_distances(tri);
    std::vector<double> unit_simplex = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    CHECK(penalty(unit_simplex, cls, 1e-4) == 0.0);

    std::vector<double> bent = unit_simplex;
    bent[0] += 0.05;
    CHECK(penalty(bent, cls, 1e-4) > 0.0);
}

TEST_CASE("penalty agrees with an independent recomputation") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        FiniteMetricSpace s = small_space(seed, 5);
        DistanceClassification cls = classify_distances(s);
        Rng rng(seed * 101);
        std::vector<double> x = random_coords(rng, 5, 3, 1.0);
        double a = penalty(x, cls, 0.5);
        double b = naive_penalty(x, cls, 0.5);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
        CHECK(a >= 0.0);
    }
}

TEST_CASE("gradient is zero at an exact minimum") {
    auto [space, coords] = hypercube(3, 0.25);
    DistanceClassification cls = classify_distances(space);
    double delta = 0.25 * 0.25 / 2.0;
    CHECK(penalty(coords, cls, delta) == 0.0);
    for (double g : penalty_gradient(coords, cls, delta)) CHECK(std::abs(g) <= 1e-12);
}

TEST_CASE("gradient matches central finite differences") {
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 100; ++seed) {
        FiniteMetricSpace s = small_space(seed, 5);
        DistanceClassification cls = classify_distances(s);
        Rng rng(seed * 977);
        std::vector<double> x = random_coords(rng, 5, 3, 1.0);
        double delta = 0.5;
        std::vector<double> g = penalty_gradient(x, cls, delta);
        double gnorm = 0;
        for (double v : g) gnorm += v * v;
        gnorm = std::sqrt(gnorm);
        const double h = 1e-6;
        double worst = 0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            std::vector<double> plus = x, minus = x;
            plus[k] += h;
            minus[k] -= h;
            double fd = (penalty(plus, cls, delta) - penalty(minus, cls, delta)) / (2 * h);
            worst = std::max(worst, std::abs(fd - g[k]));
        }
        CHECK(worst / std::max(1.0, gnorm) < 1e-5);
        ++checked;
    }
}

TEST_CASE("gradient components sum to zero along each axis") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        FiniteMetricSpace s = small_space(seed, 5);
        DistanceClassification cls = classify_distances(s);
        Rng rng(seed * 31);
        std::vector<double> x = random_coords(rng, 5, 4, 2.0);
        std::vector<double> g = penalty_gradient(x, cls, 0.3);
        double scale = 0;
        for (double v : g) scale = std::max(scale, std::abs(v));
        for (int d = 0; d < 4; ++d) {
            double sum = 0;
            for (int i = 0; i < 5; ++i) sum += g[i * 4 + d];
            CHECK(std::abs(sum) <= 1e-9 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("margin default follows the class value gaps") {
    CHECK(default_delta(classify_distances(make_space(complete_graph(4)))) == 1e-4);
    FiniteMetricSpace two = small_space(3, 5);
    DistanceClassification cls = classify_distances(two);
    if (cls.num_classes() >= 2) {
        double gap = cls.min_gap();
        CHECK(default_delta(cls) == doctest::Approx(0.25 * gap * gap));
    }
}

TEST_CASE("chord images of circle samples verify as loose embeddings") {
    FiniteMetricSpace s = circle_points(12);
    std::vector<double> coords;
    for (int i = 0; i < 12; ++i) {
        double th = 2.0 * std::numbers::pi * i / 12;
        coords.push_back(std::cos(th));
        coords.push_back(std::sin(th));
    }
    EmbeddingCandidate cand = with_defaults(12, 2, coords);
    CHECK(verify_loose_embedding(s, cand));
    CHECK(verify_weak_le(s, cand));

    // Collapsing two points kills injectivity.
    std::vector<double> collapsed = coords;
    collapsed[2] = collapsed[0];
    collapsed[3] = collapsed[1];
    EmbeddingCandidate bad = with_defaults(12, 2, collapsed);
    CHECK_FALSE(verify_loose_embedding(s, bad));
    CHECK_FALSE(verify_weak_le(s, bad));
}

TEST_CASE("unit square realizes its own metric") {
    std::vector<std::vector<double>> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    FiniteMetricSpace s = make_space(euclidean_matrix(pts));
    std::vector<double> flat = {0, 0, 1, 0, 1, 1, 0, 1};
    CHECK(verify_loose_embedding(s, with_defaults(4, 2, flat)));
}

TEST_CASE("weak embedding tolerates merged classes, loose does not") {
    FiniteMetricSpace s = circle_points(4);
    // Regular simplex image: every pair lands at distance sqrt(2).
    std::vector<double> tetra = {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
    EmbeddingCandidate cand{4, 4, tetra, 1e-9, 1e-6};
    CHECK(verify_weak_le(s, cand));
    CHECK_FALSE(verify_loose_embedding(s, cand));
}

TEST_CASE("class spread beyond tol_eq fails both verifiers") {
    FiniteMetricSpace k3 = make_space(complete_graph(3));
    double tol_eq = 1e-3;
    // Isoceles image: one side of length 1, two of length 1 + 10*tol_eq.
    double l = 1 + 10 * tol_eq;
    std::vector<double> coords = {0, 0, 1, 0, 0.5, std::sqrt(l * l - 0.25)};
    EmbeddingCandidate cand{3, 2, coords, tol_eq, 10.0 * tol_eq};
    CHECK_FALSE(verify_weak_le(k3, cand));
    CHECK_FALSE(verify_loose_embedding(k3, cand));
}

TEST_CASE("verifier rejects malformed candidates") {
    FiniteMetricSpace k3 = make_space(complete_graph(3));
    EmbeddingCandidate wrong_n{2, 2, {0, 0, 1, 0}, 1e-9, 1e-6};
    CHECK_THROWS_AS(verify_loose_embedding(k3, wrong_n), DimensionMismatch);
    EmbeddingCandidate wrong_buf{3, 2, {0, 0, 1, 0}, 1e-9, 1e-6};
    CHECK_THROWS_AS(verify_loose_embedding(k3, wrong_buf), DimensionMismatch);
    EmbeddingCandidate bad_tol{3, 2, {0, 0, 1, 0, 0.5, 1}, 1e-6, 1e-9};
    CHECK_THROWS_AS(verify_loose_embedding(k3, bad_tol), Error);
}

TEST_CASE("penalty and verdicts are invariant under rigid motion") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        FiniteMetricSpace s = small_space(seed, 5);
        DistanceClassification cls = classify_distances(s);
        Rng rng(seed * 7 + 1);
        std::vector<double> x = random_coords(rng, 5, 3, 1.5);

        // Random rotation via Gram-Schmidt on a Gaussian matrix.
        double q[3][3];
        for (auto& row : q)
            for (double& v : row) v = rng.gaussian();
        for (int c = 0; c < 3; ++c) {
            for (int p = 0; p < c; ++p) {
                double dot = 0;
                for (int r = 0; r < 3; ++r) dot += q[r][c] * q[r][p];
                for (int r = 0; r < 3; ++r) q[r][c] -= dot * q[r][p];
            }
            double norm = 0;
            for (int r = 0; r < 3; ++r) norm += q[r][c] * q[r][c];
            norm = std::sqrt(norm);
            for (int r = 0; r < 3; ++r) q[r][c] /= norm;
        }
        double shift[3] = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
        std::vector<double> y(x.size());
        for (int i = 0; i < 5; ++i)
            for (int r = 0; r < 3; ++r) {
                double acc = shift[r];
                for (int c = 0; c < 3; ++c) acc += q[r][c] * x[i * 3 + c];
                y[i * 3 + r] = acc;
            }

        double pa = penalty(x, cls, 0.3), pb = penalty(y, cls, 0.3);
        CHECK(pa == doctest::Approx(pb).epsilon(1e-9));
        EmbeddingCandidate ca = with_defaults(5, 3, x);
        EmbeddingCandidate cb = with_defaults(5, 3, y);
        CHECK(verify_loose_embedding(s, ca) == verify_loose_embedding(s, cb));
        CHECK(verify_weak_le(s, ca) == verify_weak_le(s, cb));
    }
}

TEST_CASE("zero penalty implies verification at margin-based tolerances") {
    for (int d = 2; d <= 3; ++d) {
        auto [space, coords] = hypercube(d, 0.25);
        DistanceClassification cls = classify_distances(space);
        double delta = 0.25 * 0.25 / 2.0;
        REQUIRE(penalty(coords, cls, delta) == 0.0);
        EmbeddingCandidate cand{space.size(), d, coords, delta / 4.0, delta / 2.0};
        CHECK(verify_loose_embedding(space, cand));
        CHECK(verify_weak_le(space, cand));
    }
}

TEST_CASE("solve embeds what can be embedded") {
    SolverConfig config;
    config.rng_seed = 42;

    SUBCASE("equilateral triangle in the plane") {
        SolveOutcome out = solve(make_space(complete_graph(3)), 2, config);
        REQUIRE(out.verdict == Verdict::Embedded);
        REQUIRE(out.candidate.has_value());
        CHECK(out.candidate->n == 3);
        CHECK(out.candidate->dim == 2);
        CHECK(verify_loose_embedding(make_space(complete_graph(3)), *out.candidate));
    }
    SUBCASE("square metric in the plane") {
        std::vector<std::vector<double>> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        FiniteMetricSpace s = make_space(euclidean_matrix(pts));
        SolveOutcome out = solve(s, 2, config);
        REQUIRE(out.verdict == Verdict::Embedded);
        CHECK(verify_loose_embedding(s, *out.candidate));
    }
    SUBCASE("full simplex needs its full dimension") {
        FiniteMetricSpace k5 = make_space(complete_graph(5));
        SolveOutcome low = solve(k5, 3, config);
        REQUIRE(low.verdict == Verdict::Obstructed);
        REQUIRE(low.obstruction.has_value());
        CHECK(low.obstruction->dim_lower_bound == 4);
        CHECK(low.obstruction->best_simplex.vertices.size() == 5);

        SolveOutcome high = solve(k5, 4, config);
        REQUIRE(high.verdict == Verdict::Embedded);
        CHECK(verify_loose_embedding(k5, *high.candidate));
    }
    SUBCASE("single point embeds anywhere") {
        FiniteMetricSpace one({"a"}, {0.0}, std::nullopt);
        CHECK(solve(one, 3, config).verdict == Verdict::Embedded);
    }
    SUBCASE("invalid ambient dimension") {
        CHECK_THROWS_AS(solve(make_space(complete_graph(3)), 0, config), InvalidDimension);
    }
}

TEST_CASE("starved solver reports an honest inconclusive") {
    SolverConfig config;
    config.restarts = 1;
    config.max_iterations = 0;
    config.rng_seed = 9;
    SolveOutcome out = solve(make_space(complete_graph(5)), 4, config);
    CHECK(out.verdict == Verdict::Inconclusive);
    CHECK(out.diagnostics.restarts_used == 1);
    CHECK(out.diagnostics.best_penalty > 0.0);
    CHECK(out.diagnostics.seed == 9);
    CHECK_FALSE(out.candidate.has_value());
}

TEST_CASE("solve is deterministic and thread count does not matter") {
    FiniteMetricSpace s = small_space(11, 5);
    SolverConfig config;
    config.rng_seed = 1234;
    config.restarts = 6;
    SolveOutcome a = solve(s, 3, config);
    SolveOutcome b = solve(s, 3, config);
    SolverConfig threaded = config;
    threaded.threads = 4;
    SolveOutcome c = solve(s, 3, threaded);

    CHECK(a.verdict == b.verdict);
    CHECK(a.verdict == c.verdict);
    CHECK(a.diagnostics.restarts_used == b.diagnostics.restarts_used);
    CHECK(a.diagnostics.restarts_used == c.diagnostics.restarts_used);
    CHECK(a.diagnostics.best_penalty == b.diagnostics.best_penalty);
    CHECK(a.diagnostics.best_penalty == c.diagnostics.best_penalty);
    if (a.candidate) {
        REQUIRE(b.candidate.has_value());
        REQUIRE(c.candidate.has_value());
        CHECK(a.candidate->coords == b.candidate->coords);
        CHECK(a.candidate->coords == c.candidate->coords);
    }
}

TEST_CASE("embedded outcomes never undercut the dimension bound") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        FiniteMetricSpace s = small_space(seed + 40, 5);
        DistanceClassification cls = classify_distances(s);
        int bound = analyze_obstructions(cls).dim_lower_bound;
        for (int N = 1; N <= 4; ++N) {
            SolverConfig config;
            config.rng_seed = seed;
            config.restarts = 4;
            config.max_iterations = 800;
            SolveOutcome out = solve(s, N, config);
            if (out.verdict == Verdict::Embedded) {
                CHECK(N >= bound);
                CHECK(verify_weak_le(s, *out.candidate));
            }
            if (out.verdict == Verdict::Obstructed) CHECK(bound > N);
        }
    }
}
