#include "loem/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <thread>

#include "loem/rng.hpp"

namespace loem {

namespace {

double hinge(double x) { return x > 0.0 ? x : 0.0; }

int coords_dim(const std::vector<double>& coords, int n) {
    if (n < 1 || coords.size() % static_cast<std::size_t>(n) != 0)
        throw DimensionMismatch("coordinate buffer does not split into n points");
    int dim = static_cast<int>(coords.size() / static_cast<std::size_t>(n));
    if (dim < 1) throw DimensionMismatch("points need at least one coordinate");
    return dim;
}

// Penalty and, when grad != nullptr, its analytic gradient. The per-pair
// derivative of the spread term is 2(s_ij - m_c) exactly: the mean's own
// dependence on s cancels because deviations from a mean sum to zero.
double eval_penalty(const std::vector<double>& x, const DistanceClassification& cls, double delta,
                    std::vector<double>* grad) {
    const int n = cls.point_count();
    const int dim = coords_dim(x, n);
    const int nc = cls.num_classes();

    std::vector<double> s(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (int d = 0; d < dim; ++d) {
                double diff = x[static_cast<std::size_t>(i) * dim + d] -
                              x[static_cast<std::size_t>(j) * dim + d];
                acc += diff * diff;
            }
            s[static_cast<std::size_t>(i) * n + j] = acc;
        }
    auto sq = [&](int i, int j) { return s[static_cast<std::size_t>(std::min(i, j)) * n + std::max(i, j)]; };

    std::vector<double> mean(nc, 0.0);
    for (int c = 0; c < nc; ++c) {
        for (const PairRef& pr : cls.pairs(c)) mean[c] += sq(pr.i, pr.j);
        mean[c] /= static_cast<double>(cls.pairs(c).size());
    }

    double energy = 0.0;
    // coef[i*n+j] accumulates dE/ds_ij.
    std::vector<double> coef;
    if (grad) coef.assign(static_cast<std::size_t>(n) * n, 0.0);

    for (int c = 0; c < nc; ++c)
        for (const PairRef& pr : cls.pairs(c)) {
            double dev = sq(pr.i, pr.j) - mean[c];
            energy += dev * dev;
            if (grad) coef[static_cast<std::size_t>(pr.i) * n + pr.j] += 2.0 * dev;
        }

    std::vector<double> mean_sens(nc, 0.0);
    if (nc >= 2) {
        std::vector<int> order(nc);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return mean[a] < mean[b]; });
        for (int k = 0; k + 1 < nc; ++k) {
            int lo = order[k], hi = order[k + 1];
            double h = hinge(delta - (mean[hi] - mean[lo]));
            if (h > 0.0) {
                energy += h * h;
                mean_sens[hi] -= 2.0 * h;
                mean_sens[lo] += 2.0 * h;
            }
        }
    }
    if (grad)
        for (int c = 0; c < nc; ++c) {
            if (mean_sens[c] == 0.0) continue;
            double per_pair = mean_sens[c] / static_cast<double>(cls.pairs(c).size());
            for (const PairRef& pr : cls.pairs(c))
                coef[static_cast<std::size_t>(pr.i) * n + pr.j] += per_pair;
        }

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double h = hinge(delta - sq(i, j));
            if (h > 0.0) {
                energy += h * h;
                if (grad) coef[static_cast<std::size_t>(i) * n + j] -= 2.0 * h;
            }
        }

    if (grad) {
        grad->assign(x.size(), 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double g = coef[static_cast<std::size_t>(i) * n + j];
                if (g == 0.0) continue;
                for (int d = 0; d < dim; ++d) {
                    double diff = x[static_cast<std::size_t>(i) * dim + d] -
                                  x[static_cast<std::size_t>(j) * dim + d];
                    (*grad)[static_cast<std::size_t>(i) * dim + d] += 2.0 * g * diff;
                    (*grad)[static_cast<std::size_t>(j) * dim + d] -= 2.0 * g * diff;
                }
            }
    }
    return energy;
}

std::vector<double> random_ball_start(Rng& rng, int n, int dim, double radius) {
    std::vector<double> x(static_cast<std::size_t>(n) * dim);
    for (int i = 0; i < n; ++i) {
        double norm2 = 0.0;
        std::vector<double> dir(dim);
        do {
            norm2 = 0.0;
            for (int d = 0; d < dim; ++d) {
                dir[d] = rng.gaussian();
                norm2 += dir[d] * dir[d];
            }
        } while (norm2 < 1e-24);
        double r = radius * std::pow(rng.uniform(), 1.0 / dim) / std::sqrt(norm2);
        for (int d = 0; d < dim; ++d) x[static_cast<std::size_t>(i) * dim + d] = dir[d] * r;
    }
    return x;
}

struct DescentResult {
    std::vector<double> x;
    double energy;
};

DescentResult descend(std::vector<double> x, const DistanceClassification& cls, double delta,
                      const SolverConfig& config) {
    std::vector<double> g;
    double energy = eval_penalty(x, cls, delta, &g);
    double step = 1.0;
    std::vector<double> trial(x.size());
    for (int it = 0; it < config.max_iterations; ++it) {
        double gnorm2 = 0.0;
        for (double v : g) gnorm2 += v * v;
        if (std::sqrt(gnorm2) < config.grad_tol) break;
        double t = step;
        bool accepted = false;
        double trial_energy = 0.0;
        for (int bt = 0; bt < 80; ++bt) {
            for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] - t * g[k];
            trial_energy = eval_penalty(trial, cls, delta, nullptr);
            if (trial_energy <= energy - config.armijo * t * gnorm2) {
                accepted = true;
                break;
            }
            t *= config.backtrack;
        }
        if (!accepted) break;
        x.swap(trial);
        energy = eval_penalty(x, cls, delta, &g);
        step = std::min(t / config.backtrack, 1e6);
    }
    return {std::move(x), energy};
}

double image_diameter(const std::vector<double>& x, int n, int dim) {
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (int d = 0; d < dim; ++d) {
                double diff = x[static_cast<std::size_t>(i) * dim + d] -
                              x[static_cast<std::size_t>(j) * dim + d];
                acc += diff * diff;
            }
            best = std::max(best, acc);
        }
    return std::sqrt(best);
}

std::vector<double> image_distances(const EmbeddingCandidate& c) {
    std::vector<double> d(static_cast<std::size_t>(c.n) * c.n, 0.0);
    for (int i = 0; i < c.n; ++i)
        for (int j = i + 1; j < c.n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < c.dim; ++k) {
                double diff = c.coords[static_cast<std::size_t>(i) * c.dim + k] -
                              c.coords[static_cast<std::size_t>(j) * c.dim + k];
                acc += diff * diff;
            }
            double v = std::sqrt(acc);
            d[static_cast<std::size_t>(i) * c.n + j] = v;
            d[static_cast<std::size_t>(j) * c.n + i] = v;
        }
    return d;
}

void check_candidate(const FiniteMetricSpace& space, const EmbeddingCandidate& c) {
    if (c.n != space.size()) throw DimensionMismatch("candidate point count differs from space");
    if (c.dim < 1 || c.coords.size() != static_cast<std::size_t>(c.n) * c.dim)
        throw DimensionMismatch("candidate coordinate buffer has the wrong size");
    if (!(c.tol_eq < c.tol_sep)) throw Error("tol_eq must stay below tol_sep");
}

}  // namespace

double default_delta(const DistanceClassification& classification) {
    if (classification.num_classes() < 2) return 1e-4;
    double gap = classification.min_gap();
    return 0.25 * gap * gap;
}

double penalty(const std::vector<double>& coords, const DistanceClassification& classification,
               double delta) {
    return eval_penalty(coords, classification, delta, nullptr);
}

std::vector<double> penalty_gradient(const std::vector<double>& coords,
                                     const DistanceClassification& classification, double delta) {
    std::vector<double> grad;
    eval_penalty(coords, classification, delta, &grad);
    return grad;
}

bool verify_loose_embedding(const FiniteMetricSpace& space, const EmbeddingCandidate& candidate,
                            double tol_class) {
    check_candidate(space, candidate);
    DistanceClassification cls = classify_distances(space, tol_class);
    std::vector<double> d = image_distances(candidate);
    auto at = [&](int i, int j) { return d[static_cast<std::size_t>(i) * candidate.n + j]; };

    std::vector<double> rep(cls.num_classes(), 0.0);
    for (int c = 0; c < cls.num_classes(); ++c) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
        for (const PairRef& pr : cls.pairs(c)) {
            double v = at(pr.i, pr.j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sum += v;
        }
        if (hi - lo >= candidate.tol_eq) return false;
        rep[c] = sum / static_cast<double>(cls.pairs(c).size());
    }

    std::sort(rep.begin(), rep.end());
    for (std::size_t c = 1; c < rep.size(); ++c)
        if (rep[c] - rep[c - 1] <= candidate.tol_sep) return false;

    for (int i = 0; i < candidate.n; ++i)
        for (int j = i + 1; j < candidate.n; ++j)
            if (at(i, j) <= candidate.tol_sep) return false;
    return true;
}

bool verify_weak_le(const FiniteMetricSpace& space, const EmbeddingCandidate& candidate,
                    double tol_class) {
    check_candidate(space, candidate);
    DistanceClassification cls = classify_distances(space, tol_class);
    std::vector<double> d = image_distances(candidate);
    auto at = [&](int i, int j) { return d[static_cast<std::size_t>(i) * candidate.n + j]; };

    for (int c = 0; c < cls.num_classes(); ++c) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const PairRef& pr : cls.pairs(c)) {
            double v = at(pr.i, pr.j);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo >= candidate.tol_eq) return false;
    }
    for (int i = 0; i < candidate.n; ++i)
        for (int j = i + 1; j < candidate.n; ++j)
            if (at(i, j) <= candidate.tol_sep) return false;
    return true;
}

SolveOutcome solve(const FiniteMetricSpace& space, int N, const SolverConfig& config) {
    if (N < 1) throw InvalidDimension("ambient dimension must be at least 1");
    if (config.restarts < 1) throw Error("restarts must be at least 1");

    SolveOutcome outcome;
    outcome.diagnostics.seed = config.rng_seed;

    const int n = space.size();
    if (n == 1) {
        outcome.verdict = Verdict::Embedded;
        outcome.candidate = EmbeddingCandidate{1, N, std::vector<double>(N, 0.0), 1e-12, 1e-9};
        outcome.diagnostics.best_penalty = 0.0;
        return outcome;
    }

    DistanceClassification cls = classify_distances(space, config.tol_class);
    ObstructionReport report = analyze_obstructions(cls, config.flag_budget);
    if (report.dim_lower_bound > N) {
        if (!verify_certificate(space, report.best_simplex, config.tol_class) ||
            !verify_certificate(space, report.best_flag, config.tol_class))
            throw Error("obstruction certificate failed its own verification");
        outcome.verdict = Verdict::Obstructed;
        outcome.obstruction = std::move(report);
        return outcome;
    }

    const double delta = config.delta.value_or(default_delta(cls));
    const double radius = cls.values().back();

    struct RestartResult {
        double penalty = std::numeric_limits<double>::infinity();
        std::optional<EmbeddingCandidate> verified;
    };

    auto run_restart = [&](int index) {
        Rng rng = Rng::substream(config.rng_seed, static_cast<std::uint64_t>(index));
        DescentResult res =
            descend(random_ball_start(rng, n, N, radius), cls, delta, config);
        RestartResult out;
        out.penalty = res.energy;
        double diam = image_diameter(res.x, n, N);
        if (diam > 0.0) {
            EmbeddingCandidate cand;
            cand.n = n;
            cand.dim = N;
            cand.coords = std::move(res.x);
            cand.tol_eq = config.tol_eq.value_or(1e-9 * diam);
            cand.tol_sep = config.tol_sep.value_or(1e-6 * diam);
            if (cand.tol_eq < cand.tol_sep && verify_loose_embedding(space, cand, config.tol_class))
                out.verified = std::move(cand);
        }
        return out;
    };

    const int threads = std::max(1, config.threads);
    std::vector<RestartResult> results(config.restarts);
    std::vector<char> done(config.restarts, 0);
    if (threads == 1) {
        for (int r = 0; r < config.restarts; ++r) {
            results[r] = run_restart(r);
            done[r] = 1;
            if (results[r].verified) break;
        }
    } else {
        std::atomic<int> next{0};
        std::atomic<int> earliest{config.restarts};
        auto worker = [&] {
            for (;;) {
                int r = next.fetch_add(1);
                if (r >= config.restarts) return;
                if (r > earliest.load()) continue;  // a lower index already verified
                results[r] = run_restart(r);
                done[r] = 1;
                if (results[r].verified) {
                    int cur = earliest.load();
                    while (r < cur && !earliest.compare_exchange_weak(cur, r)) {
                    }
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    // Merge in restart order so the outcome matches a sequential run.
    for (int r = 0; r < config.restarts; ++r) {
        if (!done[r]) break;
        outcome.diagnostics.restarts_used = r + 1;
        outcome.diagnostics.best_penalty =
            std::min(outcome.diagnostics.best_penalty, results[r].penalty);
        if (results[r].verified) {
            outcome.verdict = Verdict::Embedded;
            outcome.candidate = std::move(results[r].verified);
            return outcome;
        }
    }
    outcome.verdict = Verdict::Inconclusive;
    return outcome;
}

}  // namespace loem
