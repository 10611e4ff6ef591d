#include "loem/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include "loem/errors.hpp"
#include "loem/rng.hpp"

namespace loem {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;
constexpr double kStepFloor = 1e-13;

double wrap_canonical(double x, double period) {
    double y = std::fmod(x, period);
    if (y < 0) y += period;
    return y;
}

double wrap_signed(double x, double period) {
    double y = std::fmod(x, period);
    if (y <= -period / 2) y += period;
    if (y > period / 2) y -= period;
    return y;
}

int chart_vars(const ManifoldModel& model) {
    if (std::holds_alternative<Circle>(model)) return 1;
    if (std::holds_alternative<Sphere>(model)) return 2;
    if (std::holds_alternative<FlatTorus>(model)) return 2;
    throw UnsupportedModel("search runs only on closed-form models");
}

ManifoldPoint point_from_vars(const ManifoldModel& model, const double* v) {
    if (std::holds_alternative<Circle>(model)) return CirclePoint{wrap_canonical(v[0], kTau)};
    if (const auto* s = std::get_if<Sphere>(&model)) {
        double polar = v[0], azimuth = v[1];
        return SpherePoint{{s->radius * std::sin(polar) * std::cos(azimuth),
                            s->radius * std::sin(polar) * std::sin(azimuth),
                            s->radius * std::cos(polar)}};
    }
    const auto& t = std::get<FlatTorus>(model);
    return TorusPoint{wrap_canonical(v[0], t.period_u), wrap_canonical(v[1], t.period_v)};
}

void draw_vars(const ManifoldModel& model, Rng& rng, double* v) {
    if (std::holds_alternative<Circle>(model)) {
        v[0] = rng.uniform(0.0, kTau);
    } else if (std::holds_alternative<Sphere>(model)) {
        v[0] = std::acos(1.0 - 2.0 * rng.uniform());
        v[1] = rng.uniform(0.0, kTau);
    } else {
        const auto& t = std::get<FlatTorus>(model);
        v[0] = rng.uniform(0.0, t.period_u);
        v[1] = rng.uniform(0.0, t.period_v);
    }
}

double search_step0(const ManifoldModel& model) {
    // Chart units: angles for the circle and sphere, lengths for the torus.
    if (std::holds_alternative<FlatTorus>(model)) return 0.5 * model_diameter(model);
    return 0.5 * std::numbers::pi;
}

}  // namespace

StructureSearchResult best_structure(const ManifoldModel& model, StructureKind kind, int size,
                                     const StructureSearchConfig& config) {
    const int vpp = chart_vars(model);
    if (kind == StructureKind::Simplex && size < 2)
        throw Error("simplex search needs at least two points");
    if (kind == StructureKind::Flag && size < 1) throw Error("flag search needs at least one pair");
    if (config.restarts < 1) throw Error("restarts must be at least 1");
    const int n_points = kind == StructureKind::Simplex ? size : 2 * size;
    const int n_vars = n_points * vpp;

    StructureSearchResult result;
    result.quality = std::numeric_limits<double>::infinity();

    auto evaluate = [&](const std::vector<double>& vars) -> double {
        ++result.evaluations;
        std::vector<ManifoldPoint> pts;
        pts.reserve(n_points);
        for (int p = 0; p < n_points; ++p) pts.push_back(point_from_vars(model, &vars[p * vpp]));
        try {
            if (kind == StructureKind::Simplex) return simplex_quality(model, pts);
            std::vector<std::pair<ManifoldPoint, ManifoldPoint>> pairs;
            for (int i = 0; i < size; ++i) pairs.push_back({pts[2 * i], pts[2 * i + 1]});
            return flag_quality(model, pairs);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    for (int r = 0; r < config.restarts && result.evaluations < config.eval_budget; ++r) {
        Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(r));
        std::vector<double> vars(n_vars);
        for (int p = 0; p < n_points; ++p) draw_vars(model, rng, &vars[p * vpp]);
        double quality = evaluate(vars);
        ++result.restarts_completed;

        double step = search_step0(model);
        while (step > kStepFloor && result.evaluations < config.eval_budget) {
            bool improved = false;
            for (int i = 0; i < n_vars && result.evaluations < config.eval_budget; ++i)
                for (double sign : {1.0, -1.0}) {
                    double saved = vars[i];
                    vars[i] = saved + sign * step;
                    double trial = evaluate(vars);
                    if (trial < quality) {
                        quality = trial;
                        improved = true;
                        break;  // keep the move, re-poll this coordinate later
                    }
                    vars[i] = saved;
                }
            if (!improved) step *= 0.5;
        }

        if (quality < result.quality) {
            result.quality = quality;
            result.points.clear();
            for (int p = 0; p < n_points; ++p)
                result.points.push_back(point_from_vars(model, &vars[p * vpp]));
        }
    }
    return result;
}

MonotoneRun monotone_run(const ManifoldModel& model, const ManifoldPoint& p0,
                         const ManifoldPoint& q0, const ManifoldPoint& p1, const ManifoldPoint& q1,
                         int m) {
    if (m < 2) throw Error("need at least two evaluation points");
    if (geodesic_distance(model, p0, q0) == 0.0 || geodesic_distance(model, p1, q1) == 0.0)
        throw DegeneratePair("chord endpoints coincide");
    const double total = geodesic_distance(model, p1, q1);
    MonotoneRun run;
    run.strictly_monotone = true;
    run.min_increment = std::numeric_limits<double>::infinity();
    double previous = 0.0;
    for (int i = 0; i < m; ++i) {
        double t = total * static_cast<double>(i) / (m - 1);
        ManifoldPoint x = geodesic_trace(model, p1, q1, t);
        double residual = median_residual(model, x, p0, q0);
        if (i > 0) {
            double inc = residual - previous;
            run.min_increment = std::min(run.min_increment, inc);
            if (!(inc > 0.0)) run.strictly_monotone = false;
        }
        previous = residual;
    }
    return run;
}

namespace {

struct Chord {
    double v[3];
    int dim;
    double norm() const {
        double s = 0;
        for (int i = 0; i < dim; ++i) s += v[i] * v[i];
        return std::sqrt(s);
    }
};

double chord_angle(const Chord& a, const Chord& b) {
    double dot = 0;
    for (int i = 0; i < a.dim; ++i) dot += a.v[i] * b.v[i];
    double c = dot / (a.norm() * b.norm());
    return std::acos(std::clamp(c, -1.0, 1.0));
}

Chord chord_between(const ManifoldModel& model, const ManifoldPoint& p, const ManifoldPoint& q) {
    if (const auto* c = std::get_if<Circle>(&model)) {
        double d = wrap_signed(std::get<CirclePoint>(q).theta - std::get<CirclePoint>(p).theta,
                               kTau);
        return {{c->radius * d, 0, 0}, 1};
    }
    if (std::holds_alternative<Sphere>(model)) {
        const auto& a = std::get<SpherePoint>(p).x;
        const auto& b = std::get<SpherePoint>(q).x;
        return {{b[0] - a[0], b[1] - a[1], b[2] - a[2]}, 3};
    }
    const auto& t = std::get<FlatTorus>(model);
    const auto& a = std::get<TorusPoint>(p);
    const auto& b = std::get<TorusPoint>(q);
    return {{wrap_signed(b.u - a.u, t.period_u), wrap_signed(b.v - a.v, t.period_v), 0}, 2};
}

ManifoldPoint ball_point(const ManifoldModel& model, const ManifoldPoint& center, double radius,
                         Rng& rng) {
    if (const auto* c = std::get_if<Circle>(&model)) {
        double offset = radius * (2.0 * rng.uniform() - 1.0);
        return CirclePoint{wrap_canonical(std::get<CirclePoint>(center).theta + offset / c->radius,
                                          kTau)};
    }
    if (const auto* s = std::get_if<Sphere>(&model)) {
        const auto& cx = std::get<SpherePoint>(center).x;
        std::array<double, 3> u{cx[0] / s->radius, cx[1] / s->radius, cx[2] / s->radius};
        int low = std::abs(u[0]) <= std::abs(u[1])
                      ? (std::abs(u[0]) <= std::abs(u[2]) ? 0 : 2)
                      : (std::abs(u[1]) <= std::abs(u[2]) ? 1 : 2);
        std::array<double, 3> axis{};
        axis[low] = 1.0;
        std::array<double, 3> e1{axis[1] * u[2] - axis[2] * u[1], axis[2] * u[0] - axis[0] * u[2],
                                 axis[0] * u[1] - axis[1] * u[0]};
        double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
        for (double& c : e1) c /= n1;
        std::array<double, 3> e2{u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2],
                                 u[0] * e1[1] - u[1] * e1[0]};
        double phi = rng.uniform(0.0, kTau);
        double dist = radius * std::sqrt(rng.uniform());
        double ca = std::cos(dist / s->radius), sa = std::sin(dist / s->radius);
        SpherePoint out;
        for (int i = 0; i < 3; ++i)
            out.x[i] = s->radius * (ca * u[i] + sa * (std::cos(phi) * e1[i] + std::sin(phi) * e2[i]));
        return out;
    }
    const auto& t = std::get<FlatTorus>(model);
    const auto& c = std::get<TorusPoint>(center);
    double phi = rng.uniform(0.0, kTau);
    double dist = radius * std::sqrt(rng.uniform());
    return TorusPoint{wrap_canonical(c.u + dist * std::cos(phi), t.period_u),
                      wrap_canonical(c.v + dist * std::sin(phi), t.period_v)};
}

ManifoldPoint chart_translate(const ManifoldModel& model, const ManifoldPoint& p, const Chord& d) {
    if (const auto* c = std::get_if<Circle>(&model))
        return CirclePoint{wrap_canonical(std::get<CirclePoint>(p).theta + d.v[0] / c->radius,
                                          kTau)};
    const auto& t = std::get<FlatTorus>(model);
    const auto& a = std::get<TorusPoint>(p);
    return TorusPoint{wrap_canonical(a.u + d.v[0], t.period_u),
                      wrap_canonical(a.v + d.v[1], t.period_v)};
}

double unique_regime_cap(const ManifoldModel& model) {
    if (const auto* t = std::get_if<FlatTorus>(&model))
        return std::min(t->period_u, t->period_v) / 4;
    return model_diameter(model) / 4;
}

}  // namespace

MonotonicityReport monotonicity_experiment(const ManifoldModel& model, double radius,
                                           double angle_bound, int samples, int m,
                                           std::uint64_t seed) {
    if (std::holds_alternative<TriangleMesh>(model))
        throw UnsupportedModel("the experiment needs closed-form geodesics");
    if (!(radius > 0)) throw Error("ball radius must be positive");
    if (radius > unique_regime_cap(model))
        throw Error("ball radius outside the unique-geodesic regime");
    if (angle_bound < 0) throw Error("angle bound must be nonnegative");
    if (angle_bound == 0 && std::holds_alternative<Sphere>(model))
        throw Error("exactly parallel chords need a flat model");
    if (samples < 1) throw Error("need at least one configuration");

    MonotonicityReport report;
    report.samples = samples;
    report.m = m;
    report.seed = seed;
    report.min_increment = std::numeric_limits<double>::infinity();

    int monotone = 0;
    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(s));
        ManifoldPoint center = [&]() -> ManifoldPoint {
            if (const auto* c = std::get_if<Circle>(&model)) {
                (void)c;
                return CirclePoint{rng.uniform(0.0, kTau)};
            }
            if (const auto* sp = std::get_if<Sphere>(&model)) {
                double polar = std::acos(1.0 - 2.0 * rng.uniform());
                double az = rng.uniform(0.0, kTau);
                return SpherePoint{{sp->radius * std::sin(polar) * std::cos(az),
                                    sp->radius * std::sin(polar) * std::sin(az),
                                    sp->radius * std::cos(polar)}};
            }
            const auto& t = std::get<FlatTorus>(model);
            return TorusPoint{rng.uniform(0.0, t.period_u), rng.uniform(0.0, t.period_v)};
        }();

        ManifoldPoint p0 = center, q0 = center, p1 = center, q1 = center;
        const double min_chord = 0.05 * radius;
        bool found = false;
        for (int attempt = 0; attempt < 10000 && !found; ++attempt) {
            p0 = ball_point(model, center, radius, rng);
            q0 = ball_point(model, center, radius, rng);
            p1 = ball_point(model, center, radius, rng);
            Chord c0 = chord_between(model, p0, q0);
            if (c0.norm() < min_chord) continue;
            if (angle_bound == 0) {
                q1 = chart_translate(model, p1, c0);
                if (geodesic_distance(model, center, q1) > radius) continue;
                found = true;
            } else {
                q1 = ball_point(model, center, radius, rng);
                Chord c1 = chord_between(model, p1, q1);
                if (c1.norm() < min_chord) continue;
                if (chord_angle(c0, c1) <= angle_bound) found = true;
            }
        }
        if (!found) throw Error("could not draw a configuration under the angle bound");

        MonotoneRun run = monotone_run(model, p0, q0, p1, q1, m);
        if (run.strictly_monotone) ++monotone;
        report.min_increment = std::min(report.min_increment, run.min_increment);
    }
    report.monotone_fraction = static_cast<double>(monotone) / samples;
    return report;
}

std::vector<double> normalize_to_unit_ball(const std::vector<double>& coords, int n, int dim) {
    if (n < 2) throw CoincidentPoints("need at least two distinct points");
    if (dim < 1) throw InvalidDimension("dimension must be at least 1");
    if (coords.size() != static_cast<std::size_t>(n) * dim)
        throw DimensionMismatch("coordinate buffer does not match n x dim");

    // Strict improvement keeps the lexicographically smallest realizing pair.
    double best = -1.0;
    int bi = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0;
            for (int d = 0; d < dim; ++d) {
                double diff = coords[i * dim + d] - coords[j * dim + d];
                s += diff * diff;
            }
            if (s > best) {
                best = s;
                bi = i;
            }
        }
    double diameter = std::sqrt(best);
    if (diameter == 0.0) throw CoincidentPoints("all points coincide");

    std::vector<double> out(coords.size());
    for (int i = 0; i < n; ++i)
        for (int d = 0; d < dim; ++d)
            out[i * dim + d] = (coords[i * dim + d] - coords[bi * dim + d]) / diameter;
    return out;
}

RigidAlignment align_points(const std::vector<double>& source, const std::vector<double>& target,
                            int n, int dim) {
    if (n < 1 || dim < 1) throw Error("alignment needs points and a dimension");
    if (source.size() != static_cast<std::size_t>(n) * dim || target.size() != source.size())
        throw DimensionMismatch("alignment buffers do not match n x dim");
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::Map<const RowMat> s(source.data(), n, dim);
    Eigen::Map<const RowMat> t(target.data(), n, dim);
    Eigen::RowVectorXd cs = s.colwise().mean();
    Eigen::RowVectorXd ct = t.colwise().mean();
    Eigen::MatrixXd h = (s.rowwise() - cs).transpose() * (t.rowwise() - ct);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd rot = svd.matrixV() * svd.matrixU().transpose();
    Eigen::VectorXd shift = ct.transpose() - rot * cs.transpose();

    RigidAlignment out;
    out.rotation.resize(static_cast<std::size_t>(dim) * dim);
    out.translation.resize(dim);
    for (int i = 0; i < dim; ++i) {
        out.translation[i] = shift(i);
        for (int j = 0; j < dim; ++j) out.rotation[i * dim + j] = rot(i, j);
    }
    return out;
}

std::vector<double> apply_alignment(const RigidAlignment& motion, const std::vector<double>& coords,
                                    int n, int dim) {
    if (coords.size() != static_cast<std::size_t>(n) * dim ||
        motion.rotation.size() != static_cast<std::size_t>(dim) * dim ||
        motion.translation.size() != static_cast<std::size_t>(dim))
        throw DimensionMismatch("alignment buffers do not match n x dim");
    std::vector<double> out(coords.size());
    for (int p = 0; p < n; ++p)
        for (int i = 0; i < dim; ++i) {
            double acc = motion.translation[i];
            for (int j = 0; j < dim; ++j) acc += motion.rotation[i * dim + j] * coords[p * dim + j];
            out[p * dim + i] = acc;
        }
    return out;
}

NetLimitReport net_limit_experiment(const ManifoldModel& model, const std::vector<int>& chain,
                                    int dim, const SolverConfig& config,
                                    std::uint64_t sample_seed,
                                    const std::vector<ManifoldPoint>& initial_points) {
    if (chain.empty()) throw Error("chain must name at least one stage");
    for (std::size_t k = 0; k < chain.size(); ++k) {
        if (chain[k] < 2) throw Error("every stage needs at least two points");
        if (k > 0 && chain[k] <= chain[k - 1]) throw Error("chain sizes must strictly increase");
    }
    if (static_cast<int>(initial_points.size()) > chain.back())
        throw Error("more fixed points than the largest stage");

    std::vector<ManifoldPoint> points =
        extend_sample(model, initial_points, chain.back(), sample_seed);
    FiniteMetricSpace full = space_from_points(model, points);

    NetLimitReport report;
    report.sample_seed = sample_seed;

    std::vector<double> prev_aligned;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        NetLimitStage stage;
        stage.size = chain[k];
        std::vector<int> subset(chain[k]);
        for (int i = 0; i < chain[k]; ++i) subset[i] = i;
        FiniteMetricSpace space = restrict_space(full, subset);

        SolveOutcome outcome = solve(space, dim, config);
        stage.verdict = outcome.verdict;
        stage.diagnostics = outcome.diagnostics;
        stage.obstruction = outcome.obstruction;
        if (outcome.verdict != Verdict::Embedded) {
            report.failed_stage = static_cast<int>(k);
            report.stages.push_back(std::move(stage));
            break;
        }

        std::vector<double> norm =
            normalize_to_unit_ball(outcome.candidate->coords, chain[k], dim);
        auto point_norm = [&](int p) {
            double s = 0;
            for (int d = 0; d < dim; ++d) s += norm[p * dim + d] * norm[p * dim + d];
            return std::sqrt(s);
        };
        stage.origin_gap = std::numeric_limits<double>::infinity();
        stage.sphere_gap = std::numeric_limits<double>::infinity();
        for (int p = 0; p < chain[k]; ++p) {
            double len = point_norm(p);
            stage.origin_gap = std::min(stage.origin_gap, len);
            stage.sphere_gap = std::min(stage.sphere_gap, std::abs(len - 1.0));
        }
        stage.normalized_diameter = 0.0;
        for (int i = 0; i < chain[k]; ++i)
            for (int j = i + 1; j < chain[k]; ++j) {
                double s = 0;
                for (int d = 0; d < dim; ++d) {
                    double diff = norm[i * dim + d] - norm[j * dim + d];
                    s += diff * diff;
                }
                stage.normalized_diameter = std::max(stage.normalized_diameter, std::sqrt(s));
            }

        if (k == 0) {
            stage.aligned_coords = std::move(norm);
        } else {
            int shared = chain[k - 1];
            std::vector<double> src(norm.begin(), norm.begin() + shared * dim);
            std::vector<double> tgt(prev_aligned.begin(), prev_aligned.begin() + shared * dim);
            RigidAlignment motion = align_points(src, tgt, shared, dim);
            stage.aligned_coords = apply_alignment(motion, norm, chain[k], dim);
            stage.drift.resize(shared);
            for (int p = 0; p < shared; ++p) {
                double s = 0;
                for (int d = 0; d < dim; ++d) {
                    double diff = stage.aligned_coords[p * dim + d] - prev_aligned[p * dim + d];
                    s += diff * diff;
                }
                stage.drift[p] = std::sqrt(s);
            }
        }
        prev_aligned = stage.aligned_coords;
        report.stages.push_back(std::move(stage));
    }

    if (!report.failed_stage) {
        const NetLimitStage& last = report.stages.back();
        EmbeddingCandidate cand;
        cand.n = last.size;
        cand.dim = dim;
        cand.coords = last.aligned_coords;
        cand.tol_eq = 1e-9 * last.normalized_diameter;
        cand.tol_sep = 1e-6 * last.normalized_diameter;
        report.final_weak_le = verify_weak_le(full, cand, config.tol_class);
    }
    return report;
}

}  // namespace loem
