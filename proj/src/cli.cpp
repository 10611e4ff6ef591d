#include "loem/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>

#include "loem/errors.hpp"
#include "loem/io.hpp"

namespace loem {

namespace {

class WallClock {
  public:
    explicit WallClock(std::ostream& err) : err_(err), start_(std::chrono::steady_clock::now()) {}
    ~WallClock() {
        auto elapsed = std::chrono::steady_clock::now() - start_;
        err_ << "wall-time-ms "
             << std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() << "\n";
    }

  private:
    std::ostream& err_;
    std::chrono::steady_clock::time_point start_;
};

const char* kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Asymmetry: return "asymmetry";
        case ViolationKind::NegativeDistance: return "negative-distance";
        case ViolationKind::NonzeroDiagonal: return "nonzero-diagonal";
        case ViolationKind::IndistinctPoints: return "indistinct-points";
        case ViolationKind::Triangle: return "triangle";
    }
    return "unknown";
}

const char* verdict_name(Verdict verdict) {
    switch (verdict) {
        case Verdict::Embedded: return "Embedded";
        case Verdict::Obstructed: return "Obstructed";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "unknown";
}

int verdict_exit(Verdict verdict) {
    switch (verdict) {
        case Verdict::Embedded: return kExitOk;
        case Verdict::Obstructed: return kExitObstructed;
        case Verdict::Inconclusive: return kExitInconclusive;
    }
    return kExitUsage;
}

// Exit 2 for a document that parses but fails the metric axioms; exit 1 for
// everything the user must fix before a verdict is even possible.
// The path "-" reads the document from standard input.
FiniteMetricSpace load_space(const std::string& path, double tol_metric) {
    RawMatrix raw = path == "-" ? parse_space_document(std::cin) : read_space_document(path);
    return make_space(raw, tol_metric);
}

bool is_validation_error(const Error& e) {
    return dynamic_cast<const AsymmetryError*>(&e) != nullptr ||
           dynamic_cast<const NegativeDistanceError*>(&e) != nullptr ||
           dynamic_cast<const NonzeroDiagonalError*>(&e) != nullptr ||
           dynamic_cast<const IndistinctPointsError*>(&e) != nullptr ||
           dynamic_cast<const TriangleViolation*>(&e) != nullptr;
}

void print_certificates(std::ostream& out, const ObstructionReport& report) {
    out << "simplex-size " << report.best_simplex.vertices.size() << "\n";
    out << "simplex-vertices";
    for (int v : report.best_simplex.vertices) out << " " << v;
    out << "\n";
    out << "simplex-class " << report.best_simplex.class_id << "\n";
    out << "flag-length " << report.best_flag.length() << "\n";
    out << "flag-pairs";
    for (const auto& [p, q] : report.best_flag.pairs) out << " " << p << "," << q;
    out << "\n";
    out << "dim-lower-bound " << report.dim_lower_bound << "\n";
    out << "budget-exhausted " << (report.budget_exhausted ? "true" : "false") << "\n";
}

void print_model(std::ostream& out, const ModelOptions& options, const char* prefix = "") {
    out << prefix << "model " << options.kind << "\n";
    if (options.kind == "circle" || options.kind == "sphere")
        out << prefix << "radius " << format_double(options.radius) << "\n";
    if (options.kind == "torus") {
        out << prefix << "period-u " << format_double(options.period_u) << "\n";
        out << prefix << "period-v " << format_double(options.period_v) << "\n";
    }
    if (options.kind == "mesh") out << prefix << "mesh " << options.mesh_path << "\n";
}

void print_points(std::ostream& out, const std::vector<ManifoldPoint>& points,
                  const char* prefix = "") {
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << prefix << "point p" << i;
        for (double c : chart_coords(points[i])) out << " " << format_double(c);
        out << "\n";
    }
}

void print_solver_params(std::ostream& out, const SolverConfig& config) {
    out << "restarts " << config.restarts << "\n";
    out << "max-iterations " << config.max_iterations << "\n";
    out << "seed " << config.rng_seed << "\n";
    out << "threads " << config.threads << "\n";
    out << "tol-class " << format_double(config.tol_class) << "\n";
    out << "tol-eq " << (config.tol_eq ? format_double(*config.tol_eq) : "auto") << "\n";
    out << "tol-sep " << (config.tol_sep ? format_double(*config.tol_sep) : "auto") << "\n";
    out << "flag-budget " << config.flag_budget << "\n";
    if (config.delta) out << "delta " << format_double(*config.delta) << "\n";
}

void print_embedding(std::ostream& out, const FiniteMetricSpace& space,
                     const EmbeddingCandidate& candidate) {
    out << "cand-tol-eq " << format_double(candidate.tol_eq) << "\n";
    out << "cand-tol-sep " << format_double(candidate.tol_sep) << "\n";
    for (int i = 0; i < candidate.n; ++i) {
        out << "point " << space.labels()[i];
        for (int d = 0; d < candidate.dim; ++d)
            out << " " << format_double(candidate.coords[i * candidate.dim + d]);
        out << "\n";
    }
}

}  // namespace

ManifoldModel make_model(const ModelOptions& options) {
    if (options.kind == "circle") {
        if (!(options.radius > 0)) throw Error("radius must be positive");
        return Circle{options.radius};
    }
    if (options.kind == "sphere") {
        if (!(options.radius > 0)) throw Error("radius must be positive");
        return Sphere{options.radius};
    }
    if (options.kind == "torus") {
        if (!(options.period_u > 0) || !(options.period_v > 0))
            throw Error("periods must be positive");
        return FlatTorus{options.period_u, options.period_v};
    }
    if (options.kind == "mesh") {
        if (options.mesh_path.empty()) throw Error("mesh model needs --mesh <file>");
        return read_mesh_obj_file(options.mesh_path);
    }
    throw Error("unknown model '" + options.kind + "'");
}

int cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err) {
    WallClock clock(err);
    try {
        RawMatrix raw = options.path == "-" ? parse_space_document(std::cin)
                                            : read_space_document(options.path);
        ValidationResult result = validate_metric(raw, options.tol_metric);
        out << "command validate\n";
        out << "input " << options.path << "\n";
        out << "tol-metric " << format_double(options.tol_metric) << "\n";
        out << "points " << raw.n << "\n";
        out << "exact " << (raw.exact ? "true" : "false") << "\n";
        if (result.ok()) {
            out << "verdict valid\n";
            return kExitOk;
        }
        out << "verdict invalid\n";
        for (const Violation& v : result.violations) {
            out << "violation " << kind_name(v.kind) << " " << v.i;
            if (v.kind != ViolationKind::NonzeroDiagonal) out << " " << v.j;
            if (v.kind == ViolationKind::Triangle) out << " " << v.k;
            out << "\n";
        }
        return kExitInvalid;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_obstruct(const ObstructOptions& options, std::ostream& out, std::ostream& err) {
    WallClock clock(err);
    try {
        FiniteMetricSpace space = load_space(options.path, options.tol_metric);
        DistanceClassification classes = classify_distances(space, options.tol_class);
        ObstructionReport report = analyze_obstructions(classes, options.budget);
        out << "command obstruct\n";
        out << "input " << options.path << "\n";
        out << "tol-class " << format_double(options.tol_class) << "\n";
        out << "budget " << options.budget << "\n";
        out << "points " << space.size() << "\n";
        out << "classes " << classes.num_classes() << "\n";
        print_certificates(out, report);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_validation_error(e) ? kExitInvalid : kExitUsage;
    }
}

int cmd_embed(const EmbedOptions& options, std::ostream& out, std::ostream& err) {
    WallClock clock(err);
    try {
        FiniteMetricSpace space = load_space(options.path, options.tol_metric);
        SolveOutcome outcome = solve(space, options.dim, options.solver);
        out << "command embed\n";
        out << "input " << options.path << "\n";
        out << "dim " << options.dim << "\n";
        print_solver_params(out, options.solver);
        out << "points " << space.size() << "\n";
        out << "verdict " << verdict_name(outcome.verdict) << "\n";
        out << "best-penalty " << format_double(outcome.diagnostics.best_penalty) << "\n";
        out << "restarts-used " << outcome.diagnostics.restarts_used << "\n";
        if (outcome.candidate) print_embedding(out, space, *outcome.candidate);
        if (outcome.obstruction) print_certificates(out, *outcome.obstruction);
        return verdict_exit(outcome.verdict);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_validation_error(e) ? kExitInvalid : kExitUsage;
    }
}

int cmd_manifold_sample(const SampleOptions& options, std::ostream& out, std::ostream& err) {
    WallClock clock(err);
    try {
        ManifoldModel model = make_model(options.model);
        SampleResult result = sample(model, options.n, options.seed);
        // Everything except the space document rides in comments so the
        // output feeds straight back into `validate` and `embed`.
        out << "# command manifold-sample\n";
        print_model(out, options.model, "# ");
        out << "# n " << options.n << "\n";
        out << "# seed " << options.seed << "\n";
        print_points(out, result.points, "# ");
        write_space_document(out, result.space);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_manifold_search(const SearchOptions& options, std::ostream& out, std::ostream& err) {
    WallClock clock(err);
    try {
        ManifoldModel model = make_model(options.model);
        StructureSearchResult result = best_structure(model, options.kind, options.size,
                                                      options.config);
        out << "command " << (options.kind == StructureKind::Simplex ? "search-simplex"
                                                                     : "search-flag")
            << "\n";
        print_model(out, options.model);
        out << (options.kind == StructureKind::Simplex ? "k " : "n ") << options.size << "\n";
        out << "restarts " << options.config.restarts << "\n";
        out << "seed " << options.config.seed << "\n";
        out << "budget " << options.config.eval_budget << "\n";
        out << "quality " << format_double(result.quality) << "\n";
        out << "evaluations " << result.evaluations << "\n";
        out << "restarts-completed " << result.restarts_completed << "\n";
        print_points(out, result.points);
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_manifold_monotonicity(const MonotonicityOptions& options, std::ostream& out,
                              std::ostream& err) {
    WallClock clock(err);
    try {
        ManifoldModel model = make_model(options.model);
        MonotonicityReport report = monotonicity_experiment(model, options.scale,
                                                            options.angle_bound, options.samples,
                                                            options.m, options.seed);
        out << "command monotonicity\n";
        print_model(out, options.model);
        out << "scale " << format_double(options.scale) << "\n";
        out << "angle-bound " << format_double(options.angle_bound) << "\n";
        out << "samples " << report.samples << "\n";
        out << "m " << report.m << "\n";
        out << "seed " << report.seed << "\n";
        out << "monotone-fraction " << format_double(report.monotone_fraction) << "\n";
        out << "min-increment " << format_double(report.min_increment) << "\n";
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_manifold_net_limit(const NetLimitOptions& options, std::ostream& out, std::ostream& err) {
    WallClock clock(err);
    try {
        ManifoldModel model = make_model(options.model);
        NetLimitReport report = net_limit_experiment(model, options.chain, options.dim,
                                                     options.solver, options.sample_seed);
        out << "command net-limit\n";
        print_model(out, options.model);
        out << "chain";
        for (int n : options.chain) out << " " << n;
        out << "\n";
        out << "dim " << options.dim << "\n";
        out << "sample-seed " << report.sample_seed << "\n";
        print_solver_params(out, options.solver);
        for (std::size_t k = 0; k < report.stages.size(); ++k) {
            const NetLimitStage& stage = report.stages[k];
            out << "stage " << k << " size " << stage.size << "\n";
            out << "stage " << k << " verdict " << verdict_name(stage.verdict) << "\n";
            out << "stage " << k << " best-penalty "
                << format_double(stage.diagnostics.best_penalty) << "\n";
            if (stage.verdict != Verdict::Embedded) continue;
            out << "stage " << k << " diameter " << format_double(stage.normalized_diameter)
                << "\n";
            out << "stage " << k << " origin-gap " << format_double(stage.origin_gap) << "\n";
            out << "stage " << k << " sphere-gap " << format_double(stage.sphere_gap) << "\n";
            for (std::size_t p = 0; p < stage.drift.size(); ++p)
                out << "stage " << k << " drift p" << p << " " << format_double(stage.drift[p])
                    << "\n";
        }
        if (report.failed_stage) {
            out << "failed-stage " << *report.failed_stage << "\n";
            const NetLimitStage& failed = report.stages.back();
            if (failed.obstruction) print_certificates(out, *failed.obstruction);
            return verdict_exit(failed.verdict);
        }
        out << "failed-stage none\n";
        out << "final-weak-le " << (report.final_weak_le ? "true" : "false") << "\n";
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace loem
