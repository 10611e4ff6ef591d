#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "loem/cli.hpp"
#include "loem/errors.hpp"
#include "loem/experiments.hpp"
#include "loem/io.hpp"
#include "loem/manifold.hpp"
#include "loem/metric.hpp"
#include "loem/obstruction.hpp"
#include "loem/solver.hpp"

namespace py = pybind11;
using namespace loem;

namespace {

const char* kind_name(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::Asymmetry: return "asymmetry";
        case ViolationKind::NegativeDistance: return "negative-distance";
        case ViolationKind::NonzeroDiagonal: return "nonzero-diagonal";
        case ViolationKind::IndistinctPoints: return "indistinct-points";
        case ViolationKind::Triangle: return "triangle";
    }
    return "?";
}

FiniteMetricSpace space_from_rows(const std::vector<std::vector<double>>& rows,
                                  std::vector<std::string> labels, double tol_metric) {
    return make_space(raw_from_rows(rows, std::move(labels)), tol_metric);
}

std::vector<Violation> violations_of(const std::vector<std::vector<double>>& rows,
                                     double tol_metric) {
    return validate_metric(raw_from_rows(rows), tol_metric).violations;
}

FiniteMetricSpace space_from_text(const std::string& text, double tol_metric) {
    std::istringstream in(text);
    return make_space(parse_space_document(in), tol_metric);
}

std::string space_to_text(const FiniteMetricSpace& space) {
    std::ostringstream out;
    write_space_document(out, space);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(loem, m) {
    m.doc() = "Loose embeddings of finite metric spaces: validation, obstructions, "
              "penalty solver, and model-manifold experiments.";

    py::register_exception<Error>(m, "Error");

    py::class_<Violation>(m, "Violation")
        .def_property_readonly("kind", [](const Violation& v) { return kind_name(v.kind); })
        .def_readonly("i", &Violation::i)
        .def_readonly("j", &Violation::j)
        .def_readonly("k", &Violation::k)
        .def_readonly("message", &Violation::message)
        .def("__repr__", [](const Violation& v) { return "<Violation " + v.message + ">"; });

    py::class_<FiniteMetricSpace>(m, "FiniteMetricSpace")
        .def_property_readonly("n", &FiniteMetricSpace::size)
        .def_property_readonly("exact", &FiniteMetricSpace::exact)
        .def_property_readonly("labels",
                               [](const FiniteMetricSpace& s) { return s.labels(); })
        .def_property_readonly("matrix",
                               [](const FiniteMetricSpace& s) { return s.matrix(); })
        .def("dist", &FiniteMetricSpace::dist, py::arg("i"), py::arg("j"))
        .def("diameter", &FiniteMetricSpace::diameter)
        .def("__len__", &FiniteMetricSpace::size)
        .def("__repr__", [](const FiniteMetricSpace& s) {
            return "<FiniteMetricSpace n=" + std::to_string(s.size()) +
                   (s.exact() ? " exact>" : ">");
        });

    m.def("make_space", &space_from_rows, py::arg("rows"),
          py::arg("labels") = std::vector<std::string>{}, py::arg("tol_metric") = 1e-9,
          "Build a validated metric space from a full square distance matrix.");
    m.def("validate", &violations_of, py::arg("rows"), py::arg("tol_metric") = 1e-9,
          "List the metric-axiom violations of a matrix; empty means valid.");
    m.def("space_from_text", &space_from_text, py::arg("text"), py::arg("tol_metric") = 1e-9,
          "Parse a space document (integer and p/q entries stay exact).");
    m.def("space_to_text", &space_to_text, py::arg("space"));
    m.def("restrict_space", &restrict_space, py::arg("space"), py::arg("subset"));
    m.def("format_double", &format_double, py::arg("value"),
          "Shortest round-trip decimal form, the one every report uses.");

    py::class_<DistanceClassification>(m, "DistanceClassification")
        .def_property_readonly("n", &DistanceClassification::point_count)
        .def_property_readonly("num_classes", &DistanceClassification::num_classes)
        .def_property_readonly("exact", &DistanceClassification::exact)
        .def("class_of", &DistanceClassification::class_of, py::arg("i"), py::arg("j"))
        .def("pairs",
             [](const DistanceClassification& c, int cls) {
                 std::vector<std::pair<int, int>> out;
                 for (const PairRef& p : c.pairs(cls)) out.emplace_back(p.i, p.j);
                 return out;
             },
             py::arg("cls"))
        .def("value", &DistanceClassification::value, py::arg("cls"))
        .def_property_readonly("values",
                               [](const DistanceClassification& c) { return c.values(); })
        .def("min_gap", &DistanceClassification::min_gap);

    m.def("classify_distances", &classify_distances, py::arg("space"),
          py::arg("tol_class") = 1e-9);

    py::class_<SimplexCertificate>(m, "SimplexCertificate")
        .def_readonly("vertices", &SimplexCertificate::vertices)
        .def_readonly("class_id", &SimplexCertificate::class_id);

    py::class_<FlagCertificate>(m, "FlagCertificate")
        .def_readonly("pairs", &FlagCertificate::pairs)
        .def_property_readonly("length", &FlagCertificate::length);

    py::class_<ObstructionReport>(m, "ObstructionReport")
        .def_readonly("best_simplex", &ObstructionReport::best_simplex)
        .def_readonly("best_flag", &ObstructionReport::best_flag)
        .def_readonly("dim_lower_bound", &ObstructionReport::dim_lower_bound)
        .def_readonly("budget_exhausted", &ObstructionReport::budget_exhausted);

    m.def("analyze_obstructions", &analyze_obstructions, py::arg("classification"),
          py::arg("node_budget") = kDefaultFlagBudget);
    m.def("verify_certificate",
          py::overload_cast<const FiniteMetricSpace&, const SimplexCertificate&, double>(
              &verify_certificate),
          py::arg("space"), py::arg("certificate"), py::arg("tol_class") = 1e-9);
    m.def("verify_certificate",
          py::overload_cast<const FiniteMetricSpace&, const FlagCertificate&, double>(
              &verify_certificate),
          py::arg("space"), py::arg("certificate"), py::arg("tol_class") = 1e-9);

    py::enum_<Verdict>(m, "Verdict")
        .value("Embedded", Verdict::Embedded)
        .value("Obstructed", Verdict::Obstructed)
        .value("Inconclusive", Verdict::Inconclusive);

    py::class_<EmbeddingCandidate>(m, "EmbeddingCandidate")
        .def(py::init([](int n, int dim, std::vector<double> coords, double tol_eq,
                         double tol_sep) {
                 return EmbeddingCandidate{n, dim, std::move(coords), tol_eq, tol_sep};
             }),
             py::arg("n"), py::arg("dim"), py::arg("coords"), py::arg("tol_eq"),
             py::arg("tol_sep"))
        .def_readwrite("n", &EmbeddingCandidate::n)
        .def_readwrite("dim", &EmbeddingCandidate::dim)
        .def_readwrite("coords", &EmbeddingCandidate::coords)
        .def_readwrite("tol_eq", &EmbeddingCandidate::tol_eq)
        .def_readwrite("tol_sep", &EmbeddingCandidate::tol_sep);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("restarts", &SolverConfig::restarts)
        .def_readwrite("max_iterations", &SolverConfig::max_iterations)
        .def_readwrite("armijo", &SolverConfig::armijo)
        .def_readwrite("backtrack", &SolverConfig::backtrack)
        .def_readwrite("grad_tol", &SolverConfig::grad_tol)
        .def_readwrite("delta", &SolverConfig::delta)
        .def_readwrite("rng_seed", &SolverConfig::rng_seed)
        .def_readwrite("tol_eq", &SolverConfig::tol_eq)
        .def_readwrite("tol_sep", &SolverConfig::tol_sep)
        .def_readwrite("tol_class", &SolverConfig::tol_class)
        .def_readwrite("flag_budget", &SolverConfig::flag_budget)
        .def_readwrite("threads", &SolverConfig::threads);

    py::class_<SolveDiagnostics>(m, "SolveDiagnostics")
        .def_readonly("best_penalty", &SolveDiagnostics::best_penalty)
        .def_readonly("restarts_used", &SolveDiagnostics::restarts_used)
        .def_readonly("seed", &SolveDiagnostics::seed);

    py::class_<SolveOutcome>(m, "SolveOutcome")
        .def_readonly("verdict", &SolveOutcome::verdict)
        .def_readonly("candidate", &SolveOutcome::candidate)
        .def_readonly("obstruction", &SolveOutcome::obstruction)
        .def_readonly("diagnostics", &SolveOutcome::diagnostics);

    m.def("solve", &solve, py::arg("space"), py::arg("dim"),
          py::arg("config") = SolverConfig{},
          "Decide loose embeddability into R^dim: Embedded, Obstructed, or Inconclusive.");
    m.def("penalty", &penalty, py::arg("coords"), py::arg("classification"), py::arg("delta"));
    m.def("penalty_gradient", &penalty_gradient, py::arg("coords"), py::arg("classification"),
          py::arg("delta"));
    m.def("default_delta", &default_delta, py::arg("classification"));
    m.def("verify_loose_embedding", &verify_loose_embedding, py::arg("space"),
          py::arg("candidate"), py::arg("tol_class") = 1e-9);
    m.def("verify_weak_le", &verify_weak_le, py::arg("space"), py::arg("candidate"),
          py::arg("tol_class") = 1e-9);

    py::class_<Circle>(m, "Circle")
        .def(py::init<double>(), py::arg("radius"))
        .def_readonly("radius", &Circle::radius);
    py::class_<Sphere>(m, "Sphere")
        .def(py::init<double>(), py::arg("radius"))
        .def_readonly("radius", &Sphere::radius);
    py::class_<FlatTorus>(m, "FlatTorus")
        .def(py::init<double, double>(), py::arg("period_u"), py::arg("period_v"))
        .def_readonly("period_u", &FlatTorus::period_u)
        .def_readonly("period_v", &FlatTorus::period_v);
    py::class_<TriangleMesh>(m, "TriangleMesh")
        .def(py::init<int, std::vector<std::array<int, 3>>,
                      std::vector<std::array<double, 3>>>(),
             py::arg("n_vertices"), py::arg("faces"), py::arg("face_lengths"))
        .def_static("from_positions", &TriangleMesh::from_positions, py::arg("positions"),
                    py::arg("faces"))
        .def_property_readonly("vertex_count", &TriangleMesh::vertex_count)
        .def_property_readonly("faces", [](const TriangleMesh& m_) { return m_.faces(); })
        .def_property_readonly("total_area", &TriangleMesh::total_area)
        .def_property_readonly("diameter", &TriangleMesh::diameter);

    m.def("read_mesh_obj_file", &read_mesh_obj_file, py::arg("path"));
    m.def("read_mesh_obj",
          [](const std::string& text) {
              std::istringstream in(text);
              return read_mesh_obj(in);
          },
          py::arg("text"));

    py::class_<CirclePoint>(m, "CirclePoint")
        .def(py::init<double>(), py::arg("theta"))
        .def_readonly("theta", &CirclePoint::theta);
    py::class_<SpherePoint>(m, "SpherePoint")
        .def(py::init([](double x, double y, double z) {
                 return SpherePoint{{x, y, z}};
             }),
             py::arg("x"), py::arg("y"), py::arg("z"))
        .def_property_readonly("x", [](const SpherePoint& p) { return p.x; });
    py::class_<TorusPoint>(m, "TorusPoint")
        .def(py::init<double, double>(), py::arg("u"), py::arg("v"))
        .def_readonly("u", &TorusPoint::u)
        .def_readonly("v", &TorusPoint::v);
    py::class_<MeshPoint>(m, "MeshPoint")
        .def(py::init([](int face, double b0, double b1, double b2) {
                 return MeshPoint{face, {b0, b1, b2}};
             }),
             py::arg("face"), py::arg("b0"), py::arg("b1"), py::arg("b2"))
        .def_readonly("face", &MeshPoint::face)
        .def_property_readonly("bary", [](const MeshPoint& p) { return p.bary; });

    m.def("model_diameter", &model_diameter, py::arg("model"));
    m.def("geodesic_distance", &geodesic_distance, py::arg("model"), py::arg("p"),
          py::arg("q"));
    m.def("squared_distance_eta", &squared_distance_eta, py::arg("model"), py::arg("p"),
          py::arg("q"));
    m.def("geodesic_trace", &geodesic_trace, py::arg("model"), py::arg("p"), py::arg("q"),
          py::arg("t"), "Point at arc length t along the unique shortest path from p to q.");
    m.def("squared_distance_gradient", &squared_distance_gradient, py::arg("model"),
          py::arg("z"), py::arg("p"), "Chart gradient of d(., p)^2 at z.");
    m.def("median_residual", &median_residual, py::arg("model"), py::arg("x"), py::arg("p0"),
          py::arg("q0"), "d(x,p0)^2 - d(x,q0)^2; zero set is the median hyperplane surrogate.");
    m.def("chart_coords", &chart_coords, py::arg("point"));

    py::class_<SampleResult>(m, "SampleResult")
        .def_readonly("points", &SampleResult::points)
        .def_readonly("space", &SampleResult::space);

    m.def("sample", &sample, py::arg("model"), py::arg("n"), py::arg("rng_seed"),
          "Uniform points on the model plus their geodesic distance matrix.");
    m.def("extend_sample", &extend_sample, py::arg("model"), py::arg("existing"),
          py::arg("total"), py::arg("rng_seed"));
    m.def("space_from_points", &space_from_points, py::arg("model"), py::arg("points"));
    m.def("simplex_quality", &simplex_quality, py::arg("model"), py::arg("points"));
    m.def("flag_quality", &flag_quality, py::arg("model"), py::arg("pairs"));

    py::enum_<StructureKind>(m, "StructureKind")
        .value("Simplex", StructureKind::Simplex)
        .value("Flag", StructureKind::Flag);

    py::class_<StructureSearchConfig>(m, "StructureSearchConfig")
        .def(py::init<>())
        .def_readwrite("restarts", &StructureSearchConfig::restarts)
        .def_readwrite("seed", &StructureSearchConfig::seed)
        .def_readwrite("eval_budget", &StructureSearchConfig::eval_budget);

    py::class_<StructureSearchResult>(m, "StructureSearchResult")
        .def_readonly("quality", &StructureSearchResult::quality)
        .def_readonly("points", &StructureSearchResult::points)
        .def_readonly("evaluations", &StructureSearchResult::evaluations)
        .def_readonly("restarts_completed", &StructureSearchResult::restarts_completed);

    m.def("best_structure", &best_structure, py::arg("model"), py::arg("kind"),
          py::arg("size"), py::arg("config") = StructureSearchConfig{},
          "Pattern search for the most regular simplex or flag the model carries.");

    py::class_<MonotoneRun>(m, "MonotoneRun")
        .def_readonly("strictly_monotone", &MonotoneRun::strictly_monotone)
        .def_readonly("min_increment", &MonotoneRun::min_increment);

    m.def("monotone_run", &monotone_run, py::arg("model"), py::arg("p0"), py::arg("q0"),
          py::arg("p1"), py::arg("q1"), py::arg("m"));

    py::class_<MonotonicityReport>(m, "MonotonicityReport")
        .def_readonly("samples", &MonotonicityReport::samples)
        .def_readonly("m", &MonotonicityReport::m)
        .def_readonly("monotone_fraction", &MonotonicityReport::monotone_fraction)
        .def_readonly("min_increment", &MonotonicityReport::min_increment)
        .def_readonly("seed", &MonotonicityReport::seed);

    m.def("monotonicity_experiment", &monotonicity_experiment, py::arg("model"),
          py::arg("radius"), py::arg("angle_bound"), py::arg("samples"), py::arg("m") = 100,
          py::arg("seed") = 1);

    m.def("normalize_to_unit_ball", &normalize_to_unit_ball, py::arg("coords"), py::arg("n"),
          py::arg("dim"),
          "Translate a diameter endpoint to the origin and rescale to diameter one.");

    py::class_<RigidAlignment>(m, "RigidAlignment")
        .def_readonly("rotation", &RigidAlignment::rotation)
        .def_readonly("translation", &RigidAlignment::translation);

    m.def("align_points", &align_points, py::arg("source"), py::arg("target"), py::arg("n"),
          py::arg("dim"), "Least-squares orthogonal alignment of source onto target.");
    m.def("apply_alignment", &apply_alignment, py::arg("alignment"), py::arg("coords"),
          py::arg("n"), py::arg("dim"));

    py::class_<NetLimitStage>(m, "NetLimitStage")
        .def_readonly("size", &NetLimitStage::size)
        .def_readonly("verdict", &NetLimitStage::verdict)
        .def_readonly("diagnostics", &NetLimitStage::diagnostics)
        .def_readonly("obstruction", &NetLimitStage::obstruction)
        .def_readonly("aligned_coords", &NetLimitStage::aligned_coords)
        .def_readonly("normalized_diameter", &NetLimitStage::normalized_diameter)
        .def_readonly("origin_gap", &NetLimitStage::origin_gap)
        .def_readonly("sphere_gap", &NetLimitStage::sphere_gap)
        .def_readonly("drift", &NetLimitStage::drift);

    py::class_<NetLimitReport>(m, "NetLimitReport")
        .def_readonly("stages", &NetLimitReport::stages)
        .def_readonly("failed_stage", &NetLimitReport::failed_stage)
        .def_readonly("final_weak_le", &NetLimitReport::final_weak_le)
        .def_readonly("sample_seed", &NetLimitReport::sample_seed);

    m.def("net_limit_experiment", &net_limit_experiment, py::arg("model"), py::arg("chain"),
          py::arg("dim"), py::arg("config") = SolverConfig{}, py::arg("sample_seed") = 1,
          py::arg("initial_points") = std::vector<ManifoldPoint>{},
          "Solve nested samples, normalize and align each stage, track drift.");
}
