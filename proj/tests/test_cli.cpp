#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "loem/cli.hpp"
#include "loem/io.hpp"
#include "loem/metric.hpp"

using namespace loem;

namespace {

std::string temp_doc(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / ("loem_cli_" + name);
    std::ofstream out(path);
    out << content;
    return path.string();
}

std::string k_complete(int n) {
    std::ostringstream doc;
    doc << "points " << n << "\nlabels";
    for (int i = 0; i < n; ++i) doc << " p" << i;
    doc << "\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) doc << (j ? " " : "") << (i == j ? 0 : 1);
        doc << "\n";
    }
    return doc.str();
}

std::string value_of(const std::string& report, const std::string& key) {
    std::istringstream in(report);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
    return "";
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <typename Cmd, typename Options>
Run run(Cmd cmd, const Options& options) {
    std::ostringstream out, err;
    int code = cmd(options, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("validate command") {
    SUBCASE("valid document") {
        ValidateOptions opt{temp_doc("k3.txt", k_complete(3)), 1e-9};
        Run r = run(cmd_validate, opt);
        CHECK(r.code == kExitOk);
        CHECK(value_of(r.out, "verdict") == "valid");
        CHECK(value_of(r.out, "points") == "3");
        CHECK(value_of(r.out, "exact") == "true");
        CHECK(r.err.rfind("wall-time-ms", 0) == 0);
    }
    SUBCASE("triangle violation") {
        ValidateOptions opt{
            temp_doc("bad.txt", "points 3\nlabels p q r\n0 1 3\n1 0 1\n3 1 0\n"), 1e-9};
        Run r = run(cmd_validate, opt);
        CHECK(r.code == kExitInvalid);
        CHECK(value_of(r.out, "verdict") == "invalid");
        CHECK(r.out.find("violation triangle 0 2 1") != std::string::npos);
    }
    SUBCASE("missing file") {
        Run r = run(cmd_validate, ValidateOptions{"/nonexistent/loem.txt", 1e-9});
        CHECK(r.code == kExitUsage);
        CHECK(r.out.empty());
        CHECK(r.err.find("error:") != std::string::npos);
    }
    SUBCASE("unparsable document") {
        Run r = run(cmd_validate, ValidateOptions{temp_doc("junk.txt", "points zero\n"), 1e-9});
        CHECK(r.code == kExitUsage);
    }
}

TEST_CASE("obstruct command") {
    SUBCASE("complete graph") {
        ObstructOptions opt;
        opt.path = temp_doc("k4.txt", k_complete(4));
        Run r = run(cmd_obstruct, opt);
        CHECK(r.code == kExitOk);
        CHECK(value_of(r.out, "dim-lower-bound") == "3");
        CHECK(value_of(r.out, "simplex-vertices") == "0 1 2 3");
        CHECK(value_of(r.out, "budget-exhausted") == "false");
    }
    SUBCASE("two points") {
        ObstructOptions opt;
        opt.path = temp_doc("k2.txt", k_complete(2));
        Run r = run(cmd_obstruct, opt);
        CHECK(r.code == kExitOk);
        CHECK(value_of(r.out, "dim-lower-bound") == "1");
    }
    SUBCASE("invalid space exits 2") {
        ObstructOptions opt;
        opt.path = temp_doc("bad2.txt", "points 3\nlabels p q r\n0 1 3\n1 0 1\n3 1 0\n");
        Run r = run(cmd_obstruct, opt);
        CHECK(r.code == kExitInvalid);
    }
}

TEST_CASE("embed command") {
    SUBCASE("triangle embeds in the plane") {
        EmbedOptions opt;
        opt.path = temp_doc("k3e.txt", k_complete(3));
        opt.dim = 2;
        Run r = run(cmd_embed, opt);
        CHECK(r.code == kExitOk);
        CHECK(value_of(r.out, "verdict") == "Embedded");
        CHECK(r.out.find("point p0 ") != std::string::npos);
        CHECK(std::stod(value_of(r.out, "best-penalty")) < 1e-12);
    }
    SUBCASE("K5 dichotomy") {
        EmbedOptions opt;
        opt.path = temp_doc("k5.txt", k_complete(5));
        opt.dim = 3;
        Run low = run(cmd_embed, opt);
        CHECK(low.code == kExitObstructed);
        CHECK(value_of(low.out, "verdict") == "Obstructed");
        CHECK(value_of(low.out, "dim-lower-bound") == "4");
        opt.dim = 4;
        Run high = run(cmd_embed, opt);
        CHECK(high.code == kExitOk);
        CHECK(value_of(high.out, "verdict") == "Embedded");
    }
    SUBCASE("starved solver is inconclusive") {
        EmbedOptions opt;
        opt.path = temp_doc("k5s.txt", k_complete(5));
        opt.dim = 4;
        opt.solver.restarts = 1;
        opt.solver.max_iterations = 0;
        Run r = run(cmd_embed, opt);
        CHECK(r.code == kExitInconclusive);
        CHECK(value_of(r.out, "verdict") == "Inconclusive");
    }
    SUBCASE("byte-identical reruns") {
        EmbedOptions opt;
        opt.path = temp_doc("k5d.txt", k_complete(5));
        opt.dim = 4;
        Run a = run(cmd_embed, opt);
        Run b = run(cmd_embed, opt);
        CHECK(a.out == b.out);
        CHECK(a.code == b.code);
    }
}

TEST_CASE("manifold sample command feeds the validator") {
    SampleOptions opt;
    opt.model.kind = "sphere";
    opt.n = 8;
    opt.seed = 7;
    Run a = run(cmd_manifold_sample, opt);
    Run b = run(cmd_manifold_sample, opt);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# seed 7") != std::string::npos);

    std::istringstream doc(a.out);
    RawMatrix raw = parse_space_document(doc);
    CHECK(raw.n == 8);
    ValidationResult check = validate_metric(raw, 1e-9);
    CHECK(check.ok());

    ValidateOptions vopt{temp_doc("sample.txt", a.out), 1e-9};
    CHECK(run(cmd_validate, vopt).code == kExitOk);
}

TEST_CASE("manifold search command") {
    SearchOptions opt;
    opt.model.kind = "circle";
    opt.kind = StructureKind::Simplex;
    opt.size = 3;
    opt.config.restarts = 10;
    Run r = run(cmd_manifold_search, opt);
    CHECK(r.code == kExitOk);
    CHECK(std::stod(value_of(r.out, "quality")) < 1e-9);
    CHECK(value_of(r.out, "command") == "search-simplex");
    CHECK(r.out.find("point p0 ") != std::string::npos);

    SearchOptions mesh_opt = opt;
    mesh_opt.model.kind = "mesh";
    mesh_opt.model.mesh_path = std::string(LOEM_TEST_DATA) + "/octahedron.obj";
    Run unsupported = run(cmd_manifold_search, mesh_opt);
    CHECK(unsupported.code == kExitUsage);
    CHECK(unsupported.err.find("error:") != std::string::npos);
}

TEST_CASE("manifold monotonicity command") {
    MonotonicityOptions opt;
    opt.model.kind = "torus";
    opt.model.period_u = 1.0;
    opt.model.period_v = 2.0;
    opt.scale = 0.2;
    opt.angle_bound = 0.0;
    opt.samples = 20;
    opt.m = 20;
    Run r = run(cmd_manifold_monotonicity, opt);
    CHECK(r.code == kExitOk);
    CHECK(value_of(r.out, "monotone-fraction") == "1");
}

TEST_CASE("manifold net-limit command") {
    NetLimitOptions opt;
    opt.model.kind = "circle";
    opt.chain = {4, 8};
    opt.dim = 2;
    Run r = run(cmd_manifold_net_limit, opt);
    CHECK(r.code == kExitOk);
    CHECK(value_of(r.out, "failed-stage") == "none");
    CHECK(value_of(r.out, "final-weak-le") == "true");
    CHECK(r.out.find("stage 1 drift p0 ") != std::string::npos);

    Run again = run(cmd_manifold_net_limit, opt);
    CHECK(again.out == r.out);
}

TEST_CASE("model construction rejects bad parameters") {
    ModelOptions bad;
    bad.kind = "plane";
    CHECK_THROWS_AS(make_model(bad), Error);
    ModelOptions mesh;
    mesh.kind = "mesh";
    CHECK_THROWS_AS(make_model(mesh), Error);
    ModelOptions neg;
    neg.kind = "circle";
    neg.radius = -1;
    CHECK_THROWS_AS(make_model(neg), Error);
}
