#ifndef LOEM_CLI_HPP
#define LOEM_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "loem/experiments.hpp"
#include "loem/manifold.hpp"
#include "loem/obstruction.hpp"
#include "loem/solver.hpp"

namespace loem {

// Exit codes shared by every command: 0 valid or Embedded, 2 invalid input
// space, 3 Obstructed, 4 Inconclusive, 1 usage or I/O failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitObstructed = 3;
inline constexpr int kExitInconclusive = 4;

struct ValidateOptions {
    std::string path;
    double tol_metric = 1e-9;
};

struct ObstructOptions {
    std::string path;
    double tol_class = 1e-9;
    double tol_metric = 1e-9;
    std::uint64_t budget = kDefaultFlagBudget;
};

struct EmbedOptions {
    std::string path;
    int dim = 1;
    double tol_metric = 1e-9;
    SolverConfig solver;
};

struct ModelOptions {
    std::string kind = "circle";  // circle | sphere | torus | mesh
    double radius = 1.0;
    double period_u = 1.0;
    double period_v = 1.0;
    std::string mesh_path;
};

struct SampleOptions {
    ModelOptions model;
    int n = 10;
    std::uint64_t seed = 1;
};

struct SearchOptions {
    ModelOptions model;
    StructureKind kind = StructureKind::Simplex;
    int size = 3;
    StructureSearchConfig config;
};

struct MonotonicityOptions {
    ModelOptions model;
    double scale = 0.01;
    double angle_bound = 0.1;
    int samples = 100;
    int m = 100;
    std::uint64_t seed = 1;
};

struct NetLimitOptions {
    ModelOptions model;
    std::vector<int> chain = {4, 8, 16};
    int dim = 2;
    std::uint64_t sample_seed = 1;
    SolverConfig solver;
};

ManifoldModel make_model(const ModelOptions& options);

// Each command writes its report to `out` (byte-stable given the options) and
// diagnostics, including wall time, to `err`; the return value is the exit
// code above.
int cmd_validate(const ValidateOptions& options, std::ostream& out, std::ostream& err);
int cmd_obstruct(const ObstructOptions& options, std::ostream& out, std::ostream& err);
int cmd_embed(const EmbedOptions& options, std::ostream& out, std::ostream& err);
int cmd_manifold_sample(const SampleOptions& options, std::ostream& out, std::ostream& err);
int cmd_manifold_search(const SearchOptions& options, std::ostream& out, std::ostream& err);
int cmd_manifold_monotonicity(const MonotonicityOptions& options, std::ostream& out,
                              std::ostream& err);
int cmd_manifold_net_limit(const NetLimitOptions& options, std::ostream& out, std::ostream& err);

}  // namespace loem

#endif
