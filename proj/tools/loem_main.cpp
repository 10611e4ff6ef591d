#include <iostream>

#include "CLI11.hpp"
#include "loem/cli.hpp"

namespace {

void add_model_flags(CLI::App* cmd, loem::ModelOptions& model) {
    cmd->add_option("--model", model.kind, "circle | sphere | torus | mesh")
        ->check(CLI::IsMember({"circle", "sphere", "torus", "mesh"}));
    cmd->add_option("--radius", model.radius, "circle/sphere radius");
    cmd->add_option("--period-u", model.period_u, "first torus period");
    cmd->add_option("--period-v", model.period_v, "second torus period");
    cmd->add_option("--mesh", model.mesh_path, "OBJ file for --model mesh");
}

void add_solver_flags(CLI::App* cmd, loem::SolverConfig& solver, CLI::Option*& tol_eq_opt,
                      CLI::Option*& tol_sep_opt, double& tol_eq, double& tol_sep) {
    cmd->add_option("--restarts", solver.restarts, "random restarts");
    cmd->add_option("--max-iterations", solver.max_iterations, "descent iterations per restart");
    cmd->add_option("--seed", solver.rng_seed, "master RNG seed");
    cmd->add_option("--threads", solver.threads, "parallel restart workers");
    cmd->add_option("--tol-class", solver.tol_class, "distance classification tolerance");
    tol_eq_opt = cmd->add_option("--tol-eq", tol_eq, "verifier equality tolerance");
    tol_sep_opt = cmd->add_option("--tol-sep", tol_sep, "verifier separation tolerance");
    cmd->add_option("--budget", solver.flag_budget, "flag search node budget");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite metric spaces: validation, obstruction certificates, loose embeddings,"
                 " and model-manifold experiments"};
    app.require_subcommand(1);
    int code = loem::kExitUsage;

    loem::ValidateOptions vopt;
    auto* validate = app.add_subcommand("validate", "check a metric space document");
    validate->add_option("path", vopt.path, "metric space document")->required();
    validate->add_option("--tol-metric", vopt.tol_metric, "axiom tolerance for float entries");
    validate->callback([&] { code = loem::cmd_validate(vopt, std::cout, std::cerr); });

    loem::ObstructOptions oopt;
    auto* obstruct = app.add_subcommand("obstruct", "search simplex and flag certificates");
    obstruct->add_option("path", oopt.path, "metric space document")->required();
    obstruct->add_option("--tol-metric", oopt.tol_metric, "axiom tolerance for float entries");
    obstruct->add_option("--tol-class", oopt.tol_class, "distance classification tolerance");
    obstruct->add_option("--budget", oopt.budget, "flag search node budget");
    obstruct->callback([&] { code = loem::cmd_obstruct(oopt, std::cout, std::cerr); });

    loem::EmbedOptions eopt;
    double embed_tol_eq = 0, embed_tol_sep = 0;
    CLI::Option *embed_eq = nullptr, *embed_sep = nullptr;
    auto* embed = app.add_subcommand("embed", "search a loose embedding into R^N");
    embed->add_option("path", eopt.path, "metric space document")->required();
    embed->add_option("--dim", eopt.dim, "target dimension N")->required();
    embed->add_option("--tol-metric", eopt.tol_metric, "axiom tolerance for float entries");
    add_solver_flags(embed, eopt.solver, embed_eq, embed_sep, embed_tol_eq, embed_tol_sep);
    embed->callback([&] {
        if (*embed_eq) eopt.solver.tol_eq = embed_tol_eq;
        if (*embed_sep) eopt.solver.tol_sep = embed_tol_sep;
        code = loem::cmd_embed(eopt, std::cout, std::cerr);
    });

    auto* manifold = app.add_subcommand("manifold", "model-manifold experiments");
    manifold->require_subcommand(1);

    loem::SampleOptions sopt;
    auto* msample = manifold->add_subcommand("sample", "draw points and emit their metric space");
    add_model_flags(msample, sopt.model);
    msample->add_option("--n", sopt.n, "number of points");
    msample->add_option("--seed", sopt.seed, "RNG seed");
    msample->callback([&] { code = loem::cmd_manifold_sample(sopt, std::cout, std::cerr); });

    loem::SearchOptions simplex_opt;
    auto* msimplex = manifold->add_subcommand("search-simplex", "minimize the simplex quality");
    add_model_flags(msimplex, simplex_opt.model);
    msimplex->add_option("--k", simplex_opt.size, "simplex point count");
    msimplex->add_option("--restarts", simplex_opt.config.restarts, "search restarts");
    msimplex->add_option("--seed", simplex_opt.config.seed, "RNG seed");
    msimplex->add_option("--budget", simplex_opt.config.eval_budget, "quality evaluation budget");
    msimplex->callback([&] {
        simplex_opt.kind = loem::StructureKind::Simplex;
        code = loem::cmd_manifold_search(simplex_opt, std::cout, std::cerr);
    });

    loem::SearchOptions flag_opt;
    auto* mflag = manifold->add_subcommand("search-flag", "minimize the flag quality");
    add_model_flags(mflag, flag_opt.model);
    mflag->add_option("--n", flag_opt.size, "flag pair count");
    mflag->add_option("--restarts", flag_opt.config.restarts, "search restarts");
    mflag->add_option("--seed", flag_opt.config.seed, "RNG seed");
    mflag->add_option("--budget", flag_opt.config.eval_budget, "quality evaluation budget");
    mflag->callback([&] {
        flag_opt.kind = loem::StructureKind::Flag;
        code = loem::cmd_manifold_search(flag_opt, std::cout, std::cerr);
    });

    loem::MonotonicityOptions mopt;
    auto* mmono = manifold->add_subcommand("monotonicity",
                                           "median residual growth along geodesics");
    add_model_flags(mmono, mopt.model);
    mmono->add_option("--scale", mopt.scale, "geodesic ball radius");
    mmono->add_option("--angle-bound", mopt.angle_bound, "chord angle bound in radians");
    mmono->add_option("--samples", mopt.samples, "configurations to draw");
    mmono->add_option("--m", mopt.m, "evaluation points per geodesic");
    mmono->add_option("--seed", mopt.seed, "RNG seed");
    mmono->callback([&] { code = loem::cmd_manifold_monotonicity(mopt, std::cout, std::cerr); });

    loem::NetLimitOptions nopt;
    double net_tol_eq = 0, net_tol_sep = 0;
    CLI::Option *net_eq = nullptr, *net_sep = nullptr;
    auto* mnet = manifold->add_subcommand("net-limit", "nested-sample embedding chain");
    add_model_flags(mnet, nopt.model);
    mnet->add_option("--chain", nopt.chain, "stage sizes, e.g. 4,8,16")->delimiter(',');
    mnet->add_option("--dim", nopt.dim, "target dimension N");
    mnet->add_option("--sample-seed", nopt.sample_seed, "seed for the point draw");
    add_solver_flags(mnet, nopt.solver, net_eq, net_sep, net_tol_eq, net_tol_sep);
    mnet->callback([&] {
        if (*net_eq) nopt.solver.tol_eq = net_tol_eq;
        if (*net_sep) nopt.solver.tol_sep = net_tol_sep;
        code = loem::cmd_manifold_net_limit(nopt, std::cout, std::cerr);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return loem::kExitUsage;
    }
    return code;
}
