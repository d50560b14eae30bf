#include "bicx/config.hpp"
#include "bicx/error.hpp"
#include "bicx/frontend.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Optimal BIC exploration policies: rate schedules, partition "
                 "policies, audits and simulations"};

    std::string config_path;
    std::string mode, out_dir;
    std::uint64_t seed = 0;
    long reps = 0;
    double tol = 0.0;
    app.add_option("--config", config_path, "configuration file")->required();
    auto* mode_opt = app.add_option("--mode", mode, "override mode");
    auto* out_opt = app.add_option("--out", out_dir, "override output directory");
    auto* seed_opt = app.add_option("--seed", seed, "override seed");
    auto* reps_opt = app.add_option("--reps", reps, "override replications");
    auto* tol_opt = app.add_option("--tol", tol, "override audit tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream is(config_path);
        if (!is) {
            std::cerr << "error: cannot open config " << config_path << "\n";
            return 1;
        }
        std::ostringstream buf;
        buf << is.rdbuf();
        bicx::RunConfig cfg = bicx::parse_config(buf.str());
        if (mode_opt->count()) cfg.mode = mode;
        if (out_opt->count()) cfg.out_dir = out_dir;
        if (seed_opt->count()) cfg.seed = seed;
        if (reps_opt->count()) cfg.reps = reps;
        if (tol_opt->count()) cfg.tol = tol;
        return bicx::run(cfg);
    } catch (const bicx::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
