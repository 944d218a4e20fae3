// SPDX-License-Identifier: Apache-2.0
//
// zakcs: delay-Doppler channel simulation and sparse estimation toolkit

#include <CLI11.hpp>

#include "zakcs/cli.hpp"

namespace {

bool parse_dims(const std::string& s, int& d, int& v) {
    const auto x = s.find('x');
    if (x == std::string::npos) return false;
    try {
        d = std::stoi(s.substr(0, x));
        v = std::stoi(s.substr(x + 1));
    } catch (...) {
        return false;
    }
    return d >= 1 && v >= 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"delay-Doppler channel simulation and sparse channel estimation"};
    app.require_subcommand(1);

    std::string config_path, out_path, dims = "8x8";
    int workers = 1, paths = 3, trials = 20;
    uint64_t seed = 1;
    double tol = 1e-9;
    bool aggregate = false, integer_mode = false;

    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo sweep and emit per-trial CSV");
    sim->add_option("--config", config_path, "JSON scenario file")->required();
    sim->add_option("--out", out_path, "per-trial CSV output path")->required();
    sim->add_option("--workers", workers, "worker threads (results are identical for any count)");
    sim->add_flag("--aggregate", aggregate, "also write per-(method,snr) means");

    auto* val = app.add_subcommand(
        "validate", "check the closed-form channel against the continuous-time oracle");
    val->add_option("--dims", dims, "grid as DxV, e.g. 8x8");
    val->add_option("--paths", paths, "number of multipath reflections");
    val->add_option("--trials", trials, "number of random channels");
    val->add_option("--seed", seed, "master seed");
    val->add_option("--tol", tol, "relative Frobenius tolerance");
    val->add_flag("--integer", integer_mode,
                  "round paths to the integer grid and check the fast path");

    auto* ben = app.add_subcommand("bench", "measure dictionary-build and per-iteration costs");
    ben->add_option("--config", config_path, "JSON scenario file")->required();
    ben->add_option("--out", out_path, "bench CSV output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (sim->parsed()) return zakcs::cmd_simulate(config_path, out_path, workers, aggregate);
    if (val->parsed()) {
        int d = 0, v = 0;
        if (!parse_dims(dims, d, v)) {
            std::cerr << "validate: --dims must look like 8x8\n";
            return 2;
        }
        return zakcs::cmd_validate(d, v, paths, trials, seed, tol, integer_mode);
    }
    if (ben->parsed()) return zakcs::cmd_bench(config_path, out_path);
    return 2;
}
