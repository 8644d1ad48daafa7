// Command-line front end: maslov-trace <wave|box|evans|verdict> [options]
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "maslov/tracer.hpp"

using namespace maslov;
using namespace maslov::tracer;

namespace {

void add_run_options(CLI::App* app, RunConfig& cfg, std::string& grid, std::string& out) {
    app->add_option("--model", cfg.model, "gkdv or kdvb")->capture_default_str();
    app->add_option("--p", cfg.p, "gKdV nonlinearity exponent")->capture_default_str();
    app->add_option("--s", cfg.s, "gKdV wave speed")->capture_default_str();
    app->add_option("--nu", cfg.nu, "KdV-Burgers dispersion coefficient")->capture_default_str();
    app->add_option("--lmin", cfg.lmin, "lower end of the lambda window")->capture_default_str();
    app->add_option("--lmax", cfg.lmax, "upper end of the lambda window")->capture_default_str();
    app->add_option("--xmin", cfg.xmin, "lower end of the x window")->capture_default_str();
    app->add_option("--xmax", cfg.xmax, "upper end of the x window")->capture_default_str();
    app->add_option("--grid", grid, "samples per axis: N or NLxNX");
    app->add_option("--rtol", cfg.rtol, "integrator relative tolerance")->capture_default_str();
    app->add_option("--atol", cfg.atol, "integrator absolute tolerance")->capture_default_str();
    app->add_option("--L", cfg.L, "truncation half-width (0: model default)")->capture_default_str();
    app->add_option("--out", out, "output directory")->capture_default_str();
    app->add_flag("--svg", cfg.svg, "also write SVG figures");

}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperplane-index and Evans-function spectral tracer"};
    app.set_config("--config", "", "INI file with key = value entries (sections name subcommands)");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string grid;
    std::string out = cfg.out.string();
    auto* wave = app.add_subcommand("wave", "tabulate the wave profile");
    auto* box = app.add_subcommand("box", "compute the Maslov box, shelves and spectral curves");
    auto* evans = app.add_subcommand("evans", "sweep the Evans function and report derivatives at 0");
    auto* verdict = app.add_subcommand("verdict", "consolidated stability report");
    for (CLI::App* sub : {&app, wave, box, evans, verdict}) add_run_options(sub, cfg, grid, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (!grid.empty()) parse_grid(grid, cfg);
        cfg.out = out;
        if (wave->parsed()) return cmd_wave(cfg, std::cout);
        if (box->parsed()) return cmd_box(cfg, std::cout);
        if (evans->parsed()) return cmd_evans(cfg, std::cout);
        if (verdict->parsed()) return cmd_verdict(cfg, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ModelError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitConfig;
}
