#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "helmscat/runner.hpp"

// Command-line workbench: synthetic scattering data, direct-sampling
// reconstructions, transmission eigenvalues, and the reference tables.

namespace {

using namespace helmscat;

struct Overrides {
    std::optional<std::string> output;
    std::optional<std::string> solver;
    std::optional<double> wavenumber;
    std::optional<double> delta;
    std::optional<std::uint64_t> seed;
    std::optional<int> directions;
    std::optional<int> faces;
    std::optional<int> truncation;
    std::optional<double> rho;
    std::optional<bool> far_variant;

    void apply(ExperimentConfig& cfg) const {
        if (output) cfg.output_dir = *output;
        if (solver) cfg.solver = *solver;
        if (wavenumber) cfg.k = *wavenumber;
        if (delta) cfg.noise.delta = *delta;
        if (seed) cfg.noise.seed = *seed;
        if (directions) cfg.measurement.directions = *directions;
        if (faces) cfg.faces = *faces;
        if (truncation) cfg.truncation = *truncation;
        if (rho) cfg.rho = *rho;
        if (far_variant) cfg.far_variant = *far_variant;
    }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--output", ov.output, "output directory (overrides config)");
    cmd->add_option("--solver", ov.solver, "sov | born | bie");
    cmd->add_option("--wavenumber", ov.wavenumber, "wavenumber k");
    cmd->add_option("--delta", ov.delta, "relative noise level");
    cmd->add_option("--seed", ov.seed, "noise seed");
    cmd->add_option("--directions", ov.directions, "incident directions / observation points");
    cmd->add_option("--faces", ov.faces, "boundary-integral faces N_f (nodes = 3 N_f)");
    cmd->add_option("--truncation", ov.truncation, "series truncation order");
    cmd->add_option("--rho", ov.rho, "normalization exponent");
    cmd->add_option("--far", ov.far_variant, "use the far-field indicator variant");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2-D scattering workbench: forward solvers, direct sampling, "
                 "transmission eigenvalues"};
    app.require_subcommand(1);

    std::string config_path, data_dir, which = "table1", report_path;
    Overrides ov;

    auto* fwd = app.add_subcommand("forward", "compute synthetic Cauchy data and write CSV + manifest");
    fwd->add_option("--config", config_path, "experiment config (JSON)")->required();
    add_override_flags(fwd, ov);

    auto* rec = app.add_subcommand("reconstruct", "direct-sampling reconstruction from data files");
    rec->add_option("--config", config_path, "experiment config (JSON)")->required();
    rec->add_option("--data", data_dir, "directory with us.csv / dus.csv")->required();
    add_override_flags(rec, ov);

    auto* tevd = app.add_subcommand("tev-disk", "disk transmission eigenvalues by determinant roots");
    tevd->add_option("--config", config_path, "experiment config (JSON)")->required();
    add_override_flags(tevd, ov);

    auto* tevb = app.add_subcommand("tev-bie", "transmission eigenvalues by boundary integrals + Beyn");
    tevb->add_option("--config", config_path, "experiment config (JSON)")->required();
    add_override_flags(tevb, ov);

    auto* tab = app.add_subcommand("tables", "reproduce the reference tables with pass/fail checks");
    tab->add_option("--which", which, "table1 | table2 | table3")->required();
    tab->add_option("--out", report_path, "write the report to a file instead of stdout");

    auto* val = app.add_subcommand("validate", "run the Bessel/Hankel identity lattice");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fwd->parsed()) {
            auto cfg = helmscat::load_config(config_path);
            ov.apply(cfg);
            const auto data = helmscat::run_forward(cfg);
            std::cout << "wrote " << cfg.output_dir << "/us.csv, dus.csv (" << data.us.rows() << "x"
                      << data.us.cols() << ") and manifest.json\n";
        } else if (rec->parsed()) {
            auto cfg = helmscat::load_config(config_path);
            ov.apply(cfg);
            const auto report = helmscat::run_reconstruct(cfg, std::filesystem::path(data_dir));
            std::cout << "wrote " << cfg.output_dir << "/indicator.{csv,pgm}, summary.json\n";
            std::cout << "argmax (" << report.summary.argmax.x << ", " << report.summary.argmax.y
                      << "), peak " << report.summary.peak << "\n";
        } else if (tevd->parsed()) {
            auto cfg = helmscat::load_config(config_path);
            ov.apply(cfg);
            const auto result = helmscat::run_tev_disk(cfg);
            std::cout << "found " << result.eigenvalues.size() << " eigenvalue(s); wrote "
                      << cfg.output_dir << "/tev.csv\n";
            for (const auto& e : result.eigenvalues)
                std::cout << "  p=" << e.mode << "  " << e.k.real() << (e.k.imag() < 0 ? " - " : " + ")
                          << std::abs(e.k.imag()) << "i  (x" << e.multiplicity << ")\n";
        } else if (tevb->parsed()) {
            auto cfg = helmscat::load_config(config_path);
            ov.apply(cfg);
            const auto result = helmscat::run_tev_bie(cfg);
            std::cout << "found " << result.eigenvalues.size() << " eigenvalue(s); wrote "
                      << cfg.output_dir << "/tev.csv\n";
            for (const auto& e : result.eigenvalues)
                std::cout << "  " << e.k.real() << (e.k.imag() < 0 ? " - " : " + ")
                          << std::abs(e.k.imag()) << "i  residual " << e.residual << "\n";
        } else if (tab->parsed()) {
            bool ok = false;
            if (report_path.empty()) {
                ok = helmscat::run_tables(which, std::cout);
            } else {
                std::ofstream out(report_path);
                if (!out) throw helmscat::validation_error("cannot open " + report_path);
                ok = helmscat::run_tables(which, out);
                std::cout << "report written to " << report_path << "\n";
            }
            if (!ok) return 3;
        } else if (val->parsed()) {
            const auto v = helmscat::kernel_validation_lattice();
            std::cout << "max wronskian residual (Im z >= -0.5):    " << v.wronskian << "\n";
            std::cout << "max scaled wronskian residual (lattice):  " << v.wronskian_scaled << "\n";
            std::cout << "max recurrence residual:                   " << v.recurrence << "\n";
            std::cout << "max conjugation residual:                  " << v.conjugation << "\n";
            const bool ok = v.pass();
            std::cout << (ok ? "[PASS]" : "[FAIL]") << " all identities below 1e-10\n";
            if (!ok) return 3;
        }
    } catch (const helmscat::validation_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const helmscat::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
