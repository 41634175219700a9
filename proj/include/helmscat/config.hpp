#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "helmscat/forward_born.hpp"
#include "helmscat/forward_sov.hpp"
#include "helmscat/imaging.hpp"
#include "helmscat/tev.hpp"

// Experiment configuration: one JSON document per experiment. The schema is
// documented in the README; every run writes back a manifest that is itself a
// valid config, so outputs can be reproduced from their manifest alone.

namespace helmscat {

struct ExperimentConfig {
    std::string solver = "sov";  // sov | born | bie

    // scatterer
    std::string curve_kind = "circle";
    std::vector<double> curve_params{0.5};
    Complex n{5.0, 0.0};
    Complex mu{1.5, 0.0};
    Complex gamma{2.0, 0.0};
    bool enforce_signs = true;
    double k = 1.5 * pi;

    // small regions (born)
    std::vector<Vec2> region_centers;
    double region_radius = 0.1;

    MeasurementSetup measurement{1.0, 32};
    NoiseModel noise{0.0, 1, NoiseModel::Norm::frobenius};

    // imaging
    GridSpec grid;
    double rho = 4.0;
    bool far_variant = false;

    // discretization
    int truncation = 15;  // series modes
    int faces = 40;       // N_f, collocation nodes = 3 N_f
    double fd_step = 0.01;

    // transmission eigenvalues
    ContourSpec contour;
    int tev_collocation = 60;
    double tev_fd_step = 0.01;
    int p_max = 3;

    std::string output_dir = "out";

    BoundaryCurve curve() const { return make_curve(curve_kind, curve_params); }

    ScattererConfig scatterer() const {
        ScattererConfig cfg;
        cfg.k = k;
        cfg.n = n;
        cfg.mu = mu;
        cfg.gamma = gamma;
        cfg.curve = curve();
        cfg.enforce_signs = enforce_signs;
        return cfg;
    }

    SmallRegionSet regions() const {
        SmallRegionSet s;
        s.centers = region_centers;
        s.r0 = region_radius;
        s.n = n;
        s.mu = mu;
        s.gamma = gamma;
        return s;
    }

    void validate() const {
        if (solver != "sov" && solver != "born" && solver != "bie")
            throw validation_error("solver: expected sov, born or bie, got '" + solver + "'");
        if (!(k > 0.0)) throw validation_error("k: wavenumber must be positive");
        if (measurement.directions < 1)
            throw validation_error("measurement.directions: must be at least 1");
        if (!(measurement.radius_omega > 0.0))
            throw validation_error("measurement.radius: must be positive");
        if (solver == "born") {
            if (region_centers.empty())
                throw validation_error("regions.centers: born solver needs at least one region");
            regions().validate();
        } else {
            curve();  // validates kind/params
            if (solver == "sov" && !curve().is_origin_circle())
                throw validation_error("scatterer.kind: the sov solver needs an origin-centered disk");
        }
        if (noise.delta != 0.0 && !(noise.delta > 0.0 && noise.delta < 1.0))
            throw validation_error("noise.delta: must lie in [0, 1)");
        if (!(rho > 0.0)) throw validation_error("imaging.rho: must be positive");
        if (grid.nx < 1 || grid.ny < 1) throw validation_error("imaging.resolution: must be >= 1");
        if (faces < 3) throw validation_error("discretization.faces: must be >= 3");
        scatterer().validate();
    }
};

namespace detail_config {

using nlohmann::json;

inline Complex parse_complex(const json& j, const std::string& field) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw validation_error(field + ": expected a number or [re, im]");
}

inline json complex_json(Complex z) {
    if (z.imag() == 0.0) return json(z.real());
    return json::array({z.real(), z.imag()});
}

}  // namespace detail_config

inline nlohmann::json to_json(const ExperimentConfig& c) {
    using detail_config::complex_json;
    nlohmann::json j;
    j["solver"] = c.solver;
    j["wavenumber"] = c.k;
    j["scatterer"] = {{"kind", c.curve_kind},
                      {"params", c.curve_params},
                      {"n", complex_json(c.n)},
                      {"mu", complex_json(c.mu)},
                      {"gamma", complex_json(c.gamma)},
                      {"enforce_signs", c.enforce_signs}};
    if (!c.region_centers.empty()) {
        nlohmann::json centers = nlohmann::json::array();
        for (const auto& p : c.region_centers) centers.push_back({p.x, p.y});
        j["regions"] = {{"centers", centers}, {"radius", c.region_radius}};
    }
    j["measurement"] = {{"radius", c.measurement.radius_omega},
                        {"directions", c.measurement.directions}};
    j["noise"] = {{"delta", c.noise.delta},
                  {"seed", c.noise.seed},
                  {"norm", c.noise.norm_kind == NoiseModel::Norm::frobenius ? "frobenius" : "spectral"}};
    j["imaging"] = {{"window", {c.grid.xmin, c.grid.xmax, c.grid.ymin, c.grid.ymax}},
                    {"resolution", {c.grid.nx, c.grid.ny}},
                    {"rho", c.rho},
                    {"far_variant", c.far_variant}};
    j["discretization"] = {{"truncation", c.truncation}, {"faces", c.faces}, {"fd_step", c.fd_step}};
    j["tev"] = {{"contour", {{"center", complex_json(c.contour.center)}, {"radius", c.contour.radius}}},
                {"quadrature_nodes", c.contour.quadrature_nodes},
                {"probes", c.contour.probes},
                {"rank_tol", c.contour.rank_tol},
                {"seed", c.contour.seed},
                {"collocation", c.tev_collocation},
                {"fd_step", c.tev_fd_step},
                {"p_max", c.p_max}};
    j["output"] = {{"dir", c.output_dir}};
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    using detail_config::parse_complex;
    ExperimentConfig c;
    try {
        if (j.contains("solver")) c.solver = j.at("solver").get<std::string>();
        if (j.contains("wavenumber")) c.k = j.at("wavenumber").get<double>();
        if (j.contains("scatterer")) {
            const auto& s = j.at("scatterer");
            if (s.contains("kind")) c.curve_kind = s.at("kind").get<std::string>();
            if (s.contains("params")) c.curve_params = s.at("params").get<std::vector<double>>();
            if (s.contains("n")) c.n = parse_complex(s.at("n"), "scatterer.n");
            if (s.contains("mu")) c.mu = parse_complex(s.at("mu"), "scatterer.mu");
            if (s.contains("gamma")) c.gamma = parse_complex(s.at("gamma"), "scatterer.gamma");
            if (s.contains("enforce_signs")) c.enforce_signs = s.at("enforce_signs").get<bool>();
        }
        if (j.contains("regions")) {
            const auto& r = j.at("regions");
            for (const auto& p : r.at("centers"))
                c.region_centers.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            if (r.contains("radius")) c.region_radius = r.at("radius").get<double>();
        }
        if (j.contains("measurement")) {
            const auto& m = j.at("measurement");
            if (m.contains("radius")) c.measurement.radius_omega = m.at("radius").get<double>();
            if (m.contains("directions")) c.measurement.directions = m.at("directions").get<int>();
        }
        if (j.contains("noise")) {
            const auto& n = j.at("noise");
            if (n.contains("delta")) c.noise.delta = n.at("delta").get<double>();
            if (n.contains("seed")) c.noise.seed = n.at("seed").get<std::uint64_t>();
            if (n.contains("norm")) {
                const auto name = n.at("norm").get<std::string>();
                if (name == "frobenius")
                    c.noise.norm_kind = NoiseModel::Norm::frobenius;
                else if (name == "spectral")
                    c.noise.norm_kind = NoiseModel::Norm::spectral;
                else
                    throw validation_error("noise.norm: expected frobenius or spectral");
            }
        }
        if (j.contains("imaging")) {
            const auto& im = j.at("imaging");
            if (im.contains("window")) {
                const auto w = im.at("window").get<std::vector<double>>();
                if (w.size() != 4) throw validation_error("imaging.window: expected 4 numbers");
                c.grid.xmin = w[0];
                c.grid.xmax = w[1];
                c.grid.ymin = w[2];
                c.grid.ymax = w[3];
            }
            if (im.contains("resolution")) {
                if (im.at("resolution").is_number()) {
                    c.grid.nx = c.grid.ny = im.at("resolution").get<int>();
                } else {
                    const auto r = im.at("resolution").get<std::vector<int>>();
                    if (r.size() != 2) throw validation_error("imaging.resolution: expected 1 or 2 ints");
                    c.grid.nx = r[0];
                    c.grid.ny = r[1];
                }
            }
            if (im.contains("rho")) c.rho = im.at("rho").get<double>();
            if (im.contains("far_variant")) c.far_variant = im.at("far_variant").get<bool>();
        }
        if (j.contains("discretization")) {
            const auto& d = j.at("discretization");
            if (d.contains("truncation")) c.truncation = d.at("truncation").get<int>();
            if (d.contains("faces")) c.faces = d.at("faces").get<int>();
            if (d.contains("fd_step")) c.fd_step = d.at("fd_step").get<double>();
        }
        if (j.contains("tev")) {
            const auto& t = j.at("tev");
            if (t.contains("contour")) {
                const auto& ct = t.at("contour");
                if (ct.contains("center")) c.contour.center = parse_complex(ct.at("center"), "tev.contour.center");
                if (ct.contains("radius")) c.contour.radius = ct.at("radius").get<double>();
            }
            if (t.contains("quadrature_nodes"))
                c.contour.quadrature_nodes = t.at("quadrature_nodes").get<int>();
            if (t.contains("probes")) c.contour.probes = t.at("probes").get<int>();
            if (t.contains("rank_tol")) c.contour.rank_tol = t.at("rank_tol").get<double>();
            if (t.contains("seed")) c.contour.seed = t.at("seed").get<std::uint64_t>();
            if (t.contains("collocation")) c.tev_collocation = t.at("collocation").get<int>();
            if (t.contains("fd_step")) c.tev_fd_step = t.at("fd_step").get<double>();
            if (t.contains("p_max")) c.p_max = t.at("p_max").get<int>();
        }
        if (j.contains("output") && j.at("output").contains("dir"))
            c.output_dir = j.at("output").at("dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("config parse error: ") + e.what());
    }
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw validation_error("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("config is not valid JSON: " + std::string(e.what()));
    }
    return config_from_json(j);
}

}  // namespace helmscat
