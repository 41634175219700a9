#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helmscat/forward_sov.hpp"
#include "helmscat/imaging.hpp"
#include "helmscat/tev.hpp"

// File formats. CSV numbers use 17 significant digits with '.' decimal point
// regardless of locale; heatmaps are binary P5 PGM.

namespace helmscat::io {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc()) throw validation_error("bad numeric field: '" + s + "'");
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

// Cauchy data matrix: a header row "J,k,radius_omega", its values, then J
// rows of re/im interleaved entries.
inline void write_cauchy_matrix_csv(const Eigen::MatrixXcd& m, const MeasurementSetup& setup,
                                    double k, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw validation_error("cannot open " + path.string() + " for writing");
    f << "J,k,radius_omega\n";
    f << setup.directions << "," << format_double(k) << "," << format_double(setup.radius_omega)
      << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) f << ",";
            f << format_double(m(i, j).real()) << "," << format_double(m(i, j).imag());
        }
        f << "\n";
    }
}

inline Eigen::MatrixXcd read_cauchy_matrix_csv(const std::filesystem::path& path,
                                               MeasurementSetup& setup, double& k) {
    std::ifstream f(path);
    if (!f) throw validation_error("cannot open " + path.string());
    std::string line;
    std::getline(f, line);  // header names
    std::getline(f, line);
    const auto head = split_csv_line(line);
    if (head.size() != 3) throw validation_error("malformed cauchy header in " + path.string());
    const int J = static_cast<int>(parse_double(head[0]));
    k = parse_double(head[1]);
    setup.radius_omega = parse_double(head[2]);
    setup.directions = J;
    Eigen::MatrixXcd m(J, J);
    for (int i = 0; i < J; ++i) {
        if (!std::getline(f, line)) throw validation_error("truncated cauchy file " + path.string());
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != 2 * J)
            throw validation_error("wrong column count in " + path.string());
        for (int j = 0; j < J; ++j)
            m(i, j) = Complex(parse_double(cells[2 * j]), parse_double(cells[2 * j + 1]));
    }
    return m;
}

inline void write_cauchy_data(const CauchyData& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_cauchy_matrix_csv(data.us, data.setup, data.k, dir / "us.csv");
    write_cauchy_matrix_csv(data.dus, data.setup, data.k, dir / "dus.csv");
}

inline CauchyData read_cauchy_data(const std::filesystem::path& dir) {
    CauchyData data;
    data.us = read_cauchy_matrix_csv(dir / "us.csv", data.setup, data.k);
    MeasurementSetup s2;
    double k2 = 0.0;
    data.dus = read_cauchy_matrix_csv(dir / "dus.csv", s2, k2);
    if (s2.directions != data.setup.directions || s2.radius_omega != data.setup.radius_omega ||
        k2 != data.k)
        throw validation_error("us.csv and dus.csv headers disagree");
    return data;
}

inline void write_indicator_csv(const IndicatorGrid& grid, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw validation_error("cannot open " + path.string() + " for writing");
    f << "x,y,w,w_nor\n";
    for (size_t iy = 0; iy < grid.ys.size(); ++iy)
        for (size_t ix = 0; ix < grid.xs.size(); ++ix)
            f << format_double(grid.xs[ix]) << "," << format_double(grid.ys[iy]) << ","
              << format_double(grid.values(iy, ix)) << "," << format_double(grid.normalized(iy, ix))
              << "\n";
}

// binary P5, rows from ymax down to ymin, value = round(255 * W_nor)
inline void write_indicator_pgm(const IndicatorGrid& grid, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot open " + path.string() + " for writing");
    const int nx = static_cast<int>(grid.xs.size());
    const int ny = static_cast<int>(grid.ys.size());
    f << "P5\n" << nx << " " << ny << "\n255\n";
    for (int iy = ny - 1; iy >= 0; --iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double v = std::clamp(grid.normalized(iy, ix), 0.0, 1.0);
            const unsigned char byte = static_cast<unsigned char>(std::lround(255.0 * v));
            f.write(reinterpret_cast<const char*>(&byte), 1);
        }
}

inline const char* method_name(TevMethod m) {
    switch (m) {
        case TevMethod::series_det: return "series_det";
        case TevMethod::beyn_bie: return "beyn_bie";
        case TevMethod::beyn_det: return "beyn_det";
    }
    return "unknown";
}

inline void write_tev_csv(const TevResult& result, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw validation_error("cannot open " + path.string() + " for writing");
    f << "re,im,residual,method,multiplicity\n";
    for (const auto& e : result.eigenvalues)
        f << format_double(e.k.real()) << "," << format_double(e.k.imag()) << ","
          << format_double(e.residual) << "," << method_name(result.method) << "," << e.multiplicity
          << "\n";
}

}  // namespace helmscat::io
