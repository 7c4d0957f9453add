#include "linfty/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace linfty::io {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json to_json(const PiecewiseQuadratic& pq) {
    json j;
    j["domain"] = {pq.domain_left(), pq.domain_right()};
    j["breakpoints"] = pq.breakpoints();
    json pieces = json::array();
    for (const auto& p : pq.pieces()) pieces.push_back({p.c0, p.c1, p.c2});
    j["pieces"] = std::move(pieces);
    return j;
}

PiecewiseQuadratic piecewise_quadratic_from_json(const json& j) {
    const auto domain = j.at("domain");
    std::vector<double> breaks = j.at("breakpoints").get<std::vector<double>>();
    std::vector<PiecewiseQuadratic::Piece> pieces;
    for (const auto& row : j.at("pieces"))
        pieces.push_back({row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()});
    return PiecewiseQuadratic(domain.at(0).get<double>(), domain.at(1).get<double>(),
                              std::move(breaks), std::move(pieces));
}

json to_json(const ScalarField& f) {
    json j;
    j["dimension"] = f.dimension;
    j["shape"] = f.dimension == 1 ? json::array({f.shape[0]}) : json::array({f.shape[0], f.shape[1]});
    j["spacing"] = f.dimension == 1 ? json::array({f.spacing[0]})
                                    : json::array({f.spacing[0], f.spacing[1]});
    j["origin"] = f.dimension == 1 ? json::array({f.origin[0]})
                                   : json::array({f.origin[0], f.origin[1]});
    j["values"] = f.values;
    return j;
}

ScalarField scalar_field_from_json(const json& j) {
    const int dim = j.at("dimension").get<int>();
    auto values = j.at("values").get<std::vector<double>>();
    if (dim == 1)
        return ScalarField::make_1d(j.at("shape").at(0).get<int>(),
                                    j.at("spacing").at(0).get<double>(),
                                    j.at("origin").at(0).get<double>(), std::move(values));
    return ScalarField::make_2d(j.at("shape").at(0).get<int>(), j.at("shape").at(1).get<int>(),
                                j.at("spacing").at(0).get<double>(),
                                j.at("spacing").at(1).get<double>(),
                                j.at("origin").at(0).get<double>(),
                                j.at("origin").at(1).get<double>(), std::move(values));
}

json to_json(const SolveReport& r) {
    json j;
    j["iterations"] = r.iterations;
    j["final_residual"] = r.final_residual;
    j["tolerance"] = r.tolerance;
    j["energy"] = r.energy;
    j["converged"] = r.converged;
    json breaks = json::array();
    for (const auto& b : r.breaks)
        breaks.push_back({{"location", b.location},
                          {"left_value", b.left_value},
                          {"right_value", b.right_value},
                          {"jump", b.jump}});
    j["breaks"] = std::move(breaks);
    return j;
}

json to_json(const solver2d::InterfaceMetrics& m) {
    json j;
    j["level"] = m.level;
    j["cov"] = m.cov;
    j["region_count"] = m.region_count;
    j["histogram"] = m.histogram;
    j["histogram_min"] = m.histogram_min;
    j["histogram_max"] = m.histogram_max;
    j["positive_median"] = m.positive_median;
    j["negative_median"] = m.negative_median;
    return j;
}

std::string to_csv(const ScalarField& f) {
    std::string out;
    const int rows = f.dimension == 1 ? 1 : f.shape[0];
    const int cols = f.dimension == 1 ? f.shape[0] : f.shape[1];
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (j) out += ',';
            out += format_double(f.values[static_cast<std::size_t>(i) * cols + j]);
        }
        out += '\n';
    }
    return out;
}

ScalarField scalar_field_from_csv(const std::string& text, double spacing, double origin0,
                                  double origin1) {
    std::vector<double> values;
    int rows = 0;
    int cols = -1;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        int c = 0;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            values.push_back(std::stod(cell));
            ++c;
        }
        if (cols < 0) cols = c;
        else if (cols != c) throw std::invalid_argument("scalar_field_from_csv: ragged rows");
        ++rows;
    }
    if (rows == 0) throw std::invalid_argument("scalar_field_from_csv: empty input");
    if (rows == 1) return ScalarField::make_1d(cols, spacing, origin0, std::move(values));
    return ScalarField::make_2d(rows, cols, spacing, spacing, origin0, origin1, std::move(values));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) { return json::parse(read_text(path)); }

}  // namespace linfty::io
