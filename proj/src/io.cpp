#include "njgl/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace njgl {

namespace fs = std::filesystem;

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string matrix_to_csv(const Matrix& M) {
    std::string out;
    out.reserve(static_cast<std::size_t>(M.size()) * 24);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out += ',';
            out += format_double(M(i, j));
        }
        out += '\n';
    }
    return out;
}

Matrix matrix_from_csv(const std::string& text, const std::string& origin) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (true) {
            const std::size_t end = std::min(line.find(',', pos), line.size());
            std::size_t a = pos, b = end;
            while (a < b && (line[a] == ' ' || line[a] == '\t')) ++a;
            while (b > a && (line[b - 1] == ' ' || line[b - 1] == '\t')) --b;
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(line.data() + a, line.data() + b, v);
            if (a == b || ec != std::errc() || ptr != line.data() + b || !std::isfinite(v))
                throw IoError(origin + ":" + std::to_string(lineno) + ": bad number '" +
                              line.substr(pos, end - pos) + "'");
            row.push_back(v);
            if (end == line.size()) break;
            pos = end + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError(origin + ":" + std::to_string(lineno) + ": expected " +
                          std::to_string(rows.front().size()) + " columns, found " +
                          std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(origin + ": no data");
    Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return M;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_matrix_csv(const fs::path& path, const Matrix& M) {
    write_file_atomic(path, matrix_to_csv(M));
}

Matrix read_matrix_csv(const fs::path& path) { return matrix_from_csv(read_file(path), path.string()); }

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const fs::path& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

}  // namespace njgl
