#pragma once

#include "njgl/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace njgl {

/// Missing files, unreadable content, malformed CSV or JSON.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Formats with printf "%.17g" (round-trips every double).
std::string format_double(double x);

/// Dense, row-major, header-free, comma-delimited.
std::string matrix_to_csv(const Matrix& M);
Matrix matrix_from_csv(const std::string& text, const std::string& origin = "<string>");

/// Writes to a temporary file in the same directory, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path, const Matrix& M);
Matrix read_matrix_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace njgl
