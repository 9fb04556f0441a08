#pragma once

// Text matrix files: a "rows cols" header line, then one line per row with
// space separated values. Lines starting with '#' are comments.

#include <filesystem>
#include <string>
#include <string_view>

#include "nlra/linalg.hpp"

namespace nlra::cli {

Matrix parse_matrix(std::string_view text, std::string_view source = "<input>");
Matrix load_matrix(const std::filesystem::path& path);

/// Values printed with 17 significant digits, LF line endings.
std::string format_matrix(const Matrix& m);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void save_matrix(const std::filesystem::path& path, const Matrix& m);

}  // namespace nlra::cli
