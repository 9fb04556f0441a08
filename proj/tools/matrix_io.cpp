#include "matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "nlra/errors.hpp"

namespace nlra::cli {
namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
      ++i;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
      ++j;
    }
    if (j > i) {
      out.push_back(line.substr(i, j - i));
    }
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  if (!tok.empty() && tok.front() == '+') {
    tok.remove_prefix(1);
  }
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

Matrix parse_matrix(std::string_view text, std::string_view source) {
  const std::string where(source);
  auto fail = [&](std::size_t line, const std::string& msg) {
    throw InputError(where + ":" + std::to_string(line) + ": " + msg);
  };
  long long rows = -1;
  long long cols = -1;
  std::vector<double> data;
  long long row = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tokens = split_tokens(line);
    if (tokens.empty() || tokens.front().front() == '#') {
      continue;
    }
    if (rows < 0) {
      if (tokens.size() != 2 || !parse_number(tokens[0], rows) || !parse_number(tokens[1], cols) || rows < 1 ||
          cols < 1) {
        fail(line_no, "expected a header \"rows cols\" with positive integers");
      }
      data.reserve(static_cast<std::size_t>(rows * cols));
      continue;
    }
    ++row;
    if (row > rows) {
      fail(line_no, "found more than the " + std::to_string(rows) + " rows declared in the header");
    }
    if (static_cast<long long>(tokens.size()) != cols) {
      fail(line_no, "row " + std::to_string(row) + " has " + std::to_string(tokens.size()) + " values, expected " +
                        std::to_string(cols));
    }
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      double v = 0.0;
      if (!parse_number(tokens[c], v) || !std::isfinite(v)) {
        fail(line_no, "row " + std::to_string(row) + " column " + std::to_string(c + 1) + ": '" +
                          std::string(tokens[c]) + "' is not a finite number");
      }
      data.push_back(v);
    }
  }
  if (rows < 0) {
    throw InputError(where + ": missing header line");
  }
  if (row != rows) {
    throw InputError(where + ": expected " + std::to_string(rows) + " rows, found " + std::to_string(row));
  }
  return make_matrix(static_cast<Index>(rows), static_cast<Index>(cols), data);
}

Matrix load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str(), path.string());
}

std::string format_matrix(const Matrix& m) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      if (j > 0) {
        out += ' ';
      }
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw InputError("cannot write " + path.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      throw Error("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) { write_file_atomic(path, format_matrix(m)); }

}  // namespace nlra::cli
