#pragma once

#include <Eigen/Dense>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "pflm/common.hpp"

// Plain numeric CSV: comma delimiter, LF line endings, no header, '.' decimal
// separator. Values are written with 17 significant digits so that a
// write/read round trip reproduces every double bit-exactly.

namespace pflm {

namespace detail {

inline void append_double(std::string& out, double v, int precision) {
  char buf[64];
  std::to_chars_result r;
  if (precision > 0)
    r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
  else
    r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general);
  out.append(buf, r.ptr);
}

}  // namespace detail

/// 17 significant digits; round-trips exactly through parse_double.
inline std::string format_double(double v) {
  std::string s;
  detail::append_double(s, v, 17);
  return s;
}

/// Shortest representation that still round-trips; used for report files.
inline std::string format_double_short(double v) {
  std::string s;
  detail::append_double(s, v, 0);
  return s;
}

inline double parse_double(std::string_view text, const std::filesystem::path& origin) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last)
    throw format_error("bad numeric field '" + std::string(text) + "' in " + origin.string());
  return v;
}

/// Writes content to a temporary file in the same directory, then renames it
/// over the target so readers never observe a partial file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw io_error("rename failed: " + path.string() + " (" + ec.message() + ")");
}

inline void write_matrix_csv(const std::filesystem::path& path,
                             const Eigen::Ref<const Eigen::MatrixXd>& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.size()) * 20 + 16);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out.push_back(',');
      detail::append_double(out, m(i, j), 17);
    }
    out.push_back('\n');
  }
  atomic_write_text(path, out);
}

inline Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open: " + path.string());
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::vector<double>> rows;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    std::string_view line(content.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      std::vector<double> row;
      std::size_t start = 0;
      while (true) {
        std::size_t comma = line.find(',', start);
        std::string_view field =
            comma == std::string_view::npos ? line.substr(start) : line.substr(start, comma - start);
        row.push_back(parse_double(field, path));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (!rows.empty() && row.size() != rows.front().size())
        throw format_error("ragged rows in " + path.string());
      rows.push_back(std::move(row));
    }
    pos = eol + 1;
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

}  // namespace pflm
