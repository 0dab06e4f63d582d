#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "pflm/rng.hpp"

// The three m×n random sketch constructions. Each is a pure function of
// (m, n, seed); rows of the ROS and SUB sketches have squared norm exactly n/m.

namespace pflm {

enum class SketchKind { grs, ros, sub, identity };

inline std::string to_string(SketchKind k) {
  switch (k) {
    case SketchKind::grs: return "grs";
    case SketchKind::ros: return "ros";
    case SketchKind::sub: return "sub";
    case SketchKind::identity: return "none";
  }
  return "?";
}

struct SketchMatrix {
  SketchKind kind = SketchKind::identity;
  int m = 0;
  int n = 0;
  Eigen::MatrixXd values;  // m×n
  std::uint64_t seed = 0;
};

namespace detail {

inline void check_sketch_dims(int m, int n) {
  if (m < 1 || m > n) throw std::invalid_argument("sketch: need 1 <= m <= n");
}

/// Unnormalized in-place Walsh-Hadamard transform; size must be a power of two.
inline void fwht(std::vector<double>& x) {
  const std::size_t n = x.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double a = x[j];
        const double b = x[j + h];
        x[j] = a + b;
        x[j + h] = a - b;
      }
    }
  }
}

/// Row j of the 1/sqrt(n)-normalized Hadamard matrix, entries ±1/sqrt(n).
inline void hadamard_row(int j, int n, Eigen::Ref<Eigen::RowVectorXd> out) {
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k)
    out[k] = (std::popcount(static_cast<unsigned>(j) & static_cast<unsigned>(k)) & 1) ? -s : s;
}

/// Row j of the orthonormal DCT-II matrix; used when n is not a power of two.
/// Entries are bounded by sqrt(2/n).
inline void dct_row(int j, int n, Eigen::Ref<Eigen::RowVectorXd> out) {
  if (j == 0) {
    out.setConstant(std::sqrt(1.0 / n));
    return;
  }
  const double scale = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k)
    out[k] = scale * std::cos(std::numbers::pi * (k + 0.5) * j / n);
}

/// First m entries of a seeded permutation of {0..n-1} (partial Fisher-Yates).
inline std::vector<int> sample_without_replacement(int m, int n, RngStream& stream) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < m; ++i) {
    const auto j = i + static_cast<int>(stream.index(static_cast<std::size_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  idx.resize(static_cast<std::size_t>(m));
  return idx;
}

}  // namespace detail

/// Entries i.i.d. N(0, 1/m), so that E[S^T S] = I_n.
inline SketchMatrix gaussian_sketch(int m, int n, std::uint64_t seed) {
  detail::check_sketch_dims(m, n);
  SketchMatrix s{SketchKind::grs, m, n, Eigen::MatrixXd(m, n), seed};
  RngStream stream(derive_seed(seed, {stream_tag("grs")}));
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) s.values(i, j) = scale * stream.normal();
  return s;
}

/// Rows sqrt(n/m) * (sampled row of an orthonormal H) with Rademacher sign
/// flips. H is the normalized Hadamard matrix when n is a power of two and
/// the orthonormal DCT-II otherwise.
inline SketchMatrix ros_sketch(int m, int n, std::uint64_t seed) {
  detail::check_sketch_dims(m, n);
  SketchMatrix s{SketchKind::ros, m, n, Eigen::MatrixXd(m, n), seed};
  RngStream sign_stream(derive_seed(seed, {stream_tag("ros-signs")}));
  Eigen::VectorXd signs(n);
  for (int k = 0; k < n; ++k) signs[k] = sign_stream.uniform01() < 0.5 ? -1.0 : 1.0;
  RngStream row_stream(derive_seed(seed, {stream_tag("ros-rows")}));
  const std::vector<int> rows = detail::sample_without_replacement(m, n, row_stream);
  const bool pow2 = std::has_single_bit(static_cast<unsigned>(n));
  const double scale = std::sqrt(static_cast<double>(n) / m);
  Eigen::RowVectorXd h(n);
  for (int i = 0; i < m; ++i) {
    if (pow2)
      detail::hadamard_row(rows[static_cast<std::size_t>(i)], n, h);
    else
      detail::dct_row(rows[static_cast<std::size_t>(i)], n, h);
    s.values.row(i) = scale * h.cwiseProduct(signs.transpose());
  }
  return s;
}

/// One nonzero sqrt(n/m) per row at column indices sampled without replacement.
inline SketchMatrix sub_sketch(int m, int n, std::uint64_t seed) {
  detail::check_sketch_dims(m, n);
  SketchMatrix s{SketchKind::sub, m, n, Eigen::MatrixXd::Zero(m, n), seed};
  RngStream row_stream(derive_seed(seed, {stream_tag("sub-rows")}));
  const std::vector<int> cols = detail::sample_without_replacement(m, n, row_stream);
  const double scale = std::sqrt(static_cast<double>(n) / m);
  for (int i = 0; i < m; ++i) s.values(i, cols[static_cast<std::size_t>(i)]) = scale;
  return s;
}

/// S = I_n; turns the sketched problem into the exact one.
inline SketchMatrix identity_sketch(int n) {
  if (n < 1) throw std::invalid_argument("identity_sketch: n must be >= 1");
  return SketchMatrix{SketchKind::identity, n, n, Eigen::MatrixXd::Identity(n, n), 0};
}

inline SketchMatrix make_sketch(SketchKind kind, int m, int n, std::uint64_t seed) {
  switch (kind) {
    case SketchKind::grs: return gaussian_sketch(m, n, seed);
    case SketchKind::ros: return ros_sketch(m, n, seed);
    case SketchKind::sub: return sub_sketch(m, n, seed);
    case SketchKind::identity: return identity_sketch(n);
  }
  throw std::invalid_argument("make_sketch: unknown kind");
}

}  // namespace pflm
