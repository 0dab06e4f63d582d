#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "pflm/csv.hpp"
#include "pflm/dataset.hpp"
#include "pflm/grid.hpp"
#include "pflm/rng.hpp"

// Synthetic data for the two simulation examples. Curves are 50-mode
// expansions X(t) = xi_1 U_1 + sum_{k=2..50} xi_k U_k sqrt(2) cos(k pi t)
// with U_k ~ U(-sqrt(3), sqrt(3)); responses use the exact spectral value of
// the slope integral so quadrature error never enters the ground truth.

namespace pflm {

inline constexpr int kSimModes = 50;

struct SimSpec {
  int example_id = 1;  // 1 or 2
  int n = 0;
  int p = 50;
  double v = 2.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  Eigen::VectorXd gamma0;  // defaults to (2, -2, 0, ..., 0)
};

inline Eigen::VectorXd default_gamma0(int p) {
  if (p < 2) throw std::invalid_argument("default_gamma0: p must be >= 2");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(p);
  g[0] = 2.0;
  g[1] = -2.0;
  return g;
}

/// Closed-form generation record kept alongside a simulated dataset: slope
/// coefficients g, process scales xi and the raw U draws.
struct SpectralTruth {
  Eigen::VectorXd g;        // 50 slope cosine coefficients
  Eigen::VectorXd xi;       // 50 process scales
  Eigen::MatrixXd u_draws;  // n×50
  Eigen::VectorXd gamma0;
};

/// Slope coefficients g_k = 4 (-1)^{k+1} k^{-2}, k = 1..50.
inline Eigen::VectorXd slope_coefficients() {
  Eigen::VectorXd g(kSimModes);
  for (int k = 1; k <= kSimModes; ++k)
    g[k - 1] = 4.0 * ((k % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(k) * k);
  return g;
}

/// Process scales xi_k for the chosen example and smoothness v.
inline Eigen::VectorXd xi_sequence(int example_id, double v) {
  if (!(v > 0.0)) throw std::invalid_argument("xi_sequence: v must be > 0");
  Eigen::VectorXd xi(kSimModes);
  if (example_id == 1) {
    for (int k = 1; k <= kSimModes; ++k)
      xi[k - 1] = ((k % 2 == 1) ? 1.0 : -1.0) * std::pow(static_cast<double>(k), -v / 2.0);
  } else if (example_id == 2) {
    xi[0] = 1.0;
    for (int k = 2; k <= 4; ++k)
      xi[k - 1] = 0.2 * ((k % 2 == 1) ? 1.0 : -1.0) * (1.0 - 0.0001 * k);
    for (int k = 5; k <= kSimModes; ++k) {
      const double base = std::pow(5.0 * (k / 5), -v / 2.0) - 0.0001 * (k % 5);
      xi[k - 1] = 0.2 * ((k % 2 == 1) ? 1.0 : -1.0) * base;
    }
  } else {
    throw std::invalid_argument("xi_sequence: example_id must be 1 or 2");
  }
  return xi;
}

/// Rows are the 50 process modes on the grid: row 1 is the constant function,
/// row k (k >= 2) is sqrt(2) cos(k pi t).
inline Eigen::MatrixXd process_basis_on_grid(const Grid& grid) {
  Eigen::MatrixXd basis(kSimModes, grid.num_points);
  basis.row(0).setOnes();
  for (int k = 2; k <= kSimModes; ++k)
    for (int a = 0; a < grid.num_points; ++a)
      basis(k - 1, a) = std::numbers::sqrt2 * std::cos(k * std::numbers::pi * grid.points[a]);
  return basis;
}

/// True slope f*(t) = sum_{k=1..50} g_k sqrt(2) cos(k pi t) on the grid.
inline Eigen::VectorXd slope_from_coefficients(const Eigen::Ref<const Eigen::VectorXd>& g,
                                               const Grid& grid) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(grid.num_points);
  for (int k = 1; k <= static_cast<int>(g.size()); ++k)
    for (int a = 0; a < grid.num_points; ++a)
      f[a] += g[k - 1] * std::numbers::sqrt2 * std::cos(k * std::numbers::pi * grid.points[a]);
  return f;
}

inline Eigen::VectorXd true_slope_on_grid(const Grid& grid) {
  return slope_from_coefficients(slope_coefficients(), grid);
}

/// Coefficients of each curve in the kernel eigenbasis sqrt(2) cos(l pi t):
/// column l-1 holds <X_i, phi_l>. The constant process mode carries no
/// cosine energy, so column 1 is zero and column l (l >= 2) is xi_l U_l.
inline Eigen::MatrixXd kernel_basis_coefficients(const SpectralTruth& truth) {
  Eigen::MatrixXd coeffs = truth.u_draws;
  coeffs.array().rowwise() *= truth.xi.transpose().array();
  coeffs.col(0).setZero();
  return coeffs;
}

struct GenerateOptions {
  bool with_noise = true;
  bool with_scalar = true;
};

/// Draws (U, Z, eps) from per-entity seeded streams in row-major order and
/// assembles the dataset. Y uses the exact spectral integral of f* against
/// each curve, not quadrature.
inline std::pair<FunctionalDataset, SpectralTruth> generate(const SimSpec& spec, const Grid& grid,
                                                            const GenerateOptions& options = {}) {
  if (spec.n < 1) throw std::invalid_argument("generate: n must be >= 1");
  if (spec.p < 2) throw std::invalid_argument("generate: p must be >= 2");
  if (!(spec.sigma >= 0.0)) throw std::invalid_argument("generate: sigma must be >= 0");

  SpectralTruth truth;
  truth.g = slope_coefficients();
  truth.xi = xi_sequence(spec.example_id, spec.v);
  truth.gamma0 = spec.gamma0.size() > 0 ? spec.gamma0 : default_gamma0(spec.p);
  if (truth.gamma0.size() != spec.p)
    throw std::invalid_argument("generate: gamma0 length does not match p");

  RngStream u_stream(derive_seed(spec.seed, {stream_tag("U")}));
  truth.u_draws.resize(spec.n, kSimModes);
  const double bound = std::sqrt(3.0);
  for (int i = 0; i < spec.n; ++i)
    for (int k = 0; k < kSimModes; ++k) truth.u_draws(i, k) = u_stream.uniform(-bound, bound);

  RngStream z_stream(derive_seed(spec.seed, {stream_tag("Z")}));
  Eigen::MatrixXd z(spec.n, spec.p);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.p; ++j) z(i, j) = z_stream.uniform01();

  RngStream eps_stream(derive_seed(spec.seed, {stream_tag("epsilon")}));
  Eigen::VectorXd eps(spec.n);
  for (int i = 0; i < spec.n; ++i) eps[i] = spec.sigma * eps_stream.normal();

  FunctionalDataset ds;
  ds.grid = grid;
  Eigen::MatrixXd scaled = truth.u_draws;
  scaled.array().rowwise() *= truth.xi.transpose().array();
  ds.x_values.noalias() = scaled * process_basis_on_grid(grid);
  ds.z = std::move(z);
  ds.y = kernel_basis_coefficients(truth) * truth.g;
  if (options.with_scalar) ds.y += ds.z * truth.gamma0;
  if (options.with_noise) ds.y += eps;
  ds.meta = {spec.example_id, spec.v, spec.seed, spec.sigma};
  return {std::move(ds), std::move(truth)};
}

inline void save_truth(const SpectralTruth& truth, const std::filesystem::path& path) {
  nlohmann::json j;
  j["g"] = std::vector<double>(truth.g.data(), truth.g.data() + truth.g.size());
  j["xi"] = std::vector<double>(truth.xi.data(), truth.xi.data() + truth.xi.size());
  j["gamma0"] =
      std::vector<double>(truth.gamma0.data(), truth.gamma0.data() + truth.gamma0.size());
  atomic_write_text(path, j.dump(2) + "\n");
}

}  // namespace pflm
