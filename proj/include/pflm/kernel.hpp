#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pflm/common.hpp"
#include "pflm/dataset.hpp"
#include "pflm/grid.hpp"

// Reproducing kernels on [0,1], the data-dependent basis B_k(t) = <X_k, K(t,.)>
// and the cross-kernel matrix K^c with entries <X_i, B_k>.

namespace pflm {

/// Fourth Bernoulli polynomial B4(x) = x^4 - 2x^3 + x^2 - 1/30 on [0,1].
inline double bernoulli_b4(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("bernoulli_b4: x outside [0,1]");
  const double q = x * (1.0 - x);  // B4 is symmetric about 1/2
  return q * q - 1.0 / 30.0;
}

enum class KernelKind { bernoulli, custom_spectral };

/// Symmetric positive semi-definite kernel on [0,1]^2. The bernoulli kind is
/// K(s,t) = -B4(|s-t|/2)/3 - B4((s+t)/2)/3, whose eigenpairs are
/// ((k*pi)^-4, sqrt(2)*cos(k*pi*t)). A custom_spectral kernel is a finite
/// cosine-basis expansion with caller-supplied eigenvalues.
struct KernelFunction {
  KernelKind kind = KernelKind::bernoulli;
  std::vector<double> theta;  // custom_spectral eigenvalues, mode 1..L
  bool cosine_basis = true;

  static KernelFunction bernoulli() { return KernelFunction{}; }

  static KernelFunction custom_spectral(std::vector<double> eigenvalues, bool cosine = true) {
    if (!cosine)
      throw std::invalid_argument("KernelFunction: only the cosine eigenbasis is supported");
    KernelFunction k;
    k.kind = KernelKind::custom_spectral;
    k.theta = std::move(eigenvalues);
    return k;
  }

  double operator()(double s, double t) const;
};

inline double kernel_eval(const KernelFunction& kernel, double s, double t) {
  if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("kernel_eval: arguments outside [0,1]");
  if (kernel.kind == KernelKind::bernoulli)
    return -(bernoulli_b4(std::abs(s - t) / 2.0) + bernoulli_b4((s + t) / 2.0)) / 3.0;
  double acc = 0.0;
  for (std::size_t l = 0; l < kernel.theta.size(); ++l) {
    const double w = (static_cast<double>(l) + 1.0) * std::numbers::pi;
    acc += kernel.theta[l] * 2.0 * std::cos(w * s) * std::cos(w * t);
  }
  return acc;
}

inline double KernelFunction::operator()(double s, double t) const { return kernel_eval(*this, s, t); }

/// Truncated spectral series sum_{k<=terms} 2 (k pi)^-4 cos(k pi s) cos(k pi t);
/// the series definition the bernoulli closed form must reproduce.
inline double bernoulli_kernel_series(double s, double t, int terms) {
  if (!(s >= 0.0 && s <= 1.0 && t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("bernoulli_kernel_series: arguments outside [0,1]");
  double acc = 0.0;
  for (int k = terms; k >= 1; --k) {
    const double w = k * std::numbers::pi;
    acc += 2.0 / (w * w * w * w) * std::cos(w * s) * std::cos(w * t);
  }
  return acc;
}

/// Eigenvalues (k pi)^-4, k = 1..count, of the bernoulli kernel in the
/// orthonormal cosine basis sqrt(2) cos(k pi t).
inline std::vector<double> bernoulli_eigenvalues(int count) {
  std::vector<double> theta(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k)
    theta[static_cast<std::size_t>(k - 1)] = std::pow(k * std::numbers::pi, -4.0);
  return theta;
}

/// Kernel evaluated on the grid×grid tensor, K(t_a, t_b).
inline Eigen::MatrixXd kernel_gram(const KernelFunction& kernel, const Grid& grid) {
  const int g = grid.num_points;
  Eigen::MatrixXd gram(g, g);
  for (int a = 0; a < g; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double v = kernel_eval(kernel, grid.points[a], grid.points[b]);
      gram(a, b) = v;
      gram(b, a) = v;
    }
  }
  return gram;
}

/// Row k holds B_k on the grid: B_k(t_a) = sum_b w X_k(u_b) K(u_b, t_a).
inline Eigen::MatrixXd basis_functions(const KernelFunction& kernel, const FunctionalDataset& ds) {
  validate_dataset(ds);
  if (ds.n() == 0) throw std::invalid_argument("basis_functions: empty dataset");
  return ds.grid.weight * (ds.x_values * kernel_gram(kernel, ds.grid));
}

/// The n×n cross-kernel matrix together with a lazily computed, cached
/// eigendecomposition (descending eigenvalues, tiny negatives clipped to 0).
class CrossKernelMatrix {
 public:
  Eigen::MatrixXd values;

  CrossKernelMatrix() : cache_(std::make_shared<Cache>()) {}
  explicit CrossKernelMatrix(Eigen::MatrixXd v)
      : values(std::move(v)), cache_(std::make_shared<Cache>()) {}

  Eigen::Index n() const { return values.rows(); }

  const Eigen::VectorXd& eigenvalues() const {
    ensure_eigen();
    return cache_->eigenvalues;
  }

  const Eigen::MatrixXd& eigenvectors() const {
    ensure_eigen();
    return cache_->eigenvectors;
  }

 private:
  struct Cache {
    std::mutex mutex;
    bool done = false;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
  };

  void ensure_eigen() const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (cache_->done) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(values);
    if (solver.info() != Eigen::Success)
      throw numerical_error("CrossKernelMatrix: eigendecomposition failed");
    // Eigen returns ascending order; store descending.
    const Eigen::Index n = values.rows();
    Eigen::VectorXd ev(n);
    Eigen::MatrixXd vec(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      ev[j] = solver.eigenvalues()[n - 1 - j];
      vec.col(j) = solver.eigenvectors().col(n - 1 - j);
    }
    const double top = n > 0 ? ev[0] : 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (ev[j] < -1e-8 * top)
        throw numerical_error("CrossKernelMatrix: eigenvalue " + std::to_string(ev[j]) +
                              " below the PSD tolerance");
      if (ev[j] < 0.0) ev[j] = 0.0;
    }
    cache_->eigenvalues = std::move(ev);
    cache_->eigenvectors = std::move(vec);
    cache_->done = true;
  }

  std::shared_ptr<Cache> cache_;
};

/// K^c_{ik} = <X_i, B_k> by double quadrature, symmetrized as (M + M^T)/2.
inline CrossKernelMatrix build_kc(const KernelFunction& kernel, const FunctionalDataset& ds) {
  validate_dataset(ds);
  if (ds.n() == 0) throw std::invalid_argument("build_kc: empty dataset");
  const double w = ds.grid.weight;
  Eigen::MatrixXd m = (w * w) * (ds.x_values * kernel_gram(kernel, ds.grid) * ds.x_values.transpose());
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  return CrossKernelMatrix(std::move(sym));
}

/// Exact-series K^c for curves with known basis coefficients:
/// entry (i,k) = sum_l theta_l coeffs(i,l) coeffs(k,l). Test oracle for build_kc.
inline Eigen::MatrixXd kc_spectral_oracle(const std::vector<double>& theta,
                                          const Eigen::Ref<const Eigen::MatrixXd>& coeffs) {
  if (coeffs.cols() != static_cast<Eigen::Index>(theta.size()))
    throw std::invalid_argument("kc_spectral_oracle: coefficient columns do not match theta");
  Eigen::VectorXd t(coeffs.cols());
  for (Eigen::Index l = 0; l < t.size(); ++l) t[l] = theta[static_cast<std::size_t>(l)];
  return coeffs * t.asDiagonal() * coeffs.transpose();
}

}  // namespace pflm
