#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pflm/common.hpp"

// Kernel complexity function, critical radius and statistical dimension of an
// empirical kernel spectrum, plus the sketch-size policies built on them.

namespace pflm {

/// R(delta) = sqrt( (1/n) sum_j min(delta, mu_j) ) for a descending,
/// nonnegative eigenvalue profile.
inline double kernel_complexity(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues,
                                double delta) {
  if (delta < 0.0) throw std::invalid_argument("kernel_complexity: delta must be >= 0");
  if (eigenvalues.size() == 0) throw std::invalid_argument("kernel_complexity: empty spectrum");
  double acc = 0.0;
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) acc += std::min(delta, eigenvalues[j]);
  return std::sqrt(acc / static_cast<double>(eigenvalues.size()));
}

/// Smallest positive delta with R(delta) <= delta^2 / sigma, located by
/// bisection to bracket width 1e-10. A spectrum of zeros yields 0.
inline double critical_radius(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues,
                              double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("critical_radius: sigma must be > 0");
  if (eigenvalues.size() == 0) throw std::invalid_argument("critical_radius: empty spectrum");
  const double top = eigenvalues.maxCoeff();
  if (top <= 0.0) return 0.0;

  const auto feasible = [&](double delta) {
    return kernel_complexity(eigenvalues, delta) <= delta * delta / sigma;
  };
  // R is bounded by R(top), so delta = sqrt(sigma R(top)) is always feasible;
  // start above it and double defensively.
  double hi = std::max(1.0, std::sqrt(sigma * kernel_complexity(eigenvalues, top) * 2.0));
  while (!feasible(hi)) hi *= 2.0;
  double lo = 0.0;  // infeasible side: R(delta) ~ c sqrt(delta) beats delta^2 near 0
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;  // feasible end of the final bracket
}

struct StatDimReport {
  double sigma = 1.0;
  double critical_radius = 0.0;
  int stat_dim = 0;
  std::vector<std::pair<double, double>> complexity_curve;  // (delta, R(delta))
};

/// d_n = min{ j : mu_j <= delta_n^2 } (1-based), or n when no j qualifies.
inline StatDimReport statistical_dimension(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues,
                                           double sigma) {
  StatDimReport report;
  report.sigma = sigma;
  report.critical_radius = critical_radius(eigenvalues, sigma);
  const Eigen::Index n = eigenvalues.size();
  const double threshold = report.critical_radius * report.critical_radius;
  report.stat_dim = static_cast<int>(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (eigenvalues[j] <= threshold) {
      report.stat_dim = static_cast<int>(j) + 1;
      break;
    }
  }
  // Sampled curve around the crossing; the probe just below delta_n stays on
  // the infeasible side by construction of the bisection bracket.
  const double dn = report.critical_radius;
  if (dn > 0.0) {
    const double lo = dn * 1e-3;
    const int count = 41;
    for (int i = 0; i < count; ++i) {
      const double d = lo * std::pow(dn * 10.0 / lo, static_cast<double>(i) / (count - 1));
      report.complexity_curve.emplace_back(d, kernel_complexity(eigenvalues, d));
    }
    const double below = std::max(0.0, dn - 1e-10);
    report.complexity_curve.emplace_back(below, kernel_complexity(eigenvalues, below));
    report.complexity_curve.emplace_back(dn, kernel_complexity(eigenvalues, dn));
  } else {
    report.complexity_curve.emplace_back(0.0, 0.0);
  }
  return report;
}

struct SketchDimPolicy {
  enum class Kind { cuberoot, statdim, statdim_ros };
  Kind kind = Kind::cuberoot;
  double c = 1.0;

  static SketchDimPolicy cuberoot() { return {}; }
  static SketchDimPolicy statdim(double c = 1.0) { return {Kind::statdim, c}; }
  static SketchDimPolicy statdim_ros(double c = 1.0) { return {Kind::statdim_ros, c}; }
};

/// Sketch size for a sample of size n. The cuberoot policy is floor(n^(1/3));
/// the statdim policies need the kernel spectrum and noise scale.
inline int choose_sketch_dim(int n, const SketchDimPolicy& policy,
                             const Eigen::Ref<const Eigen::VectorXd>& eigenvalues =
                                 Eigen::VectorXd(),
                             double sigma = 1.0) {
  if (n < 1) throw std::invalid_argument("choose_sketch_dim: n must be >= 1");
  const auto clamp = [n](long long m) {
    return static_cast<int>(std::max(1LL, std::min(static_cast<long long>(n), m)));
  };
  switch (policy.kind) {
    case SketchDimPolicy::Kind::cuberoot: {
      auto m = static_cast<long long>(std::cbrt(static_cast<double>(n)));
      while ((m + 1) * (m + 1) * (m + 1) <= n) ++m;
      while (m > 1 && m * m * m > n) --m;
      return clamp(m);
    }
    case SketchDimPolicy::Kind::statdim:
    case SketchDimPolicy::Kind::statdim_ros: {
      if (!(policy.c > 0.0)) throw std::invalid_argument("choose_sketch_dim: c must be > 0");
      if (eigenvalues.size() == 0)
        throw std::invalid_argument("choose_sketch_dim: statdim policies need the spectrum");
      const StatDimReport report = statistical_dimension(eigenvalues, sigma);
      double target = policy.c * report.stat_dim;
      if (policy.kind == SketchDimPolicy::Kind::statdim_ros) {
        const double ln = std::log(static_cast<double>(n));
        target *= ln * ln * ln * ln;
      }
      return clamp(static_cast<long long>(std::ceil(target)));
    }
  }
  throw std::invalid_argument("choose_sketch_dim: unknown policy");
}

}  // namespace pflm
