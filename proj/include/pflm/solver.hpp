#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pflm/common.hpp"
#include "pflm/csv.hpp"
#include "pflm/dataset.hpp"
#include "pflm/kernel.hpp"
#include "pflm/rng.hpp"
#include "pflm/sketch.hpp"

// Alternating solver for the sketched objective
//   (1/n)||(S K)^T a - (y - Z g)||^2 + mu2 a^T (S K S^T) a + lambda ||g||_1 :
// closed-form alpha solve (jittered Cholesky), proximal-gradient gamma steps
// with soft-thresholding, plus the unsketched reference solver.

namespace pflm {

enum class LipschitzPolicy { exact_power_iteration, backtracking };

struct FitConfig {
  double mu2 = 1e-4;    // smoothness weight, > 0 for fitting
  double lambda = 0.0;  // l1 weight, >= 0
  int max_outer = 500;
  double tol = 1e-8;  // relative objective-change stopping threshold
  double jitter_init = 1e-10;
  double jitter_max = 1e-4;
  LipschitzPolicy lipschitz_policy = LipschitzPolicy::exact_power_iteration;
  double backtrack_eta = 2.0;
  double backtrack_d0 = 1.0;
  int max_inner = 200;      // gamma prox steps per outer iteration
  double tol_inner = 1e-6;  // gamma fixed-point residual target
};

struct SketchId {
  SketchKind kind = SketchKind::identity;
  int m = 0;
  std::uint64_t seed = 0;
};

struct KktResiduals {
  double alpha_residual = 0.0;  // relative residual of the alpha normal equations
  double gamma_residual = 0.0;  // inf-norm of the gamma prox fixed-point gap
};

struct FitResult {
  Eigen::VectorXd alpha;  // m
  Eigen::VectorXd gamma;  // p
  std::vector<double> objective_trace;
  int n_iter = 0;
  bool converged = false;
  SketchId sketch_id;
  KktResiduals kkt;
  double mu2 = 0.0;
  double lambda = 0.0;
};

/// Componentwise sign(u) (|u| - t)_+, the prox of t||.||_1.
inline Eigen::VectorXd soft_threshold(const Eigen::Ref<const Eigen::VectorXd>& u, double t) {
  if (t < 0.0) throw std::invalid_argument("soft_threshold: threshold must be >= 0");
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double mag = std::abs(u[i]) - t;
    out[i] = mag > 0.0 ? (u[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

namespace detail {

/// Largest eigenvalue of a symmetric PSD matrix by power iteration,
/// converged to 1e-8 relative change.
inline double power_iteration_lmax(const Eigen::Ref<const Eigen::MatrixXd>& m,
                                   double tol = 1e-8, int max_iter = 10000) {
  const Eigen::Index p = m.rows();
  if (p == 0 || m.norm() == 0.0) return 0.0;
  SplitRng rng(0x9e3779b97f4a7c15ULL);
  Eigen::VectorXd v(p);
  for (Eigen::Index i = 0; i < p; ++i) v[i] = 0.5 + rng.uniform01(static_cast<std::uint64_t>(i));
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = m * v;
    const double rayleigh = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (it > 0 && std::abs(rayleigh - lambda) <= tol * std::max(std::abs(rayleigh), 1e-300))
      return rayleigh;
    lambda = rayleigh;
  }
  throw numerical_error("power iteration did not converge");
}

/// Cholesky of a PSD system with diagonal jitter escalated by x10 until the
/// factorization succeeds; solves refine against the original matrix.
class PsdSolver {
 public:
  void init(const Eigen::MatrixXd& a, double jitter_init, double jitter_max) {
    a_ = &a;
    scale_ = std::max(a.diagonal().cwiseAbs().mean(), 1e-300);
    double jitter = 0.0;
    while (true) {
      llt_.compute(*a_ + jitter * scale_ *
                             Eigen::MatrixXd::Identity(a.rows(), a.cols()));
      if (llt_.info() == Eigen::Success) return;
      jitter = jitter == 0.0 ? jitter_init : jitter * 10.0;
      if (jitter > jitter_max * 1.0000001)
        throw numerical_error("alpha system not positive definite at maximum jitter");
    }
  }

  Eigen::VectorXd solve(const Eigen::Ref<const Eigen::VectorXd>& b) const {
    const double bn = b.norm();
    if (bn == 0.0) return Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd x = llt_.solve(b);
    double relres = std::numeric_limits<double>::infinity();
    for (int pass = 0; pass < 4; ++pass) {
      Eigen::VectorXd r = b - (*a_) * x;
      relres = r.norm() / bn;
      if (relres <= 1e-13) break;
      x += llt_.solve(r);
    }
    if (!(relres <= 1e-8))
      throw numerical_error("alpha solve residual above 1e-8 after refinement");
    return x;
  }

 private:
  const Eigen::MatrixXd* a_ = nullptr;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double scale_ = 1.0;
};

/// Pieces of the sketched problem that stay fixed while alternating.
/// With a null sketch the identity specialization P = K, Pen = K is used.
struct QuadCore {
  Eigen::Index n = 0, m = 0, p = 0;
  Eigen::MatrixXd p_store, pen_store, a;
  const Eigen::MatrixXd* sk = nullptr;   // (S K), m×n
  const Eigen::MatrixXd* pen = nullptr;  // sym(S K S^T), m×m
  Eigen::MatrixXd ztz;
  Eigen::VectorXd zty;
  double mu2 = 0.0;

  QuadCore(const CrossKernelMatrix& kc, const Eigen::MatrixXd* sketch_values,
           const Eigen::Ref<const Eigen::MatrixXd>& z,
           const Eigen::Ref<const Eigen::VectorXd>& y, double mu2_in) {
    n = kc.n();
    p = z.cols();
    mu2 = mu2_in;
    if (y.size() != n || z.rows() != n)
      throw std::invalid_argument("fit: y/Z rows do not match the kernel matrix");
    if (sketch_values != nullptr) {
      if (sketch_values->cols() != n)
        throw std::invalid_argument("fit: sketch columns do not match the kernel matrix");
      m = sketch_values->rows();
      p_store.noalias() = (*sketch_values) * kc.values;
      Eigen::MatrixXd raw = p_store * sketch_values->transpose();
      pen_store = 0.5 * (raw + raw.transpose());
      sk = &p_store;
      pen = &pen_store;
    } else {
      m = n;
      sk = &kc.values;
      pen = &kc.values;
    }
    a.setZero(m, m);
    a.selfadjointView<Eigen::Lower>().rankUpdate(*sk);
    a = a.selfadjointView<Eigen::Lower>();
    a.noalias() += (static_cast<double>(n) * mu2) * (*pen);
    ztz.noalias() = z.transpose() * z;
    zty.noalias() = z.transpose() * y;
  }

  double objective(const Eigen::Ref<const Eigen::VectorXd>& ksa,
                   const Eigen::Ref<const Eigen::VectorXd>& alpha,
                   const Eigen::Ref<const Eigen::VectorXd>& residual, double lambda,
                   const Eigen::Ref<const Eigen::VectorXd>& gamma) const {
    return (ksa - residual).squaredNorm() / static_cast<double>(n) +
           mu2 * alpha.dot((*pen) * alpha) + lambda * gamma.lpNorm<1>();
  }
};

inline void check_fit_config(const FitConfig& cfg) {
  if (!(cfg.mu2 > 0.0)) throw std::invalid_argument("FitConfig: mu2 must be > 0");
  if (cfg.lambda < 0.0) throw std::invalid_argument("FitConfig: lambda must be >= 0");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("FitConfig: tol must be > 0");
}

inline constexpr double kKktTol = 1e-6;

inline FitResult fit_core(const CrossKernelMatrix& kc, const Eigen::MatrixXd* sketch_values,
                          const Eigen::Ref<const Eigen::MatrixXd>& z,
                          const Eigen::Ref<const Eigen::VectorXd>& y, const FitConfig& cfg,
                          const std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& init,
                          SketchId id) {
  check_fit_config(cfg);
  const QuadCore core(kc, sketch_values, z, y, cfg.mu2);
  const auto n = static_cast<double>(core.n);

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(core.m);
  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(core.p);
  if (init) {
    if (init->first.size() != core.m || init->second.size() != core.p)
      throw std::invalid_argument("fit: init has wrong dimensions");
    alpha = init->first;
    gamma = init->second;
  }

  PsdSolver solver;
  solver.init(core.a, cfg.jitter_init, cfg.jitter_max);

  double stiffness = 0.0;  // Lipschitz bound D for the gamma gradient
  if (core.p > 0 && cfg.lipschitz_policy == LipschitzPolicy::exact_power_iteration)
    stiffness = (2.0 / n) * power_iteration_lmax(core.ztz);

  // Fixed-point residual ||g - prox(g - grad/D)||_inf for the current alpha.
  const auto gamma_fp_residual = [&](const Eigen::VectorXd& gv, const Eigen::VectorXd& g,
                                     double d) {
    if (core.p == 0) return 0.0;
    if (d <= 0.0) return cfg.lambda > 0.0 ? g.lpNorm<Eigen::Infinity>() : 0.0;
    const Eigen::VectorXd grad = gv + (2.0 / n) * (core.ztz * g);
    return (g - soft_threshold(g - grad / d, cfg.lambda / d)).lpNorm<Eigen::Infinity>();
  };

  std::vector<double> trace;
  trace.reserve(16);
  bool converged = false;
  double prev_obj = std::numeric_limits<double>::quiet_NaN();
  bool rel_ok = false;
  double alpha_res = 0.0, gamma_res = 0.0;
  Eigen::VectorXd ksa = Eigen::VectorXd::Zero(core.n);
  Eigen::VectorXd gv = Eigen::VectorXd::Zero(core.p);
  double d_state = cfg.backtrack_d0;

  for (int t = 0; t < cfg.max_outer; ++t) {
    Eigen::VectorXd residual = y - z * gamma;
    Eigen::VectorXd b = (*core.sk) * residual;
    if (t > 0) {
      // Stationarity at the iterate carried over from the previous sweep; the
      // fit stops once the objective stalls and both residuals clear 1e-6.
      const double bn = b.norm();
      alpha_res = (core.a * alpha - b).norm() / std::max(bn, 1e-300);
      const double d_for_res =
          cfg.lipschitz_policy == LipschitzPolicy::exact_power_iteration ? stiffness : d_state;
      gamma_res = gamma_fp_residual(gv, gamma, d_for_res);
      if (rel_ok && alpha_res <= kKktTol && gamma_res <= kKktTol) {
        converged = true;
        break;
      }
    }

    alpha = solver.solve(b);
    ksa.noalias() = core.sk->transpose() * alpha;
    if (core.p > 0) gv = (2.0 / n) * (z.transpose() * ksa - core.zty);

    for (int s = 0; s < cfg.max_inner && core.p > 0; ++s) {
      const Eigen::VectorXd grad = gv + (2.0 / n) * (core.ztz * gamma);
      double d = stiffness;
      Eigen::VectorXd next;
      if (cfg.lipschitz_policy == LipschitzPolicy::exact_power_iteration) {
        if (d <= 0.0) {
          next = cfg.lambda > 0.0 ? Eigen::VectorXd::Zero(core.p).eval() : gamma;
        } else {
          next = soft_threshold(gamma - grad / d, cfg.lambda / d);
        }
      } else {
        // Backtracking: double D until the quadratic majorization of the
        // smooth part holds at the prox candidate.
        const auto smooth = [&](const Eigen::VectorXd& g) {
          return (2.0 / n) * ksa.dot(z * g) + (y - z * g).squaredNorm() / n;
        };
        const double base = smooth(gamma);
        d = d_state;
        for (int k = 0;; ++k) {
          next = soft_threshold(gamma - grad / d, cfg.lambda / d);
          const Eigen::VectorXd step = next - gamma;
          if (smooth(next) <=
              base + grad.dot(step) + 0.5 * d * step.squaredNorm() + 1e-12)
            break;
          d *= cfg.backtrack_eta;
          if (k > 200) throw numerical_error("backtracking failed to find a valid step");
        }
        d_state = d;
      }
      const double move = (next - gamma).lpNorm<Eigen::Infinity>();
      gamma = next;
      if (move <= cfg.tol_inner) break;
    }

    const double obj = core.objective(ksa, alpha, y - z * gamma, cfg.lambda, gamma);
    if (!std::isfinite(obj)) throw numerical_error("fit: objective is not finite");
    trace.push_back(obj);
    rel_ok = trace.size() >= 2 &&
             std::abs(prev_obj - obj) <= cfg.tol * std::max(std::abs(prev_obj), 1e-300);
    prev_obj = obj;
  }

  if (!converged) {
    const Eigen::VectorXd residual = y - z * gamma;
    const Eigen::VectorXd b = (*core.sk) * residual;
    alpha_res = (core.a * alpha - b).norm() / std::max(b.norm(), 1e-300);
    const double d_for_res =
        cfg.lipschitz_policy == LipschitzPolicy::exact_power_iteration ? stiffness : d_state;
    gamma_res = gamma_fp_residual(gv, gamma, d_for_res);
  }

  FitResult out;
  out.alpha = std::move(alpha);
  out.gamma = std::move(gamma);
  out.objective_trace = std::move(trace);
  out.n_iter = static_cast<int>(out.objective_trace.size());
  out.converged = converged;
  out.sketch_id = id;
  out.kkt = {alpha_res, gamma_res};
  out.mu2 = cfg.mu2;
  out.lambda = cfg.lambda;
  return out;
}

inline void check_sketch_shapes(const CrossKernelMatrix& kc, const SketchMatrix& sketch) {
  if (sketch.values.cols() != kc.n() || sketch.values.rows() != sketch.m)
    throw std::invalid_argument("sketch dimensions do not match the kernel matrix");
}

}  // namespace detail

/// Value of the sketched objective at (alpha, gamma). mu2 = 0 is allowed here.
inline double objective(const CrossKernelMatrix& kc, const Eigen::Ref<const Eigen::MatrixXd>& z,
                        const Eigen::Ref<const Eigen::VectorXd>& y, const SketchMatrix& sketch,
                        const Eigen::Ref<const Eigen::VectorXd>& alpha,
                        const Eigen::Ref<const Eigen::VectorXd>& gamma, const FitConfig& cfg) {
  detail::check_sketch_shapes(kc, sketch);
  if (alpha.size() != sketch.m || gamma.size() != z.cols() || y.size() != kc.n() ||
      z.rows() != kc.n())
    throw std::invalid_argument("objective: shape mismatch");
  if (cfg.lambda < 0.0) throw std::invalid_argument("objective: lambda must be >= 0");
  const auto n = static_cast<double>(kc.n());
  const Eigen::VectorXd sa = sketch.values.transpose() * alpha;
  const Eigen::VectorXd ksa = kc.values * sa;
  const Eigen::VectorXd residual = y - z * gamma;
  return (ksa - residual).squaredNorm() / n + cfg.mu2 * sa.dot(ksa) +
         cfg.lambda * gamma.lpNorm<1>();
}

/// Closed-form minimizer over alpha with gamma held fixed:
/// ((S K)(S K)^T + n mu2 S K S^T)^{-1} S K (y - Z gamma).
inline Eigen::VectorXd alpha_update(const CrossKernelMatrix& kc,
                                    const Eigen::Ref<const Eigen::MatrixXd>& z,
                                    const Eigen::Ref<const Eigen::VectorXd>& y,
                                    const SketchMatrix& sketch,
                                    const Eigen::Ref<const Eigen::VectorXd>& gamma,
                                    const FitConfig& cfg) {
  detail::check_sketch_shapes(kc, sketch);
  detail::check_fit_config(cfg);
  if (gamma.size() != z.cols()) throw std::invalid_argument("alpha_update: gamma size mismatch");
  const detail::QuadCore core(kc, &sketch.values, z, y, cfg.mu2);
  detail::PsdSolver solver;
  solver.init(core.a, cfg.jitter_init, cfg.jitter_max);
  return solver.solve((*core.sk) * (y - z * gamma));
}

/// Gradient of the smooth gamma part: (2/n) Z^T [(S K)^T alpha + Z gamma - y].
inline Eigen::VectorXd gamma_gradient(const CrossKernelMatrix& kc,
                                      const Eigen::Ref<const Eigen::MatrixXd>& z,
                                      const Eigen::Ref<const Eigen::VectorXd>& y,
                                      const SketchMatrix& sketch,
                                      const Eigen::Ref<const Eigen::VectorXd>& alpha,
                                      const Eigen::Ref<const Eigen::VectorXd>& gamma) {
  detail::check_sketch_shapes(kc, sketch);
  if (alpha.size() != sketch.m || gamma.size() != z.cols() || y.size() != kc.n())
    throw std::invalid_argument("gamma_gradient: shape mismatch");
  const auto n = static_cast<double>(kc.n());
  const Eigen::VectorXd ksa = kc.values * (sketch.values.transpose() * alpha);
  return (2.0 / n) * (z.transpose() * (ksa + z * gamma - y));
}

/// One proximal step on gamma with step 1/D, D per the configured policy.
inline Eigen::VectorXd gamma_update(const CrossKernelMatrix& kc,
                                    const Eigen::Ref<const Eigen::MatrixXd>& z,
                                    const Eigen::Ref<const Eigen::VectorXd>& y,
                                    const SketchMatrix& sketch,
                                    const Eigen::Ref<const Eigen::VectorXd>& alpha,
                                    const Eigen::Ref<const Eigen::VectorXd>& gamma,
                                    const FitConfig& cfg) {
  const Eigen::VectorXd grad = gamma_gradient(kc, z, y, sketch, alpha, gamma);
  const auto n = static_cast<double>(kc.n());
  if (cfg.lipschitz_policy == LipschitzPolicy::exact_power_iteration) {
    const double d = (2.0 / n) * detail::power_iteration_lmax(z.transpose() * z);
    if (d <= 0.0) return cfg.lambda > 0.0 ? Eigen::VectorXd::Zero(gamma.size()).eval() : gamma;
    return soft_threshold(gamma - grad / d, cfg.lambda / d);
  }
  const Eigen::VectorXd ksa = kc.values * (sketch.values.transpose() * alpha);
  const auto smooth = [&](const Eigen::Ref<const Eigen::VectorXd>& g) {
    return (2.0 / n) * ksa.dot(z * g) + (y - z * g).squaredNorm() / n;
  };
  const double base = smooth(gamma);
  double d = cfg.backtrack_d0;
  for (int k = 0;; ++k) {
    Eigen::VectorXd next = soft_threshold(gamma - grad / d, cfg.lambda / d);
    const Eigen::VectorXd step = next - gamma;
    if (smooth(next) <= base + grad.dot(step) + 0.5 * d * step.squaredNorm() + 1e-12) return next;
    d *= cfg.backtrack_eta;
    if (k > 200) throw numerical_error("backtracking failed to find a valid step");
  }
}

/// Alternating fit of the sketched problem. Starts from (0, 0) unless an
/// initial pair is supplied; the objective trace is nonincreasing.
inline FitResult fit(const CrossKernelMatrix& kc, const Eigen::Ref<const Eigen::MatrixXd>& z,
                     const Eigen::Ref<const Eigen::VectorXd>& y, const SketchMatrix& sketch,
                     const FitConfig& cfg,
                     const std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& init =
                         std::nullopt) {
  detail::check_sketch_shapes(kc, sketch);
  return detail::fit_core(kc, &sketch.values, z, y, cfg, init,
                          SketchId{sketch.kind, sketch.m, sketch.seed});
}

/// Unsketched reference: solves the full problem with an n-dimensional alpha.
inline FitResult fit_exact(const CrossKernelMatrix& kc,
                           const Eigen::Ref<const Eigen::MatrixXd>& z,
                           const Eigen::Ref<const Eigen::VectorXd>& y, const FitConfig& cfg,
                           const std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>>&
                               init = std::nullopt) {
  return detail::fit_core(kc, nullptr, z, y, cfg, init,
                          SketchId{SketchKind::identity, static_cast<int>(kc.n()), 0});
}

/// Evaluable representation of the fitted slope: combined coefficients
/// c = S^T alpha and the slope values on the training grid.
struct SlopePredictor {
  Grid grid;
  Eigen::VectorXd coefficients;  // c, length n
  Eigen::VectorXd gamma;
  Eigen::VectorXd slope_grid;  // fitted slope sampled on the grid

  /// Quadrature of <x_new, fitted slope>.
  double slope_inner(const Eigen::Ref<const Eigen::VectorXd>& x_new) const {
    if (x_new.size() != grid.num_points)
      throw std::invalid_argument("SlopePredictor: grid mismatch");
    return grid.weight * x_new.dot(slope_grid);
  }

  double predict(const Eigen::Ref<const Eigen::VectorXd>& x_new,
                 const Eigen::Ref<const Eigen::VectorXd>& z_new) const {
    if (z_new.size() != gamma.size())
      throw std::invalid_argument("SlopePredictor: scalar covariate size mismatch");
    return slope_inner(x_new) + gamma.dot(z_new);
  }
};

/// Builds the predictor from a fit; pass sketch = nullptr for exact fits.
/// The gram matrix is the kernel on grid×grid (kernel_gram), shareable
/// across many predictors on the same grid.
inline SlopePredictor make_predictor(const FitResult& fit_result, const SketchMatrix* sketch,
                                     const FunctionalDataset& ds,
                                     const Eigen::Ref<const Eigen::MatrixXd>& gram) {
  SlopePredictor pred;
  pred.grid = ds.grid;
  pred.coefficients =
      sketch != nullptr ? (sketch->values.transpose() * fit_result.alpha).eval() : fit_result.alpha;
  if (pred.coefficients.size() != ds.n())
    throw std::invalid_argument("make_predictor: coefficient length does not match dataset");
  pred.gamma = fit_result.gamma;
  pred.slope_grid =
      ds.grid.weight * (gram * (ds.x_values.transpose() * pred.coefficients));
  return pred;
}

inline SlopePredictor make_predictor(const FitResult& fit_result, const SketchMatrix* sketch,
                                     const FunctionalDataset& ds, const KernelFunction& kernel) {
  return make_predictor(fit_result, sketch, ds, kernel_gram(kernel, ds.grid));
}

/// Prediction for a new (curve, scalar) pair via the double quadrature
/// k_k = iint x_new(t) X_k(u) K(t,u) dt du and c^T k + z^T gamma.
inline double predict(const FitResult& fit_result, const SketchMatrix& sketch,
                      const FunctionalDataset& ds_train, const KernelFunction& kernel,
                      const Eigen::Ref<const Eigen::VectorXd>& x_new,
                      const Eigen::Ref<const Eigen::VectorXd>& z_new) {
  if (x_new.size() != ds_train.grid.num_points)
    throw std::invalid_argument("predict: x_new does not match the training grid");
  if (z_new.size() != fit_result.gamma.size())
    throw std::invalid_argument("predict: z_new does not match the fitted gamma");
  const Eigen::VectorXd c = sketch.values.transpose() * fit_result.alpha;
  const double w = ds_train.grid.weight;
  const Eigen::VectorXd kvec =
      (w * w) * (ds_train.x_values * (kernel_gram(kernel, ds_train.grid) * x_new));
  return c.dot(kvec) + fit_result.gamma.dot(z_new);
}

inline nlohmann::json fit_result_to_json(const FitResult& f) {
  nlohmann::json j;
  j["alpha"] = std::vector<double>(f.alpha.data(), f.alpha.data() + f.alpha.size());
  j["gamma"] = std::vector<double>(f.gamma.data(), f.gamma.data() + f.gamma.size());
  j["sketch"] = {{"kind", to_string(f.sketch_id.kind)},
                 {"m", f.sketch_id.m},
                 {"seed", f.sketch_id.seed}};
  j["mu2"] = f.mu2;
  j["lambda"] = f.lambda;
  j["n_iter"] = f.n_iter;
  j["converged"] = f.converged;
  j["objective_trace"] = f.objective_trace;
  j["kkt"] = {{"alpha_res", f.kkt.alpha_residual}, {"gamma_res", f.kkt.gamma_residual}};
  return j;
}

inline void save_fit_result(const FitResult& f, const std::filesystem::path& path) {
  atomic_write_text(path, fit_result_to_json(f).dump(2) + "\n");
}

}  // namespace pflm
