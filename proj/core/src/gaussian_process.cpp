#include "stdpgen/gaussian_process.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "stdpgen/errors.hpp"

namespace stdpgen {

double matern52(std::span<const double> a, std::span<const double> b, const GpHyper& h) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = (a[i] - b[i]) / h.length_scales[i];
    r2 += d * d;
  }
  const double r = std::sqrt(5.0 * r2);
  return h.signal_var * (1.0 + r + 5.0 * r2 / 3.0) * std::exp(-r);
}

struct GaussianProcess::Impl {
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::VectorXd alpha;
};

namespace {

struct Standardised {
  std::vector<double> z;
  double mean = 0.0;
  double scale = 1.0;
};

Standardised standardise(const std::vector<double>& y) {
  Standardised s;
  const double n = static_cast<double>(y.size());
  s.mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : y) ss += (v - s.mean) * (v - s.mean);
  const double sd = std::sqrt(ss / n);
  s.scale = sd > 1e-12 * std::max(1.0, std::abs(s.mean)) ? sd : 1.0;
  for (double v : y) s.z.push_back((v - s.mean) / s.scale);
  return s;
}

Eigen::MatrixXd gram(const std::vector<std::vector<double>>& x, const GpHyper& h) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = matern52(x[i], x[j], h);
      k(i, j) = v;
      k(j, i) = v;
    }
    k(i, i) += h.noise_var;
  }
  return k;
}

// Returns -inf when the Gram matrix is not positive definite.
double lml(const std::vector<std::vector<double>>& x, const Eigen::VectorXd& z, const GpHyper& h,
           Eigen::LLT<Eigen::MatrixXd>* llt_out = nullptr, Eigen::VectorXd* alpha_out = nullptr) {
  Eigen::LLT<Eigen::MatrixXd> llt(gram(x, h));
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  Eigen::VectorXd alpha = llt.solve(z);
  const Eigen::MatrixXd& l = llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) logdet += std::log(l(i, i));
  const double v = -0.5 * z.dot(alpha) - logdet - 0.5 * static_cast<double>(z.size()) * std::log(2.0 * std::numbers::pi);
  if (llt_out) *llt_out = std::move(llt);
  if (alpha_out) *alpha_out = std::move(alpha);
  return v;
}

// Parameter vector: log length scales, log signal var, log noise var.
constexpr double kLogLsMin = -4.6;  // ~0.01
constexpr double kLogLsMax = 2.3;   // ~10
constexpr double kLogSigMin = -4.6;
constexpr double kLogSigMax = 2.3;
constexpr double kLogNoiseMax = 0.0;

struct FitProblem {
  const std::vector<std::vector<double>>* x;
  const Eigen::VectorXd* z;
  std::size_t dims;
  double log_noise_min;
};

GpHyper decode(const gsl_vector* p, const FitProblem& fp) {
  GpHyper h;
  h.length_scales.resize(fp.dims);
  for (std::size_t i = 0; i < fp.dims; ++i)
    h.length_scales[i] = std::exp(std::clamp(gsl_vector_get(p, i), kLogLsMin, kLogLsMax));
  h.signal_var = std::exp(std::clamp(gsl_vector_get(p, fp.dims), kLogSigMin, kLogSigMax));
  h.noise_var = std::exp(std::clamp(gsl_vector_get(p, fp.dims + 1), fp.log_noise_min, kLogNoiseMax));
  return h;
}

double out_of_box_penalty(const gsl_vector* p, const FitProblem& fp) {
  double pen = 0.0;
  auto add = [&](double v, double lo, double hi) {
    if (v < lo) pen += (lo - v) * (lo - v);
    if (v > hi) pen += (v - hi) * (v - hi);
  };
  for (std::size_t i = 0; i < fp.dims; ++i) add(gsl_vector_get(p, i), kLogLsMin, kLogLsMax);
  add(gsl_vector_get(p, fp.dims), kLogSigMin, kLogSigMax);
  add(gsl_vector_get(p, fp.dims + 1), fp.log_noise_min, kLogNoiseMax);
  return pen;
}

double neg_lml(const gsl_vector* p, void* params) {
  const auto& fp = *static_cast<const FitProblem*>(params);
  const double v = lml(*fp.x, *fp.z, decode(p, fp));
  if (!std::isfinite(v)) return 1e10;
  return -v + 10.0 * out_of_box_penalty(p, fp);
}

}  // namespace

GaussianProcess::GaussianProcess(std::vector<std::vector<double>> x, std::vector<double> y, GpHyper hyper)
    : x_(std::move(x)), y_(std::move(y)), hyper_(std::move(hyper)), impl_(std::make_unique<Impl>()) {
  if (x_.size() != y_.size() || x_.empty()) throw OptimizationError("GP needs matching, nonempty inputs and outputs");
  const std::size_t d = x_.front().size();
  for (const auto& p : x_)
    if (p.size() != d) throw OptimizationError("GP inputs have inconsistent dimensions");
  if (hyper_.length_scales.size() != d) throw OptimizationError("GP length scales do not match input dimension");
  for (double v : y_)
    if (!std::isfinite(v)) throw OptimizationError("GP outputs must be finite");
  const auto s = standardise(y_);
  y_mean_ = s.mean;
  y_scale_ = s.scale;
  const Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(s.z.data(), static_cast<Eigen::Index>(s.z.size()));
  // Add jitter until the factorisation succeeds.
  for (int attempt = 0; attempt < 8; ++attempt) {
    lml_ = lml(x_, z, hyper_, &impl_->llt, &impl_->alpha);
    if (std::isfinite(lml_)) return;
    hyper_.noise_var = std::max(hyper_.noise_var * 10.0, 1e-8);
  }
  throw OptimizationError("GP covariance is not positive definite");
}

GaussianProcess::~GaussianProcess() = default;
GaussianProcess::GaussianProcess(GaussianProcess&&) noexcept = default;
GaussianProcess& GaussianProcess::operator=(GaussianProcess&&) noexcept = default;

GaussianProcess GaussianProcess::fit(std::vector<std::vector<double>> x, std::vector<double> y, Rng& rng,
                                     const GpFitOptions& opts) {
  if (x.size() < 2) throw OptimizationError("GP fit needs at least two observations");
  if (x.size() != y.size()) throw OptimizationError("GP fit: inputs and outputs differ in length");
  const std::size_t d = x.front().size();
  const auto s = standardise(y);
  const Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(s.z.data(), static_cast<Eigen::Index>(s.z.size()));
  FitProblem fp{&x, &z, d, std::log(opts.min_noise_var)};

  const std::size_t n_par = d + 2;
  gsl_multimin_function fn{&neg_lml, n_par, &fp};
  gsl_vector* start = gsl_vector_alloc(n_par);
  gsl_vector* step = gsl_vector_alloc(n_par);
  gsl_vector_set_all(step, 0.5);
  gsl_multimin_fminimizer* solver = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n_par);
  gsl_error_handler_t* old_handler = gsl_set_error_handler_off();

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  GpHyper best;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(1, opts.restarts); ++r) {
    for (std::size_t i = 0; i < d; ++i)
      gsl_vector_set(start, i, r == 0 ? std::log(0.3) : std::log(0.05) + u01(rng) * (std::log(2.0) - std::log(0.05)));
    gsl_vector_set(start, d, r == 0 ? 0.0 : -1.0 + 2.0 * u01(rng));
    gsl_vector_set(start, d + 1, r == 0 ? std::log(1e-2) : std::log(1e-5) + u01(rng) * (std::log(0.1) - std::log(1e-5)));
    gsl_multimin_fminimizer_set(solver, &fn, start, step);
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      if (gsl_multimin_fminimizer_iterate(solver) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver), 1e-4) == GSL_SUCCESS) break;
    }
    const double val = gsl_multimin_fminimizer_minimum(solver);
    if (val < best_val) {
      best_val = val;
      best = decode(gsl_multimin_fminimizer_x(solver), fp);
    }
  }
  gsl_set_error_handler(old_handler);
  gsl_multimin_fminimizer_free(solver);
  gsl_vector_free(step);
  gsl_vector_free(start);
  if (!std::isfinite(best_val)) throw OptimizationError("GP hyperparameter fit failed");
  return GaussianProcess(std::move(x), std::move(y), std::move(best));
}

GpPrediction GaussianProcess::predict(std::span<const double> x) const {
  if (x.size() != hyper_.length_scales.size()) throw InvalidArgument("GP predict: wrong input dimension");
  const auto n = static_cast<Eigen::Index>(x_.size());
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = matern52(x, x_[static_cast<std::size_t>(i)], hyper_);
  const double mean_z = k.dot(impl_->alpha);
  const Eigen::VectorXd v = impl_->llt.matrixL().solve(k);
  const double var_z = std::max(0.0, hyper_.signal_var - v.squaredNorm());
  return {y_mean_ + y_scale_ * mean_z, var_z * y_scale_ * y_scale_};
}

double expected_improvement(double mu, double s, double f_min) noexcept {
  const double diff = f_min - mu;
  if (!(s > 0.0)) return std::max(diff, 0.0);
  const double z = diff / s;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return std::max(0.0, diff * cdf + s * pdf);
}

double expected_improvement(const GaussianProcess& gp, std::span<const double> x, double f_min) {
  const auto p = gp.predict(x);
  return expected_improvement(p.mean, std::sqrt(p.variance), f_min);
}

}  // namespace stdpgen
