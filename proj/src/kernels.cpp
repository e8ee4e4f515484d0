#include "agewave/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "agewave/errors.hpp"
#include "agewave/numerics.hpp"

namespace agewave {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

// Standard normal upper tail via erfc.
double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

std::string format_param(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double DispersalKernel::moment_exp(double lambda, double tol) const {
  const double r = support_radius();
  const auto f = [&](double y) { return (*this)(y)*std::exp(lambda * y); };
  // Split at zero so kernels with a kink there sit on an interval end.
  return integrate(f, -r, 0.0, tol) + integrate(f, 0.0, r, tol);
}

double DispersalKernel::moment_exp_linear(double lambda, double tol) const {
  const double r = support_radius();
  const auto f = [&](double y) { return (*this)(y)*y * std::exp(lambda * y); };
  return integrate(f, -r, 0.0, tol) + integrate(f, 0.0, r, tol);
}

GaussianKernel::GaussianKernel(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0)) throw ValidationError("gaussian kernel needs sigma > 0");
  // z with 2 Q(z) = kTailMass, so the truncated support holds the rest.
  const double z = bisect([](double t) { return 2.0 * normal_upper_tail(t) - kTailMass; },
                          1.0, 12.0, 1e-12);
  radius_ = sigma_ * z;
  norm_ = 1.0 / (sigma_ * kSqrt2Pi);
}

double GaussianKernel::operator()(double y) const {
  const double t = y / sigma_;
  return norm_ * std::exp(-0.5 * t * t);
}

std::string GaussianKernel::describe() const {
  return "gaussian sigma=" + format_param(sigma_);
}

LaplaceKernel::LaplaceKernel(double b) : b_(b) {
  if (!(b > 0.0)) throw ValidationError("laplace kernel needs b > 0");
  radius_ = -b_ * std::log(kTailMass);
}

double LaplaceKernel::operator()(double y) const {
  return std::exp(-std::abs(y) / b_) / (2.0 * b_);
}

std::string LaplaceKernel::describe() const {
  return "laplace b=" + format_param(b_);
}

CompactBumpKernel::CompactBumpKernel(double r) : r_(r) {
  if (!(r > 0.0)) throw ValidationError("compact_bump kernel needs r > 0");
  const auto raw = [r](double y) {
    const double t = y / r;
    const double d = 1.0 - t * t;
    return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
  };
  const double mass = integrate(raw, -r_, 0.0, 1e-14) + integrate(raw, 0.0, r_, 1e-14);
  norm_ = 1.0 / mass;
}

double CompactBumpKernel::operator()(double y) const {
  const double t = y / r_;
  const double d = 1.0 - t * t;
  return d > 0.0 ? norm_ * std::exp(-1.0 / d) : 0.0;
}

std::string CompactBumpKernel::describe() const {
  return "compact_bump r=" + format_param(r_);
}

TabulatedKernel::TabulatedKernel(std::vector<double> y, std::vector<double> j)
    : y_(std::move(y)), j_(std::move(j)) {
  if (y_.size() != j_.size() || y_.size() < 3) {
    throw ValidationError("tabulated kernel needs at least three (y, J) rows");
  }
  for (size_t i = 1; i < y_.size(); ++i) {
    if (!(y_[i] > y_[i - 1])) {
      throw ValidationError("tabulated kernel samples must be strictly increasing in y");
    }
  }
  for (double v : j_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ValidationError("tabulated kernel values must be finite and nonnegative");
    }
  }
}

double TabulatedKernel::operator()(double y) const {
  if (y < y_.front() || y > y_.back()) return 0.0;
  const auto it = std::upper_bound(y_.begin(), y_.end(), y);
  if (it == y_.begin()) return j_.front();
  if (it == y_.end()) return j_.back();
  const size_t i = static_cast<size_t>(it - y_.begin());
  const double t = (y - y_[i - 1]) / (y_[i] - y_[i - 1]);
  return j_[i - 1] * (1.0 - t) + j_[i] * t;
}

double TabulatedKernel::support_radius() const {
  return std::max(std::abs(y_.front()), std::abs(y_.back()));
}

std::string TabulatedKernel::describe() const {
  return "table n=" + std::to_string(y_.size());
}

void Stencil::convolve(const std::vector<double>& in, std::vector<double>& out,
                       double left, double right) const {
  const int n = static_cast<int>(in.size());
  out.resize(in.size());
  const int taps = 2 * m + 1;
  for (int j = 0; j < n; ++j) {
    // w[k+m] multiplies in[j-k]; in-range k spans max(-m, j-n+1) .. min(m, j).
    const int klo = std::max(-m, j - n + 1);
    const int khi = std::min(m, j);
    double acc = 0.0;
    const double* wp = w.data() + (klo + m);
    const double* ip = in.data() + (j - klo);
    for (int k = klo; k <= khi; ++k, ++wp, --ip) acc += *wp * *ip;
    if (khi < m) acc += left * (csum[static_cast<size_t>(taps)] - csum[static_cast<size_t>(khi + m + 1)]);
    if (klo > -m) acc += right * csum[static_cast<size_t>(klo + m)];
    out[static_cast<size_t>(j)] = acc;
  }
}

void Stencil::convolve_padded(const std::vector<double>& padded,
                              std::vector<double>& out) const {
  const int n = static_cast<int>(padded.size()) - 2 * m;
  out.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    // Symmetric weights turn the convolution into a straight dot product.
    double acc = 0.0;
    const double* ip = padded.data() + j;
    for (int t = 0; t < 2 * m + 1; ++t) acc += w[static_cast<size_t>(t)] * ip[t];
    out[static_cast<size_t>(j)] = acc;
  }
}

double Stencil::moment_exp(double lambda) const {
  double acc = 0.0;
  for (int k = -m; k <= m; ++k) {
    acc += w[static_cast<size_t>(k + m)] * std::exp(lambda * k * h);
  }
  return acc;
}

Stencil make_stencil(const DispersalKernel& kernel, double h) {
  if (!(h > 0.0)) throw ValidationError("stencil needs positive grid spacing");
  Stencil st;
  st.h = h;
  st.m = static_cast<int>(std::ceil(kernel.support_radius() / h));
  const int taps = 2 * st.m + 1;
  st.w.assign(static_cast<size_t>(taps), 0.0);
  for (int k = 0; k <= st.m; ++k) {
    double wk = h * kernel(k * h);
    if (k == st.m) wk *= 0.5;
    st.w[static_cast<size_t>(st.m + k)] = wk;
    st.w[static_cast<size_t>(st.m - k)] = wk;
  }
  double total = 0.0;
  for (double v : st.w) total += v;
  if (!(total > 0.0)) throw NumericalError("stencil mass vanished; grid far coarser than the kernel");
  for (double& v : st.w) v /= total;
  st.csum.assign(static_cast<size_t>(taps) + 1, 0.0);
  for (int t = 0; t < taps; ++t) st.csum[static_cast<size_t>(t + 1)] = st.csum[static_cast<size_t>(t)] + st.w[static_cast<size_t>(t)];
  return st;
}

}  // namespace agewave
