#pragma once

#include <memory>
#include <string>
#include <vector>

namespace agewave {

/// Symmetric dispersal kernel J. The numerical model is the kernel restricted
/// to [-support_radius, support_radius], which carries all but kTailMass of
/// the mass; every quadrature (moments, stencil) sees that truncation, so the
/// toolkit is internally consistent about it.
class DispersalKernel {
 public:
  static constexpr double kTailMass = 1e-13;

  virtual ~DispersalKernel() = default;
  virtual double operator()(double y) const = 0;
  virtual double support_radius() const = 0;
  virtual std::string describe() const = 0;

  /// int J(y) e^{lambda y} dy over the truncated support.
  double moment_exp(double lambda, double tol = 1e-13) const;

  /// int J(y) y e^{lambda y} dy over the truncated support.
  double moment_exp_linear(double lambda, double tol = 1e-13) const;
};

class GaussianKernel : public DispersalKernel {
 public:
  explicit GaussianKernel(double sigma);
  double operator()(double y) const override;
  double support_radius() const override { return radius_; }
  std::string describe() const override;
  double sigma() const { return sigma_; }

 private:
  double sigma_;
  double radius_;
  double norm_;
};

class LaplaceKernel : public DispersalKernel {
 public:
  explicit LaplaceKernel(double b);
  double operator()(double y) const override;
  double support_radius() const override { return radius_; }
  std::string describe() const override;
  double scale() const { return b_; }

 private:
  double b_;
  double radius_;
};

class CompactBumpKernel : public DispersalKernel {
 public:
  explicit CompactBumpKernel(double r);
  double operator()(double y) const override;
  double support_radius() const override { return r_; }
  std::string describe() const override;

 private:
  double r_;
  double norm_;
};

/// Kernel tabulated at sorted sample points (piecewise linear, zero outside).
class TabulatedKernel : public DispersalKernel {
 public:
  TabulatedKernel(std::vector<double> y, std::vector<double> j);
  double operator()(double y) const override;
  double support_radius() const override;
  std::string describe() const override;

 private:
  std::vector<double> y_;
  std::vector<double> j_;
};

using KernelPtr = std::shared_ptr<const DispersalKernel>;

/// Precomputed convolution stencil on a uniform grid with spacing h.
/// Weights are symmetric and normalized to unit sum, so convolving a
/// constant field reproduces it exactly.
struct Stencil {
  double h = 0.0;
  int m = 0;               // taps cover offsets -m..m
  std::vector<double> w;   // size 2m+1, w[k+m] multiplies u(x - k h)
  std::vector<double> csum;  // csum[t] = sum of w[0..t-1], size 2m+2

  /// out[j] = sum_k w_k in[j-k]; samples beyond the ends use the closure
  /// values left / right.
  void convolve(const std::vector<double>& in, std::vector<double>& out,
                double left, double right) const;

  /// Same contract, but the input row already carries m ghost samples on
  /// each side (size n + 2m); out gets the n interior results.
  void convolve_padded(const std::vector<double>& padded, std::vector<double>& out) const;

  /// sum_k w_k e^{lambda y_k}: the stencil's own exponential moment.
  double moment_exp(double lambda) const;
};

Stencil make_stencil(const DispersalKernel& kernel, double h);

}  // namespace agewave
