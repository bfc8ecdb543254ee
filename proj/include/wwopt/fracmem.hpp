#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Fractional-memory kernel: the discrete coefficients that turn a truncated
// gradient history into one power-law-weighted effective gradient.
//
// Age a counts optimizer steps since a gradient was recorded (a = 0 is the
// current one). The raw coefficient for age a is
//
//   c_a = omega(a) * (psi(a+1)^alpha - psi(a)^alpha) / Gamma(alpha+1)
//
// which is the exact integral of the kernel psi(s)^(alpha-1) * psi'(s) /
// Gamma(alpha) over the age interval [a, a+1] (the integrable singularity at
// age zero is resolved analytically), scaled by the history weight sampled at
// the stored gradient's age. With normalize, the vector is rescaled to sum
// to one so that a constant gradient stream reproduces itself.

namespace wwopt::fracmem {

/// Time-deformation psi applied to memory age. Strictly increasing,
/// psi(0) = 0 for every variant.
class ScaleKind {
 public:
  enum class Type { Identity, Logarithmic, Power };

  static ScaleKind identity() { return ScaleKind(Type::Identity, 1.0); }
  static ScaleKind logarithmic() { return ScaleKind(Type::Logarithmic, 1.0); }
  /// psi(a) = (a+1)^p - 1, requires p > 0.
  static ScaleKind power(double p);

  Type type() const { return type_; }
  double exponent() const { return exponent_; }
  std::string label() const;

 private:
  ScaleKind(Type type, double exponent) : type_(type), exponent_(exponent) {}
  Type type_;
  double exponent_;
};

/// psi(a); throws DomainError for a < 0.
double psi_eval(const ScaleKind& kind, double age);

/// psi'(a); same domain as psi_eval.
double psi_derivative(const ScaleKind& kind, double age);

/// Multiplicative decay omega applied to stored gradients by age.
/// omega(0) = 1 and 0 < omega(a) <= 1 everywhere.
class WeightKind {
 public:
  enum class Type { Constant, Rational };

  static WeightKind constant() { return WeightKind(Type::Constant, 0.0); }
  /// omega(a) = 1 / (1 + c*a), requires c >= 0.
  static WeightKind rational(double c);

  Type type() const { return type_; }
  double decay() const { return decay_; }
  std::string label() const;

 private:
  WeightKind(Type type, double decay) : type_(type), decay_(decay) {}
  Type type_;
  double decay_;
};

/// omega(a); throws DomainError for a < 0.
double weight_eval(const WeightKind& kind, double age);

/// Gamma(x) for x > 0 (Lanczos approximation, relative error well below
/// 1e-10 on (0, 3]). Throws DomainError for x <= 0.
double gamma_fn(double x);

/// Precomputed per-age weights over a window of length L. Immutable after
/// construction and safe to share between threads.
struct KernelCoefficients {
  double alpha = 1.0;
  std::size_t window = 0;
  bool normalized = false;
  std::vector<double> coeffs;  // indexed by age, size == window

  double sum() const;
};

/// Builds the coefficient vector; alpha must lie in (0, 1], window >= 1.
KernelCoefficients kernel_coefficients(double alpha, const ScaleKind& kind,
                                       const WeightKind& weight,
                                       std::size_t window, bool normalize);

}  // namespace wwopt::fracmem
