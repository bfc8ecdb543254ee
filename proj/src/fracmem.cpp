#include "wwopt/fracmem.hpp"

#include <cmath>

#include "wwopt/errors.hpp"
#include "wwopt/kernels.hpp"

namespace wwopt::fracmem {

ScaleKind ScaleKind::power(double p) {
  if (!(p > 0.0)) throw ConfigError("power scale exponent must be > 0");
  return ScaleKind(Type::Power, p);
}

std::string ScaleKind::label() const {
  switch (type_) {
    case Type::Identity:
      return "identity";
    case Type::Logarithmic:
      return "logarithmic";
    case Type::Power:
      return "power(" + std::to_string(exponent_) + ")";
  }
  return "?";
}

double psi_eval(const ScaleKind& kind, double age) {
  if (!(age >= 0.0)) throw DomainError("psi is defined for age >= 0");
  switch (kind.type()) {
    case ScaleKind::Type::Identity:
      return age;
    case ScaleKind::Type::Logarithmic:
      return std::log1p(age);
    case ScaleKind::Type::Power:
      // (a+1)^p - 1, via expm1 for accuracy near age 0
      return std::expm1(kind.exponent() * std::log1p(age));
  }
  return 0.0;
}

double psi_derivative(const ScaleKind& kind, double age) {
  if (!(age >= 0.0)) throw DomainError("psi' is defined for age >= 0");
  switch (kind.type()) {
    case ScaleKind::Type::Identity:
      return 1.0;
    case ScaleKind::Type::Logarithmic:
      return 1.0 / (age + 1.0);
    case ScaleKind::Type::Power:
      return kind.exponent() * std::pow(age + 1.0, kind.exponent() - 1.0);
  }
  return 0.0;
}

WeightKind WeightKind::rational(double c) {
  if (!(c >= 0.0)) throw ConfigError("rational weight decay must be >= 0");
  return WeightKind(Type::Rational, c);
}

std::string WeightKind::label() const {
  switch (type_) {
    case Type::Constant:
      return "constant";
    case Type::Rational:
      return "rational(" + std::to_string(decay_) + ")";
  }
  return "?";
}

double weight_eval(const WeightKind& kind, double age) {
  if (!(age >= 0.0)) throw DomainError("omega is defined for age >= 0");
  switch (kind.type()) {
    case WeightKind::Type::Constant:
      return 1.0;
    case WeightKind::Type::Rational:
      return 1.0 / (1.0 + kind.decay() * age);
  }
  return 1.0;
}

namespace {

// Lanczos approximation, g = 7, 9 coefficients.
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_gamma(double x) {
  // valid for x >= 0.5
  double a = kLanczos[0];
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x - 1.0 + i);
  double t = x + 6.5;  // g + 0.5
  return std::sqrt(2.0 * 3.14159265358979323846) * std::pow(t, x - 0.5) *
         std::exp(-t) * a;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma is defined for x > 0");
  if (x < 0.5) {
    // reflection: Gamma(x) = pi / (sin(pi x) * Gamma(1 - x))
    const double pi = 3.14159265358979323846;
    return pi / (std::sin(pi * x) * lanczos_gamma(1.0 - x));
  }
  return lanczos_gamma(x);
}

double KernelCoefficients::sum() const {
  return kernels::serial::block_sum(coeffs);
}

KernelCoefficients kernel_coefficients(double alpha, const ScaleKind& kind,
                                       const WeightKind& weight,
                                       std::size_t window, bool normalize) {
  if (!(alpha > 0.0) || !(alpha <= 1.0))
    throw ConfigError("alpha must lie in (0, 1]");
  if (window < 1) throw ConfigError("window length must be >= 1");

  KernelCoefficients out;
  out.alpha = alpha;
  out.window = window;
  out.normalized = normalize;
  out.coeffs.resize(window);

  const double inv_gamma = 1.0 / gamma_fn(alpha + 1.0);
  double psi_prev_pow = 0.0;  // psi(0)^alpha = 0 for every variant
  for (std::size_t a = 0; a < window; ++a) {
    const double psi_next = psi_eval(kind, static_cast<double>(a) + 1.0);
    const double psi_next_pow = std::pow(psi_next, alpha);
    const double omega = weight_eval(weight, static_cast<double>(a));
    out.coeffs[a] = omega * (psi_next_pow - psi_prev_pow) * inv_gamma;
    psi_prev_pow = psi_next_pow;
  }

  if (normalize) {
    const double total = out.sum();
    kernels::serial::scale(out.coeffs, 1.0 / total);
  }
  return out;
}

}  // namespace wwopt::fracmem
