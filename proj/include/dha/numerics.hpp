#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace dha {

struct QuadratureSpec {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    int max_levels = 12;
};

struct RootSpec {
    double tol = 1e-12;
    int max_iter = 200;
    double bracket_growth = 2.0;
};

class NumericsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericsError {
  public:
    using NumericsError::NumericsError;
};

class RootBracketError : public NumericsError {
  public:
    using NumericsError::NumericsError;
};

class DomainError : public NumericsError {
  public:
    using NumericsError::NumericsError;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  // conservative estimate, >= true error on benign integrands
    int levels = 0;      // refinement levels actually used
};

// Double-exponential quadrature on [lo, hi]; either bound may be infinite
// (tanh-sinh on finite intervals, exp-sinh on half-lines, sinh-sinh on the
// full line). Endpoint singularities must be integrable.
//
// The two-argument overload passes the integrand the signed distance to the
// nearer finite endpoint (x - lo near lo, x - hi near hi), which is computed
// to full precision by the node transform. Use it whenever the integrand is
// singular at an endpoint and evaluating it through x alone would cancel.
QuadratureResult integrate(const std::function<double(double)>& fn,
                           double lo, double hi,
                           const QuadratureSpec& spec = {});
QuadratureResult integrate(const std::function<double(double, double)>& fn,
                           double lo, double hi,
                           const QuadratureSpec& spec = {});

// Root of a continuous, strictly monotone function. The bracket is grown
// geometrically around the seed until the sign changes, then polished with
// Brent's method. Deterministic: identical inputs give identical outputs.
double solve_root(const std::function<double(double)>& fn, double seed,
                  const RootSpec& spec = {});

// Brent on an explicit bracket [a, b] with fn(a)*fn(b) <= 0.
double solve_root_bracketed(const std::function<double(double)>& fn,
                            double a, double b, const RootSpec& spec = {});

}  // namespace dha
