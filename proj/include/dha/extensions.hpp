#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "dha/spectrum.hpp"

namespace dha {

// Discrete position eigenstate psi_lambda(p) = e^{-i lambda p / hbar} / sqrt(2b)
// of the extension X_delta, with eigenvalue lambda_{n,delta} = 2(delta + n) l0.
// Satisfies the boundary condition psi(-b) = e^{2 i delta pi} psi(b).
struct PositionEigenstate {
    int n;
    double delta;
    double lambda;
    double b;
    double hbar;

    std::complex<double> eval(double p) const;
};

// lambda_{n,delta} = 2 (delta + n) l0; requires a minimal length (l0 > 0)
double position_eigenvalue(const AlgebraContext& ctx, int n, ExtensionParam ext);

PositionEigenstate position_eigenstate(const AlgebraContext& ctx, int n,
                                       ExtensionParam ext);

// <psi_lambda | psi_lambda'> = hbar / ((lambda - lambda') b) * sin((lambda - lambda') b / hbar),
// continued to 1 at lambda = lambda'
double eigenstate_inner_product(double lambda, double lambda_prime, double b,
                                double hbar);

// Immutable uniform complex samples on [-b, b], endpoints included, N >= 16.
class GridFunction {
  public:
    GridFunction(double b, std::vector<std::complex<double>> samples);

    static GridFunction sample(double b, int n_points,
                               const std::function<std::complex<double>(double)>& fn);

    double b() const { return b_; }
    int size() const { return static_cast<int>(samples_.size()); }
    double spacing() const { return 2.0 * b_ / (size() - 1); }
    double point(int i) const { return -b_ + spacing() * i; }
    const std::vector<std::complex<double>>& samples() const { return samples_; }
    const std::complex<double>& operator[](int i) const { return samples_[i]; }

  private:
    double b_;
    std::vector<std::complex<double>> samples_;
};

// int_{-b}^{b} f* g dp, trapezoid refined by one Richardson step (needs an
// odd sample count for the refinement; falls back to plain trapezoid)
std::complex<double> inner_product(const GridFunction& f, const GridFunction& g);
double norm_squared(const GridFunction& f);

// <psi_{lambda_{n,delta}} | f>
std::complex<double> project(const AlgebraContext& ctx, ExtensionParam ext, int n,
                             const GridFunction& f);

// X_delta f = i hbar d/dp f, applied spectrally: coefficients multiplied by
// lambda_{n,delta} over |n| <= n_trunc. Rejects f violating the delta
// boundary condition f(-b) = e^{2 i delta pi} f(b) beyond bc_tol.
GridFunction apply_X(const AlgebraContext& ctx, const GridFunction& f,
                     ExtensionParam ext, int n_trunc = 256, double bc_tol = 1e-8);

// (1/X_delta) f = -(i/hbar) int_{-b}^p f dp' + c_delta[f], the closed integral
// form; cumulative integral via a fourth-order scheme on the grid. delta = 0
// is rejected (cot(pi delta) and the lambda = 0 eigenvalue are singular).
GridFunction apply_inverse_X(const AlgebraContext& ctx, const GridFunction& f,
                             ExtensionParam ext);

// Truncated spectral form sum_n |psi_n> (1/lambda_n) <psi_n| f
GridFunction apply_inverse_X_spectral(const AlgebraContext& ctx,
                                      const GridFunction& f, ExtensionParam ext,
                                      int n_trunc = 256);

// c_delta[f] = ((i + cot(pi delta)) / 2 hbar) int_{-b}^{b} f dp
std::complex<double> c_delta_functional(const AlgebraContext& ctx,
                                        const GridFunction& f, ExtensionParam ext);

// | ||f||^2 - sum_{|n| <= n_trunc} |<psi_n|f>|^2 |, the Parseval defect
double completeness_check(const AlgebraContext& ctx, ExtensionParam ext,
                          const GridFunction& f, int n_trunc);

// delta -> 1 - delta (mod 1); eigenvalue sets satisfy {lambda_{n,delta}} =
// {-lambda_{m,1-delta}} with m = -n-1
ExtensionParam parity_map(ExtensionParam ext);

}  // namespace dha
