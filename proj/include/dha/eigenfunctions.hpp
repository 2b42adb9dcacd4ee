#pragma once

#include <complex>
#include <vector>

#include "dha/spectrum.hpp"

namespace dha {

// Cumulative phase phi(p) = (2 m alpha / hbar) int_0^p dp' / (g^2(p') + q^2),
// odd and strictly increasing in p. phi(b) equals quantization_integral(q)
// by the change of variables P = g(p).
double phase(const AlgebraContext& ctx, double q, double p,
             const QuadratureSpec& quad = {});

// C = (int_{-b}^{b} dp / (g^2 + q^2)^2)^{-1/2}
double normalization(const AlgebraContext& ctx, double q,
                     const QuadratureSpec& quad = {});

// Kernel of the potential-energy operator in momentum representation,
// U(p - p') = -(alpha / 2 hbar)(2 i theta(p' - p) - i + A), theta(0) = 1/2.
struct Kernel {
    double A;
    double alpha;
    double hbar;

    std::complex<double> operator()(double p, double p_prime) const {
        const double theta = p_prime > p ? 1.0 : (p_prime < p ? 0.0 : 0.5);
        return -(alpha / (2.0 * hbar)) *
               std::complex<double>(A, 2.0 * theta - 1.0);
    }
};

// Normalized bound-state wavefunction psi(p) = C e^{-i phi(p)} / (g^2 + q^2)
// on [-b, b]. Phase values are cached on a uniform grid (finite b) with the
// remainder integrated exactly, so dense evaluation stays cheap. Holds a
// reference to the context; immutable after construction.
class BoundState {
  public:
    BoundState(const AlgebraContext& ctx, const EnergyLevel& level,
               const QuadratureSpec& quad = {});

    const EnergyLevel& level() const { return level_; }
    const AlgebraContext& context() const { return *ctx_; }
    double normalization() const { return C_; }

    double phase_at(double p) const;
    double modulus(double p) const;  // C / (g^2(p) + q^2)
    std::complex<double> eval(double p) const;

  private:
    const AlgebraContext* ctx_;
    EnergyLevel level_;
    QuadratureSpec quad_;
    double C_;
    double phase_scale_;
    std::vector<double> grid_p_;    // nodes on [0, b] when b is finite
    std::vector<double> grid_phi_;  // cumulative phase at grid_p_
};

// Max modulus over p_samples of
//   (g^2 / 2m) psi - (alpha / 2 hbar) [(i + A) I1 - 2 i I2(p)] - E psi,
// with I1 = (hbar C / (m alpha)) sin phi(b) and I2(p) = int_{-b}^p psi by
// direct quadrature. Vanishes (to quadrature accuracy) exactly when the
// state solves the level equation at the extension ext.
double integral_equation_residual(const BoundState& state, ExtensionParam ext,
                                  const std::vector<double>& p_samples,
                                  const QuadratureSpec& quad = {});

}  // namespace dha
