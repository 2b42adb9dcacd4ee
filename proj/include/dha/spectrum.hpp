#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "dha/algebra.hpp"

namespace dha {

// Self-adjoint extension label delta in [0,1), equivalently A = cot(pi*delta)
// with A = +inf at delta = 0. delta = 1 is identified with delta = 0 (the
// spectra coincide up to an index shift).
struct ExtensionParam {
    double delta = 0.5;

    static ExtensionParam from_delta(double d);
    static ExtensionParam from_A(double A);
    double A() const;
};

struct EnergyLevel {
    int n;
    double delta;
    double q;  // sqrt(-2mE)
    double E;
};

// Phi(q) = (2 m alpha / hbar) int_0^a dP / (f(P) (P^2 + q^2)),
// strictly decreasing in q for alpha > 0
double quantization_integral(const AlgebraContext& ctx, double q,
                             const QuadratureSpec& quad = {});

// Solves Phi(q) = pi (n + delta). Requires (n + delta) nonzero with the same
// sign as alpha; (n = 0, delta = 0) has no finite root and is rejected.
EnergyLevel solve_level(const AlgebraContext& ctx, int n, ExtensionParam ext,
                        const QuadratureSpec& quad = {}, const RootSpec& root = {});

std::vector<EnergyLevel> solve_band(const AlgebraContext& ctx, int n_lo, int n_hi,
                                    ExtensionParam ext, const QuadratureSpec& quad = {},
                                    const RootSpec& root = {});

// Exact spectra where the quantization condition closes: an explicit energy
// for Undeformed, PolyPlus k=1 and PolyMinus k=1/2, or the transcendental
// level equation as a residual in q for PolyPlus k=3/2 and PolyMinus k=-1.
using LevelResidual = std::function<double(double)>;
using ClosedFormEnergy = std::variant<double, LevelResidual>;
ClosedFormEnergy closed_form_energy(const DeformationFamily& family,
                                    const PhysicalParams& params, int n,
                                    ExtensionParam ext);

double undeformed_energy(const PhysicalParams& params, int n, ExtensionParam ext);

// Leading deformation correction Delta E_n, signed so that
// E_n ~ undeformed_energy + leading_correction. PolyMinus k=1/2 returns 0
// (the order-sqrt(beta) coefficient has a Gamma pole there).
double leading_correction(const DeformationFamily& family, const PhysicalParams& params,
                          int n, ExtensionParam ext);

// d q^2 / d beta along the level curve, the exact two-integral ratio obtained
// by differentiating the quantization condition in beta
double dq2_dbeta(const AlgebraContext& ctx, double q, const QuadratureSpec& quad = {});

struct CorrectionFit {
    double exponent;         // free log-log fit of |Delta E| vs beta
    double coefficient;      // prefactor extracted at the family's theory exponent
    double theory_exponent;  // 1/2, 1 (PolyMinus k=1/2) or 1/3 (ExpCbrt)
};

// Solves the spectrum across beta_grid (spanning at least two decades),
// subtracts the undeformed energy and fits the leading beta power. For
// ExpSqrt the slowly varying log(alpha m sqrt(beta)/hbar) factor is divided
// out before fitting.
CorrectionFit correction_vs_numeric(const DeformationFamily& family,
                                    const PhysicalParams& params, int n,
                                    ExtensionParam ext,
                                    const std::vector<double>& beta_grid,
                                    const QuadratureSpec& quad = {},
                                    const RootSpec& root = {});

}  // namespace dha
