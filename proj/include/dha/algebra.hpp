#pragma once

#include <functional>
#include <variant>

#include "dha/numerics.hpp"

namespace dha {

// hbar, mass, alpha. alpha may be negative (repulsive strength shows up in
// the parity relation between the (alpha, delta) and (-alpha, 1-delta) spectra).
struct PhysicalParams {
    double hbar = 1.0;
    double mass = 1.0;
    double alpha = 1.0;
};

void validate(const PhysicalParams& params);

// Deformation families [X,P] = i*hbar*f(P), f positive and even, f(0) = 1.
struct Undeformed {};
struct PolyPlus {
    double beta;  // inverse momentum squared
    double k;     // > 1/2 so that the minimal length exists
};
struct PolyMinus {
    double beta;
    double k;  // < 1; momentum bound a = 1/sqrt(beta)
};
struct ExpSqrt {
    double beta;  // f = exp(sqrt(beta)*|P|)
};
struct ExpCbrt {
    double beta;  // f = exp((beta*P^2)^(1/3))
};
struct Custom {
    std::function<double(double)> f;  // positive even, f(0) = 1
    double a;                         // momentum bound, may be +inf
    bool finite_b = true;             // caller declares whether int dP/f converges
};

using DeformationFamily =
    std::variant<Undeformed, PolyPlus, PolyMinus, ExpSqrt, ExpCbrt, Custom>;

void validate(const DeformationFamily& family);

// momentum bound a (half-width of the f > 0 domain), +inf when unbounded
double momentum_bound(const DeformationFamily& family);

// f(P); throws DomainError when |P| >= a for bounded families
double eval_f(const DeformationFamily& family, double P);

// b = int_0^a dP/f(P); +inf when the integral diverges. Closed forms are used
// where elementary, numerical quadrature otherwise.
double compute_b(const DeformationFamily& family, const QuadratureSpec& quad = {});

// int_0^a h(P)/f(P) dP with a family-aware variable transform (PolyMinus goes
// through P = a*sin(theta) so the (1-beta*P^2)^k endpoint behavior is exact).
// Shared by compute_b, the quantization integral and Eq.-(f1)-style ratios.
double inverse_f_integral(const DeformationFamily& family,
                          const std::function<double(double)>& h,
                          const QuadratureSpec& quad = {});

// same integral truncated at P_upper < a
double inverse_f_integral_to(const DeformationFamily& family, double P_upper,
                             const QuadratureSpec& quad = {});

struct AlgebraContext {
    PhysicalParams params;
    DeformationFamily family;
    double b;   // pseudo-momentum bound, +inf when no minimal length
    double l0;  // minimal length, 0 when b = +inf
};

AlgebraContext make_context(const PhysicalParams& params, DeformationFamily family,
                            const QuadratureSpec& quad = {});

double minimal_length(const AlgebraContext& ctx);

// pseudo-momentum g^{-1}(P) = int_0^P dP'/f(P'), odd and strictly increasing
double g_inverse(const DeformationFamily& family, double P,
                 const QuadratureSpec& quad = {});

// momentum g(p), the inverse map; |p| < b required
double g_eval(const DeformationFamily& family, double p, const QuadratureSpec& quad = {},
              const RootSpec& root = {});
double g_eval(const AlgebraContext& ctx, double p, const QuadratureSpec& quad = {},
              const RootSpec& root = {});

// g at pseudo-momentum distance d = b - p from the boundary, solved from the
// tail integral int_P^a dP'/f = d. Well conditioned down to d near the
// underflow threshold, where g_eval(b - d) would cancel. Requires finite b.
double g_near_bound(const DeformationFamily& family, double d,
                    const QuadratureSpec& quad = {}, const RootSpec& root = {});

}  // namespace dha
