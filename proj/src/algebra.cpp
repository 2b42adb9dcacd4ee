#include "dha/algebra.hpp"

#include <cmath>
#include <limits>

namespace dha {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overload : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

void require(bool cond, const char* msg) {
    if (!cond) throw DomainError(msg);
}

}  // namespace

void validate(const PhysicalParams& params) {
    require(std::isfinite(params.hbar) && params.hbar > 0.0, "hbar must be positive");
    require(std::isfinite(params.mass) && params.mass > 0.0, "mass must be positive");
    require(std::isfinite(params.alpha) && params.alpha != 0.0, "alpha must be nonzero");
}

void validate(const DeformationFamily& family) {
    std::visit(Overload{
                   [](const Undeformed&) {},
                   [](const PolyPlus& f) {
                       require(std::isfinite(f.beta) && f.beta > 0.0, "PolyPlus: beta > 0");
                       require(std::isfinite(f.k) && f.k > 0.5, "PolyPlus: k > 1/2");
                   },
                   [](const PolyMinus& f) {
                       require(std::isfinite(f.beta) && f.beta > 0.0, "PolyMinus: beta > 0");
                       require(std::isfinite(f.k) && f.k < 1.0, "PolyMinus: k < 1");
                   },
                   [](const ExpSqrt& f) {
                       require(std::isfinite(f.beta) && f.beta > 0.0, "ExpSqrt: beta > 0");
                   },
                   [](const ExpCbrt& f) {
                       require(std::isfinite(f.beta) && f.beta > 0.0, "ExpCbrt: beta > 0");
                   },
                   [](const Custom& f) {
                       require(static_cast<bool>(f.f), "Custom: f required");
                       require(f.a > 0.0, "Custom: a > 0");
                   },
               },
               family);
}

double momentum_bound(const DeformationFamily& family) {
    return std::visit(Overload{
                          [](const Undeformed&) { return kInf; },
                          [](const PolyPlus&) { return kInf; },
                          [](const PolyMinus& f) { return 1.0 / std::sqrt(f.beta); },
                          [](const ExpSqrt&) { return kInf; },
                          [](const ExpCbrt&) { return kInf; },
                          [](const Custom& f) { return f.a; },
                      },
                      family);
}

double eval_f(const DeformationFamily& family, double P) {
    const double a = momentum_bound(family);
    if (std::isfinite(a) && std::abs(P) >= a)
        throw DomainError("eval_f: |P| >= momentum bound");
    return std::visit(
        Overload{
            [&](const Undeformed&) { return 1.0; },
            [&](const PolyPlus& f) { return std::pow(1.0 + f.beta * P * P, f.k); },
            [&](const PolyMinus& f) {
                const double s = std::sqrt(f.beta) * std::abs(P);
                return std::pow((1.0 - s) * (1.0 + s), f.k);
            },
            [&](const ExpSqrt& f) { return std::exp(std::sqrt(f.beta) * std::abs(P)); },
            [&](const ExpCbrt& f) {
                return std::exp(std::cbrt(f.beta) * std::pow(std::abs(P), 2.0 / 3.0));
            },
            [&](const Custom& f) { return f.f(P); },
        },
        family);
}

double inverse_f_integral(const DeformationFamily& family,
                          const std::function<double(double)>& h,
                          const QuadratureSpec& quad) {
    validate(family);
    return std::visit(
        Overload{
            [&](const Undeformed&) { return integrate(h, 0.0, kInf, quad).value; },
            [&](const PolyPlus& f) {
                std::function<double(double)> g = [&](double P) {
                    return h(P) * std::pow(1.0 + f.beta * P * P, -f.k);
                };
                return integrate(g, 0.0, kInf, quad).value;
            },
            [&](const PolyMinus& f) {
                const double a = 1.0 / std::sqrt(f.beta);
                const double ex = 1.0 - 2.0 * f.k;
                // residual of pi/2 beyond its double rounding, so cos(theta)
                // near the right endpoint can be formed without cancellation
                const double tail = 6.123233995736766e-17;
                std::function<double(double, double)> g = [&](double theta, double xc) {
                    const double c =
                        theta > 0.785 ? std::sin(tail - xc) : std::cos(theta);
                    return a * h(a * std::sin(theta)) * std::pow(c, ex);
                };
                return integrate(g, 0.0, kPi / 2, quad).value;
            },
            [&](const ExpSqrt& f) {
                const double s = std::sqrt(f.beta);
                std::function<double(double)> g = [&](double P) {
                    return h(P) * std::exp(-s * P);
                };
                return integrate(g, 0.0, kInf, quad).value;
            },
            [&](const ExpCbrt& f) {
                const double c = std::cbrt(f.beta);
                std::function<double(double)> g = [&](double P) {
                    return h(P) * std::exp(-c * std::pow(P, 2.0 / 3.0));
                };
                return integrate(g, 0.0, kInf, quad).value;
            },
            [&](const Custom& f) {
                std::function<double(double)> g = [&](double P) { return h(P) / f.f(P); };
                return integrate(g, 0.0, f.a, quad).value;
            },
        },
        family);
}

double inverse_f_integral_to(const DeformationFamily& family, double P_upper,
                             const QuadratureSpec& quad) {
    validate(family);
    if (const auto* pm = std::get_if<PolyMinus>(&family)) {
        const double a = 1.0 / std::sqrt(pm->beta);
        require(P_upper < a, "inverse_f_integral_to: P_upper >= momentum bound");
        const double ex = 1.0 - 2.0 * pm->k;
        std::function<double(double)> g = [&](double theta) {
            return a * std::pow(std::cos(theta), ex);
        };
        return integrate(g, 0.0, std::asin(std::sqrt(pm->beta) * P_upper), quad).value;
    }
    std::function<double(double)> g = [&](double P) { return 1.0 / eval_f(family, P); };
    return integrate(g, 0.0, P_upper, quad).value;
}

double compute_b(const DeformationFamily& family, const QuadratureSpec& quad) {
    validate(family);
    return std::visit(
        Overload{
            [&](const Undeformed&) { return kInf; },
            [&](const PolyPlus& f) {
                if (f.k == 1.0) return kPi / (2.0 * std::sqrt(f.beta));
                return inverse_f_integral(family, [](double) { return 1.0; }, quad);
            },
            [&](const PolyMinus& f) {
                if (f.k == 0.5) return kPi / (2.0 * std::sqrt(f.beta));
                if (f.k == -1.0) return 2.0 / (3.0 * std::sqrt(f.beta));
                return inverse_f_integral(family, [](double) { return 1.0; }, quad);
            },
            [&](const ExpSqrt& f) { return 1.0 / std::sqrt(f.beta); },
            [&](const ExpCbrt&) {
                return inverse_f_integral(family, [](double) { return 1.0; }, quad);
            },
            [&](const Custom& f) {
                if (!f.finite_b) return kInf;
                return inverse_f_integral(family, [](double) { return 1.0; }, quad);
            },
        },
        family);
}

AlgebraContext make_context(const PhysicalParams& params, DeformationFamily family,
                            const QuadratureSpec& quad) {
    validate(params);
    validate(family);
    AlgebraContext ctx{params, std::move(family), 0.0, 0.0};
    ctx.b = compute_b(ctx.family, quad);
    ctx.l0 = std::isfinite(ctx.b) ? kPi * params.hbar / (2.0 * ctx.b) : 0.0;
    return ctx;
}

double minimal_length(const AlgebraContext& ctx) { return ctx.l0; }

double g_inverse(const DeformationFamily& family, double P, const QuadratureSpec& quad) {
    if (P == 0.0) return 0.0;
    const double sign = P < 0.0 ? -1.0 : 1.0;
    const double Pa = std::abs(P);
    const double a = momentum_bound(family);
    if (std::isfinite(a) && Pa >= a) throw DomainError("g_inverse: |P| >= momentum bound");

    if (const auto* pp = std::get_if<PolyPlus>(&family)) {
        if (pp->k == 1.0) {
            const double s = std::sqrt(pp->beta);
            return sign * std::atan(s * Pa) / s;
        }
    }
    if (const auto* pm = std::get_if<PolyMinus>(&family)) {
        const double s = std::sqrt(pm->beta);
        if (pm->k == 0.5) return sign * std::asin(s * Pa) / s;
        if (pm->k == -1.0) return sign * (Pa - pm->beta * Pa * Pa * Pa / 3.0);
    }
    if (std::holds_alternative<Undeformed>(family)) return P;
    return sign * inverse_f_integral_to(family, Pa, quad);
}

double g_eval(const DeformationFamily& family, double p, const QuadratureSpec& quad,
              const RootSpec& root) {
    if (p == 0.0) return 0.0;
    const double sign = p < 0.0 ? -1.0 : 1.0;
    const double pa = std::abs(p);
    // g(p) = p + O(beta p^3); below this threshold the correction is far
    // under any representable relative error, and the generic root solve
    // would operate on denormals
    if (pa < 1e-150) return p;

    if (std::holds_alternative<Undeformed>(family)) return p;
    if (const auto* pp = std::get_if<PolyPlus>(&family)) {
        const double s = std::sqrt(pp->beta);
        if (pp->k == 1.0) {
            if (pa >= kPi / (2.0 * s)) throw DomainError("g_eval: |p| >= b");
            return sign * std::tan(s * pa) / s;
        }
        if (pp->k == 1.5) {
            if (pa >= 1.0 / s) throw DomainError("g_eval: |p| >= b");
            return sign * pa / std::sqrt((1.0 - s * pa) * (1.0 + s * pa));
        }
    }
    if (const auto* pm = std::get_if<PolyMinus>(&family)) {
        const double s = std::sqrt(pm->beta);
        if (pm->k == 0.5) {
            if (pa >= kPi / (2.0 * s)) throw DomainError("g_eval: |p| >= b");
            return sign * std::sin(s * pa) / s;
        }
    }

    const double b = compute_b(family, quad);
    if (pa >= b) throw DomainError("g_eval: |p| >= b");
    const double a = momentum_bound(family);
    std::function<double(double)> fn = [&](double P) {
        return g_inverse(family, P, quad) - pa;
    };
    double P;
    if (std::isfinite(a)) {
        P = solve_root_bracketed(fn, 0.0, std::nextafter(a, 0.0), root);
    } else {
        // g_inverse(P) <= P when f >= 1, so P = pa seeds from below for the
        // unbounded families; geometric expansion finds the sign change
        P = solve_root(fn, pa, root);
    }
    return sign * P;
}

double g_near_bound(const DeformationFamily& family, double d, const QuadratureSpec& quad,
                    const RootSpec& root) {
    const double b = compute_b(family, quad);
    require(std::isfinite(b), "g_near_bound: b must be finite");
    require(d > 0.0 && d <= b, "g_near_bound: 0 < d <= b required");
    const double a = momentum_bound(family);
    if (std::isfinite(a)) {
        // g stays bounded by a; the direct solve is well conditioned here
        return g_eval(family, b - d, quad, root);
    }
    std::function<double(double)> fn = [&](double P) {
        std::function<double(double)> inv_f = [&](double Pp) {
            return 1.0 / eval_f(family, Pp);
        };
        return integrate(inv_f, P, kInf, quad).value - d;
    };
    // tiny d puts the root at enormous P (e.g. 1/(beta d) for Kempf), so
    // expand the bracket aggressively: 16^max_iter covers P up to ~1e240
    RootSpec wide = root;
    wide.bracket_growth = 16.0;
    return solve_root(fn, std::isfinite(b) ? std::max(1.0, 1.0 / b) : 1.0, wide);
}

double g_eval(const AlgebraContext& ctx, double p, const QuadratureSpec& quad,
              const RootSpec& root) {
    if (std::abs(p) >= ctx.b) throw DomainError("g_eval: |p| >= b");
    return g_eval(ctx.family, p, quad, root);
}

}  // namespace dha
