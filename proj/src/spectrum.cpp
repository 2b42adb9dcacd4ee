#include "dha/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dha {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

double family_beta(const DeformationFamily& family) {
    if (const auto* pp = std::get_if<PolyPlus>(&family)) return pp->beta;
    if (const auto* pm = std::get_if<PolyMinus>(&family)) return pm->beta;
    if (const auto* es = std::get_if<ExpSqrt>(&family)) return es->beta;
    if (const auto* ec = std::get_if<ExpCbrt>(&family)) return ec->beta;
    throw DomainError("family has no deformation parameter beta");
}

DeformationFamily with_beta(const DeformationFamily& family, double beta) {
    if (const auto* pp = std::get_if<PolyPlus>(&family)) return PolyPlus{beta, pp->k};
    if (const auto* pm = std::get_if<PolyMinus>(&family)) return PolyMinus{beta, pm->k};
    if (std::holds_alternative<ExpSqrt>(family)) return ExpSqrt{beta};
    if (std::holds_alternative<ExpCbrt>(family)) return ExpCbrt{beta};
    throw DomainError("family has no deformation parameter beta");
}

double arccot(double x) {
    // branch on (0, pi)
    return kPi / 2 - std::atan(x);
}

}  // namespace

ExtensionParam ExtensionParam::from_delta(double d) {
    if (!(d >= 0.0 && d <= 1.0)) throw DomainError("delta must lie in [0, 1]");
    if (d == 1.0) d = 0.0;
    return ExtensionParam{d};
}

ExtensionParam ExtensionParam::from_A(double A) {
    if (std::isnan(A)) throw DomainError("A must not be NaN");
    if (std::isinf(A)) return ExtensionParam{0.0};
    if (A == 0.0) return ExtensionParam{0.5};
    return ExtensionParam{arccot(A) / kPi};
}

double ExtensionParam::A() const {
    if (delta == 0.0) return kInf;
    if (delta == 0.5) return 0.0;
    return std::cos(kPi * delta) / std::sin(kPi * delta);
}

double quantization_integral(const AlgebraContext& ctx, double q,
                             const QuadratureSpec& quad) {
    if (!(q > 0.0)) throw DomainError("quantization_integral: q > 0 required");
    const double q2 = q * q;
    const double scale = 2.0 * ctx.params.mass * ctx.params.alpha / ctx.params.hbar;
    return scale * inverse_f_integral(
                       ctx.family, [q2](double P) { return 1.0 / (P * P + q2); }, quad);
}

EnergyLevel solve_level(const AlgebraContext& ctx, int n, ExtensionParam ext,
                        const QuadratureSpec& quad, const RootSpec& root) {
    const double tau = n + ext.delta;
    if (tau == 0.0)
        throw DomainError("solve_level: n + delta = 0 has no finite root (E -> -inf)");
    if (tau * ctx.params.alpha < 0.0)
        throw DomainError("solve_level: n + delta must have the sign of alpha");
    const double target = kPi * tau;
    const double seed =
        std::abs(ctx.params.alpha) * ctx.params.mass / (ctx.params.hbar * std::abs(tau));
    const double q = solve_root(
        [&](double qq) { return quantization_integral(ctx, qq, quad) - target; }, seed,
        root);
    return EnergyLevel{n, ext.delta, q, -q * q / (2.0 * ctx.params.mass)};
}

std::vector<EnergyLevel> solve_band(const AlgebraContext& ctx, int n_lo, int n_hi,
                                    ExtensionParam ext, const QuadratureSpec& quad,
                                    const RootSpec& root) {
    if (n_hi < n_lo) throw DomainError("solve_band: empty range");
    std::vector<EnergyLevel> levels;
    levels.reserve(static_cast<size_t>(n_hi - n_lo) + 1);
    for (int n = n_lo; n <= n_hi; ++n) levels.push_back(solve_level(ctx, n, ext, quad, root));
    return levels;
}

double undeformed_energy(const PhysicalParams& params, int n, ExtensionParam ext) {
    const double tau = n + ext.delta;
    if (tau == 0.0) throw DomainError("n + delta = 0");
    const double x = params.alpha * params.mass / (params.hbar * tau);
    return -x * x / (2.0 * params.mass);
}

ClosedFormEnergy closed_form_energy(const DeformationFamily& family,
                                    const PhysicalParams& params, int n,
                                    ExtensionParam ext) {
    const double tau = n + ext.delta;
    const double hbar = params.hbar, m = params.mass, alpha = params.alpha;

    if (std::holds_alternative<Undeformed>(family))
        return undeformed_energy(params, n, ext);

    if (const auto* pp = std::get_if<PolyPlus>(&family)) {
        const double sb = std::sqrt(pp->beta);
        if (pp->k == 1.0) {
            const double r = 1.0 - std::sqrt(1.0 + 4.0 * m * alpha * sb / (hbar * tau));
            return -r * r / (8.0 * m * pp->beta);
        }
        if (pp->k == 1.5) {
            const double beta = pp->beta;
            return LevelResidual([=](double q) {
                const double w = 1.0 - beta * q * q;
                return (1.0 / w) *
                           (std::atan(std::sqrt(w) / (sb * q)) / (q * std::sqrt(w)) - sb) -
                       kPi * hbar * tau / (2.0 * alpha * m);
            });
        }
    }
    if (const auto* pm = std::get_if<PolyMinus>(&family)) {
        const double sb = std::sqrt(pm->beta);
        if (pm->k == 0.5) {
            const double x = m * alpha / (hbar * tau);
            return (1.0 - std::sqrt(1.0 + 4.0 * pm->beta * x * x)) / (4.0 * m * pm->beta);
        }
        if (pm->k == -1.0) {
            const double beta = pm->beta;
            return LevelResidual([=](double q) {
                return (1.0 + beta * q * q) / q * arccot(sb * q) - sb -
                       kPi * hbar * tau / (2.0 * m * alpha);
            });
        }
    }
    throw DomainError("closed_form_energy: no closed form for this family");
}

double leading_correction(const DeformationFamily& family, const PhysicalParams& params,
                          int n, ExtensionParam ext) {
    const double tau = n + ext.delta;
    if (tau == 0.0) throw DomainError("n + delta = 0");
    const double hbar = params.hbar, m = params.mass, alpha = params.alpha;
    const double cubic =
        alpha * alpha * alpha * m * m / (hbar * hbar * hbar * tau * tau * tau);

    if (const auto* pp = std::get_if<PolyPlus>(&family)) {
        const double ratio = std::tgamma(pp->k + 0.5) / std::tgamma(pp->k);
        return 2.0 * std::sqrt(pp->beta) * ratio / std::sqrt(kPi) * cubic;
    }
    if (const auto* pm = std::get_if<PolyMinus>(&family)) {
        if (pm->k == 0.5) return 0.0;  // Gamma(0) pole: the sqrt(beta) term vanishes
        const double ratio = std::tgamma(1.0 - pm->k) / std::tgamma(0.5 - pm->k);
        return 2.0 * std::sqrt(pm->beta) * ratio / std::sqrt(kPi) * cubic;
    }
    if (const auto* es = std::get_if<ExpSqrt>(&family)) {
        // log factor written as ln(hbar/(alpha m sqrt(beta))) > 0 for small
        // beta, matching the sign of the numerically solved shift
        const double sb = std::sqrt(es->beta);
        return 2.0 / kPi * sb * cubic * std::log(hbar / (alpha * m * sb));
    }
    if (const auto* ec = std::get_if<ExpCbrt>(&family)) {
        const double u = alpha * m * std::sqrt(ec->beta) / (hbar * tau);
        return 2.0 * alpha * alpha * m / (hbar * hbar * tau * tau) * std::pow(u, 2.0 / 3.0);
    }
    throw DomainError("leading_correction: unsupported family");
}

double dq2_dbeta(const AlgebraContext& ctx, double q, const QuadratureSpec& quad) {
    const double beta = family_beta(ctx.family);
    if (!(q > 0.0)) throw DomainError("dq2_dbeta: q > 0 required");
    const double q2 = q * q;
    const double num = inverse_f_integral(
        ctx.family,
        [q2](double P) {
            if (P > 1e100) {  // avoid inf/inf from the P^2 overflow
                const double t = 1.0 / P;
                const double r2 = q2 * t * t;
                return t * t * (1.0 - r2) / ((1.0 + r2) * (1.0 + r2));
            }
            const double d = P * P + q2;
            return (P * P - q2) / (d * d);
        },
        quad);
    const double den = inverse_f_integral(
        ctx.family,
        [q2](double P) {
            const double d = P * P + q2;
            return 1.0 / (d * d);
        },
        quad);
    if (den == 0.0 || !std::isfinite(den)) throw NumericsError("dq2_dbeta: degenerate denominator");
    return num / den / (2.0 * beta);
}

CorrectionFit correction_vs_numeric(const DeformationFamily& family,
                                    const PhysicalParams& params, int n,
                                    ExtensionParam ext,
                                    const std::vector<double>& beta_grid,
                                    const QuadratureSpec& quad, const RootSpec& root) {
    if (beta_grid.size() < 2) throw DomainError("beta grid needs at least two points");
    const auto [lo_it, hi_it] = std::minmax_element(beta_grid.begin(), beta_grid.end());
    if (!(*lo_it > 0.0) || *hi_it / *lo_it < 100.0)
        throw DomainError("beta grid must span at least two decades of positive beta");

    const bool exp_sqrt = std::holds_alternative<ExpSqrt>(family);
    double theory = 0.5;
    if (const auto* pm = std::get_if<PolyMinus>(&family)) {
        if (pm->k == 0.5) theory = 1.0;
    } else if (std::holds_alternative<ExpCbrt>(family)) {
        theory = 1.0 / 3.0;
    }

    const double e0 = undeformed_energy(params, n, ext);
    std::vector<double> lx, ly, lc;
    double sign_acc = 0.0;
    for (double beta : beta_grid) {
        auto ctx = make_context(params, with_beta(family, beta), quad);
        const double de = solve_level(ctx, n, ext, quad, root).E - e0;
        if (de == 0.0 || !std::isfinite(de))
            throw NumericsError("correction fit: degenerate energy shift");
        double y = std::log(std::abs(de));
        double c = y - theory * std::log(beta);
        if (exp_sqrt) {
            const double lf =
                std::log(std::abs(std::log(params.alpha * params.mass * std::sqrt(beta) /
                                           params.hbar)));
            y -= lf;
            c -= lf;
        }
        lx.push_back(std::log(beta));
        ly.push_back(y);
        lc.push_back(c);
        sign_acc += de > 0.0 ? 1.0 : -1.0;
    }
    const size_t N = lx.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < N; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= N;
    my /= N;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < N; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw NumericsError("correction fit: degenerate abscissas");
    double mc = 0;
    for (double c : lc) mc += c;
    mc /= N;
    const double sgn = sign_acc >= 0.0 ? 1.0 : -1.0;
    return CorrectionFit{sxy / sxx, sgn * std::exp(mc), theory};
}

}  // namespace dha
