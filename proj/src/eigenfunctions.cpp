#include "dha/eigenfunctions.hpp"

#include <cmath>

namespace dha {

namespace {

constexpr int kPhaseSegments = 48;

double phase_integrand(const DeformationFamily& family, double q2, double p,
                       const QuadratureSpec& quad) {
    const double g = g_eval(family, p, quad);
    return 1.0 / (g * g + q2);
}

// int_lo^hi dp / (g^2(p) + q^2). When hi is the boundary b itself and g is
// unbounded there, nodes within 1e-8 b of the boundary evaluate g from the
// exact node-to-boundary distance to dodge the cancellation in b - p.
double phase_piece(const AlgebraContext& ctx, double q2, double lo, double hi,
                   const QuadratureSpec& quad) {
    const bool guarded = std::isfinite(ctx.b) && hi == ctx.b &&
                         !std::isfinite(momentum_bound(ctx.family));
    if (!guarded) {
        std::function<double(double)> fn = [&](double p) {
            return phase_integrand(ctx.family, q2, p, quad);
        };
        return integrate(fn, lo, hi, quad).value;
    }
    const double cutoff = 1e-8 * ctx.b;
    // below this distance the node weight is < 1e-38, so clamping the
    // (bounded) integrand there is invisible at the quadrature tolerance
    const double floor_d = 1e-40 * ctx.b;
    std::function<double(double, double)> fn = [&](double p, double xc) {
        const double g = (xc < 0.0 && -xc < cutoff)
                             ? g_near_bound(ctx.family, std::max(-xc, floor_d), quad)
                             : g_eval(ctx.family, p, quad);
        return 1.0 / (g * g + q2);
    };
    return integrate(fn, lo, hi, quad).value;
}

std::complex<double> integrate_state(const BoundState& state, double lo, double hi,
                                     const QuadratureSpec& quad) {
    std::function<double(double)> re = [&](double p) {
        return state.modulus(p) * std::cos(state.phase_at(p));
    };
    std::function<double(double)> im = [&](double p) {
        return -state.modulus(p) * std::sin(state.phase_at(p));
    };
    return {integrate(re, lo, hi, quad).value, integrate(im, lo, hi, quad).value};
}

}  // namespace

double phase(const AlgebraContext& ctx, double q, double p, const QuadratureSpec& quad) {
    if (!(q > 0.0)) throw DomainError("phase: q > 0 required");
    if (p == 0.0) return 0.0;
    const double pa = std::abs(p);
    if (pa > ctx.b) throw DomainError("phase: |p| > b");
    const double q2 = q * q;
    const double scale = 2.0 * ctx.params.mass * ctx.params.alpha / ctx.params.hbar;
    const double value = scale * phase_piece(ctx, q2, 0.0, pa, quad);
    return p < 0.0 ? -value : value;
}

double normalization(const AlgebraContext& ctx, double q, const QuadratureSpec& quad) {
    if (!(q > 0.0)) throw DomainError("normalization: q > 0 required");
    const double q2 = q * q;
    // int_{-b}^{b} dp / (g^2 + q^2)^2 = 2 int_0^a dP / (f (P^2 + q^2)^2)
    const double norm2 = 2.0 * inverse_f_integral(
                                   ctx.family,
                                   [q2](double P) {
                                       const double d = P * P + q2;
                                       return 1.0 / (d * d);
                                   },
                                   quad);
    if (!(norm2 > 0.0) || !std::isfinite(norm2))
        throw NumericsError("normalization: degenerate norm integral");
    return 1.0 / std::sqrt(norm2);
}

BoundState::BoundState(const AlgebraContext& ctx, const EnergyLevel& level,
                       const QuadratureSpec& quad)
    : ctx_(&ctx), level_(level), quad_(quad) {
    if (!(level.q > 0.0)) throw DomainError("BoundState: q > 0 required");
    C_ = dha::normalization(ctx, level.q, quad);
    phase_scale_ = 2.0 * ctx.params.mass * ctx.params.alpha / ctx.params.hbar;
    if (std::isfinite(ctx.b)) {
        const double q2 = level.q * level.q;
        grid_p_.resize(kPhaseSegments + 1);
        grid_phi_.resize(kPhaseSegments + 1);
        grid_p_[0] = 0.0;
        grid_phi_[0] = 0.0;
        for (int j = 1; j <= kPhaseSegments; ++j) {
            grid_p_[j] = j == kPhaseSegments ? ctx.b : ctx.b * j / kPhaseSegments;
            grid_phi_[j] =
                grid_phi_[j - 1] +
                phase_scale_ * phase_piece(ctx, q2, grid_p_[j - 1], grid_p_[j], quad);
        }
    }
}

double BoundState::phase_at(double p) const {
    if (p == 0.0) return 0.0;
    const double pa = std::abs(p);
    if (pa > ctx_->b) throw DomainError("phase_at: |p| > b");
    double value;
    if (grid_p_.empty()) {
        value = dha::phase(*ctx_, level_.q, pa, quad_);
    } else {
        const double h = ctx_->b / kPhaseSegments;
        int j = static_cast<int>(pa / h);
        if (j > kPhaseSegments) j = kPhaseSegments;
        if (j == kPhaseSegments) {
            value = grid_phi_[j];
        } else {
            const double q2 = level_.q * level_.q;
            std::function<double(double)> fn = [&](double pp) {
                return phase_integrand(ctx_->family, q2, pp, quad_);
            };
            value = grid_phi_[j] +
                    phase_scale_ * integrate(fn, grid_p_[j], pa, quad_).value;
        }
    }
    return p < 0.0 ? -value : value;
}

double BoundState::modulus(double p) const {
    const double g = g_eval(ctx_->family, p, quad_);
    return C_ / (g * g + level_.q * level_.q);
}

std::complex<double> BoundState::eval(double p) const {
    const double mod = modulus(p);
    const double phi = phase_at(p);
    return {mod * std::cos(phi), -mod * std::sin(phi)};
}

double integral_equation_residual(const BoundState& state, ExtensionParam ext,
                                  const std::vector<double>& p_samples,
                                  const QuadratureSpec& quad) {
    const double A = ext.A();
    if (!std::isfinite(A))
        throw DomainError("integral_equation_residual: delta = 0 (A infinite)");
    const AlgebraContext& ctx = state.context();
    const double m = ctx.params.mass, hbar = ctx.params.hbar, alpha = ctx.params.alpha;
    const double q = state.level().q;
    const double E = state.level().E;
    const double C = state.normalization();

    const double phi_b = state.phase_at(ctx.b);
    const std::complex<double> I1{hbar * C / (m * alpha) * std::sin(phi_b), 0.0};
    // int_{-b}^{0} psi = conj(int_0^b psi) since psi(-p) = conj(psi(p))
    const std::complex<double> half = integrate_state(state, 0.0, ctx.b, quad);
    const std::complex<double> iA{A, 1.0};  // i + A
    const std::complex<double> two_i{0.0, 2.0};

    double worst = 0.0;
    for (double p : p_samples) {
        const std::complex<double> psi = state.eval(p);
        std::complex<double> I2 = std::conj(half);
        if (p > 0.0)
            I2 += integrate_state(state, 0.0, p, quad);
        else if (p < 0.0)
            I2 -= std::conj(integrate_state(state, 0.0, -p, quad));
        const double g = g_eval(ctx.family, p, quad);
        const std::complex<double> lhs = (g * g / (2.0 * m)) * psi -
                                         (alpha / (2.0 * hbar)) * (iA * I1 - two_i * I2) -
                                         E * psi;
        worst = std::max(worst, std::abs(lhs));
    }
    return worst;
}

}  // namespace dha
