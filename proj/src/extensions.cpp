#include "dha/extensions.hpp"

#include <cmath>

namespace dha {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Complex = std::complex<double>;

Complex trapezoid(const GridFunction& f, const GridFunction& g, int stride) {
    const int n = f.size();
    const double h = f.spacing() * stride;
    Complex acc = 0.5 * (std::conj(f[0]) * g[0] +
                         std::conj(f[n - 1]) * g[n - 1]);
    for (int i = stride; i < n - 1; i += stride) acc += std::conj(f[i]) * g[i];
    return acc * h;
}

// Cumulative integral on the uniform grid, fourth order: each segment uses
// the cubic through the four nearest samples.
std::vector<Complex> cumulative_integral(const GridFunction& f) {
    const int n = f.size();
    const double h = f.spacing();
    std::vector<Complex> F(n);
    F[0] = 0.0;
    for (int j = 0; j + 1 < n; ++j) {
        Complex seg;
        if (j == 0)
            seg = (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) * (h / 24.0);
        else if (j == n - 2)
            seg = (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1]) *
                  (h / 24.0);
        else
            seg = (-f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]) * (h / 24.0);
        F[j + 1] = F[j] + seg;
    }
    return F;
}

void require_minimal_length(const AlgebraContext& ctx) {
    if (!(ctx.l0 > 0.0) || !std::isfinite(ctx.b))
        throw DomainError("no discrete position eigenbasis: minimal length is zero");
}

void require_matching_grid(const AlgebraContext& ctx, const GridFunction& f) {
    if (!(std::abs(f.b() - ctx.b) <= 1e-12 * ctx.b))
        throw DomainError("grid interval does not match the context's [-b, b]");
}

}  // namespace

std::complex<double> PositionEigenstate::eval(double p) const {
    const double arg = -lambda * p / hbar;
    return Complex(std::cos(arg), std::sin(arg)) / std::sqrt(2.0 * b);
}

double position_eigenvalue(const AlgebraContext& ctx, int n, ExtensionParam ext) {
    require_minimal_length(ctx);
    return 2.0 * (ext.delta + n) * ctx.l0;
}

PositionEigenstate position_eigenstate(const AlgebraContext& ctx, int n,
                                       ExtensionParam ext) {
    return PositionEigenstate{n, ext.delta, position_eigenvalue(ctx, n, ext), ctx.b,
                              ctx.params.hbar};
}

double eigenstate_inner_product(double lambda, double lambda_prime, double b,
                                double hbar) {
    const double x = (lambda - lambda_prime) * b / hbar;
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

GridFunction::GridFunction(double b, std::vector<Complex> samples)
    : b_(b), samples_(std::move(samples)) {
    if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("GridFunction: b > 0 required");
    if (samples_.size() < 16) throw DomainError("GridFunction: at least 16 samples");
}

GridFunction GridFunction::sample(double b, int n_points,
                                  const std::function<Complex(double)>& fn) {
    if (n_points < 16) throw DomainError("GridFunction: at least 16 samples");
    std::vector<Complex> values(n_points);
    const double h = 2.0 * b / (n_points - 1);
    for (int i = 0; i < n_points; ++i)
        values[i] = fn(i == n_points - 1 ? b : -b + h * i);
    return GridFunction(b, std::move(values));
}

std::complex<double> inner_product(const GridFunction& f, const GridFunction& g) {
    if (f.size() != g.size() || f.b() != g.b())
        throw DomainError("inner_product: mismatched grids");
    const Complex fine = trapezoid(f, g, 1);
    if (f.size() % 2 == 0) return fine;
    const Complex coarse = trapezoid(f, g, 2);
    return (4.0 * fine - coarse) / 3.0;
}

double norm_squared(const GridFunction& f) { return inner_product(f, f).real(); }

std::complex<double> project(const AlgebraContext& ctx, ExtensionParam ext, int n,
                             const GridFunction& f) {
    require_matching_grid(ctx, f);
    const auto psi = position_eigenstate(ctx, n, ext);
    GridFunction basis = GridFunction::sample(
        f.b(), f.size(), [&](double p) { return psi.eval(p); });
    return inner_product(basis, f);
}

GridFunction apply_X(const AlgebraContext& ctx, const GridFunction& f,
                     ExtensionParam ext, int n_trunc, double bc_tol) {
    require_matching_grid(ctx, f);
    if (n_trunc < 0) throw DomainError("apply_X: n_trunc >= 0 required");

    double peak = 0.0;
    for (const auto& v : f.samples()) peak = std::max(peak, std::abs(v));
    const Complex twist{std::cos(2.0 * kPi * ext.delta), std::sin(2.0 * kPi * ext.delta)};
    if (std::abs(f[0] - twist * f[f.size() - 1]) > bc_tol * std::max(1.0, peak))
        throw DomainError("apply_X: boundary condition psi(-b) = e^{2 i delta pi} psi(b) violated");

    const int n = f.size();
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    for (int m = -n_trunc; m <= n_trunc; ++m) {
        const Complex c = project(ctx, ext, m, f);
        const auto psi = position_eigenstate(ctx, m, ext);
        const Complex scale = psi.lambda * c;
        for (int i = 0; i < n; ++i) out[i] += scale * psi.eval(f.point(i));
    }
    return GridFunction(f.b(), std::move(out));
}

std::complex<double> c_delta_functional(const AlgebraContext& ctx,
                                        const GridFunction& f, ExtensionParam ext) {
    const double A = ext.A();
    if (!std::isfinite(A))
        throw DomainError("c_delta: delta = 0 is outside the operator domain");
    const Complex total = cumulative_integral(f).back();
    return Complex(A, 1.0) / (2.0 * ctx.params.hbar) * total;
}

GridFunction apply_inverse_X(const AlgebraContext& ctx, const GridFunction& f,
                             ExtensionParam ext) {
    require_matching_grid(ctx, f);
    const Complex c = c_delta_functional(ctx, f, ext);  // rejects delta = 0
    const auto F = cumulative_integral(f);
    const Complex mi_over_h(0.0, -1.0 / ctx.params.hbar);
    std::vector<Complex> out(f.size());
    for (int i = 0; i < f.size(); ++i) out[i] = mi_over_h * F[i] + c;
    return GridFunction(f.b(), std::move(out));
}

GridFunction apply_inverse_X_spectral(const AlgebraContext& ctx,
                                      const GridFunction& f, ExtensionParam ext,
                                      int n_trunc) {
    require_matching_grid(ctx, f);
    if (ext.delta == 0.0)
        throw DomainError("1/X: delta = 0 has the singular eigenvalue lambda = 0");
    const int n = f.size();
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    for (int m = -n_trunc; m <= n_trunc; ++m) {
        const Complex c = project(ctx, ext, m, f);
        const auto psi = position_eigenstate(ctx, m, ext);
        const Complex scale = c / psi.lambda;
        for (int i = 0; i < n; ++i) out[i] += scale * psi.eval(f.point(i));
    }
    return GridFunction(f.b(), std::move(out));
}

double completeness_check(const AlgebraContext& ctx, ExtensionParam ext,
                          const GridFunction& f, int n_trunc) {
    require_matching_grid(ctx, f);
    double sum = 0.0;
    for (int m = -n_trunc; m <= n_trunc; ++m) sum += std::norm(project(ctx, ext, m, f));
    return std::abs(norm_squared(f) - sum);
}

ExtensionParam parity_map(ExtensionParam ext) {
    return ExtensionParam::from_delta(ext.delta == 0.0 ? 0.0 : 1.0 - ext.delta);
}

}  // namespace dha
