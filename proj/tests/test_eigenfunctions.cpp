#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dha/eigenfunctions.hpp"

using namespace dha;

namespace {
constexpr double kPi = 3.14159265358979323846;
const PhysicalParams kNatural{};

std::vector<double> chebyshev_samples(double b, int count) {
    std::vector<double> p;
    for (int j = 0; j < count; ++j)
        p.push_back(b * std::cos(kPi * (2 * j + 1) / (2.0 * count)));
    return p;
}
}  // namespace

TEST_CASE("phase: undeformed closed form and oddness") {
    auto ctx = make_context(kNatural, Undeformed{});
    CHECK(phase(ctx, 1.0, 0.0) == 0.0);
    for (double q : {0.5, 1.0, 2.0})
        for (double p : {0.1, 1.0, 5.0}) {
            const double closed = 2.0 / q * std::atan(p / q);
            CHECK(phase(ctx, q, p) == doctest::Approx(closed).epsilon(1e-12));
            CHECK(phase(ctx, q, -p) == -phase(ctx, q, p));
        }
    // monotone increasing
    CHECK(phase(ctx, 1.0, 0.5) < phase(ctx, 1.0, 1.0));
}

TEST_CASE("phase(b) equals the quantization integral") {
    for (DeformationFamily fam : std::vector<DeformationFamily>{
             PolyPlus{0.01, 1.0}, PolyPlus{0.04, 1.5}, PolyMinus{0.04, 0.5},
             PolyMinus{0.04, -1.0}, ExpSqrt{0.04}}) {
        auto ctx = make_context(kNatural, fam);
        for (double q : {0.7, 1.5}) {
            const double lhs = phase(ctx, q, ctx.b);
            const double rhs = quantization_integral(ctx, q);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("phase(b) = pi(n + delta) at solved levels") {
    auto ext = ExtensionParam::from_delta(0.5);
    auto ctx = make_context(kNatural, PolyPlus{0.01, 1.0});
    for (int n = 0; n <= 2; ++n) {
        auto lvl = solve_level(ctx, n, ext);
        CHECK(std::abs(phase(ctx, lvl.q, ctx.b) - kPi * (n + ext.delta)) <= 1e-9);
    }
}

TEST_CASE("normalization closed forms") {
    auto none = make_context(kNatural, Undeformed{});
    CHECK(normalization(none, 1.0) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-12));
    // C scales as q^{3/2} in the undeformed case
    const double ratio = normalization(none, 2.0) / normalization(none, 1.0);
    CHECK(ratio == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
}

TEST_CASE("bound state: modulus, cached phase, unit norm") {
    auto ext = ExtensionParam::from_delta(0.5);
    auto ctx = make_context(kNatural, PolyPlus{0.01, 1.0});
    auto lvl = solve_level(ctx, 0, ext);
    BoundState state(ctx, lvl);

    CHECK(std::abs(state.eval(0.0)) ==
          doctest::Approx(state.normalization() / (lvl.q * lvl.q)).epsilon(1e-13));
    // amplitude dies at the boundary (g diverges for PolyPlus)
    CHECK(state.modulus(0.999 * ctx.b) < 1e-4 * state.modulus(0.0));
    // conjugation symmetry
    for (double p : {0.3, 2.0, 10.0})
        CHECK(std::abs(state.eval(-p) - std::conj(state.eval(p))) <= 1e-13);
    // cached phase agrees with direct quadrature
    for (double p : {0.1, 3.7, 12.9, ctx.b})
        CHECK(state.phase_at(p) == doctest::Approx(phase(ctx, lvl.q, p)).epsilon(1e-11));

    std::function<double(double)> density = [&](double p) {
        const double mod = state.modulus(p);
        return mod * mod;
    };
    const double norm = integrate(density, -ctx.b, ctx.b).value;
    CHECK(std::abs(norm - 1.0) <= 1e-10);
}

TEST_CASE("I1 identity: quadrature of psi matches the sin form") {
    auto ext = ExtensionParam::from_delta(0.3);
    auto ctx = make_context(kNatural, PolyPlus{0.01, 1.0});
    auto lvl = solve_level(ctx, 1, ext);
    BoundState state(ctx, lvl);
    std::function<double(double)> re = [&](double p) {
        return state.modulus(p) * std::cos(state.phase_at(p));
    };
    std::function<double(double)> im = [&](double p) {
        return -state.modulus(p) * std::sin(state.phase_at(p));
    };
    const double i1_re = integrate(re, -ctx.b, ctx.b).value;
    const double i1_im = integrate(im, -ctx.b, ctx.b).value;
    const double expected = state.normalization() * std::sin(state.phase_at(ctx.b));
    CHECK(i1_re == doctest::Approx(expected).epsilon(1e-8));
    CHECK(std::abs(i1_im) <= 1e-8 * std::abs(expected));
}

TEST_CASE("integral equation residual vanishes only at the solved level") {
    auto ext = ExtensionParam::from_delta(0.5);
    auto ctx = make_context(kNatural, PolyPlus{0.01, 1.0});
    auto lvl = solve_level(ctx, 0, ext);
    BoundState state(ctx, lvl);
    const auto samples = chebyshev_samples(ctx.b, 21);

    const double base = integral_equation_residual(state, ext, samples);
    CHECK(base <= 1e-8 * std::abs(lvl.E));

    EnergyLevel off = lvl;
    off.q = lvl.q * 1.01;
    off.E = -off.q * off.q / 2.0;
    BoundState wrong(ctx, off);
    CHECK(integral_equation_residual(wrong, ext, samples) >= 1e3 * base);

    // extension mismatch: same state checked against delta = 0.1
    const double mismatched =
        integral_equation_residual(state, ExtensionParam::from_delta(0.1), samples);
    CHECK(mismatched >= 1e3 * base);

    CHECK_THROWS_AS(
        integral_equation_residual(state, ExtensionParam::from_delta(0.0), samples),
        DomainError);
}

TEST_CASE("residual also vanishes for PolyMinus k=1/2") {
    auto ext = ExtensionParam::from_delta(0.7);
    auto ctx = make_context(kNatural, PolyMinus{0.04, 0.5});
    auto lvl = solve_level(ctx, 1, ext);
    BoundState state(ctx, lvl);
    const auto samples = chebyshev_samples(ctx.b, 11);
    CHECK(integral_equation_residual(state, ext, samples) <= 1e-8 * std::abs(lvl.E));
}

TEST_CASE("kernel values") {
    Kernel U{0.0, 1.0, 1.0};  // A = 0, natural units
    CHECK(U(0.0, 1.0) == std::complex<double>(0.0, -0.5));   // theta = 1
    CHECK(U(1.0, 0.0) == std::complex<double>(0.0, 0.5));    // theta = 0
    CHECK(U(1.0, 1.0) == std::complex<double>(0.0, 0.0));    // theta = 1/2
    Kernel UA{2.0, 1.0, 1.0};
    CHECK(UA(1.0, 0.0) == std::complex<double>(-1.0, 0.5));
}
