#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dha/eigenfunctions.hpp"
#include "dha/extensions.hpp"
#include "dha/spectrum.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheck = 4;

struct Options {
    std::string family = "none";
    double beta = 1e-2;
    double k = 1.0;
    double delta = 0.5;
    double A = 0.0;
    double hbar = 1.0;
    double mass = 1.0;
    double alpha = 1.0;
    double tol = 1e-12;
    std::string levels = "0..3";
    std::string format = "csv";
    std::string output;
    std::string recipe;
    int n = 0;            // eigenfunction level
    int samples = 41;     // eigenfunction table size
    int ntrunc = 200;     // extensions truncation

    CLI::Option* delta_opt = nullptr;
    CLI::Option* a_opt = nullptr;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* k_opt = nullptr;
    CLI::Option* family_opt = nullptr;
    CLI::Option* levels_opt = nullptr;
};

void add_common_flags(CLI::App* app, Options& o) {
    o.family_opt =
        app->add_option("--family", o.family, "deformation family")
            ->check(CLI::IsMember({"none", "kempf", "polyplus", "polyminus", "expsqrt",
                                   "expcbrt"}));
    o.beta_opt = app->add_option("--beta", o.beta, "deformation parameter");
    o.k_opt = app->add_option("--k", o.k, "family exponent k");
    o.delta_opt = app->add_option("--delta", o.delta, "extension parameter in [0,1]");
    o.a_opt = app->add_option("--A", o.A, "extension parameter A = cot(pi delta)");
    o.delta_opt->excludes(o.a_opt);
    o.a_opt->excludes(o.delta_opt);
    app->add_option("--hbar", o.hbar);
    app->add_option("--mass", o.mass);
    app->add_option("--alpha", o.alpha, "Coulomb strength");
    app->add_option("--tol", o.tol, "quadrature/root relative tolerance");
    o.levels_opt = app->add_option("--levels", o.levels, "level range a..b");
    app->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--output", o.output, "write the table to PATH instead of stdout");
    app->add_option("--recipe", o.recipe, "named example preset");
    app->set_config("--config", "", "key = value config file; flags override");
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::string> notes;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const Table& t) {
    for (size_t i = 0; i < t.columns.size(); ++i)
        os << t.columns[i] << (i + 1 < t.columns.size() ? "," : "\n");
    for (const auto& row : t.rows)
        for (size_t i = 0; i < row.size(); ++i) {
            if (row[i]) os << fmt(*row[i]);
            os << (i + 1 < row.size() ? "," : "\n");
        }
    for (const auto& [key, value] : t.summary) os << "# " << key << " = " << fmt(value) << "\n";
    for (const auto& note : t.notes) os << "# " << note << "\n";
}

void write_json(std::ostream& os, const Table& t) {
    nlohmann::ordered_json doc;
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (size_t i = 0; i < row.size(); ++i) {
            if (row[i])
                obj[t.columns[i]] = *row[i];
            else
                obj[t.columns[i]] = nullptr;
        }
        doc["rows"].push_back(obj);
    }
    nlohmann::ordered_json summary;
    for (const auto& [key, value] : t.summary) summary[key] = value;
    doc["summary"] = summary;
    doc["notes"] = t.notes;
    os << doc.dump(2) << "\n";
}

void emit(const Options& o, const Table& t) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!o.output.empty()) {
        file.open(o.output, std::ios::binary | std::ios::trunc);
        if (!file) throw dha::DomainError("cannot open output file: " + o.output);
        os = &file;
    }
    if (o.format == "json")
        write_json(*os, t);
    else
        write_csv(*os, t);
}

dha::DeformationFamily make_family(const Options& o) {
    if (o.family == "none") return dha::Undeformed{};
    if (o.family == "kempf") return dha::PolyPlus{o.beta, 1.0};
    if (o.family == "polyplus") return dha::PolyPlus{o.beta, o.k};
    if (o.family == "polyminus") return dha::PolyMinus{o.beta, o.k};
    if (o.family == "expsqrt") return dha::ExpSqrt{o.beta};
    if (o.family == "expcbrt") return dha::ExpCbrt{o.beta};
    throw dha::DomainError("unknown family: " + o.family);
}

dha::ExtensionParam make_extension(const Options& o) {
    if (o.a_opt && o.a_opt->count() > 0) return dha::ExtensionParam::from_A(o.A);
    return dha::ExtensionParam::from_delta(o.delta);
}

std::pair<int, int> parse_levels(const std::string& spec) {
    const auto pos = spec.find("..");
    try {
        if (pos == std::string::npos) {
            const int n = std::stoi(spec);
            return {n, n};
        }
        const int lo = std::stoi(spec.substr(0, pos));
        const int hi = std::stoi(spec.substr(pos + 2));
        if (hi < lo) throw dha::DomainError("empty level range: " + spec);
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw dha::DomainError("cannot parse level range: " + spec);
    } catch (const std::out_of_range&) {
        throw dha::DomainError("cannot parse level range: " + spec);
    }
}

dha::QuadratureSpec make_quad(const Options& o) {
    dha::QuadratureSpec quad;
    quad.rel_tol = o.tol;
    return quad;
}

dha::RootSpec make_root(const Options& o) {
    dha::RootSpec root;
    root.tol = o.tol;
    return root;
}

struct Preset {
    const char* command;
    const char* family;
    double beta;
    double k;
    const char* levels;
};

const Preset* find_preset(const std::string& name) {
    static const Preset presets[] = {
        {"spectrum", "kempf", 1e-2, 1.0, "0..3"},       // 1a
        {"spectrum", "polyplus", 1e-4, 1.5, "0..2"},    // 1b
        {"spectrum", "polyminus", 1e-4, -1.0, "0..2"},  // 2a
        {"spectrum", "polyminus", 1e-2, 0.5, "0..3"},   // 2b
        {"corrections", "kempf", 1e-4, 1.0, "0..2"},    // 1c
        {"corrections", "polyminus", 1e-4, -1.0, "0..2"},  // 2c
        {"corrections", "expcbrt", 1e-4, 1.0, "0..2"},  // 3
        {"corrections", "expsqrt", 1e-4, 1.0, "0..2"},  // 3s
    };
    static const char* names[] = {"1a", "1b", "2a", "2b", "1c", "2c", "3", "3s"};
    for (size_t i = 0; i < std::size(names); ++i)
        if (name == names[i]) return &presets[i];
    return nullptr;
}

void apply_recipe(const char* command, Options& o) {
    if (o.recipe.empty()) return;
    const Preset* preset = find_preset(o.recipe);
    if (!preset) throw dha::DomainError("unknown recipe: " + o.recipe);
    if (std::string(preset->command) != command)
        throw dha::DomainError("recipe " + o.recipe + " belongs to subcommand " +
                               preset->command);
    if (o.family_opt->count() == 0) o.family = preset->family;
    if (o.beta_opt->count() == 0) o.beta = preset->beta;
    if (o.k_opt->count() == 0) o.k = preset->k;
    if (o.levels_opt->count() == 0) o.levels = preset->levels;
}

int cmd_spectrum(Options& o) {
    apply_recipe("spectrum", o);
    const dha::PhysicalParams params{o.hbar, o.mass, o.alpha};
    auto family = make_family(o);
    const auto ext = make_extension(o);
    const auto quad = make_quad(o);
    const auto root = make_root(o);
    auto ctx = dha::make_context(params, family, quad);
    const auto [lo, hi] = parse_levels(o.levels);

    Table t;
    t.columns = {"n", "delta", "q", "E", "closed_form_E", "residual"};
    for (int n = lo; n <= hi; ++n) {
        const auto lvl = dha::solve_level(ctx, n, ext, quad, root);
        std::optional<double> closed, residual;
        try {
            const auto form = dha::closed_form_energy(family, params, n, ext);
            if (const double* e = std::get_if<double>(&form)) {
                closed = *e;
                residual = std::abs(lvl.E - *e) / std::abs(*e);
            } else {
                residual = std::abs(std::get<dha::LevelResidual>(form)(lvl.q));
            }
        } catch (const dha::DomainError&) {
            // no closed form for this family
        }
        t.rows.push_back({static_cast<double>(n), ext.delta, lvl.q, lvl.E, closed, residual});
    }
    emit(o, t);
    return 0;
}

int cmd_corrections(Options& o) {
    apply_recipe("corrections", o);
    const dha::PhysicalParams params{o.hbar, o.mass, o.alpha};
    auto family = make_family(o);
    if (std::holds_alternative<dha::Undeformed>(family))
        throw dha::DomainError("corrections require a deformed family");
    const auto ext = make_extension(o);
    const auto quad = make_quad(o);
    const auto root = make_root(o);
    const auto [lo, hi] = parse_levels(o.levels);
    const bool exp_sqrt = o.family == "expsqrt";

    std::vector<double> grid;
    for (double scale : {1e-4, 1e-3, 1e-2, 1e-1, 1.0}) grid.push_back(o.beta * scale);

    Table t;
    t.columns = {"n", "dE_formula", "dE_fit", "exponent_fit", "dq2_dbeta", "fd_check"};
    for (int n = lo; n <= hi; ++n) {
        const double formula = dha::leading_correction(family, params, n, ext);
        const auto fit = dha::correction_vs_numeric(family, params, n, ext, grid, quad, root);
        double predicted = fit.coefficient * std::pow(o.beta, fit.theory_exponent);
        if (exp_sqrt)
            predicted *= std::abs(
                std::log(params.alpha * params.mass * std::sqrt(o.beta) / params.hbar));

        auto ctx = dha::make_context(params, family, quad);
        const auto lvl = dha::solve_level(ctx, n, ext, quad, root);
        const double analytic = dha::dq2_dbeta(ctx, lvl.q, quad);
        const double h = 1e-5 * o.beta;
        Options up = o, down = o;
        up.beta = o.beta + h;
        down.beta = o.beta - h;
        const double qp =
            dha::solve_level(dha::make_context(params, make_family(up), quad), n, ext, quad, root).q;
        const double qm =
            dha::solve_level(dha::make_context(params, make_family(down), quad), n, ext, quad, root).q;
        const double fd = (qp * qp - qm * qm) / (2.0 * h);
        const double fd_check = std::abs(analytic - fd) / std::abs(fd);

        t.rows.push_back({static_cast<double>(n), formula, predicted, fit.exponent,
                          analytic, fd_check});
    }
    emit(o, t);
    return 0;
}

int cmd_eigenfunction(Options& o) {
    const dha::PhysicalParams params{o.hbar, o.mass, o.alpha};
    auto family = make_family(o);
    const auto ext = make_extension(o);
    const auto quad = make_quad(o);
    const auto root = make_root(o);
    auto ctx = dha::make_context(params, family, quad);
    if (!std::isfinite(ctx.b))
        throw dha::DomainError("eigenfunction table requires a finite pseudo-momentum bound");
    if (o.samples < 3) throw dha::DomainError("--samples must be at least 3");

    const auto lvl = dha::solve_level(ctx, o.n, ext, quad, root);
    dha::BoundState state(ctx, lvl, quad);

    Table t;
    t.columns = {"p", "abs_amplitude", "phase"};
    const double a = dha::momentum_bound(family);
    const double edge_mod =
        std::isfinite(a) ? state.normalization() / (a * a + lvl.q * lvl.q) : 0.0;
    for (int i = 0; i < o.samples; ++i) {
        const double p = -ctx.b + 2.0 * ctx.b * i / (o.samples - 1);
        const bool edge = i == 0 || i == o.samples - 1;
        const double mod = edge ? edge_mod : state.modulus(p);
        const double phi = edge ? state.phase_at(std::copysign(ctx.b, p)) : state.phase_at(p);
        t.rows.push_back({p, mod, phi});
    }

    std::function<double(double)> density = [&](double p) {
        const double mod = state.modulus(p);
        return mod * mod;
    };
    const double norm = dha::integrate(density, -ctx.b, ctx.b, quad).value;
    std::vector<double> cheb;
    for (int j = 0; j < 21; ++j) cheb.push_back(ctx.b * std::cos(kPi * (2 * j + 1) / 42.0));
    const double residual = dha::integral_equation_residual(state, ext, cheb, quad);

    t.summary.push_back({"norm", norm});
    t.summary.push_back({"max_residual", residual});
    t.summary.push_back({"E", lvl.E});
    emit(o, t);
    return 0;
}

int cmd_extensions_check(Options& o) {
    const dha::PhysicalParams params{o.hbar, o.mass, o.alpha};
    auto family = make_family(o);
    const auto ext = make_extension(o);
    const auto quad = make_quad(o);
    auto ctx = dha::make_context(params, family, quad);
    if (!(ctx.l0 > 0.0))
        throw dha::DomainError("extensions-check requires a minimal length (l0 > 0)");

    const int grid_n = 4097;
    using Complex = std::complex<double>;

    double ortho = 0.0;
    {
        std::vector<dha::GridFunction> basis;
        for (int n = -10; n <= 10; ++n) {
            auto psi = dha::position_eigenstate(ctx, n, ext);
            basis.push_back(dha::GridFunction::sample(
                ctx.b, grid_n, [psi](double p) { return psi.eval(p); }));
        }
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i; j < basis.size(); ++j) {
                const double expect = i == j ? 1.0 : 0.0;
                ortho = std::max(ortho,
                                 std::abs(dha::inner_product(basis[i], basis[j]) - expect));
            }
    }

    const double support = 0.8 * ctx.b;
    auto bump = dha::GridFunction::sample(ctx.b, grid_n, [&](double p) {
        const double u = p / support;
        if (std::abs(u) >= 1.0) return Complex(0.0);
        return Complex(std::exp(-1.0 / (1.0 - u * u)), 0.0);
    });
    const double parseval = dha::completeness_check(ctx, ext, bump, o.ntrunc);

    std::optional<double> inverse_err;
    Table t;
    if (ext.delta == 0.0) {
        t.notes.push_back("inverse check skipped: delta = 0 is outside the domain of 1/X");
    } else {
        std::mt19937 rng(20240817);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::vector<dha::PositionEigenstate> states;
        std::vector<Complex> coef;
        for (int n = -2; n <= 2; ++n) {
            states.push_back(dha::position_eigenstate(ctx, n, ext));
            coef.push_back(Complex(unit(rng), unit(rng)));
        }
        auto f = dha::GridFunction::sample(ctx.b, grid_n, [&](double p) {
            Complex acc = 0.0;
            for (size_t i = 0; i < states.size(); ++i) acc += coef[i] * states[i].eval(p);
            return acc;
        });
        auto diff = [](const dha::GridFunction& x, const dha::GridFunction& y) {
            double worst = 0.0;
            for (int i = 0; i < x.size(); ++i)
                worst = std::max(worst, std::abs(x[i] - y[i]));
            return worst;
        };
        auto inv = dha::apply_inverse_X(ctx, f, ext);
        double err = diff(dha::apply_X(ctx, inv, ext, 256), f);
        err = std::max(err, diff(dha::apply_inverse_X(ctx, dha::apply_X(ctx, f, ext, 256), ext), f));
        err = std::max(err, diff(inv, dha::apply_inverse_X_spectral(ctx, f, ext, 256)));
        inverse_err = err;
    }

    double parity_defect = 0.0;
    const auto mirrored = dha::parity_map(ext);
    // at delta = 0 the mirror folds back onto itself and the index remap is
    // m = -n rather than m = -n - 1
    const int shift = ext.delta == 0.0 ? 0 : -1;
    for (int n = -5; n <= 5; ++n)
        parity_defect = std::max(
            parity_defect, std::abs(dha::position_eigenvalue(ctx, n, ext) +
                                    dha::position_eigenvalue(ctx, -n + shift, mirrored)));
    const bool parity_ok = parity_defect <= 1e-12 * std::max(1.0, ctx.l0);

    t.columns = {"orthonormality_defect", "parseval_defect", "inverse_error", "parity_ok"};
    t.rows.push_back({ortho, parseval, inverse_err, parity_ok ? 1.0 : 0.0});
    emit(o, t);

    const bool pass = ortho <= 1e-12 && parseval <= 1e-4 &&
                      (!inverse_err || *inverse_err <= 1e-8) && parity_ok;
    return pass ? 0 : kExitCheck;
}

int cmd_minimal_length(Options& o) {
    const dha::PhysicalParams params{o.hbar, o.mass, o.alpha};
    auto ctx = dha::make_context(params, make_family(o), make_quad(o));
    Table t;
    t.columns = {"b", "l0"};
    t.rows.push_back({std::isfinite(ctx.b) ? std::optional<double>(ctx.b) : std::nullopt,
                      ctx.l0});
    if (!std::isfinite(ctx.b)) t.notes.push_back("b diverges: no minimal length");
    emit(o, t);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bound states and minimal lengths for deformed Heisenberg algebras"};
    app.require_subcommand(1);

    Options o;
    add_common_flags(&app, o);
    auto* spectrum = app.add_subcommand("spectrum", "solve bound-state levels");
    auto* corrections = app.add_subcommand("corrections", "leading deformation corrections");
    auto* eigenfunction = app.add_subcommand("eigenfunction", "sample a bound-state wavefunction");
    eigenfunction->add_option("--n", o.n, "level index");
    eigenfunction->add_option("--samples", o.samples, "table rows across [-b, b]");
    auto* extensions = app.add_subcommand("extensions-check", "self-adjoint extension checks");
    extensions->add_option("--ntrunc", o.ntrunc, "Parseval truncation");
    auto* minimal = app.add_subcommand("minimal-length", "report b and l0");
    for (auto* sub : {spectrum, corrections, eigenfunction, extensions, minimal})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(o);
        if (corrections->parsed()) return cmd_corrections(o);
        if (eigenfunction->parsed()) return cmd_eigenfunction(o);
        if (extensions->parsed()) return cmd_extensions_check(o);
        if (minimal->parsed()) return cmd_minimal_length(o);
    } catch (const dha::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const dha::NumericsError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return 0;
}
