// Experiment driver: config-driven subcommands over the laboratory modules,
// CSV/JSON tables plus a manifest per run.  Serial runs are bit-reproducible
// from (config, seed); --jobs only parallelizes independent criteria.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rdlab/acceptance.hpp"
#include "rdlab/config.hpp"
#include "rdlab/linearized.hpp"
#include "rdlab/nt_limits.hpp"
#include "rdlab/operators.hpp"
#include "rdlab/pde_reduction.hpp"
#include "rdlab/tableio.hpp"

namespace {

using namespace rdlab;

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string format = "csv";
    std::string out_dir;

    std::filesystem::path out() const {
        if (!out_dir.empty()) return out_dir;
        if (const char* env = std::getenv("RDLAB_OUT")) return env;
        return ".";
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config) {
    auto* c = cmd->add_option("--config", opts.config_path, "TOML config file");
    if (needs_config) c->required();
    cmd->add_option("--seed", opts.seed, "RNG seed");
    cmd->add_option("--jobs", opts.jobs, "parallel workers (deterministic per-job outputs)");
    cmd->add_option("--format", opts.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", opts.out_dir, "output directory (default $RDLAB_OUT or .)");
}

void emit(const CommonOpts& opts, const std::string& name, const Table& table,
          std::uint64_t config_hash, double wall_seconds) {
    const std::string body = (opts.format == "json") ? table.to_json() : table.to_csv();
    const std::string ext = (opts.format == "json") ? ".json" : ".csv";
    write_file(opts.out() / (name + ext), body);
    Manifest m;
    m.subcommand = name;
    m.config_hash = config_hash;
    m.seed = opts.seed;
    m.wall_seconds = wall_seconds;
    write_file(opts.out() / (name + "_manifest.json"), m.to_json());
    std::cout << body;
}

std::string vec_str(const Vec& x) {
    std::string s;
    for (int i = 0; i < x.n; ++i) {
        s += format_number(x[i]);
        if (i + 1 < x.n) s += ';';
    }
    return s;
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_number(*v) : "NA";
}

// ---------------------------------------------------------------- constants

int cmd_constants(const CommonOpts& opts, double n, double d, double alpha, bool magic) {
    WallTimer timer;
    GeometryParams p = magic ? GeometryParams::with_magic_alpha(static_cast<int>(n), d)
                             : GeometryParams(static_cast<int>(n), d, alpha);
    ConstantsLedger L = ledger(p);
    Table t;
    t.header = {"name", "value"};
    t.add_row({"n", format_number(p.n)});
    t.add_row({"d", format_number(p.d)});
    t.add_row({"alpha", format_number(p.alpha)});
    t.add_row({"gamma", format_number(p.gamma())});
    t.add_row({"magic", p.magic() ? "1" : "0"});
    t.add_row({"c1", format_number(L.c1)});
    t.add_row({"c2", format_number(L.c2)});
    t.add_row({"c3", format_number(L.c3)});
    t.add_row({"c1_tilde", opt_str(L.c1_tilde)});
    t.add_row({"c2_tilde", opt_str(L.c2_tilde)});
    t.add_row({"C_pde", format_number(L.C_pde)});
    t.add_row({"Cf", opt_str(L.Cf)});
    t.add_row({"Cg", opt_str(L.Cg)});
    t.add_row({"Cf_prime", opt_str(L.Cf_prime)});
    t.add_row({"Cg_prime", opt_str(L.Cg_prime)});
    t.add_row({"S1_area", format_number(L.S1_area)});
    t.add_row({"VS_dminus1", format_number(L.VS_dminus1)});
    emit(opts, "constants", t, 0, timer.seconds());
    return 0;
}

// ------------------------------------------------- flat-distance / newton

int cmd_flat_potential(const CommonOpts& opts, bool newton) {
    WallTimer timer;
    Config cfg = Config::parse_file(opts.config_path);
    cfg.require_known_keys({
        {"params", {"n", "d", "alpha"}},
        {"measure", {"kind", "density", "truncation", "cell"}},
        {"sampling", {"count", "delta_lo", "delta_hi", "offset", "seed"}},
    });
    GeometryParams p = params_from_config(cfg);
    DiscreteMeasure mu = measure_from_config(cfg, p);
    const int count = static_cast<int>(cfg.num_or("sampling", "count", 20));
    const double dlo = cfg.num_or("sampling", "delta_lo", 0.05);
    const double dhi = cfg.num_or("sampling", "delta_hi", 5.0);
    const double off = cfg.num_or("sampling", "offset", 3.0);
    Rng rng(static_cast<std::uint64_t>(cfg.num_or("sampling", "seed", opts.seed)), 17);
    const bool const_density = mu.density.is_constant();
    const double dens_value = const_density ? mu.density(Vec(static_cast<int>(mu.d))) : 0.0;
    Table t;
    t.header = {"x", "delta", "value", "closed_form", "rel_err"};
    for (int i = 0; i < count; ++i) {
        const double delta = dlo * std::pow(dhi / dlo, (count == 1) ? 0.0 : i / (count - 1.0));
        Vec x(p.n);
        for (int k = 0; k < static_cast<int>(mu.d); ++k) x[k] = rng.uniform(-off, off);
        x[p.n - 1] = delta;
        double value, closed = 0;
        if (newton) {
            value = riesz_potential(mu, riesz_request(p.n - 2.0), x).value;
            if (const_density) closed = flat_newton_closed_form(p, dens_value, delta);
        } else {
            value = smooth_distance(mu, p, x).value;
            if (const_density) closed = flat_distance_closed_form(p, dens_value, delta);
        }
        const std::string closed_s = const_density ? format_number(closed) : "NA";
        const std::string rel_s =
            const_density ? format_number(std::abs(value - closed) / std::abs(closed)) : "NA";
        t.add_row({vec_str(x), format_number(delta), format_number(value), closed_s, rel_s});
    }
    emit(opts, newton ? "newton-check" : "flat-distance", t, cfg.hash(), timer.seconds());
    return 0;
}

// ---------------------------------------------------------------- magic-check

int cmd_magic_check(const CommonOpts& opts) {
    WallTimer timer;
    Config cfg = Config::parse_file(opts.config_path);
    cfg.require_known_keys({
        {"params", {"n", "d", "alpha"}},
        {"measure", {"kind", "density", "truncation", "cell", "ratio", "branches", "depth",
                     "plane_dim", "map"}},
        {"sampling", {"count", "delta_lo", "delta_hi", "seed"}},
        {"tolerances", {"magic_residual"}},
    });
    GeometryParams p = params_from_config(cfg);
    DiscreteMeasure mu = measure_from_config(cfg, p);
    const int count = static_cast<int>(cfg.num_or("sampling", "count", 10));
    const double dlo = cfg.num_or("sampling", "delta_lo", 0.1);
    const double dhi = cfg.num_or("sampling", "delta_hi", 0.4);
    const double tol = cfg.num_or("tolerances", "magic_residual", 1e-4);
    Rng rng(static_cast<std::uint64_t>(cfg.num_or("sampling", "seed", opts.seed)), 23);
    std::vector<Vec> pts;
    int guard = 0;
    while (static_cast<int>(pts.size()) < count && ++guard < 100000) {
        Vec x(p.n);
        for (int i = 0; i < p.n; ++i) x[i] = rng.uniform(-0.6, 1.6);
        const double delta = distance_to_support(mu, x);
        if (delta >= dlo && delta <= dhi) pts.push_back(x);
    }
    Table t;
    t.header = {"x", "delta", "lap_Dgamma", "L_D", "identity_residual", "fd_order_estimate"};
    double worst_ratio = 0;
    for (const Vec& x : pts) {
        const OperatorValue v = apply_L(mu, p, x);
        auto study = magic_refinement_study(mu, p, x, 5);
        worst_ratio = std::max(worst_ratio, study.final_ratio);
        t.add_row({vec_str(x), format_number(distance_to_support(mu, x)),
                   format_number(v.lap_D_gamma), format_number(v.L_D),
                   format_number(v.identity_residual), format_number(study.observed_order)});
    }
    emit(opts, "magic-check", t, cfg.hash(), timer.seconds());
    if (p.magic() && worst_ratio > tol) {
        std::cerr << "magic residual " << worst_ratio << " exceeds tolerance " << tol << "\n";
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------- nt-limit

int cmd_nt_limit(const CommonOpts& opts) {
    WallTimer timer;
    Config cfg = Config::parse_file(opts.config_path);
    cfg.require_known_keys({
        {"params", {"n", "d", "alpha"}},
        {"measure", {"kind", "density", "truncation", "cell", "map"}},
        {"nt", {"y0", "beta", "etas", "k_lo", "k_hi"}},
    });
    GeometryParams p = params_from_config(cfg);
    DiscreteMeasure mu = measure_from_config(cfg, p);
    const double beta = cfg.has("nt", "beta") ? cfg.at("nt", "beta").num() : p.codim2();
    std::vector<double> etas = cfg.has("nt", "etas") ? cfg.at("nt", "etas").array()
                                                     : std::vector<double>{0.3, 0.6, 1.0};
    std::vector<double> y0s =
        cfg.has("nt", "y0") ? cfg.at("nt", "y0").array() : std::vector<double>{0.0};
    const int klo = static_cast<int>(cfg.num_or("nt", "k_lo", 4));
    const int khi = static_cast<int>(cfg.num_or("nt", "k_hi", 10));
    Table t;
    t.header = {"y0", "eta", "beta", "recovered", "reference", "rel_err", "fit_residual"};
    const int di = static_cast<int>(mu.d);
    for (std::size_t j = 0; j + di <= y0s.size(); j += di) {
        Vec y0(p.n);
        for (int i = 0; i < di; ++i) y0[i] = y0s[j + i];
        if (mu.kind == SupportKind::Graph) {
            Vec yp(di);
            for (int i = 0; i < di; ++i) yp[i] = y0[i];
            const Vec lift = mu.graph_psi(yp);
            for (int i = 0; i < p.n - di; ++i) y0[di + i] = lift[i];
        }
        for (double eta : etas) {
            ConeSpec spec = default_cone(mu, y0, eta);
            auto radii = geometric_radii(1.0, klo, khi);
            std::erase_if(radii,
                          [&](double r) { return r * eta < mu.validity_floor(); });
            if (radii.size() >= 4) spec.radii = radii;
            auto rec = density_recovery(mu, p, y0, beta, spec);
            t.add_row({vec_str(y0), format_number(eta), format_number(beta),
                       format_number(rec.recovered), format_number(rec.reference),
                       format_number(rec.rel_err), format_number(rec.fit_residual)});
        }
    }
    emit(opts, "nt-limit", t, cfg.hash(), timer.seconds());
    return 0;
}

// ------------------------------------------------------ linearized-spectrum

int cmd_linearized_spectrum(const CommonOpts& opts) {
    WallTimer timer;
    Config cfg = Config::parse_file(opts.config_path);
    cfg.require_known_keys({
        {"scan", {"n", "d", "alpha_lo", "alpha_hi", "alpha_step"}},
    });
    std::vector<int> ns;
    for (double v : cfg.at("scan", "n").array()) ns.push_back(static_cast<int>(v));
    std::vector<double> ds = cfg.at("scan", "d").array();
    const double alo = cfg.num_or("scan", "alpha_lo", 0.25);
    const double ahi = cfg.num_or("scan", "alpha_hi", 6.0);
    const double astep = cfg.num_or("scan", "alpha_step", 0.25);
    std::vector<double> alphas;
    for (double a = alo; a <= ahi + 1e-12; a += astep) alphas.push_back(a);
    auto rows = degeneracy_scan(ns, ds, alphas);
    Table t;
    t.header = {"n", "d", "alpha", "Cf", "Cg", "Cfp", "Cgp", "verdict"};
    for (const auto& row : rows) {
        GeometryParams p(static_cast<int>(row.n), row.d, row.alpha);
        auto c = asymptotic_constants(p);
        t.add_row({format_number(row.n), format_number(row.d), format_number(row.alpha),
                   format_number(row.Cf), std::isnan(row.Cg) ? "NA" : format_number(row.Cg),
                   opt_str(c.Cf_prime), opt_str(c.Cg_prime), to_string(row.verdict)});
    }
    emit(opts, "linearized-spectrum", t, cfg.hash(), timer.seconds());
    return 0;
}

// --------------------------------------------------------- flat-functional

int cmd_flat_functional(const CommonOpts& opts) {
    WallTimer timer;
    Config cfg = Config::parse_file(opts.config_path);
    cfg.require_known_keys({
        {"params", {"n", "d", "alpha"}},
        {"functional", {"phi", "count", "delta_lo", "delta_hi", "offset", "seed"}},
    });
    GeometryParams p = params_from_config(cfg);
    const int di = static_cast<int>(p.d);
    const std::string phi_expr = cfg.str_or("functional", "phi", "gauss");
    PerturbationTestFunction phi;
    if (phi_expr == "gauss") {
        phi = perturbation_gaussian(di);
    } else if (phi_expr.rfind("const:", 0) == 0) {
        phi = perturbation_constant(std::stod(phi_expr.substr(6)), di);
    } else {
        throw std::invalid_argument("flat-functional: unknown phi '" + phi_expr + "'");
    }
    const int count = static_cast<int>(cfg.num_or("functional", "count", 20));
    const double dlo = cfg.num_or("functional", "delta_lo", 0.2);
    const double dhi = cfg.num_or("functional", "delta_hi", 2.0);
    const double off = cfg.num_or("functional", "offset", 4.0);
    Rng rng(static_cast<std::uint64_t>(cfg.num_or("functional", "seed", opts.seed)), 31);
    Table t;
    t.header = {"x0", "delta", "value", "scale", "ratio"};
    for (int i = 0; i < count; ++i) {
        Vec x0(di);
        for (int k = 0; k < di; ++k) x0[k] = rng.uniform(-off, off);
        const double delta = dlo * std::pow(dhi / dlo, rng.next_double());
        auto v = flat_functional_eval(phi, p, x0, delta);
        t.add_row({vec_str(x0), format_number(delta), format_number(v.value),
                   format_number(v.scale), format_number(std::abs(v.value) / v.scale)});
    }
    emit(opts, "flat-functional", t, cfg.hash(), timer.seconds());
    return 0;
}

// ------------------------------------------------------------ pde-residual

int cmd_pde_residual(const CommonOpts& opts) {
    WallTimer timer;
    Config cfg = Config::parse_file(opts.config_path);
    cfg.require_known_keys({
        {"params", {"n", "d", "alpha"}},
        {"pde", {"density", "y0", "radii"}},
    });
    GeometryParams p = params_from_config(cfg);
    const int di = static_cast<int>(p.d);
    const std::string expr = cfg.str_or("pde", "density", "gauss_bump:0.5,1.0");
    SmoothDensity h;
    if (expr.rfind("gauss_bump:", 0) == 0) {
        const std::string args = expr.substr(11);
        const auto comma = args.find(',');
        const double amp = std::stod(args.substr(0, comma));
        const double width = (comma == std::string::npos) ? 1.0 : std::stod(args.substr(comma + 1));
        h = smooth_gauss_bump(di, amp, width);
    } else if (expr.rfind("harmonic_power:", 0) == 0) {
        h = smooth_harmonic_power(di, std::stod(expr.substr(15)));
    } else if (expr.rfind("const:", 0) == 0) {
        h = smooth_const(std::stod(expr.substr(6)), di);
    } else {
        throw std::invalid_argument("pde-residual: unknown density '" + expr + "'");
    }
    std::vector<double> y0s =
        cfg.has("pde", "y0") ? cfg.at("pde", "y0").array() : std::vector<double>(di, 0.0);
    std::vector<double> radii = cfg.has("pde", "radii")
                                    ? cfg.at("pde", "radii").array()
                                    : std::vector<double>{0.02, 0.028, 0.04, 0.057,
                                                          0.08,  0.11,  0.16};
    Table t;
    t.header = {"y0", "numeric_coeff", "predicted_coeff", "rel_err", "pde_residual"};
    for (std::size_t j = 0; j + di <= y0s.size(); j += di) {
        Vec y0(di);
        for (int i = 0; i < di; ++i) y0[i] = y0s[j + i];
        auto rc = r2_coefficient(h, p, y0, radii);
        t.add_row({vec_str(y0), format_number(rc.numeric), format_number(rc.predicted),
                   format_number(rc.rel_err), format_number(pde_residual(h, p, y0))});
    }
    emit(opts, "pde-residual", t, cfg.hash(), timer.seconds());
    return 0;
}

// -------------------------------------------------------------- bmo-verify

int cmd_bmo_verify(const CommonOpts& opts) {
    WallTimer timer;
    Table t;
    t.header = {"lemma_id", "test_function", "sup_ratio", "samples", "drift"};
    auto lg = bmo_log();
    const double norm = bmo_norm(lg, 8, 8.0).norm_estimate;
    {
        auto base = ball_pair_grid(0);
        auto fine = ball_pair_grid(1);
        const double s1 = averages_inequality_ratio(lg, base, norm);
        const double s2 = averages_inequality_ratio(lg, fine, norm);
        t.add_row({"averages", lg.name, format_number(s2), std::to_string(fine.size()),
                   format_number((s2 - s1) / s1)});
    }
    {
        auto tl = bmo_truncated_log();
        const double tnorm = bmo_norm(tl, 8, 8.0).norm_estimate;
        auto xs1 = kernel_eval_grid(0);
        auto xs2 = kernel_eval_grid(1);
        auto k1 = kernel_moment_ratio(tl, 2, 1.0, xs1, tnorm);
        auto k2 = kernel_moment_ratio(tl, 2, 1.0, xs2, tnorm);
        t.add_row({"kernel-moment", tl.name, format_number(k2.sup_ratio_global),
                   std::to_string(xs2.size()),
                   format_number((k2.sup_ratio_global - k1.sup_ratio_global) /
                                 std::max(k1.sup_ratio_global, 1e-300))});
    }
    {
        auto tl = bmo_truncated_log();
        auto bp = bmo_bump();
        auto lc = bmo_lacunary();
        const double ntl = bmo_norm(tl, 7, 8.0).norm_estimate;
        const double nbp = bmo_norm(bp, 7, 8.0).norm_estimate;
        const double nlc = bmo_norm(lc, 7, 8.0).norm_estimate;
        double worst = 0;
        for (double x0 : {0.0, 2.0, 50.0})
            for (double delta : {0.05, 0.4})
                worst = std::max(worst, product_moment_ratio({tl, bp, lc}, 1.0, x0, delta,
                                                             {ntl, nbp, nlc}));
        t.add_row({"product-moment", "tlog*bump*lacunary", format_number(worst), "6", "0"});
    }
    emit(opts, "bmo-verify", t, 0, timer.seconds());
    return 0;
}

// -------------------------------------------------------------- acceptance

int cmd_acceptance(const CommonOpts& opts) {
    WallTimer timer;
    AcceptanceRun run = run_acceptance(opts.seed, opts.jobs);
    bool all_pass = true;
    for (const auto& r : run.results) {
        all_pass = all_pass && r.pass;
        std::printf("[%s] %2d %-22s measured=%-12s tol=%-10s %s(%.1fs)\n",
                    r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    format_number(r.measured).c_str(), format_number(r.tolerance).c_str(),
                    r.note.empty() ? "" : (r.note + " ").c_str(), r.seconds);
    }
    write_file(opts.out() / "acceptance_results.csv", acceptance_csv(run.results));
    write_file(opts.out() / "acceptance_run1.csv", run.csv_first);
    write_file(opts.out() / "acceptance_run2.csv", run.csv_second);
    Manifest m;
    m.subcommand = "acceptance";
    m.seed = opts.seed;
    m.wall_seconds = timer.seconds();
    write_file(opts.out() / "acceptance_manifest.json", m.to_json());
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for regularized distances over "
                 "Ahlfors-regular measures"};
    app.require_subcommand(1);

    CommonOpts opts;
    double n = 7, d = 2, alpha = 1;
    bool magic = false;

    auto* c_constants = app.add_subcommand("constants", "print the constants ledger");
    c_constants->add_option("--n", n, "ambient dimension");
    c_constants->add_option("--d", d, "support dimension");
    c_constants->add_option("--alpha", alpha, "kernel exponent");
    c_constants->add_flag("--magic", magic, "use alpha = n - d - 2");
    add_common(c_constants, opts, false);

    auto* c_flat = app.add_subcommand("flat-distance", "smooth distance vs the closed form");
    add_common(c_flat, opts, true);
    auto* c_newton = app.add_subcommand("newton-check", "Newton potential vs the closed form");
    add_common(c_newton, opts, true);
    auto* c_magic = app.add_subcommand("magic-check", "Laplacian of D^gamma and L D by FD");
    add_common(c_magic, opts, true);
    auto* c_nt = app.add_subcommand("nt-limit", "non-tangential boundary recovery");
    add_common(c_nt, opts, true);
    auto* c_spec = app.add_subcommand("linearized-spectrum", "scan the constants landscape");
    add_common(c_spec, opts, true);
    auto* c_fun = app.add_subcommand("flat-functional", "linearized flat-equation residuals");
    add_common(c_fun, opts, true);
    auto* c_pde = app.add_subcommand("pde-residual", "r^2 matching and the reduced PDE");
    add_common(c_pde, opts, true);
    auto* c_bmo = app.add_subcommand("bmo-verify", "BMO inequality ratio studies");
    add_common(c_bmo, opts, false);
    auto* c_acc = app.add_subcommand("acceptance", "run the acceptance criteria");
    add_common(c_acc, opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_constants)) return cmd_constants(opts, n, d, alpha, magic);
        if (app.got_subcommand(c_flat)) return cmd_flat_potential(opts, false);
        if (app.got_subcommand(c_newton)) return cmd_flat_potential(opts, true);
        if (app.got_subcommand(c_magic)) return cmd_magic_check(opts);
        if (app.got_subcommand(c_nt)) return cmd_nt_limit(opts);
        if (app.got_subcommand(c_spec)) return cmd_linearized_spectrum(opts);
        if (app.got_subcommand(c_fun)) return cmd_flat_functional(opts);
        if (app.got_subcommand(c_pde)) return cmd_pde_residual(opts);
        if (app.got_subcommand(c_bmo)) return cmd_bmo_verify(opts);
        if (app.got_subcommand(c_acc)) return cmd_acceptance(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
