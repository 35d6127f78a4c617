#include "suites.hpp"

#include "flv/dual.hpp"
#include "flv/poincare.hpp"
#include "flv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace flv::cli {

namespace {

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

Record predicate(std::string name, std::string anchor, double lhs, double rhs, bool ok, std::string note) {
    return {std::move(name), std::move(anchor), lhs, rhs, std::abs(lhs - rhs), 0.0, 0.0, ok, std::move(note)};
}

class Runner {
public:
    Runner(const RunConfig& cfg, SuiteOutput& out) : cfg_(cfg), out_(out) {}

    double tol(const char* key) const { return cfg_.tolerances.at(key); }
    std::uint64_t seed(std::uint64_t stream) const { return derive_seed(cfg_.seed, stream); }

    // Runs one check; a library error becomes a failing record under the given name.
    void check(const std::string& name, const std::string& anchor, const std::function<void(std::vector<Record>&)>& fn) {
        std::vector<Record> got;
        try {
            fn(got);
        } catch (const std::exception& e) {
            got = {errored(name, anchor, e.what())};
        }
        for (auto& r : got) out_.records.push_back(std::move(r));
    }

    void gauge();
    void dual();
    void cone();
    void residual();
    void mass();
    void levels();
    void pohozaev();
    void poincare();

private:
    std::vector<Vec> sample_points(int count, std::uint64_t stream) const {
        Rng rng(seed(stream));
        std::vector<Vec> pts;
        for (int i = 0; i < count; ++i) {
            double s = std::exp(rng.uniform(-2.0, 2.0));
            pts.push_back(s * rng.unit_vector(cfg_.gauge.dim()));
        }
        return pts;
    }

    const RunConfig& cfg_;
    SuiteOutput& out_;
};

void Runner::gauge() {
    const Gauge& g = cfg_.gauge;
    const auto pts = sample_points(1000, 0x6a01);
    check("gauge.sphere_bounds", "gauge bounds", [&](auto& rs) {
        auto se = sphere_extrema(g, 4096);
        double worst = 0.0;
        for (const auto& xi : pts) {
            double r = g.value(xi) / xi.norm();
            worst = std::max({worst, (se.c_H - r) / se.c_H, (r - se.C_H) / se.C_H});
        }
        rs.push_back(equality("gauge.sphere_bounds", "gauge bounds", worst, 0.0, 0.0, tol("sphere_bounds"),
                              fmt("c_H=%.12g C_H=%.12g", se.c_H, se.C_H)));
    });
    check("gauge.homogeneity", "positive homogeneity", [&](auto& rs) {
        Rng rng(seed(0x6a02));
        double worst = 0.0;
        for (const auto& xi : pts) {
            double t = std::exp(rng.uniform(-3.0, 3.0));
            double h = g.value(xi);
            worst = std::max(worst, std::abs(g.value(Vec(t * xi)) - t * h) / (t * h));
        }
        rs.push_back(equality("gauge.homogeneity", "positive homogeneity", worst, 0.0, 0.0, tol("homogeneity")));
    });
    check("gauge.euler", "Euler identity <grad H(xi), xi> = H(xi)", [&](auto& rs) {
        double worst = 0.0;
        int skipped = 0;
        for (const auto& xi : pts) {
            try {
                Vec d = grad_gauge(g, xi);
                worst = std::max(worst, std::abs(d.dot(xi) - g.value(xi)) / g.value(xi));
            } catch (const RegularityError&) {
                ++skipped;
            }
        }
        rs.push_back(equality("gauge.euler", "Euler identity <grad H(xi), xi> = H(xi)", worst, 0.0, 0.0, tol("euler"),
                              fmt("%g points skipped near non-smooth hyperplanes", skipped)));
    });
    check("gauge.ellipticity", "ellipticity and monotonicity of a", [&](auto& rs) {
        auto e = check_ellipticity(g, g.dim(), 500, seed(0x6a03));
        Record r = lower_bound("gauge.ellipticity", "ellipticity and monotonicity of a", e.c1_hat, 0.0, 0.0,
                               fmt("c2_hat=%.6g lambda_hat=%.6g", e.c2_hat, e.lambda_ell_hat));
        r.pass = r.pass && e.c1_hat > 0.0 && std::isfinite(e.lambda_ell_hat);
        rs.push_back(r);
    });
}

void Runner::dual() {
    const Gauge& g = cfg_.gauge;
    const auto pts = sample_points(1000, 0xd001);
    const char* ident = "duality identities H(grad H0) = 1 and H0(grad H) = 1";
    if (auto cf = closed_form_dual(g)) {
        check("dual.closed_form", "closed-form dual gauge", [&](auto& rs) {
            double worst = 0.0;
            for (const auto& x : pts) {
                double e = cf->value(x);
                worst = std::max(worst, std::abs(dual_eval(g, x).value - e) / e);
            }
            rs.push_back(equality("dual.closed_form", "closed-form dual gauge", worst, 0.0, 0.0, tol("dual_closed_form"),
                                  "dual family " + cf->name()));
        });
    }
    check("dual.gauge_of_dual_gradient", ident, [&](auto& rs) {
        double worst = 0.0;
        for (const auto& x : pts) worst = std::max(worst, std::abs(g.value(dual_grad(g, x)) - 1.0));
        rs.push_back(equality("dual.gauge_of_dual_gradient", ident, worst, 0.0, 0.0, tol("dual_identity")));
    });
    check("dual.dual_of_gauge_gradient", ident, [&](auto& rs) {
        double worst = 0.0;
        int skipped = 0;
        for (const auto& xi : pts) {
            try {
                worst = std::max(worst, std::abs(dual_eval(g, grad_gauge(g, xi)).value - 1.0));
            } catch (const RegularityError&) {
                ++skipped;
            }
        }
        rs.push_back(equality("dual.dual_of_gauge_gradient", ident, worst, 0.0, 0.0, tol("dual_identity"),
                              fmt("%g points skipped near non-smooth hyperplanes", skipped)));
    });
    check("dual.reconstruction", "dual reconstruction x = H0(x) grad H(grad H0(x))", [&](auto& rs) {
        double wx = 0.0, wxi = 0.0;
        int skipped = 0;
        for (const auto& x : pts) {
            try {
                Vec r = dual_eval(g, x).value * grad_gauge(g, dual_grad(g, x));
                wx = std::max(wx, (x - r).norm() / x.norm());
                Vec s = g.value(x) * dual_grad(g, grad_gauge(g, x));
                wxi = std::max(wxi, (x - s).norm() / x.norm());
            } catch (const RegularityError&) {
                ++skipped;
            }
        }
        const std::string note = fmt("%g points skipped near non-smooth hyperplanes", skipped);
        rs.push_back(equality("dual.reconstruction", "dual reconstruction x = H0(x) grad H(grad H0(x))", wx, 0.0, 0.0,
                              tol("reconstruction"), note));
        rs.push_back(equality("dual.reconstruction_dual", "dual reconstruction xi = H(xi) grad H0(grad H(xi))", wxi, 0.0,
                              0.0, tol("reconstruction"), note));
    });
}

void Runner::cone() {
    const Gauge& g = cfg_.gauge;
    const ConvexCone& C = cfg_.cone;
    const int N = C.dim();
    const char* iso = "anisotropic isoperimetric inequality in cones";
    check("cone.wulff_identity", "Wulff cap perimeter identity", [&](auto& rs) {
        auto w = wulff_perimeter_identity(C, g, cfg_.quad);
        rs.push_back(equality("cone.wulff_identity", "Wulff cap perimeter identity", w.perimeter.value,
                              w.n_times_volume.value, std::hypot(w.perimeter.err, w.n_times_volume.err),
                              tol("wulff_identity") * std::abs(w.n_times_volume.value)));
    });
    check("cone.isoperimetric_equality", iso, [&](auto& rs) {
        WulffCap cap(g.reflected(), 1.5, Vec::Zero(N), C);
        auto r = isoperimetric_check(cap, C, g, cfg_.quad);
        rs.push_back(equality("cone.isoperimetric_equality", iso, r.quotient, r.wulff_quotient, r.err,
                              tol("isoperimetric") * r.wulff_quotient, "Wulff cap of radius 1.5"));
    });
    check("cone.isoperimetric_box", iso, [&](auto& rs) {
        Vec lo(N), hi(N);
        for (int i = 0; i < N; ++i) {
            lo[i] = i < C.k() ? -0.5 : 0.2;
            hi[i] = i < C.k() ? 0.5 : 1.2;
        }
        auto r = isoperimetric_check(Box{lo, hi}, C, g, cfg_.quad);
        rs.push_back(lower_bound("cone.isoperimetric_box", iso, r.quotient, r.wulff_quotient, r.err, "unit box"));
    });
}

void Runner::residual() {
    const auto& sol = cfg_.solution;
    check("residual.max", "Liouville equation", [&](auto& rs) {
        auto dirs = interior_directions(sol.cone(), 50, 0.1, seed(0x7e51));
        Rng rng(seed(0x7e52));
        std::vector<Vec> pts;
        for (const auto& w : dirs) pts.push_back(sol.x0() + std::exp(rng.uniform(std::log(0.2), std::log(10.0))) * w);
        auto study = convergence_study(sol, pts, {4e-3, 2e-3, 1e-3});
        out_.tables.convergence = study.rows;
        rs.push_back(equality("residual.max", "Liouville equation", study.rows.back().max_residual, 0.0, 0.0,
                              tol("residual"), "50 points, h = 1e-3"));
        rs.push_back(equality("residual.order", "finite-difference convergence order", study.fitted_order, 2.0, 0.0,
                              tol("convergence_order"), "h = 4e-3, 2e-3, 1e-3"));
    });
    if (!sol.cone().is_full_space()) {
        check("residual.neumann", "conormal boundary condition", [&](auto& rs) {
            double f = neumann_flux(sol, 1000, seed(0x7e53));
            rs.push_back(equality("residual.neumann", "conormal boundary condition", f, 0.0, 0.0, tol("neumann"),
                                  "1000 facet samples"));
        });
    }
}

void Runner::mass() {
    const auto& sol = cfg_.solution;
    const int N = sol.N();
    check("mass.quantization", "mass quantization", [&](auto& rs) {
        auto mq = mass_quantization_check(sol, cfg_.quad, tol("mass"));
        const auto& m = mq.mass;
        const double rhs = mq.balance.rhs;
        rs.push_back(equality("mass.quantization", "mass quantization", mq.balance.lhs, rhs, mq.balance.quadrature_err,
                              tol("mass") * std::abs(rhs), fmt("semi-analytic; unit cap measure %.12g", m.unit_measure.value)));
        rs.push_back(equality("mass.monte_carlo", "mass quantization", mq.cross_check.lhs, rhs,
                              mq.cross_check.quadrature_err, tol("mass_mc") * std::abs(rhs),
                              fmt("direct Monte Carlo; tail bound %.3g beyond radius %.3g", m.tail_bound,
                                  m.truncation_radius)));
        rs.push_back(lower_bound("mass.lower_bound", "one-sided mass bound", mq.balance.lhs, rhs,
                                 mq.balance.quadrature_err, "semi-analytic"));
        rs.push_back(lower_bound("mass.lower_bound_mc", "one-sided mass bound", mq.cross_check.lhs, rhs,
                                 mq.cross_check.quadrature_err, "direct Monte Carlo"));
        const double beta0 = beta0_from_mass(m.semi_analytic.value, N, m.unit_measure.value);
        const double rel = mq.balance.quadrature_err / mq.balance.lhs;
        rs.push_back(equality("mass.beta0", "decay exponent from the mass", beta0, beta_reference(N),
                              beta0 * rel / (N - 1), tol("beta")));
    });
    for (double R : {0.1, 1.0, 10.0}) {
        const std::string name = "mass.flux_balance.R=" + fmt("%g", R);
        check(name, "flux-mass balance", [&](auto& rs) {
            auto b = flux_mass_balance(sol, R, cfg_.quad, tol("flux"));
            rs.push_back(equality(name, "flux-mass balance", b.lhs, b.rhs, b.quadrature_err, tol("flux") * std::abs(b.rhs)));
        });
    }
    check("mass.asymptotic_beta", "sharp logarithmic asymptotics", [&](auto& rs) {
        auto a = asymptotic_checks(sol, 16, {1e2, 1e4});
        out_.tables.asymptotics = a.local_beta;
        rs.push_back(equality("mass.asymptotic_beta", "sharp logarithmic asymptotics", a.beta_est, a.beta_ref, 0.0,
                              tol("beta"), "radii 1e2 to 1e4"));
        rs.push_back(predicate("mass.decay_shells", "sharp logarithmic asymptotics", a.shells.back().max_decay,
                               a.shells.front().max_decay, a.decay_decreasing,
                               "outer against inner shell; must strictly decrease across three shells"));
        rs.push_back(predicate("mass.upper_bound", "upper bound u <= C - N log|x|", a.C_est, a.C_est, a.upper_bound_holds,
                               fmt("L_est=%.6g", a.L_est)));
    });
}

void Runner::levels() {
    const auto& sol = cfg_.solution;
    const double t0 = sol.t0();
    Rng rng(seed(0x1e5e));
    std::vector<double> deltas;
    for (int i = 0; i < 5; ++i) deltas.push_back(std::exp(rng.uniform(std::log(0.05), std::log(6.0))));
    std::sort(deltas.begin(), deltas.end());
    deltas.insert(deltas.begin(), 0.01);
    std::vector<double> ts;
    for (double d : deltas) ts.push_back(t0 - d);

    for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string idx = "[" + std::to_string(i) + "]";
        check("levels.coarea" + idx, "co-area level mass", [&](auto& rs) {
            auto c = coarea_level_mass(sol, ts[i], cfg_.quad, tol("coarea"));
            const auto& b = c.balance;
            rs.push_back(equality("levels.coarea" + idx, "co-area level mass", b.lhs, b.rhs, b.quadrature_err,
                                  tol("coarea") * std::abs(b.rhs), fmt("t = t0 - %.6g", deltas[i])));
            rs.push_back(equality("levels.mass_closed_form" + idx, "level-set mass law", b.lhs, c.closed_form,
                                  b.quadrature_err, tol("level_closed_form") * c.closed_form));
            out_.tables.levels.push_back({ts[i], c.radius, level_radius_closed_form(sol, ts[i]), b.lhs, c.closed_form});
        });
    }
    check("levels.geometry", "level sets are Wulff spheres", [&](auto& rs) {
        auto rows = level_geometry_check(sol, ts, cfg_.quad);
        double rgap = 0, hs = 0, gmin = INFINITY, mgap = 0;
        for (const auto& r : rows) {
            rgap = std::max(rgap, r.radius_rel_gap);
            hs = std::max(hs, r.h_grad_spread);
            gmin = std::min(gmin, r.grad_norm_spread);
            mgap = std::max(mgap, r.mass_rel_gap);
        }
        rs.push_back(equality("levels.radius_closed_form", "level-set radius law", rgap, 0.0, 0.0, tol("level_closed_form")));
        rs.push_back(equality("levels.h_grad_spread", "level sets are Wulff spheres", hs, 0.0, 0.0, tol("level_spread"),
                              "relative spread of H(grad u) on 64 points per level"));
        rs.push_back(equality("levels.mass_from_gradient", "level-set mass law", mgap, 0.0, 0.0, tol("level_closed_form")));
        if (cfg_.gauge.kind() != GaugeKind::euclidean) {
            rs.push_back(lower_bound("levels.grad_norm_spread", "level sets are Wulff spheres", gmin, 1e-2, 0.0,
                                     "anisotropic gauge: |grad u| must vary on each level set"));
        }
    });
}

void Runner::pohozaev() {
    const auto& sol = cfg_.solution;
    for (double R : {1.0, 10.0}) {
        const std::string name = "pohozaev.R=" + fmt("%g", R);
        check(name, "Pohozaev identity", [&](auto& rs) {
            auto p = pohozaev_check(sol, R, cfg_.quad, tol("pohozaev"));
            const auto& b = p.balance;
            rs.push_back(equality(name, "Pohozaev identity", b.lhs, b.rhs, b.quadrature_err, tol("pohozaev") * std::abs(b.rhs),
                                  fmt("boundary density term %.12g", p.boundary_density_term.value)));
        });
    }
    check("pohozaev.decay_slope", "boundary density term decay", [&](auto& rs) {
        const int N = sol.N();
        double s = boundary_term_decay_slope(sol, {10.0, 30.0, 100.0}, cfg_.quad);
        rs.push_back(equality("pohozaev.decay_slope", "boundary density term decay", s, N - beta_reference(N), 0.0,
                              tol("decay_slope"), "radii 10, 30, 100"));
    });
}

void Runner::poincare() {
    const int N = cfg_.cone.dim();
    const auto& ps = cfg_.poincare;
    QuadratureSpec quad = cfg_.quad;
    if (quad.method == QuadMethod::tensor_polar) quad.budget = 1024;
    Vec eN = Vec::Zero(N);
    eN[N - 1] = 1.0;
    struct Named {
        std::string name;
        RadialDomain dom;
        double width;
    };
    std::vector<Named> doms;
    check("poincare.domains", "radial width", [&](auto& rs) {
        doms.push_back({"fan_shell", RadialDomain::fan_shell(cfg_.cone, 1.0, 2.0), 1.0});
        doms.push_back({"multi_shell", RadialDomain::multi_shell(cfg_.cone, {{1.0, 2.0}, {4.0, 8.0}}), 4.0});
        doms.push_back({"ball_inner", RadialDomain::ball(1.0, Vec::Zero(N)), 1.0});
        doms.push_back({"ball_outer", RadialDomain::ball(1.0, Vec(-(2.0 / ps.eps) * eN)), 2.0});
        for (const auto& d : doms) {
            rs.push_back(equality("poincare.width." + d.name, "radial width", radial_width(d.dom), d.width, 0.0, 0.0));
        }
    });
    for (std::size_t i = 0; i < doms.size(); ++i) {
        for (double p : ps.exponents) {
            const std::string name = "poincare." + doms[i].name + ".p=" + fmt("%g", p);
            check(name, "radial Poincare inequality", [&](auto& rs) {
                auto fam = test_family(doms[i].dom, ps.family_size, seed(0x9c00 + i));
                double worst = 0.0, sig = 0.0;
                bool ok = true;
                for (const auto& f : fam) {
                    auto r = poincare_ratio(doms[i].dom, f, p, quad);
                    worst = std::max(worst, r.ratio);
                    sig = std::max(sig, r.sigma_rel * r.bound);
                    ok = ok && r.pass;
                }
                Record r = upper_bound(name, "radial Poincare inequality", worst, radial_width(doms[i].dom), sig,
                                       fmt("max ratio over %g seeded test functions", ps.family_size));
                r.pass = r.pass && ok;
                rs.push_back(r);
            });
        }
    }
    for (double p : ps.exponents) {
        const std::string suffix = ".p=" + fmt("%g", p);
        check("poincare.ball_constants" + suffix, "Poincare constants on the unit ball", [&](auto& rs) {
            auto c = corollary_ball_check(p, ps.eps, ps.family_size, seed(0x9c10), N);
            Record w0 = upper_bound("poincare.ball_w0" + suffix, "Poincare constants on the unit ball", c.w0.max_ratio,
                                    c.w0.bound, c.w0.max_sigma_rel * c.w0.bound, "functions vanishing on the sphere");
            w0.pass = w0.pass && c.w0.pass;
            Record cap = upper_bound("poincare.ball_cap" + suffix, "Poincare constants on the unit ball", c.cap.max_ratio,
                                     c.cap.bound, c.cap.max_sigma_rel * c.cap.bound,
                                     fmt("functions vanishing on the sphere where x_N > -%g", ps.eps));
            cap.pass = cap.pass && c.cap.pass;
            rs.push_back(w0);
            rs.push_back(cap);
        });
    }
}

}  // namespace

void run_suite(const std::string& name, const RunConfig& cfg, SuiteOutput& out) {
    Runner r(cfg, out);
    if (name == "gauge") r.gauge();
    else if (name == "dual") r.dual();
    else if (name == "cone") r.cone();
    else if (name == "residual") r.residual();
    else if (name == "mass") r.mass();
    else if (name == "levels") r.levels();
    else if (name == "pohozaev") r.pohozaev();
    else if (name == "poincare") r.poincare();
    else throw ConfigError("unknown suite '" + name + "'");
}

RunReport run_all(const RunConfig& cfg, Tables& tables) {
    SuiteOutput out;
    for (const auto& s : cfg.suites) run_suite(s, cfg, out);
    RunReport rep;
    rep.version = FLV_VERSION;
    // The output directory does not change any number, so it stays out of the hash.
    nlohmann::json hashed = cfg.effective;
    hashed.erase("output");
    rep.config_hash = fnv1a64(hashed.dump());
    rep.seed = cfg.seed;
    rep.suites = cfg.suites;
    rep.records = std::move(out.records);
    rep.pass = !rep.records.empty() &&
               std::all_of(rep.records.begin(), rep.records.end(), [](const Record& r) { return r.pass; });
    tables = std::move(out.tables);
    return rep;
}

}  // namespace flv::cli
