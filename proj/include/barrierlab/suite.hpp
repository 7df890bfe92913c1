#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "barrierlab/barriers.hpp"
#include "barrierlab/config.hpp"
#include "barrierlab/grid.hpp"
#include "barrierlab/odi.hpp"
#include "barrierlab/verify.hpp"

namespace barrierlab {

// ---------------------------------------------------------------------------
// Acceptance matrix: one entry per exit criterion, each built from library
// calls only. Every tolerance is pinned here, in code.
// ---------------------------------------------------------------------------

struct CriterionResult {
    int number = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string summary;
    std::vector<Report> reports;
};

class AcceptanceSuite {
  public:
    explicit AcceptanceSuite(int decay_cells = 256) : decay_cells_(decay_cells) {}

    std::vector<CriterionResult> run_all() {
        const auto t0 = now();
        std::vector<CriterionResult> out;
        out.push_back(timed(1, "odi-catalog-exactness", [this] { return c1(); }));
        out.push_back(timed(2, "explicit-constants", [this] { return c2(); }));
        out.push_back(timed(3, "barrier-strictness", [this] { return c3(); }));
        out.push_back(timed(4, "derivative-order", [this] { return c4(); }));
        out.push_back(timed(5, "decay-sandwich", [this] { return c5(); }));
        out.push_back(timed(6, "boundary-harnack", [this] { return c6(); }));
        out.push_back(timed(7, "exponent-identities", [this] { return c7(); }));
        out.push_back(timed(8, "explicit-residuals", [this] { return c8(); }));
        out.push_back(timed(9, "reflection", [this] { return c9(); }));
        out.push_back(timed(10, "quotient-regularity", [this] { return c10(); }));
        out.push_back(timed(11, "gradient-bound", [this] { return c11(); }));
        out.push_back(timed(12, "growth-uniqueness", [this] { return c12(); }));
        const double total = seconds_since(t0);
        // the suite runtime budget belongs to the last criterion
        auto& last = out.back();
        last.pass = last.pass && total < 900.0;
        last.summary += " | suite_total=" + format_double(total) + "s (budget 900s)";
        return out;
    }

    // individual criteria are public so the CLI can run them selectively
    CriterionResult run_one(int number) {
        switch (number) {
            case 1: return timed(1, "odi-catalog-exactness", [this] { return c1(); });
            case 2: return timed(2, "explicit-constants", [this] { return c2(); });
            case 3: return timed(3, "barrier-strictness", [this] { return c3(); });
            case 4: return timed(4, "derivative-order", [this] { return c4(); });
            case 5: return timed(5, "decay-sandwich", [this] { return c5(); });
            case 6: return timed(6, "boundary-harnack", [this] { return c6(); });
            case 7: return timed(7, "exponent-identities", [this] { return c7(); });
            case 8: return timed(8, "explicit-residuals", [this] { return c8(); });
            case 9: return timed(9, "reflection", [this] { return c9(); });
            case 10: return timed(10, "quotient-regularity", [this] { return c10(); });
            case 11: return timed(11, "gradient-bound", [this] { return c11(); });
            case 12: return timed(12, "growth-uniqueness", [this] { return c12(); });
        }
        fail(ErrorCode::InvalidArgument, "criterion number must be 1..12");
    }

  private:
    using Clock = std::chrono::steady_clock;
    static Clock::time_point now() { return Clock::now(); }
    static double seconds_since(Clock::time_point t) {
        return std::chrono::duration<double>(now() - t).count();
    }

    struct Partial {
        bool pass = true;
        std::string summary;
        std::vector<Report> reports;
        void fold(const Report& r) {
            pass = pass && r.pass;
            reports.push_back(r);
        }
        void also(bool cond, const std::string& what) {
            pass = pass && cond;
            if (!cond) summary += (summary.empty() ? "" : "; ") + ("FAILED " + what);
        }
    };

    /// Stated per-criterion runtime budgets (seconds); part of the pass
    /// condition where present.
    static double runtime_budget(int number) {
        switch (number) {
            case 1: return 1.0;
            case 3: return 5.0;
            case 5: return 120.0;
            default: return 0.0;  // no individual budget
        }
    }

    template <typename F>
    CriterionResult timed(int number, const std::string& name, F&& f) {
        CriterionResult r;
        r.number = number;
        r.name = name;
        const auto t0 = now();
        try {
            Partial p = f();
            r.pass = p.pass;
            r.summary = p.summary;
            r.reports = std::move(p.reports);
            for (auto& rep : r.reports)
                if (rep.fingerprint == 0)
                    rep.fingerprint =
                        fingerprint_of(name + "/" + rep.id + "/" + std::to_string(decay_cells_));
        } catch (const std::exception& e) {
            r.pass = false;
            r.summary = std::string("exception: ") + e.what();
        }
        r.seconds = seconds_since(t0);
        const double budget = runtime_budget(number);
        if (budget > 0.0) {
            if (r.seconds >= budget) r.pass = false;
            char buf[64];
            std::snprintf(buf, sizeof(buf), " [budget %.0fs]", budget);
            r.summary += buf;
        }
        return r;
    }

    int decay_cells_ = 256;

    // cached expensive solves (shared between criteria)
    std::shared_ptr<GridSolution> decay_laplace_, decay_pucci_, decay_pucci2_, decay_laplace2_;
    std::map<int, std::shared_ptr<GridSolution>> inf_u_, inf_v_;

    // ---- shared builders -------------------------------------------------

    static OdiSpec spec_const(OdiSide side, double lambda, double Lambda, int n, double r,
                              LowerOrderTerm phi = LowerOrderTerm::zero()) {
        OdiSpec s;
        s.side = side;
        s.pair.lambda = EllipticityFn::constant(lambda);
        s.pair.Lambda = EllipticityFn::constant(Lambda);
        s.phi = phi;
        s.n = n;
        s.r = r;
        return s;
    }

    static double decay_data(const Vec2& x) {
        return std::max(0.0, x.y) * (1.0 + 0.5 * x.x);
    }
    static double decay_data_scaled(const Vec2& x) {
        return decay_data(x) * (1.25 + 0.7 * std::sin(2.0 * x.x + 0.3));
    }

    std::shared_ptr<GridSolution> solve_half_disk(const ModelOperator& op,
                                                  double (*data)(const Vec2&), double tol) {
        auto grid = std::make_shared<Grid>(
            build_grid(HalfDisk{{0.0, 0.0}, 1.0}, {-1.0, 0.0}, {2.0, 1.0}, decay_cells_, data));
        SolveOptions so;
        so.tol = tol;
        return std::make_shared<GridSolution>(solve_dirichlet(grid, op, so));
    }

    std::shared_ptr<GridSolution> inf_halfrect(int cells, int which) {
        auto& cache = which == 0 ? inf_u_ : inf_v_;
        auto it = cache.find(cells);
        if (it != cache.end()) return it->second;
        auto data_u = [](const Vec2& x) {
            if (x.y <= 1e-12) return 0.0;
            return x.y * (1.0 + 0.3 * std::sin(1.7 * x.x));
        };
        auto data_v = [](const Vec2& x) {
            if (x.y <= 1e-12) return 0.0;
            return x.y * (1.4 - 0.35 * x.x * x.x);
        };
        auto grid = std::make_shared<Grid>(build_grid(
            HalfRectangle{{0.0, 0.0}, 1.0}, {-1.0, 0.0}, {2.0, 1.0}, cells,
            which == 0 ? std::function<double(const Vec2&)>(data_u)
                       : std::function<double(const Vec2&)>(data_v)));
        SolveOptions so;
        so.tol = 1e-9;
        auto sol = std::make_shared<GridSolution>(solve_dirichlet(grid, InfinityLaplaceOp{}, so));
        cache[cells] = sol;
        return sol;
    }

    // ---- criterion 1: closed-form exactness ------------------------------

    Partial c1() {
        Partial p;
        struct Case {
            OdiSpec spec;
            double bv;
        };
        std::vector<Case> cases;
        cases.push_back({spec_const(OdiSide::Lower, 1, 1, 2, 1), 1.0});
        cases.push_back({spec_const(OdiSide::Upper, 1, 1, 2, 1), 1.0});
        cases.push_back({spec_const(OdiSide::Lower, 1, 2, 2, 0.5), 0.7});
        cases.push_back({spec_const(OdiSide::Upper, 1, 2, 2, 0.5), 0.7});
        {
            OdiSpec s;
            s.pair.lambda = EllipticityFn::power(0.5);
            s.pair.Lambda = EllipticityFn::constant(1.0);
            s.n = 2;
            s.r = 1.0;
            s.side = OdiSide::Lower;
            cases.push_back({s, 1.0});
            s.side = OdiSide::Upper;
            s.pair.arg = DistanceArg::Anchor;
            cases.push_back({s, 1.0});
        }
        cases.push_back(
            {spec_const(OdiSide::Lower, 1, 1, 2, 1, LowerOrderTerm::constant(1.0)), 1.2});
        cases.push_back(
            {spec_const(OdiSide::Upper, 1, 1, 2, 1, LowerOrderTerm::constant(-1.0)), 1.2});

        double worst_resid = 0.0, worst_boundary = 0.0;
        for (const auto& c : cases) {
            auto prof = analytic_profile(c.spec, c.bv);
            const auto rr = odi_residual(prof, c.spec, 1000);
            worst_resid = std::max(worst_resid, rr.worst_abs);
            worst_boundary = std::max({worst_boundary, std::abs(prof.h(0.0) - 0.0),
                                       std::abs(prof.h(c.spec.r) - c.bv)});
        }
        Report r1;
        r1.id = "closed_form_residuals";
        r1.measure("worst_residual", worst_resid);
        r1.measure("worst_boundary_gap", worst_boundary);
        r1.tolerance("residual", 1e-10);
        r1.tolerance("boundary_gap", 0.0);
        r1.pass = worst_resid <= 1e-10 && worst_boundary == 0.0;
        p.fold(r1);

        // gradient-power family: independent analytic derivative of the
        // printed slope formula against the flow equation
        double worst_flow = 0.0;
        for (double k : {3.0, 4.0})
            for (double nu : {0.5, 2.0, 10.0}) {
                const double lambda = 1.0, Lambda = 1.0;
                const double K = 2.0 * Lambda / (1.0 * lambda);
                const double C = lambda * K / std::pow(nu, k - 1.0) + 1.0;
                auto fhat = [&](double t) {
                    return std::pow(lambda * K / (std::exp((k - 1.0) * K * t) * C - 1.0),
                                    1.0 / (k - 1.0));
                };
                auto fhat_prime = [&](double t) {  // direct differentiation
                    const double E = std::exp((k - 1.0) * K * t) * C;
                    return -K * std::pow(lambda * K, 1.0 / (k - 1.0)) * E *
                           std::pow(E - 1.0, -k / (k - 1.0));
                };
                for (int j = 0; j <= 1000; ++j) {
                    const double t = double(j) / 1000.0;
                    const double f = fhat(t);
                    worst_flow = std::max(
                        worst_flow,
                        std::abs(fhat_prime(t) - (-std::pow(f, k) / lambda - K * f)));
                }
            }
        Report r2;
        r2.id = "gradient_power_flow";
        r2.measure("worst_ode_residual", worst_flow);
        r2.tolerance("residual", 1e-9);
        r2.pass = worst_flow <= 1e-9;
        p.fold(r2);

        // the drift slope formula admits two readings; certify the logistic
        // one and report what the cancelled printed form does
        p.fold(drift_slope_form_check(0.5, 1.0, 1.0, 2, 1.0, 2.0));
        p.summary = "worst closed-form residual " + format_double(worst_resid);
        return p;
    }

    // ---- criterion 2: explicit constants ----------------------------------

    Partial c2() {
        Partial p;
        const double A =
            bhi_constant(analytic_profile(spec_const(OdiSide::Lower, 1, 1, 2, 1), 1.0),
                         analytic_profile(spec_const(OdiSide::Upper, 1, 1, 2, 1), 1.0));
        Report r1;
        r1.id = "bhi_constant_e2";
        r1.measure("A", A);
        r1.measure("expected", std::exp(2.0));
        r1.tolerance("gap", 1e-6);
        r1.pass = std::abs(A - std::exp(2.0)) <= 1e-6;
        p.fold(r1);

        const double alpha = ex223_alpha(1.0, 1.0, 2);
        const double alpha_direct = (std::exp(2.0) - 1.0) / 4.0 - 0.5;
        Report r2;
        r2.id = "forcing_threshold_alpha";
        r2.measure("alpha", alpha);
        r2.measure("expected", alpha_direct);
        r2.tolerance("gap", 1e-6);
        r2.pass = std::abs(alpha - alpha_direct) <= 1e-6;
        p.fold(r2);

        const double k = 3.0;
        const double c_low_gen =
            (k - 1.0) / (k - 2.0) * std::pow(2.0 / (std::exp((k - 1.0) * 2.0) - 1.0), 1.0 / (k - 1.0));
        const double c_low = 2.0 * std::sqrt(2.0 / (std::exp(4.0) - 1.0));
        const double c_high = std::sqrt(2.0);
        OdiSpec s4 = spec_const(OdiSide::Upper, 1, 1, 2, 1,
                                LowerOrderTerm::gradient_power(-1.0, 3.0));
        CatalogParams cp;
        cp.nu = std::numeric_limits<double>::infinity();
        auto hinf = analytic_profile(s4, 0.0, cp);
        double lower_margin = std::numeric_limits<double>::infinity();
        double upper_margin = std::numeric_limits<double>::infinity();
        for (int j = 1; j <= 1000; ++j) {
            const double t = double(j) / 1000.0;
            const double v = hinf.h(t) / std::sqrt(t);
            lower_margin = std::min(lower_margin, v - c_low);
            upper_margin = std::min(upper_margin, c_high - v);
        }
        Report r3;
        r3.id = "power_law_constants_k3";
        r3.measure("c_low", c_low);
        r3.measure("c_low_general_formula", c_low_gen);
        r3.measure("c_high", c_high);
        r3.measure("bracket_lower_margin", lower_margin);
        r3.measure("bracket_upper_margin", upper_margin);
        r3.tolerance("constant_gap", 1e-6);
        r3.pass = std::abs(c_low - c_low_gen) <= 1e-6 && lower_margin > 0.0 && upper_margin > 0.0;
        p.fold(r3);
        p.summary = "A=" + format_double(A) + " alpha=" + format_double(alpha) +
                    " c=[" + format_double(c_low) + "," + format_double(c_high) + "]";
        return p;
    }

    // ---- criterion 3: barrier strictness ----------------------------------

    Partial c3() {
        Partial p;
        const double r = 0.1;
        struct EnvCase {
            std::string name;
            StructuralEnvelope env;
            OdiSpec lower, upper;
            double m, M;
            bool has_lower = true;
        };
        std::vector<EnvCase> envs;
        auto mk_env = [&](double lambda, double Lambda, LowerOrderTerm plus,
                          LowerOrderTerm minus) {
            StructuralEnvelope e;
            e.pair.lambda = EllipticityFn::constant(lambda);
            e.pair.Lambda = EllipticityFn::constant(Lambda);
            e.phi_plus = plus;
            e.phi_minus = minus;
            e.n = 2;
            e.r = r;
            return e;
        };
        envs.push_back({"uniform_1_1",
                        mk_env(1, 1, LowerOrderTerm::zero(), LowerOrderTerm::zero()),
                        spec_const(OdiSide::Lower, 1, 1, 2, r),
                        spec_const(OdiSide::Upper, 1, 1, 2, r), 0.5, 1.0, true});
        envs.push_back({"uniform_1_2",
                        mk_env(1, 2, LowerOrderTerm::zero(), LowerOrderTerm::zero()),
                        spec_const(OdiSide::Lower, 1, 2, 2, r),
                        spec_const(OdiSide::Upper, 1, 2, 2, r), 0.5, 1.0, true});
        {
            EnvCase e;
            e.name = "vanishing_sqrt";
            e.env.pair.lambda = EllipticityFn::power(0.5);
            e.env.pair.Lambda = EllipticityFn::constant(1.0);
            e.env.n = 2;
            e.env.r = r;
            e.lower = e.upper = OdiSpec{};
            e.lower.side = OdiSide::Lower;
            e.lower.pair = e.env.pair;
            e.lower.n = 2;
            e.lower.r = r;
            e.upper.side = OdiSide::Upper;
            e.upper.pair = e.env.pair;
            e.upper.pair.arg = DistanceArg::Anchor;
            e.upper.n = 2;
            e.upper.r = r;
            e.m = 0.5;
            e.M = 1.0;
            envs.push_back(e);
        }
        envs.push_back({"forcing_pm1",
                        mk_env(1, 1, LowerOrderTerm::constant(1.0), LowerOrderTerm::constant(-1.0)),
                        spec_const(OdiSide::Lower, 1, 1, 2, r, LowerOrderTerm::constant(1.0)),
                        spec_const(OdiSide::Upper, 1, 1, 2, r, LowerOrderTerm::constant(-1.0)),
                        0.02, 0.04, true});
        envs.push_back({"gradient_cubic",
                        mk_env(1, 1, LowerOrderTerm::zero(),
                               LowerOrderTerm::gradient_power(-1.0, 3.0)),
                        OdiSpec{},
                        spec_const(OdiSide::Upper, 1, 1, 2, r,
                                   LowerOrderTerm::gradient_power(-1.0, 3.0)),
                        0.0, 0.0, false});

        std::vector<std::pair<std::string, DomainSpec>> domains = {
            {"half_plane", HalfPlane{2}},
            {"disk", Disk{{0.0, 0.0}, 1.0}},
            {"half_disk", HalfDisk{{0.0, 0.0}, 1.0}},
        };
        auto boundary_point = [](const DomainSpec& d) -> Vec2 {
            if (std::holds_alternative<HalfPlane>(d)) return {0.0, 0.0};
            if (std::holds_alternative<Disk>(d)) return {0.0, -1.0};
            return {0.1, 0.0};  // flat portion of the half-disk
        };

        double worst_slack = std::numeric_limits<double>::infinity();
        size_t checks = 0;
        for (const auto& ec : envs)
            for (const auto& [dname, dom] : domains) {
                StructuralEnvelope env = ec.env;
                env.domain = dom;
                env.anchor = boundary_point(dom);
                const Vec2 w = env.anchor;
                const Vec2 nrm = inward_normal(dom, w);
                const Vec2 x = w + nrm * (0.5 * r);
                if (ec.has_lower) {
                    auto prof = analytic_profile(ec.lower, ec.m);
                    auto b = place_interior_barrier(dom, x, r, std::move(prof));
                    auto mr = strict_margin(b, env, dom);
                    worst_slack = std::min(worst_slack, mr.worst_slack);
                    p.also(mr.pass, "interior margin " + ec.name + "@" + dname);
                    ++checks;
                }
                {
                    CatalogParams cp;
                    BarrierProfile prof =
                        ec.name == "gradient_cubic"
                            ? (cp.nu = 1.0, analytic_profile(ec.upper, 0.0, cp))
                            : analytic_profile(ec.upper, ec.M);
                    auto pair = place_exterior_barrier(dom, x, w, r, prof);
                    auto mr = strict_margin(pair.at_foot, env, dom);
                    worst_slack = std::min(worst_slack, mr.worst_slack);
                    p.also(mr.pass, "exterior margin " + ec.name + "@" + dname);
                    auto mr2 = strict_margin(pair.at_anchor, env, dom);
                    p.also(mr2.pass, "companion margin " + ec.name + "@" + dname);
                    const double order = exterior_ordering_gap(pair, dom);
                    p.also(order >= -1e-12, "triangle ordering " + ec.name + "@" + dname);
                    checks += 2;
                }
            }
        Report rep;
        rep.id = "barrier_margins";
        rep.measure("cases", double(checks));
        rep.measure("worst_slack_vs_guaranteed", worst_slack);
        rep.tolerance("slack", 0.0);
        rep.pass = worst_slack >= 0.0;
        p.fold(rep);
        p.summary = "worst margin slack vs guaranteed gap " + format_double(worst_slack);
        return p;
    }

    // ---- criterion 4: derivative order ------------------------------------

    Partial c4() {
        Partial p;
        auto prof = analytic_profile(spec_const(OdiSide::Lower, 1, 2, 2, 0.5), 1.0);
        auto b = make_barrier({0.0, 1.1}, 0.5, std::move(prof), BarrierOrientation::InteriorSub);
        auto value = [&](const Vec2& x) { return eval_with_derivatives(b, x).value; };

        auto fd_error = [&](double step) {
            double worst_g = 0.0, worst_h = 0.0;
            for (int s = 0; s < 24; ++s) {
                const double ang = 2.0 * kPi * s / 24.0;
                const double rho = b.r * (1.2 + 0.6 * ((s * 7) % 11) / 11.0);
                const Vec2 x = b.center + Vec2{std::cos(ang), std::sin(ang)} * rho;
                const auto ev = eval_with_derivatives(b, x);
                const Vec2 ex{step, 0.0}, ey{0.0, step};
                const double gx = (value(x + ex) - value(x - ex)) / (2 * step);
                const double gy = (value(x + ey) - value(x - ey)) / (2 * step);
                worst_g = std::max({worst_g, std::abs(gx - ev.gradient.x),
                                    std::abs(gy - ev.gradient.y)});
                const double hxx = (value(x + ex) - 2 * ev.value + value(x - ex)) / (step * step);
                const double hyy = (value(x + ey) - 2 * ev.value + value(x - ey)) / (step * step);
                const double hxy = (value(x + ex + ey) + value(x - ex - ey) - value(x + ex - ey) -
                                    value(x - ex + ey)) /
                                   (4 * step * step);
                worst_h = std::max({worst_h, std::abs(hxx - ev.hessian.a11),
                                    std::abs(hyy - ev.hessian.a22),
                                    std::abs(hxy - ev.hessian.a12)});
            }
            return std::pair{worst_g, worst_h};
        };
        // gradient noise floor ~ eps/step, Hessian ~ eps/step^2; each order is
        // measured at steps where truncation still dominates round-off
        const auto [g1, h1big] = fd_error(1e-4);
        const auto [g2, h2big] = fd_error(5e-5);
        const auto [gbig1, h1] = fd_error(2e-3);
        const auto [gbig2, h2] = fd_error(1e-3);
        (void)h1big;
        (void)h2big;
        (void)gbig1;
        (void)gbig2;
        const double order_g = std::log2(g1 / g2);
        const double order_h = std::log2(h1 / h2);
        Report r;
        r.id = "derivative_fd_order";
        r.measure("gradient_order", order_g);
        r.measure("hessian_order", order_h);
        r.measure("gradient_err_1e-4", g1);
        r.measure("hessian_err_1e-4", h1);
        r.tolerance("order", 1.9);
        r.pass = order_g >= 1.9 && order_h >= 1.9;
        p.fold(r);
        p.summary = "orders grad=" + format_double(order_g) + " hess=" + format_double(order_h);
        return p;
    }

    // ---- criterion 5: decay sandwich --------------------------------------

    Partial c5() {
        Partial p;
        const double r = 0.1;
        const Vec2 w{0.0, 0.0};
        PucciEnvelopeOp pucci;
        pucci.plus = true;
        pucci.pair.lambda = EllipticityFn::constant(1.0);
        pucci.pair.Lambda = EllipticityFn::constant(2.0);
        pucci.domain = HalfDisk{{0.0, 0.0}, 1.0};
        pucci.anchor = w;

        decay_laplace_ = solve_half_disk(LaplaceOp{}, &AcceptanceSuite::decay_data, 1e-8);
        decay_pucci_ = solve_half_disk(ModelOperator{pucci}, &AcceptanceSuite::decay_data, 1e-8);
        const double h = decay_laplace_->grid->h;
        const double delta = 5.0 * h;

        auto run_case = [&](const GridSolution& sol, double lambda, double Lambda,
                            const std::string& tag) {
            const auto bands = measure_bands(sol, w, r);
            auto lower = analytic_profile(spec_const(OdiSide::Lower, lambda, Lambda, 2, r), bands.m);
            auto upper = analytic_profile(spec_const(OdiSide::Upper, lambda, Lambda, 2, r), bands.M);
            Report rep = check_decay(sol, w, r, lower, upper, delta);
            rep.id = "decay_" + tag;
            rep.measure("m", bands.m);
            rep.measure("M", bands.M);
            rep.measure("solver_residual", sol.residual);
            p.also(sol.converged, "solver convergence " + tag);
            p.fold(rep);
        };
        run_case(*decay_laplace_, 1.0, 1.0, "laplace");
        run_case(*decay_pucci_, 1.0, 2.0, "pucci_1_2");
        p.summary = "delta=" + format_double(delta) + " on " +
                    std::to_string(decay_cells_) + "-cell half-disk";
        return p;
    }

    // ---- criterion 6: boundary Harnack ------------------------------------

    Partial c6() {
        Partial p;
        const double r = 0.1;
        const Vec2 w{0.0, 0.0};
        if (!decay_laplace_) c5();
        PucciEnvelopeOp pucci;
        pucci.plus = true;
        pucci.pair.lambda = EllipticityFn::constant(1.0);
        pucci.pair.Lambda = EllipticityFn::constant(2.0);
        pucci.domain = HalfDisk{{0.0, 0.0}, 1.0};
        pucci.anchor = w;
        decay_laplace2_ =
            solve_half_disk(LaplaceOp{}, &AcceptanceSuite::decay_data_scaled, 1e-8);
        decay_pucci2_ =
            solve_half_disk(ModelOperator{pucci}, &AcceptanceSuite::decay_data_scaled, 1e-8);
        const double h = decay_laplace_->grid->h;

        auto run_pair = [&](const GridSolution& u1, const GridSolution& u2, double lambda,
                            double Lambda, const std::string& tag) {
            const auto b1 = measure_bands(u1, w, r);
            const auto b2 = measure_bands(u2, w, r);
            const double m = std::min(b1.m, b2.m), M = std::max(b1.M, b2.M);
            const double A =
                bhi_constant(analytic_profile(spec_const(OdiSide::Lower, lambda, Lambda, 2, r), m),
                             analytic_profile(spec_const(OdiSide::Upper, lambda, Lambda, 2, r), M));
            RegionSpec region{w, r, 1};
            Report rep = check_bhi(u1, u2, region, A, 5.0 * h);
            rep.id = "bhi_" + tag;
            p.fold(rep);
        };
        run_pair(*decay_laplace_, *decay_laplace2_, 1.0, 1.0, "laplace");
        run_pair(*decay_pucci_, *decay_pucci2_, 1.0, 2.0, "pucci_1_2");
        p.summary = "nodal ratios inside the profile band, zero violations required";
        return p;
    }

    // ---- criterion 7: exponent identities ---------------------------------

    Partial c7() {
        Partial p;
        double worst_k = 0.0;
        for (double nu : {0.6, 1.0, 2.0, 5.0})
            worst_k = std::max(worst_k, std::abs(sector_exponent(nu, 2.0) - nu));
        Report r1;
        r1.id = "sector_exponent_p2";
        r1.measure("worst_gap", worst_k);
        r1.tolerance("gap", 1e-12);
        r1.pass = worst_k <= 1e-12;
        p.fold(r1);

        Report r2;
        r2.id = "flat_exponents";
        const double binf = flat_exponent(std::numeric_limits<double>::infinity(), 3, 1);
        const double b431 = flat_exponent(4.0, 3, 1);
        r2.measure("beta_infinity", binf);
        r2.measure("beta_4_3_1", b431);
        r2.tolerance("gap", 1e-12);
        r2.pass = binf == 1.0 && std::abs(b431 - 2.0 / 3.0) <= 1e-12;
        p.fold(r2);

        double worst_prof = 0.0;
        for (double nu : {0.6, 1.0, 2.0, 5.0}) {
            auto prof = sector_profile(nu, 2.0);
            for (int j = 0; j <= 400; ++j) {
                const double phi = prof.half_angle * j / 400.0;
                worst_prof =
                    std::max(worst_prof, std::abs(prof.value(phi) - std::cos(nu * phi)));
            }
        }
        Report r3;
        r3.id = "sector_profile_cosine";
        r3.measure("worst_gap", worst_prof);
        r3.tolerance("gap", 1e-6);
        r3.pass = worst_prof <= 1e-6;
        p.fold(r3);
        p.summary = "k(nu,2)=nu to " + format_double(worst_k) + ", profiles to " +
                    format_double(worst_prof);
        return p;
    }

    // ---- criterion 8: explicit-solution residuals -------------------------

    /// "residual <= C h with C stable": C_j nonincreasing up to 5% jitter, or
    /// the raw residuals sit at the round-off floor.
    static bool c_stable(const std::vector<double>& Cs, const std::vector<double>& hs) {
        bool at_floor = true;
        for (size_t k = 0; k < Cs.size(); ++k) at_floor = at_floor && Cs[k] * hs[k] <= 1e-8;
        if (at_floor) return true;
        bool ok = true;
        for (size_t k = 1; k < Cs.size(); ++k) ok = ok && Cs[k] <= Cs[k - 1] * 1.05 + 1e-9;
        return ok;
    }

    Partial c8() {
        Partial p;
        // radial chart of the 1-flat in R^3: v = |x|^{2/3}, p = 4
        {
            std::vector<double> Cs, hs;
            for (int cells : {64, 128, 256}) {
                auto field = [](const Vec2& x) { return std::pow(x.norm(), 2.0 / 3.0); };
                auto adm = [](const Vec2& x) { return x.norm() > 0.25; };
                const double res = nodal_residual(PLaplaceOp{4.0}, FlatComplement{1, 3},
                                                  {-1.0, -1.0}, {2.0, 2.0}, cells, field, adm);
                Cs.push_back(res / (2.0 / cells));
                hs.push_back(2.0 / cells);
            }
            Report r;
            r.id = "flat_residual_p4_beta23";
            r.measure("C_64", Cs[0]);
            r.measure("C_128", Cs[1]);
            r.measure("C_256", Cs[2]);
            r.tolerance("nonincreasing_factor", 1.05);
            r.pass = c_stable(Cs, hs);
            p.fold(r);
        }
        // literal 1-flat in the plane: v = |x1| (beta = 1), p in {3, 4}
        for (double pp : {3.0, 4.0}) {
            std::vector<double> Cs, hs;
            for (int cells : {64, 128, 256}) {
                auto field = [](const Vec2& x) { return std::abs(x.x); };
                auto adm = [](const Vec2& x) { return std::abs(x.x) > 0.1; };
                const double res = nodal_residual(PLaplaceOp{pp}, FlatComplement{1, 2},
                                                  {-1.0, -1.0}, {2.0, 2.0}, cells, field, adm);
                Cs.push_back(res / (2.0 / cells));
                hs.push_back(2.0 / cells);
            }
            Report r;
            r.id = "flat_residual_p" + format_double(pp) + "_beta1";
            r.measure("C_64", Cs[0]);
            r.measure("C_128", Cs[1]);
            r.measure("C_256", Cs[2]);
            r.pass = c_stable(Cs, hs);
            p.fold(r);
        }
        // sector solution r^k f(phi), nu = 1, p = 3
        {
            auto prof = sector_profile(1.0, 3.0);
            const double k = prof.k;
            auto field = [&prof, k](const Vec2& x) {
                const double rr = x.norm();
                const double phi = std::atan2(x.y, x.x);
                return std::pow(rr, k) * prof.value(phi);
            };
            auto adm = [&prof](const Vec2& x) {
                const double rr = x.norm();
                const double phi = std::abs(std::atan2(x.y, x.x));
                return rr > 0.2 && phi < prof.half_angle - 0.05;
            };
            std::vector<double> Cs, hs;
            for (int cells : {64, 128, 256}) {
                const double res =
                    nodal_residual(PLaplaceOp{3.0}, Sector{{0.0, 0.0}, 1.0}, {-1.0, -1.0},
                                   {2.0, 2.0}, cells, field, adm);
                Cs.push_back(res / (2.0 / cells));
                hs.push_back(2.0 / cells);
            }
            Report r;
            r.id = "sector_residual_nu1_p3";
            r.measure("C_64", Cs[0]);
            r.measure("C_128", Cs[1]);
            r.measure("C_256", Cs[2]);
            r.pass = c_stable(Cs, hs);
            p.fold(r);
        }
        // infinity scheme exactness: linear everywhere, cone on aligned rays
        {
            Grid g = build_grid(Rectangle{{0, 0}, {1, 1}}, {0, 0}, {1, 1}, 128,
                                [](const Vec2& x) { return x.y; });
            std::vector<double> u(g.cls.size());
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) u[g.idx(i, j)] = g.pos(i, j).y;
            DiscreteOp op = discretize(InfinityLaplaceOp{}, g);
            const double res_linear = residual_sup(op, g, u);

            const Vec2 x0{0.0, 0.0};
            Grid gc = build_grid(Rectangle{{-1, -1}, {2, 2}}, {-1, -1}, {2, 2}, 128,
                                 [&](const Vec2& x) { return dist(x, x0); });
            std::vector<double> uc(gc.cls.size());
            for (int j = 0; j < gc.ny; ++j)
                for (int i = 0; i < gc.nx; ++i) uc[gc.idx(i, j)] = dist(gc.pos(i, j), x0);
            DiscreteOp opc = discretize(InfinityLaplaceOp{}, gc);
            const int i0 = int(std::round((x0.x - gc.lo.x) / gc.h));
            const int j0 = int(std::round((x0.y - gc.lo.y) / gc.h));
            double worst_ray = 0.0, worst_off_ray = 0.0;
            for (int j = 1; j + 1 < gc.ny; ++j)
                for (int i = 1; i + 1 < gc.nx; ++i) {
                    if (!gc.inside(i, j) || (i == i0 && j == j0)) continue;
                    const int di = i - i0, dj = j - j0;
                    const double res = std::abs(scheme_eval(opc, gc, uc, i, j));
                    const bool ray = di == 0 || dj == 0 || di == dj || di == -dj;
                    if (ray) worst_ray = std::max(worst_ray, res);
                    else if (dist(gc.pos(i, j), x0) > 0.25)
                        worst_off_ray = std::max(worst_off_ray, res);
                }
            Report r;
            r.id = "inf_scheme_exactness";
            r.measure("linear_residual", res_linear);
            r.measure("cone_ray_residual", worst_ray);
            r.measure("cone_off_ray_residual_info", worst_off_ray);
            r.tolerance("exactness", 1e-12);
            r.note("off-ray cone residual is direction-resolution bound, reported only");
            r.pass = res_linear <= 1e-12 && worst_ray <= 1e-12;
            p.fold(r);
            p.summary = "cone ray residual " + format_double(worst_ray);
        }
        return p;
    }

    // ---- criterion 9: reflection ------------------------------------------

    Partial c9() {
        Partial p;
        auto data = [](const Vec2& x) {
            if (x.y <= 1e-12) return 0.0;
            return x.y * (1.1 + 0.25 * std::sin(1.3 * x.x));
        };
        auto grid = std::make_shared<Grid>(
            build_grid(HalfRectangle{{0.0, 0.0}, 1.0}, {-1.0, 0.0}, {2.0, 1.0}, 128, data));
        SolveOptions so;
        so.tol = 1e-9;
        {
            auto sol = solve_dirichlet(grid, InfinityLaplaceOp{}, so);
            p.also(sol.converged, "inf solve convergence");
            auto refl = schwarz_reflect(sol, InfinityLaplaceOp{});
            refl.report.id = "reflect_infinity";
            p.fold(refl.report);
        }
        {
            PxLaplaceOp px;
            px.field.c0 = 2.0;
            px.field.cq = 0.25;  // p(x) = 2 + x1^2/4
            px.field.validate_on({-1.0, -1.0}, {1.0, 1.0});
            auto sol = solve_dirichlet(grid, ModelOperator{px}, so);
            p.also(sol.converged, "p(x) solve convergence");
            auto refl = schwarz_reflect(sol, ModelOperator{px});
            refl.report.id = "reflect_px";
            p.fold(refl.report);
        }
        p.summary = "odd extensions keep the whole-square residual within 2x tol";
        return p;
    }

    // ---- criterion 10: quotient regularity ---------------------------------

    Partial c10() {
        Partial p;
        {
            QuotientField f;
            f.value = [](const Vec2& x) { return x.y * x.y; };
            f.c_K = 2.0;
            f.alpha_K = 1.0;
            Report r = quotient_increment_check(f, HalfPlane{2}, {0.0, 0.0}, 0.5, 10000);
            r.id = "quotient_increment_xsq";
            p.fold(r);
        }
        {
            // f = x2 sqrt(1 + |x|^2): gradient Lipschitz bound from the
            // analytic Hessian, maximized over the sample ball
            auto f_val = [](const Vec2& x) { return x.y * std::sqrt(1.0 + x.norm2()); };
            // Hessian of x2 sqrt(1+|x|^2): f11 = x2 (1+x2^2)/w^3,
            // f12 = x1 (1+x1^2)/w^3, f22 = x2 (3+3x1^2+2x2^2)/w^3
            auto hess_norm = [](const Vec2& x) {
                const double w3 = std::pow(1.0 + x.norm2(), 1.5);
                const double fxx = x.y * (1.0 + x.y * x.y) / w3;
                const double fxy = x.x * (1.0 + x.x * x.x) / w3;
                const double fyy = x.y * (3.0 + 3.0 * x.x * x.x + 2.0 * x.y * x.y) / w3;
                return std::sqrt(fxx * fxx + 2.0 * fxy * fxy + fyy * fyy);
            };
            double cK = 0.0;
            for (int i = 0; i <= 40; ++i)
                for (int j = 0; j <= 40; ++j)
                    cK = std::max(cK,
                                  hess_norm({-0.6 + 1.2 * i / 40.0, 0.001 + 0.6 * j / 40.0}));
            QuotientField f;
            f.value = f_val;
            f.c_K = 1.25 * cK;
            f.alpha_K = 1.0;
            QuotientField g;
            g.value = [](const Vec2& x) { return x.y * (1.0 + 0.25 * x.x * x.x); };
            g.c_K = 2.0;
            g.alpha_K = 1.0;
            Report r = quotient_increment_check(f, HalfPlane{2}, {0.0, 0.0}, 0.5, 10000, &g);
            r.id = "quotient_increment_pair";
            p.fold(r);
        }
        // measured Hoelder exponent for infinity-harmonic quotients
        {
            RegionSpec region{{0.0, 0.25}, 0.45, 1};
            auto fit_at = [&](int cells) {
                auto u = inf_halfrect(cells, 0);
                auto v = inf_halfrect(cells, 1);
                return holder_quotient_estimate(*u, *v, region, 10000);
            };
            const HolderFit fit1 = fit_at(128);
            const HolderFit fit2 = fit_at(192);
            Report r;
            r.id = "holder_quotient_infinity";
            r.measure("alpha_128", fit1.alpha);
            r.measure("alpha_192", fit2.alpha);
            r.measure("fit_rms_decades_128", fit1.fit_rms_decades);
            r.measure("fit_rms_decades_192", fit2.fit_rms_decades);
            r.measure("constant_128", fit1.constant);
            r.tolerance("fit_rms_decades", 0.1);
            r.tolerance("refinement_stability", 0.25);
            const bool stable =
                std::abs(fit2.alpha - fit1.alpha) <= 0.25 * std::max(fit1.alpha, 1e-9);
            r.pass = !fit1.degenerate && !fit2.degenerate && fit1.alpha > 0.0 &&
                     fit2.alpha > 0.0 && fit1.fit_rms_decades < 0.1 &&
                     fit2.fit_rms_decades < 0.1 && stable;
            p.fold(r);
            p.summary = "alpha_hat=" + format_double(fit1.alpha) +
                        " (rms " + format_double(fit1.fit_rms_decades) + " decades)";
        }
        return p;
    }

    // ---- criterion 11: gradient bound --------------------------------------

    Partial c11() {
        Partial p;
        // exact case u = x2
        {
            auto grid = std::make_shared<Grid>(build_grid(HalfRectangle{{0.0, 0.0}, 1.0},
                                                          {-1.0, 0.0}, {2.0, 1.0}, 96,
                                                          [](const Vec2& x) { return x.y; }));
            SolveOptions so;
            so.tol = 1e-10;
            auto sol = solve_dirichlet(grid, InfinityLaplaceOp{}, so);
            const double c = gradient_bound_constant(sol, {{0.0, 0.3}, 0.5, 1});
            Report r;
            r.id = "gradient_bound_linear";
            r.measure("c", c);
            r.tolerance("c", 1.0 + 1e-6);
            r.pass = std::abs(c - 1.0) <= 1e-6;
            p.fold(r);
        }
        // generic positive solutions at two resolutions
        for (int which : {0, 1}) {
            const double c1 = gradient_bound_constant(*inf_halfrect(128, which), {{0.0, 0.25}, 0.45, 1});
            const double c2 = gradient_bound_constant(*inf_halfrect(192, which), {{0.0, 0.25}, 0.45, 1});
            Report r;
            r.id = "gradient_bound_solution_" + std::to_string(which);
            r.measure("c_128", c1);
            r.measure("c_192", c2);
            r.tolerance("refinement_stability", 0.25);
            r.pass = std::isfinite(c1) && std::isfinite(c2) && c1 >= 1.0 &&
                     std::abs(c2 - c1) <= 0.25 * c1;
            p.fold(r);
        }
        p.summary = "measured |grad u| vs u/dist constants stable under refinement";
        return p;
    }

    // ---- criterion 12: growth and uniqueness proxies ------------------------

    Partial c12() {
        Partial p;
        // (a) infinity-harmonic measure on half-disk truncations: omega ~ x2/R
        std::vector<std::shared_ptr<GridSolution>> measures;
        const std::vector<double> radii = {1.0, 2.0, 4.0};
        for (double R : radii) {
            // absolute corner-exclusion height: the three truncations are
            // genuinely different discrete problems, not rescalings
            auto sol = std::make_shared<GridSolution>(harmonic_measure(
                HalfDisk{{0.0, 0.0}, R}, {-R, 0.0}, {2.0 * R, R}, 256,
                [](const Vec2& x) { return x.y > 0.02; }, InfinityLaplaceOp{},
                SolveOptions{1e-8, 2'000'000, SolveMethod::Sweep, 0.0, true}));
            p.also(sol->converged, "inf measure solve R=" + format_double(R));
            measures.push_back(sol);
        }
        {
            std::vector<GrowthSample> samples;
            for (size_t k = 0; k < radii.size(); ++k) {
                const Grid& g = *measures[k]->grid;
                const int i0 = int(std::round((0.0 - g.lo.x) / g.h));
                for (double s : {0.06, 0.1, 0.16, 0.26}) {
                    const int j = int(std::round((s - g.lo.y) / g.h));
                    if (j <= 1 || j >= g.ny - 1 || !g.inside(i0, j)) continue;
                    samples.push_back({g.pos(i0, j).y, radii[k] * measures[k]->at(i0, j)});
                }
            }
            Report r = measure_growth(samples, 1.0);
            r.id = "growth_inf_measure_halfplane";
            p.fold(r);
        }
        // (b) harmonic measure in the nu = 2 sector: omega ~ (r/R)^2
        {
            std::vector<GrowthSample> samples;
            for (double R : radii) {
                auto sol = harmonic_measure(
                    Sector{{0.0, 0.0}, 2.0}, {0.0, -R}, {R, 2.0 * R}, 192,
                    [R](const Vec2& x) { return x.x > 0.98 * R; }, LaplaceOp{},
                    SolveOptions{1e-9});
                const Grid& g = *sol.grid;
                const int j0 = int(std::round((0.0 - g.lo.y) / g.h));
                for (double s : {0.2, 0.3, 0.45, 0.6}) {
                    const int i = int(std::round((s * 1.0 - g.lo.x) / g.h));
                    if (i <= 1 || i >= g.nx - 1 || !g.inside(i, j0)) continue;
                    samples.push_back({g.pos(i, j0).x, R * R * sol.at(i, j0)});
                }
            }
            Report r = measure_growth(samples, sector_exponent(2.0, 2.0));
            r.id = "growth_harmonic_sector_nu2";
            p.fold(r);
        }
        // (c) uniqueness drift: exact sector data (quadratic harmonic) stays at
        // the solver floor and is nonincreasing across truncations
        {
            auto model = [](const Vec2& x) { return x.x * x.x - x.y * x.y; };
            std::vector<double> drifts;
            double tol_floor = 0.0;
            for (double R : radii) {
                auto grid = std::make_shared<Grid>(build_grid(
                    Sector{{0.0, 0.0}, 2.0}, {0.0, -R}, {R, 2.0 * R}, 192, model));
                SolveOptions so;
                so.tol = 1e-9;
                auto sol = solve_dirichlet(grid, LaplaceOp{}, so);
                const auto dr =
                    uniqueness_drift(sol, model, {{0.45 * R, 0.0}, 0.3 * R, 1}, {0.45 * R, 0.0});
                drifts.push_back(dr.drift);
                tol_floor = std::max(tol_floor, 100.0 * so.tol);
            }
            Report r;
            r.id = "uniqueness_exact_sector";
            r.measure("drift_R1", drifts[0]);
            r.measure("drift_R2", drifts[1]);
            r.measure("drift_R4", drifts[2]);
            r.tolerance("drift_floor", tol_floor);
            const double floor = tol_floor;
            r.pass = drifts[0] <= floor && drifts[1] <= drifts[0] + floor &&
                     drifts[2] <= drifts[1] + floor;
            p.fold(r);
        }
        // exact-data case for the degenerate operator: linear data reproduces
        // C x2 at the solver floor
        {
            std::vector<double> drifts;
            for (double R : radii) {
                auto grid = std::make_shared<Grid>(
                    build_grid(HalfRectangle{{0.0, 0.0}, R}, {-R, 0.0}, {2.0 * R, R}, 128,
                               [](const Vec2& x) { return 3.0 * x.y; }));
                SolveOptions so;
                so.tol = 1e-10;
                auto sol = solve_dirichlet(grid, InfinityLaplaceOp{}, so);
                const auto dr = uniqueness_drift(
                    sol, [](const Vec2& x) { return x.y; }, {{0.0, 0.4 * R}, 0.3 * R, 1},
                    {0.0, 0.4 * R});
                drifts.push_back(dr.drift);
            }
            Report r;
            r.id = "uniqueness_exact_linear_inf";
            r.measure("drift_R1", drifts[0]);
            r.measure("drift_R2", drifts[1]);
            r.measure("drift_R4", drifts[2]);
            r.tolerance("drift_floor", 1e-6);
            r.pass = drifts[0] <= 1e-6 && drifts[1] <= drifts[0] + 1e-9 &&
                     drifts[2] <= drifts[1] + 1e-9;
            p.fold(r);
        }
        // perturbed far-field data: measure family drifts toward C x2 as the
        // truncation grows past the fixed window
        {
            std::vector<double> drifts;
            for (size_t k = 0; k < radii.size(); ++k) {
                const auto dr = uniqueness_drift(
                    *measures[k], [](const Vec2& x) { return x.y; }, {{0.0, 0.2}, 0.15, 1},
                    {0.0, 0.2});
                drifts.push_back(dr.drift);
            }
            Report r;
            r.id = "uniqueness_drift_measures";
            r.measure("drift_R1", drifts[0]);
            r.measure("drift_R2", drifts[1]);
            r.measure("drift_R4", drifts[2]);
            r.pass = drifts[1] <= drifts[0] + 1e-12 && drifts[2] <= drifts[1] + 1e-12;
            p.fold(r);
            p.summary = "measure drift " + format_double(drifts[0]) + " -> " +
                        format_double(drifts[1]) + " -> " + format_double(drifts[2]);
        }
        return p;
    }
};

/// Which part of the estimate machinery each criterion certifies; emitted
/// into suite reports so coverage is auditable.
struct CoverageRow {
    std::string area;
    std::string criteria;
};

inline std::vector<CoverageRow> coverage_table() {
    return {
        {"structural envelopes and extremal operators", "C3 + unit tests (envelope checks)"},
        {"1-D reductions and their closed-form solutions", "C1"},
        {"explicit constants of the reduction catalog", "C2"},
        {"radial barrier lift, derivative formulas, strict margins", "C3, C4"},
        {"comparison at grid level (ordered data)", "unit tests (discrete comparison)"},
        {"decay sandwich for discrete solutions", "C5"},
        {"boundary Harnack bands from profile pairs", "C2, C6"},
        {"quotient increment bounds and measured Hoelder exponents", "C10"},
        {"drift-family profiles (quadratic gradient growth)", "C1 + unit tests (drift pair)"},
        {"odd reflection across flat edges (degenerate + variable exponent)", "C9"},
        {"gradient comparability |grad u| ~ u/d", "C11"},
        {"sector exponents and angular profiles", "C7, C8"},
        {"flat-complement exponents and explicit residuals", "C7, C8"},
        {"measure growth and uniqueness proxies in unbounded geometry", "C12"},
    };
}

inline std::string criterion_line(const CriterionResult& r) {
    std::string line = r.pass ? "[PASS] " : "[FAIL] ";
    line += "C" + std::to_string(r.number) + " " + r.name;
    char buf[64];
    std::snprintf(buf, sizeof(buf), " (%.2f s)", r.seconds);
    line += buf;
    if (!r.summary.empty()) line += " -- " + r.summary;
    return line;
}

}  // namespace barrierlab
