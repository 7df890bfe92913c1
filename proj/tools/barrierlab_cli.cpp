// Command-line front end: profile construction, barrier margin checks, grid
// solves and the verification matrix, all driven by flags or a JSON config.
// Exit codes: 0 all requested checks pass, 1 a check failed, 2 bad
// configuration, 3 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "barrierlab/config.hpp"
#include "barrierlab/suite.hpp"
#include "barrierlab/svg.hpp"

namespace fs = std::filesystem;
using namespace barrierlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct OdiFlags {
    std::string catalog = "ex221";
    std::string side = "lower";
    double m = 1.0;
    double r = 1.0;
    int n = 2;
    double lambda = 1.0;
    double Lambda = 1.0;
    double a = 0.5;
    double k = 3.0;
    double nu = 0.0;  // 0 = solve for the boundary value; inf accepted
    double mu = 1.0;
    double c_omega = 0.0;
    double rate_A = 0.0;
    std::string out = "out";
    bool svg = false;
};

OdiSpec spec_from_flags(const OdiFlags& f, bool force_upper = false) {
    OdiSpec s;
    s.side = (force_upper || f.side == "upper") ? OdiSide::Upper : OdiSide::Lower;
    s.n = f.n;
    s.r = f.r;
    if (f.catalog == "ex222") {
        s.pair.lambda = EllipticityFn::power(f.a);
        s.pair.Lambda = EllipticityFn::constant(f.Lambda);
        if (s.side == OdiSide::Upper) s.pair.arg = DistanceArg::Anchor;
    } else {
        s.pair.lambda = EllipticityFn::constant(f.lambda);
        s.pair.Lambda = EllipticityFn::constant(f.Lambda);
    }
    if (f.catalog == "ex223")
        s.phi = LowerOrderTerm::constant(s.side == OdiSide::Lower ? 1.0 : -1.0);
    else if (f.catalog == "ex224" || f.catalog == "ex224inf")
        s.phi = LowerOrderTerm::gradient_power(-1.0, f.k);
    else if (f.catalog == "drift_lower")
        s.phi = LowerOrderTerm::quadratic_drift(f.mu, f.c_omega, SignClass::NonNegative);
    else if (f.catalog == "drift_upper")
        s.phi = LowerOrderTerm::quadratic_drift(f.mu, 0.0, SignClass::NonPositive);
    else if (f.catalog != "ex221" && f.catalog != "ex222")
        fail(ErrorCode::ConfigError, "unknown catalog id '" + f.catalog + "'");
    if (f.catalog == "ex224" || f.catalog == "ex224inf" || f.catalog == "drift_upper")
        s.side = OdiSide::Upper;
    return s;
}

BarrierProfile profile_from_flags(const OdiFlags& f, bool force_upper = false) {
    OdiSpec s = spec_from_flags(f, force_upper);
    CatalogParams cp;
    if (f.catalog == "ex224inf") cp.nu = std::numeric_limits<double>::infinity();
    else if (f.nu > 0.0) cp.nu = f.nu;
    if (f.rate_A > 0.0) cp.A = f.rate_A;
    return analytic_profile(s, f.m, cp);
}

void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    // write-once, atomic per check: stage then rename
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::trunc);
        require(os.good(), ErrorCode::InvalidArgument, "cannot open " + tmp.string());
        os << content;
    }
    fs::rename(tmp, path);
}

void write_reports(const fs::path& dir, const std::vector<Report>& reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    write_text(dir / "report.json", arr.dump(2) + "\n");
    write_text(dir / "report.md", to_markdown(reports));
}

int finish(const std::vector<Report>& reports, const std::string& out_dir) {
    write_reports(out_dir, reports);
    bool all = true;
    for (const auto& r : reports) {
        std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.id << "\n";
        all = all && r.pass;
    }
    std::cout << "reports written to " << out_dir << "\n";
    return all ? kExitOk : kExitCheckFailed;
}

int suite_threads() {
    if (const char* s = std::getenv("BARRIERLAB_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    return 1;
}

int run_suite(const std::string& config_path) {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is.good()) {
            std::cerr << "cannot open config " << config_path << "\n";
            return kExitConfig;
        }
        json j;
        try {
            is >> j;
        } catch (const json::exception& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return kExitConfig;
        }
        cfg = config_from_json(j);
    }
    const int cells = cfg.grid_levels.empty() ? 256 : cfg.grid_levels.front();

    // independent criterion groups; chains share one suite instance so the
    // cached solves are reused. BARRIERLAB_THREADS caps the concurrency.
    const std::vector<std::vector<int>> groups = {{1}, {2}, {3}, {4},      {7},
                                                  {8}, {9}, {5, 6}, {10, 11}, {12}};
    std::vector<CriterionResult> results;
    const int max_threads = suite_threads();
    std::vector<std::future<std::vector<CriterionResult>>> inflight;
    size_t next = 0;
    auto pump = [&]() {
        while (next < groups.size() && int(inflight.size()) < max_threads) {
            auto group = groups[next++];
            inflight.push_back(std::async(std::launch::async, [group, cells] {
                AcceptanceSuite suite(cells);
                std::vector<CriterionResult> out;
                for (int c : group) out.push_back(suite.run_one(c));
                return out;
            }));
        }
    };
    pump();
    while (!inflight.empty()) {
        auto batch = inflight.front().get();
        inflight.erase(inflight.begin());
        for (auto& r : batch) results.push_back(std::move(r));
        pump();
    }
    std::sort(results.begin(), results.end(),
              [](const auto& a, const auto& b) { return a.number < b.number; });

    bool all = true;
    std::vector<Report> reports;
    nlohmann::ordered_json jout = nlohmann::ordered_json::array();
    const uint64_t fp = fingerprint_of(cfg.canonical());
    for (auto& r : results) {
        std::cout << criterion_line(r) << "\n";
        all = all && r.pass;
        nlohmann::ordered_json jc;
        jc["criterion"] = r.number;
        jc["name"] = r.name;
        jc["pass"] = r.pass;
        jc["reports"] = nlohmann::ordered_json::array();
        for (auto& rep : r.reports) {
            rep.fingerprint = fp;
            jc["reports"].push_back(to_json(rep));
            reports.push_back(rep);
        }
        jout.push_back(jc);
    }
    nlohmann::ordered_json jtop;
    jtop["criteria"] = jout;
    nlohmann::ordered_json jcov = nlohmann::ordered_json::array();
    for (const auto& row : coverage_table()) {
        nlohmann::ordered_json jr;
        jr["area"] = row.area;
        jr["criteria"] = row.criteria;
        jcov.push_back(jr);
    }
    jtop["coverage"] = jcov;
    write_text(fs::path(cfg.output_dir) / "report.json", jtop.dump(2) + "\n");
    std::string md = to_markdown(reports);
    md += "\n## Coverage\n\n| area | criteria |\n|---|---|\n";
    for (const auto& row : coverage_table())
        md += "| " + row.area + " | " + row.criteria + " |\n";
    write_text(fs::path(cfg.output_dir) / "report.md", md);
    if (cfg.svg) {
        auto lower = analytic_profile(
            OdiSpec{OdiSide::Lower,
                    {EllipticityFn::constant(1.0), EllipticityFn::constant(1.0)},
                    LowerOrderTerm::zero(), 2, 1.0},
            1.0);
        auto upper = analytic_profile(
            OdiSpec{OdiSide::Upper,
                    {EllipticityFn::constant(1.0), EllipticityFn::constant(1.0)},
                    LowerOrderTerm::zero(), 2, 1.0},
            1.0);
        SvgSeries a{"lower profile", "#1f6fb2", {}, {}};
        SvgSeries b{"upper profile", "#b23a1f", {}, {}};
        for (int i = 0; i <= 200; ++i) {
            const double t = i / 200.0;
            a.x.push_back(t);
            a.y.push_back(lower.h(t));
            b.x.push_back(t);
            b.y.push_back(upper.h(t));
        }
        std::ostringstream os;
        write_svg(os, {a, b});
        write_text(fs::path(cfg.output_dir) / "profiles.svg", os.str());
    }
    std::cout << (all ? "suite: all criteria passed\n" : "suite: FAILURES present\n");
    return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"barrierlab: barrier profiles, grid solvers and decay-estimate verification"};
    app.require_subcommand(1);

    OdiFlags of;
    std::string config_path, out_dir = "out", domain_name_s = "half_plane";
    double flag_p = 2.0, flag_nu = 1.0;
    int flag_n = 3, flag_m = 1, cells = 128;
    double tol = 1e-8;
    int criterion = 0;
    std::string verify_what;

    auto add_odi_flags = [&](CLI::App* cmd) {
        cmd->add_option("--catalog", of.catalog,
                        "ex221|ex222|ex223|ex224|ex224inf|drift_lower|drift_upper");
        cmd->add_option("--side", of.side, "lower|upper");
        cmd->add_option("--m", of.m, "boundary value (m or M)");
        cmd->add_option("--r", of.r, "working radius");
        cmd->add_option("--n", of.n, "dimension");
        cmd->add_option("--lambda", of.lambda, "lower ellipticity constant");
        cmd->add_option("--Lambda", of.Lambda, "upper ellipticity constant");
        cmd->add_option("--a", of.a, "vanishing-ellipticity exponent (ex222)");
        cmd->add_option("--k", of.k, "gradient power (ex224)");
        cmd->add_option("--nu", of.nu, "initial slope (ex224/drift_upper)");
        cmd->add_option("--mu", of.mu, "drift coefficient (drift catalog)");
        cmd->add_option("--c-omega", of.c_omega, "modulus coefficient (drift_lower)");
        cmd->add_option("--A", of.rate_A, "exponential rate (drift_lower)");
        cmd->add_option("--out", of.out, "output directory");
        cmd->add_flag("--svg", of.svg, "also write an SVG plot");
    };

    auto* odi = app.add_subcommand("odi", "1-D profile operations");
    auto* odi_solve = odi->add_subcommand("solve", "build a profile, export CSV");
    add_odi_flags(odi_solve);
    auto* odi_bhi = odi->add_subcommand("bhi", "Harnack constant of the profile pair");
    add_odi_flags(odi_bhi);
    double bhi_M = 1.0;
    odi_bhi->add_option("--M", bhi_M, "upper boundary value");

    auto* barrier = app.add_subcommand("barrier", "radial barrier operations");
    auto* barrier_check = barrier->add_subcommand("check", "strict margin check");
    add_odi_flags(barrier_check);
    barrier_check->add_option("--domain", domain_name_s, "half_plane|disk|half_disk");

    auto* pde = app.add_subcommand("pde", "grid solves");
    auto* pde_solve = pde->add_subcommand("solve", "Dirichlet solve from a config file");
    pde_solve->add_option("--config", config_path, "experiment config JSON")->required();
    pde_solve->add_option("--cells", cells, "override grid cells");
    pde_solve->add_option("--tol", tol, "override tolerance");

    auto* verify_cmd = app.add_subcommand("verify", "run one verification family");
    verify_cmd
        ->add_option("what", verify_what,
                     "decay|bhi|holder|reflect|sector|flat|growth|gradbound|unique")
        ->required();
    verify_cmd->add_option("--nu", flag_nu, "sector aperture parameter");
    verify_cmd->add_option("--p", flag_p, "exponent p");
    verify_cmd->add_option("--n", flag_n, "ambient dimension (flat)");
    verify_cmd->add_option("--m", flag_m, "flat dimension");
    verify_cmd->add_option("--cells", cells, "grid cells for solves");
    verify_cmd->add_option("--out", out_dir, "output directory");

    auto* suite_cmd = app.add_subcommand("suite", "full acceptance matrix");
    suite_cmd->add_option("--config", config_path, "experiment config JSON");
    suite_cmd->add_option("--criterion", criterion, "run a single criterion (1..12)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (odi_solve->parsed()) {
            auto prof = profile_from_flags(of);
            std::ostringstream csv;
            export_csv(prof, csv);
            write_text(fs::path(of.out) / "profile.csv", csv.str());
            if (of.svg) {
                SvgSeries s{"h(t) [" + prof.catalog_id + "]", "#1f6fb2", {}, {}};
                for (int i = 0; i <= 256; ++i) {
                    const double t = prof.r * i / 256.0;
                    s.x.push_back(t);
                    s.y.push_back(prof.h(t));
                }
                std::ostringstream os;
                write_svg(os, {s});
                write_text(fs::path(of.out) / "profile.svg", os.str());
            }
            Report rep;
            rep.id = "odi_solve:" + prof.catalog_id;
            rep.measure("h(0)", prof.h(0.0));
            rep.measure("h(r)", prof.h(prof.r));
            const auto rr = odi_residual(prof, spec_from_flags(of));
            rep.measure("worst_residual", rr.worst_abs);
            rep.tolerance("residual", rr.mesh_tolerance);
            rep.pass = rr.pass;
            rep.fingerprint = fingerprint_of(prof.catalog_id + format_double(of.m));
            return finish({rep}, of.out);
        }
        if (odi_bhi->parsed()) {
            OdiFlags lower_flags = of;
            lower_flags.side = "lower";
            OdiFlags upper_flags = of;
            upper_flags.side = "upper";
            upper_flags.m = bhi_M;
            auto lo = profile_from_flags(lower_flags);
            auto hi = profile_from_flags(upper_flags, true);
            const double A = bhi_constant(lo, hi);
            Report rep;
            rep.id = "odi_bhi:" + of.catalog;
            rep.measure("A", A);
            rep.measure("m", of.m);
            rep.measure("M", bhi_M);
            rep.pass = std::isfinite(A) && A >= 1.0;
            rep.fingerprint = fingerprint_of(of.catalog + format_double(of.m));
            std::cout << "A = " << format_double(A) << "\n";
            return finish({rep}, of.out);
        }
        if (barrier_check->parsed()) {
            DomainSpec dom = HalfPlane{2};
            Vec2 w{0.0, 0.0};
            if (domain_name_s == "disk") {
                dom = Disk{{0.0, 0.0}, 1.0};
                w = {0.0, -1.0};
            } else if (domain_name_s == "half_disk") {
                dom = HalfDisk{{0.0, 0.0}, 1.0};
                w = {0.1, 0.0};
            }
            StructuralEnvelope env;
            OdiSpec spec = spec_from_flags(of);
            env.pair = spec.pair;
            if (spec.side == OdiSide::Lower) env.phi_plus = spec.phi;
            else env.phi_minus = spec.phi;
            env.n = of.n;
            env.r = of.r;
            env.domain = dom;
            env.anchor = w;
            const Vec2 x = w + inward_normal(dom, w) * (0.5 * of.r);
            MarginResult mr;
            MarginSampleSpec ms;
            ms.collect = true;
            if (spec.side == OdiSide::Lower) {
                auto b = place_interior_barrier(dom, x, of.r, profile_from_flags(of));
                mr = strict_margin(b, env, dom, ms);
            } else {
                auto pair = place_exterior_barrier(dom, x, w, of.r, profile_from_flags(of));
                mr = strict_margin(pair.at_foot, env, dom, ms);
            }
            {
                std::ostringstream csv;
                export_csv(mr, csv);
                write_text(fs::path(of.out) / "margins.csv", csv.str());
            }
            Report rep;
            rep.id = "barrier_check:" + of.catalog + "@" + domain_name_s;
            rep.measure("worst_margin", mr.worst_margin);
            rep.measure("worst_slack_vs_guaranteed", mr.worst_slack);
            rep.measure("samples", double(mr.samples));
            rep.pass = mr.pass;
            rep.fingerprint = fingerprint_of(rep.id);
            return finish({rep}, of.out);
        }
        if (pde_solve->parsed()) {
            std::ifstream is(config_path);
            if (!is.good()) {
                std::cerr << "cannot open config " << config_path << "\n";
                return kExitConfig;
            }
            json j;
            is >> j;
            ExperimentConfig cfg = config_from_json(j);
            const int use_cells = cells > 0 ? cells : cfg.grid_levels.front();
            // bounding box chosen per domain
            Vec2 lo{-1.0, 0.0}, extent{2.0, 1.0};
            if (std::holds_alternative<Disk>(cfg.domain) ||
                std::holds_alternative<Rectangle>(cfg.domain) ||
                std::holds_alternative<FlatComplement>(cfg.domain) ||
                std::holds_alternative<Annulus>(cfg.domain)) {
                lo = {-1.0, -1.0};
                extent = {2.0, 2.0};
            }
            auto grid = std::make_shared<Grid>(build_grid(
                cfg.domain, lo, extent, use_cells,
                [](const Vec2& x) { return std::max(0.0, x.y); }));
            SolveOptions so;
            so.tol = tol;
            auto sol = solve_dirichlet(grid, cfg.op, so);
            std::ostringstream csv;
            export_csv(sol, csv);
            write_text(fs::path(cfg.output_dir) / "solution.csv", csv.str());
            Report rep;
            rep.id = "pde_solve:" + sol.operator_id;
            rep.measure("residual", sol.residual);
            rep.measure("iterations", double(sol.iterations));
            rep.tolerance("tol", sol.tol);
            rep.pass = sol.converged;
            rep.fingerprint = fingerprint_of(cfg.canonical());
            return finish({rep}, cfg.output_dir);
        }
        if (verify_cmd->parsed()) {
            if (verify_what == "sector") {
                const double k = sector_exponent(flag_nu, flag_p);
                auto prof = sector_profile(flag_nu, flag_p);
                Report rep;
                rep.id = "verify_sector";
                rep.measure("k", k);
                rep.measure("f_end", prof.f_end);
                rep.measure("k_by_shooting", sector_exponent_by_shooting(flag_nu, flag_p));
                rep.tolerance("wall_value", 1e-6);
                rep.pass = std::abs(prof.f_end) <= 1e-6;
                rep.fingerprint = fingerprint_of("sector" + format_double(flag_nu) +
                                                 format_double(flag_p));
                std::cout << "k(" << flag_nu << "," << flag_p << ") = " << format_double(k)
                          << "\n";
                return finish({rep}, out_dir);
            }
            if (verify_what == "flat") {
                Report rep;
                rep.id = "verify_flat";
                const double beta = flat_exponent(flag_p, flag_n, flag_m);
                rep.measure("beta", beta);
                rep.pass = beta > 0.0;
                rep.fingerprint =
                    fingerprint_of("flat" + format_double(flag_p) + std::to_string(flag_n));
                std::cout << "beta(" << flag_p << "," << flag_n << "," << flag_m
                          << ") = " << format_double(beta) << "\n";
                return finish({rep}, out_dir);
            }
            const std::map<std::string, int> to_criterion = {
                {"decay", 5},  {"bhi", 6},      {"holder", 10}, {"reflect", 9},
                {"growth", 12}, {"gradbound", 11}, {"unique", 12}};
            auto it = to_criterion.find(verify_what);
            if (it == to_criterion.end()) {
                std::cerr << "unknown verify family '" << verify_what << "'\n";
                return kExitConfig;
            }
            AcceptanceSuite suite(cells);
            auto r = suite.run_one(it->second);
            std::cout << criterion_line(r) << "\n";
            write_reports(out_dir, r.reports);
            return r.pass ? kExitOk : kExitCheckFailed;
        }
        if (suite_cmd->parsed()) {
            if (criterion > 0) {
                AcceptanceSuite suite(256);
                auto r = suite.run_one(criterion);
                std::cout << criterion_line(r) << "\n";
                write_reports(out_dir, r.reports);
                return r.pass ? kExitOk : kExitCheckFailed;
            }
            return run_suite(config_path);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigError) {
            std::cerr << "config error: " << e.what() << "\n";
            return kExitConfig;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
