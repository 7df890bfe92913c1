#include <catch2/catch_amalgamated.hpp>

#include "barrierlab/config.hpp"
#include "barrierlab/report.hpp"

using namespace barrierlab;

TEST_CASE("config round trip is stable") {
    ExperimentConfig cfg;
    cfg.domain = HalfDisk{{0.0, 0.0}, 1.0};
    PucciEnvelopeOp op;
    op.pair.lambda = EllipticityFn::constant(1.0);
    op.pair.Lambda = EllipticityFn::constant(2.0);
    op.domain = cfg.domain;
    cfg.op = op;
    StructuralEnvelope env;
    env.pair = op.pair;
    env.r = 0.1;
    env.domain = cfg.domain;
    cfg.envelope = env;
    cfg.grid_levels = {128, 256};
    cfg.checks = {"decay", "bhi"};
    cfg.seed = 77;

    const json j1 = to_json(cfg);
    const ExperimentConfig back = config_from_json(j1);
    const json j2 = to_json(back);
    CHECK(j1.dump() == j2.dump());
}

TEST_CASE("malformed configs are schema errors") {
    CHECK_THROWS_AS(domain_from_json(json{{"type", "pentagon"}}), Error);
    try {
        config_from_json(json{{"grid_levels", {2}}});
        FAIL("expected ConfigError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
    }
    CHECK_THROWS_AS(operator_from_json(json{{"type", "tricci"}}), Error);
    CHECK_THROWS_AS(config_from_json(json{{"tol", -1.0}}), Error);
}

TEST_CASE("domain serialization covers the catalog") {
    const std::vector<DomainSpec> domains = {
        HalfPlane{1},          Disk{{0.5, -0.25}, 2.0},  HalfDisk{{0, 0}, 1.0},
        Annulus{{0, 0}, 0.5, 1.5}, Rectangle{{-1, 0}, {2, 1}}, HalfRectangle{{0, 0}, 1.0},
        Sector{{0, 0}, 2.5},   FlatComplement{1, 3}};
    for (const auto& d : domains) {
        const DomainSpec back = domain_from_json(to_json(d));
        CHECK(to_json(back).dump() == to_json(d).dump());
    }
}

TEST_CASE("reports serialize deterministically") {
    Report r;
    r.id = "sample";
    r.pass = true;
    r.measure("value", 0.1 + 0.2);
    r.tolerance("tol", 1e-9);
    r.note("stable");
    r.fingerprint = fingerprint_of("sample-inputs");
    const std::string a = to_json(r).dump();
    const std::string b = to_json(r).dump();
    CHECK(a == b);
    CHECK(a.find("sample") != std::string::npos);
    const std::string md = to_markdown({r});
    CHECK(md.find("| sample | pass |") != std::string::npos);
}
