#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "barrierlab/geometry.hpp"
#include "barrierlab/odi.hpp"
#include "barrierlab/pucci.hpp"

namespace barrierlab {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Domain <-> JSON
// ---------------------------------------------------------------------------

inline json to_json(const DomainSpec& d) {
    json j;
    j["type"] = domain_name(d);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HalfPlane>) {
                j["normal_axis"] = v.normal_axis;
            } else if constexpr (std::is_same_v<T, Disk> || std::is_same_v<T, HalfDisk>) {
                j["center"] = {v.center.x, v.center.y};
                j["radius"] = v.radius;
            } else if constexpr (std::is_same_v<T, Annulus>) {
                j["center"] = {v.center.x, v.center.y};
                j["r_in"] = v.r_in;
                j["r_out"] = v.r_out;
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                j["corner"] = {v.corner.x, v.corner.y};
                j["widths"] = {v.widths.x, v.widths.y};
            } else if constexpr (std::is_same_v<T, HalfRectangle>) {
                j["w"] = {v.w.x, v.w.y};
                j["r"] = v.r;
            } else if constexpr (std::is_same_v<T, Sector>) {
                j["apex"] = {v.apex.x, v.apex.y};
                j["nu"] = v.nu;
            } else if constexpr (std::is_same_v<T, FlatComplement>) {
                j["m"] = v.m;
                j["n"] = v.n;
            }
        },
        d);
    return j;
}

inline Vec2 vec2_from(const json& j, const char* key) {
    require(j.contains(key) && j[key].is_array() && j[key].size() == 2, ErrorCode::ConfigError,
            std::string("expected 2-vector field '") + key + "'");
    return {j[key][0].get<double>(), j[key][1].get<double>()};
}

inline DomainSpec domain_from_json(const json& j) {
    require(j.contains("type"), ErrorCode::ConfigError, "domain needs a 'type'");
    const std::string t = j["type"].get<std::string>();
    DomainSpec d;
    if (t == "half_plane") {
        d = HalfPlane{j.value("normal_axis", 2)};
    } else if (t == "disk") {
        d = Disk{vec2_from(j, "center"), j.at("radius").get<double>()};
    } else if (t == "half_disk") {
        d = HalfDisk{vec2_from(j, "center"), j.at("radius").get<double>()};
    } else if (t == "annulus") {
        d = Annulus{vec2_from(j, "center"), j.at("r_in").get<double>(),
                    j.at("r_out").get<double>()};
    } else if (t == "rectangle") {
        d = Rectangle{vec2_from(j, "corner"), vec2_from(j, "widths")};
    } else if (t == "half_rectangle") {
        d = HalfRectangle{vec2_from(j, "w"), j.at("r").get<double>()};
    } else if (t == "sector") {
        d = Sector{vec2_from(j, "apex"), j.at("nu").get<double>()};
    } else if (t == "flat_complement") {
        d = FlatComplement{j.at("m").get<int>(), j.at("n").get<int>()};
    } else {
        fail(ErrorCode::ConfigError, "unknown domain type '" + t + "'");
    }
    validate(d);
    return d;
}

// ---------------------------------------------------------------------------
// Ellipticity / lower-order terms / operators <-> JSON
// ---------------------------------------------------------------------------

inline json to_json(const EllipticityFn& f) {
    json j;
    if (f.is_constant()) {
        j["kind"] = "constant";
        j["value"] = f.value;
    } else {
        j["kind"] = "power";
        j["exponent"] = f.exponent;
    }
    return j;
}

inline EllipticityFn ellipticity_from_json(const json& j) {
    const std::string k = j.at("kind").get<std::string>();
    if (k == "constant") return EllipticityFn::constant(j.at("value").get<double>());
    if (k == "power") return EllipticityFn::power(j.at("exponent").get<double>());
    fail(ErrorCode::ConfigError, "unknown ellipticity kind '" + k + "'");
}

inline json to_json(const EllipticityPair& p) {
    json j;
    j["lambda"] = to_json(p.lambda);
    j["Lambda"] = to_json(p.Lambda);
    j["argument"] = p.arg == DistanceArg::Boundary ? "boundary" : "anchor";
    return j;
}

inline EllipticityPair pair_from_json(const json& j) {
    EllipticityPair p;
    p.lambda = ellipticity_from_json(j.at("lambda"));
    p.Lambda = ellipticity_from_json(j.at("Lambda"));
    const std::string a = j.value("argument", "boundary");
    require(a == "boundary" || a == "anchor", ErrorCode::ConfigError,
            "ellipticity argument must be 'boundary' or 'anchor'");
    p.arg = a == "boundary" ? DistanceArg::Boundary : DistanceArg::Anchor;
    return p;
}

inline json to_json(const LowerOrderTerm& t) {
    json j;
    switch (t.kind) {
        case LowerOrderTerm::Kind::Zero: j["kind"] = "zero"; break;
        case LowerOrderTerm::Kind::Constant:
            j["kind"] = "constant";
            j["c0"] = t.c0;
            break;
        case LowerOrderTerm::Kind::GradientPower:
            j["kind"] = "gradient_power";
            j["sign"] = t.sign == SignClass::NonNegative ? 1 : -1;
            j["exponent"] = t.exponent;
            break;
        case LowerOrderTerm::Kind::QuadraticDrift:
            j["kind"] = "quadratic_drift";
            j["sign"] = t.sign == SignClass::NonNegative ? 1 : -1;
            j["mu"] = t.mu;
            j["c_omega"] = t.c_omega;
            break;
    }
    return j;
}

inline LowerOrderTerm lot_from_json(const json& j) {
    const std::string k = j.at("kind").get<std::string>();
    if (k == "zero") return LowerOrderTerm::zero();
    if (k == "constant") return LowerOrderTerm::constant(j.at("c0").get<double>());
    if (k == "gradient_power")
        return LowerOrderTerm::gradient_power(j.at("sign").get<double>(),
                                              j.at("exponent").get<double>());
    if (k == "quadratic_drift")
        return LowerOrderTerm::quadratic_drift(
            j.at("mu").get<double>(), j.value("c_omega", 0.0),
            j.at("sign").get<double>() >= 0 ? SignClass::NonNegative : SignClass::NonPositive);
    fail(ErrorCode::ConfigError, "unknown lower-order term '" + k + "'");
}

inline json to_json(const ModelOperator& op) {
    json j;
    j["type"] = operator_name(op);
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PLaplaceOp>) {
                j["p"] = v.p;
            } else if constexpr (std::is_same_v<T, PxLaplaceOp>) {
                j["c0"] = v.field.c0;
                j["c1"] = v.field.c1;
                j["c2"] = v.field.c2;
                j["cq"] = v.field.cq;
            } else if constexpr (std::is_same_v<T, PucciEnvelopeOp>) {
                j["pair"] = to_json(v.pair);
                j["phi"] = to_json(v.phi);
                j["domain"] = to_json(v.domain);
                j["anchor"] = {v.anchor.x, v.anchor.y};
            } else if constexpr (std::is_same_v<T, PucciConstRhsOp>) {
                j["lambda"] = v.lambda;
                j["Lambda"] = v.Lambda;
                j["c"] = v.c;
            }
        },
        op);
    return j;
}

inline ModelOperator operator_from_json(const json& j) {
    const std::string t = j.at("type").get<std::string>();
    if (t == "laplace") return LaplaceOp{};
    if (t == "infinity_laplace") return InfinityLaplaceOp{};
    if (t == "p_laplace") return PLaplaceOp{j.at("p").get<double>()};
    if (t == "px_laplace") {
        PxLaplaceOp op;
        op.field.c0 = j.value("c0", 2.0);
        op.field.c1 = j.value("c1", 0.0);
        op.field.c2 = j.value("c2", 0.0);
        op.field.cq = j.value("cq", 0.0);
        return op;
    }
    if (t == "pucci_plus_envelope" || t == "pucci_minus_envelope") {
        PucciEnvelopeOp op;
        op.plus = t == "pucci_plus_envelope";
        op.pair = pair_from_json(j.at("pair"));
        if (j.contains("phi")) op.phi = lot_from_json(j.at("phi"));
        if (j.contains("domain")) op.domain = domain_from_json(j.at("domain"));
        if (j.contains("anchor")) op.anchor = vec2_from(j, "anchor");
        return op;
    }
    if (t == "pucci_const_rhs")
        return PucciConstRhsOp{j.at("lambda").get<double>(), j.at("Lambda").get<double>(),
                               j.at("c").get<double>()};
    fail(ErrorCode::ConfigError, "unknown operator type '" + t + "'");
}

inline json to_json(const StructuralEnvelope& e) {
    json j;
    j["pair"] = to_json(e.pair);
    j["phi_plus"] = to_json(e.phi_plus);
    j["phi_minus"] = to_json(e.phi_minus);
    j["phi_minus_argument"] = e.phi_minus_arg == DistanceArg::Boundary ? "boundary" : "anchor";
    j["n"] = e.n;
    j["r"] = e.r;
    j["anchor"] = {e.anchor.x, e.anchor.y};
    j["domain"] = to_json(e.domain);
    return j;
}

inline StructuralEnvelope envelope_from_json(const json& j) {
    StructuralEnvelope e;
    e.pair = pair_from_json(j.at("pair"));
    if (j.contains("phi_plus")) e.phi_plus = lot_from_json(j.at("phi_plus"));
    if (j.contains("phi_minus")) e.phi_minus = lot_from_json(j.at("phi_minus"));
    const std::string a = j.value("phi_minus_argument", "boundary");
    e.phi_minus_arg = a == "anchor" ? DistanceArg::Anchor : DistanceArg::Boundary;
    e.n = j.value("n", 2);
    e.r = j.at("r").get<double>();
    if (j.contains("anchor")) e.anchor = vec2_from(j, "anchor");
    if (j.contains("domain")) e.domain = domain_from_json(j.at("domain"));
    e.validate();
    return e;
}

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    DomainSpec domain = HalfDisk{{0.0, 0.0}, 1.0};
    ModelOperator op = LaplaceOp{};
    std::optional<StructuralEnvelope> envelope;
    std::vector<int> grid_levels = {256};
    std::vector<std::string> checks;  // subset of the verify vocabulary
    std::string output_dir = "out";
    uint64_t seed = 20240;
    double tol = 1e-8;
    bool svg = false;

    std::string canonical() const;
};

inline json to_json(const ExperimentConfig& c) {
    json j;
    j["domain"] = to_json(c.domain);
    j["operator"] = to_json(c.op);
    if (c.envelope) j["envelope"] = to_json(*c.envelope);
    j["grid_levels"] = c.grid_levels;
    j["checks"] = c.checks;
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    j["tol"] = c.tol;
    j["svg"] = c.svg;
    return j;
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    try {
        if (j.contains("domain")) c.domain = domain_from_json(j.at("domain"));
        if (j.contains("operator")) c.op = operator_from_json(j.at("operator"));
        if (j.contains("envelope")) c.envelope = envelope_from_json(j.at("envelope"));
        if (j.contains("grid_levels")) c.grid_levels = j.at("grid_levels").get<std::vector<int>>();
        if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
        c.output_dir = j.value("output_dir", c.output_dir);
        c.seed = j.value("seed", c.seed);
        c.tol = j.value("tol", c.tol);
        c.svg = j.value("svg", c.svg);
    } catch (const json::exception& e) {
        fail(ErrorCode::ConfigError, std::string("malformed config: ") + e.what());
    }
    for (int lv : c.grid_levels)
        require(lv >= 8 && lv <= 4096, ErrorCode::ConfigError, "grid level out of range [8, 4096]");
    require(c.tol > 0.0, ErrorCode::ConfigError, "tolerance must be positive");
    return c;
}

inline std::string ExperimentConfig::canonical() const { return to_json(*this).dump(); }

}  // namespace barrierlab
