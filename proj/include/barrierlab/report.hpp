#pragma once

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "barrierlab/common.hpp"
#include "barrierlab/numerics.hpp"

namespace barrierlab {

/// Per-check verification result. `pass` is a pure function of the measured
/// quantities against the recorded tolerances; everything needed to audit a
/// check is carried along.
struct Report {
    std::string id;
    bool pass = false;
    std::vector<std::pair<std::string, double>> measured;
    std::vector<std::pair<std::string, double>> tolerances;
    std::vector<std::string> notes;
    uint64_t fingerprint = 0;

    void measure(const std::string& key, double value) { measured.emplace_back(key, value); }
    void tolerance(const std::string& key, double value) { tolerances.emplace_back(key, value); }
    void note(const std::string& text) { notes.push_back(text); }

    double measured_value(const std::string& key, double fallback = 0.0) const {
        for (const auto& [k, v] : measured)
            if (k == key) return v;
        return fallback;
    }
};

/// Deterministic shortest-roundtrip double formatting (no locale, no
/// pointers, no timestamps anywhere in reports).
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["pass"] = r.pass;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.measured) m[k] = v;
    j["measured"] = m;
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.tolerances) t[k] = v;
    j["tolerances"] = t;
    j["notes"] = r.notes;
    char fp[32];
    std::snprintf(fp, sizeof(fp), "%016llx", static_cast<unsigned long long>(r.fingerprint));
    j["fingerprint"] = fp;
    return j;
}

inline std::string to_markdown(const std::vector<Report>& reports) {
    std::string out;
    out += "| check | pass | measured | tolerances |\n";
    out += "|---|---|---|---|\n";
    for (const auto& r : reports) {
        std::string meas, tols;
        for (const auto& [k, v] : r.measured) meas += k + "=" + format_double(v) + " ";
        for (const auto& [k, v] : r.tolerances) tols += k + "=" + format_double(v) + " ";
        out += "| " + r.id + " | " + (r.pass ? "pass" : "FAIL") + " | " + meas + " | " + tols +
               " |\n";
    }
    return out;
}

/// Fingerprint helper: hash a canonical description of the check's inputs.
inline uint64_t fingerprint_of(const std::string& canonical) { return fnv1a(canonical); }

}  // namespace barrierlab
