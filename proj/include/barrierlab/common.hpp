#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace barrierlab {

/// Error taxonomy shared by all modules. Every throwing precondition or
/// unsupported-case path carries one of these codes.
enum class ErrorCode {
    AmbiguousProjection,
    NotSatisfied,
    NotInCatalog,
    MonotonicityViolated,
    NoBracketingSlope,
    StiffnessFailure,
    UnboundedRatio,
    OutOfAnnulus,
    HypothesisViolated,
    UnsupportedScheme,
    DegenerateGradient,
    ComplexRadicand,
    ShootingFailed,
    NonzeroTrace,
    BandEmpty,
    DivisionBand,
    NonpositiveExponent,
    InvalidArgument,
    ConfigError,
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::AmbiguousProjection: return "AmbiguousProjection";
        case ErrorCode::NotSatisfied: return "NotSatisfied";
        case ErrorCode::NotInCatalog: return "NotInCatalog";
        case ErrorCode::MonotonicityViolated: return "MonotonicityViolated";
        case ErrorCode::NoBracketingSlope: return "NoBracketingSlope";
        case ErrorCode::StiffnessFailure: return "StiffnessFailure";
        case ErrorCode::UnboundedRatio: return "UnboundedRatio";
        case ErrorCode::OutOfAnnulus: return "OutOfAnnulus";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::UnsupportedScheme: return "UnsupportedScheme";
        case ErrorCode::DegenerateGradient: return "DegenerateGradient";
        case ErrorCode::ComplexRadicand: return "ComplexRadicand";
        case ErrorCode::ShootingFailed: return "ShootingFailed";
        case ErrorCode::NonzeroTrace: return "NonzeroTrace";
        case ErrorCode::BandEmpty: return "BandEmpty";
        case ErrorCode::DivisionBand: return "DivisionBand";
        case ErrorCode::NonpositiveExponent: return "NonpositiveExponent";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) fail(code, what);
}

/// 2-D point / vector. All solved problems live in the plane; the symbolic
/// profile formulas carry the dimension n separately.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Symmetric 2x2 matrix, upper triangle stored.
struct SymMat2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    static SymMat2 zero() { return {}; }
    static SymMat2 identity() { return {1.0, 0.0, 1.0}; }
    static SymMat2 diag(double d1, double d2) { return {d1, 0.0, d2}; }
    /// Rank-one v v^T.
    static SymMat2 outer(const Vec2& v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }

    SymMat2 operator+(const SymMat2& o) const { return {a11 + o.a11, a12 + o.a12, a22 + o.a22}; }
    SymMat2 operator-(const SymMat2& o) const { return {a11 - o.a11, a12 - o.a12, a22 - o.a22}; }
    SymMat2 operator*(double s) const { return {a11 * s, a12 * s, a22 * s}; }

    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a12; }
    double quad(const Vec2& v) const {  // v^T X v
        return a11 * v.x * v.x + 2.0 * a12 * v.x * v.y + a22 * v.y * v.y;
    }

    /// Closed-form eigenvalues, ascending. Exact trace/discriminant route so
    /// downstream 1e-12 tolerances are attainable.
    std::array<double, 2> eigenvalues() const {
        const double mean = 0.5 * (a11 + a22);
        const double half_gap = 0.5 * (a11 - a22);
        const double rad = std::hypot(half_gap, a12);
        return {mean - rad, mean + rad};
    }
};

constexpr double kPi = 3.14159265358979323846;

inline double sq(double x) { return x * x; }

inline double pos_part(double x) { return x > 0.0 ? x : 0.0; }
inline double neg_part(double x) { return x < 0.0 ? -x : 0.0; }

}  // namespace barrierlab
