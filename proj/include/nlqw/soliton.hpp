#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coin.hpp"
#include "error.hpp"
#include "evolution.hpp"
#include "lattice.hpp"

namespace nlqw {

// Point-mass solitons. A single occupied site with coin angle tau on one
// of three lattices:
//   traveling  tau in 2 pi Z        (R(tau) = identity)
//   rotating   tau in pi + 2 pi Z   (R(tau) = -identity)
//   periodic   tau in pi/2 + pi Z   (components swap, period 4 orbit)

enum class SolitonKind { traveling, rotating, periodic };

inline std::string_view to_string(SolitonKind k) noexcept
{
    switch (k) {
    case SolitonKind::traveling: return "traveling";
    case SolitonKind::rotating: return "rotating";
    case SolitonKind::periodic: return "periodic";
    }
    return "?";
}

inline SolitonKind soliton_kind_from_string(std::string_view s)
{
    if (s == "traveling" || s == "T")
        return SolitonKind::traveling;
    if (s == "rotating" || s == "R")
        return SolitonKind::rotating;
    if (s == "periodic" || s == "P")
        return SolitonKind::periodic;
    throw usage_error("unknown soliton kind '" + std::string(s) + "'");
}

/// Coin angle the branch-n soliton must see.
///
/// Branches are indexed per coin sign so that n = 0 is the first lattice
/// point on the side where g a^{2p} = tau - pi/4 can be positive:
///   g > 0: traveling 2n pi, rotating (2n-1) pi, periodic pi/2 + 2n pi
///   g < 0: traveling -2n pi, rotating -(2n+1) pi, periodic -pi/2 - 2n pi
/// Branches without a positive root (traveling n = 0 for g > 0, rotating
/// n = 0 for g > 0) are rejected by soliton_amplitude, not remapped.
inline double soliton_target_angle(const CoinParams& P, SolitonKind kind, std::int64_t n)
{
    constexpr double pi = std::numbers::pi;
    const double sg = P.g() > 0.0 ? 1.0 : -1.0;
    const auto dn = static_cast<double>(n);
    switch (kind) {
    case SolitonKind::traveling: return n == 0 ? 0.0 : sg * 2.0 * dn * pi;
    case SolitonKind::rotating: return sg > 0 ? (2.0 * dn - 1.0) * pi : -(2.0 * dn + 1.0) * pi;
    case SolitonKind::periodic: return sg * (pi / 2.0 + 2.0 * dn * pi);
    }
    return 0.0;
}

/// Closed-form root a = ((tau - pi/4)/g)^{1/(2p)} of the branch equation.
inline double soliton_amplitude(const CoinParams& P, SolitonKind kind, std::int64_t n)
{
    if (P.g() == 0.0)
        throw usage_error("linear coin (g = 0) has no point-mass solitons");
    if (n < 0)
        throw usage_error("branch index must be nonnegative");
    const double tau = soliton_target_angle(P, kind, n);
    const double ratio = (tau - quarter_pi) / P.g();
    if (!(ratio > 0.0))
        throw usage_error("no positive root for " + std::string(to_string(kind)) +
                          " soliton on branch " + std::to_string(n) + " with g = " +
                          std::to_string(P.g()));
    return std::pow(ratio, 1.0 / (2.0 * P.p()));
}

struct SolitonSpec {
    SolitonKind kind = SolitonKind::traveling;
    std::int64_t branch = 0;
    double amplitude = 0.0;
    site_t position = 0;
    Component component = Component::one;

    /// Spec with the amplitude solved from (kind, branch).
    static SolitonSpec canonical(const CoinParams& P, SolitonKind kind, std::int64_t branch,
                                 site_t position, Component component)
    {
        return {kind, branch, soliton_amplitude(P, kind, branch), position, component};
    }
};

inline SpinorField make_soliton(const CoinParams& P, const SolitonSpec& spec)
{
    const double a = soliton_amplitude(P, spec.kind, spec.branch);
    if (!(std::abs(spec.amplitude - a) <= 1e-9))
        throw usage_error("amplitude " + std::to_string(spec.amplitude) +
                          " inconsistent with branch root " + std::to_string(a));
    return point_source(spec.position, spec.component, spec.amplitude);
}

/// Nearest soliton lattice within tol, or nothing. The three lattices are
/// pi/4 apart, so the answer is unique for tol < pi/4.
inline std::optional<SolitonKind> classify_angle(RotationAngle theta, double tol)
{
    if (!(tol > 0.0) || tol >= quarter_pi)
        throw usage_error("classification tolerance must lie in (0, pi/4)");
    constexpr double pi = std::numbers::pi;
    auto dist = [](double x, double period) {
        const double r = std::remainder(x, period);
        return std::abs(r);
    };
    const double t = theta.radians;
    if (dist(t, 2.0 * pi) <= tol)
        return SolitonKind::traveling;
    if (dist(t - pi, 2.0 * pi) <= tol)
        return SolitonKind::rotating;
    if (dist(t - pi / 2.0, pi) <= tol)
        return SolitonKind::periodic;
    return std::nullopt;
}

/// One occupied (site, component) with its amplitude.
struct PointMass {
    site_t site;
    Component component;
    double amplitude;
    friend bool operator==(const PointMass&, const PointMass&) = default;
};

/// Exact point-mass orbit, propagated symbolically: the coin acts by the
/// integer matrix R(tau) (entries 0, +-1), then the mass hops one site.
/// Independent of the stepping kernel.
inline PointMass point_mass_step(SolitonKind kind, double tau, PointMass m) noexcept
{
    switch (kind) {
    case SolitonKind::traveling: break;
    case SolitonKind::rotating: m.amplitude = -m.amplitude; break;
    case SolitonKind::periodic: {
        const double s = std::sin(tau) > 0 ? 1.0 : -1.0;
        if (m.component == Component::one) {
            m.component = Component::two;
            m.amplitude *= s;
        } else {
            m.component = Component::one;
            m.amplitude *= -s;
        }
        break;
    }
    }
    m.site += m.component == Component::one ? -1 : 1;
    return m;
}

inline std::vector<PointMass> soliton_orbit(const CoinParams& P, const SolitonSpec& spec,
                                            std::int64_t steps)
{
    const double tau = soliton_target_angle(P, spec.kind, spec.branch);
    std::vector<PointMass> orbit;
    orbit.reserve(static_cast<std::size_t>(steps) + 1);
    PointMass m{spec.position, spec.component, spec.amplitude};
    orbit.push_back(m);
    for (std::int64_t t = 0; t < steps; ++t) {
        m = point_mass_step(spec.kind, tau, m);
        orbit.push_back(m);
    }
    return orbit;
}

struct OrbitCheck {
    double amplitude = 0.0;
    int period = 0;            ///< sign/shape period: 1, 2 or 4
    int velocity = 0;          ///< -1, +1, or 0 for the two-site periodic orbit
    double max_deviation = 0;  ///< sup over t of |simulated - closed form|
    double linf_drift = 0;     ///< sup over t of |l-inf(t) - a|
    bool verified = false;
};

/// Evolves the soliton with the stepping kernel and compares every step
/// to the closed-form orbit.
inline OrbitCheck verify_soliton(const CoinParams& P, const SolitonSpec& spec,
                                 std::int64_t steps, double tol = 1e-12)
{
    OrbitCheck out;
    out.amplitude = spec.amplitude;
    switch (spec.kind) {
    case SolitonKind::traveling: out.period = 1; break;
    case SolitonKind::rotating: out.period = 2; break;
    case SolitonKind::periodic: out.period = 4; break;
    }
    out.velocity = spec.kind == SolitonKind::periodic ? 0
                   : spec.component == Component::one ? -1
                                                      : 1;
    const auto orbit = soliton_orbit(P, spec, steps);
    const SpinorField u0 = make_soliton(P, spec);
    auto compare = [&](const FieldView& v) {
        const auto& m = orbit[static_cast<std::size_t>(v.time() - u0.time())];
        const SpinorField expect = point_source(m.site, m.component, m.amplitude);
        out.max_deviation = std::max(out.max_deviation, sup_difference(v, expect));
        out.linf_drift = std::max(out.linf_drift, std::abs(v.linf_norm() - spec.amplitude));
    };
    compare(u0.view());
    evolve(P, u0, steps, compare);
    out.verified = out.max_deviation <= tol && out.linf_drift <= tol;
    return out;
}

} // namespace nlqw
