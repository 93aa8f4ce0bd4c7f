#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "coin.hpp"
#include "edge_map.hpp"
#include "error.hpp"
#include "evolution.hpp"
#include "lattice.hpp"
#include "soliton.hpp"

namespace nlqw {

struct TimeSeries {
    std::vector<std::int64_t> t;
    std::vector<double> value;

    void push(std::int64_t time, double v)
    {
        if (!t.empty() && time <= t.back())
            throw usage_error("time series entries must have strictly increasing t");
        t.push_back(time);
        value.push_back(v);
    }
    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
    [[nodiscard]] bool empty() const noexcept { return t.empty(); }
};

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;  ///< base-10
    double tmin = 0.0;
    double tmax = 0.0;
    double residual = 0.0;   ///< RMS of log10 residuals
    std::size_t points = 0;
};

/// Least squares of log10(value) against log10(t) over tmin <= t <= tmax.
inline DecayFit fit_loglog(const TimeSeries& s, double tmin, double tmax)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto t = static_cast<double>(s.t[i]);
        if (t < tmin || t > tmax || t <= 0.0 || !(s.value[i] > 0.0))
            continue;
        const double x = std::log10(t), y = std::log10(s.value[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2)
        throw numeric_error("decay fit needs at least 2 positive points in range");
    const double dn = static_cast<double>(n);
    const double den = dn * sxx - sx * sx;
    if (!(den > 0.0))
        throw numeric_error("decay fit is degenerate (all sample times equal)");
    DecayFit f;
    f.slope = (dn * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / dn;
    f.tmin = tmin;
    f.tmax = tmax;
    f.points = n;
    double ss = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto t = static_cast<double>(s.t[i]);
        if (t < tmin || t > tmax || t <= 0.0 || !(s.value[i] > 0.0))
            continue;
        const double r = std::log10(s.value[i]) - (f.intercept + f.slope * std::log10(t));
        ss += r * r;
    }
    f.residual = std::sqrt(ss / dn);
    return f;
}

struct DecayRun {
    TimeSeries linf;  ///< t = 0..T
    DecayFit fit;
};

inline DecayRun run_decay(const CoinParams& P, const SpinorField& u0, std::int64_t T,
                          double tmin, double tmax)
{
    if (!(tmin > 0.0) || !(tmax > tmin))
        throw usage_error("fit range needs 0 < tmin < tmax");
    if (static_cast<double>(T) < tmax)
        throw usage_error("horizon T must reach the end of the fit range");
    DecayRun out;
    out.linf.t.reserve(static_cast<std::size_t>(T) + 1);
    out.linf.value.reserve(static_cast<std::size_t>(T) + 1);
    out.linf.push(0, u0.linf_norm());
    evolve(P, u0, T, [&](const FieldView& v) { out.linf.push(v.time() - u0.time(), v.linf_norm()); });
    out.fit = fit_loglog(out.linf, tmin, tmax);
    return out;
}

/// Total variation sum |v_{i+1} - v_i| over each window of `window` steps,
/// reported at the window's last time.
inline TimeSeries sliding_total_variation(const TimeSeries& s, std::size_t window)
{
    if (window < 1)
        throw usage_error("total-variation window must be >= 1");
    TimeSeries out;
    if (s.size() <= window)
        return out;
    double tv = 0.0;
    for (std::size_t i = 1; i <= window; ++i)
        tv += std::abs(s.value[i] - s.value[i - 1]);
    out.push(s.t[window], tv);
    for (std::size_t i = window + 1; i < s.size(); ++i) {
        tv += std::abs(s.value[i] - s.value[i - 1]);
        tv -= std::abs(s.value[i - window] - s.value[i - window - 1]);
        out.push(s.t[i], std::max(tv, 0.0));
    }
    return out;
}

// --------------------------------------------------------------------------
// Peaks

struct PeakPoint {
    std::int64_t t;
    site_t site;
    Component component;
    amplitude value;
};

struct PeakTrack {
    double threshold = 0.3;
    std::vector<PeakPoint> points;
};

/// Appends every (site, component) of v with |u_j| >= threshold.
inline void collect_peaks(const FieldView& v, std::int64_t t, double threshold,
                          std::vector<PeakPoint>& out)
{
    for (std::size_t k = 0; k < v.size(); ++k) {
        const Spinor& s = v.cells()[k];
        const site_t x = v.origin() + static_cast<site_t>(k);
        if (std::abs(s.c1) >= threshold)
            out.push_back({t, x, Component::one, s.c1});
        if (std::abs(s.c2) >= threshold)
            out.push_back({t, x, Component::two, s.c2});
    }
}

inline PeakTrack track_peaks(const CoinParams& P, const SpinorField& u0, std::int64_t T,
                             double threshold = 0.3)
{
    if (!(threshold > 0.0))
        throw usage_error("peak threshold must be positive");
    PeakTrack tr;
    tr.threshold = threshold;
    collect_peaks(u0.view(), 0, threshold, tr.points);
    evolve(P, u0, T, [&](const FieldView& v) {
        collect_peaks(v, v.time() - u0.time(), threshold, tr.points);
    });
    return tr;
}

// --------------------------------------------------------------------------
// Collisions

enum class CollisionCase {
    rotating_pair,    ///< I, rotating vs rotating
    traveling_pair,   ///< I, traveling vs traveling
    rotating_traveling,  ///< II
    periodic_rotating,   ///< III
    periodic_traveling,  ///< IV
};

inline std::string_view to_string(CollisionCase c) noexcept
{
    switch (c) {
    case CollisionCase::rotating_pair: return "I-rot";
    case CollisionCase::traveling_pair: return "I-trav";
    case CollisionCase::rotating_traveling: return "II";
    case CollisionCase::periodic_rotating: return "III";
    case CollisionCase::periodic_traveling: return "IV";
    }
    return "?";
}

inline CollisionCase collision_case_from_string(std::string_view s)
{
    for (auto c : {CollisionCase::rotating_pair, CollisionCase::traveling_pair,
                   CollisionCase::rotating_traveling, CollisionCase::periodic_rotating,
                   CollisionCase::periodic_traveling})
        if (s == to_string(c))
            return c;
    throw usage_error("unknown collision case '" + std::string(s) +
                      "' (expected I-rot, I-trav, II, III or IV)");
}

struct CollisionScenario {
    std::string name;
    CollisionCase kind = CollisionCase::traveling_pair;
    CoinParams coin{};
    SolitonSpec left_walker;   ///< starts left, component 2, moves right
    SolitonSpec right_walker;  ///< starts right, component 1 (moves left unless periodic)
    std::int64_t horizon = 1000;
    std::vector<std::int64_t> snapshot_times;
};

/// Lowest branch of `kind` with a positive root for this coin.
inline SolitonSpec lowest_soliton(const CoinParams& P, SolitonKind kind, site_t position,
                                  Component component)
{
    for (std::int64_t n = 0; n < 4; ++n) {
        const double tau = soliton_target_angle(P, kind, n);
        if ((tau - quarter_pi) / P.g() > 0.0)
            return SolitonSpec::canonical(P, kind, n, position, component);
    }
    throw usage_error("no soliton branch found");
}

inline CollisionScenario make_scenario(CollisionCase c, const CoinParams& P)
{
    if (P.g() == 0.0)
        throw usage_error("collision scenarios need a nonlinear coin");
    CollisionScenario s;
    s.kind = c;
    s.coin = P;
    s.name = std::string(to_string(c)) + (P.g() > 0.0 ? "/plus" : "/minus");
    s.snapshot_times = {0, 150, 151, 152, 500};
    auto left = [&](SolitonKind k) { return lowest_soliton(P, k, 450, Component::two); };
    auto right = [&](SolitonKind k) { return lowest_soliton(P, k, 750, Component::one); };
    switch (c) {
    case CollisionCase::rotating_pair:
        s.left_walker = left(SolitonKind::rotating);
        s.right_walker = right(SolitonKind::rotating);
        break;
    case CollisionCase::traveling_pair:
        s.left_walker = left(SolitonKind::traveling);
        s.right_walker = right(SolitonKind::traveling);
        break;
    case CollisionCase::rotating_traveling:
        s.left_walker = left(SolitonKind::traveling);
        s.right_walker = right(SolitonKind::rotating);
        break;
    case CollisionCase::periodic_rotating:
        s.left_walker = left(SolitonKind::rotating);
        s.right_walker = lowest_soliton(P, SolitonKind::periodic, 600, Component::one);
        break;
    case CollisionCase::periodic_traveling:
        s.left_walker = left(SolitonKind::traveling);
        s.right_walker = lowest_soliton(P, SolitonKind::periodic, 600, Component::one);
        break;
    }
    return s;
}

/// The eight reference scenarios: case I for C+ (both pairings), and cases
/// II, III, IV for each coin sign.
inline std::vector<CollisionScenario> scenario_catalog()
{
    std::vector<CollisionScenario> out;
    out.push_back(make_scenario(CollisionCase::rotating_pair, coin_plus));
    out.push_back(make_scenario(CollisionCase::traveling_pair, coin_plus));
    for (auto c : {CollisionCase::rotating_traveling, CollisionCase::periodic_rotating,
                   CollisionCase::periodic_traveling}) {
        out.push_back(make_scenario(c, coin_plus));
        out.push_back(make_scenario(c, coin_minus));
    }
    return out;
}

inline SpinorField scenario_initial_state(const CollisionScenario& s)
{
    return superpose({make_soliton(s.coin, s.left_walker), make_soliton(s.coin, s.right_walker)});
}

/// First time the two walkers occupy the same site, assuming free motion
/// at speed 1 (a periodic soliton stays on its two-site cell).
inline std::int64_t expected_collision_time(const CollisionScenario& s)
{
    const bool right_moves = s.right_walker.kind != SolitonKind::periodic;
    const site_t gap = s.right_walker.position - s.left_walker.position;
    return right_moves ? gap / 2 : gap;
}

inline void validate(const CollisionScenario& s)
{
    if (s.left_walker.component != Component::two)
        throw usage_error("left walker must be launched on component 2");
    if (s.right_walker.component != Component::one)
        throw usage_error("right walker must be launched on component 1");
    if (!(s.right_walker.position > s.left_walker.position))
        throw usage_error("walkers must start with disjoint supports, left < right");
    if (s.right_walker.kind != SolitonKind::periodic &&
        (s.right_walker.position - s.left_walker.position) % 2 != 0)
        throw usage_error("two movers need an even gap to meet on a site");
    if (s.horizon < 0)
        throw usage_error("horizon must be nonnegative");
}

struct CollisionResult {
    PeakTrack track;
    std::map<std::int64_t, SpinorField> snapshots;
    SpinorField final_state;
    TimeSeries linf;
};

inline CollisionResult run_collision(const CollisionScenario& s, double threshold = 0.3)
{
    validate(s);
    CollisionResult r;
    r.track.threshold = threshold;
    const SpinorField u0 = scenario_initial_state(s);
    const std::set<std::int64_t> snaps(s.snapshot_times.begin(), s.snapshot_times.end());
    auto observe = [&](const FieldView& v) {
        const std::int64_t t = v.time() - u0.time();
        collect_peaks(v, t, threshold, r.track.points);
        r.linf.push(t, v.linf_norm());
        if (snaps.contains(t))
            r.snapshots.emplace(t, SpinorField{v});
    };
    observe(u0.view());
    r.final_state = evolve(s.coin, u0, s.horizon, observe);
    return r;
}

// --------------------------------------------------------------------------
// Edge perturbation

struct PerturbationResult {
    double r0 = 0.0;
    TimeSeries trace;  ///< r_t for t = 0..T, plain iteration
    EdgeOrbit orbit;   ///< classification from iterate_edge
};

/// Edge trace of the perturbed point source a(1 + sign eps) delta_{1,0}.
/// Only the left edge enters, so the rest of the initial datum is zero.
inline PerturbationResult edge_perturbation(const CoinParams& P, double a, double eps, int sign,
                                            std::int64_t T, EdgeIterationOptions opt = {})
{
    if (!(eps >= 0.0) || !(eps < 1.0))
        throw usage_error("perturbation eps must lie in [0, 1)");
    if (sign != 1 && sign != -1)
        throw usage_error("perturbation sign must be +1 or -1");
    if (!(a > 0.0))
        throw usage_error("soliton amplitude must be positive");
    if (T < 0)
        throw usage_error("number of steps must be nonnegative");
    PerturbationResult out;
    const double amp = a * (1.0 + sign * eps);
    out.r0 = amp * amp;
    double r = out.r0;
    out.trace.t.reserve(static_cast<std::size_t>(T) + 1);
    out.trace.value.reserve(static_cast<std::size_t>(T) + 1);
    out.trace.push(0, r);
    for (std::int64_t t = 1; t <= T; ++t) {
        r = edge_map(P, r);
        out.trace.push(t, r);
    }
    opt.keep_series = false;
    out.orbit = iterate_edge(P, out.r0, opt);
    return out;
}

} // namespace nlqw
