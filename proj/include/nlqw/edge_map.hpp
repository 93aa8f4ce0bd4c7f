#pragma once

// Scalar dynamics of the left-edge squared amplitude r_t = |u^t(-t)|^2,
//
//     r_{t+1} = f(r_t),   f(x) = x cos^2(pi/4 + g x^p),
//
// and the decomposition of [0, xmax] into initial values whose orbit stays
// bounded away from zero (solitonic edge) versus decays.
//
// Facts about f used throughout (x >= 0):
//   f(x) <= x, so every orbit is nonincreasing and converges to a fixed point;
//   positive fixed points are g x^p in (4Z+3) pi/4, all tangent (f' = 1);
//   minima are g x^p in (4Z+1) pi/4 with f = 0;
//   maxima solve cot(pi/4 + g x^p) = 2 p g x^p.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coin.hpp"
#include "error.hpp"

namespace nlqw {

inline double edge_map(const CoinParams& P, double r)
{
    if (!(r >= 0.0))
        throw usage_error("edge map is defined for r >= 0");
    const double c = std::cos(quarter_pi + P.g() * P.power(r));
    return r * c * c;
}

/// h(x) = x cos(pi/4 + g x^{2p}); h(x)^2 = f(x^2).
inline double amplitude_edge_map(const CoinParams& P, double x)
{
    if (!(x >= 0.0))
        throw usage_error("amplitude edge map is defined for x >= 0");
    return x * std::cos(quarter_pi + P.g() * P.power(x * x));
}

/// f'(x), closed form.
inline double edge_map_derivative(const CoinParams& P, double x)
{
    const double theta = quarter_pi + P.g() * P.power(x);
    const double dtheta = x > 0.0 ? P.g() * P.p() * P.power(x) / x : (P.p() == 1.0 ? P.g() : 0.0);
    const double c = std::cos(theta), s = std::sin(theta);
    return c * c - 2.0 * x * c * s * dtheta;
}

struct Interval {
    double lo;
    double hi;
    [[nodiscard]] bool contains(double x) const noexcept { return x >= lo && x <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

namespace detail {

inline double xpow_inv(const CoinParams& P, double v)  // v^{1/p}
{
    return P.p() == 1.0 ? v : std::pow(v, 1.0 / P.p());
}

/// Root of fn in [lo, hi] given a strict sign change; bisects to adjacent
/// doubles.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi, const char* what)
{
    double flo = fn(lo), fhi = fn(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw numeric_error(std::string("root not bracketed: ") + what);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double fm = fn(mid);
        if (fm == 0.0)
            return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// m-th smallest positive fixed point (m >= 1), closed form.
inline double fixed_point(const CoinParams& P, int m)
{
    if (P.g() == 0.0)
        throw usage_error("linear coin has no positive fixed points");
    if (m < 1)
        throw usage_error("fixed point index starts at 1");
    const double k = P.g() > 0.0 ? 4.0 * m - 1.0 : 4.0 * m - 3.0;
    return detail::xpow_inv(P, k * quarter_pi / std::abs(P.g()));
}

/// j-th local minimum (j >= 1), where f vanishes.
inline double local_minimum(const CoinParams& P, int j)
{
    if (P.g() == 0.0)
        throw usage_error("linear coin has no local minima");
    const double k = P.g() > 0.0 ? 4.0 * j - 3.0 : 4.0 * j - 1.0;
    return detail::xpow_inv(P, k * quarter_pi / std::abs(P.g()));
}

struct FixedPointSet {
    std::vector<double> points;
};

inline FixedPointSet fixed_points(const CoinParams& P, double xmax)
{
    if (!(xmax > 0.0))
        throw usage_error("xmax must be positive");
    FixedPointSet out;
    for (int m = 1;; ++m) {
        const double x = fixed_point(P, m);
        if (x > xmax)
            break;
        out.points.push_back(x);
    }
    return out;
}

namespace detail {

// Zero set of f' between a fixed point (or 0) and the following minimum:
// cos(theta) - 2 p g x^p sin(theta) changes sign exactly once there.
inline double maximum_between(const CoinParams& P, double lo, double hi)
{
    auto h = [&](double x) {
        const double xp = P.power(x);
        const double th = quarter_pi + P.g() * xp;
        return std::cos(th) - 2.0 * P.p() * P.g() * xp * std::sin(th);
    };
    return bisect(h, lo, hi, "local maximum of the edge map");
}

} // namespace detail

struct CriticalPoints {
    std::vector<double> maxima;
    std::vector<double> minima;
};

enum class LandmarkKind { fixed, maximum, minimum };

struct Landmark {
    double x;
    LandmarkKind kind;
    int index;  ///< 1-based counter within its kind; 0 for the origin
};

/// Fixed points, maxima and minima in increasing order, starting with the
/// origin and continuing up to the first minimum beyond xmax.
inline std::vector<Landmark> landmarks(const CoinParams& P, double xmax)
{
    if (!(xmax > 0.0))
        throw usage_error("xmax must be positive");
    if (P.g() == 0.0)
        throw usage_error("linear coin: f is monotone");
    std::vector<Landmark> out;
    out.push_back({0.0, LandmarkKind::fixed, 0});
    double left = 0.0;  // last fixed point (or origin)
    int m = 1, j = 1, k = 1;
    if (P.g() < 0.0) {
        // f increases from 0 straight up to the first tangent fixed point
        left = fixed_point(P, m);
        out.push_back({left, LandmarkKind::fixed, m++});
    }
    for (;;) {
        const double mn = local_minimum(P, j);
        const double mx = detail::maximum_between(P, left, mn);
        out.push_back({mx, LandmarkKind::maximum, k++});
        out.push_back({mn, LandmarkKind::minimum, j++});
        if (mn > xmax)
            break;
        left = fixed_point(P, m);
        out.push_back({left, LandmarkKind::fixed, m++});
    }
    return out;
}

/// Checks the periodic order fixed -> maximum -> minimum -> fixed ...
/// (after the first positive fixed point when g < 0). Returns violations.
inline std::vector<std::string> check_landmark_order(std::span<const Landmark> lm)
{
    std::vector<std::string> bad;
    for (std::size_t i = 1; i < lm.size(); ++i) {
        if (!(lm[i].x > lm[i - 1].x))
            bad.push_back("landmarks not strictly increasing at index " + std::to_string(i));
        const auto prev = lm[i - 1].kind, cur = lm[i].kind;
        const bool ok = (prev == LandmarkKind::fixed && cur == LandmarkKind::maximum) ||
                        (prev == LandmarkKind::maximum && cur == LandmarkKind::minimum) ||
                        (prev == LandmarkKind::minimum && cur == LandmarkKind::fixed) ||
                        (i == 1 && prev == LandmarkKind::fixed && cur == LandmarkKind::fixed);
        if (!ok)
            bad.push_back("unexpected landmark order at x = " + std::to_string(lm[i].x));
    }
    return bad;
}

inline CriticalPoints critical_points(const CoinParams& P, double xmax)
{
    CriticalPoints out;
    for (const auto& l : landmarks(P, xmax)) {
        if (l.x > xmax || l.x == 0.0)
            continue;
        if (l.kind == LandmarkKind::maximum)
            out.maxima.push_back(l.x);
        else if (l.kind == LandmarkKind::minimum)
            out.minima.push_back(l.x);
    }
    return out;
}

/// Maximal interval on which f is strictly monotone.
struct MonotoneBranch {
    double lo;
    double hi;
    bool increasing;
};

inline std::vector<MonotoneBranch> monotone_branches(std::span<const Landmark> lm)
{
    std::vector<MonotoneBranch> out;
    double start = 0.0;
    bool inc = true;
    for (const auto& l : lm) {
        if (l.kind == LandmarkKind::fixed)
            continue;
        out.push_back({start, l.x, inc});
        start = l.x;
        inc = l.kind == LandmarkKind::minimum;
    }
    return out;
}

namespace detail {

/// Unique x in [b.lo, b.hi] with f(x) = c, if any. Level values equal to a
/// branch end value (up to rounding) resolve to that end.
inline std::optional<double> branch_preimage(const CoinParams& P, const MonotoneBranch& b,
                                             double c, double lo, double hi)
{
    lo = std::max(lo, b.lo);
    hi = std::min(hi, b.hi);
    if (!(hi >= lo))
        return std::nullopt;
    const double flo = edge_map(P, lo) - c, fhi = edge_map(P, hi) - c;
    const double tiny = 1e-14 * std::max(1.0, std::abs(c));
    if (std::abs(flo) <= tiny)
        return lo;
    if (std::abs(fhi) <= tiny)
        return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        return std::nullopt;
    return bisect([&](double x) { return edge_map(P, x) - c; }, lo, hi, "level set");
}

} // namespace detail

/// All roots of f(x) = c in [lo, hi], found branch by branch.
inline std::vector<double> solve_level(const CoinParams& P, double c, Interval bracket)
{
    if (!(c >= 0.0))
        throw usage_error("level must be nonnegative");
    if (!(bracket.lo >= 0.0) || !(bracket.hi >= bracket.lo))
        throw usage_error("bracket must satisfy 0 <= lo <= hi");
    std::vector<double> roots;
    if (bracket.hi == 0.0) {
        if (c == 0.0)
            roots.push_back(0.0);
        return roots;
    }
    const auto lm = landmarks(P, bracket.hi);
    if (c == 0.0) {
        if (bracket.lo == 0.0)
            roots.push_back(0.0);
        for (const auto& l : lm)
            if (l.kind == LandmarkKind::minimum && bracket.contains(l.x))
                roots.push_back(l.x);
        return roots;
    }
    for (const auto& b : monotone_branches(lm)) {
        if (b.hi < bracket.lo || b.lo > bracket.hi)
            continue;
        if (auto r = detail::branch_preimage(P, b, c, bracket.lo, bracket.hi)) {
            if (!roots.empty() && std::abs(*r - roots.back()) <= 1e-12 * std::max(1.0, *r))
                continue;
            if (!(std::abs(edge_map(P, *r) - c) < 1e-10))
                throw numeric_error("level-set root failed residual check at x = " +
                                    std::to_string(*r));
            roots.push_back(*r);
        }
    }
    return roots;
}

/// Smallest y > x^(m) with f(y) = x^(m); it sits on the decreasing branch
/// right after x^(m).
inline double first_return_level(const CoinParams& P, int m)
{
    const double xm = fixed_point(P, m);
    const auto lm = landmarks(P, xm * (1.0 + 1e-12));
    for (const auto& b : monotone_branches(lm)) {
        if (b.increasing || b.lo <= xm)
            continue;
        if (auto r = detail::branch_preimage(P, b, xm, b.lo, b.hi))
            return *r;
        break;
    }
    throw numeric_error("no first-return level for fixed point " + std::to_string(m));
}

/// The interval family built from one-step preimages of the fixed point
/// x^(m) and its first-return level y^(m):
///   [x, y] u [x1, y1] u [y2, x2] u [x3, y3] u ...
/// where x_n solve f = x^(m) and y_n solve f = y^(m) beyond y^(m).
/// Orbits entering any of these reach [x^(m), y^(m)], which is forward
/// invariant. The full basin also contains multi-step preimages; see
/// BasinAtlas.
struct BasinDecomposition {
    int m = 0;
    double x_m = 0.0;
    double y_m = 0.0;
    std::vector<Interval> intervals;
    std::vector<double> preimages_of_x;  ///< P^(m), ascending
    std::vector<double> preimages_of_y;  ///< Q^(m), ascending
    std::vector<std::string> pattern_violations;
};

inline BasinDecomposition basin_intervals(const CoinParams& P, int m, double xmax)
{
    BasinDecomposition out;
    out.m = m;
    out.x_m = fixed_point(P, m);
    if (out.x_m > xmax)
        throw usage_error("fixed point x^(" + std::to_string(m) + ") = " +
                          std::to_string(out.x_m) + " lies beyond xmax");
    out.y_m = first_return_level(P, m);
    out.intervals.push_back({out.x_m, std::min(out.y_m, xmax)});
    if (out.y_m >= xmax)
        return out;

    const auto lm = landmarks(P, xmax);
    for (const auto& b : monotone_branches(lm)) {
        if (b.hi <= out.y_m || b.lo > xmax)
            continue;
        const double lo = std::max(b.lo, out.y_m * (1.0 + 1e-14));
        auto rx = detail::branch_preimage(P, b, out.x_m, lo, b.hi);
        auto ry = detail::branch_preimage(P, b, out.y_m, lo, b.hi);
        if (rx && *rx <= xmax)
            out.preimages_of_x.push_back(*rx);
        if (ry && *ry <= xmax)
            out.preimages_of_y.push_back(*ry);
        if (rx && ry) {
            Interval iv = b.increasing ? Interval{*rx, *ry} : Interval{*ry, *rx};
            if (iv.lo > xmax)
                continue;
            iv.hi = std::min(iv.hi, xmax);
            out.intervals.push_back(iv);
        } else if (rx || ry) {
            out.pattern_violations.push_back("branch [" + std::to_string(b.lo) + ", " +
                                             std::to_string(b.hi) +
                                             "] crosses only one of the two levels");
        }
    }

    // Compare the branch-wise assembly with the index pairing
    // [x1,y1], [y2,x2], [x3,y3], ... of the sorted preimage lists.
    const auto& xs = out.preimages_of_x;
    const auto& ys = out.preimages_of_y;
    const std::size_t n = std::min(xs.size(), ys.size());
    for (std::size_t i = 0; i < n; ++i) {
        const bool odd = (i % 2) == 0;
        const Interval expect = odd ? Interval{xs[i], ys[i]} : Interval{ys[i], xs[i]};
        if (i + 1 >= out.intervals.size() || !(expect.lo == out.intervals[i + 1].lo)) {
            out.pattern_violations.push_back("preimage ordering breaks the alternation at n = " +
                                             std::to_string(i + 1));
            break;
        }
        if (!(expect.lo <= expect.hi))
            out.pattern_violations.push_back("interval " + std::to_string(i + 1) +
                                             " has reversed endpoints");
    }
    for (const auto& iv : out.intervals) {
        for (double e : {iv.lo, iv.hi}) {
            if (e == xmax)
                continue;
            const double fe = edge_map(P, e);
            if (!(std::abs(fe - out.x_m) < 1e-10 || std::abs(fe - out.y_m) < 1e-10))
                out.pattern_violations.push_back("endpoint " + std::to_string(e) +
                                                 " does not map onto x^(m) or y^(m)");
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// Iteration oracle

enum class EdgeLimit { positive, zero, undecided };

inline const char* to_string(EdgeLimit l) noexcept
{
    switch (l) {
    case EdgeLimit::positive: return "positive";
    case EdgeLimit::zero: return "zero";
    case EdgeLimit::undecided: return "undecided";
    }
    return "?";
}

struct EdgeIterationOptions {
    std::int64_t max_steps = 1'000'000;
    double tol = 1e-14;       ///< stop when |r_{t+1} - r_t| < tol
    double eps_pos = 1e-8;    ///< limits at or below this count as zero
    bool certify = true;      ///< stop early on the trapping certificates below
    bool keep_series = true;
};

struct EdgeOrbit {
    std::vector<double> series;  ///< r_0, r_1, ... (empty unless keep_series)
    double last = 0.0;           ///< final iterate
    double limit = 0.0;
    EdgeLimit classification = EdgeLimit::undecided;
    int fixed_point_index = 0;   ///< m with limit x^(m), 0 otherwise
    std::int64_t steps = 0;
};

namespace detail {

// Half-neighbourhood (x*, x* + rho] of a tangent fixed point that f maps
// into itself: f(x* + e) = x* + e - x* k^2 e^2 + O(e^3), k = g p x*^{p-1},
// so f stays above x* and increasing while e << 1/(x* k^2).
inline double trapping_radius(const CoinParams& P, double xs)
{
    const double k = P.g() * P.p() * P.power(xs) / xs;
    return std::min(0.05 / (xs * k * k), 0.01 * xs);
}

} // namespace detail

/// Iterates the edge map from r0.
///
/// Termination: |r_{t+1} - r_t| < tol, or r_t <= eps_pos, or max_steps.
/// With `certify`, two exact shortcuts apply:
///   r_t below the smallest positive fixed point  => limit 0;
///   r_t in the trapping half-neighbourhood of x^(m) => limit x^(m).
/// Both follow from monotonicity of orbits. Convergence to a tangent fixed
/// point is algebraic (error ~ 1/t), so without the second certificate a
/// positive limit is typically undecided at any practical max_steps.
inline EdgeOrbit iterate_edge(const CoinParams& P, double r0, const EdgeIterationOptions& opt = {})
{
    if (!(r0 >= 0.0))
        throw usage_error("initial edge value must be nonnegative");
    if (opt.max_steps < 1 || !(opt.tol > 0.0))
        throw usage_error("iteration needs max_steps >= 1 and tol > 0");

    std::vector<double> fps;
    std::vector<double> radii;
    if (P.g() != 0.0 && r0 > 0.0) {
        for (int m = 1;; ++m) {
            const double x = fixed_point(P, m);
            if (x > r0)
                break;
            fps.push_back(x);
            radii.push_back(detail::trapping_radius(P, x));
        }
    }
    const double x1 = P.g() != 0.0 ? fixed_point(P, 1) : INFINITY;

    EdgeOrbit out;
    if (opt.keep_series)
        out.series.push_back(r0);
    auto nearest_fixed = [&](double r) {
        for (std::size_t i = 0; i < fps.size(); ++i)
            if (std::abs(r - fps[i]) <= 1e-6 * fps[i])
                return static_cast<int>(i) + 1;
        return 0;
    };
    // index of the largest fixed point strictly below r; orbits only go down
    std::ptrdiff_t below = static_cast<std::ptrdiff_t>(fps.size()) - 1;

    double r = r0;
    for (std::int64_t t = 1; t <= opt.max_steps; ++t) {
        const double rn = edge_map(P, r);
        if (opt.keep_series)
            out.series.push_back(rn);
        out.steps = t;
        out.last = rn;
        if (rn <= opt.eps_pos) {
            out.classification = EdgeLimit::zero;
            out.limit = 0.0;
            return out;
        }
        if (std::abs(rn - r) < opt.tol) {
            out.limit = rn;
            out.classification = EdgeLimit::positive;
            out.fixed_point_index = nearest_fixed(rn);
            return out;
        }
        if (opt.certify) {
            if (rn < x1) {
                out.classification = EdgeLimit::zero;
                out.limit = 0.0;
                return out;
            }
            while (below >= 0 && !(fps[static_cast<std::size_t>(below)] < rn))
                --below;
            if (below >= 0) {
                const auto i = static_cast<std::size_t>(below);
                if (rn - fps[i] <= radii[i]) {
                    out.classification = EdgeLimit::positive;
                    out.limit = fps[i];
                    out.fixed_point_index = static_cast<int>(i) + 1;
                    return out;
                }
            }
        }
        r = rn;
    }
    out.limit = r;
    out.classification = EdgeLimit::undecided;
    return out;
}

// --------------------------------------------------------------------------
// Complete basin atlas

/// Label of an atlas segment.
///  inside(m): every orbit from here converges to x^(m)
///  outside:   every orbit decays to 0
///  dense:     basin endpoints are packed closer than `spacing`
struct AtlasSegment {
    enum class Kind { outside, inside, dense };
    double lo;
    double hi;
    Kind kind;
    int m = 0;
    double spacing = 0.0;

    [[nodiscard]] bool same_label(const AtlasSegment& o) const noexcept
    {
        return kind == o.kind && (kind != Kind::inside || m == o.m);
    }
};

enum class MembershipKind { inside, outside, boundary, unresolved };

struct Membership {
    MembershipKind kind;
    int m = 0;  ///< basin index when inside
    friend bool operator==(const Membership&, const Membership&) = default;
};

struct AtlasOptions {
    /// Sub-segments narrower than this are folded into dense segments, and
    /// accumulation towards a fixed point from below is cut off once one
    /// fundamental domain is this short.
    double resolution = 1e-7;
};

/// Exact partition of [0, xmax] by limit of the edge-map orbit.
///
/// Built left to right. Since f(x) <= x, the label of x is the label of
/// f(x) < x: on each monotone branch the already-labelled part of [0, K] is
/// pulled back through the branch inverse. Cores [x^(m), y^(m)] are forward
/// invariant and seeded directly. Below each tangent fixed point the sweep
/// advances one fundamental domain [f^{-1}(K) > K] at a time; preimages
/// accumulate there, and the remainder is closed off as one segment once
/// a domain is shorter than the resolution.
class BasinAtlas {
public:
    static BasinAtlas build(const CoinParams& P, double xmax, const AtlasOptions& opt = {})
    {
        if (!(xmax > 0.0))
            throw usage_error("atlas needs xmax > 0");
        BasinAtlas a;
        a.params_ = P;
        a.xmax_ = xmax;
        a.resolution_ = opt.resolution;
        a.sweep();
        return a;
    }

    [[nodiscard]] std::span<const AtlasSegment> segments() const noexcept { return segs_; }
    [[nodiscard]] double xmax() const noexcept { return xmax_; }
    [[nodiscard]] const CoinParams& params() const noexcept { return params_; }

    [[nodiscard]] Membership classify(double r0, double guard) const
    {
        if (!(r0 >= 0.0) || r0 > xmax_)
            throw usage_error("query outside atlas range [0, xmax]");
        if (!(guard > 0.0))
            throw usage_error("guard must be positive");
        auto it = std::upper_bound(segs_.begin(), segs_.end(), r0,
                                   [](double v, const AtlasSegment& s) { return v < s.lo; });
        const std::size_t i = it == segs_.begin() ? 0 : static_cast<std::size_t>(it - segs_.begin()) - 1;
        const auto& s = segs_[i];
        const bool near_lo = i > 0 && r0 - s.lo < guard;
        const bool near_hi = i + 1 < segs_.size() && s.hi - r0 < guard;
        if (near_lo || near_hi)
            return {MembershipKind::boundary};
        switch (s.kind) {
        case AtlasSegment::Kind::inside: return {MembershipKind::inside, s.m};
        case AtlasSegment::Kind::outside: return {MembershipKind::outside};
        case AtlasSegment::Kind::dense:
            return {s.spacing <= guard ? MembershipKind::boundary : MembershipKind::unresolved};
        }
        return {MembershipKind::unresolved};
    }

private:
    using Kind = AtlasSegment::Kind;

    void push(AtlasSegment s)
    {
        if (!(s.hi > s.lo))
            return;
        if (!segs_.empty()) {
            auto& back = segs_.back();
            s.lo = back.hi;  // keep the partition contiguous
            if (back.same_label(s)) {
                back.hi = s.hi;
                back.spacing = std::max(back.spacing, s.spacing);
                return;
            }
        }
        segs_.push_back(s);
    }

    // Appends a block of freshly pulled-back segments, folding runs of
    // segments narrower than the resolution into dense segments.
    void push_block(std::vector<AtlasSegment>& block)
    {
        std::size_t i = 0;
        while (i < block.size()) {
            const double w = block[i].hi - block[i].lo;
            if (w >= resolution_ || block[i].kind == Kind::dense) {
                push(block[i]);
                ++i;
                continue;
            }
            std::size_t j = i;
            double spacing = 0.0;
            while (j < block.size() && block[j].hi - block[j].lo < resolution_) {
                spacing = std::max(spacing, block[j].kind == Kind::dense
                                                ? block[j].spacing
                                                : block[j].hi - block[j].lo);
                ++j;
            }
            push({block[i].lo, block[j - 1].hi, Kind::dense, 0, spacing});
            i = j;
        }
    }

    // Labels of [a, b] on monotone branch `br`, pulled back from [0, a].
    void pull_back(const MonotoneBranch& br, double a, double b)
    {
        const CoinParams& P = params_;
        const double fa = edge_map(P, a), fb = edge_map(P, b);
        const double ilo = std::min(fa, fb), ihi = std::max(fa, fb);

        // image segments overlapping [ilo, ihi]
        auto first = std::upper_bound(segs_.begin(), segs_.end(), ilo,
                                      [](double v, const AtlasSegment& s) { return v < s.lo; });
        if (first != segs_.begin())
            --first;
        std::vector<AtlasSegment> image;
        for (auto it = first; it != segs_.end() && it->lo < ihi; ++it) {
            AtlasSegment s = *it;
            s.lo = std::max(s.lo, ilo);
            s.hi = std::min(s.hi, ihi);
            if (s.hi > s.lo || image.empty())
                image.push_back(s);
        }
        if (image.empty())
            throw numeric_error("atlas sweep: image of [" + std::to_string(a) + ", " +
                                std::to_string(b) + "] is not labelled yet");

        // preimage of every interior breakpoint, in x order
        std::vector<AtlasSegment> block;
        block.reserve(image.size());
        double prev_x = a;
        auto emit = [&](const AtlasSegment& lab, double x0, double x1, double v0, double v1) {
            AtlasSegment s = lab;
            s.lo = x0;
            s.hi = x1;
            if (s.kind == Kind::dense) {
                const double dv = std::abs(v1 - v0);
                double stretch = dv > 0.0 ? (x1 - x0) / dv : INFINITY;
                for (double x : {x0, x1}) {
                    const double d = std::abs(edge_map_derivative(P, x));
                    stretch = std::max(stretch, d > 0.0 ? 1.0 / d : INFINITY);
                }
                s.spacing = lab.spacing * stretch;
            }
            block.push_back(s);
        };
        const std::size_t n = image.size();
        for (std::size_t k = 0; k < n; ++k) {
            // walk the image from the end that f(a) sits on
            const auto& lab = br.increasing ? image[k] : image[n - 1 - k];
            const double vnext = br.increasing ? lab.hi : lab.lo;
            const double vprev = br.increasing ? lab.lo : lab.hi;
            double x_next = b;
            if (k + 1 < n) {
                auto r = detail::branch_preimage(P, {a, b, br.increasing}, vnext, a, b);
                if (!r)
                    throw numeric_error("atlas sweep: lost a breakpoint preimage");
                x_next = std::max(*r, prev_x);
            }
            emit(lab, prev_x, x_next, vprev, vnext);
            prev_x = x_next;
        }
        push_block(block);
    }

    void sweep()
    {
        const CoinParams& P = params_;
        const double xmax = xmax_;
        if (P.g() == 0.0) {
            push({0.0, xmax, Kind::outside});
            return;
        }
        const auto lm = landmarks(P, xmax);
        const auto branches = monotone_branches(lm);

        const double x1 = fixed_point(P, 1);
        push({0.0, std::min(x1, xmax), Kind::outside});
        if (x1 >= xmax)
            return;
        int m = 1;
        double K = seed_core(m, x1);

        std::size_t bi = 0;
        while (K < xmax) {
            while (bi < branches.size() && !(K < branches[bi].hi))
                ++bi;
            if (bi == branches.size())
                throw numeric_error("atlas sweep ran past the computed landmarks");
            const auto& br = branches[bi];
            const double next_fixed = fixed_point(P, m + 1);
            const bool approaching = br.increasing && next_fixed > K && next_fixed < br.hi;
            if (approaching) {
                K = accumulate_below(br, K, next_fixed);
                if (K >= xmax)
                    break;
                ++m;
                K = seed_core(m, next_fixed);
                continue;
            }
            double Kn = br.hi;
            if (br.increasing && edge_map(P, br.hi) > K) {
                auto r = detail::branch_preimage(P, br, K, K, br.hi);
                if (!r)
                    throw numeric_error("atlas sweep: no preimage on increasing branch");
                Kn = *r;
            }
            Kn = std::min(Kn, xmax);
            if (!(Kn > K))
                throw numeric_error("atlas sweep stalled at x = " + std::to_string(K));
            pull_back(br, K, Kn);
            K = Kn;
        }
        if (!segs_.empty())
            segs_.back().hi = xmax;
    }

    double seed_core(int m, double xm)
    {
        const double ym = first_return_level(params_, m);
        push({xm, std::min(ym, xmax_), Kind::inside, m});
        return ym;
    }

    // Sweeps [K, x*) on an increasing branch whose tangent fixed point x*
    // is approached from below. Returns x* (or xmax if that comes first).
    double accumulate_below(const MonotoneBranch& br, double K, double xs)
    {
        const CoinParams& P = params_;
        for (;;) {
            const double target = std::min(xs, xmax_);
            auto r = detail::branch_preimage(P, br, K, K, xs);
            double Kn = r ? std::min(*r, xs) : xs;
            const bool last = Kn - K < resolution_ || Kn >= target;
            if (Kn > target)
                Kn = target;
            if (Kn > K) {
                const std::size_t before = segs_.size();
                const Kind before_kind = segs_.back().kind;
                const int before_m = segs_.back().m;
                pull_back(br, K, Kn);
                if (last && Kn < xs && xs <= xmax_) {
                    // Close off [Kn, x*): every further domain is a copy of
                    // [K, Kn] under the branch inverse.
                    const bool uniform = segs_.size() == before && segs_.back().kind == before_kind &&
                                         segs_.back().m == before_m;
                    AtlasSegment rest = uniform ? segs_.back() : AtlasSegment{};
                    if (!uniform) {
                        rest.kind = Kind::dense;
                        rest.spacing = Kn - K;
                    }
                    rest.lo = Kn;
                    rest.hi = xs;
                    push(rest);
                    return xs;
                }
            }
            if (last || Kn >= target)
                return Kn >= xs ? xs : std::max(Kn, target);
            K = Kn;
        }
    }

    CoinParams params_{};
    double xmax_ = 0.0;
    double resolution_ = 1e-7;
    std::vector<AtlasSegment> segs_;
};

/// Basin membership of r0 against the full atlas on [0, r0 + 2 guard].
/// Boundary: within guard of an endpoint, where no claim is made.
inline Membership in_basin(const CoinParams& P, double r0, double guard = 1e-6)
{
    if (!(r0 >= 0.0))
        throw usage_error("initial edge value must be nonnegative");
    const auto atlas = BasinAtlas::build(P, r0 + 2.0 * guard + 1e-12);
    return atlas.classify(r0, guard);
}

} // namespace nlqw
