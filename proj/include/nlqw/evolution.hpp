#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coin.hpp"
#include "error.hpp"
#include "lattice.hpp"

namespace nlqw {

inline constexpr std::size_t default_max_window = 2'000'000;

/// (S u)(x) = (u1(x+1), u2(x-1))
inline SpinorField shift(const SpinorField& F)
{
    if (F.size() == 0)
        return F;
    const std::size_t n = F.size();
    std::vector<Spinor> out(n + 2);
    for (std::size_t k = 0; k < n; ++k) {
        out[k].c1 = F.cells()[k].c1;
        out[k + 2].c2 = F.cells()[k].c2;
    }
    return SpinorField{F.origin() - 1, std::move(out), F.time()}.trimmed();
}

/// Double-buffered stepping kernel for U = S C.
///
/// The window tracks the support exactly: each step widens it by one cell
/// per side, then exact-zero cells are dropped from both ends. Exceeding
/// the configured maximum window is a hard error.
class Evolver {
public:
    Evolver(const CoinParams& P, const SpinorField& initial,
            std::size_t max_window = default_max_window)
        : params_(P), max_window_(max_window), time_(initial.time())
    {
        const SpinorField t = initial.trimmed();
        if (t.size() > max_window_)
            throw numeric_error("initial field exceeds the maximum window");
        cur_.assign(t.cells().begin(), t.cells().end());
        origin_ = t.origin();
        len_ = cur_.size();
    }

    /// Preallocates both buffers for `steps` further steps.
    void reserve_steps(std::int64_t steps)
    {
        const std::size_t want =
            std::min(len_ + 2 * static_cast<std::size_t>(std::max<std::int64_t>(steps, 0)),
                     max_window_);
        cur_.reserve(want + begin_);
        next_.reserve(want);
    }

    void advance()
    {
        ++time_;
        if (len_ == 0)
            return;
        if (len_ + 2 > max_window_)
            throw numeric_error("window capacity exceeded at t = " + std::to_string(time_) +
                                " (max " + std::to_string(max_window_) + " sites)");
        next_.resize(std::max(next_.size(), len_ + 2));
        const Spinor* src = cur_.data() + begin_;
        Spinor* dst = next_.data();
        dst[0].c2 = dst[1].c2 = amplitude{};
        dst[len_].c1 = dst[len_ + 1].c1 = amplitude{};
        for (std::size_t k = 0; k < len_; ++k) {
            const Spinor r = detail::coin_site(params_, src[k]);
            dst[k].c1 = r.c1;
            dst[k + 2].c2 = r.c2;
        }
        swap_and_trim(origin_ - 1, len_ + 2);
    }

    /// Exact inverse of advance(): the coin keeps every site norm, so the
    /// forward angle is recovered from the post-coin state.
    void retreat()
    {
        --time_;
        if (len_ == 0)
            return;
        if (len_ + 2 > max_window_)
            throw numeric_error("window capacity exceeded while stepping back");
        next_.resize(std::max(next_.size(), len_ + 2));
        const Spinor* src = cur_.data() + begin_;
        Spinor* dst = next_.data();
        dst[0].c1 = dst[1].c1 = amplitude{};
        dst[len_].c2 = dst[len_ + 1].c2 = amplitude{};
        for (std::size_t k = 0; k < len_; ++k) {
            dst[k + 2].c1 = src[k].c1;
            dst[k].c2 = src[k].c2;
        }
        for (std::size_t k = 0; k < len_ + 2; ++k)
            dst[k] = detail::uncoin_site(params_, dst[k]);
        swap_and_trim(origin_ - 1, len_ + 2);
    }

    [[nodiscard]] FieldView view() const noexcept
    {
        return {origin_, std::span<const Spinor>(cur_.data() + begin_, len_), time_};
    }
    [[nodiscard]] SpinorField field() const { return SpinorField{view()}; }
    [[nodiscard]] std::int64_t time() const noexcept { return time_; }
    [[nodiscard]] const CoinParams& params() const noexcept { return params_; }

private:
    void swap_and_trim(site_t origin, std::size_t len)
    {
        std::swap(cur_, next_);
        std::size_t first = 0;
        while (first < len && cur_[first].is_zero())
            ++first;
        if (first == len) {
            begin_ = 0;
            len_ = 0;
            origin_ = origin;
            return;
        }
        std::size_t last = len - 1;
        while (cur_[last].is_zero())
            --last;
        begin_ = first;
        len_ = last - first + 1;
        origin_ = origin + static_cast<site_t>(first);
    }

    CoinParams params_;
    std::size_t max_window_;
    std::vector<Spinor> cur_;
    std::vector<Spinor> next_;
    std::size_t begin_ = 0;
    std::size_t len_ = 0;
    site_t origin_ = 0;
    std::int64_t time_ = 0;
};

inline SpinorField step(const CoinParams& P, const SpinorField& F)
{
    Evolver ev(P, F);
    ev.advance();
    return ev.field();
}

inline SpinorField step_back(const CoinParams& P, const SpinorField& F)
{
    Evolver ev(P, F);
    ev.retreat();
    return ev.field();
}

/// Called after every step with the post-shift state (time already advanced).
using Recorder = std::function<void(const FieldView&)>;

inline SpinorField evolve(const CoinParams& P, const SpinorField& F, std::int64_t steps,
                          const Recorder& recorder = {},
                          std::size_t max_window = default_max_window)
{
    if (steps < 0)
        throw usage_error("number of steps must be nonnegative");
    Evolver ev(P, F, max_window);
    ev.reserve_steps(steps);
    for (std::int64_t t = 0; t < steps; ++t) {
        ev.advance();
        if (recorder)
            recorder(ev.view());
    }
    return ev.field();
}

struct Observation {
    std::int64_t time;
    double linf;
    double l2;
    std::optional<SpinorField> snapshot;
};

struct Trajectory {
    CoinParams params;
    SpinorField initial;
    std::vector<Observation> recorded;
};

/// Evolves and keeps (t, l-inf, l2) every `record_every` steps, starting at
/// t = 0, plus full snapshots at the requested times.
inline Trajectory record_trajectory(const CoinParams& P, const SpinorField& F,
                                    std::int64_t steps, std::int64_t record_every = 1,
                                    const std::vector<std::int64_t>& snapshot_times = {},
                                    std::size_t max_window = default_max_window)
{
    if (record_every < 1)
        throw usage_error("record interval must be >= 1");
    const std::set<std::int64_t> snaps(snapshot_times.begin(), snapshot_times.end());
    Trajectory tr{P, F, {}};
    auto observe = [&](const FieldView& v) {
        const std::int64_t t = v.time() - F.time();
        const bool snap = snaps.contains(t);
        if (t % record_every != 0 && !snap)
            return;
        Observation o{t, v.linf_norm(), v.l2_norm(), std::nullopt};
        if (snap)
            o.snapshot = SpinorField{v};
        tr.recorded.push_back(std::move(o));
    };
    observe(F.view());
    evolve(P, F, steps, observe, max_window);
    return tr;
}

struct GaugeTransform {
    SpinorField field;  ///< |g|^{1/(2p)} * F
    double prefactor;   ///< |g|^{-1/(2p)}
    CoinParams target;  ///< sign(g), same p
};

/// Maps evolution under strength g onto evolution under sign(g):
/// evolve(g, F, T) == prefactor * evolve(sign(g), field, T).
inline GaugeTransform gauge_rescale(double g, double p, const SpinorField& F)
{
    if (g == 0.0)
        throw usage_error("gauge rescaling needs g != 0");
    const CoinParams target{g > 0.0 ? 1.0 : -1.0, p};
    const double c = std::pow(std::abs(g), 1.0 / (2.0 * p));
    return {scale(F, c), 1.0 / c, target};
}

} // namespace nlqw
