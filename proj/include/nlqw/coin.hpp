#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "error.hpp"
#include "lattice.hpp"

namespace nlqw {

inline constexpr double quarter_pi = std::numbers::pi / 4.0;

/// Nonlinearity of the rotation coin R(pi/4 + g s^p).
class CoinParams {
public:
    constexpr CoinParams() = default;
    CoinParams(double g, double p) : g_(g), p_(p)
    {
        if (!std::isfinite(g))
            throw usage_error("coin strength g must be finite");
        if (!std::isfinite(p) || p < 1.0)
            throw usage_error("coin exponent p must be >= 1, got " + std::to_string(p));
    }

    [[nodiscard]] constexpr double g() const noexcept { return g_; }
    [[nodiscard]] constexpr double p() const noexcept { return p_; }

    /// s^p with exact fast paths for p = 1, 2 and 0^p = 0.
    [[nodiscard]] double power(double s) const noexcept
    {
        if (p_ == 1.0)
            return s;
        if (p_ == 2.0)
            return s * s;
        if (s == 0.0)
            return 0.0;
        return std::exp(p_ * std::log(s));
    }

    friend bool operator==(const CoinParams&, const CoinParams&) = default;

private:
    double g_ = 1.0;
    double p_ = 1.0;
};

inline const CoinParams coin_plus{1.0, 1.0};
inline const CoinParams coin_minus{-1.0, 1.0};

struct RotationAngle {
    double radians = 0.0;
};

inline RotationAngle rotation_angle(const CoinParams& P, double s)
{
    if (!(s >= 0.0))
        throw usage_error("squared site norm must be nonnegative");
    return {quarter_pi + P.g() * P.power(s)};
}

inline Spinor rotate(double cos_t, double sin_t, const Spinor& v) noexcept
{
    return {cos_t * v.c1 - sin_t * v.c2, sin_t * v.c1 + cos_t * v.c2};
}

inline Spinor rotate(RotationAngle theta, const Spinor& v) noexcept
{
    return rotate(std::cos(theta.radians), std::sin(theta.radians), v);
}

namespace detail {

// Angles are not reduced mod 2pi; s is bounded by the total l2 mass.
inline Spinor coin_site(const CoinParams& P, const Spinor& v) noexcept
{
    const double s = v.norm_sq();
    if (s == 0.0)
        return v;
    const double theta = quarter_pi + P.g() * P.power(s);
    return rotate(std::cos(theta), std::sin(theta), v);
}

inline Spinor uncoin_site(const CoinParams& P, const Spinor& v) noexcept
{
    const double s = v.norm_sq();
    if (s == 0.0)
        return v;
    const double theta = quarter_pi + P.g() * P.power(s);
    return rotate(std::cos(theta), -std::sin(theta), v);
}

} // namespace detail

inline void apply_coin_inplace(const CoinParams& P, std::span<Spinor> cells) noexcept
{
    for (auto& c : cells)
        c = detail::coin_site(P, c);
}

inline SpinorField apply_coin(const CoinParams& P, const SpinorField& F)
{
    std::vector<Spinor> cells(F.cells().begin(), F.cells().end());
    apply_coin_inplace(P, cells);
    return SpinorField{F.origin(), std::move(cells), F.time()};
}

} // namespace nlqw
