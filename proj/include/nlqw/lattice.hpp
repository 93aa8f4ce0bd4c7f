#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"

namespace nlqw {

using amplitude = std::complex<double>;
using site_t = std::int64_t;

/// Internal degree of freedom. Component one moves left under the shift,
/// component two moves right.
enum class Component : int { one = 1, two = 2 };

inline Component component_from_index(int j)
{
    if (j != 1 && j != 2)
        throw usage_error("component index must be 1 or 2, got " + std::to_string(j));
    return static_cast<Component>(j);
}

constexpr int index_of(Component c) noexcept { return static_cast<int>(c); }

struct Spinor {
    amplitude c1{};
    amplitude c2{};

    /// |c1|^2 + |c2|^2
    [[nodiscard]] double norm_sq() const noexcept { return std::norm(c1) + std::norm(c2); }

    [[nodiscard]] bool is_zero() const noexcept
    {
        return c1 == amplitude{} && c2 == amplitude{};
    }

    [[nodiscard]] const amplitude& operator[](Component c) const noexcept
    {
        return c == Component::one ? c1 : c2;
    }
    amplitude& operator[](Component c) noexcept { return c == Component::one ? c1 : c2; }

    friend bool operator==(const Spinor&, const Spinor&) = default;
};

struct SupportBounds {
    site_t lo;
    site_t hi;
    friend bool operator==(const SupportBounds&, const SupportBounds&) = default;
};

/// Read-only view on a contiguous window of lattice cells.
///
/// Cells outside [origin, origin + size - 1] are zero. Views are what the
/// evolution hands to observers; SpinorField owns its storage.
class FieldView {
public:
    constexpr FieldView() = default;
    constexpr FieldView(site_t origin, std::span<const Spinor> cells, std::int64_t time) noexcept
        : origin_(origin), cells_(cells), time_(time)
    {
    }

    [[nodiscard]] site_t origin() const noexcept { return origin_; }
    [[nodiscard]] std::int64_t time() const noexcept { return time_; }
    [[nodiscard]] std::span<const Spinor> cells() const noexcept { return cells_; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }
    [[nodiscard]] bool contains(site_t x) const noexcept
    {
        return x >= origin_ && x < origin_ + static_cast<site_t>(cells_.size());
    }

    [[nodiscard]] Spinor at(site_t x) const noexcept
    {
        return contains(x) ? cells_[static_cast<std::size_t>(x - origin_)] : Spinor{};
    }

    [[nodiscard]] double site_norm_sq(site_t x) const noexcept { return at(x).norm_sq(); }

    [[nodiscard]] double l2_norm() const noexcept
    {
        double sum = 0.0;
        for (const auto& s : cells_)
            sum += s.norm_sq();
        return std::sqrt(sum);
    }

    [[nodiscard]] double linf_norm() const noexcept
    {
        double best = 0.0;
        for (const auto& s : cells_)
            best = std::max(best, s.norm_sq());
        return std::sqrt(best);
    }

    /// Tight bounds of the nonzero sites. Exact zero test, no epsilon.
    [[nodiscard]] std::optional<SupportBounds> support_bounds() const noexcept
    {
        std::size_t first = 0;
        while (first < cells_.size() && cells_[first].is_zero())
            ++first;
        if (first == cells_.size())
            return std::nullopt;
        std::size_t last = cells_.size() - 1;
        while (cells_[last].is_zero())
            --last;
        return SupportBounds{origin_ + static_cast<site_t>(first),
                             origin_ + static_cast<site_t>(last)};
    }

private:
    site_t origin_ = 0;
    std::span<const Spinor> cells_{};
    std::int64_t time_ = 0;
};

/// The walker state: a finite window of two-component amplitudes on Z.
class SpinorField {
public:
    SpinorField() = default;
    SpinorField(site_t origin, std::vector<Spinor> cells, std::int64_t time = 0)
        : origin_(origin), cells_(std::move(cells)), time_(time)
    {
    }
    explicit SpinorField(const FieldView& v)
        : origin_(v.origin()), cells_(v.cells().begin(), v.cells().end()), time_(v.time())
    {
    }

    [[nodiscard]] FieldView view() const noexcept { return {origin_, cells_, time_}; }
    operator FieldView() const noexcept { return view(); } // NOLINT

    [[nodiscard]] site_t origin() const noexcept { return origin_; }
    [[nodiscard]] std::int64_t time() const noexcept { return time_; }
    void set_time(std::int64_t t) noexcept { time_ = t; }
    [[nodiscard]] std::span<const Spinor> cells() const noexcept { return cells_; }
    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }

    [[nodiscard]] Spinor at(site_t x) const noexcept { return view().at(x); }
    [[nodiscard]] double site_norm_sq(site_t x) const noexcept { return view().site_norm_sq(x); }
    [[nodiscard]] double l2_norm() const noexcept { return view().l2_norm(); }
    [[nodiscard]] double linf_norm() const noexcept { return view().linf_norm(); }
    [[nodiscard]] std::optional<SupportBounds> support_bounds() const noexcept
    {
        return view().support_bounds();
    }
    [[nodiscard]] bool is_zero() const noexcept { return !support_bounds().has_value(); }

    /// Copy restricted to the support; the zero field becomes an empty window at 0.
    [[nodiscard]] SpinorField trimmed() const
    {
        auto b = support_bounds();
        if (!b)
            return SpinorField{0, {}, time_};
        auto first = cells_.begin() + (b->lo - origin_);
        auto last = cells_.begin() + (b->hi - origin_) + 1;
        return SpinorField{b->lo, std::vector<Spinor>(first, last), time_};
    }

    /// Grows the window as needed and writes one cell.
    void set(site_t x, const Spinor& s)
    {
        if (cells_.empty()) {
            origin_ = x;
            cells_.push_back(s);
            return;
        }
        if (x < origin_) {
            cells_.insert(cells_.begin(), static_cast<std::size_t>(origin_ - x), Spinor{});
            origin_ = x;
        } else if (x >= origin_ + static_cast<site_t>(cells_.size())) {
            cells_.resize(static_cast<std::size_t>(x - origin_ + 1));
        }
        cells_[static_cast<std::size_t>(x - origin_)] = s;
    }

private:
    site_t origin_ = 0;
    std::vector<Spinor> cells_;
    std::int64_t time_ = 0;
};

/// a * delta_{j,x}
inline SpinorField point_source(site_t x, Component j, amplitude a)
{
    Spinor s;
    s[j] = a;
    return SpinorField{x, {s}};
}

inline SpinorField point_source(site_t x, int j, amplitude a)
{
    return point_source(x, component_from_index(j), a);
}

/// Pointwise sum. The result carries the time stamp of the first operand.
inline SpinorField superpose(std::span<const SpinorField> fields)
{
    if (fields.empty())
        return {};
    site_t lo = 0, hi = -1;
    bool any = false;
    for (const auto& f : fields) {
        if (f.size() == 0)
            continue;
        const site_t flo = f.origin();
        const site_t fhi = f.origin() + static_cast<site_t>(f.size()) - 1;
        lo = any ? std::min(lo, flo) : flo;
        hi = any ? std::max(hi, fhi) : fhi;
        any = true;
    }
    if (!any)
        return SpinorField{0, {}, fields.front().time()};
    std::vector<Spinor> cells(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& f : fields) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            auto& dst = cells[static_cast<std::size_t>(f.origin() - lo) + i];
            dst.c1 += f.cells()[i].c1;
            dst.c2 += f.cells()[i].c2;
        }
    }
    return SpinorField{lo, std::move(cells), fields.front().time()}.trimmed();
}

inline SpinorField superpose(std::initializer_list<SpinorField> fields)
{
    return superpose(std::span<const SpinorField>(fields.begin(), fields.size()));
}

/// Largest per-site component difference between two fields.
inline double sup_difference(const FieldView& a, const FieldView& b)
{
    site_t lo = std::min(a.origin(), b.origin());
    site_t hi = std::max(a.origin() + static_cast<site_t>(a.size()),
                         b.origin() + static_cast<site_t>(b.size()));
    double d = 0.0;
    for (site_t x = lo; x < hi; ++x) {
        const Spinor sa = a.at(x), sb = b.at(x);
        d = std::max({d, std::abs(sa.c1 - sb.c1), std::abs(sa.c2 - sb.c2)});
    }
    return d;
}

inline SpinorField translate(const SpinorField& f, site_t by)
{
    return SpinorField{f.origin() + by, std::vector<Spinor>(f.cells().begin(), f.cells().end()),
                       f.time()};
}

inline SpinorField scale(const SpinorField& f, double factor)
{
    std::vector<Spinor> cells(f.cells().begin(), f.cells().end());
    for (auto& s : cells) {
        s.c1 *= factor;
        s.c2 *= factor;
    }
    return SpinorField{f.origin(), std::move(cells), f.time()};
}

} // namespace nlqw
