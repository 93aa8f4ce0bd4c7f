#include <catch_amalgamated.hpp>

#include <nlqw/evolution.hpp>

#include "oracles.hpp"
#include "support.hpp"

using namespace nlqw;
using Catch::Matchers::WithinAbs;

namespace {

SpinorField random_field(std::mt19937_64& rng, site_t lo, int n, double scale)
{
    std::normal_distribution<double> N(0.0, scale);
    std::vector<Spinor> cells(static_cast<std::size_t>(n));
    for (auto& c : cells)
        c = {{N(rng), N(rng)}, {N(rng), N(rng)}};
    return SpinorField{lo, cells};
}

} // namespace

TEST_CASE("shift moves component 1 left and component 2 right")
{
    const auto s = shift(superpose({point_source(0, 1, 1.0), point_source(0, 2, 2.0)}));
    CHECK(s.at(-1).c1 == amplitude{1.0});
    CHECK(s.at(1).c2 == amplitude{2.0});
    CHECK(s.at(0).is_zero());
}

TEST_CASE("first step from delta_{1,0}")
{
    // C- at s = 1: angle pi/4 - 1
    const auto u1 = step(coin_minus, point_source(0, 1, 1.0));
    const double th = quarter_pi - 1.0;
    CHECK_THAT(u1.at(-1).c1.real(), WithinAbs(std::cos(th), 1e-15));
    CHECK_THAT(u1.at(1).c2.real(), WithinAbs(std::sin(th), 1e-15));
    CHECK(u1.time() == 1);
    CHECK(u1.at(0).is_zero());
}

TEST_CASE("stepping kernel agrees with the map-based oracle")
{
    auto rng = nlqw_test::rng(21);
    for (const auto& P : {coin_plus, coin_minus, CoinParams{0.7, 2.0}, CoinParams{-1.3, 1.5}}) {
        const auto u0 = random_field(rng, -5, 9, 0.4);
        auto ref = oracle::from(u0);
        Evolver ev(P, u0);
        for (int t = 0; t < 200; ++t) {
            ev.advance();
            ref = oracle::step(ref, P.g(), P.p());
        }
        CHECK(oracle::sup_diff(ref, ev.view()) < 1e-12);
    }
}

TEST_CASE("evolve fires the recorder after every shift")
{
    std::vector<std::int64_t> times;
    const auto out = evolve(coin_plus, point_source(0, 1, 1.0), 5,
                            [&](const FieldView& v) { times.push_back(v.time()); });
    CHECK(times == std::vector<std::int64_t>{1, 2, 3, 4, 5});
    CHECK(out.time() == 5);
    CHECK_THROWS_AS(evolve(coin_plus, point_source(0, 1, 1.0), -1), usage_error);
    CHECK(evolve(coin_plus, point_source(0, 1, 1.0), 0).at(0).c1 == amplitude{1.0});
}

TEST_CASE("l-inf at t = 10^4 from delta_{1,0}")
{
    // Frozen from the map-based oracle run once at full length.
    const auto plus = evolve(coin_plus, point_source(0, 1, 1.0), 10'000);
    const auto minus = evolve(coin_minus, point_source(0, 1, 1.0), 10'000);
    CHECK_THAT(plus.linf_norm(), WithinAbs(0.8862564537689067, 1e-10));
    CHECK_THAT(minus.linf_norm(), WithinAbs(0.8862985769277925, 1e-10));
    CHECK_THAT(plus.linf_norm(), WithinAbs(0.886256, 1e-4));
    CHECK_THAT(minus.linf_norm(), WithinAbs(0.886299, 1e-4));
    CHECK(plus.size() <= 20'001);
}

TEST_CASE("retreat inverts advance")
{
    auto rng = nlqw_test::rng(22);
    const auto u0 = random_field(rng, 0, 6, 0.3);
    Evolver ev(coin_minus, u0);
    for (int t = 0; t < 50; ++t)
        ev.advance();
    for (int t = 0; t < 50; ++t)
        ev.retreat();
    CHECK(ev.time() == 0);
    CHECK(sup_difference(ev.view(), u0) < 1e-12);
    CHECK(sup_difference(step_back(coin_plus, step(coin_plus, u0)), u0) < 1e-14);
}

TEST_CASE("window overflow is a numeric error")
{
    CHECK_THROWS_AS(evolve(coin_plus, point_source(0, 1, 1.0), 100, {}, 50), numeric_error);
}

TEST_CASE("record_trajectory keeps t = 0, the stride and the snapshots")
{
    const auto tr = record_trajectory(coin_plus, point_source(0, 1, 1.0), 10, 4, {3, 10});
    std::vector<std::int64_t> times;
    for (const auto& o : tr.recorded)
        times.push_back(o.time);
    CHECK(times == std::vector<std::int64_t>{0, 3, 4, 8, 10});
    CHECK(tr.recorded[1].snapshot.has_value());
    CHECK_FALSE(tr.recorded[2].snapshot.has_value());
    CHECK(tr.recorded[4].snapshot->time() == 10);
    CHECK_THAT(tr.recorded[0].linf, WithinAbs(1.0, 0));
    CHECK_THROWS_AS(record_trajectory(coin_plus, point_source(0, 1, 1.0), 3, 0), usage_error);
}

TEST_CASE("gauge rescale maps strength g onto sign(g)")
{
    auto rng = nlqw_test::rng(23);
    for (double p : {1.0, 2.0}) {
        for (double g : {2.5, -0.4}) {
            const auto u0 = random_field(rng, -2, 5, 0.3);
            const auto gt = gauge_rescale(g, p, u0);
            CHECK(gt.target.g() == (g > 0 ? 1.0 : -1.0));
            const auto direct = evolve(CoinParams{g, p}, u0, 100);
            const auto via = scale(evolve(gt.target, gt.field, 100), gt.prefactor);
            CHECK(sup_difference(direct, via) < 1e-10);
        }
    }
    CHECK_THROWS_AS(gauge_rescale(0.0, 1.0, point_source(0, 1, 1.0)), usage_error);
}

TEST_CASE("empty field stays empty")
{
    Evolver ev(coin_plus, SpinorField{});
    ev.advance();
    CHECK(ev.view().size() == 0);
    CHECK(ev.time() == 1);
}
