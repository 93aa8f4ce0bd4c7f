#include <catch_amalgamated.hpp>

#include <nlqw/lattice.hpp>

using namespace nlqw;
using Catch::Matchers::WithinAbs;

TEST_CASE("point source occupies one component of one site")
{
    const auto f = point_source(3, Component::two, 0.5);
    CHECK(f.origin() == 3);
    CHECK(f.size() == 1);
    CHECK(f.at(3).c1 == amplitude{});
    CHECK(f.at(3).c2 == amplitude{0.5});
    CHECK(f.at(2).is_zero());
    CHECK(f.site_norm_sq(3) == 0.25);
    CHECK(point_source(0, 1, 1.0).at(0).c1 == amplitude{1.0});
}

TEST_CASE("component index outside {1,2} is a usage error")
{
    CHECK_THROWS_AS(point_source(0, 3, 1.0), usage_error);
    CHECK_THROWS_AS(component_from_index(0), usage_error);
    CHECK(index_of(component_from_index(2)) == 2);
}

TEST_CASE("norms of a two-site field")
{
    const auto f = superpose({point_source(0, 1, 3.0), point_source(5, 2, amplitude{0, 4})});
    CHECK_THAT(f.l2_norm(), WithinAbs(5.0, 1e-15));
    CHECK_THAT(f.linf_norm(), WithinAbs(4.0, 1e-15));
    REQUIRE(f.support_bounds());
    CHECK(*f.support_bounds() == SupportBounds{0, 5});
}

TEST_CASE("superpose adds overlapping amplitudes and trims cancellations")
{
    const auto a = superpose({point_source(2, 1, 1.0), point_source(2, 1, -1.0)});
    CHECK(a.is_zero());
    CHECK(a.size() == 0);
    const auto b = superpose({point_source(-1, 1, 1.0), point_source(-1, 2, 2.0),
                              point_source(4, 1, 1.0), point_source(4, 1, -1.0)});
    CHECK(b.size() == 1);
    CHECK(b.at(-1) == Spinor{1.0, 2.0});
}

TEST_CASE("superpose keeps the time stamp of the first operand")
{
    auto a = point_source(0, 1, 1.0);
    a.set_time(7);
    const auto s = superpose({a, point_source(10, 2, 1.0)});
    CHECK(s.time() == 7);
}

TEST_CASE("support bounds use an exact zero test")
{
    SpinorField f{-2, {Spinor{}, Spinor{1e-300, 0.0}, Spinor{}, Spinor{}}};
    REQUIRE(f.support_bounds());
    CHECK(*f.support_bounds() == SupportBounds{-1, -1});
    CHECK(f.trimmed().origin() == -1);
    CHECK(f.trimmed().size() == 1);
    CHECK(SpinorField{}.trimmed().size() == 0);
    CHECK_FALSE(SpinorField{3, {Spinor{}, Spinor{}}}.support_bounds());
}

TEST_CASE("set grows the window in both directions")
{
    SpinorField f;
    f.set(5, {1.0, 0.0});
    f.set(2, {0.0, 1.0});
    f.set(8, {2.0, 0.0});
    CHECK(f.origin() == 2);
    CHECK(f.size() == 7);
    CHECK(f.at(5).c1 == amplitude{1.0});
    CHECK(f.at(2).c2 == amplitude{1.0});
    CHECK(f.at(8).c1 == amplitude{2.0});
    CHECK(f.at(6).is_zero());
}

TEST_CASE("sup difference, translate and scale")
{
    const auto a = point_source(0, 1, 1.0);
    const auto b = translate(a, 3);
    CHECK(b.at(3).c1 == amplitude{1.0});
    CHECK(sup_difference(a, b) == 1.0);
    CHECK(sup_difference(a, a) == 0.0);
    const auto c = scale(a, -2.0);
    CHECK(c.at(0).c1 == amplitude{-2.0});
    CHECK(sup_difference(a, c) == 3.0);
}

TEST_CASE("field views share storage with the owning field")
{
    const auto f = superpose({point_source(1, 1, 0.5), point_source(3, 2, 0.25)});
    const FieldView v = f;
    CHECK(v.origin() == f.origin());
    CHECK(v.contains(3));
    CHECK_FALSE(v.contains(4));
    CHECK(v.at(3).c2 == amplitude{0.25});
    const SpinorField copy{v};
    CHECK(sup_difference(copy, f) == 0.0);
}
