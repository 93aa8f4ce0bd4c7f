// Runs the case I traveling-pair collision for C+ and prints the three
// snapshots around the meeting time.

#include <cstdio>

#include <nlqw/nlqw.hpp>

int main()
{
    auto s = nlqw::make_scenario(nlqw::CollisionCase::traveling_pair, nlqw::coin_plus);
    s.horizon = 200;
    const auto r = nlqw::run_collision(s);
    std::printf("scenario %s, alpha = %.6f, meeting at t = %lld\n", s.name.c_str(),
                s.left_walker.amplitude, static_cast<long long>(nlqw::expected_collision_time(s)));
    for (std::int64_t t : {150, 151, 152}) {
        const auto& f = r.snapshots.at(t);
        std::printf("t = %lld:", static_cast<long long>(t));
        for (std::size_t k = 0; k < f.size(); ++k) {
            const auto& c = f.cells()[k];
            const auto x = static_cast<long long>(f.origin() + static_cast<nlqw::site_t>(k));
            if (std::abs(c.c1) > 1e-12)
                std::printf("  %+.6f d1@%lld", c.c1.real(), x);
            if (std::abs(c.c2) > 1e-12)
                std::printf("  %+.6f d2@%lld", c.c2.real(), x);
        }
        std::printf("\n");
    }
}
