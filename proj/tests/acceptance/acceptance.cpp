// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <nlqw/nlqw.hpp>

#include "oracles.hpp"

using namespace nlqw;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::uint64_t g_seed = 0;

std::mt19937_64 rng(std::uint64_t salt) { return std::mt19937_64{g_seed ^ (salt * 0x9E3779B97F4A7C15ull)}; }

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// max over the union of supports of |u - expected|
double golden_diff(const FieldView& u, const SpinorField& expected) { return sup_difference(u, expected); }

void c1_table1(Outcome& o)
{
    const double want[2] = {0.886256, 0.886299};
    const CoinParams coins[2] = {coin_plus, coin_minus};
    for (int i = 0; i < 2; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Evolver ev(coins[i], point_source(0, 1, 1.0));
        for (int t = 0; t < 10'000; ++t)
            ev.advance();
        const double l = ev.view().linf_norm();
        const double dt = seconds_since(t0);
        o.detail << (i ? " C-" : " C+") << " linf=" << l << " (" << dt << " s)";
        o.require(std::abs(l - want[i]) <= 1e-4, "linf value");
        o.require(dt < 5.0, "runtime");
        o.require(ev.view().size() <= 20'001, "window");
    }
}

void c2_table2(Outcome& o)
{
    struct Row {
        CoinParams P;
        SolitonKind k;
        std::int64_t n;
        double want;
    };
    const Row rows[] = {
        {coin_plus, SolitonKind::rotating, 1, 1.534990},  {coin_plus, SolitonKind::traveling, 1, 2.344736},
        {coin_plus, SolitonKind::periodic, 0, 0.886227},  {coin_minus, SolitonKind::rotating, 0, 1.981664},
        {coin_minus, SolitonKind::traveling, 0, 0.886227}, {coin_minus, SolitonKind::periodic, 0, 1.534990},
    };
    double worst = 0.0;
    for (const auto& r : rows)
        worst = std::max(worst, std::abs(soliton_amplitude(r.P, r.k, r.n) - r.want));
    o.detail << " max deviation " << worst;
    o.require(worst <= 1e-6, "amplitudes");
}

void c3_orbits(Outcome& o)
{
    double dev = 0.0, drift = 0.0;
    for (const auto& P : {coin_plus, coin_minus}) {
        for (auto kind : {SolitonKind::traveling, SolitonKind::rotating, SolitonKind::periodic}) {
            std::int64_t n = 0;
            while ((soliton_target_angle(P, kind, n) - quarter_pi) / P.g() <= 0)
                ++n;
            for (auto comp : {Component::one, Component::two}) {
                const auto chk = verify_soliton(P, SolitonSpec::canonical(P, kind, n, 0, comp), 10'000);
                dev = std::max(dev, chk.max_deviation);
                drift = std::max(drift, chk.linf_drift);
                o.require(chk.verified, std::string(to_string(kind)) + " orbit");
            }
        }
    }
    o.detail << " max deviation " << dev << ", linf drift " << drift;
}

void c4_decay(Outcome& o)
{
    const double want[2] = {-0.40, -0.45};
    const CoinParams coins[2] = {coin_plus, coin_minus};
    for (int i = 0; i < 2; ++i) {
        const auto r = run_decay(coins[i], point_source(0, 1, 0.2), 10'000, 1000, 10'000);
        o.detail << (i ? " C-" : " C+") << " slope=" << r.fit.slope << " intercept=" << r.fit.intercept;
        o.require(std::abs(r.fit.slope + 1.0 / 3) <= 0.05, "slope");
        o.require(std::abs(r.fit.intercept - want[i]) <= 0.1, "intercept");
    }
    o.detail << " (fit over t in [1000, 10000])";
}

void c5_collision(Outcome& o)
{
    auto s = make_scenario(CollisionCase::traveling_pair, coin_plus);
    s.horizon = 152;
    const auto r = run_collision(s);
    const double a = s.left_walker.amplitude;
    const double r2 = std::sqrt(2.0);
    const double d150 = golden_diff(r.snapshots.at(150), superpose({point_source(600, 1, a), point_source(600, 2, a)}));
    const double d151 = golden_diff(r.snapshots.at(151), point_source(599, 1, r2 * a));
    const double d152 =
        golden_diff(r.snapshots.at(152), superpose({point_source(598, 1, a), point_source(600, 2, -a)}));
    o.detail << " equal amplitudes: |diff| " << d150 << ", " << d151 << ", " << d152;
    o.require(d150 <= 1e-9 && d151 <= 1e-9 && d152 <= 1e-9, "equal-amplitude snapshots");

    // beta d_{1,750} + gamma d_{2,450}, both traveling for C+, different branches
    const double beta = soliton_amplitude(coin_plus, SolitonKind::traveling, 1);
    const double gamma = soliton_amplitude(coin_plus, SolitonKind::traveling, 2);
    const auto u151 = evolve(coin_plus, superpose({point_source(750, 1, beta), point_source(450, 2, gamma)}), 151);
    const auto formula =
        superpose({point_source(599, 1, (beta + gamma) / r2), point_source(601, 2, (beta - gamma) / r2)});
    const auto flipped =
        superpose({point_source(599, 1, (beta + gamma) / r2), point_source(601, 2, (gamma - beta) / r2)});
    const double dm = golden_diff(u151, formula);
    o.detail << "; mixed beta=" << beta << " gamma=" << gamma << ": |diff| to formula " << dm
             << ", to the formula with (gamma-beta)/sqrt2 on d_{2,601} " << golden_diff(u151, flipped);
    o.require(dm <= 1e-9, "mixed-amplitude formula at t=151");
}

void c6_case2(Outcome& o)
{
    const double beta = std::sqrt(5 * pi) / 2;
    const double gamma = std::sqrt(pi) / 2;
    auto s = make_scenario(CollisionCase::rotating_traveling, coin_minus);
    o.require(std::abs(s.right_walker.amplitude - beta) < 1e-12 && std::abs(s.left_walker.amplitude - gamma) < 1e-12,
              "scenario amplitudes");
    s.horizon = 152;
    const auto u = run_collision(s).snapshots.at(152);

    const double r2 = std::sqrt(2.0);
    const double A = (beta + gamma) / r2, B = (beta - gamma) / r2;
    const double tA = pi / 4 - (beta + gamma) * (beta + gamma) / 2;
    const double tB = pi / 4 - (beta - gamma) * (beta - gamma) / 2;
    const auto literal = superpose({point_source(598, 1, -A * std::cos(tA)), point_source(600, 2, -A * std::sin(tA)),
                                    point_source(600, 1, -B * std::sin(tB)), point_source(602, 2, B * std::cos(tB))});
    const double d = golden_diff(u, literal);
    o.detail << " |diff| to exact step " << d;
    o.require(d <= 1e-9, "exact t=152 field");

    const double cos_theta = std::cos(tB);
    const double m1 = std::abs(u.at(598).c1), m2 = std::abs(u.at(602).c2);
    o.detail << "; cos(theta)=" << cos_theta << " |u1(598)|=" << m1 << " vs 2.279049*cos=" << 2.279049 * cos_theta
             << " |u2(602)|=" << m2 << " vs 0.774591*cos=" << 0.774591 * cos_theta
             << " (computed (beta+gamma)/sqrt2=" << A << ")";
    o.require(std::abs(cos_theta - 0.982861) <= 1e-5, "cos theta");
    o.require(std::abs(m1 - 2.279049 * cos_theta) <= 1e-5, "2.279049 cos theta");
    o.require(std::abs(m2 - 0.774591 * cos_theta) <= 1e-5, "0.774591 cos theta");
}

void c7_edge_oracle(Outcome& o)
{
    auto gen = rng(7);
    std::uniform_real_distribution<double> A(0.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        double a = A(gen);
        if (a == 0.0)
            a = 3.0;  // (0, 3]
        for (const auto& P : {coin_plus, coin_minus}) {
            double r = a * a;
            evolve(P, point_source(0, 1, a), 1000, [&](const FieldView& v) {
                r = oracle::f(r, P.g(), 1.0);
                worst = std::max(worst, std::abs(v.site_norm_sq(-v.time()) - r));
            });
        }
    }
    o.detail << " 50 amplitudes x 2 coins, max |diff| " << worst;
    o.require(worst <= 1e-10, "edge site vs scalar map");
}

void c8_basins(Outcome& o)
{
    auto gen = rng(8);
    for (const auto& P : {coin_plus, coin_minus}) {
        const double xmax = fixed_point(P, 3) + 1.0;
        std::uniform_real_distribution<double> U(0.0, xmax);
        const auto decomp = basin_intervals(P, 1, xmax);
        int guarded = 0, disagree = 0, one_step_miss = 0;
        for (int k = 0; k < 1000; ++k) {
            const double r0 = U(gen);
            const auto m = in_basin(P, r0, 1e-6);
            if (m.kind == MembershipKind::boundary) {
                ++guarded;
                continue;
            }
            const auto it = iterate_edge(P, r0, {.keep_series = false});
            bool agree = false;
            if (m.kind == MembershipKind::inside)
                agree = it.classification == EdgeLimit::positive && it.fixed_point_index == m.m;
            else if (m.kind == MembershipKind::outside)
                agree = !(it.classification == EdgeLimit::positive);
            disagree += !agree;

            bool in_one_step = false;
            for (const auto& iv : decomp.intervals)
                in_one_step = in_one_step || iv.contains(r0);
            const bool oracle_in1 = it.classification == EdgeLimit::positive && it.fixed_point_index == 1;
            one_step_miss += in_one_step != oracle_in1;
        }
        o.detail << (P.g() > 0 ? " C+" : " C-") << ": " << disagree << " disagreements, " << guarded
                 << " guarded (one-step interval family alone would miss " << one_step_miss << " for m=1)";
        o.require(disagree == 0, "basin membership");
    }
}

void c9_perturbation(Outcome& o)
{
    EdgeIterationOptions opt;
    opt.max_steps = 1'000'000;
    opt.keep_series = false;
    const auto down = edge_perturbation(coin_minus, 0.886227, 0.01, -1, 0, opt);
    const auto up = edge_perturbation(coin_minus, 0.886227, 0.01, +1, 0, opt);
    o.detail << " minus: " << to_string(down.orbit.classification) << " after " << down.orbit.steps
             << " steps; plus: " << to_string(up.orbit.classification) << " limit " << up.orbit.limit << " after "
             << up.orbit.steps << " steps";
    o.require(down.orbit.classification == EdgeLimit::zero && down.orbit.steps <= 1'000'000, "minus side to 0");
    o.require(up.orbit.classification == EdgeLimit::positive && std::abs(up.orbit.limit - pi / 4) <= 1e-6,
              "plus side to pi/4");

    // without certificates: the tangent approach is only algebraic, the
    // plain iterate sits about 1/t above pi/4
    opt.certify = false;
    const auto down2 = edge_perturbation(coin_minus, 0.886227, 0.01, -1, 0, opt);
    const auto up2 = edge_perturbation(coin_minus, 0.886227, 0.01, +1, 0, opt);
    o.detail << "; uncertified: " << to_string(down2.orbit.classification) << " at " << down2.orbit.last << ", "
             << to_string(up2.orbit.classification) << " at " << up2.orbit.last << " after " << up2.orbit.steps
             << " steps";
    o.require(down2.orbit.classification == EdgeLimit::zero, "uncertified minus side");
}

SpinorField random_field(std::mt19937_64& gen, site_t lo, int n, double scale)
{
    std::normal_distribution<double> N(0.0, scale);
    std::vector<Spinor> cells(static_cast<std::size_t>(n));
    for (auto& c : cells)
        c = {{N(gen), N(gen)}, {N(gen), N(gen)}};
    return SpinorField{lo, cells};
}

void c10_properties(Outcome& o)
{
    auto gen = rng(10);
    std::uniform_real_distribution<double> G(-2.0, 2.0), Pw(1.0, 3.0);

    double norm = 0.0;
    for (const auto& P : {coin_plus, coin_minus, CoinParams{G(gen), Pw(gen)}}) {
        const auto u0 = random_field(gen, -3, 7, 0.4);
        const double n0 = u0.l2_norm();
        evolve(P, u0, 10'000, [&](const FieldView& v) { norm = std::max(norm, std::abs(v.l2_norm() - n0)); });
    }
    o.require(norm <= 1e-10, "norm conservation");

    double rev = 0.0;
    bool cone = true;
    double trans = 0.0;
    for (int k = 0; k < 3; ++k) {
        const CoinParams P{G(gen), Pw(gen)};
        const auto u0 = random_field(gen, 0, 5, 0.2);  // dispersive regime
        Evolver ev(P, u0);
        const auto b0 = *u0.support_bounds();
        for (int t = 1; t <= 1000; ++t) {
            ev.advance();
            const auto b = ev.view().support_bounds();
            cone = cone && b && b->lo >= b0.lo - t && b->hi <= b0.hi + t;
        }
        for (int t = 0; t < 1000; ++t)
            ev.retreat();
        rev = std::max(rev, sup_difference(ev.view(), u0));
        trans = std::max(trans, sup_difference(translate(evolve(P, u0, 300), 37), evolve(P, translate(u0, 37), 300)));
    }
    o.require(rev <= 1e-9, "reversibility");
    o.require(cone, "light cone");
    o.require(trans == 0.0, "translation covariance");

    double gauge = 0.0;
    for (double g : {0.3, -0.7, 2.5}) {
        const auto u0 = random_field(gen, -2, 5, 0.2);
        const auto gt = gauge_rescale(g, 1.0, u0);
        gauge = std::max(gauge, sup_difference(evolve(CoinParams{g, 1.0}, u0, 100),
                                               scale(evolve(gt.target, gt.field, 100), gt.prefactor)));
    }
    o.require(gauge <= 1e-10, "gauge equivariance");

    double hf = 0.0;
    int above = 0;
    std::uniform_real_distribution<double> X(0.0, 50.0), H(0.0, 3.0);
    for (int k = 0; k < 10'000; ++k) {
        const CoinParams P{G(gen), Pw(gen)};
        const double y = H(gen);
        const double h = amplitude_edge_map(P, y);
        hf = std::max(hf, std::abs(h * h - edge_map(P, y * y)));
        const double x = X(gen);
        const double fx = edge_map(P, x);
        above += !(fx >= 0.0 && fx <= x);
    }
    o.require(hf <= 1e-12, "h^2 = f(x^2)");
    o.require(above == 0, "f(x) <= x");
    o.detail << " norm " << norm << ", reverse " << rev << ", translate " << trans << ", gauge " << gauge
             << ", h^2-f " << hf << ", f>x count " << above;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"nlqw acceptance criteria"};
    app.add_option("--seed", g_seed, "seed for randomized checks");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
        {"l-inf at t=10^4 from a unit point source", c1_table1},
        {"soliton amplitudes for both coins", c2_table2},
        {"exact soliton orbits over 10^4 steps", c3_orbits},
        {"small-data decay fit", c4_decay},
        {"case I collision snapshots", c5_collision},
        {"case II exact step at t=152", c6_case2},
        {"left-edge site vs scalar edge map", c7_edge_oracle},
        {"basin membership vs iteration", c8_basins},
        {"perturbation of the C- traveling soliton", c9_perturbation},
        {"property suite", c10_properties},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        o.detail.precision(10);
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        failed += !o.pass;
        std::printf("%s %2zu %s:%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
