// nlqw: command-line front end for the nonlinear quantum walk library.
//
//   nlqw [--g G] [--p P] [--out FILE] [--format csv|json] [--seed S] <command> ...
//
// Exit codes: 0 ok, 1 I/O failure, 2 usage error, 3 numeric failure.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <nlqw/nlqw.hpp>

namespace {

struct Globals {
    double g = 1.0;
    double p = 1.0;
    std::string out = "-";
    std::string format = "csv";
    std::uint64_t seed = 0;
};

void emit(const Globals& G, const std::string& text)
{
    if (G.out == "-")
        std::cout << text << std::flush;
    else
        nlqw::write_text_file(G.out, text);
}

void emit_table(const Globals& G, const nlqw::Table& t)
{
    emit(G, nlqw::render(t, nlqw::format_from_string(G.format)));
}

nlqw::CoinParams coin(const Globals& G) { return {G.g, G.p}; }

void note(const std::string& line) { std::cerr << line << '\n'; }

std::string num(double v) { return nlqw::format_sig12(v); }

const char* membership_name(nlqw::MembershipKind k)
{
    switch (k) {
    case nlqw::MembershipKind::inside: return "inside";
    case nlqw::MembershipKind::outside: return "outside";
    case nlqw::MembershipKind::boundary: return "boundary";
    case nlqw::MembershipKind::unresolved: return "unresolved";
    }
    return "?";
}

// ---------------------------------------------------------------- evolve

struct EvolveArgs {
    std::int64_t steps = 0;
    std::string init;
    std::int64_t record_every = 1;
    std::vector<std::int64_t> snapshot_at;
    std::string snapshot_out;
};

void run_evolve(const Globals& G, const EvolveArgs& a)
{
    if (!a.snapshot_at.empty() && a.snapshot_out.empty())
        throw nlqw::usage_error("--snapshot-at needs --snapshot-out");
    const auto u0 = nlqw::to_field(nlqw::parse_init_spec(a.init));
    const auto tr = nlqw::record_trajectory(coin(G), u0, a.steps, a.record_every, a.snapshot_at);
    emit_table(G, nlqw::trajectory_table(tr));
    if (!a.snapshot_out.empty()) {
        nlohmann::json snaps = nlohmann::json::array();
        for (const auto& o : tr.recorded)
            if (o.snapshot)
                snaps.push_back(nlqw::snapshot_to_json(o.snapshot->view()));
        nlqw::write_text_file(a.snapshot_out, snaps.dump(1) + "\n");
    }
}

// --------------------------------------------------------------- soliton

struct SolitonArgs {
    std::string kind = "traveling";
    std::optional<std::int64_t> branch;
    std::int64_t position = 0;
    int component = 1;
    std::int64_t verify_steps = 0;
};

void run_soliton(const Globals& G, const SolitonArgs& a)
{
    const auto P = coin(G);
    const auto kind = nlqw::soliton_kind_from_string(a.kind);
    const auto comp = nlqw::component_from_index(a.component);
    const auto spec = a.branch ? nlqw::SolitonSpec::canonical(P, kind, *a.branch, a.position, comp)
                               : nlqw::lowest_soliton(P, kind, a.position, comp);
    nlqw::Table t{{"kind", "branch", "tau", "amplitude"}, {}};
    std::vector<nlqw::Cell> row{std::string(nlqw::to_string(kind)), spec.branch,
                                nlqw::soliton_target_angle(P, kind, spec.branch), spec.amplitude};
    if (a.verify_steps > 0) {
        t.columns.insert(t.columns.end(), {"steps", "max_deviation", "linf_drift", "verified"});
        const auto chk = nlqw::verify_soliton(P, spec, a.verify_steps);
        row.insert(row.end(), {a.verify_steps, chk.max_deviation, chk.linf_drift,
                               std::string(chk.verified ? "true" : "false")});
    }
    t.add(std::move(row));
    emit_table(G, t);
}

// ------------------------------------------------------------------ edge

struct EdgeArgs {
    std::optional<double> fixed_points;
    std::optional<double> critical_points;
    std::optional<int> basin;
    std::optional<double> iterate;
    std::optional<double> in_basin;
    std::optional<std::int64_t> scan;
    double xmax = 0.0;  // 0: x^(3) + 1
    std::int64_t steps = 1'000'000;
    double guard = 1e-6;
    double tol = 1e-14;
    double eps_pos = 1e-8;
    bool no_certify = false;
};

void run_edge(const Globals& G, const EdgeArgs& a)
{
    const auto P = coin(G);
    const int modes = a.fixed_points.has_value() + a.critical_points.has_value() +
                      a.basin.has_value() + a.iterate.has_value() + a.in_basin.has_value() +
                      a.scan.has_value();
    if (modes != 1)
        throw nlqw::usage_error(
            "edge needs exactly one of --fixed-points, --critical-points, --basin, --iterate, "
            "--in-basin, --scan");
    const double xmax = a.xmax > 0.0 ? a.xmax : nlqw::fixed_point(P, 3) + 1.0;
    nlqw::EdgeIterationOptions opt;
    opt.max_steps = a.steps;
    opt.tol = a.tol;
    opt.eps_pos = a.eps_pos;
    opt.certify = !a.no_certify;

    if (a.fixed_points) {
        emit_table(G, nlqw::points_table(nlqw::fixed_points(P, *a.fixed_points).points, "x"));
    } else if (a.critical_points) {
        nlqw::Table t{{"kind", "x", "f"}, {}};
        for (const auto& l : nlqw::landmarks(P, *a.critical_points)) {
            if (l.x > *a.critical_points || l.kind == nlqw::LandmarkKind::fixed)
                continue;
            t.add({std::string(l.kind == nlqw::LandmarkKind::maximum ? "maximum" : "minimum"), l.x,
                   nlqw::edge_map(P, l.x)});
        }
        emit_table(G, t);
    } else if (a.basin) {
        const auto b = nlqw::basin_intervals(P, *a.basin, xmax);
        for (const auto& v : b.pattern_violations)
            note("pattern violation: " + v);
        emit_table(G, nlqw::intervals_table(b));
    } else if (a.iterate) {
        opt.keep_series = true;
        const auto o = nlqw::iterate_edge(P, *a.iterate, opt);
        nlqw::TimeSeries s;
        for (std::size_t i = 0; i < o.series.size(); ++i)
            s.push(static_cast<std::int64_t>(i), o.series[i]);
        emit_table(G, nlqw::series_table(s, "r_t"));
        note(std::string("classification=") + nlqw::to_string(o.classification) +
             " limit=" + num(o.limit) + " steps=" + std::to_string(o.steps) +
             " fixed_point=" + std::to_string(o.fixed_point_index));
    } else if (a.in_basin) {
        const auto m = nlqw::in_basin(P, *a.in_basin, a.guard);
        nlqw::Table t{{"r0", "membership", "m"}, {}};
        t.add({*a.in_basin, std::string(membership_name(m.kind)), static_cast<std::int64_t>(m.m)});
        emit_table(G, t);
    } else {
        if (*a.scan < 0)
            throw nlqw::usage_error("--scan needs a nonnegative sample count");
        const auto atlas = nlqw::BasinAtlas::build(P, xmax);
        std::mt19937_64 rng(G.seed);
        std::uniform_real_distribution<double> U(0.0, xmax);
        nlqw::Table t{{"r0", "membership", "m", "oracle", "limit", "agree"}, {}};
        std::int64_t disagree = 0;
        opt.keep_series = false;
        for (std::int64_t i = 0; i < *a.scan; ++i) {
            const double r0 = U(rng);
            const auto m = atlas.classify(r0, a.guard);
            const auto o = nlqw::iterate_edge(P, r0, opt);
            std::string agree = "skipped";
            if (m.kind == nlqw::MembershipKind::inside || m.kind == nlqw::MembershipKind::outside ||
                m.kind == nlqw::MembershipKind::unresolved) {
                const bool ok =
                    (m.kind == nlqw::MembershipKind::inside &&
                     o.classification == nlqw::EdgeLimit::positive && o.fixed_point_index == m.m) ||
                    (m.kind == nlqw::MembershipKind::outside &&
                     o.classification == nlqw::EdgeLimit::zero);
                agree = ok ? "yes" : "no";
                disagree += !ok;
            }
            t.add({r0, std::string(membership_name(m.kind)), static_cast<std::int64_t>(m.m),
                   std::string(nlqw::to_string(o.classification)), o.limit, agree});
        }
        emit_table(G, t);
        note("samples=" + std::to_string(*a.scan) + " disagreements=" + std::to_string(disagree));
    }
}

// ----------------------------------------------------------------- decay

struct DecayArgs {
    std::string init = "0.2 d1@0";
    std::int64_t steps = 10'000;
    double fit_min = 1000.0;
    double fit_max = 0.0;  // 0: steps
    std::size_t tv_window = 0;
    std::string tv_out;
};

void run_decay_cmd(const Globals& G, const DecayArgs& a)
{
    const auto u0 = nlqw::to_field(nlqw::parse_init_spec(a.init));
    const double fmax = a.fit_max > 0.0 ? a.fit_max : static_cast<double>(a.steps);
    const auto r = nlqw::run_decay(coin(G), u0, a.steps, a.fit_min, fmax);
    emit_table(G, nlqw::decay_table(r.linf));
    note("slope=" + num(r.fit.slope) + " intercept=" + num(r.fit.intercept) +
         " range=[" + num(r.fit.tmin) + "," + num(r.fit.tmax) + "] points=" +
         std::to_string(r.fit.points) + " rms=" + num(r.fit.residual));
    if (a.tv_window > 0) {
        if (a.tv_out.empty())
            throw nlqw::usage_error("--tv-window needs --tv-out");
        const auto tv = nlqw::sliding_total_variation(r.linf, a.tv_window);
        nlqw::write_text_file(a.tv_out, nlqw::render(nlqw::series_table(tv, "total_variation"),
                                                     nlqw::format_from_string(G.format)));
    }
}

// ----------------------------------------------------------------- peaks

struct PeaksArgs {
    std::string init;
    std::int64_t steps = 1000;
    double threshold = 0.3;
};

void run_peaks(const Globals& G, const PeaksArgs& a)
{
    const auto u0 = nlqw::to_field(nlqw::parse_init_spec(a.init));
    emit_table(G, nlqw::peaks_table(nlqw::track_peaks(coin(G), u0, a.steps, a.threshold)));
}

// --------------------------------------------------------------- collide

struct CollideArgs {
    std::string which;
    std::string coin = "plus";
    std::int64_t horizon = 1000;
    double threshold = 0.3;
    std::string snapshot_out;
};

void run_collide(const Globals& G, const CollideArgs& a)
{
    if (a.coin != "plus" && a.coin != "minus")
        throw nlqw::usage_error("--coin must be plus or minus");
    const nlqw::CoinParams P{a.coin == "plus" ? 1.0 : -1.0, G.p};
    auto s = nlqw::make_scenario(nlqw::collision_case_from_string(a.which), P);
    s.horizon = a.horizon;
    const auto r = nlqw::run_collision(s, a.threshold);
    emit_table(G, nlqw::peaks_table(r.track));
    note("scenario=" + s.name + " collision_time=" + std::to_string(nlqw::expected_collision_time(s)) +
         " left=" + num(s.left_walker.amplitude) + " right=" + num(s.right_walker.amplitude));
    if (!a.snapshot_out.empty()) {
        nlohmann::json snaps = nlohmann::json::array();
        for (const auto& [t, f] : r.snapshots)
            snaps.push_back(nlqw::snapshot_to_json(f.view()));
        nlqw::write_text_file(a.snapshot_out, snaps.dump(1) + "\n");
    }
}

// --------------------------------------------------------------- perturb

struct PerturbArgs {
    std::optional<double> a;
    double eps = 0.01;
    int sign = -1;
    std::int64_t steps = 1000;
    std::int64_t max_steps = 1'000'000;
};

void run_perturb(const Globals& G, const PerturbArgs& a)
{
    const auto P = coin(G);
    // default: the edge amplitude of the lowest traveling soliton of this coin
    const double amp = a.a ? *a.a
                           : nlqw::lowest_soliton(P, nlqw::SolitonKind::traveling, 0,
                                                  nlqw::Component::one)
                                 .amplitude;
    nlqw::EdgeIterationOptions opt;
    opt.max_steps = a.max_steps;
    const auto r = nlqw::edge_perturbation(P, amp, a.eps, a.sign, a.steps, opt);
    emit_table(G, nlqw::series_table(r.trace, "r_t"));
    note("r0=" + num(r.r0) + " classification=" + nlqw::to_string(r.orbit.classification) +
         " limit=" + num(r.orbit.limit) + " steps=" + std::to_string(r.orbit.steps));
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nonlinear quantum walk simulator and edge-map analysis"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals G;
    app.add_option("--g", G.g, "coin strength g")->capture_default_str();
    app.add_option("--p", G.p, "coin exponent p >= 1")->capture_default_str();
    app.add_option("--out", G.out, "output file, - for stdout")->capture_default_str();
    app.add_option("--format", G.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--seed", G.seed, "seed for randomized scans")->capture_default_str();

    EvolveArgs ev;
    auto* c_ev = app.add_subcommand("evolve", "evolve initial data, record l-inf and l2");
    c_ev->add_option("--steps", ev.steps)->required();
    c_ev->add_option("--init", ev.init, "e.g. \"1 d1@0 + 0.5 d2@3\"")->required();
    c_ev->add_option("--record-every", ev.record_every)->capture_default_str();
    c_ev->add_option("--snapshot-at", ev.snapshot_at)->delimiter(',');
    c_ev->add_option("--snapshot-out", ev.snapshot_out, "JSON file for snapshots");

    SolitonArgs so;
    auto* c_so = app.add_subcommand("soliton", "point-mass soliton amplitude and orbit check");
    c_so->add_option("--kind", so.kind, "traveling, rotating or periodic")->capture_default_str();
    c_so->add_option("--branch", so.branch, "branch index (default: lowest valid)");
    c_so->add_option("--position", so.position)->capture_default_str();
    c_so->add_option("--component", so.component)->capture_default_str();
    c_so->add_option("--verify-steps", so.verify_steps)->capture_default_str();

    EdgeArgs ed;
    auto* c_ed = app.add_subcommand("edge", "edge map: fixed points, basins, iteration");
    c_ed->add_option("--fixed-points", ed.fixed_points, "list fixed points up to X");
    c_ed->add_option("--critical-points", ed.critical_points, "list maxima and minima up to X");
    c_ed->add_option("--basin", ed.basin, "interval family of fixed point M");
    c_ed->add_option("--iterate", ed.iterate, "iterate from R0");
    c_ed->add_option("--in-basin", ed.in_basin, "classify R0 against the basin atlas");
    c_ed->add_option("--scan", ed.scan, "random basin-vs-iteration comparison, N samples");
    c_ed->add_option("--xmax", ed.xmax, "range for --basin and --scan (default x^(3)+1)");
    c_ed->add_option("--steps", ed.steps)->capture_default_str();
    c_ed->add_option("--guard", ed.guard)->capture_default_str();
    c_ed->add_option("--tol", ed.tol)->capture_default_str();
    c_ed->add_option("--eps-pos", ed.eps_pos)->capture_default_str();
    c_ed->add_flag("--no-certify", ed.no_certify, "plain iteration, no trapping certificates");

    DecayArgs de;
    auto* c_de = app.add_subcommand("decay", "l-inf decay series and log-log fit");
    c_de->add_option("--init", de.init)->capture_default_str();
    c_de->add_option("--steps", de.steps)->capture_default_str();
    c_de->add_option("--fit-min", de.fit_min)->capture_default_str();
    c_de->add_option("--fit-max", de.fit_max, "default: --steps");
    c_de->add_option("--tv-window", de.tv_window, "sliding total-variation window");
    c_de->add_option("--tv-out", de.tv_out);

    PeaksArgs pk;
    auto* c_pk = app.add_subcommand("peaks", "sites with |u_j| above threshold");
    c_pk->add_option("--init", pk.init)->required();
    c_pk->add_option("--steps", pk.steps)->capture_default_str();
    c_pk->add_option("--threshold", pk.threshold)->capture_default_str();

    CollideArgs co;
    auto* c_co = app.add_subcommand("collide", "soliton collision scenarios");
    c_co->add_option("--case", co.which, "I-rot, I-trav, II, III or IV")->required();
    c_co->add_option("--coin", co.coin, "plus or minus")->capture_default_str();
    c_co->add_option("--horizon", co.horizon)->capture_default_str();
    c_co->add_option("--threshold", co.threshold)->capture_default_str();
    c_co->add_option("--snapshot-out", co.snapshot_out);

    PerturbArgs pe;
    auto* c_pe = app.add_subcommand("perturb", "edge trace of a perturbed soliton");
    c_pe->add_option("--a", pe.a, "soliton amplitude (default: lowest traveling)");
    c_pe->add_option("--eps", pe.eps)->capture_default_str();
    c_pe->add_option("--sign", pe.sign)->capture_default_str();
    c_pe->add_option("--steps", pe.steps, "trace length")->capture_default_str();
    c_pe->add_option("--max-steps", pe.max_steps, "iteration cap for classification")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_ev->parsed())
            run_evolve(G, ev);
        else if (c_so->parsed())
            run_soliton(G, so);
        else if (c_ed->parsed())
            run_edge(G, ed);
        else if (c_de->parsed())
            run_decay_cmd(G, de);
        else if (c_pk->parsed())
            run_peaks(G, pk);
        else if (c_co->parsed())
            run_collide(G, co);
        else if (c_pe->parsed())
            run_perturb(G, pe);
    } catch (const nlqw::usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlqw::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const nlqw::io_error& e) {
        std::cerr << "i/o failure: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
