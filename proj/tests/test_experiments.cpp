#include "doctest.h"

#include <cmath>
#include <future>
#include <numbers>
#include <vector>

#include "json.hpp"

#include "dduffing/errors.hpp"
#include "dduffing/experiments.hpp"
#include "oracles.hpp"

using namespace dduffing;

TEST_CASE("orbit_distance") {
    const OrbitSpec x1 = solve_amplitude(0.5, 1);
    const double a = x1.amplitude();
    auto as_fn = [&](double t) {
        const auto s = exact_solution(x1, t);
        return std::pair{s.x, s.xdot};
    };

    CHECK(orbit_distance({a, 0.0}, x1) < 1e-12);
    const auto on = exact_solution(x1, 0.377);
    CHECK(orbit_distance(on, x1) < 1e-9);

    const double origin = orbit_distance({0.0, 0.0}, x1);
    CHECK(origin > 0.0);
    CHECK(origin == doctest::Approx(oracle::dense_distance(0.0, 0.0, as_fn, x1.period(), 200000)).epsilon(1e-6));
    // closest points to the origin are the turning points (A, 0)
    CHECK(origin == doctest::Approx(a).epsilon(1e-9));

    for (double delta : {1e-2, 1e-4, 1e-6}) {
        const double d = orbit_distance({a + delta, 0.0}, x1);
        CAPTURE(delta);
        CHECK(std::abs(d - delta) < 10 * delta * delta);
    }

    const PhasePoint off{1.3, -20.0};
    CHECK(orbit_distance(off, x1) ==
          doctest::Approx(oracle::dense_distance(off.x, off.xdot, as_fn, x1.period(), 200000)).epsilon(1e-6));
}

TEST_CASE("distance_series") {
    const OrbitSpec x1 = solve_amplitude(0.5, 1);
    SolverConfig c;
    c.t_end = 1.0;
    const auto traj = integrate(0.5, HistoryFunction::elliptic_cn(x1.amplitude(), x1.parity()), c);
    const auto series = distance_series(traj, x1.ode(), 0.1);
    REQUIRE(series.size() == 11);
    CHECK(series.front().t == 0.0);
    CHECK(series.back().t == 1.0);
    for (const auto& s : series)
        CHECK(s.d < 1e-8);
    CHECK_THROWS_AS(distance_series(traj, x1.ode(), 0.0), ConfigError);
}

TEST_CASE("convergence_probe") {
    SUBCASE("A = 4.3 converges to x1") {
        const Verdict v = convergence_probe(0.5, 4.3, 1, 100);
        CHECK(v.outcome == Outcome::converged_to);
        CHECK(v.target_n == 1);
        CHECK(std::abs(v.final_amplitude - 7.5139958) <= 1e-3);
        CHECK(v.final_distance < 1e-3);
        CHECK(v.diagnostic.empty());
        CHECK(v.distance_series.back().t == 100.0);
    }
    SUBCASE("A = 1.42 converges to x1") {
        const Verdict v = convergence_probe(0.5, 1.42, 1, 100);
        CHECK(v.outcome == Outcome::converged_to);
        CHECK(std::abs(v.final_amplitude - 7.5139958) <= 1e-3);
    }
    SUBCASE("starting on x1") {
        const double a1 = solve_amplitude(0.5, 1).amplitude();
        const Verdict v = convergence_probe(0.5, a1, 1, 100);
        CHECK(v.outcome == Outcome::converged_to);
        CHECK(v.peak_distance <= 1e-5);
    }
    SUBCASE("starting on x3, tighter tolerances") {
        ProbeOptions o;
        o.abs_tol = o.rel_tol = 1e-10;
        const double a3 = solve_amplitude(0.5, 3).amplitude();
        const Verdict v = convergence_probe(0.5, a3, 3, 100, o);
        CHECK(v.outcome == Outcome::converged_to);
        CHECK(v.peak_distance <= 1e-5);
    }
    SUBCASE("bad options") {
        ProbeOptions o;
        o.sample_interval = 0;
        CHECK_THROWS_AS(convergence_probe(0.5, 4.3, 1, 10, o), ConfigError);
    }
}

TEST_CASE("verdicts are unchanged when max_step is halved") {
    for (double a0 : {4.3, 1.42}) {
        ProbeOptions fine;
        fine.max_step = 5e-5;
        const Verdict coarse_v = convergence_probe(0.5, a0, 1, 100);
        const Verdict fine_v = convergence_probe(0.5, a0, 1, 100, fine);
        CAPTURE(a0);
        CHECK(coarse_v.outcome == fine_v.outcome);
        CHECK(std::abs(coarse_v.final_amplitude - fine_v.final_amplitude) < 1e-4);
    }
}

TEST_CASE("heteroclinic_probe") {
    SUBCASE("from near x2 to x1") {
        const double a2 = solve_amplitude(0.5, 2).amplitude();
        const auto r = heteroclinic_probe(0.5, 2, 14.77 - a2, 1, 100);
        CHECK(r.initial_amplitude == doctest::Approx(14.77).epsilon(1e-12));
        CHECK(r.departure.outcome == Outcome::escaped_from);
        CHECK(r.departure.peak_distance >= 10 * r.departure.initial_distance);
        CHECK(r.arrival.outcome == Outcome::converged_to);
        CHECK(r.arrival.final_distance < 1e-2);
    }
    SUBCASE("offset 0: dwells near x2 for many periods") {
        const auto r = heteroclinic_probe(0.5, 2, 0.0, 1, 100);
        const double p2 = solve_amplitude(0.5, 2).period();
        MESSAGE("escape time from x2 with zero offset: " << r.departure.escape_time);
        CHECK(r.departure.initial_distance < 1e-5);
        CHECK((r.departure.escape_time < 0 || r.departure.escape_time >= 5 * p2));
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(heteroclinic_probe(0.5, 1, 0.01, 3, 10), ConfigError);
        CHECK_THROWS_AS(heteroclinic_probe(0.5, 2, 0.01, 4, 10), ConfigError);
    }
}

TEST_CASE("floquet_estimate") {
    SUBCASE("signs at T = 0.5") {
        const auto unstable = floquet_estimate(0.5, 2, 1e-6, 200);
        const auto stable = floquet_estimate(0.5, 1, 1e-6, 200);
        CHECK(unstable.decided);
        CHECK(stable.decided);
        CHECK(unstable.eta > 0);
        CHECK(stable.eta < 0);
        CHECK(unstable.predicted_sign == 1);
        CHECK(stable.predicted_sign == -1);
        CHECK(unstable.log_multiplier == doctest::Approx(2 * 0.5 * unstable.eta));
        CHECK(unstable.fit_points >= 5);
        CHECK(unstable.fit_start < unstable.fit_end);
    }
    SUBCASE("parity law at T = 1") {
        std::vector<std::future<FloquetEstimate>> jobs;
        for (int n = 1; n <= 4; ++n)
            jobs.push_back(std::async(std::launch::async, [n] { return floquet_estimate(1.0, n, 1e-6, 200); }));
        for (int n = 1; n <= 4; ++n) {
            const auto e = jobs[n - 1].get();
            MESSAGE("T = 1, n = " << n << ": eta = " << e.eta << ", residual " << e.fit_residual);
            CAPTURE(n);
            if (e.decided && e.fit_residual < 0.1)
                CHECK((e.eta > 0 ? 1 : -1) == e.predicted_sign);
        }
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(floquet_estimate(0.5, 1, 1e-6, 5), ConfigError);
        CHECK_THROWS_AS(floquet_estimate(0.5, 1, 0.0, 200), ConfigError);
    }
}

TEST_CASE("floquet_estimate: large-n trend at T = 0.3") {
    const double t = 0.3;
    const double asymptote = 2.0 / 3.0 * t * t;
    std::vector<std::future<FloquetEstimate>> jobs;
    for (int n : {3, 5, 7, 9})
        jobs.push_back(std::async(std::launch::async, [=] { return floquet_estimate(t, n, 1e-6, 200); }));
    int n = 3;
    for (auto& j : jobs) {
        const auto e = j.get();
        MESSAGE("T = 0.3, n = " << n << ": 2T|eta| = " << std::abs(e.log_multiplier) << " vs (2/3)T^2 = "
                                << asymptote);
        CHECK(e.decided);
        CHECK(e.eta < 0);
        CHECK(std::abs(std::abs(e.log_multiplier) - asymptote) / asymptote < 0.1);
        n += 2;
    }
}

TEST_CASE("stability_region") {
    CHECK(stability_region(0.5));
    CHECK_FALSE(stability_region(std::numbers::pi * std::sqrt(1.5)));
    CHECK_FALSE(stability_region(3.8476494904855922));
    CHECK(stability_region(3.8476494904855));
    CHECK_THROWS_AS(stability_region(0.0), DomainError);
    CHECK_FALSE(stability_region(4.0));
    CHECK(stability_region(3.8));
}

TEST_CASE("ProbeRecord JSON") {
    ProbeRecord r;
    r.delay = 0.5;
    r.n = 1;
    r.initial_amplitude = 4.3;
    r.outcome = Outcome::converged_to;
    r.final_amplitude = 7.5139958;
    r.eta = -0.18;
    r.fit_residual = 0.01;
    const auto j = nlohmann::ordered_json::parse(to_json(r));
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it)
        keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"T", "n", "initial_A", "outcome", "final_amplitude", "eta",
                                           "fit_residual"});
    CHECK(j["outcome"] == "converged_to");
    CHECK(j["initial_A"].get<double>() == 4.3);
    CHECK(std::string(to_string(Outcome::escaped_from)) == "escaped_from");
    CHECK(std::string(to_string(Outcome::undecided)) == "undecided");
}
