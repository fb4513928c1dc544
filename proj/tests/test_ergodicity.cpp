#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scbf/ergodicity_lab.hpp"
#include "scbf/errors.hpp"
#include "scbf/spectral_ops.hpp"
#include "test_support.hpp"

using namespace scbf;
using namespace scbf::testing;

namespace {

SpectralField mode_shape(const DomainPtr& dom, double amp) {
    SpectralField phi(dom);
    phi.set_mode_pair({0, 1, 0}, {Complex(amp, 0.0), Complex(0.0, 0.0)});
    return leray_project(phi);
}

JumpModel additive_model(const DomainPtr& dom, double amp, double rate) {
    return JumpModel(NoiseFamily::additive,
                     MarkDistribution::two_point(-1.0, 1.0, 0.5, 0.5, rate),
                     {ScalarMarkFn::Mode::proportional, 1.0}, mode_shape(dom, amp));
}

SimulationConfig base_config(const DomainPtr& dom) {
    SimulationConfig cfg;
    cfg.domain = dom;
    cfg.params = CBFParameters{1.0, 1.0, 3.0};
    cfg.dt = 2e-3;
    cfg.record_every = 25;
    cfg.seed = 3;
    return cfg;
}

}  // namespace

TEST_CASE("time averages stabilize along one long path") {
    const auto dom = make_shared_domain(2, 16, 2);
    // frequent small jumps keep the time-average fluctuation inside the band
    const JumpModel model = additive_model(dom, 0.01, 32.0);
    SimulationConfig cfg = base_config(dom);
    cfg.params.mu = 4.0;
    cfg.dt = 8e-3;
    cfg.record_every = 8;
    cfg.initial = mode_shape(dom, 0.5);

    const std::vector<Observable> obs{{Observable::Kind::norm_h_sq, {0, 0, 0}},
                                      {Observable::Kind::norm_v_sq, {0, 0, 0}}};
    const TimeAverageReport rep = time_average_experiment(cfg, model, obs, 1000.0, 0.2, 0.05);
    CHECK(rep.stabilized);
    for (const auto& s : rep.series) {
        CHECK(s.average_after_burn_in > 0.0);
        CHECK(s.stabilization_rel_change <= 0.05);
        // running average matches a direct left-rule recomputation
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < s.times.size(); ++i)
            acc += s.values[i] * (s.times[i + 1] - s.times[i]);
        CHECK(s.running_avg.back() ==
              doctest::Approx(acc / s.times.back()).epsilon(1e-12));
    }

    // Cauchy in the horizon: running-average increments shrink over doublings
    {
        const auto& s = rep.series.front();
        const auto avg_at = [&](double t) {
            double out = 0.0;
            for (std::size_t i = 0; i < s.times.size(); ++i)
                if (s.times[i] <= t) out = s.running_avg[i];
            return out;
        };
        const double d1 = std::abs(avg_at(250.0) - avg_at(125.0));
        const double d2 = std::abs(avg_at(500.0) - avg_at(250.0));
        const double d3 = std::abs(avg_at(1000.0) - avg_at(500.0));
        CHECK(d2 <= d1 * 1.1);
        CHECK(d3 <= d2 * 1.1);
        CHECK(d3 <= d1);
    }

    // noise with zero rate: dissipative decay, averages go to zero
    const JumpModel none(NoiseFamily::additive,
                         MarkDistribution::discrete({1.0}, {1.0}, 0.0),
                         {ScalarMarkFn::Mode::constant, 1.0}, mode_shape(dom, 0.05));
    SimulationConfig quiet = base_config(dom);
    quiet.initial = mode_shape(dom, 0.5);
    const double quiet_initial = norm_h(quiet.initial) * norm_h(quiet.initial);
    const TimeAverageReport repq =
        time_average_experiment(quiet, none, {obs.front()}, 30.0, 0.2, 1.0);
    CHECK(repq.series.front().average_after_burn_in <= 1e-6 * quiet_initial);

    // the invariant-measure gate mu > K/(2 lambda_1) is enforced
    SimulationConfig bad = base_config(dom);
    bad.params.mu = 0.01;
    const JumpModel strong = additive_model(dom, 1.0, 4.0);
    CHECK_THROWS_AS(time_average_experiment(bad, strong, obs, 5.0), AdmissibilityError);
}

TEST_CASE("multiplicative noise vanishing at zero degenerates to the point mass") {
    const auto dom = make_shared_domain(2, 16, 2);
    const JumpModel lin(NoiseFamily::linear_multiplicative,
                        MarkDistribution::two_point(-1.0, 1.0, 0.5, 0.5, 1.0),
                        {ScalarMarkFn::Mode::constant, 0.1});
    SimulationConfig cfg = base_config(dom);
    cfg.initial = random_divfree_field(dom, 3.0, 1.0, 9);
    const double initial_value = norm_h(cfg.initial) * norm_h(cfg.initial);

    const std::vector<Observable> obs{{Observable::Kind::norm_h_sq, {0, 0, 0}}};
    const TimeAverageReport rep = time_average_experiment(cfg, lin, obs, 30.0, 0.2, 1.0);
    CHECK(rep.series.front().average_after_burn_in <= 1e-6 * initial_value);
}

TEST_CASE("tightness diagnostic ratio stays at or below one") {
    const auto dom = make_shared_domain(2, 16, 2);
    const JumpModel model = additive_model(dom, 0.05, 1.0);
    SimulationConfig cfg = base_config(dom);

    const TightnessReport rep = tightness_diagnostic(cfg, model, 4.0, 40, 0.1, 1);
    CHECK(rep.pass);
    CHECK(rep.ratio <= 1.1);

    // doubling the horizon does not grow the averaged V-integral
    const TightnessReport rep2 = tightness_diagnostic(cfg, model, 8.0, 40, 0.1, 1);
    CHECK(rep2.pass);
    const double avg1 = rep.lhs / (2.0 * cfg.params.mu - rep.growth_k);
    const double avg2 = rep2.lhs / (2.0 * cfg.params.mu - rep2.growth_k);
    CHECK(avg2 <= avg1 * 1.2 + 1e-12);

    // zero start without noise: both sides vanish
    const JumpModel none(NoiseFamily::additive,
                         MarkDistribution::discrete({1.0}, {1.0}, 0.0),
                         {ScalarMarkFn::Mode::constant, 1.0}, mode_shape(dom, 0.05));
    const TightnessReport repz = tightness_diagnostic(cfg, none, 2.0, 3, 0.1, 1);
    CHECK(repz.lhs == 0.0);
    CHECK(repz.pass);
}

TEST_CASE("long-run averages agree across initial conditions") {
    const auto dom = make_shared_domain(2, 16, 2);
    const JumpModel model = additive_model(dom, 0.03, 4.0);
    SimulationConfig cfg = base_config(dom);

    std::vector<SpectralField> u0s{SpectralField(dom),
                                   random_divfree_field(dom, 3.0, 0.4, 70),
                                   random_divfree_field(dom, 3.0, 1.2, 71)};
    const CrossCheckReport rep = ergodicity_cross_check(cfg, model, u0s, 240.0, 0.2);
    CHECK(rep.max_relative_gap <= 0.05);
    CHECK(rep.pass);

    // identical start, two seeds: gaps within the self-consistency band
    const std::vector<Observable> obs{{Observable::Kind::norm_h_sq, {0, 0, 0}}};
    SimulationConfig a = cfg;
    a.initial = u0s[1];
    a.seed = 100;
    SimulationConfig b = a;
    b.seed = 200;
    const auto ra = time_average_experiment(a, model, obs, 240.0, 0.2, 1.0);
    const auto rb = time_average_experiment(b, model, obs, 240.0, 0.2, 1.0);
    const double ga = ra.series.front().average_after_burn_in;
    const double gb = rb.series.front().average_after_burn_in;
    const double band = ra.series.front().stabilization_rel_change * std::abs(ga) +
                        rb.series.front().stabilization_rel_change * std::abs(gb);
    CHECK(std::abs(ga - gb) <= 2.0 * band + 1e-12);
}

TEST_CASE("exponential mixing of a capped-norm observable") {
    const auto dom = make_shared_domain(2, 16, 2);
    const JumpModel model = additive_model(dom, 0.05, 1.0);  // L = 0
    SimulationConfig cfg = base_config(dom);
    cfg.T = 2.5;
    cfg.record_every = 50;

    const SpectralField u0 = random_divfree_field(dom, 3.0, 1.0, 80);
    const SpectralField v0 = random_divfree_field(dom, 3.0, 0.3, 81);

    const MixingReport rep = mixing_rate_experiment(cfg, model, u0, v0, 60, 1.0, 0.1, 1);
    CHECK(rep.rate == doctest::Approx(1.0).epsilon(1e-13));  // mu - (2 eta + L) = 1
    CHECK(rep.pass);
    CHECK(rep.max_jensen_violation <= 1e-12);

    // identical starts: the gap never leaves zero
    const MixingReport same = mixing_rate_experiment(cfg, model, u0, u0, 5, 1.0, 0.1, 1);
    for (const double g : same.gap) CHECK(g <= 1e-13);
}
