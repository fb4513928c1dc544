#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "scbf/errors.hpp"
#include "scbf/spectral_ops.hpp"
#include "scbf/stability_lab.hpp"
#include "scbf/stationary.hpp"
#include "test_support.hpp"

using namespace scbf;
using namespace scbf::testing;

namespace {

// 2D stationary problem with a genuinely nonlinear balance
struct ForcedState {
    DomainPtr dom;
    SpectralField f;
    SpectralField u_inf;
};

ForcedState forced_state_2d(const CBFParameters& p, int n = 16) {
    ForcedState fs;
    fs.dom = make_shared_domain(2, n, 2);
    SpectralField f(fs.dom);
    // f = (0.5 sin y + 0.3 cos 2y, 0.4 sin x)
    f.set_mode_pair({0, 1, 0}, {Complex(0.0, -0.25), Complex(0.0, 0.0)});
    f.set_mode_pair({0, 2, 0}, {Complex(0.15, 0.0), Complex(0.0, 0.0)});
    f.set_mode_pair({1, 0, 0}, {Complex(0.0, 0.0), Complex(0.0, -0.2)});
    fs.f = leray_project(f);
    const StationaryState st = solve_stationary(p, fs.f, SpectralField(fs.dom));
    REQUIRE(st.converged);
    fs.u_inf = st.u_inf;
    return fs;
}

JumpModel stabilizing_model(const SpectralField& anchor, double g, double rate) {
    return JumpModel(NoiseFamily::stabilizing,
                     MarkDistribution::discrete({1.0}, {1.0}, rate),
                     {ScalarMarkFn::Mode::constant, g}, anchor);
}

}  // namespace

TEST_CASE("stability constants: closed forms and consistency at L = 0") {
    const CBFParameters p3{1.0, 1.0, 3.0};
    const auto dom = make_shared_domain(2, 16, 2);
    const JumpModel quiet = stabilizing_model(SpectralField(dom), 0.0, 1.0);
    const StabilityConstants c0 = stability_constants(p3, quiet);
    CHECK(c0.lipschitz_l == 0.0);
    CHECK(c0.kappa == c0.theta);

    const JumpModel g02 = stabilizing_model(SpectralField(dom), 0.2, 1.0);
    const StabilityConstants c1 = stability_constants(p3, g02);
    CHECK(c1.lipschitz_l == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(c1.theta == doctest::Approx(0.96).epsilon(1e-13));
    CHECK(c1.theta_admissible);

    // stabilization example: r=5, mu=0.2, beta=1, g=3 at rate 2
    const CBFParameters p5{0.2, 1.0, 5.0};
    const JumpModel g3 = stabilizing_model(SpectralField(dom), 3.0, 2.0);
    const StabilityConstants c2 = stability_constants(p5, g3);
    CHECK(c2.eta == doctest::Approx(3.125).epsilon(1e-13));
    CHECK(c2.kappa < 0.0);
    CHECK(!c2.kappa_admissible);
    CHECK(c2.rho == doctest::Approx(2.0 * (3.0 - std::log(4.0))).epsilon(1e-13));
    CHECK(c2.zeta == doctest::Approx(0.2 - 3.125 + 2.0 * (3.0 - std::log(4.0))).epsilon(1e-12));
    CHECK(c2.zeta_admissible);

    // pure function: recomputation gives identical values
    const StabilityConstants c3 = stability_constants(p5, g3);
    CHECK(c2.zeta == c3.zeta);
    CHECK(c2.theta_strict == c3.theta_strict);
}

TEST_CASE("mean-square decay envelope at theta") {
    const CBFParameters p{1.0, 1.0, 3.0};
    ForcedState fs = forced_state_2d(p);
    const JumpModel model = stabilizing_model(fs.u_inf, 0.2, 1.0);

    SimulationConfig cfg;
    cfg.domain = fs.dom;
    cfg.params = p;
    cfg.forcing = fs.f;
    cfg.initial = fs.u_inf + random_divfree_field(fs.dom, 3.0, 0.5, 42);
    cfg.T = 2.0;
    cfg.dt = 2e-3;
    cfg.record_every = 50;
    cfg.seed = 7;

    const DecayReport rep = meansquare_decay_experiment(cfg, model, 100, 0.1, 1);
    CHECK(rep.rate == doctest::Approx(0.96).epsilon(1e-13));
    CHECK(rep.pass);
    CHECK(rep.fitted_slope <= -0.5);  // actual decay at least in the envelope ballpark

    // starting on the anchor keeps every distance at round-off
    SimulationConfig at_anchor = cfg;
    at_anchor.initial = fs.u_inf;
    const DecayReport rep0 = meansquare_decay_experiment(at_anchor, model, 20, 0.1, 1);
    CHECK(rep0.pass);
    CHECK(rep0.mean_sq.back() <= 1e-12);

    // switched-off noise reduces to the deterministic envelope with theta = kappa
    const JumpModel quiet = stabilizing_model(fs.u_inf, 0.0, 1.0);
    const DecayReport repq = meansquare_decay_experiment(cfg, quiet, 3, 0.01, 1);
    CHECK(repq.rate == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(repq.pass);

    // inadmissible constants are refused with the condition named
    const CBFParameters small_mu{0.03, 1.0, 3.0};
    SimulationConfig bad = cfg;
    bad.params = small_mu;
    CHECK_THROWS_AS(meansquare_decay_experiment(bad, stabilizing_model(fs.u_inf, 0.2, 1.0),
                                                3, 0.1, 1),
                    AdmissibilityError);
}

TEST_CASE("pathwise windowed envelope") {
    const CBFParameters p{2.0, 1.0, 3.0};
    ForcedState fs = forced_state_2d(p);
    const JumpModel model = stabilizing_model(fs.u_inf, 0.1, 1.0);  // L = 0.01

    SimulationConfig cfg;
    cfg.domain = fs.dom;
    cfg.params = p;
    cfg.forcing = fs.f;
    cfg.T = 4.0;
    cfg.dt = 2e-3;
    cfg.record_every = 10;
    cfg.seed = 11;

    // start at the anchor: the bound holds from the first window on every path
    cfg.initial = fs.u_inf;
    const PathwiseReport rep0 = pathwise_decay_experiment(cfg, model, 10, 0.5, 0.9, 1);
    for (const int n0 : rep0.n0_per_path) CHECK(n0 == 0);

    // small perturbation: expect finite lock-in on nearly all paths
    cfg.initial = fs.u_inf + random_divfree_field(fs.dom, 3.0, 0.1, 13);
    const StabilityConstants c = stability_constants(p, model);
    const PathwiseReport rep =
        pathwise_decay_experiment(cfg, model, 40, 0.5, 0.5 * c.theta, 1);
    CHECK(rep.satisfied_fraction >= 0.95);

    // epsilon outside (0, theta) is rejected
    CHECK_THROWS_AS(pathwise_decay_experiment(cfg, model, 2, 0.5, 2.0 * c.theta, 1),
                    AdmissibilityError);
}

TEST_CASE("noise-induced stabilization and the martingale diagnostic") {
    const CBFParameters p{1.0, 1.0, 3.0};
    ForcedState fs = forced_state_2d(p);
    const JumpModel model = stabilizing_model(fs.u_inf, 1.0, 1.0);
    const StabilityConstants c = stability_constants(p, model);
    CHECK(c.rho == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-13));

    SimulationConfig cfg;
    cfg.domain = fs.dom;
    cfg.params = p;
    cfg.forcing = fs.f;
    SpectralField pert = random_divfree_field(fs.dom, 3.0, 1.0, 21);
    pert *= 1.0 / norm_h(pert);
    cfg.initial = fs.u_inf + pert;
    cfg.T = 8.0;
    cfg.dt = 2e-3;
    cfg.record_every = 50;
    cfg.seed = 23;

    const StabilizationReport rep = stabilization_experiment(cfg, model, 40, 0.35, 1);
    CHECK(rep.zeta == doctest::Approx(1.0 + (1.0 - std::log(2.0))).epsilon(1e-12));
    CHECK(rep.satisfied_fraction >= 0.95);
    CHECK(rep.blowups == 0);

    // |M(t)/t| shrinks from t = T/10 to t = T (10x horizon)
    CHECK(median(rep.martingale_ratio_final) <=
          0.5 * median(rep.martingale_ratio_early) + 1e-12);

    // without jumps there is no rho and the experiment refuses
    const JumpModel quiet = stabilizing_model(fs.u_inf, 0.0, 1.0);
    CHECK_THROWS_AS(stabilization_experiment(cfg, quiet, 2, 0.1, 1), AdmissibilityError);
}

TEST_CASE("synchronous coupling contraction") {
    const CBFParameters p{1.0, 1.0, 3.0};
    const auto dom = make_shared_domain(2, 16, 2);
    const JumpModel model(NoiseFamily::linear_multiplicative,
                          MarkDistribution::two_point(-1.0, 1.0, 0.5, 0.5, 1.0),
                          {ScalarMarkFn::Mode::constant, 0.1});  // L = 0.01

    SimulationConfig cfg;
    cfg.domain = dom;
    cfg.params = p;
    cfg.T = 2.0;
    cfg.dt = 2e-3;
    cfg.record_every = 50;
    cfg.seed = 31;

    const SpectralField u0 = random_divfree_field(dom, 3.0, 1.0, 33);
    const SpectralField v0 = random_divfree_field(dom, 3.0, 0.8, 34);

    const CouplingReport rep = coupling_decay_experiment(cfg, model, u0, v0, 60, 0.1, 1);
    CHECK(rep.decay.rate == doctest::Approx(0.99).epsilon(1e-13));
    CHECK(rep.decay.pass);

    // identical starts stay identical pathwise
    const CouplingReport same = coupling_decay_experiment(cfg, model, u0, u0, 5, 0.1, 1);
    for (const double ms : same.decay.mean_sq) CHECK(ms <= 1e-24);

    // additive noise cancels exactly in the difference
    SpectralField phi(dom);
    phi.set_mode_pair({0, 1, 0}, {Complex(0.2, 0.0), Complex(0.0, 0.0)});
    const JumpModel add(NoiseFamily::additive,
                        MarkDistribution::two_point(-1.0, 1.0, 0.5, 0.5, 2.0),
                        {ScalarMarkFn::Mode::proportional, 1.0}, leray_project(phi));
    const CouplingReport arep = coupling_decay_experiment(cfg, add, u0, v0, 3, 0.1, 1);
    CHECK(arep.max_jump_difference_change <= 1e-12);
    CHECK(arep.decay.rate == doctest::Approx(1.0).epsilon(1e-13));  // L = 0 rate kappa
    CHECK(arep.decay.pass);
}
