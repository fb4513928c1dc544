#include "scbf/jump_noise.hpp"

#include <cmath>
#include <numeric>

#include "scbf/errors.hpp"
#include "scbf/spectral_ops.hpp"

namespace scbf {

namespace {

// 32-point Gauss-Legendre nodes/weights on [-1,1], generated by Newton
// iteration on Legendre polynomials at first use.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        for (int i = 0; i < n; ++i) {
            double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            nodes[static_cast<std::size_t>(i)] = x;
            weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre& gauss32() {
    static GaussLegendre g(32);
    return g;
}

}  // namespace

MarkDistribution MarkDistribution::two_point(double z_minus, double z_plus, double w_minus,
                                             double w_plus, double total_rate) {
    return discrete({z_minus, z_plus}, {w_minus, w_plus}, total_rate);
}

MarkDistribution MarkDistribution::uniform(double lo, double hi, double total_rate) {
    if (!(hi > lo)) throw ConfigurationError("uniform mark interval must have hi > lo");
    if (total_rate < 0.0) throw ConfigurationError("jump rate must be nonnegative");
    MarkDistribution m;
    m.kind_ = Kind::uniform;
    m.rate_ = total_rate;
    m.lo_ = lo;
    m.hi_ = hi;
    return m;
}

MarkDistribution MarkDistribution::discrete(std::vector<double> atoms,
                                            std::vector<double> weights, double total_rate) {
    if (atoms.empty() || atoms.size() != weights.size())
        throw ConfigurationError("mark atom and weight lists must be nonempty and equal-sized");
    if (total_rate < 0.0) throw ConfigurationError("jump rate must be nonnegative");
    double wsum = 0.0;
    for (const double w : weights) {
        if (w < 0.0) throw ConfigurationError("mark weights must be nonnegative");
        wsum += w;
    }
    if (wsum <= 0.0) throw ConfigurationError("mark weights must have positive total");
    MarkDistribution m;
    m.kind_ = atoms.size() == 2 ? Kind::two_point : Kind::discrete_list;
    m.rate_ = total_rate;
    m.atoms_ = std::move(atoms);
    m.weights_ = std::move(weights);
    for (auto& w : m.weights_) w /= wsum;
    m.cumw_.resize(m.weights_.size());
    std::partial_sum(m.weights_.begin(), m.weights_.end(), m.cumw_.begin());
    m.cumw_.back() = 1.0;
    return m;
}

double MarkDistribution::integrate(const std::function<double(double)>& f) const {
    if (rate_ == 0.0) return 0.0;
    if (kind_ == Kind::uniform) {
        const auto& g = gauss32();
        const double half = 0.5 * (hi_ - lo_);
        const double mid = 0.5 * (hi_ + lo_);
        double acc = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            acc += g.weights[i] * f(mid + half * g.nodes[i]);
        // mean over the interval times the total rate
        return rate_ * 0.5 * acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) acc += weights_[i] * f(atoms_[i]);
    return rate_ * acc;
}

double MarkDistribution::sample(RngStream& rng) const {
    if (kind_ == Kind::uniform) return lo_ + rng.uniform01() * (hi_ - lo_);
    return atoms_[rng.discrete(cumw_)];
}

JumpModel::JumpModel(NoiseFamily family, MarkDistribution marks, ScalarMarkFn coeff,
                     SpectralField anchor_or_shape)
    : family_(family), marks_(std::move(marks)), coeff_(coeff),
      field_(std::move(anchor_or_shape)) {
    if (family_ == NoiseFamily::additive && field_.empty())
        throw ConfigurationError("additive noise needs a shape field");
}

SpectralField JumpModel::coefficient(const SpectralField& u, double z) const {
    const double s = coeff_(z);
    SpectralField out;
    switch (family_) {
        case NoiseFamily::linear_multiplicative:
            out = u;
            out *= s;
            break;
        case NoiseFamily::stabilizing:
            if (field_.empty()) {
                out = u;
            } else {
                u.require_same_domain(field_);
                out = u - field_;
            }
            out *= s;
            break;
        case NoiseFamily::additive:
            field_.require_same_domain(u);
            out = field_;
            out *= s;
            break;
    }
    return leray_project(out);
}

SpectralField JumpModel::compensator_drift(const SpectralField& u) const {
    const double mean_coeff = marks_.integrate([this](double z) { return coeff_(z); });
    SpectralField out;
    switch (family_) {
        case NoiseFamily::linear_multiplicative:
            out = u;
            break;
        case NoiseFamily::stabilizing:
            if (field_.empty()) out = u;
            else out = u - field_;
            break;
        case NoiseFamily::additive:
            out = field_;
            break;
    }
    out *= mean_coeff;
    return leray_project(out);
}

double JumpModel::coefficient_second_moment(const SpectralField& u) const {
    const double m2 = marks_.integrate([this](double z) {
        const double s = coeff_(z);
        return s * s;
    });
    SpectralField base;
    switch (family_) {
        case NoiseFamily::linear_multiplicative:
            base = u;
            break;
        case NoiseFamily::stabilizing:
            if (field_.empty()) base = u;
            else base = u - field_;
            break;
        case NoiseFamily::additive:
            base = field_;
            break;
    }
    base = leray_project(base);
    const double nh = norm_h(base);
    return m2 * nh * nh;
}

NoiseConstants JumpModel::derive_constants() const {
    NoiseConstants out;
    const double m2 = marks_.integrate([this](double z) {
        const double s = coeff_(z);
        return s * s;
    });
    switch (family_) {
        case NoiseFamily::linear_multiplicative:
            out.growth_k = m2;
            out.lipschitz_l = m2;
            break;
        case NoiseFamily::stabilizing: {
            // atoms must keep 1 + g(z) positive for the log-Ito expansion
            if (marks_.kind() == MarkDistribution::Kind::uniform) {
                if (coeff_(marks_.lo()) <= -1.0 || coeff_(marks_.hi()) <= -1.0)
                    throw AdmissibilityError("stabilizing coefficient must satisfy g(z) > -1");
            } else {
                for (const double z : marks_.atoms())
                    if (coeff_(z) <= -1.0)
                        throw AdmissibilityError(
                            "stabilizing coefficient must satisfy g(z) > -1");
            }
            out.lipschitz_l = m2;
            const double anchor_h = field_.empty() ? 0.0 : norm_h(field_);
            out.growth_k = m2 * (1.0 + anchor_h * anchor_h);
            out.rho = marks_.integrate(
                [this](double z) { const double g = coeff_(z); return g - std::log1p(g); });
            break;
        }
        case NoiseFamily::additive: {
            out.lipschitz_l = 0.0;
            const double nh = norm_h(leray_project(field_));
            out.growth_k = m2 * nh * nh;
            break;
        }
    }
    return out;
}

std::vector<JumpEvent> sample_jump_events(const MarkDistribution& marks, double T,
                                          RngStream& rng) {
    if (T <= 0.0) throw ConfigurationError("jump sampling horizon must be positive");
    std::vector<JumpEvent> events;
    const double nu = marks.total_rate();
    if (nu == 0.0) return events;
    double t = rng.exponential(nu);
    while (t <= T) {
        events.push_back(JumpEvent{t, marks.sample(rng)});
        t += rng.exponential(nu);
    }
    return events;
}

ItoIsometryResult ito_isometry_estimate(const JumpModel& model, const SpectralField& u_frozen,
                                        double T, int paths, std::uint64_t seed) {
    if (paths < 2) throw ConfigurationError("isometry estimate needs at least 2 paths");
    const SpectralField drift = model.compensator_drift(u_frozen);

    std::vector<double> sq(static_cast<std::size_t>(paths));
    for (int p = 0; p < paths; ++p) {
        RngStream rng(seed, static_cast<std::uint64_t>(p), 0);
        const auto events = sample_jump_events(model.marks(), T, rng);
        SpectralField m(u_frozen.domain_ptr());
        for (const auto& ev : events) m += model.coefficient(u_frozen, ev.mark);
        m.axpy(-T, drift);
        const double nh = norm_h(m);
        sq[static_cast<std::size_t>(p)] = nh * nh;
    }

    ItoIsometryResult res;
    double mean = 0.0;
    for (const double v : sq) mean += v;
    mean /= static_cast<double>(paths);
    double var = 0.0;
    for (const double v : sq) var += (v - mean) * (v - mean);
    var /= static_cast<double>(paths - 1);
    res.mc_mean = mean;
    res.stderr_mc = std::sqrt(var / static_cast<double>(paths));
    res.analytic = T * model.coefficient_second_moment(u_frozen);
    return res;
}

}  // namespace scbf
