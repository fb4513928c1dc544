#include "scbf/config.hpp"

#include <fstream>
#include <set>

#include "scbf/errors.hpp"
#include "scbf/serialize.hpp"
#include "scbf/spectral_ops.hpp"
#include "scbf/stationary.hpp"

namespace scbf {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ConfigurationError("unknown key \"" + key + "\" in " + where);
    }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw ConfigurationError("missing key \"" + key + "\" in " + where);
    if (!obj.at(key).is_number())
        throw ConfigurationError("key \"" + key + "\" in " + where + " must be a number");
    return obj.at(key).get<double>();
}

FieldSpec parse_field_spec(const json& j, const std::string& where) {
    FieldSpec spec;
    if (j.is_null()) return spec;
    if (!j.is_object()) throw ConfigurationError(where + " must be an object");
    const std::string type = j.value("type", "zero");
    if (type == "zero") {
        reject_unknown_keys(j, {"type"}, where);
        spec.type = FieldSpec::Type::zero;
    } else if (type == "atoms") {
        reject_unknown_keys(j, {"type", "atoms"}, where);
        if (!j.contains("atoms") || !j.at("atoms").is_array())
            throw ConfigurationError(where + " of type atoms needs an \"atoms\" array");
        spec.type = FieldSpec::Type::atoms;
        spec.atoms = j.at("atoms");
    } else if (type == "file") {
        reject_unknown_keys(j, {"type", "path"}, where);
        spec.type = FieldSpec::Type::file;
        spec.path = j.value("path", "");
        if (spec.path.empty())
            throw ConfigurationError(where + " of type file needs a \"path\"");
    } else if (type == "random") {
        reject_unknown_keys(j, {"type", "decay", "amplitude", "seed"}, where);
        spec.type = FieldSpec::Type::random;
        spec.decay = j.value("decay", 3.0);
        spec.amplitude = j.value("amplitude", 1.0);
        spec.seed = j.value("seed", 0ULL);
    } else {
        throw ConfigurationError("unknown field type \"" + type + "\" in " + where);
    }
    return spec;
}

json field_spec_to_json(const FieldSpec& spec) {
    json j;
    switch (spec.type) {
        case FieldSpec::Type::zero: j["type"] = "zero"; break;
        case FieldSpec::Type::atoms:
            j["type"] = "atoms";
            j["atoms"] = spec.atoms;
            break;
        case FieldSpec::Type::file:
            j["type"] = "file";
            j["path"] = spec.path;
            break;
        case FieldSpec::Type::random:
            j["type"] = "random";
            j["decay"] = spec.decay;
            j["amplitude"] = spec.amplitude;
            j["seed"] = spec.seed;
            break;
    }
    return j;
}

ScalarMarkFn parse_scalar_fn(const json& j, const std::string& where) {
    ScalarMarkFn fn;
    if (j.is_number()) {
        fn.mode = ScalarMarkFn::Mode::constant;
        fn.value = j.get<double>();
        return fn;
    }
    if (!j.is_object())
        throw ConfigurationError(where + " must be a number or {mode, value}");
    reject_unknown_keys(j, {"mode", "value"}, where);
    const std::string mode = j.value("mode", "constant");
    if (mode == "constant") fn.mode = ScalarMarkFn::Mode::constant;
    else if (mode == "proportional") fn.mode = ScalarMarkFn::Mode::proportional;
    else throw ConfigurationError("unknown coefficient mode \"" + mode + "\" in " + where);
    fn.value = require_number(j, "value", where);
    return fn;
}

MarkDistribution parse_marks(const json& j, double rate) {
    if (!j.is_object()) throw ConfigurationError("noise.marks must be an object");
    const std::string kind = j.value("kind", "");
    if (kind == "uniform") {
        reject_unknown_keys(j, {"kind", "lo", "hi"}, "noise.marks");
        return MarkDistribution::uniform(require_number(j, "lo", "noise.marks"),
                                         require_number(j, "hi", "noise.marks"), rate);
    }
    if (kind == "two_point" || kind == "discrete_list") {
        reject_unknown_keys(j, {"kind", "atoms"}, "noise.marks");
        if (!j.contains("atoms") || !j.at("atoms").is_array())
            throw ConfigurationError("noise.marks needs an \"atoms\" array");
        std::vector<double> zs, ws;
        for (const auto& a : j.at("atoms")) {
            reject_unknown_keys(a, {"z", "weight"}, "noise.marks.atoms[]");
            zs.push_back(require_number(a, "z", "noise.marks.atoms[]"));
            ws.push_back(require_number(a, "weight", "noise.marks.atoms[]"));
        }
        if (kind == "two_point" && zs.size() != 2)
            throw ConfigurationError("two_point marks need exactly 2 atoms");
        return MarkDistribution::discrete(std::move(zs), std::move(ws), rate);
    }
    throw ConfigurationError("unknown mark kind \"" + kind + "\"");
}

}  // namespace

SpectralField FieldSpec::resolve(const DomainPtr& dom) const {
    switch (type) {
        case Type::zero:
            return SpectralField(dom);
        case Type::atoms: {
            SpectralField u(dom);
            for (const auto& entry : atoms) {
                std::array<int, 3> k{0, 0, 0};
                const auto& kj = entry.at("k");
                if (static_cast<int>(kj.size()) != dom->dim())
                    throw ConfigurationError("atom wavevector arity does not match domain dim");
                for (int d = 0; d < dom->dim(); ++d)
                    k[static_cast<std::size_t>(d)] = kj[static_cast<std::size_t>(d)].get<int>();
                std::vector<Complex> v(static_cast<std::size_t>(dom->dim()));
                for (int c = 0; c < dom->dim(); ++c)
                    v[static_cast<std::size_t>(c)] =
                        Complex(entry.at("re")[static_cast<std::size_t>(c)].get<double>(),
                                entry.at("im")[static_cast<std::size_t>(c)].get<double>());
                u.set_mode_pair(k, v);
            }
            return leray_project(u);
        }
        case Type::file: {
            SpectralField u = load_field(path);
            if (u.domain() != *dom)
                throw ConfigurationError("field file domain does not match config domain: " +
                                         path);
            return u;
        }
        case Type::random:
            return random_divfree_field(dom, decay, amplitude, seed);
    }
    return SpectralField(dom);
}

JumpModel NoiseSpec::resolve(const DomainPtr& dom, const CBFParameters& params,
                             const SpectralField& forcing) const {
    switch (family) {
        case NoiseFamily::linear_multiplicative:
            return JumpModel(family, marks, coefficient);
        case NoiseFamily::additive:
            return JumpModel(family, marks, coefficient, shape.resolve(dom));
        case NoiseFamily::stabilizing: {
            SpectralField anchor_field_resolved;
            if (anchor == Anchor::zero) {
                anchor_field_resolved = SpectralField(dom);
            } else if (anchor == Anchor::field) {
                anchor_field_resolved = anchor_field.resolve(dom);
            } else {
                const StationaryState st =
                    solve_stationary(params, forcing, SpectralField(dom));
                if (!st.converged)
                    throw ConfigurationError(
                        "stationary anchor solve did not converge; residual = " +
                        std::to_string(st.residual_norm));
                anchor_field_resolved = st.u_inf;
            }
            return JumpModel(family, marks, coefficient, std::move(anchor_field_resolved));
        }
    }
    throw ConfigurationError("unknown noise family");
}

void ensure_monotone_admissible(const CBFParameters& p) {
    p.validate();
    if (p.r < 3.0)
        throw AdmissibilityError("monotonicity experiments need r >= 3");
    if (p.r == 3.0 && 2.0 * p.beta * p.mu < 1.0)
        throw AdmissibilityError(
            "critical exponent r = 3 requires 2*beta*mu >= 1 (got 2*beta*mu = " +
            std::to_string(2.0 * p.beta * p.mu) + ")");
}

ParsedConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigurationError("config parse error at byte " + std::to_string(e.byte) +
                                 ": " + e.what());
    }
    return parse_config_json(j);
}

ParsedConfig parse_config_json(const json& j) {
    if (!j.is_object()) throw ConfigurationError("config root must be a JSON object");
    reject_unknown_keys(j,
                        {"domain", "params", "forcing", "initial", "noise", "time",
                         "ensemble", "galerkin_modes", "experiment"},
                        "config root");

    ParsedConfig out;

    if (!j.contains("domain")) throw ConfigurationError("config needs a \"domain\" section");
    const json& jd = j.at("domain");
    reject_unknown_keys(jd, {"dim", "N", "oversample"}, "domain");
    const int dim = static_cast<int>(require_number(jd, "dim", "domain"));
    const int n = static_cast<int>(require_number(jd, "N", "domain"));
    const int oversample = static_cast<int>(jd.value("oversample", 4.0));
    out.sim.domain = make_shared_domain(dim, n, oversample);

    if (!j.contains("params")) throw ConfigurationError("config needs a \"params\" section");
    const json& jp = j.at("params");
    reject_unknown_keys(jp, {"mu", "beta", "r"}, "params");
    out.sim.params.mu = require_number(jp, "mu", "params");
    out.sim.params.beta = require_number(jp, "beta", "params");
    out.sim.params.r = require_number(jp, "r", "params");
    out.sim.params.validate();

    FieldSpec forcing_spec;
    if (j.contains("forcing")) forcing_spec = parse_field_spec(j.at("forcing"), "forcing");
    out.sim.forcing = forcing_spec.resolve(out.sim.domain);

    FieldSpec initial_spec;
    if (j.contains("initial")) initial_spec = parse_field_spec(j.at("initial"), "initial");
    out.sim.initial = initial_spec.resolve(out.sim.domain);

    if (j.contains("time")) {
        const json& jt = j.at("time");
        reject_unknown_keys(jt, {"T", "dt", "record_every"}, "time");
        out.sim.T = jt.value("T", 1.0);
        out.sim.dt = jt.value("dt", 1e-3);
        out.sim.record_every = static_cast<int>(jt.value("record_every", 10.0));
    }

    if (j.contains("ensemble")) {
        const json& je = j.at("ensemble");
        reject_unknown_keys(je, {"paths", "seed"}, "ensemble");
        out.paths = static_cast<int>(je.value("paths", 1.0));
        out.sim.seed = je.value("seed", 0ULL);
        if (out.paths < 1) throw ConfigurationError("ensemble.paths must be >= 1");
    }

    if (j.contains("galerkin_modes")) {
        out.sim.galerkin_modes = j.at("galerkin_modes").get<int>();
        if (out.sim.galerkin_modes < 1 || out.sim.galerkin_modes > n / 2)
            throw ConfigurationError("galerkin_modes must lie in [1, N/2]");
    }

    if (j.contains("noise") && !j.at("noise").is_null()) {
        const json& jn = j.at("noise");
        reject_unknown_keys(jn, {"family", "marks", "rate", "sigma", "g", "h", "anchor",
                                 "shape"},
                            "noise");
        NoiseSpec spec;
        const std::string family = jn.value("family", "");
        const double rate = require_number(jn, "rate", "noise");
        if (!jn.contains("marks")) throw ConfigurationError("noise needs a \"marks\" section");
        spec.marks = parse_marks(jn.at("marks"), rate);

        if (family == "linear_multiplicative") {
            spec.family = NoiseFamily::linear_multiplicative;
            if (!jn.contains("sigma"))
                throw ConfigurationError("linear_multiplicative noise needs \"sigma\"");
            spec.coefficient = parse_scalar_fn(jn.at("sigma"), "noise.sigma");
        } else if (family == "stabilizing") {
            spec.family = NoiseFamily::stabilizing;
            if (!jn.contains("g")) throw ConfigurationError("stabilizing noise needs \"g\"");
            spec.coefficient = parse_scalar_fn(jn.at("g"), "noise.g");
            if (jn.contains("anchor")) {
                const json& ja = jn.at("anchor");
                if (ja.is_string()) {
                    const std::string a = ja.get<std::string>();
                    if (a == "zero") spec.anchor = NoiseSpec::Anchor::zero;
                    else if (a == "solve") spec.anchor = NoiseSpec::Anchor::solve;
                    else throw ConfigurationError("anchor must be \"zero\", \"solve\" or a field spec");
                } else {
                    spec.anchor = NoiseSpec::Anchor::field;
                    spec.anchor_field = parse_field_spec(ja, "noise.anchor");
                }
            }
        } else if (family == "additive") {
            spec.family = NoiseFamily::additive;
            if (!jn.contains("h")) throw ConfigurationError("additive noise needs \"h\"");
            spec.coefficient = parse_scalar_fn(jn.at("h"), "noise.h");
            if (!jn.contains("shape"))
                throw ConfigurationError("additive noise needs a \"shape\" field spec");
            spec.shape = parse_field_spec(jn.at("shape"), "noise.shape");
        } else {
            throw ConfigurationError("unknown noise family \"" + family + "\"");
        }
        out.noise_spec = spec;
        out.sim.noise = spec.resolve(out.sim.domain, out.sim.params, out.sim.forcing);
    }

    out.experiment = j.value("experiment", json::object());

    // manifest body: every tunable, defaults included
    json resolved;
    resolved["domain"] = {{"dim", dim}, {"N", n}, {"oversample", oversample}};
    resolved["params"] = {{"mu", out.sim.params.mu},
                          {"beta", out.sim.params.beta},
                          {"r", out.sim.params.r}};
    resolved["forcing"] = field_spec_to_json(forcing_spec);
    resolved["initial"] = field_spec_to_json(initial_spec);
    resolved["time"] = {{"T", out.sim.T}, {"dt", out.sim.dt},
                        {"record_every", out.sim.record_every}};
    resolved["ensemble"] = {{"paths", out.paths}, {"seed", out.sim.seed}};
    resolved["galerkin_modes"] = out.sim.effective_kmax();
    if (j.contains("noise") && !j.at("noise").is_null()) resolved["noise"] = j.at("noise");
    else resolved["noise"] = nullptr;
    resolved["experiment"] = out.experiment;
    out.resolved = std::move(resolved);

    out.sim.validate();
    return out;
}

}  // namespace scbf
