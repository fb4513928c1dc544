#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "scbf/config.hpp"
#include "scbf/ergodicity_lab.hpp"
#include "scbf/errors.hpp"
#include "scbf/integrator.hpp"
#include "scbf/serialize.hpp"
#include "scbf/stability_lab.hpp"
#include "scbf/stationary.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scbf;

namespace {

constexpr const char* kVersion = "0.1.0";

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot write " + path.string());
    out << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ",";
        row += cells[i];
    }
    row += "\n";
    return row;
}

std::string f(double v) { return format_double(v); }

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
    std::string text = "t,norm_H,norm_V,norm_Lr1,is_jump\n";
    for (const auto& s : traj.samples)
        text += csv_row({f(s.t), f(s.norm_h), f(s.norm_v), f(s.norm_lr1),
                         s.is_jump ? "1" : "0"});
    write_text(path, text);
}

void write_jumps_csv(const fs::path& path, const Trajectory& traj) {
    std::string text = "tau,z,gamma_norm_H\n";
    for (const auto& jm : traj.jumps)
        text += csv_row({f(jm.time), f(jm.mark), f(jm.coeff_norm_h)});
    write_text(path, text);
}

json ledger_to_json(const EnergyLedger& ledger) {
    return json{{"initial_energy", ledger.initial_energy},
                {"kinetic_delta", ledger.kinetic_delta},
                {"viscous", ledger.viscous},
                {"damping", ledger.damping},
                {"forcing_work", ledger.forcing_work},
                {"jump_qv", ledger.jump_qv},
                {"martingale_term", ledger.martingale_term},
                {"residual", ledger.residual}};
}

void write_decay_csv(const fs::path& path, const DecayReport& rep) {
    std::string text = "t,ms_distance,envelope,stderr\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        text += csv_row({f(rep.times[i]), f(rep.mean_sq[i]), f(rep.envelope[i]),
                         f(rep.stderr_mc[i])});
    write_text(path, text);
}

json decay_verdict(const DecayReport& rep) {
    return json{{"rate", rep.rate},
                {"initial_sq", rep.initial_sq},
                {"fitted_slope", rep.fitted_slope},
                {"paths", rep.paths},
                {"tol", rep.tol},
                {"pass", rep.pass},
                {"first_violation_time", rep.first_violation_time}};
}

int run_simulate(const ParsedConfig& cfg, const fs::path& out, int threads) {
    std::vector<Trajectory> trajectories(static_cast<std::size_t>(cfg.paths));
    std::vector<EnergyLedger> ledgers(static_cast<std::size_t>(cfg.paths));
    parallel_paths(cfg.paths, threads, [&](int p) {
        auto [traj, ledger] = simulate_path(cfg.sim, p);
        trajectories[static_cast<std::size_t>(p)] = std::move(traj);
        ledgers[static_cast<std::size_t>(p)] = ledger;
    });
    for (int p = 0; p < cfg.paths; ++p) {
        const std::string idx = std::to_string(p);
        write_trajectory_csv(out / ("trajectory_" + idx + ".csv"),
                             trajectories[static_cast<std::size_t>(p)]);
        write_jumps_csv(out / ("jumps_" + idx + ".csv"),
                        trajectories[static_cast<std::size_t>(p)]);
        write_json(out / ("ledger_" + idx + ".json"),
                   ledger_to_json(ledgers[static_cast<std::size_t>(p)]));
    }
    return 0;
}

int run_verify_operators(const ParsedConfig& cfg, const fs::path& out, int threads) {
    (void)threads;
    const json& exp = cfg.experiment;
    const int count = exp.value("count", 1000);
    std::vector<double> rs;
    if (exp.contains("rs"))
        for (const auto& r : exp.at("rs")) rs.push_back(r.get<double>());
    else rs.push_back(cfg.sim.params.r);

    for (const double r : rs) {
        CBFParameters p = cfg.sim.params;
        p.r = r;
        ensure_monotone_admissible(p);
    }

    json cases = json::array();
    bool all_passed = true;
    const auto dom = cfg.sim.domain;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t seed_u = cfg.sim.seed + 2ULL * static_cast<std::uint64_t>(i);
        const std::uint64_t seed_v = seed_u + 1ULL;
        const SpectralField u = random_divfree_field(dom, 3.0, 1.0, seed_u);
        const SpectralField v = random_divfree_field(dom, 3.0, 1.0, seed_v);
        const double r = rs[static_cast<std::size_t>(i) % rs.size()];
        CBFParameters p = cfg.sim.params;
        p.r = r;

        const MonotonicityReport rep = monotonicity_gap(u, v, p);
        const double b_pair = std::abs(inner_h(bilinear_b(u), u));
        const double c_pair = inner_h(nonlinear_c(u, r), u);
        const double lr1 = norm_lp(u, r + 1.0);
        const double c_identity_err =
            std::abs(c_pair - std::pow(lr1, r + 1.0)) / std::max(1.0, c_pair);
        const bool case_passed = rep.passed && b_pair <= 1e-10 * std::pow(norm_h(u), 3.0) +
                                                       1e-12 &&
                                 c_identity_err <= 1e-8;
        all_passed = all_passed && case_passed;
        cases.push_back(json{{"seed", seed_u},
                             {"r", r},
                             {"mu", p.mu},
                             {"beta", p.beta},
                             {"lhs", rep.lhs + rep.eta_term},
                             {"rhs", rep.rhs_bound},
                             {"gap", rep.gap},
                             {"b_pairing", b_pair},
                             {"c_identity_rel_err", c_identity_err},
                             {"passed", case_passed}});
    }
    write_json(out / "operator_fuzz.json", cases);
    write_json(out / "verdict.json", json{{"cases", count}, {"pass", all_passed}});
    return all_passed ? 0 : 1;
}

int run_stationary(const ParsedConfig& cfg, const fs::path& out, int threads) {
    (void)threads;
    const json& exp = cfg.experiment;
    StationarySolveOptions opts;
    opts.tolerance = exp.value("tolerance", 1e-10);
    opts.newton_polish = exp.value("newton_polish", false);
    opts.max_iterations = exp.value("max_iterations", 10000);

    const StationaryState st =
        solve_stationary(cfg.sim.params, cfg.sim.forcing, cfg.sim.initial, opts);
    save_field(st.u_inf, (out / "stationary_state.json").string());
    json record{{"residual_norm", st.residual_norm},
                {"iterations", st.iterations},
                {"converged", st.converged}};

    bool pass = st.converged;
    const int n_inits = exp.value("uniqueness_inits", 0);
    if (n_inits > 0) {
        const UniquenessProbeResult probe =
            uniqueness_probe(cfg.sim.params, cfg.sim.forcing, n_inits, cfg.sim.seed, opts);
        record["uniqueness"] = json{{"max_pairwise_distance", probe.max_pairwise_distance},
                                    {"converged_count", probe.converged_count},
                                    {"total", probe.total},
                                    {"conclusive", probe.conclusive}};
        pass = pass && probe.conclusive && probe.max_pairwise_distance <= 1e-8;
    }
    record["pass"] = pass;
    write_json(out / "convergence.json", record);
    return pass ? 0 : 1;
}

JumpModel require_noise(const ParsedConfig& cfg) {
    if (!cfg.sim.noise)
        throw ConfigurationError("this experiment needs a \"noise\" section in the config");
    return *cfg.sim.noise;
}

int run_stability(const ParsedConfig& cfg, const fs::path& out, int threads) {
    const json& exp = cfg.experiment;
    const std::string kind = exp.value("kind", "meansquare");
    const double tol = exp.value("tol", 0.1);
    const JumpModel model = require_noise(cfg);

    if (kind == "meansquare") {
        const DecayReport rep =
            meansquare_decay_experiment(cfg.sim, model, cfg.paths, tol, threads);
        write_decay_csv(out / "decay_report.csv", rep);
        write_json(out / "verdict.json", decay_verdict(rep));
        return rep.pass ? 0 : 1;
    }
    if (kind == "pathwise") {
        const double window = exp.value("window", 0.5);
        const StabilityConstants c = stability_constants(cfg.sim.params, model);
        const double eps = exp.value("eps", 0.5 * c.theta);
        const double min_fraction = exp.value("min_fraction", 0.95);
        const PathwiseReport rep =
            pathwise_decay_experiment(cfg.sim, model, cfg.paths, window, eps, threads);
        std::string text = "path,n0\n";
        for (std::size_t p = 0; p < rep.n0_per_path.size(); ++p)
            text += csv_row({std::to_string(p), std::to_string(rep.n0_per_path[p])});
        write_text(out / "pathwise_n0.csv", text);
        const bool pass = rep.satisfied_fraction >= min_fraction;
        write_json(out / "verdict.json",
                   json{{"theta", rep.theta},
                        {"eps", rep.eps},
                        {"window", rep.window},
                        {"satisfied_fraction", rep.satisfied_fraction},
                        {"pass", pass}});
        return pass ? 0 : 1;
    }
    if (kind == "coupling") {
        if (!exp.contains("v0"))
            throw ConfigurationError("coupling experiment needs experiment.v0 field spec");
        // reuse the strict field-spec grammar for the second initial state
        const SpectralField v0 = [&] {
            json spec_json = exp.at("v0");
            json root;
            root["domain"] = cfg.resolved.at("domain");
            root["params"] = cfg.resolved.at("params");
            root["initial"] = spec_json;
            return parse_config_json(root).sim.initial;
        }();
        const CouplingReport rep = coupling_decay_experiment(
            cfg.sim, model, cfg.sim.initial, v0, cfg.paths, tol, threads);
        write_decay_csv(out / "decay_report.csv", rep.decay);
        json verdict = decay_verdict(rep.decay);
        verdict["max_jump_difference_change"] = rep.max_jump_difference_change;
        write_json(out / "verdict.json", verdict);
        return rep.decay.pass ? 0 : 1;
    }
    throw ConfigurationError("unknown stability experiment kind \"" + kind + "\"");
}

int run_stabilize(const ParsedConfig& cfg, const fs::path& out, int threads) {
    const json& exp = cfg.experiment;
    const double slack = exp.value("slack", 0.1);
    const double min_fraction = exp.value("min_fraction", 0.95);
    const JumpModel model = require_noise(cfg);
    const StabilizationReport rep =
        stabilization_experiment(cfg.sim, model, cfg.paths, slack, threads);

    std::string text = "path,final_quarter_slope,martingale_ratio_early,martingale_ratio_final\n";
    for (std::size_t p = 0; p < rep.final_quarter_slope.size(); ++p)
        text += csv_row({std::to_string(p), f(rep.final_quarter_slope[p]),
                         f(rep.martingale_ratio_early[p]), f(rep.martingale_ratio_final[p])});
    write_text(out / "slopes.csv", text);

    const bool pass = rep.satisfied_fraction >= min_fraction;
    write_json(out / "verdict.json", json{{"zeta", rep.zeta},
                                          {"rho", rep.rho},
                                          {"slack", rep.slack},
                                          {"satisfied_fraction", rep.satisfied_fraction},
                                          {"blowups", rep.blowups},
                                          {"pass", pass}});
    return pass ? 0 : 1;
}

Observable observable_from_json(const json& spec) {
    Observable obs;
    if (spec.is_string()) {
        const std::string name = spec.get<std::string>();
        if (name == "norm_H_sq") obs.kind = Observable::Kind::norm_h_sq;
        else if (name == "norm_V_sq") obs.kind = Observable::Kind::norm_v_sq;
        else if (name == "norm_Lr1") obs.kind = Observable::Kind::norm_lr1;
        else throw ConfigurationError("unknown observable \"" + name + "\"");
        return obs;
    }
    if (spec.is_object() && spec.value("kind", "") == "mode_energy") {
        obs.kind = Observable::Kind::mode_energy;
        const auto& k = spec.at("k");
        for (std::size_t d = 0; d < k.size() && d < 3; ++d)
            obs.mode[d] = k[d].get<int>();
        return obs;
    }
    throw ConfigurationError("observable must be a name or {kind: mode_energy, k: [...]}");
}

int run_ergodicity(const ParsedConfig& cfg, const fs::path& out, int threads) {
    const json& exp = cfg.experiment;
    const std::string kind = exp.value("kind", "time_average");
    const JumpModel model = require_noise(cfg);

    if (kind == "time_average") {
        const double T_long = exp.value("T_long", cfg.sim.T);
        const double burn_in = exp.value("burn_in", 0.2);
        std::vector<Observable> observables;
        if (exp.contains("observables"))
            for (const auto& o : exp.at("observables"))
                observables.push_back(observable_from_json(o));
        else observables.push_back(Observable{});
        const TimeAverageReport rep = time_average_experiment(
            cfg.sim, model, observables, T_long, burn_in);
        for (const auto& s : rep.series) {
            std::string text = "t,value,running_avg\n";
            for (std::size_t i = 0; i < s.times.size(); ++i)
                text += csv_row({f(s.times[i]), f(s.values[i]), f(s.running_avg[i])});
            std::string fname = s.id;
            for (auto& ch : fname)
                if (ch == '(' || ch == ')' || ch == ',') ch = '_';
            write_text(out / ("observable_" + fname + ".csv"), text);
        }
        json verdict{{"stabilized", rep.stabilized}, {"series", json::array()}};
        for (const auto& s : rep.series)
            verdict["series"].push_back(
                json{{"id", s.id},
                     {"average_after_burn_in", s.average_after_burn_in},
                     {"stabilization_rel_change", s.stabilization_rel_change}});
        write_json(out / "verdict.json", verdict);
        return rep.stabilized ? 0 : 1;
    }
    if (kind == "tightness") {
        const double T = exp.value("T", cfg.sim.T);
        const double slack = exp.value("slack", 0.1);
        const TightnessReport rep =
            tightness_diagnostic(cfg.sim, model, T, cfg.paths, slack, threads);
        write_json(out / "verdict.json", json{{"lhs", rep.lhs},
                                              {"bound", rep.bound},
                                              {"ratio", rep.ratio},
                                              {"growth_k", rep.growth_k},
                                              {"paths", rep.paths},
                                              {"pass", rep.pass}});
        return rep.pass ? 0 : 1;
    }
    if (kind == "cross_check") {
        const double T_long = exp.value("T_long", cfg.sim.T);
        const double burn_in = exp.value("burn_in", 0.2);
        std::vector<SpectralField> u0_list;
        if (exp.contains("u0_list")) {
            for (const auto& spec_json : exp.at("u0_list")) {
                json root;
                root["domain"] = cfg.resolved.at("domain");
                root["params"] = cfg.resolved.at("params");
                root["initial"] = spec_json;
                u0_list.push_back(parse_config_json(root).sim.initial);
            }
        } else {
            u0_list.push_back(SpectralField(cfg.sim.domain));
            u0_list.push_back(random_divfree_field(cfg.sim.domain, 3.0, 0.5, cfg.sim.seed + 1));
            u0_list.push_back(random_divfree_field(cfg.sim.domain, 3.0, 2.0, cfg.sim.seed + 2));
        }
        const CrossCheckReport rep =
            ergodicity_cross_check(cfg.sim, model, u0_list, T_long, burn_in);
        write_json(out / "verdict.json",
                   json{{"averages", rep.averages},
                        {"self_consistency", rep.self_consistency},
                        {"max_pairwise_gap", rep.max_pairwise_gap},
                        {"max_relative_gap", rep.max_relative_gap},
                        {"pass", rep.pass}});
        return rep.pass ? 0 : 1;
    }
    if (kind == "mixing") {
        if (!exp.contains("v0"))
            throw ConfigurationError("mixing experiment needs experiment.v0 field spec");
        json root;
        root["domain"] = cfg.resolved.at("domain");
        root["params"] = cfg.resolved.at("params");
        root["initial"] = exp.at("v0");
        const SpectralField v0 = parse_config_json(root).sim.initial;
        const double cap = exp.value("lipschitz_cap", 1.0);
        const double tol = exp.value("tol", 0.1);
        const MixingReport rep = mixing_rate_experiment(
            cfg.sim, model, cfg.sim.initial, v0, cfg.paths, cap, tol, threads);
        std::string text = "t,gap,envelope,stderr,coupling_distance\n";
        for (std::size_t i = 0; i < rep.times.size(); ++i)
            text += csv_row({f(rep.times[i]), f(rep.gap[i]), f(rep.envelope[i]),
                             f(rep.stderr_mc[i]), f(rep.coupling_distance[i])});
        write_text(out / "mixing_report.csv", text);
        write_json(out / "verdict.json",
                   json{{"rate", rep.rate},
                        {"fitted_rate", rep.fitted_rate},
                        {"lipschitz_cap", rep.lipschitz_cap},
                        {"max_jensen_violation", rep.max_jensen_violation},
                        {"paths", rep.paths},
                        {"pass", rep.pass},
                        {"first_violation_time", rep.first_violation_time}});
        return rep.pass ? 0 : 1;
    }
    throw ConfigurationError("unknown ergodicity experiment kind \"" + kind + "\"");
}

int run_isometry(const ParsedConfig& cfg, const fs::path& out, int threads) {
    (void)threads;
    const json& exp = cfg.experiment;
    const int paths = exp.value("paths", 10000);
    const double T = exp.value("T", 1.0);
    const JumpModel model = require_noise(cfg);
    const SpectralField u_frozen =
        cfg.sim.initial.empty() ? random_divfree_field(cfg.sim.domain, 3.0, 1.0, cfg.sim.seed)
                                : cfg.sim.initial;
    const ItoIsometryResult res = ito_isometry_estimate(model, u_frozen, T, paths, cfg.sim.seed);
    const bool pass = std::abs(res.mc_mean - res.analytic) <= 3.0 * res.stderr_mc;
    write_json(out / "verdict.json", json{{"mc_mean", res.mc_mean},
                                          {"analytic", res.analytic},
                                          {"stderr", res.stderr_mc},
                                          {"paths", paths},
                                          {"T", T},
                                          {"pass", pass}});
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudospectral simulator and verification lab for the stochastic "
                 "convective Brinkman-Forchheimer equations on the torus"};

    std::string command;
    std::string config_path;
    std::string out_dir = "out";
    std::int64_t seed_override = -1;
    int threads = 1;

    app.add_option("--command", command,
                   "one of: simulate, verify-operators, stationary, stability, "
                   "stabilize, ergodicity, isometry")
        ->required();
    app.add_option("--config", config_path, "JSON config path")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed_override, "override ensemble.seed");
    app.add_option("--threads", threads, "worker threads (SCBF_THREADS overrides)");

    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("SCBF_THREADS")) threads = std::atoi(env);
    if (threads < 1) threads = 1;

    const fs::path out(out_dir);
    try {
        fs::create_directories(out);
        ParsedConfig cfg = parse_config(config_path);
        if (seed_override >= 0) {
            cfg.sim.seed = static_cast<std::uint64_t>(seed_override);
            cfg.resolved["ensemble"]["seed"] = cfg.sim.seed;
        }

        json manifest{{"artifact_version", kVersion},
                      {"command", command},
                      {"seed", cfg.sim.seed},
                      {"config", cfg.resolved}};
        write_json(out / "manifest.json", manifest);

        int status = 0;
        if (command == "simulate") status = run_simulate(cfg, out, threads);
        else if (command == "verify-operators") status = run_verify_operators(cfg, out, threads);
        else if (command == "stationary") status = run_stationary(cfg, out, threads);
        else if (command == "stability") status = run_stability(cfg, out, threads);
        else if (command == "stabilize") status = run_stabilize(cfg, out, threads);
        else if (command == "ergodicity") status = run_ergodicity(cfg, out, threads);
        else if (command == "isometry") status = run_isometry(cfg, out, threads);
        else {
            std::cerr << "unknown command: " << command << "\n";
            return 2;
        }
        return status;
    } catch (const AdmissibilityError& e) {
        write_json(out / "failure.json", json{{"error", "admissibility"}, {"message", e.what()}});
        std::cerr << "admissibility error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigurationError& e) {
        write_json(out / "failure.json", json{{"error", "configuration"}, {"message", e.what()}});
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const BlowUpError& e) {
        write_json(out / "failure.json",
                   json{{"error", "blowup"},
                        {"message", e.what()},
                        {"time", e.time},
                        {"norm_h", e.norm_h}});
        std::cerr << "blow-up: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        write_json(out / "failure.json", json{{"error", "internal"}, {"message", e.what()}});
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
}
