#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "scbf/integrator.hpp"
#include "scbf/jump_noise.hpp"

namespace scbf {

/// Declarative field description resolved against a domain.
struct FieldSpec {
    enum class Type { zero, atoms, file, random };
    Type type = Type::zero;
    nlohmann::json atoms;  // [{"k":[...],"re":[...],"im":[...]}]
    std::string path;
    double decay = 3.0;
    double amplitude = 1.0;
    std::uint64_t seed = 0;

    SpectralField resolve(const DomainPtr& dom) const;
};

/// Noise description; the stabilizing anchor may ask for the stationary
/// state of the drift, which is resolved against the forcing on demand.
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::additive;
    MarkDistribution marks;
    ScalarMarkFn coefficient;
    enum class Anchor { zero, solve, field } anchor = Anchor::zero;
    FieldSpec anchor_field;  // when anchor == field
    FieldSpec shape;         // additive family

    JumpModel resolve(const DomainPtr& dom, const CBFParameters& params,
                      const SpectralField& forcing) const;
};

struct ParsedConfig {
    SimulationConfig sim;
    std::optional<NoiseSpec> noise_spec;
    int paths = 1;
    nlohmann::json experiment;  // free-form, command-specific
    nlohmann::json resolved;    // full config with defaults filled (manifest body)
};

/// Strict parse: unknown keys are rejected, malformed JSON errors carry the
/// byte position, inadmissible parameter combinations name the condition.
ParsedConfig parse_config(const std::string& path);
ParsedConfig parse_config_json(const nlohmann::json& j);

/// Gate used by monotonicity-dependent commands: r = 3 requires
/// 2*beta*mu >= 1 (critical-exponent condition).
void ensure_monotone_admissible(const CBFParameters& p);

}  // namespace scbf
