#pragma once

#include <stdexcept>
#include <string>

namespace scbf {

/// Invalid configuration: bad resolution, mismatched domains, malformed input.
class ConfigurationError : public std::runtime_error {
public:
    explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

/// A parameter combination violates an admissibility condition required by
/// the experiment (e.g. the critical-exponent coupling bound 2*beta*mu >= 1).
class AdmissibilityError : public std::runtime_error {
public:
    explicit AdmissibilityError(const std::string& what) : std::runtime_error(what) {}
};

/// A trajectory left the trusted range; carries the time and norms at abort.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, double norm_h, double norm_v, const std::string& what)
        : std::runtime_error(what), time(t), norm_h(norm_h), norm_v(norm_v) {}
    double time;
    double norm_h;
    double norm_v;
};

}  // namespace scbf
