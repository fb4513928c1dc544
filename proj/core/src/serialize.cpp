#include "scbf/serialize.hpp"

#include <cstdio>
#include <fstream>

#include "scbf/errors.hpp"

namespace scbf {

nlohmann::json field_to_json(const SpectralField& u) {
    const auto& dom = u.domain();
    nlohmann::json j;
    j["domain"] = {{"dim", dom.dim()},
                   {"N", dom.resolution()},
                   {"oversample", dom.oversample()}};
    auto modes = nlohmann::json::array();
    const std::size_t nm = dom.num_modes();
    for (std::size_t f = 0; f < nm; ++f) {
        bool nonzero = false;
        for (int c = 0; c < dom.dim(); ++c)
            if (u.at(c, f) != Complex(0.0, 0.0)) nonzero = true;
        if (!nonzero) continue;
        const auto k = dom.wavevector(f);
        nlohmann::json entry;
        auto kj = nlohmann::json::array();
        for (int d = 0; d < dom.dim(); ++d) kj.push_back(k[static_cast<std::size_t>(d)]);
        auto re = nlohmann::json::array();
        auto im = nlohmann::json::array();
        for (int c = 0; c < dom.dim(); ++c) {
            re.push_back(u.at(c, f).real());
            im.push_back(u.at(c, f).imag());
        }
        entry["k"] = std::move(kj);
        entry["re"] = std::move(re);
        entry["im"] = std::move(im);
        modes.push_back(std::move(entry));
    }
    j["modes"] = std::move(modes);
    return j;
}

SpectralField field_from_json(const nlohmann::json& j) {
    const auto& jd = j.at("domain");
    const auto dom = make_shared_domain(jd.at("dim").get<int>(), jd.at("N").get<int>(),
                                        jd.value("oversample", 4));
    SpectralField u(dom);
    for (const auto& entry : j.at("modes")) {
        std::array<int, 3> k{0, 0, 0};
        const auto& kj = entry.at("k");
        if (static_cast<int>(kj.size()) != dom->dim())
            throw ConfigurationError("mode wavevector arity does not match the domain");
        for (int d = 0; d < dom->dim(); ++d) k[static_cast<std::size_t>(d)] = kj[static_cast<std::size_t>(d)].get<int>();
        const std::size_t f = u.flat_index(k);
        for (int c = 0; c < dom->dim(); ++c)
            u.at(c, f) = Complex(entry.at("re")[static_cast<std::size_t>(c)].get<double>(),
                                 entry.at("im")[static_cast<std::size_t>(c)].get<double>());
    }
    return u;
}

void save_field(const SpectralField& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigurationError("cannot open for writing: " + path);
    out << field_to_json(u).dump(2) << "\n";
}

SpectralField load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open field file: " + path);
    nlohmann::json j;
    in >> j;
    return field_from_json(j);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace scbf
