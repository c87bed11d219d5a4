#include "wvrecon/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wvrecon/errors.hpp"
#include "wvrecon/sha256.hpp"

namespace wvrecon {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string wavefunction_csv(const Wavefunction& psi) {
    std::string out = "coordinate,re,im\n";
    for (std::size_t i = 0; i < psi.grid.n_points; ++i) {
        out += format_g17(psi.grid.value(i));
        out += ',';
        out += format_g17(psi.amplitudes[i].real());
        out += ',';
        out += format_g17(psi.amplitudes[i].imag());
        out += '\n';
    }
    return out;
}

std::string wigner_csv(const WignerGrid& w) {
    std::string out = "X,P,W\n";
    for (std::size_t i = 0; i < w.x_axis.n_points; ++i) {
        const std::string xs = format_g17(w.x_axis.value(i));
        for (std::size_t k = 0; k < w.p_axis.n_points; ++k) {
            out += xs;
            out += ',';
            out += format_g17(w.p_axis.value(k));
            out += ',';
            out += format_g17(w.at(i, k));
            out += '\n';
        }
    }
    return out;
}

std::string records_csv(std::span<const MeasurementRecord> rs) {
    std::string out = "P,x\n";
    for (const auto& r : rs) {
        out += format_g17(r.P_outcome);
        out += ',';
        out += format_g17(r.x_outcome);
        out += '\n';
    }
    return out;
}

std::string binned_csv(const BinnedEstimates& b) {
    std::string out = "bin_center,count,p_hat,e_hat,stderr,gap\n";
    for (std::size_t i = 0; i < b.bin_centers.size(); ++i) {
        out += format_g17(b.bin_centers[i]);
        out += ',';
        out += std::to_string(b.counts[i]);
        out += ',';
        out += format_g17(b.p_hat[i]);
        out += ',';
        out += format_g17(b.e_hat[i]);
        out += ',';
        out += format_g17(b.std_error[i]);
        out += ',';
        out += b.gap_flags[i] ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string exact_stats_csv(std::span<const ExactStatsRow> rows) {
    std::string out = "P,p_density,E_meter,ReXw,ImXw,valid\n";
    for (const auto& r : rows) {
        out += format_g17(r.P);
        out += ',';
        out += format_g17(r.p_density);
        out += ',';
        out += format_g17(r.e_meter);
        out += ',';
        out += format_g17(r.re_xw);
        out += ',';
        out += format_g17(r.im_xw);
        out += ',';
        out += r.valid ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string reconstruction_csv(const PhaseProfile& profile, std::span<const double> modulus) {
    std::string out = "P,modulus,phase,segment_id\n";
    for (std::size_t i = 0; i < profile.P_values.size(); ++i) {
        out += format_g17(profile.P_values[i]);
        out += ',';
        out += format_g17(modulus[i]);
        out += ',';
        out += format_g17(profile.phase[i]);
        out += ',';
        out += std::to_string(profile.segment_id[i]);
        out += '\n';
    }
    return out;
}

namespace {

cxd complex_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError(std::string(what) + " must be a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

StateDescriptor descriptor_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) {
        throw ConfigError("state descriptor JSON needs a \"terms\" array");
    }
    StateDescriptor d;
    d.normalized = j.value("normalized", true);
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("coeff") || !t.contains("alpha")) {
            throw ConfigError("descriptor term needs \"coeff\" and \"alpha\"");
        }
        d.terms.push_back({complex_from_json(t["coeff"], "coeff"),
                           complex_from_json(t["alpha"], "alpha")});
    }
    validate(d);
    return d;
}

nlohmann::ordered_json descriptor_to_json(const StateDescriptor& d) {
    nlohmann::ordered_json j;
    j["terms"] = nlohmann::ordered_json::array();
    for (const auto& t : d.terms) {
        j["terms"].push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}},
                              {"alpha", {t.alpha.real(), t.alpha.imag()}}});
    }
    j["normalized"] = d.normalized;
    return j;
}

StateDescriptor load_descriptor(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open state file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad JSON in " + path.string() + ": " + e.what());
    }
    return descriptor_from_json(j);
}

std::string write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw ConfigError("short write to " + path.string());
    return sha256_hex(content);
}

}  // namespace wvrecon
