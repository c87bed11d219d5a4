#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "wvrecon/grid.hpp"
#include "wvrecon/reconstructor.hpp"
#include "wvrecon/sampler.hpp"
#include "wvrecon/wigner.hpp"

namespace wvrecon {

// Floating-point serialization uses 17 significant digits everywhere so data
// files round-trip bit-exactly.
std::string format_g17(double v);

std::string wavefunction_csv(const Wavefunction& psi);           // coordinate,re,im
std::string wigner_csv(const WignerGrid& w);                     // X,P,W
std::string records_csv(std::span<const MeasurementRecord> rs);  // P,x
std::string binned_csv(const BinnedEstimates& b);  // bin_center,count,p_hat,e_hat,stderr,gap

// P,p_density,E_meter,ReXw,ImXw,valid on the dense momentum grid
struct ExactStatsRow {
    double P;
    double p_density;
    double e_meter;
    double re_xw;
    double im_xw;
    bool valid;
};
std::string exact_stats_csv(std::span<const ExactStatsRow> rows);

// P,modulus,phase,segment_id at the bin centers
std::string reconstruction_csv(const PhaseProfile& profile, std::span<const double> modulus);

// {"terms":[{"coeff":[re,im],"alpha":[re,im]}],"normalized":true}
StateDescriptor descriptor_from_json(const nlohmann::json& j);
nlohmann::ordered_json descriptor_to_json(const StateDescriptor& d);
StateDescriptor load_descriptor(const std::filesystem::path& path);

// Writes content and returns its SHA-256 hex digest.
std::string write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace wvrecon
