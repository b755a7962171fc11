#pragma once

#include "sievekit/counting.hpp"
#include "sievekit/gowers.hpp"
#include "sievekit/linear_systems.hpp"
#include "sievekit/majorants.hpp"
#include "sievekit/torus.hpp"

#include <map>
#include <string>
#include <vector>

namespace sievekit {

// 12 significant digits; the repo-wide text format for reals
std::string format_real(double x);

// {"d": int, "forms": [{"coeffs": [int], "const": int}]}
std::string system_to_json(const AffineSystem& sys);
AffineSystem system_from_json(const std::string& text);

std::string singular_series_json(const SingularSeriesResult& res);

// params are spliced in as extra top-level keys, already formatted
std::string correlation_json(const CorrelationReport& rep,
                             const std::map<std::string, std::string>& params);
std::string majorization_json(const MajorizationReport& rep,
                              const std::map<std::string, std::string>& params);

// {"alpha": [[c_0, ..., c_s], ...]}, one row per torus coordinate
std::string orbit_to_json(const PolynomialOrbit& orbit);
PolynomialOrbit orbit_from_json(const std::string& text);

// {"orbit": ..., "function": {"kind": "fourier"|"trapezoid", ...}, claimed_*}
std::string nilsequence_to_json(const NilsequenceSpec& spec);
NilsequenceSpec nilsequence_from_json(const std::string& text);

std::string equidistribution_json(const EquidistributionReport& rep);
std::string identity_json(const IdentityCheckResult& res);
std::string bohr_json(const BohrReport& rep);

std::string density_csv(const DensityReport& rep);

const char* norm_method_name(NormMethod method);
std::string norm_table_csv(const std::vector<NormResult>& rows);

// weights[0] is unused padding; rows cover n = 1 .. size-1
std::string weights_csv(const std::vector<double>& weights);
void write_weights_binary(const std::string& path, const std::vector<double>& weights);
std::vector<double> read_weights_binary(const std::string& path);
std::vector<double> read_weights_csv(const std::string& path);
// dispatch on extension: .bin is binary, anything else CSV
std::vector<double> read_weights(const std::string& path);

} // namespace sievekit
