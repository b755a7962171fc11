#include "sievekit/serialization.hpp"

#include "sievekit/errors.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <utility>

namespace sievekit {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw precondition_error(std::string("invalid JSON: ") + e.what());
    }
}

const json& field(const json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end()) throw precondition_error(std::string("missing field \"") + name + "\"");
    return *it;
}

template <typename T>
T field_as(const json& j, const char* name) {
    try {
        return field(j, name).get<T>();
    } catch (const json::exception&) {
        throw precondition_error(std::string("field \"") + name + "\" has the wrong type");
    }
}

template <typename T>
T field_or(const json& j, const char* name, T fallback) {
    if (j.find(name) == j.end()) return fallback;
    return field_as<T>(j, name);
}

void append_int_array(std::ostringstream& os, const std::vector<long long>& v) {
    os << "[";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << "]";
}

const char* bool_name(bool b) { return b ? "true" : "false"; }

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

constexpr char kWeightsMagic[4] = {'S', 'K', 'W', 'T'};
constexpr std::uint32_t kWeightsVersion = 1;

} // namespace

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string system_to_json(const AffineSystem& sys) {
    std::ostringstream os;
    os << "{\"d\": " << sys.d << ", \"forms\": [";
    for (std::size_t i = 0; i < sys.forms.size(); ++i) {
        if (i) os << ", ";
        os << "{\"coeffs\": ";
        append_int_array(os, sys.forms[i].coeffs);
        os << ", \"const\": " << sys.forms[i].constant << "}";
    }
    os << "]}";
    return os.str();
}

AffineSystem system_from_json(const std::string& text) {
    const json j = parse_json(text);
    const int d = field_as<int>(j, "d");
    const json& jforms = field(j, "forms");
    if (!jforms.is_array() || jforms.empty())
        throw precondition_error("\"forms\" must be a nonempty array");
    std::vector<AffineForm> forms;
    for (const auto& jf : jforms) {
        AffineForm f;
        f.coeffs = field_as<std::vector<long long>>(jf, "coeffs");
        f.constant = field_as<long long>(jf, "const");
        if (f.dim() != d) throw precondition_error("form dimension disagrees with \"d\"");
        forms.push_back(std::move(f));
    }
    return AffineSystem::make(std::move(forms));
}

std::string singular_series_json(const SingularSeriesResult& res) {
    std::ostringstream os;
    os << "{\"value\": " << format_real(static_cast<double>(res.value))
       << ", \"error_bound\": " << format_real(static_cast<double>(res.error_bound))
       << ", \"cutoff\": " << res.cutoff_prime << ", \"exceptional_primes\": ";
    append_int_array(os, res.exceptional_primes);
    os << "}";
    return os.str();
}

std::string correlation_json(const CorrelationReport& rep,
                             const std::map<std::string, std::string>& params) {
    std::ostringstream os;
    os << "{\"sum\": " << format_real(rep.sum) << ", \"prediction\": "
       << format_real(rep.prediction) << ", \"ratio\": " << format_real(rep.ratio)
       << ", \"points\": " << rep.points << ", \"admissible_ok\": "
       << bool_name(rep.admissible_ok);
    for (const auto& [key, value] : params) os << ", \"" << key << "\": " << value;
    os << "}";
    return os.str();
}

std::string majorization_json(const MajorizationReport& rep,
                              const std::map<std::string, std::string>& params) {
    std::ostringstream os;
    os << "{\"max_ratio\": " << format_real(rep.max_ratio) << ", \"argmax\": " << rep.argmax
       << ", \"lo\": " << rep.lo << ", \"hi\": " << rep.hi
       << ", \"support_points\": " << rep.support_points
       << ", \"gamma_ok\": " << bool_name(rep.gamma_ok);
    for (const auto& [key, value] : params) os << ", \"" << key << "\": " << value;
    os << "}";
    return os.str();
}

std::string orbit_to_json(const PolynomialOrbit& orbit) {
    std::ostringstream os;
    os << "{\"alpha\": [";
    for (int i = 0; i < orbit.D; ++i) {
        if (i) os << ", ";
        os << "[";
        const auto& row = orbit.alpha[static_cast<std::size_t>(i)];
        for (std::size_t k = 0; k < row.size(); ++k)
            os << (k ? ", " : "") << format_real(row[k]);
        os << "]";
    }
    os << "]}";
    return os.str();
}

PolynomialOrbit orbit_from_json(const std::string& text) {
    const json j = parse_json(text);
    return PolynomialOrbit::make(field_as<std::vector<std::vector<double>>>(j, "alpha"));
}

namespace {

std::string function_to_json(const TorusFunction& fn) {
    std::ostringstream os;
    if (fn.kind == TorusFunction::Kind::Fourier) {
        os << "{\"kind\": \"fourier\", \"terms\": [";
        for (std::size_t i = 0; i < fn.terms.size(); ++i) {
            if (i) os << ", ";
            os << "{\"freq\": ";
            append_int_array(os, fn.terms[i].freq);
            os << ", \"re\": " << format_real(fn.terms[i].amplitude.real())
               << ", \"im\": " << format_real(fn.terms[i].amplitude.imag()) << "}";
        }
        os << "]}";
    } else {
        os << "{\"kind\": \"trapezoid\", \"traps\": [";
        for (std::size_t i = 0; i < fn.traps.size(); ++i) {
            if (i) os << ", ";
            os << "{\"center\": " << format_real(fn.traps[i].center)
               << ", \"width\": " << format_real(fn.traps[i].width)
               << ", \"margin\": " << format_real(fn.traps[i].margin) << "}";
        }
        os << "]}";
    }
    return os.str();
}

TorusFunction function_from_json(const json& j, int D) {
    const auto kind = field_as<std::string>(j, "kind");
    if (kind == "fourier") {
        std::vector<FourierTerm> terms;
        for (const auto& jt : field(j, "terms")) {
            FourierTerm term;
            term.freq = field_as<std::vector<long long>>(jt, "freq");
            term.amplitude = {field_as<double>(jt, "re"), field_or<double>(jt, "im", 0.0)};
            terms.push_back(std::move(term));
        }
        return TorusFunction::fourier(D, std::move(terms));
    }
    if (kind == "trapezoid") {
        std::vector<Trapezoid> traps;
        for (const auto& jt : field(j, "traps")) {
            Trapezoid trap;
            trap.center = field_as<double>(jt, "center");
            trap.width = field_as<double>(jt, "width");
            trap.margin = field_as<double>(jt, "margin");
            traps.push_back(trap);
        }
        return TorusFunction::trapezoid_product(std::move(traps));
    }
    throw precondition_error("field \"kind\" must be \"fourier\" or \"trapezoid\"");
}

} // namespace

std::string nilsequence_to_json(const NilsequenceSpec& spec) {
    std::ostringstream os;
    os << "{\"orbit\": " << orbit_to_json(spec.orbit)
       << ", \"function\": " << function_to_json(spec.function)
       << ", \"claimed_dim\": " << spec.claimed_dim
       << ", \"claimed_height\": " << format_real(spec.claimed_height)
       << ", \"claimed_eta\": " << format_real(spec.claimed_eta)
       << ", \"claimed_scale\": " << spec.claimed_scale << "}";
    return os.str();
}

NilsequenceSpec nilsequence_from_json(const std::string& text) {
    const json j = parse_json(text);
    NilsequenceSpec spec;
    spec.orbit = PolynomialOrbit::make(
        field_as<std::vector<std::vector<double>>>(field(j, "orbit"), "alpha"));
    spec.function = function_from_json(field(j, "function"), spec.orbit.D);
    spec.claimed_dim = field_or<int>(j, "claimed_dim", spec.orbit.D);
    spec.claimed_height = field_or<double>(j, "claimed_height", spec.function.lipschitz_bound);
    spec.claimed_eta = field_or<double>(j, "claimed_eta", 0.0);
    spec.claimed_scale = field_or<long long>(j, "claimed_scale", 0);
    return spec;
}

std::string equidistribution_json(const EquidistributionReport& rep) {
    std::ostringstream os;
    os << "{\"max_abs\": " << format_real(rep.max_abs) << ", \"eta\": " << format_real(rep.eta)
       << ", \"flagged\": " << bool_name(rep.flagged) << ", \"witness_freq\": ";
    append_int_array(os, rep.witness_freq);
    os << ", \"witness_step\": " << rep.witness_step
       << ", \"witness_offset\": " << rep.witness_offset
       << ", \"witness_length\": " << rep.witness_length << "}";
    return os.str();
}

std::string identity_json(const IdentityCheckResult& res) {
    std::ostringstream os;
    os << "{\"exact_equal\": " << bool_name(res.exact_equal)
       << ", \"exact_arithmetic\": " << bool_name(res.exact_arithmetic)
       << ", \"lhs\": " << format_real(res.lhs) << ", \"rhs\": " << format_real(res.rhs)
       << ", \"residual\": " << format_real(res.residual) << "}";
    return os.str();
}

std::string bohr_json(const BohrReport& rep) {
    std::ostringstream os;
    os << "{\"mean_theta_xi\": " << format_real(rep.mean_theta_xi)
       << ", \"mean_xi\": " << format_real(rep.mean_xi)
       << ", \"delta_hat\": " << format_real(rep.delta_hat)
       << ", \"mean_theta\": " << format_real(rep.mean_theta)
       << ", \"degenerate\": " << bool_name(rep.degenerate) << "}";
    return os.str();
}

std::string density_csv(const DensityReport& rep) {
    std::ostringstream os;
    os << "N, T, prediction, ratio, pred_error\n";
    for (const auto& row : rep.rows)
        os << row.N << ", " << format_real(row.T) << ", " << format_real(row.prediction) << ", "
           << format_real(row.ratio) << ", " << format_real(row.pred_error) << "\n";
    return os.str();
}

const char* norm_method_name(NormMethod method) {
    switch (method) {
        case NormMethod::Direct: return "direct";
        case NormMethod::Recursive: return "recursive";
        case NormMethod::Fft: return "fft";
    }
    return "unknown";
}

std::string norm_table_csv(const std::vector<NormResult>& rows) {
    std::ostringstream os;
    os << "k, value, method\n";
    for (const auto& row : rows)
        os << row.k << ", " << format_real(row.value) << ", " << norm_method_name(row.method)
           << "\n";
    return os.str();
}

std::string weights_csv(const std::vector<double>& weights) {
    if (weights.size() < 2) throw precondition_error("weight array needs entries beyond index 0");
    std::ostringstream os;
    os << "n, weight\n";
    for (std::size_t n = 1; n < weights.size(); ++n)
        os << n << ", " << format_real(weights[n]) << "\n";
    return os.str();
}

void write_weights_binary(const std::string& path, const std::vector<double>& weights) {
    if (weights.size() < 2) throw precondition_error("weight array needs entries beyond index 0");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const std::uint64_t count = weights.size() - 1;
    out.write(kWeightsMagic, 4);
    out.write(reinterpret_cast<const char*>(&kWeightsVersion), sizeof kWeightsVersion);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    out.write(reinterpret_cast<const char*>(weights.data() + 1),
              static_cast<std::streamsize>(count * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<double> read_weights_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!in || std::memcmp(magic, kWeightsMagic, 4) != 0)
        throw std::runtime_error(path + " is not a weight file");
    if (version != kWeightsVersion)
        throw std::runtime_error(path + ": unsupported weight file version");
    std::vector<double> weights(count + 1, 0.0);
    in.read(reinterpret_cast<char*>(weights.data() + 1),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error(path + " is truncated");
    return weights;
}

std::vector<double> read_weights_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> weights{0.0};
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (first) {
            first = false;
            if (line.find_first_not_of("0123456789") == 0) continue; // header row
        }
        std::istringstream row(line);
        long long n = 0;
        char comma = 0;
        double w = 0;
        if (!(row >> n >> comma >> w) || comma != ',')
            throw std::runtime_error(path + ": malformed row \"" + line + "\"");
        if (n != static_cast<long long>(weights.size()))
            throw std::runtime_error(path + ": rows must run n = 1, 2, ... without gaps");
        weights.push_back(w);
    }
    if (weights.size() < 2) throw std::runtime_error(path + " contains no weight rows");
    return weights;
}

std::vector<double> read_weights(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0)
        return read_weights_binary(path);
    return read_weights_csv(path);
}

} // namespace sievekit
