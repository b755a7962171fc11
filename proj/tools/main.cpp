#include "sievekit/counting.hpp"
#include "sievekit/cutoffs.hpp"
#include "sievekit/errors.hpp"
#include "sievekit/gowers.hpp"
#include "sievekit/indicators.hpp"
#include "sievekit/linear_systems.hpp"
#include "sievekit/majorants.hpp"
#include "sievekit/primes.hpp"
#include "sievekit/regions.hpp"
#include "sievekit/serialization.hpp"
#include "sievekit/torus.hpp"

#include "CLI11.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace sievekit;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

// accepts plain integers and exponent notation (1e6)
long long parse_int(const std::string& field, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || !std::isfinite(v) || std::fabs(v) > 9.0e18 ||
        v != std::floor(v))
        throw std::runtime_error(field + ": expected an integer, got \"" + text + "\"");
    return std::llround(v);
}

std::vector<long long> parse_int_list(const std::string& field, const std::string& text) {
    std::vector<long long> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_int(field, part));
    return out;
}

SmallRational parse_fraction(const std::string& field, const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return {parse_int(field, text), 1};
    SmallRational r{parse_int(field, text.substr(0, slash)),
                    parse_int(field, text.substr(slash + 1))};
    if (r.den <= 0) throw std::runtime_error(field + ": denominator must be positive");
    return r;
}

// "1:400,1:400" -> closed box
LatticeRegion parse_box(const std::string& field, const std::string& text) {
    std::vector<std::array<long long, 2>> box;
    for (const auto& part : split(text, ',')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error(field + ": expected lo:hi ranges, e.g. 1:100,1:100");
        box.push_back({parse_int(field, part.substr(0, colon)),
                       parse_int(field, part.substr(colon + 1))});
    }
    return LatticeRegion::make_box(std::move(box));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

AffineForm form_1d(long long coeff, long long constant) {
    AffineForm f;
    f.coeffs = {coeff};
    f.constant = constant;
    return f;
}

AffineSystem ap_system(int k) {
    std::vector<AffineForm> forms;
    for (int j = 0; j < k; ++j) {
        AffineForm f;
        f.coeffs = {1, j};
        forms.push_back(std::move(f));
    }
    return AffineSystem::make(std::move(forms));
}

// preset name or path to a {"d": ..., "forms": [...]} file
AffineSystem system_by_name(const std::string& name) {
    if (name == "line") return AffineSystem::make({form_1d(1, 0)});
    if (name == "twin") return AffineSystem::make({form_1d(1, 0), form_1d(1, 2)});
    if (name == "ap3") return ap_system(3);
    if (name == "ap4") return ap_system(4);
    if (name == "ap5") return ap_system(5);
    if (std::filesystem::exists(name)) return system_from_json(read_file(name));
    throw std::runtime_error("--system: unknown preset or missing file \"" + name + "\"");
}

// Comma-separated values arrive pre-split from config files; joining the
// inputs back up makes `tuple = 0,2` and `--tuple 0,2` equivalent.
CLI::Option* add_joined(CLI::App* cmd, const std::string& name, std::string& target,
                        const std::string& help) {
    auto* opt = cmd->add_option(
        name,
        [&target](const CLI::results_t& vals) {
            target = vals[0];
            for (std::size_t i = 1; i < vals.size(); ++i) target += "," + vals[i];
            return true;
        },
        help);
    opt->type_name("TEXT")->expected(1, -1);
    return opt;
}

struct ThetaOpts {
    std::string kind;
    std::string tuple;
    std::string rho = "1/20";
    int k = 2;
    bool indicator = false;
};

void add_theta_options(CLI::App* cmd, ThetaOpts& o, const std::string& default_kind,
                       const std::string& default_tuple) {
    o.kind = default_kind;
    o.tuple = default_tuple;
    cmd->add_option("--theta", o.kind, "weight: theta1 | theta2 | theta3 | primelog")
        ->capture_default_str();
    add_joined(cmd, "--tuple", o.tuple, "theta2 shift tuple, e.g. 0,2,6");
    cmd->add_option("--rho", o.rho, "theta2 roughness exponent, a fraction p/q")
        ->capture_default_str();
    cmd->add_option("--k", o.k, "theta2 prime-count threshold")->capture_default_str();
    cmd->add_flag("--indicator", o.indicator, "replace log powers by 1 on the support");
}

WeightedIndicator make_theta(const ThetaOpts& o) {
    WeightedIndicator w;
    if (o.kind == "theta1")
        w = WeightedIndicator::theta1();
    else if (o.kind == "theta2")
        w = WeightedIndicator::theta2(ShiftTuple::make(parse_int_list("--tuple", o.tuple)),
                                      parse_fraction("--rho", o.rho), o.k);
    else if (o.kind == "theta3")
        w = WeightedIndicator::theta3();
    else if (o.kind == "primelog")
        w = WeightedIndicator::prime_log();
    else
        throw std::runtime_error("--theta: unknown kind \"" + o.kind + "\"");
    w.indicator_only = o.indicator;
    return w;
}

// Factor tables are built at megabyte-granular limits so repeated runs with
// nearby parameters share one cache file.
FactorTable acquire_table(unsigned long long needed) {
    constexpr unsigned long long granule = 1'000'000;
    unsigned long long limit = std::max(needed, granule);
    limit = (limit + granule - 1) / granule * granule;
    if (limit > FactorTable::kMaxLimit)
        throw budget_error("factor table limit " + std::to_string(needed) +
                           " exceeds the memory budget");
    const char* dir = std::getenv("SIEVEKIT_CACHE_DIR");
    if (dir && *dir) {
        std::filesystem::create_directories(dir);
        const std::string path = std::string(dir) + "/spf_" + std::to_string(limit) + ".bin";
        if (auto cached = FactorTable::load(path)) return std::move(*cached);
        FactorTable table = FactorTable::build(limit);
        table.save(path);
        return table;
    }
    return FactorTable::build(limit);
}

// largest theta argument reachable from the region: scale*psi_i(x) + offset
// plus the tuple's shifts
unsigned long long table_need(const AffineSystem& sys, const LatticeRegion& region,
                              long long scale, long long offset, long long max_shift) {
    __int128 best = 2;
    for (const auto& form : sys.forms) {
        __int128 hi = form.constant;
        for (std::size_t j = 0; j < form.coeffs.size(); ++j) {
            const __int128 c = form.coeffs[j];
            hi += c * (c >= 0 ? region.box[j][1] : region.box[j][0]);
        }
        best = std::max(best, hi);
    }
    best = best * scale + offset + std::max<long long>(max_shift, 2) + 2;
    if (best < 2) return 2;
    if (best > static_cast<__int128>(1) << 62)
        throw budget_error("theta arguments overflow");
    return static_cast<unsigned long long>(best);
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

// --- subcommand bodies ---

struct SieveOpts {
    ThetaOpts theta;
    std::string N;
    std::string out, out_binary;
    int threads = 0;
};

void run_sieve(const SieveOpts& o) {
    const WeightedIndicator theta = make_theta(o.theta);
    const long long N = parse_int("--N", o.N);
    if (N < 1) throw std::runtime_error("--N: must be positive");
    const FactorTable table =
        acquire_table(static_cast<unsigned long long>(N) +
                      static_cast<unsigned long long>(
                          std::max<long long>(theta.effective_tuple().max_shift(), 2)) + 2);
    const auto weights = enumerate_weights(theta, N, table, o.threads);
    if (!o.out_binary.empty()) write_weights_binary(o.out_binary, weights);
    if (o.out_binary.empty() || !o.out.empty()) write_output(o.out, weights_csv(weights));
}

struct SeriesOpts {
    std::string system = "twin";
    std::string cutoff = "10000";
    std::string out;
};

void run_series(const SeriesOpts& o) {
    const auto res = singular_series(system_by_name(o.system), parse_int("--cutoff", o.cutoff));
    write_output(o.out, singular_series_json(res) + "\n");
}

struct CountOpts {
    ThetaOpts theta;
    std::string system = "twin";
    std::string N;
    std::string cutoff = "10000";
    std::string out;
    int threads = 0;
};

void run_count(const CountOpts& o) {
    const AffineSystem sys = system_by_name(o.system);
    const WeightedIndicator theta = make_theta(o.theta);
    const auto scales = parse_int_list("--N", o.N);
    std::vector<ScaledRegion> regions;
    unsigned long long need = 2;
    for (long long N : scales) {
        if (N < 1) throw std::runtime_error("--N: scales must be positive");
        ScaledRegion sr;
        sr.N = N;
        sr.region = LatticeRegion::make_box(
            std::vector<std::array<long long, 2>>(static_cast<std::size_t>(sys.d), {1, N}));
        need = std::max(need, table_need(sys, sr.region, 1, 0,
                                         theta.effective_tuple().max_shift()));
        regions.push_back(std::move(sr));
    }
    const FactorTable table = acquire_table(need);
    const auto rep = density_report(sys, theta, regions, table,
                                    parse_int("--cutoff", o.cutoff), o.threads);
    write_output(o.out, density_csv(rep));
}

struct WtrickOpts {
    ThetaOpts theta;
    std::string system = "line";
    std::string box = "1:400";
    long long w = 3;
    std::string out;
    int threads = 0;
};

void run_wtrick(const WtrickOpts& o) {
    const AffineSystem sys = system_by_name(o.system);
    const WeightedIndicator theta = make_theta(o.theta);
    const ShiftTuple tuple = theta.effective_tuple();
    const LatticeRegion region = parse_box("--box", o.box);
    const FactorTable table = acquire_table(table_need(sys, region, 1, 0, tuple.max_shift()));
    const auto res = w_trick_identity_check(sys, tuple, o.w, region, theta, table, o.threads);
    std::cout << "exact: " << (res.exact_equal ? "true" : "false")
              << ", residual: " << format_real(res.residual) << "\n";
    if (!o.out.empty()) write_output(o.out, identity_json(res) + "\n");
}

struct GowersOpts {
    std::string input;
    double const_value = 1.0;
    std::string length = "64";
    std::string k = "1,2,3";
    bool interval = false;
    std::string modulus = "0";
    std::string out;
    int threads = 0;
};

void run_gowers(const GowersOpts& o, bool has_const) {
    std::vector<std::complex<double>> values;
    if (!o.input.empty()) {
        if (has_const) throw std::runtime_error("--const: conflicts with --input");
        const auto w = read_weights(o.input);
        values.assign(w.begin() + 1, w.end());
    } else {
        const long long len = parse_int("--length", o.length);
        if (len < 1) throw std::runtime_error("--length: must be positive");
        values.assign(static_cast<std::size_t>(len), o.const_value);
    }
    std::vector<NormResult> rows;
    for (long long k : parse_int_list("--k", o.k)) {
        if (o.interval)
            rows.push_back(gowers_norm_interval(values, static_cast<int>(k),
                                                parse_int("--modulus", o.modulus), o.threads));
        else
            rows.push_back(gowers_norm_cyclic(CyclicFunction::make(values),
                                              static_cast<int>(k), o.threads));
    }
    write_output(o.out, norm_table_csv(rows));
}

struct MajorantOpts {
    ThetaOpts theta;
    std::string mode = "scan";
    double gamma = 0.05;
    long long w = 3;
    long long b = 5;
    std::string cutoff = "cosine";
    std::string N;
    double scan_start = 0.5;
    std::string system = "line"; // correlation needs finite complexity; shifts live in the tuple
    std::string box = "1:1000";
    std::string out;
    int threads = 0;
};

void run_majorant(const MajorantOpts& o) {
    const long long W = primorial(o.w);
    const long long N = parse_int("--N", o.N);
    const ShiftTuple tuple = ShiftTuple::make(parse_int_list("--tuple", o.theta.tuple));
    const MajorantSpec spec =
        MajorantSpec::make(o.gamma, W, o.b, tuple, cutoff_by_name(o.cutoff), N);
    std::map<std::string, std::string> params{
        {"N", std::to_string(N)},         {"W", std::to_string(W)},
        {"b", std::to_string(o.b)},       {"cutoff", quoted(o.cutoff)},
        {"gamma", format_real(o.gamma)},
    };
    if (o.mode == "scan") {
        const WeightedIndicator theta = make_theta(o.theta);
        const FactorTable table = acquire_table(
            table_need(AffineSystem::make({form_1d(1, 0)}),
                       LatticeRegion::make_box({{1, N}}), W, o.b, tuple.max_shift()));
        const auto rep = majorization_scan(theta, spec, N, o.scan_start, table, o.threads);
        params["scan_start"] = format_real(o.scan_start);
        params["theta"] = quoted(o.theta.kind);
        write_output(o.out, majorization_json(rep, params) + "\n");
    } else if (o.mode == "correlation") {
        const AffineSystem sys = system_by_name(o.system);
        const LatticeRegion region = parse_box("--box", o.box);
        const FactorTable table =
            acquire_table(table_need(sys, region, W, o.b, tuple.max_shift()));
        const auto rep = correlation_estimate(spec, sys, region, table, o.threads);
        write_output(o.out, correlation_json(rep, params) + "\n");
    } else {
        throw std::runtime_error("--mode: expected scan or correlation");
    }
}

struct BohrOpts {
    ThetaOpts theta;
    std::string alpha = "sqrt2,golden";
    double center = 0.0;
    double width = 0.2;
    double margin = 0.05;
    long long w = 3;
    long long b = 5;
    std::string N;
    std::string xi;
    std::string out;
    int threads = 0;
};

double parse_alpha(const std::string& tok) {
    if (tok == "sqrt2") return std::sqrt(2.0);
    if (tok == "golden") return (1.0 + std::sqrt(5.0)) / 2.0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
        throw std::runtime_error("--alpha: expected numbers, sqrt2, or golden");
    return v;
}

void run_bohr(const BohrOpts& o) {
    const WeightedIndicator theta = make_theta(o.theta);
    const long long W = primorial(o.w);
    const long long N = parse_int("--N", o.N);
    const FactorTable table = acquire_table(
        table_need(AffineSystem::make({form_1d(1, 0)}), LatticeRegion::make_box({{1, N}}), W,
                   o.b, theta.effective_tuple().max_shift()));
    if (!o.xi.empty()) {
        const auto spec = nilsequence_from_json(read_file(o.xi));
        const auto rep = bohr_density(theta, spec, N, W, o.b, table, o.threads);
        write_output(o.out, bohr_json(rep) + "\n");
        return;
    }
    std::ostringstream os;
    os << "alpha, mean_theta_xi, mean_xi, delta_hat, mean_theta\n";
    for (const auto& tok : split(o.alpha, ',')) {
        const double alpha = parse_alpha(tok);
        const auto spec = trapezoid_bohr_function({alpha}, o.center, o.width, o.margin);
        const auto rep = bohr_density(theta, spec, N, W, o.b, table, o.threads);
        os << format_real(alpha) << ", " << format_real(rep.mean_theta_xi) << ", "
           << format_real(rep.mean_xi) << ", " << format_real(rep.delta_hat) << ", "
           << format_real(rep.mean_theta) << "\n";
    }
    write_output(o.out, os.str());
}

struct SolveOpts {
    ThetaOpts theta;
    std::string matrix;
    std::string N;
    long long prime_bound = 100;
    std::string cutoff = "10000";
    std::string out;
    int threads = 0;
};

// rows ; separated, entries , separated
std::vector<std::vector<long long>> parse_matrix(const std::string& text) {
    std::vector<std::vector<long long>> mat;
    for (const auto& row : split(text, ';')) mat.push_back(parse_int_list("--matrix", row));
    return mat;
}

long long floor_div128(__int128 a, long long b) { // b > 0
    __int128 q = a / b;
    if (a % b != 0 && a < 0) --q;
    return static_cast<long long>(q);
}

// parameter box implied by 1 <= psi_j <= N at the pivot coordinates of the
// echelon kernel basis, plus all 2d constraints as cuts
LatticeRegion solve_region(const AffineSystem& psi, long long N) {
    const int r = psi.d;
    std::vector<int> pivot(static_cast<std::size_t>(r), -1);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < psi.t(); ++j)
            if (psi.forms[static_cast<std::size_t>(j)].coeffs[static_cast<std::size_t>(i)] !=
                0) {
                pivot[static_cast<std::size_t>(i)] = j;
                break;
            }
        if (pivot[static_cast<std::size_t>(i)] < 0)
            throw precondition_error("degenerate kernel parametrization");
    }
    std::vector<std::array<long long, 2>> box(static_cast<std::size_t>(r), {1, 0});
    bool empty = false;
    for (int i = 0; i < r && !empty; ++i) {
        const auto& form = psi.forms[static_cast<std::size_t>(pivot[static_cast<std::size_t>(i)])];
        __int128 rest_lo = form.constant, rest_hi = form.constant;
        for (int k = 0; k < i; ++k) {
            const __int128 c = form.coeffs[static_cast<std::size_t>(k)];
            rest_lo += c * (c >= 0 ? box[static_cast<std::size_t>(k)][0]
                                   : box[static_cast<std::size_t>(k)][1]);
            rest_hi += c * (c >= 0 ? box[static_cast<std::size_t>(k)][1]
                                   : box[static_cast<std::size_t>(k)][0]);
        }
        const long long piv = form.coeffs[static_cast<std::size_t>(i)];
        if (piv <= 0) throw precondition_error("kernel parametrization pivot not positive");
        const long long lo = -floor_div128(-(1 - rest_hi), piv); // ceil
        const long long hi = floor_div128(static_cast<__int128>(N) - rest_lo, piv);
        box[static_cast<std::size_t>(i)] = {lo, hi};
        empty = lo > hi;
    }
    LatticeRegion region = LatticeRegion::make_box(std::move(box));
    for (const auto& form : psi.forms) {
        Halfspace ge, le; // 1 <= form <= N
        for (long long c : form.coeffs) {
            ge.a.push_back(-c);
            le.a.push_back(c);
        }
        ge.b = form.constant - 1;
        le.b = N - form.constant;
        region.cuts.push_back(std::move(ge));
        region.cuts.push_back(std::move(le));
    }
    return region;
}

void run_solve(const SolveOpts& o) {
    const auto mat = parse_matrix(o.matrix);
    const long long N = parse_int("--N", o.N);
    if (N < 1) throw std::runtime_error("--N: must be positive");
    const WeightedIndicator theta = make_theta(o.theta);
    const AffineSystem psi = kernel_parametrization(mat);

    std::vector<long long> obstructed;
    for (long long p : primes_up_to(o.prime_bound))
        if (!local_solution_exists(mat, p, tuple_forbidden(theta.effective_tuple(), p)))
            obstructed.push_back(p);

    const LatticeRegion region = solve_region(psi, N);
    const FactorTable table =
        acquire_table(table_need(psi, region, 1, 0, theta.effective_tuple().max_shift()));
    const auto rep = density_report(psi, theta, {{N, region}}, table,
                                    parse_int("--cutoff", o.cutoff), o.threads);

    std::ostringstream os;
    os << "{\"kernel\": " << system_to_json(psi) << ", \"prime_bound\": " << o.prime_bound
       << ", \"obstructed_primes\": [";
    for (std::size_t i = 0; i < obstructed.size(); ++i) os << (i ? ", " : "") << obstructed[i];
    os << "], \"constant\": " << format_real(rep.constant)
       << ", \"constant_error\": " << format_real(rep.constant_error) << ", \"rows\": [";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        os << (i ? ", " : "") << "{\"N\": " << row.N << ", \"T\": " << format_real(row.T)
           << ", \"prediction\": " << format_real(row.prediction)
           << ", \"ratio\": " << format_real(row.ratio)
           << ", \"pred_error\": " << format_real(row.pred_error) << "}";
    }
    os << "]}";
    write_output(o.out, os.str() + "\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic sieve-weight and linear-pattern experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "",
                   "experiment file: a [subcommand] section of key = value lines");
    app.allow_config_extras(CLI::config_extras_mode::error);

    SieveOpts sieve;
    auto* sieve_cmd = app.add_subcommand("sieve", "enumerate theta weights over [1, N]");
    add_theta_options(sieve_cmd, sieve.theta, "primelog", "0,2,6,8,12");
    sieve_cmd->add_option("--N", sieve.N, "range end")->required();
    sieve_cmd->add_option("--out", sieve.out, "CSV output path (default stdout)");
    sieve_cmd->add_option("--out-binary", sieve.out_binary, "binary output path");
    sieve_cmd->add_option("--threads", sieve.threads, "worker threads, 0 = auto");
    sieve_cmd->callback([&] { run_sieve(sieve); });

    SeriesOpts series;
    auto* series_cmd =
        app.add_subcommand("singular-series", "truncated local-factor product with tail bound");
    series_cmd->add_option("--system", series.system, "preset (line, twin, ap3..ap5) or JSON path")
        ->capture_default_str();
    series_cmd->add_option("--cutoff", series.cutoff, "prime cutoff")->capture_default_str();
    series_cmd->add_option("--out", series.out, "output path (default stdout)");
    series_cmd->callback([&] { run_series(series); });

    CountOpts count;
    auto* count_cmd = app.add_subcommand("count", "weighted counts against the local prediction");
    add_theta_options(count_cmd, count.theta, "primelog", "0,2,6,8,12");
    count_cmd->add_option("--system", count.system, "preset or JSON path")->capture_default_str();
    add_joined(count_cmd, "--N", count.N, "comma-separated scales, e.g. 1e4,1e5,1e6")
        ->required();
    count_cmd->add_option("--cutoff", count.cutoff, "singular-series prime cutoff")
        ->capture_default_str();
    count_cmd->add_option("--out", count.out, "CSV output path (default stdout)");
    count_cmd->add_option("--threads", count.threads, "worker threads, 0 = auto");
    count_cmd->callback([&] { run_count(count); });

    WtrickOpts wtrick;
    auto* wtrick_cmd =
        app.add_subcommand("wtrick-check", "congruence-class identity with exact verdict");
    add_theta_options(wtrick_cmd, wtrick.theta, "theta2", "0,2");
    wtrick_cmd->add_option("--system", wtrick.system, "preset or JSON path")
        ->capture_default_str();
    add_joined(wtrick_cmd, "--box", wtrick.box, "integration box, lo:hi per coordinate");
    wtrick_cmd->add_option("--w", wtrick.w, "primes up to w form the modulus W")
        ->capture_default_str();
    wtrick_cmd->add_option("--out", wtrick.out, "JSON output path (stdout gets the verdict)");
    wtrick_cmd->add_option("--threads", wtrick.threads, "worker threads, 0 = auto");
    wtrick_cmd->callback([&] { run_wtrick(wtrick); });

    GowersOpts gowers;
    auto* gowers_cmd = app.add_subcommand("gowers", "uniformity norm table");
    gowers_cmd->add_option("--input", gowers.input, "weight file (.csv or .bin)");
    gowers_cmd->add_option("--const", gowers.const_value, "constant function value");
    gowers_cmd->add_option("--length", gowers.length, "constant function length")
        ->capture_default_str();
    add_joined(gowers_cmd, "--k", gowers.k, "comma-separated norm orders");
    gowers_cmd->add_flag("--interval", gowers.interval, "interval norm instead of cyclic");
    gowers_cmd->add_option("--modulus", gowers.modulus, "interval embedding modulus, 0 = 2N+1")
        ->capture_default_str();
    gowers_cmd->add_option("--out", gowers.out, "CSV output path (default stdout)");
    gowers_cmd->add_option("--threads", gowers.threads, "worker threads, 0 = auto");
    gowers_cmd->callback([&] { run_gowers(gowers, gowers_cmd->count("--const") > 0); });

    MajorantOpts majorant;
    auto* majorant_cmd =
        app.add_subcommand("majorant", "divisor-sum majorant scans and correlations");
    add_theta_options(majorant_cmd, majorant.theta, "theta2", "0,2");
    majorant_cmd->add_option("--mode", majorant.mode, "scan | correlation")
        ->capture_default_str();
    majorant_cmd->add_option("--gamma", majorant.gamma, "divisor cutoff exponent, R = N^gamma")
        ->capture_default_str();
    majorant_cmd->add_option("--w", majorant.w, "primes up to w form the modulus W")
        ->capture_default_str();
    majorant_cmd->add_option("--b", majorant.b, "residue class of the majorant")
        ->capture_default_str();
    majorant_cmd->add_option("--cutoff", majorant.cutoff, "smooth cutoff: cosine | bump")
        ->capture_default_str();
    majorant_cmd->add_option("--N", majorant.N, "scale")->required();
    majorant_cmd->add_option("--scan-start", majorant.scan_start,
                             "scan covers [N^c, N] for this c")
        ->capture_default_str();
    majorant_cmd->add_option("--system", majorant.system, "correlation system preset or path")
        ->capture_default_str();
    add_joined(majorant_cmd, "--box", majorant.box, "correlation box");
    majorant_cmd->add_option("--out", majorant.out, "JSON output path (default stdout)");
    majorant_cmd->add_option("--threads", majorant.threads, "worker threads, 0 = auto");
    majorant_cmd->callback([&] { run_majorant(majorant); });

    BohrOpts bohr;
    auto* bohr_cmd = app.add_subcommand("bohr", "weighted density on trapezoid Bohr functions");
    add_theta_options(bohr_cmd, bohr.theta, "theta2", "0,2");
    add_joined(bohr_cmd, "--alpha", bohr.alpha, "frequencies (numbers, sqrt2, golden)");
    bohr_cmd->add_option("--center", bohr.center, "trapezoid center")->capture_default_str();
    bohr_cmd->add_option("--width", bohr.width, "trapezoid plateau width")->capture_default_str();
    bohr_cmd->add_option("--margin", bohr.margin, "trapezoid ramp width")->capture_default_str();
    bohr_cmd->add_option("--w", bohr.w, "primes up to w form the modulus W")
        ->capture_default_str();
    bohr_cmd->add_option("--b", bohr.b, "residue class")->capture_default_str();
    bohr_cmd->add_option("--N", bohr.N, "scale")->required();
    bohr_cmd->add_option("--xi", bohr.xi, "nilsequence JSON file overriding --alpha");
    bohr_cmd->add_option("--out", bohr.out, "output path (default stdout)");
    bohr_cmd->add_option("--threads", bohr.threads, "worker threads, 0 = auto");
    bohr_cmd->callback([&] { run_bohr(bohr); });

    SolveOpts solve;
    auto* solve_cmd = app.add_subcommand(
        "solve", "kernel parametrization, local solvability, and density in one pass");
    add_theta_options(solve_cmd, solve.theta, "primelog", "0");
    add_joined(solve_cmd, "--matrix", solve.matrix, "rows ; separated, entries , separated")
        ->required();
    solve_cmd->add_option("--N", solve.N, "coordinate range [1, N]")->required();
    solve_cmd->add_option("--prime-bound", solve.prime_bound, "local solvability sweep bound")
        ->capture_default_str();
    solve_cmd->add_option("--cutoff", solve.cutoff, "singular-series prime cutoff")
        ->capture_default_str();
    solve_cmd->add_option("--out", solve.out, "JSON output path (default stdout)");
    solve_cmd->add_option("--threads", solve.threads, "worker threads, 0 = auto");
    solve_cmd->callback([&] { run_solve(solve); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const precondition_error& e) {
        std::cerr << "precondition violated: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
