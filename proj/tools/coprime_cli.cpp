// Command-line front end: rho values, figure data, constants, monotonicity
// scans, oracle counts and the verification suites.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coprime/coprime.hpp"
#include "coprime/verify.hpp"

using json = nlohmann::ordered_json;
using namespace coprime;

namespace {

// Exit codes. Usage errors come from the parser.
enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kDomain = 3, kResourceCap = 4, kIo = 5 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::int64_t exact_cutoff = NumericConfig{}.exact_cutoff;
    long precision = NumericConfig{}.float_precision_bits;
    std::string exact_method = "window";

    NumericConfig config() const {
        NumericConfig cfg;
        cfg.exact_cutoff = exact_cutoff;
        cfg.float_precision_bits = precision;
        cfg.exact_method = exact_method == "counts" ? ExactMethod::IntegerCounts : ExactMethod::RationalWindow;
        cfg.validate();
        return cfg;
    }
};

json backend_json(const NumericConfig& cfg) {
    return {{"exact_cutoff", cfg.exact_cutoff},
            {"float_precision_bits", cfg.float_precision_bits},
            {"exact_method", cfg.exact_method == ExactMethod::IntegerCounts ? "counts" : "window"}};
}

json manifest(const std::string& command, json parameters, const NumericConfig& cfg, std::int64_t elapsed_ms) {
    return {{"command", command},
            {"parameters", std::move(parameters)},
            {"backend", backend_json(cfg)},
            {"tool_version", COPRIME_VERSION},
            {"elapsed_ms", elapsed_ms}};
}

std::string fmt_double(double v, int digits = 6) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

json optional_double(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

json suite_json(const verify::SuiteReport& rep, bool strict) {
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"hard", c.hard},
                          {"passed", c.passed()},
                          {"count", c.count},
                          {"failures", c.failures},
                          {"worst_margin", optional_double(c.worst_margin)},
                          {"detail", c.detail}});
    return {{"suite", rep.suite}, {"passed", rep.passed(strict)}, {"strict", strict}, {"checks", checks}};
}

void print_suite(std::ostream& out, const verify::SuiteReport& rep, bool strict) {
    for (const auto& c : rep.checks) {
        const char* tag = c.passed() ? "ok  " : (c.hard ? "FAIL" : "flag");
        out << tag << "  " << c.name << "  count=" << c.count << " failures=" << c.failures;
        if (c.worst_margin) out << " worst_margin=" << fmt_double(*c.worst_margin);
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << '\n';
    }
    out << rep.suite << ": " << (rep.passed(strict) ? "PASS" : "FAIL") << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << text;
    if (!f.flush()) throw IoError("write to " + path + " failed");
}

void emit_json(const std::string& path, const json& j) {
    if (path.empty()) return;
    if (path == "-")
        std::cout << j.dump(2) << '\n';
    else
        write_text(path, j.dump(2) + "\n");
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::vector<std::int64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// ---------------------------------------------------------------------------

struct RhoArgs {
    std::int64_t m = 0;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> from, to;
    bool exact = false, floating = false;
    std::optional<int> digits;
};

int cmd_rho(const RhoArgs& a, const Globals& g) {
    NumericConfig cfg = g.config();
    const auto mod = make_modulus(a.m);
    const int digits = a.digits.value_or(20);
    if (a.n) {
        const std::int64_t n = *a.n;
        if (n < 0) throw DomainError("n must be >= 0");
        const bool use_exact = a.exact || (!a.floating && cfg.backend_for(n) == Backend::ExactRational);
        if (use_exact) {
            const Rational r = rho_at_exact(mod, n);
            std::cout << r.get_str();
            if (a.digits) std::cout << ' ' << BigFloat(r, std::max<long>(cfg.float_precision_bits, 4L * digits)).to_string(digits);
            std::cout << '\n';
        } else {
            std::cout << rho_at_float(mod, n, cfg.float_precision_bits).to_string(digits) << '\n';
        }
        return kOk;
    }
    if (!a.from || !a.to) throw DomainError("give either N or both --from and --to");
    if (*a.from < 0 || *a.to < *a.from) throw DomainError("need 0 <= --from <= --to");
    Backend backend = cfg.backend_for(*a.to);
    if (a.exact) backend = Backend::ExactRational;
    if (a.floating) backend = Backend::Float;
    const auto series = rho_series(mod, *a.to, cfg, backend);
    std::ostringstream out;
    out << "X,Y\n";
    for (std::int64_t n = *a.from; n <= *a.to; ++n) {
        out << n << ',';
        if (series.is_exact())
            out << (a.digits ? BigFloat(series.exact(n), std::max<long>(cfg.float_precision_bits, 4L * digits)).to_string(digits)
                             : series.exact(n).get_str());
        else
            out << series.float_values()[static_cast<std::size_t>(n)].to_string(digits);
        out << '\n';
    }
    std::cout << out.str();
    return kOk;
}

// ---------------------------------------------------------------------------

struct FigureArgs {
    std::int64_t m = 0;
    std::int64_t n_max = 0;
    std::string out;
    bool no_manifest = false;
};

int cmd_figure(const FigureArgs& a, const Globals& g) {
    const auto t0 = std::chrono::steady_clock::now();
    const NumericConfig cfg = g.config();
    const auto mod = make_modulus(a.m);
    const auto rows = verify::figure_rows(mod, a.n_max, cfg);
    std::string csv = "X,Y\n";
    for (const auto& r : rows) csv += std::to_string(r.n) + "," + r.y + "\n";
    const std::string path = a.out.empty() ? "figure_m" + std::to_string(a.m) + ".csv" : a.out;
    if (path == "-") {
        std::cout << csv;
        return kOk;
    }
    write_text(path, csv);
    if (!a.no_manifest) {
        json params = {{"m", a.m}, {"n_max", a.n_max}, {"rows", rows.size()}, {"output", path}};
        write_text(path + ".manifest.json", manifest("figure", params, cfg, elapsed_ms(t0)).dump(2) + "\n");
    }
    std::cerr << "wrote " << rows.size() << " rows to " << path << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string suite;
    std::optional<std::int64_t> n_max;
    std::optional<std::int64_t> partition_n_max;
    std::vector<std::int64_t> moduli;
    std::int64_t samples = 10000;
    std::uint64_t seed = verify::kDefaultSeed;
    std::vector<std::int64_t> primes;
    std::optional<std::int64_t> a_max;
    std::int64_t a_lo = 0;
    std::int64_t m = 6;
    std::optional<std::int64_t> b;
    std::vector<std::int64_t> expect_runs;
    int grid = 200;
    bool strict = false;
    std::string json_path;
};

int cmd_verify(const VerifyArgs& a, const Globals& g) {
    const auto t0 = std::chrono::steady_clock::now();
    const NumericConfig cfg = g.config();
    verify::SuiteReport rep;
    json params = {{"suite", a.suite}};
    if (a.suite == "oracle") {
        verify::OracleScope s;
        if (a.n_max) s.direct_n_max = *a.n_max;
        if (a.partition_n_max) s.partition_n_max = *a.partition_n_max;
        if (!a.moduli.empty()) s.direct_moduli = a.moduli;
        params["direct_n_max"] = s.direct_n_max;
        params["partition_n_max"] = s.partition_n_max;
        rep = verify::oracle_suite(s);
    } else if (a.suite == "theorem1") {
        verify::Theorem1Scope s;
        if (a.n_max) s.n_max = *a.n_max;
        if (!a.moduli.empty()) s.moduli = a.moduli;
        params["n_max"] = s.n_max;
        params["moduli"] = s.moduli;
        rep = verify::theorem1_suite(s, cfg);
    } else if (a.suite == "lemma22") {
        verify::Lemma22Scope s;
        s.grid = a.grid;
        params["grid"] = s.grid;
        rep = verify::lemma22_suite(s);
    } else if (a.suite == "y0") {
        verify::Y0Scope s;
        s.samples = a.samples;
        s.seed = a.seed;
        params["samples"] = s.samples;
        params["seed"] = s.seed;
        rep = verify::y0_suite(s);
    } else if (a.suite == "theorem32") {
        verify::PrimeScope s;
        if (!a.primes.empty()) s.primes = a.primes;
        if (a.a_max) s.a_hi = *a.a_max;
        if (a.n_max) s.closed_form_n_max = *a.n_max;
        params["primes"] = s.primes;
        params["a_max"] = s.a_hi;
        params["closed_form_n_max"] = s.closed_form_n_max;
        rep = verify::theorem32_suite(s);
    } else if (a.suite == "monotonicity") {
        verify::MonotonicityScope s;
        s.m = a.m;
        s.residue = a.b;
        s.a_lo = a.a_lo;
        s.a_hi = a.a_max.value_or(300);
        s.expect_runs = a.expect_runs;
        params["m"] = s.m;
        params["a_lo"] = s.a_lo;
        params["a_hi"] = s.a_hi;
        rep = verify::monotonicity_suite(s, cfg).report;
    } else {
        verify::ConstantsScope s;
        rep = verify::constants_suite(s, cfg);
    }
    print_suite(std::cout, rep, a.strict);
    if (!a.json_path.empty()) {
        json j = suite_json(rep, a.strict);
        j["manifest"] = manifest("verify", params, cfg, elapsed_ms(t0));
        emit_json(a.json_path, j);
    }
    return rep.passed(a.strict) ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

int cmd_constants(std::int64_t m, const std::string& json_path) {
    const auto mod = make_modulus(m);
    const Rational C = constant_C(mod);
    const auto kl = kappa_lambda(mod);
    const bool bracket = C.get_d() <= kl.lambda && kl.lambda <= 1.0;
    std::optional<double> k;
    if (mod.radical > 1 && is_prime(mod.radical)) k = k_constant(mod.radical);
    std::cout << "m=" << m << " rad=" << mod.radical << " phi=" << mod.phi << '\n';
    std::cout << "C=" << C.get_str() << " (" << fmt_double(C.get_d(), 12) << ")\n";
    if (k) std::cout << "k=" << fmt_double(*k, 12) << '\n';
    std::cout << "kappa=" << fmt_double(kl.kappa, 12) << '\n';
    std::cout << "lambda=" << fmt_double(kl.lambda, 12) << '\n';
    std::cout << "C <= lambda <= 1: " << (bracket ? "yes" : "NO") << '\n';
    if (!json_path.empty()) {
        json j = {{"m", m},
                  {"radical", mod.radical},
                  {"phi", mod.phi},
                  {"C", C.get_str()},
                  {"C_decimal", C.get_d()},
                  {"k", k ? json(*k) : json(nullptr)},
                  {"kappa", kl.kappa},
                  {"lambda", kl.lambda},
                  {"bracket_holds", bracket}};
        emit_json(json_path, j);
    }
    return bracket ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct MonoArgs {
    std::int64_t m = 0;
    std::optional<std::int64_t> b;
    std::int64_t a_lo = 0;
    std::int64_t a_hi = 300;
    std::string json_path;
};

int cmd_monotonicity(const MonoArgs& a, const Globals& g) {
    const NumericConfig cfg = g.config();
    verify::MonotonicityScope s;
    s.m = a.m;
    s.residue = a.b;
    s.a_lo = a.a_lo;
    s.a_hi = a.a_hi;
    const auto res = verify::monotonicity_suite(s, cfg);
    json scans = json::array();
    for (const auto& r : res.scans) {
        std::cout << "b=" << r.residue << " (label " << r.label() << ", " << (r.exact ? "exact" : "float") << "):";
        json runs = json::array();
        for (std::size_t i = 0; i < r.runs.size(); ++i) {
            std::cout << (i ? ", " : " ") << to_string(r.runs[i].direction) << ' ' << r.runs[i].length;
            runs.push_back({{"direction", to_string(r.runs[i].direction)},
                            {"length", r.runs[i].length},
                            {"a_start", r.runs[i].a_start}});
        }
        if (r.eventually_monotonic_from) std::cout << "; a0=" << *r.eventually_monotonic_from;
        if (r.unresolved) std::cout << "; unresolved=" << r.unresolved;
        std::cout << '\n';
        scans.push_back({{"residue", r.residue},
                         {"label", r.label()},
                         {"exact", r.exact},
                         {"runs", runs},
                         {"eventually_monotonic_from",
                          r.eventually_monotonic_from ? json(*r.eventually_monotonic_from) : json(nullptr)},
                         {"exact_recomputes", r.exact_recomputes},
                         {"unresolved", r.unresolved}});
    }
    if (res.shared_a0 && !a.b) std::cout << "shared a0=" << *res.shared_a0 << '\n';
    if (!a.json_path.empty())
        emit_json(a.json_path, {{"m", a.m},
                                {"a_lo", a.a_lo},
                                {"a_hi", a.a_hi},
                                {"scans", scans},
                                {"shared_a0", res.shared_a0 ? json(*res.shared_a0) : json(nullptr)},
                                {"checks", suite_json(res.report, false)}});
    return res.report.hard_ok() ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

int cmd_oracle(std::int64_t n, std::int64_t m, const std::string& method) {
    if (n < 0 || n > std::numeric_limits<int>::max()) throw DomainError("n out of range");
    const int ni = static_cast<int>(n);
    BigInt count;
    if (method == "direct")
        count = oracle::count_coprime_order_direct(ni, m);
    else if (method == "partitions")
        count = oracle::count_coprime_order_partitions(ni, m);
    else
        count = oracle::count_no_cycle_divisible(ni, m);
    const BigInt total = factorial(static_cast<unsigned long>(n));
    Rational r(count, total);
    r.canonicalize();
    std::cout << "count=" << count.get_str() << " total=" << total.get_str() << " proportion=" << r.get_str()
              << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Permutations of order coprime to m: proportions, bounds and residue-class behaviour"};
    app.set_version_flag("--version", std::string(COPRIME_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--exact-cutoff", g.exact_cutoff, "Largest n computed with exact rationals")->capture_default_str();
    app.add_option("--precision", g.precision, "Float precision in bits beyond the cutoff")->capture_default_str();
    app.add_option("--exact-method", g.exact_method, "Exact recurrence form")
        ->check(CLI::IsMember({"window", "counts"}))
        ->capture_default_str();

    std::function<int()> run;

    RhoArgs rho;
    auto* rho_cmd = app.add_subcommand("rho", "Print rho(n, m), or an X,Y table over --from..--to");
    rho_cmd->add_option("m", rho.m, "Modulus")->required();
    rho_cmd->add_option("n", rho.n, "Degree");
    rho_cmd->add_option("--from", rho.from, "First n of a table");
    rho_cmd->add_option("--to", rho.to, "Last n of a table");
    auto* ex_flag = rho_cmd->add_flag("--exact", rho.exact, "Force exact rationals");
    rho_cmd->add_flag("--float", rho.floating, "Force the float backend")->excludes(ex_flag);
    rho_cmd->add_option("--digits", rho.digits, "Significant digits for decimal output");
    rho_cmd->callback([&] { run = [&] { return cmd_rho(rho, g); }; });

    FigureArgs fig;
    auto* fig_cmd = app.add_subcommand("figure", "Write f(n, m) for m < n <= n_max as X,Y CSV plus a manifest");
    fig_cmd->add_option("m", fig.m, "Modulus")->required();
    fig_cmd->add_option("n_max", fig.n_max, "Last n")->required();
    fig_cmd->add_option("-o,--out", fig.out, "Output path ('-' for stdout); default figure_m<m>.csv");
    fig_cmd->add_flag("--no-manifest", fig.no_manifest, "Skip the <out>.manifest.json file");
    fig_cmd->callback([&] { run = [&] { return cmd_figure(fig, g); }; });

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "Run a property suite; exit 0 iff every hard check passes");
    ver_cmd->add_option("suite", ver.suite, "Suite name")
        ->required()
        ->check(CLI::IsMember({"oracle", "theorem1", "lemma22", "y0", "theorem32", "monotonicity", "constants"}));
    ver_cmd->add_option("--nmax", ver.n_max, "Largest n (oracle: direct enumeration; theorem1; theorem32: closed form)");
    ver_cmd->add_option("--partition-nmax", ver.partition_n_max, "Largest n for the cycle-type oracle");
    ver_cmd->add_option("--moduli", ver.moduli, "Moduli to sweep")->delimiter(',');
    ver_cmd->add_option("--samples", ver.samples, "Random tuples for y0")->capture_default_str();
    ver_cmd->add_option("--seed", ver.seed, "Seed for y0 (mt19937_64)")->capture_default_str();
    ver_cmd->add_option("--p", ver.primes, "Primes for theorem32")->delimiter(',');
    ver_cmd->add_option("--amax", ver.a_max, "Largest a (theorem32, monotonicity)");
    ver_cmd->add_option("--alo", ver.a_lo, "First a (monotonicity)")->capture_default_str();
    ver_cmd->add_option("--m", ver.m, "Modulus (monotonicity)")->capture_default_str();
    ver_cmd->add_option("--b", ver.b, "Single residue (monotonicity)");
    ver_cmd->add_option("--expect-runs", ver.expect_runs, "Pinned run lengths (monotonicity)")->delimiter(',');
    ver_cmd->add_option("--grid", ver.grid, "Grid size per axis (lemma22)")->capture_default_str();
    ver_cmd->add_flag("--strict", ver.strict, "Fail on flagged soft checks too");
    ver_cmd->add_option("--json", ver.json_path, "Write a JSON summary ('-' for stdout)");
    ver_cmd->callback([&] { run = [&] { return cmd_verify(ver, g); }; });

    std::int64_t const_m = 0;
    std::string const_json;
    auto* const_cmd = app.add_subcommand("constants", "Print C(m), k(m), kappa_m and lambda_m");
    const_cmd->add_option("m", const_m, "Modulus")->required();
    const_cmd->add_option("--json", const_json, "Write a JSON summary ('-' for stdout)");
    const_cmd->callback([&] { run = [&] { return cmd_constants(const_m, const_json); }; });

    MonoArgs mono;
    auto* mono_cmd = app.add_subcommand("monotonicity", "Direction runs of f(am + b, m) per residue");
    mono_cmd->add_option("m", mono.m, "Modulus")->required();
    mono_cmd->add_option("--b", mono.b, "Single residue (default: all)");
    mono_cmd->add_option("--alo", mono.a_lo, "First a")->capture_default_str();
    mono_cmd->add_option("--amax", mono.a_hi, "Last a")->capture_default_str();
    mono_cmd->add_option("--json", mono.json_path, "Write a JSON summary ('-' for stdout)");
    mono_cmd->callback([&] { run = [&] { return cmd_monotonicity(mono, g); }; });

    std::int64_t or_n = 0, or_m = 0;
    std::string or_method = "partitions";
    auto* or_cmd = app.add_subcommand("oracle", "Count permutations of Sym(n) by enumeration");
    or_cmd->add_option("n", or_n, "Degree")->required();
    or_cmd->add_option("m", or_m, "Modulus")->required();
    or_cmd->add_option("--method", or_method, "direct, partitions, or no-cycle (no cycle length divisible by m)")
        ->check(CLI::IsMember({"direct", "partitions", "no-cycle"}))
        ->capture_default_str();
    or_cmd->callback([&] { run = [&] { return cmd_oracle(or_n, or_m, or_method); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }
    try {
        return run();
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << '\n';
        return kResourceCap;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}
