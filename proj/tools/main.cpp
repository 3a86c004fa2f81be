// memcap: n-shot capacity bounds for the lossy bosonic channel with
// inter-use memory. Subcommands: capacity, uses-needed, spectrum, verify.
//
// Output is deterministic: identical flags yield byte-identical stdout.
// Run metadata with timestamps goes to stderr only.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "memcap/capacities.hpp"
#include "memcap/channel.hpp"
#include "memcap/ergodic.hpp"
#include "memcap/toeplitz.hpp"
#include "memcap/verify.hpp"
#include "output.hpp"

namespace {

using memcap_cli::CsvWriter;
using memcap_cli::format17;
using memcap_cli::JsonWriter;

constexpr const char* kSchemaVersion = "1";
constexpr int kDefaultMaxN = 4096;

// Exit codes: 0 success, 1 numeric/internal failure, 2 domain error,
// 3 usage error.
enum ExitCode { kOk = 0, kNumeric = 1, kDomain = 2, kUsage = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonFlags {
    double lambda = 0.0;
    double mu = 0.0;
    double epsilon = 0.1;
    double tol = 1e-10;
    std::string task = "ebit";
    std::string format = "json";
    std::string output_path;
};

memcap::CapacityKind parse_task(const std::string& task) {
    if (task == "qubit") return memcap::CapacityKind::Qubit;
    if (task == "ebit") return memcap::CapacityKind::Ebit;
    if (task == "key") return memcap::CapacityKind::Key;
    throw UsageError("unknown task '" + task + "' (valid: qubit, ebit, key)");
}

void require_unit_interval(double v, const char* flag, bool half_open) {
    const bool ok = half_open ? (v >= 0.0 && v < 1.0) : (v > 0.0 && v < 1.0);
    if (!ok) {
        throw memcap::DomainError(
            std::string(flag) + " out of range (valid: " +
            (half_open ? "0 <= value < 1" : "0 < value < 1") + ")");
    }
}

int max_svd_order() {
    const char* raw = std::getenv("MEMCAP_MAX_N");
    if (raw == nullptr || *raw == '\0') return kDefaultMaxN;
    char* end = nullptr;
    const long v = std::strtol(raw, &end, 10);
    if (end == nullptr || *end != '\0' || v < 1) {
        throw UsageError("MEMCAP_MAX_N must be a positive integer");
    }
    return static_cast<int>(v);
}

void emit(const CommonFlags& flags, const std::string& payload) {
    if (flags.output_path.empty()) {
        std::cout << payload << "\n";
        return;
    }
    std::ofstream out(flags.output_path, std::ios::binary);
    if (!out) {
        throw UsageError("cannot open output file: " + flags.output_path);
    }
    out << payload << "\n";
}

void stderr_metadata(const char* command,
                     std::chrono::steady_clock::time_point start) {
    const auto wall = std::chrono::system_clock::now();
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - start)
            .count();
    const std::time_t t = std::chrono::system_clock::to_time_t(wall);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ",
                  std::gmtime(&t));
    std::cerr << "# " << command << " finished " << stamp << " (" << elapsed
              << " ms)\n";
}

void add_common_channel_flags(CLI::App* cmd, CommonFlags& flags,
                              bool required) {
    auto* l = cmd->add_option("--lambda", flags.lambda,
                              "Transmissivity, 0 < lambda < 1");
    auto* m = cmd->add_option("--mu", flags.mu,
                              "Memory parameter, 0 <= mu < 1");
    if (required) {
        l->required();
        m->required();
    }
    cmd->add_option("--epsilon", flags.epsilon,
                    "Protocol error budget in (0,1)")
        ->capture_default_str();
    cmd->add_option("--tol", flags.tol, "Quadrature absolute tolerance")
        ->capture_default_str();
    cmd->add_option("--format", flags.format, "Output format: json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output", flags.output_path,
                    "Write payload to this file instead of stdout");
}

void append_inputs(JsonWriter& w, const CommonFlags& flags, int n,
                   bool exact_flag, bool include_exact) {
    w.key("inputs").begin_object();
    w.key("lambda").value(flags.lambda);
    w.key("mu").value(flags.mu);
    w.key("task").value(flags.task);
    if (n >= 0) w.key("n").value(n);
    w.key("epsilon").value(flags.epsilon);
    if (include_exact) w.key("exact").value(exact_flag);
    w.key("tol").value(flags.tol);
    w.end_object();
}

void append_warnings(JsonWriter& w, const std::vector<std::string>& warnings) {
    w.key("warnings").begin_array();
    for (const auto& warning : warnings) w.value(warning);
    w.end_array();
}

// ---------------------------------------------------------------- capacity

int cmd_capacity(const CommonFlags& flags, int n, bool exact) {
    require_unit_interval(flags.lambda, "--lambda", false);
    require_unit_interval(flags.mu, "--mu", true);
    require_unit_interval(flags.epsilon, "--epsilon", false);
    if (n < 1) {
        throw memcap::DomainError("--n out of range (valid: n >= 1)");
    }
    if (n < 4 && !exact) {
        throw memcap::DomainError(
            "the linear finite-size bound needs n >= 4; for n in {1,2,3} "
            "only the spectrum-sum bound applies, rerun with --exact");
    }
    const memcap::ChannelParams params{flags.lambda, flags.mu};
    const memcap::CapacityKind kind = parse_task(flags.task);
    const memcap::ErrorBudget eps(flags.epsilon);
    const double asym =
        memcap::asymptotic_capacity(params, kind, flags.tol);

    std::vector<std::string> warnings;
    if (kind == memcap::CapacityKind::Qubit &&
        !memcap::positive_q_region(params)) {
        warnings.push_back("zero-capacity region");
    }

    if (exact) {
        if (n > max_svd_order()) {
            throw UsageError("--n exceeds MEMCAP_MAX_N (" +
                             std::to_string(max_svd_order()) + ")");
        }
        const double lower =
            memcap::exact_sum_lower_bound(params, n, eps, kind);
        const double penalty = memcap::epsilon_penalty(eps, kind);
        if (flags.format == "csv") {
            CsvWriter csv;
            csv.row({"lambda", "mu", "task", "n", "epsilon",
                     "asymptotic_capacity", "lower", "penalty"});
            csv.row({format17(flags.lambda), format17(flags.mu), flags.task,
                     std::to_string(n), format17(flags.epsilon),
                     format17(asym), format17(lower), format17(penalty)});
            std::string payload = csv.str();
            payload.pop_back();
            emit(flags, payload);
            return kOk;
        }
        JsonWriter w;
        w.begin_object();
        w.key("schema_version").value(kSchemaVersion);
        w.key("command").value("capacity");
        append_inputs(w, flags, n, true, true);
        w.key("outputs").begin_object();
        w.key("asymptotic_capacity").value(asym);
        w.key("lower").value(lower);
        w.key("spectrum_sum").value(lower + penalty);
        w.key("penalty").value(penalty);
        w.end_object();
        append_warnings(w, warnings);
        w.end_object();
        emit(flags, w.str());
        return kOk;
    }

    const memcap::NShotBound bound =
        memcap::nshot_lower_bound(params, n, eps, kind);
    if (flags.format == "csv") {
        CsvWriter csv;
        csv.row({"lambda", "mu", "task", "n", "epsilon",
                 "asymptotic_capacity", "lower", "clamped", "asymptotic_term",
                 "sqrt_term", "penalty"});
        csv.row({format17(flags.lambda), format17(flags.mu), flags.task,
                 std::to_string(n), format17(flags.epsilon), format17(asym),
                 format17(bound.lower), bound.clamped ? "true" : "false",
                 format17(bound.components.asymptotic_term),
                 format17(bound.components.sqrt_term),
                 format17(bound.components.penalty)});
        std::string payload = csv.str();
        payload.pop_back();
        emit(flags, payload);
        return kOk;
    }
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("command").value("capacity");
    append_inputs(w, flags, n, false, true);
    w.key("outputs").begin_object();
    w.key("asymptotic_capacity").value(asym);
    w.key("lower").value(bound.lower);
    w.key("clamped").value(bound.clamped);
    w.key("components").begin_object();
    w.key("asymptotic_term").value(bound.components.asymptotic_term);
    w.key("sqrt_term").value(bound.components.sqrt_term);
    w.key("penalty").value(bound.components.penalty);
    w.end_object();
    w.key("raw").value(bound.raw());
    w.end_object();
    append_warnings(w, warnings);
    w.end_object();
    emit(flags, w.str());
    return kOk;
}

// ------------------------------------------------------------- uses-needed

int cmd_uses_needed(const CommonFlags& flags, double target_k,
                    const std::string& debug_coefficients,
                    bool channel_flags_given) {
    require_unit_interval(flags.epsilon, "--epsilon", false);
    if (!(target_k > 0.0)) {
        throw memcap::DomainError(
            "--target-k out of range (valid: target > 0)");
    }

    double asym = 0.0;
    double constant = 0.0;
    double penalty = 0.0;
    const memcap::CapacityKind kind = parse_task(flags.task);
    const memcap::ErrorBudget eps(flags.epsilon);
    if (!debug_coefficients.empty()) {
        std::istringstream in(debug_coefficients);
        char c1 = 0, c2 = 0;
        if (!(in >> asym >> c1 >> constant >> c2 >> penalty) || c1 != ',' ||
            c2 != ',') {
            throw UsageError(
                "--debug-coefficients expects 'asymptotic,constant,penalty'");
        }
    } else {
        if (!channel_flags_given) {
            throw UsageError("--lambda and --mu are required");
        }
        require_unit_interval(flags.lambda, "--lambda", false);
        require_unit_interval(flags.mu, "--mu", true);
        const memcap::ChannelParams params{flags.lambda, flags.mu};
        if (kind == memcap::CapacityKind::Qubit &&
            !memcap::positive_q_region(params)) {
            throw memcap::UnreachableTarget(
                "qubit capacity vanishes for these parameters");
        }
        asym = memcap::asymptotic_capacity(params, kind, flags.tol);
        constant = memcap::finite_size_constant(params, kind);
        penalty = memcap::epsilon_penalty(eps, kind);
    }

    const long long n = memcap::uses_needed_from_constants(
        asym, constant, penalty, target_k);
    const double bound_at_n =
        n * asym - std::sqrt(static_cast<double>(n)) * constant - penalty;

    if (flags.format == "csv") {
        CsvWriter csv;
        csv.row({"lambda", "mu", "task", "epsilon", "target_k", "n",
                 "bound_at_n"});
        csv.row({format17(flags.lambda), format17(flags.mu), flags.task,
                 format17(flags.epsilon), format17(target_k),
                 std::to_string(n), format17(bound_at_n)});
        std::string payload = csv.str();
        payload.pop_back();
        emit(flags, payload);
        return kOk;
    }
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("command").value("uses-needed");
    w.key("inputs").begin_object();
    w.key("lambda").value(flags.lambda);
    w.key("mu").value(flags.mu);
    w.key("task").value(flags.task);
    w.key("epsilon").value(flags.epsilon);
    w.key("target_k").value(target_k);
    w.end_object();
    w.key("outputs").begin_object();
    w.key("n").value(n);
    w.key("bound_at_n").value(bound_at_n);
    w.key("asymptotic_capacity").value(asym);
    w.key("finite_size_constant").value(constant);
    w.key("penalty").value(penalty);
    w.end_object();
    append_warnings(w, {});
    w.end_object();
    emit(flags, w.str());
    return kOk;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const CommonFlags& flags, int n) {
    require_unit_interval(flags.lambda, "--lambda", false);
    require_unit_interval(flags.mu, "--mu", true);
    if (n < 1) {
        throw memcap::DomainError("--n out of range (valid: n >= 1)");
    }
    if (n > max_svd_order()) {
        throw UsageError("--n exceeds MEMCAP_MAX_N (" +
                         std::to_string(max_svd_order()) + ")");
    }
    const memcap::ChannelParams params{flags.lambda, flags.mu};
    const memcap::CoefficientSequence coeffs =
        memcap::channel_coefficients(params);
    const memcap::SingularSpectrum spectrum =
        memcap::singular_values(memcap::build_toeplitz(coeffs, n));

    if (flags.format == "csv") {
        CsvWriter csv;
        csv.row({"index", "singular_value", "transmissivity", "qubit_bits",
                 "ebit_bits"});
        for (int i = 0; i < spectrum.size(); ++i) {
            const double s = spectrum.values[static_cast<size_t>(i)];
            const double eta = s * s;
            csv.row({std::to_string(i + 1), format17(s), format17(eta),
                     format17(memcap::pure_loss_capacity(
                         eta, memcap::CapacityKind::Qubit)),
                     format17(memcap::pure_loss_capacity(
                         eta, memcap::CapacityKind::Ebit))});
        }
        std::string payload = csv.str();
        payload.pop_back();
        emit(flags, payload);
        return kOk;
    }
    JsonWriter w;
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("command").value("spectrum");
    w.key("inputs").begin_object();
    w.key("lambda").value(flags.lambda);
    w.key("mu").value(flags.mu);
    w.key("n").value(n);
    w.end_object();
    w.key("outputs").begin_object();
    w.key("modes").begin_array();
    for (int i = 0; i < spectrum.size(); ++i) {
        const double s = spectrum.values[static_cast<size_t>(i)];
        const double eta = s * s;
        w.begin_object();
        w.key("index").value(i + 1);
        w.key("singular_value").value(s);
        w.key("transmissivity").value(eta);
        w.key("qubit_bits")
            .value(memcap::pure_loss_capacity(eta,
                                              memcap::CapacityKind::Qubit));
        w.key("ebit_bits")
            .value(
                memcap::pure_loss_capacity(eta, memcap::CapacityKind::Ebit));
        w.end_object();
    }
    w.end_array();
    w.end_object();
    append_warnings(w, {});
    w.end_object();
    emit(flags, w.str());
    return kOk;
}

// ------------------------------------------------------------------ verify

int line_of_offset(const std::string& text, size_t offset) {
    int line = 1;
    for (size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

memcap::verify::VerifyConfig load_grid_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open grid file: " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("grid file parse error at line " +
                         std::to_string(line_of_offset(text, e.byte)) + ": " +
                         e.what());
    }
    memcap::verify::VerifyConfig config;
    try {
        config.lambdas = doc.value("lambdas", std::vector<double>{});
        config.mus = doc.value("mus", std::vector<double>{});
        config.n_list = doc.value("n_list", std::vector<int>{});
        config.band_list = doc.value("band_list", std::vector<int>{});
        config.k_list = doc.value("k_list", std::vector<int>{});
        config.trunc_list = doc.value("trunc_list", std::vector<int>{});
        config.epsilon = doc.value("epsilon", 0.1);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("grid file field error: ") + e.what());
    }
    if (config.lambdas.empty() || config.mus.empty() ||
        config.n_list.empty()) {
        throw UsageError(
            "grid file must provide nonempty lambdas, mus and n_list");
    }
    return config;
}

int cmd_verify(const CommonFlags& flags, const std::string& grid) {
    memcap::verify::VerifyConfig config;
    if (grid == "quick") {
        config = memcap::verify::quick_grid();
    } else if (grid == "full") {
        config = memcap::verify::full_grid();
    } else {
        config = load_grid_file(grid);
    }
    const std::vector<memcap::verify::CheckReport> reports =
        memcap::verify::run_all(config);

    bool all_passed = true;
    for (const auto& report : reports) {
        if (!report.passed()) all_passed = false;
    }

    if (flags.format == "csv") {
        CsvWriter csv;
        csv.row({"check_name", "cases_run", "cases_failed", "worst_margin"});
        for (const auto& report : reports) {
            csv.row({report.check_name, std::to_string(report.cases_run),
                     std::to_string(report.cases_failed),
                     format17(report.worst_margin)});
        }
        std::string payload = csv.str();
        payload.pop_back();
        emit(flags, payload);
    } else {
        JsonWriter w;
        w.begin_object();
        w.key("schema_version").value(kSchemaVersion);
        w.key("command").value("verify");
        w.key("inputs").begin_object();
        w.key("grid").value(grid);
        w.end_object();
        w.key("outputs").begin_object();
        w.key("passed").value(all_passed);
        w.key("reports").begin_array();
        for (const auto& report : reports) {
            w.begin_object();
            w.key("schema_version").value(kSchemaVersion);
            w.key("check_name").value(report.check_name);
            w.key("cases_run").value(report.cases_run);
            w.key("cases_failed").value(report.cases_failed);
            w.key("worst_margin").value(report.worst_margin);
            w.key("cases").begin_array();
            for (const auto& c : report.details) {
                w.begin_object();
                w.key("label").value(c.label);
                w.key("margin").value(c.margin);
                for (const auto& [name, value] : c.values) {
                    w.key(name).value(value);
                }
                w.end_object();
            }
            w.end_array();
            w.end_object();
        }
        w.end_array();
        w.end_object();
        append_warnings(w, {});
        w.end_object();
        emit(flags, w.str());
    }

    for (const auto& report : reports) {
        std::cerr << "# " << report.check_name << ": " << report.cases_run
                  << " cases, " << report.cases_failed << " failed\n";
    }
    return all_passed ? kOk : kNumeric;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Lower bounds on n-shot quantum, two-way and secret-key capacities "
        "of a lossy bosonic channel with inter-use memory"};
    app.require_subcommand(1);

    CommonFlags cap_flags;
    int cap_n = 0;
    bool cap_exact = false;
    auto* cap = app.add_subcommand(
        "capacity", "n-shot lower bound for one parameter point");
    add_common_channel_flags(cap, cap_flags, true);
    cap->add_option("--task", cap_flags.task, "qubit, ebit or key")
        ->capture_default_str();
    cap->add_option("--n", cap_n, "Number of channel uses")->required();
    cap->add_flag("--exact", cap_exact,
                  "Use the SVD spectrum-sum bound (valid for n >= 1)");

    CommonFlags use_flags;
    double target_k = 0.0;
    std::string debug_coefficients;
    auto* use = app.add_subcommand(
        "uses-needed", "Minimal n achieving a target number of bits");
    add_common_channel_flags(use, use_flags, false);
    use->add_option("--task", use_flags.task, "qubit, ebit or key")
        ->capture_default_str();
    use->add_option("--target-k", target_k, "Target bits, > 0")->required();
    use->add_option("--debug-coefficients", debug_coefficients,
                    "Override 'asymptotic,constant,penalty'")
        ->group("");  // hidden

    CommonFlags spec_flags;
    int spec_n = 0;
    auto* spec = app.add_subcommand(
        "spectrum", "Per-mode singular values and transmissivities");
    add_common_channel_flags(spec, spec_flags, true);
    spec->add_option("--n", spec_n, "Number of channel uses")->required();

    CommonFlags verify_flags;
    std::string grid = "quick";
    auto* ver = app.add_subcommand(
        "verify", "Run the inequality verification suite");
    ver->add_option("--grid", grid,
                    "quick, full, or a JSON grid file path")
        ->capture_default_str();
    ver->add_option("--format", verify_flags.format,
                    "Output format: json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv"}));
    ver->add_option("--output", verify_flags.output_path,
                    "Write payload to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        int rc = kOk;
        if (cap->parsed()) {
            rc = cmd_capacity(cap_flags, cap_n, cap_exact);
            stderr_metadata("capacity", start);
        } else if (use->parsed()) {
            rc = cmd_uses_needed(use_flags, target_k, debug_coefficients,
                                 use->count("--lambda") > 0 &&
                                     use->count("--mu") > 0);
            stderr_metadata("uses-needed", start);
        } else if (spec->parsed()) {
            rc = cmd_spectrum(spec_flags, spec_n);
            stderr_metadata("spectrum", start);
        } else if (ver->parsed()) {
            rc = cmd_verify(verify_flags, grid);
            stderr_metadata("verify", start);
        }
        return rc;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const memcap::UnreachableTarget& e) {
        // Structured error record: the target cannot be met at any n.
        JsonWriter w;
        w.begin_object();
        w.key("schema_version").value(kSchemaVersion);
        w.key("command").value("uses-needed");
        w.key("error").begin_object();
        w.key("type").value("UnreachableTarget");
        w.key("message").value(e.what());
        w.end_object();
        w.end_object();
        std::cout << w.str() << "\n";
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const memcap::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const memcap::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kNumeric;
    }
}
