// atomq: command-line harness for the experiment and verification commands.
//
//   atomq <command> [--config PATH|JSON] [--seed N] [--out PATH] [--format csv|json] [--threads N]
//
// Exit status: 0 all checks passed, 1 a check failed (the report is still
// written), 2 bad command line or configuration.

#include "commands.hpp"

#include "atomq/errors.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using atomq::cli::ConfigError;
using atomq::cli::Json;

constexpr std::uint64_t kDefaultSeed = 20240601;
constexpr const char* kSeedVariable = "ATOMQ_SEED";

std::uint64_t parse_seed(const std::string& text, const std::string& origin) {
    try {
        std::size_t used = 0;
        const auto value = std::stoull(text, &used, 0);
        if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ConfigError(origin + ": '" + text + "' is not an unsigned 64-bit seed");
    }
}

Json read_config(const std::string& arg) {
    if (arg.empty()) return Json::object();
    std::string text;
    if (arg.front() == '{') {
        text = arg;
    } else {
        std::ifstream in(arg);
        if (!in) throw ConfigError("cannot open config file '" + arg + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    try {
        return atomq::io::parse(text);
    } catch (const atomq::ParseError& e) {
        throw ConfigError("config '" + arg + "': " + e.what());
    }
}

std::uint64_t resolve_seed(const std::optional<std::string>& flag, const Json& config) {
    if (flag) return parse_seed(*flag, "--seed");
    if (auto it = config.find("seed"); config.is_object() && it != config.end()) {
        if (it->is_number_unsigned()) return it->get<std::uint64_t>();
        if (it->is_string()) return parse_seed(it->get<std::string>(), "config key 'seed'");
        throw ConfigError("config key 'seed': expected an unsigned integer");
    }
    if (const char* env = std::getenv(kSeedVariable); env && *env) return parse_seed(env, kSeedVariable);
    return kDefaultSeed;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw ConfigError("cannot write '" + path + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Atomic-space operator walks, averaged channels and singular states: experiments and checks"};
    app.set_version_flag("--version", ATOMQ_VERSION);

    std::string command;
    std::string config_arg;
    std::optional<std::string> seed_arg;
    std::string out_path;
    std::string format;
    unsigned threads = 1;

    app.add_option("command", command, "verify | chernoff | cesaro | walk-decay | semigroup | dephase")
        ->required()
        ->check(CLI::IsMember(atomq::cli::command_names()));
    app.add_option("--config", config_arg, "config file, or an inline JSON object");
    app.add_option("--seed", seed_arg, "64-bit seed (overrides the config and ATOMQ_SEED)");
    app.add_option("--out", out_path, "report path (default: stdout)");
    app.add_option("--format", format, "csv or json (default: from the --out extension, else csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads for Monte Carlo sweeps; never changes the report")
        ->check(CLI::Range(1u, 1024u));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const Json config = read_config(config_arg);
        const atomq::cli::RunOptions opts{resolve_seed(seed_arg, config), threads};
        if (format.empty()) {
            format = out_path.size() >= 5 && out_path.ends_with(".json") ? "json" : "csv";
        }

        const auto start = std::chrono::steady_clock::now();
        const auto report = atomq::cli::run_command(command, config, opts);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const std::string text = format == "json" ? render_json(report) : render_csv(report);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            write_file(out_path, text);
            // Wall-clock time lives beside the report so the report itself stays reproducible.
            Json timing{{"command", command}, {"seed", opts.seed}, {"threads", threads}, {"wall_clock_seconds", seconds}};
            write_file(out_path + ".timing.json", timing.dump(2) + "\n");
        }
        for (const auto& w : report.warnings) std::cerr << "atomq: warning: " << w << "\n";
        std::cerr << "atomq: " << command << " " << (report.passed ? "passed" : "FAILED") << " in " << seconds << " s\n";
        return report.passed ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "atomq: configuration error: " << e.what() << "\n";
    } catch (const atomq::ParseError& e) {
        std::cerr << "atomq: configuration error: " << e.what() << "\n";
    } catch (const atomq::ValidationError& e) {
        std::cerr << "atomq: configuration error: " << e.what() << "\n";
    } catch (const atomq::DomainError& e) {
        std::cerr << "atomq: configuration error: " << e.what() << "\n";
    }
    return 2;
}
