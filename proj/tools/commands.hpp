#pragma once

// Experiment commands behind the command-line tool. Each command reads its
// parameters from a JSON config object, fills in defaults, and returns a
// report whose config echo is the fully resolved parameter set.

#include "report.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace atomq::cli {

struct RunOptions {
    std::uint64_t seed = 0;
    unsigned threads = 1;  // scheduling only; never changes a report
};

/// verify | chernoff | cesaro | walk-decay | semigroup | dephase
const std::vector<std::string>& command_names();

/// Throws ConfigError for unknown commands, unknown keys, malformed values
/// and configs that violate the hypotheses of the experiment.
Report run_command(std::string_view command, const Json& config, const RunOptions& opts);

Report run_verify(const Json& config, const RunOptions& opts);
Report run_chernoff(const Json& config, const RunOptions& opts);
Report run_cesaro(const Json& config, const RunOptions& opts);
Report run_walk_decay(const Json& config, const RunOptions& opts);
Report run_semigroup(const Json& config, const RunOptions& opts);
Report run_dephase(const Json& config, const RunOptions& opts);

/// Probe operators used by the semigroup command and the verify suite.
std::vector<std::pair<std::string, AlgebraElement>> default_probes();
/// Mixed state used when a semigroup config names none.
State default_semigroup_state();
/// Rank-one density matrix on {0, 1, 2.5} used by the dephase command.
NormalState default_dephase_state();

/// Typed access to a config object. Every value read (or defaulted) is
/// copied into resolved(), which becomes the config echo of the report.
class ConfigReader {
public:
    ConfigReader(const Json& config, std::vector<std::string> allowed_keys);

    double number(const std::string& key, double fallback);
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback);
    std::vector<std::size_t> counts(const std::string& key, std::vector<std::size_t> fallback);
    Distribution distribution(const std::string& key, const Json& fallback);
    ConvolutionFamily family(const std::string& key, const Json& fallback);
    State state(const std::string& key, const Json& fallback);
    AtomicVector vector(const std::string& key, const Json& fallback);
    /// Object of name -> operator document, kept in document order.
    std::vector<std::pair<std::string, AlgebraElement>> named_elements(
        const std::string& key, const std::vector<std::pair<std::string, AlgebraElement>>& fallback);
    /// The raw object under `key` (or the fallback) without interpretation.
    Json object(const std::string& key, const Json& fallback);

    const Json& resolved() const noexcept { return resolved_; }

private:
    const Json& pick(const std::string& key, const Json& fallback);

    Json config_;
    Json resolved_ = Json::object();
};

} // namespace atomq::cli
