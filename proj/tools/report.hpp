#pragma once

// Tabular experiment reports. A report carries its schema tag, the resolved
// configuration and seed, and rows keyed by column name. CSV and JSON renderings
// hold the same rows in the same order.

#include "atomq/json_io.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace atomq::cli {

using Json = io::Json;

/// Bad command line, unreadable config or a config that violates a
/// hypothesis of the requested experiment. Maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Report {
    std::string schema;  // e.g. "chernoff/1"
    std::string command;
    std::uint64_t seed = 0;
    Json config = Json::object();
    std::vector<std::string> columns;
    std::vector<Json> rows;  // objects; absent or null cells render empty in CSV
    std::vector<std::string> warnings;
    bool passed = true;

    void add_row(Json row);
};

std::string render_csv(const Report& r);
std::string render_json(const Report& r);

/// Shortest text that reads back to the same double.
std::string number_text(double x);

} // namespace atomq::cli
