#include "report.hpp"

#include <algorithm>
#include <sstream>

namespace atomq::cli {

namespace {

std::string cell_text(const Json& v) {
    if (v.is_null()) return {};
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_float()) return number_text(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        return quoted + "\"";
    }
    return v.dump();
}

} // namespace

void Report::add_row(Json row) {
    for (const auto& [key, value] : row.items()) {
        if (std::find(columns.begin(), columns.end(), key) == columns.end()) {
            throw std::logic_error("report row has undeclared column '" + key + "'");
        }
    }
    rows.push_back(std::move(row));
}

std::string number_text(double x) { return Json(x).dump(); }

std::string render_csv(const Report& r) {
    std::ostringstream out;
    out << "# atomq report\n";
    out << "# schema: " << r.schema << "\n";
    out << "# version: " << ATOMQ_VERSION << "\n";
    out << "# command: " << r.command << "\n";
    out << "# seed: " << r.seed << "\n";
    out << "# config: " << r.config.dump() << "\n";
    for (const auto& w : r.warnings) out << "# warning: " << w << "\n";
    out << "# status: " << (r.passed ? "pass" : "fail") << "\n";
    for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << r.columns[c];
    out << "\n";
    for (const Json& row : r.rows) {
        for (std::size_t c = 0; c < r.columns.size(); ++c) {
            if (c) out << ',';
            auto it = row.find(r.columns[c]);
            if (it != row.end()) out << cell_text(*it);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_json(const Report& r) {
    Json doc;
    doc["schema"] = r.schema;
    doc["version"] = ATOMQ_VERSION;
    doc["command"] = r.command;
    doc["seed"] = r.seed;
    doc["config"] = r.config;
    doc["warnings"] = r.warnings;
    doc["status"] = r.passed ? "pass" : "fail";
    doc["columns"] = r.columns;
    Json rows = Json::array();
    for (const Json& row : r.rows) {
        Json full;
        for (const auto& c : r.columns) {
            auto it = row.find(c);
            full[c] = it == row.end() ? Json(nullptr) : *it;
        }
        rows.push_back(std::move(full));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

} // namespace atomq::cli
