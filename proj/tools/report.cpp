#include "report.h"

#include "lorenz5/types.h"
#include "version.h"

#include <cmath>
#include <cstdio>

namespace lorenz5::cli {

Format parse_format(const std::string& name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string csv_cell(const nlohmann::ordered_json& v) {
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "nan";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }
    return s;
}

} // namespace

Report::Report(std::string command, std::vector<std::pair<std::string, std::string>> config)
    : command_(std::move(command)), config_(std::move(config)) {}

void Report::set_result(const std::string& key, nlohmann::ordered_json value) {
    for (auto& [k, v] : results_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    results_.emplace_back(key, std::move(value));
}

Table& Report::add_table(std::string name, std::vector<std::string> columns) {
    tables_.push_back({std::move(name), std::move(columns), {}});
    return tables_.back();
}

void Report::fail(const std::string& reason) {
    failed_ = true;
    failure_ = reason;
}

void Report::write(std::ostream& os, Format format) const {
    if (format == Format::Json)
        write_json(os);
    else
        write_csv(os);
    os.flush();
}

void Report::write_csv(std::ostream& os) const {
    os << "# lorenz5 " << kVersion << '\n';
    os << "# command = " << command_ << '\n';
    for (const auto& [k, v] : config_) os << "# " << k << " = " << v << '\n';
    for (const auto& [k, v] : results_) os << "# result." << k << " = " << csv_cell(v) << '\n';
    bool first = true;
    for (const auto& t : tables_) {
        if (!first || tables_.size() > 1) os << "# table = " << t.name << '\n';
        first = false;
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
            os << '\n';
        }
    }
    if (failed_) os << "# FAILED " << failure_ << '\n';
}

void Report::write_json(std::ostream& os) const {
    nlohmann::ordered_json j;
    j["artifact"] = "lorenz5";
    j["version"] = kVersion;
    j["command"] = command_;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_) cfg[k] = v;
    j["config"] = cfg;
    nlohmann::ordered_json res = nlohmann::ordered_json::object();
    for (const auto& [k, v] : results_) res[k] = v;
    j["results"] = res;
    nlohmann::ordered_json tables = nlohmann::ordered_json::object();
    for (const auto& t : tables_) {
        nlohmann::ordered_json tj;
        tj["columns"] = t.columns;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json r = nlohmann::ordered_json::array();
            for (const auto& c : row) r.push_back(c);
            rows.push_back(std::move(r));
        }
        tj["rows"] = std::move(rows);
        tables[t.name] = std::move(tj);
    }
    j["tables"] = std::move(tables);
    j["status"] = failed_ ? "failed" : "ok";
    if (failed_) j["failure"] = failure_;
    os << j.dump(2) << '\n';
}

} // namespace lorenz5::cli
