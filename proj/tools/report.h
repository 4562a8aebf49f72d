#ifndef LORENZ5_TOOLS_REPORT_H
#define LORENZ5_TOOLS_REPORT_H

#include <json.hpp>

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace lorenz5::cli {

enum class Format { Csv, Json };

Format parse_format(const std::string& name);

/// %.17g, with "nan"/"inf" spelled out.
std::string format_number(double v);

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::ordered_json>> rows;
};

/// One command's output: resolved configuration, scalar results and tables.
/// CSV puts configuration and results in '#'-prefixed header lines; JSON
/// mirrors the same content.
class Report {
public:
    Report(std::string command, std::vector<std::pair<std::string, std::string>> config);

    void set_result(const std::string& key, nlohmann::ordered_json value);
    Table& add_table(std::string name, std::vector<std::string> columns);
    void fail(const std::string& reason);
    bool failed() const { return failed_; }
    const std::string& failure() const { return failure_; }

    void write(std::ostream& os, Format format) const;

private:
    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;

    std::string command_;
    std::vector<std::pair<std::string, std::string>> config_;
    std::vector<std::pair<std::string, nlohmann::ordered_json>> results_;
    std::vector<Table> tables_;
    bool failed_ = false;
    std::string failure_;
};

} // namespace lorenz5::cli

#endif // LORENZ5_TOOLS_REPORT_H
