#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ipseries/report/pipeline.hpp"

namespace ipseries::report {

/// A rendered report table: every cell is already formatted text.
struct Table {
    std::string key;    ///< "table1".."table6"
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;  ///< footnotes and skip reasons
};

/// Tables 1-6 in order. Tables whose stages did not run have no rows and a
/// note naming the reason.
std::vector<Table> build_tables(const PipelineReport& report);

std::string to_markdown(const Table& t);
/// RFC 4180: CRLF line endings, fields quoted when they contain a comma,
/// quote or line break.
std::string to_csv(const Table& t);
nlohmann::json to_json(const Table& t);

/// "< 2.2e-16" below machine epsilon, otherwise four significant digits.
std::string format_pvalue(double p);

/// Rewrites bare LF line endings as CRLF.
std::string crlf_lines(std::string_view text);

/// Writes table1..table6 for the Markdown and CSV formats and report.json for
/// the JSON format. Returns the files written. Errors: Io.
std::vector<std::filesystem::path> emit_tables(const PipelineReport& report,
                                               const std::filesystem::path& dir,
                                               const std::set<Format>& formats);

/// Writes `content` to `path`, creating parent directories. Errors: Io.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace ipseries::report
