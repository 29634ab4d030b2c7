/// @file csv.hpp
/// @brief Diagnostics CSV: one row per output time, then '#'-prefixed
/// `key = value` summary lines. Numbers use the shortest round-trip form, so
/// equal runs give byte-equal files.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "isodecay/lyapunov.hpp"

namespace isodecay {

const std::string& csv_header();

std::string format_csv_row(const DiagnosticsRecord& r);

using SummaryEntries = std::vector<std::pair<std::string, std::string>>;

struct CsvTable {
    std::vector<DiagnosticsRecord> records;
    SummaryEntries summary;
    bool aborted = false;
    std::string abort_message;
};

/// Inverse of the writer. Throws FormatError with a line number on a wrong
/// header, a short row or an unparsable number.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

std::string render_csv(const std::vector<DiagnosticsRecord>& records, const SummaryEntries& summary,
                       const std::string* abort_message = nullptr);

}  // namespace isodecay
