#include "isodecay/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "isodecay/config.hpp"
#include "isodecay/errors.hpp"

namespace isodecay {

const std::string& csv_header() {
    static const std::string header =
        "t,E,D,mass,kinetic_L2,rho_dist_L2,u_L2,V_sigma,W_sigma,cross_term,rho_bound_ok,ineq_39_ok";
    return header;
}

std::string format_csv_row(const DiagnosticsRecord& r) {
    std::string out;
    for (double v : {r.t, r.E, r.D, r.mass, r.kinetic_L2, r.rho_dist_L2, r.u_L2, r.V_sigma, r.W_sigma,
                     r.cross_term}) {
        out += format_double(v);
        out += ',';
    }
    out += r.rho_bound_ok ? '1' : '0';
    out += ',';
    out += r.ineq_39_ok ? '1' : '0';
    return out;
}

std::string render_csv(const std::vector<DiagnosticsRecord>& records, const SummaryEntries& summary,
                       const std::string* abort_message) {
    std::string out = csv_header() + "\n";
    for (const DiagnosticsRecord& r : records) out += format_csv_row(r) + "\n";
    for (const auto& [key, value] : summary) out += "# " + key + " = " + value + "\n";
    if (abort_message) out += "# ABORTED: " + *abort_message + "\n";
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) return cells;
        start = comma + 1;
    }
}

double number(const std::string& cell, int line_no) {
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
        throw FormatError("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
    }
    return v;
}

bool flag(const std::string& cell, int line_no) {
    if (cell == "1") return true;
    if (cell == "0") return false;
    throw FormatError("line " + std::to_string(line_no) + ": expected 0 or 1, got '" + cell + "'");
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string body = line.size() > 2 ? line.substr(2) : "";
            if (body.rfind("ABORTED", 0) == 0) {
                table.aborted = true;
                const auto colon = body.find(": ");
                if (colon != std::string::npos) table.abort_message = body.substr(colon + 2);
                continue;
            }
            const auto eq = body.find(" = ");
            if (eq != std::string::npos) table.summary.emplace_back(body.substr(0, eq), body.substr(eq + 3));
            continue;
        }
        if (!header_seen) {
            if (line != csv_header()) throw FormatError("line " + std::to_string(line_no) + ": unexpected header");
            header_seen = true;
            continue;
        }
        const std::vector<std::string> c = split(line);
        if (c.size() != 12) {
            throw FormatError("line " + std::to_string(line_no) + ": expected 12 columns, got " +
                              std::to_string(c.size()));
        }
        DiagnosticsRecord r;
        double* fields[] = {&r.t, &r.E, &r.D, &r.mass, &r.kinetic_L2, &r.rho_dist_L2,
                            &r.u_L2, &r.V_sigma, &r.W_sigma, &r.cross_term};
        for (int k = 0; k < 10; ++k) *fields[k] = number(c[k], line_no);
        r.rho_bound_ok = flag(c[10], line_no);
        r.ineq_39_ok = flag(c[11], line_no);
        table.records.push_back(r);
    }
    if (!header_seen) throw FormatError("no CSV header found");
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_csv(ss.str());
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

}  // namespace isodecay
