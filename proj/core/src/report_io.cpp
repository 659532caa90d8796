#include "abphase/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace abphase {

namespace {

using nlohmann::json;

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// numeric JSON value with the same %.9g digits as the text formats
json g9_json(double v) {
    if (!std::isfinite(v)) return nullptr;
    return json::parse(format_g9(v));
}

json phase_to_json(const PhaseReport& r) {
    return json{{"method", phase_method_name(r.method)},
                {"value", g9_json(r.value)},
                {"error", g9_json(r.error_estimate)},
                {"evaluations", r.evaluations},
                {"z_extent", g9_json(r.z_extent_used)},
                {"status", quadrature_status_name(r.status)}};
}

} // namespace

std::string format_g9(double v) {
    if (v == 0.0) return "0";  // never leak the sign of a zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "table") return ReportFormat::table;
    if (name == "csv") return ReportFormat::csv;
    if (name == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown format '" + name +
                                "' (expected table, csv, or json)");
}

std::string render_phases(const std::vector<PhaseReport>& rows, ReportFormat fmt) {
    if (fmt == ReportFormat::csv) {
        std::ostringstream out;
        out << "method,value,error,evaluations,z_extent,status\n";
        for (const PhaseReport& r : rows)
            out << phase_method_name(r.method) << ',' << format_g9(r.value) << ','
                << format_g9(r.error_estimate) << ',' << r.evaluations << ','
                << format_g9(r.z_extent_used) << ',' << quadrature_status_name(r.status)
                << '\n';
        return out.str();
    }
    if (fmt == ReportFormat::json) {
        json arr = json::array();
        for (const PhaseReport& r : rows) arr.push_back(phase_to_json(r));
        return arr.dump(2) + "\n";
    }

    // table: fixed-width columns sized for %.9g payloads
    std::ostringstream out;
    out << pad("method", 22) << pad("value", 18) << pad("error", 17) << pad("evals", 12)
        << pad("z_extent", 12) << "status\n";
    for (const PhaseReport& r : rows)
        out << pad(phase_method_name(r.method), 22) << pad(format_g9(r.value), 18)
            << pad(format_g9(r.error_estimate), 17)
            << pad(std::to_string(r.evaluations), 12)
            << pad(format_g9(r.z_extent_used), 12) << quadrature_status_name(r.status)
            << '\n';
    return out.str();
}

std::string render_consistency(const ConsistencyReport& rep, ReportFormat fmt) {
    if (fmt == ReportFormat::csv) {
        std::ostringstream out;
        out << "check,status,detail\n";
        for (const CheckResult& c : rep.checks)
            out << csv_escape(c.name) << ',' << check_status_name(c.status) << ','
                << csv_escape(c.detail) << '\n';
        return out.str();
    }
    if (fmt == ReportFormat::json) {
        json arr = json::array();
        for (const CheckResult& c : rep.checks)
            arr.push_back(json{{"check", c.name},
                               {"status", check_status_name(c.status)},
                               {"detail", c.detail}});
        json root{{"checks", arr},
                  {"verdict", rep.all_ok() ? "PASS" : "FAIL"}};
        return root.dump(2) + "\n";
    }

    std::ostringstream out;
    std::size_t width = 24;
    for (const CheckResult& c : rep.checks) width = std::max(width, c.name.size() + 2);
    std::size_t failed = 0, inconclusive = 0, expected = 0;
    for (const CheckResult& c : rep.checks) {
        out << pad(c.name, width) << pad(check_status_name(c.status), 22) << c.detail
            << '\n';
        if (c.status == CheckStatus::fail) ++failed;
        if (c.status == CheckStatus::inconclusive) ++inconclusive;
        if (c.status == CheckStatus::expected_discrepancy) ++expected;
    }
    out << "verdict: " << (rep.all_ok() ? "PASS" : "FAIL") << " (" << rep.checks.size()
        << " checks, " << failed << " failed, " << inconclusive << " inconclusive, "
        << expected << " expected discrepancies)\n";
    return out.str();
}

std::string render_sweep_csv(const std::string& param,
                             const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "param,value,method,phase,error,evaluations,z_extent,status\n";
    for (const SweepRow& row : rows) {
        if (row.skipped) {
            out << csv_escape(param) << ',' << format_g9(row.param_value)
                << ",,,,,," << csv_escape("SKIPPED: " + row.skip_reason) << '\n';
            continue;
        }
        for (const PhaseReport& r : row.phases)
            out << csv_escape(param) << ',' << format_g9(row.param_value) << ','
                << phase_method_name(r.method) << ',' << format_g9(r.value) << ','
                << format_g9(r.error_estimate) << ',' << r.evaluations << ','
                << format_g9(r.z_extent_used) << ','
                << quadrature_status_name(r.status) << '\n';
    }
    return out.str();
}

} // namespace abphase
