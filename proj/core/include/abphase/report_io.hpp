#ifndef ABPHASE_REPORT_IO_HPP
#define ABPHASE_REPORT_IO_HPP

#include <string>
#include <vector>

#include "abphase/consistency.hpp"
#include "abphase/phase.hpp"

namespace abphase {

// All numbers render with %.9g; no timings appear in any output, so repeated
// runs of the same scenario are byte-identical.

std::string format_g9(double v);

enum class ReportFormat { table, csv, json };

// throws std::invalid_argument on anything but "table", "csv", "json"
ReportFormat parse_report_format(const std::string& name);

std::string render_phases(const std::vector<PhaseReport>& rows, ReportFormat fmt);

std::string render_consistency(const ConsistencyReport& rep, ReportFormat fmt);

// One sweep output row: the four phases at one parameter value, or a skip
// record when that value fails validation.
struct SweepRow {
    double param_value = 0.0;
    std::vector<PhaseReport> phases;
    bool skipped = false;
    std::string skip_reason;
};

// CSV only: one line per (value, method), SKIPPED rows keep the reason in
// the status column.
std::string render_sweep_csv(const std::string& param, const std::vector<SweepRow>& rows);

} // namespace abphase

#endif
