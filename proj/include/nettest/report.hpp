#ifndef NETTEST_REPORT_HPP
#define NETTEST_REPORT_HPP

#include <string>
#include <vector>

#include "nettest/harness.hpp"

namespace nettest {

enum class ReportFormat { tsv, jsonl, table };

ReportFormat report_format_from_name(const std::string& name);
std::string report_format_name(ReportFormat f);
std::string report_file_extension(ReportFormat f);

// Machine formats (tsv, jsonl) serialize reals with 17 significant digits,
// so parse(render(report)) reproduces every number bit for bit; they carry
// no timestamps or timings, so identical runs produce identical bytes. The
// table format is the human-readable summary (percent values rounded to one
// decimal) and is not parseable.
std::string render_report(const ReplicationReport& report, ReportFormat f);
void emit_report(const ReplicationReport& report, ReportFormat f,
                 const std::string& path);
ReplicationReport parse_report(const std::string& path, ReportFormat f);

// One summary row per report: scenario, method, FDR/power (percent, one
// decimal) with Monte Carlo standard errors.
std::string render_summary_table(const std::vector<ReplicationReport>& reports);

} // namespace nettest

#endif // NETTEST_REPORT_HPP
