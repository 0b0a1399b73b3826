#include "nettest/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nettest/errors.hpp"

namespace nettest {

namespace {

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void spec_to_kv(const ScenarioSpec& spec, std::ostringstream& os,
                const char* prefix) {
    os << prefix << "family = " << family_name(spec.family) << "\n";
    os << prefix << "p = " << spec.p << "\n";
    os << prefix << "n1 = " << spec.n1 << "\n";
    os << prefix << "n2 = " << spec.n2 << "\n";
    os << prefix << "k_q = " << spec.k_q << "\n";
    os << prefix << "seed = " << spec.seed << "\n";
    for (const auto& [key, value] : spec.params) {
        os << prefix << "param." << key << " = " << fmt_real(value) << "\n";
    }
}

std::string render_tsv(const ReplicationReport& r) {
    std::ostringstream os;
    os << "# nettest-report 1\n";
    os << "# method = " << method_name(r.method) << "\n";
    os << "# alpha = " << fmt_real(r.alpha) << "\n";
    os << "# n_replications = " << r.n_replications << "\n";
    os << "# empirical_fdr_pct = " << fmt_real(r.empirical_fdr_pct) << "\n";
    os << "# empirical_power_pct = " << fmt_real(r.empirical_power_pct)
       << "\n";
    os << "# se_fdr_pct = " << fmt_real(r.se_fdr_pct) << "\n";
    os << "# se_power_pct = " << fmt_real(r.se_power_pct) << "\n";
    std::ostringstream spec_os;
    spec_to_kv(r.spec, spec_os, "# scenario.");
    os << spec_os.str();
    os << "rep\tfdp\tpower\tn_rejections\tthreshold\n";
    for (const auto& rec : r.records) {
        os << rec.rep << '\t' << fmt_real(rec.fdp) << '\t'
           << fmt_real(rec.power) << '\t' << rec.n_rejections << '\t'
           << fmt_real(rec.threshold) << "\n";
    }
    return os.str();
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out.push_back('\\');
            out.push_back(c);
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string render_jsonl(const ReplicationReport& r) {
    std::ostringstream os;
    os << "{\"record\":\"meta\",\"method\":\"" << method_name(r.method)
       << "\",\"alpha\":" << fmt_real(r.alpha)
       << ",\"n_replications\":" << r.n_replications
       << ",\"empirical_fdr_pct\":" << fmt_real(r.empirical_fdr_pct)
       << ",\"empirical_power_pct\":" << fmt_real(r.empirical_power_pct)
       << ",\"se_fdr_pct\":" << fmt_real(r.se_fdr_pct)
       << ",\"se_power_pct\":" << fmt_real(r.se_power_pct)
       << ",\"scenario\":{\"family\":\"" << family_name(r.spec.family)
       << "\",\"p\":" << r.spec.p << ",\"n1\":" << r.spec.n1
       << ",\"n2\":" << r.spec.n2 << ",\"k_q\":" << r.spec.k_q
       << ",\"seed\":" << r.spec.seed << ",\"params\":{";
    bool first = true;
    for (const auto& [key, value] : r.spec.params) {
        if (!first) os << ',';
        first = false;
        os << '"' << json_escape(key) << "\":" << fmt_real(value);
    }
    os << "}}}\n";
    for (const auto& rec : r.records) {
        os << "{\"record\":\"rep\",\"rep\":" << rec.rep
           << ",\"fdp\":" << fmt_real(rec.fdp)
           << ",\"power\":" << fmt_real(rec.power)
           << ",\"n_rejections\":" << rec.n_rejections
           << ",\"threshold\":" << fmt_real(rec.threshold) << "}\n";
    }
    return os.str();
}

std::string render_table_one(const ReplicationReport& r) {
    std::vector<ReplicationReport> v{r};
    return render_summary_table(v);
}

ReplicationReport parse_tsv(std::istream& in, const std::string& path) {
    ReplicationReport r;
    r.spec.params.clear();
    std::string line;
    bool header_seen = false;
    bool columns_seen = false;
    std::ostringstream scenario_kv;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const auto eq = body.find('=');
            if (body.find("nettest-report") != std::string::npos) {
                header_seen = true;
                continue;
            }
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string()
                                              : s.substr(b, e - b + 1);
            };
            const std::string key = trim(body.substr(0, eq));
            const std::string value = trim(body.substr(eq + 1));
            if (key.rfind("scenario.", 0) == 0) {
                scenario_kv << key.substr(9) << " = " << value << "\n";
            } else if (key == "method") {
                r.method = method_from_name(value);
            } else if (key == "alpha") {
                r.alpha = std::stod(value);
            } else if (key == "n_replications") {
                r.n_replications = std::stoi(value);
            } else if (key == "empirical_fdr_pct") {
                r.empirical_fdr_pct = std::stod(value);
            } else if (key == "empirical_power_pct") {
                r.empirical_power_pct = std::stod(value);
            } else if (key == "se_fdr_pct") {
                r.se_fdr_pct = std::stod(value);
            } else if (key == "se_power_pct") {
                r.se_power_pct = std::stod(value);
            }
            continue;
        }
        if (!columns_seen) {
            columns_seen = true; // column header row
            continue;
        }
        ReplicationRecord rec;
        unsigned long long nrej = 0;
        if (std::sscanf(line.c_str(), "%d\t%lf\t%lf\t%llu\t%lf", &rec.rep,
                        &rec.fdp, &rec.power, &nrej, &rec.threshold) != 5) {
            throw ValidationError("malformed record row in " + path);
        }
        rec.n_rejections = static_cast<std::size_t>(nrej);
        r.records.push_back(rec);
    }
    require(header_seen, path + " is not a nettest report");
    r.spec = ScenarioSpec::from_kv_text(scenario_kv.str());
    require(static_cast<int>(r.records.size()) == r.n_replications,
            "record count does not match n_replications in " + path);
    return r;
}

ReplicationReport parse_jsonl(std::istream& in, const std::string& path) {
    ReplicationReport r;
    r.spec.params.clear();
    std::string line;
    bool meta_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError("malformed JSON in " + path + ": " +
                                  e.what());
        }
        const std::string kind = j.value("record", "");
        if (kind == "meta") {
            meta_seen = true;
            r.method = method_from_name(j.at("method").get<std::string>());
            r.alpha = j.at("alpha").get<double>();
            r.n_replications = j.at("n_replications").get<int>();
            r.empirical_fdr_pct = j.at("empirical_fdr_pct").get<double>();
            r.empirical_power_pct = j.at("empirical_power_pct").get<double>();
            r.se_fdr_pct = j.at("se_fdr_pct").get<double>();
            r.se_power_pct = j.at("se_power_pct").get<double>();
            const auto& sc = j.at("scenario");
            r.spec.family =
                family_from_name(sc.at("family").get<std::string>());
            r.spec.p = sc.at("p").get<int>();
            r.spec.n1 = sc.at("n1").get<int>();
            r.spec.n2 = sc.at("n2").get<int>();
            r.spec.k_q = sc.at("k_q").get<long>();
            r.spec.seed = sc.at("seed").get<std::uint64_t>();
            for (const auto& [key, value] : sc.at("params").items()) {
                r.spec.params[key] = value.get<double>();
            }
        } else if (kind == "rep") {
            ReplicationRecord rec;
            rec.rep = j.at("rep").get<int>();
            rec.fdp = j.at("fdp").get<double>();
            rec.power = j.at("power").get<double>();
            rec.n_rejections = j.at("n_rejections").get<std::size_t>();
            rec.threshold = j.at("threshold").get<double>();
            r.records.push_back(rec);
        } else {
            throw ValidationError("unknown record kind in " + path);
        }
    }
    require(meta_seen, path + " has no meta record");
    require(static_cast<int>(r.records.size()) == r.n_replications,
            "record count does not match n_replications in " + path);
    return r;
}

} // namespace

ReportFormat report_format_from_name(const std::string& name) {
    if (name == "tsv") return ReportFormat::tsv;
    if (name == "jsonl") return ReportFormat::jsonl;
    if (name == "table") return ReportFormat::table;
    throw ValidationError("unknown report format: " + name);
}

std::string report_format_name(ReportFormat f) {
    switch (f) {
        case ReportFormat::tsv: return "tsv";
        case ReportFormat::jsonl: return "jsonl";
        case ReportFormat::table: return "table";
    }
    throw InvariantError("unknown report format enum value");
}

std::string report_file_extension(ReportFormat f) {
    switch (f) {
        case ReportFormat::tsv: return ".tsv";
        case ReportFormat::jsonl: return ".jsonl";
        case ReportFormat::table: return ".txt";
    }
    throw InvariantError("unknown report format enum value");
}

std::string render_report(const ReplicationReport& report, ReportFormat f) {
    switch (f) {
        case ReportFormat::tsv: return render_tsv(report);
        case ReportFormat::jsonl: return render_jsonl(report);
        case ReportFormat::table: return render_table_one(report);
    }
    throw InvariantError("unknown report format enum value");
}

void emit_report(const ReplicationReport& report, ReportFormat f,
                 const std::string& path) {
    require(report.n_replications >= 1 && !report.records.empty(),
            "cannot emit a report with no replications");
    std::ofstream os(path, std::ios::trunc | std::ios::binary);
    require(os.good(), "cannot write report to " + path);
    const std::string body = render_report(report, f);
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    os.flush();
    require(os.good(), "short write to " + path);
}

ReplicationReport parse_report(const std::string& path, ReportFormat f) {
    require(f != ReportFormat::table,
            "the human table format is not parseable");
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open report " + path);
    return f == ReportFormat::tsv ? parse_tsv(in, path)
                                  : parse_jsonl(in, path);
}

std::string render_summary_table(
    const std::vector<ReplicationReport>& reports) {
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-20s %4s %5s %5s %6s %9s %6s  %-8s %s\n",
                  "family", "p", "n1", "n2", "k_q", "method", "reps",
                  "fdr%", "power%");
    os << buf;
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf,
                      "%-20s %4d %5d %5d %6ld %9s %6d  %5.1f(%.1f) %5.1f(%.1f)\n",
                      family_name(r.spec.family).c_str(), r.spec.p, r.spec.n1,
                      r.spec.n2, r.spec.k_q, method_name(r.method).c_str(),
                      r.n_replications, r.empirical_fdr_pct, r.se_fdr_pct,
                      r.empirical_power_pct, r.se_power_pct);
        os << buf;
    }
    return os.str();
}

} // namespace nettest
