// Command-line front end: simulation harness, real-data testing, and stack
// format conversion.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nettest/errors.hpp"
#include "nettest/gap.hpp"
#include "nettest/global_test.hpp"
#include "nettest/harness.hpp"
#include "nettest/netdata.hpp"
#include "nettest/report.hpp"
#include "nettest/stats.hpp"

namespace {

using namespace nettest;

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

StackFormat detect_stack_format(const std::string& path,
                                const std::string& requested) {
    if (requested == "csv") return StackFormat::csv;
    if (requested == "binary") return StackFormat::binary;
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open " + path);
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    return (in.gcount() == 4 && magic[0] == 'N' && magic[1] == 'T' &&
            magic[2] == 'S' && magic[3] == 'T')
               ? StackFormat::binary
               : StackFormat::csv;
}

NetworkSampleStack apply_transform(const NetworkSampleStack& stack,
                                   const std::string& transform) {
    if (transform == "none") return stack;
    require(transform == "log1p", "unknown transform: " + transform);
    const LinkIndexMap map(stack.p());
    auto links = sample_major_links(stack, map);
    for (double& v : links) {
        require(v > -1.0, "log1p transform requires entries > -1");
        v = std::log1p(v);
    }
    return NetworkSampleStack::from_links(stack.group_id(), stack.p(), links,
                                          static_cast<std::size_t>(stack.n()));
}

struct RealDataInputs {
    NetworkSampleStack stack1;
    NetworkSampleStack stack2;
};

RealDataInputs load_pair(const std::string& path1, const std::string& path2,
                         const std::string& in_format,
                         const std::string& transform) {
    auto s1 = load_stack(path1, detect_stack_format(path1, in_format), 1);
    auto s2 = load_stack(path2, detect_stack_format(path2, in_format), 2);
    require(s1.p() == s2.p(), "stacks have different node counts (" +
                                  std::to_string(s1.p()) + " vs " +
                                  std::to_string(s2.p()) + ")");
    return {apply_transform(s1, transform), apply_transform(s2, transform)};
}

std::string global_summary(const GlobalTestResult& g, const LinkIndexMap& map) {
    const auto [i, j] = map.unflatten(g.argmax_link);
    std::ostringstream os;
    os << "global test: M_n = " << fmt_real(g.m_n) << " at link (" << i + 1
       << "," << j + 1 << ")\n"
       << "  standardized = " << fmt_real(g.standardized)
       << "  p-value = " << fmt_real(g.pvalue) << "\n"
       << "  alpha = " << g.alpha << "  critical M_n = " << fmt_real(g.critical)
       << "  decision = " << (g.reject ? "reject" : "retain") << "\n";
    return os.str();
}

// Per-link weights of the winning enhanced candidate, for reporting adjusted
// p-values.
std::vector<double> winner_weights(const MultipleTestResult& res,
                                   const LinkStatistics& stats) {
    const auto& detail = *res.enhanced;
    auto part = partition_groups(stats.a, detail.lambdas);
    part.pi_hat = detail.pi_hat;
    return compute_weights(part);
}

void write_link_table(const std::string& path, const std::string& format,
                      const LinkStatistics& stats, const LinkIndexMap& map,
                      const GlobalTestResult& g, const MultipleTestResult& res,
                      const std::string& transform) {
    std::ofstream os(path, std::ios::trunc | std::ios::binary);
    require(os.good(), "cannot write " + path);
    const bool enhanced = res.method == TestMethod::enhanced;
    std::vector<double> padj;
    if (enhanced) {
        padj = adjust_pvalues(stats.pvalue, winner_weights(res, stats));
    }
    std::vector<char> rejected(stats.q, 0);
    for (auto k : res.rejected) rejected[k] = 1;

    if (format == "jsonl") {
        os << "{\"record\":\"meta\",\"method\":\"" << method_name(res.method)
           << "\",\"alpha\":" << fmt_real(res.alpha) << ",\"p\":" << map.p()
           << ",\"q\":" << map.q() << ",\"n1\":" << stats.n1
           << ",\"n2\":" << stats.n2 << ",\"transform\":\"" << transform
           << "\",\"threshold\":" << fmt_real(res.threshold)
           << ",\"n_rejections\":" << res.n_rejections
           << ",\"estimated_fdp\":" << fmt_real(res.estimated_fdp)
           << ",\"global_m_n\":" << fmt_real(g.m_n)
           << ",\"global_pvalue\":" << fmt_real(g.pvalue)
           << ",\"global_reject\":" << (g.reject ? 1 : 0) << "}\n";
        for (std::size_t k = 0; k < stats.q; ++k) {
            const auto [i, j] = map.unflatten(k);
            os << "{\"i\":" << i + 1 << ",\"j\":" << j + 1 << ",\"k\":" << k
               << ",\"w\":" << fmt_real(stats.w[k])
               << ",\"t\":" << fmt_real(stats.t[k])
               << ",\"a\":" << fmt_real(stats.a[k])
               << ",\"pvalue\":" << fmt_real(stats.pvalue[k]);
            if (enhanced) os << ",\"adj_pvalue\":" << fmt_real(padj[k]);
            os << ",\"rejected\":" << int(rejected[k]) << "}\n";
        }
        return;
    }
    if (format == "table") {
        os << global_summary(g, map);
        os << "method = " << method_name(res.method)
           << "  rejections = " << res.n_rejections
           << "  threshold = " << fmt_real(res.threshold) << "\n";
        os << "rejected links (1-based node pairs):\n";
        for (auto k : res.rejected) {
            const auto [i, j] = map.unflatten(k);
            char buf[160];
            std::snprintf(buf, sizeof buf, "  (%d,%d)  t=%+.3f  p=%.3g\n",
                          i + 1, j + 1, stats.t[k], stats.pvalue[k]);
            os << buf;
        }
        return;
    }
    require(format == "tsv", "unknown format: " + format);
    os << "# nettest-links 1\n";
    os << "# method = " << method_name(res.method) << "\n";
    os << "# alpha = " << fmt_real(res.alpha) << "\n";
    os << "# transform = " << transform << "\n";
    os << "# p = " << map.p() << "\n# q = " << map.q() << "\n";
    os << "# n1 = " << stats.n1 << "\n# n2 = " << stats.n2 << "\n";
    os << "# threshold = " << fmt_real(res.threshold) << "\n";
    if (!enhanced) {
        os << "# estimated_fdp = " << fmt_real(res.estimated_fdp) << "\n";
    }
    os << "# n_rejections = " << res.n_rejections << "\n";
    os << "# global_m_n = " << fmt_real(g.m_n) << "\n";
    os << "# global_pvalue = " << fmt_real(g.pvalue) << "\n";
    os << "# global_reject = " << (g.reject ? 1 : 0) << "\n";
    os << (enhanced ? "i\tj\tk\tw\tt\ta\tpvalue\tadj_pvalue\trejected\n"
                    : "i\tj\tk\tw\tt\ta\tpvalue\trejected\n");
    for (std::size_t k = 0; k < stats.q; ++k) {
        const auto [i, j] = map.unflatten(k);
        os << i + 1 << '\t' << j + 1 << '\t' << k << '\t'
           << fmt_real(stats.w[k]) << '\t' << fmt_real(stats.t[k]) << '\t'
           << fmt_real(stats.a[k]) << '\t' << fmt_real(stats.pvalue[k]);
        if (enhanced) os << '\t' << fmt_real(padj[k]);
        os << '\t' << int(rejected[k]) << "\n";
    }
}

struct SimulateArgs {
    std::string family = "bernoulli";
    int p = 68;
    std::vector<int> n_list{100};
    int n1_override = 0;
    int n2_override = 0;
    std::vector<long> kq_list{0};
    double alpha = 0.05;
    int reps = 100;
    std::uint64_t seed = 0;
    int workers = 0;
    std::vector<std::string> methods{"baseline", "enhanced"};
    int k_groups = 3;
    double storey_lambda = 0.5;
    double epsilon = 1e-5;
    long n_grid = 0;
    std::vector<std::string> params;
    std::string format = "tsv";
    std::string out_dir = ".";
};

std::map<std::string, double> parse_params(
    const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        require(eq != std::string::npos && eq > 0,
                "--param expects key=value, got '" + kv + "'");
        try {
            out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ValidationError("malformed --param value in '" + kv + "'");
        }
    }
    return out;
}

int run_simulate(const SimulateArgs& args) {
    std::vector<TestMethod> methods;
    for (const auto& m : args.methods) {
        if (m == "all") {
            methods = {TestMethod::global, TestMethod::baseline,
                       TestMethod::enhanced};
            break;
        }
        methods.push_back(method_from_name(m));
    }
    const auto format = report_format_from_name(args.format);
    std::filesystem::create_directories(args.out_dir);

    HarnessOptions options;
    options.workers = args.workers;
    options.gap.k_groups = args.k_groups;
    options.gap.storey_lambda = args.storey_lambda;
    options.gap.epsilon = args.epsilon;
    options.gap.n_grid = args.n_grid;

    std::vector<ReplicationReport> all;
    for (int n : args.n_list) {
        for (long kq : args.kq_list) {
            ScenarioSpec spec;
            spec.family = family_from_name(args.family);
            spec.p = args.p;
            spec.n1 = args.n1_override > 0 ? args.n1_override : n;
            spec.n2 = args.n2_override > 0 ? args.n2_override : n;
            spec.k_q = kq;
            spec.seed = args.seed;
            spec.params = parse_params(args.params);
            auto reports = run_replications(spec, methods, args.alpha,
                                            args.reps, options);
            for (const auto& report : reports) {
                char cell[160];
                std::snprintf(cell, sizeof cell, "%s_p%d_n%dx%d_kq%ld_%s%s",
                              args.family.c_str(), spec.p, spec.n1, spec.n2,
                              spec.k_q, method_name(report.method).c_str(),
                              report_file_extension(format).c_str());
                const auto path =
                    (std::filesystem::path(args.out_dir) / cell).string();
                emit_report(report, format, path);
                std::cout << "wrote " << path << "\n";
                all.push_back(report);
            }
        }
    }
    std::cout << "\n" << render_summary_table(all);
    return 0;
}

int run_test_global(const std::string& path1, const std::string& path2,
                    double alpha, const std::string& transform,
                    const std::string& in_format) {
    const auto in = load_pair(path1, path2, in_format, transform);
    const auto stats = compute_link_statistics(in.stack1, in.stack2);
    const LinkIndexMap map(in.stack1.p());
    const auto g = run_global_test(stats.t, alpha, stats.q);
    std::cout << global_summary(g, map);
    return 0;
}

int run_test_links(bool enhanced, const std::string& path1,
                   const std::string& path2, double alpha,
                   const std::string& transform, const std::string& in_format,
                   const std::string& out, const std::string& format,
                   const GapConfig& gap) {
    const auto in = load_pair(path1, path2, in_format, transform);
    const auto stats = compute_link_statistics(in.stack1, in.stack2);
    const LinkIndexMap map(in.stack1.p());
    const auto g = run_global_test(stats.t, alpha, stats.q);
    const MultipleTestResult res =
        enhanced
            ? run_enhanced_test_from_pvalues(stats.pvalue, stats.a, alpha, gap)
            : run_baseline_test(stats.t, alpha);
    std::cout << global_summary(g, map);
    std::cout << "method = " << method_name(res.method)
              << "  rejections = " << res.n_rejections
              << "  threshold = " << fmt_real(res.threshold) << "\n";
    if (!out.empty()) {
        write_link_table(out, format, stats, map, g, res, transform);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int run_convert(const std::string& in_path, const std::string& out_path,
                const std::string& to, const std::string& in_format) {
    const auto src_format = detect_stack_format(in_path, in_format);
    const auto stack = load_stack(in_path, src_format, 1);
    StackFormat dst;
    if (to == "csv") {
        dst = StackFormat::csv;
    } else if (to == "binary") {
        dst = StackFormat::binary;
    } else {
        throw ValidationError("--to must be csv or binary");
    }
    write_stack(stack, out_path, dst);
    std::cout << "wrote " << out_path << " (p=" << stack.p()
              << ", n=" << stack.n() << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "nettest: two-sample inference for populations of symmetric "
        "network matrices (global max test, per-link FDR control, and "
        "auxiliary-weighted power enhancement)"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Config file with key=value lines mirroring the flags; "
                   "command-line flags take precedence");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo FDR/power study over a scenario grid");
    simulate->add_option("--family", sim.family,
                         "bernoulli, bernoulli-mixture, poisson, log-normal, "
                         "transformed-wishart, correlation-network");
    simulate->add_option("--p", sim.p, "node count");
    simulate->add_option("--n", sim.n_list, "group sizes (n1 = n2), list")
        ->delimiter(',');
    simulate->add_option("--n1", sim.n1_override, "override group 1 size");
    simulate->add_option("--n2", sim.n2_override, "override group 2 size");
    simulate->add_option("--kq", sim.kq_list, "union-support sizes, list")
        ->delimiter(',');
    simulate->add_option("--alpha", sim.alpha, "significance level");
    simulate->add_option("--reps", sim.reps, "replications per cell");
    simulate->add_option("--seed", sim.seed, "master seed")->required();
    simulate->add_option("--workers", sim.workers,
                         "worker threads (0 = hardware)");
    simulate->add_option("--method", sim.methods,
                         "global, baseline, enhanced, or all (list)")
        ->delimiter(',');
    simulate->add_option("--k-groups", sim.k_groups,
                         "auxiliary groups for the enhanced test");
    simulate->add_option("--storey-lambda", sim.storey_lambda,
                         "tail threshold of the alternative-proportion "
                         "estimate");
    simulate->add_option("--epsilon", sim.epsilon,
                         "clamp for estimated proportions");
    simulate->add_option("--n-grid", sim.n_grid,
                         "grid density N (0 = auto from the spacing target)");
    simulate->add_option("--param", sim.params,
                         "family parameter override key=value (repeatable)");
    simulate->add_option("--format", sim.format, "tsv, jsonl, or table");
    simulate->add_option("--out", sim.out_dir, "output directory");

    std::string g_path1, g_path2, g_transform = "none", g_in_format = "auto";
    double g_alpha = 0.05;
    auto* tglobal = app.add_subcommand(
        "test-global", "max-type global test on two observed stacks");
    tglobal->add_option("path1", g_path1, "group 1 stack")->required();
    tglobal->add_option("path2", g_path2, "group 2 stack")->required();
    tglobal->add_option("--alpha", g_alpha, "significance level");
    tglobal->add_option("--transform", g_transform, "none or log1p");
    tglobal->add_option("--in-format", g_in_format, "auto, csv, or binary");

    struct LinksArgs {
        std::string path1, path2;
        double alpha = 0.05;
        std::string transform = "none";
        std::string in_format = "auto";
        std::string out;
        std::string format = "tsv";
        int k_groups = 3;
        double storey_lambda = 0.5;
        double epsilon = 1e-5;
        long n_grid = 0;
    };
    LinksArgs lb, le;
    auto add_links_options = [](CLI::App* cmd, LinksArgs& a) {
        cmd->add_option("path1", a.path1, "group 1 stack")->required();
        cmd->add_option("path2", a.path2, "group 2 stack")->required();
        cmd->add_option("--alpha", a.alpha, "significance level");
        cmd->add_option("--transform", a.transform, "none or log1p");
        cmd->add_option("--in-format", a.in_format, "auto, csv, or binary");
        cmd->add_option("--out", a.out, "link table output file");
        cmd->add_option("--format", a.format, "tsv, jsonl, or table");
    };
    auto* tlinks = app.add_subcommand(
        "test-links", "per-link simultaneous test with FDR control");
    add_links_options(tlinks, lb);
    auto* tlinks_enh = app.add_subcommand(
        "test-links-enhanced",
        "per-link test with auxiliary-weighted power enhancement");
    add_links_options(tlinks_enh, le);
    tlinks_enh->add_option("--k-groups", le.k_groups, "auxiliary groups");
    tlinks_enh->add_option("--storey-lambda", le.storey_lambda,
                           "tail threshold of the proportion estimate");
    tlinks_enh->add_option("--epsilon", le.epsilon,
                           "clamp for estimated proportions");
    tlinks_enh->add_option("--n-grid", le.n_grid,
                           "grid density N (0 = auto from the spacing "
                           "target)");

    std::string c_in, c_out, c_to, c_in_format = "auto";
    auto* convert = app.add_subcommand(
        "convert", "convert between csv-stack and binary-stack");
    convert->add_option("input", c_in, "input stack")->required();
    convert->add_option("output", c_out, "output path")->required();
    convert->add_option("--to", c_to, "csv or binary")->required();
    convert->add_option("--in-format", c_in_format, "auto, csv, or binary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (tglobal->parsed()) {
            return run_test_global(g_path1, g_path2, g_alpha, g_transform,
                                   g_in_format);
        }
        if (tlinks->parsed()) {
            return run_test_links(false, lb.path1, lb.path2, lb.alpha,
                                  lb.transform, lb.in_format, lb.out,
                                  lb.format, GapConfig{});
        }
        if (tlinks_enh->parsed()) {
            GapConfig gap;
            gap.k_groups = le.k_groups;
            gap.storey_lambda = le.storey_lambda;
            gap.epsilon = le.epsilon;
            gap.n_grid = le.n_grid;
            return run_test_links(true, le.path1, le.path2, le.alpha,
                                  le.transform, le.in_format, le.out,
                                  le.format, gap);
        }
        if (convert->parsed()) {
            return run_convert(c_in, c_out, c_to, c_in_format);
        }
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
