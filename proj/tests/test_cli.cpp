#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "nettest/netdata.hpp"
#include "nettest/rng.hpp"

using namespace nettest;

namespace {

std::string cli_path() {
    const char* env = std::getenv("NETTEST_CLI");
    return env ? env : "";
}

int run_cli(const std::string& args) {
    const int rc = std::system((cli_path() + " " + args + " >/dev/null 2>&1")
                                   .c_str());
    return WEXITSTATUS(rc);
}

std::filesystem::path work_dir() {
    auto dir = std::filesystem::temp_directory_path() / "nettest_cli";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

NetworkSampleStack tiny_stack(int group, std::uint64_t seed) {
    SplitRng rng(seed, 0);
    const int p = 6, n = 8;
    const LinkIndexMap map(p);
    std::vector<double> rows(static_cast<std::size_t>(n) * map.q());
    for (auto& v : rows) v = rng.uniform(0.0, 1.0);
    return NetworkSampleStack::from_links(group, p, rows, n);
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("convert round-trips binary -> csv -> binary bit for bit") {
    if (cli_path().empty()) {
        MESSAGE("NETTEST_CLI not set; skipping CLI tests");
        return;
    }
    const auto dir = work_dir();
    const auto bin1 = (dir / "a.bin").string();
    const auto manifest = (dir / "a-manifest.txt").string();
    const auto bin2 = (dir / "b.bin").string();
    write_stack(tiny_stack(1, 12345), bin1, StackFormat::binary);
    CHECK(run_cli("convert " + bin1 + " " + manifest + " --to csv") == 0);
    CHECK(run_cli("convert " + manifest + " " + bin2 + " --to binary") == 0);
    CHECK(file_bytes(bin1) == file_bytes(bin2));
}

TEST_CASE("test-links runs end to end on real files") {
    if (cli_path().empty()) return;
    const auto dir = work_dir();
    const auto p1 = (dir / "g1.bin").string();
    const auto p2 = (dir / "g2.bin").string();
    write_stack(tiny_stack(1, 1), p1, StackFormat::binary);
    write_stack(tiny_stack(2, 2), p2, StackFormat::binary);
    const auto out = (dir / "links.tsv").string();
    CHECK(run_cli("test-links " + p1 + " " + p2 + " --out " + out) == 0);
    CHECK(std::filesystem::exists(out));
    const auto out2 = (dir / "links_enh.tsv").string();
    CHECK(run_cli("test-links-enhanced " + p1 + " " + p2 + " --out " + out2) ==
          0);
    CHECK(run_cli("test-global " + p1 + " " + p2) == 0);
}

TEST_CASE("identical stacks: zero rejections") {
    if (cli_path().empty()) return;
    const auto dir = work_dir();
    const auto p1 = (dir / "same1.bin").string();
    const auto p2 = (dir / "same2.bin").string();
    const auto s = tiny_stack(1, 77);
    write_stack(s, p1, StackFormat::binary);
    write_stack(s, p2, StackFormat::binary);
    const auto out = (dir / "same.tsv").string();
    CHECK(run_cli("test-links " + p1 + " " + p2 + " --out " + out) == 0);
    std::ifstream in(out);
    std::string line;
    std::size_t rejections = 999;
    while (std::getline(in, line)) {
        if (line.rfind("# n_rejections = ", 0) == 0) {
            rejections = std::stoul(line.substr(17));
        }
    }
    CHECK(rejections == 0);
}

TEST_CASE("exit codes: validation failures return 2") {
    if (cli_path().empty()) return;
    CHECK(run_cli("test-global /no/such/file /no/such/file2") == 2);
    CHECK(run_cli("convert /no/such/file out --to csv") == 2);
    CHECK(run_cli("simulate") == 2);        // missing required --seed
    CHECK(run_cli("no-such-subcommand") == 2);
    const auto dir = work_dir();
    const auto p1 = (dir / "x1.bin").string();
    write_stack(tiny_stack(1, 5), p1, StackFormat::binary);
    // mismatched dimensions
    SplitRng rng(9, 0);
    const LinkIndexMap map(4);
    std::vector<double> rows(3 * map.q());
    for (auto& v : rows) v = rng.uniform01();
    const auto p2 = (dir / "x2.bin").string();
    write_stack(NetworkSampleStack::from_links(2, 4, rows, 3), p2,
                StackFormat::binary);
    CHECK(run_cli("test-global " + p1 + " " + p2) == 2);
}

TEST_CASE("simulate writes parseable reports and a summary") {
    if (cli_path().empty()) return;
    const auto dir = (work_dir() / "sim_out").string();
    CHECK(run_cli("simulate --family bernoulli --p 10 --n 20 --kq 6 "
                  "--reps 4 --seed 31 --method baseline --format jsonl "
                  "--out " +
                  dir) == 0);
    CHECK(std::filesystem::exists(
        dir + "/bernoulli_p10_n20x20_kq6_baseline.jsonl"));
}

TEST_CASE("config file supplies flags, command line overrides") {
    if (cli_path().empty()) return;
    const auto dir = work_dir();
    const auto cfg = (dir / "sim.ini").string();
    {
        std::ofstream os(cfg);
        os << "[simulate]\n"
           << "family = bernoulli\n"
           << "p = 10\n"
           << "n = 20\n"
           << "kq = 6\n"
           << "reps = 3\n"
           << "seed = 77\n"
           << "method = baseline\n"
           << "out = " << (dir / "cfg_out").string() << "\n";
    }
    CHECK(run_cli("--config " + cfg + " simulate") == 0);
    CHECK(std::filesystem::exists(
        (dir / "cfg_out" / "bernoulli_p10_n20x20_kq6_baseline.tsv")));
    // flag wins over the file
    CHECK(run_cli("--config " + cfg + " simulate --kq 4") == 0);
    CHECK(std::filesystem::exists(
        (dir / "cfg_out" / "bernoulli_p10_n20x20_kq4_baseline.tsv")));
}

TEST_CASE("log1p transform handles count data with zeros") {
    if (cli_path().empty()) return;
    const auto dir = work_dir();
    // small count stacks including zeros
    SplitRng rng(404, 0);
    const int p = 5, n = 6;
    const LinkIndexMap map(p);
    auto make_counts = [&](int group) {
        std::vector<double> rows(static_cast<std::size_t>(n) * map.q());
        for (auto& v : rows) {
            v = static_cast<double>(rng.next_u64() % 5); // zeros included
        }
        return NetworkSampleStack::from_links(group, p, rows, n);
    };
    const auto p1 = (dir / "c1.bin").string();
    const auto p2 = (dir / "c2.bin").string();
    write_stack(make_counts(1), p1, StackFormat::binary);
    write_stack(make_counts(2), p2, StackFormat::binary);
    CHECK(run_cli("test-links " + p1 + " " + p2 + " --transform log1p") == 0);
    CHECK(run_cli("test-links " + p1 + " " + p2 + " --transform log") == 2);
}

} // TEST_SUITE
