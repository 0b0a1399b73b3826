#include "nettest/netdata.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nettest/errors.hpp"

namespace nettest {

LinkIndexMap::LinkIndexMap(int p) : p_(p) {
    require(p >= 2, "node count p must be at least 2");
    row_offset_.resize(static_cast<std::size_t>(p));
    pairs_.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
    std::size_t k = 0;
    for (int i = 0; i < p; ++i) {
        row_offset_[static_cast<std::size_t>(i)] = k;
        for (int j = i + 1; j < p; ++j) {
            pairs_.emplace_back(i, j);
            ++k;
        }
    }
}

std::size_t LinkIndexMap::flatten(int i, int j) const {
    require(0 <= i && i < j && j < p_, "flatten requires 0 <= i < j < p");
    return row_offset_[static_cast<std::size_t>(i)] +
           static_cast<std::size_t>(j - i - 1);
}

std::pair<int, int> LinkIndexMap::unflatten(std::size_t k) const {
    require(k < pairs_.size(), "flat link index out of range");
    return pairs_[k];
}

namespace {

std::vector<double> canonicalize(int p, std::vector<double> data, int n,
                                 double tolerance) {
    const std::size_t pp = static_cast<std::size_t>(p);
    for (int l = 0; l < n; ++l) {
        double* m = data.data() + static_cast<std::size_t>(l) * pp * pp;
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                const double v = m[i * pp + j];
                if (!std::isfinite(v)) {
                    throw ValidationError(
                        "non-finite entry in sample " + std::to_string(l) +
                        " at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
                }
            }
        }
        for (int i = 0; i < p; ++i) {
            m[i * pp + i] = 0.0;
            for (int j = i + 1; j < p; ++j) {
                const double upper = m[i * pp + j];
                const double lower = m[j * pp + i];
                if (std::fabs(upper - lower) > tolerance) {
                    throw ValidationError(
                        "asymmetry beyond tolerance in sample " +
                        std::to_string(l) + " at (" + std::to_string(i) +
                        "," + std::to_string(j) + ")");
                }
                const double v = 0.5 * (upper + lower);
                m[i * pp + j] = v;
                m[j * pp + i] = v;
            }
        }
    }
    return data;
}

} // namespace

NetworkSampleStack NetworkSampleStack::from_matrices(
    int group_id, int p, const std::vector<std::vector<double>>& matrices,
    double tolerance) {
    require(group_id == 1 || group_id == 2, "group_id must be 1 or 2");
    require(p >= 2, "node count p must be at least 2");
    require(matrices.size() >= 2, "a stack needs at least 2 samples");
    const std::size_t pp = static_cast<std::size_t>(p) * p;
    std::vector<double> data;
    data.reserve(matrices.size() * pp);
    for (std::size_t l = 0; l < matrices.size(); ++l) {
        if (matrices[l].size() != pp) {
            throw ValidationError("sample " + std::to_string(l) +
                                  " has dimension mismatch (expected " +
                                  std::to_string(p) + "x" + std::to_string(p) +
                                  ")");
        }
        data.insert(data.end(), matrices[l].begin(), matrices[l].end());
    }
    const int n = static_cast<int>(matrices.size());
    return NetworkSampleStack(
        group_id, p, n, canonicalize(p, std::move(data), n, tolerance));
}

NetworkSampleStack NetworkSampleStack::from_links(
    int group_id, int p, const std::vector<double>& link_rows, std::size_t n) {
    require(group_id == 1 || group_id == 2, "group_id must be 1 or 2");
    require(p >= 2, "node count p must be at least 2");
    require(n >= 2, "a stack needs at least 2 samples");
    const LinkIndexMap map(p);
    require(link_rows.size() == n * map.q(),
            "link row buffer size does not match n * q");
    const std::size_t pp = static_cast<std::size_t>(p);
    std::vector<double> data(n * pp * pp, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
        const double* row = link_rows.data() + l * map.q();
        double* m = data.data() + l * pp * pp;
        std::size_t k = 0;
        for (int i = 0; i < p; ++i) {
            for (int j = i + 1; j < p; ++j, ++k) {
                if (!std::isfinite(row[k])) {
                    throw ValidationError("non-finite link value in sample " +
                                          std::to_string(l));
                }
                m[i * pp + j] = row[k];
                m[j * pp + i] = row[k];
            }
        }
    }
    return NetworkSampleStack(group_id, p, static_cast<int>(n),
                              std::move(data));
}

std::vector<double> flatten_upper(std::span<const double> matrix,
                                  const LinkIndexMap& map) {
    const std::size_t p = static_cast<std::size_t>(map.p());
    require(matrix.size() == p * p,
            "matrix dimension does not match the link index map");
    std::vector<double> out;
    out.reserve(map.q());
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            out.push_back(matrix[i * p + j]);
        }
    }
    return out;
}

std::vector<double> sample_major_links(const NetworkSampleStack& stack,
                                       const LinkIndexMap& map) {
    require(map.p() == stack.p(), "link index map does not match stack");
    const std::size_t p = static_cast<std::size_t>(stack.p());
    std::vector<double> out(static_cast<std::size_t>(stack.n()) * map.q());
    for (int l = 0; l < stack.n(); ++l) {
        const auto m = stack.sample(l);
        double* row = out.data() + static_cast<std::size_t>(l) * map.q();
        std::size_t k = 0;
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i + 1; j < p; ++j, ++k) row[k] = m[i * p + j];
        }
    }
    return out;
}

namespace {

constexpr char binary_magic[4] = {'N', 'T', 'S', 'T'};
constexpr std::uint8_t binary_version = 1;

void put_u32le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>((v >> 16) & 0xFF));
    out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

std::uint32_t get_u32le(const unsigned char* b) {
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64le(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int s = 0; s < 64; s += 8) {
        out.push_back(static_cast<char>((bits >> s) & 0xFF));
    }
}

double get_f64le(const unsigned char* b) {
    std::uint64_t bits = 0;
    for (int s = 7; s >= 0; --s) bits = (bits << 8) | b[s];
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

NetworkSampleStack load_binary(const std::string& path, int group_id) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    require(bytes.size() >= 13, "malformed header in " + path);
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
    require(std::memcmp(raw, binary_magic, 4) == 0,
            "bad magic in " + path + " (not a binary-stack file)");
    require(raw[4] == binary_version,
            "unsupported binary-stack version in " + path);
    const std::uint32_t p = get_u32le(raw + 5);
    const std::uint32_t n = get_u32le(raw + 9);
    require(p >= 2 && p <= 100000, "invalid node count in " + path);
    require(n >= 2 && n <= 100000000, "invalid sample count in " + path);
    const std::size_t q = static_cast<std::size_t>(p) * (p - 1) / 2;
    const std::size_t expect = 13 + n * q * 8;
    require(bytes.size() == expect, "truncated or oversized body in " + path);
    std::vector<double> rows(static_cast<std::size_t>(n) * q);
    const unsigned char* body = raw + 13;
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
        rows[idx] = get_f64le(body + idx * 8);
    }
    return NetworkSampleStack::from_links(group_id, static_cast<int>(p), rows,
                                          n);
}

void write_binary(const NetworkSampleStack& stack, const std::string& path) {
    const LinkIndexMap map(stack.p());
    std::string out;
    out.reserve(13 + static_cast<std::size_t>(stack.n()) * map.q() * 8);
    out.append(binary_magic, 4);
    out.push_back(static_cast<char>(binary_version));
    put_u32le(out, static_cast<std::uint32_t>(stack.p()));
    put_u32le(out, static_cast<std::uint32_t>(stack.n()));
    for (int l = 0; l < stack.n(); ++l) {
        const auto flat = flatten_upper(stack.sample(l), map);
        for (double v : flat) put_f64le(out, v);
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    require(os.good(), "cannot write " + path);
    os.write(out.data(), static_cast<std::streamsize>(out.size()));
    require(os.good(), "short write to " + path);
}

std::vector<double> parse_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open " + path);
    std::vector<double> values;
    std::string line;
    std::size_t cols = 0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        if (line.empty()) continue;
        std::size_t ncol = 0;
        const char* s = line.c_str();
        while (*s != '\0') {
            char* end = nullptr;
            const double v = std::strtod(s, &end);
            if (end == s) {
                throw ValidationError("malformed number in " + path +
                                      " line " + std::to_string(rows + 1));
            }
            values.push_back(v);
            ++ncol;
            s = end;
            while (*s == ' ' || *s == '\t') ++s;
            if (*s == ',') {
                ++s;
                while (*s == ' ' || *s == '\t') ++s;
            }
        }
        if (cols == 0) {
            cols = ncol;
        } else if (ncol != cols) {
            throw ValidationError("ragged row in " + path + " line " +
                                  std::to_string(rows + 1));
        }
        ++rows;
    }
    require(rows > 0, "empty CSV matrix in " + path);
    require(rows == cols, "CSV matrix in " + path + " is not square (" +
                              std::to_string(rows) + "x" +
                              std::to_string(cols) + ")");
    return values;
}

NetworkSampleStack load_csv(const std::string& manifest_path, int group_id) {
    std::ifstream in(manifest_path);
    require(in.good(), "cannot open manifest " + manifest_path);
    const auto base = std::filesystem::path(manifest_path).parent_path();
    std::vector<std::string> files;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') continue;
        std::filesystem::path entry(line);
        if (entry.is_relative()) entry = base / entry;
        files.push_back(entry.string());
    }
    require(files.size() >= 2, "manifest " + manifest_path +
                                   " must list at least 2 sample files");
    std::vector<std::vector<double>> matrices;
    matrices.reserve(files.size());
    int p = 0;
    for (const auto& f : files) {
        auto m = parse_csv_matrix(f);
        const int dim = static_cast<int>(std::lround(std::sqrt(
            static_cast<double>(m.size()))));
        if (p == 0) {
            p = dim;
        } else if (dim != p) {
            throw ValidationError("dimension mismatch: " + f + " is " +
                                  std::to_string(dim) + "x" +
                                  std::to_string(dim) + ", expected " +
                                  std::to_string(p));
        }
        matrices.push_back(std::move(m));
    }
    return NetworkSampleStack::from_matrices(group_id, p, matrices);
}

void write_csv(const NetworkSampleStack& stack,
               const std::string& manifest_path) {
    const auto manifest = std::filesystem::path(manifest_path);
    const auto base = manifest.parent_path();
    const std::string stem = manifest.stem().string();
    std::string listing;
    for (int l = 0; l < stack.n(); ++l) {
        char name[64];
        std::snprintf(name, sizeof name, "_sample%04d.csv", l);
        const std::string file = stem + name;
        std::ofstream os(base.empty() ? file : (base / file).string());
        require(os.good(), "cannot write sample file " + file);
        const auto m = stack.sample(l);
        char buf[40];
        for (int i = 0; i < stack.p(); ++i) {
            for (int j = 0; j < stack.p(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g",
                              m[static_cast<std::size_t>(i) * stack.p() + j]);
                if (j > 0) os.put(',');
                os << buf;
            }
            os.put('\n');
        }
        listing += file;
        listing += '\n';
    }
    std::ofstream os(manifest_path, std::ios::trunc);
    require(os.good(), "cannot write manifest " + manifest_path);
    os << listing;
    require(os.good(), "short write to " + manifest_path);
}

} // namespace

NetworkSampleStack load_stack(const std::string& path, StackFormat format,
                              int group_id) {
    return format == StackFormat::binary ? load_binary(path, group_id)
                                         : load_csv(path, group_id);
}

void write_stack(const NetworkSampleStack& stack, const std::string& path,
                 StackFormat format) {
    if (format == StackFormat::binary) {
        write_binary(stack, path);
    } else {
        write_csv(stack, path);
    }
}

} // namespace nettest
