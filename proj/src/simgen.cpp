#include "nettest/simgen.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nettest/errors.hpp"

namespace nettest {

std::string family_name(Family f) {
    switch (f) {
        case Family::bernoulli: return "bernoulli";
        case Family::bernoulli_mixture: return "bernoulli-mixture";
        case Family::poisson: return "poisson";
        case Family::log_normal: return "log-normal";
        case Family::transformed_wishart: return "transformed-wishart";
        case Family::correlation_network: return "correlation-network";
    }
    throw InvariantError("unknown family enum value");
}

Family family_from_name(const std::string& name) {
    if (name == "bernoulli") return Family::bernoulli;
    if (name == "bernoulli-mixture") return Family::bernoulli_mixture;
    if (name == "poisson") return Family::poisson;
    if (name == "log-normal") return Family::log_normal;
    if (name == "transformed-wishart") return Family::transformed_wishart;
    if (name == "correlation-network") return Family::correlation_network;
    throw ValidationError("unknown family: " + name);
}

namespace {

const std::map<std::string, double>& family_defaults(Family f) {
    static const std::map<std::string, double> bernoulli{
        {"null_mean", 0.3},
        {"signal_low", 0.5},
        {"signal_high", 0.8},
        {"signal_low_prob", 0.1}};
    static const std::map<std::string, double> mixture{
        {"null_mean", 0.3},
        {"signal_low", 0.5},
        {"signal_high", 0.7},
        {"signal_low_prob", 0.1},
        {"mixture_shift", 0.2}};
    static const std::map<std::string, double> poisson{
        {"null_mean", 3.0}, {"shift_low", 1.0}, {"shift_high", 2.0}};
    static const std::map<std::string, double> log_normal{
        {"mu0", 0.0}, {"sigma", 1.0}, {"delta", 0.5}};
    static const std::map<std::string, double> wishart{
        {"scale_low", 3.0},
        {"scale_high", 5.0},
        {"dof", 100.0},
        {"diag_shift", 0.5},
        {"transform_cap", 30.0},
        {"count_offset", 0.0}};
    static const std::map<std::string, double> correlation{
        {"t_obs", 100.0},
        {"corr_low", 0.3},
        {"corr_high", 0.6},
        {"diag_shift", 1.0}};
    switch (f) {
        case Family::bernoulli: return bernoulli;
        case Family::bernoulli_mixture: return mixture;
        case Family::poisson: return poisson;
        case Family::log_normal: return log_normal;
        case Family::transformed_wishart: return wishart;
        case Family::correlation_network: return correlation;
    }
    throw InvariantError("unknown family enum value");
}

struct SupportSizes {
    std::size_t m11 = 0;
    std::size_t m21 = 0;
    std::size_t m0 = 0;
    std::size_t total() const { return m11 + m21 + m0; }
};

SupportSizes support_sizes(const ScenarioSpec& spec) {
    const auto kq = static_cast<std::size_t>(spec.k_q);
    switch (spec.family) {
        case Family::transformed_wishart:
            return {kq / 4, kq / 4, 3 * kq / 4};
        case Family::log_normal:
            return {kq, 0, 0};
        default:
            return {kq / 2, kq / 2, kq / 2};
    }
}

// Uniform integer in [0, bound) by 128-bit multiply.
std::uint64_t uniform_below(SplitRng& rng, std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng.next_u64()) * bound) >> 64);
}

enum class Role : std::uint8_t { none, m11, m21, m0 };

struct Supports {
    std::vector<Role> role;
    std::vector<std::uint32_t> m11, m21, m0;
};

// Disjoint support sets drawn uniformly without replacement.
Supports draw_supports(std::size_t q, const SupportSizes& sizes,
                       SplitRng& rng) {
    Supports s;
    s.role.assign(q, Role::none);
    std::vector<std::uint32_t> idx(q);
    std::iota(idx.begin(), idx.end(), 0);
    const std::size_t total = sizes.total();
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(uniform_below(
                    rng, static_cast<std::uint64_t>(q - i)));
        std::swap(idx[i], idx[j]);
    }
    auto take = [&](std::size_t from, std::size_t count, Role role,
                    std::vector<std::uint32_t>& out) {
        out.assign(idx.begin() + static_cast<long>(from),
                   idx.begin() + static_cast<long>(from + count));
        std::sort(out.begin(), out.end());
        for (std::uint32_t k : out) s.role[k] = role;
    };
    take(0, sizes.m11, Role::m11, s.m11);
    take(sizes.m11, sizes.m21, Role::m21, s.m21);
    take(sizes.m11 + sizes.m21, sizes.m0, Role::m0, s.m0);
    return s;
}

std::vector<double> mirror_links_to_matrix(std::span<const double> links,
                                           const LinkIndexMap& map) {
    const auto p = static_cast<std::size_t>(map.p());
    std::vector<double> m(p * p, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j, ++k) {
            m[i * p + j] = links[k];
            m[j * p + i] = links[k];
        }
    }
    return m;
}

void finish_truth(ScenarioData& data, const Supports& sup,
                  std::span<const double> mean1_links,
                  std::span<const double> mean2_links,
                  const LinkIndexMap& map) {
    data.truth.m11 = sup.m11;
    data.truth.m21 = sup.m21;
    data.truth.m0 = sup.m0;
    data.truth.s1 = mirror_links_to_matrix(mean1_links, map);
    data.truth.s2 = mirror_links_to_matrix(mean2_links, map);
    for (std::size_t k = 0; k < data.q; ++k) {
        if (mean1_links[k] != mean2_links[k]) {
            data.truth.h1.push_back(static_cast<std::uint32_t>(k));
        }
    }
}

// ---- per-family mean construction and sampling ----

void build_bernoulli(const ScenarioSpec& spec, const Supports& sup,
                     std::size_t q, SplitRng& rng, std::vector<double>& s1,
                     std::vector<double>& s2) {
    const double base = spec.param("null_mean");
    const double lo = spec.param("signal_low");
    const double hi = spec.param("signal_high");
    const double lo_prob = spec.param("signal_low_prob");
    // Group 1 signal means favor the high value; group 2 mirrors with the
    // low value favored.
    auto draw_r1 = [&] { return rng.bernoulli(lo_prob) ? lo : hi; };
    auto draw_r2 = [&] { return rng.bernoulli(lo_prob) ? hi : lo; };
    for (std::size_t k = 0; k < q; ++k) {
        switch (sup.role[k]) {
            case Role::none:
                s1[k] = base;
                s2[k] = base;
                break;
            case Role::m11:
                s1[k] = draw_r1();
                s2[k] = base;
                break;
            case Role::m21:
                s1[k] = base;
                s2[k] = draw_r2();
                break;
            case Role::m0:
                s1[k] = draw_r1();
                s2[k] = draw_r2();
                break;
        }
    }
}

void build_mixture(const ScenarioSpec& spec, const Supports& sup,
                   std::size_t q, SplitRng& rng, std::vector<double>& s1,
                   std::vector<double>& s2) {
    const double base = spec.param("null_mean");
    const double lo = spec.param("signal_low");
    const double hi = spec.param("signal_high");
    const double lo_prob = spec.param("signal_low_prob");
    const double shift = spec.param("mixture_shift");
    auto mix = [&](double pi, double r_first) {
        return pi * r_first + (1.0 - pi) * (r_first + shift);
    };
    for (std::size_t k = 0; k < q; ++k) {
        if (sup.role[k] == Role::none) {
            s1[k] = base;
            s2[k] = base;
            continue;
        }
        // One mixing proportion per link, shared by both groups, so the
        // pair's means are well defined and equal exactly when the component
        // means coincide.
        const double pi = rng.uniform01();
        const bool in1 = sup.role[k] != Role::m21;
        const bool in2 = sup.role[k] != Role::m11;
        s1[k] = in1 ? mix(pi, rng.bernoulli(lo_prob) ? lo : hi) : base;
        s2[k] = in2 ? mix(pi, rng.bernoulli(lo_prob) ? hi : lo) : base;
    }
}

void build_poisson(const ScenarioSpec& spec, const Supports& sup,
                   std::size_t q, SplitRng& rng, std::vector<double>& s1,
                   std::vector<double>& s2) {
    const double base = spec.param("null_mean");
    const double lo = spec.param("shift_low");
    const double hi = spec.param("shift_high");
    for (std::size_t k = 0; k < q; ++k) {
        const bool in1 = sup.role[k] == Role::m11 || sup.role[k] == Role::m0;
        const bool in2 = sup.role[k] == Role::m21 || sup.role[k] == Role::m0;
        s1[k] = in1 ? base + rng.uniform(lo, hi) : base;
        s2[k] = in2 ? base + rng.uniform(lo, hi) : base;
    }
}

void build_log_normal(const ScenarioSpec& spec, const Supports& sup,
                      std::size_t q, std::vector<double>& s1,
                      std::vector<double>& s2) {
    const double mu0 = spec.param("mu0");
    const double delta = spec.param("delta");
    for (std::size_t k = 0; k < q; ++k) {
        s1[k] = sup.role[k] == Role::m11 ? mu0 + delta : mu0;
        s2[k] = mu0;
    }
}

void sample_iid_links(const ScenarioSpec& spec,
                      std::span<const double> means, int n, std::size_t q,
                      SplitRng& rng, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(n) * q);
    switch (spec.family) {
        case Family::bernoulli:
        case Family::bernoulli_mixture:
            for (int l = 0; l < n; ++l) {
                double* row = out.data() + static_cast<std::size_t>(l) * q;
                for (std::size_t k = 0; k < q; ++k) {
                    row[k] = rng.bernoulli(means[k]) ? 1.0 : 0.0;
                }
            }
            break;
        case Family::poisson:
            for (int l = 0; l < n; ++l) {
                double* row = out.data() + static_cast<std::size_t>(l) * q;
                for (std::size_t k = 0; k < q; ++k) {
                    row[k] = static_cast<double>(rng.poisson(means[k]));
                }
            }
            break;
        case Family::log_normal: {
            const double sigma = spec.param("sigma");
            for (int l = 0; l < n; ++l) {
                double* row = out.data() + static_cast<std::size_t>(l) * q;
                for (std::size_t k = 0; k < q; ++k) {
                    row[k] = means[k] + sigma * rng.normal();
                }
            }
            break;
        }
        default:
            throw InvariantError("sample_iid_links called for matrix family");
    }
}

// Symmetric support matrix with independent Uniform(lo,hi) entries on the
// given links, then a diagonal shift of |lambda_min| + shift to make it
// positive definite.
Eigen::MatrixXd build_shifted_support_matrix(const Supports& sup, bool group1,
                                             const LinkIndexMap& map,
                                             double lo, double hi,
                                             double shift, SplitRng& rng) {
    const int p = map.p();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (std::size_t k = 0; k < map.q(); ++k) {
        const bool in_support =
            group1 ? (sup.role[k] == Role::m11 || sup.role[k] == Role::m0)
                   : (sup.role[k] == Role::m21 || sup.role[k] == Role::m0);
        if (!in_support) continue;
        const auto [i, j] = map.unflatten(k);
        const double v = rng.uniform(lo, hi);
        m(i, j) = v;
        m(j, i) = v;
    }
    const double lambda_min =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
            m, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    m.diagonal().array() += std::fabs(lambda_min) + shift;
    return m;
}

// Lower-triangular Bartlett factor: chi-distributed diagonal, standard
// normal below. Draw order is column-major.
Eigen::MatrixXd bartlett_factor(int p, int dof, SplitRng& rng) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
    for (int j = 0; j < p; ++j) {
        a(j, j) = std::sqrt(rng.chi_squared(static_cast<double>(dof - j)));
        for (int i = j + 1; i < p; ++i) a(i, j) = rng.normal();
    }
    return a;
}

std::vector<double> wishart_draw(const Eigen::MatrixXd& chol_lower, int dof,
                                 SplitRng& rng) {
    const int p = static_cast<int>(chol_lower.rows());
    const Eigen::MatrixXd b = chol_lower *
                              bartlett_factor(p, dof, rng);
    std::vector<double> s(static_cast<std::size_t>(p) * p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            const double v = b.row(i).head(j + 1).dot(b.row(j).head(j + 1));
            s[static_cast<std::size_t>(i) * p + j] = v;
            s[static_cast<std::size_t>(j) * p + i] = v;
        }
    }
    return s;
}

// log(offset + round(exp(x))), the count-valued transform. With offset 0,
// zero counts clamp to one (log of a zero count is undefined); offset 1 is
// the log1p convention. Above `cap` the rounding granularity exceeds 0.5
// and the transform is the identity.
double count_log_transform(double x, double cap, double offset) {
    if (x > cap) return x;
    double r = std::nearbyint(std::exp(x)) + offset;
    if (r < 1.0) r = 1.0;
    return std::log(r);
}

void generate_wishart(const ScenarioSpec& spec, const Supports& sup,
                      const LinkIndexMap& map, SplitRng& rng,
                      ScenarioData& data) {
    const double lo = spec.param("scale_low");
    const double hi = spec.param("scale_high");
    const double shift = spec.param("diag_shift");
    const double cap = spec.param("transform_cap");
    const double offset = spec.param("count_offset");
    const int dof = static_cast<int>(spec.param("dof"));
    const int p = spec.p;
    const Eigen::MatrixXd sigma1 =
        build_shifted_support_matrix(sup, true, map, lo, hi, shift, rng);
    const Eigen::MatrixXd sigma2 =
        build_shifted_support_matrix(sup, false, map, lo, hi, shift, rng);

    auto generate_group = [&](const Eigen::MatrixXd& sigma, int n,
                              std::vector<double>& out) {
        Eigen::LLT<Eigen::MatrixXd> llt(sigma / static_cast<double>(dof));
        affirm(llt.info() == Eigen::Success,
               "shifted scale matrix is not positive definite");
        const Eigen::MatrixXd chol = llt.matrixL();
        out.resize(static_cast<std::size_t>(n) * map.q());
        for (int l = 0; l < n; ++l) {
            auto s = wishart_draw(chol, dof, rng);
            double* row = out.data() + static_cast<std::size_t>(l) * map.q();
            std::size_t k = 0;
            for (int i = 0; i < p; ++i) {
                for (int j = i + 1; j < p; ++j, ++k) {
                    row[k] = count_log_transform(
                        s[static_cast<std::size_t>(i) * p + j], cap, offset);
                }
            }
        }
    };
    generate_group(sigma1, spec.n1, data.links1);
    generate_group(sigma2, spec.n2, data.links2);

    std::vector<double> mean1(map.q()), mean2(map.q());
    for (std::size_t k = 0; k < map.q(); ++k) {
        const auto [i, j] = map.unflatten(k);
        mean1[k] = sigma1(i, j);
        mean2[k] = sigma2(i, j);
    }
    finish_truth(data, sup, mean1, mean2, map);
}

void generate_correlation(const ScenarioSpec& spec, const Supports& sup,
                          const LinkIndexMap& map, SplitRng& rng,
                          ScenarioData& data) {
    const double lo = spec.param("corr_low");
    const double hi = spec.param("corr_high");
    const double shift = spec.param("diag_shift");
    const int t_obs = static_cast<int>(spec.param("t_obs"));
    const int p = spec.p;
    const Eigen::MatrixXd sigma1 =
        build_shifted_support_matrix(sup, true, map, lo, hi, shift, rng);
    const Eigen::MatrixXd sigma2 =
        build_shifted_support_matrix(sup, false, map, lo, hi, shift, rng);

    auto generate_group = [&](const Eigen::MatrixXd& sigma, int n,
                              std::vector<double>& out) {
        Eigen::LLT<Eigen::MatrixXd> llt(sigma);
        affirm(llt.info() == Eigen::Success,
               "shifted covariance matrix is not positive definite");
        const Eigen::MatrixXd chol = llt.matrixL();
        out.resize(static_cast<std::size_t>(n) * map.q());
        Eigen::MatrixXd z(p, t_obs);
        for (int l = 0; l < n; ++l) {
            for (int c = 0; c < t_obs; ++c) {
                for (int i = 0; i < p; ++i) z(i, c) = rng.normal();
            }
            const Eigen::MatrixXd x = chol * z;
            std::vector<double> xs(static_cast<std::size_t>(p) * t_obs);
            for (int i = 0; i < p; ++i) {
                for (int c = 0; c < t_obs; ++c) {
                    xs[static_cast<std::size_t>(i) * t_obs + c] = x(i, c);
                }
            }
            const auto s = sample_correlation_network(xs, p, t_obs);
            double* row = out.data() + static_cast<std::size_t>(l) * map.q();
            std::size_t k = 0;
            for (int i = 0; i < p; ++i) {
                for (int j = i + 1; j < p; ++j, ++k) {
                    row[k] = s[static_cast<std::size_t>(i) * p + j];
                }
            }
        }
    };
    generate_group(sigma1, spec.n1, data.links1);
    generate_group(sigma2, spec.n2, data.links2);

    // Sample covariance with divisor t has mean (1 - 1/t) Sigma.
    const double f1 = 1.0 - 1.0 / static_cast<double>(t_obs);
    std::vector<double> mean1(map.q()), mean2(map.q());
    for (std::size_t k = 0; k < map.q(); ++k) {
        const auto [i, j] = map.unflatten(k);
        mean1[k] = f1 * sigma1(i, j);
        mean2[k] = f1 * sigma2(i, j);
    }
    finish_truth(data, sup, mean1, mean2, map);
}

} // namespace

double ScenarioSpec::param(const std::string& name) const {
    if (auto it = params.find(name); it != params.end()) return it->second;
    const auto& defaults = family_defaults(family);
    if (auto it = defaults.find(name); it != defaults.end()) return it->second;
    throw ValidationError("unknown parameter '" + name + "' for family " +
                          family_name(family));
}

void ScenarioSpec::validate() const {
    require(p >= 2, "node count p must be at least 2");
    require(n1 >= 2 && n2 >= 2, "group sizes must be at least 2");
    const auto q = static_cast<std::size_t>(p) *
                   (static_cast<std::size_t>(p) - 1) / 2;
    require(k_q >= 0 && static_cast<std::size_t>(k_q) <= q,
            "k_q must lie in [0, q]");
    ScenarioSpec probe = *this;
    require(support_sizes(probe).total() <= q,
            "k_q too large: support sets exceed the number of links");
    const auto& defaults = family_defaults(family);
    for (const auto& [key, value] : params) {
        require(defaults.count(key) != 0, "unknown parameter '" + key +
                                              "' for family " +
                                              family_name(family));
        require(std::isfinite(value), "parameter '" + key + "' must be finite");
    }
    switch (family) {
        case Family::bernoulli:
        case Family::bernoulli_mixture: {
            const double base = param("null_mean");
            const double lo = param("signal_low");
            const double hi = param("signal_high");
            require(base > 0.0 && base < 1.0, "null_mean must lie in (0,1)");
            require(lo > 0.0 && hi < 1.0 && lo <= hi,
                    "signal means must lie in (0,1) with signal_low <= "
                    "signal_high");
            const double lp = param("signal_low_prob");
            require(lp >= 0.0 && lp <= 1.0,
                    "signal_low_prob must lie in [0,1]");
            if (family == Family::bernoulli_mixture) {
                require(hi + param("mixture_shift") < 1.0,
                        "mixture component means must stay below 1");
            }
            break;
        }
        case Family::poisson:
            require(param("null_mean") > 0.0, "Poisson mean must be positive");
            require(param("shift_low") >= 0.0 &&
                        param("shift_low") <= param("shift_high"),
                    "Poisson shifts must satisfy 0 <= shift_low <= shift_high");
            break;
        case Family::log_normal:
            require(param("sigma") > 0.0, "sigma must be positive");
            break;
        case Family::transformed_wishart:
            require(static_cast<int>(param("dof")) >= p,
                    "Wishart degrees of freedom must be at least p");
            require(param("scale_low") > 0.0 &&
                        param("scale_low") <= param("scale_high"),
                    "scale bounds must satisfy 0 < scale_low <= scale_high");
            require(param("diag_shift") > 0.0, "diag_shift must be positive");
            break;
        case Family::correlation_network:
            require(static_cast<int>(param("t_obs")) >= 2,
                    "t_obs must be at least 2");
            require(param("diag_shift") > 0.0, "diag_shift must be positive");
            break;
    }
}

std::string ScenarioSpec::to_kv_text() const {
    std::ostringstream os;
    os << "family = " << family_name(family) << "\n";
    os << "p = " << p << "\n";
    os << "n1 = " << n1 << "\n";
    os << "n2 = " << n2 << "\n";
    os << "k_q = " << k_q << "\n";
    os << "seed = " << seed << "\n";
    char buf[40];
    for (const auto& [key, value] : params) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        os << "param." << key << " = " << buf << "\n";
    }
    return os.str();
}

ScenarioSpec ScenarioSpec::from_kv_text(const std::string& text) {
    ScenarioSpec spec;
    spec.params.clear();
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string()
                                          : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        try {
            if (key == "family") {
                spec.family = family_from_name(value);
            } else if (key == "p") {
                spec.p = std::stoi(value);
            } else if (key == "n1") {
                spec.n1 = std::stoi(value);
            } else if (key == "n2") {
                spec.n2 = std::stoi(value);
            } else if (key == "k_q") {
                spec.k_q = std::stol(value);
            } else if (key == "seed") {
                spec.seed = std::stoull(value);
            } else if (key.rfind("param.", 0) == 0) {
                spec.params[key.substr(6)] = std::stod(value);
            } else {
                throw ValidationError("unknown scenario key: " + key);
            }
        } catch (const std::invalid_argument&) {
            throw ValidationError("malformed value for scenario key " + key);
        } catch (const std::out_of_range&) {
            throw ValidationError("out-of-range value for scenario key " + key);
        }
    }
    return spec;
}

NetworkSampleStack ScenarioData::stack(int group) const {
    require(group == 1 || group == 2, "group must be 1 or 2");
    const auto& links = group == 1 ? links1 : links2;
    const int n = group == 1 ? n1 : n2;
    return NetworkSampleStack::from_links(group, p, links,
                                          static_cast<std::size_t>(n));
}

ScenarioData generate_scenario(const ScenarioSpec& spec,
                               std::uint64_t replication) {
    spec.validate();
    const LinkIndexMap map(spec.p);
    const std::size_t q = map.q();
    SplitRng rng = SplitRng::for_replication(spec.seed, replication);

    ScenarioData data;
    data.p = spec.p;
    data.n1 = spec.n1;
    data.n2 = spec.n2;
    data.q = q;

    const Supports sup = draw_supports(q, support_sizes(spec), rng);

    switch (spec.family) {
        case Family::transformed_wishart:
            generate_wishart(spec, sup, map, rng, data);
            return data;
        case Family::correlation_network:
            generate_correlation(spec, sup, map, rng, data);
            return data;
        default:
            break;
    }

    std::vector<double> mean1(q), mean2(q);
    switch (spec.family) {
        case Family::bernoulli:
            build_bernoulli(spec, sup, q, rng, mean1, mean2);
            break;
        case Family::bernoulli_mixture:
            build_mixture(spec, sup, q, rng, mean1, mean2);
            break;
        case Family::poisson:
            build_poisson(spec, sup, q, rng, mean1, mean2);
            break;
        case Family::log_normal:
            build_log_normal(spec, sup, q, mean1, mean2);
            break;
        default:
            throw InvariantError("unhandled family");
    }
    sample_iid_links(spec, mean1, spec.n1, q, rng, data.links1);
    sample_iid_links(spec, mean2, spec.n2, q, rng, data.links2);
    finish_truth(data, sup, mean1, mean2, map);
    return data;
}

std::vector<double> wishart_sample(std::span<const double> scale, int p,
                                   int dof, SplitRng& rng) {
    require(p >= 1, "dimension must be positive");
    require(scale.size() == static_cast<std::size_t>(p) * p,
            "scale matrix size does not match dimension");
    require(dof >= p, "Wishart degrees of freedom must be at least p");
    Eigen::MatrixXd s(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            s(i, j) = scale[static_cast<std::size_t>(i) * p + j];
        }
    }
    require(s.isApprox(s.transpose()), "scale matrix must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    require(llt.info() == Eigen::Success,
            "scale matrix must be positive definite");
    const Eigen::MatrixXd chol = llt.matrixL();
    return wishart_draw(chol, dof, rng);
}

std::vector<double> sample_correlation_network(std::span<const double> x,
                                               int p, int t) {
    require(t >= 2, "at least 2 observations are required");
    require(p >= 1, "dimension must be positive");
    require(x.size() == static_cast<std::size_t>(p) * t,
            "observation matrix size does not match dimensions");
    std::vector<double> mean(static_cast<std::size_t>(p), 0.0);
    for (int i = 0; i < p; ++i) {
        const double* row = x.data() + static_cast<std::size_t>(i) * t;
        double acc = 0.0;
        for (int c = 0; c < t; ++c) acc += row[c];
        mean[static_cast<std::size_t>(i)] = acc / static_cast<double>(t);
    }
    std::vector<double> s(static_cast<std::size_t>(p) * p);
    for (int i = 0; i < p; ++i) {
        const double* ri = x.data() + static_cast<std::size_t>(i) * t;
        for (int j = i; j < p; ++j) {
            const double* rj = x.data() + static_cast<std::size_t>(j) * t;
            double acc = 0.0;
            for (int c = 0; c < t; ++c) {
                acc += (ri[c] - mean[static_cast<std::size_t>(i)]) *
                       (rj[c] - mean[static_cast<std::size_t>(j)]);
            }
            const double v = acc / static_cast<double>(t);
            s[static_cast<std::size_t>(i) * p + j] = v;
            s[static_cast<std::size_t>(j) * p + i] = v;
        }
    }
    return s;
}

} // namespace nettest
