#include "ajel/sims.hpp"

#include "ajel/distributions.hpp"
#include "ajel/error.hpp"
#include "ajel/kernel.hpp"
#include "ajel/simd/kernels.hpp"
#include "ajel/summation.hpp"
#include "ajel/ustat.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <thread>

namespace ajel::sims {
namespace {

struct Replicate {
    std::vector<double> lower;  // per cell (method-major, then level)
    std::vector<double> upper;
    std::vector<char> failed;
    std::vector<char> degenerate;
    double w_jel = 0.0;
    double w_ajel = 0.0;
    bool ordering_ok_stat = true;
    bool ordering_ok_ci = true;
};

std::vector<double> draw_sample(const Distribution& d, std::size_t n, Rng& rng) {
    std::vector<double> xs(n);
    for (double& x : xs) x = d.draw(rng);
    return xs;
}

PseudoValueSet replicate_pseudo_values(const ExperimentSpec& spec, const Kernel& kernel, Rng& rng) {
    Sample x = Sample::from_scalars(draw_sample(spec.gen_x, spec.n1, rng), "x");
    if (!spec.two_sample()) return jackknife_pseudo_values(x, kernel);
    Sample y = Sample::from_scalars(draw_sample(spec.gen_y, spec.n2, rng), "y");
    return jackknife_pseudo_values(x, y, kernel);
}

// Runs body(r) for r in [0, count) on `threads` workers. Each r writes only
// its own slot, so results do not depend on the schedule.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> has_error{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= count || has_error.load()) return;
            try {
                body(r);
            } catch (...) {
                if (!has_error.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

double slack(double a, double b) { return 1e-8 * (1.0 + std::fabs(a) + std::fabs(b)); }

std::string method_key(Method m) { return m == Method::jel ? "jel" : "ajel"; }

Method parse_method(const std::string& s) {
    if (s == "jel" || s == "JEL") return Method::jel;
    if (s == "ajel" || s == "AJEL") return Method::ajel;
    fail(ErrorKind::usage, "unknown method '" + s + "'");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept {
    // Two rounds of the SplitMix64 output function over the combined words.
    auto mix = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(master + 0x9e3779b97f4a7c15ULL) + index * 0x9e3779b97f4a7c15ULL);
}

double sample_normal(double mu, double sigma, Rng& rng) {
    std::normal_distribution<double> nd(mu, sigma);
    return nd(rng);
}

double sample_chi2_1(Rng& rng) {
    const double z = sample_normal(0.0, 1.0, rng);
    return z * z;
}

double sample_exponential(double rate, Rng& rng) {
    if (!(rate > 0.0) || !std::isfinite(rate)) fail(ErrorKind::parameter, "exponential rate must be positive");
    double u = 0.0;
    while (u <= 0.0) u = 1.0 - std::generate_canonical<double, 53>(rng);  // (0, 1]
    return -std::log(u) / rate;
}

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) fail(ErrorKind::parameter, "exponential rate must be positive");
    return {Kind::exponential, rate, 0.0};
}

Distribution Distribution::normal(double mu, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) {
        fail(ErrorKind::parameter, "normal distribution needs finite mean and positive sd");
    }
    return {Kind::normal, mu, sigma};
}

double Distribution::draw(Rng& rng) const {
    switch (kind) {
        case Kind::chi_square_1: return sample_chi2_1(rng);
        case Kind::exponential: return sample_exponential(a, rng);
        case Kind::normal: return sample_normal(a, b, rng);
    }
    return 0.0;
}

std::string Distribution::describe() const {
    switch (kind) {
        case Kind::chi_square_1: return "chisq(1)";
        case Kind::exponential: return "exp(rate=" + fmt(a) + ")";
        case Kind::normal: return "normal(" + fmt(a) + "," + fmt(b) + ")";
    }
    return "?";
}

void ExperimentSpec::validate() const {
    if (replications < 1) fail(ErrorKind::parameter, "experiment: replications must be >= 1");
    if (!std::isfinite(theta_true)) fail(ErrorKind::parameter, "experiment: theta_true must be finite");
    if (levels.empty()) fail(ErrorKind::parameter, "experiment: no confidence levels");
    for (double l : levels) {
        if (!(l > 0.0 && l < 1.0)) fail(ErrorKind::parameter, "experiment: levels must lie in (0, 1)");
    }
    if (methods.empty()) fail(ErrorKind::parameter, "experiment: no methods");
    if (a_n && !(*a_n > 0.0)) fail(ErrorKind::parameter, "experiment: a_n must be positive");
    const Kernel& k = kernels::by_name(kernel);
    if (k.is_two_sample() != two_sample()) {
        fail(ErrorKind::usage, "experiment: kernel '" + kernel + "' does not match the design");
    }
    if (k.dim() > 1) fail(ErrorKind::usage, "experiment: generators are univariate, kernel '" + kernel + "' is not");
}

const CellResult& SimResult::cell(Method m, double level) const {
    for (const CellResult& c : cells) {
        if (c.method == m && c.level == level) return c;
    }
    fail(ErrorKind::usage, "no result cell for the requested method and level");
}

SimResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto start = std::chrono::steady_clock::now();
    const Kernel& kernel = kernels::by_name(spec.kernel);
    const std::size_t n_cells = spec.methods.size() * spec.levels.size();
    const auto jel_pos = std::find(spec.methods.begin(), spec.methods.end(), Method::jel);
    const auto ajel_pos = std::find(spec.methods.begin(), spec.methods.end(), Method::ajel);
    const bool both = jel_pos != spec.methods.end() && ajel_pos != spec.methods.end();

    std::vector<Replicate> reps(spec.replications);
    parallel_for(spec.replications, spec.threads, [&](std::size_t r) {
        Rng rng(substream_seed(spec.seed, r));
        const PseudoValueSet pv = replicate_pseudo_values(spec, kernel, rng);
        const double an = spec.a_n.value_or(default_a_n(pv.size()));
        Replicate& out = reps[r];
        out.lower.assign(n_cells, 0.0);
        out.upper.assign(n_cells, 0.0);
        out.failed.assign(n_cells, 0);
        out.degenerate.assign(n_cells, 0);
        std::size_t c = 0;
        for (Method m : spec.methods) {
            for (double level : spec.levels) {
                try {
                    const ConfidenceInterval ci = confidence_interval(pv, level, m, an);
                    out.lower[c] = ci.lower;
                    out.upper[c] = ci.upper;
                    out.degenerate[c] = ci.degenerate;
                } catch (const Error&) {
                    out.failed[c] = 1;
                }
                ++c;
            }
        }
        if (both) {
            out.w_jel = jel_statistic(pv, spec.theta_true).statistic;
            out.w_ajel = ajel_statistic(pv, spec.theta_true, an).statistic;
            out.ordering_ok_stat = !(out.w_ajel > out.w_jel + 1e-9 * (1.0 + out.w_jel));
            const std::size_t jb = static_cast<std::size_t>(jel_pos - spec.methods.begin()) * spec.levels.size();
            const std::size_t ab = static_cast<std::size_t>(ajel_pos - spec.methods.begin()) * spec.levels.size();
            for (std::size_t l = 0; l < spec.levels.size(); ++l) {
                if (out.failed[jb + l] || out.failed[ab + l]) continue;
                const double jl = out.lower[jb + l], ju = out.upper[jb + l];
                const double al = out.lower[ab + l], au = out.upper[ab + l];
                if (al > jl + slack(al, jl) || au < ju - slack(au, ju)) out.ordering_ok_ci = false;
            }
        }
    });

    SimResult result;
    result.spec = spec;
    result.simd_backend = std::string(simd::backend_name(simd::active_backend()));
    std::size_t c = 0;
    for (Method m : spec.methods) {
        for (double level : spec.levels) {
            CellResult cell;
            cell.method = m;
            cell.level = level;
            CompensatedSum length;
            for (const Replicate& rep : reps) {
                if (rep.failed[c]) {
                    ++cell.failed;
                    continue;
                }
                ++cell.used;
                cell.degenerate += rep.degenerate[c];
                cell.covered += rep.lower[c] <= spec.theta_true && spec.theta_true <= rep.upper[c];
                length.add(rep.upper[c] - rep.lower[c]);
            }
            if (cell.used > 0) {
                const double used = static_cast<double>(cell.used);
                const double p = static_cast<double>(cell.covered) / used;
                cell.coverage_pct = 100.0 * p;
                cell.coverage_se_pct = 100.0 * std::sqrt(p * (1.0 - p) / used);
                cell.mean_length = length.value() / used;
            }
            result.cells.push_back(cell);
            ++c;
        }
    }
    if (both) {
        for (const Replicate& rep : reps) {
            ++result.ordering.replicates_checked;
            result.ordering.statistic_violations += !rep.ordering_ok_stat;
            result.ordering.containment_violations += !rep.ordering_ok_ci;
        }
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

double ks_distance_chi2_1(std::vector<double> samples) {
    if (samples.empty()) fail(ErrorKind::size, "KS distance: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = chi2_df1_cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

std::vector<WilksResult> wilks_diagnostic(const ExperimentSpec& spec) {
    spec.validate();
    const Kernel& kernel = kernels::by_name(spec.kernel);
    const std::size_t nm = spec.methods.size();
    std::vector<double> stats(spec.replications * nm);
    parallel_for(spec.replications, spec.threads, [&](std::size_t r) {
        Rng rng(substream_seed(spec.seed, r));
        const PseudoValueSet pv = replicate_pseudo_values(spec, kernel, rng);
        for (std::size_t k = 0; k < nm; ++k) {
            stats[r * nm + k] = el_statistic(pv, spec.theta_true, spec.methods[k], spec.a_n).statistic;
        }
    });
    std::vector<WilksResult> out;
    for (std::size_t k = 0; k < nm; ++k) {
        WilksResult w;
        w.method = spec.methods[k];
        w.statistics.resize(spec.replications);
        for (std::size_t r = 0; r < spec.replications; ++r) w.statistics[r] = stats[r * nm + k];
        w.degenerate = std::all_of(w.statistics.begin(), w.statistics.end(), [](double s) { return s == 0.0; });
        w.ks_distance = ks_distance_chi2_1(w.statistics);
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<ExperimentSpec> preset(std::string_view name, std::uint64_t seed, std::size_t replications) {
    std::vector<ExperimentSpec> out;
    std::uint64_t cell = 0;
    if (name == "table1") {
        for (std::size_t n : {20u, 30u, 50u}) {
            ExperimentSpec s;
            s.label = "n=" + std::to_string(n);
            s.n1 = n;
            s.gen_x = Distribution::chi_square_1();
            s.kernel = "pwm";
            s.theta_true = 0.5 + std::numbers::inv_pi;  // E[X F(X)] for chi2_1
            s.replications = replications;
            s.seed = seed + cell++;
            out.push_back(s);
        }
    } else if (name == "table2") {
        for (auto [n1, n2] : {std::pair<std::size_t, std::size_t>{10, 10}, {15, 15}, {35, 30}}) {
            ExperimentSpec s;
            s.label = "(" + std::to_string(n1) + "," + std::to_string(n2) + ")";
            s.n1 = n1;
            s.n2 = n2;
            s.gen_x = Distribution::exponential(1.0);
            s.gen_y = Distribution::exponential(1.0 / 9.0);
            s.kernel = "auc";
            s.theta_true = 0.9;  // P(Y > X) = 1 / (1 + 1/9)
            s.replications = replications;
            s.seed = seed + cell++;
            out.push_back(s);
        }
    } else {
        fail(ErrorKind::usage, "unknown simulation preset '" + std::string(name) + "' (expected table1 or table2)");
    }
    return out;
}

namespace {

Distribution distribution_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "chisq1") return Distribution::chi_square_1();
    if (kind == "exponential") return Distribution::exponential(j.at("rate").get<double>());
    if (kind == "normal") return Distribution::normal(j.value("mean", 0.0), j.value("sd", 1.0));
    fail(ErrorKind::parse, "unknown distribution kind '" + kind + "'");
}

nlohmann::json distribution_to_json(const Distribution& d) {
    switch (d.kind) {
        case Distribution::Kind::chi_square_1: return {{"kind", "chisq1"}};
        case Distribution::Kind::exponential: return {{"kind", "exponential"}, {"rate", d.a}};
        case Distribution::Kind::normal: return {{"kind", "normal"}, {"mean", d.a}, {"sd", d.b}};
    }
    return {};
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
    ExperimentSpec s;
    s.n1 = j.at("n1").get<std::size_t>();
    s.n2 = j.value("n2", std::size_t{0});
    s.label = j.value("label", s.two_sample() ? "(" + std::to_string(s.n1) + "," + std::to_string(s.n2) + ")"
                                              : "n=" + std::to_string(s.n1));
    s.gen_x = distribution_from_json(j.at("x"));
    if (s.two_sample()) s.gen_y = distribution_from_json(j.at("y"));
    s.kernel = j.at("kernel").get<std::string>();
    s.theta_true = j.at("theta_true").get<double>();
    if (j.contains("levels")) s.levels = j.at("levels").get<std::vector<double>>();
    s.replications = j.value("replications", std::size_t{1000});
    if (j.contains("methods")) {
        s.methods.clear();
        for (const auto& m : j.at("methods")) s.methods.push_back(parse_method(m.get<std::string>()));
    }
    if (j.contains("a_n") && !j.at("a_n").is_null()) s.a_n = j.at("a_n").get<double>();
    s.seed = j.value("seed", std::uint64_t{0});
    s.validate();
    return s;
}

}  // namespace

std::vector<ExperimentSpec> specs_from_json(const nlohmann::json& doc) {
    std::vector<ExperimentSpec> out;
    try {
        if (doc.contains("experiments")) {
            for (const auto& e : doc.at("experiments")) out.push_back(spec_from_json(e));
        } else {
            out.push_back(spec_from_json(doc));
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, std::string("experiment spec: ") + e.what());
    }
    if (out.empty()) fail(ErrorKind::parse, "experiment spec: no experiments");
    return out;
}

nlohmann::json to_json(const ExperimentSpec& s) {
    nlohmann::json j;
    j["label"] = s.label;
    j["n1"] = s.n1;
    if (s.two_sample()) j["n2"] = s.n2;
    j["x"] = distribution_to_json(s.gen_x);
    if (s.two_sample()) j["y"] = distribution_to_json(s.gen_y);
    j["kernel"] = s.kernel;
    j["theta_true"] = s.theta_true;
    j["levels"] = s.levels;
    j["replications"] = s.replications;
    j["methods"] = nlohmann::json::array();
    for (Method m : s.methods) j["methods"].push_back(method_key(m));
    j["a_n"] = s.a_n ? nlohmann::json(*s.a_n) : nlohmann::json(nullptr);
    j["seed"] = s.seed;
    return j;
}

nlohmann::json to_json(const SimResult& r) {
    nlohmann::json j;
    j["spec"] = to_json(r.spec);
    j["rng"] = r.rng;
    j["simd_backend"] = r.simd_backend;
    j["elapsed_seconds"] = r.elapsed_seconds;
    j["ordering"] = {{"replicates_checked", r.ordering.replicates_checked},
                     {"statistic_violations", r.ordering.statistic_violations},
                     {"containment_violations", r.ordering.containment_violations}};
    j["cells"] = nlohmann::json::array();
    for (const CellResult& c : r.cells) {
        j["cells"].push_back({{"method", std::string(to_string(c.method))},
                              {"level", c.level},
                              {"covered", c.covered},
                              {"used", c.used},
                              {"failed", c.failed},
                              {"degenerate", c.degenerate},
                              {"coverage_pct", c.coverage_pct},
                              {"coverage_se_pct", c.coverage_se_pct},
                              {"mean_length", c.mean_length}});
    }
    return j;
}

std::string to_csv(const std::vector<SimResult>& results) {
    std::ostringstream os;
    os << "design,method,level,coverage_pct,coverage_se_pct,mean_length,failed,replications,seed\n";
    for (const SimResult& r : results) {
        for (const CellResult& c : r.cells) {
            os << r.spec.label << ',' << to_string(c.method) << ',' << fmt(c.level) << ',' << fmt(c.coverage_pct)
               << ',' << fmt(c.coverage_se_pct) << ',' << fmt(c.mean_length) << ',' << c.failed << ','
               << r.spec.replications << ',' << r.spec.seed << '\n';
        }
    }
    return os.str();
}

std::string to_text(const std::vector<SimResult>& results) {
    std::ostringstream os;
    char line[160];
    for (const SimResult& r : results) {
        os << r.spec.label << "  kernel=" << r.spec.kernel << "  theta=" << fmt(r.spec.theta_true)
           << "  reps=" << r.spec.replications << "  seed=" << r.spec.seed << '\n';
        for (const CellResult& c : r.cells) {
            std::snprintf(line, sizeof line, "  %-4s %4.0f%%  coverage %5.1f (%4.2f)  length(1e-2) %7.2f  failed %zu\n",
                          std::string(to_string(c.method)).c_str(), 100.0 * c.level, c.coverage_pct,
                          c.coverage_se_pct, 100.0 * c.mean_length, c.failed);
            os << line;
        }
    }
    return os.str();
}

}  // namespace ajel::sims
