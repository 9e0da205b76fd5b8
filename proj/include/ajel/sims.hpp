#pragma once

#include "ajel/inference.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace ajel::sims {

/// Per-replicate generator. Seeded from substream_seed(master, replicate).
using Rng = std::mt19937_64;
inline constexpr std::string_view rng_name = "mt19937_64 seeded by splitmix64(master, replicate)";

/// SplitMix64 finalizer applied to the master seed and replicate index.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept;

double sample_chi2_1(Rng& rng);
double sample_exponential(double rate, Rng& rng);
double sample_normal(double mu, double sigma, Rng& rng);

struct Distribution {
    enum class Kind { chi_square_1, exponential, normal };

    Kind kind = Kind::normal;
    double a = 0.0;  // exponential: rate; normal: mean
    double b = 1.0;  // normal: sd

    static Distribution chi_square_1() { return {Kind::chi_square_1, 0.0, 0.0}; }
    static Distribution exponential(double rate);
    static Distribution normal(double mu, double sigma);

    double draw(Rng& rng) const;
    std::string describe() const;
};

struct ExperimentSpec {
    std::string label;       // e.g. "n=20" or "(10,10)"
    std::size_t n1 = 0;
    std::size_t n2 = 0;      // 0 for one-sample designs
    Distribution gen_x = Distribution::normal(0.0, 1.0);
    Distribution gen_y = Distribution::normal(0.0, 1.0);
    std::string kernel = "mean";
    double theta_true = 0.0;
    std::vector<double> levels{0.90, 0.95};
    std::size_t replications = 1000;
    std::vector<Method> methods{Method::jel, Method::ajel};
    std::optional<double> a_n;  // default_a_n(n1 + n2) when absent
    std::uint64_t seed = 0;
    unsigned threads = 0;       // 0: hardware concurrency; never affects results

    bool two_sample() const noexcept { return n2 > 0; }
    void validate() const;
};

struct CellResult {
    Method method = Method::ajel;
    double level = 0.0;
    std::size_t covered = 0;
    std::size_t used = 0;        // replications - failed
    std::size_t failed = 0;
    std::size_t degenerate = 0;  // zero-spread pseudo-values, interval [U_n, U_n]
    double coverage_pct = 0.0;
    double coverage_se_pct = 0.0;  // 100 sqrt(p (1 - p) / used)
    double mean_length = 0.0;
};

/// Pairwise JEL/AJEL checks made on every replicate when both methods run.
struct OrderingChecks {
    std::size_t replicates_checked = 0;
    std::size_t statistic_violations = 0;    // W_AJEL(theta_true) > W_JEL(theta_true)
    std::size_t containment_violations = 0;  // AJEL interval fails to contain the JEL one
};

struct SimResult {
    ExperimentSpec spec;
    std::vector<CellResult> cells;  // methods x levels, in spec order
    OrderingChecks ordering;
    std::string rng = std::string(rng_name);
    std::string simd_backend;
    double elapsed_seconds = 0.0;

    const CellResult& cell(Method m, double level) const;
};

SimResult run_experiment(const ExperimentSpec& spec);

struct WilksResult {
    Method method = Method::ajel;
    double ks_distance = 0.0;
    std::vector<double> statistics;  // one per replicate, at theta_true
    bool degenerate = false;         // every statistic is 0
};

/// Statistics at theta_true for each requested method and their
/// Kolmogorov-Smirnov distance to the chi-square(1) law.
std::vector<WilksResult> wilks_diagnostic(const ExperimentSpec& spec);

double ks_distance_chi2_1(std::vector<double> samples);

/// `table1`: PWM of chi2_1, n = 20, 30, 50. `table2`: AUC of Exp(1) vs
/// Exp(1/9), (n1, n2) = (10,10), (15,15), (35,30). Throws usage error otherwise.
std::vector<ExperimentSpec> preset(std::string_view name, std::uint64_t seed, std::size_t replications = 1000);

/// Parses a JSON spec document: either one experiment object or
/// {"experiments": [...]}.
std::vector<ExperimentSpec> specs_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const ExperimentSpec& spec);
nlohmann::json to_json(const SimResult& r);

/// Header row plus one row per (experiment, method, level):
/// design,method,level,coverage_pct,coverage_se_pct,mean_length,failed,replications,seed
std::string to_csv(const std::vector<SimResult>& results);

/// Human-readable layout: coverage % (SE) and length in units of 1e-2.
std::string to_text(const std::vector<SimResult>& results);

}  // namespace ajel::sims
