#pragma once

#include "ajel/error.hpp"
#include "ajel/inference.hpp"
#include "ajel/kernel.hpp"
#include "ajel/sims.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ajel::cli {

inline constexpr int schema_version = 1;

/// Process exit codes.
enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,  // anything not classified below
    exit_usage = 2,    // bad flags, unknown kernel/preset, kernel/data mismatch
    exit_parse = 3,    // unreadable or malformed data / spec file
    exit_numeric = 4,  // non-finite values, solver failure, infeasible design
};

int exit_code_for(ErrorKind kind) noexcept;

/// Grouped observations read from `group,v1[,v2,...]` CSV.
struct DataFile {
    std::vector<std::string> columns;  // value column names (header minus "group")
    std::vector<std::string> groups;   // labels in order of first appearance
    std::vector<std::vector<double>> values;  // per group, row-major

    std::size_t dim() const noexcept { return columns.size(); }
    std::size_t group_size(std::size_t g) const noexcept { return values[g].size() / dim(); }
};

DataFile parse_csv(std::istream& in, const std::string& source = "<input>");
DataFile ingest_csv(const std::string& path);

enum class MethodChoice { jel, ajel, both };
enum class Format { text, json, csv };

struct RunConfig {
    std::string kernel = "auc";
    MethodChoice method = MethodChoice::ajel;
    std::vector<double> levels;  // empty -> {0.90, 0.95}
    std::optional<double> a_n;
    std::optional<double> theta0;
    std::uint64_t seed = 42;
    std::optional<std::string> x_group;
    Format format = Format::text;
    std::optional<std::string> output;
    bool quick = false;
    unsigned threads = 0;

    std::vector<Method> methods() const;
    std::vector<double> effective_levels() const;
};

/// Samples for the configured kernel: X is the first group to appear unless
/// x_group names the other one.
struct Design {
    const Kernel* kernel = nullptr;
    std::vector<Sample> samples;  // one or two
};

Design make_design(const RunConfig& config, const DataFile& data);
PseudoValueSet design_pseudo_values(const Design& d);

struct CiReport {
    std::string kernel;
    std::vector<std::string> labels;
    std::vector<std::size_t> sizes;
    double point_estimate = 0.0;
    std::vector<ConfidenceInterval> intervals;
};

struct TestReport {
    std::string kernel;
    std::vector<std::string> labels;
    std::vector<std::size_t> sizes;
    double point_estimate = 0.0;
    std::vector<TestResult> results;
};

struct SimulateReport {
    std::string source;  // preset name or spec path
    std::vector<sims::SimResult> results;
};

CiReport cmd_ci(const RunConfig& config, const DataFile& data);
TestReport cmd_test(const RunConfig& config, const DataFile& data);

/// `source` is a preset name (table1, table2) or a path to a JSON spec file.
/// Methods, levels (when given) and a_n (when given) from the config
/// override the spec; `quick` divides replications by 10.
SimulateReport cmd_simulate(const RunConfig& config, const std::string& source);

nlohmann::json to_json(const CiReport& r);
nlohmann::json to_json(const TestReport& r);
nlohmann::json to_json(const SimulateReport& r);

std::string render(const CiReport& r, Format f);
std::string render(const TestReport& r, Format f);
std::string render(const SimulateReport& r, Format f);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ajel::cli
