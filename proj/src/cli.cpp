#include "ajel/cli.hpp"

#include "ajel/error.hpp"
#include "ajel/ustat.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ajel::cli {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

[[noreturn]] void parse_error(const std::string& source, std::size_t line, const std::string& what) {
    fail(ErrorKind::parse, source + ":" + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& field, const std::string& source, std::size_t line) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || field.empty()) {
        parse_error(source, line, "cannot parse '" + field + "' as a real number");
    }
    if (!std::isfinite(v)) parse_error(source, line, "non-finite value '" + field + "'");
    return v;
}

std::string fmt(double v, const char* spec = "%.7g") {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json design_json(const std::vector<std::string>& labels, const std::vector<std::size_t>& sizes) {
    nlohmann::json d;
    d["type"] = labels.size() == 1 ? "one-sample" : "two-sample";
    d["groups"] = nlohmann::json::array();
    for (std::size_t g = 0; g < labels.size(); ++g) d["groups"].push_back({{"label", labels[g]}, {"n", sizes[g]}});
    return d;
}

std::string design_text(const std::vector<std::string>& labels, const std::vector<std::size_t>& sizes) {
    std::string s;
    for (std::size_t g = 0; g < labels.size(); ++g) {
        s += (g ? ", " : "") + std::string(g == 0 ? "X" : "Y") + " = " + labels[g] + " (n=" +
             std::to_string(sizes[g]) + ")";
    }
    return s;
}

nlohmann::json search_json(const EndpointSearch& s) {
    return {{"expansions", s.expansions},
            {"bisections", s.bisections},
            {"at_hull_edge", s.at_hull_edge},
            {"unbounded", s.unbounded}};
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::usage: return exit_usage;
        case ErrorKind::parse: return exit_parse;
        case ErrorKind::parameter: return exit_usage;
        case ErrorKind::size:
        case ErrorKind::numeric:
        case ErrorKind::solver: return exit_numeric;
    }
    return exit_failure;
}

DataFile parse_csv(std::istream& in, const std::string& source) {
    DataFile df;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);  // UTF-8 BOM
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split(line);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "group") {
                parse_error(source, lineno, "header must be 'group,v1[,v2,...]'");
            }
            df.columns.assign(fields.begin() + 1, fields.end());
            have_header = true;
            continue;
        }
        if (fields.size() != df.columns.size() + 1) {
            parse_error(source, lineno, "expected " + std::to_string(df.columns.size() + 1) + " fields, found " +
                                            std::to_string(fields.size()));
        }
        if (fields[0].empty()) parse_error(source, lineno, "empty group label");
        std::size_t g = 0;
        while (g < df.groups.size() && df.groups[g] != fields[0]) ++g;
        if (g == df.groups.size()) {
            if (df.groups.size() == 2) {
                parse_error(source, lineno, "third group '" + fields[0] + "'; at most two groups are supported");
            }
            df.groups.push_back(fields[0]);
            df.values.emplace_back();
        }
        for (std::size_t k = 1; k < fields.size(); ++k) df.values[g].push_back(parse_real(fields[k], source, lineno));
    }
    if (!have_header) fail(ErrorKind::parse, source + ": missing header");
    if (df.groups.empty()) fail(ErrorKind::parse, source + ": no data rows");
    return df;
}

DataFile ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::parse, "cannot open '" + path + "'");
    return parse_csv(in, path);
}

std::vector<Method> RunConfig::methods() const {
    switch (method) {
        case MethodChoice::jel: return {Method::jel};
        case MethodChoice::ajel: return {Method::ajel};
        case MethodChoice::both: return {Method::jel, Method::ajel};
    }
    return {};
}

std::vector<double> RunConfig::effective_levels() const {
    return levels.empty() ? std::vector<double>{0.90, 0.95} : levels;
}

Design make_design(const RunConfig& config, const DataFile& data) {
    Design d;
    d.kernel = &kernels::by_name(config.kernel);
    std::vector<std::size_t> order(data.groups.size());
    for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
    if (config.x_group) {
        std::size_t g = 0;
        while (g < data.groups.size() && data.groups[g] != *config.x_group) ++g;
        if (g == data.groups.size()) fail(ErrorKind::usage, "--x-group '" + *config.x_group + "' not in data");
        std::swap(order[0], order[g]);
    }
    const std::size_t want = d.kernel->is_two_sample() ? 2 : 1;
    if (data.groups.size() != want) {
        fail(ErrorKind::usage, "kernel '" + config.kernel + "' needs " + std::to_string(want) +
                                   " group(s); data has " + std::to_string(data.groups.size()));
    }
    for (std::size_t g : order) d.samples.emplace_back(data.groups[g], data.dim(), data.values[g]);
    return d;
}

PseudoValueSet design_pseudo_values(const Design& d) {
    if (d.samples.size() == 1) return jackknife_pseudo_values(d.samples[0], *d.kernel);
    return jackknife_pseudo_values(d.samples[0], d.samples[1], *d.kernel);
}

CiReport cmd_ci(const RunConfig& config, const DataFile& data) {
    const Design d = make_design(config, data);
    const PseudoValueSet pv = design_pseudo_values(d);
    CiReport r;
    r.kernel = config.kernel;
    for (const Sample& s : d.samples) {
        r.labels.push_back(s.label());
        r.sizes.push_back(s.size());
    }
    r.point_estimate = pv.u_stat;
    for (Method m : config.methods()) {
        for (double level : config.effective_levels()) {
            r.intervals.push_back(confidence_interval(pv, level, m, config.a_n));
        }
    }
    return r;
}

TestReport cmd_test(const RunConfig& config, const DataFile& data) {
    if (!config.theta0) fail(ErrorKind::usage, "test: --theta0 is required");
    const Design d = make_design(config, data);
    const PseudoValueSet pv = design_pseudo_values(d);
    TestReport r;
    r.kernel = config.kernel;
    for (const Sample& s : d.samples) {
        r.labels.push_back(s.label());
        r.sizes.push_back(s.size());
    }
    r.point_estimate = pv.u_stat;
    for (Method m : config.methods()) r.results.push_back(test_theta(pv, *config.theta0, m, config.a_n));
    return r;
}

SimulateReport cmd_simulate(const RunConfig& config, const std::string& source) {
    std::vector<sims::ExperimentSpec> specs;
    if (source == "table1" || source == "table2") {
        specs = sims::preset(source, config.seed);
    } else {
        std::ifstream in(source);
        if (!in) fail(ErrorKind::usage, "unknown preset or unreadable spec file '" + source + "'");
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::parse, source + ": " + e.what());
        }
        specs = sims::specs_from_json(doc);
    }
    SimulateReport rep;
    rep.source = source;
    for (sims::ExperimentSpec& s : specs) {
        if (config.quick) s.replications = std::max<std::size_t>(1, s.replications / 10);
        if (!config.levels.empty()) s.levels = config.levels;
        if (config.a_n) s.a_n = config.a_n;
        s.methods = config.methods();
        s.threads = config.threads;
        rep.results.push_back(sims::run_experiment(s));
    }
    return rep;
}

nlohmann::json to_json(const CiReport& r) {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["command"] = "ci";
    j["kernel"] = r.kernel;
    j["design"] = design_json(r.labels, r.sizes);
    j["point_estimate"] = r.point_estimate;
    j["intervals"] = nlohmann::json::array();
    for (const ConfidenceInterval& ci : r.intervals) {
        j["intervals"].push_back({{"method", std::string(to_string(ci.method))},
                                  {"level", ci.level},
                                  {"lower", number_or_null(ci.lower)},
                                  {"upper", number_or_null(ci.upper)},
                                  {"a_n", ci.a_n ? nlohmann::json(*ci.a_n) : nlohmann::json(nullptr)},
                                  {"quantile", ci.quantile},
                                  {"degenerate", ci.degenerate},
                                  {"lower_search", search_json(ci.lower_search)},
                                  {"upper_search", search_json(ci.upper_search)}});
    }
    return j;
}

nlohmann::json to_json(const TestReport& r) {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["command"] = "test";
    j["kernel"] = r.kernel;
    j["design"] = design_json(r.labels, r.sizes);
    j["point_estimate"] = r.point_estimate;
    j["results"] = nlohmann::json::array();
    for (const TestResult& t : r.results) {
        j["results"].push_back({{"method", std::string(to_string(t.method))},
                                {"theta0", t.theta0},
                                {"statistic", number_or_null(t.statistic)},
                                {"p_value", t.p_value},
                                {"status", to_string(t.status)},
                                {"a_n", t.a_n ? nlohmann::json(*t.a_n) : nlohmann::json(nullptr)}});
    }
    return j;
}

nlohmann::json to_json(const SimulateReport& r) {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["command"] = "simulate";
    j["source"] = r.source;
    j["results"] = nlohmann::json::array();
    for (const sims::SimResult& s : r.results) j["results"].push_back(sims::to_json(s));
    return j;
}

std::string render(const CiReport& r, Format f) {
    if (f == Format::json) return to_json(r).dump(2) + "\n";
    std::ostringstream os;
    if (f == Format::csv) {
        os << "method,level,lower,upper,point_estimate\n";
        for (const ConfidenceInterval& ci : r.intervals) {
            os << to_string(ci.method) << ',' << fmt(ci.level, "%.10g") << ',' << fmt(ci.lower, "%.10g") << ','
               << fmt(ci.upper, "%.10g") << ',' << fmt(r.point_estimate, "%.10g") << '\n';
        }
        return os.str();
    }
    os << "kernel " << r.kernel << ": " << design_text(r.labels, r.sizes) << '\n';
    os << "point estimate " << fmt(r.point_estimate) << '\n';
    for (const ConfidenceInterval& ci : r.intervals) {
        os << "  " << to_string(ci.method) << ' ' << fmt(100.0 * ci.level, "%g") << "% CI (" << fmt(ci.lower, "%.4f")
           << ", " << fmt(ci.upper, "%.4f") << ")";
        if (ci.a_n) os << "  a_n=" << fmt(*ci.a_n, "%.4g");
        if (ci.degenerate) os << "  [zero-spread pseudo-values]";
        if (ci.lower_search.at_hull_edge || ci.upper_search.at_hull_edge) os << "  [hull edge]";
        if (ci.lower_search.unbounded) os << "  [unbounded]";
        os << '\n';
    }
    return os.str();
}

std::string render(const TestReport& r, Format f) {
    if (f == Format::json) return to_json(r).dump(2) + "\n";
    std::ostringstream os;
    if (f == Format::csv) {
        os << "method,theta0,statistic,p_value,status\n";
        for (const TestResult& t : r.results) {
            os << to_string(t.method) << ',' << fmt(t.theta0, "%.10g") << ',' << fmt(t.statistic, "%.10g") << ','
               << fmt(t.p_value, "%.10g") << ',' << to_string(t.status) << '\n';
        }
        return os.str();
    }
    os << "kernel " << r.kernel << ": " << design_text(r.labels, r.sizes) << '\n';
    os << "point estimate " << fmt(r.point_estimate) << '\n';
    for (const TestResult& t : r.results) {
        os << "  " << to_string(t.method) << "  theta0=" << fmt(t.theta0) << "  -2logR=" << fmt(t.statistic)
           << "  p=" << fmt(t.p_value, "%.4g");
        if (t.status == ElStatus::outside_hull) os << "  [theta0 outside the convex hull of the pseudo-values]";
        os << '\n';
    }
    return os.str();
}

std::string render(const SimulateReport& r, Format f) {
    if (f == Format::json) return to_json(r).dump(2) + "\n";
    if (f == Format::csv) return sims::to_csv(r.results);
    return sims::to_text(r.results);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Jackknife and adjusted jackknife empirical likelihood for U-statistics", "ajel"};
    app.require_subcommand(1);

    RunConfig config;
    std::string data_path;
    std::string sim_source;
    std::string method = "ajel";
    std::string format = "text";

    const std::map<std::string, std::string> method_names{{"jel", "jel"}, {"ajel", "ajel"}, {"both", "both"}};
    const std::map<std::string, std::string> format_names{{"text", "text"}, {"json", "json"}, {"csv", "csv"}};

    auto common = [&](CLI::App* sub) {
        sub->add_option("--method", method, "jel, ajel or both")->transform(CLI::CheckedTransformer(method_names));
        sub->add_option("--level", config.levels, "confidence level, repeatable (default 0.90 and 0.95)")
            ->check(CLI::Range(0.0, 1.0));
        sub->add_option("--an", config.a_n, "AJEL adjustment level a_n (default ln(n)/2)");
        sub->add_option("--format", format, "text, json or csv")->transform(CLI::CheckedTransformer(format_names));
        sub->add_option("--output", config.output, "write the report to PATH instead of stdout");
    };

    CLI::App* ci = app.add_subcommand("ci", "confidence intervals for theta");
    ci->add_option("data", data_path, "CSV file with header group,v1[,v2,...]")->required();
    ci->add_option("--kernel", config.kernel, "mean, pwm, variance, auc, auc-midrank, auc-diff");
    ci->add_option("--x-group", config.x_group, "group label to use as the first sample X");
    common(ci);

    CLI::App* test = app.add_subcommand("test", "test H0: theta = theta0");
    test->add_option("data", data_path, "CSV file with header group,v1[,v2,...]")->required();
    test->add_option("--kernel", config.kernel, "mean, pwm, variance, auc, auc-midrank, auc-diff");
    test->add_option("--x-group", config.x_group, "group label to use as the first sample X");
    test->add_option("--theta0", config.theta0, "hypothesized value")->required();
    common(test);

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo coverage study");
    sim->add_option("source", sim_source, "preset (table1, table2) or JSON spec file")->required();
    sim->add_option("--seed", config.seed, "master seed");
    sim->add_flag("--quick", config.quick, "divide replications by 10");
    sim->add_option("--threads", config.threads, "worker threads (0 = all cores); results do not depend on it");
    common(sim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? exit_ok : exit_usage;
    }
    config.method = method == "jel" ? MethodChoice::jel : method == "both" ? MethodChoice::both : MethodChoice::ajel;
    config.format = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::text;
    if (sim->parsed() && sim->count("--method") == 0) config.method = MethodChoice::both;

    try {
        std::string text;
        if (ci->parsed()) {
            text = render(cmd_ci(config, ingest_csv(data_path)), config.format);
        } else if (test->parsed()) {
            text = render(cmd_test(config, ingest_csv(data_path)), config.format);
        } else {
            text = render(cmd_simulate(config, sim_source), config.format);
        }
        if (config.output) {
            std::ofstream f(*config.output, std::ios::binary);
            if (!f) fail(ErrorKind::usage, "cannot write '" + *config.output + "'");
            f << text;
        } else {
            out << text;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_ok;
}

}  // namespace ajel::cli
