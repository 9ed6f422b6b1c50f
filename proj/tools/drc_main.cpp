// Command-line driver: complexity sweeps, mask-moment verification, the
// generalization-gap experiment, log-log slope fits, and a bound calculator.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "drc/config.hpp"
#include "drc/moments.hpp"

using nlohmann::json;

namespace {

// git-style 40-hex run identifier derived from the config text and seed
std::string run_id(const std::string& text, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ull ^ drc::rng::mix64(seed);
    for (unsigned char c : text) h = (h ^ c) * 0x100000001b3ull;
    std::ostringstream out;
    for (int i = 0; i < 5; ++i) {
        h = drc::rng::mix64(h + static_cast<std::uint64_t>(i));
        out << std::hex << std::setw(8) << std::setfill('0')
            << static_cast<std::uint32_t>(h >> 16);
    }
    return out.str();
}

std::string summary_path_for(const std::string& out_path) {
    std::size_t dot = out_path.find_last_of('.');
    std::size_t slash = out_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out_path + ".json";
    return out_path.substr(0, dot) + ".json";
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream text;
    text << f.rdbuf();
    return text.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

json network_json(const drc::NetworkSpec& spec) {
    return json{{"d", spec.input_dim},
                {"widths", spec.widths},
                {"budgets", spec.budgets},
                {"activation", drc::to_string(spec.activation)},
                {"input_bound", spec.input_bound}};
}

int cmd_sweep(const std::string& config_path, std::uint64_t seed, const std::string& out_path,
              int jobs) {
    std::string config_text = read_file(config_path);
    drc::SweepConfig cfg = drc::sweep_config_from_sections(drc::parse_ini(config_text));
    cfg.master_seed = seed;
    cfg.jobs = jobs;

    auto start = std::chrono::steady_clock::now();
    std::vector<drc::SweepRow> rows = drc::run_sweep(cfg);
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    drc::write_sweep_csv(rows, out_path);

    json row_errors = json::array();
    int dominated = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].error.empty())
            row_errors.push_back({{"row", i}, {"message", rows[i].error}});
        if (rows[i].dominance) ++dominated;
    }
    json summary{{"run_id", run_id(config_text, seed)},
                 {"command", "sweep"},
                 {"seed", seed},
                 {"jobs", jobs},
                 {"config_file", config_path},
                 {"config_text", config_text},
                 {"network", network_json(cfg.net_template)},
                 {"rows", rows.size()},
                 {"dominant_rows", dominated},
                 {"row_errors", row_errors},
                 {"output", out_path},
                 {"elapsed_seconds", elapsed}};
    write_file(summary_path_for(out_path), summary.dump(2) + "\n");

    std::cout << "sweep: " << rows.size() << " rows -> " << out_path << " (" << dominated
              << " dominated, " << elapsed << " s)\n";
    return 0;
}

int cmd_moments(int d, long trials, std::uint64_t seed, const std::string& out_path) {
    const std::vector<int> powers{1, 2, 3, 4};
    const std::vector<double> rhos{0.1, 0.3, 0.5, 0.9};
    drc::rng::Stream xs_stream(seed, 7);
    drc::Vec x(static_cast<std::size_t>(d));
    for (double& e : x) e = xs_stream.next_normal();

    json cells = json::array();
    bool all_within = true;
    std::cout << "p  rho   analytic      enumerated    mc_mean       mc_se        |z|\n";
    for (int p : powers) {
        for (double rho : rhos) {
            drc::MomentQuery q{x, p, rho, 0};
            double analytic = drc::moment_analytic(q);
            double enumerated = drc::moment_enumerate(q);
            drc::MonteCarloMoment mc =
                drc::moment_monte_carlo(q, trials, drc::rng::derive(seed, p * 100 + int(rho * 10)));
            double z = mc.std_error > 0.0 ? std::fabs(mc.mean - analytic) / mc.std_error : 0.0;
            bool within = z <= 4.0;
            all_within = all_within && within;
            std::printf("%d  %.1f  %-12.6g  %-12.6g  %-12.6g  %-10.3g  %.2f%s\n", p, rho, analytic,
                        enumerated, mc.mean, mc.std_error, z, within ? "" : "  <-- outside 4 SE");
            cells.push_back({{"p", p},
                             {"rho", rho},
                             {"analytic", analytic},
                             {"enumerated", enumerated},
                             {"mc_mean", mc.mean},
                             {"mc_std_error", mc.std_error},
                             {"z", z}});
        }
    }
    if (!out_path.empty()) {
        json summary{{"run_id", run_id("moments d=" + std::to_string(d), seed)},
                     {"command", "moments"},
                     {"seed", seed},
                     {"d", d},
                     {"trials", trials},
                     {"cells", cells},
                     {"all_within_4se", all_within}};
        write_file(out_path, summary.dump(2) + "\n");
    }
    return all_within ? 0 : 1;
}

int cmd_gap(const std::string& config_path, std::uint64_t seed, const std::string& out_path,
            int jobs) {
    std::string config_text = read_file(config_path);
    drc::ConfigSections sections = drc::parse_ini(config_text);
    drc::NetworkSpec spec = drc::network_from_config(sections);
    drc::GapConfig gap = drc::gap_config_from_sections(sections);

    drc::GapReport report = drc::gap_experiment(spec, gap.train, gap.delta, gap.n_trials,
                                                drc::DataDistribution::UnitSphere, seed, jobs);
    std::cout << "gap: " << report.passes << "/" << report.n_trials
              << " trials satisfied the bound (delta = " << gap.delta << ")\n";
    if (!out_path.empty()) {
        json trials = json::array();
        for (const drc::GapTrial& t : report.trials)
            trials.push_back({{"empirical_risk", t.empirical_risk},
                              {"heldout_risk", t.heldout_risk},
                              {"rhs", t.rhs},
                              {"pass", t.pass}});
        json summary{{"run_id", run_id(config_text, seed)},
                     {"command", "gap"},
                     {"seed", seed},
                     {"jobs", jobs},
                     {"config_file", config_path},
                     {"config_text", config_text},
                     {"network", network_json(spec)},
                     {"delta", gap.delta},
                     {"n_trials", report.n_trials},
                     {"passes", report.passes},
                     {"pass_fraction", report.pass_fraction},
                     {"trials", trials}};
        write_file(out_path, summary.dump(2) + "\n");
    }
    return 0;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

int cmd_slope(const std::string& in_path, const std::string& column,
              const std::string& out_path) {
    std::ifstream f(in_path);
    if (!f) throw std::runtime_error("cannot open '" + in_path + "'");
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty CSV '" + in_path + "'");
    std::vector<std::string> header = split_csv_line(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* required : {"type", "k", "n", "rho"})
        if (!col.count(required))
            throw std::runtime_error("CSV is missing column '" + std::string(required) + "'");
    if (!col.count(column)) throw std::runtime_error("CSV is missing column '" + column + "'");

    // group rows by (type, k, n) and fit value-vs-rho within each group
    std::map<std::string, std::vector<std::pair<double, double>>> groups;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        std::string key = fields[col["type"]] + " k=" + fields[col["k"]] + " n=" + fields[col["n"]];
        groups[key].push_back(
            {std::stod(fields[col["rho"]]), std::stod(fields[col[column]])});
    }

    json fits = json::array();
    std::cout << "group                 slope        r_squared\n";
    for (const auto& [key, points] : groups) {
        drc::SlopeFit fit = drc::fit_loglog_slope(points);
        std::printf("%-20s  %-11.6g  %.12f\n", key.c_str(), fit.slope, fit.r_squared);
        fits.push_back({{"group", key},
                        {"points", points.size()},
                        {"slope", fit.slope},
                        {"r_squared", fit.r_squared}});
    }
    if (!out_path.empty()) {
        json summary{{"command", "slope"},
                     {"input", in_path},
                     {"column", column},
                     {"fits", fits}};
        write_file(out_path, summary.dump(2) + "\n");
    }
    return 0;
}

int cmd_bound(const std::string& config_path, const std::string& type_name, double rho, int n,
              double delta, double empirical_risk, const std::string& loss_name, double y_bound,
              const std::string& variant_name, const std::string& out_path) {
    drc::NetworkSpec spec = drc::network_from_config(drc::parse_ini(read_file(config_path)));
    drc::DropoutType type = drc::dropout_type_from_string(type_name);
    double complexity = drc::theoretical_complexity_bound(spec, type, rho, n);
    std::cout << "output_bound          = " << drc::format_double(drc::output_bound(spec)) << "\n";
    std::cout << "complexity_bound      = " << drc::format_double(complexity) << "\n";
    std::cout << "rho_exponent          = "
              << drc::format_double(drc::bound_rho_exponent(spec, type)) << "\n";

    json summary{{"command", "bound"},
                 {"network", network_json(spec)},
                 {"type", type_name},
                 {"rho", rho},
                 {"n", n},
                 {"output_bound", drc::output_bound(spec)},
                 {"complexity_bound", complexity},
                 {"rho_exponent", drc::bound_rho_exponent(spec, type)}};

    if (delta > 0.0) {
        drc::LossSpec loss;
        loss.kind = drc::loss_kind_from_string(loss_name);
        loss.y_bound = y_bound;
        drc::BoundVariant variant = variant_name == "empirical" ? drc::BoundVariant::Empirical
                                                                : drc::BoundVariant::Expected;
        drc::BoundReport report = drc::generalization_bound(empirical_risk, complexity, loss, spec,
                                                            delta, n, variant, rho);
        std::cout << "loss_lipschitz        = " << drc::format_double(report.loss_lipschitz)
                  << "\n";
        std::cout << "loss_bound            = " << drc::format_double(report.loss_bound) << "\n";
        std::cout << "mcdiarmid_term        = " << drc::format_double(report.mcdiarmid_term)
                  << "\n";
        std::cout << "generalization_bound  = " << drc::format_double(report.total_bound) << "\n";
        summary["generalization"] = {{"variant", drc::to_string(report.variant)},
                                     {"delta", delta},
                                     {"empirical_risk", empirical_risk},
                                     {"loss", loss_name},
                                     {"loss_lipschitz", report.loss_lipschitz},
                                     {"loss_bound", report.loss_bound},
                                     {"mcdiarmid_term", report.mcdiarmid_term},
                                     {"total_bound", report.total_bound}};
    }
    if (!out_path.empty()) write_file(out_path, summary.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dropout Rademacher complexity toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_path, column = "bound";
    std::uint64_t seed = 0;
    int jobs = 1;
    int moments_d = 4;
    long trials = 100000;
    std::string type_name = "I", loss_name = "square", variant_name = "expected";
    double rho = 1.0, delta = 0.0, empirical_risk = 0.0, y_bound = 1.0;
    int n = 100;

    auto* sweep = app.add_subcommand("sweep", "run a complexity/bound sweep, write CSV + summary");
    sweep->add_option("--config", config_path, "INI config file")->required();
    sweep->add_option("--seed", seed, "master seed");
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--jobs", jobs, "worker count");

    auto* moments = app.add_subcommand("moments", "verify the mask moment identities");
    moments->add_option("--d", moments_d, "vector dimension");
    moments->add_option("--trials", trials, "Monte Carlo trials per cell");
    moments->add_option("--seed", seed, "seed");
    moments->add_option("--out", out_path, "JSON output path");

    auto* gap = app.add_subcommand("gap", "run the generalization-gap experiment");
    gap->add_option("--config", config_path, "INI config file")->required();
    gap->add_option("--seed", seed, "master seed");
    gap->add_option("--out", out_path, "JSON output path");
    gap->add_option("--jobs", jobs, "worker count");

    auto* slope = app.add_subcommand("slope", "fit log-log rho slopes from a sweep CSV");
    slope->add_option("--in", in_path, "sweep CSV")->required();
    slope->add_option("--column", column, "value column (bound or estimate)");
    slope->add_option("--out", out_path, "JSON output path");

    auto* bound = app.add_subcommand("bound", "compute theoretical bounds for one configuration");
    bound->add_option("--config", config_path, "INI config with a [network] section")->required();
    bound->add_option("--type", type_name, "dropout type I|II|III");
    bound->add_option("--rho", rho, "keep probability");
    bound->add_option("--n", n, "sample size");
    bound->add_option("--delta", delta, "confidence level; > 0 also assembles the full bound");
    bound->add_option("--risk", empirical_risk, "empirical risk term");
    bound->add_option("--loss", loss_name, "square|cross_entropy_sigmoid");
    bound->add_option("--ybound", y_bound, "label bound for the square loss");
    bound->add_option("--variant", variant_name, "expected|empirical");
    bound->add_option("--out", out_path, "JSON output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return cmd_sweep(config_path, seed, out_path, jobs);
        if (moments->parsed()) return cmd_moments(moments_d, trials, seed, out_path);
        if (gap->parsed()) return cmd_gap(config_path, seed, out_path, jobs);
        if (slope->parsed()) return cmd_slope(in_path, column, out_path);
        if (bound->parsed())
            return cmd_bound(config_path, type_name, rho, n, delta, empirical_risk, loss_name,
                             y_bound, variant_name, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
