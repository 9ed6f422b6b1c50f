#include "drc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace drc {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + s +
                                    "' as a number");
    }
    if (pos != s.size())
        throw std::invalid_argument("config key '" + key + "': trailing characters in '" + s + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    long v;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + s +
                                    "' as an integer");
    }
    if (pos != s.size())
        throw std::invalid_argument("config key '" + key + "': trailing characters in '" + s + "'");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "on" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "off" || s == "no") return false;
    throw std::invalid_argument("config key '" + key + "': cannot parse '" + s + "' as a boolean");
}

const std::map<std::string, std::string>* find_section(const ConfigSections& cfg,
                                                       const std::string& name) {
    auto it = cfg.find(name);
    return it == cfg.end() ? nullptr : &it->second;
}

const std::map<std::string, std::string>& require_section(const ConfigSections& cfg,
                                                          const std::string& name) {
    const auto* s = find_section(cfg, name);
    if (!s) throw std::invalid_argument("config is missing the [" + name + "] section");
    return *s;
}

std::string require_key(const std::map<std::string, std::string>& section,
                        const std::string& section_name, const std::string& key) {
    auto it = section.find(key);
    if (it == section.end())
        throw std::invalid_argument("config section [" + section_name + "] is missing key '" +
                                    key + "'");
    return it->second;
}

std::string key_or(const std::map<std::string, std::string>& section, const std::string& key,
                   const std::string& fallback) {
    auto it = section.find(key);
    return it == section.end() ? fallback : it->second;
}

const std::map<std::string, std::set<std::string>>& known_schema() {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"network", {"d", "widths", "budgets", "activation", "input_bound"}},
        {"estimator",
         {"epsilon_draws", "restarts", "ascent_steps", "step_size", "step_decay",
          "outer_replicates", "absconv"}},
        {"sweep", {"types", "rho", "n", "k", "data"}},
        {"train",
         {"epochs", "learning_rate", "loss", "y_bound", "train_size", "test_size", "dropout_type",
          "rho", "delta", "trials"}},
    };
    return schema;
}

}  // namespace

ConfigSections parse_ini(const std::string& text) {
    ConfigSections cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw std::invalid_argument("config line " + std::to_string(line_no) +
                                            ": empty section name");
            cfg[section];
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected 'key = value'");
        if (section.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": key outside any section");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        if (cfg[section].count(key))
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": duplicate key '" + key + "'");
        cfg[section][key] = value;
    }
    check_known_keys(cfg);
    return cfg;
}

ConfigSections load_ini_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << f.rdbuf();
    return parse_ini(text.str());
}

void check_known_keys(const ConfigSections& cfg) {
    const auto& schema = known_schema();
    for (const auto& [section, keys] : cfg) {
        auto it = schema.find(section);
        if (it == schema.end())
            throw std::invalid_argument("unknown config section [" + section + "]");
        for (const auto& [key, value] : keys)
            if (!it->second.count(key))
                throw std::invalid_argument("unknown key '" + key + "' in config section [" +
                                            section + "]");
    }
}

NetworkSpec network_from_config(const ConfigSections& cfg) {
    const auto& section = require_section(cfg, "network");
    NetworkSpec spec;
    spec.input_dim = parse_int("d", require_key(section, "network", "d"));
    for (const std::string& w : split_list(key_or(section, "widths", "")))
        spec.widths.push_back(parse_int("widths", w));
    for (const std::string& b : split_list(require_key(section, "network", "budgets")))
        spec.budgets.push_back(parse_double("budgets", b));
    spec.activation = activation_from_string(key_or(section, "activation", "tanh"));
    spec.input_bound = parse_double("input_bound", key_or(section, "input_bound", "1.0"));
    spec.validate();
    return spec;
}

std::string network_to_config(const NetworkSpec& spec) {
    std::ostringstream out;
    out << "[network]\n";
    out << "d = " << spec.input_dim << "\n";
    out << "widths = ";
    for (std::size_t i = 0; i < spec.widths.size(); ++i)
        out << (i ? "," : "") << spec.widths[i];
    out << "\n";
    out << "budgets = ";
    for (std::size_t i = 0; i < spec.budgets.size(); ++i)
        out << (i ? "," : "") << format_double(spec.budgets[i]);
    out << "\n";
    out << "activation = " << to_string(spec.activation) << "\n";
    out << "input_bound = " << format_double(spec.input_bound) << "\n";
    return out.str();
}

EstimatorConfig estimator_from_config(const ConfigSections& cfg) {
    EstimatorConfig est;
    const auto* section = find_section(cfg, "estimator");
    if (!section) return est;
    est.n_epsilon_draws =
        parse_int("epsilon_draws", key_or(*section, "epsilon_draws",
                                          std::to_string(est.n_epsilon_draws)));
    est.n_restarts = parse_int("restarts", key_or(*section, "restarts",
                                                  std::to_string(est.n_restarts)));
    est.ascent_steps =
        parse_int("ascent_steps", key_or(*section, "ascent_steps",
                                         std::to_string(est.ascent_steps)));
    est.step_size = parse_double("step_size", key_or(*section, "step_size", "0.1"));
    est.step_decay = parse_double("step_decay", key_or(*section, "step_decay", "0.99"));
    est.n_outer_replicates =
        parse_int("outer_replicates", key_or(*section, "outer_replicates",
                                             std::to_string(est.n_outer_replicates)));
    est.use_absconv_reduction = parse_bool("absconv", key_or(*section, "absconv", "true"));
    est.validate();
    return est;
}

SweepConfig sweep_config_from_sections(const ConfigSections& cfg) {
    SweepConfig sweep;
    sweep.net_template = network_from_config(cfg);
    sweep.estimator = estimator_from_config(cfg);
    const auto& section = require_section(cfg, "sweep");
    for (const std::string& t : split_list(require_key(section, "sweep", "types")))
        sweep.types.push_back(dropout_type_from_string(t));
    for (const std::string& r : split_list(require_key(section, "sweep", "rho")))
        sweep.rho_grid.push_back(parse_double("rho", r));
    for (const std::string& n : split_list(require_key(section, "sweep", "n")))
        sweep.n_grid.push_back(parse_int("n", n));
    std::string k_list = key_or(section, "k", std::to_string(sweep.net_template.hidden_layers()));
    for (const std::string& k : split_list(k_list)) sweep.k_grid.push_back(parse_int("k", k));
    sweep.data = data_distribution_from_string(key_or(section, "data", "unit_sphere"));
    sweep.validate();
    return sweep;
}

GapConfig gap_config_from_sections(const ConfigSections& cfg) {
    GapConfig gap;
    const auto& section = require_section(cfg, "train");
    gap.train.epochs = parse_int("epochs", key_or(section, "epochs", "50"));
    gap.train.learning_rate =
        parse_double("learning_rate", key_or(section, "learning_rate", "0.05"));
    gap.train.loss.kind = loss_kind_from_string(key_or(section, "loss", "square"));
    gap.train.loss.y_bound = parse_double("y_bound", key_or(section, "y_bound", "1.0"));
    gap.train.train_size = parse_int("train_size", key_or(section, "train_size", "64"));
    gap.train.test_size = parse_int("test_size", key_or(section, "test_size", "10000"));
    gap.train.dropout_type = dropout_type_from_string(key_or(section, "dropout_type", "I"));
    gap.train.rho = parse_double("rho", key_or(section, "rho", "0.5"));
    gap.delta = parse_double("delta", key_or(section, "delta", "0.05"));
    gap.n_trials = parse_int("trials", key_or(section, "trials", "100"));
    gap.train.validate();
    return gap;
}

}  // namespace drc
