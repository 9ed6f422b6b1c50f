#pragma once

#include <map>
#include <string>

#include "drc/sweep.hpp"
#include "drc/train.hpp"

namespace drc {

// Parsed key-value config with [section] headers, '#'/';' comments, one
// `key = value` pair per line. Unknown sections or keys are errors.
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;

ConfigSections parse_ini(const std::string& text);
ConfigSections load_ini_file(const std::string& path);

// [network] schema: d, widths (comma list, empty for no hidden layers),
// budgets (comma list of k+1 values), activation, input_bound.
NetworkSpec network_from_config(const ConfigSections& cfg);
std::string network_to_config(const NetworkSpec& spec);

// [estimator] schema: epsilon_draws, restarts, ascent_steps, step_size,
// step_decay, outer_replicates, absconv.
EstimatorConfig estimator_from_config(const ConfigSections& cfg);

// [sweep] schema: types, rho, n, k, data.
SweepConfig sweep_config_from_sections(const ConfigSections& cfg);

// [train] schema: epochs, learning_rate, loss, y_bound, train_size,
// test_size, dropout_type, rho, delta, trials.
struct GapConfig {
    TrainConfig train;
    double delta = 0.05;
    int n_trials = 100;
};
GapConfig gap_config_from_sections(const ConfigSections& cfg);

// Verifies every present section/key is known to the given commands' schemas.
void check_known_keys(const ConfigSections& cfg);

}  // namespace drc
