#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "llab/experiments.hpp"

namespace llab {

/// Experiment config files. Each `[kind]` section is one experiment:
///
///   # ground-state ensemble
///   [ensemble]
///   dist   = bernoulli:0.5:10
///   L      = 2000
///   k      = 1
///   M      = 32
///   n_eigs = 1
///   seeds  = 1..50
///
/// Keys: dist, L, k, vmax, M, n_eigs, s, seeds, tol, max_nodes, gamma_c,
/// target_ratio, oracle. Lists are comma separated; an item may be an
/// integer range `a..b` or a power-of-two range `2^a..2^b`. Unknown keys,
/// duplicate keys or sections and empty seed lists are errors. Errors carry
/// the offending line number.
std::vector<ExperimentConfig> parse_config(std::istream& in);
std::vector<ExperimentConfig> load_config(const std::filesystem::path& path);

/// `key = value` lines that parse back to the same config.
std::string format_config(const ExperimentConfig& cfg);

std::vector<double> parse_real_list(std::string_view text);
std::vector<std::int64_t> parse_int_list(std::string_view text);

}  // namespace llab
