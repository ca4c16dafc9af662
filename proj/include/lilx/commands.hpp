#pragma once

#include "lilx/report.hpp"

namespace lilx {

/// scale: parameters x, log (0/1); options field = ou | brownian | repulsive-ou.
ExperimentReport run_scale(const RunConfig& config);

/// gumbel-table: exact and closed-form CDFs of U_n against Lambda along the
/// ln n ladder, with the KS ladder.
ExperimentReport run_gumbel_table(const RunConfig& config);

/// simulate: options mode = ou | iid | walk.
///   ou:   parameters T, h, eps, optional x0; options lambdas ("0.5,1,1.5")
///   iid:  parameters n, optional cut
///   walk: parameters n, horizon
ExperimentReport run_simulate(const RunConfig& config);

/// expectation: E[U_n] along the ln n ladder with the Gumbel mean reference.
ExperimentReport run_expectation(const RunConfig& config);

/// strong-law: parameters c, rho, k_max.
ExperimentReport run_strong_law(const RunConfig& config);

ExperimentReport run_command(const RunConfig& config);

/// Parses "a,b,c" into reals; DomainError on malformed input.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace lilx
