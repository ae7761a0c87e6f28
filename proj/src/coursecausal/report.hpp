// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "coursecausal/pipeline.hpp"

#include <string>

namespace coursecausal {

/// One row per estimated pair:
/// y_course, x_course, cohort, ate_means, significant, ate_reg_mean, ate_reg_std, rmse_mean, n_pairs.
/// A non-empty header is written first as a '#' comment line.
std::string render_analysis_tsv(const AnalyzeRun& run, const std::string& header);
std::string render_analysis_json(const AnalyzeRun& run, const std::string& header);

/// Per cohort: the cutoff-by-cutoff similarity matrix ('*' on the diagonal), then the
/// top-k listing per cutoff and target course, then recall against the catalog if set.
std::string render_sweep_tsv(const SweepRun& run, const std::string& header);
std::string render_sweep_json(const SweepRun& run, const std::string& header);

/// Shortest decimal form of a cutoff ("0.1", "0.45").
std::string format_cutoff(double cutoff);

} // namespace coursecausal
