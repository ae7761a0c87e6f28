// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "coursecausal/estimator.hpp"
#include "coursecausal/pairs.hpp"

#include <string>
#include <vector>

namespace coursecausal {

struct SweepConfig {
    std::vector<double> cutoffs{0.1, 0.3, 0.4, 0.5, 0.6, 0.9};
    int top_k = 3;
    int folds = 5;
    std::uint64_t seed = 0; // shared by every cutoff
    int min_indicator_support = 2;
    PairCriteria criteria;
    unsigned threads = 0;

    void validate() const;
    AnalysisOptions analysis_at(double cutoff) const;
};

struct RankedCourse {
    std::string x_course;
    double ate_reg_mean = 0.0;
};

/// Sorts by ate_reg_mean descending, ties by course id, and keeps the first `top_k`.
std::vector<RankedCourse> rank_top_k(std::vector<RankedCourse> courses, int top_k);

/// Top prior courses for `y_course` at one cutoff. Pairs that are not estimable are skipped.
std::vector<RankedCourse> top_k_causal(const Cohort& cohort, const std::string& y_course,
                                       double cutoff, const SweepConfig& config);

struct SimilarityMatrix {
    std::vector<double> cutoffs;
    std::vector<std::vector<double>> values; // values[i][j] for cutoffs i, j

    double at(std::size_t i, std::size_t j) const { return values.at(i).at(j); }
};

/// Agreement of top-k lists across cutoffs. `top[c][y]` is the ranked list for cutoff c
/// and target course y. Each Y contributes |A ∩ B| / max(|A|, |B|) (1 when both are
/// empty); the matrix entry is the mean over Y, which is |A ∩ B| / top_k whenever both
/// lists are full.
SimilarityMatrix similarity_from_rankings(const std::vector<double>& cutoffs,
                                          const std::vector<std::vector<std::vector<std::string>>>& top);

struct SweepResult {
    std::string cohort;
    std::vector<std::string> y_courses;
    std::vector<std::vector<std::vector<RankedCourse>>> top; // [cutoff][y]
    SimilarityMatrix matrix;
};

/// Analyzes every valid (Y, X) pair of the cohort at every cutoff. Throws
/// NotEstimable(Stage::Sweep) when the cohort has no valid Y.
SweepResult run_sweep(const Cohort& cohort, const SweepConfig& config);

SimilarityMatrix similarity(const Cohort& cohort, const SweepConfig& config);

} // namespace coursecausal
