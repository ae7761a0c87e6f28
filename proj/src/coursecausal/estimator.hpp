// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "coursecausal/matching.hpp"
#include "coursecausal/ols.hpp"
#include "coursecausal/pairs.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coursecausal {

struct WelchTest {
    double t = 0.0;
    double df = 0.0;
    double p_value = 1.0; // two-sided
};

/// Two-sided Welch unequal-variance t-test. Each sample needs at least two values.
WelchTest welch_t_test(std::span<const double> a, std::span<const double> b);

inline constexpr double kSignificanceLevel = 0.01;

struct MeansEstimate {
    double ate = 0.0;
    double p_value = 1.0;
};

/// Difference of matched-arm mean outcomes with its Welch p-value.
/// Throws NotEstimable(Stage::Means) with fewer than two pairs.
MeansEstimate ate_means(const MatchedSample& sample);

/// Columns: intercept, treatment, gpa, credits, then one indicator per prior course.
struct RegressionDesign {
    static constexpr Eigen::Index kIntercept = 0;
    static constexpr Eigen::Index kTreatment = 1;

    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::vector<std::string> columns;
};

struct DesignOptions {
    /// A course gets an indicator only if this many matched students took it before Y.
    int min_indicator_support = 2;
    /// Courses never given an indicator (the pair's own X and Y).
    std::vector<std::string> excluded_courses;
};

/// Rows are treatment then control for each matched pair, in pair order. Indicators
/// that would be all zero or all one are left out.
RegressionDesign build_design(const MatchedSample& sample, const DesignOptions& options);

/// Design with only the intercept and treatment columns.
RegressionDesign build_means_design(const MatchedSample& sample);

struct FoldResult {
    double beta_ate = 0.0;
    double rmse = 0.0;
    bool regularized = false;
};

struct CrossValidation {
    double ate_reg_mean = 0.0;
    double ate_reg_std = 0.0; // sample standard deviation over folds
    double rmse_mean = 0.0;
    std::vector<FoldResult> folds;
};

/// k-fold cross-validation stratified on the treatment column. Throws NotEstimable when
/// either arm has fewer than k rows.
CrossValidation cross_validated_ate(const RegressionDesign& design, int k, std::uint64_t seed);

/// Fold id for every row; rows of each arm are shuffled and dealt round-robin.
std::vector<int> stratified_folds(const RegressionDesign& design, int k, std::uint64_t seed);

struct AnalysisOptions {
    double cutoff = 0.5;
    int folds = 5;
    std::uint64_t seed = 0;
    int min_indicator_support = 2;

    void validate() const;
};

struct AteReport {
    std::string y_course;
    std::string x_course;
    std::string cohort;
    double ate_means = 0.0;
    double p_value = 1.0;
    bool significant_at_01 = false;
    double ate_reg_mean = 0.0;
    double ate_reg_std = 0.0;
    double rmse_mean = 0.0;
    int folds = 0;
    std::size_t n_pairs = 0;
    std::size_t n_treatment = 0;
    std::size_t n_control = 0;
    std::vector<FoldResult> per_fold;
    MatchedSample sample;
};

/// Treatment and control groups of one pair with their matching candidates, reusable
/// across cutoffs up to `max_cutoff`.
class PairAnalysis {
public:
    PairAnalysis(const Cohort& cohort, const CoursePair& pair, double max_cutoff = 1.0);

    AteReport run(const AnalysisOptions& options) const;

    const CoursePair& pair() const noexcept { return pair_; }
    const CandidateSet& candidates() const noexcept { return *candidates_; }

private:
    CoursePair pair_;
    std::string cohort_label_;
    std::shared_ptr<const CandidateSet> candidates_;
};

/// Groups, matches, and runs both estimators for one pair.
AteReport analyze_pair(const Cohort& cohort, const CoursePair& pair, const AnalysisOptions& options);

} // namespace coursecausal
