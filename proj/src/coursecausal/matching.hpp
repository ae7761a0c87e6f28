// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "coursecausal/domain.hpp"
#include "coursecausal/pairs.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace coursecausal {

enum class Arm { Treatment, Control };

struct GroupedStudent {
    std::string student_id;
    double outcome = 0.0;            // first-attempt Y grade points
    CovariateVector covariates;      // reference term = y_term
    std::vector<std::string> prior_to_x_courses; // sorted; basis of the Jaccard term
    Arm arm = Arm::Control;
};

struct Groups {
    std::vector<GroupedStudent> treatment;
    std::vector<GroupedStudent> control;
    std::size_t excluded_no_prior = 0;  // Y in the student's first term
    std::size_t excluded_same_term = 0; // X only in the Y term
};

/// Splits the Y takers of `pair` into arms. Treatment: X passed above a C strictly before
/// Y. Control: X never taken before Y, or every earlier attempt at C or below.
/// Throws NotEstimable(Stage::Grouping) when either arm is empty.
Groups build_groups(const Cohort& cohort, const CoursePair& pair);

/// |A ∩ B| / |A ∪ B| over sorted unique sets; 1 when both are empty.
double jaccard_sim(std::span<const std::string> a, std::span<const std::string> b);

/// Min-max bounds of the absolute GPA and credit differences over every cross-arm pair.
struct ScalingContext {
    double gpa_min = 0.0;
    double gpa_max = 0.0;
    double credit_min = 0.0;
    double credit_max = 0.0;

    static ScalingContext from_arms(std::span<const GroupedStudent> treatment,
                                    std::span<const GroupedStudent> control);

    double scale_gpa(double abs_diff) const noexcept;
    double scale_credits(double abs_diff) const noexcept;
};

/// sqrt(g² + c² + (1 - jaccard)²) / sqrt(3), each component in [0, 1].
double pair_distance(const GroupedStudent& a, const GroupedStudent& b, const ScalingContext& scale);

struct MatchedPair {
    GroupedStudent treatment;
    GroupedStudent control;
    double distance = 0.0;
};

struct MatchedSample {
    std::vector<MatchedPair> pairs; // in acceptance order
    double cutoff = 0.0;
    std::size_t unmatched_treatment_count = 0;
    std::size_t unmatched_control_count = 0;

    /// `treatment_id,control_id,distance` audit dump.
    std::string to_csv() const;
};

/// Every cross-arm candidate within `max_cutoff`, sorted by (distance, treatment id, control id).
/// Building it once lets several cutoffs be matched without recomputing distances.
class CandidateSet {
public:
    CandidateSet(std::vector<GroupedStudent> treatment, std::vector<GroupedStudent> control,
                 double max_cutoff = 1.0);

    /// Greedy 1:1 matching without replacement. Throws NotEstimable(Stage::Matching)
    /// when no candidate is within `cutoff`.
    MatchedSample match(double cutoff) const;

    const std::vector<GroupedStudent>& treatment() const noexcept { return treatment_; }
    const std::vector<GroupedStudent>& control() const noexcept { return control_; }
    const ScalingContext& scaling() const noexcept { return scale_; }
    std::size_t candidate_count() const noexcept { return candidates_.size(); }

private:
    struct Candidate {
        double distance;
        std::uint32_t t;
        std::uint32_t c;
    };

    std::vector<GroupedStudent> treatment_;
    std::vector<GroupedStudent> control_;
    ScalingContext scale_;
    double max_cutoff_;
    std::vector<Candidate> candidates_;
};

MatchedSample greedy_match(std::vector<GroupedStudent> treatment,
                           std::vector<GroupedStudent> control, double cutoff);

} // namespace coursecausal
