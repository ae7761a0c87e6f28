// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "coursecausal/ingest.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace coursecausal {

struct PairCriteria {
    int min_y_support = 100;
    int min_x_support = 100;
    double min_below_c_fraction = 0.10;
    bool y_not_in_first_term = true;

    void validate() const;
};

struct YTaker {
    std::string student_id;
    std::size_t history_index = 0; // into Cohort::histories()
    Term y_term;                    // first attempt
    Grade y_grade{Letter::F};
};

struct CoursePair {
    std::string y_course;
    std::string x_course;
    std::string cohort_label;
    std::vector<YTaker> y_takers;
};

enum class YCriterion { Passed, Support, BelowCFraction, OnlyInFirstTerm };

std::string_view y_criterion_text(YCriterion c) noexcept;

/// Outcome of the target-course filter for one course.
struct YCheck {
    std::string course;
    std::size_t takers = 0;
    std::size_t below_c = 0;
    bool taken_after_first_term = false;
    YCriterion result = YCriterion::Support;

    double below_c_fraction() const noexcept {
        return takers ? static_cast<double>(below_c) / static_cast<double>(takers) : 0.0;
    }
    bool passed() const noexcept { return result == YCriterion::Passed; }
};

YCheck check_y(const Cohort& cohort, const std::string& course, const PairCriteria& criteria);

/// Courses that qualify as a target Y, in lexicographic order.
std::vector<std::string> enumerate_valid_y(const Cohort& cohort, const PairCriteria& criteria);

/// Every taker of `y_course` with the term and grade of their first attempt.
std::vector<YTaker> collect_y_takers(const Cohort& cohort, const std::string& y_course);

/// Number of distinct takers of `y` who took `x` in a term strictly before their y_term.
std::size_t prior_support(const Cohort& cohort, const std::vector<YTaker>& takers,
                          const std::string& x_course);

/// One pair per prior course X with enough strictly-prior takers; ordered by x_course.
std::vector<CoursePair> enumerate_valid_x(const Cohort& cohort, const std::string& y_course,
                                          const PairCriteria& criteria);

} // namespace coursecausal
