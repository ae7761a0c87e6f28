// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/pairs.hpp"

#include "coursecausal/error.hpp"

#include <map>
#include <set>

namespace coursecausal {

void PairCriteria::validate() const {
    if (min_y_support < 1) throw ConfigError("min_y_support must be positive");
    if (min_x_support < 1) throw ConfigError("min_x_support must be positive");
    if (!(min_below_c_fraction > 0.0 && min_below_c_fraction < 1.0))
        throw ConfigError("min_below_c_fraction must lie in (0, 1)");
}

std::string_view y_criterion_text(YCriterion c) noexcept {
    switch (c) {
    case YCriterion::Passed: return "passed";
    case YCriterion::Support: return "min_y_support";
    case YCriterion::BelowCFraction: return "min_below_c_fraction";
    case YCriterion::OnlyInFirstTerm: return "y_not_in_first_term";
    }
    return "unknown";
}

namespace {

void classify(YCheck& check, const PairCriteria& criteria) {
    if (check.takers < static_cast<std::size_t>(criteria.min_y_support))
        check.result = YCriterion::Support;
    else if (check.below_c_fraction() < criteria.min_below_c_fraction)
        check.result = YCriterion::BelowCFraction;
    else if (criteria.y_not_in_first_term && !check.taken_after_first_term)
        check.result = YCriterion::OnlyInFirstTerm;
    else
        check.result = YCriterion::Passed;
}

std::map<std::string, YCheck> tally(const Cohort& cohort) {
    std::map<std::string, YCheck> checks;
    for (const auto& h : cohort.histories()) {
        std::set<std::string_view> counted;
        for (const auto& t : h.takings()) {
            if (!counted.insert(t.course_id).second) continue; // first attempt only
            auto& c = checks[t.course_id];
            c.course = t.course_id;
            ++c.takers;
            if (t.grade.below_c()) ++c.below_c;
            if (h.first_term() < t.term) c.taken_after_first_term = true;
        }
    }
    return checks;
}

} // namespace

YCheck check_y(const Cohort& cohort, const std::string& course, const PairCriteria& criteria) {
    auto all = tally(cohort);
    YCheck check;
    check.course = course;
    if (auto it = all.find(course); it != all.end()) check = it->second;
    classify(check, criteria);
    return check;
}

std::vector<std::string> enumerate_valid_y(const Cohort& cohort, const PairCriteria& criteria) {
    std::vector<std::string> out;
    for (auto& [course, check] : tally(cohort)) {
        classify(check, criteria);
        if (check.passed()) out.push_back(course);
    }
    return out;
}

std::vector<YTaker> collect_y_takers(const Cohort& cohort, const std::string& y_course) {
    std::vector<YTaker> takers;
    const auto& histories = cohort.histories();
    for (std::size_t i = 0; i < histories.size(); ++i) {
        if (const Taking* t = histories[i].first_attempt(y_course))
            takers.push_back({histories[i].student_id(), i, t->term, t->grade});
    }
    return takers;
}

std::size_t prior_support(const Cohort& cohort, const std::vector<YTaker>& takers,
                          const std::string& x_course) {
    std::size_t n = 0;
    for (const auto& yt : takers) {
        const Taking* x = cohort.histories()[yt.history_index].first_attempt(x_course);
        if (x && x->term < yt.y_term) ++n;
    }
    return n;
}

std::vector<CoursePair> enumerate_valid_x(const Cohort& cohort, const std::string& y_course,
                                          const PairCriteria& criteria) {
    auto takers = collect_y_takers(cohort, y_course);

    std::map<std::string, std::size_t> support;
    for (const auto& yt : takers) {
        std::set<std::string_view> seen;
        for (const auto& t : cohort.histories()[yt.history_index].takings()) {
            if (!(t.term < yt.y_term)) break;
            if (t.course_id == y_course) continue;
            if (seen.insert(t.course_id).second) ++support[t.course_id];
        }
    }

    std::vector<CoursePair> pairs;
    for (const auto& [x, n] : support) {
        if (n < static_cast<std::size_t>(criteria.min_x_support)) continue;
        pairs.push_back({y_course, x, cohort.label(), takers});
    }
    return pairs;
}

} // namespace coursecausal
