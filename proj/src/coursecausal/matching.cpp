// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/matching.hpp"

#include "coursecausal/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace coursecausal {

Groups build_groups(const Cohort& cohort, const CoursePair& pair) {
    Groups groups;
    for (const auto& yt : pair.y_takers) {
        const StudentHistory& h = cohort.histories()[yt.history_index];
        if (!h.has_taking_before(yt.y_term)) {
            ++groups.excluded_no_prior;
            continue;
        }

        const Taking* first_pass = nullptr;
        bool attempted_before = false;
        bool same_term = false;
        for (const auto& t : h.takings()) {
            if (t.course_id != pair.x_course) continue;
            if (t.term < yt.y_term) {
                attempted_before = true;
                if (!first_pass && t.grade.above_c()) first_pass = &t;
            } else if (t.term == yt.y_term) {
                same_term = true;
            }
        }
        if (!attempted_before && same_term) {
            ++groups.excluded_same_term;
            continue;
        }

        GroupedStudent s;
        s.student_id = yt.student_id;
        s.outcome = yt.y_grade.points();
        s.covariates = covariates_at(h, yt.y_term);
        if (first_pass) {
            s.arm = Arm::Treatment;
            s.prior_to_x_courses = courses_before(h, first_pass->term);
            groups.treatment.push_back(std::move(s));
        } else {
            s.arm = Arm::Control;
            s.prior_to_x_courses = s.covariates.prior_courses;
            groups.control.push_back(std::move(s));
        }
    }
    if (groups.treatment.empty()) throw NotEstimable(Stage::Grouping, "empty treatment arm");
    if (groups.control.empty()) throw NotEstimable(Stage::Grouping, "empty control arm");
    return groups;
}

double jaccard_sim(std::span<const std::string> a, std::span<const std::string> b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else {
            ++inter;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

// Smallest and largest |x - y| for x in xs, y in ys.
std::pair<double, double> abs_diff_range(std::vector<double> xs, std::vector<double> ys) {
    std::sort(ys.begin(), ys.end());
    auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    double hi = std::max(std::abs(*xmax - ys.front()), std::abs(ys.back() - *xmin));
    double lo = std::numeric_limits<double>::infinity();
    for (double x : xs) {
        auto it = std::lower_bound(ys.begin(), ys.end(), x);
        if (it != ys.end()) lo = std::min(lo, std::abs(*it - x));
        if (it != ys.begin()) lo = std::min(lo, std::abs(x - *std::prev(it)));
    }
    return {lo, hi};
}

double min_max(double v, double lo, double hi) noexcept {
    if (!(hi > lo)) return 0.0;
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
}

const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

} // namespace

ScalingContext ScalingContext::from_arms(std::span<const GroupedStudent> treatment,
                                         std::span<const GroupedStudent> control) {
    ScalingContext s;
    if (treatment.empty() || control.empty()) return s;
    std::vector<double> tg, tc, cg, cc;
    for (const auto& t : treatment) {
        tg.push_back(t.covariates.gpa);
        tc.push_back(t.covariates.total_credits);
    }
    for (const auto& c : control) {
        cg.push_back(c.covariates.gpa);
        cc.push_back(c.covariates.total_credits);
    }
    std::tie(s.gpa_min, s.gpa_max) = abs_diff_range(tg, cg);
    std::tie(s.credit_min, s.credit_max) = abs_diff_range(tc, cc);
    return s;
}

double ScalingContext::scale_gpa(double abs_diff) const noexcept {
    return min_max(abs_diff, gpa_min, gpa_max);
}

double ScalingContext::scale_credits(double abs_diff) const noexcept {
    return min_max(abs_diff, credit_min, credit_max);
}

double pair_distance(const GroupedStudent& a, const GroupedStudent& b, const ScalingContext& scale) {
    const double g = scale.scale_gpa(std::abs(a.covariates.gpa - b.covariates.gpa));
    const double c = scale.scale_credits(std::abs(a.covariates.total_credits - b.covariates.total_credits));
    const double j = 1.0 - jaccard_sim(a.prior_to_x_courses, b.prior_to_x_courses);
    return std::sqrt(g * g + c * c + j * j) * kInvSqrt3;
}

std::string MatchedSample::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "treatment_id,control_id,distance\n";
    for (const auto& p : pairs)
        out << p.treatment.student_id << ',' << p.control.student_id << ',' << p.distance << '\n';
    return out.str();
}

namespace {

using Bits = std::vector<std::uint64_t>;

Bits to_bits(const std::vector<std::string>& courses, const std::map<std::string, std::size_t>& index,
             std::size_t words) {
    Bits b(words, 0);
    for (const auto& c : courses) {
        std::size_t i = index.at(c);
        b[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    return b;
}

double jaccard_bits(const Bits& a, const Bits& b) {
    std::size_t inter = 0, uni = 0;
    for (std::size_t w = 0; w < a.size(); ++w) {
        inter += static_cast<std::size_t>(std::popcount(a[w] & b[w]));
        uni += static_cast<std::size_t>(std::popcount(a[w] | b[w]));
    }
    return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace

CandidateSet::CandidateSet(std::vector<GroupedStudent> treatment, std::vector<GroupedStudent> control,
                           double max_cutoff)
    : treatment_(std::move(treatment)), control_(std::move(control)), max_cutoff_(max_cutoff) {
    if (treatment_.empty()) throw NotEstimable(Stage::Matching, "empty treatment arm");
    if (control_.empty()) throw NotEstimable(Stage::Matching, "empty control arm");
    if (treatment_.size() > std::numeric_limits<std::uint32_t>::max() ||
        control_.size() > std::numeric_limits<std::uint32_t>::max())
        throw ConfigError("arm too large for matching");

    auto by_id = [](const GroupedStudent& a, const GroupedStudent& b) { return a.student_id < b.student_id; };
    std::sort(treatment_.begin(), treatment_.end(), by_id);
    std::sort(control_.begin(), control_.end(), by_id);
    scale_ = ScalingContext::from_arms(treatment_, control_);

    std::map<std::string, std::size_t> index;
    for (const auto* arm : {&treatment_, &control_})
        for (const auto& s : *arm)
            for (const auto& c : s.prior_to_x_courses) index.emplace(c, 0);
    std::size_t next = 0;
    for (auto& [course, i] : index) i = next++;
    const std::size_t words = std::max<std::size_t>(1, (index.size() + 63) / 64);

    std::vector<Bits> tbits, cbits;
    for (const auto& s : treatment_) tbits.push_back(to_bits(s.prior_to_x_courses, index, words));
    for (const auto& s : control_) cbits.push_back(to_bits(s.prior_to_x_courses, index, words));

    for (std::uint32_t t = 0; t < treatment_.size(); ++t) {
        const auto& ts = treatment_[t].covariates;
        for (std::uint32_t c = 0; c < control_.size(); ++c) {
            const auto& cs = control_[c].covariates;
            const double g = scale_.scale_gpa(std::abs(ts.gpa - cs.gpa));
            const double cr = scale_.scale_credits(std::abs(ts.total_credits - cs.total_credits));
            const double j = 1.0 - jaccard_bits(tbits[t], cbits[c]);
            const double d = std::sqrt(g * g + cr * cr + j * j) * kInvSqrt3;
            if (d <= max_cutoff_) candidates_.push_back({d, t, c});
        }
    }
    // Arms are id-sorted, so index order is id order.
    std::sort(candidates_.begin(), candidates_.end(), [](const Candidate& a, const Candidate& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.t != b.t) return a.t < b.t;
        return a.c < b.c;
    });
}

MatchedSample CandidateSet::match(double cutoff) const {
    if (!(cutoff > 0.0 && cutoff <= 1.0)) throw ConfigError("cutoff must lie in (0, 1]");
    if (cutoff > max_cutoff_) throw ConfigError("cutoff exceeds the candidate set's bound");

    MatchedSample sample;
    sample.cutoff = cutoff;
    const std::size_t limit = std::min(treatment_.size(), control_.size());
    std::vector<bool> t_used(treatment_.size()), c_used(control_.size());
    for (const auto& cand : candidates_) {
        if (sample.pairs.size() == limit || cand.distance > cutoff) break;
        if (t_used[cand.t] || c_used[cand.c]) continue;
        t_used[cand.t] = true;
        c_used[cand.c] = true;
        sample.pairs.push_back({treatment_[cand.t], control_[cand.c], cand.distance});
    }
    if (sample.pairs.empty())
        throw NotEstimable(Stage::Matching, "no candidate pair within the cutoff");
    sample.unmatched_treatment_count = treatment_.size() - sample.pairs.size();
    sample.unmatched_control_count = control_.size() - sample.pairs.size();
    return sample;
}

MatchedSample greedy_match(std::vector<GroupedStudent> treatment, std::vector<GroupedStudent> control,
                           double cutoff) {
    if (!(cutoff > 0.0 && cutoff <= 1.0)) throw ConfigError("cutoff must lie in (0, 1]");
    return CandidateSet(std::move(treatment), std::move(control), cutoff).match(cutoff);
}

} // namespace coursecausal
