// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/error.hpp"
#include "coursecausal/matching.hpp"
#include "coursecausal/pairs.hpp"

#include "../fixtures.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

namespace cc = coursecausal;
using cc::Letter;
using fixtures::CohortBuilder;

namespace {

cc::CoursePair pair_of(const cc::Cohort& cohort, const std::string& y, const std::string& x) {
    return {y, x, cohort.label(), cc::collect_y_takers(cohort, y)};
}

cc::GroupedStudent student(const std::string& id, double gpa, double credits, std::vector<std::string> courses,
                           cc::Arm arm, double outcome = 3.0) {
    cc::GroupedStudent s;
    s.student_id = id;
    s.outcome = outcome;
    s.covariates.gpa = gpa;
    s.covariates.total_credits = credits;
    std::sort(courses.begin(), courses.end());
    s.covariates.prior_courses = courses;
    s.prior_to_x_courses = courses;
    s.arm = arm;
    return s;
}

const cc::GroupedStudent* find(const std::vector<cc::GroupedStudent>& v, const std::string& id) {
    for (const auto& s : v)
        if (s.student_id == id) return &s;
    return nullptr;
}

// Random arm with GPAs on a coarse lattice so distance ties occur.
std::vector<cc::GroupedStudent> random_arm(std::mt19937& rng, const char* prefix, int n, cc::Arm arm) {
    std::uniform_int_distribution<int> gpa(0, 8), credits(0, 6), coin(0, 2);
    std::vector<cc::GroupedStudent> out;
    for (int i = 0; i < n; ++i) {
        std::vector<std::string> courses;
        for (const char* c : {"a", "b", "c", "d", "e"})
            if (coin(rng) == 0) courses.push_back(c);
        out.push_back(student(fixtures::sid(prefix, i), gpa(rng) * 0.5, credits(rng) * 4.0, courses, arm));
    }
    return out;
}

// Independent distance: brute-force scaling over every cross pair, set-based Jaccard.
struct Oracle {
    double gmin = 1e300, gmax = -1e300, cmin = 1e300, cmax = -1e300;

    Oracle(const std::vector<cc::GroupedStudent>& t, const std::vector<cc::GroupedStudent>& c) {
        for (const auto& a : t)
            for (const auto& b : c) {
                const double g = std::abs(a.covariates.gpa - b.covariates.gpa);
                const double k = std::abs(a.covariates.total_credits - b.covariates.total_credits);
                gmin = std::min(gmin, g), gmax = std::max(gmax, g);
                cmin = std::min(cmin, k), cmax = std::max(cmax, k);
            }
    }

    static double scale(double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; }

    double distance(const cc::GroupedStudent& a, const cc::GroupedStudent& b) const {
        std::set<std::string> sa(a.prior_to_x_courses.begin(), a.prior_to_x_courses.end());
        std::set<std::string> sb(b.prior_to_x_courses.begin(), b.prior_to_x_courses.end());
        std::set<std::string> uni = sa;
        uni.insert(sb.begin(), sb.end());
        std::size_t inter = 0;
        for (const auto& x : sa) inter += sb.count(x);
        const double jac = uni.empty() ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni.size());
        const double g = scale(std::abs(a.covariates.gpa - b.covariates.gpa), gmin, gmax);
        const double k = scale(std::abs(a.covariates.total_credits - b.covariates.total_credits), cmin, cmax);
        const double j = 1.0 - jac;
        return std::sqrt(g * g + k * k + j * j) * (1.0 / std::sqrt(3.0));
    }
};

// Minimum-distance-first greedy over all candidate pairs.
std::vector<std::tuple<std::string, std::string, double>> brute_greedy(const std::vector<cc::GroupedStudent>& t,
                                                                       const std::vector<cc::GroupedStudent>& c,
                                                                       double cutoff) {
    Oracle o(t, c);
    std::vector<std::tuple<double, std::string, std::string>> all;
    for (const auto& a : t)
        for (const auto& b : c) all.emplace_back(o.distance(a, b), a.student_id, b.student_id);
    std::sort(all.begin(), all.end());
    std::set<std::string> used_t, used_c;
    std::vector<std::tuple<std::string, std::string, double>> out;
    for (const auto& [d, ti, ci] : all) {
        if (d > cutoff) break;
        if (used_t.count(ti) || used_c.count(ci)) continue;
        used_t.insert(ti);
        used_c.insert(ci);
        out.emplace_back(ti, ci, d);
    }
    return out;
}

} // namespace

TEST(BuildGroups, ArmAssignmentExamples) {
    CohortBuilder b;
    // term 2 = FALL 2011, term 4 = FALL 2012
    b.add("passB", "intro", 0, Letter::A).add("passB", "X", 2, Letter::B).add("passB", "Y", 4, Letter::A);
    b.add("gotC", "intro", 0, Letter::A).add("gotC", "X", 2, Letter::C).add("gotC", "Y", 4, Letter::B);
    b.add("same", "intro", 0, Letter::A).add("same", "X", 4, Letter::A).add("same", "Y", 4, Letter::B);
    b.add("never", "intro", 0, Letter::A).add("never", "Y", 4, Letter::C);
    b.add("after", "intro", 0, Letter::A).add("after", "Y", 4, Letter::C).add("after", "X", 5, Letter::A);
    b.add("firstterm", "Y", 0, Letter::B).add("firstterm", "X", 1, Letter::A);
    auto cohort = b.build();
    auto g = cc::build_groups(cohort, pair_of(cohort, "Y", "X"));

    ASSERT_EQ(g.treatment.size(), 1u);
    EXPECT_EQ(g.treatment[0].student_id, "passB");
    EXPECT_EQ(g.treatment[0].arm, cc::Arm::Treatment);
    EXPECT_DOUBLE_EQ(g.treatment[0].outcome, 4.0);
    EXPECT_NE(find(g.control, "gotC"), nullptr);
    EXPECT_NE(find(g.control, "never"), nullptr);
    EXPECT_NE(find(g.control, "after"), nullptr);
    EXPECT_EQ(find(g.control, "same"), nullptr);
    EXPECT_EQ(g.control.size(), 3u);
    EXPECT_EQ(g.excluded_same_term, 1u);
    EXPECT_EQ(g.excluded_no_prior, 1u);
}

TEST(BuildGroups, CovariatesAtYTermAndJaccardSetsPerArm) {
    CohortBuilder b;
    b.add("t", "a", 0, Letter::A, 4).add("t", "X", 1, Letter::B, 4).add("t", "b", 2, Letter::C, 4);
    b.add("t", "Y", 3, Letter::B);
    b.add("c", "a", 0, Letter::B, 4).add("c", "b", 1, Letter::B, 4).add("c", "Y", 3, Letter::D);
    auto cohort = b.build();
    auto g = cc::build_groups(cohort, pair_of(cohort, "Y", "X"));
    ASSERT_EQ(g.treatment.size(), 1u);
    ASSERT_EQ(g.control.size(), 1u);
    const auto& t = g.treatment[0];
    EXPECT_DOUBLE_EQ(t.covariates.gpa, 3.0);
    EXPECT_DOUBLE_EQ(t.covariates.total_credits, 12.0);
    EXPECT_EQ(t.covariates.prior_courses, (std::vector<std::string>{"X", "a", "b"}));
    EXPECT_EQ(t.prior_to_x_courses, (std::vector<std::string>{"a"}));
    EXPECT_EQ(g.control[0].prior_to_x_courses, (std::vector<std::string>{"a", "b"}));
    EXPECT_DOUBLE_EQ(g.control[0].outcome, 1.0);
}

TEST(BuildGroups, FailedThenPassedBeforeYIsTreatment) {
    CohortBuilder b;
    b.add("r", "a", 0, Letter::A).add("r", "X", 1, Letter::D).add("r", "m", 2, Letter::B);
    b.add("r", "X", 3, Letter::B).add("r", "Y", 4, Letter::B);
    b.add("c", "a", 0, Letter::A).add("c", "Y", 4, Letter::B);
    auto cohort = b.build();
    auto g = cc::build_groups(cohort, pair_of(cohort, "Y", "X"));
    ASSERT_EQ(g.treatment.size(), 1u);
    EXPECT_EQ(g.treatment[0].prior_to_x_courses, (std::vector<std::string>{"X", "a", "m"}));
}

TEST(BuildGroups, EmptyArmIsNotEstimable) {
    CohortBuilder b;
    b.add("c1", "a", 0, Letter::A).add("c1", "X", 1, Letter::F).add("c1", "Y", 2, Letter::B);
    b.add("c2", "a", 0, Letter::A).add("c2", "Y", 2, Letter::B);
    auto cohort = b.build();
    try {
        cc::build_groups(cohort, pair_of(cohort, "Y", "X"));
        FAIL();
    } catch (const cc::NotEstimable& e) {
        EXPECT_EQ(e.stage(), cc::Stage::Grouping);
        EXPECT_NE(e.reason().find("treatment"), std::string::npos);
    }
}

TEST(BuildGroups, BruteForceClassificationOfRandomRoster) {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> termd(0, 5), letter(0, 10), coin(0, 1);
    CohortBuilder b;
    struct Row {
        int x1 = -1, x2 = -1, y = -1, first = 99;
        Letter l1 = Letter::A, l2 = Letter::A;
    };
    std::map<std::string, Row> rows;
    for (int s = 0; s < 400; ++s) {
        const auto id = fixtures::sid("s", s);
        Row r;
        r.y = termd(rng);
        b.add(id, "Y", r.y, Letter::B);
        r.first = r.y;
        if (coin(rng)) {
            int t = termd(rng);
            if (t != r.y) b.add(id, "pre", t, Letter::B), r.first = std::min(r.first, t);
        }
        if (coin(rng)) {
            r.x1 = termd(rng);
            r.l1 = cc::kAllLetters[static_cast<std::size_t>(letter(rng))];
            b.add(id, "X", r.x1, r.l1);
            r.first = std::min(r.first, r.x1);
            int t2 = termd(rng);
            if (coin(rng) && t2 != r.x1) {
                r.x2 = t2;
                r.l2 = cc::kAllLetters[static_cast<std::size_t>(letter(rng))];
                b.add(id, "X", r.x2, r.l2);
                r.first = std::min(r.first, r.x2);
            }
        }
        rows[id] = r;
    }
    auto cohort = b.build();
    auto g = cc::build_groups(cohort, pair_of(cohort, "Y", "X"));
    std::size_t expect_t = 0, expect_c = 0;
    for (const auto& [id, r] : rows) {
        const bool no_prior = r.first >= r.y;
        const bool pass_before = (r.x1 >= 0 && r.x1 < r.y && cc::grade_points(r.l1) > 2.0) ||
                                 (r.x2 >= 0 && r.x2 < r.y && cc::grade_points(r.l2) > 2.0);
        const bool any_before = (r.x1 >= 0 && r.x1 < r.y) || (r.x2 >= 0 && r.x2 < r.y);
        const bool same = r.x1 == r.y || r.x2 == r.y;
        std::string arm = "excluded";
        if (!no_prior) {
            if (pass_before) arm = "T";
            else if (!any_before && same) arm = "excluded";
            else arm = "C";
        }
        if (arm == "T") {
            ++expect_t;
            EXPECT_NE(find(g.treatment, id), nullptr) << id;
        }
        if (arm == "C") {
            ++expect_c;
            EXPECT_NE(find(g.control, id), nullptr) << id;
        }
        if (arm == "excluded") {
            EXPECT_EQ(find(g.treatment, id), nullptr) << id;
            EXPECT_EQ(find(g.control, id), nullptr) << id;
        }
    }
    EXPECT_EQ(g.treatment.size(), expect_t);
    EXPECT_EQ(g.control.size(), expect_c);
}

TEST(Jaccard, Examples) {
    const std::vector<std::string> ab{"a", "b"}, bc{"b", "c"}, de{"d", "e"}, none;
    EXPECT_DOUBLE_EQ(cc::jaccard_sim(ab, ab), 1.0);
    EXPECT_DOUBLE_EQ(cc::jaccard_sim(ab, de), 0.0);
    EXPECT_DOUBLE_EQ(cc::jaccard_sim(ab, bc), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(cc::jaccard_sim(none, none), 1.0);
    EXPECT_DOUBLE_EQ(cc::jaccard_sim(none, ab), 0.0);
}

TEST(Jaccard, EnumerationOracle) {
    // Every pair of subsets of a 4-element universe against direct counting.
    const std::vector<std::string> u{"a", "b", "c", "d"};
    for (unsigned m1 = 0; m1 < 16; ++m1)
        for (unsigned m2 = 0; m2 < 16; ++m2) {
            std::vector<std::string> s1, s2;
            int inter = 0, uni = 0;
            for (unsigned i = 0; i < 4; ++i) {
                const bool in1 = m1 & (1u << i), in2 = m2 & (1u << i);
                if (in1) s1.push_back(u[i]);
                if (in2) s2.push_back(u[i]);
                inter += in1 && in2;
                uni += in1 || in2;
            }
            const double expected = uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
            EXPECT_DOUBLE_EQ(cc::jaccard_sim(s1, s2), expected);
        }
}

TEST(Distance, Examples) {
    cc::ScalingContext flat; // degenerate ranges: g = c = 0
    auto a = student("a", 3.0, 30, {"a", "b"}, cc::Arm::Treatment);
    auto b = student("b", 3.0, 30, {"b", "c"}, cc::Arm::Control);
    EXPECT_NEAR(cc::pair_distance(a, b, flat), (2.0 / 3.0) / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(cc::pair_distance(a, b, flat), 0.3849, 5e-5);
    EXPECT_DOUBLE_EQ(cc::pair_distance(a, a, flat), 0.0);

    std::vector<cc::GroupedStudent> t{student("t1", 4.0, 60, {"x"}, cc::Arm::Treatment),
                                      student("t2", 2.0, 30, {"y"}, cc::Arm::Treatment)};
    std::vector<cc::GroupedStudent> c{student("c1", 0.0, 0, {"z"}, cc::Arm::Control),
                                      student("c2", 2.0, 30, {"y"}, cc::Arm::Control)};
    auto scale = cc::ScalingContext::from_arms(t, c);
    EXPECT_DOUBLE_EQ(scale.gpa_min, 0.0);
    EXPECT_DOUBLE_EQ(scale.gpa_max, 4.0);
    EXPECT_DOUBLE_EQ(scale.credit_max, 60.0);
    EXPECT_NEAR(cc::pair_distance(t[0], c[0], scale), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(cc::pair_distance(t[1], c[1], scale), 0.0);
}

TEST(Distance, ScalingRangeMatchesBruteForce) {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        auto t = random_arm(rng, "t", 7, cc::Arm::Treatment);
        auto c = random_arm(rng, "c", 9, cc::Arm::Control);
        Oracle o(t, c);
        auto s = cc::ScalingContext::from_arms(t, c);
        EXPECT_DOUBLE_EQ(s.gpa_min, o.gmin);
        EXPECT_DOUBLE_EQ(s.gpa_max, o.gmax);
        EXPECT_DOUBLE_EQ(s.credit_min, o.cmin);
        EXPECT_DOUBLE_EQ(s.credit_max, o.cmax);
    }
}

TEST(Distance, SymmetricZeroOnSelfAndBoundedProperty) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        auto t = random_arm(rng, "t", 6, cc::Arm::Treatment);
        auto c = random_arm(rng, "c", 6, cc::Arm::Control);
        auto s = cc::ScalingContext::from_arms(t, c);
        for (const auto& a : t)
            for (const auto& b : c) {
                const double d = cc::pair_distance(a, b, s);
                EXPECT_EQ(d, cc::pair_distance(b, a, s));
                EXPECT_GE(d, 0.0);
                EXPECT_LE(d, 1.0);
            }
        for (const auto& a : t) EXPECT_EQ(cc::pair_distance(a, a, s), 0.0);
    }
}

TEST(GreedyMatch, SingleCandidate) {
    // Flat GPA and credits; Jaccard {a,b,c} vs {a,b,c,d} = 3/4, distance = 0.25/sqrt(3) ~ 0.144.
    std::vector<cc::GroupedStudent> t{student("t", 3.0, 30, {"a", "b", "c"}, cc::Arm::Treatment)};
    std::vector<cc::GroupedStudent> c{student("c", 3.0, 30, {"a", "b", "c", "d"}, cc::Arm::Control)};
    auto m = cc::greedy_match(t, c, 0.5);
    ASSERT_EQ(m.pairs.size(), 1u);
    EXPECT_NEAR(m.pairs[0].distance, 0.25 / std::sqrt(3.0), 1e-15);
    EXPECT_EQ(m.unmatched_treatment_count, 0u);
    EXPECT_EQ(m.unmatched_control_count, 0u);
    EXPECT_EQ(m.to_csv().substr(0, 33), "treatment_id,control_id,distance\n");
}

TEST(GreedyMatch, EverythingBeyondCutoffIsNotEstimable) {
    std::vector<cc::GroupedStudent> t{student("t", 3.0, 30, {"a"}, cc::Arm::Treatment)};
    std::vector<cc::GroupedStudent> c{student("c", 3.0, 30, {"b"}, cc::Arm::Control)};
    try {
        cc::greedy_match(t, c, 0.5); // distance 1/sqrt(3) ~ 0.577
        FAIL();
    } catch (const cc::NotEstimable& e) {
        EXPECT_EQ(e.stage(), cc::Stage::Matching);
    }
    EXPECT_EQ(cc::greedy_match(t, c, 0.6).pairs.size(), 1u);
}

TEST(GreedyMatch, CutoffOutsideUnitIntervalRejected) {
    std::vector<cc::GroupedStudent> t{student("t", 3.0, 30, {"a"}, cc::Arm::Treatment)};
    std::vector<cc::GroupedStudent> c{student("c", 3.0, 30, {"a"}, cc::Arm::Control)};
    EXPECT_THROW(cc::greedy_match(t, c, 0.0), cc::ConfigError);
    EXPECT_THROW(cc::greedy_match(t, c, 1.5), cc::ConfigError);
    EXPECT_THROW(cc::greedy_match({}, c, 0.5), cc::NotEstimable);
}

TEST(GreedyMatch, HandBuiltThreeByThree) {
    // GPA and credits flat, so only the Jaccard term varies. Pairwise distances
    // (times sqrt(3)):        c1{a,b}  c2{a,c}  c3{d}
    //   t1{a,b}                 0       2/3      1
    //   t2{a}                  1/2      1/2      1
    //   t3{d,e}                 1        1      1/2
    // Minimum-first greedy: (t1,c1) 0, then (t2,c2) 1/2 (c1 taken), then (t3,c3) 1/2.
    std::vector<cc::GroupedStudent> t{student("t1", 3, 30, {"a", "b"}, cc::Arm::Treatment),
                                      student("t2", 3, 30, {"a"}, cc::Arm::Treatment),
                                      student("t3", 3, 30, {"d", "e"}, cc::Arm::Treatment)};
    std::vector<cc::GroupedStudent> c{student("c1", 3, 30, {"a", "b"}, cc::Arm::Control),
                                      student("c2", 3, 30, {"a", "c"}, cc::Arm::Control),
                                      student("c3", 3, 30, {"d"}, cc::Arm::Control)};
    auto m = cc::greedy_match(t, c, 1.0);
    ASSERT_EQ(m.pairs.size(), 3u);
    EXPECT_EQ(m.pairs[0].treatment.student_id, "t1");
    EXPECT_EQ(m.pairs[0].control.student_id, "c1");
    EXPECT_EQ(m.pairs[1].treatment.student_id, "t2");
    EXPECT_EQ(m.pairs[1].control.student_id, "c2");
    EXPECT_EQ(m.pairs[2].treatment.student_id, "t3");
    EXPECT_EQ(m.pairs[2].control.student_id, "c3");
    EXPECT_EQ(brute_greedy(t, c, 1.0).size(), 3u);
    // A cutoff of 0.2 admits only the exact match.
    EXPECT_EQ(cc::greedy_match(t, c, 0.2).pairs.size(), 1u);
}

TEST(GreedyMatch, EqualsBruteForceGreedyOnRandomInstances) {
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> cut(0.05, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto t = random_arm(rng, "t", 8, cc::Arm::Treatment);
        auto c = random_arm(rng, "c", 8, cc::Arm::Control);
        const double cutoff = cut(rng);
        auto expected = brute_greedy(t, c, cutoff);
        if (expected.empty()) {
            EXPECT_THROW(cc::greedy_match(t, c, cutoff), cc::NotEstimable);
            continue;
        }
        auto m = cc::greedy_match(t, c, cutoff);
        ASSERT_EQ(m.pairs.size(), expected.size()) << "trial " << trial;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            EXPECT_EQ(m.pairs[i].treatment.student_id, std::get<0>(expected[i]));
            EXPECT_EQ(m.pairs[i].control.student_id, std::get<1>(expected[i]));
            EXPECT_NEAR(m.pairs[i].distance, std::get<2>(expected[i]), 1e-12);
            EXPECT_LE(m.pairs[i].distance, cutoff);
        }
    }
}

TEST(GreedyMatch, InvariantToInputOrderProperty) {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        auto t = random_arm(rng, "t", 10, cc::Arm::Treatment);
        auto c = random_arm(rng, "c", 7, cc::Arm::Control);
        auto base = cc::greedy_match(t, c, 1.0);
        std::shuffle(t.begin(), t.end(), rng);
        std::shuffle(c.begin(), c.end(), rng);
        auto again = cc::greedy_match(t, c, 1.0);
        EXPECT_EQ(base.to_csv(), again.to_csv());
    }
}

TEST(GreedyMatch, MonotoneInCutoffAndDisjointProperty) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        auto t = random_arm(rng, "t", 12, cc::Arm::Treatment);
        auto c = random_arm(rng, "c", 9, cc::Arm::Control);
        cc::CandidateSet set(t, c, 1.0);
        std::size_t prev = 0;
        for (double cutoff = 0.05; cutoff <= 1.0; cutoff += 0.05) {
            std::size_t n = 0;
            try {
                auto m = set.match(cutoff);
                n = m.pairs.size();
                EXPECT_LE(n, std::min(t.size(), c.size()));
                std::set<std::string> ids;
                for (const auto& p : m.pairs) {
                    EXPECT_TRUE(ids.insert(p.treatment.student_id).second);
                    EXPECT_TRUE(ids.insert(p.control.student_id).second);
                    EXPECT_LE(p.distance, cutoff);
                }
                EXPECT_EQ(m.unmatched_treatment_count + n, t.size());
                EXPECT_EQ(m.unmatched_control_count + n, c.size());
            } catch (const cc::NotEstimable&) {
            }
            EXPECT_GE(n, prev);
            prev = n;
        }
    }
}

TEST(CandidateSet, SharedSetMatchesFreshMatching) {
    std::mt19937 rng(8);
    auto t = random_arm(rng, "t", 10, cc::Arm::Treatment);
    auto c = random_arm(rng, "c", 10, cc::Arm::Control);
    cc::CandidateSet set(t, c, 0.9);
    for (double cutoff : {0.3, 0.5, 0.9})
        EXPECT_EQ(set.match(cutoff).to_csv(), cc::greedy_match(t, c, cutoff).to_csv());
    EXPECT_THROW(set.match(0.95), cc::ConfigError);
}
