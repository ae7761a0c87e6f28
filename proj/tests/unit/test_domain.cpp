// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/domain.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

namespace cc = coursecausal;
using cc::Letter;
using cc::Season;
using cc::Term;

namespace {

cc::Taking take(const char* course, Term term, Letter letter, double credits) {
    return cc::Taking{course, term, cc::Grade(letter), credits};
}

} // namespace

TEST(Term, OrdinalAndOrder) {
    EXPECT_EQ((Term{2011, Season::Spring}).ordinal(), 6033);
    EXPECT_EQ((Term{2011, Season::Summer}).ordinal(), 6034);
    EXPECT_EQ((Term{2011, Season::Fall}).ordinal(), 6035);
    EXPECT_LT((Term{2011, Season::Fall}), (Term{2012, Season::Spring}));
    EXPECT_LT((Term{2012, Season::Spring}), (Term{2012, Season::Summer}));
    EXPECT_EQ((Term{2012, Season::Fall}), (Term{2012, Season::Fall}));
    EXPECT_NE((Term{2012, Season::Fall}), (Term{2013, Season::Fall}));
}

TEST(Term, ParseAndPrint) {
    auto t = Term::parse("fall 2011");
    ASSERT_TRUE(t);
    EXPECT_EQ(*t, (Term{2011, Season::Fall}));
    EXPECT_EQ(t->to_string(), "FALL 2011");
    EXPECT_EQ(Term::parse("Summer 2003")->season, Season::Summer);
    EXPECT_EQ(Term::parse("SPRING 2016")->year, 2016);
    EXPECT_FALSE(Term::parse("WINTER 2011"));
    EXPECT_FALSE(Term::parse("FALL"));
    EXPECT_FALSE(Term::parse("FALL 20x1"));
    EXPECT_FALSE(Term::parse(""));
}

TEST(Term, SortingAnyPermutationGivesOneSequence) {
    std::vector<Term> terms;
    for (int y = 2009; y <= 2012; ++y)
        for (auto s : {Season::Spring, Season::Summer, Season::Fall}) terms.push_back({y, s});
    const auto canonical = terms;
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto shuffled = terms;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::sort(shuffled.begin(), shuffled.end());
        EXPECT_EQ(shuffled, canonical);
    }
}

TEST(Term, NextRegularTermSkipsSummer) {
    EXPECT_EQ(cc::next_regular_term({2011, Season::Fall}), (Term{2012, Season::Spring}));
    EXPECT_EQ(cc::next_regular_term({2012, Season::Spring}), (Term{2012, Season::Fall}));
    EXPECT_EQ(cc::next_regular_term({2012, Season::Summer}), (Term{2012, Season::Fall}));
}

TEST(GradePoints, AnchorValues) {
    EXPECT_DOUBLE_EQ(cc::grade_points(Letter::A), 4.0);
    EXPECT_DOUBLE_EQ(cc::grade_points(Letter::C), 2.0);
    EXPECT_NEAR(cc::grade_points(Letter::BMinus), 2.667, 1e-12);
    EXPECT_DOUBLE_EQ(cc::grade_points("B-"), cc::grade_points(Letter::BMinus));
    EXPECT_DOUBLE_EQ(cc::grade_points(Letter::F), 0.0);
}

TEST(GradePoints, StrictlyDecreasingAlongTheScale) {
    for (std::size_t i = 1; i < cc::kAllLetters.size(); ++i)
        EXPECT_GT(cc::grade_points(cc::kAllLetters[i - 1]), cc::grade_points(cc::kAllLetters[i]));
}

TEST(GradePoints, ThirdsStepTable) {
    // Independent construction: each letter is one third of a point below the previous,
    // rounded to three decimals, with no E between D and F.
    const double expected[] = {4.0, 3.667, 3.333, 3.0, 2.667, 2.333, 2.0, 1.667, 1.333, 1.0, 0.0};
    for (std::size_t i = 0; i < cc::kAllLetters.size(); ++i)
        EXPECT_NEAR(cc::grade_points(cc::kAllLetters[i]), expected[i], 1e-12);
}

TEST(GradePoints, UnknownLetterNamesTheToken) {
    try {
        cc::grade_points("W");
        FAIL() << "expected rejection";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("'W'"), std::string::npos);
    }
    EXPECT_THROW(cc::grade_points("E"), std::invalid_argument);
    EXPECT_THROW(cc::grade_points(""), std::invalid_argument);
}

TEST(Grade, ParseTokens) {
    for (auto l : cc::kAllLetters) {
        auto g = cc::Grade::parse(cc::letter_text(l));
        ASSERT_TRUE(g);
        EXPECT_EQ(g->letter(), l);
    }
    EXPECT_FALSE(cc::Grade::parse("P"));
    EXPECT_FALSE(cc::Grade::parse("S"));
    EXPECT_FALSE(cc::Grade::parse("A+"));
}

TEST(Grade, CThresholdIsStrict) {
    EXPECT_FALSE(cc::Grade(Letter::C).above_c());
    EXPECT_FALSE(cc::Grade(Letter::C).below_c());
    EXPECT_TRUE(cc::Grade(Letter::CPlus).above_c());
    EXPECT_TRUE(cc::Grade(Letter::CMinus).below_c());
}

TEST(Grade, NearestSnapsToLatticeAndRoundsTiesUp) {
    EXPECT_EQ(cc::Grade::nearest(4.7).letter(), Letter::A);
    EXPECT_EQ(cc::Grade::nearest(-1.0).letter(), Letter::F);
    EXPECT_EQ(cc::Grade::nearest(3.0).letter(), Letter::B);
    EXPECT_EQ(cc::Grade::nearest(3.1).letter(), Letter::B);
    EXPECT_EQ(cc::Grade::nearest(0.5).letter(), Letter::D); // midpoint of F and D
    EXPECT_EQ(cc::Grade::nearest(0.49).letter(), Letter::F);
    const double mid = (cc::grade_points(Letter::B) + cc::grade_points(Letter::BPlus)) / 2.0;
    EXPECT_EQ(cc::Grade::nearest(mid).letter(), Letter::BPlus);
    for (double x = 0.0; x <= 4.0; x += 0.01) {
        const double p = cc::Grade::nearest(x).points();
        for (auto l : cc::kAllLetters) EXPECT_LE(std::abs(p - x), std::abs(cc::grade_points(l) - x) + 1e-12);
    }
}

TEST(StudentHistory, SortsByTermThenCourse) {
    cc::StudentHistory h("s1", {take("c2", {2012, Season::Spring}, Letter::A, 3),
                                take("c9", {2011, Season::Fall}, Letter::B, 3),
                                take("c1", {2012, Season::Spring}, Letter::C, 3)});
    ASSERT_EQ(h.takings().size(), 3u);
    EXPECT_EQ(h.takings()[0].course_id, "c9");
    EXPECT_EQ(h.takings()[1].course_id, "c1");
    EXPECT_EQ(h.takings()[2].course_id, "c2");
    EXPECT_EQ(h.first_term(), (Term{2011, Season::Fall}));
}

TEST(StudentHistory, RetakesKeptDuplicatesRejected) {
    cc::StudentHistory h("s1", {take("c1", {2011, Season::Fall}, Letter::D, 3),
                                take("c1", {2012, Season::Spring}, Letter::A, 3)});
    EXPECT_EQ(h.takings().size(), 2u);
    ASSERT_NE(h.first_attempt("c1"), nullptr);
    EXPECT_EQ(h.first_attempt("c1")->grade.letter(), Letter::D);
    EXPECT_EQ(h.first_attempt("c7"), nullptr);
    EXPECT_THROW(cc::StudentHistory("s1", {take("c1", {2011, Season::Fall}, Letter::D, 3),
                                           take("c1", {2011, Season::Fall}, Letter::A, 3)}),
                 std::invalid_argument);
}

TEST(Covariates, EmptyHistoryIsZero) {
    cc::StudentHistory h("s1", {});
    auto cv = cc::covariates_at(h, {2012, Season::Fall});
    EXPECT_EQ(cv.gpa, 0.0);
    EXPECT_EQ(cv.total_credits, 0.0);
    EXPECT_TRUE(cv.prior_courses.empty());
}

TEST(Covariates, NothingBeforeReferenceIsZero) {
    cc::StudentHistory h("s1", {take("c1", {2012, Season::Fall}, Letter::A, 4)});
    auto cv = cc::covariates_at(h, {2012, Season::Fall});
    EXPECT_EQ(cv.gpa, 0.0);
    EXPECT_EQ(cv.total_credits, 0.0);
    EXPECT_TRUE(cv.prior_courses.empty());
}

TEST(Covariates, CreditWeightedMean) {
    cc::StudentHistory h("s1", {take("c1", {2011, Season::Fall}, Letter::A, 4),
                                take("c2", {2012, Season::Spring}, Letter::B, 4),
                                take("c3", {2012, Season::Fall}, Letter::F, 4)});
    auto cv = cc::covariates_at(h, {2012, Season::Fall});
    EXPECT_DOUBLE_EQ(cv.gpa, (4 * 4.0 + 4 * 3.0) / 8.0);
    EXPECT_DOUBLE_EQ(cv.total_credits, 8.0);
    EXPECT_EQ(cv.prior_courses, (std::vector<std::string>{"c1", "c2"}));
}

TEST(Covariates, UnequalCreditsAndRetakes) {
    cc::StudentHistory h("s1", {take("c1", {2011, Season::Fall}, Letter::D, 3),
                                take("c2", {2011, Season::Fall}, Letter::A, 1),
                                take("c1", {2012, Season::Spring}, Letter::B, 3)});
    auto cv = cc::covariates_at(h, {2013, Season::Spring});
    EXPECT_NEAR(cv.gpa, (3 * 1.0 + 1 * 4.0 + 3 * 3.0) / 7.0, 1e-12);
    EXPECT_DOUBLE_EQ(cv.total_credits, 7.0);
    EXPECT_EQ(cv.prior_courses, (std::vector<std::string>{"c1", "c2"}));
}

TEST(Covariates, ZeroCreditTakingsCountAsPriorCourses) {
    cc::StudentHistory h("s1", {take("seminar", {2011, Season::Fall}, Letter::A, 0)});
    auto cv = cc::covariates_at(h, {2012, Season::Spring});
    EXPECT_EQ(cv.gpa, 0.0);
    EXPECT_EQ(cv.prior_courses, (std::vector<std::string>{"seminar"}));
}

TEST(Covariates, MonotoneInReferenceTermProperty) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> course(0, 9), letter(0, 10), credits(0, 4), term(0, 11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<cc::Taking> takings;
        std::set<std::pair<int, int>> used;
        for (int i = 0; i < 12; ++i) {
            const int c = course(rng), t = term(rng);
            if (!used.insert({c, t}).second) continue;
            takings.push_back(take(("c" + std::to_string(c)).c_str(), {2010 + t / 3, static_cast<Season>(t % 3)},
                                   cc::kAllLetters[static_cast<std::size_t>(letter(rng))], credits(rng)));
        }
        cc::StudentHistory h("s", takings);
        cc::CovariateVector prev;
        for (int t = 0; t <= 13; ++t) {
            auto cv = cc::covariates_at(h, {2010 + t / 3, static_cast<Season>(t % 3)});
            EXPECT_GE(cv.total_credits, prev.total_credits);
            EXPECT_TRUE(std::includes(cv.prior_courses.begin(), cv.prior_courses.end(), prev.prior_courses.begin(),
                                      prev.prior_courses.end()));
            EXPECT_GE(cv.gpa, 0.0);
            EXPECT_LE(cv.gpa, 4.0);
            EXPECT_EQ(cv.prior_courses, cc::courses_before(h, {2010 + t / 3, static_cast<Season>(t % 3)}));
            prev = cv;
        }
    }
}
