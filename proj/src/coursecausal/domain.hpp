// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coursecausal {

enum class Season { Spring = 0, Summer = 1, Fall = 2 };

/// An academic term. Ordered by 3*year + season offset.
struct Term {
    int year = 0;
    Season season = Season::Spring;

    constexpr int ordinal() const noexcept { return 3 * year + static_cast<int>(season); }

    /// Position in the Fall/Spring sequence; adjacent regular terms differ by one.
    /// Summer shares the index of the preceding spring.
    constexpr int academic_index() const noexcept {
        return 2 * year + (season == Season::Fall ? 1 : 0);
    }

    friend constexpr bool operator==(const Term& a, const Term& b) noexcept {
        return a.ordinal() == b.ordinal();
    }
    friend constexpr std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
        return a.ordinal() <=> b.ordinal();
    }

    /// Parses "SEASON YYYY" (season case-insensitive). Returns nullopt on malformed text.
    static std::optional<Term> parse(std::string_view text);
    std::string to_string() const;
};

/// The next regular (Fall/Spring) term after `t`.
Term next_regular_term(Term t) noexcept;

enum class Letter { A, AMinus, BPlus, B, BMinus, CPlus, C, CMinus, DPlus, D, F };

inline constexpr std::array<Letter, 11> kAllLetters = {
    Letter::A, Letter::AMinus, Letter::BPlus, Letter::B, Letter::BMinus, Letter::CPlus,
    Letter::C, Letter::CMinus, Letter::DPlus, Letter::D, Letter::F};

/// Points on the 4.0 scale with third steps.
double grade_points(Letter letter) noexcept;

/// Throws std::invalid_argument naming the token when it is not one of the 11 letters.
double grade_points(std::string_view letter);

std::string_view letter_text(Letter letter) noexcept;

/// Grade threshold for "above a C": strictly greater than this value.
inline constexpr double kCPoints = 2.0;

class Grade {
public:
    constexpr explicit Grade(Letter letter) noexcept : letter_(letter) {}

    static std::optional<Grade> parse(std::string_view token);

    /// Nearest letter grade to a raw point value; exact midpoints round upward.
    static Grade nearest(double points) noexcept;

    Letter letter() const noexcept { return letter_; }
    double points() const noexcept { return grade_points(letter_); }
    std::string_view text() const noexcept { return letter_text(letter_); }
    bool above_c() const noexcept { return points() > kCPoints; }
    bool below_c() const noexcept { return points() < kCPoints; }

    friend bool operator==(const Grade&, const Grade&) = default;

private:
    Letter letter_;
};

struct TranscriptRecord {
    std::string student_id;
    std::string course_id;
    Term term;
    Grade grade{Letter::F};
    double credits = 0.0;
};

struct Taking {
    std::string course_id;
    Term term;
    Grade grade{Letter::F};
    double credits = 0.0;
};

/// A student's takings, ordered by (term, course_id).
class StudentHistory {
public:
    StudentHistory() = default;
    StudentHistory(std::string student_id, std::vector<Taking> takings);

    const std::string& student_id() const noexcept { return student_id_; }
    const std::vector<Taking>& takings() const noexcept { return takings_; }
    bool empty() const noexcept { return takings_.empty(); }
    Term first_term() const { return takings_.front().term; }

    /// First taking of `course_id`, or nullptr.
    const Taking* first_attempt(std::string_view course_id) const noexcept;

    /// True if any taking has a term strictly before `t`.
    bool has_taking_before(Term t) const noexcept;

private:
    std::string student_id_;
    std::vector<Taking> takings_;
};

struct CovariateVector {
    double gpa = 0.0;
    double total_credits = 0.0;
    std::vector<std::string> prior_courses; // sorted, unique
};

/// GPA, credits and course set over takings strictly before `reference`.
CovariateVector covariates_at(const StudentHistory& history, Term reference);

/// Sorted unique course ids of takings strictly before `reference`.
std::vector<std::string> courses_before(const StudentHistory& history, Term reference);

} // namespace coursecausal
