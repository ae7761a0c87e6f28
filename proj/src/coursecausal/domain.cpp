// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/domain.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace coursecausal {

namespace {

struct LetterEntry {
    Letter letter;
    std::string_view text;
    double points;
};

constexpr std::array<LetterEntry, 11> kLetterTable = {{
    {Letter::A, "A", 4.000},
    {Letter::AMinus, "A-", 3.667},
    {Letter::BPlus, "B+", 3.333},
    {Letter::B, "B", 3.000},
    {Letter::BMinus, "B-", 2.667},
    {Letter::CPlus, "C+", 2.333},
    {Letter::C, "C", 2.000},
    {Letter::CMinus, "C-", 1.667},
    {Letter::DPlus, "D+", 1.333},
    {Letter::D, "D", 1.000},
    {Letter::F, "F", 0.000},
}};

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

std::optional<Term> Term::parse(std::string_view text) {
    text = trim(text);
    auto space = text.find_first_of(" \t");
    if (space == std::string_view::npos) return std::nullopt;
    std::string season = upper(text.substr(0, space));
    std::string_view year_text = trim(text.substr(space + 1));

    Term t;
    if (season == "SPRING") t.season = Season::Spring;
    else if (season == "SUMMER") t.season = Season::Summer;
    else if (season == "FALL") t.season = Season::Fall;
    else return std::nullopt;

    if (year_text.size() != 4) return std::nullopt;
    auto [ptr, ec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), t.year);
    if (ec != std::errc{} || ptr != year_text.data() + year_text.size()) return std::nullopt;
    return t;
}

std::string Term::to_string() const {
    const char* name = season == Season::Spring ? "SPRING" : season == Season::Summer ? "SUMMER" : "FALL";
    return std::string(name) + " " + std::to_string(year);
}

Term next_regular_term(Term t) noexcept {
    if (t.season == Season::Fall) return Term{t.year + 1, Season::Spring};
    return Term{t.year, Season::Fall};
}

double grade_points(Letter letter) noexcept {
    return kLetterTable[static_cast<std::size_t>(letter)].points;
}

double grade_points(std::string_view letter) {
    auto g = Grade::parse(letter);
    if (!g) throw std::invalid_argument("unknown grade letter '" + std::string(letter) + "'");
    return g->points();
}

std::string_view letter_text(Letter letter) noexcept {
    return kLetterTable[static_cast<std::size_t>(letter)].text;
}

std::optional<Grade> Grade::parse(std::string_view token) {
    std::string t = upper(trim(token));
    for (const auto& e : kLetterTable)
        if (e.text == t) return Grade(e.letter);
    return std::nullopt;
}

Grade Grade::nearest(double points) noexcept {
    // Table is ordered high to low; ties go to the higher grade because it is visited first.
    const LetterEntry* best = &kLetterTable.front();
    double best_gap = std::abs(points - best->points);
    for (const auto& e : kLetterTable) {
        double gap = std::abs(points - e.points);
        if (gap < best_gap) {
            best = &e;
            best_gap = gap;
        }
    }
    return Grade(best->letter);
}

StudentHistory::StudentHistory(std::string student_id, std::vector<Taking> takings)
    : student_id_(std::move(student_id)), takings_(std::move(takings)) {
    std::sort(takings_.begin(), takings_.end(), [](const Taking& a, const Taking& b) {
        if (a.term != b.term) return a.term < b.term;
        return a.course_id < b.course_id;
    });
    auto dup = std::adjacent_find(takings_.begin(), takings_.end(), [](const Taking& a, const Taking& b) {
        return a.term == b.term && a.course_id == b.course_id;
    });
    if (dup != takings_.end())
        throw std::invalid_argument("duplicate taking of " + dup->course_id + " in " +
                                    dup->term.to_string() + " for student " + student_id_);
}

const Taking* StudentHistory::first_attempt(std::string_view course_id) const noexcept {
    for (const auto& t : takings_)
        if (t.course_id == course_id) return &t;
    return nullptr;
}

bool StudentHistory::has_taking_before(Term t) const noexcept {
    return !takings_.empty() && takings_.front().term < t;
}

std::vector<std::string> courses_before(const StudentHistory& history, Term reference) {
    std::vector<std::string> out;
    for (const auto& t : history.takings()) {
        if (!(t.term < reference)) break;
        out.push_back(t.course_id);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CovariateVector covariates_at(const StudentHistory& history, Term reference) {
    CovariateVector cv;
    double weighted = 0.0;
    for (const auto& t : history.takings()) {
        if (!(t.term < reference)) break;
        weighted += t.grade.points() * t.credits;
        cv.total_credits += t.credits;
    }
    if (cv.total_credits > 0.0) cv.gpa = std::clamp(weighted / cv.total_credits, 0.0, 4.0);
    cv.prior_courses = courses_before(history, reference);
    return cv;
}

} // namespace coursecausal
