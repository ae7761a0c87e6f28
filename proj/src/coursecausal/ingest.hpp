// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "coursecausal/domain.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace coursecausal {

struct CohortRange {
    std::string label;
    Term start;
    Term end; // inclusive
};

struct IngestConfig {
    bool graduated_only = true;
    bool drop_summer = true;
    int min_consecutive_terms = 2;
    std::optional<std::string> allowed_department_prefix;
    std::set<std::string> excluded_courses;
    std::vector<CohortRange> cohort_boundaries;

    /// Throws ConfigError if the cohort ranges are empty, inverted, unordered or overlapping.
    void validate_cohorts() const;
};

enum class RejectReason {
    FieldCount,
    MissingId,
    BadTerm,
    SummerTerm,
    NonLetterGrade,
    BadCredits,
    NegativeCredits,
    OtherDepartment,
    ExcludedCourse,
    DuplicateTaking,
};

std::string_view reject_reason_text(RejectReason reason) noexcept;

struct RowReject {
    std::size_t line = 0; // 1-based, header is line 1
    RejectReason reason = RejectReason::FieldCount;
    std::string detail;
};

struct ParseResult {
    std::vector<TranscriptRecord> records;
    std::vector<RowReject> rejects;
    std::size_t data_rows = 0;
};

/// Parses a `student_id,course_id,term,grade,credits` CSV. Row-level problems land in
/// `rejects`; a missing header or an unknown/missing column throws IngestError.
ParseResult parse_transcripts(std::istream& csv, const IngestConfig& config);
ParseResult parse_transcripts(std::string_view csv, const IngestConfig& config);

/// One student id per line; blank lines ignored.
std::set<std::string> parse_roster(std::istream& in);
std::set<std::string> parse_roster(std::string_view text);

enum class DropReason { NotInRoster, TooFewConsecutiveTerms };

std::string_view drop_reason_text(DropReason reason) noexcept;

struct DroppedStudent {
    std::string student_id;
    DropReason reason;
};

struct FilterResult {
    std::vector<StudentHistory> histories; // ordered by student_id
    std::vector<DroppedStudent> dropped;
};

/// Longest run of adjacent Fall/Spring terms that contain at least one taking.
int longest_consecutive_run(const std::vector<Taking>& takings);

FilterResult apply_student_filters(const std::vector<TranscriptRecord>& records,
                                   const std::set<std::string>& degree_roster,
                                   const IngestConfig& config);

class Cohort {
public:
    Cohort() = default;
    Cohort(CohortRange range, std::vector<StudentHistory> histories);

    const std::string& label() const noexcept { return range_.label; }
    const CohortRange& range() const noexcept { return range_; }
    const std::vector<StudentHistory>& histories() const noexcept { return histories_; }
    std::size_t size() const noexcept { return histories_.size(); }

    /// All distinct course ids in the cohort, sorted.
    std::vector<std::string> courses() const;

private:
    CohortRange range_;
    std::vector<StudentHistory> histories_;
};

/// Assigns each history to the cohort holding its first term and trims takings outside it.
std::vector<Cohort> split_cohorts(const std::vector<StudentHistory>& histories,
                                  const IngestConfig& config);

} // namespace coursecausal
