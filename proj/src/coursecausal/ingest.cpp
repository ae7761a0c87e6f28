// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/ingest.hpp"

#include "coursecausal/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <tuple>
#include <sstream>

namespace coursecausal {

namespace {

constexpr std::array<std::string_view, 5> kColumns = {"student_id", "course_id", "term", "grade",
                                                      "credits"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// RFC 4180 style split of a single physical line.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.emplace_back(trim(cur));
    return fields;
}

std::optional<double> parse_decimal(std::string_view text) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

} // namespace

void IngestConfig::validate_cohorts() const {
    if (cohort_boundaries.empty()) throw ConfigError("no cohort boundaries configured");
    for (std::size_t i = 0; i < cohort_boundaries.size(); ++i) {
        const auto& r = cohort_boundaries[i];
        if (r.end < r.start)
            throw ConfigError("cohort '" + r.label + "' ends before it starts");
        if (i > 0) {
            const auto& prev = cohort_boundaries[i - 1];
            if (!(prev.end < r.start))
                throw ConfigError("cohort '" + r.label + "' overlaps or precedes cohort '" +
                                  prev.label + "'");
        }
    }
}

std::string_view reject_reason_text(RejectReason reason) noexcept {
    switch (reason) {
    case RejectReason::FieldCount: return "wrong field count";
    case RejectReason::MissingId: return "missing id";
    case RejectReason::BadTerm: return "malformed term";
    case RejectReason::SummerTerm: return "summer term";
    case RejectReason::NonLetterGrade: return "non-letter grade";
    case RejectReason::BadCredits: return "malformed credits";
    case RejectReason::NegativeCredits: return "negative credits";
    case RejectReason::OtherDepartment: return "other department";
    case RejectReason::ExcludedCourse: return "excluded course";
    case RejectReason::DuplicateTaking: return "duplicate taking";
    }
    return "unknown";
}

ParseResult parse_transcripts(std::istream& csv, const IngestConfig& config) {
    ParseResult result;
    std::string line;
    std::size_t line_no = 0;

    std::array<std::size_t, kColumns.size()> index{};
    bool have_header = false;
    while (std::getline(csv, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto names = split_csv_line(line);
        if (!names.empty() && names[0].rfind("\xEF\xBB\xBF", 0) == 0) names[0].erase(0, 3);
        index.fill(names.size());
        for (std::size_t i = 0; i < names.size(); ++i) {
            std::string name = names[i];
            std::transform(name.begin(), name.end(), name.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            auto it = std::find(kColumns.begin(), kColumns.end(), name);
            if (it == kColumns.end()) throw IngestError("unknown column '" + names[i] + "'");
            index[static_cast<std::size_t>(it - kColumns.begin())] = i;
        }
        for (std::size_t c = 0; c < kColumns.size(); ++c)
            if (index[c] == names.size())
                throw IngestError("missing column '" + std::string(kColumns[c]) + "'");
        have_header = true;
        break;
    }
    if (!have_header) throw IngestError("missing header row");
    const std::size_t width = kColumns.size();

    std::set<std::tuple<std::string, std::string, int>> seen;
    auto reject = [&](RejectReason reason, std::string detail) {
        result.rejects.push_back({line_no, reason, std::move(detail)});
    };

    while (std::getline(csv, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++result.data_rows;

        auto fields = split_csv_line(line);
        if (fields.size() != width) {
            reject(RejectReason::FieldCount, std::to_string(fields.size()) + " fields");
            continue;
        }
        const std::string& student = fields[index[0]];
        const std::string& course = fields[index[1]];
        if (student.empty() || course.empty()) {
            reject(RejectReason::MissingId, student.empty() ? "student_id" : "course_id");
            continue;
        }
        auto term = Term::parse(fields[index[2]]);
        if (!term) {
            reject(RejectReason::BadTerm, fields[index[2]]);
            continue;
        }
        auto grade = Grade::parse(fields[index[3]]);
        if (!grade) {
            reject(RejectReason::NonLetterGrade, fields[index[3]]);
            continue;
        }
        auto credits = parse_decimal(fields[index[4]]);
        if (!credits) {
            reject(RejectReason::BadCredits, fields[index[4]]);
            continue;
        }
        if (*credits < 0.0) {
            reject(RejectReason::NegativeCredits, fields[index[4]]);
            continue;
        }
        if (config.drop_summer && term->season == Season::Summer) {
            reject(RejectReason::SummerTerm, term->to_string());
            continue;
        }
        if (config.allowed_department_prefix &&
            course.rfind(*config.allowed_department_prefix, 0) != 0) {
            reject(RejectReason::OtherDepartment, course);
            continue;
        }
        if (config.excluded_courses.count(course)) {
            reject(RejectReason::ExcludedCourse, course);
            continue;
        }
        if (!seen.emplace(student, course, term->ordinal()).second) {
            reject(RejectReason::DuplicateTaking, student + " " + course + " " + term->to_string());
            continue;
        }
        result.records.push_back({student, course, *term, *grade, *credits});
    }
    return result;
}

ParseResult parse_transcripts(std::string_view csv, const IngestConfig& config) {
    std::istringstream in{std::string(csv)};
    return parse_transcripts(in, config);
}

std::set<std::string> parse_roster(std::istream& in) {
    std::set<std::string> roster;
    std::string line;
    while (std::getline(in, line)) {
        auto id = trim(line);
        if (!id.empty()) roster.emplace(id);
    }
    return roster;
}

std::set<std::string> parse_roster(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_roster(in);
}

std::string_view drop_reason_text(DropReason reason) noexcept {
    switch (reason) {
    case DropReason::NotInRoster: return "not in degree roster";
    case DropReason::TooFewConsecutiveTerms: return "too few consecutive terms";
    }
    return "unknown";
}

int longest_consecutive_run(const std::vector<Taking>& takings) {
    std::vector<int> idx;
    for (const auto& t : takings)
        if (t.term.season != Season::Summer) idx.push_back(t.term.academic_index());
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    int best = idx.empty() ? 0 : 1;
    int run = best;
    for (std::size_t i = 1; i < idx.size(); ++i) {
        run = idx[i] == idx[i - 1] + 1 ? run + 1 : 1;
        best = std::max(best, run);
    }
    return best;
}

FilterResult apply_student_filters(const std::vector<TranscriptRecord>& records,
                                   const std::set<std::string>& degree_roster,
                                   const IngestConfig& config) {
    if (config.graduated_only && degree_roster.empty())
        throw ConfigError("graduated_only is set but the degree roster is empty");

    std::map<std::string, std::vector<Taking>> by_student;
    for (const auto& r : records)
        by_student[r.student_id].push_back({r.course_id, r.term, r.grade, r.credits});

    FilterResult out;
    for (auto& [id, takings] : by_student) {
        if (config.graduated_only && !degree_roster.count(id)) {
            out.dropped.push_back({id, DropReason::NotInRoster});
            continue;
        }
        if (longest_consecutive_run(takings) < config.min_consecutive_terms) {
            out.dropped.push_back({id, DropReason::TooFewConsecutiveTerms});
            continue;
        }
        out.histories.emplace_back(id, std::move(takings));
    }
    return out;
}

Cohort::Cohort(CohortRange range, std::vector<StudentHistory> histories)
    : range_(std::move(range)), histories_(std::move(histories)) {}

std::vector<std::string> Cohort::courses() const {
    std::set<std::string> all;
    for (const auto& h : histories_)
        for (const auto& t : h.takings()) all.insert(t.course_id);
    return {all.begin(), all.end()};
}

std::vector<Cohort> split_cohorts(const std::vector<StudentHistory>& histories,
                                  const IngestConfig& config) {
    config.validate_cohorts();
    std::vector<std::vector<StudentHistory>> buckets(config.cohort_boundaries.size());
    for (const auto& h : histories) {
        if (h.empty()) continue;
        Term first = h.first_term();
        for (std::size_t c = 0; c < config.cohort_boundaries.size(); ++c) {
            const auto& r = config.cohort_boundaries[c];
            if (first < r.start || r.end < first) continue;
            std::vector<Taking> kept;
            for (const auto& t : h.takings())
                if (!(t.term < r.start) && !(r.end < t.term)) kept.push_back(t);
            buckets[c].emplace_back(h.student_id(), std::move(kept));
            break;
        }
    }
    std::vector<Cohort> cohorts;
    for (std::size_t c = 0; c < buckets.size(); ++c)
        cohorts.emplace_back(config.cohort_boundaries[c], std::move(buckets[c]));
    return cohorts;
}

} // namespace coursecausal
