// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coursecausal {

/// Known prerequisite edges (prerequisite, target).
class PrereqCatalog {
public:
    PrereqCatalog() = default;
    /// Throws ConfigError on a self-edge.
    explicit PrereqCatalog(std::set<std::pair<std::string, std::string>> edges);

    /// `prereq_course_id,target_course_id` with a header row.
    static PrereqCatalog parse(std::istream& csv);
    static PrereqCatalog parse(std::string_view csv);

    const std::set<std::pair<std::string, std::string>>& edges() const noexcept { return edges_; }
    std::set<std::string> prereqs_of(const std::string& target) const;
    std::vector<std::string> targets() const;

private:
    std::set<std::pair<std::string, std::string>> edges_;
};

struct PrereqOverlap {
    std::size_t hits = 0;
    std::size_t known_prereqs = 0;
    double recall_at_k = 0.0;
};

/// Recall of the catalog's prerequisites for `y_course` within the first k of `ranked_x`.
PrereqOverlap prereq_overlap(const PrereqCatalog& catalog, const std::string& y_course,
                             const std::vector<std::string>& ranked_x, int k);

} // namespace coursecausal
