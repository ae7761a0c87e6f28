// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/evaluation.hpp"

#include "coursecausal/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace coursecausal {

namespace {

std::string trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

} // namespace

PrereqCatalog::PrereqCatalog(std::set<std::pair<std::string, std::string>> edges)
    : edges_(std::move(edges)) {
    for (const auto& [pre, target] : edges_)
        if (pre == target) throw ConfigError("self-edge in prerequisite catalog: " + pre);
}

PrereqCatalog PrereqCatalog::parse(std::istream& csv) {
    std::set<std::pair<std::string, std::string>> edges;
    std::string line;
    bool header = true;
    std::size_t line_no = 0;
    while (std::getline(csv, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw IngestError("prerequisite catalog line " + std::to_string(line_no) +
                              ": expected two columns");
        std::string pre = trimmed(std::string_view(line).substr(0, comma));
        std::string target = trimmed(std::string_view(line).substr(comma + 1));
        if (header) {
            header = false;
            if (pre != "prereq_course_id" || target != "target_course_id")
                throw IngestError("prerequisite catalog header must be prereq_course_id,target_course_id");
            continue;
        }
        edges.emplace(std::move(pre), std::move(target));
    }
    if (header) throw IngestError("prerequisite catalog is missing its header row");
    return PrereqCatalog(std::move(edges));
}

PrereqCatalog PrereqCatalog::parse(std::string_view csv) {
    std::istringstream in{std::string(csv)};
    return parse(in);
}

std::set<std::string> PrereqCatalog::prereqs_of(const std::string& target) const {
    std::set<std::string> out;
    for (const auto& [pre, t] : edges_)
        if (t == target) out.insert(pre);
    return out;
}

std::vector<std::string> PrereqCatalog::targets() const {
    std::set<std::string> t;
    for (const auto& e : edges_) t.insert(e.second);
    return {t.begin(), t.end()};
}

PrereqOverlap prereq_overlap(const PrereqCatalog& catalog, const std::string& y_course,
                             const std::vector<std::string>& ranked_x, int k) {
    const auto known = catalog.prereqs_of(y_course);
    PrereqOverlap out;
    out.known_prereqs = known.size();
    const std::size_t limit = std::min(ranked_x.size(), static_cast<std::size_t>(std::max(k, 0)));
    std::set<std::string> counted;
    for (std::size_t i = 0; i < limit; ++i)
        if (known.count(ranked_x[i]) && counted.insert(ranked_x[i]).second) ++out.hits;
    out.recall_at_k = out.known_prereqs ? static_cast<double>(out.hits) / static_cast<double>(out.known_prereqs) : 0.0;
    return out;
}

} // namespace coursecausal
