// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

// Small builders for hand-made cohorts.

#pragma once

#include "coursecausal/ingest.hpp"

#include <map>
#include <string>
#include <vector>

namespace fixtures {

namespace cc = coursecausal;

// Regular term number k: 0 = FALL 2010, 1 = SPRING 2011, 2 = FALL 2011, ...
inline cc::Term term(int k) {
    return k % 2 == 0 ? cc::Term{2010 + k / 2, cc::Season::Fall} : cc::Term{2011 + k / 2, cc::Season::Spring};
}

class CohortBuilder {
public:
    CohortBuilder& add(const std::string& student, const std::string& course, int term_k, cc::Letter letter,
                       double credits = 3.0) {
        takings_[student].push_back({course, term(term_k), cc::Grade(letter), credits});
        return *this;
    }

    cc::Cohort build(const std::string& label = "all") const {
        std::vector<cc::StudentHistory> histories;
        for (const auto& [id, t] : takings_) histories.emplace_back(id, t);
        return cc::Cohort({label, term(0), term(100)}, std::move(histories));
    }

private:
    std::map<std::string, std::vector<cc::Taking>> takings_;
};

inline std::string sid(const char* prefix, int i) {
    std::string n = std::to_string(i);
    while (n.size() < 4) n.insert(n.begin(), '0');
    return prefix + n;
}

} // namespace fixtures
