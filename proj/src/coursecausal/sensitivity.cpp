// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/sensitivity.hpp"

#include "coursecausal/error.hpp"
#include "coursecausal/parallel.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace coursecausal {

void SweepConfig::validate() const {
    if (cutoffs.empty()) throw ConfigError("sweep needs at least one cutoff");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (!(cutoffs[i] > 0.0 && cutoffs[i] <= 1.0)) throw ConfigError("cutoffs must lie in (0, 1]");
        if (i > 0 && !(cutoffs[i - 1] < cutoffs[i]))
            throw ConfigError("cutoffs must be strictly increasing");
    }
    if (top_k < 1) throw ConfigError("top_k must be at least 1");
    criteria.validate();
    analysis_at(cutoffs.front()).validate();
}

AnalysisOptions SweepConfig::analysis_at(double cutoff) const {
    AnalysisOptions o;
    o.cutoff = cutoff;
    o.folds = folds;
    o.seed = seed;
    o.min_indicator_support = min_indicator_support;
    return o;
}

std::vector<RankedCourse> rank_top_k(std::vector<RankedCourse> courses, int top_k) {
    std::sort(courses.begin(), courses.end(), [](const RankedCourse& a, const RankedCourse& b) {
        if (a.ate_reg_mean != b.ate_reg_mean) return a.ate_reg_mean > b.ate_reg_mean;
        return a.x_course < b.x_course;
    });
    if (courses.size() > static_cast<std::size_t>(top_k)) courses.resize(static_cast<std::size_t>(top_k));
    return courses;
}

std::vector<RankedCourse> top_k_causal(const Cohort& cohort, const std::string& y_course, double cutoff,
                                       const SweepConfig& config) {
    std::vector<RankedCourse> estimates;
    for (const auto& pair : enumerate_valid_x(cohort, y_course, config.criteria)) {
        try {
            auto report = analyze_pair(cohort, pair, config.analysis_at(cutoff));
            estimates.push_back({pair.x_course, report.ate_reg_mean});
        } catch (const NotEstimable&) {
        }
    }
    return rank_top_k(std::move(estimates), config.top_k);
}

SimilarityMatrix similarity_from_rankings(const std::vector<double>& cutoffs,
                                          const std::vector<std::vector<std::vector<std::string>>>& top) {
    const std::size_t n = cutoffs.size();
    if (top.size() != n) throw ConfigError("one ranking set per cutoff is required");
    const std::size_t ys = n ? top.front().size() : 0;
    if (ys == 0) throw NotEstimable(Stage::Sweep, "no valid target course");

    SimilarityMatrix m;
    m.cutoffs = cutoffs;
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        m.values[i][i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double total = 0.0;
            for (std::size_t y = 0; y < ys; ++y) {
                const auto& a = top[i][y];
                const auto& b = top[j][y];
                const std::size_t denom = std::max(a.size(), b.size());
                if (denom == 0) {
                    total += 1.0;
                    continue;
                }
                std::size_t overlap = 0;
                for (const auto& x : a)
                    if (std::find(b.begin(), b.end(), x) != b.end()) ++overlap;
                total += static_cast<double>(overlap) / static_cast<double>(denom);
            }
            m.values[i][j] = m.values[j][i] = total / static_cast<double>(ys);
        }
    }
    return m;
}

SweepResult run_sweep(const Cohort& cohort, const SweepConfig& config) {
    config.validate();
    SweepResult result;
    result.cohort = cohort.label();
    result.y_courses = enumerate_valid_y(cohort, config.criteria);
    if (result.y_courses.empty()) throw NotEstimable(Stage::Sweep, "no valid target course");

    struct Job {
        std::size_t y;
        CoursePair pair;
    };
    std::vector<Job> jobs;
    for (std::size_t y = 0; y < result.y_courses.size(); ++y)
        for (auto& pair : enumerate_valid_x(cohort, result.y_courses[y], config.criteria))
            jobs.push_back({y, std::move(pair)});

    const std::size_t nc = config.cutoffs.size();
    const double max_cutoff = config.cutoffs.back();
    // estimates[job][cutoff]
    std::vector<std::vector<std::optional<double>>> estimates(jobs.size(),
                                                              std::vector<std::optional<double>>(nc));
    parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
        std::optional<PairAnalysis> analysis;
        try {
            analysis.emplace(cohort, jobs[j].pair, max_cutoff);
        } catch (const NotEstimable&) {
            return;
        }
        for (std::size_t c = 0; c < nc; ++c) {
            try {
                estimates[j][c] = analysis->run(config.analysis_at(config.cutoffs[c])).ate_reg_mean;
            } catch (const NotEstimable&) {
            }
        }
    });

    result.top.assign(nc, std::vector<std::vector<RankedCourse>>(result.y_courses.size()));
    std::vector<std::vector<std::vector<std::string>>> names(
        nc, std::vector<std::vector<std::string>>(result.y_courses.size()));
    for (std::size_t c = 0; c < nc; ++c) {
        std::vector<std::vector<RankedCourse>> per_y(result.y_courses.size());
        for (std::size_t j = 0; j < jobs.size(); ++j)
            if (estimates[j][c]) per_y[jobs[j].y].push_back({jobs[j].pair.x_course, *estimates[j][c]});
        for (std::size_t y = 0; y < per_y.size(); ++y) {
            result.top[c][y] = rank_top_k(std::move(per_y[y]), config.top_k);
            for (const auto& r : result.top[c][y]) names[c][y].push_back(r.x_course);
        }
    }
    result.matrix = similarity_from_rankings(config.cutoffs, names);
    return result;
}

SimilarityMatrix similarity(const Cohort& cohort, const SweepConfig& config) {
    return run_sweep(cohort, config).matrix;
}

} // namespace coursecausal
