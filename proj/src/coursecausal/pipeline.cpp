// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/pipeline.hpp"

#include "coursecausal/error.hpp"
#include "coursecausal/parallel.hpp"

#include <algorithm>
#include <sstream>

namespace coursecausal {

Dataset load_dataset(std::string_view transcripts_csv, std::string_view roster_text, IngestConfig config) {
    Dataset d;
    d.parsed = parse_transcripts(transcripts_csv, config);
    d.filtered = apply_student_filters(d.parsed.records, parse_roster(roster_text), config);
    if (config.cohort_boundaries.empty()) {
        CohortRange all{"all", Term{0, Season::Spring}, Term{9999, Season::Fall}};
        config.cohort_boundaries.push_back(all);
    }
    d.cohorts = split_cohorts(d.filtered.histories, config);
    return d;
}

namespace {

std::string describe_y_failure(const YCheck& check, const PairCriteria& criteria) {
    std::ostringstream s;
    s << "fails " << y_criterion_text(check.result) << " (";
    switch (check.result) {
    case YCriterion::Support:
        s << check.takers << " takers < " << criteria.min_y_support;
        break;
    case YCriterion::BelowCFraction:
        s << check.below_c << "/" << check.takers << " below C < " << criteria.min_below_c_fraction;
        break;
    case YCriterion::OnlyInFirstTerm:
        s << "only taken in students' first term";
        break;
    case YCriterion::Passed:
        break;
    }
    s << ")";
    return s.str();
}

} // namespace

AnalyzeRun analyze_dataset(const Dataset& dataset, const AnalyzeRequest& request) {
    request.criteria.validate();
    request.options.validate();

    struct Job {
        const Cohort* cohort;
        CoursePair pair;
    };
    AnalyzeRun run;
    std::vector<Job> jobs;
    for (const auto& cohort : dataset.cohorts) {
        std::vector<std::string> ys;
        if (request.y_course) {
            YCheck check = check_y(cohort, *request.y_course, request.criteria);
            if (!check.passed()) {
                run.skipped.push_back({cohort.label(), *request.y_course, "", describe_y_failure(check, request.criteria)});
                continue;
            }
            ys.push_back(*request.y_course);
        } else {
            ys = enumerate_valid_y(cohort, request.criteria);
        }
        for (const auto& y : ys) {
            auto pairs = enumerate_valid_x(cohort, y, request.criteria);
            if (request.x_course) {
                auto it = std::find_if(pairs.begin(), pairs.end(),
                                       [&](const CoursePair& p) { return p.x_course == *request.x_course; });
                if (it == pairs.end()) {
                    run.skipped.push_back({cohort.label(), y, *request.x_course,
                                           "fails min_x_support (" +
                                               std::to_string(prior_support(cohort, collect_y_takers(cohort, y),
                                                                            *request.x_course)) +
                                               " prior takers < " + std::to_string(request.criteria.min_x_support) + ")"});
                    continue;
                }
                jobs.push_back({&cohort, std::move(*it)});
            } else {
                for (auto& p : pairs) jobs.push_back({&cohort, std::move(p)});
            }
        }
    }

    std::vector<std::optional<AteReport>> results(jobs.size());
    std::vector<std::string> reasons(jobs.size());
    parallel_for(jobs.size(), request.threads, [&](std::size_t i) {
        try {
            results[i] = analyze_pair(*jobs[i].cohort, jobs[i].pair, request.options);
        } catch (const NotEstimable& e) {
            reasons[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (results[i]) run.reports.push_back(std::move(*results[i]));
        else run.skipped.push_back({jobs[i].cohort->label(), jobs[i].pair.y_course, jobs[i].pair.x_course, reasons[i]});
    }
    return run;
}

SweepRun sweep_dataset(const Dataset& dataset, const SweepConfig& config) {
    config.validate();
    SweepRun run;
    run.top_k = config.top_k;
    for (const auto& cohort : dataset.cohorts) {
        try {
            run.cohorts.push_back(run_sweep(cohort, config));
        } catch (const NotEstimable& e) {
            run.skipped.push_back({cohort.label(), "", "", e.what()});
        }
    }
    return run;
}

} // namespace coursecausal
