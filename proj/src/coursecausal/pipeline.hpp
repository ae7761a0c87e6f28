// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "coursecausal/estimator.hpp"
#include "coursecausal/evaluation.hpp"
#include "coursecausal/ingest.hpp"
#include "coursecausal/sensitivity.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coursecausal {

/// Parsed, filtered and cohort-split transcripts.
struct Dataset {
    ParseResult parsed;
    FilterResult filtered;
    std::vector<Cohort> cohorts;
};

/// Full ingest: parse, roster and term filters, cohort split. An empty cohort list in
/// `config` means a single cohort "all" spanning every accepted term.
Dataset load_dataset(std::string_view transcripts_csv, std::string_view roster_text, IngestConfig config);

struct AnalyzeRequest {
    PairCriteria criteria;
    AnalysisOptions options;
    std::optional<std::string> y_course;
    std::optional<std::string> x_course;
    unsigned threads = 0;
};

struct SkippedPair {
    std::string cohort;
    std::string y_course;
    std::string x_course; // empty when Y itself failed a criterion
    std::string reason;
};

struct AnalyzeRun {
    std::vector<AteReport> reports; // ordered by (cohort, y, x)
    std::vector<SkippedPair> skipped;
};

AnalyzeRun analyze_dataset(const Dataset& dataset, const AnalyzeRequest& request);

struct SweepRun {
    std::vector<SweepResult> cohorts; // cohorts with at least one valid Y
    std::vector<SkippedPair> skipped; // cohorts without a valid Y
    int top_k = 3;
    std::optional<PrereqCatalog> catalog;
};

SweepRun sweep_dataset(const Dataset& dataset, const SweepConfig& config);

} // namespace coursecausal
