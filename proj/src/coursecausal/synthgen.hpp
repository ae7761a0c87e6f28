// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace coursecausal {

struct PlantedEffect {
    std::string x_course;
    std::string y_course;
    double delta = 0.0;
};

/// Synthetic transcript generator settings. Grades follow
///   3.0 + ability - difficulty + sum of planted deltas + noise,
/// clipped to [0, 4] and snapped to the letter scale. A planted delta applies to Y when the
/// student passed X above a C in an earlier term. Ability drives both X and Y grades, so
/// naive comparisons of X-passers against everyone else are confounded.
struct SynthConfig {
    int n_students = 1000;
    int n_courses = 20;
    int min_terms = 4;
    int max_terms = 8;
    int min_load = 2; // courses per term
    int max_load = 4;
    std::vector<PlantedEffect> planted_effects;
    double ability_spread = 0.5;
    double difficulty_spread = 0.2;
    double noise_sd = 0.3;
    /// Difficulty of every planted target course (other courses draw theirs around 0), so
    /// targets reliably see enough low grades.
    double target_difficulty_shift = 0.7;
    /// Fraction of students who take X in a term before Y, for each planted pair.
    double x_before_y_fraction = 0.25;
    /// Standard deviation of the per-student jitter on the common course order; 0 means
    /// every student follows the same sequence.
    double order_jitter = 0.25;
    double graduated_fraction = 1.0;
    int first_year = 2010;        // students start from FALL first_year on
    int start_window_terms = 4;   // number of possible start terms
    std::uint64_t seed = 0;

    /// Throws ConfigError on invalid values (including a self-pair).
    void validate() const;
};

struct SynthDataset {
    std::string transcripts_csv;
    std::string roster;
    std::string ground_truth_json;
    std::vector<PlantedEffect> ground_truth;
    std::vector<std::string> courses;
    std::size_t valid_students = 0; // in roster with at least two consecutive terms
    std::uint64_t seed_used = 0;
    int attempts = 1;
};

/// Deterministic for a given config. Retries up to 10 derived seeds when a planted pair
/// ends up with an empty arm, then throws ConfigError.
SynthDataset generate(const SynthConfig& config);

} // namespace coursecausal
