// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace coursecausal {

/// Malformed input that cannot be recovered row-by-row (bad header, unknown column).
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration values.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Pipeline stage that failed to produce an estimate.
enum class Stage { Grouping, Matching, Means, Regression, Sweep };

const char* stage_name(Stage stage) noexcept;

/// Raised when a course pair cannot be estimated. Carries the stage that gave up.
class NotEstimable : public std::runtime_error {
public:
    NotEstimable(Stage stage, const std::string& reason)
        : std::runtime_error(std::string(stage_name(stage)) + ": " + reason),
          stage_(stage), reason_(reason) {}

    Stage stage() const noexcept { return stage_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    Stage stage_;
    std::string reason_;
};

inline const char* stage_name(Stage stage) noexcept {
    switch (stage) {
    case Stage::Grouping: return "grouping";
    case Stage::Matching: return "matching";
    case Stage::Means: return "means";
    case Stage::Regression: return "regression";
    case Stage::Sweep: return "sweep";
    }
    return "unknown";
}

} // namespace coursecausal
