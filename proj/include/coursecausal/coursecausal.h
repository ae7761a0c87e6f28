/*
 * Copyright 2026 The coursecausal Authors
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * coursecausal C API.
 *
 * Estimates the effect of passing a prior course X on the grade earned in a later
 * course Y from transcript records: greedy 1:1 covariate matching, a difference of
 * matched means with a Welch test, and a k-fold cross-validated OLS treatment
 * coefficient. Also provides the cutoff sensitivity sweep and a synthetic data
 * generator with planted effects.
 *
 * All objects are opaque handles released with their *_free function. Functions
 * return a cc_status; on failure cc_last_error() describes the problem for the
 * calling thread. Strings returned through char** must be released with
 * cc_string_free. Strings returned as const char* are owned by their handle.
 */

#ifndef COURSECAUSAL_H
#define COURSECAUSAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(COURSECAUSAL_BUILD)
#    define CC_API __declspec(dllexport)
#  else
#    define CC_API __declspec(dllimport)
#  endif
#else
#  define CC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cc_status {
    CC_OK = 0,
    CC_ERR_INVALID_ARGUMENT = 1,
    CC_ERR_IO = 2,
    CC_ERR_PARSE = 3,
    CC_ERR_CONFIG = 4,
    CC_ERR_NOT_ESTIMABLE = 5,
    CC_ERR_INTERNAL = 6
} cc_status;

typedef enum cc_format { CC_FORMAT_TSV = 0, CC_FORMAT_JSON = 1 } cc_format;

CC_API const char* cc_status_name(cc_status status);

/* Message for the last failing call on this thread; empty if none. */
CC_API const char* cc_last_error(void);

CC_API void cc_string_free(char* s);

/* ---- ingest ------------------------------------------------------------ */

typedef struct cc_cohort_range {
    const char* label;
    const char* start_term; /* "SEASON YYYY", inclusive */
    const char* end_term;   /* inclusive */
} cc_cohort_range;

typedef struct cc_ingest_options {
    int graduated_only;        /* default 1 */
    int drop_summer;           /* default 1 */
    int min_consecutive_terms; /* default 2 */
    const char* department_prefix;         /* NULL: keep every course */
    const char* const* excluded_courses;   /* may be NULL */
    size_t n_excluded_courses;
    const cc_cohort_range* cohorts;        /* NULL: one cohort "all" spanning every term */
    size_t n_cohorts;
} cc_ingest_options;

CC_API void cc_ingest_options_init(cc_ingest_options* options);

typedef struct cc_dataset cc_dataset;

/* roster_path may be NULL only when graduated_only is 0. */
CC_API cc_status cc_dataset_load_files(const char* transcripts_path, const char* roster_path,
                                       const cc_ingest_options* options, cc_dataset** out);
CC_API cc_status cc_dataset_load_buffers(const char* transcripts_csv, size_t transcripts_len,
                                         const char* roster, size_t roster_len,
                                         const cc_ingest_options* options, cc_dataset** out);
CC_API void cc_dataset_free(cc_dataset* dataset);

CC_API size_t cc_dataset_data_rows(const cc_dataset* dataset);
CC_API size_t cc_dataset_accepted_rows(const cc_dataset* dataset);
CC_API size_t cc_dataset_rejected_rows(const cc_dataset* dataset);
/* line is 1-based (header = 1); reason is owned by the dataset. */
CC_API cc_status cc_dataset_reject(const cc_dataset* dataset, size_t index, size_t* line,
                                   const char** reason);
CC_API size_t cc_dataset_dropped_students(const cc_dataset* dataset);
CC_API size_t cc_dataset_cohort_count(const cc_dataset* dataset);
CC_API const char* cc_dataset_cohort_label(const cc_dataset* dataset, size_t cohort);
CC_API size_t cc_dataset_cohort_students(const cc_dataset* dataset, size_t cohort);

/* ---- analysis ---------------------------------------------------------- */

typedef struct cc_pair_criteria {
    int min_y_support;           /* default 100 */
    int min_x_support;           /* default 100 */
    double min_below_c_fraction; /* default 0.10 */
    int y_not_in_first_term;     /* default 1 */
} cc_pair_criteria;

typedef struct cc_analysis_options {
    cc_pair_criteria criteria;
    double cutoff;              /* default 0.5 */
    int folds;                  /* default 5 */
    uint64_t seed;              /* default 0 */
    int min_indicator_support;  /* default 2 */
    const char* y_course;       /* NULL: every valid Y */
    const char* x_course;       /* NULL: every valid X */
    unsigned threads;           /* 0: hardware concurrency */
} cc_analysis_options;

CC_API void cc_analysis_options_init(cc_analysis_options* options);

typedef struct cc_report_row {
    const char* y_course;
    const char* x_course;
    const char* cohort;
    double ate_means;
    double p_value;
    int significant; /* p_value < 0.01 */
    double ate_reg_mean;
    double ate_reg_std;
    double rmse_mean;
    int folds;
    size_t n_pairs;
} cc_report_row;

typedef struct cc_analysis cc_analysis;

/* Rows ordered by (cohort, y_course, x_course). Pairs that cannot be estimated are
 * listed through cc_analysis_skipped. Returns CC_OK even when no row is estimable. */
CC_API cc_status cc_analyze(const cc_dataset* dataset, const cc_analysis_options* options,
                            cc_analysis** out);
CC_API void cc_analysis_free(cc_analysis* analysis);
CC_API size_t cc_analysis_row_count(const cc_analysis* analysis);
CC_API cc_status cc_analysis_row(const cc_analysis* analysis, size_t index, cc_report_row* row);
CC_API size_t cc_analysis_skipped_count(const cc_analysis* analysis);
/* Human-readable "cohort Y X: reason" for a skipped pair or rejected target course. */
CC_API const char* cc_analysis_skipped(const cc_analysis* analysis, size_t index);
/* `treatment_id,control_id,distance` for row `index`. */
CC_API cc_status cc_analysis_matches_csv(const cc_analysis* analysis, size_t index, char** out);
/* header_comment (may be NULL) is written as a leading '#' line in TSV or a field in JSON. */
CC_API cc_status cc_analysis_render(const cc_analysis* analysis, cc_format format,
                                    const char* header_comment, char** out);

/* ---- sensitivity sweep ------------------------------------------------- */

typedef struct cc_sweep_options {
    cc_pair_criteria criteria;
    const double* cutoffs;      /* NULL: 0.1 0.3 0.4 0.5 0.6 0.9 */
    size_t n_cutoffs;
    int top_k;                  /* default 3 */
    int folds;                  /* default 5 */
    uint64_t seed;              /* default 0 */
    int min_indicator_support;  /* default 2 */
    unsigned threads;
} cc_sweep_options;

CC_API void cc_sweep_options_init(cc_sweep_options* options);

typedef struct cc_sweep cc_sweep;

CC_API cc_status cc_sweep_run(const cc_dataset* dataset, const cc_sweep_options* options,
                              cc_sweep** out);
CC_API void cc_sweep_free(cc_sweep* sweep);
/* Cohorts with at least one valid Y. */
CC_API size_t cc_sweep_cohort_count(const cc_sweep* sweep);
CC_API const char* cc_sweep_cohort_label(const cc_sweep* sweep, size_t cohort);
CC_API size_t cc_sweep_cutoff_count(const cc_sweep* sweep);
CC_API cc_status cc_sweep_similarity(const cc_sweep* sweep, size_t cohort, size_t i, size_t j,
                                     double* value);
/* Optional catalog (`prereq_course_id,target_course_id`) adds recall-at-k per target. */
CC_API cc_status cc_sweep_set_prereq_catalog(cc_sweep* sweep, const char* catalog_csv, size_t len);
CC_API cc_status cc_sweep_render(const cc_sweep* sweep, cc_format format, const char* header_comment,
                                 char** out);

/* ---- synthetic data ---------------------------------------------------- */

typedef struct cc_plant {
    const char* x_course;
    const char* y_course;
    double delta;
} cc_plant;

typedef struct cc_synth_options {
    int n_students;          /* default 1000 */
    int n_courses;           /* default 20 */
    int min_terms, max_terms;        /* default 4, 8 */
    int min_load, max_load;          /* default 2, 4 */
    const cc_plant* plants;
    size_t n_plants;
    double ability_spread;   /* default 0.5 */
    double difficulty_spread;/* default 0.2 */
    double noise_sd;         /* default 0.3 */
    double target_difficulty_shift; /* default 0.7 */
    double x_before_y_fraction;     /* default 0.25 */
    double order_jitter;            /* default 0.25 */
    double graduated_fraction;      /* default 1.0 */
    int first_year;                 /* default 2010 */
    int start_window_terms;         /* default 4 */
    uint64_t seed;
} cc_synth_options;

CC_API void cc_synth_options_init(cc_synth_options* options);

typedef struct cc_synth cc_synth;

CC_API cc_status cc_synth_generate(const cc_synth_options* options, cc_synth** out);
CC_API void cc_synth_free(cc_synth* synth);
CC_API const char* cc_synth_transcripts(const cc_synth* synth, size_t* len);
CC_API const char* cc_synth_roster(const cc_synth* synth, size_t* len);
CC_API const char* cc_synth_ground_truth(const cc_synth* synth, size_t* len);
CC_API size_t cc_synth_valid_students(const cc_synth* synth);
/* Writes transcripts.csv, roster.txt and ground_truth.json into an existing directory. */
CC_API cc_status cc_synth_write(const cc_synth* synth, const char* directory);

#ifdef __cplusplus
}
#endif

#endif /* COURSECAUSAL_H */
