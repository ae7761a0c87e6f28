// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/coursecausal.h"

#include "coursecausal/error.hpp"
#include "coursecausal/pipeline.hpp"
#include "coursecausal/report.hpp"
#include "coursecausal/synthgen.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

using namespace coursecausal;

struct cc_dataset {
    Dataset data;
    std::vector<std::string> reject_text;
};

struct cc_analysis {
    AnalyzeRun run;
    std::vector<std::string> skipped_text;
};

struct cc_sweep {
    SweepRun run;
};

struct cc_synth {
    SynthDataset data;
};

namespace {

thread_local std::string g_last_error;

template <class Fn>
cc_status guarded(Fn&& fn) noexcept {
    try {
        fn();
        g_last_error.clear();
        return CC_OK;
    } catch (const NotEstimable& e) {
        g_last_error = e.what();
        return CC_ERR_NOT_ESTIMABLE;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return CC_ERR_IO;
    } catch (const IngestError& e) {
        g_last_error = e.what();
        return CC_ERR_PARSE;
    } catch (const ConfigError& e) {
        g_last_error = e.what();
        return CC_ERR_CONFIG;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return CC_ERR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return CC_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CC_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CC_ERR_INTERNAL;
    }
}

cc_status invalid(const char* what) noexcept {
    g_last_error = what;
    return CC_ERR_INVALID_ARGUMENT;
}

std::string read_file(const char* path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot read ") + path);
    std::ostringstream s;
    s << in.rdbuf();
    if (in.bad()) throw IoError(std::string("cannot read ") + path);
    return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("cannot write " + path.string());
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

Term parse_term(const char* text) {
    if (!text) throw ConfigError("cohort term is missing");
    auto t = Term::parse(text);
    if (!t) throw ConfigError(std::string("malformed term '") + text + "'");
    return *t;
}

IngestConfig to_config(const cc_ingest_options* o) {
    cc_ingest_options defaults;
    cc_ingest_options_init(&defaults);
    if (!o) o = &defaults;
    IngestConfig c;
    c.graduated_only = o->graduated_only != 0;
    c.drop_summer = o->drop_summer != 0;
    c.min_consecutive_terms = o->min_consecutive_terms;
    if (o->department_prefix) c.allowed_department_prefix = o->department_prefix;
    for (size_t i = 0; i < o->n_excluded_courses; ++i)
        if (o->excluded_courses && o->excluded_courses[i]) c.excluded_courses.insert(o->excluded_courses[i]);
    for (size_t i = 0; i < o->n_cohorts; ++i) {
        const auto& r = o->cohorts[i];
        c.cohort_boundaries.push_back({r.label ? r.label : "", parse_term(r.start_term), parse_term(r.end_term)});
    }
    if (c.min_consecutive_terms < 1) throw ConfigError("min_consecutive_terms must be positive");
    return c;
}

PairCriteria to_criteria(const cc_pair_criteria& c) {
    PairCriteria p;
    p.min_y_support = c.min_y_support;
    p.min_x_support = c.min_x_support;
    p.min_below_c_fraction = c.min_below_c_fraction;
    p.y_not_in_first_term = c.y_not_in_first_term != 0;
    return p;
}

void init_criteria(cc_pair_criteria* c) {
    PairCriteria d;
    c->min_y_support = d.min_y_support;
    c->min_x_support = d.min_x_support;
    c->min_below_c_fraction = d.min_below_c_fraction;
    c->y_not_in_first_term = d.y_not_in_first_term ? 1 : 0;
}

std::string skipped_line(const SkippedPair& s) {
    std::string out = s.cohort;
    if (!s.y_course.empty()) out += " " + s.y_course;
    if (!s.x_course.empty()) out += " " + s.x_course;
    return out + ": " + s.reason;
}

} // namespace

extern "C" {

const char* cc_status_name(cc_status status) {
    switch (status) {
    case CC_OK: return "ok";
    case CC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CC_ERR_IO: return "i/o error";
    case CC_ERR_PARSE: return "parse error";
    case CC_ERR_CONFIG: return "configuration error";
    case CC_ERR_NOT_ESTIMABLE: return "not estimable";
    case CC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* cc_last_error(void) { return g_last_error.c_str(); }

void cc_string_free(char* s) { std::free(s); }

void cc_ingest_options_init(cc_ingest_options* o) {
    if (!o) return;
    IngestConfig d;
    *o = cc_ingest_options{};
    o->graduated_only = d.graduated_only ? 1 : 0;
    o->drop_summer = d.drop_summer ? 1 : 0;
    o->min_consecutive_terms = d.min_consecutive_terms;
}

cc_status cc_dataset_load_buffers(const char* transcripts_csv, size_t transcripts_len, const char* roster,
                                  size_t roster_len, const cc_ingest_options* options, cc_dataset** out) {
    if (!out || (!transcripts_csv && transcripts_len)) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        auto ds = std::make_unique<cc_dataset>();
        std::string_view roster_text = roster ? std::string_view(roster, roster_len) : std::string_view{};
        ds->data = load_dataset(std::string_view(transcripts_csv ? transcripts_csv : "", transcripts_len),
                                roster_text, to_config(options));
        for (const auto& r : ds->data.parsed.rejects) {
            std::string text(reject_reason_text(r.reason));
            if (!r.detail.empty()) text += ": " + r.detail;
            ds->reject_text.push_back(std::move(text));
        }
        *out = ds.release();
    });
}

cc_status cc_dataset_load_files(const char* transcripts_path, const char* roster_path,
                                const cc_ingest_options* options, cc_dataset** out) {
    if (!out || !transcripts_path) return invalid("null argument");
    *out = nullptr;
    std::string csv, roster;
    cc_status st = guarded([&] {
        csv = read_file(transcripts_path);
        if (roster_path) roster = read_file(roster_path);
    });
    if (st != CC_OK) return st;
    return cc_dataset_load_buffers(csv.data(), csv.size(), roster.data(), roster.size(), options, out);
}

void cc_dataset_free(cc_dataset* dataset) { delete dataset; }

size_t cc_dataset_data_rows(const cc_dataset* d) { return d ? d->data.parsed.data_rows : 0; }
size_t cc_dataset_accepted_rows(const cc_dataset* d) { return d ? d->data.parsed.records.size() : 0; }
size_t cc_dataset_rejected_rows(const cc_dataset* d) { return d ? d->data.parsed.rejects.size() : 0; }

cc_status cc_dataset_reject(const cc_dataset* d, size_t index, size_t* line, const char** reason) {
    if (!d || index >= d->data.parsed.rejects.size()) return invalid("reject index out of range");
    if (line) *line = d->data.parsed.rejects[index].line;
    if (reason) *reason = d->reject_text[index].c_str();
    return CC_OK;
}

size_t cc_dataset_dropped_students(const cc_dataset* d) { return d ? d->data.filtered.dropped.size() : 0; }
size_t cc_dataset_cohort_count(const cc_dataset* d) { return d ? d->data.cohorts.size() : 0; }

const char* cc_dataset_cohort_label(const cc_dataset* d, size_t cohort) {
    if (!d || cohort >= d->data.cohorts.size()) return nullptr;
    return d->data.cohorts[cohort].label().c_str();
}

size_t cc_dataset_cohort_students(const cc_dataset* d, size_t cohort) {
    if (!d || cohort >= d->data.cohorts.size()) return 0;
    return d->data.cohorts[cohort].size();
}

void cc_analysis_options_init(cc_analysis_options* o) {
    if (!o) return;
    *o = cc_analysis_options{};
    init_criteria(&o->criteria);
    AnalysisOptions d;
    o->cutoff = d.cutoff;
    o->folds = d.folds;
    o->seed = d.seed;
    o->min_indicator_support = d.min_indicator_support;
}

cc_status cc_analyze(const cc_dataset* dataset, const cc_analysis_options* options, cc_analysis** out) {
    if (!dataset || !out) return invalid("null argument");
    *out = nullptr;
    cc_analysis_options defaults;
    cc_analysis_options_init(&defaults);
    if (!options) options = &defaults;
    return guarded([&] {
        AnalyzeRequest req;
        req.criteria = to_criteria(options->criteria);
        req.options.cutoff = options->cutoff;
        req.options.folds = options->folds;
        req.options.seed = options->seed;
        req.options.min_indicator_support = options->min_indicator_support;
        if (options->y_course) req.y_course = options->y_course;
        if (options->x_course) req.x_course = options->x_course;
        req.threads = options->threads;
        auto a = std::make_unique<cc_analysis>();
        a->run = analyze_dataset(dataset->data, req);
        for (const auto& s : a->run.skipped) a->skipped_text.push_back(skipped_line(s));
        *out = a.release();
    });
}

void cc_analysis_free(cc_analysis* analysis) { delete analysis; }

size_t cc_analysis_row_count(const cc_analysis* a) { return a ? a->run.reports.size() : 0; }

cc_status cc_analysis_row(const cc_analysis* a, size_t index, cc_report_row* row) {
    if (!a || !row || index >= a->run.reports.size()) return invalid("row index out of range");
    const AteReport& r = a->run.reports[index];
    row->y_course = r.y_course.c_str();
    row->x_course = r.x_course.c_str();
    row->cohort = r.cohort.c_str();
    row->ate_means = r.ate_means;
    row->p_value = r.p_value;
    row->significant = r.significant_at_01 ? 1 : 0;
    row->ate_reg_mean = r.ate_reg_mean;
    row->ate_reg_std = r.ate_reg_std;
    row->rmse_mean = r.rmse_mean;
    row->folds = r.folds;
    row->n_pairs = r.n_pairs;
    return CC_OK;
}

size_t cc_analysis_skipped_count(const cc_analysis* a) { return a ? a->skipped_text.size() : 0; }

const char* cc_analysis_skipped(const cc_analysis* a, size_t index) {
    if (!a || index >= a->skipped_text.size()) return nullptr;
    return a->skipped_text[index].c_str();
}

cc_status cc_analysis_matches_csv(const cc_analysis* a, size_t index, char** out) {
    if (!a || !out || index >= a->run.reports.size()) return invalid("row index out of range");
    *out = nullptr;
    return guarded([&] { *out = dup_string(a->run.reports[index].sample.to_csv()); });
}

cc_status cc_analysis_render(const cc_analysis* a, cc_format format, const char* header, char** out) {
    if (!a || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        const std::string h = header ? header : "";
        *out = dup_string(format == CC_FORMAT_JSON ? render_analysis_json(a->run, h) : render_analysis_tsv(a->run, h));
    });
}

void cc_sweep_options_init(cc_sweep_options* o) {
    if (!o) return;
    *o = cc_sweep_options{};
    init_criteria(&o->criteria);
    SweepConfig d;
    o->top_k = d.top_k;
    o->folds = d.folds;
    o->seed = d.seed;
    o->min_indicator_support = d.min_indicator_support;
}

cc_status cc_sweep_run(const cc_dataset* dataset, const cc_sweep_options* options, cc_sweep** out) {
    if (!dataset || !out) return invalid("null argument");
    *out = nullptr;
    cc_sweep_options defaults;
    cc_sweep_options_init(&defaults);
    if (!options) options = &defaults;
    return guarded([&] {
        SweepConfig cfg;
        if (options->cutoffs) cfg.cutoffs.assign(options->cutoffs, options->cutoffs + options->n_cutoffs);
        cfg.top_k = options->top_k;
        cfg.folds = options->folds;
        cfg.seed = options->seed;
        cfg.min_indicator_support = options->min_indicator_support;
        cfg.criteria = to_criteria(options->criteria);
        cfg.threads = options->threads;
        auto s = std::make_unique<cc_sweep>();
        s->run = sweep_dataset(dataset->data, cfg);
        *out = s.release();
    });
}

void cc_sweep_free(cc_sweep* sweep) { delete sweep; }

size_t cc_sweep_cohort_count(const cc_sweep* s) { return s ? s->run.cohorts.size() : 0; }

const char* cc_sweep_cohort_label(const cc_sweep* s, size_t cohort) {
    if (!s || cohort >= s->run.cohorts.size()) return nullptr;
    return s->run.cohorts[cohort].cohort.c_str();
}

size_t cc_sweep_cutoff_count(const cc_sweep* s) {
    return s && !s->run.cohorts.empty() ? s->run.cohorts.front().matrix.cutoffs.size() : 0;
}

cc_status cc_sweep_similarity(const cc_sweep* s, size_t cohort, size_t i, size_t j, double* value) {
    if (!s || !value || cohort >= s->run.cohorts.size()) return invalid("cohort index out of range");
    const auto& m = s->run.cohorts[cohort].matrix;
    if (i >= m.cutoffs.size() || j >= m.cutoffs.size()) return invalid("cutoff index out of range");
    *value = m.at(i, j);
    return CC_OK;
}

cc_status cc_sweep_set_prereq_catalog(cc_sweep* s, const char* catalog_csv, size_t len) {
    if (!s || (!catalog_csv && len)) return invalid("null argument");
    return guarded([&] { s->run.catalog = PrereqCatalog::parse(std::string_view(catalog_csv ? catalog_csv : "", len)); });
}

cc_status cc_sweep_render(const cc_sweep* s, cc_format format, const char* header, char** out) {
    if (!s || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        const std::string h = header ? header : "";
        *out = dup_string(format == CC_FORMAT_JSON ? render_sweep_json(s->run, h) : render_sweep_tsv(s->run, h));
    });
}

void cc_synth_options_init(cc_synth_options* o) {
    if (!o) return;
    SynthConfig d;
    *o = cc_synth_options{};
    o->n_students = d.n_students;
    o->n_courses = d.n_courses;
    o->min_terms = d.min_terms;
    o->max_terms = d.max_terms;
    o->min_load = d.min_load;
    o->max_load = d.max_load;
    o->ability_spread = d.ability_spread;
    o->difficulty_spread = d.difficulty_spread;
    o->noise_sd = d.noise_sd;
    o->target_difficulty_shift = d.target_difficulty_shift;
    o->x_before_y_fraction = d.x_before_y_fraction;
    o->order_jitter = d.order_jitter;
    o->graduated_fraction = d.graduated_fraction;
    o->first_year = d.first_year;
    o->start_window_terms = d.start_window_terms;
    o->seed = d.seed;
}

cc_status cc_synth_generate(const cc_synth_options* o, cc_synth** out) {
    if (!o || !out || (!o->plants && o->n_plants)) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        SynthConfig c;
        c.n_students = o->n_students;
        c.n_courses = o->n_courses;
        c.min_terms = o->min_terms;
        c.max_terms = o->max_terms;
        c.min_load = o->min_load;
        c.max_load = o->max_load;
        for (size_t i = 0; i < o->n_plants; ++i) {
            const auto& p = o->plants[i];
            c.planted_effects.push_back({p.x_course ? p.x_course : "", p.y_course ? p.y_course : "", p.delta});
        }
        c.ability_spread = o->ability_spread;
        c.difficulty_spread = o->difficulty_spread;
        c.noise_sd = o->noise_sd;
        c.target_difficulty_shift = o->target_difficulty_shift;
        c.x_before_y_fraction = o->x_before_y_fraction;
        c.order_jitter = o->order_jitter;
        c.graduated_fraction = o->graduated_fraction;
        c.first_year = o->first_year;
        c.start_window_terms = o->start_window_terms;
        c.seed = o->seed;
        auto s = std::make_unique<cc_synth>();
        s->data = generate(c);
        *out = s.release();
    });
}

void cc_synth_free(cc_synth* synth) { delete synth; }

const char* cc_synth_transcripts(const cc_synth* s, size_t* len) {
    if (!s) return nullptr;
    if (len) *len = s->data.transcripts_csv.size();
    return s->data.transcripts_csv.c_str();
}

const char* cc_synth_roster(const cc_synth* s, size_t* len) {
    if (!s) return nullptr;
    if (len) *len = s->data.roster.size();
    return s->data.roster.c_str();
}

const char* cc_synth_ground_truth(const cc_synth* s, size_t* len) {
    if (!s) return nullptr;
    if (len) *len = s->data.ground_truth_json.size();
    return s->data.ground_truth_json.c_str();
}

size_t cc_synth_valid_students(const cc_synth* s) { return s ? s->data.valid_students : 0; }

cc_status cc_synth_write(const cc_synth* s, const char* directory) {
    if (!s || !directory) return invalid("null argument");
    return guarded([&] {
        const std::filesystem::path dir(directory);
        if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
        write_file(dir / "transcripts.csv", s->data.transcripts_csv);
        write_file(dir / "roster.txt", s->data.roster);
        write_file(dir / "ground_truth.json", s->data.ground_truth_json);
    });
}

} // extern "C"
