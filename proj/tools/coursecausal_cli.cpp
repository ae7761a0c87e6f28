// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Talks to the library only through the C API.

#include <coursecausal/coursecausal.h>

#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit { kOk = 0, kIo = 1, kNothingEstimable = 2, kUsage = 64 };

struct Failure {
    int code;
    std::string message;
};

int exit_for(cc_status s) {
    switch (s) {
    case CC_OK: return kOk;
    case CC_ERR_IO:
    case CC_ERR_PARSE: return kIo;
    case CC_ERR_NOT_ESTIMABLE: return kNothingEstimable;
    case CC_ERR_INVALID_ARGUMENT:
    case CC_ERR_CONFIG: return kUsage;
    case CC_ERR_INTERNAL: break;
    }
    return kIo;
}

void check(cc_status s) {
    if (s != CC_OK) throw Failure{exit_for(s), cc_last_error()};
}

struct CString {
    char* p = nullptr;
    ~CString() { cc_string_free(p); }
};

template <class T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    ~Handle() { Free(p); }
};

std::string fmt_double(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

void require_readable(const std::string& path, const char* what) {
    std::ifstream f(path);
    if (!f) throw Failure{kIo, std::string("cannot read ") + what + " " + path};
}

std::string read_all(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Failure{kIo, "cannot read " + path};
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

void require_writable_parent(const std::string& path) {
    if (path.empty()) return;
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent))
        throw Failure{kIo, "cannot write " + path + " (no such directory)"};
}

void emit(const std::string& path, const char* text) {
    if (path.empty()) {
        std::fputs(text, stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw Failure{kIo, "cannot write " + path};
}

// Options shared by analyze and sweep.
struct DataArgs {
    std::string transcripts, roster, out, format = "tsv";
    std::vector<std::string> cohorts, excluded;
    std::string dept_prefix;
    bool all_students = false;
    bool keep_summer = false;
    int min_consecutive_terms = 2;
    int min_y_support = 100, min_x_support = 100;
    double min_below_c = 0.10;
    int folds = 5;
    std::uint64_t seed = 0;
    int min_indicator_support = 2;
    unsigned threads = 0;

    // Backing storage for the C option structs.
    std::vector<std::string> cohort_parts;
    std::vector<cc_cohort_range> ranges;
    std::vector<const char*> excluded_ptrs;

    void add_to(CLI::App& app) {
        app.add_option("--transcripts", transcripts, "Transcript CSV")->required();
        app.add_option("--roster", roster, "Graduated-student roster, one id per line");
        app.add_option("--out", out, "Output file (default: stdout)");
        app.add_option("--format", format, "Output format")->check(CLI::IsMember({"tsv", "json"}));
        app.add_option("--cohort", cohorts, "Cohort as LABEL:START:END, e.g. C1:FALL 2010:SPRING 2013 (repeatable)");
        app.add_option("--dept-prefix", dept_prefix, "Keep only courses with this id prefix");
        app.add_option("--exclude", excluded, "Course id to drop (repeatable)");
        app.add_flag("--all-students", all_students, "Do not require roster membership");
        app.add_flag("--keep-summer", keep_summer, "Keep summer-term rows");
        app.add_option("--min-consecutive-terms", min_consecutive_terms, "Minimum consecutive regular terms")
            ->check(CLI::NonNegativeNumber);
        app.add_option("--min-y-support", min_y_support, "Minimum takers of a target course");
        app.add_option("--min-x-support", min_x_support, "Minimum prior takers of a candidate course");
        app.add_option("--min-below-c", min_below_c, "Minimum fraction of target grades below C");
        app.add_option("--k", folds, "Cross-validation folds");
        app.add_option("--seed", seed, "Fold assignment seed");
        app.add_option("--min-indicator-support", min_indicator_support,
                       "Minimum matched students for a course indicator column");
        app.add_option("--threads", threads, "Worker threads (0: all cores)");
    }

    void validate() {
        if (!all_students && roster.empty()) throw Failure{kUsage, "--roster is required unless --all-students is set"};
        for (const auto& c : cohorts) {
            auto parts = split(c, ':');
            if (parts.size() != 3 || parts[0].empty())
                throw Failure{kUsage, "--cohort expects LABEL:START:END, got '" + c + "'"};
            for (auto& p : parts) cohort_parts.push_back(p);
        }
        require_readable(transcripts, "transcripts");
        if (!roster.empty()) require_readable(roster, "roster");
        require_writable_parent(out);
    }

    cc_ingest_options ingest() {
        cc_ingest_options o;
        cc_ingest_options_init(&o);
        o.graduated_only = all_students ? 0 : 1;
        o.drop_summer = keep_summer ? 0 : 1;
        o.min_consecutive_terms = min_consecutive_terms;
        o.department_prefix = dept_prefix.empty() ? nullptr : dept_prefix.c_str();
        excluded_ptrs.clear();
        for (const auto& e : excluded) excluded_ptrs.push_back(e.c_str());
        o.excluded_courses = excluded_ptrs.data();
        o.n_excluded_courses = excluded_ptrs.size();
        ranges.clear();
        for (std::size_t i = 0; i + 2 < cohort_parts.size(); i += 3)
            ranges.push_back({cohort_parts[i].c_str(), cohort_parts[i + 1].c_str(), cohort_parts[i + 2].c_str()});
        o.cohorts = ranges.empty() ? nullptr : ranges.data();
        o.n_cohorts = ranges.size();
        return o;
    }

    cc_pair_criteria criteria() const {
        cc_pair_criteria c{};
        c.min_y_support = min_y_support;
        c.min_x_support = min_x_support;
        c.min_below_c_fraction = min_below_c;
        c.y_not_in_first_term = 1;
        return c;
    }

    cc_format fmt() const { return format == "json" ? CC_FORMAT_JSON : CC_FORMAT_TSV; }

    // Resolved configuration in key=value form. Input paths are reduced to file names
    // so reports do not depend on the working directory.
    std::string describe() const {
        std::ostringstream s;
        s << "transcripts=" << std::filesystem::path(transcripts).filename().string();
        s << " roster=" << (roster.empty() ? "-" : std::filesystem::path(roster).filename().string());
        s << " graduated_only=" << (all_students ? 0 : 1) << " drop_summer=" << (keep_summer ? 0 : 1)
          << " min_consecutive_terms=" << min_consecutive_terms;
        if (!dept_prefix.empty()) s << " dept_prefix=" << dept_prefix;
        for (const auto& e : excluded) s << " exclude=" << e;
        if (cohorts.empty()) s << " cohort=all";
        for (const auto& c : cohorts) s << " cohort=" << c;
        s << " min_y_support=" << min_y_support << " min_x_support=" << min_x_support
          << " min_below_c=" << fmt_double(min_below_c) << " k=" << folds << " seed=" << seed
          << " min_indicator_support=" << min_indicator_support;
        return s.str();
    }
};

using Dataset = Handle<cc_dataset, cc_dataset_free>;

void load(DataArgs& args, Dataset& ds) {
    cc_ingest_options o = args.ingest();
    check(cc_dataset_load_files(args.transcripts.c_str(), args.roster.empty() ? nullptr : args.roster.c_str(), &o,
                                &ds.p));
    std::fprintf(stderr, "ingest: %zu rows, %zu accepted, %zu rejected, %zu students dropped\n",
                 cc_dataset_data_rows(ds.p), cc_dataset_accepted_rows(ds.p), cc_dataset_rejected_rows(ds.p),
                 cc_dataset_dropped_students(ds.p));
}

struct AnalyzeArgs : DataArgs {
    double cutoff = 0.5;
    std::string y, x, dump_matches;
};

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (auto& ch : out)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '.') ch = '_';
    return out;
}

int run_analyze(AnalyzeArgs& a) {
    a.validate();
    if (!a.dump_matches.empty() && !std::filesystem::is_directory(a.dump_matches))
        throw Failure{kIo, "cannot write matches to " + a.dump_matches + " (no such directory)"};
    Dataset ds;
    load(a, ds);

    cc_analysis_options o;
    cc_analysis_options_init(&o);
    o.criteria = a.criteria();
    o.cutoff = a.cutoff;
    o.folds = a.folds;
    o.seed = a.seed;
    o.min_indicator_support = a.min_indicator_support;
    o.y_course = a.y.empty() ? nullptr : a.y.c_str();
    o.x_course = a.x.empty() ? nullptr : a.x.c_str();
    o.threads = a.threads;

    Handle<cc_analysis, cc_analysis_free> an;
    check(cc_analyze(ds.p, &o, &an.p));

    const std::size_t rows = cc_analysis_row_count(an.p);
    for (std::size_t i = 0; i < cc_analysis_skipped_count(an.p); ++i)
        std::fprintf(stderr, "skipped: %s\n", cc_analysis_skipped(an.p, i));
    if (rows == 0) {
        std::fprintf(stderr, "error: no estimable course pair\n");
        return kNothingEstimable;
    }

    std::string header = "coursecausal analyze " + a.describe() + " cutoff=" + fmt_double(a.cutoff);
    if (!a.y.empty()) header += " y=" + a.y;
    if (!a.x.empty()) header += " x=" + a.x;
    CString text;
    check(cc_analysis_render(an.p, a.fmt(), header.c_str(), &text.p));
    emit(a.out, text.p);

    if (!a.dump_matches.empty()) {
        for (std::size_t i = 0; i < rows; ++i) {
            cc_report_row r;
            check(cc_analysis_row(an.p, i, &r));
            CString csv;
            check(cc_analysis_matches_csv(an.p, i, &csv.p));
            auto path = std::filesystem::path(a.dump_matches) /
                        ("matches_" + sanitize(r.cohort) + "_" + sanitize(r.y_course) + "_" + sanitize(r.x_course) + ".csv");
            emit(path.string(), csv.p);
        }
    }
    return kOk;
}

struct SweepArgs : DataArgs {
    std::vector<double> cutoffs{0.1, 0.3, 0.4, 0.5, 0.6, 0.9};
    int top_k = 3;
    std::string prereqs;
};

int run_sweep(SweepArgs& a) {
    a.validate();
    std::string catalog;
    if (!a.prereqs.empty()) catalog = read_all(a.prereqs);
    Dataset ds;
    load(a, ds);

    cc_sweep_options o;
    cc_sweep_options_init(&o);
    o.criteria = a.criteria();
    o.cutoffs = a.cutoffs.data();
    o.n_cutoffs = a.cutoffs.size();
    o.top_k = a.top_k;
    o.folds = a.folds;
    o.seed = a.seed;
    o.min_indicator_support = a.min_indicator_support;
    o.threads = a.threads;

    Handle<cc_sweep, cc_sweep_free> sw;
    check(cc_sweep_run(ds.p, &o, &sw.p));
    if (cc_sweep_cohort_count(sw.p) == 0) {
        std::fprintf(stderr, "error: no cohort has a target course passing the pair criteria\n");
        return kNothingEstimable;
    }
    if (!catalog.empty()) check(cc_sweep_set_prereq_catalog(sw.p, catalog.data(), catalog.size()));

    std::string header = "coursecausal sweep " + a.describe() + " cutoffs=";
    for (std::size_t i = 0; i < a.cutoffs.size(); ++i) header += (i ? "," : "") + fmt_double(a.cutoffs[i]);
    header += " top_k=" + std::to_string(a.top_k);
    if (!a.prereqs.empty()) header += " prereqs=" + std::filesystem::path(a.prereqs).filename().string();
    CString text;
    check(cc_sweep_render(sw.p, a.fmt(), header.c_str(), &text.p));
    emit(a.out, text.p);
    return kOk;
}

struct SynthArgs {
    cc_synth_options o;
    std::vector<std::string> plants;
    std::string outdir;
    SynthArgs() { cc_synth_options_init(&o); }
};

int run_synth(SynthArgs& a) {
    std::vector<std::string> names;
    std::vector<cc_plant> plants;
    names.reserve(a.plants.size() * 2);
    for (const auto& p : a.plants) {
        auto parts = split(p, ':');
        double delta = 0.0;
        try {
            if (parts.size() != 3) throw std::invalid_argument("shape");
            std::size_t used = 0;
            delta = std::stod(parts[2], &used);
            if (used != parts[2].size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw Failure{kUsage, "--plant expects X:Y:DELTA, got '" + p + "'"};
        }
        names.push_back(parts[0]);
        names.push_back(parts[1]);
        plants.push_back({nullptr, nullptr, delta});
    }
    for (std::size_t i = 0; i < plants.size(); ++i) {
        plants[i].x_course = names[2 * i].c_str();
        plants[i].y_course = names[2 * i + 1].c_str();
    }
    a.o.plants = plants.data();
    a.o.n_plants = plants.size();

    Handle<cc_synth, cc_synth_free> s;
    check(cc_synth_generate(&a.o, &s.p));
    std::error_code ec;
    std::filesystem::create_directories(a.outdir, ec);
    if (ec) throw Failure{kIo, "cannot create " + a.outdir + ": " + ec.message()};
    check(cc_synth_write(s.p, a.outdir.c_str()));
    std::fprintf(stderr, "synth: wrote %s (%zu valid students)\n", a.outdir.c_str(), cc_synth_valid_students(s.p));
    return kOk;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Appends the settings of a --config file as flags, skipping keys already given on the
// command line so that flags win.
std::vector<std::string> with_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;

    auto given = [&](const std::string& flag) {
        for (std::size_t i = 1; i < static_cast<std::size_t>(argc); ++i)
            if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::istringstream in(read_all(path));
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Failure{kUsage, path + ":" + std::to_string(number) + ": expected key = value"};
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty() || key == "config")
            throw Failure{kUsage, path + ":" + std::to_string(number) + ": invalid key"};
        const std::string flag = "--" + key;
        if (given(flag)) continue;
        if (value == "true" || value == "false") {
            if (value == "true") args.push_back(flag);
            continue;
        }
        args.push_back(flag);
        args.push_back(value);
    }
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Estimate the effect of passing a prior course on a later course grade from transcripts.",
                 "coursecausal"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "coursecausal 0.1.0");

    AnalyzeArgs analyze;
    auto* cmd_analyze = app.add_subcommand("analyze", "Estimate the effect for every valid (Y, X) course pair");
    analyze.add_to(*cmd_analyze);
    cmd_analyze->add_option("--cutoff", analyze.cutoff, "Matching distance cutoff in (0, 1]");
    cmd_analyze->add_option("--y", analyze.y, "Restrict to one target course");
    cmd_analyze->add_option("--x", analyze.x, "Restrict to one prior course");
    cmd_analyze->add_option("--dump-matches", analyze.dump_matches, "Write matched pairs per row into this directory");


    SweepArgs sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "Compare top-k causal courses across matching cutoffs");
    sweep.add_to(*cmd_sweep);
    cmd_sweep->add_option("--cutoffs", sweep.cutoffs, "Increasing cutoffs in (0, 1]")->delimiter(',');
    cmd_sweep->add_option("--top-k", sweep.top_k, "Courses kept per target and cutoff");
    cmd_sweep->add_option("--prereqs", sweep.prereqs, "Catalog CSV prereq_course_id,target_course_id");


    SynthArgs synth;
    auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic cohort with planted effects");
    cmd_synth->add_option("--outdir", synth.outdir, "Directory for transcripts.csv, roster.txt, ground_truth.json")
        ->required();
    cmd_synth->add_option("--students", synth.o.n_students, "Number of students");
    cmd_synth->add_option("--courses", synth.o.n_courses, "Number of courses");
    cmd_synth->add_option("--plant", synth.plants, "Planted effect X:Y:DELTA (repeatable)");
    cmd_synth->add_option("--seed", synth.o.seed, "Random seed");
    cmd_synth->add_option("--min-terms", synth.o.min_terms, "Fewest terms per student");
    cmd_synth->add_option("--max-terms", synth.o.max_terms, "Most terms per student");
    cmd_synth->add_option("--min-load", synth.o.min_load, "Fewest courses per term");
    cmd_synth->add_option("--max-load", synth.o.max_load, "Most courses per term");
    cmd_synth->add_option("--ability-spread", synth.o.ability_spread, "Std dev of student ability");
    cmd_synth->add_option("--difficulty-spread", synth.o.difficulty_spread, "Std dev of course difficulty");
    cmd_synth->add_option("--noise-sd", synth.o.noise_sd, "Std dev of grade noise");
    cmd_synth->add_option("--target-shift", synth.o.target_difficulty_shift, "Extra difficulty of planted targets");
    cmd_synth->add_option("--x-before-y", synth.o.x_before_y_fraction, "Fraction of students taking X before Y");
    cmd_synth->add_option("--order-jitter", synth.o.order_jitter, "Per-student jitter on the course order");
    cmd_synth->add_option("--graduated-fraction", synth.o.graduated_fraction, "Fraction of students on the roster");


    std::string config_path;
    for (auto* sub : {cmd_analyze, cmd_sweep, cmd_synth})
        sub->add_option("--config", config_path, "File of key = value lines (# comments); flags take precedence");

    std::vector<std::string> args;
    try {
        args = with_config(argc, argv);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        return f.code;
    }
    std::vector<char*> cargs;
    for (auto& a : args) cargs.push_back(a.data());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (*cmd_analyze) return run_analyze(analyze);
        if (*cmd_sweep) return run_sweep(sweep);
        return run_synth(synth);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        if (f.code == kUsage) std::fprintf(stderr, "run with --help for usage\n");
        return f.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIo;
    }
}
