// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <sstream>

namespace coursecausal {

namespace {

using json = nlohmann::ordered_json;

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s = buf;
    if (s == "-0.0000" || s == "-0.000") s.erase(0, 1);
    return s;
}

void write_header(std::ostringstream& out, const std::string& header) {
    if (header.empty()) return;
    std::istringstream lines(header);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
}

json skipped_json(const std::vector<SkippedPair>& skipped) {
    json arr = json::array();
    for (const auto& s : skipped)
        arr.push_back({{"cohort", s.cohort}, {"y_course", s.y_course}, {"x_course", s.x_course}, {"reason", s.reason}});
    return arr;
}

} // namespace

std::string format_cutoff(double cutoff) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", cutoff);
    return buf;
}

std::string render_analysis_tsv(const AnalyzeRun& run, const std::string& header) {
    std::ostringstream out;
    write_header(out, header);
    out << "y_course\tx_course\tcohort\tate_means\tsignificant\tate_reg_mean\tate_reg_std\trmse_mean\tn_pairs\n";
    for (const auto& r : run.reports) {
        out << r.y_course << '\t' << r.x_course << '\t' << r.cohort << '\t' << fixed(r.ate_means, 4) << '\t'
            << (r.significant_at_01 ? "*" : "") << '\t' << fixed(r.ate_reg_mean, 4) << '\t'
            << fixed(r.ate_reg_std, 4) << '\t' << fixed(r.rmse_mean, 4) << '\t' << r.n_pairs << '\n';
    }
    return out.str();
}

std::string render_analysis_json(const AnalyzeRun& run, const std::string& header) {
    json doc;
    doc["header"] = header;
    doc["rows"] = json::array();
    for (const auto& r : run.reports) {
        json folds = json::array();
        for (const auto& f : r.per_fold)
            folds.push_back({{"beta_ate", f.beta_ate}, {"rmse", f.rmse}, {"regularized", f.regularized}});
        doc["rows"].push_back({{"y_course", r.y_course},
                               {"x_course", r.x_course},
                               {"cohort", r.cohort},
                               {"ate_means", r.ate_means},
                               {"p_value", r.p_value},
                               {"significant", r.significant_at_01},
                               {"ate_reg_mean", r.ate_reg_mean},
                               {"ate_reg_std", r.ate_reg_std},
                               {"rmse_mean", r.rmse_mean},
                               {"folds", r.folds},
                               {"n_pairs", r.n_pairs},
                               {"n_treatment", r.n_treatment},
                               {"n_control", r.n_control},
                               {"per_fold", folds}});
    }
    doc["skipped"] = skipped_json(run.skipped);
    return doc.dump(2) + "\n";
}

std::string render_sweep_tsv(const SweepRun& run, const std::string& header) {
    std::ostringstream out;
    write_header(out, header);
    for (const auto& c : run.cohorts) {
        const auto& cut = c.matrix.cutoffs;
        out << "# similarity cohort=" << c.cohort << " top_k=" << run.top_k << " targets=" << c.y_courses.size()
            << '\n';
        out << "cutoff";
        for (double d : cut) out << '\t' << format_cutoff(d);
        out << '\n';
        for (std::size_t i = 0; i < cut.size(); ++i) {
            out << format_cutoff(cut[i]);
            for (std::size_t j = 0; j < cut.size(); ++j)
                out << '\t' << (i == j ? std::string("*") : fixed(c.matrix.at(i, j), 3));
            out << '\n';
        }
        out << "# top-k cohort=" << c.cohort << '\n';
        out << "cutoff\ty_course\trank\tx_course\tate_reg_mean\n";
        for (std::size_t i = 0; i < cut.size(); ++i)
            for (std::size_t y = 0; y < c.y_courses.size(); ++y)
                for (std::size_t r = 0; r < c.top[i][y].size(); ++r)
                    out << format_cutoff(cut[i]) << '\t' << c.y_courses[y] << '\t' << (r + 1) << '\t'
                        << c.top[i][y][r].x_course << '\t' << fixed(c.top[i][y][r].ate_reg_mean, 4) << '\n';
        if (run.catalog) {
            out << "# prereq-recall cohort=" << c.cohort << '\n';
            out << "cutoff\ty_course\thits\tknown_prereqs\trecall_at_k\n";
            for (std::size_t i = 0; i < cut.size(); ++i)
                for (std::size_t y = 0; y < c.y_courses.size(); ++y) {
                    std::vector<std::string> names;
                    for (const auto& r : c.top[i][y]) names.push_back(r.x_course);
                    auto o = prereq_overlap(*run.catalog, c.y_courses[y], names, run.top_k);
                    if (o.known_prereqs == 0) continue;
                    out << format_cutoff(cut[i]) << '\t' << c.y_courses[y] << '\t' << o.hits << '\t'
                        << o.known_prereqs << '\t' << fixed(o.recall_at_k, 3) << '\n';
                }
        }
    }
    return out.str();
}

std::string render_sweep_json(const SweepRun& run, const std::string& header) {
    json doc;
    doc["header"] = header;
    doc["top_k"] = run.top_k;
    doc["cohorts"] = json::array();
    for (const auto& c : run.cohorts) {
        json cj;
        cj["cohort"] = c.cohort;
        cj["cutoffs"] = c.matrix.cutoffs;
        cj["similarity"] = c.matrix.values;
        cj["y_courses"] = c.y_courses;
        json top = json::array();
        for (std::size_t i = 0; i < c.matrix.cutoffs.size(); ++i)
            for (std::size_t y = 0; y < c.y_courses.size(); ++y) {
                json ranked = json::array();
                std::vector<std::string> names;
                for (const auto& r : c.top[i][y]) {
                    ranked.push_back({{"x_course", r.x_course}, {"ate_reg_mean", r.ate_reg_mean}});
                    names.push_back(r.x_course);
                }
                json entry{{"cutoff", c.matrix.cutoffs[i]}, {"y_course", c.y_courses[y]}, {"top", ranked}};
                if (run.catalog) {
                    auto o = prereq_overlap(*run.catalog, c.y_courses[y], names, run.top_k);
                    entry["prereq"] = {{"hits", o.hits}, {"known_prereqs", o.known_prereqs}, {"recall_at_k", o.recall_at_k}};
                }
                top.push_back(std::move(entry));
            }
        cj["top"] = std::move(top);
        doc["cohorts"].push_back(std::move(cj));
    }
    doc["skipped"] = skipped_json(run.skipped);
    return doc.dump(2) + "\n";
}

} // namespace coursecausal
