// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/estimator.hpp"

#include "coursecausal/error.hpp"
#include "coursecausal/rng.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace coursecausal {

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0; // unbiased
};

Moments moments(std::span<const double> v) {
    Moments m;
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.var = v.size() > 1 ? ss / static_cast<double>(v.size() - 1) : 0.0;
    return m;
}

} // namespace

WelchTest welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw NotEstimable(Stage::Means, "t-test needs at least two values per sample");
    const Moments ma = moments(a), mb = moments(b);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double va = ma.var / na, vb = mb.var / nb;
    const double diff = ma.mean - mb.mean;

    WelchTest w;
    if (va + vb == 0.0) {
        w.t = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
        w.df = na + nb - 2.0;
        w.p_value = diff == 0.0 ? 1.0 : 0.0;
        return w;
    }
    w.t = diff / std::sqrt(va + vb);
    w.df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    // P(|T| > t) = I_{df/(df+t^2)}(df/2, 1/2)
    const double xarg = w.df / (w.df + w.t * w.t);
    w.p_value = std::clamp(boost::math::ibeta(w.df / 2.0, 0.5, xarg), 0.0, 1.0);
    return w;
}

MeansEstimate ate_means(const MatchedSample& sample) {
    if (sample.pairs.size() < 2) throw NotEstimable(Stage::Means, "fewer than two matched pairs");
    std::vector<double> t, c;
    t.reserve(sample.pairs.size());
    c.reserve(sample.pairs.size());
    for (const auto& p : sample.pairs) {
        t.push_back(p.treatment.outcome);
        c.push_back(p.control.outcome);
    }
    MeansEstimate est;
    est.ate = moments(t).mean - moments(c).mean;
    est.p_value = welch_t_test(t, c).p_value;
    return est;
}

namespace {

template <class RowFn>
void for_each_row(const MatchedSample& sample, RowFn&& fn) {
    for (const auto& p : sample.pairs) {
        fn(p.treatment);
        fn(p.control);
    }
}

} // namespace

RegressionDesign build_design(const MatchedSample& sample, const DesignOptions& options) {
    const auto rows = static_cast<Eigen::Index>(2 * sample.pairs.size());

    std::map<std::string, int> support;
    for_each_row(sample, [&](const GroupedStudent& s) {
        for (const auto& c : s.covariates.prior_courses) ++support[c];
    });
    std::vector<std::string> vocab;
    for (const auto& [course, n] : support) {
        if (n < options.min_indicator_support || n == rows) continue;
        if (std::find(options.excluded_courses.begin(), options.excluded_courses.end(), course) !=
            options.excluded_courses.end())
            continue;
        vocab.push_back(course);
    }

    RegressionDesign d;
    d.columns = {"intercept", "treatment", "gpa", "credits"};
    d.columns.insert(d.columns.end(), vocab.begin(), vocab.end());
    d.x = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(d.columns.size()));
    d.y.resize(rows);

    Eigen::Index r = 0;
    for_each_row(sample, [&](const GroupedStudent& s) {
        d.y(r) = s.outcome;
        d.x(r, 0) = 1.0;
        d.x(r, 1) = s.arm == Arm::Treatment ? 1.0 : 0.0;
        d.x(r, 2) = s.covariates.gpa;
        d.x(r, 3) = s.covariates.total_credits;
        for (const auto& c : s.covariates.prior_courses) {
            auto it = std::lower_bound(vocab.begin(), vocab.end(), c);
            if (it != vocab.end() && *it == c) d.x(r, 4 + (it - vocab.begin())) = 1.0;
        }
        ++r;
    });
    return d;
}

RegressionDesign build_means_design(const MatchedSample& sample) {
    const auto rows = static_cast<Eigen::Index>(2 * sample.pairs.size());
    RegressionDesign d;
    d.columns = {"intercept", "treatment"};
    d.x = Eigen::MatrixXd::Zero(rows, 2);
    d.y.resize(rows);
    Eigen::Index r = 0;
    for_each_row(sample, [&](const GroupedStudent& s) {
        d.y(r) = s.outcome;
        d.x(r, 0) = 1.0;
        d.x(r, 1) = s.arm == Arm::Treatment ? 1.0 : 0.0;
        ++r;
    });
    return d;
}

std::vector<int> stratified_folds(const RegressionDesign& design, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("k must be at least 2");
    const Eigen::Index n = design.x.rows();
    if (n < 2 * static_cast<Eigen::Index>(k))
        throw NotEstimable(Stage::Regression, "fewer than 2k rows for k-fold cross-validation");

    std::vector<Eigen::Index> treated, untreated;
    for (Eigen::Index i = 0; i < n; ++i)
        (design.x(i, RegressionDesign::kTreatment) > 0.5 ? treated : untreated).push_back(i);
    if (treated.size() < static_cast<std::size_t>(k) || untreated.size() < static_cast<std::size_t>(k))
        throw NotEstimable(Stage::Regression, "a fold would be missing an arm");

    Rng rng(seed);
    rng.shuffle(treated);
    rng.shuffle(untreated);
    std::vector<int> fold(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < treated.size(); ++i)
        fold[static_cast<std::size_t>(treated[i])] = static_cast<int>(i % static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < untreated.size(); ++i)
        fold[static_cast<std::size_t>(untreated[i])] = static_cast<int>(i % static_cast<std::size_t>(k));
    return fold;
}

CrossValidation cross_validated_ate(const RegressionDesign& design, int k, std::uint64_t seed) {
    const std::vector<int> fold = stratified_folds(design, k, seed);
    const Eigen::Index n = design.x.rows();
    const Eigen::Index p = design.x.cols();

    CrossValidation cv;
    for (int f = 0; f < k; ++f) {
        std::vector<Eigen::Index> train, test;
        for (Eigen::Index i = 0; i < n; ++i)
            (fold[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);

        Eigen::MatrixXd xt(static_cast<Eigen::Index>(train.size()), p);
        Eigen::VectorXd yt(static_cast<Eigen::Index>(train.size()));
        for (std::size_t i = 0; i < train.size(); ++i) {
            xt.row(static_cast<Eigen::Index>(i)) = design.x.row(train[i]);
            yt(static_cast<Eigen::Index>(i)) = design.y(train[i]);
        }
        const OlsFit fit = fit_ols(xt, yt);

        double sse = 0.0;
        for (Eigen::Index i : test) {
            const double e = design.x.row(i).dot(fit.beta) - design.y(i);
            sse += e * e;
        }
        cv.folds.push_back({fit.beta(RegressionDesign::kTreatment),
                            std::sqrt(sse / static_cast<double>(test.size())), fit.regularized});
    }

    const double kk = static_cast<double>(k);
    for (const auto& f : cv.folds) {
        cv.ate_reg_mean += f.beta_ate / kk;
        cv.rmse_mean += f.rmse / kk;
    }
    double ss = 0.0;
    for (const auto& f : cv.folds) ss += (f.beta_ate - cv.ate_reg_mean) * (f.beta_ate - cv.ate_reg_mean);
    cv.ate_reg_std = std::sqrt(ss / (kk - 1.0));
    return cv;
}

void AnalysisOptions::validate() const {
    if (!(cutoff > 0.0 && cutoff <= 1.0)) throw ConfigError("cutoff must lie in (0, 1]");
    if (folds < 2) throw ConfigError("k must be at least 2");
    if (min_indicator_support < 1) throw ConfigError("min_indicator_support must be positive");
}

PairAnalysis::PairAnalysis(const Cohort& cohort, const CoursePair& pair, double max_cutoff)
    : pair_(pair), cohort_label_(cohort.label()) {
    Groups groups = build_groups(cohort, pair);
    candidates_ = std::make_shared<const CandidateSet>(std::move(groups.treatment),
                                                       std::move(groups.control), max_cutoff);
}

AteReport PairAnalysis::run(const AnalysisOptions& options) const {
    options.validate();
    AteReport report;
    report.y_course = pair_.y_course;
    report.x_course = pair_.x_course;
    report.cohort = cohort_label_;
    report.folds = options.folds;
    report.n_treatment = candidates_->treatment().size();
    report.n_control = candidates_->control().size();

    report.sample = candidates_->match(options.cutoff);
    report.n_pairs = report.sample.pairs.size();

    const MeansEstimate means = ate_means(report.sample);
    report.ate_means = means.ate;
    report.p_value = means.p_value;
    report.significant_at_01 = means.p_value < kSignificanceLevel;

    DesignOptions design_options;
    design_options.min_indicator_support = options.min_indicator_support;
    design_options.excluded_courses = {pair_.x_course, pair_.y_course};
    const CrossValidation cv =
        cross_validated_ate(build_design(report.sample, design_options), options.folds, options.seed);
    report.ate_reg_mean = cv.ate_reg_mean;
    report.ate_reg_std = cv.ate_reg_std;
    report.rmse_mean = cv.rmse_mean;
    report.per_fold = cv.folds;
    return report;
}

AteReport analyze_pair(const Cohort& cohort, const CoursePair& pair, const AnalysisOptions& options) {
    options.validate();
    return PairAnalysis(cohort, pair, options.cutoff).run(options);
}

} // namespace coursecausal
