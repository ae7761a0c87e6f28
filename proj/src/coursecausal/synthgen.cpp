// Copyright 2026 The coursecausal Authors
// SPDX-License-Identifier: Apache-2.0

#include "coursecausal/synthgen.hpp"

#include "coursecausal/domain.hpp"
#include "coursecausal/error.hpp"
#include "coursecausal/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace coursecausal {

void SynthConfig::validate() const {
    if (n_students < 1) throw ConfigError("n_students must be at least 1");
    if (n_courses < 2) throw ConfigError("n_courses must be at least 2");
    if (min_terms < 1 || max_terms < min_terms) throw ConfigError("invalid term range");
    if (min_load < 1 || max_load < min_load) throw ConfigError("invalid per-term load range");
    if (ability_spread < 0 || difficulty_spread < 0 || noise_sd < 0 || order_jitter < 0)
        throw ConfigError("spreads must be non-negative");
    if (!(x_before_y_fraction >= 0.0 && x_before_y_fraction <= 1.0))
        throw ConfigError("x_before_y_fraction must lie in [0, 1]");
    if (!(graduated_fraction > 0.0 && graduated_fraction <= 1.0))
        throw ConfigError("graduated_fraction must lie in (0, 1]");
    if (start_window_terms < 1) throw ConfigError("start_window_terms must be at least 1");
    std::set<std::string> named;
    for (const auto& p : planted_effects) {
        if (p.x_course.empty() || p.y_course.empty()) throw ConfigError("planted course ids must be non-empty");
        if (p.x_course == p.y_course) throw ConfigError("planted effect pairs " + p.x_course + " with itself");
        if (!std::isfinite(p.delta)) throw ConfigError("planted delta must be finite");
        named.insert(p.x_course);
        named.insert(p.y_course);
    }
    if (named.size() > static_cast<std::size_t>(n_courses))
        throw ConfigError("more planted courses than n_courses");
}

namespace {

struct Course {
    std::string id;
    double difficulty = 0.0;
    double credits = 4.0;
    double level = 0.0;
};

struct Draft {
    std::string transcripts;
    std::string roster;
    std::size_t valid = 0;
    bool arms_populated = true;
};

std::vector<std::string> course_names(const SynthConfig& config) {
    std::vector<std::string> names;
    for (const auto& p : config.planted_effects)
        for (const auto* id : {&p.x_course, &p.y_course})
            if (std::find(names.begin(), names.end(), *id) == names.end()) names.push_back(*id);
    const int width = std::max(2, static_cast<int>(std::to_string(config.n_courses).size()));
    for (int i = 1; names.size() < static_cast<std::size_t>(config.n_courses); ++i) {
        std::ostringstream s;
        s << 'C' << std::setw(width) << std::setfill('0') << i;
        if (std::find(names.begin(), names.end(), s.str()) == names.end()) names.push_back(s.str());
    }
    return names;
}

std::string format_credits(double c) {
    std::ostringstream s;
    s << c;
    return s.str();
}

Draft draft(const SynthConfig& config, const std::vector<std::string>& names, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = names.size();

    std::set<std::string> targets;
    for (const auto& p : config.planted_effects) targets.insert(p.y_course);

    std::vector<Course> courses(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    for (std::size_t i = 0; i < n; ++i) {
        courses[i].id = names[i];
        courses[i].difficulty = rng.normal(0.0, config.difficulty_spread);
        // Fixed for targets: a randomly easy target can end up below the support thresholds.
        if (targets.count(names[i])) courses[i].difficulty = config.target_difficulty_shift;
        courses[i].credits = rng.bernoulli(0.5) ? 4.0 : 3.0;
        courses[i].level = static_cast<double>(order[i]) / static_cast<double>(n);
    }
    auto index_of = [&](const std::string& id) {
        return static_cast<std::size_t>(std::find(names.begin(), names.end(), id) - names.begin());
    };
    std::set<std::size_t> planted_ids;
    for (const auto& p : config.planted_effects) {
        planted_ids.insert(index_of(p.x_course));
        planted_ids.insert(index_of(p.y_course));
    }

    const Term first{config.first_year, Season::Fall};
    std::ostringstream csv, roster;
    csv << "student_id,course_id,term,grade,credits\n";
    Draft out;
    std::vector<std::size_t> treated(config.planted_effects.size()), untreated(config.planted_effects.size());
    const int id_width = static_cast<int>(std::to_string(config.n_students).size());

    for (int s = 0; s < config.n_students; ++s) {
        std::ostringstream sid;
        sid << 'S' << std::setw(id_width) << std::setfill('0') << (s + 1);
        const double ability = rng.normal(0.0, config.ability_spread);

        const int terms = config.min_terms + static_cast<int>(rng.below(
            static_cast<std::uint64_t>(config.max_terms - config.min_terms + 1)));
        std::vector<int> loads(static_cast<std::size_t>(terms));
        int total = 0;
        for (auto& l : loads) {
            l = config.min_load + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.max_load - config.min_load + 1)));
            total += l;
        }
        for (std::size_t t = loads.size(); total > static_cast<int>(n) && t > 0; --t) {
            const int cut = std::min(total - static_cast<int>(n), loads[t - 1] - 1);
            loads[t - 1] -= cut;
            total -= cut;
        }
        while (total > static_cast<int>(n)) { // every term at one course
            loads.pop_back();
            --total;
        }

        // Students follow the common course order, perturbed by a per-student jitter, and
        // take the first `total` courses of it.
        std::vector<double> key(n);
        for (std::size_t i = 0; i < n; ++i) key[i] = courses[i].level + rng.normal(0.0, config.order_jitter);
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i) pool[i] = i;
        std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
        std::vector<std::size_t> chosen(pool.begin(), pool.begin() + total);
        auto include = [&](std::size_t c) {
            if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) return;
            for (auto& slot : chosen)
                if (!planted_ids.count(slot)) {
                    slot = c;
                    return;
                }
        };
        std::vector<bool> x_first(config.planted_effects.size());
        for (std::size_t p = 0; p < config.planted_effects.size(); ++p) {
            include(index_of(config.planted_effects[p].y_course));
            x_first[p] = rng.bernoulli(config.x_before_y_fraction);
            if (x_first[p]) include(index_of(config.planted_effects[p].x_course));
        }

        std::vector<std::pair<double, std::size_t>> keyed;
        for (auto c : chosen) keyed.emplace_back(key[c], c);
        std::sort(keyed.begin(), keyed.end());
        std::vector<std::size_t> seq;
        for (const auto& k : keyed) seq.push_back(k.second);

        std::vector<int> term_of(seq.size());
        for (std::size_t pos = 0, t = 0; t < loads.size(); ++t)
            for (int j = 0; j < loads[t]; ++j) term_of[pos++] = static_cast<int>(t);
        auto pos_of = [&](std::size_t c) -> std::ptrdiff_t {
            auto it = std::find(seq.begin(), seq.end(), c);
            return it == seq.end() ? -1 : it - seq.begin();
        };

        for (std::size_t p = 0; p < config.planted_effects.size(); ++p) {
            const auto xp = pos_of(index_of(config.planted_effects[p].x_course));
            const auto yp = pos_of(index_of(config.planted_effects[p].y_course));
            if (xp < 0 || yp < 0) continue;
            auto xs = static_cast<std::size_t>(xp), ys = static_cast<std::size_t>(yp);
            if (x_first[p]) {
                if (xs > ys) std::swap(seq[xs], seq[ys]), std::swap(xs, ys);
                if (term_of[xs] == term_of[ys]) {
                    if (term_of[xs] > 0) std::swap(seq[xs], seq[0]);
                    else if (term_of[ys] < term_of.back()) std::swap(seq[ys], seq.back());
                }
            } else if (term_of[xs] < term_of[ys]) {
                std::swap(seq[xs], seq[ys]);
            }
        }

        // Grades in term order.
        std::map<std::size_t, std::pair<int, double>> taken; // course -> (term, points)
        for (std::size_t pos = 0; pos < seq.size(); ++pos) {
            const std::size_t c = seq[pos];
            double raw = 3.0 + ability - courses[c].difficulty;
            for (const auto& pe : config.planted_effects) {
                if (pe.y_course != names[c]) continue;
                auto it = taken.find(index_of(pe.x_course));
                if (it != taken.end() && it->second.first < term_of[pos] && it->second.second > kCPoints)
                    raw += pe.delta;
            }
            raw += rng.normal(0.0, config.noise_sd);
            const Grade g = Grade::nearest(std::clamp(raw, 0.0, 4.0));
            taken[c] = {term_of[pos], g.points()};
        }
        const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.start_window_terms)));
        std::vector<std::tuple<int, std::string, std::size_t>> ordered;
        for (std::size_t pos = 0; pos < seq.size(); ++pos) ordered.emplace_back(term_of[pos], names[seq[pos]], seq[pos]);
        std::sort(ordered.begin(), ordered.end());
        for (const auto& [t, name, c] : ordered) {
            Term term = first;
            for (int i = 0; i < start + t; ++i) term = next_regular_term(term);
            const double pts = taken[c].second;
            csv << sid.str() << ',' << name << ',' << term.to_string() << ','
                << Grade::nearest(pts).text() << ',' << format_credits(courses[c].credits) << '\n';
        }

        for (std::size_t p = 0; p < config.planted_effects.size(); ++p) {
            const auto& pe = config.planted_effects[p];
            auto y = taken.find(index_of(pe.y_course));
            if (y == taken.end() || y->second.first == 0) continue;
            auto x = taken.find(index_of(pe.x_course));
            if (x != taken.end() && x->second.first < y->second.first && x->second.second > kCPoints)
                ++treated[p];
            else if (x == taken.end() || x->second.first != y->second.first)
                ++untreated[p];
        }

        const bool graduated = rng.bernoulli(config.graduated_fraction);
        if (graduated) roster << sid.str() << '\n';
        if (graduated && loads.size() >= 2) ++out.valid;
    }

    for (std::size_t p = 0; p < config.planted_effects.size(); ++p)
        if (treated[p] == 0 || untreated[p] == 0) out.arms_populated = false;
    out.transcripts = csv.str();
    out.roster = roster.str();
    return out;
}

} // namespace

SynthDataset generate(const SynthConfig& config) {
    config.validate();
    const auto names = course_names(config);

    Rng reseed(config.seed);
    std::uint64_t seed = config.seed;
    for (int attempt = 1; attempt <= 10; ++attempt) {
        Draft d = draft(config, names, seed);
        if (d.arms_populated) {
            SynthDataset out;
            out.transcripts_csv = std::move(d.transcripts);
            out.roster = std::move(d.roster);
            out.ground_truth = config.planted_effects;
            out.courses = names;
            out.valid_students = d.valid;
            out.seed_used = seed;
            out.attempts = attempt;

            nlohmann::ordered_json gt;
            gt["seed"] = config.seed;
            gt["planted_effects"] = nlohmann::ordered_json::array();
            for (const auto& p : config.planted_effects)
                gt["planted_effects"].push_back({{"x", p.x_course}, {"y", p.y_course}, {"delta", p.delta}});
            gt["valid_students"] = out.valid_students;
            out.ground_truth_json = gt.dump(2) + "\n";
            return out;
        }
        seed = reseed.below(std::numeric_limits<std::uint64_t>::max());
    }
    throw ConfigError("synthetic data left a planted pair with an empty arm after 10 attempts");
}

} // namespace coursecausal
