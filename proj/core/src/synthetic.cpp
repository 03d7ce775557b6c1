#include "sentpw/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "sentpw/errors.hpp"

namespace sentpw {

Dataset make_synthetic_corpus(const SyntheticConfig& cfg) {
    if (cfg.classes < 2 || cfg.per_class < 1 || cfg.template_len < 1 || cfg.perturbed < 0 ||
        cfg.perturbed > cfg.template_len || cfg.vocab < cfg.template_len) {
        throw ConfigError("invalid synthetic corpus configuration");
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> word(0, cfg.vocab - 1);
    auto w = [](int id) { return "w" + std::to_string(id); };

    std::vector<int> all_words(static_cast<std::size_t>(cfg.vocab));
    std::iota(all_words.begin(), all_words.end(), 0);
    Dataset ds;
    ds.kind = DatasetKind::classes;
    for (int c = 0; c < cfg.classes; ++c) {
        for (int k = 0; k < cfg.template_len; ++k) {
            std::uniform_int_distribution<int> pick(k, cfg.vocab - 1);
            std::swap(all_words[static_cast<std::size_t>(k)], all_words[static_cast<std::size_t>(pick(rng))]);
        }
        const std::vector<int> tmpl(all_words.begin(), all_words.begin() + cfg.template_len);
        std::vector<int> positions(static_cast<std::size_t>(cfg.template_len));
        for (int s = 0; s < cfg.per_class; ++s) {
            std::vector<int> tokens = tmpl;
            std::iota(positions.begin(), positions.end(), 0);
            for (int k = 0; k < cfg.perturbed; ++k) {
                std::uniform_int_distribution<int> pick(k, cfg.template_len - 1);
                std::swap(positions[static_cast<std::size_t>(k)], positions[static_cast<std::size_t>(pick(rng))]);
                tokens[static_cast<std::size_t>(positions[static_cast<std::size_t>(k)])] = word(rng);
            }
            std::string text;
            for (std::size_t t = 0; t < tokens.size(); ++t) {
                if (t) text.push_back(' ');
                text += w(tokens[t]);
            }
            ds.classes.push_back({make_sentence(std::move(text), TokenizeMode::whitespace), c});
        }
    }
    return ds;
}

HeldOutSplit split_held_out(const Dataset& classes, std::size_t held_out_per_class) {
    HeldOutSplit split;
    split.train.kind = split.held_out.kind = DatasetKind::classes;
    for (const auto& [label, rows] : classes.class_groups()) {
        const std::size_t keep = rows.size() > held_out_per_class ? rows.size() - held_out_per_class : 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            (i < keep ? split.train : split.held_out).classes.push_back(classes.classes[rows[i]]);
        }
    }
    return split;
}

namespace {

std::vector<std::vector<std::size_t>> usable_groups(const Dataset& classes, std::size_t min_size) {
    std::vector<std::vector<std::size_t>> groups;
    for (const auto& [label, rows] : classes.class_groups()) {
        if (rows.size() >= min_size) groups.push_back(rows);
    }
    return groups;
}

}  // namespace

Dataset sample_triplets(const Dataset& classes, std::size_t count, std::uint64_t seed) {
    const auto groups = usable_groups(classes, 2);
    if (groups.empty() || classes.class_groups().size() < 2) {
        throw DataError("triplet sampling needs a class with two records and a second class");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> any(0, classes.classes.size() - 1);
    std::uniform_int_distribution<std::size_t> group(0, groups.size() - 1);
    Dataset out;
    out.kind = DatasetKind::triplets;
    while (out.triplets.size() < count) {
        const auto& g = groups[group(rng)];
        std::uniform_int_distribution<std::size_t> member(0, g.size() - 1);
        const std::size_t a = g[member(rng)];
        const std::size_t p = g[member(rng)];
        const std::size_t n = any(rng);
        if (a == p || classes.classes[n].class_id == classes.classes[a].class_id) continue;
        out.triplets.push_back(
            {classes.classes[a].sentence, classes.classes[p].sentence, classes.classes[n].sentence});
    }
    return out;
}

Dataset sample_pairs(const Dataset& classes, std::size_t count, std::uint64_t seed) {
    const auto groups = usable_groups(classes, 2);
    if (groups.empty() || classes.class_groups().size() < 2) {
        throw DataError("pair sampling needs a class with two records and a second class");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> any(0, classes.classes.size() - 1);
    std::uniform_int_distribution<std::size_t> group(0, groups.size() - 1);
    Dataset out;
    out.kind = DatasetKind::pairs;
    while (out.pairs.size() < count) {
        const bool positive = out.pairs.size() % 2 == 0;
        const auto& g = groups[group(rng)];
        std::uniform_int_distribution<std::size_t> member(0, g.size() - 1);
        const std::size_t a = g[member(rng)];
        const std::size_t b = positive ? g[member(rng)] : any(rng);
        const bool same = classes.classes[a].class_id == classes.classes[b].class_id;
        if (a == b || same != positive) continue;
        out.pairs.push_back({classes.classes[a].sentence, classes.classes[b].sentence, positive ? 1 : 0});
    }
    return out;
}

std::string to_tsv(const Dataset& ds) {
    std::string out;
    for (const auto& p : ds.pairs) out += p.first.text + '\t' + p.second.text + '\t' + std::to_string(p.label) + '\n';
    for (const auto& t : ds.triplets) {
        out += t.anchor.text + '\t' + t.positive.text + '\t' + t.negative.text + '\n';
    }
    for (const auto& c : ds.classes) out += c.sentence.text + '\t' + std::to_string(c.class_id) + '\n';
    return out;
}

}  // namespace sentpw
