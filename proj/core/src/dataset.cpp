#include "sentpw/dataset.hpp"

#include <numeric>
#include <unordered_map>

#include "sentpw/errors.hpp"
#include "sentpw/poi.hpp"
#include "sentpw/tsv.hpp"

namespace sentpw {

DatasetKind parse_dataset_kind(std::string_view name) {
    if (name == "pairs") return DatasetKind::pairs;
    if (name == "triplets") return DatasetKind::triplets;
    if (name == "classes") return DatasetKind::classes;
    throw ConfigError("unknown dataset kind '" + std::string(name) +
                      "' (expected pairs, triplets or classes)");
}

std::string_view to_string(DatasetKind kind) {
    switch (kind) {
        case DatasetKind::pairs: return "pairs";
        case DatasetKind::triplets: return "triplets";
        case DatasetKind::classes: return "classes";
    }
    return "classes";
}

std::size_t Dataset::size() const {
    switch (kind) {
        case DatasetKind::pairs: return pairs.size();
        case DatasetKind::triplets: return triplets.size();
        case DatasetKind::classes: return classes.size();
    }
    return 0;
}

std::vector<Sentence> Dataset::sentences() const {
    std::vector<Sentence> out;
    for (const auto& p : pairs) {
        out.push_back(p.first);
        out.push_back(p.second);
    }
    for (const auto& t : triplets) {
        out.push_back(t.anchor);
        out.push_back(t.positive);
        out.push_back(t.negative);
    }
    for (const auto& c : classes) out.push_back(c.sentence);
    return out;
}

std::map<int, std::vector<std::size_t>> Dataset::class_groups() const {
    std::map<int, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < classes.size(); ++i) groups[classes[i].class_id].push_back(i);
    return groups;
}

Dataset parse_dataset(std::string_view content, DatasetKind kind, TokenizeMode mode) {
    Dataset ds;
    ds.kind = kind;
    const std::size_t arity = kind == DatasetKind::classes ? 2 : 3;
    auto sentence = [mode](std::string_view field, std::size_t row) {
        try {
            return make_sentence(std::string(field), mode);
        } catch (const std::invalid_argument& e) {
            throw DataError(e.what(), row);
        }
    };
    for_each_row(content, [&](std::size_t row, const std::vector<std::string_view>& f) {
        if (f.size() != arity) {
            throw DataError("expected " + std::to_string(arity) + " tab-separated fields for " +
                                std::string(to_string(kind)) + ", got " + std::to_string(f.size()),
                            row);
        }
        switch (kind) {
            case DatasetKind::pairs: {
                const int label = parse_int_field(f[2], "pair label", row);
                if (label != 0 && label != 1) {
                    throw DataError("pair label must be 0 or 1, got " + std::to_string(label), row);
                }
                ds.pairs.push_back({sentence(f[0], row), sentence(f[1], row), label});
                break;
            }
            case DatasetKind::triplets:
                ds.triplets.push_back({sentence(f[0], row), sentence(f[1], row), sentence(f[2], row)});
                break;
            case DatasetKind::classes: {
                const int cls = parse_int_field(f[1], "class id", row);
                if (cls < 0) throw DataError("class id must be non-negative", row);
                ds.classes.push_back({sentence(f[0], row), cls});
                break;
            }
        }
    });
    return ds;
}

Dataset load_dataset(const std::filesystem::path& path, DatasetKind kind, TokenizeMode mode) {
    return parse_dataset(read_text_file(path), kind, mode);
}

Dataset load_poi_dataset(const std::filesystem::path& path) {
    const auto records = load_poi(path);
    Dataset ds;
    ds.kind = DatasetKind::classes;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].entity_id) {
            throw DataError("POI record has no entity id column (needed for training/retrieval)", i + 1);
        }
        if (*records[i].entity_id < 0) throw DataError("entity id must be non-negative", i + 1);
        ds.classes.push_back({poi_to_sentence(records[i]), *records[i].entity_id});
    }
    return ds;
}

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;

    std::size_t add() {
        parent.push_back(parent.size());
        return parent.size() - 1;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

Dataset pairs_to_classes(const Dataset& pairs) {
    if (pairs.kind != DatasetKind::pairs) throw ConfigError("pairs_to_classes needs a pairs dataset");
    std::unordered_map<std::string, std::size_t> node_of;
    std::vector<const Sentence*> nodes;
    DisjointSets sets;
    auto node = [&](const Sentence& s) {
        const auto [it, inserted] = node_of.emplace(s.text, nodes.size());
        if (inserted) {
            nodes.push_back(&s);
            sets.add();
        }
        return it->second;
    };
    for (const auto& p : pairs.pairs) {
        const std::size_t a = node(p.first);
        const std::size_t b = node(p.second);
        if (p.label == 1) sets.unite(a, b);
    }
    Dataset out;
    out.kind = DatasetKind::classes;
    std::unordered_map<std::size_t, int> class_of_root;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::size_t root = sets.find(i);
        const auto [it, inserted] =
            class_of_root.emplace(root, static_cast<int>(class_of_root.size()));
        out.classes.push_back({*nodes[i], it->second});
    }
    return out;
}

}  // namespace sentpw
