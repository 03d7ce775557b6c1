#ifndef SENTPW_DATASET_HPP
#define SENTPW_DATASET_HPP

#include <filesystem>
#include <map>
#include <string_view>
#include <vector>

#include "sentpw/tokenizer.hpp"

namespace sentpw {

enum class DatasetKind { pairs, triplets, classes };

DatasetKind parse_dataset_kind(std::string_view name);
std::string_view to_string(DatasetKind kind);

struct PairRecord {
    Sentence first;
    Sentence second;
    int label = 0;  // 1 = same meaning
};

struct TripletRecord {
    Sentence anchor;
    Sentence positive;
    Sentence negative;
};

struct ClassRecord {
    Sentence sentence;
    int class_id = 0;
};

// Only the vector matching `kind` is populated.
struct Dataset {
    DatasetKind kind = DatasetKind::classes;
    std::vector<PairRecord> pairs;
    std::vector<TripletRecord> triplets;
    std::vector<ClassRecord> classes;

    std::size_t size() const;
    // Every sentence in file order; used for vocabulary construction.
    std::vector<Sentence> sentences() const;
    // class id -> record indices, classes ascending, indices ascending.
    std::map<int, std::vector<std::size_t>> class_groups() const;
};

// Tab-separated, no header, one record per line. Blank lines are skipped.
// Throws DataError naming the 1-based row on wrong arity or bad labels.
Dataset load_dataset(const std::filesystem::path& path, DatasetKind kind, TokenizeMode mode);
Dataset parse_dataset(std::string_view content, DatasetKind kind, TokenizeMode mode);

// POI rows (with entity ids) as a classes dataset of poi_to_sentence outputs.
Dataset load_poi_dataset(const std::filesystem::path& path);

// Collapses a pairs dataset into classes: sentences with identical text share a
// node, positive pairs are merged with union-find, and each connected
// component becomes one class (ids numbered in first-appearance order).
Dataset pairs_to_classes(const Dataset& pairs);

}  // namespace sentpw

#endif  // SENTPW_DATASET_HPP
