#ifndef SENTPW_POI_HPP
#define SENTPW_POI_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sentpw/tokenizer.hpp"

namespace sentpw {

// A place-of-interest record. entity_id is the optional sixth file column and
// identifies records that refer to the same real-world place.
struct PoiRecord {
    std::string category;
    std::string name;
    std::string address;
    double latitude = 0.0;
    double longitude = 0.0;
    std::optional<int> entity_id;
};

// Throws DataError if the name is empty or a coordinate is out of range.
void validate(const PoiRecord& rec);

// "address <PAD> name <PAD> geocode". Category is metadata only.
std::string poi_text(const PoiRecord& rec);

// poi_text tokenized per character with <PAD> kept as separator token.
Sentence poi_to_sentence(const PoiRecord& rec);

// Reads `category \t name \t address \t lat \t lon [\t entity_id]` rows.
std::vector<PoiRecord> load_poi(const std::filesystem::path& path);

}  // namespace sentpw

#endif  // SENTPW_POI_HPP
