#include "sentpw/poi.hpp"


#include "sentpw/errors.hpp"
#include "sentpw/geo.hpp"
#include "sentpw/tsv.hpp"

namespace sentpw {

void validate(const PoiRecord& rec) {
    if (rec.name.empty()) throw DataError("POI name is empty");
    if (!(rec.latitude >= -90.0 && rec.latitude <= 90.0)) {
        throw DataError("latitude out of range [-90, 90]");
    }
    if (!(rec.longitude >= -180.0 && rec.longitude <= 180.0)) {
        throw DataError("longitude out of range [-180, 180]");
    }
}

std::string poi_text(const PoiRecord& rec) {
    std::string text = rec.address;
    text += " <PAD> ";
    text += rec.name;
    text += " <PAD> ";
    text += encode_geo(rec.latitude, rec.longitude);
    return text;
}

Sentence poi_to_sentence(const PoiRecord& rec) {
    return make_sentence(poi_text(rec), TokenizeMode::per_char);
}

std::vector<PoiRecord> load_poi(const std::filesystem::path& path) {
    const std::string content = read_text_file(path);
    std::vector<PoiRecord> out;
    for_each_row(content, [&](std::size_t row, const std::vector<std::string_view>& fields) {
        if (fields.size() != 5 && fields.size() != 6) {
            throw DataError("expected 5 or 6 tab-separated fields, got " +
                                std::to_string(fields.size()),
                            row);
        }
        PoiRecord rec;
        rec.category = std::string(fields[0]);
        rec.name = std::string(fields[1]);
        rec.address = std::string(fields[2]);
        rec.latitude = parse_double_field(fields[3], "latitude", row);
        rec.longitude = parse_double_field(fields[4], "longitude", row);
        if (fields.size() == 6) rec.entity_id = parse_int_field(fields[5], "entity id", row);
        try {
            validate(rec);
        } catch (const DataError& e) {
            throw DataError(e.what(), row);
        }
        out.push_back(std::move(rec));
    });
    return out;
}

}  // namespace sentpw
