#include "sentpw/geo.hpp"

#include <cmath>
#include <stdexcept>

namespace sentpw {

std::uint64_t quantize_axis(double value, double lo, double hi, int bits) {
    const std::uint64_t cells = std::uint64_t{1} << bits;
    const double scaled = std::floor((value - lo) / (hi - lo) * static_cast<double>(cells));
    if (scaled <= 0.0) return 0;
    const auto cell = static_cast<std::uint64_t>(scaled);
    return cell >= cells ? cells - 1 : cell;
}

std::uint64_t geo_code(double lat, double lon, int bits_per_axis) {
    if (bits_per_axis < 1 || bits_per_axis > kGeoBitsPerAxis) {
        throw std::invalid_argument("bits_per_axis must be in [1, 31]");
    }
    if (!(lat >= -90.0 && lat <= 90.0)) throw std::out_of_range("latitude out of range [-90, 90]");
    if (!(lon >= -180.0 && lon <= 180.0)) {
        throw std::out_of_range("longitude out of range [-180, 180]");
    }
    const std::uint64_t lat_cell = quantize_axis(lat, -90.0, 90.0, bits_per_axis);
    const std::uint64_t lon_cell = quantize_axis(lon, -180.0, 180.0, bits_per_axis);
    std::uint64_t code = 0;
    for (int b = bits_per_axis - 1; b >= 0; --b) {
        code = (code << 1) | ((lon_cell >> b) & 1U);
        code = (code << 1) | ((lat_cell >> b) & 1U);
    }
    return code;
}

std::string encode_geo(double lat, double lon, int bits_per_axis) {
    return std::to_string(geo_code(lat, lon, bits_per_axis));
}

}  // namespace sentpw
