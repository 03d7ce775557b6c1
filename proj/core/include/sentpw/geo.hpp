#ifndef SENTPW_GEO_HPP
#define SENTPW_GEO_HPP

#include <cstdint>
#include <string>

namespace sentpw {

inline constexpr int kGeoBitsPerAxis = 31;

// Uniform cell index of `value` in [lo, hi] at 2^bits resolution; hi maps to
// the last cell.
std::uint64_t quantize_axis(double value, double lo, double hi, int bits);

// Morton (Z-order) code of a coordinate. Both axes are quantized to
// 2^bits_per_axis cells and interleaved starting with the longitude bit, so the
// most significant bit of the 2*bits_per_axis-bit result is the top longitude
// bit. Throws std::out_of_range for coordinates outside [-90,90] x [-180,180]
// and std::invalid_argument for bits_per_axis outside [1, 31].
std::uint64_t geo_code(double lat, double lon, int bits_per_axis = kGeoBitsPerAxis);

// Decimal rendering of geo_code; at most 19 digits for 31 bits per axis.
std::string encode_geo(double lat, double lon, int bits_per_axis = kGeoBitsPerAxis);

}  // namespace sentpw

#endif  // SENTPW_GEO_HPP
