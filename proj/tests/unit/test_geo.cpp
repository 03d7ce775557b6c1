#include <stdexcept>
#include <random>

#include "doctest.h"
#include "oracles/geo_bisect.hpp"
#include "sentpw/geo.hpp"

using namespace sentpw;

TEST_CASE("corner cells") {
    CHECK(encode_geo(-90.0, -180.0) == "0");
    // all 62 bits set
    CHECK(encode_geo(90.0, 180.0) == "4611686018427387903");
    CHECK(geo_code(90.0, 180.0, 4) == 255U);
    // top bit of the result is the longitude half
    CHECK(geo_code(-90.0, 0.0, 1) == 2U);
    CHECK(geo_code(0.0, -180.0, 1) == 1U);
}

TEST_CASE("codes fit in 19 decimal digits") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
    for (int i = 0; i < 2000; ++i) CHECK(encode_geo(lat(rng), lon(rng)).size() <= 19);
    // the POI example coordinate from the place dataset
    CHECK(encode_geo(30.5890440, 114.4297680).size() == 19);
}

TEST_CASE("out-of-range coordinates throw") {
    CHECK_THROWS_AS(encode_geo(90.0001, 0.0), std::out_of_range);
    CHECK_THROWS_AS(encode_geo(0.0, -180.5), std::out_of_range);
    CHECK_THROWS_AS(encode_geo(std::nan(""), 0.0), std::out_of_range);
    CHECK_THROWS_AS(geo_code(0.0, 0.0, 32), std::invalid_argument);
    CHECK_THROWS_AS(geo_code(0.0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("matches the bisection oracle on random points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
    for (int i = 0; i < 5000; ++i) {
        const double a = lat(rng), b = lon(rng);
        CHECK(geo_code(a, b) == oracle::bits_to_integer(oracle::interleaved_bits(a, b, 31)));
    }
}

TEST_CASE("monotone per axis on a coarse grid") {
    // cell centres at 4 bits per axis; the oracle's codes order the same way
    const int bits = 4;
    const int cells = 1 << bits;
    for (int lon_cell = 0; lon_cell < cells; ++lon_cell) {
        const double lon = -180.0 + (lon_cell + 0.5) * 360.0 / cells;
        std::uint64_t prev = 0;
        for (int lat_cell = 0; lat_cell < cells; ++lat_cell) {
            const double lat = -90.0 + (lat_cell + 0.5) * 180.0 / cells;
            const std::uint64_t code = geo_code(lat, lon, bits);
            CHECK(code == oracle::bits_to_integer(oracle::interleaved_bits(lat, lon, bits)));
            if (lat_cell > 0) CHECK(code > prev);
            prev = code;
        }
    }
    for (int lat_cell = 0; lat_cell < cells; ++lat_cell) {
        const double lat = -90.0 + (lat_cell + 0.5) * 180.0 / cells;
        std::uint64_t prev = 0;
        for (int lon_cell = 0; lon_cell < cells; ++lon_cell) {
            const double lon = -180.0 + (lon_cell + 0.5) * 360.0 / cells;
            const std::uint64_t code = geo_code(lat, lon, bits);
            if (lon_cell > 0) CHECK(code > prev);
            prev = code;
        }
    }
}

TEST_CASE("points one metre apart share a long prefix") {
    // 1 m of latitude ~ 1/111320 degree; longitude scaled by cos(lat).
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> lat(-80.0, 80.0), lon(-179.0, 179.0), angle(0.0, 6.283185307179586);
    int long_prefix = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        const double a = lat(rng), b = lon(rng), t = angle(rng);
        const double dlat = std::sin(t) / 111320.0;
        const double dlon = std::cos(t) / (111320.0 * std::cos(a * 3.141592653589793 / 180.0));
        const std::string x = oracle::interleaved_bits(a, b, 31);
        const std::string y = oracle::interleaved_bits(a + dlat, b + dlon, 31);
        const int shared = oracle::common_prefix(x, y);

        // implementation codes agree with the oracle bit strings
        const std::uint64_t cx = geo_code(a, b), cy = geo_code(a + dlat, b + dlon);
        int impl_shared = 0;
        for (int bit = 61; bit >= 0 && ((cx >> bit) & 1U) == ((cy >> bit) & 1U); --bit) ++impl_shared;
        CHECK(impl_shared == shared);

        // same 20-bit cell on both axes => at least 40 shared leading bits
        const bool same_cells = oracle::bisect_bits(a, -90, 90, 20) == oracle::bisect_bits(a + dlat, -90, 90, 20) &&
                                oracle::bisect_bits(b, -180, 180, 20) == oracle::bisect_bits(b + dlon, -180, 180, 20);
        if (same_cells) CHECK(shared >= 40);
        long_prefix += shared >= 40;
    }
    CHECK(static_cast<double>(long_prefix) / trials >= 0.9);
}
