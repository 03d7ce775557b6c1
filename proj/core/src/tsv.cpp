#include "sentpw/tsv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "sentpw/errors.hpp"

namespace sentpw {

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

void for_each_row(std::string_view content,
                  const std::function<void(std::size_t, const std::vector<std::string_view>&)>& fn) {
    std::size_t row = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string_view::npos) end = content.size();
        std::string_view line = content.substr(pos, end - pos);
        pos = end + 1;
        ++row;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        fn(row, split_tabs(line));
    }
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(' ');
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(' ');
    return s.substr(b, e - b + 1);
}

}  // namespace

int parse_int_field(std::string_view field, std::string_view what, std::size_t row) {
    const std::string_view s = trim(field);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError(std::string(what) + " is not an integer: '" + std::string(field) + "'", row);
    }
    return value;
}

double parse_double_field(std::string_view field, std::string_view what, std::size_t row) {
    const std::string_view s = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError(std::string(what) + " is not a number: '" + std::string(field) + "'", row);
    }
    return value;
}

}  // namespace sentpw
