#ifndef SENTPW_TSV_HPP
#define SENTPW_TSV_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace sentpw {

// Throws DataError if the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);

std::vector<std::string_view> split_tabs(std::string_view line);

// Calls fn(row, fields) for every non-blank line; row is 1-based and counts
// blank lines too, so it matches the line number in an editor. A trailing
// '\r' is stripped.
void for_each_row(std::string_view content,
                  const std::function<void(std::size_t, const std::vector<std::string_view>&)>& fn);

int parse_int_field(std::string_view field, std::string_view what, std::size_t row);
double parse_double_field(std::string_view field, std::string_view what, std::size_t row);

}  // namespace sentpw

#endif  // SENTPW_TSV_HPP
