#include "sentpw/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "sentpw/errors.hpp"
#include "sentpw/numfmt.hpp"
#include "sentpw/tsv.hpp"

namespace sentpw {

std::optional<std::string> Checkpoint::meta_value(std::string_view key) const {
    for (const auto& [k, v] : meta) {
        if (k == key) return v;
    }
    return std::nullopt;
}

namespace {

void write_row(std::string& out, const auto& row) {
    for (Eigen::Index c = 0; c < row.size(); ++c) {
        if (c) out.push_back(' ');
        out += format_double(row(c));
    }
    out.push_back('\n');
}

class LineReader {
public:
    explicit LineReader(std::string_view content) : content_(content) {}

    std::string_view next(std::string_view what) {
        if (pos_ >= content_.size()) {
            throw CheckpointError("truncated checkpoint: missing " + std::string(what), line_ + 1);
        }
        std::size_t end = content_.find('\n', pos_);
        if (end == std::string_view::npos) end = content_.size();
        std::string_view line = content_.substr(pos_, end - pos_);
        pos_ = end + 1;
        ++line_;
        return line;
    }
    std::size_t line() const { return line_; }
    bool at_end() const { return pos_ >= content_.size(); }

private:
    std::string_view content_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
};

std::vector<std::string_view> split_spaces(std::string_view s) {
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        if (i >= s.size()) break;
        std::size_t j = s.find(' ', i);
        if (j == std::string_view::npos) j = s.size();
        parts.push_back(s.substr(i, j - i));
        i = j;
    }
    return parts;
}

std::size_t parse_count(std::string_view s, std::string_view what, std::size_t line) {
    const int v = parse_int_field(s, what, line);
    if (v < 0) throw CheckpointError(std::string(what) + " must be non-negative", line);
    return static_cast<std::size_t>(v);
}

template <typename Row>
void read_row(LineReader& in, Row&& row, std::string_view what) {
    const auto line = in.next(what);
    const auto parts = split_spaces(line);
    if (parts.size() != static_cast<std::size_t>(row.size())) {
        throw CheckpointError(std::string(what) + " row has " + std::to_string(parts.size()) +
                                  " values, expected " + std::to_string(row.size()),
                              in.line());
    }
    for (std::size_t c = 0; c < parts.size(); ++c) {
        try {
            row(static_cast<Eigen::Index>(c)) = parse_double(parts[c]);
        } catch (const std::invalid_argument& e) {
            throw CheckpointError(e.what(), in.line());
        }
    }
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
    const auto& p = ckpt.params;
    if (p.vocab_size() != ckpt.vocab.size()) {
        throw std::invalid_argument("embedding rows do not match the vocabulary size");
    }
    std::string out = "SENTPW " + std::to_string(kCheckpointVersion) + ' ' +
                      std::to_string(ckpt.vocab.size()) + ' ' + std::to_string(p.d_in()) + ' ' +
                      std::to_string(p.d_out()) + ' ' + std::string(to_string(ckpt.loss)) + '\n';
    for (const auto& token : ckpt.vocab.tokens()) {
        if (token.find_first_of("\r\n") != std::string::npos) {
            throw std::invalid_argument("vocabulary token contains a line break");
        }
        out += token;
        out.push_back('\n');
    }
    for (Eigen::Index r = 0; r < p.embedding.rows(); ++r) write_row(out, p.embedding.row(r));
    for (Eigen::Index r = 0; r < p.projection.rows(); ++r) write_row(out, p.projection.row(r));
    write_row(out, p.bias);
    out += "meta " + std::to_string(ckpt.meta.size()) + '\n';
    for (const auto& [k, v] : ckpt.meta) out += k + '=' + v + '\n';
    out += "END\n";
    return out;
}

Checkpoint parse_checkpoint(std::string_view content) {
    LineReader in(content);
    const auto header = split_spaces(in.next("header"));
    const std::string expected = "SENTPW " + std::to_string(kCheckpointVersion);
    if (header.size() != 6 || header[0] != "SENTPW") {
        throw CheckpointError("bad checkpoint header, expected '" + expected +
                                  " <vocab_size> <d_in> <d_out> <loss>'",
                              1);
    }
    if (header[1] != std::to_string(kCheckpointVersion)) {
        throw CheckpointError("unsupported checkpoint version '" + std::string(header[1]) +
                                  "', expected '" + expected + "'",
                              1);
    }
    const std::size_t vocab_size = parse_count(header[2], "vocab size", 1);
    const std::size_t d_in = parse_count(header[3], "d_in", 1);
    const std::size_t d_out = parse_count(header[4], "d_out", 1);
    Checkpoint ckpt;
    try {
        ckpt.loss = parse_loss_kind(header[5]);
    } catch (const ConfigError& e) {
        throw CheckpointError(e.what(), 1);
    }

    std::vector<std::string> tokens;
    tokens.reserve(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) tokens.emplace_back(in.next("vocabulary"));
    try {
        ckpt.vocab = Vocabulary::from_tokens(std::move(tokens));
    } catch (const DataError& e) {
        throw CheckpointError(e.what(), in.line());
    }

    auto& p = ckpt.params;
    p.embedding.resize(static_cast<Eigen::Index>(vocab_size), static_cast<Eigen::Index>(d_in));
    p.projection.resize(static_cast<Eigen::Index>(d_in), static_cast<Eigen::Index>(d_out));
    p.bias.resize(static_cast<Eigen::Index>(d_out));
    for (Eigen::Index r = 0; r < p.embedding.rows(); ++r) read_row(in, p.embedding.row(r), "embedding");
    for (Eigen::Index r = 0; r < p.projection.rows(); ++r) read_row(in, p.projection.row(r), "projection");
    read_row(in, p.bias, "bias");

    const auto meta_header = split_spaces(in.next("meta block"));
    if (meta_header.size() != 2 || meta_header[0] != "meta") {
        throw CheckpointError("expected 'meta <count>'", in.line());
    }
    const std::size_t n_meta = parse_count(meta_header[1], "meta count", in.line());
    for (std::size_t i = 0; i < n_meta; ++i) {
        const auto line = in.next("meta entry");
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw CheckpointError("meta entry without '='", in.line());
        ckpt.meta.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
    }
    if (in.next("END trailer") != "END") throw CheckpointError("expected END trailer", in.line());
    if (!in.at_end()) throw CheckpointError("trailing data after END", in.line() + 1);
    return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    const std::string bytes = serialize_checkpoint(ckpt);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw DataError("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::string content;
    try {
        content = read_text_file(path);
    } catch (const DataError& e) {
        throw CheckpointError(e.what());
    }
    return parse_checkpoint(content);
}

}  // namespace sentpw
