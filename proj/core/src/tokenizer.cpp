#include "sentpw/tokenizer.hpp"

#include <stdexcept>

#include "sentpw/errors.hpp"

namespace sentpw {

TokenizeMode parse_tokenize_mode(std::string_view name) {
    if (name == "whitespace") return TokenizeMode::whitespace;
    if (name == "per_char") return TokenizeMode::per_char;
    throw ConfigError("unknown tokenize mode '" + std::string(name) +
                      "' (expected whitespace or per_char)");
}

std::string_view to_string(TokenizeMode mode) {
    return mode == TokenizeMode::whitespace ? "whitespace" : "per_char";
}

std::vector<char32_t> decode_utf8(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto lead = static_cast<unsigned char>(text[i]);
        int extra = 0;
        char32_t cp = 0;
        if (lead < 0x80) {
            cp = lead;
        } else if ((lead & 0xE0) == 0xC0) {
            extra = 1;
            cp = lead & 0x1F;
        } else if ((lead & 0xF0) == 0xE0) {
            extra = 2;
            cp = lead & 0x0F;
        } else if ((lead & 0xF8) == 0xF0) {
            extra = 3;
            cp = lead & 0x07;
        } else {
            throw std::invalid_argument("invalid UTF-8 lead byte at offset " + std::to_string(i));
        }
        for (int k = 1; k <= extra; ++k) {
            if (i + k >= text.size()) {
                throw std::invalid_argument("truncated UTF-8 sequence at offset " + std::to_string(i));
            }
            const auto cont = static_cast<unsigned char>(text[i + k]);
            if ((cont & 0xC0) != 0x80) {
                throw std::invalid_argument("invalid UTF-8 continuation byte at offset " +
                                            std::to_string(i + k));
            }
            cp = (cp << 6) | (cont & 0x3F);
        }
        static constexpr char32_t kMinForLength[] = {0, 0x80, 0x800, 0x10000};
        if (cp < kMinForLength[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            throw std::invalid_argument("invalid UTF-8 scalar at offset " + std::to_string(i));
        }
        out.push_back(cp);
        i += static_cast<std::size_t>(extra) + 1;
    }
    return out;
}

bool is_unicode_space(char32_t c) {
    switch (c) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return c >= 0x2000 && c <= 0x200A;
    }
}

namespace {

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool pad_at(const std::vector<char32_t>& cps, std::size_t i) {
    if (i + kPadToken.size() > cps.size()) return false;
    for (std::size_t k = 0; k < kPadToken.size(); ++k) {
        if (cps[i + k] != static_cast<char32_t>(kPadToken[k])) return false;
    }
    return true;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, TokenizeMode mode) {
    const std::vector<char32_t> cps = decode_utf8(text);
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };
    std::size_t i = 0;
    while (i < cps.size()) {
        if (pad_at(cps, i)) {
            flush();
            tokens.emplace_back(kPadToken);
            i += kPadToken.size();
            continue;
        }
        const char32_t c = cps[i++];
        if (is_unicode_space(c)) {
            flush();
            continue;
        }
        append_utf8(current, c);
        if (mode == TokenizeMode::per_char) flush();
    }
    flush();
    return tokens;
}

Sentence make_sentence(std::string text, TokenizeMode mode) {
    Sentence s;
    s.tokens = tokenize(text, mode);
    s.text = std::move(text);
    return s;
}

std::string detokenize(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

}  // namespace sentpw
