#ifndef SENTPW_TOKENIZER_HPP
#define SENTPW_TOKENIZER_HPP

#include <string>
#include <string_view>
#include <vector>

namespace sentpw {

inline constexpr std::string_view kPadToken = "<PAD>";
inline constexpr std::string_view kUnkToken = "<UNK>";

enum class TokenizeMode { whitespace, per_char };

TokenizeMode parse_tokenize_mode(std::string_view name);
std::string_view to_string(TokenizeMode mode);

// A tokenized sentence. Token strings are kept so that a vocabulary can be
// built after loading; ids are produced by Vocabulary::encode.
struct Sentence {
    std::string text;
    std::vector<std::string> tokens;

    std::size_t length() const { return tokens.size(); }
    bool operator==(const Sentence&) const = default;
};

// Splits UTF-8 text into tokens.
//
// whitespace: runs of Unicode whitespace separate tokens.
// per_char:   one token per Unicode scalar value, whitespace dropped.
//
// In both modes a literal "<PAD>" is emitted as a single token even when it is
// glued to neighbouring text. Throws std::invalid_argument on malformed UTF-8.
std::vector<std::string> tokenize(std::string_view text, TokenizeMode mode);

Sentence make_sentence(std::string text, TokenizeMode mode);

// Joins tokens with single spaces.
std::string detokenize(const std::vector<std::string>& tokens);

// Decodes UTF-8 into scalar values; throws std::invalid_argument when malformed.
std::vector<char32_t> decode_utf8(std::string_view text);
bool is_unicode_space(char32_t c);

}  // namespace sentpw

#endif  // SENTPW_TOKENIZER_HPP
