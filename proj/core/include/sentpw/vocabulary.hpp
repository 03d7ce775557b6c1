#ifndef SENTPW_VOCABULARY_HPP
#define SENTPW_VOCABULARY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sentpw/tokenizer.hpp"

namespace sentpw {

using TokenId = std::int32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;

// Dense token <-> id mapping. Ids 0 and 1 are always <PAD> and <UNK>.
class Vocabulary {
public:
    Vocabulary();

    // Builds from an id-ordered token list; the first two entries must be the
    // reserved tokens and the rest unique.
    static Vocabulary from_tokens(std::vector<std::string> id_to_token);

    std::size_t size() const { return id_to_token_.size(); }
    TokenId id(std::string_view token) const;  // <UNK> when absent
    bool contains(std::string_view token) const;
    const std::string& token(TokenId id) const;
    const std::vector<std::string>& tokens() const { return id_to_token_; }

    std::vector<TokenId> encode(const std::vector<std::string>& tokens) const;

    bool operator==(const Vocabulary& other) const { return id_to_token_ == other.id_to_token_; }

private:
    TokenId add(std::string token);

    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, TokenId> token_to_id_;
};

// Tokens with frequency >= min_count get ids in descending frequency order,
// ties broken lexicographically. Reserved literals in the corpus are not
// counted. Throws ConfigError when min_count < 1.
Vocabulary build_vocab(std::span<const Sentence> corpus, int min_count = 1);

}  // namespace sentpw

#endif  // SENTPW_VOCABULARY_HPP
