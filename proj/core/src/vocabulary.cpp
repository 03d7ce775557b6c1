#include "sentpw/vocabulary.hpp"

#include <algorithm>
#include <map>

#include "sentpw/errors.hpp"

namespace sentpw {

Vocabulary::Vocabulary() {
    add(std::string(kPadToken));
    add(std::string(kUnkToken));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> id_to_token) {
    if (id_to_token.size() < 2 || id_to_token[0] != kPadToken || id_to_token[1] != kUnkToken) {
        throw DataError("vocabulary must start with <PAD> and <UNK>");
    }
    Vocabulary v;
    for (std::size_t i = 2; i < id_to_token.size(); ++i) {
        if (v.contains(id_to_token[i])) {
            throw DataError("duplicate vocabulary token '" + id_to_token[i] + "'");
        }
        v.add(std::move(id_to_token[i]));
    }
    return v;
}

TokenId Vocabulary::add(std::string token) {
    const auto id = static_cast<TokenId>(id_to_token_.size());
    token_to_id_.emplace(token, id);
    id_to_token_.push_back(std::move(token));
    return id;
}

TokenId Vocabulary::id(std::string_view token) const {
    const auto it = token_to_id_.find(std::string(token));
    return it == token_to_id_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
    return token_to_id_.count(std::string(token)) != 0;
}

const std::string& Vocabulary::token(TokenId id) const {
    return id_to_token_.at(static_cast<std::size_t>(id));
}

std::vector<TokenId> Vocabulary::encode(const std::vector<std::string>& tokens) const {
    std::vector<TokenId> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(id(t));
    return ids;
}

Vocabulary build_vocab(std::span<const Sentence> corpus, int min_count) {
    if (min_count < 1) throw ConfigError("min_count must be >= 1");
    std::map<std::string, long long> counts;
    for (const auto& s : corpus) {
        for (const auto& t : s.tokens) {
            if (t == kPadToken || t == kUnkToken) continue;
            ++counts[t];
        }
    }
    std::vector<std::pair<std::string, long long>> kept;
    for (auto& [token, n] : counts) {
        if (n >= min_count) kept.emplace_back(token, n);
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> ordered{std::string(kPadToken), std::string(kUnkToken)};
    for (auto& [token, n] : kept) ordered.push_back(token);
    return Vocabulary::from_tokens(std::move(ordered));
}

}  // namespace sentpw
