#include <algorithm>
#include <random>

#include "doctest.h"
#include "sentpw/errors.hpp"
#include "sentpw/vocabulary.hpp"

using namespace sentpw;

namespace {

std::vector<Sentence> corpus_of(std::initializer_list<const char*> texts) {
    std::vector<Sentence> out;
    for (const char* t : texts) out.push_back(make_sentence(t, TokenizeMode::whitespace));
    return out;
}

}  // namespace

TEST_CASE("frequency-ordered ids after the reserved tokens") {
    const auto corpus = corpus_of({"a a b"});
    const Vocabulary v = build_vocab(corpus, 1);
    CHECK(v.size() == 4);
    CHECK(v.id("<PAD>") == 0);
    CHECK(v.id("<UNK>") == 1);
    CHECK(v.id("a") == 2);
    CHECK(v.id("b") == 3);
}

TEST_CASE("ties are broken lexicographically") {
    const auto corpus = corpus_of({"d c b", "b c d", "a"});
    const Vocabulary v = build_vocab(corpus, 1);
    CHECK(v.tokens() == std::vector<std::string>{"<PAD>", "<UNK>", "b", "c", "d", "a"});
}

TEST_CASE("min_count excludes rare tokens") {
    const auto corpus = corpus_of({"a b"});
    const Vocabulary v = build_vocab(corpus, 2);
    CHECK(v.size() == 2);
    CHECK(v.id("a") == kUnkId);
    CHECK(v.encode({"a", "<PAD>", "zzz"}) == std::vector<TokenId>{kUnkId, kPadId, kUnkId});
    CHECK_THROWS_AS(build_vocab(corpus, 0), ConfigError);
}

TEST_CASE("empty corpus leaves only reserved tokens") {
    const Vocabulary v = build_vocab(std::vector<Sentence>{}, 1);
    CHECK(v.size() == 2);
    CHECK(v.token(kPadId) == "<PAD>");
    CHECK(v.token(kUnkId) == "<UNK>");
}

TEST_CASE("reserved literals in text are not counted twice") {
    const Vocabulary v = build_vocab(corpus_of({"x <PAD> y <PAD>"}), 1);
    CHECK(v.size() == 4);
    CHECK(v.id("<PAD>") == kPadId);
}

TEST_CASE("vocabulary depends only on the corpus multiset") {
    std::mt19937_64 rng(3);
    std::vector<Sentence> corpus;
    std::uniform_int_distribution<int> word(0, 30);
    for (int s = 0; s < 40; ++s) {
        std::string text;
        for (int k = 0; k < 6; ++k) text += "t" + std::to_string(word(rng)) + " ";
        corpus.push_back(make_sentence(text, TokenizeMode::whitespace));
    }
    const Vocabulary ref = build_vocab(corpus, 2);
    CHECK(build_vocab(corpus, 2) == ref);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(corpus.begin(), corpus.end(), rng);
        CHECK(build_vocab(corpus, 2) == ref);
    }
    // ids dense and bijective
    for (std::size_t id = 0; id < ref.size(); ++id) {
        CHECK(ref.id(ref.token(static_cast<TokenId>(id))) == static_cast<TokenId>(id));
    }
}

TEST_CASE("from_tokens validates the reserved prefix and uniqueness") {
    CHECK_THROWS_AS(Vocabulary::from_tokens({"a", "b"}), DataError);
    CHECK_THROWS_AS(Vocabulary::from_tokens({"<PAD>", "<UNK>", "a", "a"}), DataError);
    CHECK(Vocabulary::from_tokens({"<PAD>", "<UNK>", "q"}).id("q") == 2);
}
