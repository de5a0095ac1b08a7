#include <catch_amalgamated.hpp>

#include "rankfuse/tokenizer.hpp"

using rankfuse::lexical::tokenize;
using Tokens = std::vector<std::string>;

TEST_CASE("splits on whitespace and punctuation, folds case", "[tokenizer]") {
    CHECK(tokenize("Breaking News!") == Tokens{"breaking", "news"});
    CHECK(tokenize("state-of-the-art") == Tokens{"state", "of", "the", "art"});
    CHECK(tokenize("  spaced\tout\nwords ") == Tokens{"spaced", "out", "words"});
    CHECK(tokenize("numbers 42 and v2") == Tokens{"numbers", "42", "and", "v2"});
}

TEST_CASE("empty and separator-only input", "[tokenizer]") {
    CHECK(tokenize("").empty());
    CHECK(tokenize("   ...!!!   ").empty());
}

TEST_CASE("CJK spans become overlapping bigrams", "[tokenizer]") {
    CHECK(tokenize("新闻报道") == Tokens{"新闻", "闻报", "报道"});
    CHECK(tokenize("新") == Tokens{"新"});          // lone character
    CHECK(tokenize("新闻") == Tokens{"新闻"});      // exactly one bigram
    CHECK(tokenize("速報ニュース") == Tokens{"速報", "報ニ", "ニュ", "ュー", "ース"});
}

TEST_CASE("mixed scripts split at CJK boundaries", "[tokenizer]") {
    CHECK(tokenize("abc新闻def") == Tokens{"abc", "新闻", "def"});
    CHECK(tokenize("北京2024大会") == Tokens{"北京", "2024", "大会"});
    CHECK(tokenize("BBC报道 breaking") == Tokens{"bbc", "报道", "breaking"});
}

TEST_CASE("non-ASCII case folding is 1:1 simple mapping", "[tokenizer]") {
    CHECK(tokenize("ÉCOLE") == Tokens{"école"});
    CHECK(tokenize("МОСКВА Новости") == Tokens{"москва", "новости"});
    CHECK(tokenize("ΑΘΗΝΑ") == Tokens{"αθηνα"});
    CHECK(tokenize("Größe") == Tokens{"größe"});
}

TEST_CASE("undecodable bytes act as separators", "[tokenizer]") {
    const std::string garbage = std::string("abc") + '\xFF' + "def";
    CHECK(tokenize(garbage) == Tokens{"abc", "def"});
}

TEST_CASE("combining marks stay inside tokens", "[tokenizer]") {
    // e + U+0301 combining acute
    CHECK(tokenize("cafe\xCC\x81 menu") == Tokens{"cafe\xCC\x81", "menu"});
}
