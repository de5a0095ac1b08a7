#include "rankfuse/tokenizer.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>

namespace rankfuse::lexical {

namespace {

#include "unicode_tables.inc"

bool is_word_cp(char32_t cp) {
    auto it = std::upper_bound(std::begin(kWordRanges), std::end(kWordRanges), cp,
                               [](char32_t v, const CpRange& r) { return v < r.lo; });
    if (it == std::begin(kWordRanges)) return false;
    --it;
    return cp >= it->lo && cp <= it->hi;
}

char32_t to_lower_cp(char32_t cp) {
    // ASCII fast path
    if (cp < 0x80) {
        return (cp >= U'A' && cp <= U'Z') ? cp + 32 : cp;
    }
    auto it = std::lower_bound(std::begin(kSimpleLowerPairs), std::end(kSimpleLowerPairs), cp,
                               [](const CpPair& p, char32_t v) { return p.cp < v; });
    if (it != std::end(kSimpleLowerPairs) && it->cp == cp) return it->lower;
    return cp;
}

// Blocks whose characters are emitted as overlapping bigrams: Han (incl.
// extensions and compatibility), Hiragana, Katakana, Hangul syllables/jamo.
bool is_cjk_cp(char32_t cp) {
    return (cp >= 0x2E80 && cp <= 0x2EFF)    // CJK radicals
        || (cp >= 0x3040 && cp <= 0x30FF)    // Hiragana + Katakana
        || (cp >= 0x31F0 && cp <= 0x31FF)    // Katakana phonetic extensions
        || (cp >= 0x3400 && cp <= 0x4DBF)    // CJK ext A
        || (cp >= 0x4E00 && cp <= 0x9FFF)    // CJK unified
        || (cp >= 0xF900 && cp <= 0xFAFF)    // CJK compatibility
        || (cp >= 0xAC00 && cp <= 0xD7AF)    // Hangul syllables
        || (cp >= 0x1100 && cp <= 0x11FF)    // Hangul jamo
        || (cp >= 0x20000 && cp <= 0x2FA1F); // CJK ext B..F + compat supplement
}

// Decode one code point; returns false on malformed input, in which case
// the caller skips a single byte.
bool decode_cp(std::string_view s, std::size_t i, char32_t& cp, std::size_t& len) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        cp = b0;
        len = 1;
        return true;
    }
    std::size_t need;
    char32_t acc;
    if ((b0 & 0xE0) == 0xC0) { need = 2; acc = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { need = 3; acc = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { need = 4; acc = b0 & 0x07; }
    else return false;
    if (i + need > s.size()) return false;
    for (std::size_t j = 1; j < need; ++j) {
        const auto bj = static_cast<unsigned char>(s[i + j]);
        if ((bj & 0xC0) != 0x80) return false;
        acc = (acc << 6) | (bj & 0x3F);
    }
    if (acc > 0x10FFFF || (acc >= 0xD800 && acc <= 0xDFFF)) return false;
    cp = acc;
    len = need;
    return true;
}

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

// A CJK span of n >= 2 code points becomes its n-1 overlapping bigrams;
// a lone CJK character is emitted as-is.
void flush_cjk(const std::vector<char32_t>& span, std::vector<std::string>& out) {
    if (span.empty()) return;
    if (span.size() == 1) {
        std::string t;
        append_utf8(t, span[0]);
        out.push_back(std::move(t));
        return;
    }
    for (std::size_t i = 0; i + 1 < span.size(); ++i) {
        std::string t;
        append_utf8(t, span[i]);
        append_utf8(t, span[i + 1]);
        out.push_back(std::move(t));
    }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;               // pending non-CJK token
    std::vector<char32_t> cjk_span;    // pending CJK run

    auto flush_current = [&] {
        if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    };
    auto flush_span = [&] {
        flush_cjk(cjk_span, tokens);
        cjk_span.clear();
    };

    std::size_t i = 0;
    while (i < text.size()) {
        char32_t cp;
        std::size_t len;
        if (!decode_cp(text, i, cp, len)) {
            flush_current();
            flush_span();
            ++i;
            continue;
        }
        i += len;
        if (!is_word_cp(cp)) {
            flush_current();
            flush_span();
            continue;
        }
        cp = to_lower_cp(cp);
        if (is_cjk_cp(cp)) {
            flush_current();
            cjk_span.push_back(cp);
        } else {
            flush_span();
            append_utf8(current, cp);
        }
    }
    flush_current();
    flush_span();
    return tokens;
}

}  // namespace rankfuse::lexical
