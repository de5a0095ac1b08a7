#pragma once

/** \file tokenizer.hpp
 *  \brief Unicode-aware multilingual tokenization for the lexical index.
 *
 * Splits on whitespace and punctuation (anything outside categories L*, N*,
 * M*), lowercases with 1:1 simple case mappings, and emits CJK spans as
 * overlapping character bigrams. No stemming, no stopwords: the collections
 * are multilingual and language-specific analysis would need per-document
 * language identification.
 */

#include <string>
#include <string_view>
#include <vector>

namespace rankfuse::lexical {

/// Tokenize any UTF-8 text. Empty input yields an empty sequence;
/// undecodable bytes act as separators.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace rankfuse::lexical
