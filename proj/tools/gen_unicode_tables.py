#!/usr/bin/env python3
"""Regenerate src/unicode_tables.inc from Python's unicodedata.

Emits:
  - kWordRanges: inclusive code-point ranges for categories L*, N*, M*
    (token constituents; everything else is a separator).
  - kSimpleLowerPairs: 1:1 lowercase mappings (multi-code-point expansions
    are excluded, matching simple case folding).

Run from the repository root:  python3 tools/gen_unicode_tables.py
"""

import sys
import unicodedata

MAX_CP = 0x10FFFF


def is_word(cp: int) -> bool:
    cat = unicodedata.category(chr(cp))
    return cat[0] in ("L", "N", "M")


def word_ranges():
    ranges = []
    lo = None
    for cp in range(MAX_CP + 1):
        if 0xD800 <= cp <= 0xDFFF:
            w = False
        else:
            w = is_word(cp)
        if w and lo is None:
            lo = cp
        elif not w and lo is not None:
            ranges.append((lo, cp - 1))
            lo = None
    if lo is not None:
        ranges.append((lo, MAX_CP))
    return ranges


def lower_pairs():
    pairs = []
    for cp in range(MAX_CP + 1):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        low = chr(cp).lower()
        if len(low) == 1 and ord(low) != cp:
            pairs.append((cp, ord(low)))
    return pairs


def main():
    out = sys.stdout
    ranges = word_ranges()
    pairs = lower_pairs()
    out.write("// Generated by tools/gen_unicode_tables.py (unicodedata %s). Do not edit.\n"
              % unicodedata.unidata_version)
    out.write("struct CpRange { char32_t lo; char32_t hi; };\n")
    out.write("struct CpPair { char32_t cp; char32_t lower; };\n\n")
    out.write("inline constexpr CpRange kWordRanges[] = {\n")
    for i in range(0, len(ranges), 6):
        row = ", ".join("{0x%X, 0x%X}" % r for r in ranges[i:i + 6])
        out.write("    %s,\n" % row)
    out.write("};\n\n")
    out.write("inline constexpr CpPair kSimpleLowerPairs[] = {\n")
    for i in range(0, len(pairs), 6):
        row = ", ".join("{0x%X, 0x%X}" % p for p in pairs[i:i + 6])
        out.write("    %s,\n" % row)
    out.write("};\n")


if __name__ == "__main__":
    main()
