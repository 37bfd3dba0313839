"""Shared helpers: golden bit listings, bit packing, corpus generators.

The two golden listings below are transcriptions of a worked example of
the block formats: the same 20-byte string compressed once as a static
block and once as a dynamic block.  Spaces and line breaks are for
readability only; bits are packed in listing order, least significant
bit of each byte first.  Both transcriptions are cross-checked against
zlib in test_inflate.py before anything else relies on them.
"""

from __future__ import annotations

import random

GOLDEN_PLAINTEXT = b"ananas_banana_batata"

# BFINAL=1, BTYPE=static, then each token under the fixed codings
# (codes written most significant bit first, extra bits least
# significant bit first), the end-of-block code, and byte padding.
GOLDEN_STATIC_LISTING = """
1 1 0
10010001 10011110 0000001 00001 10100011 10001111 10010010
0000011 00101 1 0000001 00101 0 10100100 0000001 00001
0000000
0000
"""

# The same tokens as a dynamic block: block header, HLIT/HDIST/HCLEN,
# code-length-code lengths, run-length-encoded code lengths for both
# codings, the payload, and byte padding.
GOLDEN_DYNAMIC_LISTING = """
1 0 1
11000 10100 0111
000 110 110 110 000 000 000 000 000
000 000 010 000 010 000 001 000 001
110 0010101 01 100 00 00 110 0000000 00 101 100 01 00
110 1111111 100 01 1111 100 01 100 1110 101 000 1110
010 100 00 0 1101 1100 011 1111 1 1 00 1 0 101 00 0 1110
0000000
"""


def listing_bits(listing: str) -> list[int]:
    """The 0/1 digits of a listing, in order."""
    return [int(c) for c in listing if c in "01"]


def pack_bits(listing: str) -> bytes:
    """Pack a bit listing into bytes, bit k going to byte k>>3, slot k&7."""
    bits = listing_bits(listing)
    out = bytearray((len(bits) + 7) // 8)
    for k, b in enumerate(bits):
        out[k >> 3] |= b << (k & 7)
    return bytes(out)


GOLDEN_STATIC_BYTES = pack_bits(GOLDEN_STATIC_LISTING)
GOLDEN_DYNAMIC_BYTES = pack_bits(GOLDEN_DYNAMIC_LISTING)

# Bits consumed by a parse that stops at the final block's last bit,
# i.e. everything except the byte-filling pad line.
GOLDEN_STATIC_CONSUMED = len(listing_bits(GOLDEN_STATIC_LISTING)) - 4
GOLDEN_DYNAMIC_CONSUMED = len(listing_bits(GOLDEN_DYNAMIC_LISTING)) - 7


def random_code_lengths(rng: random.Random, max_alphabet: int = 300, max_len: int = 15):
    """A random Kraft-feasible length vector.

    Lengths are drawn against a randomly sized slice of the code space
    (sometimes the whole of it, topped up to exact saturation), then
    shuffled over the alphabet with zero padding, so the corpus covers
    sparse, dense, and exactly saturated codings.
    """
    full = 1 << max_len  # whole code space in units of 2^-max_len
    saturate = rng.random() < 0.4
    if saturate:
        # Leave room for the top-up codes (at most one per set bit).
        alphabet = rng.randrange(1, max_alphabet - max_len)
        capacity = full
    else:
        alphabet = rng.randrange(1, max_alphabet + 1)
        capacity = rng.randrange(0, full + 1)
    lengths = []
    for _ in range(alphabet):
        if capacity <= 0 or rng.random() < 0.2:
            lengths.append(0)
            continue
        weight = 1 << (max_len - 1)  # cost of a length-1 code
        length = 1
        # Randomly walk down to an affordable, usually longer, length.
        while weight > capacity or (length < max_len and rng.random() < 0.55):
            weight >>= 1
            length += 1
        lengths.append(length)
        capacity -= weight
    while saturate and capacity > 0:
        # Spend the exact remainder, largest affordable code first.
        length = max_len
        weight = 1
        while length > 1 and weight * 2 <= capacity:
            weight <<= 1
            length -= 1
        lengths.append(length)
        capacity -= weight
    rng.shuffle(lengths)
    return lengths


_WORDS = (
    "the of and a to in is was he for it with as his on be at by had".split()
    + "not are but from or have an they which one you were her all she".split()
    + "there would their we him been has when who will more no if out".split()
    + "so said what up its about into than them can only other new some".split()
    + "time could these two may then do first any my now such like our".split()
    + "over man me even most made after also did many before must through".split()
)


def english_text(size: int, seed: int = 2026) -> bytes:
    """Deterministic English-like prose of about ``size`` bytes."""
    rng = random.Random(seed)
    words = _WORDS
    weights = [1.0 / (i + 1) for i in range(len(words))]
    out = []
    total = 0
    while total < size:
        sentence_words = rng.choices(words, weights=weights, k=rng.randrange(5, 16))
        sentence_words[0] = sentence_words[0].capitalize()
        sentence = " ".join(sentence_words) + ". "
        if rng.random() < 0.08:
            sentence += "\n\n"
        out.append(sentence)
        total += len(sentence)
    return "".join(out).encode("ascii")[:size]


def log_text(size: int, seed: int = 1) -> bytes:
    """Deterministic log-like text of exactly ``size`` bytes."""
    rng = random.Random(seed)
    levels = [b"INFO", b"WARN", b"DEBUG", b"ERROR"]
    subsystems = [b"scheduler", b"netlink", b"cache", b"indexer", b"storage", b"auth"]
    verbs = [b"started", b"finished", b"retrying", b"accepted", b"rejected", b"flushed"]
    lines = []
    total = 0
    t = 0
    while total < size:
        t += rng.randrange(1, 30)
        line = b"2026-08-14T%02d:%02d:%02d %s %s: task %d %s in %d ms\n" % (
            (t // 3600) % 24,
            (t // 60) % 60,
            t % 60,
            rng.choice(levels),
            rng.choice(subsystems),
            rng.randrange(10000),
            rng.choice(verbs),
            rng.randrange(500),
        )
        lines.append(line)
        total += len(line)
    return b"".join(lines)[:size]


def mixed_corpus_item(rng: random.Random, size: int) -> bytes:
    """One input drawn from the uniform/periodic/text-like mix."""
    kind = rng.randrange(3)
    if size == 0:
        return b""
    if kind == 0:
        return rng.randbytes(size)
    if kind == 1:
        period = rng.randrange(1, min(size, 97) + 1)
        unit = rng.randbytes(period)
        return (unit * (size // period + 1))[:size]
    alphabet = b"etaoin shrdlu\n"
    return bytes(rng.choices(alphabet, k=size))


# -- acceptance reporting -------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
