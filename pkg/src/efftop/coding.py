"""Pairing and sequence codes.

Everything that looks like a tuple in this package is a single natural
number underneath: pairs through the Cantor pairing polynomial, sequences by
iterating it, finite sets as the code of their increasing enumeration.
Decoding is exact (integer arithmetic only), so round-trips are identities.
"""
from __future__ import annotations

from math import isqrt
from typing import Iterable, Iterator, Sequence


def pair(x: int, y: int) -> int:
    """Cantor pairing: (x + y)(x + y + 1)/2 + y."""
    if x < 0 or y < 0:
        raise ValueError("pair takes naturals")
    s = x + y
    return s * (s + 1) // 2 + y


def unpair(z: int) -> tuple[int, int]:
    if z < 0:
        raise ValueError("unpair takes naturals")
    w = (isqrt(8 * z + 1) - 1) // 2
    y = z - w * (w + 1) // 2
    return w - y, y


def pair3(x: int, y: int, z: int) -> int:
    return pair(x, pair(y, z))


def unpair3(code: int) -> tuple[int, int, int]:
    x, rest = unpair(code)
    y, z = unpair(rest)
    return x, y, z


def encode_seq(items: Sequence[int]) -> int:
    """Sequence code: empty is 0, cons(v, rest) is pair(v, rest) + 1."""
    code = 0
    for v in reversed(items):
        code = pair(v, code) + 1
    return code


def decode_seq(code: int) -> tuple[int, ...]:
    out: list[int] = []
    while code:
        v, code = unpair(code - 1)
        out.append(v)
    return tuple(out)


def encode_bits(bits: Sequence[int]) -> int:
    """Binary strings ride the sequence coding; bits must be 0 or 1."""
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0/1")
    return encode_seq(bits)


def decode_bits(code: int) -> tuple[int, ...]:
    bits = decode_seq(code)
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"code {code} is not a binary string code")
    return bits


def iter_pairs(bound: int) -> Iterator[tuple[int, int]]:
    """All (x, y) with pair(x, y) <= bound, in code order."""
    for z in range(bound + 1):
        yield unpair(z)


def pairs_below(xs: Iterable[int], ys: Iterable[int]) -> list[int]:
    """Codes of the cartesian product, sorted ascending."""
    ys = list(ys)
    return sorted(pair(x, y) for x in xs for y in ys)
