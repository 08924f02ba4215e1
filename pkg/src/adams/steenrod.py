"""Mod-2 Steenrod algebra in the admissible basis.

Monomials are tuples of positive exponents (s1,...,sk) with s_i >= 2*s_{i+1};
the empty tuple is the unit. Elements are frozensets of monomials (implicit
F2 coefficients) kept homogeneous by the callers.
"""
from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, Iterable, Tuple

Mono = Tuple[int, ...]
Element = FrozenSet[Mono]
TensorElement = FrozenSet[Tuple[Mono, Mono]]

ZERO: Element = frozenset()
UNIT: Element = frozenset({()})


def binom_odd(n: int, k: int) -> bool:
    """Binomial coefficient parity by Lucas' theorem."""
    if k < 0 or n < 0 or k > n:
        return False
    return (n - k) & k == 0


def degree(mono: Mono) -> int:
    return sum(mono)


def xor(*elements: Iterable) -> frozenset:
    out: set = set()
    for e in elements:
        out ^= set(e)
    return frozenset(out)


def is_admissible(word: Mono) -> bool:
    return all(word[i] >= 2 * word[i + 1] for i in range(len(word) - 1))


@lru_cache(maxsize=None)
def adem_rewrite(word: Mono) -> Element:
    """Expand a product of Sq generators in the admissible basis."""
    for n in word:
        if n < 1:
            raise ValueError("exponents must be positive")
    i = next((i for i in range(len(word) - 1) if word[i] < 2 * word[i + 1]), -1)
    if i < 0:
        return frozenset({word})
    a, b = word[i], word[i + 1]
    out: set = set()
    for k in range(a // 2 + 1):
        if binom_odd(b - k - 1, a - 2 * k):
            mid = (a + b - k, k) if k else (a + b,)
            out ^= adem_rewrite(word[:i] + mid + word[i + 2:])
    return frozenset(out)


def from_words(words: Iterable[Mono]) -> Element:
    return xor(*(adem_rewrite(tuple(w)) for w in words))


def product(x: Element, y: Element) -> Element:
    out: set = set()
    for mx in x:
        for my in y:
            out ^= adem_rewrite(mx + my)
    return frozenset(out)


def diagonal(x: Element) -> TensorElement:
    """Cartan diagonal into the tensor square, admissibly reduced."""
    out: set = set()
    for mono in x:
        parts = [((), ())]
        for n in mono:
            parts = [
                (u + ((i,) if i else ()), v + ((n - i,) if n - i else ()))
                for (u, v) in parts
                for i in range(n + 1)
            ]
        for u, v in parts:
            for mu in adem_rewrite(u):
                for mv in adem_rewrite(v):
                    pair = (mu, mv)
                    if pair in out:
                        out.discard(pair)
                    else:
                        out.add(pair)
    return frozenset(out)


def tensor_product(x: TensorElement, y: TensorElement) -> TensorElement:
    out: set = set()
    for (a, b) in x:
        for (c, d) in y:
            for m1 in adem_rewrite(a + c):
                for m2 in adem_rewrite(b + d):
                    pair = (m1, m2)
                    if pair in out:
                        out.discard(pair)
                    else:
                        out.add(pair)
    return frozenset(out)


def down(x: Element) -> Element:
    """The degree -1 derivation sending Sq^n to Sq^(n-1)."""
    out: set = set()
    for mono in x:
        for i, n in enumerate(mono):
            w = mono[:i] + ((n - 1,) if n > 1 else ()) + mono[i + 1:]
            out ^= adem_rewrite(w)
    return frozenset(out)


@lru_cache(maxsize=None)
def admissible_basis(n: int) -> Tuple[Mono, ...]:
    """All admissible monomials of degree n, length-then-lex-descending."""
    if n < 0:
        raise ValueError("degree must be nonnegative")

    def gen(remaining, head_cap):
        if remaining == 0:
            yield ()
            return
        for s in range(min(remaining, head_cap), 0, -1):
            for tail in gen(remaining - s, s // 2):
                yield (s,) + tail

    monos = list(gen(n, n))
    monos.sort(key=lambda m: (len(m), tuple(-e for e in m)))
    return tuple(monos)
