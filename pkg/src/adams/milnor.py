"""Dual of the mod-2 Steenrod algebra: polynomial algebra on zeta generators.

Monomials are tuples of exponents (r1, r2, ...) for zeta_1^r1 zeta_2^r2 ...
with trailing zeros trimmed; elements are frozensets of monomials over F2.
"""
from __future__ import annotations

from functools import lru_cache
from typing import FrozenSet, List, Sequence, Tuple

from . import gf2, steenrod

Mono = Tuple[int, ...]
Element = FrozenSet[Mono]

ZERO: Element = frozenset()
UNIT: Element = frozenset({()})


def trim(exponents: Sequence[int]) -> Mono:
    e = list(exponents)
    while e and e[-1] == 0:
        e.pop()
    return tuple(e)


def zeta(k: int, power: int = 1) -> Element:
    if power == 0:
        return UNIT
    return frozenset({trim((0,) * (k - 1) + (power,))})


def degree(mono: Mono) -> int:
    return sum(r * (2 ** (i + 1) - 1) for i, r in enumerate(mono))


def mono_product(a: Mono, b: Mono) -> Mono:
    n = max(len(a), len(b))
    return trim(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                      for i in range(n)))


def product(x: Element, y: Element) -> Element:
    out: set = set()
    for a in x:
        for b in y:
            m = mono_product(a, b)
            out ^= {m}
    return frozenset(out)


@lru_cache(maxsize=None)
def monomial_basis(n: int) -> Tuple[Mono, ...]:
    """All monomials of degree n, in lexicographic order."""
    if n == 0:
        return ((),)
    gens: List[int] = [2 ** d - 1 for d in range(1, n.bit_length() + 1)
                       if 2 ** d - 1 <= n]

    def build(i: int, rem: int):
        if i == len(gens):
            if rem == 0:
                yield ()
            return
        for r in range(rem // gens[i] + 1):
            for tail in build(i + 1, rem - r * gens[i]):
                yield (r,) + tail

    return tuple(sorted(trim(m) for m in build(0, n)))


def _tensor_mul(x: frozenset, y: frozenset) -> frozenset:
    out: set = set()
    for (a, b) in x:
        for (c, d) in y:
            out ^= {(mono_product(a, c), mono_product(b, d))}
    return frozenset(out)


@lru_cache(maxsize=None)
def _coproduct_gen_power(k: int, power: int) -> frozenset:
    if power == 0:
        return frozenset({((), ())})
    if power == 1:
        return frozenset((trim((0,) * (k - i - 1) + (2 ** i,)) if k - i else (),
                          trim((0,) * (i - 1) + (1,)) if i else ())
                         for i in range(k + 1))
    half = _coproduct_gen_power(k, power // 2)
    sq = _tensor_mul(half, half)
    if power % 2:
        sq = _tensor_mul(sq, _coproduct_gen_power(k, 1))
    return sq


@lru_cache(maxsize=None)
def coproduct_mono(mono: Mono) -> frozenset:
    out = frozenset({((), ())})
    for i, r in enumerate(mono):
        if r:
            out = _tensor_mul(out, _coproduct_gen_power(i + 1, r))
    return out


def coproduct(x: Element) -> frozenset:
    out: set = set()
    for mono in x:
        out ^= coproduct_mono(mono)
    return frozenset(out)


@lru_cache(maxsize=None)
def pairing_mono(mono: Mono, word: Tuple[int, ...]) -> int:
    """Hopf pairing of a zeta monomial with a word in the Sq generators."""
    if degree(mono) != sum(word):
        return 0
    if not word:
        return 1
    n, rest = word[0], word[1:]
    total = 0
    for (u, v) in coproduct_mono(mono):
        if u == trim((n,)):
            total ^= pairing_mono(v, rest)
    return total


def pairing(x: Element, y: steenrod.Element) -> int:
    total = 0
    for mono in x:
        for word in y:
            total ^= pairing_mono(mono, word)
    return total & 1


@lru_cache(maxsize=None)
def _pairing_matrix(n: int):
    """Rows: admissible monomials; columns: zeta monomials; plus solvers."""
    adm = steenrod.admissible_basis(n)
    mil = monomial_basis(n)
    rows = []
    for a in adm:
        bits = 0
        for j, e in enumerate(mil):
            if pairing_mono(e, a):
                bits |= 1 << j
        rows.append(bits)
    return adm, mil, rows


def to_milnor(x: steenrod.Element, n: int) -> Element:
    """Coordinates of a degree-n element in the basis dual to monomials."""
    adm, mil, rows = _pairing_matrix(n)
    out: set = set()
    for word in x:
        i = adm.index(word)
        bits = rows[i]
        for j, e in enumerate(mil):
            if (bits >> j) & 1:
                out ^= {e}
    return frozenset(out)


@lru_cache(maxsize=None)
def _pairing_inverse(n: int):
    """Row bits of the inverse pairing matrix and of its transpose."""
    adm, mil, rows = _pairing_matrix(n)
    k = len(adm)
    aug = [rows[i] | (1 << (k + i)) for i in range(k)]
    for col in range(k):
        piv = next(i for i in range(col, k) if (aug[i] >> col) & 1)
        aug[col], aug[piv] = aug[piv], aug[col]
        for i in range(k):
            if i != col and (aug[i] >> col) & 1:
                aug[i] ^= aug[col]
    inv = [aug[i] >> k for i in range(k)]
    inv_t = [sum(((inv[i] >> c) & 1) << i for i in range(k)) for c in range(k)]
    return inv, inv_t


def from_milnor(x: Element, n: int) -> steenrod.Element:
    adm, mil, _ = _pairing_matrix(n)
    _, inv_t = _pairing_inverse(n)
    vec = sum(1 << j for j, e in enumerate(mil) if e in x)
    return frozenset(adm[i] for i in range(len(adm))
                     if (inv_t[i] & vec).bit_count() & 1)


def form_to_dual(n: int, values) -> Element:
    """Dual-algebra element representing a linear form on degree n,
    given by its values on the admissible basis."""
    adm, mil, _ = _pairing_matrix(n)
    inv, _ = _pairing_inverse(n)
    vec = 0
    for i, a in enumerate(adm):
        if (values(a) if callable(values) else values[i]) & 1:
            vec |= 1 << i
    return frozenset(mil[j] for j in range(len(mil))
                     if (inv[j] & vec).bit_count() & 1)


def sq1_star(x: Element) -> Element:
    """Transpose of left multiplication by Sq^1: d/d(zeta_1)."""
    out: set = set()
    for mono in x:
        if mono and mono[0] % 2 == 1:
            out ^= {trim((mono[0] - 1,) + mono[1:])}
    return frozenset(out)


def down_star(x: Element) -> Element:
    """Transpose of the degree -1 derivation: multiplication by zeta_1."""
    return product(zeta(1), x)
