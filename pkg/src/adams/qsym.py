"""Word-indexed dual of the free algebra on the Sq generators.

Elements are linear forms on words, written in the dual basis M_w indexed
by words (tuples of positive ints). The product is the overlapping shuffle,
the coproduct is deconcatenation. Over F2 elements are frozensets of words;
over Z/4 they are dicts word -> coefficient in {1,2,3}.

The polynomial generators are the 2-elementary Lyndon-power words; the
generators (2^{k-1},...,2,1) span the image of the dual Steenrod algebra,
with zeta_k mapping to the corresponding word.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, FrozenSet, List, Tuple

from . import gf2, milnor

Word = Tuple[int, ...]
F2Element = FrozenSet[Word]
Z4Element = Dict[Word, int]
PolyMono = Tuple[Word, ...]
Poly = FrozenSet[PolyMono]

ZERO: F2Element = frozenset()
UNIT: F2Element = frozenset({()})


def word_degree(w: Word) -> int:
    return sum(w)


@lru_cache(maxsize=None)
def compositions(n: int) -> Tuple[Word, ...]:
    if n == 0:
        return ((),)
    return tuple(sorted((k,) + w for k in range(1, n + 1)
                        for w in compositions(n - k)))


@lru_cache(maxsize=None)
def shuffle_words(u: Word, v: Word) -> Tuple[Tuple[Word, int], ...]:
    """Overlapping shuffle of two words, with integer multiplicities."""
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: Dict[Word, int] = {}
    for head, rest in (((u[0],), (u[1:], v)),
                       ((v[0],), (u, v[1:])),
                       ((u[0] + v[0],), (u[1:], v[1:]))):
        for w, c in shuffle_words(*rest):
            key = head + w
            out[key] = out.get(key, 0) + c
    return tuple(sorted(out.items()))


def product(x: F2Element, y: F2Element) -> F2Element:
    out: set = set()
    for u in x:
        for v in y:
            for w, c in shuffle_words(u, v):
                if c & 1:
                    out ^= {w}
    return frozenset(out)


def product4(x: Z4Element, y: Z4Element) -> Z4Element:
    out: Z4Element = {}
    for u, cu in x.items():
        for v, cv in y.items():
            for w, c in shuffle_words(u, v):
                c2 = (out.get(w, 0) + cu * cv * c) & 3
                if c2:
                    out[w] = c2
                else:
                    out.pop(w, None)
    return out


def square(x: F2Element) -> F2Element:
    """Frobenius: the shuffle square mod 2 doubles every part."""
    return frozenset(tuple(2 * d for d in w) for w in x)


def power(x: F2Element, n: int) -> F2Element:
    out, sq = UNIT, x
    while n:
        if n & 1:
            out = product(out, sq)
        sq = square(sq)
        n >>= 1
    return out


def deconcat(w: Word) -> FrozenSet[Tuple[Word, Word]]:
    return frozenset((w[:i], w[i:]) for i in range(len(w) + 1))


def deconcat_element(x: F2Element) -> FrozenSet[Tuple[Word, Word]]:
    out: set = set()
    for w in x:
        out ^= deconcat(w)
    return frozenset(out)


# ---------------------------------------------------------------------------
# polynomial generators

def _rev_less(a: Word, b: Word) -> bool:
    """Word order reading right to left; shorter matching tails are smaller."""
    return a[::-1] < b[::-1]


def is_lyndon(w: Word) -> bool:
    """Strictly smaller than all of its proper prefixes."""
    return all(_rev_less(w, w[:i]) for i in range(1, len(w)))


def is_generator(w: Word) -> bool:
    """Lyndon word repeated 2^r times, with some part odd."""
    if not w or all(d % 2 == 0 for d in w):
        return False
    n = len(w)
    p = 1
    while p <= n:
        if n % p == 0 and w == w[:n // p] * p and is_lyndon(w[:n // p]):
            return True
        p *= 2
    return False


@lru_cache(maxsize=None)
def generator_words(n: int) -> Tuple[Word, ...]:
    return tuple(w for w in compositions(n) if is_generator(w))


def generator_count(n: int) -> int:
    """Predicted number of degree-n polynomial generators."""
    total = 0
    for d in range(1, n + 1):
        if n % d:
            continue
        m, mu = d, 1
        p = 2
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    mu = 0
                    break
                mu = -mu
            p += 1
        if mu and m > 1:
            mu = -mu
        total += mu * (2 ** (n // d) - 1)
    return total // n


def zeta_word(k: int) -> Word:
    return tuple(2 ** (k - 1 - i) for i in range(k))


def zeta_embed(x) -> F2Element:
    """Algebra embedding of the dual Steenrod algebra, zeta_k to its word."""
    out: set = set()
    for mono in x:
        term = UNIT
        for k, r in enumerate(mono, start=1):
            if r:
                term = product(term, power(frozenset({zeta_word(k)}), r))
        out ^= term
    return frozenset(out)


# ---------------------------------------------------------------------------
# expression in the polynomial generators

@lru_cache(maxsize=None)
def _poly_monomials(d: int) -> Tuple[PolyMono, ...]:
    """Multisets of generator words of total degree d, deterministic order."""
    gens = [w for k in range(1, d + 1) for w in generator_words(k)]

    def build(i: int, rem: int):
        if rem == 0:
            yield ()
            return
        if i == len(gens):
            return
        g = gens[i]
        dg = word_degree(g)
        yield from build(i + 1, rem)
        if dg <= rem:
            for tail in build(i, rem - dg):
                yield (g,) + tail

    return tuple(sorted(build(0, d)))


@lru_cache(maxsize=None)
def expand_monomial(mono: PolyMono) -> F2Element:
    out = UNIT
    for w in mono:
        out = product(out, frozenset({w}))
    return frozenset(out)


def expand(p: Poly) -> F2Element:
    out: set = set()
    for mono in p:
        out ^= expand_monomial(mono)
    return frozenset(out)


@lru_cache(maxsize=None)
def _monomial_matrix(d: int):
    """Rows: words of degree d; columns: generator monomials (expanded)."""
    monos = _poly_monomials(d)
    words = compositions(d)
    index = {w: i for i, w in enumerate(words)}
    cols = []
    for mono in monos:
        bits = 0
        for w in expand_monomial(mono):
            bits |= 1 << index[w]
        cols.append(bits)
    rows = [sum(((cols[j] >> i) & 1) << j for j in range(len(monos)))
            for i in range(len(words))]
    return monos, index, gf2.GF2Matrix.from_rows(rows, len(monos))


def to_polynomial(x: F2Element) -> Poly:
    """The unique expression in the polynomial generators (degreewise)."""
    if not x:
        return frozenset()
    d = word_degree(next(iter(x)))
    monos, index, m = _monomial_matrix(d)
    target = [0] * len(index)
    for w in x:
        target[index[w]] = 1
    sol = gf2.solve(m, target)
    if sol is None:
        raise ValueError("not expressible — internal bug")
    return frozenset(monos[i] for i, v in enumerate(sol) if v)


def is_zeta_word(w: Word) -> bool:
    return bool(w) and w == zeta_word(len(w))


def project_free(p: Poly) -> Dict[PolyMono, milnor.Element]:
    """Quotient by the dual-Steenrod subalgebra, written with dual-Steenrod
    coefficients on the remaining generator monomials."""
    out: Dict[PolyMono, set] = {}
    for mono in p:
        rest = tuple(w for w in mono if not is_zeta_word(w))
        if not rest:
            continue
        exps: List[int] = []
        for w in mono:
            if is_zeta_word(w):
                k = len(w)
                while len(exps) < k:
                    exps.append(0)
                exps[k - 1] += 1
        key = milnor.trim(exps)
        out.setdefault(rest, set())
        out[rest] ^= {key}
    return {mono: frozenset(c) for mono, c in out.items() if c}


def pairing(x: F2Element, f) -> int:
    """Evaluate a word form on a word combination from the free algebra."""
    return len(x & f) & 1


# ---------------------------------------------------------------------------
# the length-two quotient

@lru_cache(maxsize=None)
def _len2_data(d: int):
    triples = tuple((a, b, c)
                    for c in range(d // 3 + 1)
                    for b in range((d - 3 * c) // 2 + 1)
                    for a in (d - 3 * c - 2 * b,)
                    if not (a and b and c))
    words = tuple([(d,)] + [(i, d - i) for i in range(1, d)]) if d else ((),)
    index = {w: i for i, w in enumerate(words)}
    x1 = frozenset({(1,)})
    x2 = frozenset({(1, 1)})
    x3 = frozenset({(2, 1)})
    rows = []
    for (a, b, c) in triples:
        e = product(product(power(x1, a), power(x2, b)), power(x3, c))
        bits = 0
        for w in e:
            if len(w) <= 2:
                bits |= 1 << index[w]
        rows.append(bits)
    return triples, index, rows


def length2_quotient(p: Poly) -> FrozenSet[Tuple[int, int, int]]:
    """Image in the quotient dual to words of length at most two, written in
    the generators of degrees 1, 2, 3 (normal form avoids their product)."""
    x = expand(p)
    x = frozenset(w for w in x if len(w) <= 2)
    if not x:
        return frozenset()
    d = word_degree(next(iter(x)))
    triples, index, rows = _len2_data(d)
    cols = [sum(((rows[i] >> j) & 1) << i for i in range(len(triples)))
            for j in range(len(index))]
    m = gf2.GF2Matrix.from_rows(cols, len(triples))
    target = [0] * len(index)
    for w in x:
        target[index[w]] = 1
    sol = gf2.solve(m, target)
    if sol is None:
        raise ValueError("not in the length-two quotient — internal bug")
    return frozenset(t for t, v in zip(triples, sol) if v)


# ---------------------------------------------------------------------------
# mod-4 structure

def v(k: int) -> F2Element:
    """Half the defect between a doubled word and the shuffle square of its
    half, computed exactly over Z/4."""
    top: Z4Element = {tuple(2 ** (k - i) for i in range(k)): 1}
    zw: Z4Element = {zeta_word(k): 1}
    sq = product4(zw, zw)
    diff = dict(top)
    for w, c in sq.items():
        c2 = (diff.get(w, 0) - c) & 3
        if c2:
            diff[w] = c2
        else:
            diff.pop(w, None)
    if any(c & 1 for c in diff.values()):
        raise ValueError("defect is not divisible by 2 — internal bug")
    return frozenset(w for w, c in diff.items() if c == 2)


@lru_cache(maxsize=None)
def psi_monomial(mono: milnor.Mono) -> Z4Element:
    """Coefficientwise integral lift of a zeta monomial, expanded over Z/4."""
    out: Z4Element = {(): 1}
    for k, r in enumerate(mono, start=1):
        zw: Z4Element = {zeta_word(k): 1}
        for _ in range(r):
            out = product4(out, zw)
    return out


def eval_lifted_form(mono: milnor.Mono, b) -> int:
    """Pair the lifted zeta monomial against a mod-4 relation element; the
    value is even and the halved bit is returned."""
    lift = psi_monomial(mono)
    total = 0
    for w, c in b.items():
        total = (total + c * lift.get(w, 0)) & 3
    if total & 1:
        raise ValueError("odd pairing value — input not in the relation module")
    return total >> 1


def coaction_table(i: int) -> Dict[int, Dict[PolyMono, milnor.Element]]:
    """Coefficients of the relation-valued coaction on zeta_i: index j maps
    to the projected shuffle power paired with zeta_j."""
    out = {}
    for j in range(1, i):
        vp = power(v(i - j), 2 ** (j - 1))
        proj = project_free(to_polynomial(vp))
        if proj:
            out[j] = proj
    return out
