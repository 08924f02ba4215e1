"""Free algebra on the Sq generators, its relation module, and the mod-4
lift with its canonical splitting.

F0 elements are frozensets of words (tuples of positive ints) over F2.
Mod-4 elements are dicts word -> coefficient in {1,2,3}.
A "pre pair" is (prefix, (n, m)): an admissible prefix followed by an
inadmissible generator pair, with last prefix entry >= 2n; these index the
basis of the relation module as a free right module.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from . import steenrod
from .steenrod import binom_odd

Word = Tuple[int, ...]
F0 = FrozenSet[Word]
B0 = Dict[Word, int]
PrePair = Tuple[Word, Tuple[int, int]]

F0_ZERO: F0 = frozenset()
F0_UNIT: F0 = frozenset({()})


def f0_degree(x: F0) -> int:
    return sum(next(iter(x))) if x else 0


def f0_product(x: F0, y: F0) -> F0:
    out: set = set()
    for u in x:
        for v in y:
            out ^= {u + v}
    return frozenset(out)


def q_f0(x: F0) -> steenrod.Element:
    """Projection to the Steenrod algebra (admissible expansion)."""
    return steenrod.from_words(x)


def adem_words(a: int, b: int) -> F0:
    """Right-hand side of the Adem relation for Sq^a Sq^b (0 < a < 2b)."""
    out: set = set()
    for k in range(a // 2 + 1):
        if binom_odd(b - k - 1, a - 2 * k):
            out ^= {(a + b - k, k) if k else (a + b,)}
    return frozenset(out)


def adem_element(a: int, b: int) -> F0:
    """The relation [a,b] = Sq^a Sq^b + (admissible expansion)."""
    if not 0 < a < 2 * b:
        raise ValueError("need 0 < a < 2b")
    return frozenset({(a, b)}) ^ adem_words(a, b)


@lru_cache(maxsize=None)
def adem_pairs(d: int) -> Tuple[Tuple[int, int], ...]:
    """All (n, m) with n + m = d and 0 < n < 2m."""
    return tuple((n, d - n) for n in range(1, d) if n < 2 * (d - n))


@lru_cache(maxsize=None)
def par_right(d: int) -> Tuple[PrePair, ...]:
    """Right preadmissible basis elements of total degree d."""
    out: List[PrePair] = []
    for k in range(2, d + 1):
        for (n, m) in adem_pairs(k):
            for p in steenrod.admissible_basis(d - k):
                if not p or p[-1] >= 2 * n:
                    out.append((p, (n, m)))
    out.sort(key=lambda pi: (len(pi[0]), tuple(-e for e in pi[0]), pi[1]))
    return tuple(out)


@lru_cache(maxsize=None)
def par_left(d: int) -> Tuple[Tuple[Tuple[int, int], Word], ...]:
    """Left preadmissible basis elements ((n, m), suffix) of degree d."""
    out = []
    for k in range(2, d + 1):
        for (n, m) in adem_pairs(k):
            for s in steenrod.admissible_basis(d - k):
                if not s or m >= 2 * s[0]:
                    out.append(((n, m), s))
    out.sort(key=lambda pi: (len(pi[1]), tuple(-e for e in pi[1]), pi[0]))
    return tuple(out)


def par_words(pi: PrePair) -> F0:
    prefix, (n, m) = pi
    return frozenset(prefix + w for w in adem_element(n, m))


def par_left_words(pi) -> F0:
    (n, m), suffix = pi
    return frozenset(w + suffix for w in adem_element(n, m))


def _leftmost_inadmissible(word: Word) -> int:
    for i in range(len(word) - 1):
        if word[i] < 2 * word[i + 1]:
            return i
    return -1


def _rightmost_inadmissible(word: Word) -> int:
    for i in range(len(word) - 2, -1, -1):
        if word[i] < 2 * word[i + 1]:
            return i
    return -1


def decompose_right(r: F0) -> Dict[PrePair, F0]:
    """Write a relation as sum of (preadmissible element)·(word coefficient).

    Sparse elimination: the lex-least non-admissible word determines a unique
    basis element whose subtraction replaces it by lex-greater words.
    """
    work = set(r)
    coeffs: Dict[PrePair, set] = {}
    while True:
        u = min((w for w in work if _leftmost_inadmissible(w) >= 0), default=None)
        if u is None:
            break
        i = _leftmost_inadmissible(u)
        pi: PrePair = (u[:i], (u[i], u[i + 1]))
        tail = u[i + 2:]
        coeffs.setdefault(pi, set()).add(tail)
        for w in par_words(pi):
            work ^= {w + tail}
    if work:
        raise ValueError("input is not a relation")
    return {pi: frozenset(c) for pi, c in coeffs.items() if c}


def decompose_left(r: F0) -> Dict[Tuple[Tuple[int, int], Word], F0]:
    """Mirror of decompose_right with suffixed basis and left coefficients."""
    work = set(r)
    coeffs: Dict[Tuple[Tuple[int, int], Word], set] = {}
    while True:
        u = min((w for w in work if _rightmost_inadmissible(w) >= 0), default=None)
        if u is None:
            break
        i = _rightmost_inadmissible(u)
        pi = ((u[i], u[i + 1]), u[i + 2:])
        head = u[:i]
        coeffs.setdefault(pi, set()).add(head)
        for w in par_left_words(pi):
            work ^= {head + w}
    if work:
        raise ValueError("input is not a relation")
    return {pi: frozenset(c) for pi, c in coeffs.items() if c}


def rbar_project(r: F0) -> Dict[PrePair, steenrod.Element]:
    """Image in the quotient by products of relations, as a free right
    module over the Steenrod algebra on the preadmissible basis."""
    out = {}
    for pi, c in decompose_right(r).items():
        val = q_f0(c)
        if val:
            out[pi] = val
    return out


# ---------------------------------------------------------------------------
# mod-4 lifts

def b0_add(x: B0, y: B0) -> B0:
    out = dict(x)
    for w, c in y.items():
        c2 = (out.get(w, 0) + c) & 3
        if c2:
            out[w] = c2
        else:
            out.pop(w, None)
    return out


def b0_scale(c: int, x: B0) -> B0:
    c &= 3
    return {w: (c * v) & 3 for w, v in x.items() if (c * v) & 3}


def b0_mul(x: B0, y: B0) -> B0:
    out: B0 = {}
    for u, cu in x.items():
        for v, cv in y.items():
            w = u + v
            c = (out.get(w, 0) + cu * cv) & 3
            if c:
                out[w] = c
            else:
                out.pop(w, None)
    return out


def b0_from_f0(x: F0) -> B0:
    """Word-wise lift with all coefficients 1."""
    return {w: 1 for w in x}


def b0_mod2(x: B0) -> F0:
    return frozenset(w for w, c in x.items() if c & 1)


def b0_half(x: B0) -> F0:
    """Divide an even element by 2, returning the mod-2 reduction."""
    if any(c & 1 for c in x.values()):
        raise ValueError("element is not divisible by 2")
    return frozenset(w for w, c in x.items() if c == 2)


def adem_element_4(a: int, b: int) -> B0:
    """The canonical mod-4 lift of [a,b] (all coefficients 0 or 1)."""
    return b0_from_f0(adem_element(a, b))


def phi_lift(r: F0) -> B0:
    """Right-equivariant splitting: lift each preadmissible component."""
    out: B0 = {}
    for pi, c in decompose_right(r).items():
        prefix, (n, m) = pi
        term = b0_mul(b0_mul(b0_from_f0(frozenset({prefix})), adem_element_4(n, m)),
                      b0_from_f0(c))
        out = b0_add(out, term)
    return out


@dataclass(frozen=True)
class Pair:
    """An element of the mod-4 relation module split as (relation, algebra)."""
    xbar: F0
    xi: steenrod.Element
    tag: str


def pair_decompose_phi(b: B0) -> Pair:
    xbar = b0_mod2(b)
    if q_f0(xbar):
        raise ValueError("input is not in the relation submodule")
    diff = b0_add(b, b0_scale(3, phi_lift(xbar)))
    xi = q_f0(b0_half(diff))
    return Pair(xbar=xbar, xi=xi, tag="phi")


def a_phi(alpha: steenrod.Element, r: F0) -> steenrod.Element:
    """Left-multiplication defect of the right-equivariant splitting."""
    f = b0_from_f0(frozenset(alpha))
    fr = f0_product(frozenset(alpha), r)
    diff = b0_add(b0_mul(f, phi_lift(r)), b0_scale(3, phi_lift(fr)))
    return q_f0(b0_half(diff))


# ---------------------------------------------------------------------------
# diagonal defect

def f0_diagonal(x: F0) -> FrozenSet[Tuple[Word, Word]]:
    """Cartan diagonal in the free algebra (no admissible reduction)."""
    out: set = set()
    for word in x:
        parts = [((), ())]
        for n in word:
            parts = [
                (u + ((i,) if i else ()), v + ((n - i,) if n - i else ()))
                for (u, v) in parts
                for i in range(n + 1)
            ]
        for p in parts:
            out ^= {p}
    return frozenset(out)


def b0_diagonal(x: B0) -> Dict[Tuple[Word, Word], int]:
    """Cartan diagonal over the mod-4 lift, with multiplicities."""
    out: Dict[Tuple[Word, Word], int] = {}
    for word, coeff in x.items():
        parts: Dict[Tuple[Word, Word], int] = {((), ()): coeff}
        for n in word:
            nxt: Dict[Tuple[Word, Word], int] = {}
            for (u, v), c in parts.items():
                for i in range(n + 1):
                    key = (u + ((i,) if i else ()), v + ((n - i,) if n - i else ()))
                    nxt[key] = (nxt.get(key, 0) + c) & 3
            parts = {k: c for k, c in nxt.items() if c}
        for k, c in parts.items():
            c2 = (out.get(k, 0) + c) & 3
            if c2:
                out[k] = c2
            else:
                out.pop(k, None)
    return out


def _adm_part(x: F0) -> F0:
    """Canonical complement projection: the admissible-word image of q."""
    return frozenset(steenrod.from_words(x))


def split_relation_diagonal(r: F0, relation_first: str = "left"):
    """Split the diagonal of a relation into (relation⊗free) + (free⊗relation)
    parts, deterministically (relation factor extracted from the side named
    by relation_first via the admissible complement)."""
    by_bidegree: Dict[Tuple[int, int], set] = {}
    for (u, v) in f0_diagonal(r):
        by_bidegree.setdefault((sum(u), sum(v)), set()).add((u, v))
    left_part: List[Tuple[F0, Word]] = []
    right_part: List[Tuple[Word, F0]] = []
    for block in by_bidegree.values():
        grouped: Dict[Word, set] = {}
        for (u, v) in block:
            if relation_first == "left":
                grouped.setdefault(v, set()).add(u)
            else:
                grouped.setdefault(u, set()).add(v)
        leftover: Dict[Word, set] = {}
        for key, vals in grouped.items():
            vf = frozenset(vals)
            adm = _adm_part(vf)
            rel = vf ^ adm
            if rel:
                if relation_first == "left":
                    left_part.append((rel, key))
                else:
                    right_part.append((key, rel))
            for w in adm:
                leftover.setdefault(w, set()).add(key)
        for w, keys in leftover.items():
            kf = frozenset(keys)
            if q_f0(kf):
                raise ValueError("diagonal split failed — internal bug")
            if kf:
                if relation_first == "left":
                    right_part.append((w, kf))
                else:
                    left_part.append((kf, w))
    return left_part, right_part


def u_phi(r: F0, relation_first: str = "left") -> steenrod.TensorElement:
    """Diagonal defect of the splitting, valued in the tensor square."""
    big = b0_diagonal(phi_lift(r))
    left_part, right_part = split_relation_diagonal(r, relation_first)
    s_hat: Dict[Tuple[Word, Word], int] = {}

    def acc(items: Iterable[Tuple[Tuple[Word, Word], int]]):
        nonlocal s_hat
        for k, c in items:
            c2 = (s_hat.get(k, 0) + c) & 3
            if c2:
                s_hat[k] = c2
            else:
                s_hat.pop(k, None)

    for rel, v in left_part:
        for w, c in phi_lift(rel).items():
            acc([((w, v), c)])
    for u, vf in right_part:
        for w, c in phi_lift(vf).items():
            acc([((u, w), c)])

    diff: Dict[Tuple[Word, Word], int] = dict(big)
    for k, c in s_hat.items():
        c2 = (diff.get(k, 0) - c) & 3
        if c2:
            diff[k] = c2
        else:
            diff.pop(k, None)
    out: set = set()
    for (u, v), c in diff.items():
        if c & 1:
            raise ValueError("diagonal defect not divisible by 2 — internal bug")
        if c == 2:
            for mu in steenrod.adem_rewrite(u):
                for mv in steenrod.adem_rewrite(v):
                    out ^= {(mu, mv)}
    return frozenset(out)


def pair_decompose_psi(b: B0) -> Pair:
    """Split via the comultiplicative splitting; the algebra part is read
    off by dual evaluation against zeta monomials."""
    from . import qsym

    xbar = b0_mod2(b)
    if q_f0(xbar):
        raise ValueError("input is not in the relation submodule")
    from . import milnor
    deg = f0_degree(xbar) if xbar else (sum(next(iter(b))) if b else 0)
    vals = {}
    for mono in milnor.monomial_basis(deg):
        vals[mono] = qsym.eval_lifted_form(mono, b)
    form = frozenset(m for m, v in vals.items() if v)
    xi = milnor.from_milnor(form, deg) if form else steenrod.ZERO
    return Pair(xbar=xbar, xi=xi, tag="psi")
