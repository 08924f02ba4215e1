"""Minimal free resolution of the ground field over the Steenrod algebra.

Generators are triples (filtration, internal degree, ordinal); free-module
elements are dicts mapping generators to admissibly reduced coefficients.
The resolution is built degree by degree: in each bidegree the kernel of
the previous differential is computed over the admissible basis and new
generators are adjoined for a complement of the part already hit.
"""
from __future__ import annotations

import random
from typing import Dict, List, Optional, Tuple

from . import gf2, steenrod
from .steenrod import Element, Mono

Gen = Tuple[int, int, int]
ModElement = Dict[Gen, Element]


def mod_add(x: ModElement, y: ModElement) -> ModElement:
    out = dict(x)
    for g, c in y.items():
        merged = out.get(g, steenrod.ZERO) ^ c
        if merged:
            out[g] = merged
        else:
            out.pop(g, None)
    return out


def mod_act(a: Element, x: ModElement) -> ModElement:
    out: ModElement = {}
    for g, c in x.items():
        prod = steenrod.product(a, c)
        if prod:
            out[g] = prod
    return out


def element_degree(x: ModElement) -> Optional[int]:
    for (_, t, _), c in x.items():
        return t + steenrod.degree(next(iter(c)))
    return None


class Resolution:
    """Minimal resolution builder; generators and differentials by bidegree."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.gens: Dict[int, List[Gen]] = {0: [(0, 0, 0)]}
        self.diff: Dict[Gen, ModElement] = {(0, 0, 0): {}}
        self.s_max = 0
        self.t_max = -1

    def generators(self, s: int, t: Optional[int] = None) -> List[Gen]:
        out = self.gens.get(s, [])
        if t is None:
            return list(out)
        return [g for g in out if g[1] == t]

    def basis(self, s: int, t: int) -> List[Tuple[Gen, Mono]]:
        return [(g, a) for g in self.gens.get(s, []) if g[1] <= t
                for a in steenrod.admissible_basis(t - g[1])]

    def apply(self, x: ModElement) -> ModElement:
        out: ModElement = {}
        for g, c in x.items():
            out = mod_add(out, mod_act(c, self.diff[g]))
        return out


def _vector(res: Resolution, x: ModElement, index: Dict[Tuple[Gen, Mono], int]) -> int:
    bits = 0
    for g, c in x.items():
        for a in c:
            bits |= 1 << index[(g, a)]
    return bits


def _insert(rows: Dict[int, int], bits: int) -> int:
    """Reduce against a pivot table and insert; returns the reduced vector."""
    while bits:
        p = bits.bit_length() - 1
        if p not in rows:
            rows[p] = bits
            return bits
        bits ^= rows[p]
    return 0

def _extend_bidegree(res: Resolution, s: int, t: int) -> None:
    source = res.basis(s - 1, t)
    index = {b: i for i, b in enumerate(source)}
    if s == 1:
        # augmentation target: only the unit survives
        target: List[Tuple[Gen, Mono]] = [((0, 0, 0), ())] if t == 0 else []
    else:
        target = res.basis(s - 2, t)
    tindex = {b: i for i, b in enumerate(target)}
    rows: List[int] = []
    for (g, a) in source:
        if s == 1:
            img = {(0, 0, 0): steenrod.UNIT} if (t == 0 and not a) else {}
        else:
            img = mod_act(frozenset({a}), res.diff[g])
        rows.append(_vector(res, img, tindex) if img else 0)
    cols = [sum(((rows[i] >> j) & 1) << i for i in range(len(source)))
            for j in range(len(target))]
    kernel = gf2.kernel_basis(
        gf2.GF2Matrix.from_rows(cols, len(source))) if target else \
        [[1 if i == j else 0 for i in range(len(source))]
         for j in range(len(source))]
    span: Dict[int, int] = {}
    for g in res.gens.get(s, []):
        if g[1] < t:
            for a in steenrod.admissible_basis(t - g[1]):
                img = mod_act(frozenset({a}), res.diff[g])
                if img:
                    _insert(span, _vector(res, img, index))
    order = list(range(len(kernel)))
    if res.seed:
        random.Random((res.seed, s, t).__hash__()).shuffle(order)
    ordinal = len(res.generators(s, t))
    for i in order:
        bits = sum(1 << j for j, v in enumerate(kernel[i]) if v)
        if not _insert(span, bits):
            continue
        value: ModElement = {}
        for j, v in enumerate(kernel[i]):
            if v:
                g, a = source[j]
                value[g] = value.get(g, steenrod.ZERO) ^ frozenset({a})
        gen: Gen = (s, t, ordinal)
        ordinal += 1
        res.gens.setdefault(s, []).append(gen)
        res.diff[gen] = value


def extend(res: Resolution, s_max: int, t_max: int) -> Resolution:
    """Grow the resolution to cover filtrations <= s_max, degrees <= t_max."""
    for t in range(t_max + 1):
        for s in range(1, min(s_max, t if t else 0) + 1):
            if t <= res.t_max and s <= res.s_max:
                continue
            _extend_bidegree(res, s, t)
    res.s_max = max(res.s_max, s_max)
    res.t_max = max(res.t_max, t_max)
    return res


def minimal_resolution(s_max: int, t_max: int, seed: int = 0) -> Resolution:
    return extend(Resolution(seed), s_max, t_max)


def ext_dims(res: Resolution) -> Dict[Tuple[int, int], int]:
    """Generator counts per bidegree (the dimensions of the derived functor)."""
    out: Dict[Tuple[int, int], int] = {}
    for s, gens in res.gens.items():
        for (_, t, _) in gens:
            out[(s, t)] = out.get((s, t), 0) + 1
    return out


def verify(res: Resolution) -> Dict[str, object]:
    """Check that the square of the differential vanishes and that no
    differential entry has a unit component."""
    violations: List[Tuple[Gen, str]] = []
    for s in sorted(res.gens):
        for g in res.gens[s]:
            d = res.diff[g]
            if any(() in c for c in d.values()):
                violations.append((g, "unit coefficient"))
            if s >= 2 and res.apply(d):
                violations.append((g, "differential square nonzero"))
    return {"ok": not violations, "violations": violations}
