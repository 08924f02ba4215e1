"""Pairing operators between the relation module and the tensor square.

Primal side: operators taking relations (word combinations) to the tensor
square of the Steenrod algebra.  Dual side: operators producing forms on
the relation quotient.  A relation form is stored as a dict mapping each
right preadmissible basis element to the dual-Steenrod element that
evaluates its word coefficient; it can be rendered as a word combination
(canonical representative vanishing on admissible words).
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, FrozenSet, List, Tuple

from . import gf2, milnor, qsym, relations, steenrod
from .relations import F0, PrePair, adem_element, decompose_right, \
    f0_degree, f0_product, par_right, par_words, q_f0
from .steenrod import Element, Mono, TensorElement, tensor_product

RForm = Dict[PrePair, milnor.Element]

T_ZERO: TensorElement = frozenset()


def tensor_swap(t: TensorElement) -> TensorElement:
    return frozenset((b, a) for (a, b) in t)


def symmetrize(t: TensorElement) -> TensorElement:
    return t ^ tensor_swap(t)


def _sq(n: int) -> Element:
    if n < 0:
        return steenrod.ZERO
    return steenrod.UNIT if n == 0 else frozenset({(n,)})


def _sq_pair(n: int, m: int) -> Element:
    """Admissible reduction of Sq^n Sq^m (either exponent may be zero)."""
    return steenrod.from_words([tuple(k for k in (n, m) if k)])


# ---------------------------------------------------------------------------
# primal operators

def s_part(n: int) -> TensorElement:
    """Sum of Sq^a (x) Sq^b over odd a, b with a + b = n - 1."""
    out: set = set()
    for a in range(1, n - 1, 2):
        b = n - 1 - a
        if b % 2:
            out ^= {((a,), (b,))}
    return frozenset(out)


def l_free(n: int, m: int) -> TensorElement:
    """Left action values on two-letter words: splits with odd inner pair."""
    out: set = set()
    for n2 in range(1, n + 1, 2):
        for m1 in range(1, m + 1, 2):
            left = _sq_pair(n - n2, m1)
            right = _sq_pair(n2, m - m1)
            for a in left:
                for b in right:
                    out ^= {(a, b)}
    return frozenset(out)


def _adem_weighted(op, n: int, m: int) -> TensorElement:
    """op(n, m) plus the Adem-expansion terms of the relation [n, m]."""
    if not 0 < n < 2 * m:
        raise ValueError("need 0 < n < 2m")
    out = set(op(n, m))
    for k in range(n // 2 + 1):
        if steenrod.binom_odd(m - k - 1, n - 2 * k):
            out ^= op(n + m - k, k)
    return frozenset(out)


@lru_cache(maxsize=None)
def l_adem(n: int, m: int) -> TensorElement:
    return _adem_weighted(l_free, n, m)


def s_free(n: int, m: int) -> TensorElement:
    return tensor_product(s_part(n), steenrod.diagonal(_sq(m))) ^ \
        tensor_product(steenrod.diagonal(_sq(n)), s_part(m)) ^ \
        tensor_product(steenrod.diagonal(_sq(n - 1)), s_part(m + 1))


@lru_cache(maxsize=None)
def s_adem(n: int, m: int) -> TensorElement:
    return _adem_weighted(s_free, n, m)


def l_tilde(r: F0) -> TensorElement:
    """Bimodule extension of the relation values over the quotient module."""
    out: set = set()
    for (prefix, (n, m)), c in decompose_right(r).items():
        t = tensor_product(steenrod.diagonal(frozenset({prefix})), l_adem(n, m))
        out ^= tensor_product(t, steenrod.diagonal(q_f0(c)))
    return frozenset(out)


def l_op(alpha: Element, r: F0) -> TensorElement:
    """Left action operator (word degree preserved, defect degree -1)."""
    return tensor_product(steenrod.diagonal(steenrod.down(alpha)), l_tilde(r))


def s_op(r: F0) -> TensorElement:
    """Symmetry operator: right-module extension with twisted left rule."""
    out: set = set()
    for (prefix, (n, m)), c in decompose_right(r).items():
        a = frozenset({prefix})
        t = tensor_product(steenrod.diagonal(a), s_adem(n, m))
        t ^= symmetrize(tensor_product(steenrod.diagonal(steenrod.down(a)),
                                       l_adem(n, m)))
        out ^= tensor_product(t, steenrod.diagonal(q_f0(c)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# relation forms

def rform_degree(phi: RForm):
    for (prefix, (n, m)), coeff in phi.items():
        return sum(prefix) + n + m + milnor.degree(next(iter(coeff)))
    return None


def rform_add(x: RForm, y: RForm) -> RForm:
    out = dict(x)
    for pi, coeff in y.items():
        merged = out.get(pi, frozenset()) ^ coeff
        if merged:
            out[pi] = merged
        else:
            out.pop(pi, None)
    return out


@lru_cache(maxsize=None)
def _eval_coords(r: F0) -> Tuple[Tuple[PrePair, Element], ...]:
    return tuple((pi, q_f0(c)) for pi, c in decompose_right(r).items())


def rform_eval(phi: RForm, r: F0) -> int:
    total = 0
    for pi, qc in _eval_coords(r):
        coeff = phi.get(pi)
        if coeff:
            total ^= milnor.pairing(coeff, qc)
    return total


def _rep_on_word(phi: RForm, w: Tuple[int, ...]) -> int:
    """Canonical representative value on a single word (zero on the
    admissible complement)."""
    rel = frozenset({w}) ^ steenrod.adem_rewrite(w)
    return rform_eval(phi, rel) if rel else 0


@lru_cache(maxsize=None)
def _cartan_splits_deg(w: Tuple[int, ...], dv: int) -> Tuple:
    """Splits of a word whose second part has the prescribed degree (the
    degree of the acted-on form); built letterwise with degree pruning so
    the full split set of a long word is never stored."""
    rest = sum(w)
    if dv < 0 or dv > rest:
        return ()
    partial = {((), ()): 1}
    for n in w:
        rest -= n
        nxt: Dict[Tuple, int] = {}
        for (u, v), bit in partial.items():
            if not bit:
                continue
            s = sum(v)
            for i in range(n + 1):
                s2 = s + n - i
                if s2 > dv or s2 + rest < dv:
                    continue
                key = (u + (i,) if i else u, v + (n - i,) if n - i else v)
                nxt[key] = nxt.get(key, 0) ^ 1
        partial = nxt
    return tuple(k for k, bit in partial.items() if bit)


def _act_value(zwords, phi: RForm, memo: dict, words: F0, dv) -> int:
    """Value of (dual-algebra element)·(form) on a word combination; the
    shuffle product of forms is dual to the diagonal on words."""
    if dv is None:
        return 0
    total = 0
    for w in words:
        for (u, v) in _cartan_splits_deg(w, dv):
            if u in zwords:
                if v not in memo:
                    memo[v] = _rep_on_word(phi, v)
                total ^= memo[v]
    return total


def module_action_eval(z: milnor.Element, phi: RForm, r: F0) -> int:
    return _act_value(qsym.zeta_embed(z), phi, {}, r, rform_degree(phi))


def rform_act(z: milnor.Element, phi: RForm) -> RForm:
    """Module action of the dual Steenrod algebra, rematerialized."""
    if not z or not phi:
        return {}
    dphi = rform_degree(phi)
    d = milnor.degree(next(iter(z))) + dphi
    zwords = qsym.zeta_embed(z)
    memo: dict = {}
    out: RForm = {}
    for dp in range(2, d + 1):
        adm = steenrod.admissible_basis(d - dp)
        for pi in par_right(dp):
            pw = par_words(pi)
            vals = [_act_value(zwords, phi, memo,
                               f0_product(pw, frozenset({a})), dphi)
                    for a in adm]
            if any(vals):
                out[pi] = milnor.form_to_dual(d - dp, vals)
    return out


def rform_from_words(x: qsym.F2Element) -> RForm:
    """Relation form represented by a word combination."""
    if not x:
        return {}
    d = qsym.word_degree(next(iter(x)))
    out: RForm = {}
    for dp in range(2, d + 1):
        adm = steenrod.admissible_basis(d - dp)
        for pi in par_right(dp):
            pw = par_words(pi)
            vals = [qsym.pairing(x, f0_product(pw, frozenset({a})))
                    for a in adm]
            if any(vals):
                out[pi] = milnor.form_to_dual(d - dp, vals)
    return out


def rform_to_words(phi: RForm) -> qsym.F2Element:
    """Canonical word representative (solved with free variables zero)."""
    if not phi:
        return qsym.ZERO
    d = rform_degree(phi)
    words = qsym.compositions(d)
    index = {w: i for i, w in enumerate(words)}
    rows: List[int] = []
    rhs: List[int] = []
    for dp in range(2, d + 1):
        for pi in par_right(dp):
            pw = par_words(pi)
            coeff = phi.get(pi, frozenset())
            for w in qsym.compositions(d - dp):
                bits = 0
                for u in pw:
                    bits ^= 1 << index[u + w]
                rows.append(bits)
                rhs.append(milnor.pairing(coeff, steenrod.adem_rewrite(w))
                           if coeff else 0)
    sol = gf2.solve(gf2.GF2Matrix.from_rows(rows, len(words)), rhs)
    if sol is None:
        raise ValueError("inconsistent relation form — internal bug")
    return frozenset(words[j] for j, v in enumerate(sol) if v)


def rform_coaction(phi: RForm) -> Dict[Mono, RForm]:
    """Left coaction: transpose of left multiplication in the
    (preadmissible x admissible) basis."""
    d = rform_degree(phi)
    out: Dict[Mono, RForm] = {}
    for k in range(0, d - 1):
        adm_k = steenrod.admissible_basis(k)
        for dp in range(2, d - k + 1):
            adm_b = steenrod.admissible_basis(d - k - dp)
            for pi in par_right(dp):
                pw = par_words(pi)
                for bi, b in enumerate(adm_b):
                    rb = f0_product(pw, frozenset({b}))
                    vals = [rform_eval(phi, f0_product(frozenset({a}), rb))
                            for a in adm_k]
                    if not any(vals):
                        continue
                    dual_b = milnor.form_to_dual(
                        d - k - dp, [1 if i == bi else 0
                                     for i in range(len(adm_b))])
                    for mono in milnor.form_to_dual(k, vals):
                        cur = out.setdefault(mono, {})
                        merged = cur.get(pi, frozenset()) ^ dual_b
                        if merged:
                            cur[pi] = merged
                        else:
                            cur.pop(pi, None)
    return {mono: ph for mono, ph in out.items() if ph}


# ---------------------------------------------------------------------------
# dual generator values (solved from the closed-form images)

_M11 = frozenset({(1, 1)})
_M11SQ = frozenset({(2, 2)})
_M1M11SQ = qsym.product(frozenset({(1,)}), _M11SQ)


def _zeta_pow(k: int, e: int) -> milnor.Element:
    if k < 0:
        return milnor.ZERO
    if k == 0:
        return milnor.UNIT
    return milnor.zeta(k, e)


def _zprod(*factors) -> milnor.Element:
    out = milnor.UNIT
    for f in factors:
        out = milnor.product(out, f)
    return out


def _gen_rform(d: int, terms) -> RForm:
    """Form with value <left, prefix>·<mid, [n,m]> on basis elements with
    trivial coefficient; terms is a list of (left, mid) pairs."""
    out: RForm = {}
    for pi in par_right(d):
        prefix, (n, m) = pi
        a = frozenset({prefix})
        bit = 0
        for left, mid in terms:
            bit ^= milnor.pairing(left, a) & \
                qsym.pairing(mid, adem_element(n, m))
        if bit:
            out[pi] = milnor.UNIT
    return out


@lru_cache(maxsize=None)
def _l_gen(i: int, j: int) -> RForm:
    d = 2 ** i + 2 ** j - 2
    terms = [(_zprod(_zeta_pow(i - 1, 2), _zeta_pow(j - 1, 2)), _M11),
             (_zprod(_zeta_pow(i - 2, 4), _zeta_pow(j - 1, 2)), _M11SQ)]
    return _gen_rform(d, terms)


@lru_cache(maxsize=None)
def _s_gen(i: int, j: int) -> RForm:
    d = 2 ** i + 2 ** j - 1
    z1 = milnor.zeta(1)
    terms = [(_zprod(_zeta_pow(i - 1, 2), _zeta_pow(j - 2, 4)), _M1M11SQ),
             (_zprod(_zeta_pow(i - 2, 4), _zeta_pow(j - 1, 2)), _M1M11SQ),
             (_zprod(z1, _zeta_pow(i - 2, 4), _zeta_pow(j - 1, 2)), _M11SQ),
             (_zprod(z1, _zeta_pow(i - 1, 2), _zeta_pow(j - 2, 4)), _M11SQ)]
    return _gen_rform(d, terms)


def _odd_reductions(mono: Mono):
    for i, e in enumerate(mono):
        if e % 2:
            yield i + 1, milnor.trim(mono[:i] + (e - 1,) + mono[i + 1:])


def _bider(gen, x: Mono, y: Mono) -> RForm:
    """Biderivation extension of generator values to monomials."""
    out: RForm = {}
    for i, rx in _odd_reductions(x):
        for j, ry in _odd_reductions(y):
            g = gen(i, j)
            if g:
                cof = frozenset({milnor.mono_product(rx, ry)})
                out = rform_add(out, rform_act(cof, g))
    return out


_xi_memo: Dict[Tuple[Mono, Mono], RForm] = {}


def xi_rform(x: Mono, y: Mono) -> RForm:
    """Cocycle splitting built from the symmetry generator values: terms
    indexed by i < j with the i-th exponent of y and j-th of x odd."""
    key = (x, y)
    if key in _xi_memo:
        return _xi_memo[key]
    n = max(len(x), len(y))
    dx = tuple(x) + (0,) * (n - len(x))
    ey = tuple(y) + (0,) * (n - len(y))
    out: RForm = {}
    for i in range(1, n + 1):
        if ey[i - 1] % 2 == 0:
            continue
        for j in range(i + 1, n + 1):
            if dx[j - 1] % 2 == 0:
                continue
            g = _s_gen(i, j)
            if not g:
                continue
            cof = list(dx[k] + ey[k] for k in range(n))
            cof[i - 1] -= 1
            cof[j - 1] -= 1
            out = rform_add(out, rform_act(frozenset({milnor.trim(cof)}), g))
    _xi_memo[key] = out
    return out


def s_rform(x: Mono, y: Mono) -> RForm:
    return _bider(_s_gen, x, y)


def ltilde_rform(x: Mono, y: Mono) -> RForm:
    return _bider(_l_gen, x, y)


def _nabla_rform(op, x: Mono, y: Mono) -> Dict[Mono, RForm]:
    """Coaction deviation: coaction of op(x, y) minus the diagonal terms."""
    acc: Dict[Mono, RForm] = {}
    top = op(x, y)
    if top:
        for mono, ph in rform_coaction(top).items():
            acc[mono] = rform_add(acc.get(mono, {}), ph)
    for (xl, xr) in milnor.coproduct_mono(x):
        for (yl, yr) in milnor.coproduct_mono(y):
            rep = op(xr, yr)
            if rep:
                key = milnor.mono_product(xl, yl)
                acc[key] = rform_add(acc.get(key, {}), rep)
    return {mono: ph for mono, ph in acc.items() if ph}


_nabla_xi_memo: Dict[Tuple[Mono, Mono], Dict[Mono, RForm]] = {}


def nabla_xi_rform(x: Mono, y: Mono) -> Dict[Mono, RForm]:
    key = (x, y)
    if key not in _nabla_xi_memo:
        _nabla_xi_memo[key] = _nabla_rform(xi_rform, x, y)
    return _nabla_xi_memo[key]


# ---------------------------------------------------------------------------
# public dual operators (word-combination representatives)

def ltilde_star(i: int, j: int) -> qsym.F2Element:
    return rform_to_words(_l_gen(i, j))


def s_star(x: Mono, y: Mono) -> qsym.F2Element:
    return rform_to_words(s_rform(x, y))


def xi_star(x: Mono, y: Mono) -> qsym.F2Element:
    return rform_to_words(xi_rform(x, y))


def l_star(x: Mono, y: Mono) -> Dict[Mono, qsym.F2Element]:
    """Tensor-square dual of the left action: zeta_1-shifted coproduct
    cofactors against the biderivation extension."""
    acc: Dict[Mono, RForm] = {}
    for (xl, xr) in milnor.coproduct_mono(x):
        for (yl, yr) in milnor.coproduct_mono(y):
            rep = ltilde_rform(xr, yr)
            if rep:
                key = milnor.mono_product((1,), milnor.mono_product(xl, yl))
                acc[key] = rform_add(acc.get(key, {}), rep)
    return {mono: rform_to_words(ph) for mono, ph in acc.items() if ph}


def nabla_xi_star(x: Mono, y: Mono) -> Dict[Mono, qsym.F2Element]:
    return {mono: rform_to_words(ph)
            for mono, ph in nabla_xi_rform(x, y).items()}


def nabla_s_star(x: Mono, y: Mono) -> Dict[Mono, qsym.F2Element]:
    return {mono: rform_to_words(ph)
            for mono, ph in _nabla_rform(s_rform, x, y).items()}


def k_star(x: Mono, y: Mono) -> qsym.F2Element:
    """Closed-form length-two operator value on a pair of monomials."""
    if any(x[2:]) or any(y[2:]):
        return qsym.ZERO
    n1 = x[0] if x else 0
    n2 = x[1] if len(x) > 1 else 0
    m1 = y[0] if y else 0
    m2 = y[1] if len(y) > 1 else 0
    if n1 % 2 == 0 or m2 % 2 == 0:
        return qsym.ZERO
    out = qsym.power(frozenset({(1,)}), n1 + m1)
    out = qsym.product(out, qsym.power(frozenset({(2, 1)}), n2 + m2 - 1))
    return qsym.product(out, _M11SQ)


def nabla_xi_primal(alpha: Element, r: F0) -> TensorElement:
    """Degreewise transpose of the cocycle deviation against the
    (monomial x preadmissible·admissible) pairing bases."""
    if not alpha or not r:
        return T_ZERO
    da = steenrod.degree(next(iter(alpha)))
    total = da + f0_degree(r) - 1
    out: set = set()
    for dx in range(total + 1):
        dy = total - dx
        cols: Dict[Mono, set] = {}
        for y in milnor.monomial_basis(dy):
            hits: set = set()
            for x in milnor.monomial_basis(dx):
                bit = 0
                for mono, ph in nabla_xi_rform(x, y).items():
                    if milnor.degree(mono) == da:
                        bit ^= milnor.pairing(frozenset({mono}), alpha) & \
                            rform_eval(ph, r)
                if bit:
                    hits ^= {x}
            if hits:
                for c in milnor.from_milnor(frozenset(hits), dx):
                    cols.setdefault(c, set()).symmetric_difference_update({y})
        for c, ys in cols.items():
            for dword in milnor.from_milnor(frozenset(ys), dy):
                out ^= {(c, dword)}
    return frozenset(out)
