"""The multiplicative module structure (sharp) on the symmetric-group
semiring: generator-pair products from the defining series identities, the
recursive evaluator driven by the coalgebraic semimodule axioms, the mixed
Cartan expansion, and mixed-Adem verification.

Generator pairs at p = 2 come from E^0(s) # E^0(t) = E^0(s+t) E^0(t); at odd
p from the four series identities with prefactor [p^(p-2)-1] o (...) and
products of reindexed series over the residues c = 0, ..., p-1.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from .arith import binom_mod_p, check_prime
from .eops_algebra import EElement, RING_E
from .semiring import (SemiringElement, SemiringTensor, inject_e, mono_degree,
                       _mono_psi, _multiplicity, _split_mono)
from .sequences import gen_degree


class LargePrimeGate(Exception):
    pass


def _check_gate(p, total_degree, allow_large_p):
    if p >= 5 and not allow_large_p:
        raise LargePrimeGate(
            f"sharp at p={p} multiplies {p**(p-2)-1}-fold coproducts; pass "
            "allow_large_p=True (and keep degrees small) to proceed")
    if p >= 5 and total_degree > 12:
        raise LargePrimeGate(f"degree {total_degree} exceeds the p>=5 cap of 12")


# ---------------------------------------------------------------------------
# bivariate series over the semiring


def _series_add(s1, s2, p):
    out = dict(s1)
    for k, v in s2.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _series_dot(s1, s2, trunc, p):
    out = {}
    for (a1, b1), v1 in s1.items():
        for (a2, b2), v2 in s2.items():
            key = (a1 + a2, b1 + b2)
            if key[0] + key[1] > trunc:
                continue
            prod = v1.dot(v2)
            if prod.is_zero():
                continue
            out[key] = out[key] + prod if key in out else prod
    return {k: v for k, v in out.items() if not v.is_zero()}


def _series_scale(s, c, p):
    return {k: c * v for k, v in s.items() if not (c * v).is_zero()}


def _etilde_exp(p, eps, m):
    return m if p == 2 else (p - 1) * m - eps


@lru_cache(maxsize=None)
def _etilde_factor(p, eps, c, trunc):
    """Series E~eps(c*s + t) as dict[(s_exp, t_exp)] -> SemiringElement."""
    out = {}
    m = 1 if eps else 0
    while _etilde_exp(p, eps, m) <= trunc:
        e = _etilde_exp(p, eps, m)
        coeff = inject_e(EElement.gen(p, eps, m, RING_E))
        for j in range(e + 1):
            sc = (binom_mod_p(e, j, p) * pow(c, j, p)) % p
            if not sc:
                continue
            key = (j, e - j)
            val = sc * coeff
            out[key] = out[key] + val if key in out else val
        m += 1
    return {k: v for k, v in out.items() if not v.is_zero()}


@lru_cache(maxsize=None)
def _residue_product(p, marks, trunc):
    """prod_{c=0}^{p-1} E~(marks[c])(c*s+t), marks[c] in {0, 1}."""
    series = {(0, 0): SemiringElement.one(p)}
    for c in range(p):
        series = _series_dot(series, _etilde_factor(p, marks[c], c, trunc), trunc, p)
    return series


@lru_cache(maxsize=None)
def _prefactor(p, e1, e2, trunc):
    """Series [p^(p-2)-1] o (E~e1(s) o E~e2(t))."""
    big = p ** (p - 2) - 1
    bracket = SemiringElement.bracket(p, big)
    out = {}
    m = 1 if e1 else 0
    while _etilde_exp(p, e1, m) <= trunc:
        n = 1 if e2 else 0
        while _etilde_exp(p, e1, m) + _etilde_exp(p, e2, n) <= trunc:
            pair = EElement.gen(p, e1, m, RING_E).circ(EElement.gen(p, e2, n, RING_E))
            val = bracket.circ(inject_e(pair))
            if not val.is_zero():
                key = (_etilde_exp(p, e1, m), _etilde_exp(p, e2, n))
                out[key] = out[key] + val if key in out else val
            n += 1
        m += 1
    return {k: v for k, v in out.items() if not v.is_zero()}


@lru_cache(maxsize=None)
def _sharp_rhs_series(p, e1, e2, trunc):
    """RHS of the defining identity for E~e1(s) # E~e2(t), coefficientwise."""
    if p == 2:
        # E^0(s+t) E^0(t)
        out = {}
        for a in range(trunc + 1):
            ea = inject_e(EElement.gen(2, 0, a, RING_E))
            for j in range(a + 1):
                if not binom_mod_p(a, j, 2):
                    continue
                for b in range(trunc + 1 - a):
                    key = (j, a - j + b)
                    if key[0] + key[1] > trunc:
                        continue
                    val = ea.dot(inject_e(EElement.gen(2, 0, b, RING_E)))
                    out[key] = out[key] + val if key in out else val
        return {k: v for k, v in out.items() if not v.is_zero()}

    zeros = tuple([0] * p)
    def marks_one(k):
        return tuple(1 if c == k else 0 for c in range(p))
    def marks_two(k, l):
        return tuple((1 if c == k else 0) + (1 if c == l else 0) for c in range(p))

    if (e1, e2) == (0, 0):
        return _series_dot(_prefactor(p, 0, 0, trunc),
                           _residue_product(p, zeros, trunc), trunc, p)
    if (e1, e2) == (0, 1):
        out = _series_dot(_prefactor(p, 0, 1, trunc),
                          _residue_product(p, zeros, trunc), trunc, p)
        acc = {}
        for k in range(p):
            acc = _series_add(acc, _residue_product(p, marks_one(k), trunc), p)
        return _series_add(out, _series_dot(_prefactor(p, 0, 0, trunc), acc, trunc, p), p)
    if (e1, e2) == (1, 0):
        out = _series_dot(_prefactor(p, 1, 0, trunc),
                          _residue_product(p, zeros, trunc), trunc, p)
        acc = {}
        for k in range(p):
            if k % p:
                acc = _series_add(acc, _series_scale(_residue_product(p, marks_one(k), trunc), k % p, p), p)
        return _series_add(out, _series_dot(_prefactor(p, 0, 0, trunc), acc, trunc, p), p)
    # (1, 1)
    out = _series_dot(_prefactor(p, 1, 1, trunc),
                      _residue_product(p, zeros, trunc), trunc, p)
    acc = {}
    for k in range(p):
        if k % p:
            acc = _series_add(acc, _series_scale(_residue_product(p, marks_one(k), trunc), (-k) % p, p), p)
    out = _series_add(out, _series_dot(_prefactor(p, 0, 1, trunc), acc, trunc, p), p)
    acc = {}
    for k in range(p):
        acc = _series_add(acc, _residue_product(p, marks_one(k), trunc), p)
    out = _series_add(out, _series_dot(_prefactor(p, 1, 0, trunc), acc, trunc, p), p)
    acc = {}
    for l in range(p):
        for k in range(l + 1, p):
            acc = _series_add(acc, _series_scale(_residue_product(p, marks_two(k, l), trunc), (-(k - l)) % p, p), p)
    return _series_add(out, _series_dot(_prefactor(p, 0, 0, trunc), acc, trunc, p), p)


@lru_cache(maxsize=None)
def sharp_gen_pair(eps1, m, eps2, n, p, allow_large_p=False) -> SemiringElement:
    """E^eps1_m # E^eps2_n, a class of weight p^p."""
    check_prime(p)
    d_out = gen_degree(eps1, m, p) + gen_degree(eps2, n, p)
    _check_gate(p, d_out, allow_large_p)
    a, b = _etilde_exp(p, eps1, m), _etilde_exp(p, eps2, n)
    if a < 0 or b < 0:
        raise ValueError("illegitimate generator indices")
    from . import cache as _cache
    disk = _cache.store("sharp")
    key = f"{p}:{eps1}:{m}:{eps2}:{n}"
    hit = disk.get(key)
    if hit is not None:
        return SemiringElement.from_json(hit)
    series = _sharp_rhs_series(p, eps1, eps2, a + b)
    result = series.get((a, b), SemiringElement.zero(p))
    disk.put(key, result.to_json())
    return result


# ---------------------------------------------------------------------------
# the full evaluator


def sharp(r: SemiringElement, x: SemiringElement, allow_large_p=False) -> SemiringElement:
    """The multiplicative module action r # x on the semiring."""
    if r.p != x.p:
        raise ValueError("mixed primes")
    out = SemiringElement.zero(r.p)
    for mr, cr in r.terms.items():
        for mx, cx in x.terms.items():
            out = out + (cr * cx) * _sharp_mono(r.p, mr, mx, allow_large_p)
    return out


@lru_cache(maxsize=None)
def _sharp_mono(p, mr, mx, allow_large_p=False) -> SemiringElement:
    mult_r = _multiplicity(mr)
    if mult_r == 0:
        # 1 # x = counit(x) [1]
        c = SemiringElement(p, {mx: 1}).counit()
        return c * SemiringElement.bracket(p, 1)
    if mr == (1, ()):
        return SemiringElement(p, {mx: 1})
    if mult_r >= 2:
        # (f . rest) # x = sum +- (f # x') o (rest # x'')
        f, rest = _split_mono(mr)
        rest_deg = mono_degree(rest, p)
        out = SemiringElement.zero(p)
        for (a, b), c in _mono_psi(p, mx).items():
            sign = 1
            if p != 2 and rest_deg % 2 and mono_degree(a, p) % 2:
                sign = -1
            left = _sharp_mono(p, f, a, allow_large_p)
            if left.is_zero():
                continue
            right = _sharp_mono(p, rest, b, allow_large_p)
            out = out + (c * sign) * left.circ(right)
        return out
    # left argument is a single generator monomial
    j = mr[1][0][0]
    if len(j) >= 2:
        # (E^b_min o E_tail) # x = E^b_min # (inject(E_tail) # x)
        inner = inject_e(EElement(p, RING_E, {j[1:]: 1}))
        inner_sharp = sharp(inner, SemiringElement(p, {mx: 1}), allow_large_p)
        head_el = inject_e(EElement(p, RING_E, {j[:1]: 1}))
        return sharp(head_el, inner_sharp, allow_large_p)
    # single E-generator on the left
    mult_x = _multiplicity(mx)
    if mult_x == 0:
        return SemiringElement.zero(p)  # r # 1 = counit(r) 1 = 0 for generators
    if mx == (1, ()):
        return SemiringElement.zero(p)  # r # [1] = counit(r) [1] = 0
    if mult_x >= 2:
        f, rest = _split_mono(mx)
        return _mixed_cartan_mono(p, mr, f, rest, allow_large_p)
    k = mx[1][0][0]
    if len(k) >= 2:
        # mixed Adem: r # (s o y) with s = head generator of k, y = inject(tail)
        eps_s, n_s = k[0]
        s_el = inject_e(EElement.gen(p, eps_s, n_s, RING_E))
        y = inject_e(EElement(p, RING_E, {k[1:]: 1}))
        s_deg = gen_degree(eps_s, n_s, p)
        out = SemiringElement.zero(p)
        for (a, b), c in _mono_psi(p, mr).items():
            sign = 1
            if p != 2 and s_deg % 2 and mono_degree(b, p) % 2:
                sign = -1
            left = sharp(SemiringElement(p, {a: 1}), s_el, allow_large_p)
            if left.is_zero():
                continue
            right = sharp(SemiringElement(p, {b: 1}), y, allow_large_p)
            out = out + (c * sign) * left.circ(right)
        return out
    eps1, m1 = j[0]
    eps2, m2 = k[0]
    return sharp_gen_pair(eps1, m1, eps2, m2, p, allow_large_p)


def _is_semiring_gen(p, j):
    from .sequences import COND_SEMIRING, satisfies
    return satisfies(j, p, COND_SEMIRING)


# ---------------------------------------------------------------------------
# mixed Cartan


def _triple_psi_iterated(p, triple, times):
    """Iterated coproduct of r (x) z (x) w in the tensor coalgebra, with
    Koszul signs; returns list of (coeff, tuple of (mr, mz, mw) slots)."""
    states = [(1, (triple,))]
    for _ in range(times):
        new = []
        for coeff, slots in states:
            head, last = slots[:-1], slots[-1]
            for c2, t1, t2 in _triple_psi(p, last):
                new.append(((coeff * c2) % p, head + (t1, t2)))
        states = new
    return [(c, s) for c, s in states if c]


def _triple_psi(p, triple):
    """psi of (mr, mz, mw): list of (coeff, triple1, triple2)."""
    mr, mz, mw = triple
    out = []
    for (r1, r2), cr in _mono_psi(p, mr).items():
        d_r2 = mono_degree(r2, p)
        for (z1, z2), cz in _mono_psi(p, mz).items():
            d_z1, d_z2 = mono_degree(z1, p), mono_degree(z2, p)
            for (w1, w2), cw in _mono_psi(p, mw).items():
                d_w1 = mono_degree(w1, p)
                sign = 1
                if p != 2:
                    t = d_r2 * d_z1 + (d_r2 + d_z2) * d_w1
                    if t % 2:
                        sign = -1
                out.append(((cr * cz * cw * sign) % p, (r1, z1, w1), (r2, z2, w2)))
    return out


def mixed_cartan(r: SemiringElement, x: SemiringElement, y: SemiringElement,
                 allow_large_p=False) -> SemiringElement:
    """r # (x y) for r in the span of single generators E^eps_n."""
    p = r.p
    out = SemiringElement.zero(p)
    for mr, cr in r.terms.items():
        if _multiplicity(mr) != 1 or mr[0] != 0:
            raise ValueError("mixed_cartan needs a generator left argument")
        for mx, cx in x.terms.items():
            for my, cy in y.terms.items():
                out = out + (cr * cx * cy) * _mixed_cartan_mono(p, mr, mx, my, allow_large_p)
    return out


@lru_cache(maxsize=None)
def _mixed_cartan_mono(p, mr, mz, mw, allow_large_p=False) -> SemiringElement:
    """T-expansion of r # (z w) for a generator monomial r."""
    out = SemiringElement.zero(p)
    for coeff, slots in _triple_psi_iterated(p, (mr, mz, mw), p):
        val = None
        ok = True
        for i, (sr, sz, sw) in enumerate(slots):
            ti = _t_map(p, i, sr, sz, sw, allow_large_p)
            if ti.is_zero():
                ok = False
                break
            val = ti if val is None else val.dot(ti)
            if val.is_zero():
                ok = False
                break
        if ok and val is not None:
            out = out + coeff * val
    return out


def _t_map(p, i, sr, sz, sw, allow_large_p) -> SemiringElement:
    """T_i(s (x) z (x) w) from the mixed Cartan formula."""
    s_el = SemiringElement(p, {sr: 1})
    z_el = SemiringElement(p, {sz: 1})
    w_el = SemiringElement(p, {sw: 1})
    if i == 0:
        c = w_el.counit()
        if not c:
            return SemiringElement.zero(p)
        return c * sharp(s_el, z_el, allow_large_p)
    if i == p:
        c = z_el.counit()
        if not c:
            return SemiringElement.zero(p)
        return c * sharp(s_el, w_el, allow_large_p)
    # the integer binom(p, i)/p is computed exactly before bracket formation
    br = SemiringElement.bracket(p, comb(p, i) // p)
    zpart = sharp(SemiringElement.bracket(p, p - i), z_el, allow_large_p)
    wpart = sharp(SemiringElement.bracket(p, i), w_el, allow_large_p)
    return br.circ(s_el).circ(zpart).circ(wpart)


# ---------------------------------------------------------------------------
# verification


def verify_mixed_adem(r: SemiringElement, s: SemiringElement, x: SemiringElement,
                      allow_large_p=False):
    """Check r # (s o x) = sum +- (r' # s) o (r'' # x).  Returns (ok, lhs, rhs)."""
    p = r.p
    lhs = sharp(r, s.circ(x), allow_large_p)
    rhs = SemiringElement.zero(p)
    s_deg = s.degree()
    for c, r1, r2 in r.psi().components():
        sign = 1
        if p != 2 and s_deg % 2 and r2.degree() % 2:
            sign = -1
        rhs = rhs + (c * sign) * sharp(r1, s, allow_large_p).circ(sharp(r2, x, allow_large_p))
    return lhs == rhs, lhs, rhs
