"""The commutative coalgebraic semiring structure on the direct sum of the
mod-p homologies of all symmetric groups.

Normal form: the polynomial algebra on [1] and the basis elements E_J whose
sequence satisfies deg_beta(J) - b(J) < 2 min(J) (min(J) >= 1 at p = 2);
every other basis element reduces through E_J = (-1)^min(J) (E_J')^p.

A monomial is (bracket_exp, factors) with factors a sorted tuple of
(sequence, exponent); its weight is bracket_exp + sum exp * p^len(J) and two
products live here: the transfer product `dot` (weights add) and the
composition product `circ` (weights multiply).
"""

from __future__ import annotations

from functools import lru_cache

from .arith import check_prime
from .eops_algebra import EElement, RING_E
from . import sequences as seqs
from .sequences import COND_SEMIRING, degree as seq_degree, satisfies

Monomial = tuple  # (bracket_exp, ((J, exp), ...))

ONE_MONO: Monomial = (0, ())


class NegativeBracket(Exception):
    pass


def mono_weight(mono: Monomial, p: int) -> int:
    br, factors = mono
    return br + sum(e * p ** len(j) for j, e in factors)


def mono_degree(mono: Monomial, p: int) -> int:
    return sum(e * seq_degree(j, p) for j, e in mono[1])


def _factor_parity(j, p):
    return seq_degree(j, p) % 2 if p != 2 else 0


def _merge_factors(f1, f2, p):
    """Merge two sorted factor tuples; returns (factors, sign) or (None, 0)."""
    sign = 1
    merged = {}
    for j, e in list(f1) + list(f2):
        merged[j] = merged.get(j, 0) + e
    if p != 2:
        # Koszul sign: each odd factor of f2 moves left past the odd factors
        # of f1 that sort after it
        odd1_keys = [j for j, _ in f1 if _factor_parity(j, p)]
        inv = sum(1 for j2, _ in f2 if _factor_parity(j2, p)
                  for j1 in odd1_keys if j1 > j2)
        if inv % 2:
            sign = -1
        for j, e in merged.items():
            if _factor_parity(j, p) and e >= 2:
                return None, 0
    factors = tuple(sorted(merged.items()))
    return factors, sign


def _mono_dot(m1: Monomial, m2: Monomial, p: int):
    factors, sign = _merge_factors(m1[1], m2[1], p)
    if factors is None:
        return None, 0
    return (m1[0] + m2[0], factors), sign


class SemiringElement:
    """F_p-linear combination of monomials in [1] and the generator classes."""

    __slots__ = ("p", "terms")

    def __init__(self, p, terms):
        check_prime(p)
        self.p = p
        self.terms = {m: c % p for m, c in terms.items() if c % p}

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, p):
        return cls(p, {})

    @classmethod
    def one(cls, p):
        return cls(p, {ONE_MONO: 1})

    @classmethod
    def bracket(cls, p, n):
        if n < 0:
            raise NegativeBracket(f"[{n}]")
        return cls(p, {(n, ()): 1})

    @classmethod
    def generator(cls, p, j):
        if not satisfies(j, p, COND_SEMIRING):
            raise ValueError(f"{j} is not a semiring generator")
        return cls(p, {(0, ((j, 1),)): 1})

    # -- linear structure ------------------------------------------------------

    def __add__(self, other):
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = (terms.get(m, 0) + c) % self.p
            if not terms[m]:
                del terms[m]
        return SemiringElement(self.p, terms)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        return SemiringElement(self.p, {m: (c * scalar) % self.p for m, c in self.terms.items()})

    def __neg__(self):
        return (-1) * self

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, SemiringElement) and self.p == other.p
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.p, tuple(sorted(self.terms.items()))))

    # -- gradings ---------------------------------------------------------------

    def degree(self):
        degs = {mono_degree(m, self.p) for m in self.terms}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element: degrees {degs}")
        return degs.pop() if degs else 0

    def weight(self):
        ws = {mono_weight(m, self.p) for m in self.terms}
        if len(ws) > 1:
            raise ValueError(f"mixed weights {ws}")
        return ws.pop() if ws else 0

    # -- products ------------------------------------------------------------------

    def dot(self, other):
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m, sign = _mono_dot(m1, m2, self.p)
                if m is None:
                    continue
                out[m] = (out.get(m, 0) + c1 * c2 * sign) % self.p
        return SemiringElement(self.p, {m: c for m, c in out.items() if c})

    def dot_power(self, k):
        acc = SemiringElement.one(self.p)
        for _ in range(k):
            acc = acc.dot(self)
        return acc

    def circ(self, other):
        out = SemiringElement.zero(self.p)
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out = out + (c1 * c2) * _mono_circ(self.p, m1, m2)
        return out

    def circ_gen(self, eps, n):
        """Action of the generator E^eps_n through the circle product."""
        return inject_e(EElement.gen(self.p, eps, n, RING_E)).circ(self)

    # -- coalgebra -------------------------------------------------------------------

    def psi(self):
        out = {}
        for m, c in self.terms.items():
            for (a, b), c2 in _mono_psi(self.p, m).items():
                key = (a, b)
                out[key] = (out.get(key, 0) + c * c2) % self.p
        return SemiringTensor(self.p, {k: v for k, v in out.items() if v})

    def counit(self):
        total = 0
        for (br, factors), c in self.terms.items():
            if not factors:
                total += c
        return total % self.p

    # -- Steenrod / Bockstein -----------------------------------------------------------

    def steenrod(self, k):
        out = SemiringElement.zero(self.p)
        for m, c in self.terms.items():
            out = out + c * _mono_steenrod(self.p, m, k)
        return out

    def bockstein(self):
        out = SemiringElement.zero(self.p)
        for m, c in self.terms.items():
            out = out + c * _mono_bockstein(self.p, m)
        return out

    # -- presentation ----------------------------------------------------------------------

    def sorted_terms(self):
        def key(item):
            m, _ = item
            return (mono_weight(m, self.p), mono_degree(m, self.p), m)
        return sorted(self.terms.items(), key=key)

    def to_json(self):
        return {
            "p": self.p,
            "terms": [{"coeff": int(c), "bracket_power": int(br),
                       "factors": [{"sequence": [list(e) for e in j], "exp": int(e2)}
                                   for j, e2 in factors]}
                      for (br, factors), c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data):
        p = data["p"]
        terms = {}
        for t in data["terms"]:
            factors = tuple(sorted((tuple(tuple(e) for e in f["sequence"]), f["exp"])
                                   for f in t["factors"]))
            mono = (t["bracket_power"], factors)
            terms[mono] = terms.get(mono, 0) + t["coeff"]
        return cls(p, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for (br, factors), c in self.sorted_terms():
            parts = []
            if br:
                parts.append(f"[{br}]" if br > 1 else "[1]")
            for j, e in factors:
                word = seqs.format_word(j)
                s = f"({word})" if len(j) > 1 else word
                parts.append(s if e == 1 else f"{s}^{e}")
            body = " * ".join(parts) if parts else "1"
            bits.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(bits)

    __repr__ = __str__


class SemiringTensor:
    __slots__ = ("p", "terms")

    def __init__(self, p, terms):
        self.p = p
        self.terms = {k: v % p for k, v in terms.items() if v % p}

    def dot_mul(self, other):
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                sign = 1
                if self.p != 2 and mono_degree(b1, self.p) % 2 and mono_degree(a2, self.p) % 2:
                    sign = -1
                ma, sa = _mono_dot(a1, a2, self.p)
                if ma is None:
                    continue
                mb, sb = _mono_dot(b1, b2, self.p)
                if mb is None:
                    continue
                key = (ma, mb)
                out[key] = (out.get(key, 0) + c1 * c2 * sign * sa * sb) % self.p
        return SemiringTensor(self.p, out)

    def __eq__(self, other):
        return isinstance(other, SemiringTensor) and self.p == other.p and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def components(self):
        """List of (coeff, left SemiringElement, right SemiringElement)."""
        return [(c, SemiringElement(self.p, {a: 1}), SemiringElement(self.p, {b: 1}))
                for (a, b), c in self.terms.items()]


# ---------------------------------------------------------------------------
# inject_e: from the ring E into the semiring


def inject_e(x: EElement) -> SemiringElement:
    if x.ring != RING_E:
        x = EElement(x.p, RING_E, x.terms)
    x = x.normal_form()
    out = SemiringElement.zero(x.p)
    for w, c in x.terms.items():
        out = out + c * _inject_word(x.p, w)
    return out


@lru_cache(maxsize=None)
def _inject_word(p, j) -> SemiringElement:
    if not j:
        return SemiringElement.bracket(p, 1)
    if satisfies(j, p, COND_SEMIRING):
        return SemiringElement(p, {(0, ((j, 1),)): 1})
    # basis element failing the generator condition: b(J) = 0 and
    # 2 min(J) = deg_beta(J) (min(J) = 0 at p = 2); E_J = (-1)^min (E_J')^p
    inv = seqs.inverse_angle(j, p)
    assert inv is not None, f"{j} not allowable"
    jprime = seqs.angle_transform(inv[1:], p)
    base = _inject_word(p, jprime)
    m = min(i for _, i in j)
    sign = 1 if p == 2 or m % 2 == 0 else -1
    return sign * base.dot_power(p)


# ---------------------------------------------------------------------------
# circ on monomials


def _split_mono(mono: Monomial):
    """Split off one unit factor: returns (first, rest) monomials."""
    br, factors = mono
    if br:
        return (1, ()), (br - 1, factors)
    (j, e), tail = factors[0], factors[1:]
    first = (0, ((j, 1),))
    rest = (0, ((j, e - 1),) + tail if e > 1 else tail)
    return first, rest


def _multiplicity(mono: Monomial) -> int:
    return mono[0] + sum(e for _, e in mono[1])


@lru_cache(maxsize=None)
def _gen_circ_gen(p, j1, j2) -> SemiringElement:
    e1 = EElement(p, RING_E, {j1: 1})
    e2 = EElement(p, RING_E, {j2: 1})
    return inject_e(e1.circ(e2))


def _mono_circ(p, m1: Monomial, m2: Monomial) -> SemiringElement:
    mult1, mult2 = _multiplicity(m1), _multiplicity(m2)
    if mult1 == 0:
        # 1 o x = counit(x) * 1
        c = SemiringElement(p, {m2: 1}).counit()
        return c * SemiringElement.one(p)
    if m1 == (1, ()):
        return SemiringElement(p, {m2: 1})
    if mult1 >= 2:
        # (f . rest) o y = sum +- (f o y') (rest o y'')
        f, rest = _split_mono(m1)
        rest_deg = mono_degree(rest, p)
        out = SemiringElement.zero(p)
        for (a, b), c in _mono_psi(p, m2).items():
            sign = 1
            if p != 2 and rest_deg % 2 and mono_degree(a, p) % 2:
                sign = -1
            left = _mono_circ(p, f, a)
            right = _mono_circ(p, rest, b)
            out = out + (c * sign) * left.dot(right)
        return out
    # m1 is a single generator
    j1 = m1[1][0][0]
    if mult2 == 0:
        return SemiringElement.zero(p)  # counit of a generator is 0
    if m2 == (1, ()):
        return SemiringElement(p, {m1: 1})
    if mult2 >= 2:
        # g o (f . rest) = sum +- (g' o f)(g'' o rest)
        f, rest = _split_mono(m2)
        f_deg = mono_degree(f, p)
        out = SemiringElement.zero(p)
        for (a, b), c in _mono_psi(p, m1).items():
            sign = 1
            if p != 2 and mono_degree(b, p) % 2 and f_deg % 2:
                sign = -1
            left = _mono_circ(p, a, f)
            right = _mono_circ(p, b, rest)
            out = out + (c * sign) * left.dot(right)
        return out
    j2 = m2[1][0][0]
    return _gen_circ_gen(p, j1, j2)


# ---------------------------------------------------------------------------
# coproduct, Steenrod on monomials


@lru_cache(maxsize=None)
def _gen_psi(p, j):
    """psi of a generator monomial, via the coproduct in E."""
    ten = EElement(p, RING_E, {j: 1}).coproduct()
    out = {}
    for (lw, rw), c in ten.terms.items():
        left = _inject_word(p, lw)
        right = _inject_word(p, rw)
        for ml, cl in left.terms.items():
            for mr, cr in right.terms.items():
                key = (ml, mr)
                out[key] = (out.get(key, 0) + c * cl * cr) % p
    return SemiringTensor(p, out)


def _mono_psi(p, mono: Monomial):
    """psi of a monomial, as dict[(mono, mono)] -> coeff."""
    br, factors = mono
    acc = SemiringTensor(p, {((br, ()), (br, ())): 1})
    for j, e in factors:
        g = _gen_psi(p, j)
        for _ in range(e):
            acc = acc.dot_mul(g)
    return acc.terms


@lru_cache(maxsize=None)
def _gen_steenrod(p, j, k) -> SemiringElement:
    return inject_e(EElement(p, RING_E, {j: 1}).steenrod(k))


def _mono_steenrod(p, mono: Monomial, k) -> SemiringElement:
    br, factors = mono
    flat = []
    for j, e in factors:
        flat.extend([j] * e)
    results = [(SemiringElement(p, {(br, ()): 1}), k)]
    for j in flat:
        new = []
        for acc, rem in results:
            for ki in range(rem + 1):
                piece = _gen_steenrod(p, j, ki)
                if piece.is_zero():
                    continue
                new.append((acc.dot(piece), rem - ki))
        results = new
    out = SemiringElement.zero(p)
    for acc, rem in results:
        if rem == 0:
            out = out + acc
    return out


@lru_cache(maxsize=None)
def _gen_bockstein(p, j) -> SemiringElement:
    return inject_e(EElement(p, RING_E, {j: 1}).bockstein())


def _mono_bockstein(p, mono: Monomial) -> SemiringElement:
    br, factors = mono
    flat = []
    for j, e in factors:
        flat.extend([j] * e)
    out = SemiringElement.zero(p)
    sign = 1
    for idx, j in enumerate(flat):
        piece = _gen_bockstein(p, j)
        if not piece.is_zero():
            acc = SemiringElement(p, {(br, ()): 1})
            for j2 in flat[:idx]:
                acc = acc.dot(SemiringElement(p, {(0, ((j2, 1),)): 1}))
            acc = acc.dot(piece)
            for j2 in flat[idx + 1:]:
                acc = acc.dot(SemiringElement(p, {(0, ((j2, 1),)): 1}))
            out = out + sign * acc
        if _factor_parity(j, p):
            sign = -sign
    return out


# ---------------------------------------------------------------------------
# module-level conveniences mirroring the operation surface


def bracket(p, n) -> SemiringElement:
    return SemiringElement.bracket(p, n)


def dot(x: SemiringElement, y: SemiringElement) -> SemiringElement:
    return x.dot(y)


def circ(x: SemiringElement, y: SemiringElement) -> SemiringElement:
    return x.circ(y)


def psi(x: SemiringElement) -> SemiringTensor:
    return x.psi()


def counit(x: SemiringElement) -> int:
    return x.counit()


def steenrod_P(k, x: SemiringElement) -> SemiringElement:
    return x.steenrod(k)


def bockstein(x: SemiringElement) -> SemiringElement:
    return x.bockstein()


def generator_sequences(p, max_degree, max_length=None):
    """All semiring generator sequences of degree <= max_degree."""
    if max_length is None:
        per_gen = 1 if p == 2 else 2 * (p - 1) - 1
        max_length = max(1, max_degree // per_gen + 1)
    out = []
    for n in range(1, max_length + 1):
        found = seqs.enumerate_allowable(p, n, max_degree, COND_SEMIRING)
        out.extend(j for j in found if j)
        if not found:
            break
    return out


def weight_degree_dimension(p, weight, degree_, max_length=None):
    """Dimension of the weight/degree component, counting basis monomials."""
    gens = [((), 0, 1)]  # ([1]: degree 0, weight 1) handled separately
    glist = [(j, seq_degree(j, p), p ** len(j))
             for j in generator_sequences(p, degree_ + 1, max_length)
             if p ** len(j) <= weight]
    count = 0

    def rec(idx, w, d):
        nonlocal count
        if w < 0 or d < 0:
            return
        if idx == len(glist):
            # remaining weight is carried by [1]^w, degree 0 required
            if d == 0:
                count += 1
            return
        j, gd, gw = glist[idx]
        emax = w // gw if gw else 0
        if _factor_parity(j, p):
            emax = min(emax, 1)
        for e in range(emax + 1):
            if gd * e > d:
                break
            rec(idx + 1, w - gw * e, d - gd * e)

    rec(0, weight, degree_)
    return count
