"""Conversions between the circle-operations E^eps_n and Dyer--Lashof
operations Q^n / beta Q^n, the antipode action chi P^k, and the
admissible <-> allowable index bijection.

The Q-side is a purely formal alphabet: no Adem relations are imposed on
Q-words, and all canonicalization happens on the E-side.  Modules plugged
into the conversions must provide .p, .degree(), .steenrod(k), .bockstein()
and .circ_gen(eps, n) (left multiplication by a generator).
"""

from __future__ import annotations

from .arith import check_prime
from .eops_algebra import EElement
from .sequences import check_legitimate, inverse_angle


class NonIntegral(Exception):
    """Bijection input is not in the image of the index maps."""


def _steenrod_bound(x) -> int:
    """Largest k for which P^k_* can act nontrivially on x (2pk <= deg)."""
    d = x.degree()
    p = x.p
    return d // 2 if p == 2 else d // (2 * p)


def _chi_bound(x) -> int:
    """Largest k for which (chi P^k)_* x can be nonzero.

    Unlike a single P^k_*, the antipode composite can act all the way down;
    only the target-degree bound deg - 2k(p-1) >= 0 applies.
    """
    d = x.degree()
    p = x.p
    return d if p == 2 else d // (2 * (p - 1))


def chi_list(x, kmax):
    """[(chi P^0)_* x, ..., (chi P^kmax)_* x] by the antipode recursion
    (chi P^k)_* = -sum_{j<k} P^(k-j)_* (chi P^j)_*."""
    chis = [x]
    for m in range(1, kmax + 1):
        acc = 0 * x
        for j in range(m):
            acc = acc - chis[j].steenrod(m - j)
        chis.append(acc)
    return chis


def chi_P(k, x):
    """(chi P^k)_* x."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return x
    return chi_list(x, k)[k]


def q_from_e(n, x, eps=0):
    """Q^n x (eps = 0) or beta Q^n x (eps = 1) evaluated on the E-side:

        Q^n x      = sum_k (-1)^(n+k) E^0_(n+k) o (chi P^k)_* x
        beta Q^n x = sum_k (-1)^(n+k) (E^1_(n+k) o (chi P^k)_* x
                                       + E^0_(n+k) o beta (chi P^k)_* x)
    """
    p = x.p
    if eps and p == 2:
        raise ValueError("beta Q requires odd p")
    kmax = _chi_bound(x)
    chis = chi_list(x, kmax)
    total = 0 * x
    for k in range(kmax + 1):
        sign = 1 if p == 2 or (n + k) % 2 == 0 else -1
        if eps == 0:
            total = total + sign * chis[k].circ_gen(0, n + k)
        else:
            if n + k >= 1:
                total = total + sign * chis[k].circ_gen(1, n + k)
            total = total + sign * chis[k].bockstein().circ_gen(0, n + k)
    return total


def e_from_q(n, eps, x, q_eval=None):
    """E^eps_n o x reconstructed through Dyer--Lashof operations:

        E^0_n o x = (-1)^n sum_k Q^(n+k) P^k_* x
        E^1_n o x = (-1)^n (sum_k beta Q^(n+k) P^k_* x
                            - sum_k Q^(n+k) P^k_* beta x)

    ``q_eval(m, y, eps)`` evaluates the Q-operations; defaults to q_from_e.
    """
    p = x.p
    if q_eval is None:
        q_eval = lambda m, y, e: q_from_e(m, y, e)
    sign = 1 if p == 2 or n % 2 == 0 else -1
    kmax = _steenrod_bound(x)
    total = 0 * x
    if eps == 0:
        for k in range(kmax + 1):
            total = total + q_eval(n + k, x.steenrod(k), 0)
    else:
        for k in range(kmax + 1):
            total = total + q_eval(n + k, x.steenrod(k), 1)
        bx = x.bockstein()
        if not bx.is_zero():
            for k in range(_steenrod_bound(bx) + 1):
                total = total - q_eval(n + k, bx.steenrod(k), 0)
    return sign * total


# ---------------------------------------------------------------------------
# admissible <-> allowable bijection


def admissible_to_allowable(pairs, p):
    """Map an admissible-side sequence ((eps_1,i_1),...) to the allowable
    sequence <((eps_s, k_s))> with k_s = i_s - (p-1) sum_{l>s} i_l + sum_{l>s} eps_l."""
    check_prime(p)
    n = len(pairs)
    out = []
    for s in range(n):
        eps = pairs[s][0]
        tail_i = sum(pairs[l][1] for l in range(s + 1, n))
        tail_e = sum(pairs[l][0] for l in range(s + 1, n))
        k = pairs[s][1] - (p - 1) * tail_i + tail_e
        q = p ** s
        j = q * k - eps * (q - 1) // (p - 1)
        if j < 0:
            raise NonIntegral(f"admissible input {pairs} leaves the allowable range")
        out.append((eps, j))
    return tuple(out)


def allowable_to_admissible(seq, p):
    """Inverse of admissible_to_allowable on allowable sequences."""
    check_prime(p)
    ks = inverse_angle(seq, p)
    if ks is None:
        raise NonIntegral(f"{seq} is not allowable")
    n = len(ks)
    out = []
    for s in range(n):
        eps, k = ks[s]
        i = k
        for l in range(s + 1, n):
            i += (p ** (l - s) - p ** (l - s - 1)) * ks[l][1]
            i -= p ** (l - s - 1) * ks[l][0]
        out.append((eps, i))
    return tuple(out)


# ---------------------------------------------------------------------------
# formal Dyer--Lashof words on a single class (CLI support)


class DLExpression:
    """F_p-combination of formal words beta^eps Q^i ... applied to a class x.

    No Q-side relations are imposed; this is bookkeeping for conversions.
    """

    __slots__ = ("p", "class_degree", "terms")

    def __init__(self, p, class_degree, terms):
        self.p = p
        self.class_degree = class_degree
        self.terms = {w: c % p for w, c in terms.items() if c % p}

    def __add__(self, other):
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = (terms.get(w, 0) + c) % self.p
            if not terms[w]:
                del terms[w]
        return DLExpression(self.p, self.class_degree, terms)

    def __rmul__(self, scalar):
        return DLExpression(self.p, self.class_degree,
                            {w: (c * scalar) % self.p for w, c in self.terms.items()})

    def prefix(self, eps, m):
        return DLExpression(self.p, self.class_degree,
                            {((eps, m),) + w: c for w, c in self.terms.items()})

    def degree(self):
        degs = set()
        for w in self.terms:
            d = self.class_degree
            for eps, m in w:
                d += (m if self.p == 2 else 2 * m * (self.p - 1)) - eps
            degs.add(d)
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous: {degs}")
        return degs.pop() if degs else 0

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items()):
            ops = " ".join(("bQ_" if eps else "Q_") + str(m) for eps, m in w)
            coeff = "" if c == 1 else f"{c}*"
            bits.append(f"{coeff}{ops} x".strip())
        return " + ".join(bits)

    def __eq__(self, other):
        return (isinstance(other, DLExpression) and self.p == other.p
                and self.class_degree == other.class_degree and self.terms == other.terms)


def e_word_to_dl(word, p, class_degree):
    """Convert E^(e1)_(j1) o ... o x on a sphere class of degree class_degree
    into a combination of formal Dyer--Lashof words, recursively peeling the
    leftmost generator through the conversion series."""
    check_legitimate(word, p)

    def convert(w):
        if not w:
            return DLExpression(p, class_degree, {(): 1})
        (eps, j), rest = w[0], w[1:]
        rest_el = EElement(p, "E", {rest: 1}).normal_form()
        out = DLExpression(p, class_degree, {})
        sign = 1 if p == 2 or j % 2 == 0 else -1

        def q_apply(m, el, beta_eps):
            acc = DLExpression(p, class_degree, {})
            for v, c in el.terms.items():
                acc = acc + c * convert(v).prefix(beta_eps, m)
            return acc

        if rest_el.is_zero():
            return out
        bound = 0 if not rest else _steenrod_bound(rest_el)
        for k in range(bound + 1):
            pk = rest_el.steenrod(k)
            if not pk.is_zero():
                out = out + q_apply(j + k, pk, eps)
        if eps == 1:
            brest = rest_el.bockstein()
            if not brest.is_zero():
                for k in range(_steenrod_bound(brest) + 1):
                    pk = brest.steenrod(k)
                    if not pk.is_zero():
                        out = out + (-1) * q_apply(j + k, pk, 0)
        return sign * out

    return convert(tuple(word))
