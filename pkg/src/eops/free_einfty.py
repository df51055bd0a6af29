"""Homology of free E-infinity spaces: generator enumeration, Poincare
series, and the module normal form for the action of the operation ring.

The normal form is the free graded commutative algebra on symbols
E_J o z_alpha with alpha not the basepoint and

    deg_beta(J) - b(J) + deg(z_alpha) < 2 min(J)     (p odd)
    deg(z_alpha) < min(J)                            (p = 2).

Acting with a generator on a symbol that violates the condition is resolved
through the Dyer--Lashof side of the conversion series: writing
E_J = E^b_min o E_tail, the expansion

    E^eps_n o (r o z) = +- sum_l (beta^eps) Q^(n+l) P^l_* (r o z)

collapses, for a violating symbol, to the Steenrod-on-class terms plus at
most one p-th power boundary term, because Dyer--Lashof excess kills every
class-preserving term.  Q-operations with 2m > deg are converted back to the
E-side; the recursion descends the rank (class degree, word length).
"""

from __future__ import annotations

import json

from .arith import check_prime
from . import dl_bridge
from .eops_algebra import EElement, RING_E, _gen_coproduct
from . import sequences as seqs
from .sequences import gen_degree


class PresentationError(Exception):
    pass


class CoalgebraPresentation:
    """Finite graded basis of H_*(Z) with basepoint class and action tables.

    Omitted Steenrod/Bockstein tables mean the trivial action; an omitted
    coproduct means primitive positive-degree classes and grouplike
    degree-0 classes.  This matches wedges of spheres; general spaces need
    real tables.
    """

    def __init__(self, classes, basepoint, bockstein=None, steenrod=None,
                 coproduct=None, pi0=None, name="Z"):
        self.name = name
        self.classes = dict(classes)  # name -> degree
        self.basepoint = basepoint
        if basepoint not in self.classes:
            raise PresentationError(f"basepoint {basepoint!r} not among classes")
        if self.classes[basepoint] != 0:
            raise PresentationError("basepoint must have degree 0")
        self.bockstein_table = {k: tuple(v) for k, v in (bockstein or {}).items()}
        self.steenrod_table = {k: tuple(v) for k, v in (steenrod or {}).items()}
        self.coproduct_table = {k: tuple(v) for k, v in (coproduct or {}).items()}
        self.pi0 = list(pi0) if pi0 else [basepoint]
        for nm in self.pi0:
            if self.classes.get(nm, -1) != 0:
                raise PresentationError(f"pi0 class {nm!r} must have degree 0")
        self._validate()

    def _validate(self):
        for nm, items in self.bockstein_table.items():
            d = self.classes[nm]
            for c, tgt in items:
                if self.classes[tgt] != d - 1:
                    raise PresentationError(f"bockstein of {nm} has wrong degree")
        for key, items in self.steenrod_table.items():
            k, nm = key
            d = self.classes[nm]
            for c, tgt in items:
                pass  # degree check happens lazily per prime in FreeModule

    # -- constructors -------------------------------------------------------

    @classmethod
    def point(cls):
        return cls({"pt": 0}, "pt", name="pt")

    @classmethod
    def sphere(cls, d):
        if d == 0:
            return cls({"pt": 0, "z": 0}, "pt", pi0=["pt", "z"], name="S0")
        return cls({"pt": 0, "z": d}, "pt", name=f"S{d}")

    @classmethod
    def wedge_of_spheres(cls, degrees):
        classes = {"pt": 0}
        for idx, d in enumerate(degrees):
            if d <= 0:
                raise PresentationError("wedge summands need positive degree")
            classes[f"z{idx}_{d}"] = d
        return cls(classes, "pt", name="v".join(f"S{d}" for d in degrees))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        classes = {c["name"]: c["degree"] for c in data["classes"]}
        bock = {k: [(it[0], it[1]) for it in v]
                for k, v in data.get("bockstein", {}).items()}
        steen = {}
        for key, v in data.get("steenrod", {}).items():
            kk, nm = key.split(",", 1)
            steen[(int(kk), nm)] = [(it[0], it[1]) for it in v]
        coprod = {k: [(it[0], it[1], it[2]) for it in v]
                  for k, v in data.get("coproduct", {}).items()}
        return cls(classes, data["basepoint"], bock, steen, coprod,
                   data.get("pi0"), name=data.get("name", "Z"))

    # -- tables with defaults ---------------------------------------------------

    def class_bockstein(self, name):
        return self.bockstein_table.get(name, ())

    def class_steenrod(self, k, name):
        if k == 0:
            return ((1, name),)
        return self.steenrod_table.get((k, name), ())

    def class_counit(self, name):
        return 1 if self.classes[name] == 0 else 0


# ---------------------------------------------------------------------------
# elements

Symbol = tuple  # (J, class name)


def _symbol_degree(sym: Symbol, module) -> int:
    j, name = sym
    return seqs.degree(j, module.p) + module.presentation.classes[name]


def _symbol_parity(sym, module):
    return _symbol_degree(sym, module) % 2 if module.p != 2 else 0


class FreeModuleElement:
    """Polynomial in generator symbols (J, class), coefficients in F_p."""

    __slots__ = ("module", "terms")

    def __init__(self, module, terms):
        self.module = module
        self.terms = {m: c % module.p for m, c in terms.items() if c % module.p}

    @property
    def p(self):
        return self.module.p

    # -- linear structure ------------------------------------------------------

    def __add__(self, other):
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = (terms.get(m, 0) + c) % self.p
            if not terms[m]:
                del terms[m]
        return FreeModuleElement(self.module, terms)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        return FreeModuleElement(self.module,
                                 {m: (c * scalar) % self.p for m, c in self.terms.items()})

    def __neg__(self):
        return (-1) * self

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, FreeModuleElement)
                and self.module is other.module and self.terms == other.terms)

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def degree(self):
        degs = {sum(e * _symbol_degree(s, self.module) for s, e in m) for m in self.terms}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element: {degs}")
        return degs.pop() if degs else 0

    # -- ring structure -----------------------------------------------------------

    def dot(self, other):
        out = {}
        p = self.p
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m, sign = self.module._merge_monomials(m1, m2)
                if m is None:
                    continue
                out[m] = (out.get(m, 0) + c1 * c2 * sign) % p
        return FreeModuleElement(self.module, {m: c for m, c in out.items() if c})

    def dot_power(self, k):
        acc = self.module.one()
        for _ in range(k):
            acc = acc.dot(self)
        return acc

    # -- operations -----------------------------------------------------------------

    def circ_gen(self, eps, n):
        return self.module.act(eps, n, self)

    def steenrod(self, k):
        return self.module.steenrod(k, self)

    def bockstein(self):
        return self.module.bockstein(self)

    def counit(self):
        total = 0
        for m, c in self.terms.items():
            if not m:
                total += c
        return total % self.p

    # -- presentation -----------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for m, c in sorted(self.terms.items()):
            parts = []
            for (j, name), e in m:
                word = seqs.format_word(j)
                base = name if not j else f"({word} o {name})"
                parts.append(base if e == 1 else f"{base}^{e}")
            body = " * ".join(parts) if parts else "1"
            bits.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(bits)

    __repr__ = __str__


class FreeModule:
    """The homology of the free E-infinity space on a presented coalgebra."""

    def __init__(self, presentation: CoalgebraPresentation, p: int):
        check_prime(p)
        self.presentation = presentation
        self.p = p
        self._symbol_cache = {}
        for key, items in presentation.steenrod_table.items():
            k, nm = key
            d = presentation.classes[nm]
            drop = k if p == 2 else 2 * k * (p - 1)
            for c, tgt in items:
                if presentation.classes[tgt] != d - drop:
                    raise PresentationError(
                        f"P^{k} {nm} has wrong degree for p={p}")

    # -- element constructors ----------------------------------------------------

    def zero(self):
        return FreeModuleElement(self, {})

    def one(self):
        return FreeModuleElement(self, {(): 1})

    def class_element(self, name):
        if name == self.presentation.basepoint:
            return self.one()
        return self._reduce_symbol(((), name))

    def symbol(self, j, name):
        """E_J o z_name, normal formed."""
        el = EElement(self.p, RING_E, {tuple(j): 1}).normal_form()
        return self._circ_e(el, name)

    # -- generator condition --------------------------------------------------------

    def is_generator(self, j, name) -> bool:
        if name == self.presentation.basepoint:
            return False
        st = seqs.stats(j, self.p)
        d = self.presentation.classes[name]
        if self.p == 2:
            return d < st.min
        return st.bockstein_degree - st.b + d < 2 * st.min

    # -- monomial plumbing -------------------------------------------------------------

    def _merge_monomials(self, m1, m2):
        merged = {}
        for s, e in list(m1) + list(m2):
            merged[s] = merged.get(s, 0) + e
        if self.p != 2:
            odd1 = [s for s, _ in m1 if _symbol_parity(s, self)]
            inv = sum(1 for s2, _ in m2 if _symbol_parity(s2, self)
                      for s1 in odd1 if s1 > s2)
            for s, e in merged.items():
                if _symbol_parity(s, self) and e >= 2:
                    return None, 0
            return tuple(sorted(merged.items())), (-1) ** (inv % 2)
        return tuple(sorted(merged.items())), 1

    # -- the action ----------------------------------------------------------------------

    def act(self, eps, n, x: FreeModuleElement) -> FreeModuleElement:
        """E^eps_n o x in normal form."""
        out = self.zero()
        for m, c in x.terms.items():
            out = out + c * self._act_mono(eps, n, m)
        return out

    def _act_mono(self, eps, n, mono) -> FreeModuleElement:
        p = self.p
        if not mono:
            return (1 if (eps, n) == (0, 0) else 0) * self.one()
        if len(mono) == 1 and mono[0][1] == 1:
            sym = mono[0][0]
            j, name = sym
            prod = EElement.gen(p, eps, n, RING_E).circ(
                EElement(p, RING_E, {j: 1}))
            return self._circ_e(prod, name)
        # split one unit factor off and distribute through psi(E^eps_n)
        (s0, e0), rest = mono[0], mono[1:]
        first = ((s0, 1),)
        rest_m = ((s0, e0 - 1),) + rest if e0 > 1 else rest
        f_deg = _symbol_degree(s0, self)
        out = self.zero()
        for g1, g2 in _gen_coproduct(p, eps, n):
            sign = 1
            if p != 2 and gen_degree(*g2, p) % 2 and f_deg % 2:
                sign = -1
            left = self._act_mono(g1[0], g1[1], first)
            if left.is_zero():
                continue
            right = self._act_mono(g2[0], g2[1], rest_m)
            out = out + sign * left.dot(right)
        return out

    def _circ_e(self, el: EElement, name) -> FreeModuleElement:
        """(E-element) o z_name, normal formed."""
        out = self.zero()
        for w, c in el.terms.items():
            out = out + c * self._reduce_symbol((w, name))
        return out

    def _reduce_symbol(self, sym: Symbol) -> FreeModuleElement:
        cached = self._symbol_cache.get(sym)
        if cached is not None:
            return cached
        j, name = sym
        p = self.p
        if name == self.presentation.basepoint:
            c = EElement(p, RING_E, {j: 1}).counit()
            result = c * self.one()
        elif self.is_generator(j, name) or not j:
            result = FreeModuleElement(self, {((sym, 1),): 1})
        else:
            result = self._reduce_violating(j, name)
        self._symbol_cache[sym] = result
        return result

    def _reduce_violating(self, j, name) -> FreeModuleElement:
        """Resolve E_J o z for an allowable basis J violating the condition."""
        p = self.p
        eps, n = j[0]
        tail = EElement(p, RING_E, {j[1:]: 1}).normal_form()
        z_deg = self.presentation.classes[name]
        r_deg = tail.degree() if not tail.is_zero() else 0
        r_beta = tail.bockstein_degree() if not tail.is_zero() else 0
        sign_n = 1 if p == 2 or n % 2 == 0 else -1
        out = self.zero()
        if tail.is_zero():
            return out

        if eps == 0:
            # class-lowering Steenrod terms
            for l2 in range(1, _class_steenrod_bound(z_deg, p) + 1):
                pz = self._class_steenrod(l2, name)
                if not pz:
                    continue
                for l1 in range(0, _e_steenrod_bound(tail, p) + 1):
                    pr = tail.steenrod(l1)
                    if pr.is_zero():
                        continue
                    y = self._pair_element(pr, pz)
                    if y.is_zero():
                        continue
                    out = out + self._q_op(n + l1 + l2, y)
            # boundary p-th power term
            boundary = (2 * n == r_beta + z_deg) if p != 2 else (n == z_deg)
            if boundary:
                num = (r_deg - r_beta) if p != 2 else r_deg
                den = 2 * p if p != 2 else 2
                if num % den == 0:
                    l0 = num // den
                    pr = tail.steenrod(l0)
                    if not pr.is_zero():
                        w = self._pair_element(pr, ((1, name),))
                        out = out + w.dot_power(p)
            return sign_n * out

        # eps == 1 (p odd): three class-lowering families
        btail = tail.bockstein()
        for l2 in range(1, _class_steenrod_bound(z_deg, p) + 1):
            pz = self._class_steenrod(l2, name)
            if not pz:
                continue
            for l1 in range(0, _e_steenrod_bound(tail, p) + 1):
                pr = tail.steenrod(l1)
                if not pr.is_zero():
                    y = self._pair_element(pr, pz)
                    if not y.is_zero():
                        out = out + self._bq_op(n + l1 + l2, y)
            if not btail.is_zero():
                for l1 in range(0, _e_steenrod_bound(btail, p) + 1):
                    pr = btail.steenrod(l1)
                    if not pr.is_zero():
                        y = self._pair_element(pr, pz)
                        if not y.is_zero():
                            out = out - self._q_op(n + l1 + l2, y)
        bz = self.presentation.class_bockstein(name)
        if bz:
            sgn = -1 if r_deg % 2 else 1
            for l2 in range(0, _class_steenrod_bound(max(z_deg - 1, 0), p) + 1):
                pbz = self._combo_steenrod(l2, bz)
                if not pbz:
                    continue
                for l1 in range(0, _e_steenrod_bound(tail, p) + 1):
                    pr = tail.steenrod(l1)
                    if not pr.is_zero():
                        y = self._pair_element(pr, pbz)
                        if not y.is_zero():
                            out = out - sgn * self._q_op(n + l1 + l2, y)
        return sign_n * out

    def _class_steenrod(self, k, name):
        return self.presentation.class_steenrod(k, name)

    def _combo_steenrod(self, k, combo):
        out = {}
        for c, nm in combo:
            for c2, tgt in self.presentation.class_steenrod(k, nm):
                out[tgt] = (out.get(tgt, 0) + c * c2) % self.p
        return tuple((c, nm) for nm, c in out.items() if c)

    def _pair_element(self, el: EElement, combo) -> FreeModuleElement:
        """(E-element) o (linear combination of classes), reduced."""
        out = self.zero()
        for c, nm in combo:
            out = out + c * self._circ_e(el, nm)
        return out

    # -- Dyer--Lashof operations with excess shortcuts ------------------------------

    def _q_op(self, m, y: FreeModuleElement) -> FreeModuleElement:
        if y.is_zero():
            return y
        d = y.degree()
        if (2 * m if self.p != 2 else m) < d:
            return self.zero()
        if (2 * m if self.p != 2 else m) == d:
            return y.dot_power(self.p)
        return dl_bridge.q_from_e(m, y, 0)

    def _bq_op(self, m, y: FreeModuleElement) -> FreeModuleElement:
        if y.is_zero():
            return y
        d = y.degree()
        if 2 * m <= d:
            return self.zero()  # excess zero, or beta of a p-th power
        return dl_bridge.q_from_e(m, y, 1)

    # -- Steenrod / Bockstein on the module ---------------------------------------------

    def steenrod(self, k, x: FreeModuleElement) -> FreeModuleElement:
        out = self.zero()
        for m, c in x.terms.items():
            out = out + c * self._steenrod_mono(k, m)
        return out

    def _steenrod_mono(self, k, mono) -> FreeModuleElement:
        flat = []
        for s, e in mono:
            flat.extend([s] * e)
        results = [(self.one(), k)]
        for s in flat:
            new = []
            for acc, rem in results:
                for ki in range(rem + 1):
                    piece = self._symbol_steenrod(ki, s)
                    if piece.is_zero():
                        continue
                    new.append((acc.dot(piece), rem - ki))
            results = new
        out = self.zero()
        for acc, rem in results:
            if rem == 0:
                out = out + acc
        return out

    def _symbol_steenrod(self, k, sym: Symbol) -> FreeModuleElement:
        j, name = sym
        p = self.p
        out = self.zero()
        el = EElement(p, RING_E, {j: 1})
        for k1 in range(k + 1):
            pr = el.steenrod(k1)
            if pr.is_zero():
                continue
            pz = self.presentation.class_steenrod(k - k1, name)
            if not pz:
                continue
            out = out + self._pair_element(pr, pz)
        return out

    def bockstein(self, x: FreeModuleElement) -> FreeModuleElement:
        out = self.zero()
        for m, c in x.terms.items():
            out = out + c * self._bockstein_mono(m)
        return out

    def _bockstein_mono(self, mono) -> FreeModuleElement:
        if self.p == 2:
            return self._steenrod_mono(1, mono)
        flat = []
        for s, e in mono:
            flat.extend([s] * e)
        out = self.zero()
        sign = 1
        for idx, s in enumerate(flat):
            piece = self._symbol_bockstein(s)
            if not piece.is_zero():
                acc = self.one()
                for s2 in flat[:idx]:
                    acc = acc.dot(FreeModuleElement(self, {((s2, 1),): 1}))
                acc = acc.dot(piece)
                for s2 in flat[idx + 1:]:
                    acc = acc.dot(FreeModuleElement(self, {((s2, 1),): 1}))
                out = out + sign * acc
            if _symbol_parity(s, self):
                sign = -sign
        return out

    def _symbol_bockstein(self, sym: Symbol) -> FreeModuleElement:
        j, name = sym
        p = self.p
        el = EElement(p, RING_E, {j: 1})
        out = self._pair_element(el.bockstein(), ((1, name),))
        bz = self.presentation.class_bockstein(name)
        if bz:
            sgn = -1 if seqs.degree(j, p) % 2 else 1
            out = out + sgn * self._pair_element(el, bz)
        return out


def _class_steenrod_bound(d, p):
    return d // 2 if p == 2 else d // (2 * p)


def _e_steenrod_bound(el: EElement, p):
    if el.is_zero():
        return 0
    d = el.degree()
    return d // 2 if p == 2 else d // (2 * p)


# ---------------------------------------------------------------------------
# generators and Poincare series


def generators(presentation: CoalgebraPresentation, p: int, max_degree: int,
               exclude=()):
    """All generator pairs (J, class) of degree <= max_degree."""
    check_prime(p)
    out = []
    excluded = set(exclude) | {presentation.basepoint}
    for name, d in sorted(presentation.classes.items()):
        if name in excluded or d > max_degree:
            continue
        budget = max_degree - d
        length = 0
        while True:
            found = []
            for j in seqs.enumerate_allowable(p, length, budget):
                st = seqs.stats(j, p)
                ok = (d < st.min) if p == 2 else (st.bockstein_degree - st.b + d < 2 * st.min)
                if ok:
                    found.append(j)
            out.extend((j, name) for j in found)
            if length > 0 and not found:
                break
            length += 1
            if length > max(1, budget):
                break
    return sorted(out, key=lambda jn: (seqs.degree(jn[0], p) + presentation.classes[jn[1]], jn))


def _series_product(factors, max_degree):
    series = [0] * (max_degree + 1)
    series[0] = 1
    for d, polynomial in factors:
        new = [0] * (max_degree + 1)
        if polynomial:
            for base in range(max_degree + 1):
                if series[base] == 0:
                    continue
                e = 0
                while base + e * d <= max_degree:
                    new[base + e * d] += series[base]
                    if d == 0:
                        raise ValueError("degree-0 polynomial generator")
                    e += 1
        else:
            for base in range(max_degree + 1):
                if series[base]:
                    new[base] += series[base]
                    if base + d <= max_degree:
                        new[base + d] += series[base]
        series = new
    return series


def poincare_series(presentation, p, max_degree, gens=None):
    """Dimensions of the free graded commutative algebra on the generators.

    Degree-0 generators (e.g. extra points) make every degree infinite
    dimensional; declare them in pi0 and use qz_poincare, or compare weighted
    dimensions through the symmetric-group semiring instead.
    """
    if gens is None:
        gens = generators(presentation, p, max_degree)
    factors = []
    for j, name in gens:
        d = seqs.degree(j, p) + presentation.classes[name]
        if d == 0:
            raise ValueError(
                f"generator ({j}, {name}) has degree 0; per-degree dimensions diverge")
        polynomial = (p == 2) or d % 2 == 0
        factors.append((d, polynomial))
    return _series_product(factors, max_degree)


def qz_poincare(presentation, p, max_degree):
    """Per-component dimensions for the free infinite loop space: pi_0 classes
    localize away (each inverted degree-0 variable counts one unit monomial)."""
    gens = [(j, name) for j, name in generators(presentation, p, max_degree)
            if name not in presentation.pi0]
    return poincare_series(presentation, p, max_degree, gens=gens)


def generator_counts(presentation, p, max_degree):
    """Number of generators in each degree <= max_degree."""
    counts = [0] * (max_degree + 1)
    for j, name in generators(presentation, p, max_degree):
        d = seqs.degree(j, p) + presentation.classes[name]
        counts[d] += 1
    return counts
