"""Brute-force coinvariants H_*(V_n)_{GL_n(F_p)} by exact linear algebra.

Cohomology of V_n is F_2[x_1..x_n] for p = 2 and Lambda(x_1..x_n) (x) F_p[y_1..y_n]
for odd p; GL_n acts by substitution on the column vector of generators,
x_i -> sum_j g[i][j] x_j (and likewise on y), extended multiplicatively with
Koszul signs on the exterior part.  Invariant dimensions are computed in
cohomology; the homology action is the transpose, and the class-of-tensor map
reduces modulo the span of g_*v - v.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

import numpy as np

from .arith import check_prime, multinom_mod_p
from .linalg import RowReducer, nullspace, rank


class SingularMatrix(Exception):
    pass


class DegreeMismatch(Exception):
    pass


def cohomology_basis(n: int, d: int, p: int):
    """Monomial basis of H^d(V_n).

    p = 2: tuples (k_1, ..., k_n) with sum k_i = d, for x_1^{k_1}...x_n^{k_n}.
    p odd: tuples ((d_1, k_1), ..., (d_n, k_n)) with d_i in {0,1} and
    sum (d_i + 2 k_i) = d, for x^{d_i} y^{k_i} factors.
    """
    if p == 2:
        return [mono for mono in _compositions(d, n)]
    out = []
    for deltas in product((0, 1), repeat=n):
        rem = d - sum(deltas)
        if rem < 0 or rem % 2:
            continue
        for ks in _compositions(rem // 2, n):
            out.append(tuple(zip(deltas, ks)))
    return out


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def glp_generators(n: int, p: int):
    """Generating set of GL_n(F_p): adjacent transpositions, T + I, a + I."""
    gens = []
    for s in range(n - 1):
        m = np.eye(n, dtype=np.int64)
        m[[s, s + 1]] = m[[s + 1, s]]
        gens.append(m)
    if n >= 2:
        t = np.eye(n, dtype=np.int64)
        t[0, 1] = 1
        gens.append(t)
    if p > 2:
        a = _primitive_root(p)
        m = np.eye(n, dtype=np.int64)
        m[0, 0] = a
        gens.append(m)
    return gens


def _primitive_root(p: int) -> int:
    for a in range(2, p):
        seen, x = set(), 1
        for _ in range(p - 1):
            x = (x * a) % p
            seen.add(x)
        if len(seen) == p - 1:
            return a
    raise ValueError(f"no primitive root mod {p}")


def _substitute_monomial(mono, g, n, d, p, index):
    """Image of a basis monomial under x_i -> sum_j g[i][j] x_j etc.

    Returns a dense coefficient vector over cohomology_basis(n, d, p).
    """
    vec = np.zeros(len(index), dtype=np.int64)
    if p == 2:
        # product over i of (sum_j g[i][j] x_j)^{k_i}
        terms = {(0,) * n: 1}  # exponent tuple -> coeff
        for i, k in enumerate(mono):
            if k == 0:
                continue
            new = {}
            for js in _compositions(k, n):
                coeff = multinom_mod_p(js, p)
                for j, e in enumerate(js):
                    if e:
                        coeff = (coeff * pow(int(g[i, j]), e, p)) % p
                if not coeff:
                    continue
                for exps, c in terms.items():
                    key = tuple(exps[t] + js[t] for t in range(n))
                    new[key] = (new.get(key, 0) + c * coeff) % p
            terms = new
        for exps, c in terms.items():
            if c:
                vec[index[exps]] = c
        return vec

    deltas = [dl for dl, _ in mono]
    ks = [k for _, k in mono]
    odd_rows = [i for i, dl in enumerate(deltas) if dl]
    # exterior part: product over odd rows of (sum_j g[i][j] x_j)
    ext_terms = {}
    for js in product(range(n), repeat=len(odd_rows)):
        if len(set(js)) != len(js):
            continue
        coeff = 1
        for i, j in zip(odd_rows, js):
            coeff = (coeff * int(g[i, j])) % p
        if not coeff:
            continue
        order = tuple(sorted(js))
        sign = _perm_sign(js)
        key = order
        ext_terms[key] = (ext_terms.get(key, 0) + sign * coeff) % p
    if not odd_rows:
        ext_terms = {(): 1}
    # polynomial part: product over i of (sum_j g[i][j] y_j)^{k_i}
    poly_terms = {(0,) * n: 1}
    for i, k in enumerate(ks):
        if k == 0:
            continue
        new = {}
        for js in _compositions(k, n):
            coeff = multinom_mod_p(js, p)
            for j, e in enumerate(js):
                if e:
                    coeff = (coeff * pow(int(g[i, j]), e, p)) % p
            if not coeff:
                continue
            for exps, c in poly_terms.items():
                key = tuple(exps[t] + js[t] for t in range(n))
                new[key] = (new.get(key, 0) + c * coeff) % p
        poly_terms = new
    for xs, ce in ext_terms.items():
        if not ce:
            continue
        dl = tuple(1 if t in xs else 0 for t in range(n))
        for ys, cp in poly_terms.items():
            c = (ce * cp) % p
            if not c:
                continue
            key = tuple(zip(dl, ys))
            vec[index[key]] = (vec[index[key]] + c) % p
    return vec


def _perm_sign(js) -> int:
    sign = 1
    for a, b in combinations(range(len(js)), 2):
        if js[a] > js[b]:
            sign = -sign
    return sign


def gl_action(g, n: int, d: int, p: int) -> np.ndarray:
    """Cohomology matrix C of g on H^d(V_n), columns = images of basis monomials.

    The homology action of g is C.T.
    """
    g = np.array(g, dtype=np.int64) % p
    if _det_mod(g, p) == 0:
        raise SingularMatrix(f"matrix {g.tolist()} is singular mod {p}")
    basis = cohomology_basis(n, d, p)
    index = {m: i for i, m in enumerate(basis)}
    mat = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for col, mono in enumerate(basis):
        mat[:, col] = _substitute_monomial(mono, g, n, d, p, index)
    return mat


def _det_mod(g, p):
    m = np.array(g, dtype=np.int64) % p
    return 1 if rank(m, p) == m.shape[0] else 0


class CoinvariantSpace:
    """H_d(V_n)_{GL_n}: relation space, quotient coordinates, class map."""

    def __init__(self, n: int, d: int, p: int):
        check_prime(p)
        self.n, self.d, self.p = n, d, p
        self.basis = cohomology_basis(n, d, p)
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.ambient_dim = len(self.basis)
        rows = []
        eye = np.eye(self.ambient_dim, dtype=np.int64)
        for g in glp_generators(n, p):
            c = gl_action(g, n, d, p)
            # homology action is c.T; relations g_* v - v span the column
            # space of (c.T - I), i.e. the row space of (c - I)
            rows.append((c - eye) % p)
        if rows:
            rel = np.vstack(rows)
        else:
            rel = np.zeros((0, self.ambient_dim), dtype=np.int64)
        self.relation_matrix = rel
        self.reducer = RowReducer(rel, self.ambient_dim,
                                  list(range(self.ambient_dim)), p)
        self.dim = self.reducer.reduced_dim()

    def invariant_dim(self) -> int:
        """dim H^d(V_n)^{GL_n} via kernel intersection; equals self.dim."""
        rows = []
        eye = np.eye(self.ambient_dim, dtype=np.int64)
        for g in glp_generators(self.n, self.p):
            rows.append((gl_action(g, self.n, self.d, self.p) - eye) % self.p)
        if not rows:
            return self.ambient_dim
        return nullspace(np.vstack(rows), self.p).shape[0]

    def quotient_map(self, vec) -> tuple:
        return tuple(int(v) for v in self.reducer.reduce(np.asarray(vec)))

    def class_of_tensor(self, e_degrees) -> tuple:
        """Coinvariant class of e_{d_1} (x) ... (x) e_{d_n}."""
        if len(e_degrees) != self.n:
            raise DegreeMismatch("tensor length != n")
        if sum(e_degrees) != self.d:
            raise DegreeMismatch(f"tensor degree {sum(e_degrees)} != {self.d}")
        if self.p == 2:
            key = tuple(e_degrees)
        else:
            key = tuple((m % 2, m // 2) for m in e_degrees)
        vec = np.zeros(self.ambient_dim, dtype=np.int64)
        vec[self.index[key]] = 1
        return self.quotient_map(vec)


@lru_cache(maxsize=None)
def space(n: int, d: int, p: int) -> CoinvariantSpace:
    return CoinvariantSpace(n, d, p)


def coinvariant_dim(n: int, d: int, p: int) -> int:
    return space(n, d, p).dim


def class_of_word(word, n: int, d: int, p: int) -> tuple:
    """Coinvariant class of E^{e_1}_{a_1} o ... o E^{e_n}_{a_n}.

    The generator E^eps_a corresponds to e_{2(p-1)a - eps} (e_a for p = 2).
    """
    if len(word) != n:
        raise DegreeMismatch(f"word length {len(word)} != n = {n}")
    if p == 2:
        degs = [a for _, a in word]
    else:
        degs = [2 * (p - 1) * a - eps for eps, a in word]
    return space(n, d, p).class_of_tensor(degs)
