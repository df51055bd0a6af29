"""Index-sequence combinatorics: legitimacy, the angle transform, allowability,
statistics, and enumeration of allowable sequences.

A sequence is a tuple of (eps, i) pairs.  E^eps_i has homological degree
2*i*(p-1) - eps for odd p and degree i for p = 2 (where eps is always 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .arith import check_prime

Entry = tuple  # (eps, i)
Sequence = tuple  # tuple of entries

EMPTY: Sequence = ()


class IllegitimateSequence(Exception):
    pass


class NotAllowable(Exception):
    """Raised by inverse_angle when no ascending legitimate preimage exists."""


def check_legitimate(seq: Sequence, p: int) -> Sequence:
    for eps, i in seq:
        if eps not in (0, 1):
            raise IllegitimateSequence(f"eps must be 0 or 1 in {seq}")
        if p == 2 and eps != 0:
            raise IllegitimateSequence(f"eps must be 0 at p=2 in {seq}")
        if i < eps:
            raise IllegitimateSequence(f"index {i} < eps {eps} in {seq}")
    return seq


def gen_degree(eps: int, i: int, p: int) -> int:
    return i if p == 2 else 2 * i * (p - 1) - eps


def degree(seq: Sequence, p: int) -> int:
    return sum(gen_degree(eps, i, p) for eps, i in seq)


@dataclass(frozen=True)
class SequenceStats:
    length: int
    degree: int
    bockstein_degree: int
    min: float  # +inf for the empty sequence
    m: int
    b: int


def stats(seq: Sequence, p: int) -> SequenceStats:
    check_prime(p)
    check_legitimate(seq, p)
    if not seq:
        return SequenceStats(0, 0, 0, math.inf, 0, 0)
    eps_list = [e for e, _ in seq]
    return SequenceStats(
        length=len(seq),
        degree=degree(seq, p),
        bockstein_degree=sum(eps_list),
        min=min(i for _, i in seq),
        m=1 if any(eps_list) else 0,
        b=seq[0][0],
    )


def angle_transform(seq: Sequence, p: int) -> Sequence:
    """<I> = ((e1, i1), (e2, p*i2 - e2), ..., (en, p^(n-1)*in - en*(p^(n-1)-1)/(p-1)))."""
    check_legitimate(seq, p)
    out = []
    for s, (eps, i) in enumerate(seq):
        q = p ** s
        out.append((eps, q * i - eps * (q - 1) // (p - 1)))
    return tuple(out)


def inverse_angle(seq: Sequence, p: int):
    """The ascending legitimate I with <I> = seq, or None if seq is not allowable."""
    out = []
    prev = None
    for s, (eps, j) in enumerate(seq):
        if eps not in (0, 1) or (p == 2 and eps):
            return None
        q = p ** s
        num = j + eps * (q - 1) // (p - 1)
        if num % q:
            return None
        i = num // q
        if i < eps or (prev is not None and i < prev):
            return None
        out.append((eps, i))
        prev = i
    return tuple(out)


def is_allowable(seq: Sequence, p: int) -> bool:
    return inverse_angle(seq, p) is not None


# Basis / generator side conditions on allowable sequences.
COND_NONE = "none"
COND_EHAT = "min>=m"            # basis of Ehat
COND_E = "min>=degbeta/2"       # basis of E
COND_SEMIRING = "semiring-generator"


def satisfies(seq: Sequence, p: int, condition: str) -> bool:
    st = stats(seq, p)
    if condition == COND_NONE:
        return True
    if condition == COND_EHAT:
        return st.min >= st.m
    if condition == COND_E:
        return 2 * st.min >= st.bockstein_degree
    if condition == COND_SEMIRING:
        if p == 2:
            return st.min >= 1
        return st.bockstein_degree - st.b < 2 * st.min
    raise ValueError(f"unknown condition {condition!r}")


def enumerate_allowable(p: int, length: int, max_degree: int, condition: str = COND_NONE):
    """All allowable J of the given length with degree <= max_degree and the condition.

    Enumerates ascending legitimate I (deg <I> >= deg I prunes the search) and
    maps through the angle transform.
    """
    check_prime(p)
    results = []
    eps_choices = (0,) if p == 2 else (0, 1)

    def entry_degree(eps, i, pos):
        q = p ** pos
        return gen_degree(eps, q * i - eps * (q - 1) // (p - 1), p)

    def rec(prefix, min_i, deg_so_far):
        if len(prefix) == length:
            j = angle_transform(tuple(prefix), p)
            if satisfies(j, p, condition):
                results.append(j)
            return
        pos = len(prefix)
        i = min_i
        while True:
            d_min = min(entry_degree(eps, i, pos) for eps in eps_choices if i >= eps)
            if deg_so_far + d_min > max_degree:
                break
            for eps in eps_choices:
                if i < eps:
                    continue
                d = entry_degree(eps, i, pos)
                if deg_so_far + d <= max_degree:
                    rec(prefix + [(eps, i)], i, deg_so_far + d)
            i += 1

    rec([], 0, 0)
    results.sort(key=lambda j: (degree(j, p), j))
    return results


# -- text syntax ---------------------------------------------------------------

def format_word(seq: Sequence) -> str:
    if not seq:
        return "[1]"
    return " o ".join(f"E{eps}_{i}" for eps, i in seq)


def parse_word(text: str, p: int) -> Sequence:
    text = text.strip()
    if text == "[1]":
        return EMPTY
    entries = []
    for tok in text.split("o"):
        tok = tok.strip()
        if not tok.startswith("E") or "_" not in tok:
            raise ValueError(f"bad generator token {tok!r}")
        eps_s, i_s = tok[1:].split("_", 1)
        entries.append((int(eps_s), int(i_s)))
    return check_legitimate(tuple(entries), p)
