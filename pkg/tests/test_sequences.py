import itertools
import math

import pytest

from eops import oracle, sequences
from eops.sequences import (COND_EHAT, COND_SEMIRING, IllegitimateSequence,
                            angle_transform, degree, enumerate_allowable,
                            format_word, inverse_angle, parse_word, stats)


def test_stats_empty():
    for p in (2, 3):
        st = stats((), p)
        assert st.length == 0 and st.min == math.inf
        assert st.bockstein_degree == 0 and st.m == 0 and st.b == 0


def test_stats_examples():
    st = stats(((1, 1), (0, 2)), 3)
    assert st.length == 2
    assert st.degree == (4 * 1 - 1) + (4 * 2 - 0) == 11
    assert st.bockstein_degree == 1 and st.min == 1 and st.m == 1 and st.b == 1
    st = stats(((0, 1), (0, 2)), 2)
    assert st.length == 2 and st.degree == 3 and st.bockstein_degree == 0
    assert st.min == 1


def test_legitimacy_errors():
    with pytest.raises(IllegitimateSequence):
        stats(((2, 1),), 3)
    with pytest.raises(IllegitimateSequence):
        stats(((1, 0),), 3)
    with pytest.raises(IllegitimateSequence):
        stats(((1, 1),), 2)


def test_angle_examples():
    assert angle_transform(((0, 1), (0, 2)), 2) == ((0, 1), (0, 4))
    assert angle_transform(((1, 1), (0, 2)), 3) == ((1, 1), (0, 6))
    assert angle_transform((), 5) == ()


def test_inverse_angle_examples():
    assert inverse_angle(((0, 1), (0, 4)), 2) == ((0, 1), (0, 2))
    assert inverse_angle(((0, 1), (0, 3)), 2) is None
    assert inverse_angle(((1, 1), (0, 6)), 3) == ((1, 1), (0, 2))


def test_round_trip_exhaustive():
    for p in (2, 3):
        epss = (0,) if p == 2 else (0, 1)
        for n in (1, 2, 3):
            for idx in itertools.product(range(13), repeat=n):
                if any(idx[k] > idx[k + 1] for k in range(n - 1)):
                    continue
                for es in itertools.product(epss, repeat=n):
                    seq = tuple(zip(es, idx))
                    if any(i < e for e, i in seq):
                        continue
                    assert inverse_angle(angle_transform(seq, p), p) == seq


def test_enumerate_examples():
    got = enumerate_allowable(2, 1, 3, "none")
    assert got == [((0, 0),), ((0, 1),), ((0, 2),), ((0, 3),)]
    got = enumerate_allowable(2, 1, 3, COND_SEMIRING)
    assert got == [((0, 1),), ((0, 2),), ((0, 3),)]


def test_enumerated_are_allowable():
    for p in (2, 3):
        for n in (1, 2, 3):
            for j in enumerate_allowable(p, n, 20):
                assert inverse_angle(j, p) is not None
                assert degree(j, p) <= 20


def test_counts_match_oracle():
    for p in (2, 3):
        for n in (1, 2):
            per_degree = {}
            for j in enumerate_allowable(p, n, 16, COND_EHAT):
                d = degree(j, p)
                per_degree[d] = per_degree.get(d, 0) + 1
            for d in range(17):
                assert per_degree.get(d, 0) == oracle.coinvariant_dim(n, d, p), (p, n, d)


def test_word_syntax():
    assert format_word(()) == "[1]"
    assert format_word(((1, 1), (0, 6))) == "E1_1 o E0_6"
    assert parse_word("E1_1 o E0_6", 3) == ((1, 1), (0, 6))
    assert parse_word("[1]", 2) == ()
    with pytest.raises(IllegitimateSequence):
        parse_word("E1_0", 3)
    with pytest.raises(ValueError):
        parse_word("F2_1", 3)
