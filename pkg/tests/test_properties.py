from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colkh.diagram import BraidWord, mirror, parse_braid, parse_pd, to_pd
from colkh.f2 import SparseF2Matrix, rank_f2, rank_f2_dense
from colkh.homology import betti, betti_bruteforce, simplify
from colkh.khcube import build_complex, state_sum


def braid_words(max_len: int = 5, max_strands: int = 3):
    for s in range(1, max_strands + 1):
        alphabet = [k for k in range(-(s - 1), s) if k]
        for length in range(max_len + 1):
            for word in itertools.product(alphabet, repeat=length):
                yield s, word


WORDS = list(braid_words())


def _check_word(s: int, word: tuple[int, ...]) -> dict[bool, int]:
    d = parse_braid(BraidWord(s, word)).with_basepoint(0)
    m = mirror(d)
    totals = {}
    for reduced in (False, True):
        c = build_complex(d, reduced=reduced)
        assert c.check_d_squared() == [], word
        table = betti(c)
        assert table.euler_characteristic() == state_sum(d, reduced), word
        assert betti(simplify(c)) == table, word
        assert betti_bruteforce(c) == table, word
        assert betti(build_complex(m, reduced=reduced)) == table.reflected(), word
        totals[reduced] = table.total_rank
    assert totals[False] == 2 * totals[True], word
    return totals


@pytest.mark.parametrize("strands", [1, 2, 3])
def test_exhaustive_small_braids(strands):
    words = [w for s, w in WORDS if s == strands]
    assert len(words) == {1: 1, 2: 63, 3: 1365}[strands]
    for word in words:
        _check_word(strands, word)


def test_conjugate_words_agree():
    # closures of conjugate braids are isotopic, so totals must match
    for s, word in WORDS:
        if len(word) < 2 or s == 1:
            continue
        rotated = word[1:] + word[:1]
        a = betti(build_complex(parse_braid(BraidWord(s, word)).with_basepoint(0), reduced=True))
        b = betti(build_complex(parse_braid(BraidWord(s, rotated)).with_basepoint(0), reduced=True))
        assert a == b, word


def test_kinked_trefoil_has_trefoil_homology():
    base = parse_braid(BraidWord(2, (1, 1, 1)))
    kinked = parse_braid(BraidWord(3, (1, 1, 1, 2)))  # Markov stabilisation
    for reduced in (False, True):
        a = betti(build_complex(base.with_basepoint(0), reduced=reduced))
        b = betti(build_complex(kinked.with_basepoint(0), reduced=reduced))
        assert a.total_rank == b.total_rank
        assert a == b


def _letters(s: int):
    alphabet = [k for k in range(-(s - 1), s) if k]
    return st.tuples(st.just(s), st.lists(st.sampled_from(alphabet), min_size=1, max_size=8))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4).flatmap(_letters))
def test_pd_round_trip(sw):
    s, letters = sw
    d = parse_braid(BraidWord(s, tuple(letters)))
    if d.loops:
        return
    back = parse_pd(to_pd(d))
    if back == d:
        return
    # PD text cannot orient a component that never passes under
    unders = {d.strand_components(x)[0] for x in range(d.n_crossings)}
    free = [k for k in range(d.n_components) if k not in unders]
    assert free
    flips = (sub for r in range(1, len(free) + 1) for sub in itertools.combinations(free, r))
    assert d in [parse_pd(to_pd(d), flip=sub) for sub in flips]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 14), st.integers(1, 14), st.integers(0, 2**31 - 1))
def test_rank_implementations_agree(r, c, seed):
    rng = np.random.default_rng(seed)
    a = (rng.random((r, c)) < 0.4).astype(np.uint8)
    assert rank_f2(SparseF2Matrix.from_dense(a)) == rank_f2_dense(a)
    assert rank_f2(a.T) == rank_f2(a)
