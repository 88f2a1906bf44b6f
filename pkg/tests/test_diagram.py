from __future__ import annotations

import itertools

import pytest

from colkh.diagram import (
    BUILTIN_NAMES,
    BraidWord,
    Diagram,
    braid_permutation,
    builtin,
    from_pd,
    linking_number,
    mirror,
    parse_braid,
    parse_braid_text,
    parse_pd,
    self_writhe,
    to_pd,
    validate,
    writhe,
)
from colkh.errors import (
    DiagramError,
    EdgeCountViolation,
    InvalidComponentIndex,
    InvalidLetter,
    MalformedSyntax,
    NonOrientable,
    UnknownName,
)

TREFOIL_PD = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"


def _trace_components(d: Diagram) -> int:
    """Count components by walking under-strands a->c and over-strands along the sign."""
    succ = {}
    for (a, b, c, e), s in zip(d.crossings, d.signs):
        succ[a] = c
        if s > 0:
            succ[e] = b
        else:
            succ[b] = e
    seen, comps = set(), 0
    for start in succ:
        if start in seen:
            continue
        comps += 1
        cur = start
        while cur not in seen:
            seen.add(cur)
            cur = succ[cur]
    return comps + d.loops


# -- parse_pd


def test_parse_pd_trefoil():
    d = parse_pd(TREFOIL_PD)
    assert d.n_crossings == 3
    assert d.n_components == 1
    assert _trace_components(d) == 1
    assert validate(d).ok


def test_parse_pd_accepts_commas_and_newlines():
    assert parse_pd("X(1,4,2,5),\nX(3,6,4,1),  X(5,2,6,3)") == parse_pd(TREFOIL_PD)


@pytest.mark.parametrize(
    "text, err",
    [
        ("X(1,4,2,5)", EdgeCountViolation),
        ("", MalformedSyntax),
        ("   ", MalformedSyntax),
        ("X(1,4,2)", MalformedSyntax),
        ("X(1,4,2,5) junk X(3,6,4,1) X(5,2,6,3)", MalformedSyntax),
        ("X(0,3,1,4) X(2,5,3,0) X(4,1,5,2)", MalformedSyntax),
        ("X(1,2,3,4) X(1,4,3,2)", NonOrientable),
    ],
)
def test_parse_pd_errors(text, err):
    with pytest.raises(err):
        parse_pd(text)


def test_edge_used_three_times():
    with pytest.raises(EdgeCountViolation):
        parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,1)")


def test_pd_round_trip_builtins():
    for name in BUILTIN_NAMES:
        d = builtin(name)
        if not d.crossings or d.loops:
            continue
        assert parse_pd(to_pd(d)) == d, name


def test_to_pd_rejects_crossingless():
    with pytest.raises(DiagramError):
        to_pd(builtin("unknot"))


def test_flip_component_reverses_linking():
    d = parse_pd(to_pd(builtin("hopf_pos")))
    assert linking_number(d, 0, 1) == 1
    flipped = parse_pd(to_pd(d), flip=[1])
    assert linking_number(flipped, 0, 1) == -1
    assert flipped.n_crossings == 2


def test_flip_bad_component():
    with pytest.raises(InvalidComponentIndex):
        parse_pd(TREFOIL_PD, flip=[3])


def test_basepoint_from_pd():
    d = parse_pd(TREFOIL_PD, basepoint=2)
    assert d.basepoint is not None
    with pytest.raises(DiagramError):
        parse_pd(TREFOIL_PD, basepoint=99)


# -- braids


def test_braid_trefoil():
    d = parse_braid(BraidWord(2, (1, 1, 1)))
    assert (d.n_crossings, d.n_components, writhe(d)) == (3, 1, 3)


def test_braid_t24():
    d = parse_braid(BraidWord(2, (1, 1, 1, 1)))
    assert (d.n_crossings, d.n_components) == (4, 2)


def test_braid_empty_is_unknot():
    d = parse_braid(BraidWord(1, ()))
    assert (d.n_crossings, d.n_components, d.loops) == (0, 1, 1)


def test_braid_text():
    assert parse_braid_text("1 1 -2 1", 3) == parse_braid([1, 1, -2, 1], 3)
    with pytest.raises(MalformedSyntax):
        parse_braid_text("1 a", 2)


@pytest.mark.parametrize("strands, letters", [(2, (2,)), (2, (0,)), (3, (-3,)), (1, (1,))])
def test_invalid_letters(strands, letters):
    with pytest.raises(InvalidLetter):
        parse_braid(BraidWord(strands, letters))


def _cycles(perm):
    seen, n = set(), 0
    for p in range(len(perm)):
        if p in seen:
            continue
        n += 1
        while p not in seen:
            seen.add(p)
            p = perm[p]
    return n


def test_braid_components_equal_permutation_cycles_exhaustive():
    for s in (1, 2, 3):
        alphabet = [k for k in range(-(s - 1), s) if k]
        for length in range(7):
            for word in itertools.product(alphabet, repeat=length):
                bw = BraidWord(s, word)
                d = parse_braid(bw)
                assert d.n_components == _cycles(braid_permutation(bw)), word
                assert d.n_components == _trace_components(d), word
                pos = sum(1 for k in word if k > 0)
                assert writhe(d) == pos - (len(word) - pos)
                assert validate(d).ok


# -- builtins


def test_builtin_table():
    expect = {
        "unknot": (0, 1, 0),
        "unknot_kink_pos": (1, 1, 1),
        "unknot_kink_neg": (1, 1, -1),
        "trefoil_rh": (3, 1, 3),
        "trefoil_lh": (3, 1, -3),
        "figure8": (4, 1, 0),
        "t2_4": (4, 2, 4),
        "hopf_pos": (2, 2, 2),
    }
    assert set(expect) == set(BUILTIN_NAMES)
    for name, want in expect.items():
        d = builtin(name)
        assert (d.n_crossings, d.n_components, writhe(d)) == want, name


def test_builtin_self_writhes():
    assert self_writhe(builtin("figure8"), 0) == 0
    t = builtin("t2_4")
    assert self_writhe(t, 0) == self_writhe(t, 1) == 0
    assert linking_number(t, 0, 1) == 2
    assert self_writhe(builtin("trefoil_rh"), 0) == 3


def test_unknown_name():
    with pytest.raises(UnknownName, match="unknown diagram"):
        builtin("granny")


def test_self_writhe_bad_component():
    with pytest.raises(InvalidComponentIndex):
        self_writhe(builtin("trefoil_rh"), 1)


# -- mirror


def test_mirror():
    for name in BUILTIN_NAMES:
        d = builtin(name)
        m = mirror(d)
        assert writhe(m) == -writhe(d)
        assert m.signs == tuple(-s for s in d.signs)
        assert mirror(m) == d
        assert validate(m).ok
    assert mirror(builtin("trefoil_rh")) == builtin("trefoil_lh")


# -- validate


def test_validate_report():
    rep = validate(parse_pd(TREFOIL_PD))
    assert rep.ok and rep.n_components == 1 and rep.writhe == -3
    assert rep.signs == (-1, -1, -1)


def test_validate_edge_multiplicity():
    d = builtin("trefoil_rh")
    bad = Diagram(d.crossings[:2] + ((0, 0, 0, 1),), d.signs)
    rep = validate(bad)
    assert not rep.ok
    assert any(isinstance(p, EdgeCountViolation) for p in rep.problems)
    with pytest.raises(EdgeCountViolation):
        rep.raise_for_problems()


def test_validate_inconsistent_orientation():
    d = builtin("trefoil_rh")
    # flipping one sign makes that over-strand run against its neighbours
    bad = Diagram(d.crossings, (-1,) + d.signs[1:])
    rep = validate(bad)
    assert not rep.ok
    assert any(isinstance(p, NonOrientable) for p in rep.problems)


def test_validate_raw_tuples():
    assert validate([(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)]).ok
    assert not validate([(1, 4, 2, 5)]).ok


def test_with_basepoint_and_marks():
    d = builtin("t2_4").with_basepoint(0, 3)
    assert d.basepoints == (0, 3)
    assert validate(d).ok
    with pytest.raises(DiagramError):
        d.with_basepoint(99)
    with pytest.raises(DiagramError):
        d.with_basepoint(None, 1)


def test_from_pd_hashable_labels():
    d = from_pd([(1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 6, 3)])
    assert d == parse_pd(TREFOIL_PD)
