from __future__ import annotations

from collections import Counter

import pytest

from colkh.cabling import (
    CableSpec,
    adjust_framing,
    blackboard_cable,
    coloured_diagram,
    expected_crossings,
    full_twist_word,
)
from colkh.diagram import BUILTIN_NAMES, builtin, linking_number, mirror, self_writhe, validate, writhe
from colkh.errors import DiagramError, NotACable
from colkh.khcube import state_sum
from colkh.polynomial import LaurentPoly

from . import oracle


def _copy_linking(d, n, component=0):
    """Sum of pairwise linking numbers between the n copies of one original component."""
    copies = d.cable.copies[component]
    return sum(linking_number(d, a, b) for i, a in enumerate(copies) for b in copies[i + 1 :])


def test_full_twist_word():
    assert full_twist_word(2) == [1, 1]
    assert full_twist_word(3, -1) == [-1, -2, -1, -2, -1, -2]
    assert full_twist_word(1) == []


def test_blackboard_counts():
    t = blackboard_cable(builtin("trefoil_rh"), 2)
    assert (t.n_crossings, t.n_components) == (12, 2)
    assert blackboard_cable(builtin("figure8"), 2).n_crossings == 16
    assert blackboard_cable(builtin("t2_4"), 3).n_crossings == 36
    assert blackboard_cable(builtin("t2_4"), 2).n_components == 4


def test_blackboard_identity_for_one_copy():
    for name in BUILTIN_NAMES:
        d = builtin(name)
        assert blackboard_cable(d, 1) == d, name


def test_blackboard_signs_and_induced_framing():
    d = builtin("trefoil_rh")
    for n in (2, 3):
        c = blackboard_cable(d, n)
        assert validate(c).ok
        assert Counter(c.signs) == Counter({1: 3 * n * n})
        # each pair of copies links self_writhe times
        assert _copy_linking(c, n) == n * (n - 1) // 2 * self_writhe(d, 0)


def test_adjust_framing_trefoil():
    c = blackboard_cable(builtin("trefoil_rh"), 2)
    adj = adjust_framing(c, 0, -3, 2)
    assert adj.n_crossings == 18
    assert validate(adj).ok
    assert sum(1 for s in adj.signs if s < 0) == 6
    assert _copy_linking(adj, 2) == 0
    assert adj.cable.framings == (0,)


def test_adjust_framing_zero_is_identity():
    c = blackboard_cable(builtin("figure8"), 2)
    assert adjust_framing(c, 0, 0, 2) == c


def test_kinked_unknot_cable_is_unlink():
    c = blackboard_cable(builtin("unknot_kink_pos"), 2)
    assert c.n_crossings == 4
    adj = adjust_framing(c, 0, -1, 2)
    assert adj.n_crossings == 6
    unlink = LaurentPoly({1: 1, -1: 1}) ** 2
    assert state_sum(adj) == unlink
    # independent bracket oracle
    assert oracle.jones_unnormalised(adj.crossings, adj.signs, adj.n_edges) == unlink.terms


def test_adjust_framing_needs_a_cable():
    with pytest.raises(NotACable):
        adjust_framing(builtin("trefoil_rh"), 0, 1, 2)


def test_adjust_framing_on_loops():
    c = blackboard_cable(builtin("unknot"), 2)
    adj = adjust_framing(c, 0, 2, 2)
    assert adj.n_crossings == 4
    assert _copy_linking(adj, 2) == 2


@pytest.mark.parametrize(
    "name, crossings, components",
    [("trefoil_rh", 18, 2), ("figure8", 16, 2), ("t2_4", 16, 4), ("unknot", 0, 2)],
)
def test_coloured_diagram(name, crossings, components):
    d = coloured_diagram(builtin(name), CableSpec(2))
    assert (d.n_crossings, d.n_components) == (crossings, components)
    assert d.basepoint is not None
    assert len(d.basepoints) == 2
    assert validate(d).ok
    for k in range(builtin(name).n_components):
        assert _copy_linking(d, 2, k) == 0


def test_marks_sit_on_one_arc_outside_twists():
    d = coloured_diagram(builtin("trefoil_rh"), CableSpec(2))
    arc = d.cable.arcs[0]
    assert d.basepoints == arc
    # the copies of the reference arc run parallel: they belong to different copies
    assert d.edge_component[arc[0]] != d.edge_component[arc[1]]
    single = coloured_diagram(builtin("trefoil_rh"), CableSpec(2, marking="single", basepoint_strand=1))
    assert single.basepoints == (arc[1],)


def test_n1_is_identity_up_to_basepoint():
    for name in BUILTIN_NAMES:
        d = builtin(name)
        spec = CableSpec(1, framing=tuple(self_writhe(d, k) for k in range(d.n_components)))
        out = coloured_diagram(d, spec)
        assert out == d.with_basepoint(out.basepoint)


def test_crossing_count_formula():
    for name in BUILTIN_NAMES:
        d = builtin(name)
        for n in (1, 2, 3):
            for f in (-1, 0, 2):
                spec = CableSpec(n, framing=(f,))
                if expected_crossings(d, n, spec.targets(d)) > 60:
                    continue
                out = coloured_diagram(d, spec)
                assert out.n_crossings == expected_crossings(d, n, spec.targets(d))
                twists = sum(abs(f - self_writhe(d, k)) for k in range(d.n_components))
                assert out.n_crossings == n * n * d.n_crossings + n * (n - 1) * twists
                for k in range(d.n_components):
                    assert _copy_linking(out, n, k) == n * (n - 1) // 2 * f


def test_cable_of_mirror_is_mirror_of_cable():
    for name in BUILTIN_NAMES:
        d = builtin(name)
        a = blackboard_cable(mirror(d), 2)
        b = mirror(blackboard_cable(d, 2))
        assert Counter(zip(a.crossings, a.signs)) == Counter(zip(b.crossings, b.signs)), name


def test_blackboard_spec_keeps_writhe():
    d = builtin("trefoil_rh")
    out = coloured_diagram(d, CableSpec(2, blackboard=True))
    assert out.n_crossings == 12
    assert writhe(out) == 12


def test_spec_validation():
    with pytest.raises(DiagramError):
        CableSpec(0)
    with pytest.raises(DiagramError):
        CableSpec(2, basepoint_strand=2)
    with pytest.raises(DiagramError):
        CableSpec(2, marking="both")
    with pytest.raises(DiagramError):
        CableSpec(2, framing=(0, 0, 0)).targets(builtin("t2_4"))
    with pytest.raises(DiagramError):
        coloured_diagram(builtin("trefoil_rh"), CableSpec(2, marked_component=1))
