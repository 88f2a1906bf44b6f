"""Framed n-cables of link diagrams, with basepoints on the parallel copies.

Parallel copies are indexed by their offset to the *right* of the original
strand (relative to its orientation): copy 0 is the copy closest to the
right-hand side.  A crossing of the original diagram becomes an n x n grid
of crossings with the same sign, so the blackboard cable of component k
carries framing ``self_writhe(d, k)``.  Full twists are then spliced in to
reach the requested framing.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, replace

from .diagram import CableInfo, Diagram, _assemble, _heads, self_writhe
from .errors import DiagramError, NotACable

__all__ = [
    "MARKINGS",
    "CableSpec",
    "adjust_framing",
    "blackboard_cable",
    "coloured_diagram",
    "full_twist_word",
]

MARKINGS = ("strands", "single")


@dataclass(frozen=True)
class CableSpec:
    """Parameters for :func:`coloured_diagram`.

    ``framing`` holds one target framing per component; a single value is
    broadcast to every component.  With ``blackboard=True`` no twists are
    inserted and each cable keeps the framing ``self_writhe``.

    ``marking="strands"`` marks every copy of the reference arc of
    ``marked_component`` (copy ``basepoint_strand`` becomes the basepoint);
    ``"single"`` marks only that copy.
    """

    n: int = 2
    framing: tuple[int, ...] = (0,)
    basepoint_strand: int = 0
    marked_component: int = 0
    blackboard: bool = False
    marking: str = "strands"

    def __post_init__(self) -> None:
        if self.marking not in MARKINGS:
            raise DiagramError(f"marking must be one of {MARKINGS}, got {self.marking!r}")
        if self.n < 1:
            raise DiagramError(f"colour must be >= 1, got {self.n}")
        if not 0 <= self.basepoint_strand < self.n:
            raise DiagramError(
                f"basepoint strand {self.basepoint_strand} out of range for colour {self.n}"
            )
        if self.marked_component < 0:
            raise DiagramError("marked component must be non-negative")

    def targets(self, d: Diagram) -> list[int]:
        k = d.n_components
        if self.blackboard:
            return [self_writhe(d, c) for c in range(k)]
        if len(self.framing) == 1:
            return [self.framing[0]] * k
        if len(self.framing) != k:
            raise DiagramError(
                f"{len(self.framing)} framings given for a diagram with {k} components"
            )
        return list(self.framing)


def full_twist_word(n: int, sign: int = 1) -> list[int]:
    """The braid word (s_1 ... s_{n-1})^n, negated for ``sign < 0``."""
    s = 1 if sign > 0 else -1
    return [s * i for _ in range(n) for i in range(1, n)]


def blackboard_cable(d: Diagram, n: int) -> Diagram:
    """Replace every strand by ``n`` parallel copies.

    Copy ``k`` of component ``c`` becomes component ``c * n + k`` of the
    result.  The diagram's basepoint, if any, moves to copy 0 of its edge.
    """
    if n < 1:
        raise DiagramError(f"cable index must be >= 1, got {n}")
    E = d.n_edges
    n_x = d.n_crossings

    def boundary(e: int, k: int) -> int:
        return e * n + k

    vbase = E * n
    hbase = vbase + n_x * n * n

    def vertical(x: int, k: int, p: int, a: int, c: int) -> int:
        # segment of under-copy k between horizontal positions p-1 and p
        if p == 0:
            return boundary(a, k)
        if p == n:
            return boundary(c, k)
        return vbase + (x * n + k) * n + p

    def horizontal(x: int, m: int, q: int, b: int, dd: int) -> int:
        # segment of over-copy m between vertical lines q-1 and q, west to east
        if q == 0:
            return boundary(dd, m)
        if q == n:
            return boundary(b, m)
        return hbase + (x * n + m) * n + q

    tuples: list[tuple[int, int, int, int]] = []
    signs: list[int] = []
    for x, ((a, b, c, dd), sign) in enumerate(zip(d.crossings, d.signs)):
        # under-strand runs south to north, copy k at x-position k (east = right)
        # over-strand runs east for sign > 0 (right = south), west otherwise
        for k in range(n):
            for p in range(n):
                m = n - 1 - p if sign > 0 else p
                tuples.append(
                    (
                        vertical(x, k, p, a, c),
                        horizontal(x, m, k + 1, b, dd),
                        vertical(x, k, p + 1, a, c),
                        horizontal(x, m, k, b, dd),
                    )
                )
                signs.append(sign)
    loops = [boundary(e, k) for e in range(2 * n_x, E) for k in range(n)]
    bp = None if d.basepoint is None else boundary(d.basepoint, 0)
    out, relabel = _assemble(tuples, signs, loops, bp)

    comps = d.n_components
    first_edge = [min(d.component_edges(c)) for c in range(comps)]
    arcs = tuple(tuple(relabel[boundary(first_edge[c], k)] for k in range(n)) for c in range(comps))
    copies = tuple(tuple(c * n + k for k in range(n)) for c in range(comps))
    framings = tuple(self_writhe(d, c) for c in range(comps))
    return replace(out, cable=CableInfo(n, arcs, copies, framings))


def adjust_framing(cabled: Diagram, component_group: int, delta: int, n: int) -> Diagram:
    """Splice ``|delta|`` full twists of sign ``delta`` into a cable group.

    The twists sit at the head end of the group's reference arc, so the arc
    itself (which carries the default basepoint) stays outside the twist
    region.  Each full twist adds ``n(n-1)`` crossings.
    """
    info = cabled.cable
    if info is None or info.n != n:
        raise NotACable(f"diagram is not an {n}-cable produced by blackboard_cable")
    if not 0 <= component_group < len(info.arcs):
        raise NotACable(f"cable has no strand group {component_group}")
    if delta == 0 or n == 1:
        framings = list(info.framings)
        framings[component_group] += delta
        return replace(cabled, cable=replace(info, framings=tuple(framings)))

    arcs = info.arcs[component_group]
    tuples = [list(t) for t in cabled.crossings]
    signs = list(cabled.signs)
    loops = list(range(2 * cabled.n_crossings, cabled.n_edges))
    fresh = cabled.n_edges

    head_of: dict[int, tuple[int, int]] = {}
    for label, x, pos, head in _heads(cabled.crossings, cabled.signs):
        if head:
            head_of[label] = (x, pos)

    # braid positions run left to right; copy k sits at position n-1-k
    cur = [arcs[n - 1 - i] for i in range(n)]
    sign = 1 if delta > 0 else -1
    for letter in full_twist_word(n, sign) * abs(delta):
        i = abs(letter) - 1
        in_l, in_r = cur[i], cur[i + 1]
        out_l, out_r = fresh, fresh + 1
        fresh += 2
        if letter > 0:
            tuples.append([in_r, out_r, out_l, in_l])
        else:
            tuples.append([in_l, in_r, out_r, out_l])
        signs.append(sign)
        cur[i], cur[i + 1] = out_l, out_r

    # full twists are pure braids: position i exits where it entered
    n_old = len(cabled.crossings)
    rename: dict[int, int] = {}
    for i in range(n):
        arc = arcs[n - 1 - i]
        if arc in head_of:
            x, pos = head_of[arc]
            tuples[x][pos] = cur[i]
        else:
            loops.remove(arc)
            rename[cur[i]] = arc
    if rename:
        for t in tuples[n_old:]:
            for j, lab in enumerate(t):
                t[j] = rename.get(lab, lab)

    out, relabel = _assemble(tuples, signs, loops, cabled.basepoint)
    framings = list(info.framings)
    framings[component_group] += delta
    new_info = CableInfo(
        n,
        tuple(tuple(relabel[e] for e in group) for group in info.arcs),
        info.copies,
        tuple(framings),
    )
    return replace(out, cable=new_info)


def coloured_diagram(d: Diagram, spec: CableSpec | None = None) -> Diagram:
    """The framed ``n``-cable of ``d`` with its basepoints placed.

    The basepoint sits on copy ``spec.basepoint_strand`` of the reference
    arc of ``spec.marked_component``; with the default marking the other
    copies of that arc become marks too.
    """
    spec = spec or CableSpec()
    if spec.marked_component >= d.n_components:
        raise DiagramError(
            f"marked component {spec.marked_component} out of range "
            f"(diagram has {d.n_components})"
        )
    targets = spec.targets(d)
    out = blackboard_cable(d, spec.n)
    for c, target in enumerate(targets):
        out = adjust_framing(out, c, target - self_writhe(d, c), spec.n)
    assert out.cable is not None
    arc = out.cable.arcs[spec.marked_component]
    bp = arc[spec.basepoint_strand]
    if spec.marking == "single":
        return out.with_basepoint(bp)
    return out.with_basepoint(bp, *(e for k, e in enumerate(arc) if k != spec.basepoint_strand))


def expected_crossings(d: Diagram, n: int, targets: Sequence[int]) -> int:
    """Crossing count of the framed cable: n^2 c + n(n-1) sum |target - self writhe|."""
    twists = sum(abs(t - self_writhe(d, c)) for c, t in enumerate(targets))
    return n * n * d.n_crossings + n * (n - 1) * twists
