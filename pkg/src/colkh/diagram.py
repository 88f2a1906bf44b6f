"""Oriented link diagrams: PD codes, braid closures and a small built-in table.

PD convention
-------------
Each crossing is a 4-tuple ``(a, b, c, d)`` of edge labels listed
counterclockwise, starting from the *incoming* under-strand edge::

            c
            ^
            |
     d -----|----> b        over-strand d -> b: positive crossing
            |               over-strand b -> d: negative crossing
            a

so the under-strand always runs ``a -> c`` and the over-strand joins ``b``
and ``d``.  Internally every diagram is kept in a canonical labelling: edges
are ``0 .. 2c-1``, each component owns a contiguous block of labels, and
inside a block the orientation runs ``e -> e+1`` (wrapping to the start of
the block).  Crossingless unknotted components ("loops") get the labels
``2c .. 2c+loops-1`` and come after all other components.
"""

from __future__ import annotations

import re
from collections import Counter
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field, replace
from functools import cached_property

from .errors import (
    DiagramError,
    EdgeCountViolation,
    InvalidComponentIndex,
    InvalidLetter,
    MalformedSyntax,
    NonOrientable,
    UnknownName,
)

Crossing = tuple[int, int, int, int]

__all__ = [
    "BUILTIN_NAMES",
    "BraidWord",
    "CableInfo",
    "Diagram",
    "ValidationReport",
    "builtin",
    "from_pd",
    "mirror",
    "parse_braid",
    "parse_braid_text",
    "parse_pd",
    "self_writhe",
    "to_pd",
    "validate",
    "writhe",
]


@dataclass(frozen=True)
class CableInfo:
    """Bookkeeping attached to diagrams produced by :mod:`colkh.cabling`.

    ``arcs[k]`` holds the ``n`` parallel edges (indexed by copy) running
    along the lowest-numbered edge of original component ``k``; twist
    regions are inserted at the head end of these edges.  ``copies[k]``
    lists the components of the cable that are copies of component ``k``.
    """

    n: int
    arcs: tuple[tuple[int, ...], ...]
    copies: tuple[tuple[int, ...], ...]
    framings: tuple[int, ...]


@dataclass(frozen=True)
class Diagram:
    """An oriented link diagram in canonical labelling (see module docstring)."""

    crossings: tuple[Crossing, ...]
    signs: tuple[int, ...]
    loops: int = 0
    basepoint: int | None = None
    marks: tuple[int, ...] = ()
    cable: CableInfo | None = field(default=None, compare=False, repr=False)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_edges(self) -> int:
        return 2 * len(self.crossings) + self.loops

    @property
    def n_positive(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_negative(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @cached_property
    def edge_component(self) -> tuple[int, ...]:
        """Component index of every edge."""
        comp = [-1] * self.n_edges
        succ = _successors(self.crossings, self.signs)
        k = 0
        for e in range(2 * len(self.crossings)):
            if comp[e] >= 0:
                continue
            cur = e
            while comp[cur] < 0:
                comp[cur] = k
                cur = succ[cur]
            k += 1
        for e in range(2 * len(self.crossings), self.n_edges):
            comp[e] = k
            k += 1
        return tuple(comp)

    @property
    def n_components(self) -> int:
        return max(self.edge_component, default=-1) + 1

    def component_edges(self, component: int) -> tuple[int, ...]:
        self._check_component(component)
        return tuple(e for e, c in enumerate(self.edge_component) if c == component)

    def strand_components(self, x: int) -> tuple[int, int]:
        """(under component, over component) at crossing ``x``."""
        a, b, _, _ = self.crossings[x]
        return self.edge_component[a], self.edge_component[b]

    @property
    def basepoints(self) -> tuple[int, ...]:
        """The basepoint followed by any further marked edges."""
        return () if self.basepoint is None else (self.basepoint, *self.marks)

    def with_basepoint(self, edge: int | None, *marks: int) -> Diagram:
        """Set the basepoint; extra ``marks`` are pinned to ``x`` as well in the reduced complex."""
        if edge is None and marks:
            raise DiagramError("extra marks need a basepoint")
        for e in (edge, *marks):
            if e is not None and not 0 <= e < self.n_edges:
                raise DiagramError(f"basepoint edge {e} out of range 0..{self.n_edges - 1}")
        return replace(self, basepoint=edge, marks=tuple(marks))

    def summary(self) -> dict[str, int | list[int] | None]:
        return {
            "crossings": self.n_crossings,
            "components": self.n_components,
            "writhe": writhe(self),
            "basepoints": list(self.basepoints),
        }

    def _check_component(self, component: int) -> None:
        if not 0 <= component < self.n_components:
            raise InvalidComponentIndex(
                f"component {component} out of range (diagram has {self.n_components})"
            )


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise InvalidLetter(f"strand count must be >= 1, got {self.strands}")
        for k in self.letters:
            if k == 0 or abs(k) >= self.strands:
                raise InvalidLetter(
                    f"letter {k} invalid for a braid on {self.strands} strands"
                )


# --------------------------------------------------------------------------
# canonical assembly


def _heads(tuples: Sequence[Sequence[Hashable]], signs: Sequence[int]):
    """Yield (label, crossing, position, is_head) for every edge occurrence."""
    for x, (tup, sign) in enumerate(zip(tuples, signs)):
        for pos, label in enumerate(tup):
            if pos == 0:
                head = True
            elif pos == 2:
                head = False
            elif pos == 1:
                head = sign < 0
            else:
                head = sign > 0
            yield label, x, pos, head


def _successors(crossings: Sequence[Crossing], signs: Sequence[int]) -> list[int]:
    succ = [0] * (2 * len(crossings))
    for label, x, pos, head in _heads(crossings, signs):
        if head:
            succ[label] = crossings[x][(pos + 2) % 4]
    return succ


def _assemble(
    tuples: Sequence[Sequence[Hashable]],
    signs: Sequence[int],
    loops: Sequence[Hashable] = (),
    basepoint: Hashable | None = None,
) -> tuple[Diagram, dict[Hashable, int]]:
    """Relabel oriented crossing data into a canonical :class:`Diagram`.

    ``tuples`` must already start at the incoming under-strand.  Raw labels
    may be any mutually comparable hashables; components are ordered by
    their smallest raw label and traversed from it.  Returns the diagram and
    the raw-to-canonical label map.
    """
    counts = Counter(label for tup in tuples for label in tup)
    bad = sorted((lab for lab, k in counts.items() if k != 2), key=repr)
    if bad:
        raise EdgeCountViolation(
            "edge labels must appear exactly twice; offending: "
            + ", ".join(f"{lab!r}x{counts[lab]}" for lab in bad)
        )
    head_at: dict[Hashable, tuple[int, int]] = {}
    tails: set[Hashable] = set()
    for label, x, pos, head in _heads(tuples, signs):
        if head:
            if label in head_at:
                raise NonOrientable(f"edge {label!r} enters two crossings")
            head_at[label] = (x, pos)
        else:
            if label in tails:
                raise NonOrientable(f"edge {label!r} leaves two crossings")
            tails.add(label)

    def succ(label: Hashable) -> Hashable:
        x, pos = head_at[label]
        return tuples[x][(pos + 2) % 4]

    relabel: dict[Hashable, int] = {}
    nxt = 0
    for start in sorted(counts):
        if start in relabel:
            continue
        cur = start
        while cur not in relabel:
            relabel[cur] = nxt
            nxt += 1
            cur = succ(cur)
    for lab in loops:
        if lab in relabel:
            raise DiagramError(f"loop label {lab!r} clashes with a crossing edge")
        relabel[lab] = nxt
        nxt += 1
    crossings = tuple(tuple(relabel[lab] for lab in tup) for tup in tuples)
    bp = None if basepoint is None else relabel[basepoint]
    return Diagram(crossings, tuple(signs), len(loops), bp), relabel


# --------------------------------------------------------------------------
# PD input / output

_PD_TOKEN = re.compile(r"X\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")
_PD_GAP = re.compile(r"[\s,]*")


def parse_pd(text: str, flip: Iterable[int] = (), basepoint: int | None = None) -> Diagram:
    """Parse ``X(a,b,c,d)`` tuples into a canonical oriented :class:`Diagram`.

    ``basepoint`` is a raw (input) edge label.  ``flip`` lists canonical
    component indices whose inferred orientation should be reversed.
    """
    tuples: list[tuple[int, int, int, int]] = []
    pos = 0
    for m in _PD_TOKEN.finditer(text):
        if not _PD_GAP.fullmatch(text, pos, m.start()):
            raise MalformedSyntax(f"unexpected text {text[pos:m.start()]!r} in PD code")
        tuples.append(tuple(int(g) for g in m.groups()))  # type: ignore[arg-type]
        pos = m.end()
    if not _PD_GAP.fullmatch(text, pos):
        raise MalformedSyntax(f"unexpected text {text[pos:]!r} in PD code")
    if not tuples:
        raise MalformedSyntax("empty PD code (use builtin('unknot') for the crossingless unknot)")
    if any(lab <= 0 for tup in tuples for lab in tup):
        raise MalformedSyntax("PD edge labels must be positive integers")
    return from_pd(tuples, flip=flip, basepoint=basepoint)


def _infer_over_directions(tuples: Sequence[Sequence[int]]) -> list[bool]:
    """Solve for each crossing whether its over-strand runs d -> b.

    Every edge needs exactly one head and one tail occurrence.  Positions
    0/2 are fixed by the incoming-under convention; positions 1/3 depend on
    the unknown over-strand direction, giving XOR constraints between
    crossings.  Groups of crossings left undetermined belong to components
    that never pass under; those are oriented so their smallest edge flows
    towards its smaller-labelled neighbour (ties: towards the earlier
    crossing).  PD text carries no orientation for such components, so
    ``parse_pd(to_pd(d))`` may reverse them.
    """
    n = len(tuples)
    occ: dict[int, list[tuple[int, int]]] = {}
    for x, tup in enumerate(tuples):
        for pos, lab in enumerate(tup):
            occ.setdefault(lab, []).append((x, pos))

    # literal for "occurrence is a head": ('const', bool) or ('var', x, negated)
    def literal(x: int, pos: int):
        if pos == 0:
            return ("const", True)
        if pos == 2:
            return ("const", False)
        return ("var", x, pos == 1)

    adj: list[list[tuple[int, bool]]] = [[] for _ in range(n)]
    forced: dict[int, bool] = {}

    def force(x: int, value: bool, lab: int) -> None:
        if forced.get(x, value) != value:
            raise NonOrientable(f"edge {lab} cannot be consistently oriented")
        forced[x] = value

    for lab, places in occ.items():
        l1, l2 = literal(*places[0]), literal(*places[1])
        if l1[0] == "const" and l2[0] == "const":
            if l1[1] == l2[1]:
                raise NonOrientable(
                    f"edge {lab} is {'incoming' if l1[1] else 'outgoing'} under-strand at both ends"
                )
        elif l1[0] == "const" or l2[0] == "const":
            c, v = (l1, l2) if l1[0] == "const" else (l2, l1)
            # v_x ^ negated == not c
            force(v[1], (not c[1]) ^ v[2], lab)
        elif l1[1] == l2[1]:
            if l1[2] == l2[2]:
                raise NonOrientable(f"edge {lab} cannot be consistently oriented")
        else:
            parity = not (l1[2] ^ l2[2])  # v1 ^ v2 == parity
            adj[l1[1]].append((l2[1], parity))
            adj[l2[1]].append((l1[1], parity))

    value: list[bool | None] = [None] * n

    def spread(root: int, root_value: bool) -> list[int]:
        group = [root]
        value[root] = root_value
        stack = [root]
        while stack:
            x = stack.pop()
            for y, parity in adj[x]:
                want = value[x] ^ parity
                if value[y] is None:
                    value[y] = want
                    group.append(y)
                    stack.append(y)
                elif value[y] != want:
                    raise NonOrientable(f"over-strand orientation conflict at crossing {y}")
        return group

    for x in sorted(forced):
        if value[x] is None:
            group = spread(x, forced[x])
            for y in group:
                if y in forced and forced[y] != value[y]:
                    raise NonOrientable(f"over-strand orientation conflict at crossing {y}")
        elif value[x] != forced[x]:
            raise NonOrientable(f"over-strand orientation conflict at crossing {x}")

    for x in range(n):
        if value[x] is not None:
            continue
        group = spread(x, True)
        members = set(group)
        labels = sorted(
            lab for y in group for pos in (1, 3) for lab in (tuples[y][pos],)
        )
        e = labels[0]
        (x1, p1), (x2, p2) = occ[e]
        # e is a head where the literal evaluates True
        head_x, head_p = (x1, p1) if value[x1] ^ (p1 == 1) else (x2, p2)
        tail_x, tail_p = (x2, p2) if (head_x, head_p) == (x1, p1) else (x1, p1)
        forward = tuples[head_x][(head_p + 2) % 4]
        backward = tuples[tail_x][(tail_p + 2) % 4]
        # a two-edge component has forward == backward; then e flows into
        # the lower-numbered crossing
        if (forward, head_x) > (backward, tail_x):
            for y in members:
                value[y] = not value[y]
    return [bool(v) for v in value]


def from_pd(
    tuples: Sequence[Sequence[int]],
    flip: Iterable[int] = (),
    basepoint: int | None = None,
) -> Diagram:
    """Build a canonical diagram from raw PD tuples (see :func:`parse_pd`)."""
    tuples = [tuple(t) for t in tuples]
    if not tuples:
        raise MalformedSyntax("a PD code needs at least one crossing")
    if any(len(t) != 4 for t in tuples):
        raise MalformedSyntax("every PD crossing needs exactly four edge labels")
    counts = Counter(lab for t in tuples for lab in t)
    bad = sorted(lab for lab, k in counts.items() if k != 2)
    if bad:
        raise EdgeCountViolation(
            "edge labels must appear exactly twice; offending: "
            + ", ".join(f"{lab}x{counts[lab]}" for lab in bad)
        )
    if basepoint is not None and basepoint not in counts:
        raise DiagramError(f"basepoint {basepoint} is not an edge label")
    d_to_b = _infer_over_directions(tuples)
    signs = [1 if v else -1 for v in d_to_b]
    diagram, relabel = _assemble(tuples, signs, basepoint=basepoint)
    flip = sorted(set(flip))
    if not flip:
        return diagram
    for k in flip:
        diagram._check_component(k)
    return _flip_components(diagram, flip)


def _flip_components(d: Diagram, flip: Sequence[int]) -> Diagram:
    comp = d.edge_component
    flipped = set(flip)
    tuples = []
    signs = []
    for (a, b, c, e), sign in zip(d.crossings, d.signs):
        under_flip = comp[a] in flipped
        over_flip = comp[b] in flipped
        tup = (c, e, a, b) if under_flip else (a, b, c, e)
        signs.append(sign * (-1 if under_flip != over_flip else 1))
        tuples.append(tup)
    loops = list(range(2 * d.n_crossings, d.n_edges))
    out, _ = _assemble(tuples, signs, loops, d.basepoint)
    return out


def to_pd(d: Diagram) -> str:
    """Serialize to PD text with 1-based labels."""
    if d.loops:
        raise DiagramError("crossingless loops cannot be written as PD code")
    if not d.crossings:
        raise DiagramError("the crossingless unknot has no PD code")
    return " ".join("X({},{},{},{})".format(*(e + 1 for e in tup)) for tup in d.crossings)


# --------------------------------------------------------------------------
# braids


def parse_braid(word: BraidWord | Sequence[int], strands: int | None = None) -> Diagram:
    """Diagram of the closure of a braid word.

    Strands run upwards; generator ``k > 0`` crosses positions ``k-1`` and
    ``k`` (0-based) with the strand moving right passing over, which makes
    it a positive crossing.
    """
    if not isinstance(word, BraidWord):
        if strands is None:
            strands = max((abs(k) for k in word), default=0) + 1
        word = BraidWord(strands, tuple(word))
    s = word.strands
    start = list(range(s))
    cur = list(range(s))
    nxt = s
    tuples: list[list[int]] = []
    signs: list[int] = []
    for k in word.letters:
        i = abs(k) - 1
        in_l, in_r = cur[i], cur[i + 1]
        out_l, out_r = nxt, nxt + 1
        nxt += 2
        if k > 0:
            tuples.append([in_r, out_r, out_l, in_l])
        else:
            tuples.append([in_l, in_r, out_r, out_l])
        signs.append(1 if k > 0 else -1)
        cur[i], cur[i + 1] = out_l, out_r
    close = {cur[p]: start[p] for p in range(s) if cur[p] != start[p]}
    tuples = [[close.get(lab, lab) for lab in tup] for tup in tuples]
    loops = [start[p] for p in range(s) if cur[p] == start[p]]
    # loop labels must not collide with surviving crossing labels
    loops = [nxt + i for i, _ in enumerate(loops)]
    d, _ = _assemble(tuples, signs, loops)
    return d


def parse_braid_text(text: str, strands: int | None = None) -> Diagram:
    """Parse a space-separated signed braid word such as ``"1 1 -2 1"``."""
    try:
        letters = tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError as exc:
        raise MalformedSyntax(f"braid word must be signed integers: {text!r}") from exc
    if strands is None:
        strands = max((abs(k) for k in letters), default=0) + 1
    return parse_braid(BraidWord(strands, letters))


def braid_permutation(word: BraidWord) -> list[int]:
    """Where the strand starting at each bottom position ends up."""
    pos = list(range(word.strands))  # pos[strand] = position
    at = list(range(word.strands))  # at[position] = strand
    for k in word.letters:
        i = abs(k) - 1
        a, b = at[i], at[i + 1]
        at[i], at[i + 1] = b, a
        pos[a], pos[b] = i + 1, i
    return pos


# --------------------------------------------------------------------------
# built-in table

_BUILTIN_BRAIDS: dict[str, tuple[int, tuple[int, ...]]] = {
    "unknot": (1, ()),
    "unknot_kink_pos": (2, (1,)),
    "unknot_kink_neg": (2, (-1,)),
    "trefoil_rh": (2, (1, 1, 1)),
    "trefoil_lh": (2, (-1, -1, -1)),
    "figure8": (3, (1, -2, 1, -2)),
    "t2_4": (2, (1, 1, 1, 1)),
    "hopf_pos": (2, (1, 1)),
}

BUILTIN_NAMES: tuple[str, ...] = tuple(_BUILTIN_BRAIDS)


def builtin(name: str) -> Diagram:
    """One of the built-in diagrams; all are braid closures.

    ============== ===================== =========
    name           braid                 crossings
    ============== ===================== =========
    unknot         empty word, 1 strand  0
    unknot_kink_*  s1^(+-1), 2 strands   1
    trefoil_rh/lh  s1^(+-3)              3
    figure8        s1 s2^-1 s1 s2^-1     4
    t2_4           s1^4                  4
    hopf_pos       s1^2                  2
    ============== ===================== =========
    """
    try:
        strands, letters = _BUILTIN_BRAIDS[name]
    except KeyError:
        raise UnknownName(
            f"unknown diagram {name!r}; choose from {', '.join(BUILTIN_NAMES)}"
        ) from None
    return parse_braid(BraidWord(strands, letters))


# --------------------------------------------------------------------------
# invariants of the diagram


def writhe(d: Diagram) -> int:
    return sum(d.signs)


def self_writhe(d: Diagram, component: int) -> int:
    d._check_component(component)
    total = 0
    for x, sign in enumerate(d.signs):
        under, over = d.strand_components(x)
        if under == over == component:
            total += sign
    return total


def linking_number(d: Diagram, c1: int, c2: int) -> float:
    """Half the signed count of crossings between two distinct components."""
    d._check_component(c1)
    d._check_component(c2)
    total = 0
    for x, sign in enumerate(d.signs):
        if set(d.strand_components(x)) == {c1, c2} and c1 != c2:
            total += sign
    return total / 2


def mirror(d: Diagram) -> Diagram:
    """Swap over and under at every crossing; labels and orientation are kept."""
    crossings = tuple(
        (e, a, b, c) if sign > 0 else (b, c, e, a)
        for (a, b, c, e), sign in zip(d.crossings, d.signs)
    )
    signs = tuple(-s for s in d.signs)
    return replace(d, crossings=crossings, signs=signs)


# --------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    ok: bool
    problems: list[DiagramError]
    n_components: int | None = None
    writhe: int | None = None
    signs: tuple[int, ...] | None = None

    def raise_for_problems(self) -> None:
        if self.problems:
            raise self.problems[0]


def validate(d: Diagram | Sequence[Sequence[int]]) -> ValidationReport:
    """Check every diagram invariant, collecting all violations.

    Accepts a :class:`Diagram` or raw PD tuples (which are then run through
    orientation inference).
    """
    if not isinstance(d, Diagram):
        try:
            d = from_pd(d)
        except DiagramError as exc:
            return ValidationReport(False, [exc])
    problems: list[DiagramError] = []
    n2 = 2 * d.n_crossings
    if len(d.signs) != d.n_crossings or any(s not in (1, -1) for s in d.signs):
        problems.append(DiagramError("sign vector must hold one +-1 per crossing"))
    counts = Counter(lab for tup in d.crossings for lab in tup)
    wrong = sorted(lab for lab, k in counts.items() if k != 2)
    missing = sorted(set(range(n2)) - set(counts))
    stray = sorted(lab for lab in counts if not 0 <= lab < n2)
    if wrong or missing or stray:
        problems.append(
            EdgeCountViolation(
                f"edge multiplicity violated (count != 2: {wrong}, missing: {missing}, "
                f"out of range: {stray})"
            )
        )
    if not problems:
        heads: Counter[int] = Counter()
        for lab, _, _, head in _heads(d.crossings, d.signs):
            heads[lab] += head
        bad = sorted(lab for lab in range(n2) if heads[lab] != 1)
        if bad:
            problems.append(NonOrientable(f"edges without one head and one tail: {bad}"))
        else:
            succ = _successors(d.crossings, d.signs)
            comp = d.edge_component
            if any(comp[succ[e]] != comp[e] for e in range(n2)):
                problems.append(DiagramError("component partition is not closed under succession"))
    if d.loops < 0:
        problems.append(DiagramError("negative loop count"))
    for e in d.basepoints:
        if not 0 <= e < d.n_edges:
            problems.append(DiagramError(f"basepoint {e} is not an edge"))
    if d.marks and d.basepoint is None:
        problems.append(DiagramError("marks given without a basepoint"))
    if problems:
        return ValidationReport(False, problems)
    return ValidationReport(True, [], d.n_components, writhe(d), d.signs)
