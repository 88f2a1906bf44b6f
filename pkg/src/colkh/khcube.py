"""Cube of resolutions and the Khovanov chain complex over F2.

Conventions: the 0-smoothing of crossing ``(a, b, c, d)`` joins ``a-b`` and
``c-d``, the 1-smoothing joins ``a-d`` and ``b-c``.  For a state of weight
``r`` with circles labelled ``1``/``x``::

    i = r - n_minus
    j = (#1 - #x) + r + n_plus - 2 n_minus   (+1 per mark when reduced)

The reduced complex is the subcomplex in which the basepoint circle is
labelled ``x``; the shift puts the reduced unknot at ``j = 0``.  A diagram
may carry further marks (``Diagram.marks``).  The reduced complex then keeps
the states in which all marks lie on distinct circles, each pinned to ``x``.
Over F2 this is the image of the product of the basepoint actions
``X_p: C -> C``, hence a subcomplex.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from . import _kernels
from .diagram import Diagram
from .errors import BitAlreadyOne, CubeError, MissingBasepoint, ResourceLimit
from .f2 import SparseF2Matrix
from .polynomial import LaurentPoly

__all__ = [
    "ChainComplex",
    "CircleArrangement",
    "CubeComplex",
    "EdgeDescriptor",
    "EnhancedState",
    "ResolutionState",
    "Summand",
    "build_complex",
    "cube_edge",
    "smooth",
    "state_sum",
]

DEFAULT_MAX_CROSSINGS = 24


@dataclass(frozen=True)
class ResolutionState:
    bits: int
    n: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.n:
            raise CubeError(f"state {self.bits:b} does not fit in {self.n} bits")

    @property
    def weight(self) -> int:
        return self.bits.bit_count() if hasattr(int, "bit_count") else bin(self.bits).count("1")

    def __getitem__(self, k: int) -> int:
        return (self.bits >> k) & 1


@dataclass(frozen=True)
class CircleArrangement:
    circle_count: int
    circle_of_edge: tuple[int, ...]
    basepoint_circle: int | None = None

    def edges_of(self, circle: int) -> tuple[int, ...]:
        return tuple(e for e, q in enumerate(self.circle_of_edge) if q == circle)


@dataclass(frozen=True)
class EdgeDescriptor:
    """The cube edge ``source -> target`` obtained by changing crossing ``k`` to 1.

    ``inputs``/``outputs`` are the circles taking part: two inputs and one
    output for a merge, one input and two outputs for a split.
    ``circle_map`` sends every source circle to its target circle (both
    halves of a merge go to the merged circle; a split circle maps to the
    output containing the crossing's ``a`` edge).
    """

    kind: str
    crossing: int
    source: CircleArrangement
    target: CircleArrangement
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    circle_map: tuple[int, ...]


@dataclass(frozen=True)
class EnhancedState:
    state: int
    labels: int
    i: int
    j: int


def _as_bits(d: Diagram, s: ResolutionState | int) -> int:
    bits = s.bits if isinstance(s, ResolutionState) else int(s)
    n = s.n if isinstance(s, ResolutionState) else d.n_crossings
    if n != d.n_crossings or bits < 0 or bits >> d.n_crossings:
        raise CubeError(f"state does not match a {d.n_crossings}-crossing diagram")
    return bits


def smooth(d: Diagram, s: ResolutionState | int) -> CircleArrangement:
    """Circles of one complete resolution, via union-find over edge identifications."""
    bits = _as_bits(d, s)
    parent = list(range(d.n_edges))

    def find(e: int) -> int:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for k, (a, b, c, e) in enumerate(d.crossings):
        pairs = ((a, e), (b, c)) if (bits >> k) & 1 else ((a, b), (c, e))
        for p, q in pairs:
            parent[find(p)] = find(q)
    index: dict[int, int] = {}
    circle_of_edge = []
    for e in range(d.n_edges):
        circle_of_edge.append(index.setdefault(find(e), len(index)))
    bp = None if d.basepoint is None else circle_of_edge[d.basepoint]
    return CircleArrangement(len(index), tuple(circle_of_edge), bp)


def cube_edge(d: Diagram, s: ResolutionState | int, k: int) -> EdgeDescriptor:
    bits = _as_bits(d, s)
    if (bits >> k) & 1:
        raise BitAlreadyOne(f"bit {k} of state {bits:b} is already 1")
    src = smooth(d, bits)
    tgt = smooth(d, bits | (1 << k))
    a, _, c, _ = d.crossings[k]
    rep = {}
    for e, q in enumerate(src.circle_of_edge):
        rep.setdefault(q, e)
    circle_map = tuple(tgt.circle_of_edge[rep[q]] for q in range(src.circle_count))
    A, B = src.circle_of_edge[a], src.circle_of_edge[c]
    if A != B:
        return EdgeDescriptor("merge", k, src, tgt, (A, B), (tgt.circle_of_edge[a],), circle_map)
    return EdgeDescriptor(
        "split", k, src, tgt, (A,), (tgt.circle_of_edge[a], tgt.circle_of_edge[c]), circle_map
    )


def state_sum(d: Diagram, reduced: bool = False) -> LaurentPoly:
    """Graded Euler characteristic from circle counts alone (no differentials).

    Unreduced: sum over states of (-1)^(r-n_-) q^(r+n_+-2n_-) (q+q^-1)^circles.
    Reduced: each marked circle is pinned to ``x`` and its ``q^-1`` is
    cancelled by the shift, so it contributes 1; states in which two marks
    share a circle contribute nothing.  Without a basepoint, edge 0 is used.
    """
    marks = d.basepoints if reduced else ()
    if reduced and not marks and d.n_edges:
        marks = (0,)
    n_pos, n_neg = d.n_positive, d.n_negative
    q_plus_inv = LaurentPoly({1: 1, -1: 1})
    counts: dict[tuple[int, int], int] = {}
    for s in range(1 << d.n_crossings):
        arr = smooth(d, s)
        if len({arr.circle_of_edge[e] for e in marks}) < len(marks):
            continue
        r = bin(s).count("1")
        key = (r, arr.circle_count - len(marks))
        counts[key] = counts.get(key, 0) + 1
    total = LaurentPoly()
    for (r, free), mult in counts.items():
        sign = -1 if (r - n_neg) % 2 else 1
        total = total + LaurentPoly.monomial(r + n_pos - 2 * n_neg, sign * mult) * q_plus_inv**free
    return total


# --------------------------------------------------------------------------
# chain complexes


class ChainComplex:
    """A bigraded chain complex over F2 with explicit blocks.

    ``blocks[(i, j)]`` is an ordered array of generator keys and
    ``differentials[(i, j)]`` the matrix of ``C^{i,j} -> C^{i+1,j}`` with
    rows indexed by the target block and columns by the source block.
    """

    def __init__(
        self,
        blocks: dict[tuple[int, int], np.ndarray],
        differentials: dict[tuple[int, int], SparseF2Matrix] | None = None,
        reduced: bool = False,
        meta: dict | None = None,
    ):
        self._blocks = {k: np.asarray(v, dtype=np.int64) for k, v in blocks.items() if len(v)}
        self._diffs = dict(differentials or {})
        self.reduced = reduced
        self.meta = dict(meta or {})

    def gradings(self) -> list[tuple[int, int]]:
        return sorted(self._blocks)

    def quantum_gradings(self) -> list[int]:
        return sorted({j for _, j in self.gradings()})

    def dim(self, i: int, j: int) -> int:
        return len(self.block(i, j))

    @property
    def n_generators(self) -> int:
        return sum(self.dim(i, j) for i, j in self.gradings())

    def block(self, i: int, j: int) -> np.ndarray:
        return self._blocks.get((i, j), np.zeros(0, dtype=np.int64))

    def differential(self, i: int, j: int) -> SparseF2Matrix:
        m = self._diffs.get((i, j))
        if m is None:
            return SparseF2Matrix.zeros(self.dim(i + 1, j), self.dim(i, j))
        return m

    def euler_characteristic(self) -> LaurentPoly:
        return LaurentPoly([(j, (-1) ** (i % 2) * self.dim(i, j)) for i, j in self.gradings()])

    def check_d_squared(self) -> list[tuple[int, int]]:
        """Gradings ``(i, j)`` where ``d^{i+1,j} d^{i,j}`` is nonzero."""
        bad = []
        for i, j in self.gradings():
            if not self.dim(i + 2, j):
                continue
            if not (self.differential(i + 1, j) @ self.differential(i, j)).is_zero():
                bad.append((i, j))
        return bad

    def summand(self, j: int) -> Summand:
        """All generators of quantum grading ``j`` with their differential entries."""
        keys, degrees, src, dst = [], [], [], []
        offset = 0
        starts = {}
        for i, jj in self.gradings():
            if jj != j:
                continue
            starts[i] = offset
            keys.append(self.block(i, j))
            degrees.append(np.full(self.dim(i, j), i, dtype=np.int64))
            offset += self.dim(i, j)
        for i, start in starts.items():
            if i + 1 not in starts:
                continue
            m = self.differential(i, j)
            rows = np.repeat(np.arange(m.n_rows), np.diff(m.indptr))
            src.append(m.indices + start)
            dst.append(rows + starts[i + 1])
        cat = lambda parts: np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
        return Summand(j, cat(keys), cat(degrees), cat(src), cat(dst))


@dataclass
class Summand:
    """One quantum grading of a complex as flat arrays.

    ``src -> dst`` lists the differential entries as generator indices;
    each entry raises ``degrees`` by one.
    """

    j: int
    keys: np.ndarray
    degrees: np.ndarray
    src: np.ndarray
    dst: np.ndarray

    @property
    def n(self) -> int:
        return len(self.keys)


def pack_key(state: np.ndarray | int, labels: np.ndarray | int):
    """Generator key: state in the high 32 bits, labels in the low 32."""
    return (state << 32) | labels


def unpack_key(key: int) -> tuple[int, int]:
    return key >> 32, key & 0xFFFFFFFF


class CubeComplex(ChainComplex):
    """The Khovanov complex of a diagram, materialized one quantum grading at a time.

    Only the per-state circle data is computed eagerly (``2^c`` rows).  Blocks
    and differentials are generated from it on demand.
    """

    def __init__(self, d: Diagram, reduced: bool, meta: dict | None = None):
        self.diagram = d
        self.reduced = reduced
        self.meta = dict(meta or {})
        self.n_pos = d.n_positive
        self.n_neg = d.n_negative
        marks = d.basepoints if reduced else ()
        self.n_marks = len(marks)
        self.shift = self.n_pos - 2 * self.n_neg + self.n_marks
        X = np.array(d.crossings, dtype=np.int64).reshape(-1, 4)
        self._X = X
        self._circ, self._rep, self._ncirc = _kernels.resolve_all(X, d.n_edges)
        self._forced = _kernels.forced_masks(self._circ, np.array(marks, dtype=np.int64))
        self._cache: dict[int, tuple] = {}

    # -- dimensions without materializing generators

    @cached_property
    def _dims(self) -> dict[tuple[int, int], int]:
        live = self._forced >= 0
        if not live.any():
            return {}
        weights = _popcount(np.nonzero(live)[0])
        dims: dict[tuple[int, int], int] = {}
        pairs, mult = np.unique(
            np.stack([weights, self._ncirc[live].astype(np.int64)]), axis=1, return_counts=True
        )
        for (r, m), count in zip(pairs.T.tolist(), mult.tolist()):
            free = m - self.n_marks
            for ones in range(free + 1):
                n_x = free - ones + self.n_marks
                j = (m - n_x) - n_x + r + self.shift
                key = (r - self.n_neg, j)
                dims[key] = dims.get(key, 0) + count * comb(free, ones)
        return dims

    def gradings(self) -> list[tuple[int, int]]:
        return sorted(self._dims)

    def dim(self, i: int, j: int) -> int:
        return self._dims.get((i, j), 0)

    @property
    def n_generators(self) -> int:
        return sum(self._dims.values())

    def peak_summand_bytes(self) -> int:
        """Rough working set of the largest quantum grading during elimination.

        Assumes about c/2 differential entries per generator and ~56 bytes
        per entry (edge arrays plus both adjacency pools).
        """
        per_j: dict[int, int] = {}
        for (_, j), n in self._dims.items():
            per_j[j] = per_j.get(j, 0) + n
        peak = max(per_j.values(), default=0)
        c = self.diagram.n_crossings
        return int(peak * (48 + 28 * c))

    # -- materialization

    def _materialize(self, j: int):
        hit = self._cache.get(j)
        if hit is not None:
            return hit
        counts = _kernels.summand_counts(self._ncirc, self._forced, self.n_marks, self.shift, j)
        offsets = np.zeros(len(counts) + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        labels, states = _kernels.summand_labels(
            self._ncirc, self._forced, self.n_marks, self.shift, j, offsets
        )
        src, dst = _kernels.summand_edges(self._X, self._circ, self._rep, self._ncirc, offsets, labels, states)
        weights = _popcount(states)
        out = (states, labels, weights - self.n_neg, src, dst)
        self._cache = {j: out}
        return out

    def summand(self, j: int) -> Summand:
        states, labels, degrees, src, dst = self._materialize(j)
        return Summand(j, pack_key(states, labels), degrees, src, dst)

    def block(self, i: int, j: int) -> np.ndarray:
        if (i, j) not in self._dims:
            return np.zeros(0, dtype=np.int64)
        states, labels, degrees, _, _ = self._materialize(j)
        sel = degrees == i
        return pack_key(states[sel], labels[sel])

    def differential(self, i: int, j: int) -> SparseF2Matrix:
        states, labels, degrees, src, dst = self._materialize(j)
        sel_src = np.nonzero(degrees == i)[0]
        sel_dst = np.nonzero(degrees == i + 1)[0]
        if not len(sel_src) or not len(sel_dst):
            return SparseF2Matrix.zeros(len(sel_dst), len(sel_src))
        # summand order is state-major; restricting to a degree keeps it sorted
        pick = degrees[src] == i
        rows = np.searchsorted(sel_dst, dst[pick])
        cols = np.searchsorted(sel_src, src[pick])
        return SparseF2Matrix.from_coo(len(sel_dst), len(sel_src), rows, cols)

    def enhanced_states(self, i: int, j: int) -> list[EnhancedState]:
        return [EnhancedState(int(k >> 32), int(k & 0xFFFFFFFF), i, j) for k in self.block(i, j)]


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64)
    out = np.zeros(len(a), dtype=np.int64)
    while np.any(a):
        out += a & 1
        a >>= 1
    return out


def build_complex(
    d: Diagram,
    reduced: bool = False,
    colour: dict | None = None,
    max_crossings: int = DEFAULT_MAX_CROSSINGS,
) -> CubeComplex:
    """Khovanov complex of ``d`` over F2, reduced at the diagram's basepoint if requested."""
    if reduced and d.basepoint is None:
        raise MissingBasepoint("the reduced complex needs a diagram with a basepoint")
    if d.n_crossings > max_crossings:
        raise ResourceLimit(
            f"{d.n_crossings} crossings exceeds the configured cap of {max_crossings}"
        )
    cap = _memory_cap()
    if cap is not None:
        # circle tables: two uint8 rows of n_edges per state
        _check_memory((1 << d.n_crossings) * (2 * d.n_edges + 1), cap, "circle tables")
    meta = {"diagram": d.summary(), "colour": colour or {"n": 1}}
    c = CubeComplex(d, reduced, meta)
    if cap is not None:
        _check_memory(c.peak_summand_bytes(), cap, "the largest quantum grading")
    return c


def _memory_cap() -> float | None:
    cap = os.environ.get("KH_MAX_MEMORY_MB")
    return float(cap) if cap else None


def _check_memory(need: float, cap_mb: float, what: str) -> None:
    need_mb = need / 2**20
    if need_mb > cap_mb:
        raise ResourceLimit(f"~{need_mb:.0f} MB needed for {what}, above KH_MAX_MEMORY_MB={cap_mb:g}")
