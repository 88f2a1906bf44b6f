"""Bigraded Betti numbers over F2.

Each quantum grading ``j`` is an independent subcomplex.  :func:`betti`
reduces every one of them with the compiled elimination in
:mod:`colkh._eliminate`, which also yields the rank of each differential;
:func:`betti_bruteforce` is the dense oracle used to check it.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ._eliminate import eliminate
from .errors import InconsistentComplex, TooLarge
from .f2 import SparseF2Matrix, rank_f2, rank_f2_dense
from .khcube import ChainComplex, Summand
from .polynomial import LaurentPoly

__all__ = [
    "BettiTable",
    "SparseF2Matrix",
    "betti",
    "betti_bruteforce",
    "rank_f2",
    "simplify",
]

BRUTEFORCE_CAP = 4096
# summands up to this size get an explicit d∘d check before elimination
D_SQUARED_CHECK_MAX = 200_000


@dataclass(frozen=True)
class BettiTable:
    """Ranks of ``H^{i,j}``; zero entries are never stored."""

    entries: dict[tuple[int, int], int]
    provenance: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        clean = {}
        for (i, j), r in sorted(self.entries.items()):
            if r < 0:
                raise InconsistentComplex(f"negative rank {r} at ({i}, {j})")
            if r:
                clean[(int(i), int(j))] = int(r)
        object.__setattr__(self, "entries", clean)

    @property
    def total_rank(self) -> int:
        return sum(self.entries.values())

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries.get(ij, 0)

    def euler_characteristic(self) -> LaurentPoly:
        return LaurentPoly([(j, (-1) ** (i % 2) * r) for (i, j), r in self.entries.items()])

    def reflected(self) -> BettiTable:
        """The table with ``(i, j) -> (-i, -j)``, as expected for the mirror."""
        return BettiTable({(-i, -j): r for (i, j), r in self.entries.items()}, self.provenance)

    def rows(self) -> list[dict[str, int]]:
        return [{"i": i, "j": j, "rank": r} for (i, j), r in self.entries.items()]

    def format(self) -> str:
        """A plain text grid with ``i`` across and ``j`` down (highest first)."""
        if not self.entries:
            return "(zero)"
        i_vals = range(min(i for i, _ in self.entries), max(i for i, _ in self.entries) + 1)
        j_vals = sorted({j for _, j in self.entries}, reverse=True)
        width = max(3, max(len(str(v)) for v in self.entries.values()), *(len(str(i)) for i in i_vals))
        head = "j\\i".rjust(5) + "".join(str(i).rjust(width + 1) for i in i_vals)
        lines = [head]
        for j in j_vals:
            cells = (str(self[(i, j)] or ".").rjust(width + 1) for i in i_vals)
            lines.append(str(j).rjust(5) + "".join(cells))
        lines.append(f"total rank {self.total_rank}")
        return "\n".join(lines)


def _provenance(c: ChainComplex) -> dict:
    meta = dict(c.meta)
    meta["reduced"] = c.reduced
    return meta


def _check_d_squared(s: Summand) -> None:
    if not len(s.src):
        return
    d = sp.csr_matrix((np.ones(len(s.src), dtype=np.int64), (s.dst, s.src)), shape=(s.n, s.n))
    dd = d @ d
    if np.any(dd.data % 2):
        raise InconsistentComplex(f"d∘d is nonzero in quantum grading {s.j}")


def _reduce_summand(s: Summand, check: bool) -> tuple[dict[tuple[int, int], int], np.ndarray]:
    """Betti numbers of one quantum grading and the mask of surviving generators."""
    if s.n == 0:
        return {}, np.zeros(0, dtype=bool)
    if check and s.n <= D_SQUARED_CHECK_MAX:
        _check_d_squared(s)
    lo = int(s.degrees.min())
    alive, ranks = eliminate(s.n, s.src, s.dst, np.arange(s.n, dtype=np.int64), s.degrees)
    dims = np.bincount(s.degrees - lo, minlength=len(ranks))
    kept = np.bincount(s.degrees[alive] - lo, minlength=len(ranks))
    out = {}
    for k in range(len(ranks)):
        prev = ranks[k - 1] if k else 0
        h = int(dims[k] - ranks[k] - prev)
        if h < 0 or ranks[k] > dims[k] or h != kept[k]:
            # cancellation counts must match the survivors degree by degree
            raise InconsistentComplex(
                f"rank bookkeeping failed at i={k + lo}, j={s.j} (d∘d is probably nonzero)"
            )
        if h:
            out[(k + lo, s.j)] = h
    return out, alive


def _map_gradings(c: ChainComplex, fn, workers: int) -> list:
    js = c.quantum_gradings()
    if workers <= 1 or len(js) < 2:
        return [fn(j) for j in js]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, js))


def betti(c: ChainComplex, workers: int = 1, check: bool = True) -> BettiTable:
    """Bigraded ranks of ``H(c)`` over F2.

    ``rank H^{i,j} = dim C^{i,j} - rank d^{i,j} - rank d^{i-1,j}``, with the
    ranks read off a Gaussian elimination of each quantum grading.  The
    result does not depend on ``workers``.
    """

    def one(j: int) -> dict:
        return _reduce_summand(c.summand(j), check)[0]

    entries: dict[tuple[int, int], int] = {}
    for part in _map_gradings(c, one, workers):
        entries.update(part)
    return BettiTable(entries, _provenance(c))


def simplify(c: ChainComplex, workers: int = 1) -> ChainComplex:
    """Cancel differential entries until none are left.

    Over F2 every nonzero entry is a unit, so the result has zero
    differential and one generator per homology class.  Generator keys
    are those of the surviving generators of ``c``.
    """

    def one(j: int):
        s = c.summand(j)
        _, alive = _reduce_summand(s, True)
        return s.keys[alive], s.degrees[alive], j

    blocks: dict[tuple[int, int], np.ndarray] = {}
    for keys, degrees, j in _map_gradings(c, one, workers):
        for i in np.unique(degrees).tolist():
            blocks[(i, j)] = keys[degrees == i]
    return ChainComplex(blocks, {}, c.reduced, c.meta)


def betti_bruteforce(c: ChainComplex, cap: int = BRUTEFORCE_CAP) -> BettiTable:
    """Dense row reduction of every differential block; no simplification."""
    if c.n_generators > cap:
        raise TooLarge(f"{c.n_generators} generators exceed the brute-force cap of {cap}")
    ranks: dict[tuple[int, int], int] = {}
    for i, j in c.gradings():
        d = c.differential(i, j)
        ranks[(i, j)] = rank_f2_dense(d.to_dense()) if d.nnz else 0
        if c.dim(i + 2, j) and d.nnz:
            dd = c.differential(i + 1, j).to_dense().astype(np.int64) @ d.to_dense()
            if np.any(dd % 2):
                raise InconsistentComplex(f"d∘d is nonzero at ({i}, {j})")
    entries = {
        (i, j): c.dim(i, j) - ranks[(i, j)] - ranks.get((i - 1, j), 0) for i, j in c.gradings()
    }
    return BettiTable(entries, _provenance(c))
