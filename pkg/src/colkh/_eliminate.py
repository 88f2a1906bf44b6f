"""Compiled Gaussian elimination of a chain complex over F2.

The complex is held as two adjacency structures (successors and
predecessors of every generator) stored in growable pools: list ``g``
occupies ``pool[start[g] : start[g] + size[g]]`` and is moved to the end of
the pool with doubled capacity when it overflows.  Cancelling an entry
``g -> h`` removes both generators and adds ``d(g)`` to every other
predecessor of ``h`` (the usual elimination lemma; no signs over F2).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _build_lists(n, a, b):
    """Adjacency lists of the relation a[k] -> b[k], with slack capacity."""
    size = np.zeros(n, np.int64)
    for k in range(a.shape[0]):
        size[a[k]] += 1
    cap = np.empty(n, np.int64)
    start = np.empty(n, np.int64)
    pos = 0
    for g in range(n):
        cap[g] = size[g] + 2
        start[g] = pos
        pos += cap[g]
    pool = np.empty(pos + pos // 2 + 16, np.int64)
    fill = np.zeros(n, np.int64)
    for k in range(a.shape[0]):
        g = a[k]
        pool[start[g] + fill[g]] = b[k]
        fill[g] += 1
    return pool, start, size, cap, pos


@njit(cache=True, nogil=True)
def _append(pool, start, size, cap, top, g, v):
    """Append v to list g; returns the (possibly reallocated) pool and new top."""
    if size[g] == cap[g]:
        newcap = cap[g] * 2 + 4
        if top + newcap > pool.shape[0]:
            live = 0
            for u in range(start.shape[0]):
                live += cap[u]
            grown = np.empty(max(pool.shape[0] * 2, live + newcap + 1024), np.int64)
            # compact every list into the new pool
            p = 0
            for u in range(start.shape[0]):
                s0 = start[u]
                for t in range(size[u]):
                    grown[p + t] = pool[s0 + t]
                start[u] = p
                p += cap[u]
            pool = grown
            top = p
        s0 = start[g]
        for t in range(size[g]):
            pool[top + t] = pool[s0 + t]
        start[g] = top
        cap[g] = newcap
        top += newcap
    pool[start[g] + size[g]] = v
    size[g] += 1
    return pool, top


@njit(cache=True, nogil=True)
def _remove(pool, start, size, g, v):
    s0 = start[g]
    n = size[g]
    for t in range(n):
        if pool[s0 + t] == v:
            pool[s0 + t] = pool[s0 + n - 1]
            size[g] = n - 1
            return True
    return False


@njit(cache=True, nogil=True)
def eliminate(n, src, dst, order, degrees):
    """Cancel differential entries until none remain.

    Generators are visited in ``order``; while the visited generator has a
    nonzero differential it is cancelled against the successor with the
    fewest predecessors.  Returns (alive mask, number of cancellations per
    source degree offset by ``degrees.min()``).
    """
    rpool, rstart, rsize, rcap, rtop = _build_lists(n, src, dst)
    cpool, cstart, csize, ccap, ctop = _build_lists(n, dst, src)
    alive = np.ones(n, np.bool_)
    mark = np.zeros(n, np.int64)
    stamp = 0
    dmin = degrees.min() if n else 0
    dmax = degrees.max() if n else 0
    ranks = np.zeros(dmax - dmin + 1, np.int64)
    buf = np.empty(16, np.int64)
    for idx in range(n):
        g = order[idx]
        while alive[g] and rsize[g] > 0:
            # pivot: successor with the fewest predecessors
            best = -1
            bestc = 1 << 62
            s0 = rstart[g]
            for t in range(rsize[g]):
                y = rpool[s0 + t]
                if csize[y] < bestc:
                    bestc = csize[y]
                    best = y
            h = best
            ranks[degrees[g] - dmin] += 1
            # snapshot d(g) minus h
            m = rsize[g] - 1
            if buf.shape[0] < m + 1:
                buf = np.empty(2 * m + 16, np.int64)
            k = 0
            for t in range(rsize[g]):
                y = rpool[s0 + t]
                if y != h:
                    buf[k] = y
                    k += 1
            # every other predecessor x of h: d(x) += d(g)
            for t in range(csize[h]):
                # re-read: appends below may compact the pools
                x = cpool[cstart[h] + t]
                if x == g:
                    continue
                stamp += 1
                xs = rstart[x]
                for u in range(rsize[x]):
                    mark[rpool[xs + u]] = stamp
                _remove(rpool, rstart, rsize, x, h)
                for u in range(k):
                    y = buf[u]
                    if mark[y] == stamp:
                        _remove(rpool, rstart, rsize, x, y)
                        _remove(cpool, cstart, csize, y, x)
                    else:
                        rpool, rtop = _append(rpool, rstart, rsize, rcap, rtop, x, y)
                        cpool, ctop = _append(cpool, cstart, csize, ccap, ctop, y, x)
            # detach g and h
            for u in range(k):
                _remove(cpool, cstart, csize, buf[u], g)
            c0 = cstart[g]
            for t in range(csize[g]):
                _remove(rpool, rstart, rsize, cpool[c0 + t], g)
            r0 = rstart[h]
            for t in range(rsize[h]):
                _remove(cpool, cstart, csize, rpool[r0 + t], h)
            alive[g] = False
            alive[h] = False
            rsize[g] = 0
            csize[g] = 0
            rsize[h] = 0
            csize[h] = 0
    return alive, ranks
