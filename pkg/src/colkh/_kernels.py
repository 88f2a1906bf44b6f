"""Compiled inner loops for the cube of resolutions.

A generator of the complex is a pair (state, labels): bit k of ``state``
is the smoothing at crossing k and bit q of ``labels`` is 1 when circle q
carries ``x`` (0 means ``1``).  Within one quantum grading the generators
are stored state-major with labels ascending, so ``offsets[s]`` delimits
the labels belonging to state ``s``.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@njit(cache=True, nogil=True)
def resolve_all(X, n_edges):
    """Circle of every edge, circle count and a representative edge per circle, for all states."""
    c = X.shape[0]
    n_states = 1 << c
    circ = np.empty((n_states, n_edges), np.uint8)
    rep = np.zeros((n_states, n_edges), np.uint8)
    ncirc = np.empty(n_states, np.uint8)
    parent = np.empty(n_edges, np.int64)
    label = np.empty(n_edges, np.int64)
    for s in range(n_states):
        for e in range(n_edges):
            parent[e] = e
            label[e] = -1
        for x in range(c):
            if (s >> x) & 1:
                p, q, u, v = X[x, 0], X[x, 3], X[x, 1], X[x, 2]
            else:
                p, q, u, v = X[x, 0], X[x, 1], X[x, 2], X[x, 3]
            rp = _find(parent, p)
            rq = _find(parent, q)
            if rp != rq:
                parent[rp] = rq
            ru = _find(parent, u)
            rv = _find(parent, v)
            if ru != rv:
                parent[ru] = rv
        k = 0
        for e in range(n_edges):
            r = _find(parent, e)
            if label[r] < 0:
                label[r] = k
                rep[s, k] = e
                k += 1
            circ[s, e] = label[r]
        ncirc[s] = k
    return circ, rep, ncirc


@njit(cache=True, nogil=True)
def _popcount(v):
    n = 0
    while v:
        v &= v - 1
        n += 1
    return n


@njit(cache=True, nogil=True)
def _binom_table(n):
    t = np.zeros((n + 1, n + 1), np.int64)
    for a in range(n + 1):
        t[a, 0] = 1
        for b in range(1, a + 1):
            t[a, b] = t[a - 1, b - 1] + t[a - 1, b]
    return t


@njit(cache=True, nogil=True)
def forced_masks(circ, marks):
    """Bitmask of the circles through the marked edges, per state; -1 when two marks share a circle."""
    n_states = circ.shape[0]
    out = np.zeros(n_states, np.int64)
    for s in range(n_states):
        m = np.int64(0)
        for t in range(marks.shape[0]):
            bit = np.int64(1) << circ[s, marks[t]]
            if m & bit:
                m = -1
                break
            m |= bit
        out[s] = m
    return out


@njit(cache=True, nogil=True)
def summand_counts(ncirc, forced, n_forced, shift, j):
    """Number of generators of quantum grading ``j`` in every state.

    Circles in ``forced[s]`` are pinned to ``x`` (a state with ``forced[s] < 0``
    has no generators).  ``shift`` is ``n_plus - 2 n_minus + n_forced``; the
    grading is ``m - 2 #x + r + shift`` for ``m`` circles and weight ``r``.
    """
    n_states = ncirc.shape[0]
    binom = _binom_table(64)
    counts = np.zeros(n_states, np.int64)
    for s in range(n_states):
        if forced[s] < 0:
            continue
        m = np.int64(ncirc[s])
        num = m + _popcount(s) + shift - j
        if num % 2 != 0:
            continue
        kx = num // 2 - n_forced
        if 0 <= kx <= m - n_forced:
            counts[s] = binom[m - n_forced, kx]
    return counts


@njit(cache=True, nogil=True)
def summand_labels(ncirc, forced, n_forced, shift, j, offsets):
    """Fill the sorted label lists of every state (see :func:`summand_counts`)."""
    n_states = ncirc.shape[0]
    labels = np.empty(offsets[n_states], np.int64)
    states = np.empty(offsets[n_states], np.int64)
    for s in range(n_states):
        lo = offsets[s]
        hi = offsets[s + 1]
        if lo == hi:
            continue
        m = np.int64(ncirc[s])
        k = (m + _popcount(s) + shift - j) // 2 - n_forced
        pin = forced[s]
        v = (np.int64(1) << k) - 1
        for g in range(lo, hi):
            # spread the free subset v over the unpinned circles
            lab = pin
            w = v
            for q in range(m):
                if (pin >> q) & 1:
                    continue
                if w & 1:
                    lab |= np.int64(1) << q
                w >>= 1
            labels[g] = lab
            states[g] = s
            if v == 0:
                break
            # next subset of the same size (Gosper)
            cbit = v & -v
            r = v + cbit
            v = (((r ^ v) >> 2) // cbit) | r
    return labels, states


@njit(cache=True, nogil=True)
def _lookup(labels, lo, hi, key):
    while lo < hi:
        mid = (lo + hi) >> 1
        if labels[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, nogil=True)
def _targets(X, circ, rep, ncirc, s, L, k, out):
    """Labels of the images of (s, L) along crossing k; returns how many (0, 1 or 2)."""
    t = s | (np.int64(1) << k)
    a = X[k, 0]
    cc = X[k, 2]
    A = np.int64(circ[s, a])
    B = np.int64(circ[s, cc])
    base = np.int64(0)
    for q in range(ncirc[s]):
        if q == A or q == B:
            continue
        if (L >> q) & 1:
            base |= np.int64(1) << circ[t, rep[s, q]]
    if A != B:
        la = (L >> A) & 1
        lb = (L >> B) & 1
        if la and lb:
            return 0
        out[0] = base | ((la | lb) << circ[t, a])
        return 1
    A2 = np.int64(circ[t, a])
    B2 = np.int64(circ[t, cc])
    if (L >> A) & 1:
        out[0] = base | (np.int64(1) << A2) | (np.int64(1) << B2)
        return 1
    out[0] = base | (np.int64(1) << A2)
    out[1] = base | (np.int64(1) << B2)
    return 2


@njit(cache=True, nogil=True)
def summand_edges(X, circ, rep, ncirc, offsets, labels, states):
    """All differential entries (source index, target index) of one quantum grading."""
    c = X.shape[0]
    n = labels.shape[0]
    out = np.empty(2, np.int64)
    total = 0
    for g in range(n):
        s = states[g]
        for k in range(c):
            if not (s >> k) & 1:
                total += _targets(X, circ, rep, ncirc, s, labels[g], k, out)
    src = np.empty(total, np.int64)
    dst = np.empty(total, np.int64)
    pos = 0
    for g in range(n):
        s = states[g]
        for k in range(c):
            if (s >> k) & 1:
                continue
            t = s | (np.int64(1) << k)
            cnt = _targets(X, circ, rep, ncirc, s, labels[g], k, out)
            for u in range(cnt):
                h = _lookup(labels, offsets[t], offsets[t + 1], out[u])
                if h >= offsets[t + 1] or labels[h] != out[u]:
                    raise ValueError("differential target missing from its block")
                src[pos] = g
                dst[pos] = h
                pos += 1
    return src, dst
