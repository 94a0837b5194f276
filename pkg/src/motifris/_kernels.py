"""Jitted hot loops: batched cascade trials and reverse-reachable sampling.

Both kernels walk run-structured adjacency (per node, edges sorted by
descending probability with equal-probability runs marked). Within a run
the number of failed coins before the next success is geometric, so
failures are skipped in O(1) draws instead of one coin per edge; the
sampled edge set follows the same product distribution either way.

Kernels reseed numba's internal RNG, so a call is fully determined by its
arguments. Single-threaded on purpose: replayability beats parallelism
here.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(inline="always")
def _run_successes(indices, start, end, p, hits, nh):
    """Append indices of succeeding edges in [start, end) at probability p."""
    if p >= 1.0:
        for j in range(start, end):
            hits[nh] = indices[j]
            nh += 1
        return nh
    log_fail = np.log1p(-p)
    j = start
    while True:
        u01 = np.random.random()
        if u01 <= 0.0:
            break
        j += int(np.log(u01) / log_fail)
        if j >= end:
            break
        hits[nh] = indices[j]
        nh += 1
        j += 1
    return nh


@njit(cache=True)
def ic_trials(indptr, indices, run_ends, run_probs, runs_indptr, seeds, trials, seed):
    """Run `trials` independent cascades from `seeds`.

    Returns a (trials, n) boolean activation matrix. Each newly activated
    node gets one chance per out-edge; activation is irreversible and the
    cascade stops when a round adds nothing.
    """
    np.random.seed(seed)
    n = indptr.shape[0] - 1
    active = np.zeros((trials, n), dtype=np.bool_)
    frontier = np.empty(n, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    hits = np.empty(n, dtype=np.int32)
    for t in range(trials):
        row = active[t]
        fs = 0
        for i in range(seeds.shape[0]):
            s = seeds[i]
            if not row[s]:
                row[s] = True
                frontier[fs] = s
                fs += 1
        while fs > 0:
            ns = 0
            for i in range(fs):
                u = frontier[i]
                run_start = indptr[u]
                for ri in range(runs_indptr[u], runs_indptr[u + 1]):
                    nh = _run_successes(indices, run_start, run_ends[ri], run_probs[ri], hits, 0)
                    for h in range(nh):
                        v = hits[h]
                        if not row[v]:
                            row[v] = True
                            nxt[ns] = v
                            ns += 1
                    run_start = run_ends[ri]
            tmp = frontier
            frontier = nxt
            nxt = tmp
            fs = ns
    return active


@njit(cache=True)
def rr_samples(indptr, indices, run_ends, run_probs, runs_indptr, roots, seed):
    """Sample one reverse-reachable set per root via probabilistic reverse BFS.

    A node joins a sample at most once, so every in-edge is examined at most
    once per sample. Returns (members_flat, offsets) in CSR layout: sample s
    occupies members_flat[offsets[s]:offsets[s+1]], root first.
    """
    np.random.seed(seed)
    n = indptr.shape[0] - 1
    count = roots.shape[0]
    cap = 4 * count + 16
    flat = np.empty(cap, dtype=np.int32)
    offsets = np.empty(count + 1, dtype=np.int64)
    seen = np.full(n, -1, dtype=np.int64)  # sample id that last reached each node
    queue = np.empty(n, dtype=np.int64)
    hits = np.empty(n, dtype=np.int32)
    pos = 0
    for s in range(count):
        offsets[s] = pos
        root = roots[s]
        seen[root] = s
        queue[0] = root
        qh, qt = 0, 1
        if pos == cap:
            cap *= 2
            grown = np.empty(cap, dtype=np.int32)
            grown[:pos] = flat[:pos]
            flat = grown
        flat[pos] = root
        pos += 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            run_start = indptr[u]
            for ri in range(runs_indptr[u], runs_indptr[u + 1]):
                nh = _run_successes(indices, run_start, run_ends[ri], run_probs[ri], hits, 0)
                for h in range(nh):
                    w = hits[h]
                    if seen[w] != s:
                        seen[w] = s
                        queue[qt] = w
                        qt += 1
                        if pos == cap:
                            cap *= 2
                            grown = np.empty(cap, dtype=np.int32)
                            grown[:pos] = flat[:pos]
                            flat = grown
                        flat[pos] = w
                        pos += 1
                run_start = run_ends[ri]
    offsets[count] = pos
    return flat[:pos].copy(), offsets
