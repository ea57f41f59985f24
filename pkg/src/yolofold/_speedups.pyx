# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled greedy fold-assignment kernel.

Transliteration of _kernel_py.assign_stratified. The two backends must
stay operation-for-operation identical (same IEEE-754 double ops in the
same order, same SplitMix64 draws) so that assignments are bit-identical
whichever one is importable. Edit both together.
"""

import numpy as np

BACKEND = "compiled"

cdef unsigned long long _GAMMA = 0x9E3779B97F4A7C15ULL
cdef unsigned long long _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef unsigned long long _MIX2 = 0x94D049BB133111EBULL


def assign_stratified(labels, long long k, order, tie_seed) -> list:
    """Assign each image to a fold; returns fold index per image."""
    cdef double[:, ::1] rows = np.ascontiguousarray(labels, dtype=np.float64)
    cdef long long[::1] visit = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t n_labels = rows.shape[1]
    cdef unsigned long long state = <unsigned long long> (int(tie_seed) & 0xFFFFFFFFFFFFFFFF)

    cdef double[::1] col_total = np.zeros(n_labels, dtype=np.float64)
    cdef double[::1] remaining = np.zeros(n_labels, dtype=np.float64)
    cdef double[:, ::1] demand = np.zeros((k, n_labels), dtype=np.float64)
    cdef long long[::1] used = np.zeros(k, dtype=np.int64)
    cdef long long[::1] assigned = np.full(n, -1, dtype=np.int64)
    cdef char[::1] processed = np.zeros(n_labels, dtype=np.int8)
    cdef long long[::1] ties = np.zeros(k, dtype=np.int64)

    cdef Py_ssize_t i, pos, lbl, f, sel
    cdef long long fold, best_used, n_ties
    cdef double sel_weight, best_demand, value
    cdef unsigned long long z

    for i in range(n):
        for lbl in range(n_labels):
            col_total[lbl] += rows[i, lbl]

    for f in range(k):
        for lbl in range(n_labels):
            demand[f, lbl] = col_total[lbl] / k
    for lbl in range(n_labels):
        remaining[lbl] = col_total[lbl]

    while True:
        sel = -1
        sel_weight = 0.0
        for lbl in range(n_labels):
            if processed[lbl] or remaining[lbl] <= 0.0:
                continue
            if sel == -1 or remaining[lbl] < sel_weight:
                sel = lbl
                sel_weight = remaining[lbl]
        if sel == -1:
            break

        for pos in range(n):
            i = visit[pos]
            if assigned[i] != -1:
                continue
            if rows[i, sel] <= 0.0:
                continue

            best_demand = demand[0, sel]
            for f in range(1, k):
                if demand[f, sel] > best_demand:
                    best_demand = demand[f, sel]
            best_used = -1
            for f in range(k):
                if demand[f, sel] == best_demand and (best_used == -1 or used[f] < best_used):
                    best_used = used[f]
            n_ties = 0
            for f in range(k):
                if demand[f, sel] == best_demand and used[f] == best_used:
                    ties[n_ties] = f
                    n_ties += 1
            if n_ties == 1:
                fold = ties[0]
            else:
                state = state + _GAMMA
                z = state
                z = (z ^ (z >> 30)) * _MIX1
                z = (z ^ (z >> 27)) * _MIX2
                z = z ^ (z >> 31)
                fold = ties[z % (<unsigned long long> n_ties)]

            for lbl in range(n_labels):
                value = rows[i, lbl]
                demand[fold, lbl] -= value
                remaining[lbl] -= value
            used[fold] += 1
            assigned[i] = fold

        processed[sel] = 1

    for pos in range(n):
        i = visit[pos]
        if assigned[i] != -1:
            continue
        fold = 0
        for f in range(1, k):
            if used[f] < used[fold]:
                fold = f
        assigned[i] = fold
        used[fold] += 1

    return [assigned[i] for i in range(n)]
