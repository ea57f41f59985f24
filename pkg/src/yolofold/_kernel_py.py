"""Pure-Python greedy fold-assignment kernel.

Reference implementation of the iterative stratification step; the
compiled kernel in _speedups.pyx is a line-for-line transliteration.
Both must perform the same IEEE-754 operations in the same order so a
given (labels, k, order, tie_seed) yields the identical assignment on
either backend. Keep every loop, comparison and update in sync with the
.pyx file when editing.

Procedure: labels are treated as non-negative per-fold masses. Each
unprocessed label column with positive remaining mass is handled in
increasing order of that mass; every still-unassigned image carrying the
label goes to the fold with the greatest remaining demand for it, ties
broken by fewest images already in the fold, then by a SplitMix64 draw.
Images whose rows are entirely zero are assigned afterwards to the
currently smallest fold.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1

BACKEND = "pure-python"


def assign_stratified(labels, k: int, order, tie_seed: int) -> list[int]:
    """Assign each image to a fold; returns fold index per image.

    labels: n x L nested sequence of non-negative floats.
    order: visit order over image indices (seeded shuffle, caller-made).
    tie_seed: SplitMix64 state for tie-break draws.
    """
    rows = [list(map(float, row)) for row in labels]
    n = len(rows)
    n_labels = len(rows[0]) if n else 0

    col_total = [0.0] * n_labels
    for i in range(n):
        row = rows[i]
        for lbl in range(n_labels):
            col_total[lbl] += row[lbl]

    demand = [[col_total[lbl] / k for lbl in range(n_labels)] for _ in range(k)]
    remaining = list(col_total)
    used = [0] * k
    assigned = [-1] * n
    processed = [False] * n_labels
    state = tie_seed & _MASK64

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
            i = order[pos]
            if assigned[i] != -1:
                continue
            row = rows[i]
            if row[sel] <= 0.0:
                continue

            best_demand = demand[0][sel]
            for f in range(1, k):
                if demand[f][sel] > best_demand:
                    best_demand = demand[f][sel]
            best_used = -1
            for f in range(k):
                if demand[f][sel] == best_demand and (best_used == -1 or used[f] < best_used):
                    best_used = used[f]
            ties = [f for f in range(k)
                    if demand[f][sel] == best_demand and used[f] == best_used]
            if len(ties) == 1:
                fold = ties[0]
            else:
                state = (state + 0x9E3779B97F4A7C15) & _MASK64
                z = state
                z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
                z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
                z ^= z >> 31
                fold = ties[z % len(ties)]

            fold_demand = demand[fold]
            for lbl in range(n_labels):
                value = row[lbl]
                fold_demand[lbl] -= value
                remaining[lbl] -= value
            used[fold] += 1
            assigned[i] = fold

        processed[sel] = True

    # all-zero rows: keep sizes balanced, smallest fold first
    for pos in range(n):
        i = order[pos]
        if assigned[i] != -1:
            continue
        fold = 0
        for f in range(1, k):
            if used[f] < used[fold]:
                fold = f
        assigned[i] = fold
        used[fold] += 1

    return assigned
