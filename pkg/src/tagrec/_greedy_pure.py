"""Numpy fallback for the greedy best-pair matching kernel.

Used when the compiled extension is unavailable.  Must stay bit-compatible
with :mod:`tagrec._greedy`: same selection order (first row-major maximum
on ties), same accumulation order.
"""

from __future__ import annotations

import numpy as np


def greedy_match(sim: np.ndarray) -> tuple[float, int]:
    """Return ``(sum, counter)`` for min(rows, cols) greedy extraction rounds."""
    n, m = sim.shape
    rounds = min(n, m)
    if rounds == 0:
        return 0.0, 0
    # Eliminated rows/columns are overwritten with -1, strictly below any
    # legal similarity, so they can never be re-selected.
    work = np.array(sim, dtype=np.float64, copy=True)
    total = 0.0
    for _ in range(rounds):
        flat = int(np.argmax(work))
        r, c = divmod(flat, m)
        total += float(work[r, c])
        work[r, :] = -1.0
        work[:, c] = -1.0
    return total, rounds
