# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled greedy best-pair matching kernel.

Semantics are identical to :mod:`tagrec._greedy_pure`: repeatedly take the
matrix maximum (first occurrence in row-major order on ties), retire its
row and column, and accumulate.

Each row caches its running maximum (value and first column attaining
it), so a round costs O(rows) plus a rescan of only the rows whose cached
best sat in the retired column.  Picking the first live row whose cached
value equals the global maximum reproduces the row-major tie-break of a
full scan exactly.
"""

from libc.stdlib cimport calloc, free, malloc


def greedy_match(const double[:, ::1] sim):
    """Return ``(sum, counter)`` for min(rows, cols) greedy extraction rounds."""
    cdef Py_ssize_t n = sim.shape[0]
    cdef Py_ssize_t m = sim.shape[1]
    cdef Py_ssize_t rounds = n if n < m else m
    if rounds == 0:
        return 0.0, 0

    cdef unsigned char *row_dead = <unsigned char *> calloc(n, sizeof(unsigned char))
    cdef unsigned char *col_dead = <unsigned char *> calloc(m, sizeof(unsigned char))
    cdef double *best_val = <double *> malloc(n * sizeof(double))
    cdef Py_ssize_t *best_col = <Py_ssize_t *> malloc(n * sizeof(Py_ssize_t))
    if row_dead == NULL or col_dead == NULL or best_val == NULL or best_col == NULL:
        free(row_dead)
        free(col_dead)
        free(best_val)
        free(best_col)
        raise MemoryError()

    cdef double total = 0.0
    cdef double best, v
    cdef Py_ssize_t i, j, br, bc, r

    try:
        for i in range(n):
            best = -2.0
            bc = -1
            for j in range(m):
                v = sim[i, j]
                if v > best:
                    best = v
                    bc = j
            best_val[i] = best
            best_col[i] = bc

        for r in range(rounds):
            best = -2.0
            br = -1
            for i in range(n):
                if row_dead[i]:
                    continue
                if best_val[i] > best:
                    best = best_val[i]
                    br = i
            bc = best_col[br]
            total += best
            row_dead[br] = 1
            col_dead[bc] = 1

            for i in range(n):
                if row_dead[i] or best_col[i] != bc:
                    continue
                best = -2.0
                best_col[i] = -1
                for j in range(m):
                    if col_dead[j]:
                        continue
                    v = sim[i, j]
                    if v > best:
                        best = v
                        best_col[i] = j
                best_val[i] = best
    finally:
        free(row_dead)
        free(col_dead)
        free(best_val)
        free(best_col)

    return total, rounds
