"""Exact dense linear algebra over the scalar tower (fields only).

Vectors are lists of scalars; matrices are lists of row vectors.  Everything
runs fraction-exact, no pivot thresholds.  Division uses scalars.invert, so
rows over QQ, QQ(q), or the dual rings with invertible pivots all work.
"""

from __future__ import annotations

from .scalars import ScalarRing, invert


def rref(rows, ncols: int, ring: ScalarRing):
    """Reduced row echelon form.  Returns (rows, pivot_cols)."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = invert(mat[r][c])
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows, ncols: int, ring: ScalarRing) -> int:
    return len(rref(rows, ncols, ring)[0])


def reduce_mod(rref_rows, pivots, v, ring: ScalarRing):
    """Canonical representative of v modulo the row space."""
    out = list(v)
    for row, c in zip(rref_rows, pivots):
        f = out[c]
        if f:
            out = [a - f * b for a, b in zip(out, row)]
    return out


def nullspace(rows, ncols: int, ring: ScalarRing):
    """Basis of the right null space as a list of vectors."""
    rr, pivots = rref(rows, ncols, ring)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    one = ring.one()
    zero = ring.zero()
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for row, pc in zip(rr, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def solve_in_span(basis_vectors, v, ring: ScalarRing):
    """Coefficients expressing v in the given basis, or None.

    basis_vectors: list of vectors (all the same length)."""
    if not basis_vectors:
        return [] if not any(v) else None
    n = len(basis_vectors[0])
    # solve B^T x = v by eliminating the augmented system
    rows = [list(col) + [v[i]] for i, col in enumerate(zip(*basis_vectors))]
    rr, pivots = rref(rows, len(basis_vectors) + 1, ring)
    coeffs = [ring.zero()] * len(basis_vectors)
    for row, pc in zip(rr, pivots):
        if pc == len(basis_vectors):
            return None  # inconsistent
        coeffs[pc] = row[-1]
    return coeffs
