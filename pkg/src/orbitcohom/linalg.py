"""Small exact linear algebra over Z2 or Q.

Matrices are lists of row tuples/lists of field elements.  Everything here
is Gaussian elimination on matrices that never exceed a handful of rows;
exactness matters, speed does not.
"""

from __future__ import annotations

from .fields import Field


def _clone(rows):
    return [list(r) for r in rows]


def rref(field: Field, rows):
    """Reduced row echelon form.  Returns (rref_rows, pivot_columns)."""
    mat = _clone(rows)
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != field.zero:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = field.inv(mat[r][c])
        mat[r] = [field.mul(inv, x) for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != field.zero:
                f = mat[i][c]
                mat[i] = [field.add(x, field.neg(field.mul(f, y))) for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(field: Field, rows) -> int:
    return len(rref(field, rows)[0])


def left_kernel(field: Field, rows):
    """Basis of {c : sum_i c_i * rows_i = 0}.

    This is the kernel of the map sending the i-th domain basis vector to
    rows[i].
    """
    n = len(rows)
    if n == 0:
        return []
    ncols = len(rows[0])
    # Augment with identity and eliminate; rows that reduce to zero in the
    # original block give kernel combinations in the augmented block.
    aug = [list(rows[i]) + [field.one if j == i else field.zero for j in range(n)] for i in range(n)]
    mat = _clone(aug)
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, n):
            if mat[i][c] != field.zero:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = field.inv(mat[r][c])
        mat[r] = [field.mul(inv, x) for x in mat[r]]
        for i in range(n):
            if i != r and mat[i][c] != field.zero:
                f = mat[i][c]
                mat[i] = [field.add(x, field.neg(field.mul(f, y))) for x, y in zip(mat[i], mat[r])]
        r += 1
        if r == n:
            break
    kernel = []
    for i in range(r, n):
        if all(x == field.zero for x in mat[i][:ncols]):
            kernel.append(tuple(mat[i][ncols:]))
    return kernel


def reduce_mod_span(field: Field, vec, basis_rref, pivots):
    """Reduce `vec` modulo the row space with the given rref basis."""
    v = list(vec)
    for row, p in zip(basis_rref, pivots):
        if v[p] != field.zero:
            f = v[p]
            v = [field.add(x, field.neg(field.mul(f, y))) for x, y in zip(v, row)]
    return tuple(v)


def independent_mod(field: Field, vectors, modulus_rows):
    """Subset of `vectors` forming a basis of span(vectors) mod span(modulus_rows).

    Returns the chosen representative vectors (reduced mod the modulus).
    """
    base, pivots = rref(field, modulus_rows)
    kept = []
    kept_rref: list = []
    kept_pivots: list = []
    for vec in vectors:
        v = reduce_mod_span(field, vec, base, pivots)
        v = reduce_mod_span(field, v, kept_rref, kept_pivots)
        if any(x != field.zero for x in v):
            # normalize and record for further reductions
            lead = next(i for i, x in enumerate(v) if x != field.zero)
            inv = field.inv(v[lead])
            norm = tuple(field.mul(inv, x) for x in v)
            kept.append(v)
            kept_rref.append(list(norm))
            kept_pivots.append(lead)
            # keep kept_rref in reduced form relative to each other
            for j in range(len(kept_rref) - 1):
                if kept_rref[j][lead] != field.zero:
                    f = kept_rref[j][lead]
                    kept_rref[j] = [
                        field.add(x, field.neg(field.mul(f, y)))
                        for x, y in zip(kept_rref[j], norm)
                    ]
    return kept
