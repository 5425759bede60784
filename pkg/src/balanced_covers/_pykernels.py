"""Pure-Python exact integer kernels.

Every routine takes and returns plain Python ints (lists of lists for
matrices) and never rounds. The compiled module ``_ckernels`` exposes the
same functions with an int64 fast path; this module is both the fallback
and the reference the compiled code is tested against.
"""
from __future__ import annotations

from math import gcd

__all__ = ["det", "solve", "rank", "phase_one", "smith_diagonal"]


def det(matrix):
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly.

    Returns ``(den, nums)`` with ``x[i] = nums[i] / den`` and ``den > 0``,
    or ``(0, None)`` when the matrix is singular. Uses fraction-free
    Gauss-Jordan elimination, so every intermediate stays integral.
    """
    n = len(matrix)
    a = [list(row) + [b] for row, b in zip(matrix, rhs)]
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                return 0, None
        p = a[k][k]
        rowk = a[k]
        for i in range(n):
            if i == k:
                continue
            rowi = a[i]
            aik = rowi[k]
            for j in range(n + 1):
                if j != k:
                    rowi[j] = (rowi[j] * p - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = p
    # every diagonal entry now equals the last pivot
    den = prev
    nums = [a[i][n] for i in range(n)]
    if den < 0:
        den = -den
        nums = [-x for x in nums]
    return den, nums


def rank(matrix):
    """Rank of an integer matrix (any shape) by fraction-free elimination."""
    a = [list(row) for row in matrix]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        rowr = a[r]
        for i in range(r + 1, nrows):
            rowi = a[i]
            aic = rowi[c]
            for j in range(c + 1, ncols):
                rowi[j] = (rowi[j] * p - aic * rowr[j]) // prev
            rowi[c] = 0
        prev = p
        r += 1
    return r


def phase_one(a, b):
    """Decide feasibility of ``a @ x = b, x >= 0`` over the integers' field.

    Integer-pivoting phase-one simplex with Bland's rule. Returns
    ``(True, den, nums)`` where ``x[j] = nums[j] / den`` is a basic feasible
    solution, or ``(False, 0, y)`` with an integer Farkas vector ``y``
    satisfying ``y @ a <= 0`` componentwise and ``y @ b > 0``.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    flip = [(-1 if bi < 0 else 1) for bi in b]
    width = n + m + 1
    rhs = n + m
    tab = []
    for i in range(m):
        s = flip[i]
        row = [s * v for v in a[i]] + [0] * m + [s * b[i]]
        row[n + i] = 1
        tab.append(row)
    cost = [0] * width
    for row in tab:
        for j in range(n):
            cost[j] -= row[j]
        cost[rhs] -= row[rhs]
    basis = [n + i for i in range(m)]
    den = 1
    while True:
        enter = -1
        for j in range(n + m):
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        for i in range(m):
            tij = tab[i][enter]
            if tij <= 0:
                continue
            if leave < 0:
                leave = i
                continue
            # compare rhs_i / t_ij against rhs_leave / t_leave_j
            lhs = tab[i][rhs] * tab[leave][enter]
            cur = tab[leave][rhs] * tij
            if lhs < cur or (lhs == cur and basis[i] < basis[leave]):
                leave = i
        if leave < 0:
            # phase one is bounded below by zero; unreachable
            raise ArithmeticError("phase-one simplex reported unbounded")
        p = tab[leave][enter]
        prow = tab[leave]
        for i in range(m):
            if i == leave:
                continue
            row = tab[i]
            f = row[enter]
            if f == 0:
                for j in range(width):
                    row[j] = row[j] * p // den
            else:
                for j in range(width):
                    row[j] = (row[j] * p - f * prow[j]) // den
        f = cost[enter]
        for j in range(width):
            cost[j] = (cost[j] * p - f * prow[j]) // den
        den = p
        basis[leave] = enter
    if cost[rhs] == 0:
        nums = [0] * n
        for i in range(m):
            if basis[i] < n:
                nums[basis[i]] = tab[i][rhs]
        g = den
        for v in nums:
            g = gcd(g, v)
        return True, den // g, [v // g for v in nums]
    y = [(den - cost[n + i]) * flip[i] for i in range(m)]
    g = 0
    for v in y:
        g = gcd(g, v)
    if g > 1:
        y = [v // g for v in y]
    return False, 0, y


def smith_diagonal(matrix):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns the absolute values of the nonzero diagonal entries, in pivot
    order and without the divisibility normalization. Works on a sparse
    row/column representation and always pivots on an entry of smallest
    magnitude.
    """
    rows = {}
    cols = {}
    for i, row in enumerate(matrix):
        for j, v in enumerate(row):
            if v:
                rows.setdefault(i, {})[j] = v
                cols.setdefault(j, set()).add(i)
    return _sparse_diagonal(rows, cols)


def smith_diagonal_sparse(entries, nrows, ncols):
    """Same as :func:`smith_diagonal` for a ``{(i, j): value}`` mapping."""
    rows = {}
    cols = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
    return _sparse_diagonal(rows, cols)


def _row_axpy(rows, cols, dst, src, q):
    # row[dst] -= q * row[src]
    rd = rows[dst]
    for j, v in rows[src].items():
        nv = rd.get(j, 0) - q * v
        if nv:
            if j not in rd:
                cols[j].add(dst)
            rd[j] = nv
        elif j in rd:
            del rd[j]
            cols[j].discard(dst)
    if not rd:
        del rows[dst]


def _col_axpy(rows, cols, dst, src, q):
    # col[dst] -= q * col[src]
    for i in list(cols[src]):
        ri = rows[i]
        nv = ri.get(dst, 0) - q * ri[src]
        if nv:
            if dst not in ri:
                cols.setdefault(dst, set()).add(i)
            ri[dst] = nv
        elif dst in ri:
            del ri[dst]
            cols[dst].discard(i)
    if dst in cols and not cols[dst]:
        del cols[dst]


def _pick_pivot(rows):
    best = None
    bestv = 0
    for i, ri in rows.items():
        for j, v in ri.items():
            av = v if v > 0 else -v
            if av == 1:
                return i, j
            if best is None or av < bestv:
                best, bestv = (i, j), av
    return best


def _sparse_diagonal(rows, cols):
    diag = []
    while rows:
        r, c = _pick_pivot(rows)
        while True:
            p = rows[r][c]
            # clear column c with row operations
            clean = True
            for i in list(cols[c]):
                if i == r:
                    continue
                q = rows[i][c] // p
                if q:
                    _row_axpy(rows, cols, i, r, q)
                if i in rows and c in rows[i]:
                    clean = False
            if cols.get(c) and not clean:
                r, c = _pick_in(rows, cols, c, r, by_col=True)
                continue
            # clear row r with column operations (column c holds only row r)
            for j in list(rows[r]):
                if j == c:
                    continue
                q = rows[r][j] // p
                if q:
                    _col_axpy(rows, cols, j, c, q)
                if j in rows[r]:
                    clean = False
            if not clean:
                r, c = _pick_in(rows, cols, r, c, by_col=False)
                continue
            break
        p = rows[r][c]
        diag.append(p if p > 0 else -p)
        del rows[r]
        cols[c].discard(r)
        if not cols[c]:
            del cols[c]
    return diag


def _pick_in(rows, cols, line, other, by_col):
    # smallest-magnitude entry in a column (by_col) or row
    if by_col:
        c = line
        i = min(cols[c], key=lambda k: abs(rows[k][c]))
        return i, c
    r = line
    j = min(rows[r], key=lambda k: abs(rows[r][k]))
    return r, j
