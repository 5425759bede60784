# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact integer kernels.

Same signatures and results as :mod:`balanced_covers._pykernels`. Work is
done in int64 with checked multiply/subtract; any overflow (or an input that
does not fit) reruns the call through the arbitrary-precision Python code,
so results are always exact.
"""
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

from balanced_covers import _pykernels as _py

ctypedef long long i64

cdef extern from *:
    """
    #include <limits.h>
    static inline int bc_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int bc_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    bint bc_mul(i64 a, i64 b, i64 *r) nogil
    bint bc_sub(i64 a, i64 b, i64 *r) nogil
    i64 LLONG_MIN


cdef inline int _cross(i64 x, i64 p, i64 f, i64 y, i64 d, i64 *out) noexcept nogil:
    # out = (x*p - f*y) / d, exact division expected
    cdef i64 t1, t2, t3
    if bc_mul(x, p, &t1) or bc_mul(f, y, &t2) or bc_sub(t1, t2, &t3):
        return 1
    if t3 == LLONG_MIN:
        return 1
    out[0] = t3 / d
    return 0


cdef i64* _load(object rows, Py_ssize_t nr, Py_ssize_t nc, Py_ssize_t stride) except NULL:
    cdef i64* buf = <i64*> malloc(nr * stride * sizeof(i64))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j
    try:
        for i in range(nr):
            row = rows[i]
            for j in range(nc):
                buf[i * stride + j] = row[j]
            for j in range(nc, stride):
                buf[i * stride + j] = 0
    except OverflowError:
        free(buf)
        raise
    return buf


class _Overflow(Exception):
    pass


cdef i64 _det64(i64* a, Py_ssize_t n) except? -1:
    cdef Py_ssize_t i, j, k
    cdef i64 sign = 1, prev = 1, akk, aik, tmp, out
    for k in range(n - 1):
        if a[k * n + k] == 0:
            for i in range(k + 1, n):
                if a[i * n + k] != 0:
                    for j in range(n):
                        tmp = a[k * n + j]
                        a[k * n + j] = a[i * n + j]
                        a[i * n + j] = tmp
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k * n + k]
        for i in range(k + 1, n):
            aik = a[i * n + k]
            for j in range(k + 1, n):
                if _cross(a[i * n + j], akk, aik, a[k * n + j], prev, &out):
                    raise _Overflow()
                a[i * n + j] = out
        prev = akk
    return sign * a[(n - 1) * n + n - 1]


def det(matrix):
    """Determinant of a square integer matrix (Bareiss)."""
    cdef Py_ssize_t n = len(matrix)
    if n == 0:
        return 1
    cdef i64* a
    try:
        a = _load(matrix, n, n, n)
    except OverflowError:
        return _py.det(matrix)
    try:
        return _det64(a, n)
    except _Overflow:
        return _py.det(matrix)
    finally:
        free(a)


def solve(matrix, rhs):
    """Exact solve; returns ``(den, nums)`` or ``(0, None)`` if singular."""
    cdef Py_ssize_t n = len(matrix)
    cdef Py_ssize_t w = n + 1
    cdef Py_ssize_t i, j, k
    cdef i64 prev = 1, p, aik, tmp, out
    cdef i64* a
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    try:
        a = _load(aug, n, w, w)
    except OverflowError:
        return _py.solve(matrix, rhs)
    try:
        for k in range(n):
            if a[k * w + k] == 0:
                for i in range(k + 1, n):
                    if a[i * w + k] != 0:
                        for j in range(w):
                            tmp = a[k * w + j]
                            a[k * w + j] = a[i * w + j]
                            a[i * w + j] = tmp
                        break
                else:
                    return 0, None
            p = a[k * w + k]
            for i in range(n):
                if i == k:
                    continue
                aik = a[i * w + k]
                for j in range(w):
                    if j != k:
                        if _cross(a[i * w + j], p, aik, a[k * w + j], prev, &out):
                            raise _Overflow()
                        a[i * w + j] = out
                a[i * w + k] = 0
            prev = p
        nums = [a[i * w + n] for i in range(n)]
        if prev < 0:
            return -prev, [-x for x in nums]
        return prev, nums
    except _Overflow:
        return _py.solve(matrix, rhs)
    finally:
        free(a)


def rank(matrix):
    """Rank of an integer matrix."""
    cdef Py_ssize_t nr = len(matrix)
    if nr == 0:
        return 0
    cdef Py_ssize_t nc = len(matrix[0])
    cdef Py_ssize_t i, j, c, piv, r = 0
    cdef i64 prev = 1, p, aic, tmp, out
    cdef i64* a
    try:
        a = _load(matrix, nr, nc, nc)
    except OverflowError:
        return _py.rank(matrix)
    try:
        for c in range(nc):
            if r == nr:
                break
            piv = -1
            for i in range(r, nr):
                if a[i * nc + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(nc):
                    tmp = a[r * nc + j]
                    a[r * nc + j] = a[piv * nc + j]
                    a[piv * nc + j] = tmp
            p = a[r * nc + c]
            for i in range(r + 1, nr):
                aic = a[i * nc + c]
                for j in range(c + 1, nc):
                    if _cross(a[i * nc + j], p, aic, a[r * nc + j], prev, &out):
                        raise _Overflow()
                    a[i * nc + j] = out
                a[i * nc + c] = 0
            prev = p
            r += 1
        return r
    except _Overflow:
        return _py.rank(matrix)
    finally:
        free(a)


def phase_one(a, b):
    """Phase-one integer-pivoting simplex with Bland's rule.

    Returns ``(True, den, nums)`` or ``(False, 0, farkas_y)``; see the
    pure-Python version for the exact contract.
    """
    cdef Py_ssize_t m = len(a)
    cdef Py_ssize_t n = len(a[0]) if m else 0
    cdef Py_ssize_t width = n + m + 1
    cdef Py_ssize_t rhs = n + m
    cdef Py_ssize_t i, j, enter, leave
    cdef i64 den = 1, p, f, lhs, cur, out, tij
    cdef i64* t
    cdef i64* cost
    cdef Py_ssize_t* basis
    flip = [(-1 if bi < 0 else 1) for bi in b]
    rows = []
    for i in range(m):
        s = flip[i]
        row = [s * v for v in a[i]] + [0] * m + [s * b[i]]
        row[n + i] = 1
        rows.append(row)
    try:
        t = _load(rows, m, width, width)
    except OverflowError:
        return _py.phase_one(a, b)
    cost = <i64*> malloc(width * sizeof(i64))
    basis = <Py_ssize_t*> malloc(m * sizeof(Py_ssize_t))
    try:
        for j in range(width):
            cost[j] = 0
        for i in range(m):
            basis[i] = n + i
            for j in range(n):
                if bc_sub(cost[j], t[i * width + j], &out):
                    raise _Overflow()
                cost[j] = out
            if bc_sub(cost[rhs], t[i * width + rhs], &out):
                raise _Overflow()
            cost[rhs] = out
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
                tij = t[i * width + enter]
                if tij <= 0:
                    continue
                if leave < 0:
                    leave = i
                    continue
                if bc_mul(t[i * width + rhs], t[leave * width + enter], &lhs) or \
                        bc_mul(t[leave * width + rhs], tij, &cur):
                    raise _Overflow()
                if lhs < cur or (lhs == cur and basis[i] < basis[leave]):
                    leave = i
            if leave < 0:
                raise ArithmeticError("phase-one simplex reported unbounded")
            p = t[leave * width + enter]
            for i in range(m):
                if i == leave:
                    continue
                f = t[i * width + enter]
                for j in range(width):
                    if _cross(t[i * width + j], p, f, t[leave * width + j], den, &out):
                        raise _Overflow()
                    t[i * width + j] = out
            f = cost[enter]
            for j in range(width):
                if _cross(cost[j], p, f, t[leave * width + j], den, &out):
                    raise _Overflow()
                cost[j] = out
            den = p
            basis[leave] = enter
        if cost[rhs] == 0:
            nums = [0] * n
            for i in range(m):
                if basis[i] < n:
                    nums[basis[i]] = t[i * width + rhs]
            g = den
            for v in nums:
                g = _gcd(g, v)
            return True, den // g, [v // g for v in nums]
        y = [(den - cost[n + i]) * flip[i] for i in range(m)]
        g = 0
        for v in y:
            g = _gcd(g, v)
        if g > 1:
            y = [v // g for v in y]
        return False, 0, y
    except _Overflow:
        return _py.phase_one(a, b)
    finally:
        free(t)
        free(cost)
        free(basis)


def _gcd(a, b):
    a = abs(a)
    b = abs(b)
    while b:
        a, b = b, a % b
    return a


# dense limit for the int64 Smith diagonalization, in entries
DENSE_LIMIT = 4_000_000


def smith_diagonal(matrix):
    """Absolute nonzero diagonal after unimodular diagonalization."""
    cdef Py_ssize_t nr = len(matrix)
    if nr == 0:
        return []
    cdef Py_ssize_t nc = len(matrix[0])
    if nc == 0:
        return []
    if nr * nc > DENSE_LIMIT:
        return _py.smith_diagonal(matrix)
    cdef i64* a
    try:
        a = _load(matrix, nr, nc, nc)
    except OverflowError:
        return _py.smith_diagonal(matrix)
    try:
        return _dense_snf(a, nr, nc)
    except _Overflow:
        return _py.smith_diagonal(matrix)
    finally:
        free(a)


cdef inline i64 _abs(i64 x) noexcept nogil:
    return -x if x < 0 else x


cdef list _dense_snf(i64* a, Py_ssize_t nr, Py_ssize_t nc):
    # rows/cols already pivoted are excluded through the active flags
    cdef char* rowact = <char*> malloc(nr)
    cdef char* colact = <char*> malloc(nc)
    cdef Py_ssize_t i, j, r, c, k
    cdef i64 p, q, best, v, out
    cdef bint clean
    diag = []
    for i in range(nr):
        rowact[i] = 1
    for j in range(nc):
        colact[j] = 1
    try:
        while True:
            # global smallest nonzero among active entries
            r = -1
            c = -1
            best = 0
            for i in range(nr):
                if not rowact[i]:
                    continue
                for j in range(nc):
                    if not colact[j]:
                        continue
                    v = _abs(a[i * nc + j])
                    if v != 0 and (r < 0 or v < best):
                        r, c, best = i, j, v
                        if v == 1:
                            break
                if r >= 0 and best == 1:
                    break
            if r < 0:
                break
            while True:
                p = a[r * nc + c]
                clean = True
                for i in range(nr):
                    if i == r or not rowact[i] or a[i * nc + c] == 0:
                        continue
                    q = a[i * nc + c] / p
                    if q != 0:
                        for j in range(nc):
                            if not colact[j] or a[r * nc + j] == 0:
                                continue
                            if bc_mul(q, a[r * nc + j], &out) or \
                                    bc_sub(a[i * nc + j], out, &out):
                                raise _Overflow()
                            a[i * nc + j] = out
                    if a[i * nc + c] != 0:
                        clean = False
                if not clean:
                    best = 0
                    for i in range(nr):
                        if rowact[i] and a[i * nc + c] != 0:
                            v = _abs(a[i * nc + c])
                            if best == 0 or v < best:
                                best = v
                                r = i
                    continue
                for j in range(nc):
                    if j == c or not colact[j] or a[r * nc + j] == 0:
                        continue
                    q = a[r * nc + j] / p
                    if q != 0:
                        # column c is zero outside row r, so only row r changes
                        if bc_mul(q, p, &out) or bc_sub(a[r * nc + j], out, &out):
                            raise _Overflow()
                        a[r * nc + j] = out
                    if a[r * nc + j] != 0:
                        clean = False
                if not clean:
                    best = 0
                    for j in range(nc):
                        if colact[j] and a[r * nc + j] != 0:
                            v = _abs(a[r * nc + j])
                            if best == 0 or v < best:
                                best = v
                                c = j
                    continue
                break
            diag.append(_abs(a[r * nc + c]))
            rowact[r] = 0
            colact[c] = 0
        return diag
    finally:
        free(rowact)
        free(colact)
