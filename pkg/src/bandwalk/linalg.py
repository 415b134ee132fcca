"""Exact linear algebra over the rationals.

Everything here is fraction-free where it counts: matrices come in as
Fractions, rows are scaled to integers once, and elimination proceeds
with the two-term integer cross-multiplication update plus a gcd
squeeze per produced row.  Pivots are chosen smallest-in-magnitude to
keep the integers from blowing up.  Ranks, nullities and kernels are
exact; nothing in this module touches floats.
"""

from fractions import Fraction
from math import gcd

from .errors import MalformedInputError, SizeGuardError

CHARPOLY_CAP = 120


# ------------------------------------------------------- conversions


def int_rows(matrix):
    """Scale each row by the lcm of its denominators.

    Row scaling by a nonzero rational preserves rank and kernel, so the
    integer matrix returned here is interchangeable with the input for
    everything this module computes.
    """
    out = []
    for row in matrix:
        den = 1
        for v in row:
            f = Fraction(v)
            den = den * f.denominator // gcd(den, f.denominator)
        out.append([int(Fraction(v) * den) for v in row])
    return out


def _squeeze(row):
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


# ------------------------------------------------------- elimination


def rank_int_rows(rows):
    """Rank of an integer matrix given as a list of rows (destructive)."""
    rows = [list(r) for r in rows if any(r)]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for col in range(ncols):
        best = -1
        for idx, r in enumerate(rows):
            v = r[col]
            if v and (best < 0 or abs(v) < abs(rows[best][col])):
                best = idx
        if best < 0:
            continue
        prow = rows.pop(best)
        piv = prow[col]
        nxt = []
        for r in rows:
            f = r[col]
            if f:
                g = gcd(piv, f)
                a, b = piv // g, f // g
                nr = _squeeze([a * x - b * y for x, y in zip(r, prow)])
                if any(nr):
                    nxt.append(nr)
            else:
                nxt.append(r)
        rows = nxt
        rank += 1
        if not rows:
            break
    return rank


def rank(matrix):
    return rank_int_rows(int_rows(matrix))


def nullity(matrix):
    matrix = list(matrix)
    if not matrix:
        return 0
    return len(matrix[0]) - rank(matrix)


def echelon_int_rows(rows):
    """Row echelon form with pivot bookkeeping.

    Returns a list of (pivot_col, row) pairs with strictly increasing
    pivot columns; rows are integer, gcd-reduced, not back-eliminated.
    """
    rows = [_squeeze(list(r)) for r in rows if any(r)]
    ncols = len(rows[0]) if rows else 0
    ech = []
    for col in range(ncols):
        best = -1
        for idx, r in enumerate(rows):
            v = r[col]
            if v and (best < 0 or abs(v) < abs(rows[best][col])):
                best = idx
        if best < 0:
            continue
        prow = rows.pop(best)
        piv = prow[col]
        nxt = []
        for r in rows:
            f = r[col]
            if f:
                g = gcd(piv, f)
                a, b = piv // g, f // g
                nr = _squeeze([a * x - b * y for x, y in zip(r, prow)])
                if any(nr):
                    nxt.append(nr)
            else:
                nxt.append(r)
        rows = nxt
        ech.append((col, prow))
        if not rows:
            break
    return ech


def kernel_basis(matrix):
    """Exact right-kernel basis of a Fraction matrix.

    One basis vector per free column: the free variable is set to 1,
    the other free variables to 0, and the pivot variables are found by
    back-substitution through the echelon rows.
    """
    matrix = list(matrix)
    if not matrix:
        return []
    ncols = len(matrix[0])
    ech = echelon_int_rows(int_rows(matrix))
    pivots = [c for c, _ in ech]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for col, row in reversed(ech):
            s = sum((row[j] * x[j] for j in range(col + 1, ncols)
                     if row[j] and x[j]), Fraction(0))
            x[col] = -s / row[col]
        basis.append(x)
    return basis


# --------------------------------------------------- matrix utilities


def identity_matrix(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_sub_scaled_identity(matrix, lam):
    lam = Fraction(lam)
    return [[Fraction(v) - (lam if i == j else 0)
             for j, v in enumerate(row)]
            for i, row in enumerate(matrix)]


def mat_mul(a, b):
    n, m = len(a), len(b[0])
    k = len(b)
    bt = [[b[r][c] for r in range(k)] for c in range(m)]
    return [[sum(ar[i] * bc[i] for i in range(k) if ar[i] and bc[i])
             for bc in bt] for ar in a]


def mat_vec(a, v):
    return [sum(r[i] * v[i] for i in range(len(v)) if r[i] and v[i])
            for r in a]


def vec_mat(v, a):
    n = len(a[0])
    out = [Fraction(0)] * n
    for i, vi in enumerate(v):
        if vi:
            row = a[i]
            for j in range(n):
                if row[j]:
                    out[j] += vi * row[j]
    return out


# ------------------------------------------ characteristic polynomial


def _to_hessenberg(matrix):
    """Similarity-reduce to upper Hessenberg form over Fraction."""
    h = [[Fraction(v) for v in row] for row in matrix]
    n = len(h)
    for col in range(n - 2):
        piv_row = -1
        for r in range(col + 1, n):
            if h[r][col]:
                piv_row = r
                break
        if piv_row < 0:
            continue
        if piv_row != col + 1:
            h[piv_row], h[col + 1] = h[col + 1], h[piv_row]
            for r in range(n):
                h[r][piv_row], h[r][col + 1] = h[r][col + 1], h[r][piv_row]
        piv = h[col + 1][col]
        for r in range(col + 2, n):
            f = h[r][col]
            if not f:
                continue
            t = f / piv
            h[r] = [x - t * y for x, y in zip(h[r], h[col + 1])]
            for k in range(n):
                h[k][col + 1] += t * h[k][r]
    return h


def charpoly(matrix):
    """Coefficients of det(x I - M), ascending, exact.

    Hessenberg reduction followed by the leading-minor recurrence; the
    result is monic of degree n.  Guarded: this is an oracle for small
    certificates, not a bulk path.
    """
    n = len(matrix)
    if n > CHARPOLY_CAP:
        raise SizeGuardError(
            f"charpoly oracle capped at {CHARPOLY_CAP}x{CHARPOLY_CAP}; "
            f"got {n}")
    if any(len(row) != n for row in matrix):
        raise MalformedInputError("charpoly needs a square matrix")
    if n == 0:
        return [Fraction(1)]
    h = _to_hessenberg(matrix)
    polys = [[Fraction(1)]]
    for i in range(1, n + 1):
        # p_i = (x - h[i-1][i-1]) p_{i-1} - sum over trailing products
        prev = polys[i - 1]
        cur = [Fraction(0)] + prev
        for k, c in enumerate(prev):
            cur[k] -= h[i - 1][i - 1] * c
        run = Fraction(1)
        for j in range(1, i):
            run *= h[i - j][i - j - 1]
            if not run:
                break
            coef = h[i - j - 1][i - 1] * run
            if coef:
                low = polys[i - j - 1]
                for k, c in enumerate(low):
                    cur[k] -= coef * c
        polys.append(cur)
    return polys[n]


def poly_eval(coeffs, x):
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def root_multiplicity(coeffs, r):
    """Multiplicity of r as a root, by repeated synthetic division."""
    r = Fraction(r)
    coeffs = [Fraction(c) for c in coeffs]
    mult = 0
    while len(coeffs) > 1 and poly_eval(coeffs, r) == 0:
        out = []
        acc = Fraction(0)
        for c in reversed(coeffs[1:]):
            acc = acc * r + c
            out.append(acc)
        # check: remainder acc*r + coeffs[0] must be 0
        coeffs = list(reversed(out))
        mult += 1
    return mult
