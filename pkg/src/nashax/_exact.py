"""Exact rational helpers: coercion, row reduction and small polytopes."""
import re
from fractions import Fraction
from itertools import combinations
from math import lcm

import numpy as np

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(x) -> Fraction:
    """Coerce ``x`` to a Fraction, refusing anything inexact."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not payoffs")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        m = _RATIONAL.match(x)
        if not m:
            raise ValueError(f"malformed rational {x!r}")
        num, den = m.group(1), m.group(2)
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in {x!r}")
        return Fraction(int(num), int(den) if den else 1)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def fraction_array(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_fraction(v)
    return out


def format_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def common_denominator(values) -> int:
    d = 1
    for v in values:
        d = lcm(d, v.denominator)
    return d


def contract(values: np.ndarray, vectors) -> np.ndarray:
    """Contract axes of ``values`` with the given vectors (``None`` skips an axis)."""
    out = values
    for axis in reversed(range(values.ndim)):
        vec = vectors[axis]
        if vec is None:
            continue
        out = np.tensordot(out, vec, axes=([axis], [0]))
    return out


def rref(rows):
    """Reduced row echelon form over the rationals. Returns (rows, pivots)."""
    a = [list(r) for r in rows]
    pivots = []
    if not a:
        return a, pivots
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((k for k in range(r, len(a)) if a[k][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        if pv != 1:
            a[r] = [x / pv for x in a[r]]
        for k in range(len(a)):
            if k != r and a[k][c] != 0:
                f = a[k][c]
                a[k] = [x - f * y for x, y in zip(a[k], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivots


def solve_affine(A, b, nvars):
    """Solve ``A x = b``. Returns None or (particular solution, nullspace basis)."""
    if not A:
        basis = [tuple(ONE if j == k else ZERO for j in range(nvars)) for k in range(nvars)]
        return tuple([ZERO] * nvars), basis
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    red, pivots = rref(aug)
    if nvars in pivots:
        return None
    x0 = [ZERO] * nvars
    for row, c in zip(red, pivots):
        x0[c] = row[nvars]
    free = [c for c in range(nvars) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * nvars
        v[f] = ONE
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(tuple(v))
    return tuple(x0), basis


def _dot(u, v):
    return sum((x * y for x, y in zip(u, v)), ZERO)


def polytope_vertices(A_eq, b_eq, A_ub, b_ub, nvars):
    """Vertices of the bounded polytope ``{A_eq x = b_eq, A_ub x <= b_ub}``.

    Brute force over tight constraint subsets; meant for tiny systems only.
    """
    sol = solve_affine(A_eq, b_eq, nvars)
    if sol is None:
        return []
    x0, basis = sol
    k = len(basis)
    G = [[_dot(row, v) for v in basis] for row in A_ub]
    h = [bi - _dot(row, x0) for row, bi in zip(A_ub, b_ub)]
    if k == 0:
        return [x0] if all(hi >= 0 for hi in h) else []
    found = set()
    for idx in combinations(range(len(G)), k):
        sub = solve_affine([G[r] for r in idx], [h[r] for r in idx], k)
        if sub is None or sub[1]:
            continue
        t = sub[0]
        if all(_dot(G[r], t) <= h[r] for r in range(len(G))):
            found.add(tuple(x0[j] + sum((t[q] * basis[q][j] for q in range(k)), ZERO)
                            for j in range(nvars)))
    return sorted(found)


def affine_dimension(points) -> int:
    """Dimension of the affine hull of a nonempty point set."""
    points = list(points)
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    return len(rref(diffs)[1])


def barycenter(points):
    n = len(points)
    return tuple(sum(col, ZERO) / n for col in zip(*points))



def _pivot(T, obj, basis, r, j):
    piv = T[r][j]
    T[r] = [v / piv for v in T[r]]
    for row in T + [obj]:
        if row is not T[r] and row[j]:
            f = row[j]
            row[:] = [a - f * b for a, b in zip(row, T[r])]
    basis[r] = j


def _simplex(T, obj, basis, allowed):
    """Bland's rule on a tableau whose last column is the right-hand side.
    Returns False when unbounded."""
    while True:
        j = next((j for j in allowed if obj[j] < 0), None)
        if j is None:
            return True
        best = None
        for r, row in enumerate(T):
            if row[j] > 0:
                key = (row[-1] / row[j], basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            return False
        _pivot(T, obj, basis, best[1], j)


def lp_maximize(objective, A_ub=(), b_ub=(), A_eq=(), b_eq=()):
    """Exact ``max c.x`` over ``x >= 0``, ``A_ub x <= b_ub``, ``A_eq x = b_eq``.

    Two-phase simplex with Bland's rule.  Returns ``(value, x)`` with
    Fractions, or ``None`` when infeasible; raises ``ValueError`` when unbounded.
    """
    c = [to_fraction(v) for v in objective]
    n, n_ub = len(c), len(A_ub)
    rows = []
    for k, (a, b) in enumerate(zip(A_ub, b_ub)):
        rows.append([to_fraction(v) for v in a] + [ONE if q == k else ZERO for q in range(n_ub)]
                    + [to_fraction(b)])
    for a, b in zip(A_eq, b_eq):
        rows.append([to_fraction(v) for v in a] + [ZERO] * n_ub + [to_fraction(b)])
    m = len(rows)
    width = n + n_ub
    T = []
    for r, row in enumerate(rows):
        if row[-1] < 0:
            row = [-v for v in row]
        T.append(row[:-1] + [ONE if q == r else ZERO for q in range(m)] + [row[-1]])
    basis = [width + r for r in range(m)]

    obj = [ZERO] * width + [ONE] * m + [ZERO]
    for row in T:
        obj = [a - b for a, b in zip(obj, row)]
    _simplex(T, obj, basis, range(width + m))
    if obj[-1] < 0:
        return None
    for r in reversed(range(len(T))):
        if basis[r] >= width:
            j = next((j for j in range(width) if T[r][j] != 0), None)
            if j is None:
                del T[r], basis[r]
            else:
                _pivot(T, obj, basis, r, j)

    obj = [-v for v in c] + [ZERO] * (n_ub + m + 1)
    for r, b in enumerate(basis):
        if obj[b]:
            f = obj[b]
            obj = [a - f * v for a, v in zip(obj, T[r])]
    if not _simplex(T, obj, basis, range(width)):
        raise ValueError("linear program is unbounded")
    x = [ZERO] * width
    for r, b in enumerate(basis):
        x[b] = T[r][-1]
    x = x[:n]
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    if value != obj[-1] or any(v < 0 for v in x) \
            or any(_dot(a, x) > b for a, b in zip(A_ub, b_ub)) \
            or any(_dot(a, x) != b for a, b in zip(A_eq, b_eq)):
        raise AssertionError("simplex returned an inconsistent solution")
    return value, x
