"""Exact rational linear algebra and strict linear feasibility.

Everything here works over ``fractions.Fraction`` — no floating point
anywhere in the package.  The feasibility routine decides homogeneous
systems of *strict* inequalities (optionally restricted to a rational
subspace) by Fourier–Motzkin elimination and, when feasible, returns an
explicit interior witness by back-substitution.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence


def fvec(v: Iterable) -> tuple:
    return tuple(Fraction(x) for x in v)


def fdot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(x) * Fraction(y) for x, y in zip(u, v)),
               start=Fraction(0))


def integerize(v: Sequence) -> tuple:
    """Primitive integer vector with the same direction as ``v``."""
    fr = [Fraction(x) for x in v]
    scale = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * scale) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def rref(rows_in: Sequence, ncols: int) -> tuple:
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``
    with the zero rows dropped."""
    rows = [[Fraction(x) for x in r] for r in rows_in]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def frank(rows: Sequence, ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence, ncols: int) -> list:
    """Deterministic rational basis of ``{x : rows @ x == 0}``."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def solve(rows: Sequence, rhs: Sequence, ncols: int):
    """One rational solution of ``rows @ x == rhs`` (free variables
    zero), or None when inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return tuple(x)


# ---------------------------------------------------------------------------
# cone duality
# ---------------------------------------------------------------------------

def int_det(mat: Sequence) -> int:
    """Determinant of a square integer matrix, by fraction-free
    (Bareiss) elimination with row pivoting."""
    m = [list(r) for r in mat]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pr is None:
                return 0
            m[k], m[pr] = m[pr], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


def _kernel_ray(rows: list, dim: int):
    """Spanning integer vector of the kernel of a ``(dim-1) x dim``
    integer matrix — the signed maximal minors — or None when the rank
    drops and the kernel is bigger than a line."""
    vec = []
    for j in range(dim):
        sub = [[r[i] for i in range(dim) if i != j] for r in rows]
        vec.append(int_det(sub) if j % 2 == 0 else -int_det(sub))
    if not any(vec):
        return None
    return vec


def dual_cone(gens: Sequence, dim: int) -> tuple:
    """Extreme rays and lineality of ``{y : g . y >= 0 for all g}``.

    Returns ``(rays, lineality)`` as primitive integer vectors; the
    rays are the extreme rays of the dual intersected with the span of
    the generators, and the lineality is the generators' orthogonal
    complement, so the dual is the sum of the two parts.  Extreme rays
    vanish on a rank ``d - 1`` subset of generators (``d`` the rank of
    the generators): each candidate subset, padded with the lineality
    rows, is a ``(dim-1) x dim`` integer matrix whose kernel line is
    its vector of signed maximal minors.
    """
    from itertools import combinations

    cleaned = []
    for g in gens:
        if any(Fraction(x) != 0 for x in g):
            v = integerize(g)
            if v not in cleaned:
                cleaned.append(v)
    lineality = [integerize(v) for v in nullspace(cleaned, dim)]
    d = dim - len(lineality)
    if d == 0:
        return [], lineality

    lin_rows = [list(l) for l in lineality]
    rays = []
    seen = set()
    for subset in combinations(range(len(cleaned)), d - 1):
        y = _kernel_ray([list(cleaned[i]) for i in subset] + lin_rows, dim)
        if y is None:
            continue
        dots = [sum(a * b for a, b in zip(g, y)) for g in cleaned]
        if all(x >= 0 for x in dots):
            ray = integerize(y)
        elif all(x <= 0 for x in dots):
            ray = integerize([-v for v in y])
        else:
            continue
        if ray not in seen:
            seen.add(ray)
            rays.append(ray)
    return sorted(rays), lineality


def cone_contains(gens: Sequence, lin: Sequence, vec: Sequence,
                  dim: int) -> bool:
    """Whether ``vec`` lies in ``cone(gens) + span(lin)``."""
    closed = list(gens) + list(lin) + [tuple(-x for x in l) for l in lin]
    drays, dlin = dual_cone(closed, dim)
    return (all(fdot(d, vec) >= 0 for d in drays)
            and all(fdot(d, vec) == 0 for d in dlin))


# ---------------------------------------------------------------------------
# strict feasibility by Fourier-Motzkin elimination
# ---------------------------------------------------------------------------

def _fm_strict(rows: list, nvars: int):
    """Interior point of ``{x : r . x > 0 for all r}``, or None.

    Eliminates the last variable, recurses, then back-substitutes the
    midpoint (or a unit offset) of the surviving bounds.
    """
    if any(not any(row) for row in rows):
        return None  # a zero row means 0 > 0
    if nvars == 0:
        return ()
    pos = [row for row in rows if row[-1] > 0]
    neg = [row for row in rows if row[-1] < 0]
    zero = [row[:-1] for row in rows if row[-1] == 0]
    reduced = list(zero)
    for p in pos:
        for n in neg:
            combined = [p[-1] * gn - n[-1] * gp
                        for gp, gn in zip(p[:-1], n[:-1])]
            reduced.append(tuple(integerize(combined)) if any(combined)
                           else tuple(combined))
    inner = _fm_strict(reduced, nvars - 1)
    if inner is None:
        return None
    lows = [-fdot(row[:-1], inner) / row[-1] for row in pos]
    highs = [-fdot(row[:-1], inner) / row[-1] for row in neg]
    if lows and highs:
        t = (max(lows) + min(highs)) / 2
    elif lows:
        t = max(lows) + 1
    elif highs:
        t = min(highs) - 1
    else:
        t = Fraction(0)
    return inner + (t,)


def strict_feasible_point(strict: Sequence, eqs: Sequence, nvars: int):
    """Witness of ``{x : s . x > 0, e . x == 0}`` or None.

    The input rows are integer or rational; the witness is rational.
    With no strict rows the zero vector is returned (it satisfies the
    equalities vacuously).
    """
    strict = [fvec(r) for r in strict]
    eqs = [fvec(r) for r in eqs]
    if not strict:
        return tuple(Fraction(0) for _ in range(nvars))
    if eqs:
        basis = nullspace(eqs, nvars)
        if not basis:
            return None  # x = 0 satisfies no strict inequality
        projected = [tuple(fdot(row, b) for b in basis) for row in strict]
        y = _fm_strict(projected, len(basis))
        if y is None:
            return None
        return tuple(
            sum((c * b[i] for c, b in zip(y, basis)), start=Fraction(0))
            for i in range(nvars)
        )
    return _fm_strict(strict, nvars)
