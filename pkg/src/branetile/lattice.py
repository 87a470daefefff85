"""Exact integer linear algebra and the weight-lattice tower of a tiling.

Matrices are plain lists of row lists of Python ints; exactness is
non-negotiable, and the matrices involved are small enough that the
cubic-ish algorithms below are never the bottleneck.

The second half of the module builds, from a quiver tiling, the tower of
lattices used everywhere else in the package:

* the *weight lattice* ``L`` — the abelian group generated by a formal
  face-cycle symbol together with one generator per arrow, modulo one
  relation per face identifying the face's arrow sum with the face-cycle
  symbol.  Presented as ``Z^k`` via Smith normal form.
* the *degree map* ``L -> Z^{vertices}`` induced by sending an arrow to
  ``target - source``; its image is the *degree lattice* (rank
  ``#vertices - 1``) and its kernel is the rank-3 *kernel lattice*,
  which plays the role of lattice of exponents of torus characters.
* the distinguished *face-cycle weight* (the common total weight of
  every face cycle), which lies in the kernel lattice and is kept as the
  third basis vector of the chosen kernel basis.
"""

from __future__ import annotations

import dataclasses
from math import gcd
from typing import Iterable, Sequence

from .errors import ConsistencyError

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# small matrix/vector helpers
# ---------------------------------------------------------------------------

def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[0] * ncols for _ in range(nrows)]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*m)] if m else []


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vec_mat(v: Sequence[int], a: Sequence[Sequence[int]]) -> list[int]:
    """Row vector times matrix."""
    return [sum(x * y for x, y in zip(v, col)) for col in zip(*a)]


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(u, v))


def vec_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide a nonzero integer vector by the gcd of its entries.

    Direction is preserved (the gcd taken is positive).
    """
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(mat: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, S, V)`` with ``U @ mat @ V == S``.

    ``U`` and ``V`` are unimodular; ``S`` is diagonal with nonnegative
    entries ``d_1 | d_2 | ...``.  Deterministic: pivots are chosen as
    the smallest-magnitude nonzero entry, scanning row-major.
    """
    m = [list(map(int, row)) for row in mat]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    u = identity(nrows)
    v = identity(ncols)

    def row_sub(i: int, j: int, q: int) -> None:
        m[i] = [a - q * b for a, b in zip(m[i], m[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    def col_sub(i: int, j: int, q: int) -> None:
        for row in m:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def row_swap(i: int, j: int) -> None:
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i: int, j: int) -> None:
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_neg(i: int) -> None:
        m[i] = [-a for a in m[i]]
        u[i] = [-a for a in u[i]]

    def eliminate(t: int, rmax: int, cmax: int) -> bool:
        """Clear row/column ``t`` within the window, pivot at ``(t, t)``.

        Returns False when the window is entirely zero.
        """
        while True:
            piv = None
            best = 0
            for i in range(t, rmax):
                for j in range(t, cmax):
                    a = abs(m[i][j])
                    if a and (piv is None or a < best):
                        piv, best = (i, j), a
            if piv is None:
                return False
            if piv[0] != t:
                row_swap(t, piv[0])
            if piv[1] != t:
                col_swap(t, piv[1])
            dirty = False
            for i in range(t + 1, rmax):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    if q:
                        row_sub(i, t, q)
                    if m[i][t]:
                        dirty = True
            for j in range(t + 1, cmax):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    if q:
                        col_sub(j, t, q)
                    if m[t][j]:
                        dirty = True
            if not dirty:
                if m[t][t] < 0:
                    row_neg(t)
                return True

    rank = 0
    while rank < min(nrows, ncols):
        if not eliminate(rank, nrows, ncols):
            break
        rank += 1

    # Enforce the divisibility chain with 2x2 local fixes.
    changed = True
    while changed:
        changed = False
        for t in range(rank - 1):
            if m[t + 1][t + 1] % m[t][t] != 0:
                col_sub(t, t + 1, -1)  # add column t+1 to column t
                eliminate(t, t + 2, t + 2)
                eliminate(t + 1, t + 2, t + 2)
                changed = True
    return u, m, v


def invariant_factors(mat: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in order."""
    _, s, _ = smith_normal_form(mat)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i]]


def matrix_rank(mat: Sequence[Sequence[int]]) -> int:
    return len(invariant_factors(mat))


def integer_kernel(mat: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of ``{x : mat @ x == 0}`` as a list of integer vectors.

    The basis spans the kernel as a direct summand (it is saturated by
    construction, being cut out by equations).
    """
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    _, s, v = smith_normal_form(mat)
    rank = sum(1 for i in range(min(nrows, ncols)) if s[i][i])
    return [[v[i][j] for i in range(ncols)] for j in range(rank, ncols)]


def solve_integer(mat: Sequence[Sequence[int]], target: Sequence[int]) -> list[int] | None:
    """One integer solution of ``mat @ x == target``, or None."""
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    u, s, v = smith_normal_form(mat)
    ub = mat_vec(u, list(target))
    y = [0] * ncols
    for i in range(nrows):
        d = s[i][i] if i < min(nrows, ncols) else 0
        if d:
            if ub[i] % d != 0:
                return None
            y[i] = ub[i] // d
        elif ub[i] != 0:
            return None
    return mat_vec(v, y)


def integer_inverse(mat: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise ValueError("matrix is not square")
    u, s, v = smith_normal_form(mat)
    if any(s[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return mat_mul(v, u)


# ---------------------------------------------------------------------------
# the lattice tower
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True, eq=False)
class LatticeTower:
    """Presentation of the weight lattice of a tiling and its degree map.

    Attributes:
        vertex_ids: quiver vertices, in input order.
        arrow_ids: quiver arrows, in input order.
        rank: rank ``k`` of the weight lattice (= #vertices + 2).
        weights: per-arrow weight, as a length-``k`` tuple.
        face_cycle_weight: common weight of every face cycle.
        degree_matrix: (#vertices x k) matrix of the degree map.
        kernel_basis: k x 3 matrix whose columns are a basis of the
            kernel of the degree map; the third column is
            ``face_cycle_weight``.
        projection: k x (1 + #arrows) matrix presenting the ambient
            group (face-cycle symbol first, then arrow generators) onto
            ``Z^k``.
        section: (1 + #arrows) x k right inverse of ``projection``;
            functionals on the ambient group descend along it.
    """

    vertex_ids: tuple
    arrow_ids: tuple
    rank: int
    weights: dict
    face_cycle_weight: tuple
    degree_matrix: tuple
    kernel_basis: tuple
    projection: tuple
    section: tuple

    @property
    def degree_rank(self) -> int:
        return len(self.vertex_ids) - 1

    def weight_of_path(self, arrows: Iterable[str]) -> tuple[int, ...]:
        total = [0] * self.rank
        for aid in arrows:
            w = self.weights[aid]
            total = [x + y for x, y in zip(total, w)]
        return tuple(total)

    def degree(self, weight: Sequence[int]) -> tuple[int, ...]:
        return tuple(mat_vec([list(r) for r in self.degree_matrix], list(weight)))

    def kernel_coords(self, weight: Sequence[int]) -> tuple[int, int, int]:
        """Coordinates of a degree-zero weight in the kernel basis."""
        basis = [list(r) for r in self.kernel_basis]
        sol = solve_integer(basis, list(weight))
        if sol is None:
            raise ValueError("weight does not lie in the kernel lattice")
        return tuple(sol)

    def from_kernel(self, coords: Sequence[int]) -> tuple[int, ...]:
        basis = [list(r) for r in self.kernel_basis]
        return tuple(mat_vec(basis, list(coords)))

    def in_kernel(self, weight: Sequence[int]) -> bool:
        return all(x == 0 for x in self.degree(weight))


def build_lattice_tower(tiling) -> LatticeTower:
    """Compute the lattice tower of a validated quiver tiling.

    Raises ConsistencyError when the presented weight lattice has
    torsion, when its rank differs from #vertices + 2, or when the
    kernel of the degree map does not have rank 3 — each of which means
    the input does not define a tiling of the torus of the expected
    kind.
    """
    arrow_ids = [a.arrow_id for a in tiling.arrows]
    arrow_index = {aid: i for i, aid in enumerate(arrow_ids)}
    n_amb = 1 + len(arrow_ids)
    vertex_index = {vid: i for i, vid in enumerate(tiling.vertices)}

    # One relation column per face: (1, -sum of the face's arrows).
    relations = zeros(n_amb, len(tiling.faces))
    for j, face in enumerate(tiling.faces):
        relations[0][j] = 1
        for aid in face.arrows:
            relations[1 + arrow_index[aid]][j] -= 1

    # Vertex-degree rows of the ambient group: arrow -> target - source.
    boundary = zeros(len(tiling.vertices), n_amb)
    for a in tiling.arrows:
        col = 1 + arrow_index[a.arrow_id]
        boundary[vertex_index[a.target]][col] += 1
        boundary[vertex_index[a.source]][col] -= 1

    # Face cycles must be closed, i.e. the degree rows kill every relation.
    closed = mat_mul(boundary, relations)
    if any(x for row in closed for x in row):
        raise ConsistencyError("some face cycle is not a closed walk")

    u, s, _ = smith_normal_form(relations)
    factors = [s[i][i] for i in range(min(n_amb, len(tiling.faces))) if s[i][i]]
    if any(d != 1 for d in factors):
        raise ConsistencyError(
            f"weight lattice has torsion (invariant factors {factors})")
    rank_rel = len(factors)
    k = n_amb - rank_rel
    if k != len(tiling.vertices) + 2:
        raise ConsistencyError(
            f"weight lattice has rank {k}, expected #vertices + 2 = "
            f"{len(tiling.vertices) + 2}")

    projection = [u[i] for i in range(rank_rel, n_amb)]
    u_inv = integer_inverse(u)
    section = [[u_inv[i][j] for j in range(rank_rel, n_amb)] for i in range(n_amb)]

    weights = {
        aid: tuple(projection[i][1 + arrow_index[aid]] for i in range(k))
        for aid in arrow_ids
    }
    face_cycle_weight = tuple(projection[i][0] for i in range(k))

    degree_matrix = mat_mul(boundary, section)
    # Sanity: the degree of an arrow weight is target - source, and the
    # face-cycle weight has degree zero.
    for a in tiling.arrows:
        expect = [0] * len(tiling.vertices)
        expect[vertex_index[a.target]] += 1
        expect[vertex_index[a.source]] -= 1
        if mat_vec(degree_matrix, list(weights[a.arrow_id])) != expect:
            raise ConsistencyError("degree map disagrees with arrow boundaries")
    if any(mat_vec(degree_matrix, list(face_cycle_weight))):
        raise ConsistencyError("face-cycle weight has nonzero degree")

    kernel = integer_kernel(degree_matrix)
    if len(kernel) != 3:
        raise ConsistencyError(
            f"kernel of the degree map has rank {len(kernel)}, expected 3")

    # Change basis so the face-cycle weight is the third basis vector.
    basis_cols = [[kernel[j][i] for j in range(3)] for i in range(k)]
    coeffs = solve_integer(basis_cols, list(face_cycle_weight))
    if coeffs is None:
        raise ConsistencyError("face-cycle weight escapes the kernel lattice")
    uc, sc, vc = smith_normal_form([[c] for c in coeffs])
    if sc[0][0] != 1:
        raise ConsistencyError("face-cycle weight is not primitive in the kernel")
    w0 = integer_inverse(uc)
    for i in range(3):  # make the first column exactly `coeffs`
        w0[i][0] *= vc[0][0]
    change = [[w0[i][(j + 1) % 3] for j in range(3)] for i in range(3)]
    kernel_basis = mat_mul(basis_cols, change)
    if [kernel_basis[i][2] for i in range(k)] != list(face_cycle_weight):
        raise ConsistencyError("kernel rebasing failed")

    return LatticeTower(
        vertex_ids=tuple(tiling.vertices),
        arrow_ids=tuple(arrow_ids),
        rank=k,
        weights=weights,
        face_cycle_weight=face_cycle_weight,
        degree_matrix=tuple(tuple(row) for row in degree_matrix),
        kernel_basis=tuple(tuple(row) for row in kernel_basis),
        projection=tuple(tuple(row) for row in projection),
        section=tuple(tuple(row) for row in section),
    )
