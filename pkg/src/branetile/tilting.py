"""Tilting data over a stability chamber.

Choosing one weak path from a base vertex to every other vertex endows
the quotient with a collection of line bundles: each path's weight
pairs with the stable matchings' functionals to give a divisor, and
divisor classes live in the cokernel of the matching-functional matrix
on the kernel lattice (the divisor class group).  Classes do not
depend on the chosen paths, only on their endpoints.

Sections are counted in two independent ways and compared: lattice
points of the shifted polytope cut out by the stable functionals,
versus weights of actual quiver paths — bucketed by the height
functional, the total of *all* matching functionals (the arrow count
weighted by how many matchings use each arrow).
"""

from __future__ import annotations

import dataclasses
from typing import Sequence

from . import lattice
from .errors import ConsistencyError
from .matchings import PerfectMatching
from .polyhedra import integer_points, polyhedron_from_inequalities
from .stability import is_theta_stable
from .tiling import QuiverOnTorus, WeakPath, make_weak_path


def weak_path_weight(tower, path: WeakPath) -> tuple:
    """Weight of a weak path: signed sum of its arrow weights."""
    total = [0] * tower.rank
    for aid, exp in path.steps:
        w = tower.weights[aid]
        total = [t + exp * x for t, x in zip(total, w)]
    return tuple(total)


def default_paths(tiling: QuiverOnTorus, base: "str | None" = None) -> dict:
    """A deterministic weak path from the base to every vertex.

    Breadth-first: each layer is swept twice, first extending along
    forward arrows (in input order), then along backward ones, so
    inverse steps only appear when a vertex has no forward approach at
    its distance.
    """
    if base is None:
        base = tiling.vertices[0]
    if base not in tiling.vertices:
        raise ValueError(f"unknown base vertex {base!r}")
    steps = {base: ()}
    frontier = [base]
    while frontier:
        fresh = []
        for v in frontier:
            for a in tiling.arrows:
                if a.source == v and a.target not in steps:
                    steps[a.target] = steps[v] + ((a.arrow_id, 1),)
                    fresh.append(a.target)
        for v in frontier:
            for a in tiling.arrows:
                if a.target == v and a.source not in steps:
                    steps[a.source] = steps[v] + ((a.arrow_id, -1),)
                    fresh.append(a.source)
        frontier = fresh
    if len(steps) != len(tiling.vertices):
        raise ConsistencyError("quiver is not connected")
    return {v: make_weak_path(tiling, steps[v], source=base)
            for v in tiling.vertices}


def stable_matchings(tiling: QuiverOnTorus, theta: Sequence,
                     matchings: Sequence) -> list:
    return [m for m in matchings if is_theta_stable(tiling, m.arrows, theta)]


def divisor_of_weight(weight: Sequence, stable: Sequence) -> tuple:
    """Pair a weight with each stable matching's functional."""
    return tuple((m.matching_id, lattice.dot(m.chi, weight)) for m in stable)


def path_divisor(tower, path: WeakPath, stable: Sequence) -> tuple:
    return divisor_of_weight(weak_path_weight(tower, path), stable)


# ---------------------------------------------------------------------------
# the divisor class group
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class PicardPresentation:
    """Cokernel presentation of divisor vectors modulo the kernel
    lattice's image.

    A divisor vector indexed by the stable matchings maps to a free
    part (length = #stable - 3) and a torsion part; two vectors name
    the same divisor class iff both parts agree.
    """

    matching_ids: tuple
    projection: tuple    # free rows of the Smith transform
    torsion: tuple       # of (row, modulus) for moduli > 1
    rank: int            # free rank of the divisor class group

    def class_of(self, coefficients: Sequence) -> tuple:
        vec = list(coefficients)
        free = tuple(lattice.dot(row, vec) for row in self.projection)
        tors = tuple(lattice.dot(row, vec) % mod
                     for row, mod in self.torsion)
        return free, tors


def picard_presentation(stable: Sequence) -> PicardPresentation:
    """Smith-normal-form presentation of divisors modulo the image of
    the kernel lattice under all stable functionals."""
    rows = [list(m.chi_kernel) for m in stable]
    n = len(rows)
    u, s, _ = lattice.smith_normal_form(rows)
    diag = [s[i][i] for i in range(min(n, 3))]
    image_rank = sum(1 for d in diag if d)
    if image_rank != 3:
        raise ConsistencyError(
            f"stable matching functionals span rank {image_rank}, expected 3")
    projection = tuple(tuple(u[i]) for i in range(image_rank, n))
    torsion = tuple((tuple(u[i]), diag[i])
                    for i in range(image_rank) if diag[i] > 1)
    return PicardPresentation(
        matching_ids=tuple(m.matching_id for m in stable),
        projection=projection, torsion=torsion, rank=len(projection))


def class_path_independence(tower, first: WeakPath, second: WeakPath,
                            stable: Sequence) -> bool:
    """Verify that two weak paths with equal endpoints give the same
    divisor class, in two independent ways.

    The weight difference must lie in the kernel lattice, and the
    divisor difference must be the image of its kernel coordinates;
    both always hold for equal endpoints, and any disagreement between
    the two computations raises ConsistencyError.
    """
    if (first.source, first.target) != (second.source, second.target):
        raise ValueError("paths do not share endpoints")
    diff = tuple(a - b for a, b in zip(weak_path_weight(tower, first),
                                       weak_path_weight(tower, second)))
    in_kernel = tower.in_kernel(diff)
    delta = [lattice.dot(m.chi, diff) for m in stable]
    rows = [list(m.chi_kernel) for m in stable]
    in_image = lattice.solve_integer(rows, delta) is not None
    if in_kernel != in_image:
        raise ConsistencyError(
            "kernel membership and divisor-image membership disagree")
    if not in_kernel:
        raise ConsistencyError(
            "equal endpoints should force a kernel weight difference")
    return True


# ---------------------------------------------------------------------------
# tilting collections
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class TiltingCollection:
    """One divisor class per vertex, from default (or given) paths."""

    base: str
    ray_ids: tuple       # stable matching ids — divisor coordinate order
    paths: tuple         # of (vertex, WeakPath)
    divisors: tuple      # of (vertex, coefficient tuple)
    classes: tuple       # of (vertex, (free part, torsion part))
    presentation: PicardPresentation


def tilting_collection(tiling: QuiverOnTorus, tower, theta: Sequence,
                       matchings: Sequence, base: "str | None" = None,
                       paths: "dict | None" = None) -> TiltingCollection:
    stable = stable_matchings(tiling, theta, matchings)
    presentation = picard_presentation(stable)
    if paths is None:
        paths = default_paths(tiling, base)
    base = paths[tiling.vertices[0]].source if base is None else base
    path_items = tuple((v, paths[v]) for v in tiling.vertices)
    divisors = []
    classes = []
    for v, path in path_items:
        coeffs = tuple(c for _, c in path_divisor(tower, path, stable))
        divisors.append((v, coeffs))
        classes.append((v, presentation.class_of(coeffs)))
    return TiltingCollection(
        base=base, ray_ids=tuple(m.matching_id for m in stable),
        paths=path_items, divisors=tuple(divisors), classes=tuple(classes),
        presentation=presentation)


# ---------------------------------------------------------------------------
# graded section counts
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class SectionCount:
    """Per-height section counts of a path's divisor, computed from
    the lattice polytope and from quiver paths."""

    path: WeakPath
    max_height: int
    path_height: int
    heights: tuple  # of (height, lattice count, path count)

    @property
    def matches(self) -> bool:
        return all(a == b for _, a, b in self.heights)


def arrow_heights(matchings: Sequence) -> dict:
    """How many matchings use each arrow (positive iff nondegenerate)."""
    heights: dict = {}
    for m in matchings:
        for aid in m.arrows:
            heights[aid] = heights.get(aid, 0) + 1
    return heights


def graded_sections_count(tiling: QuiverOnTorus, tower, theta: Sequence,
                          path: WeakPath, matchings: Sequence,
                          max_height: int = 4) -> SectionCount:
    """Count sections of the path's divisor, graded by height.

    Lattice side: integer points of ``{y : <chi_I, y> >= -chi_I(path)
    for stable I}`` capped at the height bound, bucketed by total
    height.  Path side: distinct weights of forward paths between the
    path's endpoints, bucketed the same way.  The two must agree when
    the quotient construction represents the sections faithfully; the
    result records both so a mismatch is visible.
    """
    stable = stable_matchings(tiling, theta, matchings)
    if not stable:
        raise ConsistencyError("no stable matchings: the fan is empty")
    weight = weak_path_weight(tower, path)

    # Total-height functional and the path's own height.
    height_vec = tuple(
        sum(m.chi_kernel[j] for m in matchings) for j in range(3))
    path_height = sum(lattice.dot(m.chi, weight) for m in matchings)

    # Lattice count: chi_I . y >= -chi_I(weight), total height capped.
    inequalities = [
        (m.chi_kernel, -lattice.dot(m.chi, weight)) for m in stable]
    inequalities.append(
        (tuple(-h for h in height_vec), path_height - max_height))
    poly = polyhedron_from_inequalities(inequalities, 3)
    if poly.rays or poly.lineality:
        raise ConsistencyError("capped section polytope is unbounded")
    lattice_buckets: dict = {}
    for y in integer_points(poly):
        h = lattice.dot(height_vec, y) + path_height
        if 0 <= h <= max_height:
            lattice_buckets[h] = lattice_buckets.get(h, 0) + 1

    # Path count: distinct forward-path weights, by height.  The height
    # functional is positive on every arrow weight (nondegeneracy), so
    # capping it bounds the search.
    total_chi = tuple(sum(m.chi[i] for m in matchings)
                      for i in range(tower.rank))
    for aid in tower.arrow_ids:
        if lattice.dot(total_chi, tower.weights[aid]) <= 0:
            raise ConsistencyError(
                f"arrow {aid!r} lies in no perfect matching; the path "
                "search would not terminate")
    start = (path.source, (0,) * tower.rank)
    seen = {start}
    frontier = [start]
    path_buckets: dict = {}
    while frontier:
        fresh = []
        for vertex, w in frontier:
            for a in tiling.arrows:
                if a.source != vertex:
                    continue
                w2 = tuple(x + y for x, y in zip(w, tower.weights[a.arrow_id]))
                if lattice.dot(total_chi, w2) > max_height:
                    continue
                state = (a.target, w2)
                if state not in seen:
                    seen.add(state)
                    fresh.append(state)
        frontier = fresh
    for vertex, w in seen:
        if vertex != path.target:
            continue
        h = lattice.dot(total_chi, w)
        if 0 <= h <= max_height:
            path_buckets[h] = path_buckets.get(h, 0) + 1

    rows = tuple(
        (h, lattice_buckets.get(h, 0), path_buckets.get(h, 0))
        for h in range(max_height + 1))
    return SectionCount(path=path, max_height=max_height,
                        path_height=path_height, heights=rows)
