"""
Finite group actions on complex tori R^{2g}/Z^{2g}, studied through torsion
points: fixed loci, components, orbits, stabilizers, isogeny kernels,
smoothness of the quotient and the descent census for K x| H actions.

Points are kept exact as Fractions; whole torsion grids are handled with
numpy integer arrays of numerators over a common denominator n.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from finite_groups import FiniteGroup, TorusElement, is_pseudo_reflection
from exact_arithmetic import identity_matrix, mat_sub, matrices_equal, nullspace, restrict_action
from lattice import (
    determinant,
    int_mat_mul,
    int_mat_vec,
    kernel_on_torus,
    kernel_rank,
    saturated_kernel,
    smith_form,
    solve_mod_one,
    quotient_lattice_basis,
    change_coordinates,
)

logger = logging.getLogger(__name__)

GAUSSIAN_CM = ((0, -1), (1, 0))
EISENSTEIN_CM = ((0, -1), (1, -1))


class OddKernelRankError(ValueError):
    """Raised when ker(L - I) has odd rank, so the map cannot be holomorphic."""


class NotHolomorphicError(ValueError):
    """Raised when a linear part does not commute with the complex structure."""


class TorsionBoundTooSmallError(ValueError):
    """Raised when a fixed locus exists but misses the requested torsion."""

    def __init__(self, message: str, needed: int):
        super().__init__(message)
        self.needed = needed


class SingularMatrixError(ZeroDivisionError):
    """Raised when an isogeny matrix has zero determinant."""


class NotFreeError(ValueError):
    """Raised when a translation subgroup does not act freely."""


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True, order=True)
class TorsionPoint:
    """A point of (Q/Z)^{2g}, coordinates reduced into [0, 1)."""

    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(v) % 1 for v in self.coords))

    @classmethod
    def from_complex(cls, *pairs: Tuple) -> "TorsionPoint":
        """Point u + v*tau per elliptic factor, given as (u, v) pairs."""
        return cls(tuple(Fraction(c) for pair in pairs for c in pair))

    @property
    def order(self) -> int:
        n = 1
        for v in self.coords:
            n = _lcm(n, v.denominator)
        return n

    def __len__(self):
        return len(self.coords)

    def serialize(self) -> List[str]:
        return [str(v) for v in self.coords]

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.coords) + ")"


def apply_affine(e: TorusElement, p: TorsionPoint) -> TorsionPoint:
    if e.dimension != len(p):
        raise ValueError(f"element of dimension {e.dimension} applied to a point of dimension {len(p)}")
    return TorsionPoint(e.apply(p.coords))


def block_cm(cm: Sequence[Sequence[Sequence[int]]]) -> List[List[int]]:
    """Block-diagonal complex structure from one 2x2 CM matrix per factor."""
    size = 2 * len(cm)
    out = [[0] * size for _ in range(size)]
    for k, block in enumerate(cm):
        for r in range(2):
            for s in range(2):
                out[2 * k + r][2 * k + s] = block[r][s]
    return out


@dataclass
class TorusAction:
    """A finite group of affine maps on a product of g elliptic curves."""

    group: FiniteGroup
    factors: int
    cm: List[Tuple[Tuple[int, int], Tuple[int, int]]]
    name: Optional[str] = None

    def __post_init__(self):
        if self.group.is_linear:
            raise TypeError("torus actions need TorusElement groups")
        if len(self.cm) != self.factors:
            raise ValueError(f"expected {self.factors} CM matrices, got {len(self.cm)}")
        self.validate()

    @property
    def dimension(self) -> int:
        return 2 * self.factors

    def validate(self):
        """Every linear part commutes with the complex structure."""
        j = block_cm(self.cm)
        for idx, e in enumerate(self.group.elements):
            if int_mat_mul(e.linear, j) != int_mat_mul(j, e.linear):
                raise NotHolomorphicError(f"element {idx} of {self.name or 'action'} is not holomorphic")

    def element(self, idx: int) -> TorusElement:
        return self.group.idx_to_elem(idx)


def _minus_identity(e: TorusElement) -> List[List[int]]:
    return [[v - (1 if i == j else 0) for j, v in enumerate(row)] for i, row in enumerate(e.linear)]


def fixed_dimension(e: TorusElement) -> int:
    """Complex dimension of the fixed locus, (rank over Q of ker(L - I)) / 2."""
    k = kernel_rank(_minus_identity(e))
    if k % 2:
        raise OddKernelRankError(f"ker(L - I) has odd rank {k}")
    return k // 2


def fixed_torsion_points(e: TorusElement, n: int) -> List[TorsionPoint]:
    """Fixed points with denominators dividing n, via the Smith form of L - I."""
    if n < 1:
        raise ValueError(f"torsion bound must be positive, got {n}")
    solutions = solve_mod_one(_minus_identity(e), [-t for t in e.translation], n)
    return sorted(TorsionPoint(p) for p in solutions)


def _component_levels(matrix: List[List[int]], rhs: Sequence[Fraction]) -> List[int]:
    """Smallest torsion level met by each component of {x : matrix.x = rhs mod Z}.

    In Smith coordinates a component fixes y_j = (c_j + k_j) / d_j below the rank
    and leaves the rest free; right is unimodular, so the level is the lcm of those
    denominators. Empty when there are no solutions.
    """
    smith = smith_form(matrix)
    c = [Fraction(v) for v in int_mat_vec(smith.left, rhs)]
    if any(c[i].denominator != 1 for i in range(smith.rank, len(c))):
        return []
    levels = []
    for shifts in itertools.product(*(range(abs(smith.diagonal[j])) for j in range(smith.rank))):
        level = 1
        for j, k in enumerate(shifts):
            level = _lcm(level, ((c[j] + k) / smith.diagonal[j]).denominator)
        levels.append(level)
    return levels


@dataclass
class FixedLocusCensus:
    """Fixed locus of one element, with its components seen at n-torsion."""

    representative: int
    dimension: int
    component_count: int
    torsion: int
    components: Dict[Tuple[Fraction, ...], List[TorsionPoint]]
    identity_lattice: List[List[int]]
    _coordinates: List[List[Fraction]] = field(repr=False, default_factory=list)
    _rank: int = 0

    @property
    def torsion_component_count(self) -> int:
        return len(self.components)

    @property
    def points(self) -> List[TorsionPoint]:
        return sorted(p for pts in self.components.values() for p in pts)

    def component_of(self, p: TorsionPoint) -> Tuple[Fraction, ...]:
        w = int_mat_vec(self._coordinates, p.coords)
        return tuple(Fraction(w[j]) % 1 for j in range(self._rank))

    def to_json(self) -> Dict:
        return {
            "dimension": self.dimension,
            "component_count": self.component_count,
            "torsion": self.torsion,
            "torsion_component_count": self.torsion_component_count,
            "fixed_points": len(self.points),
        }


def fixed_components(e: TorusElement, n: int, representative: int = -1) -> FixedLocusCensus:
    """Components of Fix(e): cosets of the identity component through the fixed n-torsion points."""
    matrix = _minus_identity(e)
    dimension = fixed_dimension(e)
    smith = smith_form(matrix)
    rhs = [-t for t in e.translation]
    points = fixed_torsion_points(e, n)
    levels = _component_levels(matrix, rhs)
    missed = [level for level in levels if n % level]
    if missed:
        needed = n
        for level in missed:
            needed = _lcm(needed, level)
        raise TorsionBoundTooSmallError(
            f"{len(missed)} of {len(levels)} fixed components miss {n}-torsion; use {needed}-torsion", needed)
    coordinates = sympy.Matrix(smith.right).inv()
    coords = [[Fraction(int(coordinates[i, j])) for j in range(coordinates.cols)] for i in range(coordinates.rows)]
    census = FixedLocusCensus(representative, dimension, smith.torsion if points else 0, n, {},
                              saturated_kernel(matrix), coords, smith.rank)
    for p in points:
        census.components.setdefault(census.component_of(p), []).append(p)
    if census.torsion_component_count != census.component_count:
        raise ArithmeticError(f"{census.torsion_component_count} components found at {n}-torsion, "
                              f"Smith invariants give {census.component_count}")
    return census


class TorsionGrid:
    """All points of (1/n)Z^m / Z^m as rows of an integer numpy array."""

    def __init__(self, n: int, size: int):
        self.n = n
        self.size = size
        self.points = np.array(list(itertools.product(range(n), repeat=size)), dtype=np.int64).reshape(-1, size)
        self._weights = n ** np.arange(size - 1, -1, -1, dtype=np.int64)

    def __len__(self):
        return len(self.points)

    def encode(self, rows: np.ndarray) -> np.ndarray:
        return rows @ self._weights

    def index_of(self, p: TorsionPoint) -> int:
        return int(self.encode(np.array([[int(v * self.n) for v in p.coords]], dtype=np.int64))[0])

    def point(self, idx: int) -> TorsionPoint:
        return TorsionPoint(tuple(Fraction(int(v), self.n) for v in self.points[idx]))

    def permutation(self, e: TorusElement) -> np.ndarray:
        shift = [t * self.n for t in e.translation]
        if any(s.denominator != 1 for s in shift):
            raise ValueError(f"translation {e.translation} does not preserve {self.n}-torsion")
        linear = np.array(e.linear, dtype=np.int64)
        images = (self.points @ linear.T + np.array([int(s) for s in shift], dtype=np.int64)) % self.n
        return self.encode(images)


def grid_orbits(group: FiniteGroup, grid: TorsionGrid, generators: Optional[Sequence[int]] = None) -> np.ndarray:
    """Orbit label (smallest member index) of every grid point."""
    gens = list(generators) if generators else (sorted(set(group.generator_names.values()))
                                                 or list(range(group.order)))
    perms = [grid.permutation(group.idx_to_elem(g)) for g in gens]
    labels = np.arange(len(grid), dtype=np.int64)
    while True:
        updated = labels
        for perm in perms:
            updated = np.minimum(updated, updated[perm])
            spread = np.full_like(updated, np.iinfo(np.int64).max)
            np.minimum.at(spread, perm, updated)
            updated = np.minimum(updated, spread)
        if np.array_equal(updated, labels):
            return labels
        labels = updated


@dataclass
class OrbitPartition:
    orbits: List[List[TorsionPoint]]
    stabilizers: List[FiniteGroup]
    closed: bool = True

    @property
    def stabilizer_orders(self) -> List[int]:
        return [s.order for s in self.stabilizers]


def orbits_and_stabilizers(action: TorusAction, points: Sequence[TorsionPoint]) -> OrbitPartition:
    """Orbits of the given points (closure added if needed) with their stabilizer subgroups."""
    group = action.group
    pending = sorted(set(points))
    seen = set(pending)
    closed = True
    orbits: List[List[TorsionPoint]] = []
    stabilizers: List[FiniteGroup] = []
    while pending:
        start = pending.pop(0)
        orbit = {start}
        stabilizer = []
        for g in range(group.order):
            image = apply_affine(group.idx_to_elem(g), start)
            if image == start:
                stabilizer.append(g)
            orbit.add(image)
            if image not in seen:
                closed = False
                seen.add(image)
        pending = [p for p in pending if p not in orbit]
        orbits.append(sorted(orbit))
        stabilizers.append(group.subgroup(stabilizer))
        if len(orbit) * len(stabilizer) != group.order:
            raise ArithmeticError(f"orbit of {start} has size {len(orbit)} with stabilizer of order {len(stabilizer)}")
    if not closed:
        logger.warning(f"Point set was not closed under {action.name or 'the action'}; orbits of the closure reported")
    order = sorted(range(len(orbits)), key=lambda k: orbits[k][0])
    return OrbitPartition([orbits[k] for k in order], [stabilizers[k] for k in order], closed)


def two_torsion(action: TorusAction) -> List[TorsionPoint]:
    return [TorsionPoint(tuple(Fraction(v, 2) for v in p))
            for p in itertools.product(range(2), repeat=action.dimension)]


@dataclass
class BurnsideCheck:
    orbit_count: int
    average_fixed: Fraction

    @property
    def holds(self) -> bool:
        return self.average_fixed == self.orbit_count


def burnside_check(action: TorusAction, n: int) -> BurnsideCheck:
    """Orbit count on n-torsion against (1/|G|) sum_g |Fix_n(g)|, fixed points from the Smith form."""
    group = action.group
    grid = TorsionGrid(n, action.dimension)
    orbit_count = len(np.unique(grid_orbits(group, grid)))
    total = 0
    for c in group.conjugacy_classes():
        total += c.size * len(fixed_torsion_points(group.idx_to_elem(c.representative), n))
    return BurnsideCheck(orbit_count, Fraction(total, group.order))


@dataclass
class ConjugationCheck:
    """Fixed n-torsion counts of every member of every conjugacy class."""

    torsion: int
    counts: List[List[int]]

    @property
    def holds(self) -> bool:
        return all(len(set(c)) == 1 for c in self.counts)

    def unequal_classes(self) -> List[int]:
        return [k for k, c in enumerate(self.counts) if len(set(c)) != 1]


def conjugation_check(action: TorusAction, n: int) -> ConjugationCheck:
    """|Fix_n(g)| = |Fix_n(h g h^-1)| for each class, one member per coset of the centralizer."""
    group = action.group
    counts = []
    for c in group.conjugacy_classes():
        counts.append([len(fixed_torsion_points(group.idx_to_elem(g), n)) for g in sorted(c.members)])
    check = ConjugationCheck(n, counts)
    if not check.holds:
        logger.error(f"conjugate elements fix different numbers of {n}-torsion points in classes "
                     f"{check.unequal_classes()}")
    return check


@dataclass
class IsogenyKernel:
    order: int
    invariant_factors: List[int]
    generators: List[TorsionPoint]


def isogeny_kernel(matrix: Sequence[Sequence[int]]) -> IsogenyKernel:
    """Kernel of x -> M x on R^m / Z^m."""
    if determinant(matrix) == 0:
        raise SingularMatrixError("isogeny matrix has zero determinant")
    order, factors, generators = kernel_on_torus(matrix)
    return IsogenyKernel(order, factors, [TorsionPoint(g) for g in generators])


def kernel_points(kernel: IsogenyKernel) -> List[TorsionPoint]:
    points = {TorsionPoint(tuple(Fraction(0) for _ in kernel.generators[0].coords))} if kernel.generators else set()
    for g, d in zip(kernel.generators, kernel.invariant_factors):
        points = {TorsionPoint(tuple(a + k * b for a, b in zip(p.coords, g.coords))) for p in points for k in range(d)}
    return sorted(points)


def intertwines(isogeny: Sequence[Sequence[int]], source: Sequence[TorusElement], target: Sequence[TorusElement]) -> bool:
    return all(int_mat_mul(isogeny, s.linear) == int_mat_mul(t.linear, isogeny) for s, t in zip(source, target))


@dataclass
class SmoothnessVerdict:
    smooth: bool
    checked_points: int
    witnesses: List[TorsionPoint] = field(default_factory=list)

    def to_json(self) -> Dict:
        return {"smooth": self.smooth, "checked_points": self.checked_points,
                "witnesses": [w.serialize() for w in self.witnesses[:8]]}


def _fixed_mask(group: FiniteGroup, grid: TorsionGrid) -> np.ndarray:
    """fixed[g, p] is True when element g fixes grid point p."""
    perms = np.stack([grid.permutation(group.idx_to_elem(g)) for g in range(group.order)])
    return perms == np.arange(len(grid))[None, :]


def stabilizer_profile(action: TorusAction, n: int) -> Dict[int, int]:
    fixed = _fixed_mask(action.group, TorsionGrid(n, action.dimension))
    orders, counts = np.unique(fixed.sum(axis=0), return_counts=True)
    return {int(o): int(c) for o, c in zip(orders, counts)}


def smoothness_check(action: TorusAction, n: int) -> SmoothnessVerdict:
    """Every stabilizer of a fixed n-torsion point is generated by pseudo-reflections."""
    group = action.group
    grid = TorsionGrid(n, action.dimension)
    fixed = _fixed_mask(group, grid)
    stabilized = np.nonzero(fixed.sum(axis=0) > 1)[0]
    reflections = [g for g in range(group.order) if is_pseudo_reflection(group.idx_to_elem(g))]
    verdicts: Dict[FrozenSet[int], bool] = {}
    witnesses = []
    for idx in stabilized:
        stabilizer = frozenset(int(g) for g in np.nonzero(fixed[:, idx])[0])
        if stabilizer not in verdicts:
            generated = group.generated_indices([g for g in reflections if g in stabilizer])
            verdicts[stabilizer] = len(generated) == len(stabilizer)
        if not verdicts[stabilizer]:
            witnesses.append(grid.point(int(idx)))
    verdict = SmoothnessVerdict(not witnesses, len(stabilized), witnesses)
    logger.info(f"Smoothness of {action.name or 'quotient'} at {n}-torsion: {verdict.smooth} "
                f"({len(stabilized)} stabilized points, {len(witnesses)} witnesses)")
    return verdict


@dataclass
class ClassCensus:
    """Coarse fixed-locus piece X^g / C(g) for one conjugacy class, at torsion level."""

    class_index: int
    representative: int
    class_size: int
    dimension: int
    component_count: int
    torsion_component_count: int
    quotient_component_count: int
    rational_flags: List[bool] = field(default_factory=list)

    def to_json(self) -> Dict:
        return {
            "class": self.class_index,
            "class_size": self.class_size,
            "dimension": self.dimension,
            "component_count": self.component_count,
            "torsion_component_count": self.torsion_component_count,
            "quotient_component_count": self.quotient_component_count,
            "rational": self.rational_flags,
        }


def _acts_trivially_on(linear: Sequence[Sequence[int]], lattice: Sequence[Sequence[int]]) -> bool:
    return all(int_mat_vec(linear, s) == list(s) for s in lattice)


def class_census(action: TorusAction, class_index: int, n: int) -> ClassCensus:
    """Components of Fix(g) and their classes under the centralizer of g.

    A one-dimensional quotient component is rational when some centralizer
    element preserving it moves its tangent direction.
    """
    group = action.group
    cls = group.conjugacy_classes()[class_index]
    g = cls.representative
    fixed = fixed_components(group.idx_to_elem(g), n, g)
    centralizer = group.centralizer_indices(g)
    keys = sorted(fixed.components)
    parent = {k: k for k in keys}

    def find(k):
        while parent[k] != k:
            k = parent[k]
        return k

    preserving: Dict[Tuple, List[int]] = {k: [] for k in keys}
    for h in centralizer:
        element = group.idx_to_elem(h)
        for k in keys:
            image = fixed.component_of(apply_affine(element, fixed.components[k][0]))
            if image == k:
                preserving[k].append(h)
            else:
                a, b = find(k), find(image)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    roots = sorted({find(k) for k in keys})
    flags = []
    if fixed.dimension == 1:
        for root in roots:
            members = [k for k in keys if find(k) == root]
            flags.append(any(not _acts_trivially_on(group.idx_to_elem(h).linear, fixed.identity_lattice)
                             for k in members for h in preserving[k]))
    return ClassCensus(class_index, g, cls.size, fixed.dimension, fixed.component_count,
                       fixed.torsion_component_count, len(roots), flags)


def linear_class_census(group: FiniteGroup, class_index: int) -> ClassCensus:
    """Same record for a linear action on affine space: the fixed locus is one linear subspace."""
    cls = group.conjugacy_classes()[class_index]
    element = group.idx_to_elem(cls.representative)
    n = element.conductor
    matrix = mat_sub(element.as_matrix(), identity_matrix(element.dimension, n))
    basis = nullspace(matrix, element.dimension, n)
    flags = []
    if len(basis) == 1:
        flags.append(any(
            not matrices_equal(restrict_action(group.idx_to_elem(h).as_matrix(), basis), identity_matrix(1, n))
            for h in group.centralizer_indices(cls.representative)))
    return ClassCensus(class_index, cls.representative, cls.size, len(basis), 1, 1, 1, flags)


def default_torsion(group: FiniteGroup, kind: Optional[str] = None) -> int:
    if kind == "type-c":
        return 4
    return 2 * group.exponent()


@dataclass
class DescentCheck:
    """Orbit counts on both sides of the descent bijection for one class of H."""

    h_class: int
    upstairs: int
    downstairs: int
    bijective: bool

    def to_json(self) -> Dict:
        return {"h_class": self.h_class, "upstairs": self.upstairs, "downstairs": self.downstairs,
                "bijective": self.bijective}


@dataclass
class DescentReport:
    checks: List[DescentCheck]
    k_orbits: int
    expected_k_orbits: Optional[Fraction]
    isogeny_image: int

    @property
    def matches(self) -> bool:
        counts = self.k_orbits == self.isogeny_image and (
            self.expected_k_orbits is None or self.expected_k_orbits == self.k_orbits)
        return counts and all(c.bijective and c.upstairs == c.downstairs for c in self.checks)


def descent_census(group: FiniteGroup, translations: Sequence[int], h_indices: Sequence[int], n: int,
                   dimension: int) -> DescentReport:
    """Compare sum_i Fix(k_i h)/C_G(k_i h) with Fix_{X/K}(h)/C_H(h) on n-torsion.

    translations are the indices of K in the group, h_indices those of H.
    """
    k_set = set(translations)
    for k in translations:
        element = group.idx_to_elem(k)
        if k == group.identity_idx:
            continue
        if not element.is_translation() or fixed_torsion_points(element, n):
            raise NotFreeError(f"element {k} of K is not a fixed-point-free translation")
    grid = TorsionGrid(n, dimension)
    size = len(grid)
    k_labels = grid_orbits(group, grid, [k for k in translations if k != group.identity_idx] or [group.identity_idx])
    k_orbits = len(np.unique(k_labels))

    translation_points = [group.idx_to_elem(k).translation for k in translations]
    basis = quotient_lattice_basis(translation_points, dimension)
    to_quotient = change_coordinates(basis)
    images = {tuple(Fraction(v) % 1 for v in int_mat_vec(to_quotient, grid.point(i).coords)) for i in range(size)}
    denominators = all((n * t).denominator == 1 for p in translation_points for t in p)
    expected = Fraction(size, len(k_set)) if denominators else None

    def project(g: int) -> int:
        for h in h_indices:
            k = group.mult_idx(g, group.inv_idx(h))
            if k in k_set:
                return h
        raise ValueError(f"element {g} is not in K H")

    h_group = group.subgroup(h_indices)
    h_local = {group.elem_to_idx(h_group.idx_to_elem(i)): i for i in range(h_group.order)}
    checks = []
    for c_index, cls in enumerate(h_group.conjugacy_classes()):
        h = group.elem_to_idx(h_group.idx_to_elem(cls.representative))
        # upstairs: classes of G whose image in H is conjugate to h
        upstairs_orbits: List[FrozenSet[int]] = []
        for g_cls in group.conjugacy_classes():
            if h_local[project(g_cls.representative)] not in cls.members:
                continue
            # the member lying over h itself, so both sides live over Fix(h)
            g = min(m for m in g_cls.members if project(m) == h)
            perm = grid.permutation(group.idx_to_elem(g))
            fixed = np.nonzero(perm == np.arange(size))[0]
            if not len(fixed):
                continue
            centralizer = group.centralizer_indices(g)
            labels = grid_orbits(group, grid, centralizer)
            for label in np.unique(labels[fixed]):
                upstairs_orbits.append(frozenset(int(v) for v in np.unique(k_labels[fixed[labels[fixed] == label]])))
        # downstairs: K-orbits preserved by h, up to C_H(h)
        perm_h = grid.permutation(group.idx_to_elem(h))
        preserved = {int(v) for v in np.unique(k_labels) if k_labels[perm_h[v]] == v}
        c_h = [group.elem_to_idx(h_group.idx_to_elem(i)) for i in h_group.centralizer_indices(cls.representative)]
        perms = [grid.permutation(group.idx_to_elem(x)) for x in c_h]
        downstairs: List[FrozenSet[int]] = []
        remaining = set(preserved)
        while remaining:
            start = min(remaining)
            orbit = {int(k_labels[p[start]]) for p in perms} | {start}
            remaining -= orbit
            downstairs.append(frozenset(orbit))
        bijective = sorted(map(sorted, upstairs_orbits)) == sorted(map(sorted, downstairs))
        checks.append(DescentCheck(c_index, len(upstairs_orbits), len(downstairs), bijective))
    report = DescentReport(checks, k_orbits, expected, len(images))
    logger.info(f"Descent census at {n}-torsion: {[(c.upstairs, c.downstairs) for c in checks]}")
    return report
