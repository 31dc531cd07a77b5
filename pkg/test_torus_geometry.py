"""
Tests for fixed loci, orbits, isogeny kernels and smoothness on small tori.
"""

from fractions import Fraction

import numpy as np
import pytest

from finite_groups import TorusElement, generate_group
from scenario_loader import load_scenario
from torus_geometry import (
    EISENSTEIN_CM,
    GAUSSIAN_CM,
    NotFreeError,
    NotHolomorphicError,
    OddKernelRankError,
    SingularMatrixError,
    TorsionBoundTooSmallError,
    TorsionGrid,
    TorsionPoint,
    TorusAction,
    apply_affine,
    burnside_check,
    class_census,
    conjugation_check,
    descent_census,
    fixed_components,
    fixed_dimension,
    fixed_torsion_points,
    grid_orbits,
    intertwines,
    isogeny_kernel,
    kernel_points,
    orbits_and_stabilizers,
    smoothness_check,
    stabilizer_profile,
    two_torsion,
)

MINUS = TorusElement([[-1, 0], [0, -1]])
ROTATION = TorusElement([list(row) for row in GAUSSIAN_CM])


@pytest.fixture(scope="module")
def mu4_on_curve():
    return TorusAction(generate_group([ROTATION]), 1, [GAUSSIAN_CM], "E/mu4")


@pytest.fixture(scope="module")
def minus_on_surface():
    minus = TorusElement([[-1 if i == j else 0 for j in range(4)] for i in range(4)])
    return TorusAction(generate_group([minus]), 2, [GAUSSIAN_CM, GAUSSIAN_CM], "Kummer")


def test_torsion_points():
    p = TorsionPoint((Fraction(3, 2), Fraction(-1, 3)))
    assert p.coords == (Fraction(1, 2), Fraction(2, 3))
    assert p.order == 6
    assert str(p) == "(1/2, 2/3)"
    assert TorsionPoint.from_complex((Fraction(1, 2), 0), (0, Fraction(1, 2))).coords == \
        (Fraction(1, 2), 0, 0, Fraction(1, 2))


def test_fixed_points_of_minus_one():
    assert fixed_dimension(MINUS) == 0
    points = fixed_torsion_points(MINUS, 2)
    assert len(points) == 4
    census = fixed_components(MINUS, 2)
    assert census.component_count == 4
    assert census.torsion_component_count == 4
    assert fixed_torsion_points(MINUS, 4) == points


def test_free_translation_has_empty_fixed_locus():
    half = TorusElement([[1, 0], [0, 1]], [Fraction(1, 2), 0])
    assert fixed_dimension(half) == 1
    assert fixed_torsion_points(half, 4) == []
    census = fixed_components(half, 4)
    assert census.component_count == 0
    assert census.points == []


def test_identity_has_one_component():
    identity = TorusElement([[1, 0], [0, 1]])
    census = fixed_components(identity, 2)
    assert census.dimension == 1
    assert census.component_count == 1
    assert census.torsion_component_count == 1
    assert len(census.points) == 4


def test_torsion_bound_too_small():
    shifted = TorusElement([[-1, 0], [0, -1]], [Fraction(1, 4), 0])
    with pytest.raises(TorsionBoundTooSmallError) as info:
        fixed_components(shifted, 2)
    assert info.value.needed == 8
    assert len(fixed_components(shifted, 8).points) == 4


@pytest.mark.parametrize("linear, n, needed, components", [
    ([list(row) for row in GAUSSIAN_CM], 1, 2, 2),
    ([list(row) for row in EISENSTEIN_CM], 1, 3, 3),
    ([list(row) for row in EISENSTEIN_CM], 2, 6, 3),
])
def test_partly_missed_components_are_not_undercounted(linear, n, needed, components):
    # the origin is always fixed, so only some components are missed
    rotation = TorusElement(linear)
    with pytest.raises(TorsionBoundTooSmallError) as info:
        fixed_components(rotation, n)
    assert info.value.needed == needed
    census = fixed_components(rotation, needed)
    assert census.torsion_component_count == census.component_count == components


def test_odd_kernel_rank():
    with pytest.raises(OddKernelRankError):
        fixed_dimension(TorusElement([[1, 0], [0, -1]]))


def test_holomorphy_is_checked():
    reflection = generate_group([TorusElement([[1, 0], [0, -1]])])
    with pytest.raises(NotHolomorphicError):
        TorusAction(reflection, 1, [GAUSSIAN_CM])


def test_orbits_on_two_torsion(mu4_on_curve):
    partition = orbits_and_stabilizers(mu4_on_curve, two_torsion(mu4_on_curve))
    assert partition.closed
    assert [len(o) for o in partition.orbits] == [1, 2, 1]
    assert partition.stabilizer_orders == [4, 2, 4]


def test_orbits_of_an_open_point_set(mu4_on_curve):
    partition = orbits_and_stabilizers(mu4_on_curve, [TorsionPoint((Fraction(1, 2), 0))])
    assert not partition.closed
    assert len(partition.orbits[0]) == 2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_burnside(mu4_on_curve, n):
    check = burnside_check(mu4_on_curve, n)
    assert check.holds
    grid = TorsionGrid(n, 2)
    assert check.orbit_count == len(np.unique(grid_orbits(mu4_on_curve.group, grid)))


def test_grid_round_trip():
    grid = TorsionGrid(3, 2)
    assert len(grid) == 9
    p = TorsionPoint((Fraction(1, 3), Fraction(2, 3)))
    assert grid.point(grid.index_of(p)) == p
    with pytest.raises(ValueError):
        grid.permutation(TorusElement([[1, 0], [0, 1]], [Fraction(1, 2), 0]))


def test_stabilizer_profile(mu4_on_curve):
    assert stabilizer_profile(mu4_on_curve, 2) == {2: 2, 4: 2}


def test_smoothness(mu4_on_curve, minus_on_surface):
    assert smoothness_check(mu4_on_curve, 2).smooth
    verdict = smoothness_check(minus_on_surface, 2)
    assert not verdict.smooth
    assert verdict.checked_points == 16
    assert len(verdict.witnesses) == 16
    assert len(verdict.to_json()["witnesses"]) == 8


def test_isogeny_kernel():
    kernel = isogeny_kernel([[2, 0], [0, 1]])
    assert kernel.order == 2
    assert kernel.invariant_factors == [2]
    assert kernel.generators == [TorsionPoint((Fraction(1, 2), 0))]
    assert len(kernel_points(kernel)) == 2
    doubling = isogeny_kernel([[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert doubling.order == 4
    assert len(kernel_points(doubling)) == 4
    with pytest.raises(SingularMatrixError):
        isogeny_kernel([[1, 1], [1, 1]])


def test_intertwining():
    doubling = [[2, 0], [0, 2]]
    assert intertwines(doubling, [ROTATION], [ROTATION])
    assert not intertwines([[2, 0], [0, 1]], [ROTATION], [ROTATION])


def test_class_census_of_elliptic_involution():
    action = TorusAction(generate_group([MINUS]), 1, [GAUSSIAN_CM])
    classes = action.group.conjugacy_classes()
    identity = class_census(action, 0, 2)
    assert identity.dimension == 1
    assert identity.quotient_component_count == 1
    assert identity.rational_flags == [True]
    minus_class = next(k for k, c in enumerate(classes) if c.representative != action.group.identity_idx)
    points = class_census(action, minus_class, 2)
    assert points.dimension == 0
    assert points.component_count == 4
    assert points.quotient_component_count == 4
    assert points.rational_flags == []


def test_apply_affine():
    shifted = TorusElement([[-1, 0], [0, -1]], [Fraction(1, 2), 0])
    assert apply_affine(MINUS, TorsionPoint((Fraction(1, 4), Fraction(1, 2)))) == \
        TorsionPoint((Fraction(3, 4), Fraction(1, 2)))
    assert apply_affine(shifted, TorsionPoint((0, 0))) == TorsionPoint((Fraction(1, 2), 0))
    with pytest.raises(ValueError):
        apply_affine(MINUS, TorsionPoint((0, 0, 0, 0)))


@pytest.fixture(scope="module")
def sign_and_half_shift():
    minus = TorusElement([[-1 if i == j else 0 for j in range(4)] for i in range(4)])
    tau = TorusElement([[1 if i == j else 0 for j in range(4)] for i in range(4)], [Fraction(1, 2)] * 4)
    return generate_group([minus, tau], names=["minus", "tau"])


def test_descent_census(sign_and_half_shift):
    group = sign_and_half_shift
    k = group.generated_indices([group.generator_names["tau"]])
    h = group.generated_indices([group.generator_names["minus"]])
    report = descent_census(group, k, h, 4, 4)
    assert report.k_orbits == 128
    assert report.expected_k_orbits == 128
    assert report.isogeny_image == 128
    assert report.matches


def test_descent_needs_free_translations(sign_and_half_shift):
    group = sign_and_half_shift
    h = group.generated_indices([group.generator_names["minus"]])
    with pytest.raises(NotFreeError):
        descent_census(group, h, h, 4, 4)


@pytest.mark.parametrize("scenario, action", [("s3", "s3"), ("type-c", "A"), ("type-c", "B")])
def test_conjugates_fix_equally_many_points(scenario, action):
    model = load_scenario(scenario).torus(action)
    check = conjugation_check(model.action, model.torsion)
    assert check.holds
    assert check.unequal_classes() == []
    assert len(check.counts) == len(model.group.conjugacy_classes())
    assert check.counts[0] == [model.torsion ** model.action.dimension]
    assert burnside_check(model.action, model.torsion).holds
