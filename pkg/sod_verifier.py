"""
Verification suites for motivic semiorthogonal decompositions.

Each suite loads its objects from a scenario, recomputes every statement it
covers with exact arithmetic and records one Check per comparison. Expected
values come from expectations.json (provenance "cited"), from an independent
computation inside the suite ("derived") or from a structural identity
("trivial"). Informational checks record known disagreements in the cited
material; they are printed but never fail a suite.

Usage:
    python sod_verifier.py verify --scenario g422-local --suite ext-table
    python sod_verifier.py census --scenario type-c --torsion 4
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from equivariant_modules import (
    EquivariantModule,
    check_semiorthogonal_sequence,
    ext_profile,
    hilbert_ideal_generators,
    ideal_contains,
    is_exceptional,
    minimal_resolution,
    parse_poly,
    quotient_module,
    semi_invariant_weight,
)
from exact_arithmetic import Cyclotomic
from finite_groups import FiniteGroup, TorusElement, monomial_element
from name_matching import NameMatcher, UnknownNameError
from rep_theory import (
    Character,
    CharacterTable,
    decompose_character,
    inner_product,
    quotient_character,
)
from scenario_loader import (
    Expectation,
    LinearModel,
    ScenarioParseError,
    ScenarioSpec,
    ScenarioValidationError,
    TorusModel,
    load_expectations,
    load_scenario,
)
from torus_geometry import (
    ClassCensus,
    TorsionBoundTooSmallError,
    apply_affine,
    burnside_check,
    class_census,
    conjugation_check,
    descent_census,
    fixed_components,
    fixed_dimension,
    fixed_torsion_points,
    intertwines,
    isogeny_kernel,
    linear_class_census,
    orbits_and_stabilizers,
    smoothness_check,
    stabilizer_profile,
    two_torsion,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SUITES = (
    "rep-theory",
    "fm-images",
    "ext-table",
    "ext-lemma",
    "exceptional-collection",
    "local-assembly",
    "type-c",
    "surfaces",
    "s3",
    "descent",
    "m2xm2-local",
)
SUITE_ALIASES = {"fixed-loci": "type-c"}


class UnknownSuiteError(UnknownNameError):
    def __init__(self, name: str, suggestion: Optional[str] = None):
        super().__init__("suite", name, suggestion)


def _jsonable(value: Any) -> Any:
    """Plain JSON data for a computed or expected value."""
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Cyclotomic) and value.is_rational():
        value = value.to_fraction()
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else str(value)
    if isinstance(value, Cyclotomic):
        return str(value)
    if isinstance(value, Character):
        return value.label or [str(v) for v in value.values]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


@dataclass
class Check:
    anchor: str
    computed: Any
    expected: Any
    provenance: str
    status: str
    cell: Optional[str] = None

    def to_json(self) -> Dict:
        out = {
            "anchor": self.anchor,
            "computed": self.computed,
            "expected": self.expected,
            "provenance": self.provenance,
            "status": self.status,
        }
        if self.cell is not None:
            out["cell"] = self.cell
        return out


@dataclass
class Report:
    suite: str
    scenario: str
    checks: List[Check] = field(default_factory=list)

    @property
    def hard_failures(self) -> List[Check]:
        return [c for c in self.checks if c.status == "fail"]

    @property
    def informational_mismatches(self) -> List[Check]:
        return [c for c in self.checks if c.status == "informational-mismatch"]

    @property
    def passed(self) -> bool:
        return not self.hard_failures

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def summary(self) -> str:
        if not self.passed:
            return f"FAIL: {len(self.hard_failures)} of {len(self.checks)} checks failed"
        mismatches = len(self.informational_mismatches)
        if mismatches:
            return f"PASS with {mismatches} informational mismatches ({len(self.checks)} checks)"
        return f"PASS ({len(self.checks)} checks)"

    def to_json(self) -> Dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "scenario": self.scenario,
            "status": self.status,
            "summary": self.summary(),
            "checks": [c.to_json() for c in self.checks],
        }


class SuiteRun:
    """Collects checks for one suite, looking cited values up by key."""

    def __init__(self, suite: str, spec: ScenarioSpec, expectations: Dict[str, Expectation]):
        self.suite = suite
        self.spec = spec
        self.expectations = expectations
        self.report = Report(suite, spec.name)

    def _expectation(self, key: str) -> Expectation:
        full = f"{self.suite}.{key}"
        if full not in self.expectations:
            raise ScenarioValidationError([f"expectations: missing {full}"])
        return self.expectations[full]

    def _add(self, anchor: str, computed: Any, expected: Any, provenance: str, kind: str = "hard",
             cell: Optional[str] = None) -> Check:
        computed, expected = _jsonable(computed), _jsonable(expected)
        if computed == expected:
            status = "pass"
        elif kind == "informational":
            status = "informational-mismatch"
            logger.warning(f"[{self.suite}] informational mismatch at {anchor!r}{f' {cell}' if cell else ''}: "
                           f"computed {computed}, cited {expected}")
        else:
            status = "fail"
            logger.error(f"[{self.suite}] check failed at {anchor!r}{f' {cell}' if cell else ''}: "
                         f"computed {computed}, expected {expected}")
        check = Check(anchor, computed, expected, provenance, status, cell)
        self.report.checks.append(check)
        return check

    def cited(self, key: str, computed: Any, cell: Optional[str] = None) -> Check:
        record = self._expectation(key)
        return self._add(record.anchor, computed, record.expected, "cited", record.kind, cell)

    def cited_cell(self, key: str, computed: Any, expected: Any, cell: str) -> Check:
        """One cell of a cited table; the anchor and kind are the table's."""
        record = self._expectation(key)
        return self._add(record.anchor, computed, expected, "cited", record.kind, cell)

    def table(self, key: str) -> Any:
        return self._expectation(key).expected

    def derived(self, anchor: str, computed: Any, expected: Any, cell: Optional[str] = None) -> Check:
        return self._add(anchor, computed, expected, "derived", "hard", cell)

    def trivial(self, anchor: str, computed: Any, expected: Any, cell: Optional[str] = None) -> Check:
        return self._add(anchor, computed, expected, "trivial", "hard", cell)


def msod_census(model: Union[LinearModel, TorusModel], n: Optional[int] = None) -> List[ClassCensus]:
    """One coarse fixed-locus record per conjugacy class.

    Ordered by descending fixed dimension, then by class order (canonical
    representatives, identity first).
    """
    group = model.group
    classes = group.conjugacy_classes()
    if isinstance(model, LinearModel):
        entries = [linear_class_census(group, k) for k in range(len(classes))]
    else:
        torsion = n or model.torsion
        entries = [class_census(model.action, k, torsion) for k in range(len(classes))]
        burnside = burnside_check(model.action, torsion)
        if not burnside.holds:
            raise ArithmeticError(f"{burnside.orbit_count} orbits on {torsion}-torsion, "
                                  f"Burnside average {burnside.average_fixed}")
    if sum(e.class_size for e in entries) != group.order:
        raise ArithmeticError(f"class sizes sum to {sum(e.class_size for e in entries)}, not {group.order}")
    return sorted(entries, key=lambda e: (-e.dimension, e.class_index))


def _census_json(group: FiniteGroup, entries: Sequence[ClassCensus], names: Dict[int, str]) -> List[Dict]:
    out = []
    for entry in entries:
        record = entry.to_json()
        record["representative"] = group.idx_to_elem(entry.representative).serialize()
        if entry.class_index in names:
            record["name"] = names[entry.class_index]
        out.append(record)
    return out


def _class_names(group: FiniteGroup, elements: Sequence[int], names: Sequence[str]) -> Dict[int, str]:
    return {group.class_of(g): name for g, name in zip(elements, names)}


def _linear(spec: ScenarioSpec, suite: str) -> LinearModel:
    if spec.linear is None:
        raise ScenarioValidationError([f"suite {suite} needs a linear scenario, {spec.name} is {spec.kind}"], spec.path)
    return spec.linear


def _torus(spec: ScenarioSpec, suite: str, name: Optional[str] = None) -> TorusModel:
    if not spec.actions:
        raise ScenarioValidationError([f"suite {suite} needs a torus scenario, {spec.name} is {spec.kind}"], spec.path)
    return spec.torus(name) if name else next(iter(spec.actions.values()))


def _decompose(chi: Character, table: CharacterTable) -> Dict[str, int]:
    return decompose_character(chi, table)


def _ext_decompositions(source: EquivariantModule, target: EquivariantModule, table: CharacterTable,
                        use_koszul: bool = True) -> List[Dict[str, int]]:
    return [_decompose(chi, table) for chi in ext_profile(source, target, use_koszul).characters]


def _subtract(found: Dict[str, int], part: Dict[str, int]) -> Dict[str, int]:
    out = {k: found.get(k, 0) - part.get(k, 0) for k in set(found) | set(part)}
    return {k: v for k, v in out.items() if v}


def _covered(found: Dict[str, int], wanted: Dict[str, int]) -> Dict[str, int]:
    """The part of wanted that occurs in found."""
    out = {k: min(found.get(k, 0), v) for k, v in wanted.items()}
    return {k: v for k, v in out.items() if v}


def _refs(model: LinearModel, name: str) -> List[str]:
    return list(model.collection(name)["objects"])


def _suite_rep_theory(run: SuiteRun):
    model = _linear(run.spec, run.suite)
    group, table = model.group, model.table
    classes = group.conjugacy_classes()
    run.cited("group-order", group.order)
    run.cited("class-count", len(classes))
    run.cited("class-sizes", sorted(classes.sizes))
    run.cited("centralizer-orders", [len(group.centralizer_indices(g)) for g in model.class_elements])
    run.derived("class equation: class sizes sum to the group order", sum(classes.sizes), group.order)
    run.trivial("listed class representatives are pairwise non-conjugate",
                sorted(group.class_of(g) for g in model.class_elements), list(range(len(classes))))

    run.cited("character-degrees", sorted(table.degrees))
    run.derived("row orthonormality of the character table", table.rows_orthonormal(), True)
    run.derived("column orthogonality of the character table", table.columns_orthogonal(), True)
    trivial = Character.trivial(group)
    linear = [chi for chi in table if chi.degree == 1]
    run.cited("linear-characters-2-torsion", all(chi * chi == trivial for chi in linear))

    chi_v, chi_vd = model.character("V"), model.character("V_dual")
    scalar = group.elem_to_idx(monomial_element(1, 1, 0, model.order))
    run.cited("natural-character-at-scalar", chi_v.at(scalar))
    run.cited("dual-character-at-scalar", chi_vd.at(scalar))
    run.derived("the natural representation is irreducible", inner_product(chi_v, chi_v), 1)
    run.cited("exterior-square", _decompose(chi_v.exterior_square(), table))
    run.derived("exterior square equals the determinant", model.representation("Lambda2V").character() == chi_v.exterior_square(), True)
    run.trivial("dual of the dual character", chi_v.dual().dual() == chi_v, True)
    run.derived("regular character contains each irreducible by its degree",
                _decompose(Character.regular(group), table), {label: chi.degree for label, chi in zip(table.labels, table)})

    run.cited("v-tensor-vdual", _decompose(chi_v * chi_vd, table))
    run.cited("vdual-twists", sorted(label for label, chi in zip(table.labels, table)
                                     if chi.degree == 1 and chi_v * chi == chi_vd))
    square = _decompose(chi_v * chi_v, table)
    run.cited("v-tensor-v", square)
    run.cited("v-tensor-v-statement", square)
    run.derived("V tensor V splits as symmetric plus exterior square",
                _decompose(chi_v.symmetric_square() + chi_v.exterior_square(), table), square)
    run.cited("chi2-in-v-squared", inner_product(chi_v * chi_v, model.character("chi2")))

    run.cited("center-order", len(group.center_indices()))
    quotients = set()
    for g in model.class_elements:
        centralizer = group.centralizer_indices(g)
        if 2 * len(centralizer) == group.order:
            quotients.add(table.label_of(quotient_character(group, centralizer)))
    run.cited("centralizer-quotient-characters", sorted(quotients))


def _suite_fm_images(run: SuiteRun):
    model = _linear(run.spec, run.suite)
    group, table = model.group, model.table
    images = run.table("module-dimensions")
    run.cited("module-dimensions", {name: model.module(name).dimension for name in images})
    for name in sorted(images):
        module = model.module(name)
        if len(module.ideal) == 2:
            first, second = module.ideal
            run.derived("complete intersections have length equal to the product of degrees",
                        module.dimension, first.degree() * second.degree(), cell=name)
    run.cited("phi1-regular", model.module("Phi1").character() == Character.regular(group))
    for name in ("Phi2", "Phi3", "Phi4", "M"):
        run.cited(f"{name.lower()}-decomposition", _decompose(model.module(name).character(), table))

    weights = {}
    for text in run.table("semi-invariant-weights"):
        weight = semi_invariant_weight(group, parse_poly(text, model.variables, model.conductor))
        weights[text] = table.label_of(weight) if weight is not None else None
    run.cited("semi-invariant-weights", weights)

    phi1 = model.module("Phi1")
    hilbert = hilbert_ideal_generators(group, max(f.degree() for f in phi1.ideal))
    run.cited("hilbert-ideal-degrees", sorted(f.degree() for f in hilbert))
    same = all(ideal_contains(hilbert, f) for f in phi1.ideal) and all(ideal_contains(phi1.ideal, f) for f in hilbert)
    run.derived("the first image ideal is generated by the positive-degree invariants", same, True)
    run.cited("phi1-basis-listing", phi1.dimension)


def _suite_ext_lemma(run: SuiteRun):
    model = _linear(run.spec, run.suite)
    table = model.table
    o0 = model.module("O0")
    endo = ext_profile(o0, o0)
    run.cited("endomorphisms-o0", [_decompose(chi, table) for chi in endo.characters])
    run.cited("endomorphisms-o0-invariants", list(endo.invariants))
    for name in ("Phi1", "Phi2", "Phi3", "Phi4"):
        run.cited(f"rhom-o0-{name.lower()}", _ext_decompositions(o0, model.module(name), table))

    for source, target in run.table("phi-vanishing"):
        invariants = ext_profile(model.module(source), model.module(target)).invariants
        run.cited_cell("phi-vanishing", list(invariants), [0, 0, 0], f"({source}, {target})")

    ext1 = _ext_decompositions(model.module("Phi2"), model.module("Phi3"), table)[1]
    cokernel = run.table("phi2-phi3-cokernel")
    run.cited("phi2-phi3-cokernel", _covered(ext1, cokernel))
    run.cited("phi2-phi3-kernel", _subtract(ext1, cokernel))

    det = model.representation("Lambda2V")
    refs = _refs(model, "serre")
    twisted: Dict[str, EquivariantModule] = {}
    for a in refs:
        twisted[a] = model.module(a).twisted(det, f"{a}*Lambda2V")
    for a in refs:
        for b in refs:
            forward = ext_profile(model.module(a), model.module(b)).invariants
            backward = ext_profile(model.module(b), twisted[a]).invariants
            run.derived("Serre duality: invariant Ext^i(A, B) matches Ext^(2-i)(B, A tensor det)",
                        list(forward), list(reversed(backward)), cell=f"({a}, {b})")

    for name in refs:
        module = model.module(name)
        if len(module.ideal) != 2:
            continue
        for target in ("O0", name):
            koszul = _ext_decompositions(module, model.module(target), table, use_koszul=True)
            general = _ext_decompositions(module, model.module(target), table, use_koszul=False)
            run.derived("Koszul and general resolutions give the same Ext", koszul, general,
                        cell=f"({name}, {target})")


def _suite_ext_table(run: SuiteRun):
    model = _linear(run.spec, run.suite)
    labels = model.irreducible_order
    nonvanishing = run.table("nonvanishing")
    endo = ext_profile(model.module("O0"), model.module("O0")).characters
    total = endo[0] + endo[1] + endo[2]
    computed_count = 0
    predicted_count = 0
    for rho in labels:
        for sigma in labels:
            profile = ext_profile(model.module(f"O0*{rho}"), model.module(f"O0*{sigma}"))
            nonzero = any(profile.invariants)
            computed_count += nonzero
            run.cited_cell("nonvanishing", nonzero, sigma in nonvanishing[rho], f"({rho}, {sigma})")
            predicted = inner_product(total * model.character(sigma), model.character(rho))
            predicted_count += not predicted.is_zero()
    run.derived("non-vanishing cells agree with (Ext(O0, O0) tensor sigma, rho) != 0", computed_count, predicted_count)


def _suite_exceptional_collection(run: SuiteRun):
    model = _linear(run.spec, run.suite)
    table = model.table
    refs = _refs(model, "exceptional")
    objects = [model.module(r) for r in refs]
    report = check_semiorthogonal_sequence(objects)
    run.cited("collection-violations", report.to_json()["violations"])
    backwards = check_semiorthogonal_sequence(list(reversed(objects)))
    run.cited("reversed-collection-passes", backwards.passed)
    m = model.module("M")
    run.cited("m-exceptional", is_exceptional(m))
    resolution = minimal_resolution(m)
    run.trivial("M is resolved by a Koszul complex", resolution.koszul, True)
    run.cited("m-generator-weights", _decompose(resolution.generator_reps[1].character(), table))
    factors = set()
    for module in objects:
        factors |= set(_decompose(module.character(), table))
    run.cited("composition-factors", sorted(factors))


def _self_ext_shadow(dimension: int) -> List[int]:
    return [1, dimension, dimension * (dimension - 1) // 2]


def _suite_local_assembly(run: SuiteRun):
    model = _linear(run.spec, run.suite)
    group = model.group
    assembly = model.collection("assembly")
    refs = list(assembly["objects"])
    position = {r: k for k, r in enumerate(refs)}
    pairs = [(position[a], position[b]) for a, b in assembly.get("completely_orthogonal", [])]
    report = check_semiorthogonal_sequence([model.module(r) for r in refs], require_exceptional=False,
                                           completely_orthogonal=pairs)
    run.cited("assembly-violations", report.to_json()["violations"])
    tail = assembly.get("exceptional_from", 0)
    run.cited("assembly-exceptional-tail", report.exceptional[tail:])
    classes = dict(zip(model.class_names, model.class_elements))
    shadows = {}
    for piece, class_name in assembly.get("pieces", {}).items():
        k = position[piece]
        shadows[piece] = list(report.matrix[(k, k)])
        dimension = linear_class_census(group, group.class_of(classes[class_name])).dimension
        run.derived("self-Ext of an image matches the Ext algebra of a smooth point of its piece",
                    shadows[piece], _self_ext_shadow(dimension), cell=piece)
    run.cited("self-ext-shadows", shadows)


def _suite_m2xm2_local(run: SuiteRun):
    model = _linear(run.spec, run.suite)
    group = model.group
    curves = model.collection("curves")
    refs = list(curves["objects"])
    position = {r: k for k, r in enumerate(refs)}
    pairs = [(position[a], position[b]) for a, b in curves.get("completely_orthogonal", [])]
    report = check_semiorthogonal_sequence([model.module(r) for r in refs], require_exceptional=False,
                                           completely_orthogonal=pairs)
    run.cited("curve-collection-violations", report.to_json()["violations"])
    run.cited("point-exceptional", report.exceptional[-1])
    run.cited("self-ext-shadows", {r: list(report.matrix[(k, k)]) for r, k in position.items()})

    stated = model.module("stated")
    run.cited("stated-module-ranks", list(minimal_resolution(stated).ranks))
    run.cited("stated-module-orthogonality", list(ext_profile(model.module("point"), stated).invariants))

    subgroup = group.subgroup(model.subgroup_indices("mu2"))
    hilbert = hilbert_ideal_generators(subgroup, 2)
    run.cited("mu2-hilbert-ideal", [f.to_string(model.variables) for f in hilbert])
    run.cited("mu2-length", quotient_module(subgroup, hilbert, variables=model.variables).dimension)


def _torus_invariants(run: SuiteRun, model: TorusModel, n: int, cell: Optional[str] = None):
    """Burnside and conjugation invariance of fixed-point counts on n-torsion."""
    prefix = f"{cell}, " if cell else ""
    burnside = burnside_check(model.action, n)
    run.derived("Burnside: orbit count equals the average number of fixed points",
                burnside.average_fixed, burnside.orbit_count, cell=cell)
    conjugation = conjugation_check(model.action, n)
    for k, counts in enumerate(conjugation.counts):
        run.derived("conjugate elements fix equally many torsion points",
                    counts, [counts[0]] * len(counts), cell=f"({prefix}class {k})")


def _generators_by_name(model: TorusModel, names: Sequence[str]) -> List[TorusElement]:
    group = model.group
    return [group.idx_to_elem(group.generator_names[n]) for n in names]


def _suite_type_c(run: SuiteRun):
    a = _torus(run.spec, run.suite, "A")
    b = _torus(run.spec, run.suite, "B")
    group = a.group
    n = a.torsion
    run.cited("group-order", group.order)
    run.cited("class-count", len(group.conjugacy_classes()))

    elements = [group.idx_to_elem(g) for g in a.class_elements]
    run.cited("fixed-dimensions", [fixed_dimension(e) for e in elements])
    censuses = [fixed_components(e, n, g) for e, g in zip(elements, a.class_elements)]
    for name, census in zip(a.class_names[:4], censuses[:4]):
        run.cited(f"component-count-{name.lower()}", census.component_count)
    for name, census in zip(a.class_names, censuses):
        run.derived("every component of the fixed locus meets the torsion grid",
                    census.torsion_component_count, census.component_count, cell=name)

    partition = orbits_and_stabilizers(a.action, two_torsion(a.action))
    run.cited("two-torsion-orbits", len(partition.orbits))
    by_kind: Dict[str, set] = {"e-t0-pairs": set(), "other": set()}
    for orbit, stabilizer in zip(partition.orbits, partition.stabilizers):
        for p in orbit:
            c = p.coords
            kind = "e-t0-pairs" if c[0] == c[1] and c[2] == c[3] else "other"
            by_kind[kind].add(stabilizer.order)
    run.cited("two-torsion-stabilizers", {k: sorted(v) for k, v in by_kind.items()})
    profile = stabilizer_profile(a.action, n)
    run.cited("nontrivial-stabilizer-orders", sorted(o for o in profile if o > 1))

    nu = run.spec.isogenies["nu"]
    kernel = isogeny_kernel(nu["matrix"])
    run.cited("isogeny-kernel-order", kernel.order)
    run.cited("isogeny-kernel-generators", [p.serialize() for p in kernel.generators])
    names = sorted(a.group.generator_names)
    run.derived("the isogeny intertwines the two lattice models",
                intertwines(nu["matrix"], _generators_by_name(b, names), _generators_by_name(a, names)), True)

    run.cited("smooth-a", smoothness_check(a.action, n).smooth)
    run.cited("smooth-b", smoothness_check(b.action, b.torsion).smooth)
    _torus_invariants(run, a, n)
    run.cited("census-dimensions", [e.dimension for e in msod_census(a, n)])


def _orbit_count(points: Sequence, elements: Sequence[TorusElement]) -> int:
    """Orbits of a finite point set under a group, by brute force."""
    remaining = set(points)
    count = 0
    while remaining:
        start = remaining.pop()
        remaining -= {apply_affine(e, start) for e in elements}
        count += 1
    return count


def _suite_surfaces(run: SuiteRun):
    class_counts, dimension_counts, lines, points = {}, {}, {}, {}
    for key, model in sorted(run.spec.actions.items()):
        group = model.group
        census = msod_census(model)
        class_counts[key] = len(census)
        dimension_counts[key] = [sum(1 for e in census if e.dimension == d) for d in (2, 1, 0)]
        lines[key] = sum(sum(e.rational_flags) for e in census if e.dimension == 1)
        points[key] = sum(e.quotient_component_count for e in census if e.dimension == 0)
        for entry in census:
            if entry.dimension:
                continue
            fixed = fixed_torsion_points(group.idx_to_elem(entry.representative), model.torsion)
            centralizer = [group.idx_to_elem(h) for h in group.centralizer_indices(entry.representative)]
            run.derived("zero-dimensional pieces count orbits of fixed points under the centralizer",
                        entry.quotient_component_count, _orbit_count(fixed, centralizer),
                        cell=f"({key}, class {entry.class_index})")
        _torus_invariants(run, model, model.torsion, cell=key)
    run.cited("class-counts", class_counts)
    run.cited("dimension-counts", dimension_counts)
    run.cited("first-census-dimensions", [e.dimension for e in msod_census(run.spec.torus("n1"))])
    run.cited("projective-line-copies", {k: v for k, v in lines.items() if k != "n1"})
    run.cited("point-copies", {k: v for k, v in points.items() if k != "n1"})
    n2 = run.spec.torus("n2")
    scalar = n2.group.class_of(n2.class_elements[0])
    run.cited("n2-point-row", class_census(n2.action, scalar, n2.torsion).quotient_component_count)


def _suite_s3(run: SuiteRun):
    model = _torus(run.spec, run.suite, "s3")
    group, n = model.group, model.torsion
    named = dict(zip(model.class_names, model.class_elements))
    transposition, cycle = named["transposition"], named["three-cycle"]
    t_fixed = fixed_components(group.idx_to_elem(transposition), n, transposition)
    run.cited("transposition-fixed-locus", {"dimension": t_fixed.dimension, "components": t_fixed.component_count})
    run.cited("transposition-rational", class_census(model.action, group.class_of(transposition), n).rational_flags)

    points = fixed_torsion_points(group.idx_to_elem(cycle), n)
    run.cited("three-cycle-fixed-points", len(points))
    run.cited("three-cycle-graph", len({p.coords[:2] for p in points}) == len(points))
    run.cited("three-cycle-diagonal", all(p.coords[:2] == p.coords[2:] for p in points))
    run.cited("three-cycle-quotient-components",
              class_census(model.action, group.class_of(cycle), n).quotient_component_count)
    for name, g in named.items():
        if g == group.identity_idx:
            continue
        fixed = fixed_torsion_points(group.idx_to_elem(g), n)
        still = all(apply_affine(group.idx_to_elem(h), p) == p
                    for h in group.centralizer_indices(g) for p in fixed)
        run.derived("centralizers act trivially on the fixed loci", still, True, cell=name)
    _torus_invariants(run, model, n)
    run.cited("census-dimensions", [e.dimension for e in msod_census(model)])


def _suite_descent(run: SuiteRun):
    if not run.spec.descent:
        raise ScenarioValidationError([f"suite {run.suite} needs descent cases in {run.spec.name}"], run.spec.path)
    for case in run.spec.descent:
        model = run.spec.actions[case["action"]]
        n = case["torsion"] or model.torsion
        report = descent_census(model.group, case["translations"], case["complement"], n, model.action.dimension)
        _torus_invariants(run, model, n, cell=case["name"])
        run.derived("K-orbits on torsion match the isogeny image", report.k_orbits, report.isogeny_image,
                    cell=case["name"])
        if report.expected_k_orbits is not None:
            run.derived("K-orbits on n-torsion number n^(2g) / |K|", report.k_orbits, report.expected_k_orbits,
                        cell=case["name"])
        for check in report.checks:
            run.derived("fixed-locus pieces upstairs biject with those of X/K",
                        [check.upstairs, check.bijective], [check.downstairs, True],
                        cell=f"({case['name']}, class {check.h_class})")


SUITE_RUNNERS: Dict[str, Callable[[SuiteRun], None]] = {
    "rep-theory": _suite_rep_theory,
    "fm-images": _suite_fm_images,
    "ext-table": _suite_ext_table,
    "ext-lemma": _suite_ext_lemma,
    "exceptional-collection": _suite_exceptional_collection,
    "local-assembly": _suite_local_assembly,
    "type-c": _suite_type_c,
    "surfaces": _suite_surfaces,
    "s3": _suite_s3,
    "descent": _suite_descent,
    "m2xm2-local": _suite_m2xm2_local,
}


def resolve_suite(name: str) -> str:
    try:
        return NameMatcher("suite", SUITES, SUITE_ALIASES).resolve(name)
    except UnknownNameError as e:
        raise UnknownSuiteError(name, e.suggestion) from e


def run_suite(spec: ScenarioSpec, suite: str, expectations: Optional[Dict[str, Expectation]] = None) -> Report:
    """Run one named suite on a loaded scenario."""
    name = resolve_suite(suite)
    if spec.suites and name not in spec.suites:
        raise ScenarioValidationError([f"suite {name} does not apply to scenario {spec.name}; "
                                       f"choose one of {', '.join(spec.suites)}"], spec.path)
    run = SuiteRun(name, spec, expectations if expectations is not None else load_expectations())
    logger.info(f"Running suite {name} on {spec.name}")
    SUITE_RUNNERS[name](run)
    report = run.report
    logger.info(f"Suite {name}: {report.summary()}")
    return report


def _cell_text(value: Any) -> str:
    return json.dumps(value, sort_keys=True).replace("|", "\\|")


def emit_report(report: Report, fmt: str = "json") -> bytes:
    """Serialize a report; identical reports give identical bytes."""
    if fmt == "json":
        return (json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt != "markdown":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [f"# {report.suite} on {report.scenario}", "", f"**{report.summary()}**", ""]
    if report.hard_failures:
        lines += ["## Failing checks", ""]
        for c in report.hard_failures:
            where = f" at {c.cell}" if c.cell else ""
            lines.append(f"- {c.anchor}{where}: computed `{_cell_text(c.computed)}`, "
                         f"expected `{_cell_text(c.expected)}`")
        lines.append("")
    lines += ["## Checks", "", "| status | provenance | anchor | cell | computed | expected |",
              "|---|---|---|---|---|---|"]
    for c in report.checks:
        lines.append(f"| {c.status} | {c.provenance} | {c.anchor} | {c.cell or ''} | "
                     f"{_cell_text(c.computed)} | {_cell_text(c.expected)} |")
    return ("\n".join(lines) + "\n").encode("utf-8")


def census_payload(spec: ScenarioSpec, torsion: Optional[int] = None, action: Optional[str] = None) -> Dict:
    if spec.linear is not None:
        model: Union[LinearModel, TorusModel] = spec.linear
        n = None
    else:
        model = _torus(spec, "census", action)
        n = torsion or model.torsion
    entries = msod_census(model, n)
    names = _class_names(model.group, model.class_elements, model.class_names)
    burnside = None
    if n is not None:
        check = burnside_check(model.action, n)
        burnside = {"orbit_count": check.orbit_count, "average_fixed": _jsonable(check.average_fixed),
                    "holds": check.holds}
    return {
        "schema_version": SCHEMA_VERSION,
        "scenario": spec.name,
        "action": getattr(model, "name", None),
        "torsion": n,
        "group_order": model.group.order,
        "burnside": burnside,
        "entries": _census_json(model.group, entries, names),
    }


def emit_census(payload: Dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt != "markdown":
        raise ValueError(f"unknown census format {fmt!r}")
    title = payload["scenario"] + (f" / {payload['action']}" if payload["action"] else "")
    lines = [f"# Census: {title}", "", "| class | size | dimension | components | quotient components | rational |",
             "|---|---|---|---|---|---|"]
    for e in payload["entries"]:
        lines.append(f"| {e.get('name', e['class'])} | {e['class_size']} | {e['dimension']} | "
                     f"{e['component_count']} | {e['quotient_component_count']} | {_cell_text(e['rational'])} |")
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Exact verification of motivic semiorthogonal decompositions.")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="run one verification suite on a scenario")
    verify.add_argument("--scenario", required=True, help="bundled scenario name or path to a scenario file")
    verify.add_argument("--suite", required=True, help=f"one of: {', '.join(SUITES)}")
    verify.add_argument("--torsion", type=int, help="override the torsion level of torus scenarios")
    verify.add_argument("--format", choices=("json", "markdown"), default="json")
    verify.add_argument("--out", help="write the report here instead of stdout")

    census = commands.add_parser("census", help="list the coarse fixed-locus pieces, one per conjugacy class")
    census.add_argument("--scenario", required=True)
    census.add_argument("--torsion", type=int)
    census.add_argument("--action", help="torus action name for scenarios with several actions")
    census.add_argument("--format", choices=("json", "markdown"), default="json")
    census.add_argument("--out")
    return parser.parse_args(argv)


def _write(data: bytes, out: Optional[str]):
    if out:
        with open(out, "wb") as handle:
            handle.write(data)
        logger.info(f"Wrote {len(data)} bytes to {out}")
    else:
        sys.stdout.write(data.decode("utf-8"))


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=os.environ.get("LOG_LEVEL", "INFO").upper(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = parse_args(argv)
    try:
        spec = load_scenario(args.scenario)
        if args.command == "census":
            _write(emit_census(census_payload(spec, args.torsion, args.action), args.format), args.out)
            return 0
        if args.torsion:
            spec.override_torsion(args.torsion)
        report = run_suite(spec, args.suite)
    except (ScenarioParseError, ScenarioValidationError, UnknownNameError, TorsionBoundTooSmallError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 2
    _write(emit_report(report, args.format), args.out)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
