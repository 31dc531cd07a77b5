"""
Scenario files and expectation fixtures.

A scenario is a JSON document describing either a linear model (a finite
group acting on the plane, the modules it carries and the orders in which
they are tested) or one or more torus actions with their torsion bounds.
Loading resolves every literal: matrices are realified, groups generated,
characters named, so the verification suites work on ready objects.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from equivariant_modules import EquivariantModule, parse_poly, quotient_module
from exact_arithmetic import from_literal
from finite_groups import (
    FiniteGroup,
    LinearElement,
    TorusElement,
    generate_group,
    monomial_element,
    monomial_torus_element,
    realify,
)
from name_matching import NameMatcher
from rep_theory import (
    Character,
    CharacterTable,
    Representation,
    assign_labels,
    character_table,
    monomial_character,
    product_closure,
)
from torus_geometry import EISENSTEIN_CM, GAUSSIAN_CM, TorusAction

logger = logging.getLogger(__name__)

ROOT = Path(__file__).resolve().parent
EXPECTATIONS_FILE = "expectations.json"

NAMED_CM = {
    "gaussian": GAUSSIAN_CM,
    "eisenstein": EISENSTEIN_CM,
    "zeta6": ((1, -1), (1, 0)),
}


def scenarios_dir() -> Path:
    return Path(os.environ.get("SOD_SCENARIOS_DIR", ROOT / "scenarios"))


def fixtures_dir() -> Path:
    return Path(os.environ.get("SOD_FIXTURES_DIR", ROOT))


class ScenarioParseError(ValueError):
    """The scenario file is empty or not valid JSON."""

    def __init__(self, message: str, line: int = 1, column: int = 1, path: Optional[Path] = None):
        self.line = line
        self.column = column
        self.path = path
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{column}: {message}")


class ScenarioValidationError(ValueError):
    """The scenario parsed but some fields are missing or unusable."""

    def __init__(self, fields: Sequence[str], path: Optional[Path] = None):
        self.fields = list(fields)
        self.path = path
        where = f"{path}: " if path else ""
        super().__init__(f"{where}invalid fields: {'; '.join(self.fields)}")


@dataclass
class Expectation:
    """One cited expected value."""

    key: str
    anchor: str
    expected: Any
    kind: str = "hard"


def load_expectations(directory: Optional[Union[str, Path]] = None) -> Dict[str, Expectation]:
    path = Path(directory or fixtures_dir()) / EXPECTATIONS_FILE
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ScenarioParseError(e.msg, e.lineno, e.colno, path) from e
    records = payload.get("expectations", {})
    out = {}
    bad = []
    for key, record in records.items():
        if "anchor" not in record or "expected" not in record:
            bad.append(key)
            continue
        kind = record.get("kind", "hard")
        if kind not in ("hard", "informational"):
            bad.append(f"{key}.kind")
            continue
        out[key] = Expectation(key, record["anchor"], record["expected"], kind)
    if bad:
        raise ScenarioValidationError(bad, path)
    logger.debug(f"Loaded {len(out)} expectations from {path}")
    return out


def _lookup_matrix(matrix: Sequence[Sequence], conductor: Optional[int]) -> List[List]:
    return [[from_literal(v, conductor) for v in row] for row in matrix]


@dataclass
class LinearModel:
    """A finite group acting linearly on the plane, with named characters and modules."""

    group: FiniteGroup
    order: int
    conductor: int
    variables: Tuple[str, str]
    table: CharacterTable
    characters: Dict[str, Character]
    representations: Dict[str, Representation]
    module_records: Dict[str, Dict]
    class_elements: List[int] = field(default_factory=list)
    class_names: List[str] = field(default_factory=list)
    irreducible_order: List[str] = field(default_factory=list)
    collections: Dict[str, Dict] = field(default_factory=dict)
    subgroups: Dict[str, List[str]] = field(default_factory=dict)
    _modules: Dict[str, EquivariantModule] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._module_names = NameMatcher("module", self.module_records)
        self._rep_names = NameMatcher("representation", self.representations)

    def representation(self, label: str) -> Representation:
        return self.representations[self._rep_names.resolve(label)]

    def character(self, label: str) -> Character:
        return self.characters[self._rep_names.resolve(label)]

    def module(self, ref: str) -> EquivariantModule:
        """A module by reference "Name" or "Name*twist", e.g. "O0*chi2"."""
        if ref not in self._modules:
            base, _, twist = ref.partition("*")
            name = self._module_names.resolve(base.strip())
            record = self.module_records[name]
            twist_label = twist.strip() or record.get("twist")
            rep = self.representation(twist_label) if twist_label else None
            generators = [parse_poly(text, self.variables, self.conductor) for text in record["ideal"]]
            self._modules[ref] = quotient_module(self.group, generators, rep, ref, self.variables)
        return self._modules[ref]

    def collection(self, name: str) -> Dict:
        return self.collections[NameMatcher("collection", self.collections).resolve(name)]

    def subgroup_indices(self, name: str) -> List[int]:
        """Indices of the subgroup generated by the named words."""
        words = self.subgroups[NameMatcher("subgroup", self.subgroups).resolve(name)]
        return self.group.generated_indices(self.group.evaluate_word(w) for w in words)


@dataclass
class TorusModel:
    """One named torus action with the data the suites need for it."""

    name: str
    action: TorusAction
    torsion: int
    order: int = 1
    class_elements: List[int] = field(default_factory=list)
    class_names: List[str] = field(default_factory=list)

    @property
    def group(self) -> FiniteGroup:
        return self.action.group


@dataclass
class ScenarioSpec:
    name: str
    kind: str
    suites: List[str]
    linear: Optional[LinearModel] = None
    actions: Dict[str, TorusModel] = field(default_factory=dict)
    isogenies: Dict[str, Dict] = field(default_factory=dict)
    descent: List[Dict] = field(default_factory=list)
    path: Optional[Path] = None

    def torus(self, name: str) -> TorusModel:
        return self.actions[NameMatcher("action", self.actions).resolve(name)]

    def override_torsion(self, n: int):
        """Use n-torsion for every action and descent case."""
        for model in self.actions.values():
            model.torsion = n
        for case in self.descent:
            case["torsion"] = n


def _resolve_path(ref: Union[str, Path]) -> Path:
    path = Path(ref)
    if path.is_file():
        return path
    directory = scenarios_dir()
    bundled = sorted(p.stem for p in directory.glob("*.json"))
    name = NameMatcher("scenario", bundled).resolve(str(ref))
    return directory / f"{name}.json"


def _read_json(path: Path) -> Dict:
    text = path.read_text()
    if not text.strip():
        raise ScenarioParseError("empty scenario file", 1, 1, path)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(e.msg, e.lineno, e.colno, path) from e
    if not isinstance(payload, dict):
        raise ScenarioParseError("top level must be an object", 1, 1, path)
    return payload


def _linear_element(record: Any, order: int, conductor: Optional[int]) -> LinearElement:
    if isinstance(record, dict) and "monomial" in record:
        a, b, c = record["monomial"]
        return monomial_element(a, b, c, order)
    matrix = record["matrix"] if isinstance(record, dict) else record
    return LinearElement(_lookup_matrix(matrix, conductor))


def _class_elements(group: FiniteGroup, entries: Sequence, make) -> List[int]:
    out = []
    for entry in entries:
        if isinstance(entry, str):
            out.append(group.evaluate_word(entry))
        else:
            out.append(group.elem_to_idx(make(entry)))
    return out


def _build_linear(data: Dict, path: Optional[Path]) -> LinearModel:
    errors = [f for f in ("generators", "modules") if f not in data]
    if errors:
        raise ScenarioValidationError(errors, path)
    order = int(data.get("order", 1))
    conductor = int(data.get("conductor", 4))
    variables = tuple(data.get("variables", ("x", "y")))
    names, elements = [], []
    for name, record in data["generators"].items():
        try:
            elements.append(_linear_element(record, order, conductor))
        except (ValueError, TypeError, KeyError) as e:
            errors.append(f"generators.{name}: {e}")
        names.append(name)
    if errors:
        raise ScenarioValidationError(errors, path)
    group = generate_group(elements, data.get("closure_bound"), names)

    linear = {name: monomial_character(group, exps, order, name) for name, exps in data.get("characters", {}).items()}
    characters: Dict[str, Character] = {"1": Character.trivial(group)}
    characters.update(product_closure(linear) if linear else {})
    for label, chi in characters.items():
        chi.label = label
    natural = Representation.natural(group)
    representations: Dict[str, Representation] = {label: Representation.from_linear_character(chi)
                                                  for label, chi in characters.items()}
    representations["V"] = natural
    representations["V_dual"] = natural.dual()
    representations["Lambda2V"] = natural.det()
    characters["V"] = natural.character()
    characters["V_dual"] = representations["V_dual"].character()
    table = assign_labels(character_table(group), characters)

    try:
        class_elements = _class_elements(group, data.get("class_elements", []),
                                         lambda e: monomial_element(e[0], e[1], e[2], order))
    except (ValueError, LookupError) as e:
        raise ScenarioValidationError([f"class_elements: {e}"], path) from e
    for name, record in data["modules"].items():
        if "ideal" not in record:
            errors.append(f"modules.{name}.ideal")
    if errors:
        raise ScenarioValidationError(errors, path)
    model = LinearModel(group, order, conductor, variables, table, characters, representations,
                        dict(data["modules"]), class_elements, list(data.get("class_names", [])),
                        list(data.get("irreducible_order", table.labels)), dict(data.get("collections", {})),
                        dict(data.get("subgroups", {})))
    logger.info(f"Linear model of order {group.order} with {len(table)} irreducibles")
    return model


def _cm_matrix(value: Any) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    if isinstance(value, str):
        key = NameMatcher("complex multiplication", NAMED_CM).resolve(value)
        return NAMED_CM[key]
    return tuple(tuple(int(v) for v in row) for row in value)


def _torus_element(record: Dict, factors: int, cm, order: int) -> TorusElement:
    translation = [Fraction(str(t)) for t in record["translation"]] if "translation" in record else None
    if "monomial" in record:
        a, b, c = record["monomial"]
        return monomial_torus_element(a, b, c, order, cm, translation)
    if "linear" in record:
        return TorusElement(record["linear"], translation)
    if "matrix" in record:
        return TorusElement(realify(record["matrix"], cm), translation)
    if translation is not None:
        size = 2 * factors
        return TorusElement([[1 if i == j else 0 for j in range(size)] for i in range(size)], translation)
    raise KeyError("expected one of monomial, linear, matrix or translation")


def _build_action(name: str, data: Dict, path: Optional[Path]) -> TorusModel:
    missing = [f"actions.{name}.{f}" for f in ("factors", "cm", "generators") if f not in data]
    if missing:
        raise ScenarioValidationError(missing, path)
    factors = int(data["factors"])
    order = int(data.get("order", 1))
    try:
        cm = _cm_matrix(data["cm"])
    except (LookupError, ValueError, TypeError) as e:
        raise ScenarioValidationError([f"actions.{name}.cm: {e}"], path) from e
    names, elements, errors = [], [], []
    for gen_name, record in data["generators"].items():
        try:
            elements.append(_torus_element(record, factors, cm, order))
            names.append(gen_name)
        except (ValueError, TypeError, KeyError) as e:
            errors.append(f"actions.{name}.generators.{gen_name}: {e}")
    if errors:
        raise ScenarioValidationError(errors, path)
    group = generate_group(elements, data.get("closure_bound"), names)
    action = TorusAction(group, factors, [cm] * factors, name)
    try:
        class_elements = _class_elements(group, data.get("class_elements", []),
                                         lambda e: monomial_torus_element(e[0], e[1], e[2], order, cm))
    except (ValueError, LookupError) as e:
        raise ScenarioValidationError([f"actions.{name}.class_elements: {e}"], path) from e
    torsion = int(data.get("torsion", 2 * group.exponent()))
    logger.info(f"Torus action {name}: order {group.order}, torsion {torsion}")
    return TorusModel(name, action, torsion, order, class_elements, list(data.get("class_names", [])))


def _build_isogenies(data: Dict, actions: Dict[str, TorusModel], path: Optional[Path]) -> Dict[str, Dict]:
    out = {}
    for name, record in data.items():
        try:
            target = actions[record["target"]]
            source = actions[record["source"]]
            matrix = realify(record["matrix"], target.action.cm[0])
        except (KeyError, ValueError, TypeError) as e:
            raise ScenarioValidationError([f"isogenies.{name}: {e}"], path) from e
        out[name] = {"matrix": matrix, "source": source.name, "target": target.name}
    return out


def _build_descent(cases: Sequence[Dict], actions: Dict[str, TorusModel], path: Optional[Path]) -> List[Dict]:
    out = []
    for k, case in enumerate(cases):
        try:
            model = actions[case["action"]]
            group = model.group
            k_indices = group.generated_indices(group.evaluate_word(w) for w in case.get("translations", []))
            h_indices = group.generated_indices(group.evaluate_word(w) for w in case.get("complement", []))
        except (KeyError, LookupError, ValueError) as e:
            raise ScenarioValidationError([f"descent[{k}]: {e}"], path) from e
        out.append({"name": case.get("name", f"case{k}"), "action": model.name, "translations": k_indices,
                    "complement": h_indices,
                    "torsion": int(case["torsion"]) if "torsion" in case else None})
    return out


def parse_scenario(data: Dict, path: Optional[Path] = None) -> ScenarioSpec:
    """Validate and build a scenario from its decoded JSON."""
    missing = [f for f in ("name", "kind") if f not in data]
    if missing:
        raise ScenarioValidationError(missing, path)
    kind = data["kind"]
    if kind not in ("linear", "torus"):
        raise ScenarioValidationError([f"kind: expected linear or torus, got {kind!r}"], path)
    spec = ScenarioSpec(data["name"], kind, list(data.get("suites", [])), path=path)
    if kind == "linear":
        spec.linear = _build_linear(data, path)
    else:
        if not data.get("actions"):
            raise ScenarioValidationError(["actions"], path)
        spec.actions = {name: _build_action(name, record, path) for name, record in data["actions"].items()}
        spec.isogenies = _build_isogenies(data.get("isogenies", {}), spec.actions, path)
        spec.descent = _build_descent(data.get("descent", []), spec.actions, path)
    return spec


def load_scenario(ref: Union[str, Path]) -> ScenarioSpec:
    """Load a scenario from a file path or a bundled scenario name."""
    path = _resolve_path(ref)
    data = _read_json(path)
    spec = parse_scenario(data, path)
    logger.info(f"Loaded scenario {spec.name} ({spec.kind}) from {path}")
    return spec
