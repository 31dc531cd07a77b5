"""
Finite-length equivariant modules over C[x, y] and their equivariant Ext groups.

Modules are presented as quotients R/I of the polynomial ring by a homogeneous
ideal of finite colength, optionally tensored with a group representation.
All linear algebra is exact and degree-wise up to D = sum of generator degrees.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from exact_arithmetic import (
    Cyclotomic,
    Matrix,
    block_diagonal,
    column_space,
    cyc_normalize,
    identity_matrix,
    inverse,
    kron,
    mat_add,
    mat_mul,
    mat_scale,
    mat_sub,
    mat_vec,
    matrices_equal,
    matrix_conductor,
    nullspace,
    rank,
    restrict_action,
    rref,
    trace,
    transpose,
    zero_matrix,
)
from finite_groups import FiniteGroup
from rep_theory import Character, Representation, inner_product

logger = logging.getLogger(__name__)

Monomial = Tuple[int, int]


class NotFiniteColengthError(ValueError):
    """Raised when an ideal does not contain every monomial of degree D."""


class NotStableError(ValueError):
    """Raised when the group does not preserve an ideal."""


class ResolutionInconsistentError(ArithmeticError):
    """Raised when a computed resolution fails its exactness or equivariance certificate."""


def monomials(degree: int) -> List[Monomial]:
    """Monomials of one degree, ordered y^d, x y^(d-1), ..., x^d."""
    return [(i, degree - i) for i in range(degree + 1)]


class Poly:
    """Bivariate polynomial with cyclotomic coefficients, keyed by exponent pairs (i, j) for x^i y^j."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Cyclotomic]] = None):
        self.terms: Dict[Monomial, Cyclotomic] = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def monomial(cls, i: int, j: int, coeff: Optional[Cyclotomic] = None) -> "Poly":
        return cls({(i, j): coeff if coeff is not None else Cyclotomic.one()})

    @classmethod
    def constant(cls, value) -> "Poly":
        value = value if isinstance(value, Cyclotomic) else Cyclotomic.rational(value)
        return cls({(0, 0): value})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((i + j for i, j in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({i + j for i, j in self.terms}) <= 1

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly({m: c * other for m, c in self.terms.items()})
        out: Dict[Monomial, Cyclotomic] = {}
        for (a, b), c in self.terms.items():
            for (p, q), d in other.terms.items():
                key = (a + p, b + q)
                value = c * d
                out[key] = out[key] + value if key in out else value
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result = Poly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def coefficient(self, m: Monomial) -> Cyclotomic:
        return self.terms.get(m, Cyclotomic.zero())

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly({m: c for m, c in self.terms.items() if sum(m) == degree})

    def evaluate(self, x_matrix: Matrix, y_matrix: Matrix) -> Matrix:
        """p(X, Y) for commuting square matrices."""
        size = len(x_matrix)
        n = max(matrix_conductor(x_matrix), matrix_conductor(y_matrix)) if size else 1
        result = zero_matrix(size, size, n)
        x_powers = [identity_matrix(size, n)]
        y_powers = [identity_matrix(size, n)]
        for (i, j), c in sorted(self.terms.items()):
            while len(x_powers) <= i:
                x_powers.append(mat_mul(x_powers[-1], x_matrix))
            while len(y_powers) <= j:
                y_powers.append(mat_mul(y_powers[-1], y_matrix))
            result = mat_add(result, mat_scale(mat_mul(x_powers[i], y_powers[j]), c))
        return result

    def to_string(self, variables: Sequence[str] = ("x", "y")) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0])):
            factors = []
            if i:
                factors.append(variables[0] + (f"^{i}" if i > 1 else ""))
            if j:
                factors.append(variables[1] + (f"^{j}" if j > 1 else ""))
            monomial = "*".join(factors)
            coeff = str(c)
            if not monomial:
                parts.append(coeff if c.is_rational() else f"({coeff})")
            elif c == 1:
                parts.append(monomial)
            elif c == -1:
                parts.append(f"-{monomial}")
            else:
                parts.append(f"{coeff if c.is_rational() else f'({coeff})'}*{monomial}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.to_string()})"


def parse_poly(text: str, variables: Sequence[str] = ("x", "y"), conductor: int = 4) -> Poly:
    """Parse the ASCII grammar: coefficients in i / z, variables, ^, *, + and -."""
    x, y, z = sympy.symbols(f"{variables[0]} {variables[1]} z_cyc")
    local = {variables[0]: x, variables[1]: y, "z": z}
    if conductor % 4 == 0:
        local["i"] = local["I"] = z ** (conductor // 4)
    try:
        expr = sympy.expand(parse_expr(text, local_dict=local,
                                       transformations=standard_transformations + (convert_xor,)))
        poly = sympy.Poly(expr, x, y, z, domain="QQ")
    except Exception as e:
        raise ValueError(f"cannot parse polynomial {text!r}: {e}") from e
    grouped: Dict[Monomial, Dict[int, Fraction]] = {}
    for (i, j, k), c in poly.terms():
        grouped.setdefault((i, j), {})[k] = Fraction(int(c.p), int(c.q))
    terms = {}
    for m, powers in grouped.items():
        raw = [Fraction(0)] * (max(powers) + 1)
        for k, c in powers.items():
            raw[k] = c
        terms[m] = cyc_normalize(raw, conductor).minimal()
    return Poly(terms)


def _linear_substitution(g_inverse: Matrix) -> Tuple[Poly, Poly]:
    """Images of x and y under the contragredient action."""
    x_image = Poly({(1, 0): g_inverse[0][0], (0, 1): g_inverse[0][1]})
    y_image = Poly({(1, 0): g_inverse[1][0], (0, 1): g_inverse[1][1]})
    return x_image, y_image


def _substitute(f: Poly, x_image: Poly, y_image: Poly) -> Poly:
    result = Poly()
    x_powers = [Poly.constant(1)]
    y_powers = [Poly.constant(1)]
    for (i, j), c in f.terms.items():
        while len(x_powers) <= i:
            x_powers.append(x_powers[-1] * x_image)
        while len(y_powers) <= j:
            y_powers.append(y_powers[-1] * y_image)
        result = result + (x_powers[i] * y_powers[j]) * c
    return result


def act_on_poly(group: FiniteGroup, g: int, f: Poly) -> Poly:
    """(g.f)(v) = f(g^-1 v): the coordinate x_k goes to sum_j (g^-1)_kj x_j."""
    g_inverse = group.idx_to_elem(group.inv_idx(g)).as_matrix()
    return _substitute(f, *_linear_substitution(g_inverse))


def degree_action(group: FiniteGroup, g: int, degree: int) -> Matrix:
    """Matrix of g on the monomial basis of R_degree (columns are images)."""
    basis = monomials(degree)
    x_image, y_image = _linear_substitution(group.idx_to_elem(group.inv_idx(g)).as_matrix())
    columns = [_coords(_substitute(Poly.monomial(i, j), x_image, y_image), degree) for i, j in basis]
    return transpose(columns)


def _coords(f: Poly, degree: int) -> List[Cyclotomic]:
    return [f.coefficient(m) for m in monomials(degree)]


def _from_coords(vector: Sequence[Cyclotomic], degree: int) -> Poly:
    return Poly({m: c for m, c in zip(monomials(degree), vector)})


def semi_invariant_weight(group: FiniteGroup, f: Poly) -> Optional[Character]:
    """Linear character chi with g.f = chi(g) f, or None when f is not semi-invariant."""
    values = []
    lead = next(iter(sorted(f.terms)))
    for c in group.conjugacy_classes():
        image = act_on_poly(group, c.representative, f)
        scale = image.coefficient(lead) / f.coefficient(lead)
        if image != f * scale:
            return None
        values.append(scale.minimal())
    return Character(group, values)


def reynolds_operator(actions: Sequence[Matrix]) -> Matrix:
    size = len(actions[0])
    n = max(matrix_conductor(a) for a in actions)
    total = zero_matrix(size, size, n)
    for a in actions:
        total = mat_add(total, a)
    return mat_scale(total, Fraction(1, len(actions)))


def _stable_complement(actions: Sequence[Matrix], space: List[List[Cyclotomic]], sub: List[List[Cyclotomic]],
                       preferred: Sequence[Sequence[Cyclotomic]] = ()) -> List[List[Cyclotomic]]:
    """G-stable complement of span(sub) inside span(space), both G-stable.

    actions are ambient matrices for every group element. The complement is the
    kernel of the averaged projection onto span(sub) whose initial kernel is
    spanned by the preferred vectors where possible.
    """
    sub = column_space(sub) if sub else []
    basis = column_space(list(sub) + list(preferred) + list(space))
    k, total = len(sub), len(basis)
    if total == k:
        return []
    local = [restrict_action(a, basis) for a in actions]
    n = max([matrix_conductor(m) for m in local if m] + [1])
    projection = zero_matrix(total, total, n)
    for i in range(k):
        projection[i][i] = Cyclotomic.one(n)
    averaged = reynolds_operator([mat_mul(mat_mul(a, projection), inverse(a)) for a in local])
    complement_local = mat_sub(identity_matrix(total, n), averaged)
    columns = column_space(transpose(complement_local))
    ambient = transpose([list(v) for v in basis])
    return [[row[0] for row in mat_mul(ambient, [[c] for c in col])] for col in columns]


class EquivariantModule:
    """Finite-dimensional module over C[x, y] with a compatible group action."""

    def __init__(self, group: FiniteGroup, basis: Sequence[str], x_action: Matrix, y_action: Matrix,
                 g_actions: Sequence[Matrix], grading: Optional[Sequence[int]] = None, label: Optional[str] = None,
                 ideal: Sequence[Poly] = (), twist: Optional[Representation] = None,
                 components: Sequence["EquivariantModule"] = (), variables: Sequence[str] = ("x", "y")):
        self.group = group
        self.basis = list(basis)
        self.x_action = x_action
        self.y_action = y_action
        self.g_actions = list(g_actions)
        self.grading = list(grading) if grading is not None else None
        self.label = label
        self.ideal = list(ideal)
        self.twist = twist
        self.components = tuple(components)
        self.variables = tuple(variables)
        self._resolution = None

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def validate(self):
        """Commutation, homomorphism and equivariance identities on generators."""
        if not matrices_equal(mat_mul(self.x_action, self.y_action), mat_mul(self.y_action, self.x_action)):
            raise NotStableError(f"x and y do not commute on {self.label}")
        generators = sorted(set(self.group.generator_names.values())) or range(self.group.order)
        for g in generators:
            for h in generators:
                if not matrices_equal(mat_mul(self.g_actions[g], self.g_actions[h]),
                                      self.g_actions[self.group.mult_idx(g, h)]):
                    raise NotStableError(f"group action on {self.label} is not a homomorphism")
            x_image, y_image = _linear_substitution(self.group.idx_to_elem(self.group.inv_idx(g)).as_matrix())
            for image, action in ((x_image, self.x_action), (y_image, self.y_action)):
                lhs = mat_mul(self.g_actions[g], action)
                rhs = mat_mul(image.evaluate(self.x_action, self.y_action), self.g_actions[g])
                if not matrices_equal(lhs, rhs):
                    raise NotStableError(f"group action on {self.label} is not compatible with multiplication")

    def twisted(self, rep: Representation, label: Optional[str] = None) -> "EquivariantModule":
        t = rep.dimension
        ident = identity_matrix(t, 1)
        basis = [f"{b}*e{k}" if t > 1 else b for b in self.basis for k in range(t)]
        grading = [d for d in self.grading for _ in range(t)] if self.grading is not None else None
        twist = rep if self.twist is None else self.twist.tensor(rep)
        name = label or (f"{self.label}*{rep.label}" if self.label and rep.label else None)
        if self.components:
            return direct_sum([c.twisted(rep) for c in self.components], label=name)
        module = EquivariantModule(
            self.group, basis, kron(self.x_action, ident), kron(self.y_action, ident),
            [kron(a, rep(i)) for i, a in enumerate(self.g_actions)], grading, name,
            self.ideal, twist, (), self.variables)
        return module

    def character(self) -> Character:
        return module_character(self)

    def hilbert_function(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for d in self.grading or []:
            counts[d] = counts.get(d, 0) + 1
        return counts

    def __repr__(self):
        return f"EquivariantModule({self.label or 'unnamed'}, dim={self.dimension})"


class _GradedIdeal:
    """Degree-wise RREF data of a homogeneous ideal."""

    def __init__(self, generators: Sequence[Poly], bound: int):
        self.generators = list(generators)
        self.bound = bound
        self.pieces: Dict[int, Tuple[Matrix, List[int]]] = {}
        for d in range(bound + 1):
            rows = []
            for f in self.generators:
                e = f.degree()
                if e > d:
                    continue
                for i, j in monomials(d - e):
                    rows.append(_coords(f * Poly.monomial(i, j), d))
            if rows:
                reduced, pivots = rref(rows)
                self.pieces[d] = (reduced[:len(pivots)], pivots)
            else:
                self.pieces[d] = ([], [])

    def basis_monomials(self, degree: int) -> List[Monomial]:
        _, pivots = self.pieces[degree]
        return [m for c, m in enumerate(monomials(degree)) if c not in pivots]

    def span(self, degree: int) -> List[List[Cyclotomic]]:
        return [list(row) for row in self.pieces[degree][0]]

    def normal_form(self, f: Poly) -> Dict[Monomial, Cyclotomic]:
        """Reduce f modulo the ideal; returns coefficients on standard monomials."""
        out: Dict[Monomial, Cyclotomic] = {}
        for d in sorted({sum(m) for m in f.terms}):
            if d >= self.bound:
                continue
            vector = _coords(f.homogeneous_part(d), d)
            rows, pivots = self.pieces[d]
            for r, p in enumerate(pivots):
                c = vector[p]
                if not c.is_zero():
                    vector = [v - c * w for v, w in zip(vector, rows[r])]
            for m, c in zip(monomials(d), vector):
                if not c.is_zero():
                    out[m] = c
        return out


def ideal_contains(generators: Sequence[Poly], f: Poly) -> bool:
    """Membership of f in the homogeneous ideal, degree by degree."""
    if f.is_zero():
        return True
    return not _GradedIdeal(generators, f.degree() + 1).normal_form(f)


def quotient_module(group: FiniteGroup, generators: Sequence[Poly], twist: Optional[Representation] = None,
                    label: Optional[str] = None, variables: Sequence[str] = ("x", "y")) -> EquivariantModule:
    """R/I for a homogeneous G-stable ideal of finite colength, optionally tensored with a representation."""
    gens = [f for f in generators if not f.is_zero()]
    for f in gens:
        if not f.is_homogeneous():
            raise ValueError(f"generator {f.to_string(variables)} is not homogeneous")
    bound = sum(f.degree() for f in gens)
    ideal = _GradedIdeal(gens, bound)
    if ideal.basis_monomials(bound):
        raise NotFiniteColengthError(f"ideal ({', '.join(f.to_string(variables) for f in gens)}) "
                                     f"misses monomials in degree {bound}")
    standard: List[Monomial] = []
    for d in range(bound):
        standard.extend(ideal.basis_monomials(d))
    position = {m: k for k, m in enumerate(standard)}
    size = len(standard)

    for g in range(group.order):
        for f in gens:
            if ideal.normal_form(act_on_poly(group, g, f)):
                raise NotStableError(f"g.{f.to_string(variables)} leaves the ideal for element {g}")

    n = 1
    for f in gens:
        n = max(n, matrix_conductor([list(f.terms.values())]) if f.terms else 1)
    n = max([n] + [group.elements[0].conductor if group.is_linear else 1])

    def column(f: Poly) -> List[Cyclotomic]:
        vector = [Cyclotomic.zero(n)] * size
        for m, c in ideal.normal_form(f).items():
            vector[position[m]] = c
        return vector

    x_cols = [column(Poly.monomial(i + 1, j)) for i, j in standard]
    y_cols = [column(Poly.monomial(i, j + 1)) for i, j in standard]
    g_actions = [transpose([column(act_on_poly(group, g, Poly.monomial(i, j))) for i, j in standard])
                 for g in range(group.order)]
    names = [Poly.monomial(i, j).to_string(variables) for i, j in standard]
    module = EquivariantModule(group, names, transpose(x_cols), transpose(y_cols), g_actions,
                               [i + j for i, j in standard], label, gens, None, (), variables)
    logger.debug(f"Quotient module {label} has dimension {size}")
    if twist is not None:
        module = module.twisted(twist, label)
    return module


def direct_sum(modules: Sequence[EquivariantModule], label: Optional[str] = None) -> EquivariantModule:
    parts: List[EquivariantModule] = []
    for m in modules:
        parts.extend(m.components or [m])
    group = parts[0].group
    basis = [f"{k}:{b}" for k, m in enumerate(parts) for b in m.basis]
    grading = None
    if all(m.grading is not None for m in parts):
        grading = [d for m in parts for d in m.grading]
    g_actions = [block_diagonal([m.g_actions[g] for m in parts]) for g in range(group.order)]
    return EquivariantModule(group, basis, block_diagonal([m.x_action for m in parts]),
                             block_diagonal([m.y_action for m in parts]), g_actions, grading, label,
                             components=parts, variables=parts[0].variables)


def module_character(module: EquivariantModule) -> Character:
    """Traces of the group action per conjugacy class."""
    values = [trace(module.g_actions[c.representative]).minimal() for c in module.group.conjugacy_classes()]
    return Character(module.group, values, module.label)


PolyMatrix = List[List[Poly]]


def _poly_mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            total = Poly()
            for k in range(inner):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    total = total + a[i][k] * b[k][j]
            row.append(total)
        out.append(row)
    return out


def _act_on_poly_matrix(group: FiniteGroup, g: int, m: PolyMatrix) -> PolyMatrix:
    return [[act_on_poly(group, g, p) if not p.is_zero() else p for p in row] for row in m]


def _scalar_poly_matrix(m: Matrix) -> PolyMatrix:
    return [[Poly.constant(v) if not v.is_zero() else Poly() for v in row] for row in m]


@dataclass
class FreeResolution:
    """0 -> F_2 -> F_1 -> F_0 with F_i = R (x) W_i.

    differentials[i - 1] is d_i with rows indexing generators of F_{i-1} and
    columns indexing generators of F_i.
    """

    group: FiniteGroup
    generator_reps: List[Representation]
    degrees: List[List[int]]
    differentials: List[PolyMatrix]
    koszul: bool = False

    @property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(r.dimension for r in self.generator_reps)

    def twisted(self, rep: Representation) -> "FreeResolution":
        t = rep.dimension
        reps = [r.tensor(rep) for r in self.generator_reps]
        degrees = [[d for d in ds for _ in range(t)] for ds in self.degrees]
        diffs = []
        for d in self.differentials:
            rows, cols = len(d), len(d[0]) if d else 0
            out = [[Poly() for _ in range(cols * t)] for _ in range(rows * t)]
            for i in range(rows):
                for j in range(cols):
                    if not d[i][j].is_zero():
                        for b in range(t):
                            out[i * t + b][j * t + b] = d[i][j]
            diffs.append(out)
        return FreeResolution(self.group, reps, degrees, diffs, self.koszul)

    def check(self, hilbert: Dict[int, int], twist_dimension: int, bound: int):
        """d o d = 0, equivariance of every differential and the graded Euler characteristic."""
        for first, second in zip(self.differentials, self.differentials[1:]):
            product = _poly_mat_mul(first, second)
            if any(not p.is_zero() for row in product for p in row):
                raise ResolutionInconsistentError("consecutive differentials do not compose to zero")
        generators = sorted(set(self.group.generator_names.values())) or range(self.group.order)
        for g in generators:
            for i, d in enumerate(self.differentials):
                lhs = _poly_mat_mul(_scalar_poly_matrix(self.generator_reps[i](g)), _act_on_poly_matrix(self.group, g, d))
                rhs = _poly_mat_mul(d, _scalar_poly_matrix(self.generator_reps[i + 1](g)))
                if any(a != b for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb)):
                    raise ResolutionInconsistentError(f"differential d{i + 1} is not equivariant")
        for degree in range(bound + 1):
            euler = 0
            for sign, ds in zip((1, -1, 1, -1), self.degrees):
                euler += sign * sum(degree - e + 1 for e in ds if e <= degree)
            expected = hilbert.get(degree, 0) * twist_dimension
            if euler != expected:
                raise ResolutionInconsistentError(
                    f"Euler characteristic {euler} differs from Hilbert function {expected} in degree {degree}")


def _direct_sum_resolutions(parts: Sequence[FreeResolution]) -> FreeResolution:
    group = parts[0].group
    length = max(len(p.generator_reps) for p in parts)
    reps, degrees, diffs = [], [], []
    for i in range(length):
        pieces = [p.generator_reps[i] for p in parts if i < len(p.generator_reps)]
        matrices = [block_diagonal([r(g) for r in pieces]) for g in range(group.order)]
        reps.append(Representation(group, matrices))
        degrees.append([d for p in parts if i < len(p.degrees) for d in p.degrees[i]])
    for i in range(length - 1):
        rows = sum(p.generator_reps[i].dimension for p in parts if i < len(p.generator_reps))
        cols = sum(p.generator_reps[i + 1].dimension for p in parts if i + 1 < len(p.generator_reps))
        out = [[Poly() for _ in range(cols)] for _ in range(rows)]
        r0 = c0 = 0
        for p in parts:
            if i + 1 >= len(p.generator_reps):
                if i < len(p.generator_reps):
                    r0 += p.generator_reps[i].dimension
                continue
            d = p.differentials[i]
            for a, row in enumerate(d):
                for b, value in enumerate(row):
                    out[r0 + a][c0 + b] = value
            r0 += len(d)
            c0 += len(d[0]) if d else 0
        diffs.append(out)
    return FreeResolution(group, reps, degrees, diffs, all(p.koszul for p in parts))


def _space_actions(group: FiniteGroup, degree: int, gen_degrees: Sequence[int], rep: Representation) -> List[Matrix]:
    """Action on sum_l R_(degree - deg_l) e_l for every group element."""
    blocks = [max(degree - e + 1, 0) for e in gen_degrees]
    offsets = [sum(blocks[:l]) for l in range(len(blocks))]
    size = sum(blocks)
    actions = []
    for g in range(group.order):
        matrix = zero_matrix(size, size, 1)
        rho = rep(g)
        for l, e in enumerate(gen_degrees):
            if degree < e:
                continue
            poly_action = degree_action(group, g, degree - e)
            for k, e2 in enumerate(gen_degrees):
                coefficient = rho[k][l]
                if coefficient.is_zero() or e2 != e:
                    continue
                for a, row in enumerate(poly_action):
                    for b, v in enumerate(row):
                        if not v.is_zero():
                            matrix[offsets[k] + a][offsets[l] + b] = matrix[offsets[k] + a][offsets[l] + b] + v * coefficient
        actions.append(matrix)
    return actions


def _vector_to_polys(vector: Sequence[Cyclotomic], degree: int, gen_degrees: Sequence[int]) -> List[Poly]:
    polys = []
    offset = 0
    for e in gen_degrees:
        width = max(degree - e + 1, 0)
        polys.append(_from_coords(vector[offset:offset + width], degree - e) if width else Poly())
        offset += width
    return polys


def _polys_to_vector(polys: Sequence[Poly], degree: int, gen_degrees: Sequence[int]) -> List[Cyclotomic]:
    vector = []
    for p, e in zip(polys, gen_degrees):
        if degree >= e:
            vector.extend(_coords(p, degree - e))
    return vector


def _map_matrix(columns: Sequence[Sequence[Poly]], degree: int, source_degrees: Sequence[int],
                target_degrees: Sequence[int]) -> Matrix:
    """Matrix of sum_l R_(d - s_l) e_l -> sum_k R_(d - t_k) e_k, e_l -> columns[l]."""
    images = []
    for l, s in enumerate(source_degrees):
        if degree < s:
            continue
        for i, j in monomials(degree - s):
            shifted = [p * Poly.monomial(i, j) for p in columns[l]]
            images.append(_polys_to_vector(shifted, degree, target_degrees))
    target_size = sum(max(degree - t + 1, 0) for t in target_degrees)
    if not images:
        return zero_matrix(target_size, 0, 1)
    return transpose(images)


def _multiply_up(vectors: Sequence[Sequence[Cyclotomic]], degree: int, gen_degrees: Sequence[int]) -> List[List[Cyclotomic]]:
    """x.v and y.v for vectors of degree - 1."""
    out = []
    for v in vectors:
        polys = _vector_to_polys(v, degree - 1, gen_degrees)
        for shift in (Poly.monomial(1, 0), Poly.monomial(0, 1)):
            out.append(_polys_to_vector([p * shift for p in polys], degree, gen_degrees))
    return out


def _rep_on_span(group: FiniteGroup, vectors_by_degree: Dict[int, List[List[Cyclotomic]]],
                 actions_by_degree: Dict[int, List[Matrix]]) -> Representation:
    matrices = []
    for g in range(group.order):
        blocks = []
        for d in sorted(vectors_by_degree):
            vectors = vectors_by_degree[d]
            if vectors:
                blocks.append(restrict_action(actions_by_degree[d][g], vectors))
        matrices.append(block_diagonal(blocks) if blocks else [])
    return Representation(group, matrices)


def _minimal_generators(group: FiniteGroup, ideal: Sequence[Poly], bound: int
                        ) -> Tuple[List[Poly], Representation]:
    graded = _GradedIdeal(ideal, bound)
    trivial = Representation.trivial(group)
    chosen: Dict[int, List[List[Cyclotomic]]] = {}
    actions: Dict[int, List[Matrix]] = {}
    for d in range(bound + 1):
        space = graded.span(d)
        if not space:
            continue
        sub = _multiply_up(graded.span(d - 1), d, [0]) if d > 0 and graded.span(d - 1) else []
        preferred = [_coords(f, d) for f in ideal if f.degree() == d]
        acts = _space_actions(group, d, [0], trivial)
        complement = _stable_complement(acts, space, sub, preferred)
        if complement:
            chosen[d] = complement
            actions[d] = acts
    generators = [_from_coords(v, d) for d in sorted(chosen) for v in chosen[d]]
    return generators, _rep_on_span(group, chosen, actions)


def minimal_resolution(module: EquivariantModule, use_koszul: bool = True) -> FreeResolution:
    """Graded minimal free resolution with G-stable generator spaces."""
    if module.components:
        return _direct_sum_resolutions([minimal_resolution(c, use_koszul) for c in module.components])
    if not module.ideal:
        raise ValueError(f"module {module.label} has no ideal presentation")
    cache_key = use_koszul
    if module._resolution is not None and module._resolution[0] == cache_key:
        return module._resolution[1]
    group = module.group
    bound = sum(f.degree() for f in module.ideal)
    base_degree_zero = Representation.trivial(group)
    generators, rho1 = _minimal_generators(group, module.ideal, bound)
    degrees1 = [f.degree() for f in generators]
    d1 = [list(generators)]

    if use_koszul and len(generators) == 2 and degrees1[0] * degrees1[1] == _untwisted_dimension(module):
        f1, f2 = generators
        d2 = [[-f2], [f1]]
        resolution = FreeResolution(group, [base_degree_zero, rho1, rho1.det()], [[0], degrees1, [sum(degrees1)]],
                                    [d1, d2], koszul=True)
        logger.debug(f"Koszul resolution for {module.label}")
    else:
        resolution = _general_resolution(group, generators, rho1, degrees1, bound + 1)

    hilbert = _untwisted_hilbert(module)
    resolution.check(hilbert, 1, bound + 2)
    if module.twist is not None:
        resolution = resolution.twisted(module.twist)
    module._resolution = (cache_key, resolution)
    logger.info(f"Resolved {module.label or 'module'} with ranks {resolution.ranks}")
    return resolution


def _untwisted_dimension(module: EquivariantModule) -> int:
    t = module.twist.dimension if module.twist is not None else 1
    return module.dimension // t


def _untwisted_hilbert(module: EquivariantModule) -> Dict[int, int]:
    t = module.twist.dimension if module.twist is not None else 1
    return {d: c // t for d, c in module.hilbert_function().items()}


def _general_resolution(group: FiniteGroup, generators: List[Poly], rho1: Representation,
                        degrees1: List[int], bound: int) -> FreeResolution:
    syzygies: Dict[int, List[List[Cyclotomic]]] = {}
    actions: Dict[int, List[Matrix]] = {}
    kernels: Dict[int, List[List[Cyclotomic]]] = {}
    columns = [[f] for f in generators]
    for d in range(min(degrees1), bound + 1):
        mapping = _map_matrix(columns, d, degrees1, [0])
        width = sum(max(d - e + 1, 0) for e in degrees1)
        kernel = nullspace(mapping, width) if width else []
        kernels[d] = kernel
        if not kernel:
            continue
        previous = kernels.get(d - 1, [])
        sub = _multiply_up(previous, d, degrees1) if previous else []
        acts = _space_actions(group, d, degrees1, rho1)
        complement = _stable_complement(acts, kernel, sub)
        if complement:
            syzygies[d] = complement
            actions[d] = acts
    second = [(d, v) for d in sorted(syzygies) for v in syzygies[d]]
    degrees2 = [d for d, _ in second]
    d2 = transpose([_vector_to_polys(v, d, degrees1) for d, v in second]) if second else []
    rho2 = _rep_on_span(group, syzygies, actions)

    if second:
        syzygy_columns = [_vector_to_polys(v, d, degrees1) for d, v in second]
        for d in range(min(degrees2), bound + 1):
            mapping = _map_matrix(syzygy_columns, d, degrees2, degrees1)
            width = sum(max(d - e + 1, 0) for e in degrees2)
            if width and nullspace(mapping, width):
                raise ResolutionInconsistentError(f"second syzygies are not free in degree {d}")
    reps = [Representation.trivial(group), rho1] + ([rho2] if second else [])
    degrees = [[0], degrees1] + ([degrees2] if second else [])
    diffs = [[list(generators)]] + ([d2] if second else [])
    return FreeResolution(group, reps, degrees, diffs, koszul=False)


@dataclass
class ExtProfile:
    """Ext^i(source, target) as characters, with invariant dimensions."""

    characters: List[Character]
    invariants: Tuple[int, ...]
    dimensions: Tuple[int, ...] = field(default=())

    def is_zero_invariant(self) -> bool:
        return not any(self.invariants)


def _hom_actions(resolution: FreeResolution, target: EquivariantModule, i: int) -> List[Matrix]:
    """(g.phi)(w) = g phi(g^-1 w) on Hom(W_i, T), vectorised column by column."""
    group = resolution.group
    rep = resolution.generator_reps[i]
    return [kron(transpose(rep(group.inv_idx(g))), target.g_actions[g]) for g in range(group.order)]


def _coboundary(resolution: FreeResolution, target: EquivariantModule, i: int) -> Matrix:
    """delta^i : C^i -> C^(i+1), blocks (m, l) = d_(i+1)[l][m](X_T, Y_T)."""
    t = target.dimension
    d = resolution.differentials[i]
    rows_out = len(d[0]) if d else 0
    cols_in = len(d)
    n = max(matrix_conductor(target.x_action), matrix_conductor(target.y_action), 1) if t else 1
    out = zero_matrix(rows_out * t, cols_in * t, n)
    for l in range(cols_in):
        for m in range(rows_out):
            p = d[l][m]
            if p.is_zero():
                continue
            block = p.evaluate(target.x_action, target.y_action)
            for a in range(t):
                for b in range(t):
                    out[m * t + a][l * t + b] = block[a][b]
    return out


def _images(delta: Optional[Matrix], vectors: Sequence[Sequence[Cyclotomic]]) -> List[List[Cyclotomic]]:
    if delta is None or not vectors or not delta:
        return []
    return column_space([mat_vec(delta, v) for v in vectors])


def ext_profile(source: EquivariantModule, target: EquivariantModule, use_koszul: bool = True) -> ExtProfile:
    """Cohomology of Hom(F(source), target) as representations, plus invariant dimensions."""
    if source.group is not target.group:
        raise ValueError("source and target carry different groups")
    resolution = minimal_resolution(source, use_koszul)
    group = source.group
    length = len(resolution.generator_reps)
    t = target.dimension
    sizes = [r.dimension * t for r in resolution.generator_reps]
    deltas: List[Optional[Matrix]] = [_coboundary(resolution, target, i) for i in range(length - 1)] + [None]
    actions = [_hom_actions(resolution, target, i) for i in range(length)]
    invariant_bases = [column_space(transpose(reynolds_operator(a))) if sizes[i] else []
                       for i, a in enumerate(actions)]
    classes = group.conjugacy_classes()
    trivial = Character.trivial(group)
    characters, invariants, dimensions = [], [], []
    previous_image: List[List[Cyclotomic]] = []
    for i in range(length):
        if deltas[i] is not None and sizes[i]:
            kernel = nullspace(deltas[i], sizes[i])
        else:
            kernel = identity_matrix(sizes[i], 1)
        values = []
        for c in classes:
            g = c.representative
            ker_trace = trace(restrict_action(actions[i][g], kernel)) if kernel else Cyclotomic.zero()
            im_trace = trace(restrict_action(actions[i][g], previous_image)) if previous_image else Cyclotomic.zero()
            values.append((ker_trace - im_trace).minimal())
        chi = Character(group, values)
        characters.append(chi)
        dimensions.append(len(kernel) - len(previous_image))

        cocycles = len(invariant_bases[i]) - len(_images(deltas[i], invariant_bases[i]))
        coboundaries = len(_images(deltas[i - 1], invariant_bases[i - 1])) if i else 0
        invariant = cocycles - coboundaries
        expected = inner_product(chi, trivial)
        if expected != invariant:
            raise ResolutionInconsistentError(
                f"invariant Ext^{i} has dimension {invariant} but the character gives {expected}")
        invariants.append(invariant)
        previous_image = column_space(transpose(deltas[i])) if deltas[i] is not None and sizes[i] and sizes[i + 1] else []

    while len(characters) < 3:
        characters.append(Character(group, [Cyclotomic.zero()] * len(classes)))
        invariants.append(0)
        dimensions.append(0)
    logger.debug(f"Ext({source.label}, {target.label}) invariants {tuple(invariants)}")
    return ExtProfile(characters, tuple(invariants), tuple(dimensions))


def is_exceptional(module: EquivariantModule) -> bool:
    return ext_profile(module, module).invariants == (1, 0, 0)


@dataclass
class SequenceReport:
    """Invariant Ext dimensions for every ordered pair of a candidate collection."""

    names: List[str]
    matrix: Dict[Tuple[int, int], Tuple[int, ...]]
    exceptional: List[bool]
    violations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_json(self) -> Dict:
        return {
            "objects": self.names,
            "exceptional": self.exceptional,
            "invariants": [[list(self.matrix[(a, b)]) for b in range(len(self.names))]
                           for a in range(len(self.names))],
            "violations": [[self.names[a], self.names[b]] for a, b in self.violations],
            "passed": self.passed,
        }


def check_semiorthogonal_sequence(objects: Sequence[EquivariantModule], require_exceptional: bool = True,
                                  completely_orthogonal: Sequence[Tuple[int, int]] = ()) -> SequenceReport:
    """Hom(later, earlier) must vanish on invariants; objects must be exceptional when required.

    Pairs listed in completely_orthogonal must vanish in both directions. A
    non-exceptional object shows up as the violation (k, k).
    """
    names = [m.label or f"object{k}" for k, m in enumerate(objects)]
    matrix: Dict[Tuple[int, int], Tuple[int, ...]] = {}
    for a, source in enumerate(objects):
        for b, target in enumerate(objects):
            matrix[(a, b)] = ext_profile(source, target).invariants
    exceptional = [matrix[(k, k)] == (1, 0, 0) for k in range(len(objects))]
    violations = []
    both_ways = {tuple(sorted(p)) for p in completely_orthogonal}
    for a in range(len(objects)):
        for b in range(len(objects)):
            if a == b:
                if require_exceptional and not exceptional[a]:
                    violations.append((a, a))
                continue
            backward = a > b
            if (backward or tuple(sorted((a, b))) in both_ways) and any(matrix[(a, b)]):
                violations.append((a, b))
    report = SequenceReport(names, matrix, exceptional, violations)
    if report.passed:
        logger.info(f"Sequence of {len(objects)} objects is semiorthogonal")
    else:
        logger.info(f"Sequence fails at {[(names[a], names[b]) for a, b in violations]}")
    return report


def invariant_polynomials(group: FiniteGroup, degree: int) -> List[Poly]:
    """A basis of the degree-d invariants, from the columns of the Reynolds operator."""
    projector = reynolds_operator([degree_action(group, g, degree) for g in range(group.order)])
    return [_from_coords(v, degree) for v in column_space(transpose(projector))]


def hilbert_ideal_generators(group: FiniteGroup, max_degree: int) -> List[Poly]:
    """Minimal homogeneous generators, up to max_degree, of the ideal spanned by positive-degree invariants."""
    generators: List[Poly] = []
    for d in range(1, max_degree + 1):
        span = [_coords(f * Poly.monomial(i, j), d)
                for f in generators for i, j in monomials(d - f.degree())]
        current = rank(span) if span else 0
        for f in invariant_polynomials(group, d):
            candidate = span + [_coords(f, d)]
            if rank(candidate) > current:
                generators.append(f)
                span = candidate
                current += 1
    logger.debug(f"Hilbert ideal generators: {[f.to_string() for f in generators]}")
    return generators
