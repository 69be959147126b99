"""
Darboux symplectic structures and the Cartan calculus on the field space.

Conventions (frozen in CONVENTIONS.md):
    δ      = Σ_v δv ∂^L_v                          odd derivation, δ² = 0
    ι_X    = Σ_v X^v ∂^L_{δv}                      parity |X| + 1
    L_X    = ι_X δ + (−1)^{|X|} δ ι_X              graded commutator [ι_X, δ]
    ω      = Σ_i δx_i δθ_i                         base first, momentum second
    (f, g) = (−1)^{|f| |ω|} X_f(g)                 with ι_{X_f} ω = δf
    Δ      = Σ_i ∂_{x_i} ∂_{θ_i}                   θ-derivative applied first
    div X  = Σ_v (−1)^{|v|(|X|+1)} ∂_v X^v         so that Δf = ½ div X_f
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import sympy

from .algebra import (
    GradedPoly, GradedVar, Key, VariableTable, FieldForm, left_derivative, mul,
)
from .exceptions import DegenerateDegreeError, GradingError, StructureError

logger = logging.getLogger(__name__)


class Derivation:
    """
    A vector field Σ_v X^v ∂/∂v on the field variables.

    Components are stored only for nonzero coefficients. The ghost number is
    None for inhomogeneous fields (e.g. a sum built by hand).
    """

    __slots__ = ('table', 'components', 'ghost')

    def __init__(self, table: VariableTable, components: Mapping[Key, GradedPoly],
                 ghost: Optional[int] = None):
        self.table = table
        self.components: Dict[Key, GradedPoly] = {
            k: v for k, v in components.items() if not v.is_zero()
        }
        self.ghost = ghost

    @classmethod
    def zero(cls, table: VariableTable, ghost: Optional[int] = None) -> 'Derivation':
        return cls(table, {}, ghost)

    @classmethod
    def from_names(cls, table: VariableTable, components: Mapping[str, GradedPoly],
                   ghost: Optional[int] = None) -> 'Derivation':
        return cls(table, {table.key(name): value for name, value in components.items()}, ghost)

    @property
    def parity(self) -> int:
        for key, comp in self.components.items():
            p = comp.parity()
            if p is not None:
                return (p + self.table.parity(key)) % 2
        return (self.ghost or 0) % 2

    def component(self, name: str) -> GradedPoly:
        return self.components.get(self.table.key(name), GradedPoly.zero(self.table))

    def is_zero(self) -> bool:
        return not self.components

    def is_homogeneous(self) -> bool:
        """True when gh(X^v) = ghost + gh(v) for every component."""
        if self.ghost is None:
            return False
        for key, comp in self.components.items():
            if comp.ghost_number() != self.ghost + self.table.ghost(key):
                return False
        return True

    def __call__(self, f: GradedPoly) -> GradedPoly:
        return apply(self, f)

    def __add__(self, other: 'Derivation') -> 'Derivation':
        comps = dict(self.components)
        for key, value in other.components.items():
            comps[key] = comps[key] + value if key in comps else value
        ghost = self.ghost if self.ghost == other.ghost else None
        return Derivation(self.table, comps, ghost)

    def __neg__(self) -> 'Derivation':
        return self.scale(-1)

    def __sub__(self, other: 'Derivation') -> 'Derivation':
        return self + (-other)

    def scale(self, factor, ghost_shift: int = 0) -> 'Derivation':
        ghost = None if self.ghost is None else self.ghost + ghost_shift
        return Derivation(self.table, {k: v.scale(factor) for k, v in self.components.items()}, ghost)

    def __eq__(self, other) -> bool:
        return isinstance(other, Derivation) and (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.components)))

    def render(self) -> str:
        if not self.components:
            return '0'
        return ' + '.join(
            f"({self.components[k].render()})∂_{self.table.var(k).name}"
            for k in sorted(self.components)
        )

    def __repr__(self) -> str:
        return f"Derivation({self.render()})"


@dataclass
class DarbouxStructure:
    """
    Darboux symplectic data: conjugate pairs, degree parameter k, Euler field.

    The symplectic form ω = Σ δx_i δθ_i has ghost number k − 1.
    """
    table: VariableTable
    pairs: List[Tuple[GradedVar, GradedVar]]
    k: int = 0
    _partner: Dict[Key, Tuple[Key, int]] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        seen = set()
        for base, momentum in self.pairs:
            for var in (base, momentum):
                if var.name in seen:
                    raise GradingError(f"Variable '{var.name}' appears in two Darboux pairs")
                seen.add(var.name)
            if base.ghost + momentum.ghost != self.k - 1:
                raise GradingError(
                    f"Pair ({base.name}, {momentum.name}): gh {base.ghost} + {momentum.ghost} "
                    f"!= k - 1 = {self.k - 1}"
                )
            if (base.parity + momentum.parity) % 2 != (self.k - 1) % 2:
                raise GradingError(
                    f"Pair ({base.name}, {momentum.name}) has parities inconsistent with k = {self.k}"
                )
            bk, mk = self.table.key(base), self.table.key(momentum)
            self._partner[bk] = (mk, 0)
            self._partner[mk] = (bk, 1)

    @property
    def omega_parity(self) -> int:
        return (self.k - 1) % 2

    @property
    def omega(self) -> FieldForm:
        """ω = Σ δx_i δθ_i."""
        result = GradedPoly.zero(self.table)
        for base, momentum in self.pairs:
            result = result + mul(
                GradedPoly.generator(self.table, self.table.delta(base)),
                GradedPoly.generator(self.table, self.table.delta(momentum)),
            )
        return result

    @property
    def euler(self) -> Derivation:
        """E = Σ_v gh(v) v ∂_v over every field variable of the table."""
        comps = {}
        for var in self.table:
            if var.ghost:
                comps[self.table.key(var)] = GradedPoly.generator(self.table, var).scale(var.ghost)
        return Derivation(self.table, comps, 0)

    def require_euler(self) -> None:
        if self.k == -1:
            raise DegenerateDegreeError("The Euler construction is undefined for k = -1")

    def check_table(self, f: GradedPoly) -> None:
        if f.table is not self.table:
            raise StructureError(
                f"Polynomial over '{f.table.name}' used with a Darboux structure over '{self.table.name}'"
            )

    def key_pairs(self) -> Iterable[Tuple[Key, Key]]:
        for base, momentum in self.pairs:
            yield self.table.key(base), self.table.key(momentum)

    def variables(self) -> List[Key]:
        return [k for pair in self.key_pairs() for k in pair]


# ----------------------------------------------------------------------
# Cartan calculus
# ----------------------------------------------------------------------

def _delta_symbol(table: VariableTable, key: Key) -> GradedPoly:
    return GradedPoly.monomial(table, (((1, key[1]), 1),))


def variational_delta(phi: FieldForm) -> FieldForm:
    """δφ = Σ_v δv ∂^L_v φ; raises the variational degree by one."""
    table = phi.table
    result = GradedPoly.zero(table)
    for key in sorted(k for k in phi.keys() if k[0] == 0):
        result = result + mul(_delta_symbol(table, key), left_derivative(phi, key))
    return result


def contract(X: Derivation, phi: FieldForm) -> FieldForm:
    """Interior product ι_X φ = Σ_v X^v ∂^L_{δv} φ."""
    table = phi.table
    result = GradedPoly.zero(table)
    present = phi.keys()
    for key, comp in X.components.items():
        dkey = (1, key[1])
        if dkey in present:
            result = result + mul(comp, left_derivative(phi, dkey))
    return result


def lie(X: Derivation, phi: FieldForm) -> FieldForm:
    """L_X = ι_X δ + (−1)^{|X|} δ ι_X."""
    first = contract(X, variational_delta(phi))
    second = variational_delta(contract(X, phi))
    return first - second if X.parity else first + second


def apply(X: Derivation, f: GradedPoly) -> GradedPoly:
    """X acting on a function: Σ_v X^v ∂^L_v f."""
    result = GradedPoly.zero(f.table)
    present = f.keys()
    for key, comp in X.components.items():
        if key in present:
            result = result + mul(comp, left_derivative(f, key))
    return result


def commutator(X: Derivation, Y: Derivation) -> Derivation:
    """[X, Y]^v = X(Y^v) − (−1)^{|X||Y|} Y(X^v)."""
    sign = -1 if (X.parity * Y.parity) % 2 else 1
    keys = set(X.components) | set(Y.components)
    zero = GradedPoly.zero(X.table)
    comps = {}
    for key in keys:
        comps[key] = apply(X, Y.components.get(key, zero)) - apply(Y, X.components.get(key, zero)).scale(sign)
    ghost = None if X.ghost is None or Y.ghost is None else X.ghost + Y.ghost
    return Derivation(X.table, comps, ghost)


def lie_commutator(X: Derivation, Y: Derivation, phi: FieldForm) -> FieldForm:
    """[L_X, ι_Y]φ = L_X ι_Y φ − (−1)^{|X|(|Y|+1)} ι_Y L_X φ."""
    sign = -1 if (X.parity * (Y.parity + 1)) % 2 else 1
    return lie(X, contract(Y, phi)) - contract(Y, lie(X, phi)).scale(sign)


# ----------------------------------------------------------------------
# Hamiltonian calculus
# ----------------------------------------------------------------------

def hamiltonian_vf(f: GradedPoly, D: DarbouxStructure) -> Derivation:
    """
    The vector field X_f with ι_{X_f} ω = δf.

    Each parity component of f is treated separately so inhomogeneous
    inputs (such as an action containing hbar-weighted pieces) are allowed.
    """
    D.check_table(f)
    table = D.table
    comps: Dict[Key, GradedPoly] = {}
    for parity, part in f.split_by_parity().items():
        vf_parity = (parity + D.omega_parity) % 2
        for base_key, mom_key in D.key_pairs():
            px, ptheta = table.parity(base_key), table.parity(mom_key)
            sx = -1 if ((vf_parity + px) * (ptheta + 1)) % 2 else 1
            st = -1 if ((vf_parity + 1) * (px + 1)) % 2 else 1
            x_comp = left_derivative(part, mom_key).scale(sx)
            t_comp = left_derivative(part, base_key).scale(st)
            for key, comp in ((base_key, x_comp), (mom_key, t_comp)):
                if not comp.is_zero():
                    comps[key] = comps[key] + comp if key in comps else comp
    ghost = f.ghost_number()
    ghost = ghost - (D.k - 1) if isinstance(ghost, int) else None
    return Derivation(table, comps, ghost)


def bv_bracket(f: GradedPoly, g: GradedPoly, D: DarbouxStructure) -> GradedPoly:
    """The bracket (f, g) = (−1)^{|f||ω|} X_f(g) induced by ω."""
    D.check_table(f)
    D.check_table(g)
    result = GradedPoly.zero(D.table)
    for parity, part in f.split_by_parity().items():
        value = apply(hamiltonian_vf(part, D), g)
        result = result + (value.scale(-1) if (parity * D.omega_parity) % 2 else value)
    return result


def bv_laplacian(f: GradedPoly, D: DarbouxStructure) -> GradedPoly:
    """Δf = Σ_i ∂_{x_i} ∂_{θ_i} f for the odd structure (k = 0)."""
    D.check_table(f)
    if D.omega_parity != 1:
        raise StructureError("The BV Laplacian needs an odd symplectic structure")
    result = GradedPoly.zero(D.table)
    present = f.keys()
    for base_key, mom_key in D.key_pairs():
        if base_key in present and mom_key in present:
            result = result + left_derivative(left_derivative(f, mom_key), base_key)
    return result


def divergence(X: Derivation, D: DarbouxStructure) -> GradedPoly:
    """div X for the constant reference density, normalised so that Δf = ½ div X_f."""
    table = D.table
    result = GradedPoly.zero(table)
    for key, comp in X.components.items():
        term = left_derivative(comp, key)
        if (table.parity(key) * (X.parity + 1)) % 2:
            term = -term
        result = result + term
    return result


def hamiltonian_check(f: GradedPoly, D: DarbouxStructure) -> GradedPoly:
    """Residual ι_{X_f} ω − δf; zero whenever the sign table is consistent."""
    residual = contract(hamiltonian_vf(f, D), D.omega) - variational_delta(f)
    if not residual.is_zero():
        logger.error(f"Hamiltonian field inconsistent | residual={residual.render()}")
    return residual


def half(poly: GradedPoly) -> GradedPoly:
    return poly.scale(sympy.Rational(1, 2))


def _variable_ghost(table: VariableTable, mono) -> int:
    return sum(table.ghost(k) * e for k, e in mono)


def euler_primitive(beta: FieldForm, D: DarbouxStructure) -> GradedPoly:
    """
    Primitive of a closed variational 1-form via the Euler field.

    Terms are grouped by the ghost number carried by field variables (the
    parameter u is counted separately), and each group g contributes
    ι_E β_g / g. For a homogeneous β of ghost k + 1 without parameters this
    is the familiar H / (k + 1) with H = ι_E β.

    Raises:
        DegenerateDegreeError: For k = −1 or a group of variable ghost zero
    """
    D.require_euler()
    table = D.table
    groups: Dict[int, Dict] = {}
    for mono, coef in beta.terms.items():
        groups.setdefault(_variable_ghost(table, mono), {})[mono] = coef
    euler = D.euler
    result = GradedPoly.zero(table)
    for ghost, terms in sorted(groups.items()):
        if ghost == 0:
            raise DegenerateDegreeError("Euler primitive undefined on ghost-zero components")
        result = result + contract(euler, GradedPoly(table, terms)).scale(sympy.Rational(1, ghost))
    return result


def constant_form_matrix(form: FieldForm, keys: List[Key]) -> sympy.Matrix:
    """
    The matrix a_{vw} = ∂_{δw} ∂_{δv} ω of a constant-coefficient 2-form.

    Row v holds the coefficients of ι_{∂_v} ω = Σ_w a_{vw} δw.

    Raises:
        StructureError: If a coefficient depends on a field variable
    """
    size = len(keys)
    matrix = sympy.zeros(size, size)
    for i, v in enumerate(keys):
        row = left_derivative(form, (1, v[1]))
        for j, w in enumerate(keys):
            coef = left_derivative(row, (1, w[1]))
            if not coef.is_zero():
                if any(coef.terms.keys() - {()}):
                    raise StructureError("Form has non-constant coefficients")
                matrix[i, j] = coef.terms[()]
    return matrix


class ConstantSymplecticForm:
    """
    A constant-coefficient nondegenerate 2-form on a subset of variables.

    Used for the reduced boundary structure, whose normal form need not be
    Darboux. Hamiltonian vector fields are obtained by inverting the
    constant matrix a_{vw} defined by ∂_{δv} ω = Σ_w a_{vw} δw.
    """

    def __init__(self, form: FieldForm, keys: List[Key]):
        """
        Raises:
            StructureError: If the form has non-constant coefficients or is
                degenerate on the given variables
        """
        self.form = form
        self.table = form.table
        self.keys = list(keys)
        self.parity = (form.parity() or 0) % 2 if not form.is_zero() else 0
        matrix = constant_form_matrix(form, self.keys)
        if self.keys and sympy.expand(matrix.det()) == 0:
            names = [self.table.var(k).name for k in self.keys]
            raise StructureError(f"Form is degenerate on {names} (rank {matrix.rank()} of {len(names)})")
        self.matrix = matrix
        self.inverse = matrix.inv() if self.keys else matrix

    def hamiltonian_vf(self, f: GradedPoly) -> Derivation:
        """X_f with ι_{X_f} ω = δf."""
        table = self.table
        comps: Dict[Key, GradedPoly] = {}
        for parity, part in f.split_by_parity().items():
            rhs = []
            for w in self.keys:
                pw = table.parity(w)
                sign = -1 if ((pw + 1) * (parity + pw)) % 2 else 1
                rhs.append(left_derivative(part, w).scale(sign))
            for j, v in enumerate(self.keys):
                comp = GradedPoly.zero(table)
                for i, w in enumerate(self.keys):
                    entry = self.inverse[i, j]
                    if entry != 0 and not rhs[i].is_zero():
                        comp = comp + rhs[i].scale(entry)
                if not comp.is_zero():
                    comps[v] = comps[v] + comp if v in comps else comp
        ghost = f.ghost_number()
        form_ghost = self.form.ghost_number()
        if isinstance(ghost, int) and isinstance(form_ghost, int):
            ghost = ghost - form_ghost
        else:
            ghost = None
        return Derivation(table, comps, ghost)

    def bracket(self, f: GradedPoly, g: GradedPoly) -> GradedPoly:
        """{f, g} = (−1)^{|f||ω|} X_f(g)."""
        result = GradedPoly.zero(self.table)
        for parity, part in f.split_by_parity().items():
            value = apply(self.hamiltonian_vf(part), g)
            result = result + (value.scale(-1) if (parity * self.parity) % 2 else value)
        return result
