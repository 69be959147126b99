"""
Graded-commutative polynomial arithmetic.

Every object the workbench verifies is a polynomial in Z-graded variables
whose coefficients are exact rationals times monomials in the formal
parameters hbar, u and the imaginary unit. Coefficients are sympy
expressions kept in expanded form, so a verified identity means an exact
zero, never a small float.

Variables carry three gradings: the ghost number, the form degree on the
source manifold and the variational degree (1 for the symbol δx of a field
variable x, 0 otherwise). Parity is the sum of the three modulo 2. Keeping
δ-symbols in the same algebra lets variational forms reuse this module.
"""

import logging
import numbers
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import sympy
from sympy.parsing.sympy_parser import parse_expr

from .exceptions import GradingError, StructureError

logger = logging.getLogger(__name__)

HBAR = sympy.Symbol('hbar')
U = sympy.Symbol('u')
I = sympy.I

# A variable key is (variational degree, declaration index). Sorting keys
# gives the canonical order: field variables in declaration order, then
# their δ-symbols in the same order.
Key = Tuple[int, int]
Monomial = Tuple[Tuple[Key, int], ...]

INHOMOGENEOUS = 'inhomogeneous'


class AnyGhost:
    """Ghost number of the zero polynomial: equal to every integer."""

    def __eq__(self, other) -> bool:
        return isinstance(other, (numbers.Integral, AnyGhost)) and not isinstance(other, bool)

    def __ne__(self, other) -> bool:
        return not self == other

    def __hash__(self) -> int:
        return hash('any')

    def __str__(self) -> str:
        return 'any'

    __repr__ = __str__


ANY = AnyGhost()


@dataclass(frozen=True)
class Parameter:
    """A formal parameter carried by coefficients (hbar, u, i, ...)."""
    name: str
    ghost: int = 0
    relation: Optional[str] = None

    @property
    def symbol(self) -> sympy.Expr:
        """
        The sympy value of the parameter: i for a root of x² + 1, else a free symbol.

        Raises:
            StructureError: For any other relation
        """
        if self.relation is None:
            return sympy.Symbol(self.name)
        if _solves_imaginary(self.name, self.relation):
            return sympy.I
        raise StructureError(f"Unsupported relation '{self.relation}' for parameter '{self.name}'")


def _solves_imaginary(name: str, relation: str) -> bool:
    """True when substituting i for name satisfies the relation written as lhs=rhs."""
    if relation.count('=') != 1:
        return False
    local = {name: sympy.Symbol(name)}
    try:
        lhs, rhs = (parse_expr(side.replace('^', '**'), local_dict=local)
                    for side in relation.split('='))
    except (SyntaxError, TypeError, sympy.SympifyError):
        return False
    return sympy.expand((lhs - rhs).subs(local[name], sympy.I)) == 0


HBAR_PARAMETER = Parameter('hbar', 0)
U_PARAMETER = Parameter('u', 2)
IMAGINARY_UNIT = Parameter('i', 0, 'i^2=-1')


@dataclass(frozen=True)
class GradedVar:
    """
    A graded variable.

    Attributes:
        name: Identifier, unique within its VariableTable
        ghost: Ghost number
        formdeg: Form degree on the source manifold
        vdeg: Variational degree (1 for δ-symbols)
    """
    name: str
    ghost: int
    formdeg: int = 0
    vdeg: int = 0

    @property
    def parity(self) -> int:
        return (self.ghost + self.formdeg + self.vdeg) % 2

    @property
    def is_odd(self) -> bool:
        return self.parity == 1


class VariableTable:
    """
    Ordered registry of graded variables and formal parameters.

    Declaration order is the monomial order. Each field variable x has a
    δ-symbol δx with the same ghost number, variational degree 1 and
    opposite parity.
    """

    def __init__(self, name: str = 'model'):
        self.name = name
        self._vars: List[GradedVar] = []
        self._deltas: List[GradedVar] = []
        self._index: Dict[str, int] = {}
        self.parameters: Dict[str, Parameter] = {
            p.name: p for p in (HBAR_PARAMETER, U_PARAMETER, IMAGINARY_UNIT)
        }

    def __len__(self) -> int:
        return len(self._vars)

    def __iter__(self) -> Iterator[GradedVar]:
        return iter(self._vars)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> GradedVar:
        try:
            return self._vars[self._index[name]]
        except KeyError:
            raise StructureError(f"Unknown variable '{name}' in table '{self.name}'")

    def declare(self, name: str, ghost: int, formdeg: int = 0) -> GradedVar:
        """
        Declare a new field variable.

        Raises:
            GradingError: If the name is taken or the form degree is negative
        """
        if name in self._index:
            raise GradingError(f"Variable '{name}' declared twice")
        if formdeg < 0:
            raise GradingError(f"Variable '{name}' has negative form degree {formdeg}")
        var = GradedVar(name, ghost, formdeg, 0)
        self._index[name] = len(self._vars)
        self._vars.append(var)
        self._deltas.append(GradedVar(f"δ{name}", ghost, formdeg, 1))
        return var

    def declare_parameter(self, name: str, ghost: int = 0,
                          relation: Optional[str] = None) -> Parameter:
        param = Parameter(name, ghost, relation)
        self.parameters[name] = param
        return param

    @property
    def parameter_ghosts(self) -> Dict[sympy.Symbol, int]:
        return {
            p.symbol: p.ghost for p in self.parameters.values()
            if p.ghost and p.relation is None
        }

    def key(self, var: Union[GradedVar, str]) -> Key:
        if isinstance(var, str):
            return (0, self._index[var]) if var in self._index else self._delta_key(var)
        if var.vdeg:
            return (1, self._index[var.name[1:]])
        if var.name not in self._index:
            raise StructureError(f"Variable '{var.name}' not in table '{self.name}'")
        return (0, self._index[var.name])

    def _delta_key(self, name: str) -> Key:
        if name.startswith('δ') and name[1:] in self._index:
            return (1, self._index[name[1:]])
        raise StructureError(f"Unknown variable '{name}' in table '{self.name}'")

    def var(self, key: Key) -> GradedVar:
        vdeg, index = key
        return self._deltas[index] if vdeg else self._vars[index]

    def delta(self, var: GradedVar) -> GradedVar:
        return self._deltas[self._index[var.name]]

    def parity(self, key: Key) -> int:
        return self.var(key).parity

    def ghost(self, key: Key) -> int:
        return self.var(key).ghost

    def poly(self, name: str) -> 'GradedPoly':
        return GradedPoly.generator(self, self[name])

    def field_keys(self) -> List[Key]:
        return [(0, i) for i in range(len(self._vars))]


def _clean(coef) -> sympy.Expr:
    return sympy.expand(sympy.sympify(coef))


def normalize_product(table: VariableTable, a: Monomial, b: Monomial) -> Tuple[int, Monomial]:
    """
    Multiply two canonical monomials.

    Returns:
        (sign, monomial); sign 0 signals a repeated odd variable
    """
    odd_a = [k for k, _ in a if table.parity(k)]
    merged = dict(a)
    sign = 1
    for k, e in b:
        if table.parity(k):
            if k in merged:
                return 0, ()
            if sum(1 for x in odd_a if x > k) % 2:
                sign = -sign
        merged[k] = merged.get(k, 0) + e
    return sign, tuple(sorted(merged.items()))


class GradedPoly:
    """
    Exact polynomial over a VariableTable.

    Terms map canonical monomials to nonzero expanded sympy coefficients.
    Instances are treated as immutable.
    """

    __slots__ = ('table', 'terms')

    def __init__(self, table: VariableTable, terms: Optional[Mapping[Monomial, sympy.Expr]] = None):
        self.table = table
        self.terms: Dict[Monomial, sympy.Expr] = {}
        for mono, coef in (terms or {}).items():
            _accumulate(self.terms, mono, coef)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, table: VariableTable) -> 'GradedPoly':
        return cls(table)

    @classmethod
    def constant(cls, table: VariableTable, value) -> 'GradedPoly':
        return cls(table, {(): value})

    @classmethod
    def generator(cls, table: VariableTable, var: GradedVar) -> 'GradedPoly':
        return cls(table, {((table.key(var), 1),): sympy.Integer(1)})

    @classmethod
    def monomial(cls, table: VariableTable, mono: Monomial, coef=1) -> 'GradedPoly':
        return cls(table, {mono: coef})

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _check(self, other: 'GradedPoly') -> None:
        if other.table is not self.table:
            raise StructureError(
                f"Polynomials over different tables ('{self.table.name}', '{other.table.name}')"
            )

    def _coerce(self, other) -> 'GradedPoly':
        if isinstance(other, GradedPoly):
            self._check(other)
            return other
        return GradedPoly.constant(self.table, other)

    def __add__(self, other) -> 'GradedPoly':
        other = self._coerce(other)
        terms = dict(self.terms)
        for mono, coef in other.terms.items():
            _accumulate(terms, mono, coef)
        return _raw(self.table, terms)

    __radd__ = __add__

    def __neg__(self) -> 'GradedPoly':
        return _raw(self.table, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> 'GradedPoly':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'GradedPoly':
        return self._coerce(other) - self

    def __mul__(self, other) -> 'GradedPoly':
        if not isinstance(other, GradedPoly):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other) -> 'GradedPoly':
        return self.scale(other)

    def __pow__(self, exponent: int) -> 'GradedPoly':
        result = GradedPoly.constant(self.table, 1)
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def scale(self, factor) -> 'GradedPoly':
        factor = sympy.sympify(factor)
        return GradedPoly(self.table, {m: c * factor for m, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedPoly):
            return other.table is self.table and (self - other).is_zero()
        return (self - GradedPoly.constant(self.table, other)).is_zero()

    def __hash__(self):
        return hash(tuple(sorted(self.terms.keys())))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return not self.is_zero()

    # ------------------------------------------------------------------
    # Gradings
    # ------------------------------------------------------------------

    def term_ghosts(self) -> Iterable[int]:
        ghosts = self.table.parameter_ghosts
        for mono, coef in self.terms.items():
            base = sum(self.table.ghost(k) * e for k, e in mono)
            for piece in sympy.Add.make_args(coef):
                yield base + sum(g * sympy.degree(piece, s) for s, g in ghosts.items())

    def ghost_number(self) -> Union[int, str]:
        """Common ghost number, INHOMOGENEOUS, or ANY for the zero polynomial."""
        values = set(self.term_ghosts())
        if not values:
            return ANY
        if len(values) > 1:
            return INHOMOGENEOUS
        return values.pop()

    def parity(self) -> Optional[int]:
        """Common parity of all terms, or None when mixed or zero."""
        values = {sum(self.table.parity(k) * e for k, e in m) % 2 for m in self.terms}
        return values.pop() if len(values) == 1 else None

    def split_by_parity(self) -> Dict[int, 'GradedPoly']:
        parts: Dict[int, Dict[Monomial, sympy.Expr]] = {0: {}, 1: {}}
        for mono, coef in self.terms.items():
            parts[sum(self.table.parity(k) * e for k, e in mono) % 2][mono] = coef
        return {p: _raw(self.table, t) for p, t in parts.items() if t}

    def keys(self) -> set:
        return {k for mono in self.terms for k, _ in mono}

    def field_support(self) -> set:
        """Field variables whose value or δ-symbol occurs in some term."""
        return {(0, k[1]) for k in self.keys()}

    # ------------------------------------------------------------------
    # Parameters
    # ------------------------------------------------------------------

    def parameter_coefficient(self, symbol: sympy.Symbol, power: int) -> 'GradedPoly':
        """The coefficient of symbol**power, as a polynomial."""
        return GradedPoly(self.table, {m: c.coeff(symbol, power) for m, c in self.terms.items()})

    def truncate(self, symbol: sympy.Symbol, order: int) -> 'GradedPoly':
        result = GradedPoly.zero(self.table)
        for power in range(order + 1):
            result = result + self.parameter_coefficient(symbol, power).scale(symbol ** power)
        return result

    # ------------------------------------------------------------------
    # Rendering
    # ------------------------------------------------------------------

    def render_monomial(self, mono: Monomial) -> str:
        parts = []
        for key, exp in mono:
            name = self.table.var(key).name
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return '*'.join(parts)

    def render(self) -> str:
        if not self.terms:
            return '0'
        pieces = []
        for mono in sorted(self.terms):
            coef = self.terms[mono]
            body = self.render_monomial(mono)
            if not body:
                pieces.append(f"({sympy.sstr(coef)})")
            elif coef == 1:
                pieces.append(body)
            else:
                pieces.append(f"({sympy.sstr(coef)})*{body}")
        return ' + '.join(pieces)

    def __repr__(self) -> str:
        return f"GradedPoly({self.render()})"


# A variational form is a polynomial in field variables and δ-symbols.
FieldForm = GradedPoly


def _accumulate(terms: Dict[Monomial, sympy.Expr], mono: Monomial, coef) -> None:
    value = _clean(terms.get(mono, 0) + coef)
    if value == 0:
        terms.pop(mono, None)
    else:
        terms[mono] = value


def _raw(table: VariableTable, terms: Dict[Monomial, sympy.Expr]) -> GradedPoly:
    poly = GradedPoly.__new__(GradedPoly)
    poly.table = table
    poly.terms = terms
    return poly


def mul(f: GradedPoly, g: GradedPoly) -> GradedPoly:
    """Graded product, the bilinear extension of normalize_product."""
    f._check(g)
    terms: Dict[Monomial, sympy.Expr] = {}
    for ma, ca in f.terms.items():
        for mb, cb in g.terms.items():
            sign, mono = normalize_product(f.table, ma, mb)
            if sign:
                _accumulate(terms, mono, sign * ca * cb)
    return _raw(f.table, terms)


def left_derivative(f: GradedPoly, var: Union[GradedVar, Key]) -> GradedPoly:
    """
    Graded left derivative: move var to the front of each monomial, then delete it.
    """
    table = f.table
    key = var if isinstance(var, tuple) else table.key(var)
    odd = table.parity(key)
    terms: Dict[Monomial, sympy.Expr] = {}
    for mono, coef in f.terms.items():
        passed = 0
        rest = []
        exponent = 0
        for k, e in mono:
            if k == key:
                exponent = e
                if e > 1:
                    rest.append((k, e - 1))
            else:
                if not exponent and table.parity(k):
                    passed += e
                rest.append((k, e))
        if not exponent:
            continue
        if odd:
            _accumulate(terms, tuple(rest), -coef if passed % 2 else coef)
        else:
            _accumulate(terms, tuple(rest), coef * exponent)
    return _raw(table, terms)


def right_derivative(f: GradedPoly, var: Union[GradedVar, Key]) -> GradedPoly:
    """Right derivative, ∂^R_v f = (−1)^{|v|(|f|+1)} ∂^L_v f on each parity component."""
    table = f.table
    key = var if isinstance(var, tuple) else table.key(var)
    result = GradedPoly.zero(table)
    for parity, part in f.split_by_parity().items():
        sign = -1 if (table.parity(key) * (parity + 1)) % 2 else 1
        result = result + left_derivative(part, key).scale(sign)
    return result


def ghost_number(f: GradedPoly) -> Union[int, str]:
    return f.ghost_number()


def _binding_ok(var: GradedVar, value: GradedPoly) -> bool:
    if value.is_zero():
        return True
    ghost = value.ghost_number()
    return ghost == var.ghost and value.parity() == var.parity


def substitute(f: GradedPoly, bindings: Mapping[Union[str, GradedVar], GradedPoly]) -> GradedPoly:
    """
    Simultaneous graded substitution.

    Raises:
        GradingError: If a binding changes ghost number or parity
    """
    table = f.table
    resolved: Dict[Key, GradedPoly] = {}
    for var, value in bindings.items():
        var = table[var] if isinstance(var, str) else var
        value = value if isinstance(value, GradedPoly) else GradedPoly.constant(table, value)
        if not _binding_ok(var, value):
            raise GradingError(
                f"Binding {var.name} -> {value.render()} violates grading "
                f"(ghost {var.ghost}, parity {var.parity})"
            )
        resolved[table.key(var)] = value

    result = GradedPoly.zero(table)
    for mono, coef in f.terms.items():
        term = GradedPoly.constant(table, coef)
        for key, exp in mono:
            factor = resolved.get(key)
            if factor is None:
                factor = GradedPoly.monomial(table, ((key, 1),))
            for _ in range(exp):
                term = mul(term, factor)
        result = result + term
    return result
