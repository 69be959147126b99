"""
Line-oriented model files.

    # toy odd Darboux model
    model toy_xy_theta
    param i relation i^2+1=0
    var x ghost 0
    var theta ghost -1
    pair x theta
    symplectic k 0
    action x*theta
    check cme

Split presets additionally declare boundary coordinates and S∂:

    polarize q p
    boundary_action eta*q - eta*p

An equivariant file writes its action as S + u*S_iota and says so:

    equivariant u vector rotation

Expressions use + - * ^ and parentheses with ^ > * > + -. The grammar is
parsed with lark; expressions are kept as small trees so that a parsed
file can be rendered back to canonical text and re-parsed to the same
ModelSpecFile.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy
from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from .algebra import GradedPoly, VariableTable
from .discrete import AXIAL, ROTATION
from .exceptions import GradingError, ModelParseError, WorkbenchError
from .master_eq import BvModel
from .quantization import SplitModel, split_from_data
from .symplectic import DarbouxStructure

logger = logging.getLogger(__name__)

CHECKS = (
    'cme', 'qme', 'weak_bv', 'lemma_chain', 'action_flow', 'laplacian_divergence',
    'boundary', 'summary', 'quantum', 'split', 'equivariant', 'all',
)

MODEL_GRAMMAR = r"""
start: (_statement? _NL)*

_statement: model | param | var | pair | symplectic | action | equivariant
          | check | polarize | boundary_action

model: "model" NAME
param: "param" NAME ("ghost" SIGNED_INT)? ("relation" expr "=" "0")?
var: "var" NAME "ghost" SIGNED_INT ("formdeg" INT)?
pair: "pair" NAME NAME
symplectic: "symplectic" NAME SIGNED_INT
action: "action" expr
equivariant: "equivariant" NAME "vector" NAME
check: "check" NAME
polarize: "polarize" NAME NAME
boundary_action: "boundary_action" expr

?expr: term
     | expr "+" term   -> add
     | expr "-" term   -> sub
?term: factor
     | term "*" factor -> mul
?factor: power
       | "-" factor    -> neg
?power: atom
      | atom "^" INT   -> pow
?atom: NUMBER          -> number
     | NAME            -> symbol
     | "(" expr ")"

NAME: /[A-Za-z_][A-Za-z0-9_]*/
COMMENT: /#[^\n]*/
_NL: /(\r?\n)+/

%import common.SIGNED_INT
%import common.INT
%import common.NUMBER
%ignore COMMENT
%ignore /[ \t]+/
"""

_PARSER = Lark(MODEL_GRAMMAR, parser='lalr', propagate_positions=True)

# Expression trees: ('num', text) | ('sym', name) | (op, left, right) | ('neg', x) | ('pow', x, n)
Expr = tuple


@dataclass(frozen=True)
class ParamDecl:
    name: str
    ghost: int = 0
    relation: Optional[Expr] = None


@dataclass(frozen=True)
class VarDecl:
    name: str
    ghost: int
    formdeg: int = 0
    line: int = field(default=0, compare=False)


@dataclass
class ModelSpecFile:
    """
    A parsed model file.

    Declaration order is preserved; it fixes the variable order of the
    table and therefore the monomial order of every rendered residual.
    """
    model_id: str = 'model'
    params: List[ParamDecl] = field(default_factory=list)
    variables: List[VarDecl] = field(default_factory=list)
    pairs: List[Tuple[str, str]] = field(default_factory=list)
    k: int = 0
    action: Optional[Expr] = None
    checks: List[str] = field(default_factory=list)
    polarization: List[Tuple[str, str]] = field(default_factory=list)
    boundary_action: Optional[Expr] = None
    equivariant: Optional[str] = None
    pair_lines: List[int] = field(default_factory=list, compare=False, repr=False)

    def build_table(self) -> VariableTable:
        table = VariableTable(self.model_id)
        for param in self.params:
            relation = render_expr(param.relation) + '=0' if param.relation is not None else None
            table.declare_parameter(param.name, param.ghost, relation)
        for var in self.variables:
            try:
                table.declare(var.name, var.ghost, var.formdeg)
            except GradingError as exc:
                raise GradingError(f"line {var.line}: {exc}") from exc
        return table

    def build_structure(self, table: Optional[VariableTable] = None) -> DarbouxStructure:
        """
        Darboux data of the file.

        Raises:
            GradingError: Naming the offending pair declaration
        """
        table = table or self.build_table()
        pairs = []
        for index, (base, momentum) in enumerate(self.pairs):
            line = self.pair_lines[index] if index < len(self.pair_lines) else 0
            try:
                pairs.append((table[base], table[momentum]))
            except WorkbenchError as exc:
                raise ModelParseError(str(exc), line) from exc
            try:
                DarbouxStructure(table, pairs[-1:], self.k)
            except GradingError as exc:
                raise GradingError(f"line {line}: pair {base} {momentum}: {exc}") from exc
        return DarbouxStructure(table, pairs, self.k)

    def evaluate(self, tree: Optional[Expr], table: VariableTable) -> GradedPoly:
        if tree is None:
            return GradedPoly.zero(table)
        return evaluate_expr(tree, table)


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------

@v_args(inline=True)
class _ModelTransformer(Transformer):
    """Turn the lark tree into statement tuples with expression trees."""

    def number(self, token):
        return ('num', str(token))

    def symbol(self, token):
        return ('sym', str(token))

    def add(self, left, right):
        return ('add', left, right)

    def sub(self, left, right):
        return ('sub', left, right)

    def mul(self, left, right):
        return ('mul', left, right)

    def neg(self, value):
        return ('neg', value)

    def pow(self, base, exponent):
        return ('pow', base, int(exponent))


def _statements(tree) -> List[Tuple[str, int, int, list]]:
    result = []
    for child in tree.children:
        meta = child.meta
        result.append((child.data, getattr(meta, 'line', 0), getattr(meta, 'column', 0), child.children))
    return result


def parse(source: str) -> ModelSpecFile:
    """
    Parse model-file text.

    Raises:
        ModelParseError: On a syntax error or an unknown keyword argument,
            carrying line and column
        GradingError: If a Darboux pair violates gh(base) + gh(momentum) = k − 1
    """
    text = source if source.endswith('\n') else source + '\n'
    try:
        tree = _PARSER.parse(text)
        tree = _ModelTransformer().transform(tree)
    except (UnexpectedCharacters, UnexpectedEOF, UnexpectedInput) as exc:
        raise ModelParseError(
            f"syntax error near {_describe(exc)}", getattr(exc, 'line', 0) or 0,
            getattr(exc, 'column', 0) or 0,
        ) from exc
    except VisitError as exc:
        raise ModelParseError(f"malformed expression: {exc.orig_exc}") from exc

    spec = ModelSpecFile()
    for kind, line, column, args in _statements(tree):
        values = [str(a) if isinstance(a, Token) else a for a in args]
        if kind == 'model':
            spec.model_id = values[0]
        elif kind == 'param':
            name, ghost, relation = values[0], 0, None
            for value in values[1:]:
                if isinstance(value, tuple):
                    relation = value
                else:
                    ghost = int(value)
            if relation is not None and not _is_imaginary_relation(name, relation):
                raise ModelParseError(f"unsupported relation for '{name}' (only x^2+1=0)", line, column)
            spec.params.append(ParamDecl(name, ghost, relation))
        elif kind == 'var':
            formdeg = int(values[2]) if len(values) > 2 else 0
            spec.variables.append(VarDecl(values[0], int(values[1]), formdeg, line))
        elif kind == 'pair':
            spec.pairs.append((values[0], values[1]))
            spec.pair_lines.append(line)
        elif kind == 'symplectic':
            if values[0] != 'k':
                raise ModelParseError(f"expected 'symplectic k <int>', got '{values[0]}'", line, column)
            spec.k = int(values[1])
        elif kind == 'action':
            spec.action = values[0]
        elif kind == 'equivariant':
            if values[0] != 'u':
                raise ModelParseError(f"the equivariant parameter is u, got '{values[0]}'", line, column)
            if values[1] not in (ROTATION, AXIAL):
                raise ModelParseError(f"unknown vector kind '{values[1]}'", line, column)
            spec.equivariant = values[1]
        elif kind == 'check':
            if values[0] not in CHECKS:
                raise ModelParseError(f"unknown check '{values[0]}'", line, column)
            spec.checks.append(values[0])
        elif kind == 'polarize':
            spec.polarization.append((values[0], values[1]))
        elif kind == 'boundary_action':
            spec.boundary_action = values[0]

    table = spec.build_table()
    spec.build_structure(table)
    for tree_ in (spec.action, spec.boundary_action):
        if tree_ is not None:
            evaluate_expr(tree_, table)
    logger.info(
        f"Model parsed | model={spec.model_id} | variables={len(spec.variables)} "
        f"| pairs={len(spec.pairs)} | k={spec.k}"
    )
    return spec


def _describe(exc: UnexpectedInput) -> str:
    token = getattr(exc, 'token', None)
    if token is not None:
        return f"'{token}'"
    char = getattr(exc, 'char', None)
    return f"'{char}'" if char else 'end of input'


def _is_imaginary_relation(name: str, relation: Expr) -> bool:
    value = _scalar(relation, {name: sympy.I})
    return value is not None and sympy.simplify(value) == 0


def _scalar(tree: Expr, symbols: Dict[str, sympy.Expr]) -> Optional[sympy.Expr]:
    """Evaluate a parameter-only expression, or None if it mentions anything else."""
    op = tree[0]
    if op == 'num':
        return sympy.Rational(tree[1])
    if op == 'sym':
        return symbols.get(tree[1])
    if op == 'neg':
        inner = _scalar(tree[1], symbols)
        return None if inner is None else -inner
    if op == 'pow':
        inner = _scalar(tree[1], symbols)
        return None if inner is None else inner ** tree[2]
    left, right = _scalar(tree[1], symbols), _scalar(tree[2], symbols)
    if left is None or right is None:
        return None
    return {'add': left + right, 'sub': left - right, 'mul': left * right}[op]


def evaluate_expr(tree: Expr, table: VariableTable) -> GradedPoly:
    """
    Expand an expression tree into a normalised GradedPoly.

    Raises:
        ModelParseError: On an undeclared name
    """
    op = tree[0]
    if op == 'num':
        return GradedPoly.constant(table, sympy.Rational(tree[1]))
    if op == 'sym':
        name = tree[1]
        if name in table:
            return table.poly(name)
        if name in table.parameters:
            return GradedPoly.constant(table, table.parameters[name].symbol)
        raise ModelParseError(f"undeclared name '{name}'")
    if op == 'neg':
        return -evaluate_expr(tree[1], table)
    if op == 'pow':
        return evaluate_expr(tree[1], table) ** tree[2]
    left, right = evaluate_expr(tree[1], table), evaluate_expr(tree[2], table)
    if op == 'add':
        return left + right
    if op == 'sub':
        return left - right
    return left * right


# ----------------------------------------------------------------------
# Rendering
# ----------------------------------------------------------------------

_SUM = ('add', 'sub')


def render_expr(tree: Expr) -> str:
    """Canonical text for an expression tree; parsing it returns the same tree."""
    op = tree[0]
    if op in ('num', 'sym'):
        return tree[1]
    if op in _SUM:
        right = render_expr(tree[2])
        if tree[2][0] in _SUM:
            right = f"({right})"
        return f"{render_expr(tree[1])} {'+' if op == 'add' else '-'} {right}"
    if op == 'mul':
        left, right = render_expr(tree[1]), render_expr(tree[2])
        if tree[1][0] in _SUM:
            left = f"({left})"
        if tree[2][0] in _SUM + ('mul',):
            right = f"({right})"
        return f"{left}*{right}"
    if op == 'neg':
        inner = render_expr(tree[1])
        return f"-({inner})" if tree[1][0] in _SUM + ('mul',) else f"-{inner}"
    base = render_expr(tree[1])
    if tree[1][0] not in ('num', 'sym'):
        base = f"({base})"
    return f"{base}^{tree[2]}"


def render(spec: ModelSpecFile) -> str:
    """Canonical model-file text for a parsed spec."""
    lines = [f"model {spec.model_id}"]
    for param in spec.params:
        line = f"param {param.name}"
        if param.ghost:
            line += f" ghost {param.ghost}"
        if param.relation is not None:
            line += f" relation {render_expr(param.relation)}=0"
        lines.append(line)
    for var in spec.variables:
        line = f"var {var.name} ghost {var.ghost}"
        if var.formdeg:
            line += f" formdeg {var.formdeg}"
        lines.append(line)
    lines.extend(f"pair {base} {momentum}" for base, momentum in spec.pairs)
    lines.append(f"symplectic k {spec.k}")
    if spec.action is not None:
        lines.append(f"action {render_expr(spec.action)}")
    if spec.equivariant is not None:
        lines.append(f"equivariant u vector {spec.equivariant}")
    lines.extend(f"polarize {q} {p}" for q, p in spec.polarization)
    if spec.boundary_action is not None:
        lines.append(f"boundary_action {render_expr(spec.boundary_action)}")
    lines.extend(f"check {c}" for c in spec.checks)
    return '\n'.join(lines) + '\n'


# ----------------------------------------------------------------------
# Building
# ----------------------------------------------------------------------

@dataclass
class BuiltModel:
    """The evaluated objects of a model file."""
    spec: ModelSpecFile
    bv: BvModel
    split: Optional[SplitModel] = None


def build(spec: ModelSpecFile) -> BuiltModel:
    """
    Evaluate a parsed file into a BvModel and, when it declares a
    polarisation, the SplitModel F = Y × B.

    Raises:
        ModelParseError: On an undeclared name in an expression
        StructureError: If a fibre coordinate is also a Darboux variable
    """
    table = spec.build_table()
    D = spec.build_structure(table)
    S = spec.evaluate(spec.action, table)
    bv = BvModel(spec.model_id, D, S)
    split = None
    if spec.polarization:
        split = split_from_data(
            spec.model_id, D, S,
            [q for q, _ in spec.polarization], [p for _, p in spec.polarization],
            spec.evaluate(spec.boundary_action, table),
        )
    return BuiltModel(spec, bv, split)


def load(source: str) -> BuiltModel:
    return build(parse(source))
