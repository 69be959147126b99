"""
Abelian BF theory on a mode complex, its equivariant extension, and the
tangency test for boundary compatibility.

𝐀 = c + A + B⁺ lives on the primal complex X (ghosts 1, 0, −1 in form
degrees 0, 1, 2); 𝐁 = B + A⁺ + c⁺ lives on the dual complex (ghosts 0, −1,
−2). Each primal cell carries one 𝐀-variable and is Darboux-paired with the
𝐁-variable on its dual cell, so ω = Σ δx δθ with k = 0.

The action is S = Σ θ·(d𝐀) and Q acts on 𝐀 by d. On 𝐁, Q is read off
from the integrated-by-parts action Σ (d𝐁)·𝐀, which differs from S by
the discrete Stokes term. On a closed complex the two actions agree and Q
is Hamiltonian.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import sympy

from .algebra import U, GradedPoly, GradedVar, Key, VariableTable, mul
from .discrete import (
    ROTATION, ModeComplex, VectorFieldOp, build_closed_mode_complex,
    build_cylinder_mode_complex, coboundaries, contraction, dual_of,
)
from .exceptions import StructureError
from .master_eq import BvModel
from .report import CheckEntry, Status, entry_from_residual
from .symplectic import (
    DarbouxStructure, Derivation, apply, bv_bracket, commutator, contract, half,
    hamiltonian_vf, variational_delta,
)

logger = logging.getLogger(__name__)

# (𝐀 name, 𝐁 partner name, 𝐀 form degree) per cell kind of the primal complex
_FIELD_NAMES = {
    'node': ('c', 'cplus', 0),
    'tedge': ('At', 'Aplus_p', 1),
    'phi': ('Ap', 'Aplus_t', 1),
    'cell': ('Bplus', 'B', 2),
}


@dataclass(eq=False)
class BfModel:
    """
    Abelian BF model on one mode complex.

    Attributes:
        model_id: Identifier used in reports
        complex: Primal complex carrying 𝐀
        dual: Dual complex carrying 𝐁
        vector: The source vector field, or None for the plain theory
        table: Variable table (𝐀-variables first, then their 𝐁 partners)
        D: Darboux structure pairing 𝐀 with 𝐁 (k = 0)
        x_keys, theta_keys: Parallel lists of paired keys, in cell order
        d_full, M_full, iota_full: Superfield matrices acting on the 𝐀 vector
        S: Transgressed action Σ θ·(d𝐀)
        S_prime: The integrated-by-parts action; S − S_prime is the Stokes term
        S_iota: Σ θ·(ι𝐀), zero without a vector field
        S_L: Σ ±θ·(L𝐀) with L = dι + ιd, signed so that T = −u·S_L
        bv: The BV model carrying Ŝ = S + u·S_ι and the geometric Q̂
    """
    model_id: str
    complex: ModeComplex
    dual: ModeComplex
    vector: Optional[VectorFieldOp]
    table: VariableTable
    D: DarbouxStructure
    x_keys: List[Key]
    theta_keys: List[Key]
    d_full: sympy.Matrix
    M_full: sympy.Matrix
    iota_full: sympy.Matrix
    S: GradedPoly
    S_prime: GradedPoly
    S_iota: GradedPoly
    S_L: GradedPoly
    bv: BvModel
    checks: Dict[str, CheckEntry] = field(default_factory=dict)

    @property
    def equivariant(self) -> bool:
        return self.vector is not None

    @property
    def S_hat(self) -> GradedPoly:
        return self.bv.S

    @property
    def Q(self) -> Derivation:
        return self.bv.Q

    @property
    def lie_full(self) -> sympy.Matrix:
        return self.d_full * self.iota_full + self.iota_full * self.d_full

    def names(self, keys) -> List[str]:
        return [self.table.var(k).name for k in keys]

    def boundary_fields(self, side: int) -> Tuple[List[Key], List[Key]]:
        """
        (𝐀-keys, 𝐁-keys) restricted to boundary circle 1 (t=0) or 2 (t=1).

        𝐀 restricts through the primal node and φ-line on the circle; 𝐁
        through the extrapolated midpoint and dual φ-line next to it, i.e. the
        partners of the first or last cell and t-edge.
        """
        K = self.complex.segments
        flat = [c for cells in self.complex.cells for c in cells]
        a_keys, b_keys = [], []
        for cell, x, theta in zip(flat, self.x_keys, self.theta_keys):
            if cell.kind in ('node', 'phi') and cell.index == (0 if side == 1 else K):
                a_keys.append(x)
            elif cell.kind in ('cell', 'tedge') and cell.index == (0 if side == 1 else K - 1):
                b_keys.append(theta)
        return a_keys, b_keys

    def boundary_collar(self) -> Set[Key]:
        """
        Variables that restrict to a boundary circle, with their Darboux partners.

        These are the 𝐀-components on the nodes and φ-lines of both circles and
        the 𝐁-components paired with the t-edges and cells of the first and
        last segment.
        """
        partner = dict(zip(self.x_keys, self.theta_keys))
        partner.update(zip(self.theta_keys, self.x_keys))
        keys = set()
        for side in (1, 2):
            a_keys, b_keys = self.boundary_fields(side)
            for key in a_keys + b_keys:
                keys.update((key, partner[key]))
        return keys


def _superfield(X: ModeComplex, blocks: Dict[Tuple[int, int], sympy.Matrix]) -> sympy.Matrix:
    """Assemble degree blocks (row degree, column degree) into one square matrix."""
    offsets = [0]
    for dim in X.dims:
        offsets.append(offsets[-1] + dim)
    full = sympy.zeros(offsets[-1], offsets[-1])
    for (row, col), block in blocks.items():
        full[offsets[row]:offsets[row + 1], offsets[col]:offsets[col + 1]] = block
    return full


def _bilinear(table: VariableTable, theta: List[GradedVar], x: List[GradedVar],
              A: sympy.Matrix) -> GradedPoly:
    """Σ_ij A_ij θ_i x_j."""
    result = GradedPoly.zero(table)
    for i in range(A.rows):
        for j in range(A.cols):
            coef = A[i, j]
            if coef == 0:
                continue
            result = result + mul(GradedPoly.generator(table, theta[i]),
                                  GradedPoly.generator(table, x[j])).scale(coef)
    return result


def _declare_fields(X: ModeComplex, table: VariableTable) -> Tuple[List[GradedVar], List[GradedVar]]:
    xs, thetas = [], []
    flat = [c for cells in X.cells for c in cells]
    for cell in flat:
        base, _, degree = _FIELD_NAMES[cell.kind]
        xs.append(table.declare(f"{base}{cell.index}", 1 - degree))
    for cell in flat:
        _, partner, degree = _FIELD_NAMES[cell.kind]
        thetas.append(table.declare(f"{partner}{cell.index}", degree - 2))
    return xs, thetas


def _pairing_signs(X: ModeComplex) -> sympy.Matrix:
    """(−1)^{p+1} on the row of every 𝐀-component of form degree p."""
    flat = [c for cells in X.cells for c in cells]
    return sympy.diag(*[(-1) ** (_FIELD_NAMES[c.kind][2] + 1) for c in flat])


def _model_id(X: ModeComplex, vector: Optional[str]) -> str:
    base = f"bf_{X.kind}_K{X.segments}_n{X.mode}"
    return f"{base}_{vector}" if vector else base


def build_bf_model(X: ModeComplex, vector: Optional[str] = None) -> BfModel:
    """
    Assemble the (optionally equivariant) BF model on X.

    Args:
        X: A primal cylinder or closed mode complex
        vector: None, 'rotation' or 'axial'

    Returns:
        The model, with Q̂ acting by d + u·ι
    """
    Y = dual_of(X)
    table = VariableTable(_model_id(X, vector))
    xs, thetas = _declare_fields(X, table)
    D = DarbouxStructure(table, list(zip(xs, thetas)), 0)

    d0, d1 = X.d
    d_full = _superfield(X, {(1, 0): d0, (2, 1): d1})
    m0, m1 = coboundaries(-Y.difference.T, X.mode)
    M_full = _superfield(X, {(1, 0): m0, (2, 1): m1})

    op = contraction(vector, X) if vector else None
    if op is not None:
        iota_full = _superfield(X, {(0, 1): op.iota[1], (1, 2): op.iota[2]})
    else:
        iota_full = sympy.zeros(*d_full.shape)

    S = _bilinear(table, thetas, xs, d_full)
    S_prime = _bilinear(table, thetas, xs, M_full)
    S_iota = _bilinear(table, thetas, xs, iota_full)
    S_L = _bilinear(table, thetas, xs, _pairing_signs(X) * (d_full * iota_full + iota_full * d_full))

    S_hat = S + S_iota.scale(U)
    S_hat_prime = S_prime + S_iota.scale(U)
    x_keys = [table.key(v) for v in xs]
    theta_keys = [table.key(v) for v in thetas]
    on_A = hamiltonian_vf(S_hat, D).components
    on_B = hamiltonian_vf(S_hat_prime, D).components
    comps = {k: on_A[k] for k in x_keys if k in on_A}
    comps.update({k: on_B[k] for k in theta_keys if k in on_B})
    Q = Derivation(table, comps, 1)

    bv = BvModel(table.name, D, S_hat, Q)
    bf = BfModel(
        model_id=table.name, complex=X, dual=Y, vector=op, table=table, D=D,
        x_keys=x_keys, theta_keys=theta_keys, d_full=d_full, M_full=M_full,
        iota_full=iota_full, S=S, S_prime=S_prime, S_iota=S_iota, S_L=S_L, bv=bv,
    )
    logger.info(
        f"BF model assembled | model={bf.model_id} | variables={len(table)} "
        f"| hamiltonian={bv.is_hamiltonian()}"
    )
    return bf


def transgress_action(X: ModeComplex) -> GradedPoly:
    """S = Σ ⟨𝐁, d𝐀⟩ over every form-degree-compatible pair of components."""
    return build_bf_model(X).S


def equivariant_extend(m: BfModel, v: VectorFieldOp) -> BfModel:
    """The model with Ŝ = S + u·S_ι and Q̂ = d + u·ι for the field v."""
    if v.complex is not m.complex:
        raise StructureError("Vector field is defined on a different complex")
    return build_bf_model(m.complex, v.kind)


def bf_cylinder(K: int, n: int, vector: Optional[str] = ROTATION) -> BfModel:
    return build_bf_model(build_cylinder_mode_complex(K, n), vector)


def bf_closed(K: int, n: int, vector: Optional[str] = ROTATION) -> BfModel:
    return build_bf_model(build_closed_mode_complex(K, n), vector)


def tangency_obstruction(m: BfModel, v: Optional[VectorFieldOp] = None) -> GradedPoly:
    """
    Residual of ½ι_{[Q̂,Q̂]}ω = u·δS_L as a variational 1-form.

    Zero for fields tangent to the boundary circles; for a transversal field
    it is the boundary term left over by the discrete Stokes theorem.
    """
    if v is not None and (m.vector is None or v.kind != m.vector.kind):
        m = equivariant_extend(m, v)
    if not m.equivariant:
        return GradedPoly.zero(m.table)
    QQ = commutator(m.Q, m.Q)
    return half(contract(QQ, m.D.omega)) - variational_delta(m.S_L).scale(U)


def transversal_prediction(m: BfModel) -> Set[Key]:
    """
    Variables expected in the tangency residual.

    The residual is carried by (M − d)ι + ι(M − d), where M − d is the
    Stokes correction of the coboundary.
    """
    if not m.equivariant:
        return set()
    delta = m.M_full - m.d_full
    defect = delta * m.iota_full + m.iota_full * delta
    keys = set()
    for i in range(defect.rows):
        for j in range(defect.cols):
            if sympy.simplify(defect[i, j]) != 0:
                keys.update((m.theta_keys[i], m.x_keys[j]))
    return keys


def check_tangency(m: BfModel) -> List[CheckEntry]:
    """Tangency entry plus, for a nonzero residual, a support comparison."""
    residual = tangency_obstruction(m)
    support = residual.field_support()
    details = {'support': ','.join(sorted(m.names(support)))}
    entries = [entry_from_residual('tangency', m.model_id, residual,
                                   '½ι_[Q̂,Q̂]ω = u δS_L', details)]
    if not residual.is_zero():
        predicted = transversal_prediction(m)
        outside = support - m.boundary_collar()
        mismatch = support ^ predicted
        entries.append(CheckEntry(
            'transversal_support', m.model_id,
            Status.PASS if not outside and not mismatch else Status.FAIL,
            anchor='residual supported on the transversal boundary term',
            details={
                'outside_boundary_collar': ','.join(sorted(m.names(outside))),
                'prediction_mismatch': ','.join(sorted(m.names(mismatch))),
            },
        ))
    return entries


def equivariant_residuals(m: BfModel) -> Dict[str, GradedPoly]:
    """
    Identities of the equivariant extension.

    T = −u·S_L, (S_ι, S_L) = 0 and (Ŝ,Ŝ) = −2u·S_L. The bracket identity
    only uses d² = 0 and ι² = 0, so it holds on cylinders as well; T is the
    weak T there and fails for transversal fields.
    """
    return {
        'T_equals_minus_u_S_L': m.bv.T + m.S_L.scale(U),
        'bracket_S_iota_S_L': bv_bracket(m.S_iota, m.S_L, m.D),
        'bracket_S_hat': bv_bracket(m.S_hat, m.S_hat, m.D) + m.S_L.scale(2 * U),
    }


def lie_S_L_boundary(m: BfModel) -> Tuple[GradedPoly, Set[Key]]:
    """Q̂(S_L) and the variables it involves outside the boundary collar."""
    value = apply(m.Q, m.S_L)
    return value, value.field_support() - m.boundary_collar()


def proportionality(a: GradedPoly, b: GradedPoly) -> Optional[sympy.Expr]:
    """The scalar r with a = r·b, or None if there is none (b = 0 included)."""
    if b.is_zero():
        return None
    mono, coef = next(iter(sorted(b.terms.items())))
    ratio = sympy.simplify(a.terms.get(mono, 0) / coef)
    return ratio if (a - b.scale(ratio)).is_zero() else None
