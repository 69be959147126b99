"""
Boundary reduction of a bulk model whose vector field is not Hamiltonian.

Pipeline:
    ᾱ = ι_Qω − δS              boundary one-form
    ω̄ = δᾱ                     (equals −L_Qω and is Q-invariant)
    S̄, with δS̄ = ι_Q ω̄        Euler construction
    T̄ = −L_Q T
    ker ω̄ → projection π onto a section of the quotient, giving (ω∂, S∂, Q∂, T∂, α∂)

Reduction is implemented for constant-coefficient ω̄. Its kernel is spanned
by the coordinate directions outside the support of ω̄ together with the
null vectors of the coefficient matrix on the support. The boundary
coordinates are the pivot coordinates of that matrix; setting every other
coordinate to zero is the section σ, and π_b = z_b − Σ_k Y_k^b z_{free k}
is the linear projection along the kernel. Boundary data live on the
section; π* carries them back to the bulk.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy

from .algebra import GradedPoly, FieldForm, Key, mul, substitute
from .exceptions import UnsupportedModelError
from .master_eq import BvModel
from .report import CheckEntry, entry_from_residual
from .symplectic import (
    ConstantSymplecticForm, Derivation, apply, commutator, constant_form_matrix,
    contract, euler_primitive, half, lie, variational_delta,
)

logger = logging.getLogger(__name__)


@dataclass
class BulkBoundaryModel:
    """
    Bulk model together with its reduced boundary data.

    Attributes:
        interior: Coordinates set to zero by the section (free and off-support)
        boundary: Coordinates of the section, one per rank of ω̄
        kernel: Constant vector fields spanning ker ω̄
        projection: π_b for every boundary coordinate b, linear in bulk coordinates
        S_boundary, T_boundary, alpha_boundary, omega_boundary: Reduced data on the section
        Q_boundary: Pushforward of Q, with components on the boundary coordinates
    """
    bulk: BvModel
    alpha_bar: FieldForm
    omega_bar: FieldForm
    S_bar: GradedPoly
    T_bar: GradedPoly
    interior: List[Key]
    boundary: List[Key]
    kernel: List[Derivation]
    projection: Dict[Key, GradedPoly]
    boundary_form: Optional[ConstantSymplecticForm] = None
    Q_boundary: Optional[Derivation] = None
    S_boundary: Optional[GradedPoly] = None
    T_boundary: Optional[GradedPoly] = None
    alpha_boundary: Optional[FieldForm] = None
    omega_boundary: Optional[FieldForm] = None
    checks: Dict[str, List[GradedPoly]] = field(default_factory=dict)

    @property
    def table(self):
        return self.bulk.table

    @property
    def model_id(self) -> str:
        return self.bulk.model_id

    @property
    def is_coordinate(self) -> bool:
        """True when π only forgets coordinates."""
        return all(len(p.terms) == 1 for p in self.projection.values())

    def boundary_names(self) -> List[str]:
        return [self.table.var(k).name for k in self.boundary]

    def restrict(self, f: GradedPoly) -> GradedPoly:
        """σ*: set every interior variable and its δ-symbol to zero."""
        table = self.table
        zero = GradedPoly.zero(table)
        present = f.keys()
        bindings = {}
        for key in self.interior:
            for k in (key, (1, key[1])):
                if k in present:
                    bindings[table.var(k)] = zero
        return substitute(f, bindings) if bindings else f

    def pullback(self, f: GradedPoly) -> GradedPoly:
        """π*: replace z_b by π_b and δz_b by δπ_b."""
        if self.is_coordinate:
            return f
        table = self.table
        present = f.keys()
        bindings = {}
        for key, image in self.projection.items():
            if key in present:
                bindings[table.var(key)] = image
            if (1, key[1]) in present:
                bindings[table.var((1, key[1]))] = variational_delta(image)
        return substitute(f, bindings) if bindings else f


def boundary_one_form(m: BvModel) -> FieldForm:
    """ᾱ = ι_Qω − δS."""
    return m.alpha_bar()


def boundary_one_form_checks(m: BvModel) -> List[GradedPoly]:
    """Residuals of ω̄ = −L_Qω and L_Qω̄ = 0."""
    omega_bar = variational_delta(boundary_one_form(m))
    return [omega_bar + lie(m.Q, m.omega), lie(m.Q, omega_bar)]


def boundary_action(m: BvModel) -> GradedPoly:
    """
    S̄ with δS̄ = ι_Q ω̄, via the Euler construction.

    Raises:
        DegenerateDegreeError: For k = −1
    """
    m.D.require_euler()
    omega_bar = variational_delta(boundary_one_form(m))
    return euler_primitive(contract(m.Q, omega_bar), m.D)


def boundary_action_residual(m: BvModel, S_bar: GradedPoly) -> GradedPoly:
    omega_bar = variational_delta(boundary_one_form(m))
    return variational_delta(S_bar) - contract(m.Q, omega_bar)


def boundary_T(m: BvModel) -> GradedPoly:
    """T̄ = −L_Q T."""
    return apply(m.Q, m.T).scale(-1)


def boundary_T_checks(m: BvModel, S_bar: GradedPoly, T_bar: GradedPoly) -> List[GradedPoly]:
    """Residuals of ½ L_Q S̄ = T̄ and ½ ι_{[Q,Q]} ω̄ = −δT̄."""
    omega_bar = variational_delta(boundary_one_form(m))
    QQ = commutator(m.Q, m.Q)
    return [
        half(apply(m.Q, S_bar)) - T_bar,
        half(contract(QQ, omega_bar)) + variational_delta(T_bar),
    ]


def _support(form: FieldForm) -> List[Key]:
    keys = set()
    for mono in form.terms:
        for key, _ in mono:
            if key[0] == 0:
                raise UnsupportedModelError("ω̄ has non-constant coefficients")
            keys.add((0, key[1]))
    return sorted(keys)


def kernel_basis(omega_bar: FieldForm, support: List[Key]) -> Tuple[List[Key], List[Derivation]]:
    """
    Null vectors of ω̄ on its support, one per free column.

    The coefficient matrix couples each ghost number with a single partner
    ghost number, so the null space is computed one ghost class at a time
    and every vector is homogeneous. Vector k has a 1 at its free
    coordinate and 0 at every other free coordinate.

    Returns:
        (free coordinates, kernel vector fields) in matching order
    """
    table = omega_bar.table
    transposed = constant_form_matrix(omega_bar, support).T
    classes: Dict[int, List[int]] = {}
    for j, key in enumerate(support):
        classes.setdefault(table.ghost(key), []).append(j)
    free_keys: List[Key] = []
    vectors: List[Derivation] = []
    for ghost, columns in sorted(classes.items()):
        reduced, pivots = transposed.extract(list(range(transposed.rows)), columns).rref()
        for f in range(len(columns)):
            if f in pivots:
                continue
            comps = {support[columns[f]]: GradedPoly.constant(table, 1)}
            for row, p in enumerate(pivots):
                value = -reduced[row, f]
                if value != 0:
                    comps[support[columns[p]]] = GradedPoly.constant(table, value)
            free_keys.append(support[columns[f]])
            vectors.append(Derivation(table, comps, -ghost))
    return free_keys, vectors


def kernel_and_project(m: BvModel) -> BulkBoundaryModel:
    """
    Compute ker ω̄, the projection π and the reduced boundary data.

    Raises:
        UnsupportedModelError: If ω̄ has non-constant coefficients
    """
    table = m.table
    alpha_bar = boundary_one_form(m)
    omega_bar = variational_delta(alpha_bar)
    support = _support(omega_bar)
    free, null_vectors = kernel_basis(omega_bar, support) if support else ([], [])
    free_set = set(free)
    boundary = [k for k in support if k not in free_set]
    boundary_set = set(boundary)
    interior = [k for k in table.field_keys() if k not in boundary_set]

    kernel = [
        Derivation(table, {k: GradedPoly.constant(table, 1)}, -table.ghost(k))
        for k in interior if k not in free_set
    ] + null_vectors
    projection = {}
    for b in boundary:
        image = GradedPoly.generator(table, table.var(b))
        for key, Y in zip(free, null_vectors):
            coef = Y.components.get(b)
            if coef is not None:
                image = image - GradedPoly.generator(table, table.var(key)).scale(coef.terms[()])
        projection[b] = image

    S_bar = boundary_action(m)
    T_bar = boundary_T(m)
    bm = BulkBoundaryModel(
        bulk=m, alpha_bar=alpha_bar, omega_bar=omega_bar, S_bar=S_bar, T_bar=T_bar,
        interior=interior, boundary=boundary, kernel=kernel, projection=projection,
    )
    bm.S_boundary = bm.restrict(S_bar)
    bm.T_boundary = bm.restrict(T_bar)
    bm.alpha_boundary = bm.restrict(alpha_bar)
    bm.omega_boundary = bm.restrict(omega_bar)
    bm.boundary_form = ConstantSymplecticForm(bm.omega_boundary, boundary) if boundary else None
    lifted = {b: apply(m.Q, image) for b, image in projection.items()}
    bm.Q_boundary = Derivation(
        table, {b: bm.restrict(v) for b, v in lifted.items() if not bm.restrict(v).is_zero()}, m.Q.ghost
    )

    projectability: List[GradedPoly] = []
    basic: List[GradedPoly] = []
    for Y in kernel:
        projectability.append(contract(commutator(m.Q, Y), omega_bar))
        basic.extend([apply(Y, S_bar), apply(Y, T_bar), contract(Y, alpha_bar), lie(Y, alpha_bar)])
    for b, value in lifted.items():
        projectability.append(value - bm.pullback(bm.Q_boundary.component(table.var(b).name)))
    bm.checks['projectable'] = projectability
    bm.checks['basic'] = basic
    logger.info(
        f"Boundary reduction | model={m.model_id} | boundary_vars={len(boundary)} "
        f"| kernel_rank={len(kernel)} | coordinate={bm.is_coordinate}"
    )
    return bm


def boundary_bracket(f: GradedPoly, g: GradedPoly, bm: BulkBoundaryModel) -> GradedPoly:
    """The even boundary bracket {f, g} of the reduced structure."""
    if bm.boundary_form is None:
        return GradedPoly.zero(bm.table)
    return bm.boundary_form.bracket(f, g)


def _pushforward_residual(bm: BulkBoundaryModel) -> GradedPoly:
    """Σ_b (Q(π_b) − π*Q∂^b) δz_b, zero exactly when Q is π-related to Q∂."""
    m = bm.bulk
    table = bm.table
    result = GradedPoly.zero(table)
    for b, image in bm.projection.items():
        gap = apply(m.Q, image) - bm.pullback(bm.Q_boundary.component(table.var(b).name))
        result = result + mul(gap, GradedPoly.monomial(table, (((1, b[1]), 1),)))
    return result


def summary_residuals(bm: BulkBoundaryModel) -> Dict[str, GradedPoly]:
    """Residuals of the eleven reduced-structure equations, keyed by a short label."""
    m = bm.bulk
    Q, omega, T = m.Q, m.omega, m.T
    S_d, T_d, alpha_d, omega_d = bm.S_boundary, bm.T_boundary, bm.alpha_boundary, bm.omega_boundary
    Q_d = bm.Q_boundary
    zero = GradedPoly.zero(bm.table)
    QQ_d = commutator(Q_d, Q_d)
    return {
        'iota_Qd_omega_d': contract(Q_d, omega_d) - variational_delta(S_d),
        'half_L_Qd_S_d': half(apply(Q_d, S_d)) - T_d,
        'half_bracket_S_d': (half(boundary_bracket(S_d, S_d, bm)) - T_d) if bm.boundary_form else zero,
        'half_iota_QQd_omega_d': half(contract(QQ_d, omega_d)) + variational_delta(T_d),
        'pushforward_Q': _pushforward_residual(bm),
        'half_iota_Q_iota_Q_omega': half(contract(Q, contract(Q, omega))) - T - bm.pullback(S_d),
        'L_Q_T': apply(Q, T) + bm.pullback(T_d),
        'omega_d_exact': omega_d - variational_delta(alpha_d),
        'alpha_bar_basic': bm.alpha_bar - bm.pullback(alpha_d),
        'mcme_one_form': contract(Q, omega) - variational_delta(m.S) - bm.pullback(alpha_d),
        'mcme': half(lie(Q, m.S)) - T - bm.pullback(S_d - half(contract(Q_d, alpha_d))),
    }


def verify_summary(bm: BulkBoundaryModel) -> CheckEntry:
    """Verify all reduced-structure equations plus projectability and basicness."""
    residuals = summary_residuals(bm)
    failing = [label for label, r in residuals.items() if not r.is_zero()]
    all_residuals = list(residuals.values()) + bm.checks.get('projectable', []) + bm.checks.get('basic', [])
    ghosts = {
        'gh(alpha_bar)': str(bm.alpha_bar.ghost_number()),
        'gh(S_d)': str(bm.S_boundary.ghost_number()),
        'gh(T_d)': str(bm.T_boundary.ghost_number()),
        'gh(omega_d)': str(bm.omega_boundary.ghost_number()),
        'boundary': ','.join(bm.boundary_names()),
    }
    if failing:
        ghosts['failing'] = ','.join(failing)
    return entry_from_residual('summary', bm.model_id, all_residuals, 'reduced BFV equations', ghosts)


def modified_cme_residuals(bm: BulkBoundaryModel) -> List[GradedPoly]:
    """L_QS = π*(2S∂ − ι_{Q∂}α∂) and ½ι_Qι_Qω = π*S∂ (valid when T = 0)."""
    m = bm.bulk
    return [
        lie(m.Q, m.S) - bm.pullback(bm.S_boundary.scale(2) - contract(bm.Q_boundary, bm.alpha_boundary)),
        half(contract(m.Q, contract(m.Q, m.omega))) - bm.pullback(bm.S_boundary),
    ]
