"""
Classical, quantum and weak master equations.

All checks return CheckEntry rows whose residual is the normalised
polynomial (or form) that should vanish.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

from .algebra import HBAR, I, U, GradedPoly, FieldForm
from .exceptions import DegenerateDegreeError, StructureError
from .report import CheckEntry, entry_from_residual, skipped
from .symplectic import (
    DarbouxStructure, Derivation, apply, bv_bracket, bv_laplacian, commutator,
    contract, euler_primitive, half, hamiltonian_vf, lie, lie_commutator,
    variational_delta,
)

logger = logging.getLogger(__name__)


@dataclass
class BvModel:
    """
    A (possibly weak) BV model: Darboux data, action, and vector field.

    When Q is omitted it is the Hamiltonian vector field of S. Boundary
    models store a geometric Q independently of S.
    """
    model_id: str
    D: DarbouxStructure
    S: GradedPoly
    Q: Optional[Derivation] = None
    _T: Optional[GradedPoly] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.D.check_table(self.S)
        if self.Q is None:
            self.Q = hamiltonian_vf(self.S, self.D)

    @property
    def table(self):
        return self.D.table

    @property
    def omega(self) -> FieldForm:
        return self.D.omega

    @property
    def k(self) -> int:
        return self.D.k

    def alpha_bar(self) -> FieldForm:
        """ᾱ = ι_Q ω − δS."""
        return contract(self.Q, self.omega) - variational_delta(self.S)

    def is_hamiltonian(self) -> bool:
        return self.alpha_bar().is_zero()

    @property
    def T(self) -> GradedPoly:
        """T = ½(S,S) − iħΔS for Hamiltonian k = 0 models, otherwise the weak T."""
        if self._T is None:
            if self.k == 0 and self.is_hamiltonian():
                self._T = compute_T(self)
            else:
                self._T = weak_T(self)
        return self._T


def compute_T(m: BvModel) -> GradedPoly:
    """
    T = ½(S,S) − iħΔS.

    Raises:
        StructureError: If the model is not an odd (k = 0) structure
    """
    if m.k != 0:
        raise StructureError(f"T is defined for k = 0 models, got k = {m.k}")
    return half(bv_bracket(m.S, m.S, m.D)) - bv_laplacian(m.S, m.D).scale(I * HBAR)


def weak_T(m: BvModel) -> GradedPoly:
    """
    The function T with ½ ι_{[Q,Q]} ω = −δT, built with the Euler primitive.

    Agrees with ½(S,S) whenever ι_Qω = δS.
    """
    return half(euler_primitive(contract(commutator(m.Q, m.Q), m.omega), m.D)).scale(-1)


def check_cme(m: BvModel) -> CheckEntry:
    if m.k != 0:
        return skipped('cme', m.model_id, f"CME needs k = 0 (model has k = {m.k})")
    residual = bv_bracket(m.S, m.S, m.D)
    return entry_from_residual('cme', m.model_id, residual, '(S,S) = 0')


def check_qme(m: BvModel) -> CheckEntry:
    if m.k != 0:
        return skipped('qme', m.model_id, f"QME needs k = 0 (model has k = {m.k})")
    return entry_from_residual(
        'qme', m.model_id, compute_T(m), '½(S,S) − iħΔS = 0',
        details={'laplacian_S': bv_laplacian(m.S, m.D).render()},
    )


def check_weak_bv(m: BvModel, strict: bool = False) -> CheckEntry:
    """
    L_{[Q,Q]}ω = 0, plus δH = (k+1) ι_{[Q,Q]}ω for H = ι_E ι_{[Q,Q]}ω.

    The parameter u enters the Euler weight with its ghost number 2, so H
    is (k+1) times the Euler primitive of ι_{[Q,Q]}ω.

    Args:
        m: The model
        strict: Raise instead of annotating when k = −1

    Raises:
        DegenerateDegreeError: When strict and k = −1
    """
    QQ = commutator(m.Q, m.Q)
    omega = m.omega
    residuals = [lie(QQ, omega)]
    details = {}
    iota_QQ = contract(QQ, omega)
    try:
        H = euler_primitive(iota_QQ, m.D).scale(m.k + 1)
        residuals.append(variational_delta(H) - iota_QQ.scale(m.k + 1))
        details['H'] = H.render()
    except DegenerateDegreeError as exc:
        if strict:
            raise
        details['hamiltonian'] = f"rejected: {exc}"
    return entry_from_residual('weak_bv', m.model_id, residuals, 'L_[Q,Q] ω = 0', details)


def check_action_flow(m: BvModel) -> CheckEntry:
    """For Hamiltonian Q: L_Q S = ι_Q δS and QS = (S,S)."""
    if not m.is_hamiltonian():
        return skipped('action_flow', m.model_id, 'ι_Qω ≠ δS for this model')
    QS = apply(m.Q, m.S)
    residuals = [
        lie(m.Q, m.S) - contract(m.Q, variational_delta(m.S)),
        QS - bv_bracket(m.S, m.S, m.D),
    ]
    return entry_from_residual('action_flow', m.model_id, residuals, 'QS = (S,S)')


def lemma_chain(m: BvModel) -> CheckEntry:
    """
    Verify, for ι_Qω = δS:
      (a) [L_Q, ι_Q] = ι_{[Q,Q]} on function and exact 1-form generators and on ω
      (b) ½ ι_Q ι_Q ω = T₀
      (c) ½ ι_{[Q,Q]} ω = −δT₀
    with T₀ = ½(S,S), the ħ = 0 part of T.
    """
    if not m.is_hamiltonian():
        return skipped('lemma_chain', m.model_id, 'ι_Qω ≠ δS for this model')
    Q = m.Q
    QQ = commutator(Q, Q)
    omega = m.omega
    T0 = half(bv_bracket(m.S, m.S, m.D))

    residuals: List[GradedPoly] = []
    for key in m.D.variables():
        generator = GradedPoly.monomial(m.table, ((key, 1),))
        for phi in (generator, variational_delta(generator)):
            residuals.append(lie_commutator(Q, Q, phi) - contract(QQ, phi))
    residuals.append(lie_commutator(Q, Q, omega) - contract(QQ, omega))
    residuals.append(half(contract(Q, contract(Q, omega))) - T0)
    residuals.append(half(contract(QQ, omega)) + variational_delta(T0))
    return entry_from_residual(
        'lemma_chain', m.model_id, residuals, '[L_Q, ι_Q] = ι_[Q,Q]; ½ι_[Q,Q]ω = −δT',
        details={'T0': T0.render()},
    )


def equivariant_parts(S_hat: GradedPoly):
    """
    (S, S_ι) with Ŝ = S + u·S_ι.

    Raises:
        StructureError: If Ŝ has terms of order u² or higher
    """
    if not (S_hat - S_hat.truncate(U, 1)).is_zero():
        raise StructureError("the equivariant action must be at most linear in u")
    return S_hat.parameter_coefficient(U, 0), S_hat.parameter_coefficient(U, 1)


def check_equivariant(m: BvModel, vector: str) -> CheckEntry:
    """
    Equivariant identities of a model whose action is Ŝ = S + u·S_ι.

    S_L = −(S, S_ι) is the flow of S_ι along Q. Checks (S,S) = 0,
    (S_ι,S_ι) = 0, (S_ι,S_L) = 0, T = −u·S_L and the tangency
    ½ι_[Q̂,Q̂]ω = u·δS_L. A file model has no boundary, so both vector
    kinds are held to the same identities; the kind is reported.
    """
    if m.k != 0:
        return skipped('equivariant', m.model_id, f"equivariant checks need k = 0 (model has k = {m.k})")
    if not m.is_hamiltonian():
        return skipped('equivariant', m.model_id, 'ι_Qω ≠ δS for this model')
    try:
        S, S_iota = equivariant_parts(m.S)
    except StructureError as exc:
        return skipped('equivariant', m.model_id, str(exc))
    S_L = -bv_bracket(S, S_iota, m.D)
    residuals = [
        bv_bracket(S, S, m.D),
        bv_bracket(S_iota, S_iota, m.D),
        bv_bracket(S_iota, S_L, m.D),
        m.T + S_L.scale(U),
        half(contract(commutator(m.Q, m.Q), m.omega)) - variational_delta(S_L).scale(U),
    ]
    logger.debug(f"Equivariant split | model={m.model_id} | vector={vector} | S_L={S_L.render()}")
    return entry_from_residual(
        'equivariant', m.model_id, residuals, '(S_ι,S_L) = 0; T = −u S_L; ½ι_[Q̂,Q̂]ω = u δS_L',
        details={'vector': vector, 'S_L': S_L.render(), 'S_iota': S_iota.render()},
    )
