"""
Polarised boundary data, the Schrödinger operator Ω and the effective action.

ψ = exp((i/ħ) S) is never formed: every operator identity is checked on the
polynomial it produces after dividing by ψ. For a first-order operator
Ω = iħ Σ D^q ∂_q this is

    Ω ψ / ψ = −D(S),

so the modified quantum master equation reduces to polynomial identities
in the boundary variables, u and ħ, verified order by order in u.

Split presets F = Y × B are quantised by the Schrödinger rule p ↦ iħ∂_q
in standard order. Differential operators act on h·e with e = exp((i/ħ)S)
through

    iħ ∂_v (h e) / e = iħ ∂_v h − (−1)^{|v||h|} h ∂_v S,

which keeps every coefficient polynomial in ħ.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy

from .algebra import HBAR, I, U, GradedPoly, Key, left_derivative, mul, substitute
from .bf_theory import BfModel
from .boundary import BulkBoundaryModel, kernel_and_project
from .discrete import AXIAL, PRIMAL, HodgeData
from .exceptions import StructureError, UnsupportedModelError
from .report import CheckEntry, entry_from_residual, skipped
from .symplectic import (
    ConstantSymplecticForm, DarbouxStructure, Derivation, apply, bv_bracket, commutator,
    contract, half, hamiltonian_vf, variational_delta,
)

logger = logging.getLogger(__name__)

YY, YB, BB = 'YY', 'YB', 'BB'


@dataclass(eq=False)
class SplitModel:
    """
    Bulk data over a polarised boundary: F = Y × B with F∂ = T*B.

    Attributes:
        model_id: Identifier used in reports
        D: Darboux structure of F; pairs touching a q-coordinate make up ω_YB and ω_BB
        S: Bulk action
        q_keys: Base coordinates of the polarisation, the coordinates of B
        p_keys: Fibre coordinates
        S_boundary: S∂ as a polynomial in q and p
        T: The bulk T (zero for a strict BV bulk)
        f: Polarisation adaptation, S^f = S + π*f
        Q: Vector field on F; derived from S^f and S∂ when omitted
        pairing_blocks: ω∂ restricted to (q,q), (q,p) and (p,p) as matrices
        bf: The BF model this split was taken from, if any
        bm: Its boundary reduction, if any
    """
    model_id: str
    D: DarbouxStructure
    S: GradedPoly
    q_keys: List[Key]
    p_keys: List[Key]
    S_boundary: GradedPoly
    T: GradedPoly
    f: GradedPoly
    Q: Optional[Derivation] = None
    pairing_blocks: Dict[str, sympy.Matrix] = field(default_factory=dict)
    bf: Optional[BfModel] = None
    bm: Optional[BulkBoundaryModel] = None
    checks: Dict[str, List[GradedPoly]] = field(default_factory=dict)

    def __post_init__(self):
        if self.Q is None:
            self.Q = self.Q_Y + self.Q_B

    @property
    def table(self):
        return self.D.table

    @property
    def S_f(self) -> GradedPoly:
        return self.S + self.f

    def names(self, keys) -> List[str]:
        return [self.table.var(k).name for k in keys]

    @property
    def y_structure(self) -> DarbouxStructure:
        """The Darboux pairs of D with no q-coordinate; they define (·,·)_Y and Δ_Y."""
        q_set = set(self.q_keys)
        pairs = [(self.table.var(a), self.table.var(b)) for a, b in self.D.key_pairs()
                 if a not in q_set and b not in q_set]
        return DarbouxStructure(self.table, pairs, self.D.k)

    @property
    def omega_blocks(self) -> Dict[str, GradedPoly]:
        """ω_YY, ω_YB and ω_BB, sorted by the number of δq factors."""
        q_idx = {k[1] for k in self.q_keys}
        blocks = {name: GradedPoly.zero(self.table) for name in (YY, YB, BB)}
        for mono, coef in self.D.omega.terms.items():
            hits = sum(1 for (vdeg, idx), _ in mono if vdeg and idx in q_idx)
            blocks[(YY, YB, BB)[hits]] += GradedPoly.monomial(self.table, mono, coef)
        return blocks

    @property
    def Q_B(self) -> Derivation:
        if self.Q is not None:
            return _restrict_field(self.Q, set(self.q_keys))
        return boundary_field(self)

    @property
    def Q_Y(self) -> Derivation:
        if self.Q is not None:
            return _restrict_field(self.Q, set(self.Q.components) - set(self.q_keys))
        return hamiltonian_vf(self.S_f, self.y_structure)

    def pull(self, f: GradedPoly) -> GradedPoly:
        """π*f: p ↦ −∂S^f/∂q on a split preset, the identity on cell models."""
        if self.bf is not None:
            return f
        bindings = {}
        for q, p in zip(self.q_keys, self.p_keys):
            bindings[self.table.var(p)] = left_derivative(self.S_f, q).scale(-1)
        return substitute(f, bindings)


def _restrict_field(X: Derivation, keys) -> Derivation:
    return Derivation(X.table, {k: v for k, v in X.components.items() if k in keys}, X.ghost)


@dataclass(eq=False)
class OmegaOperator:
    """
    Ω = iħ Σ_q D^q ∂_q, standard ordered, and T̂∂ = u·iħ Σ_q (L q) ∂_q.

    D and L are stored as derivations on the q-coordinates.
    """
    D: Derivation
    L: Derivation

    def apply(self, f: GradedPoly) -> GradedPoly:
        return apply(self.D, f).scale(I * HBAR)

    def on_exponential(self, S: GradedPoly) -> GradedPoly:
        """Ω exp((i/ħ)S) / exp((i/ħ)S) = −D(S)."""
        return apply(self.D, S).scale(-1)

    def square_residual(self) -> Derivation:
        """Ω² − iħ·T̂∂ divided by (iħ)², i.e. ½[D,D] − u·L."""
        return commutator(self.D, self.D).scale(sympy.Rational(1, 2)) - self.L.scale(U, ghost_shift=2)


@dataclass(eq=False)
class EffectiveState:
    """ψ = exp((i/ħ) S_eff) with τ = 1, truncated at u^order."""
    S_eff: GradedPoly
    order: int
    chains: List[sympy.Matrix]
    residual_pairs: List[Tuple[Key, Key]] = field(default_factory=list)
    normalization: int = 1

    def at_order(self, m: int) -> GradedPoly:
        return self.S_eff.parameter_coefficient(U, m)


# ----------------------------------------------------------------------
# Polarisation
# ----------------------------------------------------------------------

def polarization_primitive(omega: GradedPoly, q_keys: List[Key], p_keys: List[Key]) -> GradedPoly:
    """
    θ_pol = Σ c p δq with δθ_pol = ω for a constant ω pairing p with q.

    Raises:
        UnsupportedModelError: If ω pairs two q's or two p's
    """
    table = omega.table
    q_set, p_set = set(q_keys), set(p_keys)
    result = GradedPoly.zero(table)
    for mono, coef in omega.terms.items():
        (v, _), (w, _) = mono
        v, w = (0, v[1]), (0, w[1])
        if v in p_set and w in q_set:
            p, q, sign = v, w, 1
        elif v in q_set and w in p_set:
            # δv δw = ± δw δv
            odd = ((table.parity(v) + 1) * (table.parity(w) + 1)) % 2
            p, q, sign = w, v, -1 if odd else 1
        else:
            raise UnsupportedModelError(
                f"Polarisation incompatible with ω∂: term pairs {table.var(v).name} "
                f"with {table.var(w).name}"
            )
        result = result + mul(GradedPoly.generator(table, table.var(p)),
                              GradedPoly.monomial(table, (((1, q[1]), 1),))).scale(sign * coef)
    return result


def canonical_form(sm: SplitModel) -> GradedPoly:
    """ω∂ = δα^f = Σ δp δq on T*B."""
    table = sm.table
    result = GradedPoly.zero(table)
    for q, p in zip(sm.q_keys, sm.p_keys):
        result = result + mul(variational_delta(GradedPoly.generator(table, table.var(p))),
                              variational_delta(GradedPoly.generator(table, table.var(q))))
    return result


def boundary_field(sm: SplitModel) -> Derivation:
    """Q_B: the q-components of the Hamiltonian field of S∂ on T*B, pulled back to F."""
    form = ConstantSymplecticForm(canonical_form(sm), sm.q_keys + sm.p_keys)
    Q_boundary = form.hamiltonian_vf(sm.S_boundary)
    comps = {}
    for key in sm.q_keys:
        comp = Q_boundary.components.get(key)
        if comp is not None:
            comps[key] = sm.pull(comp)
    return Derivation(sm.table, comps, 1)


def _blocks(bm: BulkBoundaryModel, q_keys: List[Key], p_keys: List[Key]) -> Dict[str, sympy.Matrix]:
    index = {k: i for i, k in enumerate(bm.boundary)}
    matrix = bm.boundary_form.matrix
    qi = [index[k] for k in q_keys]
    pi = [index[k] for k in p_keys]
    return {'qq': matrix.extract(qi, qi), 'qp': matrix.extract(qi, pi), 'pp': matrix.extract(pi, pi)}


def split(m: BfModel) -> SplitModel:
    """
    𝐀-polarisation on circle 1 and 𝐁-polarisation on circle 2.

    q = (𝐀|∂₁, 𝐁|∂₂), p = (𝐁|∂₁, 𝐀|∂₂). The adaptation f makes the boundary
    one-form exactly θ_pol.

    Raises:
        UnsupportedModelError: For closed complexes, transversal fields, a
            single segment, or a polarisation that does not match the
            boundary pairing
    """
    if m.complex.kind != PRIMAL:
        raise UnsupportedModelError("Polarisation needs a cylinder complex with two boundary circles")
    if m.vector is not None and m.vector.kind == AXIAL:
        raise UnsupportedModelError("The axial field is not tangent to the boundary; no BFV data")
    a1, b1 = m.boundary_fields(1)
    a2, b2 = m.boundary_fields(2)
    q_keys, p_keys = a1 + b2, b1 + a2
    if set(q_keys) & set(p_keys):
        raise UnsupportedModelError(
            f"Both circles restrict 𝐁 to the same cells ({','.join(m.names(sorted(set(q_keys) & set(p_keys))))}); "
            f"the polarisation needs at least two segments"
        )
    bm = kernel_and_project(m.bv)
    if set(q_keys) | set(p_keys) != set(bm.boundary) or len(q_keys) != len(p_keys):
        raise UnsupportedModelError(
            f"Polarisation does not match the boundary support {bm.boundary_names()}"
        )
    blocks = _blocks(bm, q_keys, p_keys)
    if not blocks['qq'].is_zero_matrix or not blocks['pp'].is_zero_matrix or blocks['qp'].rank() != len(q_keys):
        raise UnsupportedModelError("ω∂ is not a cotangent pairing of q with p")

    table = m.table
    theta_pol = polarization_primitive(bm.omega_boundary, q_keys, p_keys)
    R = Derivation(table, {k: GradedPoly.generator(table, table.var(k)) for k in q_keys + p_keys}, 0)
    f = half(contract(R, bm.alpha_boundary - theta_pol))
    sm = SplitModel(
        model_id=m.model_id, D=m.D, S=m.bv.S, q_keys=q_keys, p_keys=p_keys,
        S_boundary=bm.S_boundary, T=m.bv.T, f=f, Q=m.Q, pairing_blocks=blocks, bf=m, bm=bm,
    )
    sm.checks['adapted'] = [
        variational_delta(theta_pol) - bm.omega_boundary,
        bm.alpha_boundary - variational_delta(f) - theta_pol,
    ]
    logger.info(
        f"Split model | model={m.model_id} | q={','.join(sm.names(q_keys))} "
        f"| p={','.join(sm.names(p_keys))}"
    )
    return sm


def split_from_data(model_id: str, D: DarbouxStructure, S: GradedPoly, q_names: List[str],
                    p_names: List[str], S_boundary: GradedPoly,
                    T: Optional[GradedPoly] = None) -> SplitModel:
    """
    Split model F = Y × B given explicitly.

    B carries the q-coordinates and Y every other paired variable. A pair
    that joins a q with a Y-variable (or two q's) contributes to ω_YB (or
    ω_BB). Q is Q_Y + Q_B with Q_Y Hamiltonian for S^f on the Y-pairs and
    Q_B the pulled-back boundary field of S∂, and π*p = −∂S^f/∂q.

    Raises:
        StructureError: If a fibre coordinate is a Darboux variable of F
    """
    table = D.table
    paired = set(D.variables())
    q_keys = [table.key(n) for n in q_names]
    p_keys = [table.key(n) for n in p_names]
    for key in p_keys:
        if key in paired:
            raise StructureError(f"Fibre coordinate '{table.var(key).name}' is a Darboux variable of F")
    zero = GradedPoly.zero(table)
    sm = SplitModel(
        model_id=model_id, D=D, S=S, q_keys=q_keys, p_keys=p_keys, S_boundary=S_boundary,
        T=T if T is not None else zero, f=zero,
    )
    logger.info(
        f"Split model | model={model_id} | q={','.join(q_names)} | p={','.join(p_names)} "
        f"| coupled={not sm.omega_blocks[YB].is_zero()}"
    )
    return sm


# ----------------------------------------------------------------------
# Ω and T̂∂
# ----------------------------------------------------------------------

def _lie_on_q(m: BfModel, q_keys: List[Key]) -> Derivation:
    """L on 𝐀-coordinates by the matrix L; on 𝐁-coordinates by −Lᵀ (the dual action)."""
    table = m.table
    lie = m.lie_full
    x_index = {k: i for i, k in enumerate(m.x_keys)}
    t_index = {k: i for i, k in enumerate(m.theta_keys)}
    comps = {}
    for key in q_keys:
        value = GradedPoly.zero(table)
        if key in x_index:
            i = x_index[key]
            for j, x in enumerate(m.x_keys):
                if lie[i, j] != 0:
                    value = value + GradedPoly.generator(table, table.var(x)).scale(lie[i, j])
        else:
            i = t_index[key]
            for j, theta in enumerate(m.theta_keys):
                if lie[j, i] != 0:
                    value = value + GradedPoly.generator(table, table.var(theta)).scale(-lie[j, i])
        comps[key] = value
    return Derivation(table, comps, 0)


def build_omega(sm: SplitModel) -> OmegaOperator:
    """
    Ω from the boundary vector field restricted to q, and T̂∂ from L.

    Raises:
        StructureError: If Q∂ does not close on the q-coordinates
    """
    if sm.bm is None:
        raise StructureError("Ω is built from the reduced boundary field of a BF split")
    q_set = set(sm.q_keys)
    comps = {}
    for key in sm.q_keys:
        comp = sm.bm.Q_boundary.components.get(key)
        if comp is None:
            continue
        if comp.field_support() - q_set:
            raise StructureError(
                f"Q∂ maps {sm.table.var(key).name} outside the q-coordinates; no Schrödinger operator"
            )
        comps[key] = comp
    D = Derivation(sm.table, comps, 1)
    if sm.bf is not None and sm.bf.equivariant:
        L = _lie_on_q(sm.bf, sm.q_keys)
    else:
        L = Derivation.zero(sm.table, 0)
    return OmegaOperator(D, L)


# ----------------------------------------------------------------------
# Effective action
# ----------------------------------------------------------------------

def _kept_flat(m: BfModel, hd: HodgeData) -> List[int]:
    offsets = [0]
    for dim in m.complex.dims:
        offsets.append(offsets[-1] + dim)
    return [offsets[p] + i for p, kept in enumerate(hd.kept) for i in kept]


def _propagator_full(hd: HodgeData) -> sympy.Matrix:
    sizes = [len(k) for k in hd.kept]
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    eta = sympy.zeros(offsets[-1], offsets[-1])
    for p in range(1, len(sizes)):
        eta[offsets[p - 1]:offsets[p], offsets[p]:offsets[p + 1]] = hd.eta[p]
    return eta


def transport_chains(m: BfModel, hd: HodgeData, order: int) -> List[sympy.Matrix]:
    """
    K_j with K(u) = Σ_j u^j K_j = −r₂ η Σ_m (−u ι η)^m Π (d + u ι) e₁.

    K(u) carries the 𝐀-data of circle 1 through the bulk to circle 2.
    """
    kept = _kept_flat(m, hd)
    a1, _ = m.boundary_fields(1)
    a2, _ = m.boundary_fields(2)
    x_index = {k: i for i, k in enumerate(m.x_keys)}
    position = {flat: i for i, flat in enumerate(kept)}
    for key in a2:
        if x_index[key] not in position:
            raise UnsupportedModelError("Circle 2 must carry absolute conditions for the 𝐁-polarisation")

    eta = _propagator_full(hd)
    d = m.d_full.extract(kept, list(range(m.d_full.cols)))
    iota_in = m.iota_full.extract(kept, list(range(m.iota_full.cols)))
    iota = m.iota_full.extract(kept, kept)
    e1 = sympy.zeros(m.d_full.cols, len(a1))
    for col, key in enumerate(a1):
        e1[x_index[key], col] = 1
    r2 = sympy.zeros(len(a2), len(kept))
    for row, key in enumerate(a2):
        r2[row, position[x_index[key]]] = 1

    source = [d * e1, iota_in * e1]
    step = -iota * eta
    chains = []
    power = sympy.eye(len(kept))
    previous = None
    for j in range(order + 1):
        total = power * source[0]
        if previous is not None:
            total += previous * source[1]
        chains.append((-r2 * eta * total).applyfunc(sympy.simplify))
        previous = power
        power = step * power
    return chains


def effective_action(sm: SplitModel, hd: HodgeData, N: int) -> EffectiveState:
    """
    S_eff = Σ_{j ≤ N} u^j ⟨𝐁|∂₂, K_j 𝐀|∂₁⟩ paired by the circle-2 Stokes term.

    K_j lowers form degree by 2j while boundary data sit in degrees 0 and 1,
    so K_j vanishes for j ≥ 1 and S_eff is carried by K_0. The higher chains are
    still computed and recorded.

    Raises:
        ValueError: If N < 1
        UnsupportedModelError: If the Hodge data has harmonic forms (residual
            fields need one relative and one absolute end)
    """
    if N < 1:
        raise ValueError(f"Truncation order must be at least 1, got {N}")
    m = sm.bf
    if m is None:
        raise StructureError("The effective action is defined for BF splits")
    if any(hd.harmonic_dims()):
        raise UnsupportedModelError(
            f"Hodge data has residual fields {hd.harmonic_dims()}; use one relative and one absolute end"
        )
    table = m.table
    chains = transport_chains(m, hd, N)
    a1, _ = m.boundary_fields(1)
    a2, b2 = m.boundary_fields(2)
    stokes = m.S - m.S_prime

    S_eff = GradedPoly.zero(table)
    for theta in b2:
        first = left_derivative(stokes, theta)
        for row, x in enumerate(a2):
            coef = left_derivative(first, x).terms.get((), 0)
            if coef == 0:
                continue
            for j, chain in enumerate(chains):
                for col, q in enumerate(a1):
                    entry = chain[row, col]
                    if entry != 0:
                        term = mul(GradedPoly.generator(table, table.var(theta)),
                                   GradedPoly.generator(table, table.var(q)))
                        S_eff = S_eff + term.scale(coef * entry * U ** j)
    logger.info(f"Effective action | model={sm.model_id} | order={N} | terms={len(S_eff.terms)}")
    return EffectiveState(S_eff=S_eff, order=N, chains=chains)


# ----------------------------------------------------------------------
# Checks
# ----------------------------------------------------------------------

def _per_order(poly: GradedPoly, N: int) -> List[GradedPoly]:
    return [poly.parameter_coefficient(U, j) for j in range(N + 1)]


def verify_quantum(sm: SplitModel, st: EffectiveState) -> List[CheckEntry]:
    """
    Ω² = iħ T̂∂, T̂∂ψ = 0 and (Ω + ħ²Δ_res)ψ = 0 order by order in u.

    The residual-field space is empty for one relative and one absolute
    end, so Δ_res and the residual bracket drop out and the mQME reads
    −D(S_eff) = 0. The identity (Ω − iħΔ)T̂∂ψ = 0 is evaluated and reported as well.
    """
    omega = build_omega(sm)
    S_eff = st.S_eff
    entries = []

    square = omega.square_residual()
    entries.append(entry_from_residual(
        'omega_squared', sm.model_id, list(square.components.values()), 'Ω² = iħ T̂∂'))

    T_psi = apply(omega.L, S_eff)
    entries.append(entry_from_residual(
        'T_hat_psi', sm.model_id, _per_order(T_psi, st.order), 'T̂∂ψ = 0',
        details={'order': str(st.order)}))

    mqme = omega.on_exponential(S_eff)
    entries.append(entry_from_residual(
        'mqme', sm.model_id, _per_order(mqme, st.order), '(Ω + ħ²Δ_res)ψ = 0',
        details={'order': str(st.order), 'S_eff_u0': st.at_order(0).render()}))

    # Ω(T̂ψ)/ψ with T̂ψ/ψ = −u·L(S): iħ D(h) − h·D(S)
    h = T_psi.scale(-U)
    after = omega.apply(h) - mul(h, apply(omega.D, S_eff))
    entries.append(entry_from_residual(
        'omega_T_hat', sm.model_id, _per_order(after, st.order), '(Ω − iħΔ)T̂∂ψ = 0',
        details={'status_meaning': 'reported, not required by the quantisation'}))
    return entries



# ----------------------------------------------------------------------
# Split identities
# ----------------------------------------------------------------------

def pullback_boundary_action(sm: SplitModel) -> GradedPoly:
    """π*S∂ with p ↦ −∂S^f/∂q for a split preset."""
    return sm.pull(sm.S_boundary)


def _exp_derivative(sm: SplitModel, key: Key, h: GradedPoly) -> GradedPoly:
    """iħ ∂_v (h e) / e for e = exp((i/ħ)S^f)."""
    table = sm.table
    dS = left_derivative(sm.S_f, key)
    result = left_derivative(h, key).scale(I * HBAR)
    for parity, part in h.split_by_parity().items():
        sign = 1 if (parity * table.parity(key)) % 2 else -1
        result = result + mul(part, dS).scale(sign)
    return result


def omega_on_exponential(sm: SplitModel) -> GradedPoly:
    """
    Ω e / e for Ω the standard-ordered quantisation of S∂.

    Each monomial s·p₁⋯p_r of S∂ acts as s·P₁(⋯P_r(e)) with P = iħ∂_q of
    the conjugate q; the rightmost momentum acts first.
    """
    table = sm.table
    conjugate = dict(zip(sm.p_keys, sm.q_keys))
    result = GradedPoly.zero(table)
    for mono, coef in sm.S_boundary.terms.items():
        base = tuple((k, e) for k, e in mono if k not in conjugate)
        fibre = tuple((k, e) for k, e in mono if k in conjugate)
        momenta = [k for k, e in fibre for _ in range(e)]
        sign = mul(GradedPoly.monomial(table, base), GradedPoly.monomial(table, fibre)).terms[mono]
        h = GradedPoly.constant(table, 1)
        for p in reversed(momenta):
            h = _exp_derivative(sm, conjugate[p], h)
        result = result + mul(GradedPoly.monomial(table, base), h).scale(coef * sign)
    return result


def laplacian_on_exponential(sm: SplitModel) -> GradedPoly:
    """ħ²Δ_Y e / e = −Σ P_x(P_θ(1)) over the Darboux pairs of Y."""
    table = sm.table
    one = GradedPoly.constant(table, 1)
    result = GradedPoly.zero(table)
    for base_key, mom_key in sm.y_structure.key_pairs():
        result = result - _exp_derivative(sm, base_key, _exp_derivative(sm, mom_key, one))
    return result


def _without_deltas(form: GradedPoly, keys) -> GradedPoly:
    drop = {k[1] for k in keys}
    return GradedPoly(form.table, {
        mono: coef for mono, coef in form.terms.items()
        if not any(vdeg and idx in drop for (vdeg, idx), _ in mono)
    })


def _hypothesis_skipped(entry: CheckEntry, reason: str) -> CheckEntry:
    result = skipped(entry.check_id, entry.model_id, reason, entry.anchor)
    result.details['residual'] = entry.residual
    return result


def split_identities(sm: SplitModel) -> List[CheckEntry]:
    """
    Split-level identities of a polarised bulk F = Y × B, e = exp((i/ħ)S^f).

    The hypotheses come first: good splitting ι_{Q_B}ω_YB = 0 and
    discontinuity ω_YB = ω_BB = 0. Then the Y-equation
    ι_{Q_Y}ω_YY + ι_{Q_B}ω_YB = δ_Y S^f, the split master equation
    ½(S^f,S^f)_Y = T + S∂_eff with S∂_eff = π*S∂ − ½ι_{Q_B}ι_{Q_B}ω_BB,
    Ω e = π*S∂ e, ħ²Δ_Y e = −(T + S∂_eff) e and the emQME
    (Ω + ħ²Δ_Y) e = −T e.

    On cell models the finite bulk form never splits, so failing hypotheses
    are reported as skipped with their residual and the identities that
    depend on them are skipped as well.
    """
    if sm.D.k != 0:
        return [skipped('split_identities', sm.model_id, f"Split identities need k = 0 (model has k = {sm.D.k})")]
    blocks = sm.omega_blocks
    Q_B, Q_Y = sm.Q_B, sm.Q_Y
    good = entry_from_residual('good_splitting', sm.model_id, contract(Q_B, blocks[YB]), 'ι_{Q_B} ω_YB = 0')
    discontinuous = entry_from_residual('discontinuous_splitting', sm.model_id,
                                        [blocks[YB], blocks[BB]], 'ω_YB = 0, ω_BB = 0')
    if sm.bf is not None and not (good.passed and discontinuous.passed):
        failed = [e.check_id for e in (good, discontinuous) if not e.passed]
        reason = 'the cell-model bulk form couples boundary variables to their bulk partners'
        entries = [e if e.passed else _hypothesis_skipped(e, reason) for e in (good, discontinuous)]
        for check_id in ('y_equation', 'split_master', 'omega_exp', 'laplacian_exp', 'emqme'):
            entries.append(skipped(check_id, sm.model_id, f"needs {' and '.join(failed)}"))
        return entries

    S_f = sm.S_f
    pulled = pullback_boundary_action(sm)
    S_eff = pulled - half(contract(Q_B, contract(Q_B, blocks[BB])))
    half_bracket = half(bv_bracket(S_f, S_f, sm.y_structure))
    omega_e = omega_on_exponential(sm)
    laplacian_e = laplacian_on_exponential(sm)
    y_keys = set(sm.q_keys) | set(sm.p_keys)
    y_residual = (contract(Q_Y, blocks[YY]) + contract(Q_B, blocks[YB])
                  - _without_deltas(variational_delta(S_f), y_keys))
    entries = [
        good,
        discontinuous,
        entry_from_residual('y_equation', sm.model_id, y_residual, 'ι_{Q_Y}ω_YY + ι_{Q_B}ω_YB = δ_Y S^f'),
        entry_from_residual('split_master', sm.model_id, half_bracket - sm.T - S_eff,
                            '½(S^f,S^f)_Y = T + S∂_eff',
                            details={'S_boundary': sm.S_boundary.render()}),
        entry_from_residual('omega_exp', sm.model_id, omega_e - pulled, 'Ω e = π*S∂ e'),
        entry_from_residual('laplacian_exp', sm.model_id, laplacian_e + sm.T + S_eff,
                            'ħ²Δ_Y e = −(T + S∂_eff) e',
                            details={'laplacian_e': laplacian_e.render()}),
        entry_from_residual('emqme', sm.model_id, omega_e + laplacian_e + sm.T, '(Ω + ħ²Δ_Y) e = −T e'),
    ]
    return entries
