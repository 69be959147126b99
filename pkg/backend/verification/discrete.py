"""
Finite cochain models of the interval, the cylinder and its closed analogue.

The t-direction ([0,1] cut into K segments) is discretised; the circle
direction is kept spectral, one Fourier mode e^{inφ} per complex, so the
rotation field acts as multiplication by i·n and every identity is an exact
finite matrix identity.

Cells of the primal cylinder complex (mode n):
    C⁰  nodes            n0 .. nK
    C¹  t-edges          e0 .. e(K-1)      then φ-lines p0 .. pK
    C²  cells            c0 .. c(K-1)

Cells of the dual complex (carried by the 𝐁 superfield, mode −n):
    C⁰  midpoints        m0 .. m(K-1)
    C¹  dual t-edges     t0 .. tK          then dual φ-lines q0 .. q(K-1)
    C²  dual cells       s0 .. sK

The dual t-difference extrapolates midpoint values to the boundary
circles, so the half-edges t0 and tK carry no coboundary. Primal cell x
pairs with the dual cell of complementary dimension.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .exceptions import StructureError

logger = logging.getLogger(__name__)

PRIMAL = 'primal'
DUAL = 'dual'
CLOSED = 'closed'
CLOSED_DUAL = 'closed_dual'
INTERVAL = 'interval'

ROTATION = 'rotation'
AXIAL = 'axial'

RELATIVE = 'relative'
ABSOLUTE = 'absolute'
METRIC = 'metric'


@dataclass(frozen=True)
class Cell:
    """A cochain basis element: its type and its position along the interval."""
    kind: str       # node | tedge | phi | cell
    index: int
    label: str


@dataclass(eq=False)
class ModeComplex:
    """
    Cochain complex C⁰ → C¹ → C² with exact (rational + i·rational) matrices.

    Attributes:
        segments: Interval resolution K
        mode: Fourier mode n, or None for the interval-only building block
        kind: primal | dual | closed | closed_dual | interval
        cells: Basis cells per degree
        d: Coboundary matrices, d[p]: C^p → C^{p+1}
        metric: Diagonal rational inner products per degree
        difference: The interval t-difference block used by d
    """
    segments: int
    mode: Optional[int]
    kind: str
    cells: Tuple[Tuple[Cell, ...], ...]
    d: Tuple[sympy.Matrix, ...]
    metric: Tuple[sympy.Matrix, ...]
    difference: sympy.Matrix

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.cells)

    @property
    def top(self) -> int:
        return len(self.cells) - 1

    @property
    def is_closed(self) -> bool:
        return self.kind in (CLOSED, CLOSED_DUAL)

    def labels(self, degree: int) -> List[str]:
        return [c.label for c in self.cells[degree]]

    def d_squared(self) -> List[sympy.Matrix]:
        return [self.d[p + 1] * self.d[p] for p in range(len(self.d) - 1)]

    def boundary_cells(self, side: int) -> Dict[int, List[int]]:
        """
        Indices, per degree, of the cells lying on boundary circle 1 (t=0) or 2 (t=1).

        For the dual complex these are the cells carrying the extrapolated
        boundary values (first and last midpoint and dual φ-line).
        """
        if self.is_closed:
            return {p: [] for p in range(self.top + 1)}
        K = self.segments
        result: Dict[int, List[int]] = {}
        for p, cells in enumerate(self.cells):
            picked = []
            for i, cell in enumerate(cells):
                if self.kind in (PRIMAL, INTERVAL) and cell.kind in ('node', 'phi'):
                    if cell.index == (0 if side == 1 else K):
                        picked.append(i)
                elif self.kind == DUAL and cell.kind in ('node', 'phi'):
                    if cell.index == (0 if side == 1 else K - 1):
                        picked.append(i)
            result[p] = picked
        return result


# ----------------------------------------------------------------------
# Builders
# ----------------------------------------------------------------------

def _require_segments(K: int) -> None:
    if K < 1:
        raise StructureError(f"Interval resolution must be at least 1, got {K}")


def interval_difference(K: int) -> sympy.Matrix:
    """(D f)_a = f_{a+1} − f_a, a K × (K+1) matrix."""
    D = sympy.zeros(K, K + 1)
    for a in range(K):
        D[a, a] = -1
        D[a, a + 1] = 1
    return D


def dual_difference(K: int) -> sympy.Matrix:
    """Dual t-difference with boundary extrapolation, a (K+1) × K matrix."""
    D = sympy.zeros(K + 1, K)
    for j in range(1, K):
        D[j, j] = 1
        D[j, j - 1] = -1
    return D


def periodic_difference(K: int) -> sympy.Matrix:
    D = sympy.zeros(K, K)
    for a in range(K):
        D[a, a] += -1
        D[a, (a + 1) % K] += 1
    return D


def _node_weights(count: int, K: int, halves: bool) -> sympy.Matrix:
    h = sympy.Rational(1, K)
    weights = [h] * count
    if halves and count > 1:
        weights[0] = weights[-1] = h / 2
    return sympy.diag(*weights)


def coboundaries(D: sympy.Matrix, n: int) -> Tuple[sympy.Matrix, sympy.Matrix]:
    """d⁰ = [D; i·n] and d¹ = [−i·n, D] on (g dt + h dφ) for a t-difference block D."""
    inn = sympy.I * n
    d0 = sympy.Matrix.vstack(D, inn * sympy.eye(D.shape[1]))
    d1 = sympy.Matrix.hstack(-inn * sympy.eye(D.shape[0]), D)
    return d0, d1


def _assemble(K: int, n: int, D: sympy.Matrix, kind: str,
              zero_cells: Sequence[Cell], tedges: Sequence[Cell], phis: Sequence[Cell],
              top_cells: Sequence[Cell], zero_halves: bool, tedge_halves: bool) -> ModeComplex:
    """Tensor an interval complex (difference D) with the mode-n line."""
    n0, n1 = D.shape[1], D.shape[0]
    d0, d1 = coboundaries(D, n)
    m0 = _node_weights(n0, K, zero_halves)
    m_t = _node_weights(n1, K, tedge_halves)
    metric = (m0, sympy.diag(m_t, m0), m_t)
    return ModeComplex(
        segments=K, mode=n, kind=kind,
        cells=(tuple(zero_cells), tuple(tedges) + tuple(phis), tuple(top_cells)),
        d=(d0, d1), metric=metric, difference=D,
    )


def build_cylinder_mode_complex(K: int, n: int) -> ModeComplex:
    """
    Primal Whitney complex of [0,1] × S¹ in Fourier mode n.

    Raises:
        StructureError: If K < 1
    """
    _require_segments(K)
    nodes = [Cell('node', j, f"n{j}") for j in range(K + 1)]
    tedges = [Cell('tedge', a, f"e{a}") for a in range(K)]
    phis = [Cell('phi', j, f"p{j}") for j in range(K + 1)]
    cells = [Cell('cell', a, f"c{a}") for a in range(K)]
    return _assemble(K, n, interval_difference(K), PRIMAL, nodes, tedges, phis, cells,
                     zero_halves=True, tedge_halves=False)


def build_dual_mode_complex(K: int, n: int) -> ModeComplex:
    """Dual complex of the cylinder in mode n (K midpoints, K+1 dual edges)."""
    _require_segments(K)
    mids = [Cell('node', a, f"m{a}") for a in range(K)]
    tedges = [Cell('tedge', j, f"t{j}") for j in range(K + 1)]
    phis = [Cell('phi', a, f"q{a}") for a in range(K)]
    cells = [Cell('cell', j, f"s{j}") for j in range(K + 1)]
    return _assemble(K, n, dual_difference(K), DUAL, mids, tedges, phis, cells,
                     zero_halves=False, tedge_halves=True)


def build_closed_mode_complex(K: int, n: int) -> ModeComplex:
    """Periodic t-direction (a torus slice): the complex without boundary."""
    _require_segments(K)
    nodes = [Cell('node', j, f"n{j}") for j in range(K)]
    tedges = [Cell('tedge', a, f"e{a}") for a in range(K)]
    phis = [Cell('phi', j, f"p{j}") for j in range(K)]
    cells = [Cell('cell', a, f"c{a}") for a in range(K)]
    return _assemble(K, n, periodic_difference(K), CLOSED, nodes, tedges, phis, cells,
                     zero_halves=False, tedge_halves=False)


def build_closed_dual_mode_complex(K: int, n: int) -> ModeComplex:
    _require_segments(K)
    mids = [Cell('node', a, f"m{a}") for a in range(K)]
    tedges = [Cell('tedge', j, f"t{j}") for j in range(K)]
    phis = [Cell('phi', a, f"q{a}") for a in range(K)]
    cells = [Cell('cell', j, f"s{j}") for j in range(K)]
    return _assemble(K, n, -periodic_difference(K).T, CLOSED_DUAL, mids, tedges, phis, cells,
                     zero_halves=False, tedge_halves=False)


def build_interval_complex(K: int) -> ModeComplex:
    """The interval-only building block: nodes → edges."""
    _require_segments(K)
    nodes = tuple(Cell('node', j, f"n{j}") for j in range(K + 1))
    edges = tuple(Cell('tedge', a, f"e{a}") for a in range(K))
    D = interval_difference(K)
    metric = (_node_weights(K + 1, K, True), _node_weights(K, K, False))
    return ModeComplex(K, None, INTERVAL, (nodes, edges), (D,), metric, D)


def dual_of(X: ModeComplex) -> ModeComplex:
    """The complex paired with X, in the opposite mode."""
    builders = {PRIMAL: build_dual_mode_complex, CLOSED: build_closed_dual_mode_complex}
    if X.kind not in builders:
        raise StructureError(f"No dual defined for a '{X.kind}' complex")
    return builders[X.kind](X.segments, -X.mode)


# ----------------------------------------------------------------------
# Pairing and Stokes
# ----------------------------------------------------------------------

def pairing_matrix(Y: ModeComplex, X: ModeComplex, p: int) -> sympy.Matrix:
    """
    ⟨β, α⟩ for β ∈ Y^p, α ∈ X^{2−p}, with the φ-integral normalised to 1.

    1-forms pair through (g dt + h dφ) ∧ (g' dt + h' dφ) = (g h' − h g') dt∧dφ.
    """
    if p in (0, 2):
        return sympy.eye(Y.dims[p])
    nt_y = sum(1 for c in Y.cells[1] if c.kind == 'tedge')
    nt_x = sum(1 for c in X.cells[1] if c.kind == 'tedge')
    P = sympy.zeros(Y.dims[1], X.dims[1])
    for j in range(nt_y):
        P[j, nt_x + j] = 1
    for a in range(Y.dims[1] - nt_y):
        P[nt_y + a, a] = -1
    return P


def stokes_residual(Y: ModeComplex, X: ModeComplex, p: int) -> sympy.Matrix:
    """
    Bilinear form ⟨dβ, α⟩ + (−1)^p ⟨β, dα⟩ for β ∈ Y^p, α ∈ X^{1−p}.

    Vanishes on closed complexes and is supported on boundary cells otherwise.
    """
    first = Y.d[p].T * pairing_matrix(Y, X, p + 1)
    second = pairing_matrix(Y, X, p) * X.d[1 - p]
    return first + second if p % 2 == 0 else first - second


# ----------------------------------------------------------------------
# Vector fields
# ----------------------------------------------------------------------

@dataclass(eq=False)
class VectorFieldOp:
    """
    Contraction and Lie derivative of a source vector field on one complex.

    iota[p] maps C^p → C^{p−1} (iota[0] is None); lie[p] = d ι + ι d on C^p.
    """
    kind: str
    complex: ModeComplex
    iota: Tuple[Optional[sympy.Matrix], ...]
    lie: Tuple[sympy.Matrix, ...]

    def iota_squared(self) -> List[sympy.Matrix]:
        return [self.iota[p - 1] * self.iota[p] for p in range(2, len(self.iota))]


def _averaging(rows: int, cols: int, periodic: bool, dual: bool) -> sympy.Matrix:
    """
    Weights from t-edges (cols) onto points (rows).

    Periodic and dual points take the mean of their two neighbouring edges.
    On the primal interval a boundary edge is attributed to its boundary
    point only; interior points take the mean of their interior neighbours.
    """
    A = sympy.zeros(rows, cols)
    half = sympy.Rational(1, 2)
    for a in range(cols):
        if periodic:
            A[a % rows, a] += half
            A[(a + 1) % rows, a] += half
        elif dual:
            # midpoint a sits between dual t-edges a and a+1
            if a - 1 >= 0:
                A[a - 1, a] += half
            if a < rows:
                A[a, a] += half
    if periodic or dual:
        return A
    last = cols - 1
    for j in range(rows):
        if j == 0:
            near = [0]
        elif j == rows - 1:
            near = [last]
        else:
            near = [a for a in (j - 1, j) if 0 < a < last]
        for a in near:
            A[j, a] += sympy.Rational(1, len(near))
    return A


def contraction(kind: str, X: ModeComplex) -> VectorFieldOp:
    """
    ι_v on a cylinder-type complex for v = ∂_φ (rotation) or v = ∂_t (axial).

    rotation: ι(h dφ) = h,  ι(k dt∧dφ) = −k dt
    axial:    ι(g dt) = g,  ι(k dt∧dφ) = k dφ, t-edge data averaged onto points
    """
    if X.mode is None:
        raise StructureError("Vector fields act on cylinder-type complexes only")
    n0, n1, n2 = X.dims
    nt = sum(1 for c in X.cells[1] if c.kind == 'tedge')
    nphi = n1 - nt
    iota1 = sympy.zeros(n0, n1)
    iota2 = sympy.zeros(n1, n2)
    if kind == ROTATION:
        for j in range(nphi):
            iota1[j, nt + j] = 1
        for a in range(n2):
            iota2[a, a] = -1
    elif kind == AXIAL:
        periodic = X.is_closed
        dual = X.kind == DUAL
        iota1[:, :nt] = _averaging(n0, nt, periodic, dual)
        iota2[nt:, :] = _averaging(nphi, n2, periodic, dual)
    else:
        raise StructureError(f"Unknown vector field kind '{kind}'")
    d0, d1 = X.d
    lie0 = iota1 * d0
    lie1 = d0 * iota1 + iota2 * d1
    lie2 = d1 * iota2
    return VectorFieldOp(kind, X, (None, iota1, iota2), (lie0, lie1, lie2))


# ----------------------------------------------------------------------
# Hodge data
# ----------------------------------------------------------------------

@dataclass(eq=False)
class HodgeData:
    """
    Harmonic forms and propagator of a complex with boundary conditions.

    Attributes:
        complex: The full complex
        boundary_conditions: (condition at t=0, condition at t=1)
        kept: Per degree, indices of the full complex spanned by the subcomplex
        d: Coboundary of the subcomplex
        harmonics: Per degree, matrix whose columns are the harmonic forms χ_i
        projector: Per degree, the metric projector P = Σ χ_i ⊗ χ^i
        eta: eta[p]: C^p → C^{p−1} (eta[0] is None) with dη + ηd = 1 − P
        gauge: 'axial' (product of the interval homotopy with the circle) or 'metric'
        checks: Residual matrices of the Hodge identities
    """
    complex: ModeComplex
    boundary_conditions: Tuple[str, str]
    kept: Tuple[Tuple[int, ...], ...]
    d: Tuple[sympy.Matrix, ...]
    harmonics: Tuple[sympy.Matrix, ...]
    projector: Tuple[sympy.Matrix, ...]
    eta: Tuple[Optional[sympy.Matrix], ...]
    gauge: str
    checks: Dict[str, List[sympy.Matrix]] = field(default_factory=dict)

    def harmonic_dims(self) -> Tuple[int, ...]:
        return tuple(h.shape[1] for h in self.harmonics)

    def verified(self) -> bool:
        return all(m.is_zero_matrix for ms in self.checks.values() for m in ms)

    def with_dropped_entry(self, degree: int, row: int, col: int) -> 'HodgeData':
        """A copy whose propagator has one entry set to zero."""
        eta = list(self.eta)
        broken = eta[degree].copy()
        broken[row, col] = 0
        eta[degree] = broken
        return HodgeData(self.complex, self.boundary_conditions, self.kept, self.d,
                         self.harmonics, self.projector, tuple(eta), self.gauge, {})


def _kept_indices(X: ModeComplex, bc: Tuple[str, str]) -> Tuple[Tuple[int, ...], ...]:
    removed: Dict[int, set] = {p: set() for p in range(X.top + 1)}
    for side, condition in zip((1, 2), bc):
        if condition == RELATIVE:
            for p, idx in X.boundary_cells(side).items():
                removed[p].update(idx)
        elif condition != ABSOLUTE:
            raise StructureError(f"Unknown boundary condition '{condition}'")
    return tuple(tuple(i for i in range(X.dims[p]) if i not in removed[p]) for p in range(X.top + 1))


def _restrict(X: ModeComplex, kept) -> Tuple[Tuple[sympy.Matrix, ...], Tuple[sympy.Matrix, ...]]:
    d = tuple(X.d[p].extract(list(kept[p + 1]), list(kept[p])) for p in range(len(X.d)))
    metric = tuple(X.metric[p].extract(list(kept[p]), list(kept[p])) for p in range(len(X.metric)))
    return d, metric


def _metric_hodge(d, metric):
    """Harmonics, projectors and propagator by exact pseudo-inversion."""
    top = len(metric) - 1
    adjoint = [metric[p].inv() * d[p].H * metric[p + 1] for p in range(top)]
    harmonics, projectors, greens = [], [], []
    for p in range(top + 1):
        size = metric[p].shape[0]
        lap = sympy.zeros(size, size)
        if p > 0:
            lap += d[p - 1] * adjoint[p - 1]
        if p < top:
            lap += adjoint[p] * d[p]
        basis = lap.nullspace()
        H = sympy.Matrix.hstack(*basis) if basis else sympy.zeros(size, 0)
        if basis:
            P = H * (H.H * metric[p] * H).inv() * H.H * metric[p]
        else:
            P = sympy.zeros(size, size)
        harmonics.append(H)
        projectors.append(P)
        greens.append((lap + P).inv() * (sympy.eye(size) - P))
    eta = [None] + [adjoint[p] * greens[p + 1] for p in range(top)]
    return harmonics, projectors, eta


def _axial_hodge(X: ModeComplex, kept, d):
    """Product propagator η = η_I ⊗ 1 built from the acyclic interval factor."""
    K = X.segments
    nt = sum(1 for c in X.cells[1] if c.kind == 'tedge')
    nodes_kept = list(kept[0])
    edges_kept = [i for i in kept[1] if i < nt]
    D = X.difference.extract(edges_kept, nodes_kept)
    eta_interval = D.inv()
    n0, n1, n2 = (len(k) for k in kept)
    eta1 = sympy.zeros(n0, n1)
    eta1[:, :len(edges_kept)] = eta_interval
    eta2 = sympy.zeros(n1, n2)
    eta2[len(edges_kept):, :] = eta_interval
    zero_h = tuple(sympy.zeros(len(k), 0) for k in kept)
    zero_p = tuple(sympy.zeros(len(k), len(k)) for k in kept)
    return zero_h, zero_p, [None, eta1, eta2]


def hodge(X: ModeComplex, bc: Tuple[str, str] = (RELATIVE, ABSOLUTE), gauge: str = METRIC) -> HodgeData:
    """
    Hodge data of X with the given boundary conditions at t=0 and t=1.

    Relative conditions drop the boundary cells of that circle. The default
    propagator is η = d* G for the rotation-invariant cell metric. The axial
    gauge, the interval homotopy times the identity on the circle, is
    available when the interval factor is acyclic (one relative and one
    absolute end).

    Raises:
        StructureError: On an unknown gauge, or the axial gauge without an
            acyclic interval factor
    """
    if gauge not in (METRIC, AXIAL):
        raise StructureError(f"Unknown gauge '{gauge}' (expected '{METRIC}' or '{AXIAL}')")
    if X.is_closed:
        bc = (ABSOLUTE, ABSOLUTE)
    kept = _kept_indices(X, bc)
    d, metric = _restrict(X, kept)
    acyclic_interval = X.kind == PRIMAL and set(bc) == {RELATIVE, ABSOLUTE}
    if gauge == AXIAL:
        if not acyclic_interval:
            raise StructureError(f"The axial gauge needs one relative and one absolute end, got {bc}")
        harmonics, projectors, eta = _axial_hodge(X, kept, d)
    else:
        harmonics, projectors, eta = _metric_hodge(d, metric)

    hd = HodgeData(X, tuple(bc), kept, tuple(d), tuple(harmonics), tuple(projectors), tuple(eta), gauge)
    hd.checks = hodge_residuals(hd)
    logger.info(
        f"Hodge data | kind={X.kind} | K={X.segments} | n={X.mode} | bc={bc} "
        f"| harmonics={hd.harmonic_dims()} | gauge={gauge}"
    )
    return hd


def hodge_residuals(hd: HodgeData) -> Dict[str, List[sympy.Matrix]]:
    """Residuals of dη + ηd = 1 − P, L_v η = η L_v and L_v χ = 0 (rotation)."""
    d, eta, P = hd.d, hd.eta, hd.projector
    top = len(hd.kept) - 1
    homotopy = []
    for p in range(top + 1):
        size = len(hd.kept[p])
        total = sympy.zeros(size, size)
        if p > 0:
            total += d[p - 1] * eta[p]
        if p < top:
            total += eta[p + 1] * d[p]
        homotopy.append((total - (sympy.eye(size) - P[p])).applyfunc(sympy.simplify))
    checks = {'homotopy': homotopy}
    if hd.complex.mode is not None and hd.complex.kind in (PRIMAL, CLOSED):
        v = contraction(ROTATION, hd.complex)
        lie = [v.lie[p].extract(list(hd.kept[p]), list(hd.kept[p])) for p in range(top + 1)]
        checks['lie_eta'] = [
            (lie[p - 1] * eta[p] - eta[p] * lie[p]).applyfunc(sympy.simplify) for p in range(1, top + 1)
        ]
        checks['lie_harmonics'] = [
            (lie[p] * hd.harmonics[p]).applyfunc(sympy.simplify) for p in range(top + 1)
        ]
    return checks
