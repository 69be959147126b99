"""
Verification orchestration.

VerificationService runs the requested checks of a model file or of the
builtin BF cylinder family and turns every outcome into report entries.
Algebra modules never see settings or the database; this layer reads the
WORKBENCH defaults and persists finished runs.
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from django.conf import settings
from django.db import transaction

from .algebra import U
from .bf_theory import (
    BfModel, bf_closed, bf_cylinder, check_tangency, equivariant_residuals,
    lie_S_L_boundary, proportionality,
)
from .boundary import (
    boundary_action_residual, boundary_one_form_checks, boundary_T_checks,
    kernel_and_project, modified_cme_residuals, verify_summary,
)
from .discrete import AXIAL, ROTATION, hodge
from .exceptions import DegenerateDegreeError, StructureError, UnsupportedModelError
from .master_eq import (
    BvModel, check_action_flow, check_cme, check_equivariant, check_qme, check_weak_bv, lemma_chain,
)
from .models import CheckRecord, VerificationRun
from .parser import CHECKS, BuiltModel, ModelSpecFile, build, parse
from .properties import property_suite
from .quantization import effective_action, split, split_identities, verify_quantum
from .report import CheckEntry, Report, Status, entry_from_residual, skipped
from .symplectic import bv_bracket, bv_laplacian, divergence, half, hamiltonian_vf

logger = logging.getLogger(__name__)

PRESET_DIR = Path(__file__).resolve().parent / 'presets'
BF_CYLINDER = 'bf-cylinder'

SIGN_TABLE = [
    ('delta', 'δ = Σ_v δv ∂^L_v', 'odd derivation, δ² = 0'),
    ('contraction', 'ι_X = Σ_v X^v ∂^L_{δv}', 'parity |X| + 1'),
    ('lie', 'L_X = ι_X δ + (−1)^{|X|} δ ι_X', 'graded commutator [ι_X, δ]'),
    ('omega', 'ω = Σ_i δx_i δθ_i', 'base first, momentum second'),
    ('hamiltonian', 'ι_{X_f} ω = δf', 'defines X_f'),
    ('bracket', '(f, g) = (−1)^{|f||ω|} X_f(g)', 'odd for k = 0, even for k = 1'),
    ('laplacian', 'Δ = Σ_i ∂_{x_i} ∂_{θ_i}', 'θ-derivative applied first'),
    ('divergence', 'div X = Σ_v (−1)^{|v|(|X|+1)} ∂_v X^v', 'Δf = ½ div X_f'),
    ('T', 'T = ½(S,S) − iħΔS', 'weak models: ½ι_Qι_Qω'),
    ('boundary_one_form', 'ᾱ = ι_Qω − δS', 'ω̄ = δᾱ = −L_Qω'),
    ('omega_hat', 'Ω² = iħ T̂∂', 'both sides carry one iħ from p → iħ∂_q'),
    ('S_L', 'S_L = Σ (−1)^{p+1} θ·(L_v 𝐀) over 𝐀-components of form degree p', 'T = −u S_L'),
    ('propagator', 'dη + ηd = 1 − P', 'metric gauge η = d*G unless the product gauge is requested'),
    ('exponential', 'P_v(h) = iħ ∂_v h − (−1)^{|v||h|} h ∂_v S^f', 'iħ∂_v(h e) / e for e = exp((i/ħ)S^f)'),
]


class VerificationService:
    """
    Service class for running verification checks.

    Every public method returns a Report; verification failures are fail
    entries, unsupported combinations are skipped entries, and only inputs
    that cannot be evaluated at all raise WorkbenchError.
    """

    # ------------------------------------------------------------------
    # Model files
    # ------------------------------------------------------------------

    @staticmethod
    def expand_checks(checks: Optional[Iterable[str]]) -> List[str]:
        """Resolve 'all' and drop duplicates, keeping the declared order."""
        requested = list(checks or ['all'])
        expanded: List[str] = []
        for check in requested:
            if check not in CHECKS:
                raise ValueError(f"Unknown check '{check}'")
            names = [c for c in CHECKS if c != 'all'] if check == 'all' else [check]
            for name in names:
                if name not in expanded:
                    expanded.append(name)
        return expanded

    @classmethod
    def run(cls, spec: Union[ModelSpecFile, str], checks: Optional[Iterable[str]] = None) -> Report:
        """
        Execute checks on a model file.

        Args:
            spec: Parsed file or its source text
            checks: Check names; defaults to the file's own check list, then 'all'

        Returns:
            Report with entries in the order the checks were requested
        """
        if isinstance(spec, str):
            spec = parse(spec)
        built = build(spec)
        names = cls.expand_checks(checks or spec.checks)
        report = Report()
        boundary_cache: Dict[str, object] = {}
        for name in names:
            with report.timed() as bucket:
                bucket.extend(cls._file_check(name, built, boundary_cache))
        logger.info(
            f"Model run finished | model={spec.model_id} | checks={','.join(names)} "
            f"| exit_status={report.exit_code}"
        )
        return report

    @classmethod
    def _file_check(cls, name: str, built: BuiltModel, cache: Dict[str, object]) -> List[CheckEntry]:
        m = built.bv
        if name == 'cme':
            return [check_cme(m)]
        if name == 'qme':
            return [check_qme(m)]
        if name == 'weak_bv':
            return [check_weak_bv(m)]
        if name == 'lemma_chain':
            return [lemma_chain(m)]
        if name == 'action_flow':
            return [check_action_flow(m)]
        if name == 'laplacian_divergence':
            return [cls.laplacian_divergence(m)]
        if name in ('boundary', 'summary'):
            try:
                if 'bm' not in cache:
                    cache['bm'] = kernel_and_project(m)
            except (UnsupportedModelError, StructureError, DegenerateDegreeError) as exc:
                return [skipped(name, m.model_id, str(exc))]
            bm = cache['bm']
            return cls.boundary_entries(m, bm) if name == 'boundary' else [verify_summary(bm)]
        if name == 'quantum':
            return [skipped('quantum', m.model_id,
                            'the quantum layer needs the cell-model boundary; use the bf-cylinder builtin')]
        if name == 'equivariant':
            if built.spec.equivariant is None:
                return [skipped('equivariant', m.model_id, 'no equivariant declaration in the model file')]
            return [check_equivariant(m, built.spec.equivariant)]
        if name == 'split':
            if built.split is None:
                return [skipped('split', m.model_id, 'no polarize declarations in the model file')]
            return split_identities(built.split)
        raise ValueError(f"Unknown check '{name}'")

    @staticmethod
    def laplacian_divergence(m: BvModel) -> CheckEntry:
        if m.k != 0:
            return skipped('laplacian_divergence', m.model_id, f"Δ needs k = 0 (model has k = {m.k})")
        residual = bv_laplacian(m.S, m.D) - half(divergence(hamiltonian_vf(m.S, m.D), m.D))
        return entry_from_residual('laplacian_divergence', m.model_id, residual, 'Δf = ½ div X_f')

    @staticmethod
    def boundary_entries(m: BvModel, bm) -> List[CheckEntry]:
        """Construction checks of the boundary reduction."""
        entries = [
            entry_from_residual('boundary_one_form', m.model_id, boundary_one_form_checks(m),
                                'ω̄ = −L_Qω, L_Qω̄ = 0'),
            entry_from_residual('boundary_action', m.model_id,
                                boundary_action_residual(m, bm.S_bar), 'δS̄ = ι_Q ω̄'),
            entry_from_residual('boundary_T', m.model_id, boundary_T_checks(m, bm.S_bar, bm.T_bar),
                                '½L_QS̄ = T̄, ½ι_[Q,Q]ω̄ = −δT̄'),
            entry_from_residual('projectable', m.model_id, bm.checks.get('projectable', []),
                                'Q projects along ker ω̄',
                                details={'boundary': ','.join(bm.boundary_names())}),
            entry_from_residual('basic', m.model_id, bm.checks.get('basic', []),
                                'S̄, T̄, ᾱ basic'),
        ]
        if m.T.is_zero():
            entries.append(entry_from_residual('mcme', m.model_id, modified_cme_residuals(bm),
                                               'L_QS = π*(2S∂ − ι_{Q∂}α∂)'))
        else:
            entries.append(skipped('mcme', m.model_id, 'the modified CME is stated for T = 0'))
        return entries

    # ------------------------------------------------------------------
    # BF cylinder family
    # ------------------------------------------------------------------

    @classmethod
    def run_bf_cylinder(cls, segments: int = 2, modes: int = 1, vector: str = ROTATION,
                        order: Optional[int] = None, quantize: bool = False) -> Report:
        """
        Run the BF cylinder pipeline on the grid K = 1..segments, |n| ≤ modes.

        Args:
            segments: Largest number of t-segments
            modes: Largest |n| of the Fourier modes
            vector: 'rotation' (tangent) or 'axial' (transversal)
            order: Truncation order of the effective action in u
            quantize: Also run the polarisation and quantum checks

        Returns:
            The report; for the axial field every boundary-dependent entry is skipped
        """
        if vector not in (ROTATION, AXIAL):
            raise ValueError(f"Unknown vector field '{vector}'")
        if segments < 1 or modes < 0:
            raise ValueError(f"Invalid grid: segments={segments}, modes={modes}")
        order = order if order is not None else settings.WORKBENCH.get('DEFAULT_ORDER', 3)

        report = Report()
        for K in range(1, segments + 1):
            for n in range(-modes, modes + 1):
                with report.timed() as bucket:
                    bucket.extend(cls._bf_point(K, n, vector, order, quantize))
        logger.info(
            f"BF cylinder run finished | segments={segments} | modes={modes} | vector={vector} "
            f"| order={order} | quantize={quantize} | exit_status={report.exit_code}"
        )
        return report

    @classmethod
    def _bf_point(cls, K: int, n: int, vector: str, order: int, quantize: bool) -> List[CheckEntry]:
        m = bf_cylinder(K, n, vector)
        entries = list(check_tangency(m))
        residuals = equivariant_residuals(m)
        entries.append(entry_from_residual(
            'equivariant', m.model_id,
            [residuals['T_equals_minus_u_S_L'], residuals['bracket_S_iota_S_L'], residuals['bracket_S_hat']],
            'T = −u S_L, (S_ι, S_L) = 0, (Ŝ,Ŝ) = −2u S_L'))
        if m.equivariant:
            value, outside = lie_S_L_boundary(m)
            entries.append(CheckEntry(
                'lie_S_L_boundary', m.model_id, Status.FAIL if outside else Status.PASS,
                anchor='Q̂(S_L) is a boundary term',
                details={'outside_boundary_collar': ','.join(sorted(m.names(outside))),
                         'support': ','.join(sorted(m.names(value.field_support())))},
            ))
        entries.append(cls.hodge_entry(m))

        downstream = ['summary', 'mcme'] + (['quantum'] if quantize else [])
        if vector == AXIAL:
            reason = 'the axial field is transversal to the boundary circles'
            entries.extend(skipped(name, m.model_id, reason) for name in downstream)
            return entries

        try:
            bm = kernel_and_project(m.bv)
        except (UnsupportedModelError, StructureError, DegenerateDegreeError) as exc:
            entries.extend(skipped(name, m.model_id, str(exc)) for name in downstream)
            return entries
        entries.append(verify_summary(bm))

        plain = bf_cylinder(K, n, None)
        try:
            plain_bm = kernel_and_project(plain.bv)
            entries.append(entry_from_residual(
                'mcme', plain.model_id, modified_cme_residuals(plain_bm),
                'L_QS = π*(2S∂ − ι_{Q∂}α∂), ½ι_Qι_Qω = π*S∂'))
        except (UnsupportedModelError, StructureError, DegenerateDegreeError) as exc:
            entries.append(skipped('mcme', plain.model_id, str(exc)))

        if quantize:
            entries.extend(cls.quantum_entries(m, order))
        return entries

    @staticmethod
    def hodge_entry(m: BfModel) -> CheckEntry:
        hd = hodge(m.complex)
        failing = sorted(name for name, ms in hd.checks.items() if not all(x.is_zero_matrix for x in ms))
        return CheckEntry(
            'hodge', m.model_id, Status.PASS if not failing else Status.FAIL,
            residual=','.join(failing),
            anchor='dη + ηd = 1 − P, L_vη = ηL_v, L_vχ = 0',
            details={'gauge': hd.gauge, 'harmonics': str(hd.harmonic_dims())},
        )

    @staticmethod
    def quantum_entries(m: BfModel, order: int, hd=None) -> List[CheckEntry]:
        """Polarisation, effective action and the quantum checks of one BF model."""
        try:
            sm = split(m)
            hd = hd or hodge(m.complex)
            state = effective_action(sm, hd, order)
        except (UnsupportedModelError, StructureError) as exc:
            return [skipped('quantum', m.model_id, str(exc))]
        entries = [entry_from_residual('polarization', m.model_id, sm.checks['adapted'],
                                       'α∂ = θ_pol + δf')]
        entries.extend(verify_quantum(sm, state))
        entries.extend(split_identities(sm))
        return entries

    # ------------------------------------------------------------------
    # Presets, properties, conventions
    # ------------------------------------------------------------------

    @staticmethod
    def presets() -> List[str]:
        return sorted(p.stem for p in PRESET_DIR.glob('*.bv')) + [BF_CYLINDER]

    @staticmethod
    def preset_source(name: str) -> str:
        path = PRESET_DIR / f"{name}.bv"
        if not path.is_file():
            raise StructureError(f"Unknown preset '{name}'")
        return path.read_text(encoding='utf-8')

    @classmethod
    def run_preset(cls, name: str, checks: Optional[Iterable[str]] = None) -> Report:
        if name == BF_CYLINDER:
            return cls.run_bf_cylinder(quantize=True)
        return cls.run(cls.preset_source(name), checks)

    @staticmethod
    def run_properties(kind: str = 'all', samples: int = 0, seed: Optional[int] = None) -> Report:
        seed = seed if seed is not None else settings.WORKBENCH.get('DEFAULT_SEED', 0)
        return Report(property_suite(kind, samples, seed))

    @staticmethod
    def conventions(K: int = 2, n: int = 1) -> Dict[str, object]:
        """
        The frozen sign table plus two ratios computed live on the closed BF model.

        Returns:
            {'signs': [...], 'ratios': {'T/(u S_L)': ..., '(S_hat,S_hat)/(u S_L)': ...}}
        """
        m = bf_closed(K, n, ROTATION)
        u_S_L = m.S_L.scale(U)
        T_ratio = proportionality(m.bv.T, u_S_L)
        bracket_ratio = proportionality(bv_bracket(m.S_hat, m.S_hat, m.D), u_S_L)
        return {
            'signs': [{'name': a, 'formula': b, 'note': c} for a, b, c in SIGN_TABLE],
            'ratios': {
                'model': m.model_id,
                'T/(u S_L)': str(T_ratio),
                '(S_hat,S_hat)/(u S_L)': str(bracket_ratio),
            },
        }

    # ------------------------------------------------------------------
    # Persistence
    # ------------------------------------------------------------------

    @classmethod
    @transaction.atomic
    def save_run(cls, report: Report, kind: str, model_id: str, source: str = '',
                 parameters: Optional[Dict[str, object]] = None,
                 seed: Optional[int] = None) -> VerificationRun:
        """Persist a finished report with one CheckRecord per entry."""
        counts = report.counts()
        run = VerificationRun.objects.create(
            kind=kind,
            model_id=model_id,
            source=source,
            parameters=parameters or {},
            seed=seed,
            pass_count=counts[Status.PASS.value],
            fail_count=counts[Status.FAIL.value],
            skipped_count=counts[Status.SKIPPED.value],
            report=report.to_dict(),
        )
        CheckRecord.objects.bulk_create([
            CheckRecord(
                run=run,
                position=index,
                check_id=entry.check_id,
                model_id=entry.model_id,
                status=entry.status.value,
                residual=entry.residual,
                anchor=entry.anchor,
                details=entry.details,
                wall_time=entry.wall_time,
            )
            for index, entry in enumerate(report)
        ])
        logger.info(
            f"Run saved | id={run.id} | kind={kind} | model={model_id} "
            f"| pass={run.pass_count} | fail={run.fail_count} | skipped={run.skipped_count}"
        )
        return run

    @staticmethod
    def get_run_summary(run: VerificationRun) -> Dict[str, object]:
        return {
            'id': run.id,
            'kind': run.kind,
            'model_id': run.model_id,
            'created_at': run.created_at.isoformat(),
            'pass': run.pass_count,
            'fail': run.fail_count,
            'skipped': run.skipped_count,
            'passed': run.passed,
        }
