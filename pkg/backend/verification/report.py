"""
Structured verification reports.

A Report is an ordered list of CheckEntry rows. Emission is deterministic:
the human table is rendered with pandas, the machine document is JSON with
a fixed key order. Wall times are measured but only emitted on request, so
two runs of the same input produce byte-identical output.
"""

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Union

import pandas as pd

from .algebra import GradedPoly

logger = logging.getLogger(__name__)

HUMAN_COLUMNS = ['check', 'model', 'status', 'residual', 'anchor']


class Status(str, Enum):
    PASS = 'pass'
    FAIL = 'fail'
    SKIPPED = 'skipped'


@dataclass
class CheckEntry:
    """One verification outcome."""
    check_id: str
    model_id: str
    status: Status
    residual: str = ''
    anchor: str = ''
    wall_time: float = 0.0
    details: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == Status.PASS

    def to_dict(self, include_timing: bool = False) -> Dict[str, object]:
        data: Dict[str, object] = {
            'check_id': self.check_id,
            'model_id': self.model_id,
            'status': self.status.value,
            'residual': self.residual,
            'anchor': self.anchor,
            'details': {k: self.details[k] for k in sorted(self.details)},
        }
        if include_timing:
            data['wall_time'] = round(self.wall_time, 6)
        return data


Residual = Union[GradedPoly, Sequence[GradedPoly], None]


def _render_residual(residual: Residual) -> str:
    if residual is None:
        return ''
    if isinstance(residual, GradedPoly):
        return '' if residual.is_zero() else residual.render()
    parts = [r.render() for r in residual if not r.is_zero()]
    return ' ; '.join(parts)


def entry_from_residual(check_id: str, model_id: str, residual: Residual, anchor: str = '',
                        details: Optional[Dict[str, str]] = None) -> CheckEntry:
    """Build a pass/fail entry: pass iff every residual polynomial is exactly zero."""
    rendered = _render_residual(residual)
    status = Status.FAIL if rendered else Status.PASS
    entry = CheckEntry(check_id, model_id, status, rendered, anchor, details=dict(details or {}))
    logger.info(f"Check finished | check={check_id} | model={model_id} | status={status.value}")
    return entry


def skipped(check_id: str, model_id: str, reason: str, anchor: str = '') -> CheckEntry:
    logger.info(f"Check skipped | check={check_id} | model={model_id} | reason={reason}")
    return CheckEntry(check_id, model_id, Status.SKIPPED, '', anchor, details={'reason': reason})


class Report:
    """Ordered collection of check entries with deterministic emission."""

    def __init__(self, entries: Optional[Iterable[CheckEntry]] = None):
        self.entries: List[CheckEntry] = list(entries or [])

    def __iter__(self) -> Iterator[CheckEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def add(self, entry: CheckEntry) -> CheckEntry:
        self.entries.append(entry)
        return entry

    def extend(self, entries: Iterable[CheckEntry]) -> None:
        for entry in entries:
            self.add(entry)

    @contextmanager
    def timed(self) -> Iterator[List[CheckEntry]]:
        """Collect entries produced inside the block and stamp their wall time."""
        bucket: List[CheckEntry] = []
        start = time.perf_counter()
        yield bucket
        elapsed = time.perf_counter() - start
        for entry in bucket:
            entry.wall_time = elapsed / max(len(bucket), 1)
            self.add(entry)

    def counts(self) -> Dict[str, int]:
        counts = {s.value: 0 for s in Status}
        for entry in self.entries:
            counts[entry.status.value] += 1
        return counts

    @property
    def failed(self) -> List[CheckEntry]:
        return [e for e in self.entries if e.status == Status.FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def find(self, check_id: str) -> List[CheckEntry]:
        return [e for e in self.entries if e.check_id == check_id]

    def to_dataframe(self) -> pd.DataFrame:
        rows = [
            {
                'check': e.check_id,
                'model': e.model_id,
                'status': e.status.value,
                'residual': e.residual or '-',
                'anchor': e.anchor,
            }
            for e in self.entries
        ]
        return pd.DataFrame(rows, columns=HUMAN_COLUMNS)

    def to_dict(self, include_timing: bool = False) -> Dict[str, object]:
        counts = self.counts()
        return {
            'summary': {
                'total': len(self.entries),
                'pass': counts['pass'],
                'fail': counts['fail'],
                'skipped': counts['skipped'],
                'exit_status': self.exit_code,
            },
            'entries': [e.to_dict(include_timing) for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> 'Report':
        entries = []
        for item in data.get('entries', []):
            entries.append(CheckEntry(
                check_id=item['check_id'],
                model_id=item['model_id'],
                status=Status(item['status']),
                residual=item.get('residual', ''),
                anchor=item.get('anchor', ''),
                wall_time=item.get('wall_time', 0.0),
                details=dict(item.get('details', {})),
            ))
        return cls(entries)


def emit(report: Report, fmt: str = 'human', include_timing: bool = False) -> str:
    """
    Render a report.

    Args:
        report: The report to render
        fmt: 'human' for an aligned table, 'json' for the canonical document
        include_timing: Add wall times (breaks byte-identical reruns)

    Returns:
        The rendered text, newline-terminated
    """
    if fmt == 'json':
        return json.dumps(report.to_dict(include_timing), indent=2, ensure_ascii=False) + '\n'
    if fmt != 'human':
        raise ValueError(f"Unknown report format '{fmt}'")

    if not report.entries:
        return '  '.join(HUMAN_COLUMNS) + '\n'
    frame = report.to_dataframe()
    if include_timing:
        frame['wall_time'] = [f"{e.wall_time:.4f}" for e in report.entries]
    counts = report.counts()
    footer = f"pass={counts['pass']} fail={counts['fail']} skipped={counts['skipped']}"
    return frame.to_string(index=False) + '\n' + footer + '\n'
