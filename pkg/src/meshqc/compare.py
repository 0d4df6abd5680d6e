"""Reference-vs-scanned metric comparison and pass/fail verdicts.

The relative difference between two values uses the larger magnitude as
denominator, ``|a - b| / max(|a|, |b|, 1e-9)``: it is symmetric, always
lands in [0, 1] for non-negative metrics, and defines the both-zero case
as 0 (a flat part legitimately has a zero extent on one axis). The
threshold test is inclusive: a difference exactly at the threshold
passes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidThresholdError
from .metrics import PARAMETER_NAMES, MacroMetrics

DEFAULT_THRESHOLD = 0.25

_ZERO_GUARD = 1e-9


def relative_difference(a: float, b: float) -> float:
    """Symmetric relative difference of two finite scalars."""
    a = float(a)
    b = float(b)
    return abs(a - b) / max(abs(a), abs(b), _ZERO_GUARD)


@dataclass(frozen=True)
class ParameterComparison:
    parameter: str
    bim_value: float
    scanned_value: float
    relative_difference: float
    passed: bool

    def to_record(self) -> dict:
        return {
            "parameter": self.parameter,
            "bim": self.bim_value,
            "scanned": self.scanned_value,
            "relative_difference": self.relative_difference,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class ComparisonReport:
    threshold: float
    parameters: tuple[ParameterComparison, ...]
    overall_pass: bool
    max_difference: float
    worst_parameter: str

    def to_record(self) -> dict:
        return {
            "threshold": self.threshold,
            "overall_pass": self.overall_pass,
            "max_difference": self.max_difference,
            "worst_parameter": self.worst_parameter,
            "parameters": [p.to_record() for p in self.parameters],
        }


def check_threshold(threshold: float) -> float:
    threshold = float(threshold)
    if not (math.isfinite(threshold) and 0.0 < threshold <= 1.0):
        raise InvalidThresholdError(f"threshold must be in (0, 1], got {threshold}")
    return threshold


def compare_metrics(
    bim: MacroMetrics, scanned: MacroMetrics, threshold: float = DEFAULT_THRESHOLD
) -> ComparisonReport:
    """Compare all seven parameters; a part passes when every one does."""
    threshold = check_threshold(threshold)
    entries = []
    for name, ref, got in zip(PARAMETER_NAMES, bim.parameter_values(), scanned.parameter_values()):
        diff = relative_difference(ref, got)
        entries.append(ParameterComparison(name, ref, got, diff, diff <= threshold))
    worst = max(entries, key=lambda e: e.relative_difference)
    return ComparisonReport(
        threshold=threshold,
        parameters=tuple(entries),
        overall_pass=all(e.passed for e in entries),
        max_difference=worst.relative_difference,
        worst_parameter=worst.parameter,
    )
