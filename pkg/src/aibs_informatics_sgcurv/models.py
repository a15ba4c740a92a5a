"""Serializable report payloads.

Every payload is a :class:`SchemaModel` of JSON-friendly values: floats rounded to
``REPORT_SIGNIFICANT_DIGITS`` significant digits, matrices as nested lists and per-edge maps
keyed by ``"i-j"`` labels. ``from_dict(to_dict(x)) == x`` holds for every payload built with
the ``from_*`` constructors.
"""

__all__ = [
    "INFINITY",
    "ReportModel",
    "round_sig",
    "edge_label",
    "parse_edge_label",
    "extended_real",
    "ConsensusModel",
    "RepellingSummary",
    "CurvatureSummary",
    "BoundReportModel",
    "SweepRow",
    "SweepTable",
    "ReportEnvelope",
]

import hashlib
import math
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
from aibs_informatics_core.models.base import ListField, custom_field
from aibs_informatics_core.models.base.model import SchemaModel

from aibs_informatics_sgcurv._version import __version__
from aibs_informatics_sgcurv.bounds import BoundReport
from aibs_informatics_sgcurv.constants.numerics import (
    REPORT_SCHEMA_VERSION,
    REPORT_SIGNIFICANT_DIGITS,
)
from aibs_informatics_sgcurv.curvature import CurvatureReport
from aibs_informatics_sgcurv.repelling import ConsensusIndex, RepellingAnalysis
from aibs_informatics_sgcurv.signed_graph import Edge

INFINITY = "infinity"


def round_sig(value: float, digits: int = REPORT_SIGNIFICANT_DIGITS) -> float:
    """Round to ``digits`` significant digits; non-finite values pass through."""
    value = float(value)
    if not math.isfinite(value) or value == 0.0:
        return value
    return float(f"{value:.{digits}g}")


def _round_vector(values: Union[np.ndarray, Sequence[float]]) -> List[float]:
    return [round_sig(v) for v in np.asarray(values, dtype=float).ravel()]


def _round_matrix(values: np.ndarray) -> List[List[float]]:
    return [_round_vector(row) for row in np.asarray(values, dtype=float)]


def edge_label(edge: Edge) -> str:
    return f"{edge[0]}-{edge[1]}"


def parse_edge_label(label: str) -> Edge:
    u, v = label.split("-")
    return int(u), int(v)


def _edge_map(values: Mapping[Edge, float]) -> Dict[str, float]:
    return {edge_label(e): round_sig(v) for e, v in sorted(values.items())}


def extended_real(value: Optional[float]) -> Union[float, str]:
    """``None`` (unbounded) is written as the string ``"infinity"``."""
    return INFINITY if value is None else round_sig(value)


# --------------------------------------------------------------------------
# Payloads
# --------------------------------------------------------------------------


@dataclass
class ReportModel(SchemaModel):
    """Payload whose unset optional fields are written as explicit nulls."""

    def to_dict(self, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        data = super().to_dict(*args, **kwargs)
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, ReportModel):
                data[f.name] = value.to_dict(*args, **kwargs)
            elif value is None:
                data[f.name] = None
        return data


@dataclass
class ConsensusModel(ReportModel):
    unbounded: bool = custom_field()
    value: Optional[float] = custom_field(default=None)
    bracket: Optional[List[float]] = field(default=None)
    lambda2_curve: List[List[float]] = field(default_factory=list)
    upper_bounds: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_consensus(
        cls, consensus: ConsensusIndex, upper_bounds: Optional[Mapping[Edge, float]] = None
    ) -> "ConsensusModel":
        return cls(
            value=None if consensus.value is None else round_sig(consensus.value),
            unbounded=consensus.unbounded,
            bracket=_round_vector(consensus.bracket) if consensus.bracket else None,
            lambda2_curve=[_round_vector(pair) for pair in consensus.lambda2_at],
            upper_bounds=_edge_map(upper_bounds or {}),
        )


@dataclass
class RepellingSummary(ReportModel):
    epsilon: float = custom_field()
    consensus: ConsensusModel = custom_field(mm_field=ConsensusModel.as_mm_field())
    lambda2: float = custom_field()
    graph_resistance: float = custom_field()
    eigenvalues: List[float] = custom_field()
    omega: List[List[float]] = custom_field()
    pinv: List[List[float]] = custom_field()
    circumradius: Optional[float] = custom_field(default=None)
    circumcenter: Optional[List[float]] = custom_field(default=None)

    @classmethod
    def from_analysis(cls, analysis: RepellingAnalysis) -> "RepellingSummary":
        consensus = analysis.consensus or ConsensusIndex(value=None)
        simplex = analysis.simplex
        return cls(
            epsilon=round_sig(analysis.epsilon),
            consensus=ConsensusModel.from_consensus(consensus),
            lambda2=round_sig(analysis.lambda2),
            graph_resistance=round_sig(analysis.graph_resistance),
            eigenvalues=_round_vector(analysis.spectrum.eigenvalues),
            omega=_round_matrix(analysis.omega),
            pinv=_round_matrix(analysis.pinv),
            circumradius=None if simplex is None else round_sig(simplex.circumradius),
            circumcenter=(
                None if simplex is None else _round_vector(simplex.barycentric_circumcenter)
            ),
        )


@dataclass
class CurvatureSummary(ReportModel):
    epsilon: float = custom_field()
    tau: List[float] = custom_field()
    phi: float = custom_field()
    lambda_corr: Dict[str, float] = custom_field()
    theta: Dict[str, float] = custom_field()
    theta_semigroup: Dict[str, float] = custom_field()
    x_eps: float = custom_field()
    n_eps: float = custom_field()
    extremal_bounds_ok: Optional[bool] = field(default=None)
    kappa_lly: Dict[str, float] = field(default_factory=dict)
    lly_converged: Dict[str, bool] = field(default_factory=dict)

    @classmethod
    def from_report(cls, report: CurvatureReport) -> "CurvatureSummary":
        return cls(
            epsilon=round_sig(report.epsilon),
            tau=_round_vector(report.tau),
            phi=round_sig(report.phi),
            lambda_corr=_edge_map(report.lambda_corr),
            theta=_edge_map(report.theta),
            theta_semigroup=_edge_map(report.theta_semigroup),
            x_eps=round_sig(report.x_eps),
            n_eps=round_sig(report.n_eps),
            extremal_bounds_ok=report.extremal.bounds_ok,
            kappa_lly=_edge_map(report.kappa_lly),
            lly_converged={
                edge_label(e): bool(v) for e, v in sorted(report.lly_converged.items())
            },
        )


@dataclass
class BoundReportModel(ReportModel):
    name: str = custom_field()
    applicability: str = custom_field()
    lhs: Optional[float] = field(default=None)
    rhs: Optional[float] = field(default=None)
    holds: Optional[bool] = field(default=None)
    slack: Optional[float] = field(default=None)
    reason: Optional[str] = field(default=None)
    strict: bool = field(default=False)
    subject: Optional[str] = field(default=None)
    source: Optional[str] = field(default=None)

    @classmethod
    def from_report(cls, report: BoundReport, source: Optional[str] = None) -> "BoundReportModel":
        def _opt(x: Optional[float]) -> Optional[float]:
            return None if x is None else round_sig(x)

        return cls(
            name=str(report.name),
            applicability=str(report.applicability),
            lhs=_opt(report.lhs),
            rhs=_opt(report.rhs),
            holds=report.holds,
            slack=_opt(report.slack),
            reason=report.reason,
            strict=report.strict,
            subject=report.subject,
            source=source,
        )


@dataclass
class SweepRow(ReportModel):
    epsilon: float = custom_field()
    lambda2: float = custom_field()
    graph_resistance: float = custom_field()
    tau_min: float = custom_field()
    tau_max: float = custom_field()
    theta_min: float = custom_field()
    theta_max: float = custom_field()

    CSV_COLUMNS = (
        "epsilon",
        "lambda2",
        "graph_resistance",
        "tau_min",
        "tau_max",
        "theta_min",
        "theta_max",
    )

    @classmethod
    def from_report(cls, analysis: RepellingAnalysis, report: CurvatureReport) -> "SweepRow":
        theta = list(report.theta.values()) or [0.0]
        return cls(
            epsilon=round_sig(analysis.epsilon),
            lambda2=round_sig(analysis.lambda2),
            graph_resistance=round_sig(analysis.graph_resistance),
            tau_min=round_sig(float(np.min(report.tau))),
            tau_max=round_sig(float(np.max(report.tau))),
            theta_min=round_sig(min(theta)),
            theta_max=round_sig(max(theta)),
        )


@dataclass
class SweepTable(ReportModel):
    rows: List[SweepRow] = custom_field(mm_field=ListField(SweepRow.as_mm_field()))
    monotone: bool = custom_field()


@dataclass
class ReportEnvelope(ReportModel):
    """Command output wrapper tying a payload to the exact input it was computed from."""

    command: str = custom_field()
    payload: Dict[str, Any] = custom_field()
    input_digest: Optional[str] = custom_field(default=None)
    tool_version: str = field(default=__version__)
    schema_version: str = field(default=REPORT_SCHEMA_VERSION)

    @staticmethod
    def digest(data: bytes) -> str:
        return hashlib.sha256(data).hexdigest()
