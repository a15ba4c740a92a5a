"""``sgcurv`` command line.

Every command reads the edge-list format and writes a JSON :class:`ReportEnvelope` (or a
CSV table) to stdout or ``--out``. Exit codes: 0 on success, 2 when a hypothesis of the
requested operation is not met, 1 on any other error.
"""

from __future__ import annotations

__all__ = [
    "EXIT_OK",
    "EXIT_ERROR",
    "EXIT_HYPOTHESIS",
    "Command",
    "SgcurvCli",
    "build_parser",
    "main",
]

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from multiprocessing.pool import ThreadPool
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from aibs_informatics_core.collections import StrEnum
from aibs_informatics_core.utils.logging import LoggingMixin, get_logger
from aibs_informatics_core.utils.multiprocessing import parallel_starmap

from aibs_informatics_sgcurv._version import __version__
from aibs_informatics_sgcurv.bounds import check_all_bounds, simulate_repelling_dynamics
from aibs_informatics_sgcurv.config import SgcurvConfig
from aibs_informatics_sgcurv.constants.numerics import CONSENSUS_BISECTION_TOL
from aibs_informatics_sgcurv.curvature import curvature_report
from aibs_informatics_sgcurv.exceptions import (
    GraphParseError,
    HypothesisError,
    RepellingRangeError,
    SignedGraphError,
)
from aibs_informatics_sgcurv.models import (
    BoundReportModel,
    ConsensusModel,
    CurvatureSummary,
    ReportEnvelope,
    RepellingSummary,
    SweepRow,
    SweepTable,
    extended_real,
    round_sig,
)
from aibs_informatics_sgcurv.repelling import (
    ConsensusIndex,
    consensus_index,
    consensus_upper_bound,
    monotonicity_check,
    repelling_cost_matrix,
    repelling_laplacian,
)
from aibs_informatics_sgcurv.signed_graph import SignedGraph, parse_edge_list
from aibs_informatics_sgcurv.spectral import restricted_spectrum
from aibs_informatics_sgcurv.verification import ReferenceVerifier, VerificationTag

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_HYPOTHESIS = 2

EDGE_LIST_SUFFIX = ".sg"


class Command(StrEnum):
    ANALYZE = "analyze"
    SWEEP = "sweep"
    CONSENSUS = "consensus"
    CURVATURE = "curvature"
    BOUNDS = "bounds"
    DYNAMICS = "dynamics"
    VERIFY_PAPER = "verify-paper"


class OutputFormat(StrEnum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


def _read_graph(path: Path) -> Tuple[SignedGraph, bytes]:
    data = path.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_number = data[: e.start].count(b"\n") + 1
        raise GraphParseError(f"invalid UTF-8 at byte {e.start}", line_number) from e
    return parse_edge_list(text), data


def _require_admissible(consensus: ConsensusIndex, eps: float) -> None:
    if not consensus.admits(eps):
        msg = f"epsilon exceeds consensus index {consensus.as_float():.6g}"
        logger.error(msg)
        raise RepellingRangeError(msg, epsilon=eps, consensus_index=consensus.value)


def _sweep_row(g: SignedGraph, eps: float, consensus: ConsensusIndex) -> SweepRow:
    analysis = repelling_cost_matrix(g, eps, consensus=consensus)
    return SweepRow.from_report(analysis, curvature_report(analysis, with_lly=False))


def _bounds_for_file(path: Path, eps: float, tol: float) -> Tuple[List[BoundReportModel], bytes]:
    g, data = _read_graph(path)
    consensus = consensus_index(g, tol=tol)
    reports = check_all_bounds(g, eps, consensus=consensus)
    return [BoundReportModel.from_report(r, source=path.name) for r in reports], data


def dump_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


@dataclass
class SgcurvCli(LoggingMixin):
    """Command handlers; each returns the rendered output text."""

    args: argparse.Namespace
    config: SgcurvConfig = field(default_factory=SgcurvConfig.from_env)
    exit_code: int = field(default=EXIT_OK, init=False)

    def run(self) -> str:
        handlers = {
            Command.ANALYZE: self.analyze,
            Command.SWEEP: self.sweep,
            Command.CONSENSUS: self.consensus,
            Command.CURVATURE: self.curvature,
            Command.BOUNDS: self.bounds,
            Command.DYNAMICS: self.dynamics,
            Command.VERIFY_PAPER: self.verify_paper,
        }
        return handlers[Command(self.args.command)]()

    # ----------------------------------------------------------------------
    # Helpers
    # ----------------------------------------------------------------------

    def _envelope(self, payload: Dict[str, Any], data: Optional[bytes]) -> str:
        envelope = ReportEnvelope(
            command=str(self.args.command),
            input_digest=ReportEnvelope.digest(data) if data is not None else None,
            payload=payload,
        )
        return dump_json(envelope.to_dict())

    def _load(self) -> Tuple[SignedGraph, bytes, ConsensusIndex]:
        g, data = _read_graph(Path(self.args.input))
        return g, data, consensus_index(g, tol=self.args.tol)

    # ----------------------------------------------------------------------
    # Commands
    # ----------------------------------------------------------------------

    def analyze(self) -> str:
        g, data, consensus = self._load()
        eps = self.args.epsilon
        payload: Dict[str, Any] = {"consensus_index": extended_real(consensus.value)}
        if not consensus.admits(eps) and self.args.force:
            # beyond ε₀ only the (indefinite) spectrum is meaningful
            self.logger.warning(f"Forcing ε = {eps} past the consensus index")
            spectrum = restricted_spectrum(repelling_laplacian(g, eps))
            payload.update(
                epsilon=round_sig(eps),
                forced=True,
                restricted_eigenvalues=[round_sig(x) for x in spectrum],
            )
            return self._envelope(payload, data)

        _require_admissible(consensus, eps)
        analysis = repelling_cost_matrix(g, eps, consensus=consensus, with_simplex=True)
        report = curvature_report(analysis)
        payload.update(
            analysis=RepellingSummary.from_analysis(analysis).to_dict(),
            curvature=CurvatureSummary.from_report(report).to_dict(),
        )
        self.logger.info(f"Analyzed {self.args.input} at ε = {eps}")
        return self._envelope(payload, data)

    def sweep(self) -> str:
        g, data, consensus = self._load()
        steps, lo, hi = self.args.steps, self.args.eps_from, self.args.eps_to
        if steps < 1 or (steps > 1 and hi <= lo):
            raise HypothesisError(
                f"Sweep needs --steps >= 1 and --from < --to, got {steps} points on [{lo}, {hi}]",
                reason="bad-grid",
            )
        grid = [float(e) for e in np.linspace(lo, hi, steps)]
        _require_admissible(consensus, grid[-1])
        rows: List[SweepRow] = parallel_starmap(
            _sweep_row, [(g, eps) for eps in grid], {"consensus": consensus}, ThreadPool
        )
        monotone = monotonicity_check(g, grid, consensus).holds
        self.logger.info(f"Swept {len(grid)} grid points; Ω monotone: {monotone}")

        if OutputFormat(self.args.format) == OutputFormat.CSV:
            buffer = io.StringIO()
            writer = csv.writer(buffer, lineterminator="\n")
            writer.writerow(SweepRow.CSV_COLUMNS)
            for row in rows:
                writer.writerow([repr(getattr(row, c)) for c in SweepRow.CSV_COLUMNS])
            writer.writerow(["# monotone", str(monotone).lower()])
            return buffer.getvalue()
        table = SweepTable(rows=rows, monotone=monotone)
        payload = {"consensus_index": extended_real(consensus.value), "sweep": table.to_dict()}
        return self._envelope(payload, data)

    def consensus(self) -> str:
        g, data, consensus = self._load()
        upper = consensus_upper_bound(g, require_no_negative_cycle=False)
        model = ConsensusModel.from_consensus(
            consensus, {bound.edge: bound.bound for bound in upper.edges}
        )
        payload = {"consensus_index": extended_real(consensus.value), "consensus": model.to_dict()}
        return self._envelope(payload, data)

    def curvature(self) -> str:
        g, data, consensus = self._load()
        _require_admissible(consensus, self.args.epsilon)
        analysis = repelling_cost_matrix(g, self.args.epsilon, consensus=consensus)
        summary = CurvatureSummary.from_report(curvature_report(analysis))
        payload = {
            "consensus_index": extended_real(consensus.value),
            "curvature": summary.to_dict(),
        }
        return self._envelope(payload, data)

    def bounds(self) -> str:
        source = Path(self.args.input)
        paths = sorted(source.glob(f"*{EDGE_LIST_SUFFIX}")) if source.is_dir() else [source]
        if not paths:
            raise SignedGraphError(f"No {EDGE_LIST_SUFFIX} files found in {source}")

        with ThreadPoolExecutor(max_workers=self.config.max_workers) as executor:
            results = list(
                executor.map(
                    lambda p: _bounds_for_file(p, self.args.epsilon, self.args.tol), paths
                )
            )
        reports = [model.to_dict() for models, _ in results for model in models]
        data = b"".join(raw for _, raw in results)
        failed = sum(1 for r in reports if r.get("holds") is False)
        self.logger.info(f"Checked bounds on {len(paths)} graphs; {failed} violations")
        return self._envelope({"bounds": reports}, data)

    def dynamics(self) -> str:
        g, data, consensus = self._load()
        seed = self.config.seed if self.args.seed is None else self.args.seed
        x0 = np.random.default_rng(seed).standard_normal(g.n)
        trajectory = simulate_repelling_dynamics(
            g, self.args.alpha, self.args.beta, x0, self.args.dynamics_steps
        )
        payload = {
            "consensus_index": extended_real(consensus.value),
            "alpha": round_sig(trajectory.alpha),
            "beta": round_sig(trajectory.beta),
            "seed": seed,
            "fitted_rate": round_sig(trajectory.fitted_rate),
            "predicted_rate": round_sig(trajectory.predicted_rate),
            "diverges": trajectory.diverges,
            "disagreement": [round_sig(x) for x in trajectory.disagreement],
        }
        return self._envelope(payload, data)

    def verify_paper(self) -> str:
        verifier = ReferenceVerifier(
            seed=self.config.seed,
            instances=self.args.instances or self.config.corpus_size,
        )
        results = verifier.run(self.args.only)
        if any(not r.passed for r in results):
            self.exit_code = EXIT_ERROR

        if self.args.format == OutputFormat.JSON:
            rows = [
                {
                    "tag": str(r.tag),
                    "check": r.check,
                    "expected": r.expected,
                    "computed": None if r.computed is None else round_sig(r.computed),
                    "tol": r.tol,
                    "passed": r.passed,
                    "detail": r.detail,
                }
                for r in results
            ]
            return self._envelope({"checks": rows}, None)

        lines = []
        for r in results:
            numbers = ""
            if r.expected is not None:
                numbers = f"  expected={r.expected:.6g} computed={r.computed:.6g} tol={r.tol:g}"
            verdict = "PASS" if r.passed else "FAIL"
            detail = f"  ({r.detail})" if r.detail else ""
            lines.append(f"{verdict}  [{r.tag}] {r.check}{numbers}{detail}")
        passed = sum(r.passed for r in results)
        lines.append(f"{passed}/{len(results)} checks passed")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------


def build_parser(config: Optional[SgcurvConfig] = None) -> argparse.ArgumentParser:
    config = config or SgcurvConfig.from_env()
    parser = argparse.ArgumentParser(
        prog="sgcurv",
        description="ε-repelling Laplacian, curvature and bounds for signed graphs.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        default=config.log_level,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        type=str.upper,
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="Write output here instead of stdout")
    common.add_argument(
        "--tol",
        type=float,
        default=CONSENSUS_BISECTION_TOL,
        help="Bisection tolerance of the consensus index",
    )
    # verify-paper carries its own --format (text or json)
    data_format = argparse.ArgumentParser(add_help=False)
    data_format.add_argument(
        "--format",
        default=OutputFormat.JSON.value,
        choices=[OutputFormat.JSON.value, OutputFormat.CSV.value],
    )

    with_input = argparse.ArgumentParser(add_help=False, parents=[common, data_format])
    with_input.add_argument("--input", type=Path, required=True, help="Edge-list file (.sg)")

    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser(Command.ANALYZE.value, parents=[with_input])
    analyze.add_argument("--epsilon", type=float, required=True)
    analyze.add_argument(
        "--force", action="store_true", help="Report the spectrum even when ε >= ε₀"
    )

    sweep = sub.add_parser(Command.SWEEP.value, parents=[with_input])
    sweep.add_argument("--from", dest="eps_from", type=float, default=0.0)
    sweep.add_argument("--to", dest="eps_to", type=float, required=True)
    sweep.add_argument("--steps", type=int, default=11, help="Number of grid points")

    sub.add_parser(Command.CONSENSUS.value, parents=[with_input])

    curvature = sub.add_parser(Command.CURVATURE.value, parents=[with_input])
    curvature.add_argument("--epsilon", type=float, required=True)

    bounds = sub.add_parser(
        Command.BOUNDS.value,
        parents=[common, data_format],
        help="Check every inequality on a file or on each *.sg file of a directory",
    )
    bounds.add_argument("--input", type=Path, required=True)
    bounds.add_argument("--epsilon", type=float, required=True)

    dynamics = sub.add_parser(Command.DYNAMICS.value, parents=[with_input])
    dynamics.add_argument("--alpha", type=float, required=True)
    dynamics.add_argument("--beta", type=float, required=True)
    dynamics.add_argument("--steps", dest="dynamics_steps", type=int, default=50)
    dynamics.add_argument("--seed", type=int, default=None, help="Defaults to SGCURV_SEED")

    verify = sub.add_parser(Command.VERIFY_PAPER.value, parents=[common])
    verify.add_argument(
        "--format",
        default=OutputFormat.TEXT.value,
        choices=[OutputFormat.TEXT.value, OutputFormat.JSON.value],
    )
    verify.add_argument(
        "--only", action="append", choices=[t.value for t in VerificationTag], default=None
    )
    verify.add_argument("--instances", type=int, default=None, help="Random corpus size")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    config = SgcurvConfig.from_env()
    args = build_parser(config).parse_args(argv)
    logging.basicConfig(level=args.log_level, stream=sys.stderr)

    try:
        cli = SgcurvCli(args=args, config=config)
        output = cli.run()
    except HypothesisError as e:
        print(str(e), file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (SignedGraphError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    if args.out is not None:
        args.out.write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return cli.exit_code


if __name__ == "__main__":
    sys.exit(main())
