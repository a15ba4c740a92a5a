import csv
import json
from pathlib import Path
from typing import Any, Dict

import pytest
from pytest import mark, param

from aibs_informatics_sgcurv.bounds import BoundName
from aibs_informatics_sgcurv.cli import EXIT_ERROR, EXIT_HYPOTHESIS, EXIT_OK, build_parser, main
from aibs_informatics_sgcurv.fixtures import signed_graph_from_labels
from aibs_informatics_sgcurv.models import INFINITY, ReportEnvelope
from aibs_informatics_sgcurv.signed_graph import SignedGraph, format_edge_list
from test.base import BaseTest

C3 = signed_graph_from_labels(3, [(1, 2), (2, 3), (1, 3)], [(1, 3)])
C4 = signed_graph_from_labels(4, [(1, 2), (2, 3), (3, 4), (1, 4)], [(1, 4)])
ALL_POSITIVE = signed_graph_from_labels(3, [(1, 2), (2, 3), (1, 3)], [])


class SgcurvCliTests(BaseTest):
    def setUp(self) -> None:
        super().setUp()
        self.set_env_vars(("SGCURV_SEED", "123"), ("SGCURV_LOG_LEVEL", None))
        self.out = self.tmp_path() / "out.json"

    def run_cli(self, *argv: str) -> int:
        return main([*argv, "--out", str(self.out)])

    def read_envelope(self) -> Dict[str, Any]:
        return json.loads(self.out.read_text())

    def test__analyze__three_cycle(self):
        path = self.write_edge_list(C3)
        code = self.run_cli("analyze", "--input", str(path), "--epsilon", "0.25")
        self.assertEqual(code, EXIT_OK)

        envelope = self.read_envelope()
        payload = envelope["payload"]
        self.assertEqual(envelope["command"], "analyze")
        self.assertEqual(envelope["input_digest"], ReportEnvelope.digest(path.read_bytes()))
        assert payload["consensus_index"] == pytest.approx(0.5, abs=1e-7)
        assert payload["analysis"]["epsilon"] == 0.25
        self.assertEqual(len(payload["curvature"]["tau"]), 3)
        self.assertEqual(sorted(payload["curvature"]["theta"]), ["0-1", "0-2", "1-2"])

    def test__analyze__beyond_consensus_index_exits_with_hypothesis_code(self):
        path = self.write_edge_list(C3)
        code = self.run_cli("analyze", "--input", str(path), "--epsilon", "0.6")
        self.assertEqual(code, EXIT_HYPOTHESIS)
        self.assertFalse(self.out.exists())

    def test__analyze__force_reports_indefinite_spectrum(self):
        path = self.write_edge_list(C3)
        code = self.run_cli("analyze", "--input", str(path), "--epsilon", "0.6", "--force")
        self.assertEqual(code, EXIT_OK)

        payload = self.read_envelope()["payload"]
        self.assertTrue(payload["forced"])
        assert payload["restricted_eigenvalues"] == pytest.approx([-0.2, 3.0])

    def test__analyze__all_positive_graph_is_unbounded(self):
        path = self.write_edge_list(ALL_POSITIVE)
        self.assertEqual(self.run_cli("analyze", "--input", str(path), "--epsilon", "7"), EXIT_OK)
        self.assertEqual(self.read_envelope()["payload"]["consensus_index"], INFINITY)

    def test__consensus__reports_index_and_edge_bounds(self):
        path = self.write_edge_list(C4)
        self.assertEqual(self.run_cli("consensus", "--input", str(path)), EXIT_OK)

        consensus = self.read_envelope()["payload"]["consensus"]
        assert consensus["value"] == pytest.approx(1.0 / 3.0, abs=1e-7)
        self.assertFalse(consensus["unbounded"])
        assert consensus["upper_bounds"]["0-3"] == pytest.approx(1.0 / 3.0)

    def test__consensus__all_positive_graph_writes_unbounded_index(self):
        path = self.write_edge_list(ALL_POSITIVE)
        self.assertEqual(self.run_cli("consensus", "--input", str(path)), EXIT_OK)

        payload = self.read_envelope()["payload"]
        self.assertEqual(payload["consensus_index"], INFINITY)
        self.assertIsNone(payload["consensus"]["value"])
        self.assertIsNone(payload["consensus"]["bracket"])
        self.assertTrue(payload["consensus"]["unbounded"])

    def test__analyze__nests_consensus_and_simplex(self):
        path = self.write_edge_list(C3)
        self.assertEqual(self.run_cli("analyze", "--input", str(path), "--epsilon", "0.25"), 0)

        analysis = self.read_envelope()["payload"]["analysis"]
        assert analysis["consensus"]["value"] == pytest.approx(0.5, abs=1e-7)
        self.assertFalse(analysis["consensus"]["unbounded"])
        self.assertGreater(analysis["circumradius"], 0)
        assert sum(analysis["circumcenter"]) == pytest.approx(1.0)

    def test__curvature__three_cycle(self):
        path = self.write_edge_list(C3)
        self.assertEqual(self.run_cli("curvature", "--input", str(path), "--epsilon", "0.2"), 0)

        curvature = self.read_envelope()["payload"]["curvature"]
        assert curvature["theta"]["0-2"] == pytest.approx(3.75)
        assert curvature["theta_semigroup"]["0-2"] == pytest.approx(3.2)

    def test__sweep__writes_csv(self):
        path = self.write_edge_list(C3)
        code = self.run_cli(
            "sweep", "--input", str(path), "--to", "0.4", "--steps", "5", "--format", "csv"
        )
        self.assertEqual(code, EXIT_OK)

        rows = list(csv.reader(self.out.read_text().splitlines()))
        self.assertEqual(rows[0][:2], ["epsilon", "lambda2"])
        self.assertEqual([float(r[0]) for r in rows[1:6]], [0.0, 0.1, 0.2, 0.3, 0.4])
        self.assertEqual(rows[-1], ["# monotone", "true"])
        resistances = [float(r[2]) for r in rows[1:6]]
        self.assertEqual(resistances, sorted(resistances))

    def test__sweep__writes_json_table(self):
        path = self.write_edge_list(C3)
        self.assertEqual(self.run_cli("sweep", "--input", str(path), "--to", "0.4"), EXIT_OK)

        sweep = self.read_envelope()["payload"]["sweep"]
        self.assertTrue(sweep["monotone"])
        self.assertEqual(len(sweep["rows"]), 11)

    def test__sweep__grid_checks(self):
        path = self.write_edge_list(C3)
        for extra in (["--to", "0.4", "--steps", "0"], ["--from", "0.3", "--to", "0.1"]):
            self.assertEqual(self.run_cli("sweep", "--input", str(path), *extra), EXIT_HYPOTHESIS)
        self.assertEqual(
            self.run_cli("sweep", "--input", str(path), "--to", "0.6"), EXIT_HYPOTHESIS
        )

    def test__bounds__directory_of_graphs(self):
        directory = self.tmp_path()
        self.write_edge_list(C3, "c3.sg", directory)
        self.write_edge_list(C4, "c4.sg", directory)
        (directory / "notes.txt").write_text("ignored")

        code = self.run_cli("bounds", "--input", str(directory), "--epsilon", "0.2")
        self.assertEqual(code, EXIT_OK)

        reports = self.read_envelope()["payload"]["bounds"]
        self.assertEqual({r["source"] for r in reports}, {"c3.sg", "c4.sg"})
        self.assertFalse(any(r["holds"] is False for r in reports))

    def test__bounds__all_positive_graph(self):
        path = self.write_edge_list(ALL_POSITIVE)
        self.assertEqual(self.run_cli("bounds", "--input", str(path), "--epsilon", "0.2"), 0)

        reports = {r["name"]: r for r in self.read_envelope()["payload"]["bounds"]}
        two_sided = reports[str(BoundName.TWO_SIDED)]
        self.assertEqual(two_sided["reason"], "no-negative-edges")
        self.assertIn("holds", two_sided)
        self.assertIsNone(two_sided["holds"])
        self.assertIsNone(two_sided["lhs"])

    def test__bounds__empty_directory_is_an_error(self):
        directory = self.tmp_path()
        code = self.run_cli("bounds", "--input", str(directory), "--epsilon", "0.2")
        self.assertEqual(code, EXIT_ERROR)

    def test__dynamics__is_seeded(self):
        path = self.write_edge_list(C3)
        argv = ("dynamics", "--input", str(path), "--alpha", "0.1", "--beta", "0.04")
        self.assertEqual(self.run_cli(*argv, "--steps", "300", "--seed", "3"), EXIT_OK)
        first = self.out.read_text()
        self.assertEqual(self.run_cli(*argv, "--steps", "300", "--seed", "3"), EXIT_OK)
        self.assertEqual(self.out.read_text(), first)

        payload = json.loads(first)["payload"]
        assert payload["predicted_rate"] == pytest.approx(0.98)
        assert payload["fitted_rate"] == pytest.approx(0.98, abs=1e-6)
        self.assertFalse(payload["diverges"])

    def test__dynamics__seed_defaults_to_environment(self):
        path = self.write_edge_list(C3)
        argv = ("dynamics", "--input", str(path), "--alpha", "0.1", "--beta", "0.06")
        self.assertEqual(self.run_cli(*argv), EXIT_OK)

        payload = self.read_envelope()["payload"]
        self.assertEqual(payload["seed"], 123)
        self.assertTrue(payload["diverges"])

    def test__verify_paper__json_checks(self):
        code = self.run_cli(
            "verify-paper", "--only", "c3", "--only", "example", "--format", "json"
        )
        self.assertEqual(code, EXIT_OK)

        checks = self.read_envelope()["payload"]["checks"]
        self.assertEqual({c["tag"] for c in checks}, {"c3", "example"})
        self.assertTrue(all(c["passed"] for c in checks))

    def test__verify_paper__text_summary(self):
        self.assertEqual(self.run_cli("verify-paper", "--only", "c4"), EXIT_OK)
        lines = self.out.read_text().splitlines()
        self.assertTrue(all(line.startswith("PASS") for line in lines[:-1]))
        self.assertRegex(lines[-1], r"^(\d+)/\1 checks passed$")

    def test__malformed_input_exits_with_error(self):
        path = self.tmp_path() / "bad.sg"
        path.write_text("3\n0 1 +1\n1 2 x\n")
        self.assertEqual(self.run_cli("consensus", "--input", str(path)), EXIT_ERROR)

    def test__non_utf8_input_exits_with_error(self):
        path = self.tmp_path() / "latin1.sg"
        path.write_bytes(b"3\n0 1 +1\n1 2 \xff1\n")
        self.assertEqual(self.run_cli("consensus", "--input", str(path)), EXIT_ERROR)
        self.assertFalse(self.out.exists())

    def test__missing_input_exits_with_error(self):
        missing = self.tmp_path() / "missing.sg"
        self.assertEqual(self.run_cli("consensus", "--input", str(missing)), EXIT_ERROR)


def test__main__hypothesis_message_on_stderr(tmp_path: Path, capsys):
    path = tmp_path / "c3.sg"
    path.write_text(format_edge_list(C3))

    assert main(["analyze", "--input", str(path), "--epsilon", "0.6"]) == EXIT_HYPOTHESIS
    assert "epsilon exceeds consensus index 0.5" in capsys.readouterr().err


def test__main__writes_stdout_without_out(tmp_path: Path, capsys):
    path = tmp_path / "k2.sg"
    path.write_text(format_edge_list(SignedGraph.from_edges(2, [(0, 1, 1)])))

    assert main(["curvature", "--input", str(path), "--epsilon", "0.0"]) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document["payload"]["curvature"]["phi"] == pytest.approx(4.0)


@mark.parametrize(
    "argv",
    [
        param(["--version"], id="version"),
        param(["analyze", "--help"], id="subcommand help"),
    ],
)
def test__main__informational_flags_exit_cleanly(argv):
    with pytest.raises(SystemExit) as exc_info:
        main(argv)
    assert exc_info.value.code == 0


def test__main__requires_a_command():
    with pytest.raises(SystemExit) as exc_info:
        main([])
    assert exc_info.value.code == 2


def test__main__non_utf8_input_names_the_line(tmp_path: Path, capsys):
    path = tmp_path / "latin1.sg"
    path.write_bytes(b"3\n0 1 +1\n1 2 \xe9\n")

    assert main(["analyze", "--input", str(path), "--epsilon", "0.1"]) == EXIT_ERROR
    assert "line 3: invalid UTF-8" in capsys.readouterr().err


@mark.parametrize(
    "argv, expected",
    [
        param(["sweep", "--input", "g.sg", "--to", "0.4"], "json", id="sweep"),
        param(["bounds", "--input", "g.sg", "--epsilon", "0.1"], "json", id="bounds"),
        param(["verify-paper"], "text", id="verify-paper"),
    ],
)
def test__build_parser__format_defaults_per_command(argv, expected):
    parser = build_parser()
    assert parser.parse_args(argv).format == expected


def test__build_parser__verify_paper_rejects_csv():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify-paper", "--format", "csv"])
