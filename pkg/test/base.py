from pathlib import Path
from typing import Optional

from aibs_informatics_test_resources import BaseTest as _BaseTest
from aibs_informatics_test_resources import reset_environ_after_test as reset_environ_after_test

from aibs_informatics_sgcurv.signed_graph import SignedGraph, format_edge_list


class BaseTest(_BaseTest):
    def write_edge_list(
        self, g: SignedGraph, name: str = "graph.sg", directory: Optional[Path] = None
    ) -> Path:
        path = (directory or self.tmp_path()) / name
        path.write_text(format_edge_list(g), encoding="utf-8")
        return path
