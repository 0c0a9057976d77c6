"""Build a real export bundle by driving the primary tool's CLI.

The renderer is only allowed to know the bundle JSON contract, so the
fixture produces one the same way a user would: benchmark -> fit ->
export-plotdata, all through subprocesses.
"""

import json
import subprocess
import sys

import pytest


def run(args):
    proc = subprocess.run(
        [sys.executable, "-m", "anovex.cli", *args], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def fgm_bundle_path(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("fgm")
    run(["benchmark", "--case", "fgm", "--n", "3000", "--seed", "42",
         "--output-dir", str(tmp)])
    run(["fit", "--input", str(tmp / "fgm.csv"), "--target", "y",
         "--K", "2", "--d", "6", "--deg-density", "6",
         "--output", str(tmp / "model.json")])
    run(["export-plotdata", "--model", str(tmp / "model.json"),
         "--input", str(tmp / "fgm.csv"), "--target", "y", "--rows", "10",
         "--references", str(tmp / "fgm_reference.json"),
         "--output", str(tmp / "bundle.json")])
    return tmp / "bundle.json"


@pytest.fixture(scope="session")
def fgm_bundle(fgm_bundle_path):
    return json.loads(fgm_bundle_path.read_text())
