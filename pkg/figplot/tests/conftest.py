import subprocess
import sys

import pytest


@pytest.fixture(scope="session")
def reproduction_dir(tmp_path_factory):
    """All four figure reproductions, generated through the bosoncert CLI.

    figplot consumes the CSVs only; the producer is invoked as an external
    command, matching how the two packages are used together.
    """
    outdir = tmp_path_factory.mktemp("repro")
    for figure in (1, 2, 3, 4):
        result = subprocess.run(
            [sys.executable, "-m", "bosoncert", "reproduce",
             "--figure", str(figure), "--seed", "7", "--out", str(outdir)],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, result.stderr
    return outdir
