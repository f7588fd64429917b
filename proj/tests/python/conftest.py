import os
import shutil
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def cli():
    exe = os.environ.get("SFCM_CLI") or shutil.which("sfcm")
    if not exe:
        local = ROOT / "build" / "tools" / "sfcm"
        exe = str(local) if local.exists() else None
    if not exe:
        pytest.skip("sfcm executable not found")
    return exe


@pytest.fixture(scope="session")
def schemas():
    return ROOT / "schema"
