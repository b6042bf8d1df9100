import os
import sys
from pathlib import Path

import pytest
from hypothesis import settings
from loguru import logger

# src/ layout: make the package importable without an install.
ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

settings.register_profile("ci", derandomize=True, print_blob=True)
settings.register_profile("dev", max_examples=50)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def _quiet_logs():
    """Each test starts from loguru's default sink; CLI runs replace it."""
    yield
    logger.remove()
    logger.add(sys.stderr, level="WARNING")
