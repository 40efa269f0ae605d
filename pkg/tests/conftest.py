import contextlib
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def criterion(capsys):
    """Context manager that prints one PASS/FAIL line per acceptance
    criterion directly to the terminal, bypassing output capture."""

    @contextlib.contextmanager
    def _criterion(num: int, desc: str):
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                state = "PASS" if ok else "FAIL"
                print(f"[criterion {num:02d}] {state} - {desc}")

    return _criterion
