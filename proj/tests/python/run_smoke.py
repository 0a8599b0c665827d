"""Runs the Python smoke tests; exits 77 (skipped) when the module is not installed."""

import pathlib
import sys

try:
    import poolmarket  # noqa: F401
    import pytest
except ImportError as exc:
    print(f"skipping: {exc}")
    sys.exit(77)

sys.exit(pytest.main(["-q", str(pathlib.Path(__file__).parent)]))
