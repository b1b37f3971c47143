"""Built-in cross-checks."""
from axionqfi.selfcheck import run_checks


def test_fast_selfcheck_passes():
    results = run_checks(fast=True)
    assert len(results) == 8
    failed = [(name, detail) for name, ok, detail in results if not ok]
    assert not failed
