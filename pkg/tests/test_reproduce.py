"""Every reproduction target must come back all-PASS.

This is the mutual-reduction gate against all recorded reference bases (the
two long trigonometric outputs, the three polynomial-class lex bases and the
two inline ideals) plus the criteria instances.
"""

import pytest

from polycenters.reproduce import RUNNERS, reproduce


@pytest.mark.parametrize("target", sorted(RUNNERS))
def test_reproduction_target(target):
    rows = reproduce(target)
    failures = [r for r in rows if r["status"] != "PASS"]
    assert not failures, f"{target}: {failures}"


def test_unknown_target():
    with pytest.raises(KeyError):
        reproduce("lemma-99")
