"""
Acceptance gate: one test per criterion, each at its stated tolerance.

Set ``MISSILE_SMC_FULL_SWEEP=1`` to run the gain-sweep criterion on the
full 51x51 grid instead of the coarse 11x11 grid.
"""

import os

import pytest

from missile_smc import verify
from missile_smc.scenario import paper_default

FULL_SWEEP = os.environ.get("MISSILE_SMC_FULL_SWEEP", "") not in ("", "0")
SCENARIO = paper_default()


@pytest.mark.parametrize("check", verify.CHECKS, ids=lambda c: c.__name__.removeprefix("check_"))
def test_criterion(check):
    if check is verify.check_sweep_structure:
        result = check(SCENARIO, full=FULL_SWEEP)
    else:
        result = check(SCENARIO)
    print("\n" + result.line())
    assert result.ok, result.line()
