import os
import random
from pathlib import Path

import pytest

from zexpand.coeffs import CoefficientTable, analytic_head, load_table, parse_table
from zexpand.numerics import PrecisionContext

#: Points at a user-supplied transcription of the published 401-order
#: coefficient table (baker1990); the data-gated checks are skipped without it.
BAKER_ENV = "ZEXPAND_BAKER_TABLE"


@pytest.fixture(scope="session")
def ctx() -> PrecisionContext:
    return PrecisionContext()


@pytest.fixture(scope="session")
def head() -> CoefficientTable:
    return analytic_head()


@pytest.fixture(scope="session")
def baker_table() -> CoefficientTable:
    path = os.environ.get(BAKER_ENV, "")
    if not path or not Path(path).exists():
        pytest.skip(
            f"data-gated: requires a user-supplied transcription of the published "
            f"401-order coefficient table (baker1990 Table III); set {BAKER_ENV}=<path>"
        )
    return load_table(path, provenance="two-electron ground-state 1/Z series (user transcription)")


@pytest.fixture()
def make_random_table():
    """Seeded generator of synthetic coefficient tables with matched lambda values."""

    def build(rng: random.Random, max_order_range=(5, 60)) -> tuple[CoefficientTable, str]:
        n_max = rng.randint(*max_order_range)
        lines = []
        for n in range(n_max + 1):
            sign = rng.choice(["", "-"])
            digits = rng.randint(1, 15)
            frac = "".join(rng.choice("0123456789") for _ in range(digits))
            lines.append(f"{n} {sign}0.{frac}")
        lam_text = "0." + "".join(rng.choice("0123456789") for _ in range(10))
        return parse_table("\n".join(lines)), lam_text

    return build
