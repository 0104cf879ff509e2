"""Digit-agreement checks against reference energies and ratio-based radius estimates.

Digit agreement is deliberately defined on formatted strings, not on
absolute differences: the claims being tested ("coincide up to 12 decimal
digits", "before rounding" vs "after rounding") are claims about printed
digits, and rounding and truncation can disagree about them.  Both modes
are therefore first-class everywhere.

The radius of convergence is estimated from the ratios of subsequent
coefficients r_n = e_n / e_{n-1} via the standard Domb-Sykes device: fit a
straight line in 1/n over a window and invert the intercept.  Window
sensitivity is the caller's to explore; no asymptotic form is adjudicated
here.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from importlib import resources
from pathlib import Path

from .coeffs import CoefficientTable
from .errors import ArityError, DomainError, NoFiniteRadiusError, ParseError, RangeError
from .numerics import (
    DEFAULT_CONTEXT,
    ROUNDED,
    TRUNCATED,
    PrecisionContext,
    _fixed_string,
    parse_decimal,
    validate_decimal_text,
)
from .series import weighted_sum

#: Default comparison cap: beyond 25 decimals nothing in the bundled data is printed.
DEFAULT_AGREEMENT_CAP = 25

_ROUNDED_FLAGS = {"rounded": True, "non-rounded": False}


@dataclass(frozen=True)
class ReferenceEnergy:
    """A labeled reference energy in hartree.

    ``Z`` is kept as text so symbolic charges survive parsing; it must be
    numeric by the time the reference participates in a consistency report.
    """

    label: str
    Z: str
    value: str
    source: str
    rounded: bool

    def charge(self, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
        try:
            z = parse_decimal(self.Z, ctx)
        except ParseError:
            raise DomainError(f"reference {self.label!r}: charge {self.Z!r} is not numeric") from None
        if z <= 0:
            raise DomainError(f"reference {self.label!r}: charge must be positive, got {self.Z}")
        return z

    def energy(self, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
        return parse_decimal(self.value, ctx)


@dataclass(frozen=True)
class AgreementRow:
    """Perturbative vs reference energy with digit agreement in both modes."""

    label: str
    energy_pt: Decimal
    energy_ref: Decimal
    agreement_rounded: int
    agreement_truncated: int


@dataclass(frozen=True)
class RadiusEstimate:
    """Estimated radius of convergence with the window and model that produced it."""

    lambda_star: Decimal
    window: tuple[int, int]
    method: str


def digit_agreement(
    a: Decimal,
    b: Decimal,
    mode: str = ROUNDED,
    cap: int = DEFAULT_AGREEMENT_CAP,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> int:
    """Largest d <= cap at which *a* and *b* print identically at d decimals.

    Returns ``cap`` when the strings still match there, and 0 when they
    disagree everywhere (including at zero decimals).
    """
    if cap < 0:
        raise RangeError(f"comparison cap must be nonnegative, got {cap}")
    if cap > ctx.digits - 2:
        raise RangeError(f"cap {cap} exceeds working precision budget ({ctx.digits} digits)")
    for d in range(cap, -1, -1):
        if _fixed_string(a, d, mode) == _fixed_string(b, d, mode):
            return d
    return 0


def consistency_report(
    table: CoefficientTable,
    refs: list[ReferenceEnergy],
    N: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    cap: int = DEFAULT_AGREEMENT_CAP,
) -> list[AgreementRow]:
    """One agreement row per reference, energies from the order-N weighted sum.

    Errors from the series evaluation are re-raised annotated with the row
    label; rows come back in input order.
    """
    rows = []
    for ref in refs:
        try:
            z = ref.charge(ctx)
            energy_pt = weighted_sum(table, z, N, ctx).energy
            energy_ref = ref.energy(ctx)
        except (ArityError, DomainError, ParseError, RangeError) as exc:
            raise type(exc)(f"reference {ref.label!r}: {exc}") from exc
        rows.append(
            AgreementRow(
                label=ref.label,
                energy_pt=energy_pt,
                energy_ref=energy_ref,
                agreement_rounded=digit_agreement(energy_pt, energy_ref, ROUNDED, cap, ctx),
                agreement_truncated=digit_agreement(energy_pt, energy_ref, TRUNCATED, cap, ctx),
            )
        )
    return rows


def ratio_sequence(
    table: CoefficientTable,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> tuple[list[tuple[int, Decimal]], list[int]]:
    """Ratios r_n = e_n / e_{n-1} for n >= 2, plus the orders skipped on zero denominators."""
    if table.max_order < 2:
        raise RangeError(f"ratio sequence needs max order >= 2, table has {table.max_order}")
    values = table.values()
    ratios: list[tuple[int, Decimal]] = []
    omitted: list[int] = []
    with localcontext(ctx.decimal_context()):
        for n in range(2, table.max_order + 1):
            if values[n - 1] == 0:
                omitted.append(n)
            else:
                ratios.append((n, values[n] / values[n - 1]))
    return ratios, omitted


def estimate_radius(
    ratios: list[tuple[int, Decimal]],
    n_min: int,
    n_max: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> RadiusEstimate:
    """Domb-Sykes estimate: least-squares line r_n = c0 + c1/n, radius = 1/c0.

    A nonpositive intercept means the windowed ratios do not look like a
    positive-radius power law (alternating or non-geometric structure) and
    raises :class:`NoFiniteRadiusError`.
    """
    points = [(n, r) for n, r in ratios if n_min <= n <= n_max]
    if len(points) < 2:
        raise ArityError(f"radius window [{n_min}, {n_max}] holds {len(points)} ratio points; need >= 2")
    with localcontext(ctx.decimal_context()):
        count = Decimal(len(points))
        sx = sy = sxx = sxy = Decimal(0)
        for n, r in points:
            x = Decimal(1) / Decimal(n)
            sx += x
            sy += r
            sxx += x * x
            sxy += x * r
        det = count * sxx - sx * sx
        c1 = (count * sxy - sx * sy) / det
        c0 = (sy - c1 * sx) / count
        if c0 <= 0:
            raise NoFiniteRadiusError(
                f"ratio intercept {c0} is not positive over window [{n_min}, {n_max}]; "
                "no finite radius can be inferred"
            )
        lambda_star = Decimal(1) / c0
    return RadiusEstimate(
        lambda_star=lambda_star,
        window=(n_min, n_max),
        method=f"least-squares r_n = c0 + c1/n over n in [{n_min}, {n_max}], lambda* = 1/c0 (Domb-Sykes)",
    )


def parse_references(text: str) -> list[ReferenceEnergy]:
    """Parse ``label; Z; value; source; rounded-flag`` lines; ``#`` starts a comment."""
    refs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in stripped.split(";")]
        if len(fields) != 5:
            raise ParseError(f"line {lineno}: expected 5 ';'-separated fields, got {len(fields)}")
        label, z_text, value, source, flag = fields
        try:
            validate_decimal_text(value)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        if flag not in _ROUNDED_FLAGS:
            raise ParseError(f"line {lineno}: rounded-flag must be 'rounded' or 'non-rounded', got {flag!r}")
        refs.append(ReferenceEnergy(label, z_text, value, source, _ROUNDED_FLAGS[flag]))
    return refs


def load_references(path: str | Path) -> list[ReferenceEnergy]:
    return parse_references(Path(path).read_text(encoding="utf-8"))


def bundled_references() -> list[ReferenceEnergy]:
    """The reference registry shipped with the package."""
    text = (resources.files("zexpand") / "data" / "reference_energies.txt").read_text(encoding="utf-8")
    return parse_references(text)
