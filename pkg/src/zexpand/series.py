"""Partial sums of the 1/Z expansion.

The scaled ground-state energy of the two-electron ion is a power series in
lambda = 1/Z; the physical energy is recovered as E(Z) = Z^2 * sum.
All sums run at working precision with powers built by iterated
multiplication (one multiply per term), and both ascending and descending
accumulation orders are available as a numerical-hygiene cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext

from .coeffs import CoefficientTable
from .errors import DomainError, RangeError
from .numerics import DEFAULT_CONTEXT, PrecisionContext

ASCENDING = "ascending"
DESCENDING = "descending"


@dataclass(frozen=True)
class SeriesEvaluation:
    """Weighted partial sum at a single charge.

    ``scaled_sum`` is the lambda-series value, ``energy = Z^2 * scaled_sum``
    in hartree, and ``remainder`` is the last retained term
    ``e_N * lambda^N`` (a proxy for the tail, not a bound on it).
    """

    Z: Decimal
    lam: Decimal
    order: int
    scaled_sum: Decimal
    energy: Decimal
    remainder: Decimal
    summation_order: str


def _as_decimal(x) -> Decimal:
    if isinstance(x, Decimal):
        return x
    if isinstance(x, int):
        return Decimal(x)
    raise TypeError(f"expected Decimal or int, got {type(x).__name__}")


def lambda_of(Z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
    """Coupling lambda = 1/Z at working precision."""
    Z = _as_decimal(Z)
    if Z <= 0:
        raise DomainError(f"nuclear charge must be positive, got {Z}")
    return ctx.decimal_context().divide(Decimal(1), Z)


def _check_order(table: CoefficientTable, N: int) -> None:
    if not 0 <= N <= table.max_order:
        raise RangeError(f"order {N} outside table range 0..{table.max_order}")


def scaled_partial_sum(
    table: CoefficientTable,
    lam,
    N: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    order: str = ASCENDING,
) -> Decimal:
    """Sum of e_n * lambda^n for n = 0..N in the stated index order."""
    lam = _as_decimal(lam)
    _check_order(table, N)
    if lam < 0:
        raise DomainError(f"lambda must be nonnegative, got {lam}")
    if order not in (ASCENDING, DESCENDING):
        raise ValueError(f"unknown summation order {order!r}")
    values = [entry.value() for entry in table.entries[: N + 1]]
    with localcontext(ctx.decimal_context()):
        if order == ASCENDING:
            total = Decimal(0)
            power = Decimal(1)
            for v in values:
                total += v * power
                power *= lam
        else:
            powers = []
            power = Decimal(1)
            for _ in values:
                powers.append(power)
                power *= lam
            total = Decimal(0)
            for v, p in zip(reversed(values), reversed(powers)):
                total += v * p
        return +total


def remainder_term(table: CoefficientTable, lam, N: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
    """Last retained term e_N * lambda^N."""
    lam = _as_decimal(lam)
    _check_order(table, N)
    value = table.entries[N].value()
    with localcontext(ctx.decimal_context()):
        if N == 0:
            return +value
        return value * lam**N


def weighted_sum(
    table: CoefficientTable,
    Z,
    N: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
    order: str = ASCENDING,
) -> SeriesEvaluation:
    """Perturbative energy E_N(Z) = Z^2 * sum_{n<=N} e_n (1/Z)^n with its remainder term."""
    Z = _as_decimal(Z)
    lam = lambda_of(Z, ctx)
    scaled = scaled_partial_sum(table, lam, N, ctx, order)
    with localcontext(ctx.decimal_context()):
        energy = Z * Z * scaled
    return SeriesEvaluation(
        Z=Z,
        lam=lam,
        order=N,
        scaled_sum=scaled,
        energy=energy,
        remainder=remainder_term(table, lam, N, ctx),
        summation_order=order,
    )


def partial_sum_trace(
    table: CoefficientTable,
    Z,
    N: int,
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> list[tuple[int, Decimal]]:
    """Running weighted sums S_0 .. S_N; S_N equals the weighted_sum energy."""
    Z = _as_decimal(Z)
    lam = lambda_of(Z, ctx)
    _check_order(table, N)
    rows: list[tuple[int, Decimal]] = []
    with localcontext(ctx.decimal_context()):
        zz = Z * Z
        total = Decimal(0)
        power = Decimal(1)
        for entry in table.entries[: N + 1]:
            total += entry.value() * power
            power *= lam
            rows.append((entry.n, zz * total))
    return rows
