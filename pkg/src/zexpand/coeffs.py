"""Coefficient tables for the two-electron 1/Z ground-state series.

Coefficients are stored as the exact decimal strings they were transcribed
with, never as parsed values: the padding and rounding experiments operate
on printed digits, and silently normalising ``0.6250`` to ``0.625`` would
change what an experiment measures.  Tables are immutable; every transform
returns a new table.

File format (UTF-8): one ``n SP value`` entry per line, ``#`` starts a
comment, scientific notation ``mEk`` is accepted.  A comment of the form
``# provenance: <text>`` labels the table.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from decimal import Decimal
from pathlib import Path

from .errors import ParseError, RangeError, StructureError
from .numerics import ROUNDED, _fixed_string, decimal_places, validate_decimal_text

#: Provenance substring that marks the physical two-electron series and
#: activates the analytic-head check (e0 = -1, e1 = 5/8).
TWO_ELECTRON_MARK = "two-electron"

_PROVENANCE_PREFIX = "provenance:"


@dataclass(frozen=True)
class CoefficientEntry:
    """One series coefficient: order, exact decimal text, and its printed decimals."""

    n: int
    raw: str
    declared_decimals: int

    def value(self) -> Decimal:
        """Exact value denoted by the raw string."""
        return Decimal(self.raw)


@dataclass(frozen=True)
class CoefficientTable:
    """Ordered coefficients e_0 .. e_N with a free-text provenance label.

    Orders must be contiguous from 0; sparse tables are rejected rather than
    zero-filled, because partial sums are order-indexed.  When the
    provenance marks the two-electron ground-state series the analytic head
    values are verified on construction.
    """

    entries: tuple[CoefficientEntry, ...]
    provenance: str = ""

    def __post_init__(self) -> None:
        if not self.entries:
            raise StructureError("empty coefficient table")
        for i, entry in enumerate(self.entries):
            if entry.n != i:
                raise StructureError(f"coefficient orders must be contiguous from 0; expected n={i}, found n={entry.n}")
        if TWO_ELECTRON_MARK in self.provenance.lower():
            if self.entries[0].value() != -1:
                raise StructureError(f"two-electron series must start with e_0 = -1, got {self.entries[0].raw!r}")
            if len(self.entries) > 1 and self.entries[1].value() != Decimal("0.625"):
                raise StructureError(f"two-electron series must have e_1 = 5/8, got {self.entries[1].raw!r}")

    @property
    def max_order(self) -> int:
        return len(self.entries) - 1

    def values(self) -> list[Decimal]:
        """Exact values e_0 .. e_N in order."""
        return [entry.value() for entry in self.entries]


def parse_table(text: str, provenance: str | None = None) -> CoefficientTable:
    """Parse ``n value`` lines into a table.

    Raw value strings are preserved byte-exact.  Gaps and duplicate orders
    raise :class:`StructureError` citing the order; malformed fields raise
    :class:`ParseError` citing the line number.  An explicit *provenance*
    argument overrides any ``# provenance:`` directive in the text.
    """
    rows: list[tuple[int, str]] = []
    directive: str | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped[1:].strip()
            if body.lower().startswith(_PROVENANCE_PREFIX) and directive is None:
                directive = body[len(_PROVENANCE_PREFIX):].strip()
            continue
        payload = stripped.split("#", 1)[0].strip()
        fields = payload.split()
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected 'n value', got {payload!r}")
        n_text, raw = fields
        if not n_text.isascii() or not n_text.isdigit():
            raise ParseError(f"line {lineno}: order must be a nonnegative integer, got {n_text!r}")
        try:
            validate_decimal_text(raw)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        rows.append((int(n_text), raw))
    if not rows:
        raise StructureError("empty coefficient table")
    rows.sort(key=lambda item: item[0])
    for i in range(1, len(rows)):
        if rows[i][0] == rows[i - 1][0]:
            raise StructureError(f"duplicate coefficient order n={rows[i][0]}")
    if rows[0][0] != 0:
        raise StructureError(f"coefficient orders must start at 0; first order is n={rows[0][0]}")
    for i, (n, _) in enumerate(rows):
        if n != i:
            raise StructureError(f"gap in coefficient orders at n={i}")
    entries = tuple(CoefficientEntry(n, raw, decimal_places(raw)) for n, raw in rows)
    label = provenance if provenance is not None else (directive or "")
    return CoefficientTable(entries, label)


def serialize_table(table: CoefficientTable) -> str:
    """Emit the table in the same line format ``parse_table`` reads (round-trips)."""
    lines = []
    if table.provenance:
        lines.append(f"# provenance: {table.provenance}")
    lines.extend(f"{entry.n} {entry.raw}" for entry in table.entries)
    return "\n".join(lines) + "\n"


def load_table(path: str | Path, provenance: str | None = None) -> CoefficientTable:
    """Read a coefficient file; unlabeled tables get the file name as provenance."""
    path = Path(path)
    table = parse_table(path.read_text(encoding="utf-8"), provenance=provenance)
    if not table.provenance:
        table = replace(table, provenance=path.name)
    return table


def _plain_digits(raw: str) -> str:
    """Positional (exponent-free) rendering of *raw*, keeping every written digit."""
    return format(Decimal(raw), "f")


def pad_decimals(table: CoefficientTable, d: int) -> CoefficientTable:
    """Append zeros so every entry carries exactly *d* fractional digits.

    Padding never changes a value and must never destroy digits: *d* below
    any entry's declared decimals is refused.
    """
    for entry in table.entries:
        if entry.declared_decimals > d:
            raise RangeError(
                f"cannot pad to {d} decimals: entry n={entry.n} already has {entry.declared_decimals}"
            )
    padded = []
    for entry in table.entries:
        plain = _plain_digits(entry.raw)
        if "." in plain:
            head, frac = plain.split(".")
        else:
            head, frac = plain, ""
        frac = frac.ljust(d, "0")
        raw = head + ("." + frac if frac else "")
        padded.append(CoefficientEntry(entry.n, raw, d))
    return CoefficientTable(tuple(padded), table.provenance)


def round_decimals(table: CoefficientTable, d: int, mode: str = ROUNDED) -> CoefficientTable:
    """Replace every raw string by its *d*-decimal fixed-point rendering.

    Entries of magnitude below half an ulp at *d* become exactly zero.  The
    transform is idempotent at fixed *d* and mode.
    """
    if d < 0:
        raise RangeError(f"decimal count must be nonnegative, got {d}")
    rounded = tuple(
        CoefficientEntry(entry.n, _fixed_string(entry.value(), d, mode), d) for entry in table.entries
    )
    return CoefficientTable(rounded, table.provenance)


def truncate_order(table: CoefficientTable, N: int) -> CoefficientTable:
    """Restrict the table to orders ``0 .. N``."""
    if not 0 <= N <= table.max_order:
        raise RangeError(f"order {N} outside table range 0..{table.max_order}")
    return CoefficientTable(table.entries[: N + 1], table.provenance)


def analytic_head() -> CoefficientTable:
    """The two analytically known coefficients, e_0 = -1 and e_1 = 5/8."""
    return parse_table("0 -1\n1 0.625", provenance="two-electron ground-state 1/Z series (analytic head)")
