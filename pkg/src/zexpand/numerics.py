"""Exact-decimal arithmetic layer shared by every other module.

Values cross module boundaries as decimal strings and are computed on
:class:`decimal.Decimal` under an explicit, immutable
:class:`PrecisionContext`.  Binary floating point never appears, so printed
digits are exactly the digits that were computed; this matters because the
digit-agreement experiments in :mod:`zexpand.analysis` are claims about
printed decimal representations, not about binary approximations.

Two independent rounding vocabularies exist on purpose:

* a context rounding mode (``half-away-from-zero`` or ``truncate``) that
  governs arithmetic at working precision, and
* a fixed-point formatting mode (``rounded`` or ``truncated``) that governs
  how many-digit values are cut down to ``d`` printed decimals.

The module never touches the process-global decimal context, so concurrent
evaluation on independent inputs is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_DOWN, ROUND_HALF_UP, Context, Decimal, localcontext

from .errors import DomainError, ParseError, RangeError

# Arithmetic rounding of a PrecisionContext.
HALF_AWAY_FROM_ZERO = "half-away-from-zero"
TRUNCATE = "truncate"

# Fixed-point formatting modes.
ROUNDED = "rounded"
TRUNCATED = "truncated"

_ARITHMETIC_ROUNDING = {HALF_AWAY_FROM_ZERO: ROUND_HALF_UP, TRUNCATE: ROUND_DOWN}
_FORMAT_ROUNDING = {ROUNDED: ROUND_HALF_UP, TRUNCATED: ROUND_DOWN}

#: Guard digits used internally before rounding back to working precision.
_GUARD_DIGITS = 10


@dataclass(frozen=True)
class PrecisionContext:
    """Working-precision contract: significant decimal digits plus rounding.

    ``digits`` must be at least 30 so that 15-decimal comparisons are never
    limited by the toolkit's own arithmetic.  Instances are immutable and
    safe to share between threads.
    """

    digits: int = 40
    rounding: str = HALF_AWAY_FROM_ZERO

    def __post_init__(self) -> None:
        if self.digits < 30:
            raise ValueError(f"working precision must be at least 30 digits, got {self.digits}")
        if self.rounding not in _ARITHMETIC_ROUNDING:
            raise ValueError(f"unknown rounding mode {self.rounding!r}")

    def decimal_context(self, extra_digits: int = 0) -> Context:
        """A fresh :class:`decimal.Context` at working precision (+ guard digits)."""
        return Context(prec=self.digits + extra_digits, rounding=_ARITHMETIC_ROUNDING[self.rounding])


#: Shared default: 40 significant digits, half-away-from-zero.
DEFAULT_CONTEXT = PrecisionContext()


def _scan_decimal(text: str) -> int:
    """Index of the first offending character of a decimal literal, or -1 if valid.

    Grammar: optional sign, digits, optional ``.`` + digits, optional
    ``e``/``E`` exponent with optional sign and digits.
    """
    i, n = 0, len(text)
    if i < n and text[i] in "+-":
        i += 1
    start = i
    while i < n and "0" <= text[i] <= "9":
        i += 1
    if i == start:
        return i
    if i < n and text[i] == ".":
        i += 1
        start = i
        while i < n and "0" <= text[i] <= "9":
            i += 1
        if i == start:
            return i
    if i < n and text[i] in "eE":
        i += 1
        if i < n and text[i] in "+-":
            i += 1
        start = i
        while i < n and "0" <= text[i] <= "9":
            i += 1
        if i == start:
            return i
    if i != n:
        return i
    return -1


def validate_decimal_text(text: str) -> None:
    """Raise :class:`ParseError` citing the offending position if *text* is malformed."""
    pos = _scan_decimal(text)
    if pos >= 0:
        found = repr(text[pos]) if pos < len(text) else "end of text"
        raise ParseError(f"malformed decimal {text!r}: unexpected {found} at position {pos}")


def parse_decimal(text: str, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
    """Parse *text* into the exact denoted value, rounded to working precision."""
    validate_decimal_text(text)
    return ctx.decimal_context().plus(Decimal(text))


def decimal_places(text: str) -> int:
    """Fractional digits denoted by *text*, with any exponent applied.

    ``"0.6250"`` has 4, ``"-1"`` has 0, ``"2.5E-3"`` (= 0.0025) has 4.
    """
    validate_decimal_text(text)
    exponent = Decimal(text).as_tuple().exponent
    return max(0, -int(exponent))


def _fixed_string(x: Decimal, d: int, mode: str) -> str:
    """Fixed-point rendering of *x* with exactly *d* fractional digits.

    Negative zero is normalised to plain zero so that values rounding to
    zero never print a stray sign.
    """
    if mode not in _FORMAT_ROUNDING:
        raise ValueError(f"unknown format mode {mode!r}; expected {ROUNDED!r} or {TRUNCATED!r}")
    quantum = Decimal(1).scaleb(-d)
    needed = max(1, x.adjusted() + 1) + d + 2
    q = x.quantize(quantum, rounding=_FORMAT_ROUNDING[mode], context=Context(prec=needed))
    if q == 0:
        q = abs(q)
    return format(q, "f")


def format_fixed(x: Decimal, d: int, mode: str = ROUNDED, ctx: PrecisionContext = DEFAULT_CONTEXT) -> str:
    """Format *x* with exactly *d* fractional digits.

    ``rounded`` rounds half away from zero; ``truncated`` drops digits
    beyond *d*.  *d* may not exceed ``ctx.digits + 2``: digits past that
    point were never computed.
    """
    if d < 0:
        raise RangeError(f"fractional digit count must be nonnegative, got {d}")
    if d > ctx.digits + 2:
        raise RangeError(f"cannot format {d} decimals at {ctx.digits}-digit working precision")
    return _fixed_string(x, d, mode)


def pow_half_integer(x: Decimal, two_k: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
    """``x`` raised to the half-integer exponent ``two_k / 2``.

    Even ``two_k`` is an ordinary integer power; odd ``two_k`` requires a
    nonnegative base and is computed as ``sqrt(x) ** two_k`` with guard
    digits, giving relative error well below ``10**(2 - digits)``.
    """
    dc = ctx.decimal_context()
    if two_k == 0:
        return Decimal(1)
    if two_k % 2 == 0:
        k = two_k // 2
        if x == 0 and k < 0:
            raise DomainError("zero base with negative exponent")
        with localcontext(ctx.decimal_context(_GUARD_DIGITS)):
            r = x**k
        return dc.plus(r)
    if x < 0:
        raise DomainError(f"negative base {x} with odd half-integer exponent {two_k}/2")
    if x == 0:
        if two_k < 0:
            raise DomainError("zero base with negative exponent")
        return Decimal(0)
    with localcontext(ctx.decimal_context(_GUARD_DIGITS)):
        r = x.sqrt() ** two_k
    return dc.plus(r)


def parse_half_exponent(text: str) -> int:
    """Parse a half-integer exponent like ``"3/2"`` or ``"2"`` into its doubled value.

    ``"3/2"`` -> 3, ``"2"`` -> 4, ``"0"`` -> 0.
    """
    body = text.strip()
    if "/" in body:
        num, _, den = body.partition("/")
        if den.strip() != "2":
            raise ParseError(f"half-integer exponent {text!r} must have denominator 2")
        try:
            return int(num.strip())
        except ValueError:
            raise ParseError(f"malformed half-integer exponent {text!r}") from None
    try:
        return 2 * int(body)
    except ValueError:
        raise ParseError(f"malformed half-integer exponent {text!r}") from None


def format_half_exponent(two_k: int) -> str:
    """Render a doubled exponent back to ``"3/2"`` / ``"2"`` notation."""
    if two_k % 2 == 0:
        return str(two_k // 2)
    return f"{two_k}/2"
