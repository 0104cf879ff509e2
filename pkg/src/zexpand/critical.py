"""Critical-charge quantities and constrained Puiseux fits near the critical coupling.

At the critical charge the two-electron ground state meets the one-electron
threshold -Z^2/2, so the scaled energy there is exactly -1/2 and its slope
in lambda is known to high precision.  The behaviour just below the
critical coupling is modelled by a terminated expansion in integer and
half-integer powers of ``lt = lambda_cr - lambda``:

    scaled(lambda) = -1/2 - slope*lt + sum_j c_j * lt^(p_j),   p_j in {3/2, 2, 5/2, ...}

The first two terms are pinned by the threshold condition and the slope;
the remaining coefficients are determined by exact interpolation through
supplied energy nodes (a square linear system, not a regression).  The
system is solved with partial pivoting at guard precision and an
infinity-norm condition estimate is always reported, since interpolation
through nearby nodes with fractional powers can be poorly conditioned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal, localcontext
from importlib import resources
from pathlib import Path

from .errors import ArityError, DomainError, ParseError, SingularSystemError, StructureError
from .numerics import (
    DEFAULT_CONTEXT,
    ROUNDED,
    PrecisionContext,
    _fixed_string,
    decimal_places,
    format_half_exponent,
    parse_decimal,
    parse_half_exponent,
    pow_half_integer,
)
from .series import _as_decimal, lambda_of

_GUARD_DIGITS = 10

#: Nodes within this distance of the critical coupling count as the critical
#: point itself and add no interpolation condition: the printed critical
#: charge and coupling are mutually consistent only to ~17 digits and the
#: charge is independently verified to 12 decimals, so a tighter cut would
#: turn constant inconsistencies into huge spurious coefficients.
CRITICAL_NODE_TOLERANCE = Decimal("1e-12")

#: Name -> packaged model file for `preset_model`.
PRESET_MODELS = {"critical-fit": "critical_fit.json"}


@dataclass(frozen=True)
class CriticalConstants:
    """Critical charge, inverse critical charge, and the energy slope there.

    All three are exact decimal strings as printed by their source; the
    product Z_cr * lambda_cr must round to 1 at the shorter printed
    precision.
    """

    Z_cr: str
    lambda_cr: str
    slope: str

    def __post_init__(self) -> None:
        for name, text in (("Z_cr", self.Z_cr), ("lambda_cr", self.lambda_cr), ("slope", self.slope)):
            try:
                parse_decimal(text)
            except ParseError as exc:
                raise StructureError(f"constant {name}: {exc}") from None
        shorter = min(decimal_places(self.Z_cr), decimal_places(self.lambda_cr))
        with localcontext(DEFAULT_CONTEXT.decimal_context(_GUARD_DIGITS)):
            product = Decimal(self.Z_cr) * Decimal(self.lambda_cr)
        if _fixed_string(product, shorter, ROUNDED) != _fixed_string(Decimal(1), shorter, ROUNDED):
            raise StructureError(
                f"Z_cr * lambda_cr = {product} does not round to 1 at {shorter} decimals"
            )


@dataclass(frozen=True)
class EnergyNode:
    """A charge and its ground-state energy in hartree."""

    Z: Decimal
    E: Decimal

    def __post_init__(self) -> None:
        if self.Z <= 0:
            raise DomainError(f"node charge must be positive, got {self.Z}")


@dataclass(frozen=True)
class PuiseuxModel:
    """Expansion point plus (doubled exponent, coefficient) terms.

    Exponents are stored doubled (``3`` means lt^(3/2)) and must be strictly
    increasing; the first ``fixed_count`` terms were pinned rather than
    fitted.
    """

    lambda_cr: Decimal
    terms: tuple[tuple[int, Decimal], ...]
    fixed_count: int = 2

    def __post_init__(self) -> None:
        exponents = [two_k for two_k, _ in self.terms]
        if any(b <= a for a, b in zip(exponents, exponents[1:])):
            raise StructureError(f"model exponents must be strictly increasing, got {exponents}")
        if not 0 <= self.fixed_count <= len(self.terms):
            raise StructureError(f"fixed_count {self.fixed_count} outside 0..{len(self.terms)}")


@dataclass(frozen=True)
class FitResult:
    """A fitted model together with the condition estimate of its linear system."""

    model: PuiseuxModel
    condition: Decimal


def threshold_energy(Z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
    """One-electron threshold -Z^2/2 (the energy at which ionization sets in)."""
    Z = _as_decimal(Z)
    if Z <= 0:
        raise DomainError(f"charge must be positive, got {Z}")
    with localcontext(ctx.decimal_context()):
        return -Z * Z / 2


def ionization_energy(Z, E, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
    """Ionization energy -Z^2/2 - E; positive for a bound ground state, zero at the critical charge."""
    Z = _as_decimal(Z)
    E = _as_decimal(E)
    if Z <= 0:
        raise DomainError(f"charge must be positive, got {Z}")
    with localcontext(ctx.decimal_context()):
        return -Z * Z / 2 - E


def tilde_lambda(lam, lambda_cr, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
    """Distance below the critical coupling, lambda_cr - lambda (>= 0)."""
    lam = _as_decimal(lam)
    lambda_cr = _as_decimal(lambda_cr)
    if lam > lambda_cr:
        raise DomainError(f"lambda {lam} exceeds the critical coupling {lambda_cr}; model undefined there")
    return ctx.decimal_context().subtract(lambda_cr, lam)


def eval_scaled(model: PuiseuxModel, lam, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
    """Scaled energy sum_j c_j * (lambda_cr - lambda)^(p_j)."""
    lt = tilde_lambda(lam, model.lambda_cr, ctx)
    with localcontext(ctx.decimal_context()):
        total = Decimal(0)
        for two_k, coeff in model.terms:
            total += coeff * pow_half_integer(lt, two_k, ctx)
        return +total


def eval_energy(model: PuiseuxModel, Z, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Decimal:
    """Physical energy Z^2 * scaled(1/Z)."""
    Z = _as_decimal(Z)
    lam = lambda_of(Z, ctx)
    scaled = eval_scaled(model, lam, ctx)
    with localcontext(ctx.decimal_context()):
        return Z * Z * scaled


def _solve_with_inverse(matrix: list[list[Decimal]], rhs: list[Decimal], dc) -> tuple[list[Decimal], Decimal]:
    """Gauss-Jordan with partial pivoting; returns the solution and the inf-norm condition number."""
    n = len(matrix)
    width = n + 1 + n
    rows = [list(matrix[i]) + [rhs[i]] + [Decimal(1 if j == i else 0) for j in range(n)] for i in range(n)]
    with localcontext(dc):
        for col in range(n):
            pivot_row = max(range(col, n), key=lambda r: abs(rows[r][col]))
            if rows[pivot_row][col] == 0:
                raise SingularSystemError(
                    f"singular interpolation system: no usable pivot in column {col} "
                    "(duplicate nodes or ill-posed exponents)"
                )
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            pivot = rows[col][col]
            for r in range(n):
                if r == col:
                    continue
                factor = rows[r][col] / pivot
                if factor == 0:
                    continue
                for c in range(col, width):
                    rows[r][c] -= factor * rows[col][c]
        solution = [rows[i][n] / rows[i][i] for i in range(n)]
        inverse_rows = [[rows[i][n + 1 + j] / rows[i][i] for j in range(n)] for i in range(n)]
        norm_a = max(sum(abs(v) for v in row) for row in matrix)
        norm_inv = max(sum(abs(v) for v in row) for row in inverse_rows)
        condition = norm_a * norm_inv
    return solution, condition


def fit_puiseux(
    nodes: list[EnergyNode],
    constants: CriticalConstants,
    free_exponents: list[int],
    ctx: PrecisionContext = DEFAULT_CONTEXT,
) -> FitResult:
    """Interpolate the scaled energy through *nodes* with pinned constant and slope terms.

    ``free_exponents`` are doubled half-integers (``[3, 4]`` means lt^(3/2)
    and lt^2) and must match, one for one, the nodes strictly below the
    critical coupling; a node at the critical charge (within
    :data:`CRITICAL_NODE_TOLERANCE` of it) adds no condition since the
    constant term is already pinned.  Duplicate charges make the system
    singular.
    """
    lam_cr = parse_decimal(constants.lambda_cr, ctx)
    slope = parse_decimal(constants.slope, ctx)
    exponents = sorted(free_exponents)
    if len(set(exponents)) != len(exponents):
        raise ArityError(f"free exponents must be distinct, got {free_exponents}")
    if any(two_k <= 2 for two_k in exponents):
        raise DomainError("free exponents must lie above the fixed linear term (exponent > 1)")

    seen: set[Decimal] = set()
    for node in nodes:
        if node.Z in seen:
            raise SingularSystemError(f"duplicate node charge Z={node.Z} makes the system singular")
        seen.add(node.Z)

    guard = ctx.decimal_context(_GUARD_DIGITS)
    guard_ctx = PrecisionContext(ctx.digits + _GUARD_DIGITS, ctx.rounding)
    half = Decimal("0.5")
    conditions: list[tuple[Decimal, Decimal]] = []
    with localcontext(guard):
        for node in nodes:
            lam = Decimal(1) / node.Z
            lt = lam_cr - lam
            if abs(lt) <= CRITICAL_NODE_TOLERANCE:
                continue
            if lt < 0:
                raise DomainError(f"node Z={node.Z} lies below the critical charge; model undefined there")
            scaled = node.E / (node.Z * node.Z)
            residual = scaled - (-half - slope * lt)
            conditions.append((lt, residual))
    if len(conditions) != len(exponents):
        raise ArityError(
            f"{len(conditions)} nodes below the critical coupling vs {len(exponents)} free exponents"
        )

    fixed_terms = ((0, -half), (2, ctx.decimal_context().minus(slope)))
    if not exponents:
        model = PuiseuxModel(lambda_cr=lam_cr, terms=fixed_terms, fixed_count=2)
        return FitResult(model=model, condition=Decimal(1))

    matrix = [[pow_half_integer(lt, two_k, guard_ctx) for two_k in exponents] for lt, _ in conditions]
    rhs = [residual for _, residual in conditions]
    solution, condition = _solve_with_inverse(matrix, rhs, guard)
    dc = ctx.decimal_context()
    fitted = tuple((two_k, dc.plus(c)) for two_k, c in zip(exponents, solution))
    model = PuiseuxModel(lambda_cr=lam_cr, terms=fixed_terms + fitted, fixed_count=2)
    return FitResult(model=model, condition=dc.plus(condition))


def parse_nodes(text: str, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list[EnergyNode]:
    """Parse ``Z; E`` lines into energy nodes; ``#`` starts a comment."""
    nodes = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = [f.strip() for f in stripped.split(";")]
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected 'Z; E', got {stripped!r}")
        try:
            z = parse_decimal(fields[0], ctx)
            e = parse_decimal(fields[1], ctx)
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
        nodes.append(EnergyNode(Z=z, E=e))
    return nodes


def load_nodes(path: str | Path, ctx: PrecisionContext = DEFAULT_CONTEXT) -> list[EnergyNode]:
    return parse_nodes(Path(path).read_text(encoding="utf-8"), ctx)


def parse_constants(text: str) -> CriticalConstants:
    """Parse ``name value`` lines carrying Z_cr, lambda_cr, and slope."""
    found: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if len(fields) != 2:
            raise ParseError(f"line {lineno}: expected 'name value', got {stripped!r}")
        name, value = fields
        if name not in ("Z_cr", "lambda_cr", "slope"):
            raise ParseError(f"line {lineno}: unknown constant {name!r}")
        if name in found:
            raise ParseError(f"line {lineno}: duplicate constant {name!r}")
        found[name] = value
    missing = {"Z_cr", "lambda_cr", "slope"} - set(found)
    if missing:
        raise ParseError(f"missing constants: {', '.join(sorted(missing))}")
    return CriticalConstants(**found)


def load_constants(path: str | Path) -> CriticalConstants:
    return parse_constants(Path(path).read_text(encoding="utf-8"))


def bundled_constants() -> CriticalConstants:
    """The critical-point constants shipped with the package."""
    text = (resources.files("zexpand") / "data" / "critical_constants.txt").read_text(encoding="utf-8")
    return parse_constants(text)


def _model_from_json(payload: dict, ctx: PrecisionContext) -> PuiseuxModel:
    try:
        lam_cr = parse_decimal(payload["lambda_cr"], ctx)
        fixed_count = int(payload["fixed_count"])
        terms = tuple(
            (parse_half_exponent(exp), parse_decimal(coeff, ctx)) for exp, coeff in payload["terms"]
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"model file missing or malformed field: {exc}") from None
    return PuiseuxModel(lambda_cr=lam_cr, terms=terms, fixed_count=fixed_count)


def load_model(path: str | Path, ctx: PrecisionContext = DEFAULT_CONTEXT) -> PuiseuxModel:
    """Read a model from JSON (all numbers stored as strings to preserve digits)."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return _model_from_json(payload, ctx)


def save_model(model: PuiseuxModel, path: str | Path) -> None:
    payload = {
        "lambda_cr": str(model.lambda_cr),
        "fixed_count": model.fixed_count,
        "terms": [[format_half_exponent(two_k), str(coeff)] for two_k, coeff in model.terms],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def preset_model(name: str = "critical-fit", ctx: PrecisionContext = DEFAULT_CONTEXT) -> PuiseuxModel:
    """A named model shipped with the package (see :data:`PRESET_MODELS`)."""
    try:
        resource = PRESET_MODELS[name]
    except KeyError:
        raise ParseError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESET_MODELS))}") from None
    payload = json.loads((resources.files("zexpand") / "data" / resource).read_text(encoding="utf-8"))
    return _model_from_json(payload, ctx)
