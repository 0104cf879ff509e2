import json
from decimal import Decimal

import pytest

from zexpand.critical import (
    CriticalConstants,
    EnergyNode,
    PuiseuxModel,
    bundled_constants,
    eval_energy,
    eval_scaled,
    fit_puiseux,
    ionization_energy,
    load_model,
    load_nodes,
    parse_constants,
    parse_nodes,
    preset_model,
    save_model,
    threshold_energy,
    tilde_lambda,
)
from zexpand.errors import (
    ArityError,
    DomainError,
    ParseError,
    SingularSystemError,
    StructureError,
)
from zexpand.numerics import ROUNDED, format_fixed, parse_decimal


@pytest.fixture(scope="module")
def constants() -> CriticalConstants:
    return bundled_constants()


class TestCriticalConstants:
    def test_bundled_values(self, constants):
        assert constants.Z_cr == "0.91102822407725573"
        assert constants.lambda_cr == "1.09766083373855980"
        assert constants.slope == "0.2451890639"

    def test_reciprocal_invariant_enforced(self):
        with pytest.raises(StructureError, match="round to 1"):
            CriticalConstants(Z_cr="0.9", lambda_cr="1.2", slope="0.1")
        CriticalConstants(Z_cr="0.5", lambda_cr="2.0", slope="0.1")

    def test_malformed_value_rejected(self):
        with pytest.raises(StructureError, match="slope"):
            CriticalConstants(Z_cr="0.5", lambda_cr="2.0", slope="x")

    def test_parse_constants_errors(self):
        with pytest.raises(ParseError, match="missing"):
            parse_constants("Z_cr 0.5\nlambda_cr 2.0\n")
        with pytest.raises(ParseError, match="duplicate"):
            parse_constants("Z_cr 0.5\nZ_cr 0.5\nlambda_cr 2.0\nslope 0.1\n")
        with pytest.raises(ParseError, match="unknown"):
            parse_constants("zcr 0.5\nlambda_cr 2.0\nslope 0.1\n")
        with pytest.raises(ParseError, match="line 1"):
            parse_constants("Z_cr\nlambda_cr 2.0\nslope 0.1\n")


class TestThresholdAndIonization:
    def test_threshold_at_critical_charge(self, ctx):
        z_cr = parse_decimal("0.91102822407725573", ctx)
        assert format_fixed(threshold_energy(z_cr, ctx), 15, ROUNDED, ctx) == "-0.414986212532679"

    def test_hydrogenic_values(self, ctx):
        assert threshold_energy(1, ctx) == Decimal("-0.5")
        assert threshold_energy(2, ctx) == -2

    def test_quadratic_scaling(self, ctx):
        dc = ctx.decimal_context()
        for k in (2, 3, 10):
            kd = Decimal(k)
            assert threshold_energy(dc.multiply(kd, 2), ctx) == dc.multiply(kd * kd, threshold_energy(2, ctx))

    def test_domain(self, ctx):
        with pytest.raises(DomainError):
            threshold_energy(0, ctx)

    def test_ionization_vanishes_at_threshold(self, ctx):
        for z in (1, 2, Decimal("0.91102822407725573")):
            assert ionization_energy(z, threshold_energy(z, ctx), ctx) == 0

    def test_ionization_from_reference_energies(self, ctx):
        e1 = ionization_energy(1, parse_decimal("-0.527751016544377", ctx), ctx)
        assert e1 == Decimal("0.027751016544377")
        e2 = ionization_energy(2, parse_decimal("-2.903724377034119", ctx), ctx)
        assert e2 == Decimal("0.903724377034119")
        assert e1 > 0 and e2 > 0


class TestTildeLambda:
    def test_zero_at_critical(self, ctx):
        lam_cr = parse_decimal("1.09766083373855980", ctx)
        assert tilde_lambda(lam_cr, lam_cr, ctx) == 0

    def test_printed_offsets(self, ctx):
        lam_cr = parse_decimal("1.09766083373855980", ctx)
        assert tilde_lambda(Decimal(1), lam_cr, ctx) == Decimal("0.09766083373855980")
        assert tilde_lambda(Decimal("0.8"), lam_cr, ctx) == Decimal("0.29766083373855980")

    def test_beyond_critical_rejected(self, ctx):
        lam_cr = parse_decimal("1.09766083373855980", ctx)
        with pytest.raises(DomainError):
            tilde_lambda(Decimal("1.1"), lam_cr, ctx)


class TestPuiseuxModel:
    def test_exponents_must_increase(self, ctx):
        with pytest.raises(StructureError, match="increasing"):
            PuiseuxModel(Decimal(1), ((2, Decimal(1)), (2, Decimal(2))))

    def test_fixed_count_bounds(self):
        with pytest.raises(StructureError):
            PuiseuxModel(Decimal(1), ((0, Decimal(1)),), fixed_count=2)

    def test_preset_shape(self, ctx):
        model = preset_model("critical-fit", ctx)
        assert [two_k for two_k, _ in model.terms] == [0, 2, 3, 4, 5, 6]
        assert model.fixed_count == 2
        assert model.terms[0][1] == Decimal("-0.5")
        assert model.terms[1][1] == Decimal("-0.2451890639")

    def test_unknown_preset(self, ctx):
        with pytest.raises(ParseError, match="unknown preset"):
            preset_model("nope", ctx)


class TestEvaluation:
    def test_scaled_is_minus_half_at_critical(self, ctx):
        model = preset_model("critical-fit", ctx)
        assert eval_scaled(model, model.lambda_cr, ctx) == Decimal("-0.5")

    def test_scaled_at_unit_coupling(self, ctx):
        model = preset_model("critical-fit", ctx)
        scaled = eval_scaled(model, Decimal(1), ctx)
        assert format_fixed(scaled, 12, ROUNDED, ctx) == "-0.527751009588"

    def test_energy_equals_scaled_at_unit_charge(self, ctx):
        model = preset_model("critical-fit", ctx)
        assert eval_energy(model, 1, ctx) == eval_scaled(model, Decimal(1), ctx)

    def test_energy_below_critical_charge_rejected(self, ctx):
        model = preset_model("critical-fit", ctx)
        with pytest.raises(DomainError):
            eval_energy(model, Decimal("0.9"), ctx)


def generator_model(constants, ctx, extra_terms):
    lam_cr = parse_decimal(constants.lambda_cr, ctx)
    slope = parse_decimal(constants.slope, ctx)
    fixed = ((0, Decimal("-0.5")), (2, -slope))
    return PuiseuxModel(lambda_cr=lam_cr, terms=fixed + tuple(extra_terms), fixed_count=2)


class TestFitPuiseux:
    def test_roundtrip_two_terms(self, constants, ctx):
        generator = generator_model(constants, ctx, [(3, Decimal("-0.0315")), (4, Decimal("0.4"))])
        nodes = [EnergyNode(z, eval_energy(generator, z, ctx)) for z in (Decimal("0.95"), Decimal(1))]
        result = fit_puiseux(nodes, constants, [3, 4], ctx)
        tol = Decimal(10) ** (-ctx.digits + 10)
        for (_, want), (_, got) in zip(generator.terms[2:], result.model.terms[2:]):
            assert abs(got - want) <= tol * abs(want)
        assert result.condition >= 1

    def test_interpolation_property(self, constants, ctx):
        generator = generator_model(constants, ctx, [(3, Decimal("0.2")), (4, Decimal("-0.7")), (5, Decimal("0.31"))])
        charges = (Decimal("0.95"), Decimal("1.05"), Decimal("1.2"))
        nodes = [EnergyNode(z, eval_energy(generator, z, ctx)) for z in charges]
        model = fit_puiseux(nodes, constants, [3, 4, 5], ctx).model
        dc = ctx.decimal_context()
        tol = Decimal(10) ** (-ctx.digits + 8)
        for node in nodes:
            err = abs(dc.subtract(eval_energy(model, node.Z, ctx), node.E))
            assert err <= tol * abs(node.E)

    def test_critical_charge_node_adds_no_condition(self, constants, ctx):
        generator = generator_model(constants, ctx, [(3, Decimal("-0.0315")), (4, Decimal("0.4"))])
        z_cr = parse_decimal(constants.Z_cr, ctx)
        nodes = [EnergyNode(z_cr, threshold_energy(z_cr, ctx))] + [
            EnergyNode(z, eval_energy(generator, z, ctx)) for z in (Decimal("0.95"), Decimal(1))
        ]
        result = fit_puiseux(nodes, constants, [3, 4], ctx)
        tol = Decimal(10) ** (-ctx.digits + 10)
        for (_, want), (_, got) in zip(generator.terms[2:], result.model.terms[2:]):
            assert abs(got - want) <= tol * abs(want)

    def test_fixed_part_only(self, constants, ctx):
        z_cr = parse_decimal(constants.Z_cr, ctx)
        result = fit_puiseux([EnergyNode(z_cr, threshold_energy(z_cr, ctx))], constants, [], ctx)
        assert len(result.model.terms) == 2
        assert result.condition == 1
        assert eval_scaled(result.model, result.model.lambda_cr, ctx) == Decimal("-0.5")

    def test_arity_mismatch(self, constants, ctx):
        nodes = [EnergyNode(Decimal(1), Decimal("-0.52"))]
        with pytest.raises(ArityError):
            fit_puiseux(nodes, constants, [3, 4], ctx)

    def test_duplicate_nodes_are_singular(self, constants, ctx):
        nodes = [EnergyNode(Decimal(1), Decimal("-0.52")), EnergyNode(Decimal(1), Decimal("-0.53"))]
        with pytest.raises(SingularSystemError, match="duplicate"):
            fit_puiseux(nodes, constants, [3, 4], ctx)

    def test_duplicate_exponents_rejected(self, constants, ctx):
        nodes = [EnergyNode(Decimal(1), Decimal("-0.52")), EnergyNode(Decimal("0.95"), Decimal("-0.46"))]
        with pytest.raises(ArityError, match="distinct"):
            fit_puiseux(nodes, constants, [3, 3], ctx)

    def test_exponents_must_exceed_fixed_ladder(self, constants, ctx):
        nodes = [EnergyNode(Decimal(1), Decimal("-0.52"))]
        with pytest.raises(DomainError, match="above the fixed"):
            fit_puiseux(nodes, constants, [2], ctx)

    def test_node_below_critical_charge_rejected(self, constants, ctx):
        nodes = [EnergyNode(Decimal("0.5"), Decimal("-0.2"))]
        with pytest.raises(DomainError, match="below the critical charge"):
            fit_puiseux(nodes, constants, [3], ctx)


class TestNodeAndModelFiles:
    def test_parse_nodes(self, ctx):
        nodes = parse_nodes("# two nodes\n1; -0.527751016544377\n0.95; -0.462124\n", ctx)
        assert len(nodes) == 2
        assert nodes[0].Z == 1

    def test_parse_nodes_errors(self, ctx):
        with pytest.raises(ParseError, match="line 1"):
            parse_nodes("1, -0.5\n", ctx)
        with pytest.raises(ParseError, match="line 2"):
            parse_nodes("1; -0.5\n2; oops\n", ctx)

    def test_node_charge_positive(self):
        with pytest.raises(DomainError):
            EnergyNode(Decimal(0), Decimal(1))

    def test_load_nodes(self, tmp_path, ctx):
        path = tmp_path / "nodes.txt"
        path.write_text("1; -0.5\n", encoding="utf-8")
        assert load_nodes(path, ctx)[0].E == Decimal("-0.5")

    def test_model_save_load_roundtrip(self, tmp_path, ctx):
        model = preset_model("critical-fit", ctx)
        path = tmp_path / "model.json"
        save_model(model, path)
        back = load_model(path, ctx)
        assert back == model
        payload = json.loads(path.read_text(encoding="utf-8"))
        assert payload["terms"][2][0] == "3/2"

    def test_model_file_missing_field(self, tmp_path, ctx):
        path = tmp_path / "broken.json"
        path.write_text('{"lambda_cr": "1.1"}', encoding="utf-8")
        with pytest.raises(ParseError):
            load_model(path, ctx)
