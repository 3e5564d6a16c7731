import math
import random

import numpy as np
import pytest

from pbwsim import (
    Bs,
    Ccd,
    Circuit,
    CircuitSyntaxError,
    D,
    DPrime,
    Literal,
    LiteralPi,
    Loss,
    Ps,
    Repeat,
    SweepVar,
    ValidationError,
    beam_splitter,
    ccd_block,
    compile_circuit,
    d_block,
    expand,
    mat_pow,
    max_abs_diff,
    parse,
    phase_lower,
    pretty_print,
)

# --- parsing ----------------------------------------------------------------


def test_parse_simple_sequence():
    ast = parse("bs ps lower(phi) bs")
    assert ast == Circuit((Bs(), Ps("lower", SweepVar(1.0)), Bs()))


def test_parse_repeat():
    assert parse("repeat 3 { ccd }") == Circuit((Repeat(3, (Ccd(),)),))


def test_parse_empty():
    assert parse("") == Circuit(())
    assert parse("  \n\t # just a comment\n") == Circuit(())


def test_parse_macros_and_loss():
    ast = parse("d dprime ccd loss(0.9)")
    assert ast == Circuit((D(), DPrime(), Ccd(), Loss(0.9)))


def test_parse_phase_forms():
    ast = parse("ps lower(phi) ps upper(2*phi) ps lower(1.25) ps upper(0.5 pi)")
    assert ast == Circuit(
        (
            Ps("lower", SweepVar(1.0)),
            Ps("upper", SweepVar(2.0)),
            Ps("lower", Literal(1.25)),
            Ps("upper", LiteralPi(0.5)),
        )
    )


def test_parse_signed_and_exponent_numbers():
    ast = parse("ps lower(-1.5e-1) ps upper(-0.5 pi) ps lower(-2*phi)")
    assert ast == Circuit(
        (
            Ps("lower", Literal(-0.15)),
            Ps("upper", LiteralPi(-0.5)),
            Ps("lower", SweepVar(-2.0)),
        )
    )


def test_parse_accepts_crlf_and_comments():
    text = "bs\r\n# a comment\r\nps lower(phi)  # trailing\r\nbs\r\n"
    assert parse(text) == Circuit((Bs(), Ps("lower", SweepVar(1.0)), Bs()))


def test_parse_bad_arm_reports_position():
    with pytest.raises(CircuitSyntaxError) as err:
        parse("ps sideways(phi)")
    assert err.value.line == 1
    assert err.value.col == 4
    assert "sideways" in str(err.value)


def test_parse_error_position_on_later_line():
    with pytest.raises(CircuitSyntaxError) as err:
        parse("bs\nps sideways(phi)")
    assert err.value.line == 2
    assert err.value.col == 4


def test_parse_unknown_keyword():
    with pytest.raises(CircuitSyntaxError) as err:
        parse("bs garbage bs")
    assert err.value.col == 4


def test_parse_missing_paren():
    with pytest.raises(CircuitSyntaxError):
        parse("ps lower phi)")


def test_parse_unbalanced_braces():
    with pytest.raises(CircuitSyntaxError):
        parse("repeat 2 { bs")
    with pytest.raises(CircuitSyntaxError):
        parse("bs }")


def test_parse_rejects_zero_repeat():
    with pytest.raises(CircuitSyntaxError) as err:
        parse("repeat 0 { bs }")
    assert err.value.col == 8


def test_parse_rejects_fractional_repeat():
    with pytest.raises(CircuitSyntaxError):
        parse("repeat 2.5 { bs }")


def test_parse_rejects_out_of_range_loss():
    with pytest.raises(CircuitSyntaxError):
        parse("loss(1.5)")
    with pytest.raises(CircuitSyntaxError):
        parse("loss(0)")


def test_parse_rejects_overflowing_number():
    with pytest.raises(CircuitSyntaxError) as err:
        parse("ps lower(1e999)")
    assert "overflow" in str(err.value)


def test_parse_rejects_unexpected_character():
    with pytest.raises(CircuitSyntaxError) as err:
        parse("bs @ bs")
    assert err.value.col == 4


def test_ast_invariants_enforced_on_construction():
    with pytest.raises(ValidationError):
        Ps("sideways", SweepVar(1.0))
    with pytest.raises(ValidationError):
        Loss(0.0)
    with pytest.raises(ValidationError):
        Repeat(0, (Bs(),))
    with pytest.raises(ValidationError):
        SweepVar(float("inf"))


# --- pretty printing ----------------------------------------------------------


def test_pretty_print_single_statement():
    assert pretty_print(Circuit((Bs(),))) == "bs"


def test_pretty_print_repeat_layout():
    ast = Circuit((Repeat(2, (D(), DPrime())),))
    assert pretty_print(ast) == "repeat 2 {\n  d\n  dprime\n}"


def test_pretty_print_nested_indent():
    ast = Circuit((Repeat(2, (Repeat(3, (Bs(),)),)),))
    assert pretty_print(ast) == "repeat 2 {\n  repeat 3 {\n    bs\n  }\n}"


def test_pretty_print_phase_forms():
    ast = Circuit(
        (
            Ps("lower", SweepVar(1.0)),
            Ps("upper", SweepVar(2.5)),
            Ps("lower", Literal(0.75)),
            Ps("upper", LiteralPi(-0.5)),
            Loss(0.875),
        )
    )
    text = pretty_print(ast)
    assert text.splitlines() == [
        "ps lower(phi)",
        "ps upper(2.5*phi)",
        "ps lower(0.75)",
        "ps upper(-0.5 pi)",
        "loss(0.875)",
    ]
    assert parse(text) == ast


# --- round-trip fuzzing ---------------------------------------------------------


def _random_float(rng: random.Random) -> float:
    value = rng.uniform(-4.0, 4.0) * 10.0 ** rng.randint(-8, 8)
    return value if rng.random() < 0.9 else float(rng.randint(-5, 5))


def _random_phase(rng: random.Random):
    pick = rng.randrange(4)
    if pick == 0:
        return SweepVar(1.0)
    if pick == 1:
        return SweepVar(_random_float(rng))
    if pick == 2:
        return Literal(_random_float(rng))
    return LiteralPi(_random_float(rng))


def _random_stmt(rng: random.Random, depth: int):
    top = 7 if depth < 3 else 6
    pick = rng.randrange(top)
    if pick == 0:
        return Bs()
    if pick == 1:
        return Ps(rng.choice(("upper", "lower")), _random_phase(rng))
    if pick == 2:
        return Loss(rng.uniform(1e-6, 1.0))
    if pick == 3:
        return D()
    if pick == 4:
        return DPrime()
    if pick == 5:
        return Ccd()
    body = tuple(_random_stmt(rng, depth + 1) for _ in range(rng.randrange(0, 4)))
    return Repeat(rng.randint(1, 4), body)


def random_circuit(rng: random.Random) -> Circuit:
    return Circuit(tuple(_random_stmt(rng, 0) for _ in range(rng.randrange(0, 7))))


def test_round_trip_fuzz():
    rng = random.Random(20240817)
    for _ in range(2000):
        ast = random_circuit(rng)
        assert parse(pretty_print(ast)) == ast


# --- compilation -----------------------------------------------------------------


def test_compile_d_macro_matches_block():
    for phi in np.linspace(0.0, 2.0 * np.pi, 25):
        assert max_abs_diff(compile_circuit(parse("d"), phi), d_block(phi)) < 1e-14


def test_compile_ccd_matches_block_pair():
    rng = np.random.default_rng(21)
    for phi in rng.uniform(0.0, 2.0 * np.pi, size=100):
        lhs = compile_circuit(parse("d dprime"), phi)
        assert max_abs_diff(lhs, ccd_block(phi)) < 1e-13


def test_compile_repeat_matches_matrix_power():
    phi = 0.815
    lhs = compile_circuit(parse("repeat 2 { ccd }"), phi)
    assert max_abs_diff(lhs, mat_pow(ccd_block(phi), 2)) < 1e-13


def test_compile_empty_is_identity():
    assert max_abs_diff(compile_circuit(parse(""), 0.3), np.eye(2)) == 0.0


def test_compile_order_last_statement_leftmost():
    phi = 0.42
    lhs = compile_circuit(parse("ps lower(phi) bs"), phi)
    assert max_abs_diff(lhs, beam_splitter() @ phase_lower(phi)) < 1e-15


def test_compile_loss_statement():
    lhs = compile_circuit(parse("loss(0.9) loss(0.9)"), 0.0)
    assert max_abs_diff(lhs, 0.81 * np.eye(2)) < 1e-15


def test_compile_scaled_sweep_variable():
    phi = 0.633
    lhs = compile_circuit(parse("bs ps lower(2*phi) bs"), phi)
    assert max_abs_diff(lhs, d_block(2 * phi)) < 1e-14


def test_compile_pi_literal():
    lhs = compile_circuit(parse("ps lower(0.5 pi)"), 0.0)
    assert max_abs_diff(lhs, phase_lower(math.pi / 2)) < 1e-15


def test_expansion_counts():
    assert len(expand(parse("d"))) == 3
    assert len(expand(parse("ccd"))) == 6
    body = parse("repeat 5 { ccd bs }")
    assert len(expand(body)) == 5 * 7
    nested = parse("repeat 2 { repeat 3 { d } }")
    assert len(expand(nested)) == 2 * 3 * 3


def test_expand_produces_primitives_only():
    for stmt in expand(parse("repeat 2 { ccd loss(0.5) }")):
        assert isinstance(stmt, (Bs, Ps, Loss))
