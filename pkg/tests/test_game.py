from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from idgames import games
from idgames.game import (
    Box,
    DeterministicStrategy,
    GameFunction,
    InputDistribution,
    Scenario,
    ScenarioMismatch,
    decode_input,
    decode_output,
    encode_input,
    encode_output,
    evaluate_deterministic,
    game_from_document,
    game_to_document,
    parse_table,
    serialize_table,
    winning_probability,
)

S222 = Scenario.parse("2,2,2")
S232 = Scenario.parse("2,3,2")
S322 = Scenario.parse("3,2,2")

ADDITION_TEXT = r"""
x2\x1 (y2,y1) & 0 & 1 & 2 & 3
0 & 0,0 & 0,1 & 1,0 & 1,1
1 & 0,1 & 1,0 & 1,1 & 0,0
2 & 1,0 & 1,1 & 0,0 & 0,1
3 & 1,1 & 0,0 & 0,1 & 1,0
"""


def random_function(s, rng):
    return GameFunction(s, tuple(int(v) for v in rng.integers(0, s.n_outputs, s.n_inputs)))


def random_box(s, rng, exact=True):
    if exact:
        rows = []
        for _ in range(s.n_inputs):
            w = [Fraction(int(v)) for v in rng.integers(0, 5, s.n_outputs)]
            w[0] += 1
            tot = sum(w)
            rows.append([v / tot for v in w])
        return Box(s, np.array(rows, dtype=object))
    return Box(s, rng.dirichlet(np.ones(s.n_outputs), size=s.n_inputs), exact=False)


class TestEncoding:
    def test_examples(self):
        assert encode_input((0, 0), S232) == 0
        assert encode_input((2, 1), S232) == 5
        assert encode_input((1, 1, 1), S322) == 7

    @pytest.mark.parametrize("s", [S222, S232, S322, Scenario(2, (3, 4), 2)])
    def test_exhaustive_roundtrip(self, s):
        for x in range(s.n_inputs):
            assert encode_input(decode_input(x, s), s) == x
        for y in range(s.n_outputs):
            assert encode_output(decode_output(y, s), s) == y

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            encode_input((3, 0), S232)
        with pytest.raises(IndexError):
            decode_input(9, S232)
        with pytest.raises(IndexError):
            encode_output((2, 0), S232)

    def test_function_int_bijection(self):
        codes = set()
        for c in range(S222.n_functions):
            f = GameFunction.from_int(S222, c)
            assert f.to_int() == c
            codes.add(f.table)
        assert len(codes) == 256

    @given(st.integers(0, 4**9 - 1))
    def test_function_int_roundtrip(self, code):
        assert GameFunction.from_int(S232, code).to_int() == code

    def test_scenario_parse(self):
        assert Scenario.parse("3,2,2") == Scenario(3, (2, 2, 2), 2)
        with pytest.raises(ValueError):
            Scenario.parse("2,2")
        assert str(S232) == "2,3,2"


class TestEvaluator:
    def test_highest_sdp_all_zero(self):
        f = games.get("highest_sdp")
        zero = DeterministicStrategy(f.scenario, ((0, 0, 0), (0, 0, 0)))
        assert winning_probability(f, zero.to_box()) == Fraction(4, 9)
        assert evaluate_deterministic(f, zero) == Fraction(4, 9)

    def test_addition_all_zero(self):
        f = games.get("addition")
        zero = DeterministicStrategy(f.scenario, ((0,) * 4, (0,) * 4))
        assert evaluate_deterministic(f, zero) == Fraction(1, 4)

    def test_uniform_box(self, rng):
        for _ in range(5):
            assert winning_probability(random_function(S232, rng), Box.uniform(S232)) == Fraction(1, 4)

    def test_constant_match(self):
        f = GameFunction.constant(S232, (1, 0))
        d = DeterministicStrategy(S232, ((1, 1, 1), (0, 0, 0)))
        assert evaluate_deterministic(f, d) == 1

    def test_deterministic_agrees_exhaustive_232(self, rng):
        f = random_function(S232, rng)
        for d in DeterministicStrategy.all(S232):
            assert winning_probability(f, d.to_box()) == evaluate_deterministic(f, d)

    def test_affine_in_box(self, rng):
        for s in (S232, S322):
            f = random_function(s, rng)
            b1, b2 = random_box(s, rng), random_box(s, rng)
            lam = Fraction(int(rng.integers(0, 8)), 7)
            lhs = winning_probability(f, b1.mix(b2, lam))
            assert lhs == lam * winning_probability(f, b1) + (1 - lam) * winning_probability(f, b2)

    def test_bounds(self, rng):
        for _ in range(20):
            w = winning_probability(random_function(S322, rng), random_box(S322, rng))
            assert 0 <= w <= 1
            w = winning_probability(random_function(S322, rng), random_box(S322, rng, exact=False))
            assert 0 <= w <= 1

    def test_nonuniform_q(self):
        f = GameFunction.constant(S222, 0)
        q = InputDistribution(S222, (Fraction(1), Fraction(0), Fraction(0), Fraction(0)))
        e = np.full((4, 4), Fraction(0), dtype=object)
        e[0, 0] = 1
        e[1:, 3] = 1
        assert winning_probability(f, Box(S222, e), q) == 1
        assert winning_probability(f, Box(S222, e)) == Fraction(1, 4)

    def test_errors(self):
        f = GameFunction.constant(S222, 0)
        with pytest.raises(ScenarioMismatch):
            winning_probability(f, Box.uniform(S232))
        bad = np.full((4, 4), Fraction(1, 3), dtype=object)
        with pytest.raises(ValueError):
            winning_probability(f, Box(S222, bad))
        with pytest.raises(ScenarioMismatch):
            evaluate_deterministic(f, DeterministicStrategy(S232, ((0,) * 3, (0,) * 3)))


class TestTables:
    def test_parse_addition(self):
        f = parse_table(ADDITION_TEXT)
        assert f == games.get("addition")
        assert f((1, 1)) == (0, 1)  # (y1, y2): the printed cell "1,0" is y2,y1

    def test_addition_rule(self):
        f = games.get("addition")
        for x1 in range(4):
            for x2 in range(4):
                y1, y2 = f((x1, x2))
                assert 2 * y2 + y1 == (x1 + x2) % 4

    def test_roundtrip(self):
        for name in ("highest_sdp", "facet", "symmetric5"):
            f = games.get(name)
            text = serialize_table(f)
            assert parse_table(text) == f
            assert serialize_table(parse_table(text)).split() == text.split()

    @pytest.mark.parametrize("text", [
        "0,0 | 2,0\n0,0 | 0,0",        # symbol out of range
        "0,0 | 0,0\n0,0",              # ragged rows
        "0,0 | 00\n0,0 | 0,0",         # malformed cell
        "0;0 | 0,0\n0,0 | 0,0",
    ])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            parse_table(text)

    def test_document_roundtrip(self, rng):
        for s in (S232, S322, Scenario(2, (2, 3), 3)):
            f = random_function(s, rng)
            assert game_from_document(game_to_document(f)) == f

    def test_bundled_files_match(self):
        for name in games.NAMES:
            assert games.load_bundled(name) == games.get(name)

    def test_tripartite_formula(self):
        f = games.get("tripartite")
        for x in S322.input_tuples():
            n1, n2, n3 = (1 - v for v in x)
            assert f(x) == ((n1 & n2) ^ n3, n3, 0)
