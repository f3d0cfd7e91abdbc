"""Tests for coset polynomials, CA synthesis and doubling."""

import galois
import pytest

from ccsg_automata.automata import ca_char_poly, ca_solve_initial_state, cell_sequence
from ccsg_automata.exceptions import (
    NotIrreducibleError,
    NotPrimitiveError,
    SynthesisError,
    ValidationError,
)
from ccsg_automata.gf2poly import BinaryPolynomial, min_poly_of_power
from ccsg_automata.keystream import ccsg_keystream, measure_period
from ccsg_automata.linearize import (
    cattell_muzio_synthesize,
    coset_exponent,
    double_rules,
    linearize_generator,
    linearize_spec,
    reverse_report,
)
from ccsg_automata.models import CcsgSpec, LfsrSpec, RuleString


def P(text: str) -> BinaryPolynomial:
    return BinaryPolynomial.parse(text)


def R(text: str) -> RuleString:
    return RuleString(rules=text)


def _replays(spec: CcsgSpec, rules: RuleString) -> bool:
    period = measure_period(spec)
    keystream = ccsg_keystream(spec, max(period, rules.n))
    solution = ca_solve_initial_state(rules, 1, keystream[: rules.n])
    return cell_sequence(rules, solution.state, 1, period) == keystream[:period]


class TestCosetExponent:
    """Tests for E and D."""

    def test_shrinking_generator(self):
        """Test E = 2^3 - 1."""
        assert coset_exponent(3) == 7

    def test_full_width_ccsg(self):
        """Test D = 35 = 4 mod 31."""
        assert coset_exponent(3, 3) == 35
        assert coset_exponent(3, 3) % 31 == 4

    def test_single_tap(self):
        """Test D = (1 + 2) 2 - 1."""
        assert coset_exponent(2, 1) == 5

    def test_taps_out_of_range(self):
        """Test w > L1."""
        with pytest.raises(ValidationError):
            coset_exponent(3, 4)


class TestSynthesis:
    """Tests for cattell_muzio_synthesize."""

    def test_degree_five_sg(self):
        """Test x^5 + x^2 + 1."""
        first, second = cattell_muzio_synthesize(P("x^5 + x^2 + 1"))
        assert (str(first), str(second)) == ("01111", "11110")

    def test_degree_five_ccsg(self):
        """Test x^5 + x^4 + x^2 + x + 1; lexicographic order puts 00001 first."""
        first, second = cattell_muzio_synthesize(P("x^5 + x^4 + x^2 + x + 1"))
        assert (str(first), str(second)) == ("00001", "10000")

    def test_single_cell(self):
        """Test that x gives the coinciding pair (0, 0)."""
        first, second = cattell_muzio_synthesize(P("x"))
        assert first == second == R("0")

    def test_reducible_rejected(self):
        """Test the irreducibility precondition."""
        with pytest.raises(NotIrreducibleError):
            cattell_muzio_synthesize(P("x^2 + 1"))

    def test_degree_bound(self, monkeypatch):
        """Test SYNTHESIS_MAX_DEGREE."""
        from ccsg_automata.config import get_settings

        monkeypatch.setenv("SYNTHESIS_MAX_DEGREE", "4")
        get_settings.cache_clear()
        with pytest.raises(SynthesisError):
            cattell_muzio_synthesize(P("x^5 + x^2 + 1"))

    @pytest.mark.parametrize("d", range(1, 9))
    def test_every_irreducible(self, d):
        """Test mirror pairs with the exact characteristic polynomial, and squaring on doubling."""
        for f in galois.irreducible_polys(2, d):
            p = BinaryPolynomial(bits=int(f))
            first, second = cattell_muzio_synthesize(p)
            assert second == first.mirror()
            assert ca_char_poly(first) == p
            assert ca_char_poly(second) == p
            assert ca_char_poly(double_rules(first)) == p**2


class TestDoubling:
    """Tests for double_rules."""

    @pytest.mark.parametrize(
        "rules,expected", [("01111", "0111001110"), ("10000", "1000110001"), ("0", "11")]
    )
    def test_examples(self, rules, expected):
        """Test complement-rightmost-then-mirror."""
        assert str(double_rules(R(rules))) == expected

    def test_char_poly_squares(self):
        """Test Delta(double) = Delta^2 along a chain."""
        rules = R("01111")
        p = ca_char_poly(rules)
        for _ in range(3):
            rules = double_rules(rules)
            p = p**2
            assert ca_char_poly(rules) == p


class TestLinearizeGenerator:
    """Tests for the full pipeline."""

    def test_shrinking_generator(self, sg_report):
        """Test the L1 = 3, L2 = 5 shrinking generator model."""
        assert sg_report.exponent == 7
        assert sg_report.reduced_exponent == 7
        assert sg_report.coset_poly == P("x^5 + x^2 + 1")
        assert tuple(map(str, sg_report.base_pair)) == ("01111", "11110")
        assert tuple(map(str, sg_report.final_pair)) == (
            "01110011111111001110",
            "11111111100111111111",
        )
        assert sg_report.doublings == 2
        assert sg_report.n == 20
        assert not sg_report.coset_degenerate

    def test_ccsg(self, ccsg_report, p2):
        """Test the w = 3 CCSG model."""
        assert ccsg_report.exponent == 35
        assert ccsg_report.reduced_exponent == 4
        assert ccsg_report.coset_leader == 1
        assert ccsg_report.coset_poly == p2
        assert tuple(map(str, ccsg_report.base_pair)) == ("00001", "10000")
        assert tuple(map(str, ccsg_report.final_pair)) == (
            "00000000011000000000",
            "10001100000000110001",
        )
        assert ccsg_report.full_width_taps

    def test_final_members_are_palindromic_doubling_chains(self, sg_report):
        """Test that final_pair[i] is base_pair[i] doubled L1 - 1 times."""
        for base, final in zip(sg_report.base_pair, sg_report.final_pair, strict=True):
            assert final == double_rules(double_rules(base))
            assert final == final.mirror()

    def test_final_char_poly(self, sg_report, ccsg_report):
        """Test Delta(final) = P^(2^(L1-1))."""
        for report in (sg_report, ccsg_report):
            assert report.final_char_poly == report.coset_poly**4
            for rules in report.final_pair:
                assert ca_char_poly(rules) == report.final_char_poly

    def test_smallest_case(self):
        """Test L1 = 2 over x^3 + x + 1 and replay its keystream."""
        p2 = P("x^3 + x + 1")
        report = linearize_generator(2, p2)
        assert report.exponent == 3
        assert report.coset_poly == min_poly_of_power(p2, 3)
        assert report.n == 6
        spec = CcsgSpec(
            r1=LfsrSpec(char_poly=P("x^2 + x + 1"), seed="10"),
            r2=LfsrSpec(char_poly=p2, seed="100"),
        )
        assert _replays(spec, report.final_pair[0])

    def test_register_independence(self, p2, sg_report):
        """Test that two control polynomials give one report and both keystreams fit it."""
        specs = [
            CcsgSpec(
                r1=LfsrSpec(char_poly=P(c), seed="100"),
                r2=LfsrSpec(char_poly=p2, seed="10000"),
            )
            for c in ("x^3 + x^2 + 1", "x^3 + x + 1")
        ]
        coeffs = sg_report.final_char_poly.coefficients
        for spec in specs:
            assert linearize_spec(spec) == sg_report
            bits = ccsg_keystream(spec, 200)
            for t in range(len(bits) - 20):
                assert sum(c & bits[t + k] for k, c in enumerate(coeffs)) % 2 == 0

    def test_replay_sg_and_ccsg(self, sg, ccsg, sg_report, ccsg_report):
        """Test full-period replay on the final automata."""
        assert _replays(sg, sg_report.final_pair[0])
        assert _replays(sg, sg_report.final_pair[1])
        assert _replays(ccsg, ccsg_report.final_pair[0])

    def test_reverse_report(self, p2, sg_report):
        """Test that the reversed model uses the reciprocal coset polynomial."""
        rev = reverse_report(3, p2)
        assert rev.coset_poly == sg_report.coset_poly.reciprocal()

    def test_l1_too_small(self, p2):
        """Test that L1 = 1 is rejected."""
        with pytest.raises(ValidationError):
            linearize_generator(1, p2)

    def test_non_primitive_p2(self):
        """Test the primitivity precondition."""
        with pytest.raises(NotPrimitiveError):
            linearize_generator(3, P("x^4 + x^3 + x^2 + x + 1"))

    def test_equal_cosets_give_equal_pairs(self, p2):
        """Test that a CCSG whose D shares E's coset has the SG's model."""
        # w = 2: D = 19 and 2 * 19 = 7 mod 31
        sg = linearize_generator(3, p2)
        assert linearize_generator(3, p2, 2).final_pair == sg.final_pair
        for w in (1, 2, 3):
            ccsg = linearize_generator(3, p2, w)
            if ccsg.coset_leader == sg.coset_leader:
                assert ccsg.final_pair == sg.final_pair
            else:
                assert ccsg.coset_poly != sg.coset_poly
