"""Tests for keystream reconstruction."""

import random

import pytest

from ccsg_automata.attack import (
    interleave_complete,
    nt_estimate,
    propagate_window,
    reconstruct,
    refine,
)
from ccsg_automata.automata import ca_run
from ccsg_automata.exceptions import InconsistencyError, ValidationError
from ccsg_automata.keystream import ccsg_keystream
from ccsg_automata.linearize import linearize_generator, reverse_report
from ccsg_automata.models import (
    CaState,
    CcsgSpec,
    InterceptedWindow,
    LfsrSpec,
    ReconstructionResult,
    RuleString,
)

TEN_CELL = RuleString(rules="0011001100")


def _known(bits: dict[int, int], horizon: int | None = None) -> ReconstructionResult:
    return ReconstructionResult(
        known=bits, sources={p: "intercepted" for p in bits}, horizon=horizon
    )


def _random_spec(base: CcsgSpec, rng: random.Random) -> CcsgSpec:
    def seed(length: int) -> str:
        word = rng.randrange(1, 1 << length)
        return "".join(str((word >> i) & 1) for i in range(length))

    return CcsgSpec(
        r1=LfsrSpec(char_poly=base.r1.char_poly, seed=seed(base.r1.length)),
        r2=LfsrSpec(char_poly=base.r2.char_poly, seed=seed(base.r2.length)),
        taps=base.taps,
    )


class TestNtEstimate:
    """Tests for the coverage estimate."""

    @pytest.mark.parametrize("m,l2,expected", [(100, 5, 40000), (5, 5, 5), (35, 5, 1715)])
    def test_examples(self, m, l2, expected):
        """Test M * floor(M / L2)^2."""
        assert nt_estimate(m, l2) == expected

    def test_rejects_nonpositive(self):
        """Test that M and L2 must be positive."""
        with pytest.raises(ValidationError):
            nt_estimate(0, 5)


class TestPropagateWindow:
    """Tests for phase-shift propagation."""

    def _cell_sequence(self, steps: int) -> list[int]:
        state = CaState(cells="1011001110")
        return ca_run(TEN_CELL, state, steps)[:, 9].tolist()

    def test_ten_cell_window(self):
        """Test a 30-bit cell-10 window against the simulated column."""
        truth = self._cell_sequence(200)
        window = InterceptedWindow(bits=truth[:30], offset=0)
        result = propagate_window((TEN_CELL, TEN_CELL.mirror()), window, l2=5)
        assert all(truth[p] == b for p, b in result.known.items())
        # cell 8 trails cell 10 by 26 steps and is known for 28 of them
        assert all(p in result.known for p in range(26, 54))
        assert result.counts()["phase-shift"] > 0

    def test_short_window_yields_nothing(self):
        """Test that a window shorter than L2 stays as intercepted."""
        truth = self._cell_sequence(10)
        result = propagate_window((TEN_CELL, TEN_CELL.mirror()), InterceptedWindow(bits=truth[:4]), l2=5)
        assert result.known == {i: b for i, b in enumerate(truth[:4])}
        assert set(result.sources.values()) == {"intercepted"}

    def test_short_window_without_l2(self, sg, sg_report):
        """Test that L2 comes from the model when not given."""
        keystream = ccsg_keystream(sg, 10)
        window = InterceptedWindow(bits=keystream[:4])
        result = propagate_window(sg_report.final_pair, window)
        assert result.known == window.positions()
        assert result.nt_estimate == 0

    def test_nt_estimate_filled(self, sg, sg_report):
        """Test that the coverage estimate uses the derived L2."""
        keystream = ccsg_keystream(sg, 200)
        result = propagate_window(sg_report.final_pair, InterceptedWindow(bits=keystream[:30]))
        assert result.nt_estimate == nt_estimate(30, 5)

    def test_full_period_window(self, sg, sg_report):
        """Test that a full period is a fixpoint after one pass."""
        keystream = ccsg_keystream(sg, 124)
        result = propagate_window(
            sg_report.final_pair, InterceptedWindow(bits=keystream), l2=5, horizon=124
        )
        assert len(result) == 124
        assert result.passes == 1

    def test_intercepted_bits_untouched(self, sg, sg_report):
        """Test that the window survives unmodified."""
        keystream = ccsg_keystream(sg, 200)
        window = InterceptedWindow(bits=keystream[40:60], offset=40)
        result = propagate_window(sg_report.final_pair, window, l2=5)
        for p, b in window.positions().items():
            assert result.known[p] == b
            assert result.sources[p] == "intercepted"

    def test_conflict_raises(self):
        """Test that a corrupted window bit is caught."""
        truth = self._cell_sequence(60)
        bits = truth[:30]
        bits[27] ^= 1
        with pytest.raises(InconsistencyError):
            propagate_window((TEN_CELL,), InterceptedWindow(bits=bits), l2=5)


class TestInterleaveComplete:
    """Tests for strided stream completion."""

    def test_four_contiguous_symbols(self, small_sg, p2_small):
        """Test that stream 0 completes from four of its symbols."""
        keystream = ccsg_keystream(small_sg, 60)
        coset_poly = linearize_generator(3, p2_small).coset_poly
        result = interleave_complete(_known({p: keystream[p] for p in (0, 4, 8, 12)}, 60), coset_poly, 3)
        for p in range(0, 60, 4):
            assert result.known[p] == keystream[p]
        assert result.sources[16] == "interleave-completion"
        assert all(p % 4 == 0 for p in result.known)

    def test_scattered_symbols(self, small_sg, p2_small):
        """Test completion from non-contiguous symbols of full rank."""
        keystream = ccsg_keystream(small_sg, 60)
        coset_poly = linearize_generator(3, p2_small).coset_poly
        positions = (1, 9, 21, 33, 45, 53)
        result = interleave_complete(_known({p: keystream[p] for p in positions}, 60), coset_poly, 3)
        assert all(result.known[p] == keystream[p] for p in range(1, 60, 4))

    def test_fully_known_unchanged(self, small_sg, p2_small):
        """Test that a complete keystream comes back as is."""
        keystream = ccsg_keystream(small_sg, 60)
        coset_poly = linearize_generator(3, p2_small).coset_poly
        known = _known(dict(enumerate(keystream)), 60)
        assert interleave_complete(known, coset_poly, 3) == known

    def test_deficient_stream_untouched(self, small_sg, p2_small):
        """Test that three symbols leave the stream alone."""
        keystream = ccsg_keystream(small_sg, 60)
        coset_poly = linearize_generator(3, p2_small).coset_poly
        known = _known({p: keystream[p] for p in (0, 4, 8)}, 60)
        assert interleave_complete(known, coset_poly, 3).known == known.known

    def test_partial_span(self, small_sg, p2_small):
        """Test that symbols in the span of three known ones are filled soundly."""
        keystream = ccsg_keystream(small_sg, 60)
        coset_poly = linearize_generator(3, p2_small).coset_poly
        known = _known({p: keystream[p] for p in (0, 4, 8)}, 60)
        result = interleave_complete(known, coset_poly, 3, partial=True)
        assert len(result) > 3
        assert all(keystream[p] == b for p, b in result.known.items())

    def test_inconsistent_stream(self, small_sg, p2_small):
        """Test that a flipped fifth symbol violates the recurrence."""
        keystream = ccsg_keystream(small_sg, 60)
        coset_poly = linearize_generator(3, p2_small).coset_poly
        bits = {p: keystream[p] for p in (0, 4, 8, 12, 16)}
        bits[16] ^= 1
        with pytest.raises(InconsistencyError):
            interleave_complete(_known(bits, 60), coset_poly, 3)


class TestReconstruct:
    """End-to-end reconstruction against simulated keystreams."""

    def test_full_period(self, sg, sg_report):
        """Test that a whole-period window is the whole result."""
        keystream = ccsg_keystream(sg, 124)
        result = reconstruct(
            sg_report.final_pair, InterceptedWindow(bits=keystream), sg_report.coset_poly, 3
        )
        assert len(result) == 124
        assert result.counts()["intercepted"] == 124

    def test_long_window_recovers_period(self, sg, sg_report):
        """Test that M = 35 at offset 0 recovers every bit of the period."""
        keystream = ccsg_keystream(sg, 124)
        window = InterceptedWindow(bits=keystream[:35])
        result = reconstruct(sg_report.final_pair, window, sg_report.coset_poly, 3)
        assert result.known == dict(enumerate(keystream))
        assert result.nt_estimate == 1715

    def test_ccsg_window(self, ccsg, ccsg_report):
        """Test M = 35 on the w = 3 generator."""
        keystream = ccsg_keystream(ccsg, 124)
        window = InterceptedWindow(bits=keystream[:35])
        result = reconstruct(ccsg_report.final_pair, window, ccsg_report.coset_poly, 3)
        assert all(keystream[p] == b for p, b in result.known.items())
        assert len(result) > 35

    @pytest.mark.parametrize("generator", ["sg", "ccsg"])
    def test_randomized_soundness(self, request, generator, p2):
        """Test zero wrong bits over 100 random seeds, offsets and window lengths."""
        base = request.getfixturevalue(generator)
        w = len(base.taps) or None
        report = linearize_generator(3, p2, w)
        reverse = reverse_report(3, p2, w)
        rng = random.Random(20240 + len(base.taps))
        for _ in range(100):
            spec = _random_spec(base, rng)
            m = rng.randint(5, 15)
            offset = rng.randint(0, 200)
            horizon = max(offset + m, 124)
            keystream = ccsg_keystream(spec, horizon)
            window = InterceptedWindow(bits=keystream[offset : offset + m], offset=offset)
            result = reconstruct(
                report.final_pair,
                window,
                report.coset_poly,
                3,
                reverse_pair=reverse.final_pair,
            )
            assert all(keystream[p] == b for p, b in result.known.items())
            assert result.nt_estimate == m * (m // 5) ** 2
            if m >= 10:
                assert len(result) > m

    def test_monotone_in_window(self, sg, sg_report):
        """Test that a longer window never loses bits."""
        keystream = ccsg_keystream(sg, 124)
        previous: set[int] = set()
        for m in range(5, 25):
            window = InterceptedWindow(bits=keystream[10 : 10 + m], offset=10)
            known = set(reconstruct(sg_report.final_pair, window, sg_report.coset_poly, 3).known)
            assert previous <= known
            previous = known

    def test_refine_is_idempotent(self, sg, sg_report):
        """Test that reconstruction is a fixpoint of itself."""
        keystream = ccsg_keystream(sg, 124)
        window = InterceptedWindow(bits=keystream[3:15], offset=3)
        result = reconstruct(sg_report.final_pair, window, sg_report.coset_poly, 3)
        again = refine(result, sg_report.final_pair, sg_report.coset_poly, 3)
        assert again.known == result.known
        assert again.sources == result.sources

    def test_shifted_window_models_shifted_keystream(self, sg, sg_report):
        """Test that a window mislabelled by one position reconstructs the shifted keystream."""
        keystream = ccsg_keystream(sg, 124)
        window = InterceptedWindow(bits=keystream[1:41], offset=0)
        result = reconstruct(sg_report.final_pair, window, sg_report.coset_poly, 3)
        shifted = keystream[1:] + keystream[:1]
        assert result.known == dict(enumerate(shifted))
