"""Shrinking generator and clock-controlled shrinking generator (CCSG) keystreams.

The control register R1 emits {a_t}; the generating register R2 emits {b_i}.
A CCSG first decimates {b_i} by X_t = 1 + sum_j 2^j A_{i_j}(t) (b'_t keeps
b_{sigma(t)} and then skips X_t - 1 bits), then applies the shrinking rule:
b'_t is output iff a_t = 1. With no taps X_t = 1 and the CCSG is the plain
shrinking generator.
"""

import logging
from collections.abc import Iterator, Sequence
from itertools import islice
from math import gcd

from ccsg_automata.exceptions import DegenerateControlError, LengthMismatchError, ValidationError
from ccsg_automata.lfsr import lfsr_period, lfsr_state_words
from ccsg_automata.metrics import KEYSTREAM_BITS
from ccsg_automata.models import CcsgSpec, LfsrSpec

logger = logging.getLogger(__name__)


def shrink(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Keep b_i wherever a_i = 1.

    Raises:
        LengthMismatchError: If the sequences differ in length
    """
    if len(a) != len(b):
        raise LengthMismatchError("shrink inputs", len(a), len(b))
    return [int(bi) for ai, bi in zip(a, b, strict=True) if ai]


def _x_value(word: int, taps: tuple[int, ...]) -> int:
    x = 1
    for j, stage in enumerate(taps):
        x += ((word >> stage) & 1) << j
    return x


def _advance(word: int, steps: int, mask: int, length: int) -> int:
    for _ in range(steps):
        fresh = (word & mask).bit_count() & 1
        word = (word >> 1) | (fresh << (length - 1))
    return word


def _clocked(spec: CcsgSpec) -> Iterator[tuple[int, int, int]]:
    """Yield (a_t, b'_t, X_t) for t = 0, 1, ..."""
    r2_mask = spec.r2.char_poly.bits & ((1 << spec.r2.length) - 1)
    r2_word = next(lfsr_state_words(spec.r2))
    for r1_word in lfsr_state_words(spec.r1):
        x = _x_value(r1_word, spec.taps)
        yield r1_word & 1, r2_word & 1, x
        r2_word = _advance(r2_word, x, r2_mask, spec.r2.length)


def decimation_values(spec: CcsgSpec, n: int) -> list[int]:
    """X_0 ... X_{n-1}."""
    return [x for _, _, x in islice(_clocked(spec), n)]


def ccsg_decimate(spec: CcsgSpec, n: int) -> list[int]:
    """b'_0 ... b'_{n-1}, the R2 sequence decimated by X_t."""
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}", field="n")
    return [bp for _, bp, _ in islice(_clocked(spec), n)]


def ccsg_keystream(spec: CcsgSpec, n: int) -> list[int]:
    """First n output bits of shrink({a_t}, {b'_t}).

    Raises:
        DegenerateControlError: If R1's seed is all zero (no bit is ever selected)
    """
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}", field="n")
    if not any(spec.r1.seed):
        raise DegenerateControlError(
            "Control register seed is all zero; no output can be produced",
            details={"r1": str(spec.r1)},
        )
    out: list[int] = []
    if n:
        for a, bp, _ in _clocked(spec):
            if a:
                out.append(bp)
                if len(out) == n:
                    break
    KEYSTREAM_BITS.labels(generator="sg" if spec.is_shrinking else "ccsg").inc(len(out))
    return out


def shrinking_keystream(r1: LfsrSpec, r2: LfsrSpec, n: int) -> list[int]:
    return ccsg_keystream(CcsgSpec(r1=r1, r2=r2), n)


def expected_period(l1: int, l2: int) -> int:
    """(2^L2 - 1) * 2^(L1 - 1)."""
    return ((1 << l2) - 1) << (l1 - 1)


def linear_complexity_bounds(l1: int, l2: int) -> tuple[int, int]:
    """(lower, upper) with lower < LC <= upper; requires L1 >= 2."""
    if l1 < 2:
        raise ValidationError(f"L1 must be at least 2, got {l1}", field="l1")
    return l2 << (l1 - 2), l2 << (l1 - 1)


def b_advance_per_control_period(spec: CcsgSpec) -> int:
    """Sum of X_t over one period of R1: how far R2 moves per control cycle."""
    return sum(decimation_values(spec, lfsr_period(spec.r1)))


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def measure_period(spec: CcsgSpec) -> int:
    """Least period of the keystream, by brute force.

    Runs the joint (R1, R2) state until it returns to the start, collecting
    the bits output during that cycle, then returns the least cyclic period
    of those bits.

    Raises:
        DegenerateControlError: If R1's seed is all zero
        ValidationError: If a characteristic polynomial is divisible by x
    """
    if not any(spec.r1.seed):
        raise DegenerateControlError(
            "Control register seed is all zero; no output can be produced",
            details={"r1": str(spec.r1)},
        )
    for name, reg in (("r1", spec.r1), ("r2", spec.r2)):
        if not reg.char_poly.bits & 1:
            raise ValidationError(f"{name} state map is not invertible", field=name)

    r1_mask = spec.r1.char_poly.bits & ((1 << spec.r1.length) - 1)
    r2_mask = spec.r2.char_poly.bits & ((1 << spec.r2.length) - 1)
    start = (next(lfsr_state_words(spec.r1)), next(lfsr_state_words(spec.r2)))
    w1, w2 = start
    cycle: list[int] = []
    while True:
        if w1 & 1:
            cycle.append(w2 & 1)
        x = _x_value(w1, spec.taps)
        w1 = _advance(w1, 1, r1_mask, spec.r1.length)
        w2 = _advance(w2, x, r2_mask, spec.r2.length)
        if (w1, w2) == start:
            break

    if gcd(spec.r1.length, spec.r2.length) != 1:
        logger.warning("gcd(L1, L2) != 1 for %s; period formula may not apply", spec)
    size = len(cycle)
    for p in _divisors(size):
        if all(cycle[i] == cycle[(i + p) % size] for i in range(size)):
            logger.debug("joint cycle emits %d bits, least period %d", size, p)
            return p
    raise AssertionError("a cycle is always periodic with its own length")
