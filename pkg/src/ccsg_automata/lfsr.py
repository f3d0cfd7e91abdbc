"""Maximal-length LFSR simulation.

A register with characteristic polynomial sum_k p_k x^k emits a sequence with
sum_k p_k a_{t+k} = 0. Stage i holds A_i(t) = a_{t+i}, so stage 0 is the
current output bit and the seed is simply the first L output bits.
"""

import logging
from collections.abc import Iterator
from itertools import islice

from ccsg_automata.exceptions import DegenerateStateError, ValidationError
from ccsg_automata.models import LfsrSpec
from ccsg_automata.utils import parse_bits

logger = logging.getLogger(__name__)


def _feedback_mask(spec: LfsrSpec) -> int:
    # p_0 .. p_{L-1}; bit k selects a_{t+k}
    return spec.char_poly.bits & ((1 << spec.length) - 1)


def _seed_word(spec: LfsrSpec) -> int:
    word = 0
    for i, bit in enumerate(spec.seed):
        word |= bit << i
    return word


def _step(word: int, mask: int, length: int) -> int:
    fresh = (word & mask).bit_count() & 1
    return (word >> 1) | (fresh << (length - 1))


def lfsr_state_words(spec: LfsrSpec) -> Iterator[int]:
    """Infinite iterator over register states packed as ints (bit i = A_i(t))."""
    word = _seed_word(spec)
    mask = _feedback_mask(spec)
    length = spec.length
    while True:
        yield word
        word = _step(word, mask, length)


def lfsr_states(spec: LfsrSpec) -> Iterator[tuple[int, ...]]:
    """Infinite iterator over register states (A_0(t), ..., A_{L-1}(t))."""
    length = spec.length
    for word in lfsr_state_words(spec):
        yield tuple((word >> i) & 1 for i in range(length))


def lfsr_stream(spec: LfsrSpec) -> Iterator[int]:
    """Infinite iterator over the output bits a_0, a_1, ..."""
    for word in lfsr_state_words(spec):
        yield word & 1


def lfsr_sequence(spec: LfsrSpec, n: int) -> list[int]:
    """Return a_0 ... a_{n-1}."""
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}", field="n")
    return list(islice(lfsr_stream(spec), n))


def lfsr_period(spec: LfsrSpec) -> int:
    """Smallest t > 0 with state(t) = state(0).

    Raises:
        DegenerateStateError: If the seed is all zero
    """
    if not any(spec.seed):
        raise DegenerateStateError("All-zero seed has no cycle", details={"register": str(spec)})
    if not spec.char_poly.bits & 1:
        # x divides P: the a_t stage never feeds back, so the seed state is transient
        raise DegenerateStateError(
            "Characteristic polynomial divisible by x is not invertible",
            details={"register": str(spec)},
        )
    start = _seed_word(spec)
    mask = _feedback_mask(spec)
    word = _step(start, mask, spec.length)
    t = 1
    while word != start:
        word = _step(word, mask, spec.length)
        t += 1
    logger.debug("period of %s is %d", spec, t)
    return t


def parse_seed(text: str) -> tuple[int, ...]:
    """Seed text format: 0/1 string, leftmost bit = a_0."""
    return parse_bits(text)
