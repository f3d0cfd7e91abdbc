"""Keystream reconstruction from an intercepted window.

Two sound inference rules are applied until nothing new appears:

* phase-shift propagation: a run of known keystream bits is placed at an
  extreme cell of a model CA; back-substituting the cell equations gives the
  neighbouring cells over a shrinking time span, and every cell whose phase
  shift m relative to the reference is known hands back keystream bits
  m steps later (and at every multiple of the order of S around them, since
  all CA sequences are periodic with that order);
* interleave completion: the keystream positions congruent to r modulo
  2^(L1-1) form a sequence with the coset polynomial's recurrence, so once
  the known bits of such a stream pin down its L2-bit state, the whole
  stream follows. Short of that, every stream symbol that is a linear
  combination of the known ones is still determined.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ccsg_automata.automata import ca_char_poly
from ccsg_automata.config import get_settings
from ccsg_automata.exceptions import InconsistencyError, ValidationError
from ccsg_automata.gf2poly import X, BinaryPolynomial, irreducible_power, mulmod, poly_mod
from ccsg_automata.keystream import expected_period
from ccsg_automata.linalg import gf2_express, gf2_reduce
from ccsg_automata.metrics import ATTACK_INCONSISTENCIES, RECONSTRUCTED_BITS
from ccsg_automata.models import (
    InterceptedWindow,
    ReconstructionResult,
    RuleString,
    ShiftTable,
    Source,
)
from ccsg_automata.phaseshift import phase_shift_table

logger = logging.getLogger(__name__)

Pair = Sequence[RuleString]


def nt_estimate(m: int, l2: int) -> int:
    """M * floor(M / L2)^2, the expected number of reconstructed bits."""
    if m < 1 or l2 < 1:
        raise ValidationError("M and L2 must be positive", field="m" if m < 1 else "l2")
    return m * (m // l2) ** 2


class _Ledger:
    """Position -> bit store that refuses contradictions."""

    def __init__(self, known: dict[int, int] | None = None, sources: dict[int, Source] | None = None):
        self.known: dict[int, int] = dict(known or {})
        self.sources: dict[int, Source] = dict(sources or {})

    def add(self, position: int, bit: int, source: Source) -> bool:
        current = self.known.get(position)
        if current is None:
            self.known[position] = bit
            self.sources[position] = source
            return True
        if current != bit:
            ATTACK_INCONSISTENCIES.inc()
            raise InconsistencyError(
                "Reconstructed bit contradicts a known bit; wrong model or offset",
                position=position,
                expected=current,
                found=bit,
            )
        return False

    def runs(self, min_length: int) -> list[tuple[int, list[int]]]:
        """Maximal runs of consecutive known positions, at least ``min_length`` long."""
        runs = []
        positions = sorted(self.known)
        i = 0
        while i < len(positions):
            j = i
            while j + 1 < len(positions) and positions[j + 1] == positions[j] + 1:
                j += 1
            if j - i + 1 >= min_length:
                runs.append((positions[i], [self.known[p] for p in positions[i : j + 1]]))
            i = j + 1
        return runs


@dataclass(frozen=True)
class _Model:
    rules: RuleString
    table: ShiftTable
    reversed_time: bool


def _models(pair: Pair, reverse_pair: Pair | None) -> list[_Model]:
    models = [_Model(r, phase_shift_table(r), False) for r in pair]
    if reverse_pair is not None:
        models += [_Model(r, phase_shift_table(r), True) for r in reverse_pair]
    return models


def _outward_sequences(
    rules: RuleString, reference: int, run: NDArray[np.uint8]
) -> dict[int, NDArray[np.uint8]]:
    """Cell sequences implied by ``run`` at the reference cell, by back-substitution.

    Moving away from the reference, X_next(t) = X_cur(t+1) + d_cur X_cur(t) + X_prev(t),
    so each cell is known for one time step fewer than its predecessor.
    """
    n = rules.n
    d = rules.bits
    order = list(range(n, 0, -1)) if reference == n else list(range(1, n + 1))
    sequences = {order[0]: run}
    prev = np.zeros(len(run), dtype=np.uint8)
    cur = run
    for k in range(1, n):
        length = len(cur) - 1
        if length <= 0:
            break
        cell = order[k - 1]
        nxt = cur[1:] ^ (cur[:-1] * d[cell - 1]) ^ prev[:length]
        sequences[order[k]] = nxt
        prev, cur = cur, nxt
    return sequences


def _periodic(position: int, order: int | None, horizon: int) -> Iterable[int]:
    if order is None:
        if 0 <= position < horizon:
            yield position
        return
    p = position % order
    while p < horizon:
        yield p
        p += order


def _propagate_pass(
    ledger: _Ledger,
    models: list[_Model],
    min_run: int,
    horizon: int,
    seen_runs: set[tuple[int, int, int]],
) -> int:
    added = 0
    for start, bits in ledger.runs(min_run):
        for model_id, model in enumerate(models):
            key = (model_id, start, len(bits))
            if key in seen_runs:
                continue
            seen_runs.add(key)
            run = np.asarray(bits[::-1] if model.reversed_time else bits, dtype=np.uint8)
            end = start + len(bits) - 1
            for reference in model.table.references:
                sequences = _outward_sequences(model.rules, reference, run)
                for entry in model.table.related(reference):
                    seq = sequences.get(entry.cell)
                    if seq is None:
                        continue
                    for t, bit in enumerate(seq.tolist()):
                        if model.reversed_time:
                            position = end - (t + entry.shift)
                        else:
                            position = start + t + entry.shift
                        for p in _periodic(position, model.table.order, horizon):
                            added += ledger.add(p, bit, "phase-shift")
    return added


def _result(
    ledger: _Ledger,
    template: ReconstructionResult | None = None,
    **overrides,
) -> ReconstructionResult:
    fields = template.model_dump() if template is not None else {}
    fields.update(overrides)
    fields["known"] = dict(sorted(ledger.known.items()))
    fields["sources"] = {p: ledger.sources[p] for p in fields["known"]}
    return ReconstructionResult(**fields)


def _model_l2(pair: Pair) -> int | None:
    """Degree of the irreducible q with Delta = q^k, i.e. L2 for a linearized generator."""
    factor = irreducible_power(ca_char_poly(pair[0]))
    return factor[0].degree if factor is not None else None


def _default_horizon(window: InterceptedWindow, tables: list[ShiftTable]) -> int:
    reach = 0
    for table in tables:
        if table.order is not None:
            reach = max(reach, table.order)
        else:
            reach = max(reach, max((e.shift for e in table.entries), default=0) + 1)
    return window.offset + window.m + reach


def propagate_window(
    pair: Pair,
    window: InterceptedWindow,
    *,
    l2: int | None = None,
    horizon: int | None = None,
    reverse_pair: Pair | None = None,
) -> ReconstructionResult:
    """Place the window (and every run it yields) at the extreme cells of each model CA.

    Args:
        pair: The two rule strings modelling the generator
        window: Intercepted bits with their absolute offset
        l2: Runs shorter than this are never placed; a shorter window yields nothing
            (default: the degree of the irreducible factor of the pair's characteristic
            polynomial)
        horizon: Positions at or beyond are not derived (default: window end plus
            the order of S)
        reverse_pair: Optional model of the time-reversed keystream

    Raises:
        InconsistencyError: If two derivations disagree
    """
    ledger = _Ledger()
    for position, bit in window.positions().items():
        ledger.add(position, bit, "intercepted")
    if l2 is None:
        l2 = _model_l2(pair)
    estimate = nt_estimate(window.m, l2) if l2 else 0
    min_run = max(l2 or 1, 2)
    if window.m < min_run:
        return _result(ledger, window_length=window.m, horizon=horizon, nt_estimate=estimate)

    models = _models(pair, reverse_pair)
    if horizon is None:
        horizon = _default_horizon(window, [m.table for m in models])
    seen: set[tuple[int, int, int]] = set()
    passes = 0
    while True:
        passes += 1
        if not _propagate_pass(ledger, models, min_run, horizon, seen):
            break
    logger.debug("propagation reached a fixpoint after %d passes", passes)
    return _result(
        ledger, window_length=window.m, horizon=horizon, passes=passes, nt_estimate=estimate
    )


def _stream_rows(coset_poly: int, exponents: Iterable[int]) -> dict[int, int]:
    """x^K mod P for each requested K, as coefficient bit vectors."""
    wanted = sorted(set(exponents))
    rows = {}
    power = poly_mod(1, coset_poly)
    k = 0
    for target in wanted:
        while k < target:
            power = mulmod(power, X, coset_poly)
            k += 1
        rows[target] = power
    return rows


def interleave_complete(
    result: ReconstructionResult,
    coset_poly: BinaryPolynomial,
    l1: int,
    *,
    horizon: int | None = None,
    partial: bool = False,
) -> ReconstructionResult:
    """Complete every strided stream whose known bits determine its state.

    Stream r holds positions r, r + 2^(L1-1), r + 2*2^(L1-1), ...; its K-th bit is
    <coefficients of x^K mod P, initial stream state>. Streams whose equations
    reach rank L2 are filled up to the horizon; the rest are left untouched
    unless ``partial`` is set, in which case every stream symbol whose row lies
    in the span of the known rows is filled as well.

    Raises:
        InconsistencyError: If a stream's known bits violate the recurrence
    """
    l2 = coset_poly.degree
    if l2 < 1:
        raise ValidationError("Coset polynomial must have degree >= 1", field="coset_poly")
    if l1 < 1:
        raise ValidationError(f"L1 must be positive, got {l1}", field="l1")
    stride = 1 << (l1 - 1)
    if horizon is None:
        horizon = result.horizon if result.horizon is not None else max(result.known, default=-1) + 1

    ledger = _Ledger(result.known, result.sources)
    for r in range(stride):
        known = {(p - r) // stride: b for p, b in result.known.items() if p % stride == r}
        if not known or (len(known) < l2 and not partial):
            continue
        fill = range(0, (horizon - r + stride - 1) // stride) if horizon > r else range(0)
        rows = _stream_rows(coset_poly.bits, [*known, *fill])
        exps = sorted(known)
        augmented = np.array(
            [[*((rows[k] >> i) & 1 for i in range(l2)), known[k]] for k in exps], dtype=np.uint8
        )
        reduced, pivots = gf2_reduce(augmented)
        if pivots and pivots[-1] == l2:
            ATTACK_INCONSISTENCIES.inc()
            raise InconsistencyError(
                f"Stream {r} modulo {stride} violates the recurrence of {coset_poly}",
                position=r,
            )
        if len(pivots) < l2 and not partial:
            continue
        for k in fill:
            position = r + k * stride
            if position in ledger.known:
                continue
            row = np.array([(rows[k] >> i) & 1 for i in range(l2)], dtype=np.uint8)
            bit = gf2_express(reduced, pivots, row)
            if bit is not None:
                ledger.add(position, bit, "interleave-completion")
    return _result(ledger, result, horizon=horizon)


def refine(
    result: ReconstructionResult,
    pair: Pair,
    coset_poly: BinaryPolynomial,
    l1: int,
    *,
    reverse_pair: Pair | None = None,
    horizon: int | None = None,
) -> ReconstructionResult:
    """Alternate propagation over all known runs and stream completion to a fixpoint."""
    l2 = coset_poly.degree
    if horizon is None:
        horizon = result.horizon
    if horizon is None:
        horizon = max(max(result.known, default=-1) + 1, expected_period(l1, l2))
    models = _models(pair, reverse_pair)
    ledger = _Ledger(result.known, result.sources)
    seen: set[tuple[int, int, int]] = set()
    max_passes = get_settings().attack_max_passes
    passes = 0
    current = result
    while passes < max_passes:
        passes += 1
        added = _propagate_pass(ledger, models, max(l2, 2), horizon, seen)
        before = len(ledger.known)
        current = interleave_complete(
            _result(ledger, current), coset_poly, l1, horizon=horizon, partial=True
        )
        added += len(current.known) - before
        ledger = _Ledger(current.known, current.sources)
        if not added:
            break
    else:
        logger.warning("reconstruction stopped after ATTACK_MAX_PASSES=%d passes", max_passes)
    rates = {str(m.rules): m.table.repetition_rate(m.table.references[-1]) for m in models}
    return _result(
        ledger, current, horizon=horizon, passes=result.passes + passes, repetition_rates=rates
    )


def reconstruct(
    pair: Pair,
    window: InterceptedWindow,
    coset_poly: BinaryPolynomial,
    l1: int,
    *,
    reverse_pair: Pair | None = None,
    horizon: int | None = None,
) -> ReconstructionResult:
    """Recover keystream bits from an intercepted window with a linearized model.

    The default horizon is one keystream period, or the window end if later.

    Raises:
        InconsistencyError: If the window contradicts the model
    """
    l2 = coset_poly.degree
    if horizon is None:
        horizon = max(window.offset + window.m, expected_period(l1, l2))
    ledger = _Ledger()
    for position, bit in window.positions().items():
        ledger.add(position, bit, "intercepted")
    seed = _result(
        ledger, window_length=window.m, horizon=horizon, nt_estimate=nt_estimate(window.m, l2)
    )
    result = refine(seed, pair, coset_poly, l1, reverse_pair=reverse_pair, horizon=horizon)
    for source, count in result.counts().items():
        RECONSTRUCTED_BITS.labels(source=source).inc(count)
    logger.info(
        "reconstructed %d bits from M=%d (N_T estimate %d) in %d passes",
        len(result),
        window.m,
        result.nt_estimate,
        result.passes,
    )
    return result
