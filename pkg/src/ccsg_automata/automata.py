"""One-dimensional null-boundary hybrid 90/150 cellular automata.

Rule 90:  x_i(t+1) = x_{i-1}(t) + x_{i+1}(t)
Rule 150: x_i(t+1) = x_{i-1}(t) + x_i(t) + x_{i+1}(t)

Cells are 1-indexed at the API (cell 1 = leftmost rule character) and
0-indexed in arrays. The transition matrix is tridiagonal with unit
off-diagonals, so its characteristic polynomial is the continuant
Delta_k = (x + d_k) Delta_{k-1} + Delta_{k-2}.
"""

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from ccsg_automata.exceptions import LengthMismatchError, NoPreimageError, ValidationError
from ccsg_automata.gf2poly import X, BinaryPolynomial, clmul
from ccsg_automata.linalg import gf2_solve
from ccsg_automata.models import CaState, InitialStateSolution, RuleString

logger = logging.getLogger(__name__)


def continuant(rule_bits: Sequence[int]) -> tuple[int, int]:
    """Return (Delta_n, Delta_{n-1}) as bit vectors for the given rule bits.

    Delta_0 = 1 and Delta_{-1} = 0, so the empty sequence gives (1, 0).
    """
    current, previous = 1, 0
    for d in rule_bits:
        current, previous = clmul(X ^ d, current) ^ previous, current
    return current, previous


def _step_rows(diag: NDArray[np.uint8], states: NDArray[np.uint8]) -> NDArray[np.uint8]:
    """Advance every row of ``states`` one step."""
    nxt = states & diag
    nxt[:, 1:] ^= states[:, :-1]
    nxt[:, :-1] ^= states[:, 1:]
    return nxt


def _diag(rules: RuleString) -> NDArray[np.uint8]:
    return np.frombuffer(rules.rules.encode(), dtype=np.uint8) - ord("0")


def _check_lengths(rules: RuleString, state: CaState) -> None:
    if state.n != rules.n:
        raise LengthMismatchError("CA state", rules.n, state.n)


def ca_step(rules: RuleString, state: CaState) -> CaState:
    """Next state under simultaneous update with null boundaries."""
    _check_lengths(rules, state)
    row = np.asarray(state.cells, dtype=np.uint8).reshape(1, -1)
    return CaState(cells=_step_rows(_diag(rules), row)[0].tolist())


def ca_run(rules: RuleString, state: CaState, n_steps: int) -> NDArray[np.uint8]:
    """States at t = 0 .. n_steps as rows; column j - 1 is cell j's output sequence."""
    _check_lengths(rules, state)
    if n_steps < 0:
        raise ValidationError(f"n_steps must be non-negative, got {n_steps}", field="n_steps")
    diag = _diag(rules)
    history = np.zeros((n_steps + 1, rules.n), dtype=np.uint8)
    row = np.asarray(state.cells, dtype=np.uint8).reshape(1, -1)
    history[0] = row[0]
    for t in range(1, n_steps + 1):
        row = _step_rows(diag, row)
        history[t] = row[0]
    return history


def cell_sequence(rules: RuleString, state: CaState, cell: int, length: int) -> list[int]:
    """The first ``length`` outputs of one cell."""
    _check_cell(rules, cell)
    if length <= 0:
        return []
    return ca_run(rules, state, length - 1)[:, cell - 1].tolist()


def ca_char_poly(rules: RuleString) -> BinaryPolynomial:
    """Characteristic polynomial Delta_n of the CA's transition map."""
    return BinaryPolynomial(bits=continuant(rules.bits)[0])


def _check_cell(rules: RuleString, cell: int) -> None:
    if not 1 <= cell <= rules.n:
        raise ValidationError(f"Cell {cell} outside 1..{rules.n}", field="cell")


def observability_matrix(rules: RuleString, cell: int, length: int) -> NDArray[np.uint8]:
    """Matrix M with M[t, i] = output of ``cell`` at time t from unit state e_{i+1}.

    By linearity, M @ s gives the cell's first ``length`` outputs from state s.
    """
    _check_cell(rules, cell)
    diag = _diag(rules)
    states = np.eye(rules.n, dtype=np.uint8)
    matrix = np.zeros((length, rules.n), dtype=np.uint8)
    for t in range(length):
        matrix[t] = states[:, cell - 1]
        states = _step_rows(diag, states)
    return matrix


def ca_solve_initial_state(
    rules: RuleString, cell: int, prefix: Sequence[int]
) -> InitialStateSolution:
    """Find a state whose ``cell`` emits ``prefix`` over the first n steps.

    Raises:
        LengthMismatchError: If the prefix length differs from n
        NoPreimageError: If no state emits the prefix
    """
    if len(prefix) != rules.n:
        raise LengthMismatchError("prefix", rules.n, len(prefix))
    matrix = observability_matrix(rules, cell, rules.n)
    solution, rank = gf2_solve(matrix, np.asarray(prefix, dtype=np.uint8))
    if solution is None:
        raise NoPreimageError(cell, rank, rules.n)
    unique = rank == rules.n
    if not unique:
        logger.warning(
            "cell %d of %s observes rank %d < %d; returning one of several preimages",
            cell,
            rules,
            rank,
            rules.n,
        )
    return InitialStateSolution(
        state=CaState(cells=solution.tolist()), cell=cell, rank=rank, unique=unique
    )
