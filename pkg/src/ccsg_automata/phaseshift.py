"""Phase-shift analysis of 90/150 CA with the shift operator S.

With S X_i(t) = X_i(t + 1), each cell obeys
    S X_i = X_{i-1} + d_i X_i + X_{i+1}
so every cell is a polynomial in S applied to an extreme reference cell,
X_i = p_i(S) X_ref. Whenever S^m = p_i(S) modulo R(S), the CA characteristic
polynomial, cell i emits the reference sequence advanced by m steps:
X_i(t) = X_ref(t + m).
"""

import logging
from functools import lru_cache

from ccsg_automata.automata import ca_char_poly
from ccsg_automata.exceptions import InvalidModulusError, ValidationError
from ccsg_automata.gf2poly import X, BinaryPolynomial, clmul, degree, mulmod, poly_mod
from ccsg_automata.models import RuleString, ShiftEntry, ShiftTable

logger = logging.getLogger(__name__)


@lru_cache(maxsize=128)
def _power_index(modulus: int) -> tuple[dict[int, int], int | None]:
    """Map residue -> least m with S^m equal to it, scanning until a repeat.

    The second item is the multiplicative order of S, or None when the powers
    never return to 1 (S not a unit).
    """
    index: dict[int, int] = {}
    power = poly_mod(1, modulus)
    m = 0
    while power not in index:
        index[power] = m
        power = mulmod(power, X, modulus)
        m += 1
    order = m if power == poly_mod(1, modulus) else None
    return index, order


def cell_operator_polys(rules: RuleString, reference: int) -> list[BinaryPolynomial]:
    """p_i(S) with X_i = p_i(S) X_ref, for cells 1..n (list index i - 1).

    Raises:
        ValidationError: If ``reference`` is not an extreme cell
    """
    n = rules.n
    if reference not in (1, n):
        raise ValidationError(f"Reference cell {reference} is not 1 or {n}", field="reference")
    d = rules.bits
    r = ca_char_poly(rules).bits

    polys = [0] * (n + 2)  # 1-indexed, padded with the null boundaries
    if reference == n:
        polys[n] = 1
        for i in range(n, 1, -1):
            polys[i - 1] = clmul(X ^ d[i - 1], polys[i]) ^ polys[i + 1]
    else:
        polys[1] = 1
        for i in range(1, n):
            polys[i + 1] = clmul(X ^ d[i - 1], polys[i]) ^ polys[i - 1]
    return [BinaryPolynomial(bits=poly_mod(p, r)) for p in polys[1 : n + 1]]


def s_discrete_log(target: BinaryPolynomial, modulus: BinaryPolynomial) -> int | None:
    """Least m >= 0 with S^m = target modulo ``modulus``, or None.

    Raises:
        InvalidModulusError: If ``modulus`` has degree < 1
        ValidationError: If ``target`` is zero modulo ``modulus``
    """
    if modulus.degree < 1:
        raise InvalidModulusError(str(modulus))
    residue = poly_mod(target.bits, modulus.bits)
    if residue == 0:
        raise ValidationError("Target is zero modulo R(S); no power of S vanishes", field="target")
    index, _ = _power_index(modulus.bits)
    return index.get(residue)


def phase_shift_table(rules: RuleString) -> ShiftTable:
    """Shifts of every cell relative to each extreme cell."""
    modulus = ca_char_poly(rules).bits
    index, order = _power_index(modulus)
    entries = []
    unrelated = []
    for reference in sorted({1, rules.n}):
        for cell, p in enumerate(cell_operator_polys(rules, reference), start=1):
            m = index.get(p.bits) if p.bits else None
            if m is None:
                unrelated.append((cell, reference))
            else:
                entries.append(ShiftEntry(cell=cell, reference=reference, shift=m))
    table = ShiftTable(
        rules=rules, order=order, entries=tuple(entries), unrelated=tuple(unrelated)
    )
    logger.debug(
        "shift table for %s: %d related, %d unrelated, order %s (degree %d)",
        rules,
        len(entries),
        len(unrelated),
        order,
        degree(modulus),
    )
    return table
