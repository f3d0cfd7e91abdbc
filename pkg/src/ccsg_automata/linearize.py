"""Linear CA models of shrinking generators and CCSGs.

Pipeline for a generator with control length L1 and generating polynomial P2:

1. exponent E = 2^L1 - 1 (shrinking generator) or D = (1 + 2^w) 2^(L1-1) - 1
   (CCSG with w taps), reduced modulo 2^L2 - 1;
2. coset polynomial P(x) = minimal polynomial of alpha^E (resp. alpha^D);
3. a mirror pair of 90/150 CA with characteristic polynomial P(x);
4. L1 - 1 doublings of each member, squaring the characteristic polynomial
   each time.
"""

import logging
from functools import lru_cache
from itertools import product

from ccsg_automata.automata import continuant
from ccsg_automata.config import get_settings
from ccsg_automata.exceptions import NotIrreducibleError, SynthesisError, ValidationError
from ccsg_automata.gf2poly import (
    BinaryPolynomial,
    clmul,
    cyclotomic_coset,
    inverse_mod,
    is_irreducible,
    min_poly_of_power,
    mulmod,
)
from ccsg_automata.metrics import SYNTHESIS_CANDIDATES, SYNTHESIS_LATENCY
from ccsg_automata.models import CcsgSpec, LinearizationReport, RuleString

logger = logging.getLogger(__name__)


def coset_exponent(l1: int, taps_width: int | None = None) -> int:
    """E = 2^l1 - 1 without taps, D = (1 + 2^w) 2^(l1-1) - 1 with w taps.

    Raises:
        ValidationError: If l1 < 1 or w is outside 1..l1
    """
    if l1 < 1:
        raise ValidationError(f"L1 must be at least 1, got {l1}", field="l1")
    if taps_width is None:
        return (1 << l1) - 1
    if not 1 <= taps_width <= l1:
        raise ValidationError(f"w must lie in 1..{l1}, got {taps_width}", field="taps_width")
    return ((1 + (1 << taps_width)) << (l1 - 1)) - 1


def _bits_to_str(bits: tuple[int, ...]) -> str:
    return "".join(map(str, bits))


@lru_cache(maxsize=512)
def _synthesize_bits(p: int, n: int) -> str:
    """Lexicographically smallest rule string with continuant ``p``.

    Splits the rules at k = n // 2 and uses
        Delta_n = Delta_k * U + Delta_{k-1} * V,
    with U, V the continuants of cells k+1..n and k+2..n. Since gcd(U, V) = 1
    and deg Delta_{k-1} < deg U, each suffix fixes Delta_{k-1} = p V^-1 mod U,
    which is looked up among the enumerated prefixes.
    """
    if n == 1:
        return str(p & 1)
    k = n // 2
    prefixes: dict[int, list[tuple[str, int]]] = {}
    for bits in product((0, 1), repeat=k):
        delta_k, delta_k1 = continuant(bits)
        prefixes.setdefault(delta_k1, []).append((_bits_to_str(bits), delta_k))

    solutions = []
    examined = 0
    for bits in product((0, 1), repeat=n - k):
        examined += 1
        # continuants are reversal-invariant, so reversing the suffix yields
        # (K(cells k+1..n), K(cells k+2..n))
        u, v = continuant(bits[::-1])
        target = mulmod(p, inverse_mod(v, u), u)
        for prefix, delta_k in prefixes.get(target, ()):
            if clmul(delta_k, u) ^ clmul(target, v) == p:
                solutions.append(prefix + _bits_to_str(bits))
    SYNTHESIS_CANDIDATES.inc(examined)
    if not solutions:
        raise SynthesisError(
            "No 90/150 CA has this characteristic polynomial",
            details={"poly": str(BinaryPolynomial(bits=p))},
        )
    logger.debug("synthesis of degree %d found %d rule strings", n, len(solutions))
    return min(solutions)


def cattell_muzio_synthesize(p: BinaryPolynomial) -> tuple[RuleString, RuleString]:
    """Mirror pair of 90/150 CA whose characteristic polynomial is ``p``.

    The first member is the lexicographically smallest rule string, the second
    its mirror image (the two coincide for palindromes).

    Raises:
        NotIrreducibleError: If ``p`` is reducible
        SynthesisError: If the degree exceeds the configured bound or no CA exists
    """
    if not is_irreducible(p):
        raise NotIrreducibleError(str(p))
    max_degree = get_settings().synthesis_max_degree
    if p.degree > max_degree:
        raise SynthesisError(
            f"Degree {p.degree} above SYNTHESIS_MAX_DEGREE={max_degree}",
            details={"poly": str(p)},
        )
    with SYNTHESIS_LATENCY.time():
        first = RuleString(rules=_synthesize_bits(p.bits, p.degree))
    return first, first.mirror()


def double_rules(rules: RuleString) -> RuleString:
    """Complement the rightmost rule bit and append the mirror image.

    The characteristic polynomial of the result is the square of the input's.
    """
    s = rules.rules
    complemented = s[:-1] + ("0" if s[-1] == "1" else "1")
    return RuleString(rules=complemented + complemented[::-1])


def _double_times(rules: RuleString, times: int) -> RuleString:
    for _ in range(times):
        rules = double_rules(rules)
    return rules


def linearize_generator(
    l1: int, p2: BinaryPolynomial, taps_width: int | None = None
) -> LinearizationReport:
    """Build the pair of CA modelling a shrinking generator (no taps) or a CCSG.

    The report depends only on (L1, P2, w); R1's polynomial plays no part.

    Raises:
        ValidationError: If l1 < 2 or w is out of range
        NotPrimitiveError: If ``p2`` is not primitive
        DegenerateExponentError: If the exponent vanishes modulo 2^L2 - 1
    """
    if l1 < 2:
        raise ValidationError(f"L1 must be at least 2, got {l1}", field="l1")
    if taps_width == 0:
        taps_width = None
    l2 = p2.degree
    exponent = coset_exponent(l1, taps_width)
    reduced = exponent % ((1 << l2) - 1) if l2 >= 1 else 0
    coset_poly = min_poly_of_power(p2, exponent)
    coset = cyclotomic_coset(reduced, l2)
    degenerate = len(coset) < l2
    if degenerate:
        logger.warning(
            "coset of %d modulo %d has size %d < L2=%d", reduced, (1 << l2) - 1, len(coset), l2
        )
    full_width = taps_width == l1
    if full_width:
        logger.warning("w = L1 = %d exceeds the decimation function's stated bound L1 - 1", l1)

    base = cattell_muzio_synthesize(coset_poly)
    doublings = l1 - 1
    final = (_double_times(base[0], doublings), _double_times(base[1], doublings))
    report = LinearizationReport(
        l1=l1,
        l2=l2,
        taps_width=taps_width,
        exponent=exponent,
        reduced_exponent=reduced,
        coset_leader=coset[0],
        coset_poly=coset_poly,
        coset_degenerate=degenerate,
        full_width_taps=full_width,
        base_pair=base,
        final_pair=final,
        doublings=doublings,
        final_char_poly=coset_poly ** (1 << doublings),
    )
    logger.info(
        "linearized L1=%d P2=%s w=%s: P=%s, %d-cell pair %s / %s",
        l1,
        p2,
        taps_width,
        coset_poly,
        report.n,
        final[0],
        final[1],
    )
    return report


def linearize_spec(spec: CcsgSpec) -> LinearizationReport:
    """Report for a concrete generator."""
    return linearize_generator(spec.r1.length, spec.r2.char_poly, spec.w or None)


def reverse_report(
    l1: int, p2: BinaryPolynomial, taps_width: int | None = None
) -> LinearizationReport:
    """Model of the time-reversed keystream, built from the reciprocal of P2."""
    return linearize_generator(l1, p2.reciprocal(), taps_width)
