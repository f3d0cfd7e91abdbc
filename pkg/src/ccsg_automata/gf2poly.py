"""Arithmetic in GF(2)[x] and GF(2^L).

Polynomials are carried as Python integers whose bit k is the coefficient of
x^k (so ``0b1101`` is x^3 + x^2 + 1). The integer kernels below do the work;
:class:`BinaryPolynomial` and :class:`FieldElement` are the immutable value
types handed across module boundaries.
"""

import logging
import re
from collections.abc import Iterable
from functools import lru_cache

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import factorint

from ccsg_automata.exceptions import (
    DegenerateExponentError,
    InvalidModulusError,
    NotPrimitiveError,
    ParseError,
    ValidationError,
)

logger = logging.getLogger(__name__)

X = 0b10

_TERM_RE = re.compile(r"^(?:(?P<one>1)|x(?:\^(?P<exp>\d+))?)$")


# ---------- Integer kernels


def degree(a: int) -> int:
    """Degree of a polynomial bit vector; -1 for the zero polynomial."""
    return a.bit_length() - 1


def clmul(a: int, b: int) -> int:
    """Carry-less product ``a * b`` in GF(2)[x]."""
    if a.bit_length() > b.bit_length():
        a, b = b, a
    c = 0
    while a:
        if a & 1:
            c ^= b
        b <<= 1
        a >>= 1
    return c


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    """Quotient and remainder of ``a / b``."""
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = degree(b)
    q = 0
    da = degree(a)
    while da >= db:
        shift = da - db
        q |= 1 << shift
        a ^= b << shift
        da = degree(a)
    return q, a


def poly_mod(a: int, m: int) -> int:
    """Remainder of ``a`` modulo ``m``."""
    return poly_divmod(a, m)[1]


def mulmod(a: int, b: int, m: int) -> int:
    """``a * b mod m``."""
    return poly_mod(clmul(a, b), m)


def powmod(a: int, e: int, m: int) -> int:
    """``a ** e mod m`` by square-and-multiply."""
    result = poly_mod(1, m)
    a = poly_mod(a, m)
    while e > 0:
        if e & 1:
            result = mulmod(result, a, m)
        a = mulmod(a, a, m)
        e >>= 1
    return result


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def inverse_mod(a: int, m: int) -> int:
    """Inverse of ``a`` modulo ``m`` by the extended Euclidean algorithm.

    Raises:
        ZeroDivisionError: If ``a`` and ``m`` are not coprime
    """
    r0, r1 = m, poly_mod(a, m)
    s0, s1 = 0, 1
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ clmul(q, s1)
    if r0 != 1:
        raise ZeroDivisionError("polynomial is not invertible modulo m")
    return poly_mod(s0, m)


def reverse_bits(a: int, width: int) -> int:
    """Reverse the lowest ``width`` coefficients of ``a``."""
    r = 0
    for _ in range(width):
        r = (r << 1) | (a & 1)
        a >>= 1
    return r


def derivative(a: int) -> int:
    """Formal derivative; in characteristic 2 only odd powers survive."""
    shifted = a >> 1
    even_mask = int("01" * (shifted.bit_length() // 2 + 1), 2)
    return shifted & even_mask


def is_irreducible_int(p: int) -> bool:
    """Ben-Or irreducibility test: gcd(x^(2^i) - x, p) = 1 for i <= deg/2."""
    n = degree(p)
    if n < 1:
        return False
    if n == 1:
        return True
    h = X
    for _ in range(n // 2):
        h = mulmod(h, h, p)
        if poly_gcd(h ^ X, p) != 1:
            return False
    return True


@lru_cache(maxsize=256)
def _order_prime_factors(order: int) -> tuple[int, ...]:
    return tuple(sorted(factorint(order)))


def is_primitive_int(p: int) -> bool:
    n = degree(p)
    if n < 1:
        return False
    if not is_irreducible_int(p):
        return False
    order = (1 << n) - 1
    if powmod(X, order, p) != 1:
        return False
    return all(powmod(X, order // q, p) != 1 for q in _order_prime_factors(order))


def multiplicative_order_of_x_int(m: int) -> int | None:
    """Order of x modulo ``m`` by direct scan, or None when x is not a unit."""
    if degree(m) < 1:
        raise InvalidModulusError(str(BinaryPolynomial.from_int(m)))
    if not m & 1:
        return None
    one = poly_mod(1, m)
    power = poly_mod(X, m)
    k = 1
    while power != one:
        power = mulmod(power, X, m)
        k += 1
    return k


# ---------- Value types


class BinaryPolynomial(BaseModel):
    """Element of GF(2)[x], stored as a coefficient bit vector."""

    model_config = ConfigDict(frozen=True)

    bits: int = Field(ge=0, description="Bit k is the coefficient of x^k")

    @classmethod
    def from_int(cls, bits: int) -> "BinaryPolynomial":
        return cls(bits=bits)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "BinaryPolynomial":
        """Build a polynomial from the exponents of its nonzero terms (XOR-accumulated)."""
        bits = 0
        for e in exponents:
            bits ^= 1 << e
        return cls(bits=bits)

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[int]) -> "BinaryPolynomial":
        """Build a polynomial from coefficients in ascending degree order."""
        bits = 0
        for k, c in enumerate(coefficients):
            if c not in (0, 1):
                raise ValidationError(f"Coefficient {c!r} is not a bit", field="coefficients")
            bits |= int(c) << k
        return cls(bits=bits)

    @classmethod
    def parse(cls, text: str) -> "BinaryPolynomial":
        """Parse ``"x^5 + x^2 + 1"`` or an ascending 0/1 coefficient string.

        Raises:
            ParseError: On an empty input or a malformed or repeated term
        """
        stripped = text.strip()
        if not stripped:
            raise ParseError("Empty polynomial", text, 0)
        if set(stripped) <= {"0", "1"}:
            return cls.from_coefficients(int(c) for c in stripped)

        bits = 0
        offset = 0
        seen: set[int] = set()
        for raw in text.split("+"):
            term = raw.strip()
            position = offset + (len(raw) - len(raw.lstrip()))
            match = _TERM_RE.match(term)
            if not term or match is None:
                raise ParseError(f"Malformed term {term!r}", text, position)
            exponent = 0 if match.group("one") else int(match.group("exp") or 1)
            if exponent in seen:
                raise ParseError(f"Duplicate term {term!r}", text, position)
            seen.add(exponent)
            bits |= 1 << exponent
            offset += len(raw) + 1
        return cls(bits=bits)

    @property
    def degree(self) -> int:
        return degree(self.bits)

    @property
    def coefficients(self) -> list[int]:
        """Coefficients in ascending degree order, up to the degree."""
        return [(self.bits >> k) & 1 for k in range(self.degree + 1)]

    def is_zero(self) -> bool:
        return self.bits == 0

    def to_coefficient_string(self) -> str:
        return "".join(str(c) for c in self.coefficients) or "0"

    def reciprocal(self) -> "BinaryPolynomial":
        """x^deg * p(1/x)."""
        return BinaryPolynomial(bits=reverse_bits(self.bits, self.degree + 1))

    def __add__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(bits=self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(bits=clmul(self.bits, other.bits))

    def __pow__(self, e: int) -> "BinaryPolynomial":
        result = 1
        base = self.bits
        while e > 0:
            if e & 1:
                result = clmul(result, base)
            base = clmul(base, base)
            e >>= 1
        return BinaryPolynomial(bits=result)

    def __divmod__(self, other: "BinaryPolynomial") -> tuple["BinaryPolynomial", "BinaryPolynomial"]:
        q, r = poly_divmod(self.bits, other.bits)
        return BinaryPolynomial(bits=q), BinaryPolynomial(bits=r)

    def __mod__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(bits=poly_mod(self.bits, other.bits))

    def __floordiv__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial(bits=poly_divmod(self.bits, other.bits)[0])

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            if (self.bits >> k) & 1:
                terms.append("1" if k == 0 else "x" if k == 1 else f"x^{k}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"BinaryPolynomial('{self}')"


ONE = BinaryPolynomial(bits=1)


class FieldElement(BaseModel):
    """Element of GF(2)[x]/(modulus); a field when the modulus is irreducible."""

    model_config = ConfigDict(frozen=True)

    residue: BinaryPolynomial = Field(description="Representative of degree < deg(modulus)")
    modulus: BinaryPolynomial = Field(description="Field-defining irreducible polynomial")

    @model_validator(mode="after")
    def _check_reduced(self) -> "FieldElement":
        if self.modulus.degree < 1:
            raise InvalidModulusError(str(self.modulus))
        if self.residue.degree >= self.modulus.degree:
            raise ValueError("residue degree must be below modulus degree")
        return self

    @classmethod
    def root(cls, modulus: BinaryPolynomial) -> "FieldElement":
        """The class of x, i.e. a root alpha of the modulus."""
        return cls(residue=BinaryPolynomial(bits=poly_mod(X, modulus.bits)), modulus=modulus)

    def is_zero(self) -> bool:
        return self.residue.bits == 0

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        return FieldElement(residue=self.residue + other.residue, modulus=self.modulus)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._same_field(other)
        bits = mulmod(self.residue.bits, other.residue.bits, self.modulus.bits)
        return FieldElement(residue=BinaryPolynomial(bits=bits), modulus=self.modulus)

    def __pow__(self, e: int) -> "FieldElement":
        bits = powmod(self.residue.bits, e, self.modulus.bits)
        return FieldElement(residue=BinaryPolynomial(bits=bits), modulus=self.modulus)

    def _same_field(self, other: "FieldElement") -> None:
        if other.modulus != self.modulus:
            raise ValidationError("Field elements belong to different fields", field="modulus")


# ---------- Operations


def poly_product_mod(
    a: BinaryPolynomial, b: BinaryPolynomial, m: BinaryPolynomial
) -> BinaryPolynomial:
    """Return ``(a * b) mod m``.

    Raises:
        InvalidModulusError: If ``m`` is zero or constant
    """
    if m.degree < 1:
        raise InvalidModulusError(str(m))
    return BinaryPolynomial(bits=mulmod(a.bits, b.bits, m.bits))


def evaluate(p: BinaryPolynomial, element: FieldElement) -> FieldElement:
    """Evaluate ``p`` at a field element by Horner's rule."""
    m = element.modulus.bits
    acc = 0
    for k in range(p.degree, -1, -1):
        acc = mulmod(acc, element.residue.bits, m) ^ ((p.bits >> k) & 1)
    return FieldElement(residue=BinaryPolynomial(bits=poly_mod(acc, m)), modulus=element.modulus)


def is_irreducible(p: BinaryPolynomial) -> bool:
    return is_irreducible_int(p.bits)


def is_primitive(p: BinaryPolynomial) -> bool:
    """True iff ``p`` is irreducible and x has order 2^deg - 1 modulo ``p``."""
    return is_primitive_int(p.bits)


def cyclotomic_coset(e: int, l: int) -> list[int]:
    """Sorted members of the cyclotomic coset {e * 2^j mod 2^l - 1}."""
    order = (1 << l) - 1
    start = e % order
    members = {start}
    member = (start * 2) % order
    while member != start:
        members.add(member)
        member = (member * 2) % order
    return sorted(members)


def coset_leader(e: int, l: int) -> int:
    return cyclotomic_coset(e, l)[0]


def min_poly_of_power(p2: BinaryPolynomial, e: int) -> BinaryPolynomial:
    """Minimal polynomial of alpha^e, alpha a root of the primitive ``p2``.

    The product runs over the full cyclotomic coset of ``e``, so the degree
    equals the coset size (``p2.degree`` unless the coset is degenerate).

    Raises:
        NotPrimitiveError: If ``p2`` is not primitive
        DegenerateExponentError: If ``e`` is a multiple of 2^L2 - 1
    """
    if not is_primitive(p2):
        raise NotPrimitiveError(str(p2))
    if e < 0:
        raise ValidationError(f"Exponent must be non-negative, got {e}", field="e")
    order = (1 << p2.degree) - 1
    if e % order == 0:
        raise DegenerateExponentError(e, order)

    m = p2.bits
    # coefficients over GF(2^L2), ascending degree in the indeterminate
    product = [1]
    for member in cyclotomic_coset(e, p2.degree):
        root = powmod(X, member, m)
        shifted = [0, *product]
        for i, c in enumerate(product):
            shifted[i] ^= mulmod(c, root, m)
        product = shifted

    if any(c > 1 for c in product):
        raise AssertionError("conjugate product left GF(2)")
    result = BinaryPolynomial.from_coefficients(product)
    logger.debug("min poly of alpha^%d over %s is %s", e, p2, result)
    return result


def berlekamp_massey(bits: Iterable[int]) -> BinaryPolynomial:
    """Minimal characteristic polynomial of a bit sequence.

    The result f satisfies sum_k f_k * bits[t + k] = 0 for every window; its
    degree is the linear complexity. An all-zero input yields the constant 1.

    Raises:
        ValidationError: On an empty sequence
    """
    seq = [int(b) & 1 for b in bits]
    if not seq:
        raise ValidationError("Sequence must be nonempty", field="bits")

    # connection polynomial C, bit j = c_j with s_i = sum_{j>=1} c_j s_{i-j}
    c, b = 1, 1
    lc, m = 0, 1
    window = 0  # bit j holds s[i - j]
    for i, s in enumerate(seq):
        window = (window << 1) | s
        if (c & window).bit_count() & 1 == 0:
            m += 1
        elif 2 * lc <= i:
            t = c
            c ^= b << m
            lc = i + 1 - lc
            b = t
            m = 1
        else:
            c ^= b << m
            m += 1
    return BinaryPolynomial(bits=reverse_bits(c, lc + 1))


def linear_complexity(bits: Iterable[int]) -> int:
    return berlekamp_massey(bits).degree


def multiplicative_order_of_x(m: BinaryPolynomial) -> int | None:
    return multiplicative_order_of_x_int(m.bits)


def irreducible_power(p: BinaryPolynomial) -> tuple[BinaryPolynomial, int] | None:
    """Return (q, k) with p = q^k and q irreducible, or None.

    Repeated square roots peel off even exponents; a remaining odd exponent is
    recovered from gcd(p, p'). This is a display aid, not a factorizer.
    """
    bits = p.bits
    if degree(bits) < 1:
        return None
    k = 1
    while derivative(bits) == 0:
        # square root: keep the coefficients of even powers
        root = 0
        for j in range(0, degree(bits) + 1, 2):
            root |= ((bits >> j) & 1) << (j // 2)
        bits = root
        k *= 2
    if is_irreducible_int(bits):
        return BinaryPolynomial(bits=bits), k
    g = poly_gcd(bits, derivative(bits))
    q, r = poly_divmod(bits, g)
    if r or not is_irreducible_int(q):
        return None
    mult = degree(bits) // degree(q)
    if (BinaryPolynomial(bits=q) ** mult).bits != bits:
        return None
    return BinaryPolynomial(bits=q), k * mult


def format_power(p: BinaryPolynomial) -> str:
    """Canonical text, written ``(q)^k`` when p is a proper power of an irreducible."""
    split = irreducible_power(p)
    if split is None or split[1] == 1:
        return str(p)
    q, k = split
    return f"({q})^{k}"
