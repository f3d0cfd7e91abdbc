"""Data models for registers, generators, automata and analysis reports."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ccsg_automata.gf2poly import BinaryPolynomial

Bit = Literal[0, 1]
Source = Literal["intercepted", "phase-shift", "interleave-completion"]


def _check_bits(values: tuple[int, ...]) -> tuple[int, ...]:
    for v in values:
        if v not in (0, 1):
            raise ValueError(f"{v!r} is not a bit")
    return tuple(int(v) for v in values)


class LfsrSpec(BaseModel):
    """A Fibonacci LFSR: characteristic polynomial plus seed in output order."""

    model_config = ConfigDict(frozen=True)

    char_poly: BinaryPolynomial = Field(description="Characteristic polynomial, degree = length")
    seed: tuple[int, ...] = Field(description="First L output bits a_0 ... a_{L-1}")

    @field_validator("seed", mode="before")
    @classmethod
    def normalize_seed(cls, v):
        """Accept a 0/1 string as well as a bit sequence."""
        if isinstance(v, str):
            return tuple(int(c) for c in v)
        return tuple(v)

    @model_validator(mode="after")
    def _check_lengths(self) -> "LfsrSpec":
        if self.char_poly.degree < 1:
            raise ValueError("characteristic polynomial must have degree >= 1")
        if len(self.seed) != self.char_poly.degree:
            raise ValueError(
                f"seed length {len(self.seed)} != register length {self.char_poly.degree}"
            )
        _check_bits(self.seed)
        return self

    @property
    def length(self) -> int:
        return self.char_poly.degree

    def __str__(self) -> str:
        return f"LFSR[{self.char_poly}; seed {''.join(map(str, self.seed))}]"


class CcsgSpec(BaseModel):
    """Clock-controlled shrinking generator; empty taps give the shrinking generator."""

    model_config = ConfigDict(frozen=True)

    r1: LfsrSpec = Field(description="Control register (length L1)")
    r2: LfsrSpec = Field(description="Generating register (length L2)")
    taps: tuple[int, ...] = Field(
        default=(), description="Control stage indices i_0 < ... < i_{w-1} feeding X_t"
    )

    @model_validator(mode="after")
    def _check_taps(self) -> "CcsgSpec":
        if list(self.taps) != sorted(set(self.taps)):
            raise ValueError("taps must be distinct and strictly increasing")
        for i in self.taps:
            if not 0 <= i < self.r1.length:
                raise ValueError(f"tap {i} outside control register stages 0..{self.r1.length - 1}")
        return self

    @property
    def w(self) -> int:
        return len(self.taps)

    @property
    def is_shrinking(self) -> bool:
        return not self.taps

    @property
    def full_width_taps(self) -> bool:
        """True when w = L1, one beyond the bound stated for the decimation function."""
        return self.w == self.r1.length


class RuleString(BaseModel):
    """Null-boundary 90/150 CA rules, 0 = rule 90 and 1 = rule 150, leftmost = cell 1."""

    model_config = ConfigDict(frozen=True)

    rules: str = Field(min_length=1, pattern=r"^[01]+$", description="Binary rule codification")

    @classmethod
    def from_rules(cls, rules: list[int]) -> "RuleString":
        """Build from numeric rules, e.g. [90, 150, 150]."""
        table = {90: "0", 150: "1"}
        try:
            return cls(rules="".join(table[r] for r in rules))
        except KeyError as e:
            raise ValueError(f"unsupported rule {e.args[0]}") from e

    @property
    def n(self) -> int:
        return len(self.rules)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.rules)

    def as_rules(self) -> list[int]:
        return [150 if c == "1" else 90 for c in self.rules]

    def mirror(self) -> "RuleString":
        return RuleString(rules=self.rules[::-1])

    def __str__(self) -> str:
        return self.rules


class CaState(BaseModel):
    """Cell contents x_1 ... x_n of a CA at one time step."""

    model_config = ConfigDict(frozen=True)

    cells: tuple[int, ...] = Field(min_length=1, description="Cell i content at index i - 1")

    @field_validator("cells", mode="before")
    @classmethod
    def normalize_cells(cls, v):
        if isinstance(v, str):
            return tuple(int(c) for c in v)
        return tuple(int(c) for c in v)

    @field_validator("cells")
    @classmethod
    def check_bits(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        return _check_bits(v)

    @property
    def n(self) -> int:
        return len(self.cells)

    def __str__(self) -> str:
        return "".join(map(str, self.cells))


class InitialStateSolution(BaseModel):
    """A CA state emitting a requested prefix at one cell."""

    model_config = ConfigDict(frozen=True)

    state: CaState
    cell: int = Field(ge=1, description="1-indexed extraction cell")
    rank: int = Field(ge=0, description="Rank of the observation system")
    unique: bool = Field(description="False when other states emit the same prefix")


class LinearizationReport(BaseModel):
    """Pair of 90/150 CA modelling a shrinking generator or CCSG."""

    model_config = ConfigDict(frozen=True)

    l1: int = Field(ge=1, description="Control register length")
    l2: int = Field(ge=1, description="Generating register length")
    taps_width: int | None = Field(default=None, description="w for a CCSG, None for the SG")
    exponent: int = Field(description="E (shrinking generator) or D (CCSG), unreduced")
    reduced_exponent: int = Field(description="Exponent modulo 2^L2 - 1")
    coset_leader: int = Field(description="Smallest member of the exponent's cyclotomic coset")
    coset_poly: BinaryPolynomial = Field(description="P(x) or P'(x)")
    coset_degenerate: bool = Field(description="Coset smaller than L2")
    full_width_taps: bool = Field(default=False, description="w = L1")
    base_pair: tuple[RuleString, RuleString]
    final_pair: tuple[RuleString, RuleString]
    doublings: int = Field(ge=0, description="L1 - 1")
    final_char_poly: BinaryPolynomial = Field(description="coset_poly^(2^(L1-1))")

    @property
    def n(self) -> int:
        return self.final_pair[0].n


class ShiftEntry(BaseModel):
    """Cell ``cell`` emits the reference sequence advanced by ``shift`` steps."""

    model_config = ConfigDict(frozen=True)

    cell: int = Field(ge=1)
    reference: int = Field(ge=1)
    shift: int = Field(ge=0)


class ShiftTable(BaseModel):
    """Relative phase shifts of CA cells against the extreme cells."""

    model_config = ConfigDict(frozen=True)

    rules: RuleString
    order: int | None = Field(description="Order of S modulo R(S); None if S is not a unit")
    entries: tuple[ShiftEntry, ...] = ()
    unrelated: tuple[tuple[int, int], ...] = Field(
        default=(), description="(cell, reference) pairs with no power of S relating them"
    )

    @property
    def references(self) -> list[int]:
        return sorted({1, self.rules.n})

    def shift(self, cell: int, reference: int) -> int | None:
        for e in self.entries:
            if e.cell == cell and e.reference == reference:
                return e.shift
        return None

    def related(self, reference: int) -> list[ShiftEntry]:
        return [e for e in self.entries if e.reference == reference]

    def as_mapping(self) -> dict[tuple[int, int], int]:
        return {(e.cell, e.reference): e.shift for e in self.entries}

    def repetition_rate(self, reference: int) -> float:
        """Fraction of the other cells that repeat the reference sequence."""
        if self.rules.n == 1:
            return 0.0
        others = [e for e in self.related(reference) if e.cell != reference]
        return len(others) / (self.rules.n - 1)


class InterceptedWindow(BaseModel):
    """Contiguous intercepted keystream bits with a known absolute offset."""

    model_config = ConfigDict(frozen=True)

    bits: tuple[int, ...] = Field(min_length=1)
    offset: int = Field(default=0, ge=0, description="Keystream index of bits[0]")

    @field_validator("bits", mode="before")
    @classmethod
    def normalize_bits(cls, v):
        if isinstance(v, str):
            return tuple(int(c) for c in v)
        return tuple(int(c) for c in v)

    @field_validator("bits")
    @classmethod
    def check_bits(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        return _check_bits(v)

    @property
    def m(self) -> int:
        return len(self.bits)

    def positions(self) -> dict[int, int]:
        return {self.offset + i: b for i, b in enumerate(self.bits)}


class ReconstructionResult(BaseModel):
    """Keystream bits known after an attack, with provenance."""

    model_config = ConfigDict(frozen=True)

    known: dict[int, int] = Field(default_factory=dict, description="Position -> bit")
    sources: dict[int, Source] = Field(default_factory=dict, description="Position -> provenance")
    nt_estimate: int = Field(default=0, description="M * floor(M / L2)^2")
    window_length: int = Field(default=0, ge=0)
    horizon: int | None = Field(default=None, description="Positions at or beyond are not derived")
    passes: int = Field(default=0, ge=0)
    repetition_rates: dict[str, float] = Field(
        default_factory=dict, description="Automaton rule string -> measured repetition rate"
    )

    @model_validator(mode="after")
    def _check_provenance(self) -> "ReconstructionResult":
        if self.known.keys() != self.sources.keys():
            raise ValueError("every known position needs exactly one provenance tag")
        return self

    def counts(self) -> dict[str, int]:
        totals = {"intercepted": 0, "phase-shift": 0, "interleave-completion": 0}
        for source in self.sources.values():
            totals[source] += 1
        return totals

    def __len__(self) -> int:
        return len(self.known)
