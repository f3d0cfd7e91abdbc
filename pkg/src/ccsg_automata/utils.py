"""Text helpers for bit sequences, seeds and tap sets."""

from collections.abc import Iterable

from ccsg_automata.exceptions import ParseError


def parse_bits(text: str) -> tuple[int, ...]:
    """Parse a 0/1 string (whitespace ignored), leftmost bit first."""
    bits = []
    for i, c in enumerate(text):
        if c in "01":
            bits.append(int(c))
        elif not c.isspace():
            raise ParseError(f"Unexpected character {c!r} in bit string", text, i)
    if not bits:
        raise ParseError("Empty bit string", text, 0)
    return tuple(bits)


def format_bits(bits: Iterable[int], width: int | None = None) -> str:
    """Bits without separators, optionally folded every ``width`` characters."""
    text = "".join(str(int(b)) for b in bits)
    if not width or width <= 0:
        return text
    return "\n".join(text[i : i + width] for i in range(0, len(text), width))


def parse_taps(text: str) -> tuple[int, ...]:
    """Parse ``"0,1,2"`` into sorted stage indices; ``""`` is the empty tap set."""
    if not text.strip():
        return ()
    taps = []
    offset = 0
    for raw in text.split(","):
        token = raw.strip()
        if not token.isdigit():
            raise ParseError(f"Tap {token!r} is not a stage index", text, offset)
        taps.append(int(token))
        offset += len(raw) + 1
    if len(set(taps)) != len(taps):
        raise ParseError("Duplicate tap index", text)
    return tuple(sorted(taps))
