"""Pytest configuration and fixtures for tests."""

import pytest

from ccsg_automata.config import get_settings
from ccsg_automata.gf2poly import BinaryPolynomial
from ccsg_automata.linearize import linearize_generator
from ccsg_automata.models import CcsgSpec, LfsrSpec, RuleString


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Drop cached settings so each test sees its own environment."""
    for name in (
        "LOG_LEVEL",
        "LOG_JSON",
        "SYNTHESIS_MAX_DEGREE",
        "ATTACK_MAX_PASSES",
        "REPORT_LISTING_LIMIT",
        "DEFAULT_OUTPUT_FORMAT",
        "METRICS_TEXTFILE",
    ):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def poly(text: str) -> BinaryPolynomial:
    return BinaryPolynomial.parse(text)


@pytest.fixture
def p1():
    """Control polynomial 1 + x^2 + x^3."""
    return poly("x^3 + x^2 + 1")


@pytest.fixture
def p2_small():
    """Generating polynomial 1 + x + x^4 of the small generator."""
    return poly("x^4 + x + 1")


@pytest.fixture
def p2():
    """Generating polynomial 1 + x + x^2 + x^4 + x^5."""
    return poly("x^5 + x^4 + x^2 + x + 1")


@pytest.fixture
def small_sg(p1, p2_small):
    """Shrinking generator with L1 = 3, L2 = 4."""
    return CcsgSpec(
        r1=LfsrSpec(char_poly=p1, seed="100"),
        r2=LfsrSpec(char_poly=p2_small, seed="1000"),
    )


@pytest.fixture
def small_ccsg(small_sg):
    """Same registers, decimated by X_t = 1 + A_0(t)."""
    return small_sg.model_copy(update={"taps": (0,)})


@pytest.fixture
def sg(p1, p2):
    """Shrinking generator with L1 = 3, L2 = 5."""
    return CcsgSpec(
        r1=LfsrSpec(char_poly=p1, seed="100"),
        r2=LfsrSpec(char_poly=p2, seed="10000"),
    )


@pytest.fixture
def ccsg(sg):
    """CCSG with all three control stages tapped (w = 3)."""
    return CcsgSpec(r1=sg.r1, r2=sg.r2, taps=(0, 1, 2))


@pytest.fixture
def sg_report(p2):
    return linearize_generator(3, p2)


@pytest.fixture
def ccsg_report(p2):
    return linearize_generator(3, p2, 3)


@pytest.fixture
def ten_cell_rules():
    return RuleString.from_rules([90, 150, 150, 150, 90, 90, 150, 150, 150, 90])


@pytest.fixture
def ten_cell_rows():
    return [
        "0001110110",
        "0010010001",
        "0111101010",
        "1011101011",
        "0001101001",
        "0010101110",
        "0110000101",
        "1001001100",
        "0111110010",
        "1011011111",
    ]
