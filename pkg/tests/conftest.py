"""Shared operators and seeded random generators."""

import random

import pytest
import sympy

from bkfactor.expr import x, y
from bkfactor.operator import Lpdo
from bkfactor.parsing import parse_operator

FACT = "Dx^2 - Dy^2 + y*Dx + x*Dy + 1/4*(y^2 - x^2) - 1"
FACT1 = "Dx^2 - Dy^2 + y*Dx + x*Dy + 1/2*(y^2 - x^2) - 1"
FACT2 = "Dx^2 - Dy^2 + sin(y)*Dx + cos(x)*Dy + 1/2*(sin(y)^2 - cos(x)^2)"
LANDAU = "Dx^3 + x*Dx^2*Dy + 2*Dx^2 + (2*x + 2)*Dx*Dy + Dx + (2 + x)*Dy"
ODE = "x*Dx^3 + (x^2 - 1)*Dx^2 - x*Dx + 2/x^2 - 1"
A1 = "Dx*Dy + x*Dx + 1"
A2 = "Dx*Dy + x*Dx + Dy + x + 1"
A3 = "Dx*Dy + 2*x*Dx + (y + 1)*Dy + 2*(x*y + x + 1)"
A4 = "Dx*Dy + x*Dx + (cos(x) + 1)*Dy + x*cos(x) + x + 1"


@pytest.fixture
def op():
    return parse_operator


def random_poly(rng: random.Random, degree: int = 1, lo: int = -3, hi: int = 3) -> sympy.Expr:
    """Random polynomial in x, y with small integer coefficients."""
    return sympy.expand(
        sum(rng.randint(lo, hi) * x**i * y**j for i in range(degree + 1) for j in range(degree + 1 - i))
    )


def random_coefficient(rng: random.Random) -> sympy.Expr:
    """Polynomial, trigonometric, or exponential coefficient."""
    kind = rng.randrange(4)
    base = random_poly(rng, rng.randint(0, 2))
    if kind == 0:
        return base
    if kind == 1:
        return base + rng.randint(-2, 2) * sympy.sin(rng.randint(1, 2) * x + y)
    if kind == 2:
        return base * sympy.cos(y)
    return base + sympy.exp(x - y)


def random_operator(rng: random.Random, order: int) -> Lpdo:
    coeffs = {}
    for g in range(order + 1):
        for j in range(g + 1):
            if rng.random() < 0.7:
                coeffs[j, g - j] = random_coefficient(rng)
    top = rng.randint(0, order)
    coeffs[top, order - top] = rng.choice([1, 2, -1, x, y + 1])
    return Lpdo(coeffs)


def random_first_order(rng: random.Random, omega=None) -> Lpdo:
    """Dx - omega*Dy + p with polynomial p."""
    if omega is None:
        omega = rng.choice([-2, -1, 1, 2, 3])
    return Lpdo({(1, 0): 1, (0, 1): -omega, (0, 0): random_poly(rng, rng.randint(0, 2))})


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
