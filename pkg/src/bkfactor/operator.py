"""Bivariate linear partial differential operators.

An ``Lpdo`` is stored in the expanded normal form ``sum a_jk Dx^j Dy^k`` with
derivatives on the right.  Composition re-expands through the Leibniz rule.
"""

from __future__ import annotations

import functools
from math import comb
from types import MappingProxyType
from typing import Mapping

import sympy

from .expr import Verdict, canonical, to_text, zero_test, x, y

__all__ = [
    "Lpdo",
    "ZeroOperatorError",
    "S",
    "T",
    "apply",
    "compose",
    "transpose",
    "gauge_conjugate",
    "principal_symbol",
    "characteristic_polynomial",
    "compare",
]

S, T = sympy.symbols("s t")


class ZeroOperatorError(ValueError):
    pass


def _monomial_key(item):
    (j, k) = item[0]
    return (-(j + k), -j)


@functools.lru_cache(maxsize=8192)
def _derivative(e: sympy.Expr, j: int, k: int) -> sympy.Expr:
    if j == 0 and k == 0:
        return e
    args = []
    if j:
        args += [x, j]
    if k:
        args += [y, k]
    return sympy.diff(e, *args)


class Lpdo:
    """An operator ``sum a_jk Dx^j Dy^k``; immutable, zero coefficients never stored."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[tuple[int, int], object] | None = None):
        clean = {}
        for (j, k), c in (coeffs or {}).items():
            if j < 0 or k < 0:
                raise ValueError(f"negative derivative order {(j, k)}")
            c = canonical(c)
            if c != 0:
                clean[(int(j), int(k))] = c
        self._coeffs = dict(sorted(clean.items(), key=_monomial_key))

    @classmethod
    def scalar(cls, c) -> "Lpdo":
        return cls({(0, 0): c})

    @classmethod
    def dx(cls) -> "Lpdo":
        return cls({(1, 0): 1})

    @classmethod
    def dy(cls) -> "Lpdo":
        return cls({(0, 1): 1})

    @classmethod
    def from_text(cls, text: str, depends: dict[str, str] | None = None) -> "Lpdo":
        from .parsing import parse_operator

        return parse_operator(text, depends=depends)

    # container protocol

    @property
    def coeffs(self) -> Mapping[tuple[int, int], sympy.Expr]:
        return MappingProxyType(self._coeffs)

    def __getitem__(self, key: tuple[int, int]) -> sympy.Expr:
        return self._coeffs.get(key, sympy.Integer(0))

    def __iter__(self):
        return iter(self._coeffs)

    def items(self):
        return self._coeffs.items()

    @property
    def order(self) -> int | None:
        """Highest j+k with a nonzero coefficient; None for the zero operator."""
        if not self._coeffs:
            return None
        return max(j + k for j, k in self._coeffs)

    @property
    def is_zero_operator(self) -> bool:
        return not self._coeffs

    def grade(self, m: int) -> list[sympy.Expr]:
        """Coefficients of grade m as a binary form: entry j is a_{j, m-j}."""
        return [self[j, m - j] for j in range(m + 1)]

    def free_symbols(self) -> set:
        out = set()
        for c in self._coeffs.values():
            out |= c.free_symbols
        return out

    # arithmetic

    def _coerce(self, other) -> "Lpdo":
        if isinstance(other, Lpdo):
            return other
        return Lpdo.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        keys = set(self._coeffs) | set(other._coeffs)
        return Lpdo({key: self[key] + other[key] for key in keys})

    __radd__ = __add__

    def __neg__(self):
        return Lpdo({key: -c for key, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return compose(self, self._coerce(other))

    def __rmul__(self, other):
        return compose(self._coerce(other), self)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("operator powers must be non-negative integers")
        out = Lpdo.scalar(1)
        for _ in range(n):
            out = compose(out, self)
        return out

    def __call__(self, u):
        return apply(self, u)

    def __eq__(self, other):
        if not isinstance(other, Lpdo):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __repr__(self):
        return f"Lpdo({to_text_operator(self)!r})"

    def __str__(self):
        return to_text_operator(self)


def _monomial_text(j: int, k: int) -> str:
    parts = []
    if j:
        parts.append("Dx" if j == 1 else f"Dx^{j}")
    if k:
        parts.append("Dy" if k == 1 else f"Dy^{k}")
    return "*".join(parts)


def to_text_operator(A: Lpdo) -> str:
    """Deterministic grammar text, highest grade first, graded-lex within a grade."""
    if A.is_zero_operator:
        return "0"
    pieces: list[tuple[bool, str]] = []
    for (j, k), c in A.items():
        mono = _monomial_text(j, k)
        if not mono:
            from .expr import ordered_terms

            for t in ordered_terms(c):
                neg = t.could_extract_minus_sign()
                pieces.append((neg, to_text(-t if neg else t)))
            continue
        neg = c.could_extract_minus_sign() and not c.is_Add
        c = -c if neg else c
        if c == 1:
            body = mono
        elif c.is_Add:
            body = f"({to_text(c)})*{mono}"
        else:
            body = f"{to_text(c)}*{mono}"
        pieces.append((neg, body))
    out = []
    for i, (neg, body) in enumerate(pieces):
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def apply(A: Lpdo, u) -> sympy.Expr:
    u = sympy.sympify(u)
    return canonical(sum((c * _derivative(u, j, k) for (j, k), c in A.items()), sympy.Integer(0)))


def compose(A: Lpdo, B: Lpdo) -> Lpdo:
    """A o B, expanded with the Leibniz rule."""
    out: dict[tuple[int, int], sympy.Expr] = {}
    for (j, k), a in A.items():
        for (m, n), b in B.items():
            for g1 in range(j + 1):
                for g2 in range(k + 1):
                    db = _derivative(b, g1, g2)
                    if db == 0:
                        continue
                    key = (j - g1 + m, k - g2 + n)
                    term = comb(j, g1) * comb(k, g2) * a * db
                    out[key] = out.get(key, 0) + term
    return Lpdo(out)


def transpose(A: Lpdo) -> Lpdo:
    """Formal transpose: coefficient of D^a is sum_b (-1)^|a+b| C(a+b, a) D^b a_{a+b}."""
    out: dict[tuple[int, int], sympy.Expr] = {}
    for (j, k), c in A.items():
        for a1 in range(j + 1):
            for a2 in range(k + 1):
                b1, b2 = j - a1, k - a2
                term = (-1) ** (j + k) * comb(j, a1) * comb(k, a2) * _derivative(c, b1, b2)
                out[(a1, a2)] = out.get((a1, a2), 0) + term
    return Lpdo(out)


def gauge_conjugate(A: Lpdo, phi) -> Lpdo:
    """exp(-phi) o A o exp(phi), i.e. Dx -> Dx + phi_x and Dy -> Dy + phi_y."""
    phi = sympy.sympify(phi)
    shifted_x = Lpdo({(1, 0): 1, (0, 0): sympy.diff(phi, x)})
    shifted_y = Lpdo({(0, 1): 1, (0, 0): sympy.diff(phi, y)})
    powers_x = {0: Lpdo.scalar(1)}
    powers_y = {0: Lpdo.scalar(1)}
    out = Lpdo()
    for (j, k), c in A.items():
        for table, base, n in ((powers_x, shifted_x, j), (powers_y, shifted_y, k)):
            for m in range(1, n + 1):
                if m not in table:
                    table[m] = compose(table[m - 1], base)
        out = out + Lpdo.scalar(c) * compose(powers_x[j], powers_y[k])
    return out


def principal_symbol(A: Lpdo) -> sympy.Expr:
    """Top-grade form sum_{j+k=n} a_jk s^j t^k in the symbols ``S``, ``T``."""
    n = A.order
    if n is None:
        raise ZeroOperatorError("the zero operator has no principal symbol")
    return canonical(sum(c * S**j * T**(n - j) for j, c in enumerate(A.grade(n))))


def characteristic_polynomial(A: Lpdo) -> sympy.Expr:
    """P(t) = Sym(t, 1)."""
    n = A.order
    if n is None:
        raise ZeroOperatorError("the zero operator has no characteristic polynomial")
    return canonical(sum(c * T**j for j, c in enumerate(A.grade(n))))


def compare(A: Lpdo, B: Lpdo) -> Verdict:
    """Weakest zero-test verdict over the coefficient differences of A - B."""
    worst = Verdict.PROVEN_ZERO
    for key in set(A) | set(B):
        v = zero_test(A[key] - B[key])
        if v is Verdict.NONZERO:
            return v
        if v is Verdict.NUMERICALLY_ZERO:
            worst = v
    return worst

