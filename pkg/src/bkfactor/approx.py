"""Numerical side of approximate factorization.

Auxiliary operators with coefficients damped by a user-chosen f(x, y),
invariant fields sampled on rectangular grids, coefficient deltas, and the
forward proximity check of a00 against the function R built from linear
coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np
import sympy

from .expr import DomainError, canonical, point_function, to_text, x, y
from .factor import RootDirection, extract_left_factor, root_direction
from .jsonio import format_float
from .operator import Lpdo

__all__ = [
    "GridSpec",
    "GridField",
    "LinearCoeffs",
    "RCheck",
    "sample",
    "scale_operator",
    "invariant_field",
    "coefficient_deltas",
    "r_function",
    "r_function_check",
    "scan_scalings",
]


@dataclass(frozen=True)
class GridSpec:
    x0: float
    x1: float
    y0: float
    y1: float
    nx: int = 200
    ny: int = 200

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("grid ranges must satisfy x0 < x1 and y0 < y1")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 samples per axis")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``"x0,x1,y0,y1[,nx,ny]"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) not in (4, 6):
            raise ValueError("grid must be x0,x1,y0,y1 or x0,x1,y0,y1,nx,ny")
        x0, x1, y0, y1 = (float(p) for p in parts[:4])
        if len(parts) == 6:
            return cls(x0, x1, y0, y1, int(parts[4]), int(parts[5]))
        return cls(x0, x1, y0, y1)

    @classmethod
    def square(cls, lo: float, hi: float, n: int = 200) -> "GridSpec":
        return cls(lo, hi, lo, hi, n, n)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y0, self.y1, self.ny)

    def refined(self) -> "GridSpec":
        return GridSpec(self.x0, self.x1, self.y0, self.y1, 2 * self.nx, 2 * self.ny)

    def to_json(self) -> dict:
        return {"x0": self.x0, "x1": self.x1, "y0": self.y0, "y1": self.y1, "nx": self.nx, "ny": self.ny}


@dataclass(frozen=True)
class GridField:
    """Samples ``values[i, j] = source(xs[i], ys[j])``; NaN where undefined."""

    spec: GridSpec
    values: np.ndarray
    source: sympy.Expr

    @property
    def nan_count(self) -> int:
        return int(np.isnan(self.values).sum())

    def _abs(self) -> np.ndarray:
        a = np.abs(self.values)
        return a[~np.isnan(a)]

    @property
    def max_abs(self) -> float:
        a = self._abs()
        return float(a.max()) if a.size else math.nan

    @property
    def min_abs(self) -> float:
        a = self._abs()
        return float(a.min()) if a.size else math.nan

    @property
    def mean_abs(self) -> float:
        a = self._abs()
        return float(a.mean()) if a.size else math.nan

    @property
    def argmax(self) -> tuple[float, float] | None:
        a = np.abs(self.values)
        if np.isnan(a).all():
            return None
        i, j = np.unravel_index(np.nanargmax(a), a.shape)
        return float(self.spec.xs[i]), float(self.spec.ys[j])

    def at(self, x0: float, y0: float) -> float:
        """Sample nearest to (x0, y0)."""
        i = int(np.abs(self.spec.xs - x0).argmin())
        j = int(np.abs(self.spec.ys - y0).argmin())
        return float(self.values[i, j])

    def summary(self) -> dict:
        am = self.argmax
        return {
            "max_abs": self.max_abs,
            "mean_abs": self.mean_abs,
            "min_abs": self.min_abs,
            "argmax": None if am is None else list(am),
            "nan_count": self.nan_count,
            "grid": self.spec.to_json(),
        }

    def write_csv(self, out: TextIO) -> None:
        out.write("x,y,value\n")
        xs, ys = self.spec.xs, self.spec.ys
        for i, xv in enumerate(xs):
            xt = format_float(xv)
            for j, yv in enumerate(ys):
                out.write(f"{xt},{format_float(yv)},{format_float(self.values[i, j])}\n")


def sample(e, spec: GridSpec, params: dict[str, float] | None = None) -> GridField:
    """Evaluate an expression on every grid point, row by row in x."""
    e = canonical(e)
    f = point_function(e, params)
    xs, ys = spec.xs.tolist(), spec.ys.tolist()
    values = np.empty((spec.nx, spec.ny))
    for i, xv in enumerate(xs):
        row = values[i]
        for j, yv in enumerate(ys):
            try:
                row[j] = f(xv, yv)
            except DomainError:
                row[j] = math.nan
    return GridField(spec, values, e)


def scale_operator(A: Lpdo, f, mask: Iterable[tuple[int, int]] | None = None) -> Lpdo:
    """Multiply the masked coefficients by f; default mask is every key below the principal grade."""
    f = sympy.sympify(f)
    if mask is None:
        n = A.order
        mask = [key for key in A if sum(key) < n]
    mask = set(mask)
    missing = [key for key in mask if key not in A.coeffs]
    if missing:
        raise KeyError(f"masked coefficient(s) absent: {sorted(missing)}")
    return Lpdo({key: (f * c if key in mask else c) for key, c in A.items()})


def invariant_field(A: Lpdo, root: RootDirection | str, spec: GridSpec, grade: int = 0) -> GridField:
    """Sample the grade-``grade`` invariant of the left factor at ``root``."""
    if not isinstance(root, RootDirection):
        root = root_direction(A, root)
    report = extract_left_factor(A, root)
    for inv in report.invariants:
        if inv.grade == grade:
            return sample(inv.value, spec)
    raise ValueError(f"no invariant of grade {grade} for an operator of order {A.order}")


def coefficient_deltas(
    A: Lpdo, A_aux: Lpdo, spec: GridSpec, include_equal: bool = False
) -> dict[tuple[int, int], GridField]:
    """Fields a_jk - a~_jk, for differing coefficients (or all with ``include_equal``)."""
    out = {}
    for key in sorted(set(A) | set(A_aux), key=lambda k: (-sum(k), -k[0])):
        delta = canonical(A[key] - A_aux[key])
        if delta != 0 or include_equal:
            out[key] = sample(delta, spec)
    return out


@dataclass(frozen=True)
class LinearCoeffs:
    """a00 = b3*x + b2*y + b1, a10 = c3*x + c2*y + c1, a01 = d3*x + d2*y + d1."""

    b: tuple[sympy.Rational, sympy.Rational, sympy.Rational]
    c: tuple[sympy.Rational, sympy.Rational, sympy.Rational]
    d: tuple[sympy.Rational, sympy.Rational, sympy.Rational]

    def __post_init__(self):
        for name in "bcd":
            object.__setattr__(self, name, tuple(sympy.Rational(v) for v in getattr(self, name)))

    @property
    def s(self) -> tuple[sympy.Rational, ...]:
        return tuple(ci - di for ci, di in zip(self.c, self.d))

    @staticmethod
    def _linear(v) -> sympy.Expr:
        return v[2] * x + v[1] * y + v[0]

    @property
    def a00(self) -> sympy.Expr:
        return self._linear(self.b)

    @property
    def a10(self) -> sympy.Expr:
        return self._linear(self.c)

    @property
    def a01(self) -> sympy.Expr:
        return self._linear(self.d)

    def operator(self) -> Lpdo:
        return Lpdo({(2, 0): 1, (0, 2): -1, (1, 0): self.a10, (0, 1): self.a01, (0, 0): self.a00})

    @classmethod
    def from_operator(cls, A: Lpdo) -> "LinearCoeffs":
        if set(A) - {(2, 0), (0, 2), (1, 0), (0, 1), (0, 0)} or A[2, 0] != 1 or A[0, 2] != -1:
            raise ValueError("expected Dx^2 - Dy^2 + a10*Dx + a01*Dy + a00")

        def triple(e):
            poly = sympy.Poly(e, x, y)
            if poly.total_degree() > 1 or not all(c.is_Rational for c in poly.coeffs()):
                raise ValueError(f"coefficient {e} is not linear with rational coefficients")
            return (poly.coeff_monomial(1), poly.coeff_monomial(y), poly.coeff_monomial(x))

        return cls(triple(A[0, 0]), triple(A[1, 0]), triple(A[0, 1]))


def r_function(lc: LinearCoeffs) -> sympy.Expr:
    """R = (s3 - s2)/2 + (s3*x + s2*y + s1)^2/4."""
    s1, s2, s3 = lc.s
    return canonical((s3 - s2) / 2 + (s3 * x + s2 * y + s1) ** 2 / 4)


@dataclass(frozen=True)
class RCheck:
    holds: bool
    worst: float
    at: tuple[float, float] | None
    field: GridField

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "worst": self.worst,
            "at": None if self.at is None else list(self.at),
            "r_function": to_text(self.field.source),
        }


def r_function_check(lc: LinearCoeffs, eps: float, spec: GridSpec) -> RCheck:
    """Does |a00 - R| < eps hold on every grid point?"""
    if eps <= 0:
        raise ValueError("eps must be positive")
    field = sample(lc.a00 - r_function(lc), spec)
    worst = field.max_abs
    return RCheck(bool(worst < eps), worst, field.argmax, field)


def scan_scalings(
    A: Lpdo,
    candidates: Iterable,
    root: RootDirection | str,
    spec: GridSpec,
    mask: Iterable[tuple[int, int]] | None = None,
) -> list[tuple[sympy.Expr, GridField]]:
    """Rank candidate damping functions by the sup-norm of the resulting invariant."""
    mask = None if mask is None else list(mask)
    out = []
    for f in candidates:
        f = sympy.sympify(f)
        aux = scale_operator(A, f, mask)
        out.append((f, invariant_field(aux, root, spec)))
    return sorted(out, key=lambda item: (math.isnan(item[1].max_abs), item[1].max_abs))
