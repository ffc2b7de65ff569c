"""Coefficient expressions in two variables ``x`` and ``y``.

Expressions are plain sympy trees restricted to the subclass the grammar can
produce: exact rationals, ``sqrt2``, ``pi``, the variables, named parameters,
sums, products, rational powers and ``sin``/``cos``/``exp``/``ln``.  The
canonical form is sympy's automatic normal form after ``expand``; division
stays a first-class node (no common denominators are formed).
"""

from __future__ import annotations

import enum
import functools
import math
import random

import numpy as np
import sympy
from sympy.core.function import AppliedUndef

__all__ = [
    "x",
    "y",
    "SQRT2",
    "Verdict",
    "EvaluationError",
    "DomainError",
    "UnboundParameterError",
    "parameter",
    "unknown_function",
    "canonical",
    "tidy",
    "diff",
    "substitute",
    "zero_test",
    "is_zero",
    "evaluate",
    "point_function",
    "to_text",
    "parse",
]

x = sympy.Symbol("x")
y = sympy.Symbol("y")
SQRT2 = sympy.sqrt(2)

VARIABLES = (x, y)
FUNCTIONS = {"sin": sympy.sin, "cos": sympy.cos, "exp": sympy.exp, "ln": sympy.log}


class Verdict(str, enum.Enum):
    PROVEN_ZERO = "proven-zero"
    NUMERICALLY_ZERO = "numerically-zero"
    NONZERO = "proven-nonzero"

    @property
    def is_zero(self) -> bool:
        return self is not Verdict.NONZERO


class EvaluationError(ValueError):
    pass


class DomainError(EvaluationError):
    """Division by zero, logarithm of a non-positive value, complex result."""


class UnboundParameterError(EvaluationError):
    pass


def parameter(name: str, depends_on: sympy.Symbol | None = None) -> sympy.Expr:
    """A named parameter; constant unless ``depends_on`` names one variable.

    A parameter depending on ``y`` only is killed by ``d/dx`` and has an
    opaque derivative in ``y``.
    """
    if depends_on is None:
        return sympy.Symbol(name)
    if depends_on not in VARIABLES:
        raise ValueError(f"parameter may depend on x or y only, not {depends_on}")
    return sympy.Function(name)(depends_on)


def unknown_function(name: str = "r") -> sympy.Expr:
    """An unknown function of both variables (the Riccati unknown)."""
    return sympy.Function(name)(x, y)


def canonical(e) -> sympy.Expr:
    return _expand(sympy.sympify(e))


@functools.lru_cache(maxsize=8192)
def _expand(e: sympy.Expr) -> sympy.Expr:
    return sympy.expand(e)


def _has_symbolic_denominator(e: sympy.Expr) -> bool:
    return any(
        t.is_Pow and t.exp.is_negative and t.base.free_symbols for t in sympy.preorder_traversal(e)
    )


def tidy(e) -> sympy.Expr:
    """Shortest of: canonical form, one combined fraction, polynomial part plus proper fraction."""
    e = canonical(e)
    if not _has_symbolic_denominator(e):
        return e
    together = sympy.cancel(sympy.together(e))
    options = [e, canonical(together)]
    num, den = sympy.fraction(together)
    try:
        quo, rem = sympy.div(num, den)
        options.append(canonical(quo + rem / den))
    except sympy.PolynomialError:
        pass
    return min(options, key=sympy.count_ops)


def diff(e, v=x) -> sympy.Expr:
    return canonical(sympy.diff(e, v))


def substitute(e, target, replacement) -> sympy.Expr:
    """Replace ``target`` (variable, parameter or unknown function) and canonicalize."""
    e = sympy.sympify(e)
    out = e.subs(target, sympy.sympify(replacement))
    if out.has(sympy.Derivative):
        out = out.doit()
    return canonical(out)


# ---------------------------------------------------------------------------
# zero testing


def _pythagorean(e: sympy.Expr) -> sympy.Expr:
    """Rewrite every sin(u)^k, k >= 2, using sin^2 u = 1 - cos^2 u."""

    def is_sin_power(t):
        return (
            t.is_Pow
            and isinstance(t.base, sympy.sin)
            and t.exp.is_Integer
            and t.exp >= 2
        )

    def rewrite(t):
        u = t.base.args[0]
        return sympy.sin(u) ** (t.exp - 2) * (1 - sympy.cos(u) ** 2)

    while e.has(sympy.sin) and any(is_sin_power(t) for t in sympy.preorder_traversal(e)):
        e = sympy.expand(e.replace(is_sin_power, rewrite))
    return e


def _symbolic_zero(e: sympy.Expr) -> bool | None:
    """True if provably zero, False if provably a nonzero constant, else None."""
    e = canonical(e)
    if e == 0:
        return True
    if e.is_Number:
        return False
    if e.has(sympy.sin):
        e = _pythagorean(e)
        if e == 0:
            return True
    num, _ = sympy.fraction(sympy.together(e))
    num = sympy.expand(num)
    if num.has(sympy.sin):
        num = _pythagorean(num)
    if num == 0:
        return True
    if num.is_Number:
        return False
    return None


_PROBE_POINTS = 32
_PROBE_SEED = 20061


def _probe_values(count: int, seed: int) -> list[float]:
    rng = random.Random(seed)
    return [rng.choice((-1.0, 1.0)) * rng.uniform(0.1, 3.0) for _ in range(count)]


def _numeric_zero(e: sympy.Expr) -> bool:
    """Evaluate at deterministic pseudo-random points against a relative tolerance."""
    jets = sorted(e.atoms(sympy.Derivative), key=sympy.default_sort_key, reverse=True)
    jets += sorted(e.atoms(AppliedUndef), key=sympy.default_sort_key)
    e = e.xreplace({j: sympy.Dummy(f"j{i}") for i, j in enumerate(jets)}) if jets else e
    symbols = sorted(e.free_symbols - set(VARIABLES), key=sympy.default_sort_key)
    args = [x, y, *symbols]
    terms = sympy.Add.make_args(e)

    candidates = 3 * _PROBE_POINTS
    columns = [
        np.array(_probe_values(candidates, _PROBE_SEED + k), dtype=complex)
        for k in range(len(args))
    ]
    with np.errstate(all="ignore"):
        fn = sympy.lambdify(args, list(terms), modules="numpy")
        values = [np.broadcast_to(np.asarray(v, dtype=complex), (candidates,)) for v in fn(*columns)]
    stacked = np.vstack(values)
    finite = np.all(np.isfinite(stacked), axis=0)
    stacked = stacked[:, finite][:, :_PROBE_POINTS]
    if stacked.shape[1] == 0:
        return False
    total = np.abs(stacked.sum(axis=0))
    scale = 1.0 + np.abs(stacked).max(axis=0)
    return bool(np.all(total < 1e-9 * scale))


def zero_test(e) -> Verdict:
    e = sympy.sympify(e)
    symbolic = _symbolic_zero(e)
    if symbolic is True:
        return Verdict.PROVEN_ZERO
    if symbolic is False:
        return Verdict.NONZERO
    return Verdict.NUMERICALLY_ZERO if _numeric_zero(canonical(e)) else Verdict.NONZERO


def is_zero(e) -> bool:
    return zero_test(e).is_zero


# ---------------------------------------------------------------------------
# numeric evaluation


def _evaluation_form(e: sympy.Expr) -> tuple[sympy.Expr, tuple[str, ...]]:
    if e.has(sympy.Derivative):
        raise UnboundParameterError(f"cannot evaluate derivative of an unknown function in {to_text(e)}")
    apps = e.atoms(AppliedUndef)
    if apps:
        e = e.xreplace({a: sympy.Symbol(a.func.__name__) for a in apps})
    names = tuple(sorted(str(s) for s in e.free_symbols - set(VARIABLES)))
    return e, names


@functools.lru_cache(maxsize=512)
def _compiled(e: sympy.Expr):
    e, names = _evaluation_form(e)
    args = [x, y, *(sympy.Symbol(n) for n in names)]
    return sympy.lambdify(args, e, modules="math"), names


def point_function(e, params: dict[str, float] | None = None):
    """Return ``f(x0, y0) -> float`` raising DomainError where undefined."""
    fn, names = _compiled(sympy.sympify(e))
    params = params or {}
    missing = [n for n in names if n not in params]
    if missing:
        raise UnboundParameterError(f"unbound parameter(s): {', '.join(missing)}")
    bound = [float(params[n]) for n in names]

    def f(x0: float, y0: float) -> float:
        try:
            v = fn(float(x0), float(y0), *bound)
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise DomainError(f"undefined at ({x0!r}, {y0!r}): {exc}") from None
        if isinstance(v, complex):
            if v.imag != 0:
                raise DomainError(f"complex value at ({x0!r}, {y0!r})")
            v = v.real
        v = float(v)
        if not math.isfinite(v):
            raise DomainError(f"non-finite value at ({x0!r}, {y0!r})")
        return v

    return f


def evaluate(e, x0: float, y0: float, params: dict[str, float] | None = None) -> float:
    return point_function(e, params)(x0, y0)


# ---------------------------------------------------------------------------
# printing through the input grammar

_ADD, _MUL, _POW, _ATOM = 1, 2, 3, 4


def _degree(t: sympy.Expr) -> sympy.Rational:
    if t.is_Number or t.is_NumberSymbol or t is sympy.I:
        return sympy.Integer(0)
    if t.is_Pow:
        if t.exp.is_Rational:
            return _degree(t.base) * t.exp
        return sympy.Integer(1)
    if t.is_Mul:
        return sum((_degree(f) for f in t.args), sympy.Integer(0))
    if t.is_Add:
        return max(_degree(f) for f in t.args)
    return sympy.Integer(1)


def _derivative_weight(t: sympy.Expr) -> int:
    return sum(sum(c for _, c in d.variable_count) for d in t.atoms(sympy.Derivative))


def _term_key(t: sympy.Expr):
    return (_degree(t), _derivative_weight(t), sympy.default_sort_key(t))


def ordered_terms(e: sympy.Expr) -> list[sympy.Expr]:
    """Summands in printing order: ascending degree, then derivative order."""
    return sorted(sympy.Add.make_args(e), key=_term_key)


def _precedence(e: sympy.Expr) -> int:
    if e.is_Add:
        return _ADD
    if e.is_Mul:
        return _MUL
    if e.is_Rational and not e.is_Integer:
        return _MUL
    if e.is_Number and e < 0:
        return _ADD
    if e.is_Pow:
        if e.base == 2 and e.exp == sympy.Rational(1, 2):
            return _ATOM
        return _MUL if e.exp.is_negative else _POW
    return _ATOM


def _wrap(e: sympy.Expr, level: int) -> str:
    s = _print(e)
    return f"({s})" if _precedence(e) < level else s


def _print_add(e: sympy.Expr) -> str:
    out = []
    for i, t in enumerate(ordered_terms(e)):
        neg = t.could_extract_minus_sign()
        body = _print_product(-t if neg else t)
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def _print_product(e: sympy.Expr) -> str:
    if e.is_Add:
        return _print_add(e)
    coeff, rest = e.as_coeff_Mul()
    if not coeff.is_Rational:
        coeff, rest = sympy.Integer(1), e
    sign = ""
    if coeff < 0:
        sign, coeff = "-", -coeff
    num, den = [], []
    for f in sympy.Mul.make_args(rest):
        if f == 1:
            continue
        if f.is_Pow and f.exp.is_Rational and f.exp.is_negative and not f.base.is_Number:
            den.append(f.base ** (-f.exp))
        else:
            num.append(f)
    p, q = coeff.p, coeff.q
    num_parts = ([str(p)] if p != 1 or not num else []) + [_wrap(f, _MUL) for f in num]
    body = "*".join(num_parts)
    den_parts = ([str(q)] if q != 1 else []) + [_wrap(f, _POW) for f in den]
    if den_parts:
        if len(den_parts) == 1:
            body += "/" + den_parts[0]
        else:
            body += "/(" + "*".join(den_parts) + ")"
    return sign + body


def _print_pow(e: sympy.Expr) -> str:
    base, ex = e.base, e.exp
    if base == 2 and ex == sympy.Rational(1, 2):
        return "sqrt2"
    if base is sympy.E:
        return f"exp({_print(ex)})"
    if not ex.is_Rational:
        return f"exp({_print(sympy.Mul(ex, sympy.log(base)))})"
    if ex.is_negative:
        return _print_product(e)
    b = _wrap(base, _ATOM)
    if ex.is_Integer:
        return f"{b}^{ex}"
    return f"{b}^({ex.p}/{ex.q})"


def _print(e: sympy.Expr) -> str:
    if e.is_Add:
        return _print_add(e)
    if e.is_Mul:
        return _print_product(e)
    if e.is_Pow:
        return _print_pow(e)
    if e.is_Integer:
        return str(e)
    if e.is_Rational:
        return f"{e.p}/{e.q}"
    if e is sympy.pi:
        return "pi"
    if e is sympy.E:
        return "exp(1)"
    if e is sympy.I:
        return "I"
    if e.is_Symbol:
        return e.name
    if isinstance(e, AppliedUndef):
        return e.func.__name__
    if isinstance(e, sympy.Derivative):
        s = _print(e.expr)
        for v, count in reversed(e.variable_count):
            for _ in range(count):
                s = f"d/d{v}({s})"
        return s
    if isinstance(e, sympy.log):
        return f"ln({_print(e.args[0])})"
    if isinstance(e, (sympy.sin, sympy.cos, sympy.exp)):
        return f"{type(e).__name__}({_print(e.args[0])})"
    raise ValueError(f"expression outside the supported grammar: {e!r}")


def to_text(e) -> str:
    """Print an expression in the input grammar, deterministically."""
    return _print(sympy.sympify(e))


def parse(text: str, depends: dict[str, str] | None = None) -> sympy.Expr:
    from .parsing import parse_expression

    return parse_expression(text, depends=depends)
