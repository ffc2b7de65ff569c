"""BK-factorization of bivariate operators into first-order left factors.

For a root direction (alpha : beta) of the principal symbol the operator is
matched against ``L o Q`` with ``L = alpha Dx + beta Dy + p`` grade by grade,
top down.  Grade n is exact division of the principal symbol, grade n-1
determines ``p`` (for a simple root), and every lower grade m leaves a
compatibility residual: the residual form of grade m evaluated at
``(s, t) = (beta, -alpha)``.  Those n-1 residuals are the generalized
invariants; the operator has the left factor ``L`` iff all of them vanish.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from math import factorial

import sympy

from .expr import (
    Verdict,
    canonical,
    is_zero,
    parse,
    tidy,
    to_text,
    unknown_function,
    x,
    y,
    zero_test,
)
from .operator import (
    Lpdo,
    T,
    ZeroOperatorError,
    characteristic_polynomial,
    compare,
    compose,
    transpose,
)

__all__ = [
    "RootDirection",
    "RootSearch",
    "LinearFactor",
    "Invariant",
    "Status",
    "FactorizationReport",
    "Factorization",
    "FactorizationError",
    "NotARootError",
    "MultipleRootError",
    "SimpleRootError",
    "UnresolvedRootsError",
    "NoFactorizationError",
    "roots",
    "root_direction",
    "extract_left_factor",
    "extract_right_factor",
    "riccati_obstruction",
    "verify_riccati",
    "laplace_invariants",
    "analyze",
    "full_factorization",
]


class FactorizationError(ValueError):
    pass


class NotARootError(FactorizationError):
    pass


class MultipleRootError(FactorizationError):
    pass


class SimpleRootError(FactorizationError):
    pass


class UnresolvedRootsError(FactorizationError):
    pass


class NoFactorizationError(FactorizationError):
    def __init__(self, message: str, reports=()):
        super().__init__(message)
        self.reports = list(reports)


# ---------------------------------------------------------------------------
# roots of the principal symbol


@dataclass(frozen=True)
class RootDirection:
    """A projective root of the principal symbol; ``omega is None`` at infinity."""

    omega: sympy.Expr | None
    multiplicity: int = 1

    @classmethod
    def infinite(cls, multiplicity: int = 1) -> "RootDirection":
        return cls(None, multiplicity)

    @property
    def kind(self) -> str:
        return "infinite" if self.omega is None else "finite"

    @property
    def is_simple(self) -> bool:
        return self.multiplicity == 1

    @property
    def alpha(self) -> sympy.Expr:
        return sympy.Integer(0 if self.omega is None else 1)

    @property
    def beta(self) -> sympy.Expr:
        return sympy.Integer(1) if self.omega is None else canonical(-self.omega)

    def __str__(self):
        where = "inf" if self.omega is None else to_text(self.omega)
        return where if self.multiplicity == 1 else f"{where} (x{self.multiplicity})"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "omega": None if self.omega is None else to_text(self.omega),
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class RootSearch:
    """Roots found for an operator; ``unresolved`` is the leftover factor of P(t)."""

    roots: tuple[RootDirection, ...]
    unresolved: sympy.Expr | None = None

    @property
    def complete(self) -> bool:
        return self.unresolved is None

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def __getitem__(self, i):
        return self.roots[i]


def _is_constant(e: sympy.Expr) -> bool:
    return not (e.free_symbols or e.atoms(sympy.core.function.AppliedUndef))


def _poly_value(cs: list[sympy.Expr], t0: sympy.Expr) -> sympy.Expr:
    return canonical(sum(c * t0**j for j, c in enumerate(cs)))


def _poly_derivative(cs: list[sympy.Expr]) -> list[sympy.Expr]:
    return [j * c for j, c in enumerate(cs)][1:]


def _multiplicity(cs: list[sympy.Expr], omega: sympy.Expr) -> int:
    m = 0
    while cs and is_zero(_poly_value(cs, omega)):
        m += 1
        cs = _poly_derivative(cs)
    return m


def _deflate(cs: list[sympy.Expr], omega: sympy.Expr) -> list[sympy.Expr]:
    """Quotient of P(t) by (t - omega), coefficients low to high."""
    d = len(cs) - 1
    out = [sympy.Integer(0)] * d
    out[d - 1] = cs[d]
    for k in range(d - 1, 0, -1):
        out[k - 1] = _simplify(cs[k] + omega * out[k])
    return out


def _simplify(e) -> sympy.Expr:
    e = canonical(e)
    if e.is_Add and any(t.is_Pow and t.exp.is_negative for f in e.args for t in sympy.Mul.make_args(f)):
        e = canonical(sympy.cancel(e))
    return e


def _ratio(num, den) -> sympy.Expr:
    den = canonical(den)
    if den.is_Number:
        return canonical(num / den)
    return tidy(canonical(num) / den)


def _square_root(e: sympy.Expr) -> sympy.Expr:
    return canonical(sympy.powdenest(sympy.sqrt(sympy.factor(e)), force=True))


def _monomial_divisors(c: sympy.Expr) -> list[sympy.Expr]:
    content, factors = sympy.factor_list(c)
    content = sympy.Rational(content)
    ints = [d for d in sympy.divisors(abs(content.p))] if content.p else [1]
    choices = [[f**i for i in range(e + 1)] for f, e in factors]
    out = []
    for combo in itertools.product(*choices):
        base = sympy.Mul(*combo)
        out.extend(canonical(n * base) for n in ints)
    return out[:200]


def _trial_root(cs: list[sympy.Expr]) -> sympy.Expr | None:
    nums = _monomial_divisors(cs[0])
    dens = _monomial_divisors(cs[-1])
    seen = set()
    for n in nums:
        for d in dens:
            for sign in (1, -1):
                cand = _ratio(sign * n, d)
                if cand in seen:
                    continue
                seen.add(cand)
                if is_zero(_poly_value(cs, cand)):
                    return cand
    return None


def _finite_roots(cs: list[sympy.Expr]) -> tuple[list[sympy.Expr], list[sympy.Expr] | None]:
    """Roots (with repetition) of sum cs[j] t^j with nonzero leading coefficient."""
    found: list[sympy.Expr] = []
    while len(cs) > 1 and is_zero(cs[0]):
        found.append(sympy.Integer(0))
        cs = cs[1:]
    d = len(cs) - 1
    if d == 0:
        return found, None
    if all(_is_constant(c) for c in cs):
        poly = sympy.Poly(sum(c * T**j for j, c in enumerate(cs)), T)
        rts = sympy.roots(poly)
        if sum(rts.values()) == d:
            for r in sorted(rts, key=sympy.default_sort_key):
                found.extend([canonical(r)] * rts[r])
            return found, None
    while d >= 3:
        cand = _trial_root(cs)
        if cand is None:
            return found, cs
        found.append(cand)
        cs = _deflate(cs, cand)
        d -= 1
    if d == 2:
        c0, c1, c2 = cs
        disc = canonical(c1**2 - 4 * c2 * c0)
        if is_zero(disc):
            found.extend([_ratio(-c1, 2 * c2)] * 2)
        else:
            sq = _square_root(disc)
            found.append(_ratio(-c1 + sq, 2 * c2))
            found.append(_ratio(-c1 - sq, 2 * c2))
    else:
        found.append(_ratio(-cs[0], cs[1]))
    return found, None


def _symbol_coefficients(A: Lpdo) -> tuple[int, list[sympy.Expr]]:
    n = A.order
    if n is None:
        raise ZeroOperatorError("the zero operator has no roots")
    cs = A.grade(n)
    d = n
    while d > 0 and is_zero(cs[d]):
        d -= 1
    return n, cs[: d + 1]


def roots(A: Lpdo) -> RootSearch:
    """All projective roots of the principal symbol, with multiplicities."""
    n, cs = _symbol_coefficients(A)
    if n == 0:
        raise FactorizationError("an order-0 operator has no root directions")
    d = len(cs) - 1
    found, leftover = _finite_roots(list(cs))
    distinct: list[sympy.Expr] = []
    for r in found:
        if not any(is_zero(r - s) for s in distinct):
            distinct.append(r)
    out = [RootDirection(r, m) for r in distinct if (m := _multiplicity(list(cs), r)) > 0]
    out.sort(key=lambda r: r.multiplicity)
    if d < n:
        out.append(RootDirection.infinite(n - d))
    unresolved = None
    if leftover is not None:
        unresolved = canonical(sum(c * T**j for j, c in enumerate(leftover)))
    return RootSearch(tuple(out), unresolved)


def root_direction(A: Lpdo, omega) -> RootDirection:
    """Validate a user-supplied root (an expression, text, or ``"inf"``)."""
    n, cs = _symbol_coefficients(A)
    if isinstance(omega, str):
        omega = None if omega.strip() in ("inf", "infinity") else parse(omega)
    if omega is None:
        m = n - (len(cs) - 1)
        if m == 0:
            raise NotARootError("the principal symbol has no root at infinity")
        return RootDirection.infinite(m)
    omega = canonical(omega)
    m = _multiplicity(list(cs), omega)
    if m == 0:
        raise NotARootError(f"{to_text(omega)} is not a root of P(t) = {to_text(characteristic_polynomial(A))}")
    return RootDirection(omega, m)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class LinearFactor:
    """The first-order operator ``alpha*Dx + beta*Dy + p``."""

    alpha: sympy.Expr
    beta: sympy.Expr
    p: sympy.Expr

    @classmethod
    def from_operator(cls, L: Lpdo) -> "LinearFactor":
        if L.order != 1:
            raise ValueError("a linear factor must have order 1")
        return cls(L[1, 0], L[0, 1], L[0, 0])

    def operator(self) -> Lpdo:
        return Lpdo({(1, 0): self.alpha, (0, 1): self.beta, (0, 0): self.p})

    def __str__(self):
        return f"[{self.operator()}]"

    def to_json(self) -> dict:
        return {
            "dx": to_text(self.alpha),
            "dy": to_text(self.beta),
            "p": to_text(self.p),
            "text": str(self.operator()),
        }


@dataclass(frozen=True)
class Invariant:
    grade: int
    value: sympy.Expr
    verdict: Verdict

    @classmethod
    def of(cls, grade: int, value) -> "Invariant":
        value = canonical(value)
        return cls(grade, value, zero_test(value))

    @property
    def vanishes(self) -> bool:
        return self.verdict.is_zero

    def to_json(self) -> dict:
        return {"grade": self.grade, "value": to_text(self.value), "verdict": self.verdict.value}


class Status(str, enum.Enum):
    FACTORED = "factored"
    OBSTRUCTED = "obstructed"
    RICCATI_REQUIRED = "riccati-required"


@dataclass(frozen=True)
class FactorizationReport:
    """Outcome of matching an operator against a first-order factor at one root.

    ``invariants`` lists the residuals from grade n-2 down to grade 0.  For a
    multiple root ``singular`` holds the grade n-1 condition that replaces the
    equation for ``p``, ``p`` is the unknown ``r`` and ``riccati`` is the first
    residual that involves it.
    """

    operator: Lpdo
    root: RootDirection
    factor: LinearFactor
    quotient: Lpdo
    invariants: tuple[Invariant, ...]
    status: Status
    side: str = "left"
    riccati: sympy.Expr | None = None
    singular: Invariant | None = None
    candidate: sympy.Expr | None = None
    recomposition: Verdict | None = None

    @property
    def factored(self) -> bool:
        return self.status is Status.FACTORED

    def chain(self) -> tuple[Lpdo, Lpdo]:
        """The two operators whose composition gives ``operator``, left to right."""
        if self.side == "left":
            return (self.factor.operator(), self.quotient)
        return (self.quotient, self.factor.operator())

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "operator": str(self.operator),
            "root": self.root.to_json(),
            "status": self.status.value,
            "factor": self.factor.to_json(),
            "quotient": str(self.quotient),
            "invariants": [inv.to_json() for inv in self.invariants],
            "singular_condition": None if self.singular is None else self.singular.to_json(),
            "riccati": None if self.riccati is None else to_text(self.riccati),
            "riccati_candidate": None if self.candidate is None else to_text(self.candidate),
            "recomposition": None if self.recomposition is None else self.recomposition.value,
        }

    def to_text(self) -> str:
        lines = [f"root: {self.root}  [{self.side} factor]", f"status: {self.status.value}"]
        left, right = self.chain()
        lines.append(f"factorization: {_bracket(left)}*{_bracket(right)}")
        if self.singular is not None:
            lines.append(f"singular condition: {to_text(self.singular.value)}  ({self.singular.verdict.value})")
        if self.invariants:
            lines.append("invariants:")
            for inv in self.invariants:
                lines.append(f"  inv[{inv.grade}] = {to_text(inv.value)}  ({inv.verdict.value})")
        if self.riccati is not None:
            lines.append(f"Riccati residual: {to_text(self.riccati)}")
        if self.candidate is not None:
            lines.append(f"r = {to_text(self.candidate)}")
        return "\n".join(lines)


def _bracket(A: Lpdo) -> str:
    return f"[{A}]"


# ---------------------------------------------------------------------------
# grade-by-grade coefficient matching


def _divide(c: list[sympy.Expr], alpha, beta) -> list[sympy.Expr]:
    """Quotient of the binary form sum c_j s^j t^(m-j) by alpha*s + beta*t."""
    m = len(c) - 1
    if alpha != 0:
        d = [sympy.Integer(0)] * m
        d[m - 1] = _ratio(c[m], alpha)
        for j in range(m - 1, 0, -1):
            d[j - 1] = _ratio(c[j] - beta * d[j], alpha)
        return d
    return [_ratio(c[j], beta) for j in range(m)]


def _at_root(c: list[sympy.Expr], alpha, beta) -> sympy.Expr:
    m = len(c) - 1
    return canonical(sum(cj * beta**j * (-alpha) ** (m - j) for j, cj in enumerate(c)))


def _transport(q, alpha, beta, p) -> sympy.Expr:
    return alpha * sympy.diff(q, x) + beta * sympy.diff(q, y) + p * q


@dataclass
class _Match:
    p: sympy.Expr
    quotient: Lpdo
    invariants: list[tuple[int, sympy.Expr]]
    singular: sympy.Expr | None = None
    pivot: sympy.Expr | None = None


def _match(A: Lpdo, root: RootDirection, p=None) -> _Match:
    n = A.order
    alpha, beta = root.alpha, root.beta
    top = A.grade(n)
    if not is_zero(_at_root(top, alpha, beta)):
        raise NotARootError(f"{root} is not a root of the principal symbol")
    q: dict[int, list[sympy.Expr]] = {n - 1: _divide(top, alpha, beta)}

    c = [a - alpha * sympy.diff(qj, x) - beta * sympy.diff(qj, y) for a, qj in zip(A.grade(n - 1), q[n - 1])]
    value = _at_root(c, alpha, beta)
    pivot = _at_root(q[n - 1], alpha, beta)
    singular = None
    if p is None:
        if is_zero(pivot):
            raise MultipleRootError(f"{root} is a multiple root; use riccati_obstruction")
        p = _ratio(value, pivot)
    else:
        singular = canonical(value - p * pivot)
    p = canonical(p)

    invariants: list[tuple[int, sympy.Expr]] = []
    if n >= 2:
        c = [canonical(cj - p * qj) for cj, qj in zip(c, q[n - 1])]
        q[n - 2] = _divide(c, alpha, beta)
        for m in range(n - 2, 0, -1):
            c = [canonical(a - _transport(qj, alpha, beta, p)) for a, qj in zip(A.grade(m), q[m])]
            invariants.append((m, _at_root(c, alpha, beta)))
            q[m - 1] = _divide(c, alpha, beta)
        invariants.append((0, canonical(A[0, 0] - _transport(q[0][0], alpha, beta, p))))

    quotient = Lpdo({(j, g - j): tidy(qj) for g, row in q.items() for j, qj in enumerate(row)})
    return _Match(p, quotient, invariants, singular, pivot)


def _check_order(A: Lpdo) -> int:
    n = A.order
    if n is None:
        raise ZeroOperatorError("cannot factor the zero operator")
    if n < 1:
        raise FactorizationError("an order-0 operator has no first-order factor")
    return n


def extract_left_factor(A: Lpdo, root: RootDirection) -> FactorizationReport:
    """Match ``A = L o Q`` at a simple root; report the invariants either way."""
    _check_order(A)
    if root.multiplicity > 1:
        raise MultipleRootError(f"{root} is a multiple root; use riccati_obstruction")
    match = _match(A, root)
    invariants = tuple(Invariant.of(m, v) for m, v in match.invariants)
    factor = LinearFactor(root.alpha, root.beta, match.p)
    status = Status.FACTORED if all(inv.vanishes for inv in invariants) else Status.OBSTRUCTED
    recomposition = None
    if status is Status.FACTORED:
        recomposition = compare(compose(factor.operator(), match.quotient), A)
    return FactorizationReport(A, root, factor, match.quotient, invariants, status, recomposition=recomposition)


def _jet_order(d: sympy.Derivative) -> int:
    return sum(c for _, c in d.variable_count)


def _normalize_residual(e: sympy.Expr, r: sympy.Expr) -> sympy.Expr:
    """Scale a residual so its leading term in r (highest derivative, else r) has coefficient 1."""
    jets = [d for d in e.atoms(sympy.Derivative) if d.expr == r]
    lead = max(jets, key=lambda d: (_jet_order(d), sympy.default_sort_key(d))) if jets else r
    poly_coeff = e.coeff(lead)
    if poly_coeff == 0 or poly_coeff.has(r):
        return e
    return canonical(sympy.cancel(e / poly_coeff))


def riccati_obstruction(A: Lpdo, root: RootDirection, unknown: str = "r") -> FactorizationReport:
    """Match at a multiple root keeping ``p`` as an unknown function ``r``.

    The first invariant that does not vanish identically is the differential
    condition on ``r`` (a Riccati equation in the generic double-root case).
    """
    _check_order(A)
    if root.multiplicity < 2:
        raise SimpleRootError(f"{root} is a simple root; use extract_left_factor")
    r = unknown_function(unknown)
    match = _match(A, root, p=r)
    singular = Invariant.of(A.order - 1, match.singular)
    invariants = tuple(Invariant.of(m, v) for m, v in match.invariants)
    factor = LinearFactor(root.alpha, root.beta, r)
    riccati = None
    status = Status.FACTORED
    if not singular.vanishes:
        status = Status.OBSTRUCTED
    else:
        for inv in invariants:
            if inv.vanishes:
                continue
            if inv.value.has(r):
                riccati = _normalize_residual(inv.value, r)
                status = Status.RICCATI_REQUIRED
            else:
                status = Status.OBSTRUCTED
            break
    return FactorizationReport(
        A, root, factor, match.quotient, invariants, status, riccati=riccati, singular=singular
    )


def verify_riccati(report: FactorizationReport, candidate) -> FactorizationReport:
    """Substitute a candidate for the unknown ``r`` of a multiple-root report."""
    if report.singular is None:
        raise SimpleRootError("report does not come from riccati_obstruction")
    if isinstance(candidate, str):
        candidate = parse(candidate)
    candidate = canonical(candidate)
    r = report.factor.p

    def sub(e):
        out = e.subs(r, candidate)
        return tidy(out.doit() if out.has(sympy.Derivative) else out)

    singular = Invariant.of(report.singular.grade, sub(report.singular.value))
    invariants = tuple(Invariant.of(inv.grade, sub(inv.value)) for inv in report.invariants)
    factor = LinearFactor(report.factor.alpha, report.factor.beta, candidate)
    quotient = Lpdo({key: sub(c) for key, c in report.quotient.items()})
    ok = singular.vanishes and all(inv.vanishes for inv in invariants)
    recomposition = None
    if ok:
        recomposition = compare(compose(factor.operator(), quotient), report.operator)
        ok = recomposition.is_zero
    return replace(
        report,
        factor=factor,
        quotient=quotient,
        invariants=invariants,
        singular=singular,
        status=Status.FACTORED if ok else Status.OBSTRUCTED,
        candidate=candidate,
        recomposition=recomposition,
    )


def extract_right_factor(A: Lpdo, root: RootDirection) -> FactorizationReport:
    """Right factor ``A = Q o R`` from the left factor of the transpose."""
    _check_order(A)
    left = extract_left_factor(transpose(A), root)
    right_op = -transpose(left.factor.operator())
    quotient = -transpose(left.quotient)
    recomposition = None
    if left.factored:
        recomposition = compare(compose(quotient, right_op), A)
    return replace(
        left,
        operator=A,
        factor=LinearFactor.from_operator(right_op),
        quotient=quotient,
        side="right",
        recomposition=recomposition,
    )


def laplace_invariants(A: Lpdo) -> tuple[sympy.Expr, sympy.Expr]:
    """Laplace invariants of ``Dx*Dy + a*Dx + b*Dy + c``."""
    if A.order != 2 or not is_zero(A[2, 0]) or not is_zero(A[0, 2]) or not is_zero(A[1, 1] - 1):
        raise FactorizationError("expected the normal form Dx*Dy + a*Dx + b*Dy + c")
    a, b, c = A[1, 0], A[0, 1], A[0, 0]
    return canonical(c - a * b - sympy.diff(a, x)), canonical(c - a * b - sympy.diff(b, y))


# ---------------------------------------------------------------------------
# whole-operator workflows


def _report(A: Lpdo, root: RootDirection, riccati=()) -> FactorizationReport:
    if root.is_simple:
        return extract_left_factor(A, root)
    rep = riccati_obstruction(A, root)
    if rep.status is Status.RICCATI_REQUIRED:
        for cand in riccati:
            checked = verify_riccati(rep, cand)
            if checked.factored:
                return checked
    return rep


def _candidate_roots(A: Lpdo, user_roots) -> tuple[list[RootDirection], RootSearch | None]:
    chosen: list[RootDirection] = []
    for r in user_roots or ():
        try:
            chosen.append(root_direction(A, r))
        except NotARootError:
            continue
    if chosen:
        return chosen, None
    search = roots(A)
    return list(search), search


def analyze(A: Lpdo, user_roots=None, riccati=()) -> tuple[list[FactorizationReport], RootSearch | None]:
    """One left-factor report per root direction."""
    _check_order(A)
    rts, search = _candidate_roots(A, user_roots)
    return [_report(A, r, riccati) for r in rts], search


@dataclass
class Factorization:
    """Chains of first-order operators whose composition recomposes ``operator``."""

    operator: Lpdo
    chains: list[tuple[Lpdo, ...]] = field(default_factory=list)
    reports: list[FactorizationReport] = field(default_factory=list)
    unresolved: bool = False

    def to_json(self) -> dict:
        return {
            "operator": str(self.operator),
            "chains": [[str(f) for f in chain] for chain in self.chains],
            "reports": [r.to_json() for r in self.reports],
            "unresolved_roots": self.unresolved,
        }

    def to_text(self) -> str:
        lines = [f"operator: {self.operator}"]
        for chain in self.chains:
            lines.append("chain: " + "*".join(_bracket(f) for f in chain))
        if not self.chains:
            lines.append("no factorization into first-order factors found")
        for rep in self.reports:
            lines.append("")
            lines.append(rep.to_text())
        return "\n".join(lines)


def full_factorization(
    A: Lpdo,
    all_chains: bool = False,
    user_roots=None,
    riccati=(),
) -> Factorization:
    """Depth-first search over simple roots (and verified Riccati candidates).

    ``user_roots`` are tried at every level where they are roots of the
    current symbol; ``riccati`` candidates are tried at every multiple root.
    Each returned chain is verified by recomposition.
    """
    n = _check_order(A)
    result = Factorization(A)
    riccati = [parse(c) if isinstance(c, str) else c for c in riccati]
    limit = factorial(n)

    def search(B: Lpdo, prefix: tuple[Lpdo, ...], top: bool) -> bool:
        if B.order == 1:
            chain = prefix + (B,)
            product = chain[0]
            for f in chain[1:]:
                product = compose(product, f)
            if compare(product, A).is_zero:
                result.chains.append(chain)
            return not all_chains or len(result.chains) >= limit
        rts, rsearch = _candidate_roots(B, user_roots)
        if rsearch is not None and not rsearch.complete:
            result.unresolved = True
        for root in rts:
            rep = _report(B, root, riccati)
            if top:
                result.reports.append(rep)
            if rep.factored and search(rep.quotient, prefix + (rep.factor.operator(),), False):
                return True
        return False

    if n == 1:
        result.chains.append((A,))
        return result
    search(A, (), True)
    if not result.chains and result.unresolved:
        raise UnresolvedRootsError("some roots of the principal symbol could not be found; supply them")
    return result
