import io
import json
import math
import random

import numpy as np
import pytest
import sympy

from bkfactor.approx import (
    GridSpec,
    LinearCoeffs,
    coefficient_deltas,
    invariant_field,
    r_function,
    r_function_check,
    sample,
    scale_operator,
    scan_scalings,
)
from bkfactor.expr import canonical, evaluate, x, y
from bkfactor.jsonio import dumps
from bkfactor.operator import Lpdo, gauge_conjugate
from bkfactor.parsing import parse_expression, parse_operator as P

from conftest import FACT, FACT1, FACT2, random_poly

F = parse_expression("sin(1/(x*y))")
MASK = [(1, 0), (0, 1), (0, 0)]


class TestGridSpec:
    def test_defaults(self):
        g = GridSpec(-1, 1, -1, 1)
        assert (g.nx, g.ny) == (200, 200)
        assert g.xs[0] == -1 and g.xs[-1] == 1

    @pytest.mark.parametrize("args", [(1, 0, 0, 1), (0, 1, 1, 1), (0, 1, 0, 1, 1, 5)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            GridSpec(*args)

    def test_parse(self):
        assert GridSpec.parse("10,100,10,100") == GridSpec(10, 100, 10, 100)
        assert GridSpec.parse("0,1,0,2,3,4") == GridSpec(0, 1, 0, 2, 3, 4)
        with pytest.raises(ValueError):
            GridSpec.parse("0,1,0")

    def test_refined(self):
        assert GridSpec(0, 1, 0, 1, 5, 7).refined() == GridSpec(0, 1, 0, 1, 10, 14)


class TestScale:
    def test_fact3(self):
        B = P(FACT2)
        Bt = scale_operator(B, F, MASK)
        expected = P(
            "Dx^2 - Dy^2 + sin(y)*sin(1/(x*y))*Dx + cos(x)*sin(1/(x*y))*Dy"
            " + 1/2*(sin(y)^2 - cos(x)^2)*sin(1/(x*y))"
        )
        assert Bt == expected

    def test_default_mask_is_below_symbol(self):
        B = P(FACT2)
        assert scale_operator(B, F) == scale_operator(B, F, MASK)

    def test_identity(self):
        A = P(FACT)
        assert scale_operator(A, 1, MASK) == A

    def test_zero_keeps_principal_part(self):
        assert scale_operator(P(FACT), 0) == P("Dx^2 - Dy^2")

    def test_absent_key(self):
        with pytest.raises(KeyError):
            scale_operator(P("Dx^2 - Dy^2 + 1"), F, [(1, 0)])

    def test_linearity_pointwise(self):
        spec = GridSpec(0.5, 3, 0.5, 3, 30, 30)
        B = P(FACT2)
        Bt = scale_operator(B, F, MASK)
        fv = sample(F, spec).values
        for key in MASK:
            lhs = sample(Bt[key], spec).values
            rhs = fv * sample(B[key], spec).values
            assert np.allclose(lhs, rhs, rtol=0, atol=1e-12)


class TestFields:
    def test_coherence_with_expression(self):
        field = invariant_field(P(FACT2), "1", GridSpec(-10, 10, -10, 10, 40, 40))
        rng = random.Random(17)
        for _ in range(20):
            i, j = rng.randrange(40), rng.randrange(40)
            assert field.values[i, j] == evaluate(field.source, field.spec.xs[i], field.spec.ys[j])

    def test_fact1_field(self):
        A = P(FACT1)
        field = invariant_field(A, "1", GridSpec(-10, 10, -10, 10, 201, 201))
        assert field.source == canonical((y**2 - x**2) / 4)
        assert field.max_abs == 25.0
        assert field.argmax in [(0.0, -10.0), (0.0, 10.0), (-10.0, 0.0), (10.0, 0.0)]

    def test_fact2_field_bounded(self):
        field = invariant_field(P(FACT2), "1", GridSpec(-10, 10, -10, 10))
        assert field.max_abs <= 1.5
        assert field.nan_count == 0

    def test_singular_points_become_nan(self):
        field = sample(1 / x, GridSpec(-1, 1, 0, 1, 3, 4))
        assert field.nan_count == 4
        assert field.max_abs == 1.0

    def test_ln_domain_nan(self):
        field = sample(sympy.log(x), GridSpec(-1, 1, 0, 1, 3, 2))
        assert field.nan_count == 4

    def test_gauge_pair_fields_agree(self):
        rng = random.Random(18)
        spec = GridSpec(-2, 2, -2, 2, 25, 25)
        for _ in range(5):
            A = Lpdo({(2, 0): 1, (0, 2): -1, (1, 0): random_poly(rng, 1), (0, 1): random_poly(rng, 1), (0, 0): random_poly(rng, 2)})
            G = gauge_conjugate(A, random_poly(rng, 2))
            for root in ("1", "-1"):
                a, g = invariant_field(A, root, spec), invariant_field(G, root, spec)
                assert np.max(np.abs(a.values - g.values)) <= 1e-9

    def test_refinement_monotonicity(self):
        e = parse_expression("sin(3*x)*cos(2*y) + x*y/10")
        spec = GridSpec(-3, 3, -3, 3, 40, 40)
        coarse, fine = sample(e, spec), sample(e, spec.refined())
        v = coarse.values
        lip = max(np.abs(np.diff(v, axis=0)).max(), np.abs(np.diff(v, axis=1)).max())
        assert fine.max_abs >= coarse.max_abs - lip
        assert fine.max_abs >= 0.9 * coarse.max_abs

    def test_grid_evaluation_bit_identical_across_runs(self):
        spec = GridSpec(10, 100, 10, 100, 50, 50)
        Bt = scale_operator(P(FACT2), F, MASK)
        a = invariant_field(Bt, "-1", spec).values
        b = invariant_field(Bt, "-1", spec).values
        assert np.array_equal(a, b)


class TestDeltas:
    def test_fig2_fields(self):
        B = P(FACT2)
        Bt = scale_operator(B, F, MASK)
        deltas = coefficient_deltas(B, Bt, GridSpec(10, 100, 10, 100, 50, 50))
        assert list(deltas) == [(1, 0), (0, 1), (0, 0)]
        expected = math.sin(10) * (1 - math.sin(0.01))
        assert math.isclose(deltas[1, 0].values[0, 0], expected, rel_tol=1e-14)

    def test_equal_operators(self):
        A = P(FACT)
        assert coefficient_deltas(A, A, GridSpec(0, 1, 0, 1, 4, 4)) == {}
        all_fields = coefficient_deltas(A, A, GridSpec(0, 1, 0, 1, 4, 4), include_equal=True)
        assert all(f.max_abs == 0 for f in all_fields.values())


class TestRFunction:
    def test_symmetric_case(self):
        lc = LinearCoeffs((0, 0, 0), (1, 2, 3), (1, 2, 3))
        assert r_function(lc) == 0
        assert r_function_check(lc, 1e-12, GridSpec(-5, 5, -5, 5, 20, 20)).holds

    def test_index_convention(self):
        lc = LinearCoeffs((0, 0, 0), (0, 1, 0), (0, 0, 1))
        assert lc.a10 == y and lc.a01 == x
        assert lc.s == (0, 1, -1)
        assert r_function(lc) == canonical(-1 + (y - x) ** 2 / 4)

    def test_quadratic_growth_fails(self):
        lc = LinearCoeffs((-1, 0, 0), (0, 1, 0), (0, 0, 1))
        check = r_function_check(lc, 0.1, GridSpec(-10, 10, -10, 10, 41, 41))
        assert not check.holds
        assert check.worst == 100.0

    def test_from_operator(self):
        lc = LinearCoeffs.from_operator(P("Dx^2 - Dy^2 + y*Dx + x*Dy + 2*x - 3"))
        assert lc.b == (-3, 0, 2) and lc.c == (0, 1, 0) and lc.d == (0, 0, 1)
        with pytest.raises(ValueError):
            LinearCoeffs.from_operator(P(FACT))

    def test_eps_must_be_positive(self):
        with pytest.raises(ValueError):
            r_function_check(LinearCoeffs((0, 0, 0), (0, 0, 0), (0, 0, 0)), 0, GridSpec(0, 1, 0, 1))


class TestScan:
    def test_ranking(self):
        B = P(FACT2)
        ranked = scan_scalings(B, [1, F, parse_expression("1/(x*y)")], "-1", GridSpec(10, 100, 10, 100, 20, 20))
        norms = [f.max_abs for _, f in ranked]
        assert norms == sorted(norms)
        assert ranked[-1][0] == 1


class TestExport:
    def test_csv(self):
        field = sample(x - y, GridSpec(0, 1, 0, 1, 2, 2))
        buf = io.StringIO()
        field.write_csv(buf)
        assert buf.getvalue().splitlines() == ["x,y,value", "0,0,0", "0,1,-1", "1,0,1", "1,1,0"]

    def test_csv_nan_and_precision(self):
        field = sample(1 / x + y / 3, GridSpec(0, 1, 0, 1, 2, 2))
        rows = io.StringIO()
        field.write_csv(rows)
        lines = rows.getvalue().splitlines()
        assert lines[1] == "0,0,nan"
        assert lines[4] == "1,1,1.3333333333333333"

    def test_summary_json(self):
        field = sample(x * y, GridSpec(-1, 2, -1, 1, 4, 3))
        doc = json.loads(dumps(field.summary()))
        assert doc["max_abs"] == 2 and doc["argmax"] == [2, -1]
        assert doc["nan_count"] == 0
        assert doc["grid"] == {"x0": -1, "x1": 2, "y0": -1, "y1": 1, "nx": 4, "ny": 3}
