"""Rack layout: rows are residues mod (h - y_i), columns are short words."""

import pytest
from hypothesis import given, settings, strategies as st

from rackrs.errors import RackRSError
from rackrs.good_poly import make_additive, make_power
from rackrs.poly_ring import Poly, coefficient_polys, random_poly, residue_shifted
from rackrs.rack_code import (ColumnWord, RackArray, column, layout,
                              make_params, rack_residues)
from rackrs.rs_core import encode


@pytest.fixture(scope="module")
def setup16(F16):
    gp = make_additive(F16, (1, 0, 1))  # u=4, nbar=4
    params = make_params(F16, gp, 7)
    return gp, params


def mkpoly(F, coeffs):
    return Poly(F, coeffs)


def test_make_params_shape(F16, setup16):
    gp, params = setup16
    assert params.n == 16 and params.k == 7
    assert params.u == 4 and params.nbar == 4
    assert params.s == 2          # ceil(7/4)
    assert params.v == 3          # 7 - 4*1
    assert params.points == gp.points()


def test_layout_rows_are_evaluations(F16, setup16, rng):
    gp, params = setup16
    f = random_poly(F16, params.k, rng)
    arr = layout(f, gp, params)
    for block, row in zip(gp.groups, arr.symbols):
        assert row == tuple(f(a) for a in block)
    assert arr.nbar == 4 and arr.u == 4


def test_flatten_matches_encode(F16, setup16, rng):
    gp, params = setup16
    for _ in range(10):
        f = random_poly(F16, params.k, rng)
        assert layout(f, gp, params).flatten() == encode(f, params)


def test_dump_format(F16, setup16):
    gp, params = setup16
    arr = layout(mkpoly(F16, (5,)), gp, params)
    lines = arr.dump().splitlines()
    assert len(lines) == 4
    first = lines[0].split()
    assert len(first) == 4
    a, s = first[0].split(":")
    assert int(a) == gp.groups[0][0] and int(s) == 5


def test_layout_rejects_big_message(F16, setup16, rng):
    gp, params = setup16
    f = mkpoly(F16, [1] * (params.k + 1))
    with pytest.raises(ValueError):
        layout(f, gp, params)


def test_layout_rejects_foreign_params(F16, setup16):
    gp, params = setup16
    other = make_power(F16, 5)
    with pytest.raises(ValueError):
        layout(mkpoly(F16, (1,)), other, params)


def test_rack_array_shape_check(F16, setup16):
    gp, params = setup16
    with pytest.raises(ValueError):
        RackArray(F16, gp, params, [(0, 0, 0, 0)] * 3)
    with pytest.raises(ValueError):
        RackArray(F16, gp, params, [(0, 0, 0)] * 4)


def test_residues_match_mod_oracle(F16, setup16, rng):
    gp, params = setup16
    for _ in range(8):
        f = random_poly(F16, params.k, rng)
        rset = rack_residues(layout(f, gp, params))
        for fi, y in zip(rset.polys, gp.constants):
            assert fi == residue_shifted(f, gp.h, y)
            assert fi.degree < gp.u


def test_coefficients_interpolate_columnwise(F16, setup16, rng):
    """e_{i,j} = H_j(y_i) for the coefficient polynomials of f."""
    gp, params = setup16
    f = random_poly(F16, params.k, rng)
    rset = rack_residues(layout(f, gp, params))
    Hs = coefficient_polys(f, gp.h, params.k)
    for i, y in enumerate(gp.constants):
        for j in range(gp.u):
            assert rset.e[i][j] == Hs[j](y)


def test_column_words_have_short_degree(F16, setup16, rng):
    gp, params = setup16
    s, v = params.s, params.v
    for _ in range(8):
        f = random_poly(F16, params.k, rng)
        rset = rack_residues(layout(f, gp, params))
        for j in range(gp.u):
            w = column(rset, j)
            assert w.ys == gp.constants
            assert w.check_degree()
            g = w.interpolate()
            # trailing columns carry one layer less when k % u != 0
            bound = s if (v == 0 or j < v) else s - 1
            assert g.degree < bound


def test_column_index_bounds(F16, setup16):
    gp, params = setup16
    rset = rack_residues(layout(mkpoly(F16, (3, 1)), gp, params))
    with pytest.raises(ValueError):
        column(rset, gp.u)
    with pytest.raises(ValueError):
        column(rset, -1)


def test_partial_column_refuses_interpolation(F16, setup16):
    gp, params = setup16
    w = ColumnWord(F16, 0, (1, None, 2, 3), gp.constants, params.s)
    with pytest.raises(ValueError):
        w.interpolate()
    with pytest.raises(ValueError):
        ColumnWord(F16, 0, (1, 2), gp.constants, params.s)


def test_corruption_breaks_a_column(F16, setup16, rng):
    gp, params = setup16
    f = random_poly(F16, params.k, rng)
    arr = layout(f, gp, params)
    rows = [list(r) for r in arr.symbols]
    rows[2][1] ^= 9
    bad = RackArray(F16, gp, params, rows)
    rset = rack_residues(bad)
    assert not all(column(rset, j).check_degree() for j in range(gp.u))


def test_power_layout_roundtrip(F64, rng):
    gp = make_power(F64, 9)  # u=9, nbar=7
    params = make_params(F64, gp, 24)
    assert (params.nbar, params.s, params.v) == (7, 3, 6)
    f = random_poly(F64, params.k, rng)
    rset = rack_residues(layout(f, gp, params))
    for j in range(gp.u):
        assert column(rset, j).check_degree()


@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_residue_and_column_invariants(F9, data):
    gp = make_additive(F9, (1, 1))  # u=3, nbar=3
    params = make_params(F9, gp, 4)
    coeffs = data.draw(st.lists(st.integers(0, 8), min_size=0,
                                max_size=params.k))
    f = Poly(F9, coeffs)
    rset = rack_residues(layout(f, gp, params))
    assert rset.arr.flatten() == encode(f, params)
    for fi, y in zip(rset.polys, gp.constants):
        assert fi == residue_shifted(f, gp.h, y)
    for j in range(gp.u):
        assert column(rset, j).check_degree()
