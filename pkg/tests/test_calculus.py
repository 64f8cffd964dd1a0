import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from paraf import dual
from paraf.calculus import (
    ConnectionCoefficients,
    basis,
    cartan_check,
    christoffel,
    covariant_derivative,
    exterior_derivative,
    exterior_derivative_field,
    jet_of,
    lie_derivative_tensor,
    lie_metric_nabla_form,
    nijenhuis,
    nijenhuis_via_connection,
    bracket,
    as_vectors,
)
from paraf.chart import Chart, Strategy, constant_field, function_field, identity_field, scalar_field
from paraf.errors import ContractError, NondegeneracyError


def box(dim, lo=-1.0, hi=1.0, names=None):
    names = names or tuple(f"x{i}" for i in range(dim))
    return Chart(dim, names, ((lo, hi),) * dim, 20, 1)


PLANE = box(2)
SPACE = box(3)


# -- Christoffel symbols ------------------------------------------------------------


def test_flat_and_constant_metrics_have_no_christoffel_symbols():
    for g in (np.eye(2), np.diag([1.0, -1.0])):
        G = constant_field(PLANE, g, (0, 2))
        assert np.all(christoffel(G, [0.3, -0.2]) == 0.0)


def test_polar_metric_christoffel_symbols():
    chart = Chart(2, ("r", "th"), ((1.0, 3.0), (-1.0, 1.0)), 5, 1)
    g = function_field(chart, lambda x: [[1.0, 0.0], [0.0, x[0] * x[0]]], (0, 2))
    G = christoffel(g, [2.0, 0.0])
    # hand values: Γ^r_θθ = -r, Γ^θ_rθ = 1/r
    assert G[0, 1, 1] == pytest.approx(-2.0, abs=1e-14)
    assert G[1, 0, 1] == pytest.approx(0.5, abs=1e-14)
    assert G[1, 1, 0] == pytest.approx(0.5, abs=1e-14)


def test_christoffel_against_symbolic_oracle():
    x, y, z = sp.symbols("x y z")
    gs = sp.Matrix([
        [2 + x**2, x * y, 0],
        [x * y, -1 - y**2 / 3, sp.sin(z) / 4],
        [0, sp.sin(z) / 4, 3 + sp.cos(x)],
    ])
    coords = (x, y, z)
    ginv = gs.inv()
    pt = {x: 0.3, y: -0.4, z: 0.7}
    expected = np.zeros((3, 3, 3))
    for a in range(3):
        for b in range(3):
            for c in range(3):
                term = sum(
                    ginv[a, d] * (sp.diff(gs[d, c], coords[b]) + sp.diff(gs[d, b], coords[c]) - sp.diff(gs[b, c], coords[d]))
                    for d in range(3)
                ) / 2
                expected[a, b, c] = float(term.subs(pt))
    g = function_field(
        SPACE,
        lambda v: [
            [2 + v[0] ** 2, v[0] * v[1], 0.0],
            [v[0] * v[1], -1 - v[1] ** 2 / 3, dual.sin(v[2]) / 4],
            [0.0, dual.sin(v[2]) / 4, 3 + dual.cos(v[0])],
        ],
        (0, 2),
    )
    np.testing.assert_allclose(christoffel(g, [0.3, -0.4, 0.7]), expected, atol=1e-13)


def test_singular_metric_is_rejected():
    g = constant_field(PLANE, [[1.0, 1.0], [1.0, 1.0]], (0, 2))
    with pytest.raises(NondegeneracyError):
        christoffel(g, [0.0, 0.0])


# Random metrics: a constant nondegenerate part plus small polynomial terms.
coef = st.floats(-0.3, 0.3, allow_nan=False)


@st.composite
def metrics(draw, dim=3):
    signs = draw(st.lists(st.sampled_from([1.0, -1.0]), min_size=dim, max_size=dim))
    lin = np.array(draw(st.lists(coef, min_size=dim**3, max_size=dim**3))).reshape(dim, dim, dim)
    quad = np.array(draw(st.lists(coef, min_size=dim * dim, max_size=dim * dim))).reshape(dim, dim)
    # halved so the perturbation can never cancel the ±2 diagonal
    lin = 0.25 * (lin + lin.transpose(1, 0, 2))
    quad = 0.25 * (quad + quad.T)
    base = np.diag(signs) * 2.0

    def g(v):
        out = [[base[a, b] + sum(lin[a, b, c] * v[c] for c in range(dim)) + quad[a, b] * v[a] * v[b]
                for b in range(dim)] for a in range(dim)]
        return out

    return g


points3 = st.lists(st.floats(-0.5, 0.5, allow_nan=False), min_size=3, max_size=3)


@given(metrics(), points3, st.sampled_from([Strategy.DUAL, Strategy.FD]))
def test_levi_civita_is_torsion_free_and_metric(gfun, pt, strategy):
    g = function_field(SPACE, gfun, (0, 2), derivative_strategy=strategy)
    G = christoffel(g, pt)
    tol = 1e-8 if strategy is Strategy.DUAL else 1e-5
    assert np.max(np.abs(G - G.transpose(0, 2, 1))) <= tol
    ng = covariant_derivative(g, ConnectionCoefficients(g), pt)
    assert np.max(np.abs(ng)) <= tol


# -- covariant derivative -----------------------------------------------------------


def test_covariant_derivative_of_identity_vanishes():
    g = function_field(SPACE, lambda v: [[1 + v[0] ** 2, 0, 0], [0, -1, v[1] / 5], [0, v[1] / 5, 2]], (0, 2))
    out = covariant_derivative(identity_field(SPACE), ConnectionCoefficients(g), [0.2, 0.1, -0.3])
    assert np.max(np.abs(out)) <= 1e-14


def test_covariant_derivative_of_rotation_field():
    chart = Chart(2, ("x", "y"), ((-3.0, 3.0),) * 2, 5, 1)
    V = function_field(chart, lambda v: [v[1], -v[0]], (1, 0))
    g = constant_field(chart, np.eye(2), (0, 2))
    out = covariant_derivative(V, ConnectionCoefficients(g), [1.0, 2.0])
    np.testing.assert_array_equal(out, [[0.0, 1.0], [-1.0, 0.0]])


def test_covariant_derivative_rank_limit():
    T = constant_field(PLANE, np.zeros((2,) * 4), (0, 4))
    g = constant_field(PLANE, np.eye(2), (0, 2))
    with pytest.raises(ContractError):
        covariant_derivative(T, ConnectionCoefficients(g), [0.0, 0.0])


# -- Lie derivative -----------------------------------------------------------------


def test_lie_derivative_along_zero_field_vanishes():
    T = function_field(PLANE, lambda v: [[v[0], v[1] ** 2], [1.0, v[0] * v[1]]], (1, 1))
    assert np.all(lie_derivative_tensor([0.0, 0.0], T, [0.3, 0.4]) == 0.0)


def test_translation_is_an_isometry_of_constant_metric():
    g = constant_field(PLANE, np.diag([1.0, -1.0]), (0, 2))
    assert np.all(lie_derivative_tensor([1.0, 0.0], g, [0.1, 0.2]) == 0.0)


def test_lie_derivative_of_dx_along_radial_field():
    line = Chart(1, ("x",), ((-1.0, 1.0),), 5, 1)
    Z = function_field(line, lambda v: [v[0]], (1, 0))
    dx = constant_field(line, [1.0], (0, 1))
    for x in (-0.7, 0.0, 0.4):
        np.testing.assert_allclose(lie_derivative_tensor(Z, dx, [x]), [1.0], atol=1e-15)


def test_lie_derivative_unsupported_valence():
    T = constant_field(PLANE, np.zeros((2, 2, 2)), (1, 2))
    with pytest.raises(ContractError):
        lie_derivative_tensor([1.0, 0.0], T, [0.0, 0.0])


@given(metrics(), points3, st.lists(coef, min_size=9, max_size=9))
def test_lie_derivative_of_metric_matches_connection_form(gfun, pt, c):
    # (£_Z g)(X, Y) = g(∇_X Z, Y) + g(∇_Y Z, X)
    g = function_field(SPACE, gfun, (0, 2))
    C = np.array(c).reshape(3, 3)
    Z = function_field(SPACE, lambda v: [1.0 + sum(C[a, b] * v[b] ** (a + 1) for b in range(3)) for a in range(3)], (1, 0))
    lhs = lie_derivative_tensor(Z, g, pt)
    gj = jet_of(g, pt)
    E = basis(3)
    rhs = lie_metric_nabla_form(as_vectors(Z, pt, 3), gj.val, christoffel(g, pt), E, E)[0]
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * max(1.0, np.max(np.abs(lhs)))


# -- exterior derivative ------------------------------------------------------------


def test_d_of_constant_form_vanishes():
    w = constant_field(PLANE, [2.0, -1.0], (0, 1))
    assert np.all(exterior_derivative(w, [0.5, 0.5]) == 0.0)


def test_half_normalisation_of_d_on_one_forms():
    w = function_field(PLANE, lambda v: [0.0, v[0]], (0, 1))  # x dy
    dw = exterior_derivative(w, [0.3, -0.6])
    assert dw[0, 1] == 0.5
    assert dw[1, 0] == -0.5


def test_d_squared_of_scalar_vanishes():
    s = scalar_field(PLANE, lambda v: v[0] * v[0] * v[1])
    ds = exterior_derivative_field(s)
    np.testing.assert_allclose(exterior_derivative(ds, [0.7, -0.2]), np.zeros((2, 2)), atol=1e-14)


def test_d_limited_to_low_degree():
    w = constant_field(SPACE, np.zeros((3, 3, 3)), (0, 3))
    with pytest.raises(ContractError):
        exterior_derivative(w, [0.0, 0.0, 0.0])
    with pytest.raises(ContractError):
        exterior_derivative_field(w)


@given(st.lists(coef, min_size=27, max_size=27), points3)
def test_d_squared_of_one_forms_vanishes(c, pt):
    C = np.array(c).reshape(3, 3, 3)
    w = function_field(
        SPACE,
        lambda v: [sum(C[a, b, k] * v[b] * v[k] + C[a, k, b] * dual.sin(v[k]) for b in range(3) for k in range(3))
                   for a in range(3)],
        (0, 1),
    )
    ddw = exterior_derivative(exterior_derivative_field(w), pt)
    assert np.max(np.abs(ddw)) <= 1e-12


@given(st.lists(coef, min_size=9, max_size=9), points3)
def test_d_of_one_form_is_antisymmetric(c, pt):
    C = np.array(c).reshape(3, 3)
    w = function_field(SPACE, lambda v: [sum(C[a, b] * v[b] ** 2 for b in range(3)) for a in range(3)], (0, 1))
    dw = exterior_derivative(w, pt)
    assert np.max(np.abs(dw + dw.T)) <= 1e-15


# -- brackets and Nijenhuis torsion -------------------------------------------------


@st.composite
def poly_vectors(draw, dim=3):
    C = np.array(draw(st.lists(coef, min_size=dim * dim, max_size=dim * dim))).reshape(dim, dim)
    D = np.array(draw(st.lists(coef, min_size=dim, max_size=dim)))
    return lambda v: [D[a] + sum(C[a, b] * v[b] * v[(b + 1) % dim] for b in range(dim)) for a in range(dim)]


@given(poly_vectors(), poly_vectors(), points3)
def test_bracket_is_antisymmetric(u, w, pt):
    X = as_vectors(function_field(SPACE, u, (1, 0)), pt, 3)
    Y = as_vectors(function_field(SPACE, w, (1, 0)), pt, 3)
    np.testing.assert_allclose(bracket(X, Y)[0, 0], -bracket(Y, X)[0, 0], atol=1e-15)


def test_nijenhuis_of_zero_and_constant_tensors():
    zero = constant_field(SPACE, np.zeros((3, 3)), (1, 1))
    A = constant_field(SPACE, [[0.0, 2.0, 1.0], [2.0, 0.0, -1.0], [0.5, 0.0, 0.0]], (1, 1))
    for f in (zero, A):
        out = nijenhuis(f, np.eye(3), np.eye(3), [0.1, 0.2, 0.3])
        assert np.all(out == 0.0)


@st.composite
def poly_tensors(draw, dim=3):
    C = np.array(draw(st.lists(coef, min_size=dim**3, max_size=dim**3))).reshape(dim, dim, dim)
    return lambda v: [[C[a, b, 0] + C[a, b, 1] * v[a] * v[b] + C[a, b, 2] * dual.sin(v[(a + b) % dim])
                       for b in range(dim)] for a in range(dim)]


@given(poly_tensors(), metrics(), points3)
def test_nijenhuis_bracket_and_connection_forms_agree(ffun, gfun, pt):
    f = function_field(SPACE, ffun, (1, 1))
    g = function_field(SPACE, gfun, (0, 2))
    E = np.eye(3)
    a = nijenhuis(f, E, E, pt)
    b = nijenhuis_via_connection(f, g, E, E, pt)
    assert np.max(np.abs(a - b)) <= 1e-9 * max(1.0, np.max(np.abs(a)))
    assert np.max(np.abs(a + a.transpose(1, 0, 2))) <= 1e-12


# -- Cartan's formula ---------------------------------------------------------------


def test_cartan_with_zero_field():
    w = function_field(PLANE, lambda v: [v[1] ** 2, v[0] * v[1]], (0, 1))
    assert cartan_check([0.0, 0.0], w, [0.2, 0.3]) == 0.0


def test_cartan_translation_of_x_dy():
    w = function_field(PLANE, lambda v: [0.0, v[0]], (0, 1))
    assert cartan_check([1.0, 0.0], w, [0.4, -0.1]) <= 1e-8
    # both sides equal dy
    np.testing.assert_allclose(lie_derivative_tensor([1.0, 0.0], w, [0.4, -0.1]), [0.0, 1.0])


@given(poly_vectors(), st.lists(coef, min_size=27, max_size=27), points3)
def test_cartan_on_two_forms(u, c, pt):
    C = np.array(c).reshape(3, 3, 3)
    C = C - C.transpose(1, 0, 2)
    w = function_field(SPACE, lambda v: [[sum(C[a, b, k] * v[k] ** 2 for k in range(3)) for b in range(3)]
                                          for a in range(3)], (0, 2))
    assert cartan_check(function_field(SPACE, u, (1, 0)), w, pt) <= 1e-12


def test_cartan_rejects_other_valences():
    w = constant_field(PLANE, np.eye(2), (1, 1))
    with pytest.raises(ContractError):
        cartan_check([1.0, 0.0], w, [0.0, 0.0])
