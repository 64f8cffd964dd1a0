"""Symbolic and finite-difference oracles for the catalog entries.

The sympy models below are written out from the geometric description of each
entry, not from the engine's expression strings, then compared against the
engine component by component.
"""

import numpy as np
import pytest
import sympy as sp

from paraf import catalog
from paraf.calculus import exterior_derivative
from paraf.chart import eval_field
from paraf.structure import fundamental_form, tensor_N1

x, y, z = sp.symbols("x y z", real=True)
X3 = (x, y, z)


def heisenberg(lam, alpha):
    """Frame e1 = ∂x + y∂z, e2 = ∂y, ξ = ∂z; f e1 = α e2, f e2 = (λ/α) e1."""
    F = sp.Matrix([[1, 0, 0], [0, 1, 0], [y, 0, 1]])  # columns e1, e2, ξ
    f_frame = sp.Matrix([[0, lam / alpha, 0], [alpha, 0, 0], [0, 0, 0]])
    f = sp.simplify(F * f_frame * F.inv())
    Q_frame = sp.diag(lam, lam, 1)
    Q = sp.simplify(F * Q_frame * F.inv())
    eta = sp.Matrix([[-y, 0, 1]])
    coframe = F.inv()  # rows: dual basis to e1, e2, ξ
    g = sp.simplify(
        alpha / (2 * lam) * coframe[0, :].T * coframe[0, :]
        - 1 / (2 * alpha) * coframe[1, :].T * coframe[1, :]
        + eta.T * eta
    )
    xi = sp.Matrix([0, 0, 1])
    return f, Q, xi, eta, g


def apc3(q):
    f = sp.Matrix([[0, q * sp.exp(-z), 0], [sp.exp(z), 0, 0], [0, 0, 0]])
    Q = sp.diag(q, q, 1)
    g = sp.diag(1, -q * sp.exp(-2 * z), 1)
    return f, Q, sp.Matrix([0, 0, 1]), sp.Matrix([[0, 0, 1]]), g


MODELS = {
    "para_sasakian_r3": lambda: heisenberg(sp.Integer(1), sp.Integer(1)),
    "weak_almost_para_s3": lambda: heisenberg(sp.Rational(9, 4), sp.exp(x / 2)),
    "nonnormal_apc3": lambda: apc3(sp.Integer(2)),
}


def axioms(f, Q, xi, eta, g):
    eye = sp.eye(3)
    return {
        "A3": [f**3 - f * Q, Q * xi - xi],
        "A4": [f**2 - (Q - xi * eta), eta * xi - sp.eye(1)],
        "A5": [f.T * g * f + g * Q - eta.T * eta],
        "A6": [g * f + (g * f).T, g * Q - (g * Q).T],
        "A7": [f * xi, eta * f, eta * Q - eta, Q * f - f * Q],
        "A8": [xi.T * g - eta, xi.T * g * xi - eye[:1, :1]],
    }


def d_one_form(eta):
    return sp.Matrix(3, 3, lambda a, b: (sp.diff(eta[b], X3[a]) - sp.diff(eta[a], X3[b])) / 2)


def bracket(U, V):
    return sp.Matrix([sum(U[c] * sp.diff(V[k], X3[c]) - V[c] * sp.diff(U[k], X3[c]) for c in range(3)) for k in range(3)])


def N1_sym(f, xi, eta):
    """N1(∂a, ∂b) as a 3x3 array of vectors; coordinate brackets vanish."""
    d = d_one_form(eta)
    out = {}
    for a in range(3):
        for b in range(3):
            U, V = f[:, a], f[:, b]
            E = sp.eye(3)
            nij = bracket(U, V) - f * bracket(U, E[:, b]) - f * bracket(E[:, a], V)
            out[a, b] = sp.simplify(nij - 2 * d[a, b] * xi)
    return out


@pytest.mark.parametrize("key", list(MODELS))
def test_axioms_hold_symbolically(key):
    f, Q, xi, eta, g = MODELS[key]()
    for aid, parts in axioms(f, Q, xi, eta, g).items():
        for m in parts:
            assert sp.simplify(m) == sp.zeros(*m.shape), (key, aid)
    assert sp.simplify(f.rank()) == 2


@pytest.mark.parametrize("key", list(MODELS))
def test_engine_components_match_the_model(key):
    f, Q, xi, eta, g = MODELS[key]()
    S = catalog.make(key).with_sampling(6)
    for pt in S.points():
        sub = dict(zip(X3, pt.coords))
        for fld, sym in ((S.f, f), (S.Q, Q), (S.g, g), (S.xi[0], xi), (S.eta[0], eta.T)):
            expected = np.array(sym.subs(sub).evalf(), dtype=float).reshape(fld.shape)
            np.testing.assert_allclose(eval_field(fld, pt), expected, atol=1e-13)


def test_para_sasakian_contact_condition_and_normality():
    f, Q, xi, eta, g = MODELS["para_sasakian_r3"]()
    Phi = g * f
    assert sp.simplify(d_one_form(eta) - Phi) == sp.zeros(3, 3)
    assert all(v == sp.zeros(3, 1) for v in N1_sym(f, xi, eta).values())
    assert Q == sp.eye(3)


def test_weak_almost_para_s3_contact_condition_without_normality():
    f, Q, xi, eta, g = MODELS["weak_almost_para_s3"]()
    assert sp.simplify(d_one_form(eta) - g * f) == sp.zeros(3, 3)
    N = N1_sym(f, xi, eta)
    assert any(v != sp.zeros(3, 1) for v in N.values())


@pytest.mark.parametrize("key", list(MODELS))
def test_engine_Phi_deta_and_N1_match_sympy(key):
    f, Q, xi, eta, g = MODELS[key]()
    N = N1_sym(f, xi, eta)
    d = d_one_form(eta)
    Phi = g * f
    S = catalog.make(key).with_sampling(5)
    E = np.eye(3)
    for pt in S.points():
        sub = dict(zip(X3, pt.coords))
        num = lambda m: np.array(m.subs(sub).evalf(), dtype=float)
        np.testing.assert_allclose(fundamental_form(S, pt), num(Phi), atol=1e-12)
        np.testing.assert_allclose(exterior_derivative(S.eta[0], pt), num(d), atol=1e-12)
        got = tensor_N1(S, E, E, pt)
        for (a, b), v in N.items():
            np.testing.assert_allclose(got[a, b], num(v).ravel(), atol=1e-11)


def test_nonnormal_N1_by_finite_differences():
    """Central-difference expansion of [f,f] - 2dη⊗ξ at the center, from raw components."""
    S = catalog.make_nonnormal_apc3()
    c = np.zeros(3)
    h = 1e-5

    def partial(fld, k):
        e = np.zeros(3)
        e[k] = h
        return (eval_field(fld, c + e) - eval_field(fld, c - e)) / (2 * h)

    f = eval_field(S.f, c)
    df = np.stack([partial(S.f, k) for k in range(3)], axis=-1)  # [a, b, k]
    deta = np.stack([partial(S.eta[0], k) for k in range(3)], axis=-1)
    xi = eval_field(S.xi[0], c)
    N = np.zeros((3, 3, 3))
    for a in range(3):
        for b in range(3):
            U, V = f[:, a], f[:, b]
            dU, dV = df[:, a, :], df[:, b, :]
            br_UV = dV @ U - dU @ V
            br_Ub = -dU[:, b]  # [U, ∂b] = -∂b U
            br_aV = dV[:, a]  # [∂a, V] = ∂a V
            d_ab = 0.5 * (deta[b, a] - deta[a, b])
            N[a, b] = br_UV - f @ br_Ub - f @ br_aV - 2 * d_ab * xi
    np.testing.assert_allclose(tensor_N1(S, np.eye(3), np.eye(3), c), N, atol=1e-8)
    assert np.max(np.abs(N)) >= 1.0
