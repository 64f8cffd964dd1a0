"""Pointwise identity checks on a :class:`~paraf.structure.PointGeometry`.

Each check returns ``(residual, scale)``: the max-norm of ``lhs - rhs`` over
the argument set and the max-norm of the two sides.  A check passes when
``residual <= tol * max(1, scale)``.  Checks that vanish identically (no
natural right side) use scale 0, i.e. an absolute threshold.

Checks are grouped by the class hypothesis they need (``gate``); ungated
checks make up the ``tensors`` suite, gated ones feed theorem reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from paraf import calculus as calc
from paraf.structure import PointGeometry, _maxabs


def _cmp(lhs, rhs) -> tuple[float, float]:
    lhs, rhs = np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float)
    return _maxabs(lhs - rhs), _maxabs(lhs, rhs)


def _zero(arr) -> tuple[float, float]:
    return _maxabs(np.asarray(arr, dtype=float)), 0.0


def _worst(pairs) -> tuple[float, float]:
    pairs = list(pairs)
    if not pairs:
        return 0.0, 0.0
    return max(r for r, _ in pairs), max(s for _, s in pairs)


def _cyclic(T: np.ndarray) -> np.ndarray:
    """``T[x,y,z] + T[y,z,x] + T[z,x,y]``."""
    return T + np.einsum("yzx->xyz", T) + np.einsum("zxy->xyz", T)


# -- cached argument-set batches ----------------------------------------------------


def _A(geo):
    return geo.arguments


def _N5(geo):
    A = _A(geo)
    return geo.memo("N5", lambda: geo.N5(A, A, A))


def _N5_completed(geo):
    A = _A(geo)
    return geo.memo("N5c", lambda: _N5(geo) + geo.N5_missing_term(A, A, A))


def _gnf(geo):
    A = _A(geo)
    return geo.memo("gnf", lambda: geo.g_nabla_f(A, A, A))


def _N1(geo):
    A = _A(geo)
    return geo.memo("N1", lambda: geo.N1(A, A))


def _nij(geo):
    A = _A(geo)
    return geo.memo("nij", lambda: geo.nijenhuis(A, A))


def _xi_nabla_xi(geo):
    """``[i, j] = ∇_{ξ_i} ξ_j``."""
    return geo.memo("nxx", lambda: calc.nabla_vectors(geo.xi, geo.xi, geo.gamma))


# -- ungated identities ------------------------------------------------------------


def torsion_free(geo):
    G = geo.gamma
    return _cmp(G, np.einsum("abc->acb", G))


def metric_compatible(geo):
    return _zero(calc.covariant_from(geo.g.val, geo.g.d, geo.gamma, (0, 2)))


def nijenhuis_connection_form(geo):
    A = _A(geo)
    return _cmp(_nij(geo), geo.nijenhuis_connection(A, A))


def nijenhuis_antisymmetry(geo):
    N = _nij(geo)
    r = _maxabs(N + np.einsum("ija->jia", N))
    return r, _maxabs(N)


def nijenhuis_kernel_form(geo):
    """[f,f](X, ξ_i) = f(∇_{ξ_i} f)X + f²∇_X ξ_i - f∇_{fX} ξ_i.

    Follows from the connection form with fξ_i = 0 and (∇_X f)ξ_i = -f∇_X ξ_i.
    """
    A = _A(geo)
    X = A.val
    f = geo.f.val
    out = []
    for i in range(geo.p):
        lhs = geo.nijenhuis(A, geo.xi_i(i))[:, 0, :]
        nf_xi = np.einsum("abc,c->ab", geo.nabla_f, geo.xi.val[i])
        Nxi = geo.nabla_xi[i]
        rhs = X @ nf_xi.T @ f.T + (X @ Nxi.T) @ (f @ f).T - ((X @ f.T) @ Nxi.T) @ f.T
        out.append(_cmp(lhs, rhs))
    return _worst(out)


def nijenhuis_kernel_form_unprojected(geo):
    """f(∇_{ξ_i} f)X + ∇_{fX} ξ_i - f∇_X ξ_i: the variant without the outer f.

    Agrees with [f,f](X, ξ_i) only when f∇_X ξ_i - ∇_{fX} ξ_i is fixed by -f;
    kept as a diagnostic, not part of any suite.
    """
    A = _A(geo)
    X = A.val
    f = geo.f.val
    out = []
    for i in range(geo.p):
        lhs = geo.nijenhuis(A, geo.xi_i(i))[:, 0, :]
        nf_xi = np.einsum("abc,c->ab", geo.nabla_f, geo.xi.val[i])
        Nxi = geo.nabla_xi[i]
        rhs = X @ nf_xi.T @ f.T + (X @ f.T) @ Nxi.T - (X @ Nxi.T) @ f.T
        out.append(_cmp(lhs, rhs))
    return _worst(out)


def lie_metric_forms(geo):
    A = _A(geo)
    out = []
    for i in range(geo.p):
        xi = geo.xi_i(i)
        out.append(_cmp(calc.lie_02(xi, geo.g, A, A), calc.lie_metric_nabla_form(xi, geo.g.val, geo.gamma, A, A)))
    return _worst(out)


def lie_phi_split(geo):
    """(£_ξ Φ)(X,Y) = (£_ξ g)(X, fY) + g(X, (£_ξ f)Y)."""
    A = _A(geo)
    fA = geo.fvec(A)
    out = []
    for i in range(geo.p):
        xi = geo.xi_i(i)
        lhs = calc.lie_02(xi, geo.Phi, A, A)[0]
        rhs = calc.lie_02(xi, geo.g, A, fA)[0] + np.einsum("ja,ab,kb->jk", A.val, geo.g.val, geo.N3(i, A))
        out.append(_cmp(lhs, rhs))
    return _worst(out)


def cartan_eta(geo):
    out = []
    for i in range(geo.p):
        for j in range(geo.p):
            e = geo.eta_i(j)
            out.append((calc.cartan_residual_from(geo.xi_i(i), e), _maxabs(e.d, e.val)))
    return _worst(out)


def cartan_phi(geo):
    out = []
    for i in range(geo.p):
        out.append((calc.cartan_residual_from(geo.xi_i(i), geo.Phi), _maxabs(geo.Phi.d, geo.Phi.val)))
    return _worst(out)


def dd_eta(geo):
    """d(dη^j) = 0 via nested differentiation of the engine-produced dη^j."""
    out = []
    for w in geo.S.eta:
        dw = calc.jet_of(calc.exterior_derivative_field(w), geo.pt)
        out.append((_maxabs(calc.exterior_from(dw, 2)), 0.0))
    return _worst(out)


def N2_forms(geo):
    A = _A(geo)
    return _worst(_cmp(geo.N2(i, A, A), geo.N2_lie(i, A, A)) for i in range(geo.p))


def N3_forms(geo):
    A = _A(geo)
    return _worst(_cmp(geo.N3(i, A), geo.N3_connection(i, A)) for i in range(geo.p))


def N4_forms(geo):
    A = _A(geo)
    return _worst(_cmp(geo.N4(i, j, A), geo.N4_d(i, j, A)) for i in range(geo.p) for j in range(geo.p))


def N5_antisymmetry(geo):
    T = _N5(geo)
    return _maxabs(T + np.einsum("xzy->xyz", T)), _maxabs(T)


def N5_kernel_values(geo):
    """Particular values of N5 with a ξ_i in one slot."""
    A = _A(geo)
    G = geo.gQt.val
    fA = geo.fvec(A)
    out = []
    for i in range(geo.p):
        xi = geo.xi_i(i)
        via_N3 = np.einsum("za,ab,xb->xz", geo.N3(i, A), G, A.val)
        out.append(_cmp(geo.N5(A, xi, A)[:, 0, :], via_N3))
        out.append(_cmp(-geo.N5(A, A, xi)[:, :, 0], via_N3))
        brZ = calc.bracket(xi, fA)[0]
        rhs = np.einsum("za,ab,yb->yz", brZ, G, A.val) - np.einsum("ya,ab,zb->yz", brZ, G, A.val)
        out.append(_cmp(geo.N5(xi, A, A)[0], rhs))
        out.append(_zero(geo.N5(xi, A, geo.xi)))
        out.append(_zero(geo.N5(xi, geo.xi, A)))
    return _worst(out)


def N5_classical(geo):
    """N5 = 0 wherever Q̃ = 0 (every term carries Q̃)."""
    if _maxabs(geo.Qt.val, geo.Qt.d) > 0.0:
        return 0.0, 0.0
    return _zero(_N5(geo))


def master_formula(geo):
    """2 g((∇_X f)Y, Z) against its expansion through dΦ, N1, N2, dη and N5."""
    A = _A(geo)
    return _cmp(_gnf(geo), geo.memo("master", lambda: geo.rhs_master(A, A, A)))


def master_formula_completed(geo):
    """Same expansion plus X(g(fY, Q̃Z)), the term missing from N5 as defined."""
    A = _A(geo)
    rhs = geo.memo("master", lambda: geo.rhs_master(A, A, A)) - _N5(geo) + _N5_completed(geo)
    return _cmp(_gnf(geo), rhs)


def nabla_f_on_kernel(geo):
    """(∇_X f)ξ_i = -f ∇_X ξ_i."""
    A = _A(geo)
    f = geo.f.val
    out = []
    for i in range(geo.p):
        lhs = geo.nabla_f_on(A.val, geo.xi.val[i : i + 1])[:, 0, :]
        rhs = -(A.val @ geo.nabla_xi[i].T) @ f.T
        out.append(_cmp(lhs, rhs))
    return _worst(out)


def phi_skew(geo):
    P = geo.Phi.val
    return _maxabs(P + P.T), _maxabs(P)


def phi_kernel(geo):
    return _zero(geo.xi.val @ geo.Phi.val)


def difference_tensor(geo):
    Qt, f = geo.Qt.val, geo.f.val
    return max(_maxabs(geo.xi.val @ Qt.T), _maxabs(Qt @ f - f @ Qt)), _maxabs(Qt @ f, f @ Qt)


# -- class-gated identities ------------------------------------------------------------


def normal_N2_bracket(geo):
    """N2_i(X, Y) = η^i([Q̃X, fY])."""
    A = _A(geo)
    br = calc.bracket(geo.Qtvec(A), geo.fvec(A))
    return _worst(_cmp(geo.N2(i, A, A), br @ geo.eta.val[i]) for i in range(geo.p))


def N3_vanishes(geo):
    A = _A(geo)
    return _worst(_zero(geo.N3(i, A)) for i in range(geo.p))


def N4_vanishes(geo):
    A = _A(geo)
    return _worst(_zero(geo.N4(i, j, A)) for i in range(geo.p) for j in range(geo.p))


def N2_vanishes(geo):
    A = _A(geo)
    return _worst(_zero(geo.N2(i, A, A)) for i in range(geo.p))


def deta_kernel(geo):
    """dη^j(ξ_i, ·) = 0."""
    A = _A(geo)
    return _worst(_zero(geo.deta(j, geo.xi, A)) for j in range(geo.p))


def kernel_geodesic(geo):
    """∇_{ξ_i} ξ_j + ∇_{ξ_j} ξ_i = 0."""
    N = _xi_nabla_xi(geo)
    return _zero(N + np.einsum("ija->jia", N))


def kernel_parallel(geo):
    return _zero(_xi_nabla_xi(geo))


def kernel_commutes(geo):
    return _zero(calc.bracket(geo.xi, geo.xi))


def kernel_integrable(geo):
    """g([ξ_i, ξ_j], fX) = 0."""
    fA = geo.fvec(_A(geo)).val
    return _zero(np.einsum("ija,ab,xb->ijx", calc.bracket(geo.xi, geo.xi), geo.g.val, fA))


def kernel_bracket_vertical(geo):
    """[ξ_i, ξ_j]^⊥ = 0."""
    return _zero(geo.perp(calc.bracket(geo.xi, geo.xi)))


def killing(geo):
    E = geo.E
    return _worst(_zero(calc.lie_02(geo.xi_i(i), geo.g, E, E)) for i in range(geo.p))


def almost_S_N1_kernel_part(geo):
    """N1(X, Y)^⊥ = 2 g(X, f Q̃ Y) ξ̄ with ξ̄ = Σ ξ_i."""
    A = _A(geo)
    lhs = geo.perp(_N1(geo))
    M = geo.g.val @ geo.f.val @ geo.Qt.val
    rhs = 2.0 * np.einsum("xa,ab,yb->xy", A.val, M, A.val)[..., None] * geo.xibar
    return _cmp(lhs, rhs)


def _almost_S_nabla_f_rhs(geo, N5):
    A = _A(geo)
    fA = geo.fvec(A).val
    g = geo.g.val
    gff = np.einsum("xa,ab,yb->xy", fA, g, fA)
    eb = A.val @ geo.etabar
    return (
        -np.einsum("yza,ab,xb->xyz", _N1(geo), g, fA)
        + 2.0 * np.einsum("xy,z->xyz", gff, eb)
        - 2.0 * np.einsum("xz,y->xyz", gff, eb)
        + N5
    )


def almost_S_nabla_f(geo):
    return _cmp(_gnf(geo), _almost_S_nabla_f_rhs(geo, _N5(geo)))


def almost_S_nabla_f_completed(geo):
    """Same formula with X(g(fY, Q̃Z)) added to N5."""
    return _cmp(_gnf(geo), _almost_S_nabla_f_rhs(geo, _N5_completed(geo)))


def nabla_f_along_kernel_N5(geo):
    """2 g((∇_{ξ_i} f)Y, Z) = N5(ξ_i, Y, Z)."""
    A = _A(geo)
    out = []
    for i in range(geo.p):
        xi = geo.xi_i(i)
        out.append(_cmp(geo.g_nabla_f(xi, A, A)[0], geo.N5(xi, A, A)[0]))
    return _worst(out)


def h_kills_kernel(geo):
    out = []
    for i in range(geo.p):
        out.append(_zero(geo.xi.val @ geo.h(i).T))
        out.append(_zero(geo.xi.val @ geo.h_adjoint(i).T))
    return _worst(out)


def h_skew_part(geo):
    """g((h_i - h_i*)X, Y) = ½ N5(ξ_i, X, Y)."""
    A = _A(geo)
    out = []
    for i in range(geo.p):
        M = geo.h(i) - geo.h_adjoint(i)
        lhs = np.einsum("ab,xb,ac,yc->xy", M, A.val, geo.g.val, A.val)
        out.append(_cmp(lhs, 0.5 * geo.N5(geo.xi_i(i), A, A)[0]))
    return _worst(out)


def nabla_xi_formula(geo):
    """∇ξ_i = Q^{-1} f h_i* - f as matrices."""
    Qinv = np.linalg.inv(geo.Q.val)
    f = geo.f.val
    return _worst(_cmp(geo.nabla_xi[i], Qinv @ f @ geo.h_adjoint(i) - f) for i in range(geo.p))


def h_anticommutator(geo):
    """h_i f + f h_i = -½ £_{ξ_i} Q̃."""
    f = geo.f.val
    out = []
    for i in range(geo.p):
        h = geo.h(i)
        lieQ = calc.lie_11(geo.xi_i(i), geo.Q, geo.E)[0].T
        out.append(_cmp(h @ f + f @ h, -0.5 * lieQ))
    return _worst(out)


def nabla_xi_vertical(geo):
    """g(∇_X ξ_i, ξ_k) = 0."""
    return _worst(
        _zero(np.einsum("ac,ab,kb->ck", geo.nabla_xi[i], geo.g.val, geo.xi.val)) for i in range(geo.p)
    )


def lie_deta_split(geo):
    """(£_{ξ_i} dη^j)(X,Y) = (£_{ξ_i} g)(X, fY) + g(X, (£_{ξ_i} f)Y); nested."""
    A = _A(geo)
    fA = geo.fvec(A)
    out = []
    for j, w in enumerate(geo.S.eta):
        dw = calc.jet_of(calc.exterior_derivative_field(w), geo.pt)
        for i in range(geo.p):
            xi = geo.xi_i(i)
            lhs = calc.lie_02(xi, dw, A, A)[0]
            rhs = calc.lie_02(xi, geo.g, A, fA)[0] + np.einsum("ja,ab,kb->jk", A.val, geo.g.val, geo.N3(i, A))
            out.append(_cmp(lhs, rhs))
    return _worst(out)


def N1_is_nijenhuis(geo):
    return _cmp(_N1(geo), _nij(geo))


def weak_K_nabla_f(geo):
    A = _A(geo)
    fA = geo.fvec(A)
    br = calc.bracket(geo.Qtvec(A), fA)
    rhs = _N5(geo).copy()
    for i in range(geo.p):
        e = geo.eta.val[i]
        eA = A.val @ e
        rhs += 2.0 * np.einsum("yx,z->xyz", geo.deta(i, fA, A), eA)
        rhs -= 2.0 * np.einsum("zx,y->xyz", geo.deta(i, fA, A), eA)
        rhs += np.einsum("yz,x->xyz", br @ e, eA)
    return _cmp(_gnf(geo), rhs)


def weak_K_nabla_f_along_kernel(geo):
    """2 g((∇_{ξ_i} f)Y, Z) = η^i([Q̃Y, fZ])."""
    A = _A(geo)
    br = calc.bracket(geo.Qtvec(A), geo.fvec(A))
    return _worst(
        _cmp(geo.g_nabla_f(geo.xi_i(i), A, A)[0], br @ geo.eta.val[i]) for i in range(geo.p)
    )


def weak_S_nabla_f(geo):
    A = _A(geo)
    g = geo.g.val
    X = A.val
    gQ = np.einsum("xa,ba,bc,yc->xy", X, geo.Q.val, g, X)  # g(QX, Y)
    eb = X @ geo.etabar
    e = X @ geo.eta.val.T  # (m, p)
    rhs = np.einsum("xz,y->xyz", gQ, eb) - np.einsum("xy,z->xyz", gQ, eb) + 0.5 * _N5(geo)
    rhs -= np.einsum("xj,y,zj->xyz", e, eb, e) - np.einsum("xj,yj,z->xyz", e, e, eb)
    return _cmp(0.5 * _gnf(geo), rhs)


def N1_kernel_component(geo):
    """g(N1(X, Y), ξ_i) = 2 g(Q̃X, fY)."""
    A = _A(geo)
    lhs = np.einsum("xya,ab,ib->ixy", _N1(geo), geo.g.val, geo.xi.val)
    rhs = 2.0 * np.einsum("xa,ba,bc,cd,yd->xy", A.val, geo.Qt.val, geo.g.val, geo.f.val, A.val)
    return _cmp(lhs, np.broadcast_to(rhs, lhs.shape))


def Q_is_identity(geo):
    return _zero(geo.Qt.val)


def Qt_on_image(geo):
    """g(Q̃X, fY) over the argument set."""
    A = _A(geo)
    return _zero(np.einsum("xa,ba,bc,cd,yd->xy", A.val, geo.Qt.val, geo.g.val, geo.f.val, A.val))


def image_totally_geodesic(geo):
    """g(∇_X Y + ∇_Y X, ξ_i) = 0 for X, Y in f(TM)."""
    fA = geo.fvec(_A(geo))
    N = calc.nabla_vectors(fA, fA, geo.gamma)
    S = N + np.einsum("xya->yxa", N)
    return _zero(np.einsum("xya,ab,ib->ixy", S, geo.g.val, geo.xi.val))


def weak_C_nabla_f(geo):
    return _cmp(_gnf(geo), _N5(geo))


def N5_cyclic(geo):
    T = _N5(geo)
    return _maxabs(_cyclic(T)), _maxabs(T)


def N5_cyclic_f(geo):
    A = _A(geo)
    U = geo.N5(geo.fvec(A), A, A)
    return _maxabs(_cyclic(U)), _maxabs(U)


def weak_C_nabla_xi(geo):
    """g(∇_X ξ_i, QZ) = -½ N5(X, ξ_i, fZ)."""
    A = _A(geo)
    fA = geo.fvec(A)
    out = []
    for i in range(geo.p):
        lhs = np.einsum("ac,xc,ab,bd,zd->xz", geo.nabla_xi[i], A.val, geo.g.val, geo.Q.val, A.val)
        rhs = -0.5 * geo.N5(A, geo.xi_i(i), fA)[:, 0, :]
        out.append(_cmp(lhs, rhs))
    return _worst(out)


def nabla_f_vanishes(geo):
    return _zero(geo.nabla_f)


def N5_vanishes(geo):
    return _zero(_N5(geo))


# -- registry -----------------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    id: str
    family: str
    fn: Callable[[PointGeometry], tuple[float, float]]
    nested: bool = False
    doc: Optional[str] = None

    def __call__(self, geo: PointGeometry) -> tuple[float, float]:
        return self.fn(geo)


def _reg(*items) -> dict[str, Identity]:
    return {it.id: it for it in items}


GENERAL = _reg(
    Identity("connection.torsion_free", "Levi-Civita connection", torsion_free),
    Identity("connection.metric_compatible", "Levi-Civita connection", metric_compatible),
    Identity("nijenhuis.connection_form", "Nijenhuis torsion", nijenhuis_connection_form),
    Identity("nijenhuis.antisymmetry", "Nijenhuis torsion", nijenhuis_antisymmetry),
    Identity("nijenhuis.kernel_argument", "Nijenhuis torsion", nijenhuis_kernel_form),
    Identity("lie.metric_connection_form", "Lie derivatives", lie_metric_forms),
    Identity("lie.fundamental_form_split", "Lie derivatives", lie_phi_split),
    Identity("cartan.eta", "Cartan formula", cartan_eta),
    Identity("cartan.fundamental_form", "Cartan formula", cartan_phi),
    Identity("exterior.dd_eta", "exterior derivative", dd_eta, nested=True),
    Identity("fundamental_form.skew", "fundamental form", phi_skew),
    Identity("fundamental_form.kernel", "fundamental form", phi_kernel),
    Identity("difference_tensor.kernel_and_commutation", "difference tensor", difference_tensor),
    Identity("N2.lie_form", "structure tensors N2-N4", N2_forms),
    Identity("N3.connection_form", "structure tensors N2-N4", N3_forms),
    Identity("N4.lie_form", "structure tensors N2-N4", N4_forms),
    Identity("N5.antisymmetry", "tensor N5", N5_antisymmetry),
    Identity("N5.kernel_values", "tensor N5", N5_kernel_values),
    Identity("N5.classical_vanishing", "tensor N5", N5_classical),
    Identity("nabla_f.master_formula", "covariant derivative of f", master_formula),
    Identity("nabla_f.master_formula_completed", "covariant derivative of f", master_formula_completed),
    Identity("nabla_f.on_kernel", "covariant derivative of f", nabla_f_on_kernel),
)

GATED = _reg(
    Identity("normal.N2_bracket_form", "normal structures", normal_N2_bracket),
    Identity("normal.N3_vanishes", "normal structures", N3_vanishes),
    Identity("normal.N4_vanishes", "normal structures", N4_vanishes),
    Identity("normal.deta_kernel", "normal structures", deta_kernel),
    Identity("kernel.totally_geodesic", "characteristic distribution", kernel_geodesic),
    Identity("kernel.parallel", "characteristic distribution", kernel_parallel),
    Identity("kernel.commuting", "characteristic distribution", kernel_commutes),
    Identity("kernel.integrable", "characteristic distribution", kernel_integrable),
    Identity("kernel.bracket_vertical_part", "characteristic distribution", kernel_bracket_vertical),
    Identity("xi.killing", "Killing fields", killing),
    Identity("N2.vanishes", "structure tensors N2-N4", N2_vanishes),
    Identity("N4.vanishes", "structure tensors N2-N4", N4_vanishes),
    Identity("N3.vanishes", "structure tensors N2-N4", N3_vanishes),
    Identity("almost_S.N1_kernel_part", "weak almost para-S", almost_S_N1_kernel_part),
    Identity("almost_S.nabla_f", "weak almost para-S", almost_S_nabla_f),
    Identity("almost_S.nabla_f_completed", "weak almost para-S", almost_S_nabla_f_completed),
    Identity("almost_S.nabla_f_along_kernel", "weak almost para-S", nabla_f_along_kernel_N5),
    Identity("almost_S.lie_deta_split", "weak almost para-S", lie_deta_split, nested=True),
    Identity("h.kills_kernel", "tensor h", h_kills_kernel),
    Identity("h.skew_part", "tensor h", h_skew_part),
    Identity("h.nabla_xi", "tensor h", nabla_xi_formula),
    Identity("h.anticommutator", "tensor h", h_anticommutator),
    Identity("h.nabla_xi_vertical", "tensor h", nabla_xi_vertical),
    Identity("almost_C.N1_is_nijenhuis", "weak almost para-C", N1_is_nijenhuis),
    Identity("K.nabla_f", "weak para-K", weak_K_nabla_f),
    Identity("K.nabla_f_along_kernel", "weak para-K", weak_K_nabla_f_along_kernel),
    Identity("S.nabla_f", "weak para-S", weak_S_nabla_f),
    Identity("S.N1_kernel_component", "weak para-S", N1_kernel_component),
    Identity("S.Qt_on_image", "weak para-S", Qt_on_image),
    Identity("S.Q_is_identity", "weak para-S", Q_is_identity),
    Identity("S.image_totally_geodesic", "weak para-S", image_totally_geodesic),
    Identity("C.nabla_f", "weak para-C", weak_C_nabla_f),
    Identity("C.N5_cyclic", "weak para-C", N5_cyclic),
    Identity("C.N5_cyclic_f", "weak para-C", N5_cyclic_f),
    Identity("C.nabla_xi", "weak para-C", weak_C_nabla_xi),
    Identity("nabla_f.vanishes", "covariant derivative of f", nabla_f_vanishes),
    Identity("N5.vanishes", "tensor N5", N5_vanishes),
)

DIAGNOSTIC = _reg(
    Identity("nijenhuis.kernel_argument_unprojected", "Nijenhuis torsion", nijenhuis_kernel_form_unprojected),
)

ALL = {**GENERAL, **GATED}

FAMILY_ORDER = tuple(dict.fromkeys(it.family for it in ALL.values()))
