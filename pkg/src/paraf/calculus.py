"""Pointwise tensor calculus on a single chart.

Everything here works on *jets*: a value array plus its first partials along
a trailing axis.  Vector-field arguments are batches of jets of shape
``(m, dim)`` so an identity can be evaluated on every pair or triple of a
fixed argument set with one ``einsum``.  Lie brackets come from the flat-chart
formula ``[X, Y]^a = X^c ∂_c Y^a - Y^c ∂_c X^a``.

The exterior derivative uses the 1/(k+1) normalisation, so for a 1-form
``dη(X, Y) = ½ {X η(Y) - Y η(X) - η([X, Y])}``.  Interior products carry the
matching factor ``k`` on k-forms, which is what makes Cartan's formula hold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from paraf import dual
from paraf.chart import TensorFieldHandle, TOL_DET, jet as field_jet, eval_field
from paraf.errors import ContractError, NondegeneracyError


@dataclass(frozen=True, eq=False)
class Jet:
    val: np.ndarray
    d: np.ndarray

    @property
    def dim(self) -> int:
        return self.d.shape[-1]

    def __add__(self, other: "Jet") -> "Jet":
        return Jet(self.val + other.val, self.d + other.d)

    def __sub__(self, other: "Jet") -> "Jet":
        return Jet(self.val - other.val, self.d - other.d)

    def scale(self, c) -> "Jet":
        return Jet(self.val * c, self.d * c)

    def __getitem__(self, idx) -> "Jet":
        return Jet(self.val[idx], self.d[idx])


def jet_of(fld: TensorFieldHandle, pt) -> Jet:
    v, d = field_jet(fld, pt)
    return Jet(v, d)


def constant(vectors) -> Jet:
    """Batch of constant-coefficient vector fields."""
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    return Jet(v, np.zeros(v.shape + (v.shape[-1],)))


def basis(dim: int) -> Jet:
    return constant(np.eye(dim))


def concat(*jets: Jet) -> Jet:
    return Jet(np.concatenate([j.val for j in jets]), np.concatenate([j.d for j in jets]))


def as_vectors(V, pt, dim: int) -> Jet:
    """Coerce a vector-field argument (jet, handle or constant array) to a batch."""
    if isinstance(V, Jet):
        return V if V.val.ndim == 2 else Jet(V.val[None], V.d[None])
    if isinstance(V, TensorFieldHandle):
        if V.valence != (1, 0):
            raise ContractError("vector argument must have valence (1, 0)")
        j = jet_of(V, pt)
        return Jet(j.val[None], j.d[None])
    arr = np.asarray(V, dtype=float)
    if arr.shape[-1] != dim:
        raise ContractError(f"vector has {arr.shape[-1]} components, chart has {dim}")
    return constant(arr)


# -- algebra on jets -----------------------------------------------------------


def matmul(A: Jet, B: Jet) -> Jet:
    """Product of two (1,1)-tensor jets."""
    return Jet(
        np.einsum("ab,bc->ac", A.val, B.val),
        np.einsum("abk,bc->ack", A.d, B.val) + np.einsum("ab,bck->ack", A.val, B.d),
    )


def lower(g: Jet, T: Jet) -> Jet:
    """``g_{ac} T^c_b`` as a (0,2) jet."""
    return matmul(g, T)


def apply(T: Jet, V: Jet) -> Jet:
    """Apply a (1,1) jet to a batch of vector jets."""
    return Jet(
        np.einsum("ab,kb->ka", T.val, V.val),
        np.einsum("abc,kb->kac", T.d, V.val) + np.einsum("ab,kbc->kac", T.val, V.d),
    )


def bracket(X: Jet, Y: Jet) -> np.ndarray:
    """Lie brackets ``[X_i, Y_j]`` as an array of shape (m1, m2, dim)."""
    return np.einsum("ic,jac->ija", X.val, Y.d) - np.einsum("jc,iac->ija", Y.val, X.d)


def pair1(w: Jet, V: Jet) -> Jet:
    """Scalar jets ``w(V_k)`` for a 1-form jet ``w``."""
    return Jet(
        np.einsum("b,kb->k", w.val, V.val),
        np.einsum("bc,kb->kc", w.d, V.val) + np.einsum("b,kbc->kc", w.val, V.d),
    )


def pair2(w: Jet, X: Jet, Y: Jet) -> Jet:
    """Scalar jets ``w(X_i, Y_j)`` for a (0,2) jet ``w``; shape (m1, m2)."""
    return Jet(
        np.einsum("ia,ab,jb->ij", X.val, w.val, Y.val),
        np.einsum("iac,ab,jb->ijc", X.d, w.val, Y.val)
        + np.einsum("ia,abc,jb->ijc", X.val, w.d, Y.val)
        + np.einsum("ia,ab,jbc->ijc", X.val, w.val, Y.d),
    )


def form_values(w: np.ndarray, *args: np.ndarray) -> np.ndarray:
    """Multilinear evaluation of component array ``w`` on batches of vectors."""
    letters = "abcde"
    batch = "ijklm"
    sub = letters[: w.ndim]
    spec = sub + "".join(f",{batch[n]}{sub[n]}" for n in range(len(args)))
    out = "".join(batch[n] for n in range(len(args)))
    return np.einsum(f"{spec}->{out}", w, *args)


def d_scalar(s: Jet) -> np.ndarray:
    return s.d


def d1(w: Jet, X: Jet, Y: Jet) -> np.ndarray:
    """``dw(X_i, Y_j)`` for a 1-form jet, 1/2-normalised."""
    wX, wY = pair1(w, X), pair1(w, Y)
    XwY = np.einsum("ic,jc->ij", X.val, wY.d)
    YwX = np.einsum("jc,ic->ij", Y.val, wX.d)
    w_br = np.einsum("ija,a->ij", bracket(X, Y), w.val)
    return 0.5 * (XwY - YwX - w_br)


def d2(w: Jet, X: Jet, Y: Jet, Z: Jet) -> np.ndarray:
    """``dw(X_i, Y_j, Z_k)`` for a 2-form jet, 1/3-normalised."""
    wYZ, wZX, wXY = pair2(w, Y, Z), pair2(w, Z, X), pair2(w, X, Y)
    t = (
        np.einsum("ic,jkc->ijk", X.val, wYZ.d)
        + np.einsum("jc,kic->ijk", Y.val, wZX.d)
        + np.einsum("kc,ijc->ijk", Z.val, wXY.d)
    )
    t = t - np.einsum("ija,ab,kb->ijk", bracket(X, Y), w.val, Z.val)
    t = t - np.einsum("kia,ab,jb->ijk", bracket(Z, X), w.val, Y.val)
    t = t - np.einsum("jka,ab,ib->ijk", bracket(Y, Z), w.val, X.val)
    return t / 3.0


def interior(V: Jet, w: Jet) -> Jet:
    """``ι_V w`` for a single vector jet and a 1- or 2-form jet (factor k)."""
    v, dv = V.val.reshape(-1), V.d.reshape(V.val.shape[-1], -1)
    if w.val.ndim == 1:
        return Jet(
            np.einsum("a,a->", v, w.val),
            np.einsum("ac,a->c", dv, w.val) + np.einsum("a,ac->c", v, w.d),
        )
    if w.val.ndim == 2:
        return Jet(
            2.0 * np.einsum("a,ab->b", v, w.val),
            2.0 * (np.einsum("ac,ab->bc", dv, w.val) + np.einsum("a,abc->bc", v, w.d)),
        )
    raise ContractError("interior product implemented for 1- and 2-forms")


# -- metric and connection -----------------------------------------------------


def christoffel_from(gval: np.ndarray, gd: np.ndarray) -> np.ndarray:
    """Γ^a_{bc} = ½ g^{ad}(∂_b g_{dc} + ∂_c g_{db} - ∂_d g_{bc})."""
    ginv = dual.inv(gval)
    s = np.einsum("dcb->dbc", gd) + gd - np.einsum("bcd->dbc", gd)
    return 0.5 * np.einsum("ad,dbc->abc", ginv, s)


def _check_nondegenerate(gval: np.ndarray) -> None:
    det = float(dual.primal(dual.det(gval)))
    if abs(det) < TOL_DET:
        raise NondegeneracyError(f"metric is degenerate here (det = {det:.3e})")


def christoffel(g: TensorFieldHandle, pt) -> np.ndarray:
    gval, gd = field_jet(g, pt)
    _check_nondegenerate(gval)
    return christoffel_from(gval, gd)


@dataclass(frozen=True, eq=False)
class ConnectionCoefficients:
    """Levi-Civita connection of ``source_metric``."""

    source_metric: TensorFieldHandle

    def gamma(self, pt) -> np.ndarray:
        return christoffel(self.source_metric, pt)

    def as_field(self) -> TensorFieldHandle:
        """Γ as a (1,2) field, differentiable by the metric's own strategy."""
        g = self.source_metric
        return TensorFieldHandle(
            g.chart,
            (1, 2),
            lambda x: christoffel(g, x),
            derivative_strategy=g.derivative_strategy,
            fd_step=g.fd_step,
            name=f"Gamma[{g.name}]",
        )


def covariant_from(val: np.ndarray, d: np.ndarray, gamma: np.ndarray, valence: tuple[int, int]) -> np.ndarray:
    """Components of ∇T (derivative index last) from a jet of T."""
    r, s = valence
    rank = r + s
    if rank > 3:
        raise ContractError("covariant derivative implemented for r + s <= 3")
    out = d.copy()
    idx = "abcd"[:rank]
    for k in range(rank):
        src = idx[:k] + "e" + idx[k + 1 :]
        if k < r:
            out = out + np.einsum(f"{src},{idx[k]}ze->{idx}z", val, gamma)
        else:
            out = out - np.einsum(f"{src},ez{idx[k]}->{idx}z", val, gamma)
    return out


def covariant_derivative(T: TensorFieldHandle, conn: ConnectionCoefficients, pt) -> np.ndarray:
    val, d = field_jet(T, pt)
    return covariant_from(val, d, conn.gamma(pt), T.valence)


def nabla_vectors(X: Jet, V: Jet, gamma: np.ndarray) -> np.ndarray:
    """``∇_{X_i} V_j`` for batches, shape (m1, m2, dim)."""
    return np.einsum("ic,jac->ija", X.val, V.d) + np.einsum("ic,acb,jb->ija", X.val, gamma, V.val)


# -- Lie and exterior derivatives ----------------------------------------------


def lie_11(Z: Jet, T: Jet, X: Jet) -> np.ndarray:
    """``(£_{Z_i} T) X_j = [Z_i, T X_j] - T [Z_i, X_j]``, shape (mZ, mX, dim)."""
    return bracket(Z, apply(T, X)) - np.einsum("ab,ijb->ija", T.val, bracket(Z, X))


def lie_01(Z: Jet, w: Jet, X: Jet) -> np.ndarray:
    """``(£_{Z_i} w) X_j = Z_i(w(X_j)) - w([Z_i, X_j])``."""
    wX = pair1(w, X)
    return np.einsum("ic,jc->ij", Z.val, wX.d) - np.einsum("ija,a->ij", bracket(Z, X), w.val)


def lie_02(Z: Jet, w: Jet, X: Jet, Y: Jet) -> np.ndarray:
    """``(£_{Z_i} w)(X_j, Y_k)``, shape (mZ, mX, mY)."""
    wXY = pair2(w, X, Y)
    t = np.einsum("ic,jkc->ijk", Z.val, wXY.d)
    t = t - np.einsum("ija,ab,kb->ijk", bracket(Z, X), w.val, Y.val)
    t = t - np.einsum("ja,ab,ikb->ijk", X.val, w.val, bracket(Z, Y))
    return t


def lie_metric_nabla_form(Z: Jet, g: np.ndarray, gamma: np.ndarray, X: Jet, Y: Jet) -> np.ndarray:
    """``g(∇_X Z, Y) + g(∇_Y Z, X)`` for batches, shape (mZ, mX, mY)."""
    nXZ = nabla_vectors(X, Z, gamma)  # (mX, mZ, dim)
    nYZ = nabla_vectors(Y, Z, gamma)
    return np.einsum("jia,ab,kb->ijk", nXZ, g, Y.val) + np.einsum("kia,ab,jb->ijk", nYZ, g, X.val)


def lie_derivative_tensor(Z, T: TensorFieldHandle, pt) -> np.ndarray:
    """Components of ``£_Z T`` for T of valence (1,1), (0,1) or (0,2)."""
    dim = T.chart.dim
    Zj = as_vectors(Z, pt, dim)
    Tj = jet_of(T, pt)
    E = basis(dim)
    if T.valence == (1, 1):
        return lie_11(Zj, Tj, E)[0].T
    if T.valence == (0, 1):
        return lie_01(Zj, Tj, E)[0]
    if T.valence == (0, 2):
        return lie_02(Zj, Tj, E, E)[0]
    raise ContractError(f"Lie derivative not implemented for valence {T.valence}")


def exterior_from(w: Jet, k: int) -> np.ndarray:
    """Components of dw for a k-form jet (k <= 2), via the bracket formula."""
    dim = w.dim
    E = basis(dim)
    if k == 0:
        return w.d.copy()
    if k == 1:
        return d1(w, E, E)
    if k == 2:
        return d2(w, E, E, E)
    raise ContractError("exterior derivative implemented for k <= 2")


def exterior_derivative(w: TensorFieldHandle, pt) -> np.ndarray:
    if w.valence[0] != 0:
        raise ContractError("exterior derivative needs a covariant form")
    return exterior_from(jet_of(w, pt), w.valence[1])


def exterior_derivative_field(w: TensorFieldHandle) -> TensorFieldHandle:
    """``dw`` as an engine-produced field (for d∘d and other nested checks)."""
    k = w.valence[1]
    if w.valence[0] != 0 or k > 2:
        raise ContractError("exterior derivative implemented for k <= 2")
    return TensorFieldHandle(
        w.chart,
        (0, k + 1),
        lambda x: exterior_derivative(w, x),
        derivative_strategy=w.derivative_strategy,
        fd_step=w.fd_step,
        name=f"d{w.name}",
    )


# -- Nijenhuis torsion -----------------------------------------------------------


def nijenhuis_from(f: Jet, X: Jet, Y: Jet) -> np.ndarray:
    """``f²[X,Y] + [fX,fY] - f[fX,Y] - f[X,fY]`` for batches, shape (m1, m2, dim)."""
    fX, fY = apply(f, X), apply(f, Y)
    f2 = f.val @ f.val
    return (
        np.einsum("ab,ijb->ija", f2, bracket(X, Y))
        + bracket(fX, fY)
        - np.einsum("ab,ijb->ija", f.val, bracket(fX, Y))
        - np.einsum("ab,ijb->ija", f.val, bracket(X, fY))
    )


def nijenhuis_connection_from(f: np.ndarray, nf: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """``(f∇_Y f - ∇_{fY} f)X - (f∇_X f - ∇_{fX} f)Y`` from ∇f components.

    ``nf[a, b, c] = (∇_c f)^a_b``; ``X`` and ``Y`` are plain vector batches.
    """
    fX, fY = X @ f.T, Y @ f.T

    def term(U, fU, W):
        # (f ∇_U f - ∇_{fU} f) W  ->  shape (mU, mW, dim)
        a = np.einsum("ae,ebc,ic,jb->ija", f, nf, U, W)
        b = np.einsum("abc,ic,jb->ija", nf, fU, W)
        return a - b

    return np.einsum("jia->ija", term(Y, fY, X)) - term(X, fX, Y)


def nijenhuis(f: TensorFieldHandle, X, Y, pt) -> np.ndarray:
    """``[f, f](X, Y)`` at ``pt`` from brackets of the actual argument fields."""
    dim = f.chart.dim
    out = nijenhuis_from(jet_of(f, pt), as_vectors(X, pt, dim), as_vectors(Y, pt, dim))
    return out[0, 0] if out.shape[:2] == (1, 1) else out


def nijenhuis_via_connection(f: TensorFieldHandle, g: TensorFieldHandle, X, Y, pt) -> np.ndarray:
    dim = f.chart.dim
    fj = jet_of(f, pt)
    nf = covariant_from(fj.val, fj.d, christoffel(g, pt), (1, 1))
    out = nijenhuis_connection_from(fj.val, nf, as_vectors(X, pt, dim).val, as_vectors(Y, pt, dim).val)
    return out[0, 0] if out.shape[:2] == (1, 1) else out


# -- Cartan's formula ----------------------------------------------------------


def cartan_residual_from(xi: Jet, w: Jet) -> float:
    """Max-norm of ``£_ξ w - (ι_ξ dw + d ι_ξ w)`` on the coordinate basis."""
    k = w.val.ndim
    dim = w.dim
    E = basis(dim)
    if k == 1:
        lhs = lie_01(xi, w, E)[0]
        i_dw = 2.0 * d1(w, xi, E)[0]
        d_iw = interior(xi, w).d
        rhs = i_dw + d_iw
    elif k == 2:
        lhs = lie_02(xi, w, E, E)[0]
        i_dw = 3.0 * d2(w, xi, E, E)[0]
        d_iw = d1(interior(xi, w), E, E)
        rhs = i_dw + d_iw
    else:
        raise ContractError("Cartan check implemented for 1- and 2-forms")
    return float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0


def cartan_check(xi, w: TensorFieldHandle, pt) -> float:
    if w.valence not in ((0, 1), (0, 2)):
        raise ContractError("Cartan check needs a 1- or 2-form")
    return cartan_residual_from(as_vectors(xi, pt, w.chart.dim), jet_of(w, pt))


__all__ = [
    "ConnectionCoefficients",
    "Jet",
    "apply",
    "as_vectors",
    "basis",
    "bracket",
    "cartan_check",
    "christoffel",
    "concat",
    "constant",
    "covariant_derivative",
    "covariant_from",
    "d1",
    "d2",
    "eval_field",
    "exterior_derivative",
    "exterior_derivative_field",
    "form_values",
    "interior",
    "jet_of",
    "lie_01",
    "lie_02",
    "lie_11",
    "lie_derivative_tensor",
    "lie_metric_nabla_form",
    "matmul",
    "nabla_vectors",
    "nijenhuis",
    "nijenhuis_via_connection",
    "pair1",
    "pair2",
]
