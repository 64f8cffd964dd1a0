"""Metric weak para-f-structures and their structure tensors.

A :class:`StructureBundle` holds ``(f, Q, ξ_i, η^i, g)`` on one chart.  At a
sample point, :class:`PointGeometry` takes one jet of every field and derives
everything else (Φ, Q̃, ∇f, N1..N5, h_i) algebraically, so a whole identity
check over an argument set costs a handful of ``einsum`` calls.

Vector arguments are batches of jets (see :mod:`paraf.calculus`).  The
default argument set at a point is: coordinate fields, the ξ_i, the fields
``f ∂_a``, and two fixed pseudo-random constant-coefficient combinations.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from paraf import calculus as calc
from paraf.calculus import Jet
from paraf.chart import Chart, MetricField, Point, Strategy, TensorFieldHandle, TOL_DET, TOL_SYM, sample_points
from paraf.errors import ContractError

RANK_TOL = 1e-8
COND_MAX = 1e8
ARGUMENT_SEED = 20240607
N_RANDOM_ARGS = 2

TOL = {"analytic": 1e-9, "fd": 1e-6}
CLASS_TOL = {"analytic": 1e-6, "fd": 1e-4}


@dataclass(frozen=True, eq=False)
class StructureBundle:
    chart: Chart
    f: TensorFieldHandle
    Q: TensorFieldHandle
    xi: tuple[TensorFieldHandle, ...]
    eta: tuple[TensorFieldHandle, ...]
    g: MetricField
    n: int
    p: int
    name: str = ""
    expected_fail: Optional[str] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(self.xi))
        object.__setattr__(self, "eta", tuple(self.eta))
        if len(self.xi) != len(self.eta):
            raise ContractError(f"{len(self.xi)} vector fields xi but {len(self.eta)} forms eta")
        if len(self.xi) != self.p:
            raise ContractError(f"p = {self.p} but {len(self.xi)} vector fields xi")
        if self.n < 1 or self.p < 1:
            raise ContractError("need n >= 1 and p >= 1")
        if self.chart.dim != 2 * self.n + self.p:
            raise ContractError(f"chart dimension {self.chart.dim} != 2n + p = {2 * self.n + self.p}")
        wanted = [(self.f, (1, 1)), (self.Q, (1, 1)), (self.g, (0, 2))]
        wanted += [(v, (1, 0)) for v in self.xi] + [(w, (0, 1)) for w in self.eta]
        for fld, val in wanted:
            if fld.valence != val:
                raise ContractError(f"field {fld.name or '?'} has valence {fld.valence}, expected {val}")
            if fld.chart.dim != self.chart.dim:
                raise ContractError(f"field {fld.name or '?'} lives on a chart of dimension {fld.chart.dim}")

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def strategy(self) -> Strategy:
        return self.f.derivative_strategy

    @property
    def tol_kind(self) -> str:
        return "fd" if self.strategy is Strategy.FD else "analytic"

    @property
    def tol(self) -> float:
        return TOL[self.tol_kind]

    @property
    def class_tol(self) -> float:
        return CLASS_TOL[self.tol_kind]

    def fields(self) -> list[TensorFieldHandle]:
        return [self.f, self.Q, self.g, *self.xi, *self.eta]

    def with_strategy(self, strategy, fd_step: float | None = None) -> "StructureBundle":
        s = Strategy(strategy)
        return replace(
            self,
            f=self.f.with_strategy(s, fd_step),
            Q=self.Q.with_strategy(s, fd_step),
            g=self.g.with_strategy(s, fd_step),
            xi=tuple(v.with_strategy(s, fd_step) for v in self.xi),
            eta=tuple(w.with_strategy(s, fd_step) for w in self.eta),
        )

    def with_chart(self, chart: Chart) -> "StructureBundle":
        def move(h):
            return replace(h, chart=chart)

        return replace(
            self,
            chart=chart,
            f=move(self.f),
            Q=move(self.Q),
            g=move(self.g),
            xi=tuple(move(v) for v in self.xi),
            eta=tuple(move(w) for w in self.eta),
        )

    def with_sampling(self, sample_count: int | None = None, seed: int | None = None) -> "StructureBundle":
        return self.with_chart(self.chart.with_sampling(sample_count, seed))

    def points(self) -> list[Point]:
        return sample_points(self.chart)


def _maxabs(*arrays) -> float:
    vals = [float(np.max(np.abs(a))) for a in arrays if np.size(a)]
    return max(vals) if vals else 0.0


def random_directions(dim: int, count: int = N_RANDOM_ARGS) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(ARGUMENT_SEED + dim))
    return rng.uniform(-1.0, 1.0, size=(count, dim))


class PointGeometry:
    """All first-order geometry of a bundle at one point."""

    def __init__(self, S: StructureBundle, pt):
        self.S = S
        self.pt = pt if isinstance(pt, Point) else Point(np.asarray(pt, dtype=float))
        self.x = self.pt.coords
        self.dim = S.dim
        self.p = S.p
        self.g = calc.jet_of(S.g, self.pt)
        self.f = calc.jet_of(S.f, self.pt)
        self.Q = calc.jet_of(S.Q, self.pt)
        xs = [calc.jet_of(v, self.pt) for v in S.xi]
        es = [calc.jet_of(w, self.pt) for w in S.eta]
        self.xi = Jet(np.stack([j.val for j in xs]), np.stack([j.d for j in xs]))
        self.eta = Jet(np.stack([j.val for j in es]), np.stack([j.d for j in es]))
        self._memo: dict = {}

    def memo(self, key, fn):
        """Cache an expensive batch (e.g. N5 on all argument triples) per point."""
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    # -- basic derived tensors -------------------------------------------------
    @cached_property
    def eye(self) -> np.ndarray:
        return np.eye(self.dim)

    @cached_property
    def E(self) -> Jet:
        return calc.basis(self.dim)

    @cached_property
    def Qt(self) -> Jet:
        return Jet(self.Q.val - self.eye, self.Q.d)

    @cached_property
    def Phi(self) -> Jet:
        """Φ(X, Y) = g(X, fY) as a (0,2) jet."""
        return calc.lower(self.g, self.f)

    @cached_property
    def gQt(self) -> Jet:
        """g(X, Q̃Y) as a (0,2) jet."""
        return calc.lower(self.g, self.Qt)

    @cached_property
    def ginv(self) -> np.ndarray:
        return np.linalg.inv(self.g.val)

    @cached_property
    def gamma(self) -> np.ndarray:
        return calc.christoffel_from(self.g.val, self.g.d)

    @cached_property
    def nabla_f(self) -> np.ndarray:
        """``[a, b, c] = (∇_c f)^a_b``."""
        return calc.covariant_from(self.f.val, self.f.d, self.gamma, (1, 1))

    @cached_property
    def nabla_xi(self) -> np.ndarray:
        """``[i, a, c] = ∇_c ξ_i^a`` (the matrix X ↦ ∇_X ξ_i)."""
        return self.xi.d + np.einsum("acb,ib->iac", self.gamma, self.xi.val)

    @cached_property
    def xibar(self) -> np.ndarray:
        return self.xi.val.sum(axis=0)

    @cached_property
    def etabar(self) -> np.ndarray:
        return self.eta.val.sum(axis=0)

    @cached_property
    def arguments(self) -> Jet:
        """Coordinate fields, ξ_i, f∂_a and fixed random constant combinations."""
        return calc.concat(
            self.E,
            self.xi,
            self.fvec(self.E),
            calc.constant(random_directions(self.dim)),
        )

    def eta_i(self, i: int) -> Jet:
        return self.eta[i]

    def xi_i(self, i: int) -> Jet:
        return self.xi[i : i + 1]

    def fvec(self, V: Jet) -> Jet:
        return calc.apply(self.f, V)

    def Qtvec(self, V: Jet) -> Jet:
        return calc.apply(self.Qt, V)

    def gdot(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        """``g(U_i, V_j)`` for plain vector batches."""
        return np.einsum("ia,ab,jb->ij", U, self.g.val, V)

    # -- structure tensors on argument batches --------------------------------------
    def deta(self, i: int, X: Jet, Y: Jet) -> np.ndarray:
        return calc.d1(self.eta_i(i), X, Y)

    def dPhi(self, X: Jet, Y: Jet, Z: Jet) -> np.ndarray:
        return calc.d2(self.Phi, X, Y, Z)

    def nijenhuis(self, X: Jet, Y: Jet) -> np.ndarray:
        return calc.nijenhuis_from(self.f, X, Y)

    def nijenhuis_connection(self, X: Jet, Y: Jet) -> np.ndarray:
        return calc.nijenhuis_connection_from(self.f.val, self.nabla_f, X.val, Y.val)

    def N1(self, X: Jet, Y: Jet) -> np.ndarray:
        out = self.nijenhuis(X, Y)
        for i in range(self.p):
            out = out - 2.0 * np.einsum("ij,a->ija", self.deta(i, X, Y), self.xi.val[i])
        return out

    def N2(self, i: int, X: Jet, Y: Jet) -> np.ndarray:
        """``2dη^i(fX, Y) - 2dη^i(fY, X)``."""
        return 2.0 * self.deta(i, self.fvec(X), Y) - 2.0 * self.deta(i, self.fvec(Y), X).T

    def N2_lie(self, i: int, X: Jet, Y: Jet) -> np.ndarray:
        """``(£_{fX} η^i)Y - (£_{fY} η^i)X``."""
        e = self.eta_i(i)
        return calc.lie_01(self.fvec(X), e, Y) - calc.lie_01(self.fvec(Y), e, X).T

    def N3(self, i: int, X: Jet) -> np.ndarray:
        """``(£_{ξ_i} f)X = [ξ_i, fX] - f[ξ_i, X]``, shape (m, dim)."""
        return calc.lie_11(self.xi_i(i), self.f, X)[0]

    def N3_connection(self, i: int, X: Jet) -> np.ndarray:
        """``(∇_{ξ_i} f)X - ∇_{fX} ξ_i + f ∇_X ξ_i``."""
        nf_xi = np.einsum("abc,c->ab", self.nabla_f, self.xi.val[i])
        A = self.nabla_xi[i]
        fX = X.val @ self.f.val.T
        return X.val @ nf_xi.T - fX @ A.T + (X.val @ A.T) @ self.f.val.T

    def N4(self, i: int, j: int, X: Jet) -> np.ndarray:
        """``(£_{ξ_i} η^j)X``."""
        return calc.lie_01(self.xi_i(i), self.eta_i(j), X)[0]

    def N4_d(self, i: int, j: int, X: Jet) -> np.ndarray:
        return 2.0 * self.deta(j, self.xi_i(i), X)[0]

    def N5(self, X: Jet, Y: Jet, Z: Jet) -> np.ndarray:
        G = self.gQt
        fY, fZ = self.fvec(Y), self.fvec(Z)
        sXY = calc.pair2(G, X, Y)
        sXZ = calc.pair2(G, X, Z)
        t = np.einsum("kc,ijc->ijk", fZ.val, sXY.d)
        t = t - np.einsum("jc,ikc->ijk", fY.val, sXZ.d)
        t = t + np.einsum("ika,ab,jb->ijk", calc.bracket(X, fZ), G.val, Y.val)
        t = t - np.einsum("ija,ab,kb->ijk", calc.bracket(X, fY), G.val, Z.val)
        W = (
            calc.bracket(Y, fZ)
            - np.einsum("kja->jka", calc.bracket(Z, fY))
            - np.einsum("ab,jkb->jka", self.f.val, calc.bracket(Y, Z))
        )
        return t + np.einsum("jka,ab,ib->ijk", W, G.val, X.val)

    def N5_missing_term(self, X: Jet, Y: Jet, Z: Jet) -> np.ndarray:
        """``X(g(fY, Q̃Z))``: the term by which the master formula misses with N5 as defined.

        Adding it restores both the master formula and tensoriality in Y.
        """
        s = calc.pair2(self.gQt, self.fvec(Y), Z)
        return np.einsum("ic,jkc->ijk", X.val, s.d)

    def h(self, i: int) -> np.ndarray:
        """Matrix of h_i = ½ £_{ξ_i} f."""
        return 0.5 * self.N3(i, self.E).T

    def h_adjoint(self, i: int) -> np.ndarray:
        """g-adjoint: g(h* X, Y) = g(X, h Y)."""
        return self.ginv @ self.h(i).T @ self.g.val

    def nabla_f_on(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """``(∇_{X_i} f) Y_j``, shape (m1, m2, dim)."""
        return np.einsum("abc,ic,jb->ija", self.nabla_f, X, Y)

    def g_nabla_f(self, X: Jet, Y: Jet, Z: Jet) -> np.ndarray:
        """``2 g((∇_X f)Y, Z)``."""
        return 2.0 * np.einsum("ija,ab,kb->ijk", self.nabla_f_on(X.val, Y.val), self.g.val, Z.val)

    def rhs_master(self, X: Jet, Y: Jet, Z: Jet) -> np.ndarray:
        """Right side of the master formula for 2 g((∇_X f)Y, Z)."""
        fX, fY, fZ = self.fvec(X), self.fvec(Y), self.fvec(Z)
        out = -3.0 * self.dPhi(X, fY, fZ) - 3.0 * self.dPhi(X, Y, Z)
        out = out - np.einsum("jka,ab,ib->ijk", self.N1(Y, Z), self.g.val, fX.val)
        for i in range(self.p):
            eX = X.val @ self.eta.val[i]
            eY = Y.val @ self.eta.val[i]
            eZ = Z.val @ self.eta.val[i]
            out = out + np.einsum("jk,i->ijk", self.N2(i, Y, Z), eX)
            out = out + 2.0 * np.einsum("ji,k->ijk", self.deta(i, fY, X), eZ)
            out = out - 2.0 * np.einsum("ki,j->ijk", self.deta(i, fZ, X), eY)
        return out + self.N5(X, Y, Z)

    def perp(self, V: np.ndarray) -> np.ndarray:
        """``V^⊥ = Σ_i η^i(V) ξ_i`` along the last axis."""
        return np.einsum("...a,ia,ib->...b", V, self.eta.val, self.xi.val)

    # -- lattice building blocks (component form on the coordinate basis) --------------
    @cached_property
    def N1_components(self) -> np.ndarray:
        return self.N1(self.E, self.E)

    @cached_property
    def dPhi_components(self) -> np.ndarray:
        return self.dPhi(self.E, self.E, self.E)

    @cached_property
    def deta_components(self) -> np.ndarray:
        return np.stack([self.deta(i, self.E, self.E) for i in range(self.p)])


# -- pointwise axiom checks -----------------------------------------------------------------


@dataclass(frozen=True)
class CheckOutcome:
    suite: str
    check_id: str
    sample_index: int
    residual: float
    tol: float
    scale: float
    passed: bool
    note: str = ""

    @property
    def relative_residual(self) -> float:
        return self.residual / max(1.0, self.scale)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "check": self.check_id,
            "sample": self.sample_index,
            "residual": self.residual,
            "scale": self.scale,
            "tol": self.tol,
            "passed": self.passed,
            "note": self.note,
        }


def outcome(suite: str, check_id: str, idx: int, residual: float, scale: float, tol: float, note: str = ""):
    residual = float(residual)
    scale = float(scale)
    return CheckOutcome(suite, check_id, idx, residual, tol, scale, residual <= tol * max(1.0, scale), note)


AXIOM_IDS = ("A0", "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8")
STRUCTURE_AXIOMS = ("A1", "A2", "A3", "A4", "A7")
METRIC_AXIOMS = ("A0", "A5", "A6", "A8")

AXIOM_NAMES = {
    "A0": "metric symmetric, nondegenerate, of declared signature",
    "A1": "rank f = 2n",
    "A2": "Q nonsingular",
    "A3": "f^3 = fQ and Q xi_i = xi_i",
    "A4": "f^2 = Q - sum eta^i (x) xi_i and eta^i(xi_j) = delta",
    "A5": "g(fX, fY) = -g(X, QY) + sum eta^i(X) eta^i(Y)",
    "A6": "f skew-adjoint and Q self-adjoint for g",
    "A7": "f xi_i = 0, eta^i o f = 0, eta^i o Q = eta^i, [Q, f] = 0",
    "A8": "g(X, xi_i) = eta^i(X) and g(xi_i, xi_j) = delta",
}


def axiom_residuals(S: StructureBundle, pt) -> dict[str, tuple[float, float, str]]:
    """``{axiom id: (residual, scale, note)}`` at one point (no derivatives needed)."""
    from paraf.chart import eval_field

    f = eval_field(S.f, pt)
    Q = eval_field(S.Q, pt)
    g = eval_field(S.g, pt)
    xi = np.stack([eval_field(v, pt) for v in S.xi])
    eta = np.stack([eval_field(w, pt) for w in S.eta])
    D, p = S.dim, S.p
    eye = np.eye(D)
    out: dict[str, tuple[float, float, str]] = {}

    # A0: metric
    asym = _maxabs(g - g.T)
    det = float(np.linalg.det(g))
    note = ""
    bad = asym > TOL_SYM * max(1.0, _maxabs(g))
    if abs(det) < TOL_DET:
        bad = True
        note = f"det g = {det:.3e}"
    elif S.g.signature is not None:
        ev = np.linalg.eigvalsh(0.5 * (g + g.T))
        sig = (int(np.sum(ev > 0)), int(np.sum(ev < 0)))
        if sig != tuple(S.g.signature):
            bad = True
            note = f"signature {sig} != declared {tuple(S.g.signature)}"
    out["A0"] = (max(asym, 1.0 if bad else 0.0), _maxabs(g), note)

    # A1: rank
    sv = np.linalg.svd(f, compute_uv=False)
    rank = int(np.sum(sv > RANK_TOL * sv[0])) if sv[0] > 0 else 0
    out["A1"] = (float(abs(rank - 2 * S.n)), 0.0, f"rank {rank}")

    # A2: Q nonsingular
    detQ = float(np.linalg.det(Q))
    out["A2"] = (0.0 if abs(detQ) >= TOL_DET else 1.0, 0.0, f"det Q = {detQ:.6g}")

    f2 = f @ f
    f3 = f2 @ f
    fQ = f @ Q
    xe = np.einsum("ia,ib->ab", xi, eta)  # Σ ξ_i ⊗ η^i as a matrix
    r3 = max(_maxabs(f3 - fQ), _maxabs(xi @ Q.T - xi))
    out["A3"] = (r3, _maxabs(f3, fQ, xi), "")

    r4 = max(_maxabs(f2 - (Q - xe)), _maxabs(eta @ xi.T - np.eye(p)))
    out["A4"] = (r4, _maxabs(f2, Q, xe), "")

    lhs5 = f.T @ g @ f
    rhs5 = -g @ Q + eta.T @ eta
    out["A5"] = (_maxabs(lhs5 - rhs5), _maxabs(lhs5, rhs5), "")

    gf = g @ f
    gQ = g @ Q
    out["A6"] = (max(_maxabs(gf + gf.T), _maxabs(gQ - gQ.T)), _maxabs(gf, gQ), "")

    r7 = max(
        _maxabs(xi @ f.T),
        _maxabs(eta @ f),
        _maxabs(eta @ Q - eta),
        _maxabs(Q @ f - f @ Q),
    )
    out["A7"] = (r7, _maxabs(f, Q, fQ), "")

    r8 = max(_maxabs(xi @ g - eta), _maxabs(xi @ g @ xi.T - np.eye(p)))
    out["A8"] = (r8, _maxabs(g, eta), "")
    return out


def validate_axioms(S: StructureBundle, points: Sequence[Point] | None = None) -> list[CheckOutcome]:
    """One outcome per axiom per sample point."""
    pts = S.points() if points is None else points
    tol = S.tol
    res = []
    for pt in pts:
        for aid, (r, scale, note) in axiom_residuals(S, pt).items():
            res.append(outcome("axioms", aid, pt.index, r, scale, tol, note))
    return res


def axioms_pass(outcomes: Sequence[CheckOutcome], ids: Sequence[str] = AXIOM_IDS) -> bool:
    return all(o.passed for o in outcomes if o.check_id in ids)


def failed_axioms(outcomes: Sequence[CheckOutcome]) -> list[str]:
    return sorted({o.check_id for o in outcomes if not o.passed})


# -- public pointwise operations ------------------------------------------------------------


def _geo(S: StructureBundle, pt) -> PointGeometry:
    return pt if isinstance(pt, PointGeometry) else PointGeometry(S, pt)


def _vec(geo: PointGeometry, V) -> Jet:
    return calc.as_vectors(V, geo.pt, geo.dim)


def _squeeze(a: np.ndarray, nargs: int) -> np.ndarray:
    if a.shape[:nargs] == (1,) * nargs:
        return a[(0,) * nargs]
    return a


def _index(S: StructureBundle, *idx: int) -> None:
    for i in idx:
        if not 0 <= i < S.p:
            raise ContractError(f"frame index {i} out of range 0..{S.p - 1}")


def fundamental_form(S: StructureBundle, pt) -> np.ndarray:
    return _geo(S, pt).Phi.val


def difference_tensor(S: StructureBundle, pt) -> np.ndarray:
    return _geo(S, pt).Qt.val


def tensor_N1(S: StructureBundle, X, Y, pt) -> np.ndarray:
    geo = _geo(S, pt)
    return _squeeze(geo.N1(_vec(geo, X), _vec(geo, Y)), 2)


def tensor_N2(S: StructureBundle, i: int, X, Y, pt, form: str = "d") -> np.ndarray:
    _index(S, i)
    geo = _geo(S, pt)
    fn = geo.N2 if form == "d" else geo.N2_lie
    return _squeeze(fn(i, _vec(geo, X), _vec(geo, Y)), 2)


def tensor_N3(S: StructureBundle, i: int, X, pt, form: str = "bracket") -> np.ndarray:
    _index(S, i)
    geo = _geo(S, pt)
    fn = geo.N3 if form == "bracket" else geo.N3_connection
    return _squeeze(fn(i, _vec(geo, X)), 1)


def tensor_N4(S: StructureBundle, i: int, j: int, X, pt, form: str = "bracket") -> np.ndarray:
    _index(S, i, j)
    geo = _geo(S, pt)
    fn = geo.N4 if form == "bracket" else geo.N4_d
    return _squeeze(fn(i, j, _vec(geo, X)), 1)


def tensor_N5(S: StructureBundle, X, Y, Z, pt) -> np.ndarray:
    geo = _geo(S, pt)
    return _squeeze(geo.N5(_vec(geo, X), _vec(geo, Y), _vec(geo, Z)), 3)


def tensor_h(S: StructureBundle, i: int, pt) -> tuple[np.ndarray, np.ndarray]:
    _index(S, i)
    geo = _geo(S, pt)
    return geo.h(i), geo.h_adjoint(i)


def nabla_f(S: StructureBundle, X, Y, pt) -> np.ndarray:
    geo = _geo(S, pt)
    return _squeeze(geo.nabla_f_on(_vec(geo, X).val, _vec(geo, Y).val), 2)


def master_formula_rhs(S: StructureBundle, X, Y, Z, pt) -> np.ndarray:
    """Right side of 2 g((∇_X f)Y, Z) assembled from dΦ, N1, N2, dη, N5."""
    geo = _geo(S, pt)
    return _squeeze(geo.rhs_master(_vec(geo, X), _vec(geo, Y), _vec(geo, Z)), 3)


def master_formula_lhs(S: StructureBundle, X, Y, Z, pt) -> np.ndarray:
    geo = _geo(S, pt)
    return _squeeze(geo.g_nabla_f(_vec(geo, X), _vec(geo, Y), _vec(geo, Z)), 3)


def q_inverse_condition(S: StructureBundle, pt) -> float:
    return float(np.linalg.cond(_geo(S, pt).Q.val))
