"""Class predicates, the class lattice and theorem reports.

A predicate passes when its worst normalised residual over all sample points
is at most ``class_tol``.  Theorem reports gate their conclusions on
hypotheses: a conclusion whose hypothesis fails is listed as vacuous and
never evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from paraf import calculus as calc
from paraf import identities as ids
from paraf.chart import MetricField, Point, Strategy, TensorFieldHandle, eval_field
from paraf.errors import AxiomError, ContractError, PlaneDegeneracyError
from paraf.structure import (
    COND_MAX,
    METRIC_AXIOMS,
    STRUCTURE_AXIOMS,
    PointGeometry,
    StructureBundle,
    _maxabs,
    failed_axioms,
    validate_axioms,
)

TOL_PLANE = 1e-10
CURVATURE_FD_STEP = 1e-4

CLASS_IDS = (
    "weak_almost_para_f",
    "metric_weak_para_f",
    "normal",
    "weak_almost_para_S",
    "weak_almost_para_C",
    "weak_para_K",
    "weak_para_S",
    "weak_para_C",
    "para_S",
    "unclassified",
)

# Most specific first; the reported class is the first one that holds.
_SPECIFICITY = (
    "para_S",
    "weak_para_S",
    "weak_para_C",
    "weak_para_K",
    "weak_almost_para_S",
    "weak_almost_para_C",
    "normal",
    "metric_weak_para_f",
)

LATTICE = (
    ("weak_para_S", "weak_para_K"),
    ("weak_para_K", "normal"),
    ("weak_para_C", "weak_para_K"),
    ("weak_para_S", "weak_almost_para_S"),
    ("weak_para_C", "weak_almost_para_C"),
    ("para_S", "weak_para_S"),
)

KERNEL_SUM_NOTE = "xi-bar is taken to be the sum of the xi_i (the analogue of eta-bar)"


# -- shared per-bundle state ------------------------------------------------------------


class Analysis:
    """Sample points, per-point geometry, axiom outcomes and the verdict of one bundle.

    Everything is computed lazily and at most once, so suites run from the
    CLI share work.
    """

    def __init__(
        self,
        S: StructureBundle,
        points: Optional[Sequence[Point]] = None,
        tol_overrides: Optional[dict[str, float]] = None,
    ):
        self.S = S
        self.points = list(S.points() if points is None else points)
        self.tol_overrides = dict(tol_overrides or {})

    def class_tol(self, check_id: str) -> float:
        return self.tol_overrides.get(check_id, self.S.class_tol)

    @cached_property
    def geometries(self) -> list[PointGeometry]:
        return [PointGeometry(self.S, pt) for pt in self.points]

    @cached_property
    def axiom_outcomes(self):
        return validate_axioms(self.S, self.points)

    @cached_property
    def verdict(self) -> "ClassVerdict":
        return _classify(self)

    def identity(self, identity_id: str) -> "Measured":
        return self._measured(identity_id)

    def _measured(self, identity_id: str) -> "Measured":
        cache = self.__dict__.setdefault("_identity_cache", {})
        if identity_id not in cache:
            it = ids.ALL.get(identity_id) or ids.DIAGNOSTIC[identity_id]
            rs = [it(geo) for geo in self.geometries]
            cache[identity_id] = Measured.of(identity_id, rs, self.class_tol(identity_id))
        return cache[identity_id]


def _ctx(S, ctx: Optional[Analysis]) -> Analysis:
    if isinstance(S, Analysis):
        return S
    if ctx is not None:
        if ctx.S is not S:
            raise ContractError("analysis context belongs to a different bundle")
        return ctx
    return Analysis(S)


@dataclass(frozen=True)
class Measured:
    """Worst residual of one check over all samples."""

    id: str
    residual: float
    normalized: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.normalized <= self.tol

    @classmethod
    def of(cls, id: str, pairs, tol: float) -> "Measured":
        pairs = list(pairs)
        res = max((r for r, _ in pairs), default=0.0)
        norm = max((r / max(1.0, s) for r, s in pairs), default=0.0)
        return cls(id, float(res), float(norm), tol)

    def as_dict(self) -> dict:
        return {"id": self.id, "residual": self.residual, "normalized": self.normalized,
                "tol": self.tol, "passed": self.passed}


# -- predicates -----------------------------------------------------------------


def _pred_normal(geo: PointGeometry):
    N = geo.N1_components
    return _maxabs(N), _maxabs(geo.nijenhuis(geo.E, geo.E), 2.0 * geo.deta_components)


def _pred_phi_closed(geo: PointGeometry):
    return _maxabs(geo.dPhi_components), _maxabs(geo.Phi.val, geo.Phi.d)


def _pred_eta_equals_phi(geo: PointGeometry):
    de = geo.deta_components
    return _maxabs(de - geo.Phi.val[None]), _maxabs(de, geo.Phi.val)


def _pred_eta_closed(geo: PointGeometry):
    return _maxabs(geo.deta_components), _maxabs(geo.eta.d)


def _pred_Q_identity(geo: PointGeometry):
    return _maxabs(geo.Qt.val), 0.0


PREDICATES = {
    "normal": _pred_normal,
    "phi_closed": _pred_phi_closed,
    "eta_equals_phi": _pred_eta_equals_phi,
    "eta_closed": _pred_eta_closed,
    "Q_identity": _pred_Q_identity,
}


def classes_from(pred: dict[str, bool]) -> dict[str, bool]:
    """The class lattice as a function of predicate verdicts."""
    normal = pred["normal"]
    K = normal and pred["phi_closed"]
    S = K and pred["eta_equals_phi"]
    return {
        "metric_weak_para_f": True,
        "normal": normal,
        "weak_para_K": K,
        "weak_para_S": S,
        "weak_para_C": K and pred["eta_closed"],
        "weak_almost_para_S": pred["eta_equals_phi"],
        "weak_almost_para_C": pred["phi_closed"] and pred["eta_closed"],
        "para_S": S and pred["Q_identity"],
    }


def lattice_violations(classes: dict[str, bool]) -> list[tuple[str, str]]:
    return [(a, b) for a, b in LATTICE if classes.get(a) and not classes.get(b)]


@dataclass(frozen=True)
class ClassVerdict:
    class_id: str
    residuals: dict[str, Measured]
    verdict: dict[str, bool]
    classes: dict[str, bool]
    notes: tuple[str, ...] = ()

    def holds(self, class_id: str) -> bool:
        return bool(self.classes.get(class_id, False))

    def as_dict(self) -> dict:
        return {
            "class": self.class_id,
            "classes": sorted(k for k, v in self.classes.items() if v),
            "predicates": {k: m.as_dict() for k, m in sorted(self.residuals.items())},
            "notes": list(self.notes),
        }


def _classify(ctx: Analysis) -> ClassVerdict:
    S = ctx.S
    failed = failed_axioms(ctx.axiom_outcomes)
    structural = [a for a in failed if a in STRUCTURE_AXIOMS]
    if structural:
        raise AxiomError(f"{S.name or 'bundle'} fails structure axioms {structural}; classification refused", failed)
    if any(a in METRIC_AXIOMS for a in failed):
        classes = {c: False for c in _SPECIFICITY}
        classes["weak_almost_para_f"] = True
        return ClassVerdict("weak_almost_para_f", {}, {}, classes, (f"metric axioms fail: {failed}",))
    residuals = {
        pid: Measured.of(pid, (fn(geo) for geo in ctx.geometries), ctx.class_tol(pid))
        for pid, fn in PREDICATES.items()
    }
    verdict = {pid: m.passed for pid, m in residuals.items()}
    classes = classes_from(verdict)
    bad = lattice_violations(classes)
    if bad:  # cannot happen by construction of classes_from
        raise AssertionError(f"lattice violated: {bad}")
    class_id = next(c for c in _SPECIFICITY if classes[c])
    notes = (KERNEL_SUM_NOTE,) if S.p > 1 else ()
    return ClassVerdict(class_id, residuals, verdict, classes, notes)


def classify(S, ctx: Optional[Analysis] = None) -> ClassVerdict:
    """Most specific class of the lattice that the bundle satisfies."""
    return _ctx(S, ctx).verdict


# -- curvature ----------------------------------------------------------------------


def riemann(metric: TensorFieldHandle, pt) -> np.ndarray:
    """``R[a, b, c, d] = R^a_{bcd}``, so that ``R(X, Y)Z = R^a_{bcd} Z^b X^c Y^d``.

    Γ is differentiated as an engine-produced field: nested dual numbers for
    the analytic strategies, an outer central difference with step 1e-4 for
    ``fd``.
    """
    conn = calc.ConnectionCoefficients(metric)
    Gfield = conn.as_field()
    if metric.derivative_strategy is Strategy.FD:
        Gfield = Gfield.with_strategy(Strategy.FD, CURVATURE_FD_STEP)
    G = calc.jet_of(Gfield, pt)
    Gv, dG = G.val, G.d  # dG[a, b, c, k] = ∂_k Γ^a_{bc}
    return (
        np.einsum("adbc->abcd", dG)
        - np.einsum("acbd->abcd", dG)
        + np.einsum("ace,edb->abcd", Gv, Gv)
        - np.einsum("ade,ecb->abcd", Gv, Gv)
    )


def _vector(V, pt, dim) -> np.ndarray:
    if isinstance(V, TensorFieldHandle):
        return np.asarray(eval_field(V, pt), dtype=float)
    v = np.asarray(V, dtype=float)
    if v.shape != (dim,):
        raise ContractError(f"vector has shape {v.shape}, expected ({dim},)")
    return v


def sectional_curvature(S, X, Y, pt) -> float:
    """K(X, Y) = g(R(X,Y)Y, X) / (g(X,X)g(Y,Y) - g(X,Y)²).

    ``S`` may be a bundle or a bare metric field.
    """
    metric = S.g if isinstance(S, StructureBundle) else S
    dim = metric.chart.dim
    x, y = _vector(X, pt, dim), _vector(Y, pt, dim)
    g = np.asarray(eval_field(metric, pt), dtype=float)
    gxx, gyy, gxy = x @ g @ x, y @ g @ y, x @ g @ y
    denom = gxx * gyy - gxy * gxy
    if abs(denom) < TOL_PLANE:
        raise PlaneDegeneracyError(f"span(X, Y) is degenerate (Gram determinant {denom:.3e})")
    R = riemann(metric, pt)
    RXYY = np.einsum("abcd,b,c,d->a", R, y, x, y)
    return float(RXYY @ g @ x / denom)


def _kernel_curvatures(geo: PointGeometry) -> list[float]:
    S = geo.S
    if S.p < 2:
        return []
    R = riemann(S.g, geo.pt)
    g = geo.g.val
    xi = geo.xi.val
    out = []
    for i in range(S.p):
        for j in range(i + 1, S.p):
            x, y = xi[i], xi[j]
            denom = (x @ g @ x) * (y @ g @ y) - (x @ g @ y) ** 2
            if abs(denom) < TOL_PLANE:
                raise PlaneDegeneracyError(f"span(xi_{i + 1}, xi_{j + 1}) is degenerate")
            out.append(float(np.einsum("abcd,b,c,d->a", R, y, x, y) @ g @ x / denom))
    return out


def kernel_flatness(ctx: Analysis) -> Measured:
    """max |K(ξ_i, ξ_j)| over samples and pairs i < j."""
    cache = ctx.__dict__.setdefault("_identity_cache", {})
    if "kernel.flat_leaves" not in cache:
        pairs = [(max((abs(k) for k in _kernel_curvatures(geo)), default=0.0), 0.0) for geo in ctx.geometries]
        cache["kernel.flat_leaves"] = Measured.of("kernel.flat_leaves", pairs, ctx.class_tol("kernel.flat_leaves"))
    return cache["kernel.flat_leaves"]


# -- theorem reports ------------------------------------------------------------------


@dataclass
class Conclusion:
    id: str
    requires: tuple[str, ...]
    status: str  # "pass" | "fail" | "vacuous"
    residual: Optional[float] = None
    normalized: Optional[float] = None
    tol: Optional[float] = None

    def as_dict(self) -> dict:
        return {"id": self.id, "requires": list(self.requires), "status": self.status,
                "residual": self.residual, "normalized": self.normalized, "tol": self.tol}


@dataclass
class TheoremReport:
    theorem_id: str
    hypotheses: dict[str, bool]
    conclusions: list[Conclusion]
    status: str
    flags: list[str] = field(default_factory=list)
    measurements: dict[str, float] = field(default_factory=dict)
    verdict: Optional[str] = None

    @property
    def hypotheses_checked(self) -> list[str]:
        return sorted(self.hypotheses)

    @property
    def conclusions_checked(self) -> list[str]:
        return [c.id for c in self.conclusions if c.status != "vacuous"]

    def conclusion(self, cid: str) -> Conclusion:
        for c in self.conclusions:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem_id,
            "hypotheses": dict(sorted(self.hypotheses.items())),
            "conclusions": [c.as_dict() for c in self.conclusions],
            "status": self.status,
            "flags": list(self.flags),
            "measurements": dict(sorted(self.measurements.items())),
            "verdict": self.verdict,
        }


class _Builder:
    """Collects gated conclusions for one report."""

    def __init__(self, ctx: Analysis, theorem_id: str):
        self.ctx = ctx
        self.theorem_id = theorem_id
        self.hyp: dict[str, bool] = {}
        self.concl: list[Conclusion] = []
        self.flags: list[str] = []
        self.meas: dict[str, float] = {}
        self.verdict: Optional[str] = None
        self._classes: Optional[dict[str, bool]] = None
        try:
            v = ctx.verdict
            self.axioms_ok = v.class_id != "weak_almost_para_f"
            self._classes = v.classes if self.axioms_ok else None
            self._predicates = v.verdict
        except AxiomError as e:
            self.axioms_ok = False
            self._predicates = {}
            self.flags.append(f"axioms fail: {', '.join(e.failed)}")
        self.hyp["axioms"] = self.axioms_ok

    def holds(self, name: str) -> bool:
        """Class or predicate hypothesis; records it."""
        if not self.axioms_ok:
            ok = False
        elif name in PREDICATES:
            ok = bool(self._predicates.get(name))
        else:
            ok = bool(self._classes.get(name))
        self.hyp[name] = ok
        return ok

    def any_of(self, *names: str) -> bool:
        return any([self.holds(n) for n in names])

    def identity(self, cid: str, gate: bool, requires: Sequence[str], measured: Optional[Measured] = None):
        if not (gate and self.axioms_ok):
            self.concl.append(Conclusion(cid, tuple(requires), "vacuous"))
            return None
        m = measured if measured is not None else self.ctx.identity(cid)
        self.concl.append(Conclusion(cid, tuple(requires), "pass" if m.passed else "fail",
                                     m.residual, m.normalized, m.tol))
        return m

    def boolean(self, cid: str, gate: bool, requires: Sequence[str], ok: bool, residual: float = 0.0):
        if not (gate and self.axioms_ok):
            self.concl.append(Conclusion(cid, tuple(requires), "vacuous"))
            return
        tol = self.ctx.S.class_tol
        self.concl.append(Conclusion(cid, tuple(requires), "pass" if ok else "fail", residual, residual, tol))

    def build(self) -> TheoremReport:
        checked = [c for c in self.concl if c.status != "vacuous"]
        if not checked:
            status = "vacuous"
        elif all(c.status == "pass" for c in checked):
            status = "pass"
        else:
            status = "fail"
        return TheoremReport(self.theorem_id, self.hyp, self.concl, status, self.flags, self.meas, self.verdict)


def _per_xi(ctx: Analysis, i: int, fn) -> Measured:
    """Measure ``fn(geo, i)`` over samples (single-ξ variants of registry checks)."""
    return Measured.of(fn.__name__, (fn(geo, i) for geo in ctx.geometries), ctx.class_tol("xi.killing"))


def _lie_g(geo: PointGeometry, i: int):
    return ids._zero(calc.lie_02(geo.xi_i(i), geo.g, geo.E, geo.E))


def _N3_i(geo: PointGeometry, i: int):
    return ids._zero(geo.N3(i, geo.arguments))


def check_killing(S, i: int, ctx: Optional[Analysis] = None) -> TheoremReport:
    """ξ_i Killing on weak para-K structures; Killing ⇔ N3_i = 0 on almost para-S/C ones."""
    ctx = _ctx(S, ctx)
    if not 0 <= i < ctx.S.p:
        raise ContractError(f"frame index {i} out of range 0..{ctx.S.p - 1}")
    b = _Builder(ctx, f"killing[{i + 1}]")
    if b.axioms_ok:
        lie = _per_xi(ctx, i, _lie_g)
        n3 = _per_xi(ctx, i, _N3_i)
        b.meas["lie_xi_g"] = lie.residual
        b.meas["N3"] = n3.residual
    K = b.holds("weak_para_K")
    b.identity("xi.killing", K, ("weak_para_K",), lie if K else None)
    iff_gate = b.any_of("weak_almost_para_S", "weak_almost_para_C")
    if iff_gate:
        b.boolean("killing_iff_N3_vanishes", True, ("weak_almost_para_S|weak_almost_para_C",),
                  lie.passed == n3.passed, max(lie.normalized, n3.normalized) if lie.passed != n3.passed else 0.0)
    else:
        b.boolean("killing_iff_N3_vanishes", False, ("weak_almost_para_S|weak_almost_para_C",), False)
    return b.build()


def check_totally_geodesic_kernel(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "totally_geodesic_kernel")
    pairwise = ctx.S.p > 1
    if not pairwise:
        b.flags.append("p = 1: pairwise conclusions are vacuous")
    normal = b.holds("normal")
    strong = b.any_of("weak_para_K", "weak_almost_para_S", "weak_almost_para_C")
    b.identity("kernel.totally_geodesic", normal or strong, ("normal|weak_almost_para_S|weak_almost_para_C",))
    b.identity("kernel.parallel", strong, ("weak_para_K|weak_almost_para_S|weak_almost_para_C",))
    b.identity("kernel.integrable", pairwise and (normal or strong), ("normal|weak_almost_para_S|weak_almost_para_C", "p>1"))
    flat_gate = pairwise and strong
    b.identity("kernel.flat_leaves", flat_gate, ("weak_para_K|weak_almost_para_S|weak_almost_para_C", "p>1"),
               kernel_flatness(ctx) if flat_gate and b.axioms_ok else None)
    return b.build()


def check_rigidity(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    """Weak para-S candidates (normal with dη = Φ) must have Q̃ = 0."""
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "rigidity")
    cand = b.holds("normal") & b.holds("eta_equals_phi")
    b.identity("S.N1_kernel_component", cand, ("normal", "eta_equals_phi"))
    m_img = b.identity("S.Qt_on_image", cand, ("normal", "eta_equals_phi"))
    m_Q = b.identity("S.Q_is_identity", cand, ("normal", "eta_equals_phi"))
    if cand and b.axioms_ok:
        b.meas["max_abs_Qtilde"] = m_Q.residual
        if m_img.passed and m_Q.passed:
            b.verdict = "para_S"
        else:
            b.flags.append("contradiction: weak para-S hypotheses hold numerically but Q-tilde != 0; "
                           "treat as a data-quality problem in the inputs")
    return b.build()


def check_nabla_f_characterization(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    """∇f = 0 and [ξ_i, ξ_j]^⊥ = 0 force a weak para-C structure with N5 = 0."""
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "nabla_f_characterization")
    hyp = False
    if b.axioms_ok:
        h1 = ctx.identity("nabla_f.vanishes")
        h2 = ctx.identity("kernel.bracket_vertical_part")
        b.hyp["nabla_f_vanishes"] = h1.passed
        b.hyp["kernel_bracket_vertical_part_vanishes"] = h2.passed
        b.meas["max_abs_nabla_f"] = h1.residual
        hyp = h1.passed and h2.passed
    req = ("nabla_f_vanishes", "kernel_bracket_vertical_part_vanishes")
    b.boolean("class.weak_para_C", hyp, req, hyp and ctx.verdict.holds("weak_para_C"))
    for cid in ("N5.vanishes", "C.nabla_f", "C.N5_cyclic", "C.N5_cyclic_f", "C.nabla_xi"):
        b.identity(cid, hyp, req)
    return b.build()


def check_weak_para_K_formula(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "weak_para_K_formula")
    K = b.holds("weak_para_K")
    b.identity("K.nabla_f", K, ("weak_para_K",))
    b.identity("K.nabla_f_along_kernel", K, ("weak_para_K",))
    return b.build()


def check_weak_para_K_structure(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    """Killing frame, parallel kernel and flat leaves on weak para-K structures."""
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "weak_para_K_structure")
    K = b.holds("weak_para_K")
    b.identity("xi.killing", K, ("weak_para_K",))
    b.identity("kernel.parallel", K, ("weak_para_K",))
    b.identity("kernel.integrable", K, ("weak_para_K",))
    gate = K and ctx.S.p > 1
    b.identity("kernel.flat_leaves", gate, ("weak_para_K", "p>1"), kernel_flatness(ctx) if gate else None)
    return b.build()


def check_normal_structure(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "normal_structure")
    n = b.holds("normal")
    for cid in ("normal.N3_vanishes", "normal.N4_vanishes", "normal.N2_bracket_form",
                "normal.deta_kernel", "kernel.totally_geodesic"):
        b.identity(cid, n, ("normal",))
    return b.build()


def check_almost_S_structure(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "weak_almost_para_S_structure")
    a = b.holds("weak_almost_para_S")
    req = ("weak_almost_para_S",)
    for cid in ("N2.vanishes", "N4.vanishes", "almost_S.N1_kernel_part", "almost_S.nabla_f",
                "almost_S.nabla_f_along_kernel", "kernel.parallel", "almost_S.lie_deta_split",
                "h.kills_kernel", "h.skew_part", "h.nabla_xi", "h.anticommutator", "h.nabla_xi_vertical"):
        b.identity(cid, a, req)
    if a:
        for i in range(ctx.S.p):
            lie = _per_xi(ctx, i, _lie_g)
            n3 = _per_xi(ctx, i, _N3_i)
            ok = lie.passed == n3.passed
            b.boolean(f"killing_iff_N3_vanishes[{i + 1}]", True, req, ok,
                      0.0 if ok else max(lie.normalized, n3.normalized))
        b.meas["nabla_f_with_completed_N5"] = ctx.identity("almost_S.nabla_f_completed").normalized
        cond = max(float(np.linalg.cond(geo.Q.val)) for geo in ctx.geometries)
        b.meas["max_cond_Q"] = cond
        if cond > COND_MAX:
            b.flags.append(f"cond(Q) = {cond:.3e} exceeds {COND_MAX:.0e}; Q^-1 in the nabla xi formula is unreliable")
    return b.build()


def check_almost_C_structure(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "weak_almost_para_C_structure")
    a = b.holds("weak_almost_para_C")
    req = ("weak_almost_para_C",)
    for cid in ("N2.vanishes", "N4.vanishes", "almost_C.N1_is_nijenhuis", "kernel.commuting", "kernel.parallel"):
        b.identity(cid, a, req)
    gate = a and ctx.S.p > 1
    b.identity("kernel.flat_leaves", gate, req + ("p>1",), kernel_flatness(ctx) if gate else None)
    if a:
        for i in range(ctx.S.p):
            lie = _per_xi(ctx, i, _lie_g)
            n3 = _per_xi(ctx, i, _N3_i)
            ok = lie.passed == n3.passed
            b.boolean(f"killing_iff_N3_vanishes[{i + 1}]", True, req, ok,
                      0.0 if ok else max(lie.normalized, n3.normalized))
    return b.build()


def check_weak_para_S_formula(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "weak_para_S_structure")
    s = b.holds("weak_para_S")
    for cid in ("S.nabla_f", "S.N1_kernel_component", "xi.killing", "S.image_totally_geodesic"):
        b.identity(cid, s, ("weak_para_S",))
    return b.build()


def check_weak_para_C_identities(S, ctx: Optional[Analysis] = None) -> TheoremReport:
    ctx = _ctx(S, ctx)
    b = _Builder(ctx, "weak_para_C_identities")
    c = b.holds("weak_para_C")
    for cid in ("C.nabla_f", "C.N5_cyclic", "C.N5_cyclic_f", "C.nabla_xi"):
        b.identity(cid, c, ("weak_para_C",))
    return b.build()


def run_theorems(S, ctx: Optional[Analysis] = None) -> list[TheoremReport]:
    """Every theorem report, in a fixed order."""
    ctx = _ctx(S, ctx)
    out = [check_killing(ctx, i) for i in range(ctx.S.p)]
    out += [
        check_totally_geodesic_kernel(ctx),
        check_normal_structure(ctx),
        check_almost_S_structure(ctx),
        check_almost_C_structure(ctx),
        check_weak_para_K_structure(ctx),
        check_weak_para_K_formula(ctx),
        check_weak_para_S_formula(ctx),
        check_rigidity(ctx),
        check_weak_para_C_identities(ctx),
        check_nabla_f_characterization(ctx),
    ]
    return out
