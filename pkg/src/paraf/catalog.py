"""Ready-made structures: worked examples and negative controls.

Every entry is expression-backed (closed-form jacobians) and addressable by
key plus parameters through :func:`make`.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from paraf.bundlefile import build_bundle
from paraf.chart import Chart, Strategy, TensorFieldHandle, eval_field
from paraf.errors import ConstructionError, ContractError
from paraf.structure import StructureBundle


def _box(dim: int, lo: float = -1.0, hi: float = 1.0):
    return tuple((lo, hi) for _ in range(dim))


def make_para_c_product(a: float = 2.0, n: int = 1, p: int = 2, strategy=Strategy.EXACT) -> StructureBundle:
    """Flat product M^{2n} x R^p with f̃ = n blocks [[0,a],[a,0]] and g_M = n blocks diag(1,-1)."""
    a = float(a)
    n, p = int(n), int(p)
    if n < 1 or p < 1:
        raise ConstructionError(f"need n >= 1 and p >= 1 (got n={n}, p={p})")
    if a == 0.0:
        raise ConstructionError("a = 0 makes f vanish: rank f = 0, not 2n")
    dim = 2 * n + p
    names = [f"{c}{k + 1}" for k in range(n) for c in ("x", "y")] + [f"t{i + 1}" for i in range(p)]
    f = np.zeros((dim, dim))
    g = np.eye(dim)
    Q = np.eye(dim)
    for k in range(n):
        f[2 * k, 2 * k + 1] = f[2 * k + 1, 2 * k] = a
        g[2 * k + 1, 2 * k + 1] = -1.0
        Q[2 * k, 2 * k] = Q[2 * k + 1, 2 * k + 1] = a * a
    xi = [np.eye(dim)[2 * n + i] for i in range(p)]
    chart = Chart(dim, tuple(names), _box(dim))
    return build_bundle(
        chart, g, f, Q, xi, xi, n, p,
        signature=(n + p, n), name="para_c_product", strategy=strategy,
        params={"a": a, "n": n, "p": p},
    )


def _heisenberg(lam: float, alpha: str, name: str, params: dict, strategy) -> StructureBundle:
    """Left-invariant-style frame on R^3 with η = dz - y dx, ξ = ∂z.

    With e1 = ∂x + y∂z and e2 = ∂y: f e1 = α e2, f e2 = (λ/α) e1, and
    g = A dx² + B dy² + η² with A = α/(2λ), B = -1/(2α).  Then f² = λ on
    span(e1, e2) and dη = Φ for any positive α.  N1(e1, e2) = (λ - 1)ξ, so the
    structure is normal only for λ = 1.
    """
    A = f"({alpha}) / {2.0 * lam!r}"
    B = f"-0.5 / ({alpha})"
    ly = f"{lam!r} / ({alpha})"
    metric = [
        [f"{A} + y^2", "0", "-y"],
        ["0", B, "0"],
        ["-y", "0", "1"],
    ]
    f = [
        ["0", ly, "0"],
        [alpha, "0", "0"],
        ["0", f"{ly} * y", "0"],
    ]
    Q = [
        [repr(lam), "0", "0"],
        ["0", repr(lam), "0"],
        [f"{lam - 1.0!r} * y", "0", "1"],
    ]
    chart = Chart(3, ("x", "y", "z"), _box(3))
    return build_bundle(
        chart, metric, f, Q, [["0", "0", "1"]], [["-y", "0", "1"]], 1, 1,
        signature=(2, 1), name=name, strategy=strategy, params=params,
    )


def make_para_sasakian_r3(strategy=Strategy.EXACT) -> StructureBundle:
    """Classical para-Sasakian structure (Q = id) on the hyperbolic Heisenberg model."""
    return _heisenberg(1.0, "1", "para_sasakian_r3", {}, strategy)


def make_weak_almost_para_s3(a: float = 1.5, warp: float = 0.5, strategy=Strategy.EXACT) -> StructureBundle:
    """dη = Φ with Q = a² on f(TM): almost-S but, for a² ≠ 1, not normal."""
    a, warp = float(a), float(warp)
    if a == 0.0:
        raise ConstructionError("a = 0 makes Q singular")
    alpha = f"exp({warp!r} * x)" if warp else "1"
    return _heisenberg(a * a, alpha, "weak_almost_para_s3", {"a": a, "warp": warp}, strategy)


def make_nonnormal_apc3(q: float = 2.0, strategy=Strategy.EXACT) -> StructureBundle:
    """η = dz, f∂x = e^z ∂y, f∂y = q e^{-z} ∂x; N1(∂x, ∂z) = ∂x everywhere."""
    q = float(q)
    if q <= 0.0:
        raise ConstructionError("need q > 0 for a real metric of signature (2, 1)")
    metric = [["1", "0", "0"], ["0", f"-{q!r} * exp(-2 * z)", "0"], ["0", "0", "1"]]
    f = [["0", f"{q!r} * exp(-z)", "0"], ["exp(z)", "0", "0"], ["0", "0", "0"]]
    Q = [[repr(q), "0", "0"], ["0", repr(q), "0"], ["0", "0", "1"]]
    chart = Chart(3, ("x", "y", "z"), _box(3))
    return build_bundle(
        chart, metric, f, Q, [["0", "0", "1"]], [["0", "0", "1"]], 1, 1,
        signature=(2, 1), name="nonnormal_apc3", strategy=strategy, params={"q": q},
    )


def perturb_Q(S: StructureBundle, eps: float) -> StructureBundle:
    """Q + eps·P with P = id - Σ ξ_i ⊗ η^i (identity on f(TM), commutes with f)."""
    eps = float(eps)
    if eps == 0.0:
        return S
    Q0 = S.Q
    xi, eta = S.xi, S.eta

    def evaluate(x):
        P = np.eye(S.dim) - sum(np.outer(eval_field(v, x), eval_field(w, x)) for v, w in zip(xi, eta))
        return eval_field(Q0, x) + eps * P

    Q = TensorFieldHandle(S.chart, (1, 1), evaluate, Q0.derivative_strategy, None, Q0.fd_step, "Q")
    return replace(S, Q=Q, name=f"{S.name}+perturb_Q", expected_fail="A3",
                   params={**S.params, "perturb_eps": eps})


# -- product construction ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProductBar:
    """f̄, Q̄ on M x R^p built from framed data (f, Q, ξ_i, η^i)."""

    base: StructureBundle
    chart: Chart
    f: TensorFieldHandle
    Q: TensorFieldHandle

    @property
    def dim(self) -> int:
        return self.chart.dim

    def kernel_frame(self, x) -> tuple[np.ndarray, np.ndarray]:
        """(ξ_i, 0) and (0, ∂_i) as rows of two (p, dim) arrays."""
        m, p = self.base.dim, self.base.p
        xb = x[:m]
        lift = np.zeros((p, self.dim))
        for i, v in enumerate(self.base.xi):
            lift[i, :m] = eval_field(v, xb)
        extra = np.zeros((p, self.dim))
        extra[:, m:] = np.eye(p)
        return lift, extra


def make_product_bar(S0: StructureBundle) -> ProductBar:
    m, p = S0.dim, S0.p
    dim = m + p
    names = tuple(S0.chart.coordinate_names) + tuple(f"s{i + 1}" for i in range(p))
    chart = Chart(dim, names, S0.chart.sample_box + _box(p), S0.chart.sample_count, S0.chart.seed)
    strategy = S0.strategy

    def parts(x):
        xb = x[:m]
        return (
            eval_field(S0.f, xb),
            eval_field(S0.Q, xb),
            np.stack([eval_field(v, xb) for v in S0.xi]),
            np.stack([eval_field(w, xb) for w in S0.eta]),
        )

    def fbar(x):
        f, _, xi, eta = parts(x)
        out = np.zeros((dim, dim), dtype=f.dtype if f.dtype == object else float)
        out[:m, :m] = f
        out[:m, m:] = -xi.T
        out[m:, :m] = eta
        return out

    def qbar(x):
        _, Q, _, _ = parts(x)
        out = np.zeros((dim, dim), dtype=Q.dtype if Q.dtype == object else float)
        out[:m, :m] = Q
        out[m:, m:] = np.eye(p)
        return out

    return ProductBar(
        S0,
        chart,
        TensorFieldHandle(chart, (1, 1), fbar, strategy, name="fbar"),
        TensorFieldHandle(chart, (1, 1), qbar, strategy, name="Qbar"),
    )


def product_bar_residuals(P: ProductBar, pt) -> dict[str, float]:
    """Residuals of the product construction at one point.

    ``square_minus_Qbar``: |f̄² + Q̄|, the claimed identity.  ``kernel_lift`` and
    ``kernel_extra``: f̄(ξ_i, 0) = (0, ∂_i) and f̄(0, ∂_i) = (-ξ_i, 0).
    ``square_split``: |f̄² - (Q̄ on f(TM) ⊕ 0, -id on the complement)|, what
    the composition actually gives.
    """
    x = np.asarray(pt.coords if hasattr(pt, "coords") else pt, dtype=float)
    F = np.asarray(eval_field(P.f, x), dtype=float)
    Qb = np.asarray(eval_field(P.Q, x), dtype=float)
    lift, extra = P.kernel_frame(x)
    F2 = F @ F
    m = P.base.dim
    eta = np.stack([np.asarray(eval_field(w, x[:m]), dtype=float) for w in P.base.eta])
    # projector onto span{(ξ_i, 0), (0, ∂_i)} along f(TM) ⊕ 0
    proj = lift.T @ np.pad(eta, ((0, 0), (0, P.dim - m))) + extra.T @ extra
    expected = Qb @ (np.eye(P.dim) - proj) - proj
    return {
        "square_minus_Qbar": float(np.max(np.abs(F2 + Qb))),
        "kernel_lift": float(np.max(np.abs(lift @ F.T - extra))),
        "kernel_extra": float(np.max(np.abs(extra @ F.T + lift))),
        "square_split": float(np.max(np.abs(F2 - expected))),
    }


# -- registry ---------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    build: Callable[..., StructureBundle]
    params: dict
    summary: str


CATALOG: dict[str, CatalogEntry] = {
    e.key: e
    for e in (
        CatalogEntry("para_c_product", make_para_c_product, {"a": 2.0, "n": 1, "p": 2},
                     "flat weak para-C product, Q = a^2 on f(TM)"),
        CatalogEntry("para_sasakian_r3", make_para_sasakian_r3, {},
                     "classical para-Sasakian structure on R^3"),
        CatalogEntry("weak_almost_para_s3", make_weak_almost_para_s3, {"a": 1.5, "warp": 0.5},
                     "weak almost para-S, not normal for a^2 != 1"),
        CatalogEntry("nonnormal_apc3", make_nonnormal_apc3, {"q": 2.0},
                     "metric weak para-f structure with N1 != 0"),
    )
}

INT_PARAMS = {"n", "p"}


def nearest_key(key: str) -> str | None:
    hits = difflib.get_close_matches(key, list(CATALOG), n=1, cutoff=0.0)
    return hits[0] if hits else None


def make(key: str, params: dict | None = None, strategy=Strategy.EXACT) -> StructureBundle:
    """Build a catalog entry; unknown keys raise with the nearest valid key."""
    if key not in CATALOG:
        raise ContractError(f"unknown structure {key!r}; nearest catalog key is {nearest_key(key)!r}")
    entry = CATALOG[key]
    given = dict(params or {})
    unknown = sorted(set(given) - set(entry.params))
    if unknown:
        raise ContractError(f"{key} takes parameters {sorted(entry.params)}, got unknown {unknown}")
    merged = {**entry.params, **given}
    kw = {}
    for k, v in merged.items():
        try:
            fv = float(v)
        except (TypeError, ValueError):
            raise ConstructionError(f"parameter {k}={v!r} is not a number") from None
        if k in INT_PARAMS:
            if not fv.is_integer():
                raise ConstructionError(f"parameter {k} must be an integer, got {v!r}")
            kw[k] = int(fv)
        else:
            kw[k] = fv
    return entry.build(**kw, strategy=Strategy(strategy))


VALID_KEYS = tuple(CATALOG)
