"""Expression-backed bundles and the plain-text bundle description format.

Format (``#`` starts a comment, blank lines are ignored)::

    [chart]
    coordinates = x y z
    box = -1 1, -1 1, -1 1
    n = 1
    p = 1
    signature = 2 1          # optional
    samples = 200            # optional
    seed = 1                 # optional

    [metric]                 # dim rows of dim comma-separated expressions
    0.5 + y^2, 0, -y
    ...
    [f]                      # row a holds f^a_b for b = 0..dim-1
    [Q]
    [xi]                     # p rows of dim components
    [eta]                    # p rows of dim components

Component expressions follow the grammar in :mod:`paraf.expr`.  Every field
gets a closed-form jacobian, so bundles built here support all three
derivative strategies.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Sequence

import numpy as np

from paraf import dual
from paraf import expr as ex
from paraf.chart import Chart, MetricField, Strategy, TensorFieldHandle
from paraf.errors import ContractError
from paraf.structure import StructureBundle

SECTIONS = ("chart", "metric", "f", "Q", "xi", "eta")


class BundleParseError(ContractError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


def _node(component, names):
    if isinstance(component, (int, float)):
        return ex.Num(float(component))
    if isinstance(component, str):
        return ex.parse(component, names)
    return component


def expression_field(
    chart: Chart,
    components,
    valence: tuple[int, int],
    name: str = "",
    strategy: Strategy = Strategy.EXACT,
    metric: bool = False,
    signature=None,
) -> TensorFieldHandle:
    """Field whose components are expression trees (or strings / numbers)."""
    names = chart.coordinate_names
    src = np.asarray(components, dtype=object)
    if src.shape != (chart.dim,) * sum(valence):
        raise ContractError(f"{name or 'field'}: components have shape {src.shape}, expected {(chart.dim,) * sum(valence)}")
    nodes = np.empty(src.shape, dtype=object)
    for idx in np.ndindex(src.shape):
        nodes[idx] = _node(src[idx], names)
    fns = [ex.compile_expr(nodes[idx]) for idx in np.ndindex(nodes.shape)]
    dnodes = [[ex.diff(nodes[idx], k) for k in range(chart.dim)] for idx in np.ndindex(nodes.shape)]
    dfns = [[ex.compile_expr(d) for d in row] for row in dnodes]
    shape = nodes.shape

    def evaluate(x):
        return dual.as_array([fn(x) for fn in fns]).reshape(shape)

    def jacobian(x):
        return dual.as_array([d(x) for row in dfns for d in row]).reshape(shape + (chart.dim,))

    cls = MetricField if metric else TensorFieldHandle
    kw = {"signature": tuple(signature) if signature is not None else None} if metric else {}
    return cls(chart, valence, evaluate, strategy, jacobian, None, name, nodes, **kw)


def build_bundle(
    chart: Chart,
    metric,
    f,
    Q,
    xi: Sequence,
    eta: Sequence,
    n: int,
    p: int,
    signature=None,
    name: str = "",
    strategy: Strategy = Strategy.EXACT,
    expected_fail: str | None = None,
    params: dict | None = None,
) -> StructureBundle:
    if len(xi) != len(eta):
        raise ContractError(f"{len(xi)} vector fields xi but {len(eta)} forms eta")
    return StructureBundle(
        chart=chart,
        f=expression_field(chart, f, (1, 1), "f", strategy),
        Q=expression_field(chart, Q, (1, 1), "Q", strategy),
        xi=tuple(expression_field(chart, v, (1, 0), f"xi_{i + 1}", strategy) for i, v in enumerate(xi)),
        eta=tuple(expression_field(chart, w, (0, 1), f"eta^{i + 1}", strategy) for i, w in enumerate(eta)),
        g=expression_field(chart, metric, (0, 2), "g", strategy, metric=True, signature=signature),
        n=n,
        p=p,
        name=name,
        expected_fail=expected_fail,
        params=dict(params or {}),
    )


# -- serialisation ---------------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def to_bundle_text(S: StructureBundle) -> str:
    """Render an expression-backed bundle in the description format."""
    for h in S.fields():
        if h.nodes is None:
            raise ContractError(f"field {h.name or '?'} is not expression-backed")
    c = S.chart
    lines = ["[chart]", "coordinates = " + " ".join(c.coordinate_names)]
    lines.append("box = " + ", ".join(f"{_fmt(lo)} {_fmt(hi)}" for lo, hi in c.sample_box))
    lines += [f"n = {S.n}", f"p = {S.p}"]
    if S.g.signature is not None:
        lines.append("signature = {} {}".format(*S.g.signature))
    lines += [f"samples = {c.sample_count}", f"seed = {c.seed}", ""]

    def rows(nodes):
        return [", ".join(ex.to_text(v) for v in row) for row in nodes]

    for sec, h in (("metric", S.g), ("f", S.f), ("Q", S.Q)):
        lines.append(f"[{sec}]")
        lines += rows(h.nodes)
        lines.append("")
    lines.append("[xi]")
    lines += rows([v.nodes for v in S.xi])
    lines += ["", "[eta]"]
    lines += rows([w.nodes for w in S.eta])
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"^\s*\[\s*([A-Za-z]+)\s*\]\s*$")


def _strip_comment(line: str) -> str:
    k = line.find("#")
    return line if k < 0 else line[:k]


def parse_bundle_text(text: str, strategy: Strategy = Strategy.EXACT, name: str = "") -> StructureBundle:
    sections: dict[str, list[tuple[int, int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = _HEADER.match(line)
        if m:
            current = m.group(1)
            if current not in SECTIONS:
                raise BundleParseError(f"unknown section [{current}]", lineno, line.index("[") + 1)
            if current in sections:
                raise BundleParseError(f"duplicate section [{current}]", lineno, 1)
            sections[current] = []
            continue
        if current is None:
            raise BundleParseError("content before the first section header", lineno, 1)
        col = len(line) - len(line.lstrip()) + 1
        sections[current].append((lineno, col, line.rstrip()))
    if not sections:
        raise BundleParseError("empty bundle description")
    missing = [s for s in SECTIONS if s not in sections]
    if missing:
        raise BundleParseError("missing section(s): " + ", ".join(f"[{s}]" for s in missing))

    chart_kv = _parse_chart(sections["chart"])
    names = chart_kv["coordinates"]
    dim = len(names)
    n, p = chart_kv["n"], chart_kv["p"]
    if dim != 2 * n + p:
        raise BundleParseError(f"{dim} coordinates but 2n + p = {2 * n + p}")
    chart = Chart(dim, tuple(names), chart_kv["box"], chart_kv.get("samples", 200), chart_kv.get("seed", 1))

    def matrix(sec, nrows):
        rows = sections[sec]
        if len(rows) != nrows:
            line = rows[-1][0] if rows else 0
            raise BundleParseError(f"[{sec}] has {len(rows)} rows, expected {nrows}", line, 1)
        return [_parse_row(r, names, sec) for r in rows]

    xi = matrix("xi", len(sections["xi"]))
    eta = matrix("eta", len(sections["eta"]))
    if len(xi) != len(eta):
        raise BundleParseError(f"{len(xi)} rows in [xi] but {len(eta)} rows in [eta]")
    if len(xi) != p:
        raise BundleParseError(f"p = {p} but [xi] has {len(xi)} rows")
    return build_bundle(
        chart,
        matrix("metric", dim),
        matrix("f", dim),
        matrix("Q", dim),
        xi,
        eta,
        n,
        p,
        signature=chart_kv.get("signature"),
        name=name,
        strategy=strategy,
    )


def _parse_chart(rows):
    out: dict = {}
    for lineno, col, line in rows:
        if "=" not in line:
            raise BundleParseError("expected key = value", lineno, col)
        key, _, val = line.partition("=")
        key = key.strip()
        vcol = line.index("=") + 2
        try:
            if key == "coordinates":
                out[key] = val.split()
                if not out[key]:
                    raise ValueError("no coordinate names")
            elif key == "box":
                parts = [seg.split() for seg in val.split(",")]
                if any(len(s) != 2 for s in parts):
                    raise ValueError("each interval needs two bounds")
                out[key] = [(float(a), float(b)) for a, b in parts]
            elif key in ("n", "p", "samples", "seed"):
                out[key] = int(val)
            elif key == "signature":
                sig = [int(v) for v in val.split()]
                if len(sig) != 2:
                    raise ValueError("signature needs two integers")
                out[key] = tuple(sig)
            else:
                raise BundleParseError(f"unknown chart key {key!r}", lineno, col)
        except ValueError as e:
            raise BundleParseError(f"bad value for {key}: {e}", lineno, vcol) from None
    for key in ("coordinates", "box", "n", "p"):
        if key not in out:
            raise BundleParseError(f"[chart] is missing {key!r}")
    if len(out["box"]) != len(out["coordinates"]):
        raise BundleParseError(f"{len(out['coordinates'])} coordinates but {len(out['box'])} box intervals")
    return out


def _parse_row(row, names, sec):
    lineno, _, line = row
    out = []
    pos = 0
    for piece in line.split(","):
        try:
            out.append(ex.parse(piece, names, line=lineno, col=pos + 1))
        except ex.ExprSyntaxError as e:
            raise BundleParseError(f"[{sec}] {str(e).split(': ', 1)[1]}", e.line, e.col) from None
        pos += len(piece) + 1
    if len(out) != len(names):
        raise BundleParseError(f"[{sec}] row has {len(out)} entries, expected {len(names)}", lineno, 1)
    return out


def parse_bundle_file(path, strategy: Strategy = Strategy.EXACT) -> StructureBundle:
    p = Path(path)
    return parse_bundle_text(p.read_text(), strategy=strategy, name=p.stem)
