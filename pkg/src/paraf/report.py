"""Assemble check suites into a report and render it as JSON or markdown."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from paraf import __version__
from paraf import identities as ids
from paraf.classify import Analysis, TheoremReport, run_theorems
from paraf.errors import AxiomError
from paraf.structure import AXIOM_NAMES, CheckOutcome, outcome

SUITES = ("axioms", "tensors", "classify", "theorems")


@dataclass
class Report:
    config: dict
    results: list[dict]
    classification: Optional[dict]
    summary: dict
    version: str = __version__
    theorems: list[TheoremReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "results": self.results,
            "classification": self.classification,
            "summary": self.summary,
            "version": self.version,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _status(o: CheckOutcome) -> str:
    return "pass" if o.passed else "fail"


def _outcome_row(o: CheckOutcome) -> dict:
    d = o.as_dict()
    d["status"] = _status(o)
    return d


def tensor_outcomes(ctx: Analysis) -> list[CheckOutcome]:
    """Every ungated identity at every sample point."""
    S = ctx.S
    out = []
    for geo in ctx.geometries:
        for iid, it in ids.GENERAL.items():
            r, s = it(geo)
            out.append(outcome("tensors", iid, geo.pt.index, r, s, ctx.tol_overrides.get(iid, S.tol)))
    return out


def axiom_outcomes(ctx: Analysis) -> list[CheckOutcome]:
    if not ctx.tol_overrides:
        return ctx.axiom_outcomes
    return [
        outcome(o.suite, o.check_id, o.sample_index, o.residual, o.scale,
                ctx.tol_overrides.get(o.check_id, o.tol), o.note)
        for o in ctx.axiom_outcomes
    ]


def _classify_rows(ctx: Analysis) -> tuple[list[dict], Optional[dict]]:
    try:
        v = ctx.verdict
    except AxiomError as e:
        row = {"suite": "classify", "check": "classification", "sample": -1, "status": "fail",
               "residual": None, "scale": None, "tol": None, "passed": False, "note": str(e)}
        return [row], {"class": None, "error": str(e), "failed_axioms": list(e.failed)}
    rows = [{"suite": "classify", "check": "classification", "sample": -1, "status": "pass",
             "residual": None, "scale": None, "tol": None, "passed": True, "note": v.class_id}]
    for pid, m in v.residuals.items():
        rows.append({"suite": "classify", "check": f"predicate.{pid}", "sample": -1, "status": "info",
                     "residual": m.residual, "scale": None, "tol": m.tol, "passed": m.passed,
                     "note": f"normalized {m.normalized:.3e}"})
    return rows, v.as_dict()


def _theorem_row(t: TheoremReport) -> dict:
    d = t.as_dict()
    worst = [c.normalized for c in t.conclusions if c.normalized is not None]
    return {"suite": "theorems", "check": t.theorem_id, "sample": -1, "status": t.status,
            "residual": max(worst) if worst else None, "passed": t.status != "fail", "report": d}


def build_report(ctx: Analysis, checks: Sequence[str], config: dict) -> Report:
    rows: list[dict] = []
    classification = None
    theorems: list[TheoremReport] = []
    if "axioms" in checks:
        rows += [_outcome_row(o) for o in axiom_outcomes(ctx)]
    if "tensors" in checks:
        rows += [_outcome_row(o) for o in tensor_outcomes(ctx)]
    if "classify" in checks or "theorems" in checks:
        crow, classification = _classify_rows(ctx)
        if "classify" in checks:
            rows += crow
    if "theorems" in checks:
        theorems = run_theorems(ctx)
        rows += [_theorem_row(t) for t in theorems]
    rows.sort(key=lambda r: (r["suite"], r["check"], r["sample"]))
    return Report(config, rows, classification, summarize(rows), theorems=theorems)


def summarize(rows: Sequence[dict]) -> dict:
    counts = {"pass": 0, "fail": 0, "vacuous": 0, "info": 0}
    worst: dict[str, Optional[float]] = {}
    for r in rows:
        counts[r["status"]] += 1
        res = r.get("residual")
        if r["status"] != "info" and res is not None:
            worst[r["suite"]] = max(worst.get(r["suite"]) or 0.0, float(res))
    return {**counts, "worst_residual": dict(sorted(worst.items()))}


# -- markdown ---------------------------------------------------------------------------


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.2e}"


def _aggregate(rows, key):
    """Per check: (worst residual, n pass, n fail)."""
    agg: dict[str, list] = {}
    for r in rows:
        a = agg.setdefault(r[key], [0.0, 0, 0])
        a[0] = max(a[0], r["residual"] or 0.0)
        a[1 if r["status"] == "pass" else 2] += 1
    return agg


def to_markdown(report: Report) -> str:
    cfg = report.config
    lines = [f"# Structure report: {cfg.get('structure') or cfg.get('bundle')}", ""]
    lines.append(f"samples {cfg['samples']}, seed {cfg['seed']}, derivatives {cfg['derivatives']}, "
                 f"engine {report.version}")
    lines.append("")
    by_suite: dict[str, list[dict]] = {}
    for r in report.results:
        by_suite.setdefault(r["suite"], []).append(r)

    if "axioms" in by_suite:
        lines += ["## Axioms", "", "| id | condition | worst residual | pass | fail |", "|---|---|---|---|---|"]
        for cid, (w, p, f) in sorted(_aggregate(by_suite["axioms"], "check").items()):
            lines.append(f"| {cid} | {AXIOM_NAMES.get(cid, '')} | {_fmt(w)} | {p} | {f} |")
        lines.append("")

    if "tensors" in by_suite:
        lines += ["## Tensor identities", ""]
        agg = _aggregate(by_suite["tensors"], "check")
        for fam in ids.FAMILY_ORDER:
            members = [i for i in ids.GENERAL.values() if i.family == fam]
            if not members:
                continue
            lines += [f"### {fam}", "", "| check | worst residual | pass | fail |", "|---|---|---|---|"]
            for it in members:
                w, p, f = agg.get(it.id, (0.0, 0, 0))
                lines.append(f"| {it.id} | {_fmt(w)} | {p} | {f} |")
            lines.append("")

    if report.classification is not None:
        c = report.classification
        lines += ["## Classification", ""]
        if c.get("class") is None:
            lines += [f"refused: {c.get('error')}", ""]
        else:
            lines.append(f"class: **{c['class']}** (holds: {', '.join(c['classes'])})")
            lines += ["", "| predicate | max residual | holds |", "|---|---|---|"]
            for pid, m in c["predicates"].items():
                lines.append(f"| {pid} | {_fmt(m['residual'])} | {'yes' if m['passed'] else 'no'} |")
            for n in c["notes"]:
                lines.append(f"\nnote: {n}")
            lines.append("")

    if report.theorems:
        lines += ["## Theorem reports", ""]
        for t in report.theorems:
            lines.append(f"### {t.theorem_id}: {t.status}" + (f" (verdict {t.verdict})" if t.verdict else ""))
            lines.append("")
            hyp = ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in sorted(t.hypotheses.items()))
            lines.append(f"hypotheses: {hyp}")
            lines += ["", "| conclusion | status | normalized residual |", "|---|---|---|"]
            for c in t.conclusions:
                lines.append(f"| {c.id} | {c.status} | {_fmt(c.normalized)} |")
            for k, v in sorted(t.measurements.items()):
                lines.append(f"\nmeasured {k} = {v:.3e}")
            for fl in t.flags:
                lines.append(f"\nflag: {fl}")
            lines.append("")

    s = report.summary
    lines += ["## Summary", "", f"pass {s['pass']}, fail {s['fail']}, vacuous {s['vacuous']}", ""]
    for suite, w in s["worst_residual"].items():
        lines.append(f"- worst {suite} residual: {_fmt(w)}")
    return "\n".join(lines) + "\n"
