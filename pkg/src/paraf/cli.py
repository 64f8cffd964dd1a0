"""Command-line front end: ``paraf --structure KEY [...]`` or ``paraf --bundle FILE``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from paraf import catalog
from paraf import identities as ids
from paraf.bundlefile import parse_bundle_file
from paraf.chart import Strategy
from paraf.classify import PREDICATES, Analysis
from paraf.errors import GeometryError
from paraf.report import SUITES, build_report, to_markdown
from paraf.structure import AXIOM_IDS

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

KNOWN_CHECKS = frozenset(AXIOM_IDS) | set(ids.ALL) | set(PREDICATES) | {"kernel.flat_leaves"}


@dataclass
class RunConfig:
    structure: Optional[str] = None
    bundle: Optional[str] = None
    params: dict = field(default_factory=dict)
    samples: int = 200
    seed: int = 1
    tol: dict = field(default_factory=dict)
    checks: tuple = SUITES
    format: str = "json"
    out: Optional[str] = None
    derivatives: str = "exact"

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d["checks"] = list(self.checks)
        return d


class ConfigError(ValueError):
    pass


def _key_value(text: str, what: str) -> tuple[str, str]:
    k, sep, v = text.partition("=")
    if not sep or not k.strip() or not v.strip():
        raise argparse.ArgumentTypeError(f"{what} must look like key=value, got {text!r}")
    return k.strip(), v.strip()


def _checks(text: str) -> tuple:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("empty --checks")
    if "all" in items:
        return SUITES
    bad = [t for t in items if t not in SUITES]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown suite(s) {bad}; choose from {list(SUITES)} or all")
    return tuple(s for s in SUITES if s in items)


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="paraf", description="Validate and classify weak para-f-structures.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--structure", help=f"catalog key: {', '.join(catalog.VALID_KEYS)}")
    src.add_argument("--bundle", help="path to a bundle description file")
    ap.add_argument("--param", action="append", default=[], metavar="K=V",
                    type=lambda t: _key_value(t, "--param"))
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--tol", action="append", default=[], metavar="CHECK=VAL",
                    type=lambda t: _key_value(t, "--tol"))
    ap.add_argument("--checks", type=_checks, default=SUITES, help="comma list of axioms,tensors,classify,theorems or all")
    ap.add_argument("--format", choices=("json", "markdown"), default="json")
    ap.add_argument("--out")
    ap.add_argument("--derivatives", choices=[s.value for s in Strategy], default="exact")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    tol = {}
    for k, v in ns.tol:
        if k not in KNOWN_CHECKS:
            raise ConfigError(f"--tol: unknown check id {k!r}")
        try:
            val = float(v)
        except ValueError:
            raise ConfigError(f"--tol {k}: {v!r} is not a number") from None
        if not val > 0:
            raise ConfigError(f"--tol {k}: tolerance must be positive")
        tol[k] = val
    if ns.samples < 1:
        raise ConfigError("--samples must be positive")
    if ns.bundle and ns.param:
        raise ConfigError("--param applies to catalog structures only")
    return RunConfig(
        structure=ns.structure,
        bundle=ns.bundle,
        params=dict(ns.param),
        samples=ns.samples,
        seed=ns.seed,
        tol=dict(sorted(tol.items())),
        checks=ns.checks,
        format=ns.format,
        out=ns.out,
        derivatives=ns.derivatives,
    )


def load_bundle(cfg: RunConfig):
    strategy = Strategy(cfg.derivatives)
    if cfg.structure is not None:
        S = catalog.make(cfg.structure, cfg.params, strategy=strategy)
    else:
        S = parse_bundle_file(cfg.bundle, strategy=strategy)
    return S.with_sampling(cfg.samples, cfg.seed)


def run(cfg: RunConfig):
    """Build the report; raises GeometryError / OSError on configuration problems."""
    S = load_bundle(cfg)
    ctx = Analysis(S, tol_overrides=cfg.tol)
    report = build_report(ctx, cfg.checks, cfg.echo())
    return report, (EXIT_OK if report.ok else EXIT_FAIL)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = make_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:  # argparse exits 2 on bad usage, 0 on --help
        return int(e.code or 0)
    try:
        cfg = config_from_args(ns)
        report, code = run(cfg)
    except (ConfigError, GeometryError, OSError) as e:
        print(f"paraf: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    text = report.to_json() if cfg.format == "json" else to_markdown(report)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
