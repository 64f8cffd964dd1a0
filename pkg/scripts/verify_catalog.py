"""Run every check suite on every catalog entry and print a one-line summary each."""

import argparse
import json
from dataclasses import dataclass

from paraf import catalog
from paraf.cli import RunConfig, run


@dataclass
class Config:
    samples: int = 200
    seed: int = 1
    derivatives: str = "exact"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=Config.samples)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--derivatives", default=Config.derivatives, choices=["exact", "dual", "fd"])
    cfg = Config(**vars(ap.parse_args()))
    for key in catalog.VALID_KEYS:
        report, code = run(RunConfig(structure=key, samples=cfg.samples, seed=cfg.seed,
                                     derivatives=cfg.derivatives))
        summary = json.dumps(report.summary, sort_keys=True)
        print(f"{key:22s} exit={code} {summary}")


if __name__ == "__main__":
    main()
