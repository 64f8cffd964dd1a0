"""Sweep the Q perturbation size on the para-Sasakian entry.

For each eps prints the A3 residual at the center, the hand value eps*max|f|,
the class (or "refused" when structure axioms fail) and the rigidity status.
"""

import argparse
from dataclasses import dataclass

import numpy as np

from paraf import catalog
from paraf.chart import eval_field
from paraf.classify import check_rigidity, classify
from paraf.errors import AxiomError
from paraf.structure import axiom_residuals


@dataclass
class Config:
    eps_max: float = 0.2
    steps: int = 9
    samples: int = 50


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps-max", type=float, default=Config.eps_max)
    ap.add_argument("--steps", type=int, default=Config.steps)
    ap.add_argument("--samples", type=int, default=Config.samples)
    a = ap.parse_args()
    cfg = Config(a.eps_max, a.steps, a.samples)

    S = catalog.make_para_sasakian_r3()
    fmax = float(np.max(np.abs(eval_field(S.f, S.chart.center))))
    print(f"{'eps':>8} {'A3':>10} {'eps*|f|':>10}  class               rigidity")
    for eps in np.linspace(0.0, cfg.eps_max, cfg.steps):
        P = catalog.perturb_Q(S, float(eps)).with_sampling(cfg.samples)
        a3 = axiom_residuals(P, P.chart.center)["A3"][0]
        try:
            cls = classify(P).class_id
        except AxiomError:
            cls = "refused"
        rig = check_rigidity(P)
        print(f"{eps:8.4f} {a3:10.3e} {eps * fmax:10.3e}  {cls:18s}  {rig.status} {rig.verdict or ''}")


if __name__ == "__main__":
    main()
