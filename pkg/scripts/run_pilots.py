"""Regenerate the pilot baselines under tests/baselines/.

Pilots use master seeds disjoint from the acceptance suite's, so the acceptance
runs are out-of-sample checks against these numbers.

    python3 scripts/run_pilots.py [--only NAME ...] [--workers W]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from rigidcore.experiments import ExperimentConfig, report_json, run_experiment

OUT = Path(__file__).resolve().parent.parent / "tests" / "baselines"

PILOTS = {
    "rigidity": dict(name="rigidity", n=2000, c=8, p_mode="c_over_n", trials=200, seed=1001),
    "canon": dict(name="canon", n=2000, c=8, p_mode="c_over_n", trials=50, seed=1002),
    "recon": dict(name="recon", n=80, c=1.8, p_mode="c_logn_over_n", trials=50, seed=1004),
    "census": dict(name="census", n=500, c=10, p_mode="c_over_n", trials=20, seed=1005, pairs=10**6),
}
CORE_BATCHES = 20
CORE_SEED0 = 2000


def core_size_pilot(workers: int) -> dict:
    """Median |R~| of CORE_BATCHES independent 100-trial batches; the acceptance median must land in [min, max]."""
    medians, maxima = [], []
    for b in range(CORE_BATCHES):
        cfg = ExperimentConfig(name="core-size", n=3000, c=8, p_mode="c_over_n", trials=100,
                               seed=CORE_SEED0 + b, workers=workers)
        agg = run_experiment(cfg)["aggregate"]
        medians.append(agg["median_outside_core"])
        maxima.append(agg["max_outside_core"])
    return {"n": 3000, "c": 8, "trials_per_batch": 100, "batches": CORE_BATCHES,
            "seeds": [CORE_SEED0 + b for b in range(CORE_BATCHES)],
            "batch_medians": medians, "batch_maxima": maxima,
            "median_envelope": [min(medians), max(medians)]}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", nargs="*")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    OUT.mkdir(parents=True, exist_ok=True)
    names = args.only or [*PILOTS, "core-size"]
    for name in names:
        if name == "core-size":
            text = json.dumps(core_size_pilot(args.workers), indent=2, sort_keys=True) + "\n"
        else:
            text = report_json(run_experiment(ExperimentConfig(**PILOTS[name], workers=args.workers)))
        (OUT / f"{name}.json").write_text(text)
        print(f"wrote {name}.json")


if __name__ == "__main__":
    main()
