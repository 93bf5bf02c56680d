"""Seeded Monte Carlo harnesses that turn the whp statements into measured rates.

Per-trial seeds come from ``numpy.random.SeedSequence(master_seed,
spawn_key=(trial,))``, so a trial's outcome depends only on (config, trial index)
and the worker count only changes wall-clock time.  Reports carry no timings
unless asked for, which keeps them byte-identical across reruns.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from rigidcore.canonical import canonical_label
from rigidcore.core import two_core
from rigidcore.cycles import census_compatible, log_bound
from rigidcore.errors import Undecided
from rigidcore.graph import gnp_sample, induced_subgraph
from rigidcore.oracle import DEFAULT_BUDGET, are_isomorphic, automorphism_group
from rigidcore.reconstruction import deck, reconstruct_from_deck

EXPERIMENTS = ("rigidity", "canon", "core-size", "recon", "census")


@dataclass
class ExperimentConfig:
    name: str
    n: int
    p: float | None = None
    c: float | None = None
    p_mode: str = "explicit"        # explicit | c_over_n | c_logn_over_n
    trials: int = 1
    seed: int = 0
    workers: int = 1
    budget: int = DEFAULT_BUDGET
    max_k: int | None = None        # census only; default ceil(ln n)
    pairs: int = 10**6              # census only
    min_rate: float | None = None   # verdict threshold on the pass rate; None: no failures allowed
    timings: bool = False

    def __post_init__(self):
        if self.name not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.name!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0.0 <= self.edge_prob() <= 1.0:
            raise ValueError(f"derived p={self.edge_prob()} outside [0, 1]")

    def edge_prob(self) -> float:
        if self.p_mode == "explicit":
            if self.p is None:
                raise ValueError("explicit p_mode needs p")
            return float(self.p)
        if self.c is None:
            raise ValueError(f"{self.p_mode} needs c")
        if self.p_mode == "c_over_n":
            return self.c / self.n
        if self.p_mode == "c_logn_over_n":
            return self.c * math.log(self.n) / self.n
        raise ValueError(f"unknown p_mode {self.p_mode!r}")

    def public(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        d.pop("timings")
        d["p_derived"] = self.edge_prob()
        return d


def trial_seed(master: int, trial: int) -> int:
    state = np.random.SeedSequence(master, spawn_key=(trial,)).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def _rigidity(cfg: ExperimentConfig, seed: int) -> dict:
    G = gnp_sample(cfg.n, cfg.edge_prob(), seed)
    H, _ = induced_subgraph(G, two_core(G))
    rec = {"core_size": H.n}
    try:
        group = automorphism_group(H, cfg.budget)
    except Undecided:
        rec["outcome"] = "undecided"
        return rec
    rec["aut_order"] = str(group.order)
    rec["outcome"] = "pass" if group.order == 1 else "fail"
    # independent route: a successful canonical labelling of the core has distinct,
    # isomorphism-invariant labels, which forces the core to be rigid
    canon = canonical_label(H)
    rec["canon_ok"] = canon.ok
    rec["contradiction"] = canon.ok and group.order != 1
    return rec


def _canon(cfg: ExperimentConfig, seed: int) -> dict:
    G = gnp_sample(cfg.n, cfg.edge_prob(), seed)
    rng = np.random.Generator(np.random.PCG64(seed ^ 0x9E3779B97F4A7C15))
    perm = rng.permutation(G.n).tolist()
    a = canonical_label(G)
    b = canonical_label(G.relabel(perm))
    mismatch = a.ok != b.ok or (a.ok and a.form != b.form)
    if not a.ok and not b.ok:
        mismatch = a.violation.prop != b.violation.prop
    return {
        "canon_ok": a.ok,
        "violation": None if a.ok else a.violation.prop,
        "outcome": "fail" if mismatch else "pass",
    }


def _core_size(cfg: ExperimentConfig, seed: int) -> dict:
    G = gnp_sample(cfg.n, cfg.edge_prob(), seed)
    outside = G.n - len(two_core(G))
    return {"outside_core": outside, "outcome": "pass" if outside < cfg.n / 10 else "fail"}


def _recon(cfg: ExperimentConfig, seed: int) -> dict:
    G = gnp_sample(cfg.n, cfg.edge_prob(), seed)
    try:
        d = deck(G, cfg.budget)
        res = reconstruct_from_deck(d, budget=cfg.budget)
        iso = res.ok and are_isomorphic(res.graph, G, cfg.budget)
    except Undecided:
        return {"outcome": "undecided"}
    rec = {"reconstructed": res.ok, "isomorphic": iso, "failed_step": res.step}
    if res.ok:
        rec["deck_equal"] = deck(res.graph, cfg.budget) == d
    rec["outcome"] = "pass" if iso else "fail"
    return rec


def _census(cfg: ExperimentConfig, seed: int) -> dict:
    G = gnp_sample(cfg.n, cfg.edge_prob(), seed)
    max_k = cfg.max_k or max(3, log_bound(cfg.n))
    rep = census_compatible(G, max_k, cfg.pairs, seed, oracle_budget=cfg.budget)
    rec = rep.to_json()
    rec["outcome"] = "undecided" if rep.undecided else ("pass" if rep.compatible == 0 else "fail")
    return rec


RUNNERS = {"rigidity": _rigidity, "canon": _canon, "core-size": _core_size,
           "recon": _recon, "census": _census}


def _run_trial(args: tuple[ExperimentConfig, int]) -> dict:
    cfg, i = args
    seed = trial_seed(cfg.seed, i)
    start = time.perf_counter()
    rec = {"trial": i, "seed": seed, **RUNNERS[cfg.name](cfg, seed)}
    if cfg.timings:
        rec["seconds"] = round(time.perf_counter() - start, 4)
    return rec


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    phat = k / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def in_theorem_range(cfg: ExperimentConfig) -> bool:
    """Heuristic finite-n reading of each statement's range of p."""
    n, p = cfg.n, cfg.edge_prob()
    if cfg.name in ("rigidity", "canon", "census"):
        return n * p > 1 and p <= n ** -0.5
    if cfg.name == "core-size":
        return n * p >= 4
    return (0.9 * math.log(n) / n) <= p <= (2.6 * math.log(n) / n)


def _verdict(cfg: ExperimentConfig, counts: dict) -> str:
    # outside the statement's range of p rates are reported, not judged; canonicality
    # is absolute and judged everywhere
    if cfg.name != "canon" and not in_theorem_range(cfg):
        return "not judged"
    if cfg.min_rate is None or cfg.name == "canon":
        return "pass" if counts["fail"] == 0 else "fail"
    decided = counts["pass"] + counts["fail"]
    return "pass" if decided and counts["pass"] / decided >= cfg.min_rate else "fail"


def aggregate(cfg: ExperimentConfig, records: list[dict]) -> dict:
    counts = {k: sum(1 for r in records if r["outcome"] == k) for k in ("pass", "fail", "undecided")}
    decided = counts["pass"] + counts["fail"]
    lo, hi = wilson_interval(counts["pass"], decided)
    agg = {
        **counts,
        "trials": len(records),
        "pass_rate": counts["pass"] / decided if decided else None,
        "ci95_low": lo,
        "ci95_high": hi,
        "in_range": in_theorem_range(cfg),
        "verdict": _verdict(cfg, counts),
    }
    if cfg.name == "rigidity":
        agg["contradictions"] = sum(1 for r in records if r.get("contradiction"))
        agg["canon_core_ok"] = sum(1 for r in records if r.get("canon_ok"))
    elif cfg.name == "canon":
        agg["mismatches"] = counts["fail"]
        agg["success_rate"] = sum(1 for r in records if r["canon_ok"]) / len(records)
    elif cfg.name == "core-size":
        sizes = sorted(r["outside_core"] for r in records)
        agg["median_outside_core"] = float(np.median(sizes))
        agg["max_outside_core"] = sizes[-1]
        n = cfg.n
        thresholds = {"n_over_e_np": n / math.exp(n * cfg.edge_prob()), "n_over_20": n / 20, "n_over_10": n / 10}
        agg["tail_freq"] = {k: sum(1 for s in sizes if s >= x) / len(sizes) for k, x in thresholds.items()}
    elif cfg.name == "recon":
        agg["deck_mismatch"] = sum(1 for r in records if r.get("deck_equal") is False)
        agg["reconstructed"] = sum(1 for r in records if r.get("reconstructed"))
    elif cfg.name == "census":
        for f in ("sampled", "type_i", "type_ii", "z_matched", "compatible"):
            agg[f] = sum(r.get(f, 0) for r in records)
        agg["trials_with_compatible"] = sum(1 for r in records if r.get("compatible", 0) > 0)
    return agg


def run_experiment(cfg: ExperimentConfig) -> dict:
    jobs = [(cfg, i) for i in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_run_trial, jobs, chunksize=1))
    else:
        records = [_run_trial(j) for j in jobs]
    return {"config": cfg.public(), "aggregate": aggregate(cfg, records), "trials": records}


def run_rigidity(cfg: ExperimentConfig) -> dict:
    return run_experiment(ExperimentConfig(**{**asdict(cfg), "name": "rigidity"}))


def run_canon_invariance(cfg: ExperimentConfig) -> dict:
    return run_experiment(ExperimentConfig(**{**asdict(cfg), "name": "canon"}))


def run_core_size(cfg: ExperimentConfig) -> dict:
    return run_experiment(ExperimentConfig(**{**asdict(cfg), "name": "core-size"}))


def run_recon(cfg: ExperimentConfig) -> dict:
    return run_experiment(ExperimentConfig(**{**asdict(cfg), "name": "recon"}))


def run_census(cfg: ExperimentConfig) -> dict:
    return run_experiment(ExperimentConfig(**{**asdict(cfg), "name": "census"}))


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_csv(report: dict) -> str:
    """One header row and one row of aggregate fields (nested fields flattened with '.')."""
    flat = {}
    for k, v in report["aggregate"].items():
        if isinstance(v, dict):
            for kk, vv in v.items():
                flat[f"{k}.{kk}"] = vv
        else:
            flat[k] = v
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=sorted(flat), lineterminator="\n")
    writer.writeheader()
    writer.writerow(flat)
    return buf.getvalue()
