"""Run the verification suite over several universes and write a JSONL report.

    python scripts/run_verification.py --universes z2,z3,z4 --trials 100 --out report.jsonl
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass

from gseq.sequences import GroupModel
from gseq.verifier import replay, run_suite, summarize


@dataclass
class VerifyConfig:
    universes: tuple = ("z2", "z3", "z4")
    trials: int = 100
    seed: int = 7
    out: str = "verification.jsonl"


def main(cfg: VerifyConfig) -> int:
    start = time.perf_counter()
    reports = []
    for name in cfg.universes:
        reports += run_suite(GroupModel.from_name(name), trials=cfg.trials, seed=cfg.seed)
    elapsed = time.perf_counter() - start
    summary = summarize(reports)
    with open(cfg.out, "w") as fh:
        for r in reports:
            fh.write(r.to_line() + "\n")
    replayed = [replay(r.to_json()) for r in reports if r.witness is not None]
    print(json.dumps({"config": asdict(cfg), "seconds": round(elapsed, 2),
                      "counts": summary.counts, "passed": summary.passed,
                      "unfalsified": summary.unfalsified, "findings": summary.findings,
                      "witnesses_replayed": f"{sum(replayed)}/{len(replayed)}"}, indent=2))
    return 0 if summary.passed else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--universes", default="z2,z3,z4")
    ap.add_argument("--trials", type=int, default=VerifyConfig.trials)
    ap.add_argument("--seed", type=int, default=VerifyConfig.seed)
    ap.add_argument("--out", default=VerifyConfig.out)
    a = ap.parse_args()
    raise SystemExit(main(VerifyConfig(tuple(a.universes.split(",")), a.trials, a.seed, a.out)))
