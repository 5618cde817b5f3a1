"""Long-running experiments behind the statistical acceptance criteria.

Results are cached under ``acceptance_runs/`` at the repository root and
reused while the build fingerprint is unchanged; interrupted runs resume.
Run this file directly to fill the cache ahead of the test session::

    python tests/acceptance_runs.py [library|c7|c8|c9 ...]
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

from pandemic_rhea.harness.common import AgentConfig, build_fingerprint
from pandemic_rhea.harness.config import ExperimentConfig, GameSource, RunSettings
from pandemic_rhea.harness.experiment import RecordsError, run_experiment
from pandemic_rhea.harness.setups import SetupLibrary, build_setup_library

CACHE = Path(__file__).resolve().parent.parent / "acceptance_runs"
JOBS = os.cpu_count() or 1

log = logging.getLogger("acceptance")

# desk-scale testbed: 10^3 candidates x 30 HPA trials, easiest 10%, 10 medoids
LIBRARY_PARAMS = dict(n_candidates=1000, trials=30, k=10, players=4, epidemics=4, seed=2024, roles="fixed")
TESTBED_TRIALS = 30


def library_path() -> Path:
    """Build (or reuse) the regenerated testbed library."""
    CACHE.mkdir(exist_ok=True)
    path = CACHE / "library.json"
    meta_path = CACHE / "library.meta.json"
    meta = {"build": build_fingerprint(), "params": LIBRARY_PARAMS}
    if path.exists() and meta_path.exists() and json.loads(meta_path.read_text()) == meta:
        return path

    def progress(i, n):
        if i % 50 == 0 or i == n:
            log.info("library: rated %d/%d candidates", i, n)

    lib = build_setup_library(**LIBRARY_PARAMS, jobs=JOBS, progress=progress)
    lib.save(path)
    meta_path.write_text(json.dumps(meta))
    return path


def library() -> SetupLibrary:
    return SetupLibrary.load(library_path())


def cached_run(name: str, config: ExperimentConfig) -> list[dict]:
    """Records of ``config``, resuming or replacing ``acceptance_runs/<name>.jsonl``."""
    CACHE.mkdir(exist_ok=True)
    out = CACHE / f"{name}.jsonl"

    def progress(i, n, rec):
        if i % 10 == 0 or i == n:
            log.info("%s: %d/%d games", name, i, n)

    try:
        return run_experiment(config, out=out, jobs=JOBS, resume=True, progress=progress)
    except RecordsError:
        log.info("%s: cache is from another build or config; replaying", name)
        return run_experiment(config, out=out, jobs=JOBS, overwrite=True, progress=progress)


def rhea(**overrides) -> AgentConfig:
    return AgentConfig(kind="rhea", **overrides)


# -- criterion 7: RHEA vs HPA on shared random 2-player easy setups

C7_GAME = GameSource(source="random", players=2, epidemics=4, roles="random", setups=100)
C7_RUN = RunSettings(trials=2, seed=7)


def c7_records() -> tuple[list[dict], list[dict]]:
    hpa = cached_run("c7_hpa", ExperimentConfig(C7_GAME, AgentConfig(kind="hpa"), C7_RUN))
    rh = cached_run("c7_rhea", ExperimentConfig(C7_GAME, rhea(), C7_RUN))
    return rh, hpa


# -- criteria 8 and 9: RHEA variants on the testbed medoids

def testbed_config(agent: AgentConfig) -> ExperimentConfig:
    game = GameSource(source="library", library=str(library_path()), subset="medoids")
    return ExperimentConfig(game, agent, RunSettings(trials=TESTBED_TRIALS, seed=8))


GRID = [(g, r) for g in (25, 100) for r in (1, 10)]


def c8_records() -> dict[tuple[int, int], list[dict]]:
    return {
        (g, r): cached_run(f"c8_g{g}_r{r}", testbed_config(rhea(generations=g, repetitions=r)))
        for g, r in GRID
    }


MUTATION_SCHEDULES = {"100-50": (1.0, 0.5), "100": (1.0, 1.0), "0": (0.0, 0.0)}


def c9_records() -> dict[str, list[dict]]:
    out = {}
    for label, (start, end) in MUTATION_SCHEDULES.items():
        if label == "100-50":
            # identical to the G=100, R=10 grid cell
            out[label] = cached_run("c8_g100_r10", testbed_config(rhea(generations=100, repetitions=10)))
        else:
            agent = rhea(generations=100, repetitions=10, mutation_start=start, mutation_end=end)
            out[label] = cached_run(f"c9_mr{label}", testbed_config(agent))
    return out


STAGES = {"library": library_path, "c7": c7_records, "c8": c8_records, "c9": c9_records}

if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    for stage in sys.argv[1:] or list(STAGES):
        log.info("stage %s", stage)
        STAGES[stage]()
    log.info("all stages done")
