"""Script to run several calibration studies after each other and store one CSV table per study.

Example::

    python scripts/run_studies.py --studies unequal_variances correlation --seed 3 --workers -1 --log_dir logs/studies
"""

import argparse
import os
from datetime import datetime

from randomization_inference import simlab
from randomization_inference.utils.io import dump_table

parser = argparse.ArgumentParser(description="Run calibration studies one after the other.")
parser.add_argument(
    "--studies", nargs="+", default=None, help="Study ids (see scripts/list_studies.py). Defaults to all."
)
parser.add_argument("--seed", type=int, default=None, help="Root seed of every study.")
parser.add_argument("--reps", type=int, default=None, help="Number of replications of every study.")
parser.add_argument("--workers", type=int, default=None, help="Number of worker processes (-1: all cores).")
parser.add_argument("--log_dir", type=str, default="logs/studies", help="Directory of the result tables.")
args_cli = parser.parse_args()


def main():
    studies = args_cli.studies or list(simlab.registry)
    log_dir = os.path.join(os.path.abspath(args_cli.log_dir), datetime.now().strftime("%Y-%m-%d_%H-%M-%S"))
    os.makedirs(log_dir, exist_ok=True)
    print(f"[INFO] Logging studies in directory: {log_dir}")
    for study_id in studies:
        print(f"[INFO] Running study: {study_id}")
        cfg = simlab.make_cfg(
            study_id, seed=args_cli.seed, reps=args_cli.reps, num_workers=args_cli.workers, progress=True
        )
        table = simlab.run_study(study_id, cfg)
        dump_table(table, os.path.join(log_dir, f"{study_id}.csv"))


if __name__ == "__main__":
    main()
