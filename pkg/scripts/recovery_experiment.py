"""Wordfish recovery on synthetic corpora across sizes and seeds.

Prints one TSV row per (n_docs, n_terms) cell: mean and minimum |r| between
estimated and generating positions, mean iterations, and mean fit time.

    python3 scripts/recovery_experiment.py [--reps 10]
"""

import argparse
import time
import warnings

import numpy as np

from hansard_scale.errors import NoConvergenceWarning
from hansard_scale.fixtures import SyntheticSpec, generate_wordfish_corpus
from hansard_scale.scaling import wordfish_fit

SIZES = [(10, 50), (20, 100), (40, 200), (20, 500)]


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--psi-mean", type=float, default=1.0)
    args = ap.parse_args()
    print("n_docs\tn_terms\tmean_abs_r\tmin_abs_r\tmean_iter\tmean_seconds\tnot_converged")
    for n, k in SIZES:
        rs, iters, secs, bad = [], [], [], 0
        for seed in range(args.reps):
            m, truth = generate_wordfish_corpus(SyntheticSpec(n_docs=n, n_terms=k, psi_mean=args.psi_mean, seed=seed))
            t0 = time.perf_counter()
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NoConvergenceWarning)
                fit = wordfish_fit(m, (0, n - 1))
            secs.append(time.perf_counter() - t0)
            iters.append(fit.iterations)
            bad += not fit.converged
            rs.append(abs(np.corrcoef(fit.omega, truth.omega)[0, 1]))
        print(f"{n}\t{k}\t{np.mean(rs):.4f}\t{np.min(rs):.4f}\t{np.mean(iters):.1f}\t{np.mean(secs):.3f}\t{bad}")


if __name__ == "__main__":
    main()
