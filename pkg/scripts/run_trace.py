#!/usr/bin/env python3
"""Integrate abnormal extremal trajectories for the n=6 model over several
seeds and print the class trace and corank summary of each run."""

import argparse

from rank2dist.extremals import endpoint_errors, integrate_char, nu_along
from rank2dist.kernel import Q
from rank2dist.models import monge_model
from rank2dist.symplectic import fiber_sample


def run(n, T, steps, seeds):
    dist = monge_model(n)
    q = [Q(0)] * n
    for seed in seeds:
        s = fiber_sample(dist, q, seed=seed)
        traj = integrate_char(dist, s, T, steps)
        rep = nu_along(dist, traj, s)
        print("seed %d: max h-residual %.2e, nu trace %s, corank bound %d, "
              "claim %s" % (seed, max(traj.h_residuals), rep.nu_trace,
                            rep.corank_bound, rep.corank_claim))
    s = fiber_sample(dist, q, seed=seeds[0])
    errs = endpoint_errors(dist, s, T, [steps // 4, steps // 2, steps])
    print("endpoint errors over step halvings:",
          ["%.3e" % e for e in errs],
          "ratios", ["%.1f" % (a / b) for a, b in zip(errs, errs[1:])])


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--T", type=float, default=0.5)
    ap.add_argument("--steps", type=int, default=500)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    a = ap.parse_args()
    run(a.n, a.T, a.steps, a.seeds)
