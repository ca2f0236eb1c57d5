#!/usr/bin/env python3
"""Stabilized polynomial symmetry algebras for the n = 5, 6, 7 models:
dimension, stabilization degree, and the nilpotent-ideal witness."""

from rank2dist.kernel import Q
from rank2dist.models import monge_model
from rank2dist.symmetry import (bracket_close_check, nilradical_witness_dim,
                                stabilized_symmetry_basis)

if __name__ == "__main__":
    for n in (5, 6, 7):
        dist = monge_model(n)
        out = stabilized_symmetry_basis(dist)
        closed = bracket_close_check(dist, out)
        nil = nilradical_witness_dim(dist, out)
        print("n=%d: dim %d (stable at degree %d), bracket-closed %s, "
              "nilpotent ideal [g, rad] dim %d"
              % (n, out.dim, out.stable_degree, closed, nil))
