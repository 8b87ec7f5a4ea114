"""Regenerate the shipped 16-spin antiferromagnetic fixture.

All couplings positive on a random graph, fields of mixed sign.  Seeded, so
the output is byte-identical from run to run.
"""
import sys

import numpy as np

from eltip.formats import serialize_instance
from eltip.ising import IsingProblem

SEED = 35
N = 16
DENSITY = 0.35


def build(seed=SEED):
    rng = np.random.default_rng(seed)
    couplings = {}
    for i in range(N):
        for j in range(i + 1, N):
            if rng.random() < DENSITY:
                couplings[(i, j)] = round(float(rng.uniform(0.1, 1.0)), 3)
    fields = tuple(round(float(v), 3) for v in rng.uniform(-1.0, 1.0, N))
    return IsingProblem(N, couplings, fields)


if __name__ == "__main__":
    meta = {
        "name": "afm16",
        "description": "16-spin antiferromagnetic instance: every J_ij > 0, fields of both signs",
        "provenance": f"repro/make_afm16.py seed={SEED} density={DENSITY}",
    }
    sys.stdout.write(serialize_instance(build(), meta))
