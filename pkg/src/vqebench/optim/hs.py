"""Harmony search: memory consideration, pitch adjustment, random reset.

The pitch bandwidth starts at a fixed fraction of the box width and
decays exponentially against the FE budget so late improvisations can
refine; the worst stored harmony is replaced whenever a new one beats
it."""

from __future__ import annotations

import math

import numpy as np

from .base import Algorithm, register

_BW_FLOOR_FRACTION = 1e-6


def _drive_hs(run, rng, lo, hi, p):
    dim = lo.size
    memory_size = int(p["memory_size"])
    hmcr = float(p["consideration_rate"])
    par = float(p["pitch_rate"])
    bw0 = float(p["bandwidth"]) * (hi - lo)
    bw_decay = math.log(_BW_FLOOR_FRACTION / float(p["bandwidth"]))
    memory = rng.uniform(lo, hi, size=(memory_size, dim))
    fitness = np.array([run.eval(x) for x in memory])
    worst = int(np.argmax(fitness))
    while True:
        bw = bw0 * math.exp(bw_decay * run.fe_used / run.budget)
        harmony = np.empty(dim)
        for d in range(dim):
            if rng.random() < hmcr:
                harmony[d] = memory[rng.integers(memory_size), d]
                if rng.random() < par:
                    harmony[d] += (2.0 * rng.random() - 1.0) * bw[d]
            else:
                harmony[d] = rng.uniform(lo[d], hi[d])
        harmony = np.clip(harmony, lo, hi)
        value = run.eval(harmony)
        if value < fitness[worst]:
            memory[worst] = harmony
            fitness[worst] = value
            worst = int(np.argmax(fitness))


def _defaults(dim):
    return {
        "memory_size": 50,
        "consideration_rate": 0.95,
        "pitch_rate": 0.05,
        "bandwidth": 0.05,
    }


def _min_fes(params, dim):
    return int(params["memory_size"])


register(Algorithm("hs", _drive_hs, _defaults, _min_fes))
