"""Symbiotic organisms search: mutualism, commensalism, parasitism.

Follows the published three-phase update; benefit factors are drawn
uniformly from {1, 2} and the parasite replaces a random host only when
strictly better."""

from __future__ import annotations

import numpy as np

from .base import Algorithm, register


def _other_index(rng, size, exclude):
    j = int(rng.integers(size))
    while j == exclude:
        j = int(rng.integers(size))
    return j


def _drive_sos(run, rng, lo, hi, p):
    dim = lo.size
    pop_size = int(p["pop_size"])
    pop = rng.uniform(lo, hi, size=(pop_size, dim))
    fitness = np.array([run.eval(x) for x in pop])
    best = int(np.argmin(fitness))
    while True:
        for i in range(pop_size):
            # Mutualism
            j = _other_index(rng, pop_size, i)
            mutual = (pop[i] + pop[j]) / 2.0
            bf1 = int(rng.integers(1, 3))
            bf2 = int(rng.integers(1, 3))
            cand_i = np.clip(
                pop[i] + rng.random(dim) * (pop[best] - bf1 * mutual), lo, hi
            )
            cand_j = np.clip(
                pop[j] + rng.random(dim) * (pop[best] - bf2 * mutual), lo, hi
            )
            value_i = run.eval(cand_i)
            if value_i < fitness[i]:
                pop[i] = cand_i
                fitness[i] = value_i
                if value_i < fitness[best]:
                    best = i
            value_j = run.eval(cand_j)
            if value_j < fitness[j]:
                pop[j] = cand_j
                fitness[j] = value_j
                if value_j < fitness[best]:
                    best = j
            # Commensalism
            j = _other_index(rng, pop_size, i)
            cand = np.clip(
                pop[i] + rng.uniform(-1.0, 1.0, dim) * (pop[best] - pop[j]),
                lo,
                hi,
            )
            value = run.eval(cand)
            if value < fitness[i]:
                pop[i] = cand
                fitness[i] = value
                if value < fitness[best]:
                    best = i
            # Parasitism
            j = _other_index(rng, pop_size, i)
            parasite = pop[i].copy()
            dims = rng.random(dim) < rng.random()
            if not dims.any():
                dims[rng.integers(dim)] = True
            parasite[dims] = rng.uniform(lo[dims], hi[dims])
            value = run.eval(parasite)
            if value < fitness[j]:
                pop[j] = parasite
                fitness[j] = value
                if value < fitness[best]:
                    best = j


def _defaults(dim):
    return {"pop_size": 50}


def _min_fes(params, dim):
    return int(params["pop_size"])


register(Algorithm("sos", _drive_sos, _defaults, _min_fes))
