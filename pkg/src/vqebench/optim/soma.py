"""Self-organizing migration with team selection.

Each migration loop draws a pool of ``migrants``, moves the ``movers``
best of them toward one of the ``leaders`` best individuals of the whole
population, sampling ``n_jump`` points along the path with a fresh
perturbation mask per jump; the best sampled point replaces the mover
when it improves on it."""

from __future__ import annotations

import numpy as np

from .base import Algorithm, register


def _drive_isoma(run, rng, lo, hi, p):
    dim = lo.size
    pop_size = int(p["pop_size"])
    n_jump = int(p["n_jump"])
    step = float(p["step"])
    prt = float(p["prt"])
    migrants = min(int(p["migrants"]), pop_size)
    movers = min(int(p["movers"]), migrants)
    leaders = min(int(p["leaders"]), pop_size)
    pop = rng.uniform(lo, hi, size=(pop_size, dim))
    fitness = np.array([run.eval(x) for x in pop])
    while True:
        pool = rng.choice(pop_size, size=migrants, replace=False)
        pool_order = pool[np.argsort(fitness[pool], kind="stable")]
        moving = pool_order[:movers]
        elite = np.argsort(fitness, kind="stable")[:leaders]
        for idx in moving:
            leader = int(elite[rng.integers(leaders)])
            if leader == idx:
                continue
            direction = pop[leader] - pop[idx]
            best_value = fitness[idx]
            best_pos = None
            for jump in range(1, n_jump + 1):
                mask = rng.random(dim) < prt
                candidate = np.clip(pop[idx] + jump * step * direction * mask, lo, hi)
                value = run.eval(candidate)
                if value < best_value:
                    best_value = value
                    best_pos = candidate
            if best_pos is not None:
                pop[idx] = best_pos
                fitness[idx] = best_value


def _defaults(dim):
    return {
        "pop_size": 40,
        "n_jump": 10,
        "step": 0.11,
        "prt": 0.1,
        "migrants": 30,
        "movers": 20,
        "leaders": 3,
    }


def _min_fes(params, dim):
    return int(params["pop_size"])


register(Algorithm("isoma", _drive_isoma, _defaults, _min_fes))
