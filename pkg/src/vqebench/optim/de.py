"""Classic differential evolution: best/1 and rand/1 mutation with
binomial or exponential crossover.

Population size follows the common multiplier convention of 15 per
dimension; weight and crossover rate default to 0.5 / 0.6.
"""

from __future__ import annotations

import numpy as np

from .base import Algorithm, register


def _pick_distinct(rng, size, count, exclude):
    choices = [i for i in range(size) if i != exclude]
    picked = rng.choice(len(choices), size=count, replace=False)
    return [choices[i] for i in picked]


def _bin_mask(rng, dim, cr):
    mask = rng.random(dim) < cr
    mask[rng.integers(dim)] = True
    return mask


def _exp_mask(rng, dim, cr):
    mask = np.zeros(dim, dtype=bool)
    j = int(rng.integers(dim))
    length = 0
    while True:
        mask[j] = True
        length += 1
        j = (j + 1) % dim
        if length >= dim or rng.random() >= cr:
            break
    return mask


def _drive_de(mutation, crossover):
    def drive(run, rng, lo, hi, p):
        dim = lo.size
        pop_size = int(p["pop_size"])
        f_weight = float(p["f_weight"])
        cr = float(p["f_cr"])
        pop = rng.uniform(lo, hi, size=(pop_size, dim))
        fitness = np.array([run.eval(x) for x in pop])
        best = int(np.argmin(fitness))
        while True:
            for i in range(pop_size):
                if mutation == "best1":
                    r1, r2 = _pick_distinct(rng, pop_size, 2, i)
                    mutant = pop[best] + f_weight * (pop[r1] - pop[r2])
                else:  # rand1
                    r1, r2, r3 = _pick_distinct(rng, pop_size, 3, i)
                    mutant = pop[r1] + f_weight * (pop[r2] - pop[r3])
                mask = (
                    _bin_mask(rng, dim, cr)
                    if crossover == "bin"
                    else _exp_mask(rng, dim, cr)
                )
                trial = np.clip(np.where(mask, mutant, pop[i]), lo, hi)
                value = run.eval(trial)
                if value <= fitness[i]:
                    pop[i] = trial
                    fitness[i] = value
                    if value < fitness[best]:
                        best = i

    return drive


def _defaults(dim):
    return {"pop_size": 15 * dim, "f_weight": 0.5, "f_cr": 0.6}


def _min_fes(params, dim):
    return int(params["pop_size"])


register(Algorithm("de_best1bin", _drive_de("best1", "bin"), _defaults, _min_fes))
register(Algorithm("de_best1exp", _drive_de("best1", "exp"), _defaults, _min_fes))
register(Algorithm("de_rand1", _drive_de("rand1", "bin"), _defaults, _min_fes))
