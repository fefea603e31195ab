"""Real-coded genetic algorithm: tournament selection, blend crossover,
Gaussian mutation, one elite survivor per generation."""

from __future__ import annotations

import numpy as np

from .base import Algorithm, register


def _tournament(rng, fitness, size):
    picks = rng.integers(len(fitness), size=size)
    return int(picks[np.argmin(fitness[picks])])


def _blend(rng, a, b, alpha):
    low = np.minimum(a, b)
    high = np.maximum(a, b)
    span = high - low
    return rng.uniform(low - alpha * span, high + alpha * span)


def _drive_ga(run, rng, lo, hi, p):
    dim = lo.size
    pop_size = int(p["pop_size"])
    pc = float(p["crossover_prob"])
    pm = float(p["mutation_prob"])
    alpha = float(p["blend_alpha"])
    k_tour = int(p["tournament_size"])
    sigma = float(p["mutation_sigma"]) * (hi - lo)
    pop = rng.uniform(lo, hi, size=(pop_size, dim))
    fitness = np.array([run.eval(x) for x in pop])
    while True:
        children = np.empty_like(pop)
        for c in range(pop_size):
            i = _tournament(rng, fitness, k_tour)
            j = _tournament(rng, fitness, k_tour)
            if rng.random() < pc:
                child = _blend(rng, pop[i], pop[j], alpha)
            else:
                child = pop[i].copy()
            mutate = rng.random(dim) < pm
            if mutate.any():
                child = child + mutate * rng.normal(0.0, sigma)
            children[c] = np.clip(child, lo, hi)
        elite = int(np.argmin(fitness))
        children[0] = pop[elite]
        child_fitness = np.empty(pop_size)
        child_fitness[0] = fitness[elite]  # elite carried over, no re-eval
        for c in range(1, pop_size):
            child_fitness[c] = run.eval(children[c])
        pop = children
        fitness = child_fitness


def _defaults(dim):
    return {
        "pop_size": 50,
        "crossover_prob": 0.9,
        "mutation_prob": 0.05,
        "tournament_size": 3,
        "blend_alpha": 0.5,
        "mutation_sigma": 0.1,
    }


def _min_fes(params, dim):
    return int(params["pop_size"])


register(Algorithm("ga", _drive_ga, _defaults, _min_fes))
