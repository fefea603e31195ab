"""Success-history adaptive differential evolution.

``shade`` keeps a success-history memory driving current-to-pbest/1
mutation with an external archive.  ``ilshade`` extends it with linear
population reduction from ``12*dim`` down to 4, a short memory of 6
slots with one entry pinned at 0.9, progress-dependent caps on F/CR in
the early phase, and memory updates that average the new Lehmer mean
with the stored value.
"""

from __future__ import annotations

import numpy as np

from .base import Algorithm, register


def _sample_f(rng, mu_f):
    # Cauchy(mu_f, 0.1), resampled until positive, truncated at 1.
    while True:
        f = mu_f + 0.1 * np.tan(np.pi * (rng.random() - 0.5))
        if f > 0:
            return min(f, 1.0)


def _current_to_pbest(rng, pop, fitness, archive, i, f, p_rate):
    pop_size = len(pop)
    n_best = max(1, int(round(p_rate * pop_size)))
    elite = np.argsort(fitness, kind="stable")[:n_best]
    pbest = pop[elite[rng.integers(n_best)]]
    r1 = int(rng.integers(pop_size))
    while r1 == i:
        r1 = int(rng.integers(pop_size))
    extended = pop_size + len(archive)
    r2 = int(rng.integers(extended))
    while r2 == i or r2 == r1:
        r2 = int(rng.integers(extended))
    other = pop[r2] if r2 < pop_size else archive[r2 - pop_size]
    return pop[i] + f * (pbest - pop[i]) + f * (pop[r1] - other)


def _bin_cross(rng, target, mutant, cr):
    dim = target.size
    mask = rng.random(dim) < cr
    mask[rng.integers(dim)] = True
    return np.where(mask, mutant, target)


def _lehmer(values, weights):
    values = np.asarray(values)
    weights = np.asarray(weights)
    weights = weights / weights.sum()
    denom = float(weights @ values)
    if denom == 0.0:
        return 0.0
    return float(weights @ (values * values)) / denom


def _drive_shade(run, rng, lo, hi, p):
    dim = lo.size
    pop_size = int(p["pop_size"])
    h = int(p["memory_size"])
    mem_f = np.full(h, float(p["mu_f"]))
    mem_cr = np.full(h, float(p["mu_cr"]))
    pop = rng.uniform(lo, hi, size=(pop_size, dim))
    fitness = np.array([run.eval(x) for x in pop])
    archive: list[np.ndarray] = []
    k = 0
    while True:
        s_f, s_cr, deltas = [], [], []
        for i in range(pop_size):
            r = int(rng.integers(h))
            cr = float(np.clip(rng.normal(mem_cr[r], 0.1), 0.0, 1.0))
            f = _sample_f(rng, mem_f[r])
            p_rate = rng.uniform(2.0 / pop_size, 0.2)
            mutant = _current_to_pbest(rng, pop, fitness, archive, i, f, p_rate)
            trial = np.clip(_bin_cross(rng, pop[i], mutant, cr), lo, hi)
            value = run.eval(trial)
            if value < fitness[i]:
                archive.append(pop[i].copy())
                s_f.append(f)
                s_cr.append(cr)
                deltas.append(fitness[i] - value)
            if value <= fitness[i]:
                pop[i] = trial
                fitness[i] = value
        while len(archive) > pop_size:
            archive.pop(int(rng.integers(len(archive))))
        if s_f:
            mem_f[k] = _lehmer(s_f, deltas)
            w = np.asarray(deltas) / np.sum(deltas)
            mem_cr[k] = float(w @ np.asarray(s_cr))
            k = (k + 1) % h


def _drive_ilshade(run, rng, lo, hi, p):
    dim = lo.size
    pop_size = int(p["pop_size"])
    pop_min = int(p["pop_size_min"])
    h = int(p["memory_size"])
    mem_f = np.full(h, 0.8)
    mem_cr = np.full(h, 0.8)
    budget = run.budget
    pop = rng.uniform(lo, hi, size=(pop_size, dim))
    fitness = np.array([run.eval(x) for x in pop])
    archive: list[np.ndarray] = []
    k = 0
    init_size = pop_size
    while True:
        progress = run.fe_used / budget
        # pbest proportion shrinks from 0.2 to 0.1 over the run
        p_rate = 0.2 - 0.1 * progress
        s_f, s_cr, deltas = [], [], []
        for i in range(pop_size):
            r = int(rng.integers(h))
            if r == h - 1:
                mu_f, mu_cr = 0.9, 0.9  # terminal slot stays pinned
            else:
                mu_f, mu_cr = float(mem_f[r]), float(mem_cr[r])
            cr = float(np.clip(rng.normal(mu_cr, 0.1), 0.0, 1.0))
            f = _sample_f(rng, mu_f)
            if progress < 0.25:
                cr = max(cr, 0.5)
                f = min(f, 0.7)
            elif progress < 0.5:
                cr = max(cr, 0.25)
                f = min(f, 0.8)
            elif progress < 0.75:
                f = min(f, 0.9)
            mutant = _current_to_pbest(rng, pop, fitness, archive, i, f, p_rate)
            trial = np.clip(_bin_cross(rng, pop[i], mutant, cr), lo, hi)
            value = run.eval(trial)
            if value < fitness[i]:
                archive.append(pop[i].copy())
                s_f.append(f)
                s_cr.append(cr)
                deltas.append(fitness[i] - value)
            if value <= fitness[i]:
                pop[i] = trial
                fitness[i] = value
        if s_f:
            w = np.asarray(deltas) / np.sum(deltas)
            mem_f[k] = 0.5 * (_lehmer(s_f, deltas) + mem_f[k])
            mem_cr[k] = 0.5 * (_lehmer(s_cr, w) + mem_cr[k]) if np.any(
                np.asarray(s_cr) > 0
            ) else mem_cr[k]
            if k == h - 1:
                mem_f[k] = 0.9
                mem_cr[k] = 0.9
            k = (k + 1) % h
        # linear population size reduction against the FE budget
        planned = int(round(init_size + (pop_min - init_size) * run.fe_used / budget))
        planned = max(pop_min, planned)
        if planned < pop_size:
            keep = np.argsort(fitness, kind="stable")[:planned]
            pop = pop[keep]
            fitness = fitness[keep]
            pop_size = planned
            while len(archive) > pop_size:
                archive.pop(int(rng.integers(len(archive))))


def _defaults_shade(dim):
    return {"pop_size": 100, "memory_size": 100, "mu_f": 0.5, "mu_cr": 0.5}


def _defaults_ilshade(dim):
    return {"pop_size": 12 * dim, "pop_size_min": 4, "memory_size": 6}


def _min_fes(params, dim):
    return int(params["pop_size"])


register(Algorithm("shade", _drive_shade, _defaults_shade, _min_fes))
register(Algorithm("ilshade", _drive_ilshade, _defaults_ilshade, _min_fes))
