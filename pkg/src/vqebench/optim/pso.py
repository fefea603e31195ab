"""Particle swarm with inertia weight and immediate best propagation."""

from __future__ import annotations

import numpy as np

from .base import Algorithm, register


def _drive_pso(run, rng, lo, hi, p):
    dim = lo.size
    pop_size = int(p["pop_size"])
    w = float(p["inertia"])
    c1 = float(p["cognitive"])
    c2 = float(p["social"])
    pos = rng.uniform(lo, hi, size=(pop_size, dim))
    vel = np.zeros((pop_size, dim))
    fitness = np.array([run.eval(x) for x in pos])
    pbest = pos.copy()
    pbest_val = fitness.copy()
    g = int(np.argmin(fitness))
    gbest = pos[g].copy()
    gbest_val = float(fitness[g])
    while True:
        for i in range(pop_size):
            r1 = rng.random(dim)
            r2 = rng.random(dim)
            vel[i] = (
                w * vel[i]
                + c1 * r1 * (pbest[i] - pos[i])
                + c2 * r2 * (gbest - pos[i])
            )
            pos[i] = np.clip(pos[i] + vel[i], lo, hi)
            value = run.eval(pos[i])
            if value < pbest_val[i]:
                pbest[i] = pos[i].copy()
                pbest_val[i] = value
                if value < gbest_val:
                    gbest = pos[i].copy()
                    gbest_val = value


def _defaults(dim):
    return {"pop_size": 40, "inertia": 0.8, "cognitive": 0.5, "social": 0.5}


def _min_fes(params, dim):
    return int(params["pop_size"])


register(Algorithm("pso", _drive_pso, _defaults, _min_fes))
