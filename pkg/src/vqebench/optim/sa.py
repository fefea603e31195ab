"""Simulated annealing with three visiting/cooling variants.

All variants share Metropolis acceptance (improvements accepted without
consuming randomness) and the chain structure: ``chain_length`` proposals
per stagnation check, stopping once the temperature floor is reached or
the best value has not improved for ``max_stay`` consecutive chains.
The temperature is updated per proposal; the schedules are normalized so
the floor is reached after ``chain_length * max_stay`` proposals, which
keeps every variant able to refine within a desk-scale budget.

* ``sa_fast``: per-coordinate heavy-tailed visiting with log-uniform
  step magnitudes scaled by the box width, ``T_k = T_max *
  exp(-c * k^(1/N))`` with ``c`` solved from the horizon condition.
* ``sa_boltzmann``: Gaussian visiting with standard deviation
  ``sqrt(T)``; a pure logarithmic law cannot span nine orders of
  magnitude in any finite run, so the schedule interpolates the floor
  geometrically in log-time, exponent solved from the horizon.
* ``sa_cauchy``: isotropic multivariate Cauchy visiting scaled by ``T``,
  ``T_k = T_max / (1 + k)``.
"""

from __future__ import annotations

import math

import numpy as np

from .base import Algorithm, register


def _visit_fast(rng, t, lo, hi):
    u = rng.uniform(-1.0, 1.0, size=lo.size)
    magnitude = t * ((1.0 + 1.0 / t) ** np.abs(u) - 1.0)
    return np.sign(u) * magnitude * (hi - lo)


def _visit_boltzmann(rng, t, lo, hi):
    return math.sqrt(t) * rng.standard_normal(lo.size)


def _visit_cauchy(rng, t, lo, hi):
    direction = rng.standard_normal(lo.size)
    denom = abs(rng.standard_normal())
    return t * direction / max(denom, 1e-300)


def _drive_sa(variant):
    def drive(run, rng, lo, hi, p):
        t_max = float(p["t_max"])
        t_min = float(p["t_min"])
        chain = int(p["chain_length"])
        max_stay = int(p["max_stay"])
        dim = lo.size
        horizon = chain * max_stay
        if variant == "fast":
            c = math.log(t_max / t_min) / horizon ** (1.0 / dim)
            cool = lambda k: t_max * math.exp(-c * k ** (1.0 / dim))
            visit = _visit_fast
        elif variant == "boltzmann":
            beta = math.log(t_max / t_min) / math.log(1.0 + horizon)
            cool = lambda k: t_max * (1.0 + k) ** (-beta)
            visit = _visit_boltzmann
        else:
            cool = lambda k: t_max / (1.0 + k)
            visit = _visit_cauchy

        x = rng.uniform(lo, hi)
        value = run.eval(x)
        k = 0
        stay = 0
        t = t_max
        while t > t_min and stay < max_stay:
            best_before = run.best_value
            for _ in range(chain):
                t = cool(k)
                if t <= t_min:
                    break
                candidate = np.clip(x + visit(rng, t, lo, hi), lo, hi)
                cand_value = run.eval(candidate)
                delta = cand_value - value
                if delta <= 0 or rng.random() < math.exp(-delta / t):
                    x = candidate
                    value = cand_value
                k += 1
            stay = stay + 1 if run.best_value >= best_before else 0

    return drive


def _defaults(dim):
    return {"t_max": 100.0, "t_min": 1e-7, "chain_length": 300, "max_stay": 150}


def _min_fes(params, dim):
    return 1


register(Algorithm("sa_fast", _drive_sa("fast"), _defaults, _min_fes))
register(Algorithm("sa_boltzmann", _drive_sa("boltzmann"), _defaults, _min_fes))
register(Algorithm("sa_cauchy", _drive_sa("cauchy"), _defaults, _min_fes))
