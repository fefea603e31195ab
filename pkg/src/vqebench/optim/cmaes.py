"""Covariance-matrix-adaptation evolution strategy.

Two presets are registered: the large-population variant (``pop = 5*N``,
``sigma0 = 0.5``) and a fine-tuned preset with the compact default
population ``4 + int(3*ln(N))`` and ``sigma0 = 0.4``.
"""

from __future__ import annotations

import math

import numpy as np

from .base import Algorithm, register


def _drive_cmaes(run, rng, lo, hi, p):
    dim = lo.size
    lam = int(p["pop_size"])
    mu = lam // 2
    raw = math.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    weights = raw / raw.sum()
    mueff = 1.0 / float(weights @ weights)

    cc = (4 + mueff / dim) / (dim + 4 + 2 * mueff / dim)
    cs = (mueff + 2) / (dim + mueff + 5)
    c1 = 2 / ((dim + 1.3) ** 2 + mueff)
    cmu = min(1 - c1, 2 * (mueff - 2 + 1 / mueff) / ((dim + 2) ** 2 + mueff))
    damps = 1 + 2 * max(0.0, math.sqrt((mueff - 1) / (dim + 1)) - 1) + cs
    chi_n = math.sqrt(dim) * (1 - 1 / (4 * dim) + 1 / (21 * dim**2))

    mean = rng.uniform(lo, hi)
    sigma = float(p["sigma"])
    cov = np.eye(dim)
    p_sigma = np.zeros(dim)
    p_cov = np.zeros(dim)
    eigvecs = np.eye(dim)
    eigvals = np.ones(dim)
    inv_sqrt = np.eye(dim)

    gen = 0
    while True:
        z = rng.standard_normal((lam, dim))
        y = (z * np.sqrt(eigvals)) @ eigvecs.T
        xs = np.clip(mean + sigma * y, lo, hi)
        values = np.array([run.eval(x) for x in xs])
        order = np.argsort(values, kind="stable")[:mu]
        selected = xs[order]

        old_mean = mean
        mean = weights @ selected
        y_w = (mean - old_mean) / sigma

        p_sigma = (1 - cs) * p_sigma + math.sqrt(
            cs * (2 - cs) * mueff
        ) * (inv_sqrt @ y_w)
        gen += 1
        ps_norm = float(np.linalg.norm(p_sigma))
        hsig = ps_norm / math.sqrt(
            1 - (1 - cs) ** (2 * gen)
        ) / chi_n < 1.4 + 2 / (dim + 1)
        p_cov = (1 - cc) * p_cov + (
            math.sqrt(cc * (2 - cc) * mueff) * y_w if hsig else 0.0
        )

        steps = (selected - old_mean) / sigma
        rank_mu = (steps.T * weights) @ steps
        cov = (
            (1 - c1 - cmu) * cov
            + c1
            * (
                np.outer(p_cov, p_cov)
                + (0.0 if hsig else cc * (2 - cc)) * cov
            )
            + cmu * rank_mu
        )
        sigma *= math.exp((cs / damps) * (ps_norm / chi_n - 1))

        cov = np.triu(cov) + np.triu(cov, 1).T
        eigvals, eigvecs = np.linalg.eigh(cov)
        eigvals = np.maximum(eigvals, 1e-20)
        inv_sqrt = (eigvecs / np.sqrt(eigvals)) @ eigvecs.T


def _defaults_plain(dim):
    return {"pop_size": 5 * dim, "sigma": 0.5}


def _defaults_tuned(dim):
    return {"pop_size": 4 + int(3 * math.log(dim)), "sigma": 0.4}


def _min_fes(params, dim):
    return int(params["pop_size"])


register(Algorithm("cmaes", _drive_cmaes, _defaults_plain, _min_fes))
register(Algorithm("cmaes_ft", _drive_cmaes, _defaults_tuned, _min_fes))
