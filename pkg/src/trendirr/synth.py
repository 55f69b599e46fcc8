"""Synthetic processes with known (ir)reversibility, used as validation oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

from .errors import GenerationError, InvalidInputError

BURN_IN = 1000
NAR_TIME_MODES = ("integer", "scaled")
NAR_TIME_STEP = 0.01
# Anything this large means the quadratic terms have run away.
_DIVERGENCE_BOUND = 1e100


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _check_n(n):
    if int(n) != n or n < 2:
        raise InvalidInputError(f"sample count must be an integer >= 2, got {n}")
    return int(n)


def sample_laplace(mu=0.0, beta=1.0, rng=None, size=None, v=None):
    """Laplace(mu, beta) draws by inverse CDF: ``mu - beta*sign(v)*ln(1 - 2|v|)``.

    ``v`` is uniform on (-1/2, 1/2); pass it explicitly to evaluate the
    transform without drawing.
    """
    if beta <= 0:
        raise InvalidInputError("beta must be positive")
    if v is None:
        v = _rng(rng).random(size) - 0.5
        # random() is [0, 1): keep v off the -1/2 endpoint where the log diverges.
        v = np.where(v <= -0.5, np.nextafter(-0.5, 0.0), v)
    v = np.asarray(v, dtype=float)
    if np.any(np.abs(v) >= 0.5):
        raise InvalidInputError("v must lie strictly inside (-1/2, 1/2)")
    x = mu - beta * np.sign(v) * np.log1p(-2.0 * np.abs(v))
    return float(x) if x.ndim == 0 else x


def gen_random_walk(p, n, seed=None) -> np.ndarray:
    """Path ``X_0 = 0, X_{t+1} = X_t +/- 1`` with up-probability ``p``; ``n`` positions."""
    if not 0 < p < 1:
        raise InvalidInputError(f"p must lie in (0, 1), got {p}")
    n = _check_n(n)
    steps = np.where(_rng(seed).random(n - 1) < p, 1, -1)
    return np.concatenate(([0], np.cumsum(steps))).astype(np.int64)


def gen_ar2(n, seed=None, innovations=None, burn_in=BURN_IN) -> np.ndarray:
    """Linear AR(2): ``x[t+2] = 0.7 x[t+1] + 0.2 x[t] + xi[t]`` with N(0, 1) noise.

    Starts from ``x_0 = x_1 = 0`` and discards ``burn_in`` samples.
    ``innovations`` overrides the noise draw (length ``n + burn_in - 2``).
    """
    n = _check_n(n)
    total = n + burn_in
    if innovations is None:
        xi = _rng(seed).standard_normal(total - 2)
    else:
        xi = np.asarray(innovations, dtype=float)
        if xi.shape != (total - 2,):
            raise InvalidInputError(f"expected {total - 2} innovations, got {xi.shape}")
    x = np.zeros(total)
    x[2:] = lfilter([1.0], [1.0, -0.7, -0.2], xi)
    return x[burn_in:]


def gen_nar2(
    n,
    seed=None,
    time_mode="integer",
    dt=NAR_TIME_STEP,
    eta=None,
    zeta=None,
    driver=True,
    burn_in=BURN_IN,
) -> np.ndarray:
    """Nonlinear bivariate AR(2) collapsed to ``u_t = x_t**2 + y_t**2``.

    ::

        x[t+2] = 0.5 x[t+1] - 0.3 x[t] + 0.1 y[t] + 0.1 x[t]**2
                 + 0.4 y[t+1]**2 + 0.0025 eta[t]
        y[t+2] = sin(4 pi s) + sin(6 pi s) + 0.0025 zeta[t]

    with Laplace(0, 1) noises. ``time_mode="integer"`` uses ``s = t`` (the
    sinusoids vanish at integer times); ``"scaled"`` uses ``s = t * dt``.
    ``eta``/``zeta`` override the noise draws (length ``n + burn_in - 2``) and
    ``driver=False`` forces ``y`` to zero.
    """
    n = _check_n(n)
    if time_mode not in NAR_TIME_MODES:
        raise InvalidInputError(f"time_mode must be one of {NAR_TIME_MODES}")
    total = n + burn_in
    rng = _rng(seed)
    if eta is None:
        eta = sample_laplace(0.0, 1.0, rng, total - 2)
    if zeta is None:
        zeta = sample_laplace(0.0, 1.0, rng, total - 2)
    eta = np.asarray(eta, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    if eta.shape != (total - 2,) or zeta.shape != (total - 2,):
        raise InvalidInputError(f"noise overrides must have length {total - 2}")

    scale = 1.0 if time_mode == "integer" else dt
    t = np.arange(total - 2) * scale
    if driver:
        y_next = np.sin(4 * np.pi * t) + np.sin(6 * np.pi * t) + 0.0025 * zeta
    else:
        y_next = np.zeros(total - 2)
    y = np.concatenate(([0.0, 0.0], y_next))

    # The x recursion is nonlinear in x, so it runs as a plain loop.
    x = [0.0] * total
    drift = (0.1 * y[:-2] + 0.4 * y[1:-1] ** 2 + 0.0025 * eta).tolist()
    x0, x1 = 0.0, 0.0
    for k in range(total - 2):
        x2 = 0.5 * x1 - 0.3 * x0 + 0.1 * x0 * x0 + drift[k]
        if not math.isfinite(x2) or abs(x2) > _DIVERGENCE_BOUND:
            raise GenerationError(f"NAR recursion diverged at step {k + 2}", step=k + 2)
        x[k + 2] = x2
        x0, x1 = x1, x2
    x = np.asarray(x)
    u = x * x + y * y
    return u[burn_in:]


@dataclass(frozen=True)
class ProcessSpec:
    """A seeded synthetic generator request.

    ``kind`` is ``"random_walk"`` (needs ``params["p"]``), ``"ar2"`` or
    ``"nar2"`` (optional ``params["time_mode"]``).
    """

    kind: str
    length: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("random_walk", "ar2", "nar2"):
            raise InvalidInputError(f"unknown process kind {self.kind!r}")
        _check_n(self.length)
        if self.kind == "random_walk":
            p = self.params.get("p")
            if p is None or not 0 < p < 1:
                raise InvalidInputError("random_walk requires 0 < p < 1")

    def generate(self) -> np.ndarray:
        if self.kind == "random_walk":
            return gen_random_walk(self.params["p"], self.length, self.seed)
        if self.kind == "ar2":
            return gen_ar2(self.length, self.seed)
        return gen_nar2(
            self.length,
            self.seed,
            time_mode=self.params.get("time_mode", "integer"),
            dt=self.params.get("dt", NAR_TIME_STEP),
        )
