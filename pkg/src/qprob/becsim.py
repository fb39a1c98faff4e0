"""Two-mode condensate dynamics and the time-resolved interference factor.

The population imbalance s and phase difference x obey

    ds/dt = -b * sqrt(1 - s^2) * sin(x)
    dx    =  s * (1 + b * cos(x) / sqrt(1 - s^2)) dt + sigma dW

with pumping amplitude b and phase noise of strength sigma.  Without noise
the motion conserves H(s, x) = s^2/2 - b*sqrt(1-s^2)*cos(x) and splits into
two regimes around a critical pumping amplitude set by the initial
conditions: bounded oscillations of s below it, zero-crossing oscillations
above it.

Mode populations are (1 -+ s)/2.  Averaging them over a noisy ensemble gives
p_n(t); the same dynamics with the noise switched off gives the classical
curve f_n(t); their difference is the interference factor q_n(t).

Paths are integrated with the stochastic Heun scheme (the noise enters
additively, so the Ito and Stratonovich readings agree) and are keyed by
(seed, path index) through a counter-based generator, which makes every
ensemble bit-reproducible no matter how paths are scheduled.  Ensemble sums
are accumulated over fixed-size path chunks combined in chunk order, so a
worker pool of any size produces identical output.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass
from enum import Enum

import numpy as np

#: Paths per reduction chunk; fixed so that worker counts cannot influence
#: floating-point summation order.
CHUNK_PATHS = 1024

#: Noise/time block length used inside the path kernel.
_NOISE_BLOCK = 8192

#: |s| at or beyond this aborts a path: the square root becomes singular.
_S_ABORT = 1.0 - 1e-9

#: |s| is clamped to this inside square-root evaluation only.
_S_CLAMP = 1.0 - 1e-12


class StepRejected(RuntimeError):
    """A path drove |s| into the singular band around 1."""

    def __init__(self, message: str, path_index: int | None = None):
        super().__init__(message)
        self.path_index = path_index


class DenominatorVanishes(ValueError):
    """The critical-amplitude denominator is too close to zero."""


class Regime(Enum):
    RABI = "Rabi"
    JOSEPHSON = "Josephson"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class BecParams:
    """Integration setup: dynamics, grid, ensemble size and seed.

    Times are dimensionless; the horizon is realized as round(t_max/dt)
    steps of exactly dt.
    """

    b: float
    sigma: float
    s0: float
    x0: float
    dt: float = 1e-3
    t_max: float = 100.0
    n_paths: int = 2000
    seed: int = 0

    def __post_init__(self) -> None:
        if not abs(self.s0) < 1.0:
            raise ValueError(f"initial imbalance must satisfy |s0| < 1, got {self.s0!r}")
        if not self.dt > 0.0:
            raise ValueError(f"time step must be positive, got {self.dt!r}")
        if not self.t_max > self.dt:
            raise ValueError(f"horizon {self.t_max!r} must exceed the step {self.dt!r}")
        if self.b < 0.0:
            raise ValueError(f"pumping amplitude must be nonnegative, got {self.b!r}")
        if self.sigma < 0.0:
            raise ValueError(f"noise strength must be nonnegative, got {self.sigma!r}")
        if self.n_paths < 1:
            raise ValueError(f"need at least one path, got {self.n_paths!r}")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.dt))

    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.dt


@dataclass(frozen=True)
class Trajectory:
    """One solution sampled on the step grid."""

    times: np.ndarray
    s: np.ndarray
    x: np.ndarray


@dataclass(frozen=True)
class EnsembleResult:
    """Ensemble populations, their noiseless counterparts and the interference factors.

    By construction p1 + p2 = 1 and f1 + f2 = 1 hold exactly and
    q_n = p_n - f_n entrywise; std_err1 is the standard error of p1 across
    paths.
    """

    times: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    n_paths: int
    std_err1: np.ndarray


def critical_amplitude(s0: float, x0: float, tol: float = 1e-12) -> float:
    """Pumping amplitude separating the two oscillation regimes.

    Equals s0^2 / (2 * (1 + sqrt(1 - s0^2) * cos(x0))); ranges over [0, 1/2]
    for x0 = 0 as |s0| sweeps [0, 1].
    """
    if abs(s0) > 1.0:
        raise ValueError(f"initial imbalance must satisfy |s0| <= 1, got {s0!r}")
    denominator = 2.0 * (1.0 + math.sqrt(max(0.0, 1.0 - s0 * s0)) * math.cos(x0))
    if denominator <= tol:
        raise DenominatorVanishes(
            f"critical amplitude undefined: denominator {denominator:.3e} at s0={s0}, x0={x0}"
        )
    return s0 * s0 / denominator


def regime_classify(b: float, s0: float, x0: float, tol: float = 1e-9) -> Regime:
    """Which side of the critical amplitude the pumping lies on."""
    bc = critical_amplitude(s0, x0)
    if b < bc - tol:
        return Regime.RABI
    if b > bc + tol:
        return Regime.JOSEPHSON
    return Regime.CRITICAL


def hamiltonian(s: float, x: float, b: float) -> float:
    """Conserved energy of the noiseless motion."""
    return 0.5 * s * s - b * math.sqrt(1.0 - s * s) * math.cos(x)


def integrate_deterministic(params: BecParams) -> Trajectory:
    """Classical fourth-order Runge-Kutta solution of the noiseless system.

    The noise strength in ``params`` is ignored.  A step that would carry
    |s| into the singular band aborts with :class:`StepRejected`.
    """
    n = params.n_steps
    b = params.b
    dt = params.dt
    s_out = np.empty(n + 1)
    x_out = np.empty(n + 1)
    s, x = params.s0, params.x0
    s_out[0], x_out[0] = s, x
    sin, cos, sqrt = math.sin, math.cos, math.sqrt
    clamp = _S_CLAMP

    def deriv(si: float, xi: float) -> tuple[float, float]:
        sc = min(clamp, max(-clamp, si))
        root = sqrt(1.0 - sc * sc)
        return -b * root * sin(xi), si * (1.0 + b * cos(xi) / root)

    for k in range(1, n + 1):
        d1s, d1x = deriv(s, x)
        d2s, d2x = deriv(s + 0.5 * dt * d1s, x + 0.5 * dt * d1x)
        d3s, d3x = deriv(s + 0.5 * dt * d2s, x + 0.5 * dt * d2x)
        d4s, d4x = deriv(s + dt * d3s, x + dt * d3x)
        s += dt * (d1s + 2.0 * d2s + 2.0 * d3s + d4s) / 6.0
        x += dt * (d1x + 2.0 * d2x + 2.0 * d3x + d4x) / 6.0
        if abs(s) >= _S_ABORT:
            raise StepRejected(f"|s| reached {s!r} at t={k * dt!r}")
        s_out[k], x_out[k] = s, x
    return Trajectory(times=params.times(), s=s_out, x=x_out)


def path_noise_generator(seed: int, path_index: int) -> np.random.Generator:
    """The counter-based stream feeding one path's noise increments.

    Keyed by (seed, path index); the k-th draw is the increment of step k,
    so the stream does not depend on how paths are scheduled.
    """
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, path_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _heun_paths(params: BecParams, path_lo: int, path_hi: int, record: bool):
    """Stochastic Heun integration of the path range [path_lo, path_hi).

    The same Wiener increment enters predictor and corrector; with additive
    noise this is strong first order.  Returns per-step path sums of s and
    s^2 when ``record`` is false, else the full (s, x) histories (meant for
    narrow ranges only).
    """
    n = params.n_steps
    width = path_hi - path_lo
    b, sigma, dt = params.b, params.sigma, params.dt
    sig_sqdt = sigma * math.sqrt(dt)
    s = np.full(width, params.s0)
    x = np.full(width, params.x0)
    if record:
        s_hist = np.empty((width, n + 1))
        x_hist = np.empty((width, n + 1))
        s_hist[:, 0] = s
        x_hist[:, 0] = x
    else:
        sum_s = np.empty(n + 1)
        sum_s2 = np.empty(n + 1)
        sum_s[0] = s.sum()
        sum_s2[0] = np.dot(s, s)
    generators = None
    if sigma > 0.0:
        generators = [path_noise_generator(params.seed, i) for i in range(path_lo, path_hi)]
    noise = np.zeros((width, _NOISE_BLOCK))
    k = 0
    while k < n:
        block = min(_NOISE_BLOCK, n - k)
        if generators is not None:
            for i, gen in enumerate(generators):
                noise[i, :block] = gen.standard_normal(block)
        for j in range(block):
            dw = sig_sqdt * noise[:, j]
            sc = np.clip(s, -_S_CLAMP, _S_CLAMP)
            root = np.sqrt(1.0 - sc * sc)
            d1s = -b * root * np.sin(x)
            d1x = s * (1.0 + b * np.cos(x) / root)
            sp = s + dt * d1s
            xp = x + dt * d1x + dw
            sc = np.clip(sp, -_S_CLAMP, _S_CLAMP)
            root = np.sqrt(1.0 - sc * sc)
            d2s = -b * root * np.sin(xp)
            d2x = sp * (1.0 + b * np.cos(xp) / root)
            s = s + 0.5 * dt * (d1s + d2s)
            x = x + 0.5 * dt * (d1x + d2x) + dw
            k += 1
            worst = int(np.argmax(np.abs(s)))
            if abs(s[worst]) >= _S_ABORT:
                raise StepRejected(
                    f"|s| reached {s[worst]!r} at t={k * dt!r} on path {path_lo + worst}",
                    path_index=path_lo + worst,
                )
            if record:
                s_hist[:, k] = s
                x_hist[:, k] = x
            else:
                sum_s[k] = s.sum()
                sum_s2[k] = np.dot(s, s)
    if record:
        return s_hist, x_hist
    return sum_s, sum_s2


def integrate_sde(params: BecParams, path_index: int) -> Trajectory:
    """One stochastic path, bit-reproducible for a fixed (seed, path index)."""
    if path_index < 0:
        raise ValueError(f"path index must be nonnegative, got {path_index}")
    s_hist, x_hist = _heun_paths(params, path_index, path_index + 1, record=True)
    return Trajectory(times=params.times(), s=s_hist[0], x=x_hist[0])


def _chunk_sums(args: tuple[BecParams, int, int]):
    params, lo, hi = args
    return _heun_paths(params, lo, hi, record=False)


def ensemble_interference(params: BecParams, workers: int = 1) -> EnsembleResult:
    """Ensemble-averaged populations and interference factors.

    p_n(t) averages the per-path populations; f_n(t) is the same scheme run
    without noise, so the interference factor vanishes identically when
    sigma is zero (all paths then coincide with the noiseless curve, which
    is used directly instead of summing N identical copies).  Chunk sums are
    combined in fixed order, making the output independent of ``workers``.
    """
    if params.n_paths < 2:
        raise ValueError(f"ensemble needs at least two paths, got {params.n_paths}")
    n = params.n_paths
    quiet = BecParams(
        b=params.b, sigma=0.0, s0=params.s0, x0=params.x0,
        dt=params.dt, t_max=params.t_max, n_paths=1, seed=params.seed,
    )
    s_det = _heun_paths(quiet, 0, 1, record=True)[0][0]

    if params.sigma == 0.0:
        mean_s = s_det
        variance = np.zeros(params.n_steps + 1)
    else:
        chunks = [
            (params, lo, min(lo + CHUNK_PATHS, n))
            for lo in range(0, n, CHUNK_PATHS)
        ]
        if workers > 1 and len(chunks) > 1:
            with multiprocessing.Pool(min(workers, len(chunks))) as pool:
                partials = pool.map(_chunk_sums, chunks)
        else:
            partials = [_chunk_sums(chunk) for chunk in chunks]
        sum_s = np.zeros(params.n_steps + 1)
        sum_s2 = np.zeros(params.n_steps + 1)
        for part_s, part_s2 in partials:
            sum_s += part_s
            sum_s2 += part_s2
        mean_s = sum_s / n
        variance = np.maximum(sum_s2 - sum_s * mean_s, 0.0) / (n - 1)

    p1 = 0.5 * (1.0 - mean_s)
    f1 = 0.5 * (1.0 - s_det)
    q1 = p1 - f1
    p2 = 1.0 - p1
    f2 = 1.0 - f1
    q2 = p2 - f2
    std_err1 = 0.5 * np.sqrt(variance / n)
    return EnsembleResult(
        times=params.times(), p1=p1, p2=p2, f1=f1, f2=f2, q1=q1, q2=q2,
        n_paths=n, std_err1=std_err1,
    )
