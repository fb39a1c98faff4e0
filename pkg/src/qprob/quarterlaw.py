"""Distribution of the interference factor and the quarter law.

The interference factor of a prospect family is a random quantity on
[-1, 1] whose distribution must integrate to one and have zero mean (the
positive and negative parts alternate).  Modeling each sign with a beta
density gives closed forms for the expected positive part

    q_plus = alpha * lambda_plus / (alpha + beta)

and its negative mirror ``q_minus = -mu * lambda_minus / (mu + nu)``.  Under
the symmetry lambda_plus = lambda_minus = 1/2 with alpha = beta and mu = nu
both collapse to +-1/4 for any positive shapes: the quarter law.  The
numerical route recomputes both moments by adaptive quadrature so closed
form and quadrature check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Union

import numpy as np

#: Shape-1 branches are evaluated at this offset instead of exactly 0, where
#: the density diverges; only integrals of the density carry meaning there.
PDF_ZERO_OFFSET = 1e-15

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature fails to reach the requested tolerance."""


class QSplit(NamedTuple):
    """Expected positive and negative parts of the interference factor."""

    q_plus: float
    q_minus: float


@dataclass(frozen=True)
class Infeasible:
    """Marker that no zero-mean distribution exists for the requested parameters.

    ``residual`` is how far the positive and negative first moments miss
    cancelling each other.
    """

    residual: float


@dataclass(frozen=True)
class BetaPairDistribution:
    """Two-sided beta density on [-1, 1].

    The positive branch has shapes (alpha, beta) and mass lambda_plus, the
    negative branch shapes (mu, nu) and mass lambda_minus; the masses must
    sum to one for the density to normalize.
    """

    alpha: float
    beta: float
    mu: float
    nu: float
    lambda_plus: float
    lambda_minus: float

    def __post_init__(self) -> None:
        for name in ("alpha", "beta", "mu", "nu"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"shape {name} must be positive and finite, got {value!r}")
        for name in ("lambda_plus", "lambda_minus"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
        if abs(self.lambda_plus + self.lambda_minus - 1.0) >= 1e-10:
            raise ValueError(
                f"branch masses must sum to 1, got {self.lambda_plus + self.lambda_minus!r}"
            )

    @classmethod
    def uniform(cls) -> "BetaPairDistribution":
        """The non-informative case: all shapes 1, equal masses, density 1/2."""
        return cls(alpha=1.0, beta=1.0, mu=1.0, nu=1.0, lambda_plus=0.5, lambda_minus=0.5)

    @classmethod
    def symmetric(cls, alpha: float, mu: float | None = None) -> "BetaPairDistribution":
        """Equal-mass distribution with alpha = beta and mu = nu (defaults to alpha)."""
        mu = alpha if mu is None else mu
        return cls(alpha=alpha, beta=alpha, mu=mu, nu=mu, lambda_plus=0.5, lambda_minus=0.5)


def log_beta(a: float, b: float) -> float:
    """log B(a, b) via log-gamma, stable for large shapes."""
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def pdf(dist: BetaPairDistribution, q: float) -> float:
    """Density of the two-sided beta distribution at q in [-1, 1].

    At q = 0 the positive branch limit is returned; for alpha < 1 that limit
    diverges and the value is capped by evaluating at ``PDF_ZERO_OFFSET``.
    """
    if not -1.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [-1, 1], got {q!r}")
    if q >= 0.0:
        if q == 0.0 and dist.alpha < 1.0:
            q = PDF_ZERO_OFFSET
        return (
            dist.lambda_plus
            * math.exp(-log_beta(dist.alpha, dist.beta))
            * q ** (dist.alpha - 1.0)
            * (1.0 - q) ** (dist.beta - 1.0)
        )
    a = -q
    return (
        dist.lambda_minus
        * math.exp(-log_beta(dist.mu, dist.nu))
        * a ** (dist.mu - 1.0)
        * (1.0 - a) ** (dist.nu - 1.0)
    )


def q_split_closed(dist: BetaPairDistribution) -> QSplit:
    """Closed-form expected positive and negative parts."""
    return QSplit(
        q_plus=dist.alpha * dist.lambda_plus / (dist.alpha + dist.beta),
        q_minus=-dist.mu * dist.lambda_minus / (dist.mu + dist.nu),
    )


def q_split_numeric(dist: BetaPairDistribution, tol: float = 1e-10) -> QSplit:
    """Expected parts recomputed by quadrature of q times the density."""
    plus = (
        dist.lambda_plus
        * math.exp(-log_beta(dist.alpha, dist.beta))
        * _beta_moment(dist.alpha, dist.beta - 1.0, tol=0.1 * tol)
    )
    minus = (
        dist.lambda_minus
        * math.exp(-log_beta(dist.mu, dist.nu))
        * _beta_moment(dist.mu, dist.nu - 1.0, tol=0.1 * tol)
    )
    return QSplit(q_plus=plus, q_minus=-minus)


def pdf_normalization(dist: BetaPairDistribution, tol: float = 1e-10) -> float:
    """The total probability mass, recomputed by quadrature of the density."""
    plus = (
        dist.lambda_plus
        * math.exp(-log_beta(dist.alpha, dist.beta))
        * _beta_moment(dist.alpha - 1.0, dist.beta - 1.0, tol=0.1 * tol)
    )
    minus = (
        dist.lambda_minus
        * math.exp(-log_beta(dist.mu, dist.nu))
        * _beta_moment(dist.mu - 1.0, dist.nu - 1.0, tol=0.1 * tol)
    )
    return plus + minus


def zero_mean_residual(dist: BetaPairDistribution) -> float:
    """How far the distribution misses the zero-mean (alternation) constraint."""
    split = q_split_closed(dist)
    return split.q_plus + split.q_minus


def solve_balanced(
    alpha: float,
    beta: float,
    lambda_plus: float,
    mu: float,
    nu: float,
    tol: float = 1e-9,
) -> Union[BetaPairDistribution, Infeasible]:
    """Assemble a zero-mean distribution, or report that none exists.

    With lambda_minus forced to 1 - lambda_plus the zero-mean constraint
    becomes an equality between the two branch moments; if the given
    parameters violate it, the residual is reported instead of a
    distribution.
    """
    if not 0.0 < lambda_plus < 1.0:
        raise ValueError(f"lambda_plus must lie strictly inside (0, 1), got {lambda_plus!r}")
    candidate = BetaPairDistribution(
        alpha=alpha, beta=beta, mu=mu, nu=nu, lambda_plus=lambda_plus, lambda_minus=1.0 - lambda_plus
    )
    residual = zero_mean_residual(candidate)
    if abs(residual) >= tol:
        return Infeasible(residual=residual)
    return candidate


def _gauss_panel(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float) -> float:
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return half * float(np.dot(_GL_WEIGHTS, f(mid + half * _GL_NODES)))


def _adaptive_gauss(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, tol: float) -> float:
    """Adaptive Gauss-Legendre by interval bisection.

    A panel is accepted when bisecting it moves the estimate by less than its
    tolerance share; the share halves with each split so the total error stays
    below ``tol``.
    """
    total = 0.0
    stack = [(lo, hi, tol, 0)]
    while stack:
        a, b, share, depth = stack.pop()
        whole = _gauss_panel(f, a, b)
        mid = 0.5 * (a + b)
        left = _gauss_panel(f, a, mid)
        right = _gauss_panel(f, mid, b)
        if abs(left + right - whole) < share or (b - a) < 1e-15:
            total += left + right
        elif depth >= 60:
            raise QuadratureError(
                f"no convergence on [{a}, {b}] at depth {depth} (estimate moved {abs(left + right - whole):.3e})"
            )
        else:
            stack.append((a, mid, 0.5 * share, depth + 1))
            stack.append((mid, b, 0.5 * share, depth + 1))
    return total


def _half_piece(p: float, r: float, tol: float) -> float:
    """integral over [0, 1/2] of t^p (1-t)^r dt for p, r > -1.

    For p < 0 the integrable endpoint singularity is removed analytically by
    the substitution u = t^(p+1), which turns t^p dt into du / (p+1); for
    p >= 0 the integrand is evaluated directly and adaptivity absorbs the
    remaining mild non-smoothness of fractional powers.
    """
    if p < 0.0:
        a = p + 1.0
        inv = 1.0 / a
        return _adaptive_gauss(lambda u: (1.0 - u**inv) ** r, 0.0, 0.5**a, tol) / a
    return _adaptive_gauss(lambda t: t**p * (1.0 - t) ** r, 0.0, 0.5, tol)


def _beta_moment(p: float, r: float, tol: float) -> float:
    """integral over [0, 1] of t^p (1-t)^r dt, split at 1/2 with mirrored endpoint handling."""
    if p <= -1.0 or r <= -1.0:
        raise ValueError(f"moment exponents must exceed -1, got {p!r}, {r!r}")
    return _half_piece(p, r, 0.5 * tol) + _half_piece(r, p, 0.5 * tol)
