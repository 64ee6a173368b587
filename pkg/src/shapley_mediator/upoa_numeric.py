"""Worst-case single-user utility under the Shapley mediator.

With optimal plain content (utility 1 when nothing is shown) the utility of a
user facing ascending satisfaction levels ``s_1 <= ... <= s_N`` is the
quadratic

    U(s) = sum_j s_j * P_j(s) + 1 - s_N,
    P_j(s) = sum_{m<=j} (s_m - s_{m-1}) / (N - m + 1),

i.e. ``U(s) = s^T A s / 2 - b^T s + 1`` with a symmetric positive definite
``A``.  Its stationary point is the minimiser; its value bounds the user
price of anarchy by ``1 / U*``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy import linalg

MAX_PLAYERS = 5000
RESIDUAL_TOL = 1e-10


class InfeasibleStationaryPoint(RuntimeError):
    pass


def _check_monotone(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.ndim != 1 or s.size == 0:
        raise ValueError("expected a non-empty vector")
    if np.any(np.diff(s) < 0):
        raise ValueError("satisfaction levels must be non-decreasing")
    if s[0] < 0 or s[-1] > 1:
        raise ValueError("satisfaction levels must lie in [0, 1]")
    return s


def display_probabilities(s) -> np.ndarray:
    n = len(s)
    steps = np.diff(s, prepend=0.0) / (n - np.arange(n))
    return np.cumsum(steps)


def single_user_utility(s) -> float:
    s = _check_monotone(s)
    return float(s @ display_probabilities(s) + 1.0 - s[-1])


def batch_utility(samples: np.ndarray) -> np.ndarray:
    """Utility of every row of an ``(k, N)`` array of ascending vectors."""
    n = samples.shape[1]
    steps = np.diff(samples, axis=1, prepend=0.0) / (n - np.arange(n))
    probs = np.cumsum(steps, axis=1)
    return np.einsum("ij,ij->i", samples, probs) + 1.0 - samples[:, -1]


def _pair_coefficients(n: int) -> np.ndarray:
    """``c[m] = 1 / ((N - m)(N - m + 1))`` for ``m = 1..N-1`` (index 0, N unused)."""
    c = np.zeros(n + 1)
    m = np.arange(1, n)
    c[1:n] = 1.0 / ((n - m) * (n - m + 1.0))
    return c


def utility_gradient(s, n: int = None) -> np.ndarray:
    """Closed-form gradient of :func:`single_user_utility`."""
    s = np.asarray(s, dtype=float)
    n = n or len(s)
    if len(s) != n:
        raise ValueError("length of s must equal N")
    c = _pair_coefficients(n)
    j = np.arange(1, n + 1)
    weighted = s * c[j]  # s_m * c_m
    below = np.concatenate([[0.0], np.cumsum(weighted)[:-1]])  # sum_{m<j} c_m s_m
    above = np.concatenate([np.cumsum(s[::-1])[::-1][1:], [0.0]])  # sum_{m>j} s_m
    grad = 2.0 * s / (n - j + 1) - below - c[j] * above
    grad[-1] -= 1.0
    return grad


@dataclass
class UtilityStationarySystem:
    n: int
    matrix: np.ndarray
    rhs: np.ndarray


def stationary_system(n: int) -> UtilityStationarySystem:
    """``A s = b`` with ``A`` the Hessian of ``U`` and ``b = e_N``."""
    if n < 1:
        raise ValueError("need N >= 1")
    c = _pair_coefficients(n)
    j = np.arange(1, n + 1)
    a = -c[np.minimum.outer(j, j)]
    a[j - 1, j - 1] = 2.0 / (n - j + 1)
    b = np.zeros(n)
    b[-1] = 1.0
    return UtilityStationarySystem(n, a, b)


def random_monotone(rng: np.random.Generator, n: int, size: int) -> np.ndarray:
    return np.sort(rng.random((size, n)), axis=1)


@dataclass
class StationaryPoint:
    n: int
    sigma: np.ndarray
    utility: float
    residual: float

    @property
    def upoa_bound(self) -> float:
        return 1.0 / self.utility


def solve_stationary(n: int, validate_samples: int = 10_000, seed: int = 0) -> StationaryPoint:
    """Minimiser of the single-user utility over ascending vectors in [0, 1]^N.

    Raises :class:`InfeasibleStationaryPoint` if the stationary point leaves
    the feasible region, and ``AssertionError`` if a random feasible sample
    beats it.
    """
    if not 1 <= n <= MAX_PLAYERS:
        raise ValueError(f"need 1 <= N <= {MAX_PLAYERS}")
    system = stationary_system(n)
    try:
        sigma = linalg.solve(system.matrix, system.rhs, assume_a="sym")
    except linalg.LinAlgError as exc:
        raise RuntimeError(f"linear solve failed for N={n}: {exc}") from exc
    residual = float(np.linalg.norm(system.matrix @ sigma - system.rhs))
    if residual > RESIDUAL_TOL * np.linalg.norm(system.rhs):
        raise RuntimeError(f"residual {residual:.3e} too large for N={n}")
    if np.any(np.diff(sigma) < -1e-12) or sigma[0] < -1e-12 or sigma[-1] > 1 + 1e-12:
        raise InfeasibleStationaryPoint(f"stationary point for N={n} is not feasible")
    sigma = np.clip(sigma, 0.0, 1.0)
    utility = single_user_utility(np.maximum.accumulate(sigma))
    if validate_samples:
        rng = np.random.default_rng(seed)
        samples = random_monotone(rng, n, validate_samples)
        worst = batch_utility(samples).min()
        assert utility <= worst + 1e-12, (n, utility, worst)
    return StationaryPoint(n, sigma, utility, residual)


def min_utility_curve(n_max: int, validate_samples: int = 0) -> list:
    """``StationaryPoint`` for every ``N = 1..n_max``."""
    if not 1 <= n_max <= MAX_PLAYERS:
        raise ValueError(f"need 1 <= n_max <= {MAX_PLAYERS}")
    return [solve_stationary(n, validate_samples=validate_samples) for n in range(1, n_max + 1)]


def curve_to_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["N", "U_star", "upoa_bound", "residual"])
    for p in points:
        writer.writerow([p.n, f"{p.utility:.6f}", f"{p.upoa_bound:.6f}", f"{p.residual:.3e}"])
    return buf.getvalue()
