"""
Natural cubic smoothing splines

The fitted curve g minimizes

    sum_j (g(t_j) - y_j)^2 + lam * integral g''(t)^2 dt

over natural cubic splines with knots at the sample times. Following the
Reinsch formulation, with h_j = t_{j+1} - t_j, Q the n x (n-2) second
difference matrix and R the (n-2) x (n-2) tridiagonal Gram matrix, the
interior second derivatives gamma solve

    (R + lam Q^T Q) gamma = Q^T y,    g = y - lam Q gamma

and lam = 0 reduces to the interpolating natural spline.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, sparse
from scipy.interpolate import PPoly
from scipy.sparse import linalg as spla

from odelip.core.errors import InputError

logger = logging.getLogger(__name__)


@dataclass
class SmoothingCurve:
    """Natural cubic spline in piecewise-polynomial form"""
    knots: np.ndarray  # (n,)
    fitted: np.ndarray  # curve values at the knots
    second: np.ndarray  # second derivatives at the knots, zero at both ends
    roughness: float = 0.0
    _pp: PPoly = field(init=False, repr=False)
    
    def __post_init__(self):
        self._pp = PPoly(self.coefficients, self.knots, extrapolate=True)
    
    @property
    def coefficients(self) -> np.ndarray:
        """(4, n-1) per-interval coefficients, highest power first"""
        h = np.diff(self.knots)
        g, gam = self.fitted, self.second
        c3 = (gam[1:] - gam[:-1]) / (6.0 * h)
        c2 = gam[:-1] / 2.0
        c1 = (g[1:] - g[:-1]) / h - h * (2.0 * gam[:-1] + gam[1:]) / 6.0
        c0 = g[:-1]
        return np.vstack([c3, c2, c1, c0])
    
    def __call__(self, t) -> np.ndarray:
        """Evaluate; outside the knot span the natural spline continues linearly"""
        t = np.asarray(t, dtype=np.float64)
        lo, hi = self.knots[0], self.knots[-1]
        values = self._pp(np.clip(t, lo, hi))
        slope = self._pp.derivative()
        values = values + np.where(t < lo, slope(lo) * (t - lo), 0.0)
        values = values + np.where(t > hi, slope(hi) * (t - hi), 0.0)
        return values
    
    def derivative(self, t) -> np.ndarray:
        """First derivative, constant outside the knot span"""
        t = np.asarray(t, dtype=np.float64)
        return self._pp.derivative()(np.clip(t, self.knots[0], self.knots[-1]))


def _reinsch_matrices(h: np.ndarray, n: int):
    qt = sparse.diags(
        [1.0 / h[:-1], -1.0 / h[:-1] - 1.0 / h[1:], 1.0 / h[1:]],
        [0, 1, 2],
        shape=(n - 2, n),
    )
    r = sparse.diags(
        [h[1:-1] / 6.0, (h[:-1] + h[1:]) / 3.0, h[1:-1] / 6.0],
        [-1, 0, 1],
        shape=(n - 2, n - 2),
    )
    return qt.tocsr(), r.tocsr()


def fit_smoothing_curve(times, values, roughness: float = 0.0) -> SmoothingCurve:
    """
    Fit the natural cubic smoothing spline with penalty weight `roughness`
    
    Args:
        times: Strictly increasing knot times (at least 4)
        values: Samples at those times
        roughness: lam >= 0; 0 interpolates
    
    Returns:
        SmoothingCurve
    """
    t = np.asarray(times, dtype=np.float64)
    y = np.asarray(values, dtype=np.float64)
    if t.ndim != 1 or y.shape != t.shape:
        raise InputError(f"times and values must be 1-D of equal length, got {t.shape} and {y.shape}")
    n = len(t)
    if n < 4:
        raise InputError(f"Smoothing spline needs at least 4 points, got {n}")
    h = np.diff(t)
    if np.any(h <= 0):
        raise InputError("Smoothing spline times must be strictly increasing")
    if not roughness >= 0:
        raise InputError(f"Roughness must be >= 0, got {roughness}")
    
    qt, r = _reinsch_matrices(h, n)
    system = (r + roughness * (qt @ qt.T)).tocsc()
    gamma = np.atleast_1d(spla.spsolve(system, qt @ y))
    fitted = y - roughness * (qt.T @ gamma)
    
    second = np.concatenate([[0.0], gamma, [0.0]])
    return SmoothingCurve(knots=t, fitted=fitted, second=second, roughness=float(roughness))


def residual_rms(times, values, roughness: float) -> float:
    curve = fit_smoothing_curve(times, values, roughness)
    return float(np.sqrt(np.mean((np.asarray(values) - curve.fitted) ** 2)))


def default_roughness(times, values, noise_std: float) -> float:
    """
    Roughness whose fit residual RMS equals the expected noise std
    
    Returns 0 for noiseless data. If even the stiffest fit (near the
    least-squares line) leaves less residual than noise_std, the upper end of
    the search range is returned.
    """
    if noise_std <= 0:
        return 0.0
    t = np.asarray(times, dtype=np.float64)
    base = float(np.mean(np.diff(t))) ** 3
    lo, hi = np.log10(base) - 8.0, np.log10(base) + 8.0
    
    def excess(log_lam: float) -> float:
        return residual_rms(t, values, 10.0 ** log_lam) - noise_std
    
    if excess(hi) <= 0:
        return 10.0 ** hi
    if excess(lo) >= 0:
        return 10.0 ** lo
    log_lam = optimize.brentq(excess, lo, hi, xtol=1e-6)
    return 10.0 ** log_lam
