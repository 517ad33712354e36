"""Stable evaluation of the orthogonal polynomial and function families.

All families are generated by forward three-term recurrences.  For the
Hermite and Laguerre function families the recurrences are normalized and
carry the exponential factors inside the recursion state, so no raw
polynomial value or factorial is ever formed; values stay O(1) wherever the
functions are O(1).  Every Gamma-function ratio goes through log-Gamma
differences to dodge overflow past n ~ 170.

Operations are pure functions of their arguments and safe for concurrent
use.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

__all__ = [
    "JacobiParams",
    "OrthoValueTable",
    "LaguerreBoundReport",
    "jacobi_all",
    "jacobi_norm",
    "gegenbauer_all",
    "hermite_fn_all",
    "laguerre_fn_all",
    "check_laguerre_bound",
    "save_table_csv",
]


@dataclass(frozen=True)
class JacobiParams:
    """Jacobi weight exponents; orthogonality needs both above -1."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= -1.0 or self.beta <= -1.0:
            raise ValueError("jacobi parameters must satisfy alpha, beta > -1")


@dataclass
class OrthoValueTable:
    """Values v_0..v_{n_max} of one family at one point or point array.

    ``values`` has shape (n_max + 1,) + shape(x).
    """

    family: str
    params: tuple
    n_max: int
    x: np.ndarray
    values: np.ndarray


def _jacobi_values(alpha, beta, n_max, x):
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    s = alpha + beta
    out[1] = 0.5 * (alpha - beta + (s + 2.0) * x)
    for n in range(2, n_max + 1):
        c0 = 2.0 * n * (n + s) * (2 * n + s - 2)
        c1 = (2 * n + s - 1) * (2 * n + s) * (2 * n + s - 2)
        c2 = (2 * n + s - 1) * (alpha**2 - beta**2)
        c3 = 2.0 * (n + alpha - 1) * (n + beta - 1) * (2 * n + s)
        out[n] = ((c1 * x + c2) * out[n - 1] - c3 * out[n - 2]) / c0
    return out


def jacobi_all(p, n_max, x):
    """Jacobi polynomials P_0..P_{n_max} at x in the traditional
    normalization P_n(1) = binom(n + alpha, n)."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise ValueError("evaluation points must lie in [-1, 1]")
    vals = _jacobi_values(p.alpha, p.beta, n_max, x)
    return OrthoValueTable("jacobi", (p.alpha, p.beta), n_max, x, vals)


def jacobi_norm(p, n):
    """Squared weighted-L2 norm h_n of the degree-n Jacobi polynomial.

    The closed form degenerates at n = 0 when alpha + beta + 1 = 0 (Gamma
    pole against a vanishing prefactor); that case falls back to the Beta
    integral of the weight itself and is flagged with a warning.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    a, b = p.alpha, p.beta
    s = a + b
    if n == 0 and abs(s + 1.0) < 1e-12:
        warnings.warn(
            "norm formula is degenerate at n=0 for alpha+beta=-1; "
            "using direct integration of the weight",
            RuntimeWarning,
        )
        return float(np.exp((s + 1) * np.log(2.0) + gammaln(a + 1) + gammaln(b + 1) - gammaln(s + 2)))
    logval = (
        (s + 1.0) * np.log(2.0)
        - np.log(2.0 * n + s + 1.0)
        + gammaln(n + a + 1.0)
        + gammaln(n + b + 1.0)
        - gammaln(n + 1.0)
        - gammaln(n + s + 1.0)
    )
    return float(np.exp(logval))


def jacobi_norms(p, n_max):
    """Vector of h_0..h_{n_max}; same degenerate-case handling as
    jacobi_norm."""
    a, b = p.alpha, p.beta
    s = a + b
    n = np.arange(n_max + 1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logval = (
            (s + 1.0) * np.log(2.0)
            - np.log(2.0 * n + s + 1.0)
            + gammaln(n + a + 1.0)
            + gammaln(n + b + 1.0)
            - gammaln(n + 1.0)
            - gammaln(n + s + 1.0)
        )
    out = np.exp(logval)
    if abs(s + 1.0) < 1e-12:
        out[0] = jacobi_norm(p, 0)
    return out


def gegenbauer_all(lam, n_max, t):
    """Gegenbauer polynomials C_n^lam via their Jacobi relatives.

    Uses C_n^lam = [Gamma(lam+1/2)/Gamma(2 lam)] *
    [Gamma(n+2 lam)/Gamma(n+lam+1/2)] * P_n^(lam-1/2, lam-1/2) with all
    ratios in log space.
    """
    if lam <= 0:
        raise ValueError("gegenbauer parameter must be positive")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise ValueError("evaluation points must lie in [-1, 1]")
    base = _jacobi_values(lam - 0.5, lam - 0.5, n_max, t)
    n = np.arange(n_max + 1, dtype=float)
    logratio = (
        gammaln(lam + 0.5)
        - gammaln(2.0 * lam)
        + gammaln(n + 2.0 * lam)
        - gammaln(n + lam + 0.5)
    )
    ratio = np.exp(logratio)
    vals = base * ratio.reshape((-1,) + (1,) * t.ndim)
    return OrthoValueTable("gegenbauer", (float(lam),), n_max, t, vals)


def _hermite_fn_values(n_max, t):
    t = np.asarray(t, dtype=float)
    out = np.empty((n_max + 1,) + t.shape)
    out[0] = np.pi**-0.25 * np.exp(-0.5 * t**2)
    if n_max == 0:
        return out
    out[1] = np.sqrt(2.0) * t * out[0]
    for n in range(1, n_max):
        out[n + 1] = t * np.sqrt(2.0 / (n + 1)) * out[n] - np.sqrt(n / (n + 1.0)) * out[n - 1]
    return out


def hermite_fn_all(n_max, t):
    """L2-normalized Hermite functions h_0..h_{n_max} at t.

    The recurrence carries exp(-t^2/2) in its initial values; far-tail
    underflow to 0 is the correct limiting behavior.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    t = np.asarray(t, dtype=float)
    return OrthoValueTable("hermite_fn", (), n_max, t, _hermite_fn_values(n_max, t))


def _laguerre_core(alpha, n_max, s):
    """Normalized Laguerre values ell_n(s) = sqrt(n!/Gamma(n+a+1)) *
    L_n^a(s) * exp(-s/2), the common core of all three function types."""
    s = np.asarray(s, dtype=float)
    out = np.empty((n_max + 1,) + s.shape)
    out[0] = np.exp(-0.5 * s - 0.5 * gammaln(alpha + 1.0))
    if n_max == 0:
        return out
    out[1] = (alpha + 1.0 - s) * np.exp(-0.5 * s - 0.5 * gammaln(alpha + 2.0))
    for n in range(1, n_max):
        c1 = (2.0 * n + alpha + 1.0 - s) / np.sqrt((n + 1.0) * (n + alpha + 1.0))
        c2 = np.sqrt(n * (n + alpha) / ((n + 1.0) * (n + alpha + 1.0)))
        out[n + 1] = c1 * out[n] - c2 * out[n - 1]
    return out


def laguerre_fn_all(alpha, n_max, t, which="F"):
    """Normalized Laguerre function families at t >= 0.

    which = "F": sqrt(2 n!/Gamma(n+a+1)) exp(-t^2/2) L_n^a(t^2),
            orthonormal in L2(R_+, t^(2a+1) dt);
    which = "L": sqrt(n!/Gamma(n+a+1)) exp(-t/2) t^(a/2) L_n^a(t),
            orthonormal in L2(R_+);
    which = "M": sqrt(2t) * L-type at t^2, orthonormal in L2(R_+).
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0 for the Laguerre function families")
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if which not in ("F", "L", "M"):
        raise ValueError("which must be 'F', 'L', or 'M'")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("evaluation points must be nonnegative")
    if which == "F":
        vals = np.sqrt(2.0) * _laguerre_core(alpha, n_max, t**2)
    elif which == "L":
        core = _laguerre_core(alpha, n_max, t)
        with np.errstate(divide="ignore"):
            frac = np.where(t > 0, t, 1.0) ** (0.5 * alpha)
        vals = core * np.where(t > 0, frac, 1.0 if alpha == 0 else 0.0)
    else:
        core = _laguerre_core(alpha, n_max, t**2)
        vals = np.sqrt(2.0 * t) * t**alpha * core
    return OrthoValueTable(f"laguerre_{which}", (float(alpha),), n_max, t, vals)


@dataclass
class LaguerreBoundReport:
    """Fitted constants for the half-line envelope of Laguerre polynomials.

    ``constants[i]`` is the smallest c with
    |L_n^alpha(t)| exp(-t/2) <= c 2^alpha (n/t)^(alpha/2) over the scanned
    t-range for n = degrees[i].  ``growth_flag`` is set when the fitted
    constants drift upward with n, which would contradict an n-uniform bound.
    """

    alpha: float
    degrees: np.ndarray
    constants: np.ndarray
    growth_flag: bool

    def spread(self, degrees):
        c = [self.constants[list(self.degrees).index(n)] for n in degrees]
        return max(c) / min(c)


def check_laguerre_bound(alpha, n_max, t_points=600):
    """Scan the weighted Laguerre envelope and fit its leading constant.

    Valid for -1/2 <= alpha <= n; degrees below ceil(alpha) are skipped so
    the precondition holds for every reported constant.
    """
    if alpha < -0.5:
        raise ValueError("alpha must be >= -1/2")
    n_lo = max(1, int(np.ceil(alpha)))
    if n_max < n_lo:
        raise ValueError("n_max too small for this alpha")
    t = np.geomspace(1e-3, 3.0 * (4.0 * n_max + 2.0 * alpha + 2.0), t_points)
    # raw L_n^alpha(t) e^{-t/2} by the standard recurrence with the
    # exponential carried in the seed values
    u_prev = np.exp(-0.5 * t)
    u = (alpha + 1.0 - t) * np.exp(-0.5 * t)
    degrees = np.arange(n_lo, n_max + 1)
    constants = np.empty(len(degrees))
    envelope = (2.0**alpha) * np.where(t > 0, 1.0, np.inf)
    for n in range(1, n_max + 1):
        if n >= n_lo:
            ratio = np.abs(u) / (envelope * (n / t) ** (alpha / 2.0))
            constants[n - n_lo] = ratio.max()
        u_prev, u = u, ((2 * n + alpha + 1 - t) * u - (n + alpha) * u_prev) / (n + 1.0)
    half = max(1, len(degrees) // 2)
    growth = constants[half:].max() > 2.0 * constants[:half].min() if len(degrees) > 1 else False
    return LaguerreBoundReport(float(alpha), degrees, constants, bool(growth))


def save_table_csv(table, path):
    """Write a value table as CSV (degree, value); point arrays flatten."""
    vals = np.atleast_2d(table.values.reshape(table.n_max + 1, -1))
    with open(path, "w") as fh:
        fh.write("degree," + ",".join(f"v{i}" for i in range(vals.shape[1])) + "\n")
        for n in range(table.n_max + 1):
            fh.write(str(n) + "," + ",".join(f"{v:.17g}" for v in vals[n]) + "\n")
