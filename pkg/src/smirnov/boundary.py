"""Uniform boundary grids on the unit circle and the operations on them:
Fourier coefficients, harmonic conjugation, Poisson / conjugate-Poisson /
Herglotz extension, and distribution functions.

A :class:`BoundaryGrid` holds ``n`` values attached to the nodes
``zeta_j = exp(2 pi i j / n)``.  Two readings of those values are supported:

* sampled (default): point samples of a function, integrated by the
  trapezoid rule and conjugated through the FFT multiplier ``-i sgn(k)``;
* step: a function constant on each half-open cell ``[theta_j, theta_{j+1})``.
  Indicators of arcs and integer staircases are step functions, and for these
  every operation is exact (no Gibbs error near the jumps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from smirnov import kernels
from smirnov.config import R_MAX, default_grid_n
from smirnov.errors import GridResolutionError, NonRealBoundaryError


def _check_n(n):
    if n < 64 or n & (n - 1):
        raise ValueError(f"grid size must be a power of two >= 64, got {n}")


@dataclass(frozen=True, eq=False)
class BoundaryGrid:
    """Values on the uniform grid of ``n`` nodes (see module docstring).

    Parameters
    ----------
    values : array_like
        Real or complex samples, length a power of two >= 64.
    step : bool
        Interpret values as cellwise constant on ``[theta_j, theta_{j+1})``.
    mean_removed : bool
        Informational flag set by operations that return mean-zero data.
    """

    values: np.ndarray
    step: bool = False
    mean_removed: bool = False

    def __post_init__(self):
        v = np.array(self.values)
        if v.ndim != 1:
            raise ValueError("grid values must be one-dimensional")
        if not (np.iscomplexobj(v) or np.issubdtype(v.dtype, np.floating)):
            v = v.astype(np.float64)
        _check_n(v.shape[0])
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_samples(self):
        return self.values.shape[0]

    @property
    def theta(self):
        return 2.0 * np.pi * np.arange(self.n_samples) / self.n_samples

    @property
    def zeta(self):
        return grid_nodes(self.n_samples)

    @property
    def is_real(self):
        return not np.iscomplexobj(self.values) or not np.any(self.values.imag)

    def real_values(self):
        """Values as a float array; raises if any imaginary part is nonzero."""
        if np.iscomplexobj(self.values):
            if np.any(np.abs(self.values.imag) > 1e-12 * max(1.0, np.max(np.abs(self.values)))):
                raise NonRealBoundaryError("grid values are not real")
            return self.values.real.copy()
        return self.values.astype(np.float64)

    def mean(self):
        """Integral against dm: exact for both readings."""
        return self.values.mean()

    def replace(self, values, step=None, mean_removed=False):
        return BoundaryGrid(values, self.step if step is None else step, mean_removed)

    def remove_mean(self):
        return self.replace(self.values - self.values.mean(), mean_removed=True)

    def __add__(self, other):
        if isinstance(other, BoundaryGrid):
            _same_n(self, other)
            return BoundaryGrid(self.values + other.values, self.step and other.step)
        return self.replace(self.values + other)

    def __sub__(self, other):
        if isinstance(other, BoundaryGrid):
            return self + (-1.0) * other
        return self.replace(self.values - other)

    def __mul__(self, c):
        if isinstance(c, BoundaryGrid):
            _same_n(self, c)
            return BoundaryGrid(self.values * c.values, self.step and c.step)
        return self.replace(self.values * c, mean_removed=self.mean_removed)

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)


def _same_n(a, b):
    if a.n_samples != b.n_samples:
        raise ValueError(f"grid sizes differ: {a.n_samples} vs {b.n_samples}")


def grid_nodes(n):
    t = (2.0 * np.pi / n) * np.arange(n)
    return np.cos(t) + 1j * np.sin(t)


def sample_grid(fn, n=None):
    """Sample ``fn`` (callable on complex arrays of unimodular points)."""
    n = default_grid_n() if n is None else n
    _check_n(n)
    return BoundaryGrid(np.asarray(fn(grid_nodes(n))))


def arc_indicator_grid(arcs, n=None, weights=None):
    """Step grid of sum_k w_k chi_{[beta_k, alpha_k)} with the half-open convention.

    Cell j takes the value at its left node theta_j, so an arc whose endpoints
    are nodes is represented exactly.
    """
    n = default_grid_n() if n is None else n
    _check_n(n)
    theta = 2.0 * np.pi * np.arange(n) / n
    vals = np.zeros(n)
    arcs = list(arcs)
    weights = [1.0] * len(arcs) if weights is None else list(weights)
    for (beta, alpha), w in zip(arcs, weights):
        vals += w * _arc_mask(theta, beta, alpha)
    return BoundaryGrid(vals, step=True)


def _arc_mask(theta, beta, alpha):
    length = alpha - beta
    if length >= 2.0 * np.pi:
        return np.ones_like(theta)
    rel = np.mod(theta - beta, 2.0 * np.pi)
    # nodes that are arc endpoints up to rounding belong to the left end only
    rel = np.where(np.abs(rel - 2.0 * np.pi) < 1e-12, 0.0, rel)
    return (rel < length - 1e-12).astype(float)


# ---------------------------------------------------------------------------
# Fourier analysis and conjugation


def _step_factor(n):
    k = np.fft.fftfreq(n, d=1.0 / n)
    h = 2.0 * np.pi / n
    fac = np.ones(n, dtype=np.complex128)
    nz = k != 0
    fac[nz] = (1.0 - np.exp(-1j * k[nz] * h)) / (1j * k[nz] * h)
    return fac


def fourier_coeffs(g, max_n):
    """Fourier coefficients ghat(k) for |k| <= max_n, as a dict keyed by k.

    For sampled grids this is the DFT (1/n) sum_j g_j zeta_j^-k, exact for
    trigonometric polynomials of degree < n/2.  For step grids the DFT is
    multiplied by the exact cell factor (1 - e^{-ikh})/(ikh).
    """
    n = g.n_samples
    if max_n >= n // 2:
        raise ValueError(f"max_n={max_n} must be < n_samples/2 = {n // 2}")
    c = np.fft.fft(g.values) / n
    if g.step:
        c = c * _step_factor(n)
    return {k: complex(c[k % n]) for k in range(-max_n, max_n + 1)}


def _step_log_kernel(n):
    d = np.arange(n)
    with np.errstate(divide="ignore"):
        kern = np.log(np.abs(np.sin(np.pi * d / n)))
    kern[0] = math.log(math.sin(math.pi / (2 * n)))
    return kern


def conjugate(g):
    """Harmonic conjugate with the multiplier -i sgn(k), normalized to mean zero.

    Sampled grids go through the FFT.  Step grids use the exact conjugate of
    the step function, (1/pi) sum_j J_j log|sin((theta - theta_j)/2)| with J_j
    the jump at node j; at a jump node itself (where the true conjugate is
    infinite) the finite value log sin(pi/(2n)) stands in for the log.  The
    result is always a sampled grid.
    """
    v = g.real_values()
    n = v.shape[0]
    if g.step:
        jumps = v - np.roll(v, 1)
        conv = np.fft.ifft(np.fft.fft(jumps) * np.fft.fft(_step_log_kernel(n))).real
        out = conv / np.pi
        out -= out.mean()
        return BoundaryGrid(out, step=False, mean_removed=True)
    c = np.fft.fft(v)
    k = np.fft.fftfreq(n, d=1.0 / n)
    c = -1j * np.sign(k) * c
    c[n // 2] = 0.0
    return BoundaryGrid(np.fft.ifft(c).real, step=False, mean_removed=True)


# ---------------------------------------------------------------------------
# Kernel extensions into the disk


def _kernel_sums(g, z, tol):
    z = np.asarray(z, dtype=np.complex128)
    flat = np.ravel(z)
    if np.any(np.abs(flat) >= 1.0):
        raise GridResolutionError("kernel extension needs |z| < 1")
    if g.step:
        p, q = kernels.step_sums(g.values, flat)
    else:
        r = float(np.max(np.abs(flat))) if flat.size else 0.0
        if r > R_MAX:
            raise GridResolutionError(f"|z| = {r:.6g} exceeds r_max = {R_MAX} for sampled-grid quadrature")
        if tol is not None and flat.size:
            bound = quadrature_error_bound(g, r)
            if bound > tol:
                raise GridResolutionError(f"quadrature error bound {bound:.3g} exceeds tol {tol:g} at |z| = {r:.6g}")
        p, q = kernels.trapezoid_sums(g.values, flat)
    return p.reshape(z.shape), q.reshape(z.shape)


def quadrature_error_bound(g, r):
    """Aliasing bound for the trapezoid Poisson sum at radius ``r``.

    The n-point rule folds Fourier modes k and k +- n together; for the
    Poisson kernel this gives at most 2 r^n/(1 - r^n) times the sup of g
    (for a smooth g; log-singular data only satisfy it away from the
    singularity).
    """
    n = g.n_samples
    rn = r**n
    return 2.0 * rn / (1.0 - rn) * float(np.max(np.abs(g.values)))


def _unwrap(z, p):
    return complex(p) if np.ndim(z) == 0 else p


def poisson_extend(g, z, tol=None):
    """Poisson extension: integral of g * P_z dm.

    Sampled grids require |z| <= r_max; step grids are exact for |z| < 1.
    ``tol`` additionally enforces :func:`quadrature_error_bound`.
    """
    p, _ = _kernel_sums(g, z, tol)
    return _unwrap(z, p)


def conj_poisson_extend(g, z, tol=None):
    """Conjugate Poisson extension: integral of g * Q_z dm (vanishes at 0)."""
    _, q = _kernel_sums(g, z, tol)
    return _unwrap(z, q)


def herglotz_extend(g, z, tol=None):
    """Herglotz integral of g * (zeta + z)/(zeta - z) dm, i.e. P[g] + i Q[g]."""
    p, q = _kernel_sums(g, z, tol)
    return _unwrap(z, p + 1j * q)


# ---------------------------------------------------------------------------
# Distribution functions


def default_thresholds():
    return 2.0 ** np.arange(-4, 17)


@dataclass(frozen=True, eq=False)
class DistributionProfile:
    """Empirical distribution data of |g| at increasing thresholds.

    ``lam[k]`` is the fraction of samples with |g| > t_k, ``rho = t * lam``
    and ``sigma[k] = max(rho[k:])``.
    """

    thresholds: np.ndarray
    lam: np.ndarray
    rho: np.ndarray
    sigma: np.ndarray
    n_samples: int

    @property
    def counts(self):
        return np.rint(self.lam * self.n_samples).astype(np.int64)


def distribution(g, thresholds=None):
    """Distribution profile of ``|g|`` at the given positive increasing thresholds."""
    t = default_thresholds() if thresholds is None else np.asarray(thresholds, dtype=float)
    if np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise ValueError("thresholds must be positive and strictly increasing")
    mag = np.sort(np.abs(g.values))
    n = mag.shape[0]
    lam = (n - np.searchsorted(mag, t, side="right")) / n
    rho = t * lam
    sigma = np.maximum.accumulate(rho[::-1])[::-1]
    return DistributionProfile(t, lam, rho, sigma, n)


def empirical_sigma(g, A):
    """Exact sup over t >= A of t * lambda(t) for the empirical distribution of |g|.

    The supremum of t * #{|g| > t}/n over t in [A, inf) is approached just
    below a sample magnitude s, where it equals s * #{|g| >= s}/n; the value
    at t = A itself is included.  For the continuum function behind the
    samples this is a lower bound.
    """
    mag = np.sort(np.abs(g.values))
    n = mag.shape[0]
    at_a = A * (n - np.searchsorted(mag, A, side="right")) / n
    idx = np.searchsorted(mag, A, side="right")
    if idx >= n:
        return float(at_a)
    s = mag[idx:]
    ge = n - np.searchsorted(mag, s, side="left")
    return float(max(at_a, np.max(s * ge / n)))


MIN_TAIL_COUNT = 16


def weak_decay_test(profile, min_count=MIN_TAIL_COUNT, floor=1e-3):
    """Heuristic verdict on t * lambda(t) -> 0 from a grid distribution profile.

    Returns ``"member"``, ``"non-member"`` or ``"inconclusive"``.  Only
    thresholds with at least ``min_count`` samples above them are trusted.
    A drop from >= ``min_count`` samples to none within one threshold step
    means the samples are bounded at grid scale (member).  Otherwise rho is
    compared across the top resolved decade: a fall by at least a factor 2
    per decade is a member, a flat profile above ``floor`` a non-member.
    """
    t, counts, rho = profile.thresholds, profile.counts, profile.rho
    ok = np.nonzero(counts >= min_count)[0]
    if ok.size == 0:
        return "member" if counts[0] == 0 else "inconclusive"
    top = ok[-1]
    if top + 1 < t.size and counts[top + 1] == 0:
        return "member"
    if top + 1 == t.size:
        return "inconclusive"
    lo_t = t[top] / 10.0
    window = [k for k in ok if t[k] >= lo_t * (1 - 1e-12)]
    if len(window) < 2:
        return "inconclusive"
    k0, k1 = window[0], window[-1]
    decades = math.log10(t[k1] / t[k0])
    if rho[k1] <= 0:
        return "member"
    per_decade = (rho[k0] / rho[k1]) ** (1.0 / decades)
    if per_decade >= 2.0:
        return "member"
    if per_decade <= 1.25 and min(rho[k0], rho[k1]) > floor and np.all(rho[window] > 0):
        return "non-member"
    return "inconclusive"


# ---------------------------------------------------------------------------
# Unimodular level sets and winding numbers


def level_set_measure(u, subsamples=64, merge_gap=32, pad=0):
    """Measure of {Re u < 0} for unimodular boundary samples ``u``.

    Inside each cell the phase is interpolated linearly between the end
    samples and the fraction of ``subsamples`` sub-points with negative real
    part is counted.  Cells whose phase step exceeds pi/2 cannot be resolved
    (near singular support the phase spins arbitrarily fast, and aliased
    steps can look small), so under-resolved cells closer than ``merge_gap``
    cells are joined into clusters, each widened by ``pad`` cells and
    assigned the equidistribution value 1/2.  NaN samples count as
    under-resolved.
    """
    u = u.values if isinstance(u, BoundaryGrid) else np.asarray(u)
    n = u.shape[0]
    psi = np.angle(u)
    dpsi = np.angle(np.exp(1j * (np.roll(psi, -1) - psi)))
    bad = ~np.isfinite(dpsi) | (np.abs(dpsi) > np.pi / 2)
    bad = _close_circular_gaps(bad, merge_gap, pad)
    s = (np.arange(subsamples) + 0.5) / subsamples
    good = ~bad
    phases = psi[good, None] + s[None, :] * dpsi[good, None]
    frac = np.zeros(n)
    frac[good] = np.mean(np.cos(phases) < 0.0, axis=1)
    frac[bad] = 0.5
    return float(frac.mean())


def _close_circular_gaps(mask, max_gap, pad):
    """Fill runs of False shorter than ``max_gap`` between True cells, then dilate."""
    n = mask.size
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        return mask
    out = mask.copy()
    nxt = np.roll(idx, -1)
    gaps = (nxt - idx) % n
    for i, g in zip(idx, gaps):
        if 1 < g <= max_gap:
            out[(i + np.arange(1, g)) % n] = True
    if pad:
        idx = np.nonzero(out)[0]
        for off in range(-pad, pad + 1):
            out[(idx + off) % n] = True
    return out


def winding_number(fn, r, n=4096):
    """Winding number about 0 of ``fn`` on the circle |z| = r.

    The argument is tracked at ``n`` points with unwrapping; raises if the
    function vanishes on the circle or the step between samples is too
    coarse to unwrap reliably.
    """
    z = r * grid_nodes(n)
    w = np.asarray(fn(z), dtype=np.complex128)
    if np.any(w == 0) or not np.all(np.isfinite(w)):
        raise ValueError("function vanishes or is singular on the tracking circle")
    steps = np.angle(np.roll(w, -1) / w)
    if np.max(np.abs(steps)) > 0.9 * np.pi:
        raise ValueError("argument changes too fast for the tracking grid; increase n")
    return int(round(steps.sum() / (2.0 * np.pi)))
