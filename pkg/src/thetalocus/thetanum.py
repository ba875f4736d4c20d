"""Riemann theta functions with half-integer characteristics.

    theta_delta(Omega, z) = sum_m exp(pi i [(m+a) Omega (m+a)^T + 2 (m+a)(z+b)^T])

with ``a = delta'`` and ``b = delta''``.  The sum runs over the integer
vectors inside an ellipsoid ``q(m) <= R^2`` and every returned number carries
a bound on ``|returned - exact|`` made of two parts:

* truncation: the omitted terms form a shifted lattice whose points are at
  least ``rho = sqrt(lambda_min(Im Omega))`` apart, so disjoint balls of radius
  ``rho/2`` compare the tail with a radial Gaussian integral, evaluated in
  closed form with incomplete gamma functions;
* rounding: a per-term bound on the error of the complex exponential
  (proportional to the size of its argument) plus the final rounding of the
  exactly-rounded (``math.fsum``) summation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import gammaincc, gammaln

from .charalg import Characteristic
from .siegel import DEFAULT_TOL, PeriodMatrix, SiegelError, as_period_matrix

DEFAULT_EVAL_TOL = 1e-10
MAX_RADIUS = 40.0
MAX_POINTS = 20_000_000
TOL_ZERO = 1e-8
TOL_NONZERO = 1e-4
INDETERMINATE = ">=3 or indeterminate"

_U = np.finfo(float).eps / 2


class TruncationError(ArithmeticError):
    """The requested tolerance cannot be certified; ``best_bound`` is what was reached."""

    def __init__(self, message: str, best_bound: float, radius: float):
        super().__init__(message)
        self.best_bound = best_bound
        self.radius = radius


class ResampleNeeded(ArithmeticError):
    """A sample point sits too close to a zero of the denominator."""


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    tail_bound: float
    radius: float
    n_terms: int = 0
    scale: float = 1.0  # largest retained term magnitude

    def normalized(self) -> float:
        return abs(self.value) / self.scale

    def to_json(self) -> dict:
        return {
            "re": self.value.real,
            "im": self.value.imag,
            "tail_bound": self.tail_bound,
            "radius": self.radius,
            "n_terms": self.n_terms,
            "scale": self.scale,
        }


@dataclass(frozen=True)
class JetAtZero:
    """Value, z-gradient and z-Hessian of theta at z = 0, each with its own bound."""

    value: complex
    gradient: np.ndarray
    hessian: np.ndarray
    value_bound: float
    gradient_bound: float
    hessian_bound: float
    radius: float
    scales: tuple[float, float, float] = field(default=(1.0, 1.0, 1.0))

    def normalized(self) -> tuple[float, float, float]:
        """Magnitudes of value, gradient and Hessian relative to their largest terms."""
        s0, s1, s2 = self.scales
        return (
            abs(self.value) / s0,
            float(np.max(np.abs(self.gradient))) / s1,
            float(np.max(np.abs(self.hessian))) / s2,
        )


# --- truncation bound ---------------------------------------------------------


def _upper_moment(n: int, s0: float) -> float:
    """Integral of s^n exp(-pi s^2) over [s0, inf), s0 >= 0."""
    h = 0.5 * (n + 1)
    return 0.5 * math.exp(gammaln(h) - h * math.log(math.pi)) * float(gammaincc(h, math.pi * s0 * s0))


def tail_bound(genus: int, radius: float, rho: float, order: int = 0,
               alpha: float = 1.0, beta: float = 0.0) -> float:
    """Bound on sum over lattice points v with |v| > radius of (alpha|v| + beta)^order exp(-pi|v|^2).

    The points must be pairwise at least ``rho`` apart and ``radius >= rho``.
    """
    if radius < rho:
        return math.inf
    poly = P.polypow([alpha * rho + beta, alpha], order)
    poly = P.polymul(poly, P.polypow([0.5 * rho, 1.0], genus - 1))
    s0 = radius - rho
    integral = sum(c * _upper_moment(n, s0) for n, c in enumerate(poly))
    return genus * (2.0 / rho) ** genus * integral


# --- lattice enumeration ------------------------------------------------------


@dataclass
class _Setup:
    genus: int
    omega: np.ndarray
    y: np.ndarray
    y_inv: np.ndarray
    rho: float
    a: np.ndarray
    b: np.ndarray
    z: np.ndarray
    center: np.ndarray  # minimiser of the real part of the exponent, in x = m + a coordinates
    growth: float  # exp(pi w Y^{-1} w), w = Im z


def _setup(delta: Characteristic, omega, z) -> _Setup:
    omega = as_period_matrix(omega)
    g = omega.genus
    if delta.genus != g:
        raise SiegelError(f"genus mismatch: characteristic {delta.genus}, Omega {g}")
    y = omega.imag
    lam = float(np.linalg.eigvalsh(y)[0])
    if lam < 10 * DEFAULT_TOL:
        raise SiegelError(f"Im Omega too close to degenerate (smallest eigenvalue {lam:.3e})")
    z = np.zeros(g, dtype=complex) if z is None else np.asarray(z, dtype=complex).reshape(g)
    a, b = delta.shifts()
    y_inv = np.linalg.inv(y)
    w = z.imag
    center = -y_inv @ w
    growth_exp = math.pi * float(w @ y_inv @ w)
    if growth_exp > 700:
        raise SiegelError("Im z is too large for double-precision evaluation")
    return _Setup(g, omega.matrix, y, y_inv, math.sqrt(lam), a, b, z, center, math.exp(growth_exp))


def _points(s: _Setup, radius: float) -> np.ndarray:
    """All x = m + a (m integral) with (x - c) Y (x - c) <= radius^2, shape (n, g)."""
    half = radius * np.sqrt(np.diag(s.y_inv))
    lo = np.ceil(s.center - s.a - half).astype(int)
    hi = np.floor(s.center - s.a + half).astype(int)
    sizes = np.maximum(hi - lo + 1, 0)
    if int(np.prod(sizes.astype(float))) > MAX_POINTS:
        raise TruncationError("lattice box too large", math.inf, radius)
    axes = [np.arange(l, h + 1) for l, h in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, s.genus)
    x = grid + s.a
    d = x - s.center
    q = np.einsum("ni,ij,nj->n", d, s.y, d)
    return x[q <= radius * radius]


def _choose_radius(s: _Setup, order: int, budget: float, max_radius: float) -> tuple[float, float]:
    alpha = 1.0 / s.rho
    beta = float(np.linalg.norm(s.center))
    r = max(s.rho + 0.5, 1.0)
    best = math.inf
    while r <= max_radius:
        bound = max(
            s.growth * (2 * math.pi) ** k * tail_bound(s.genus, r, s.rho, k, alpha, beta)
            for k in range(order + 1)
        )
        best = min(best, bound)
        if bound <= budget:
            return r, bound
        r += 0.25
    raise TruncationError(
        f"truncation bound {best:.3e} above budget {budget:.3e} at radius cap {max_radius}",
        best, max_radius,
    )


def _fsum_complex(values: np.ndarray) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def _lattice_sums(delta, omega, z, max_order: int, tol: float, max_radius: float):
    """Terms and bounds for derivative orders 0..max_order at the point z."""
    s = _setup(delta, omega, z)
    budget = 0.5 * tol
    radius, _ = _choose_radius(s, max_order, budget, max_radius)
    x = _points(s, radius)
    zb = s.z + s.b
    exponent = 1j * math.pi * (np.einsum("ni,ij,nj->n", x, s.omega, x) + 2 * x @ zb)
    terms = np.exp(exponent)
    # rounding in exp(): relative error grows with |exponent|, plus the quadratic form itself
    ax = np.abs(x)
    exp_size = math.pi * (np.einsum("ni,ij,nj->n", ax, np.abs(s.omega), ax) + 2 * ax @ np.abs(zb))
    rel_err = _U * ((2 * s.genus**2 + 8) * exp_size + 8)
    alpha, beta = 1.0 / s.rho, float(np.linalg.norm(s.center))
    out = []
    for k in range(max_order + 1):
        trunc = s.growth * (2 * math.pi) ** k * tail_bound(s.genus, radius, s.rho, k, alpha, beta)
        out.append((k, trunc))
    return s, radius, x, terms, rel_err, out


def _finish(total: complex, mags: np.ndarray, rel_err: np.ndarray, trunc: float, k: int) -> tuple[float, float]:
    rounding = float(np.sum(mags * (rel_err + (k + 2) * _U))) * (1 + 1e-10) + _U * abs(total)
    scale = float(np.max(mags)) if mags.size else 0.0
    return trunc + rounding, scale


def eval_theta(delta: Characteristic, omega, z=None, tol: float = DEFAULT_EVAL_TOL,
               max_radius: float = MAX_RADIUS) -> ThetaValue:
    """Evaluate ``theta_delta(Omega, z)`` with a certified error bound ``<= tol``.

    >>> from thetalocus.siegel import PeriodMatrix
    >>> v = eval_theta(Characteristic("0", "0"), PeriodMatrix([[1j]]))
    >>> round(v.value.real, 12)
    1.086434811213
    """
    s, radius, x, terms, rel_err, bounds = _lattice_sums(delta, omega, z, 0, tol, max_radius)
    total = _fsum_complex(terms)
    bound, scale = _finish(total, np.abs(terms), rel_err, bounds[0][1], 0)
    if not bound <= tol:
        raise TruncationError(f"error bound {bound:.3e} exceeds tolerance {tol:.1e}", bound, radius)
    return ThetaValue(total, float(bound), float(radius), len(terms), float(scale))


def eval_thetanull(delta: Characteristic, omega, tol: float = DEFAULT_EVAL_TOL,
                   max_radius: float = MAX_RADIUS) -> ThetaValue:
    return eval_theta(delta, omega, None, tol, max_radius)


def jet_at_zero(delta: Characteristic, omega, tol: float = DEFAULT_EVAL_TOL,
                max_radius: float = MAX_RADIUS) -> JetAtZero:
    """Value, gradient and Hessian in z at z = 0 from the term-wise differentiated series."""
    s, radius, x, terms, rel_err, bounds = _lattice_sums(delta, omega, None, 2, tol, max_radius)
    g = s.genus
    tpi = 2j * math.pi
    value = _fsum_complex(terms)
    vb, s0 = _finish(value, np.abs(terms), rel_err, bounds[0][1], 0)

    grad = np.empty(g, dtype=complex)
    gb, s1 = 0.0, 0.0
    for j in range(g):
        t = tpi * x[:, j] * terms
        grad[j] = _fsum_complex(t)
        b_, sc = _finish(grad[j], np.abs(t), rel_err, bounds[1][1], 1)
        gb, s1 = max(gb, b_), max(s1, sc)

    hess = np.empty((g, g), dtype=complex)
    hb, s2 = 0.0, 0.0
    for j in range(g):
        for k in range(j, g):
            t = tpi * tpi * x[:, j] * x[:, k] * terms
            hess[j, k] = hess[k, j] = _fsum_complex(t)
            b_, sc = _finish(hess[j, k], np.abs(t), rel_err, bounds[2][1], 2)
            hb, s2 = max(hb, b_), max(s2, sc)

    worst = max(vb, gb, hb)
    if not worst <= tol:
        raise TruncationError(f"jet error bound {worst:.3e} exceeds tolerance {tol:.1e}", worst, radius)
    tiny = np.finfo(float).tiny
    return JetAtZero(value, grad, hess, vb, gb, hb, radius,
                     (max(s0, tiny), max(s1, tiny), max(s2, tiny)))


def heat_residual(delta: Characteristic, omega, j: int, k: int, tol: float = DEFAULT_EVAL_TOL,
                  fd_step: float = 1e-5) -> float:
    """``|2 pi i (1 + [j == k]) d theta / d Omega_jk - d^2 theta / dz_j dz_k|`` at z = 0.

    ``j`` and ``k`` are 0-based.  The Omega-derivative is a central difference of
    thetanull values that moves ``Omega_jk`` and ``Omega_kj`` together; the
    z-Hessian comes from :func:`jet_at_zero`.
    """
    omega = as_period_matrix(omega)
    g = omega.genus
    if not (0 <= j < g and 0 <= k < g):
        raise IndexError(f"indices ({j}, {k}) out of range for genus {g}")
    e = np.zeros((g, g), dtype=complex)
    e[j, k] = e[k, j] = 1.0
    try:
        plus = PeriodMatrix(omega.matrix + fd_step * e)
        minus = PeriodMatrix(omega.matrix - fd_step * e)
    except SiegelError as exc:
        raise SiegelError(f"finite-difference step leaves Siegel space: {exc}") from exc
    d_omega = (eval_thetanull(delta, plus, tol).value - eval_thetanull(delta, minus, tol).value) / (2 * fd_step)
    lhs = 2j * math.pi * (2.0 if j == k else 1.0) * d_omega
    rhs = jet_at_zero(delta, omega, tol).hessian[j, k]
    return float(abs(lhs - rhs))


def classify(magnitude: float, tol_zero: float = TOL_ZERO, tol_nonzero: float = TOL_NONZERO) -> str:
    """Two-threshold rule: ``"zero"``, ``"nonzero"`` or ``"indeterminate"`` in the gap."""
    if magnitude < tol_zero:
        return "zero"
    if magnitude > tol_nonzero:
        return "nonzero"
    return "indeterminate"


def vanishing_order_at_zero(delta: Characteristic, omega, tol: float = DEFAULT_EVAL_TOL,
                            tol_zero: float = TOL_ZERO, tol_nonzero: float = TOL_NONZERO):
    """Order of vanishing of ``z -> theta_delta(Omega, z)`` at the origin.

    Returns 0, 1 or 2, or :data:`INDETERMINATE` when every jet component is
    zero or a magnitude falls between the two thresholds.
    """
    jet = jet_at_zero(delta, omega, tol)
    for order, mag in enumerate(jet.normalized()):
        c = classify(mag, tol_zero, tol_nonzero)
        if c == "nonzero":
            return order
        if c == "indeterminate":
            return INDETERMINATE
    return INDETERMINATE


def periodicity_sign(delta: Characteristic, j: int) -> int:
    """``theta_delta(Omega, z + e_j) = sign * theta_delta(Omega, z)`` with sign ``exp(2 pi i delta'_j)``."""
    return -1 if delta.top[j] else 1


def _ratios(num_delta, omega, z_samples, shifted, tol, margin, multiplier=None):
    zero = Characteristic.zero(num_delta.genus)
    out = []
    for z in z_samples:
        z = np.asarray(z, dtype=complex)
        den = eval_theta(zero, omega, shifted(z), tol)
        if den.normalized() < margin:
            raise ResampleNeeded(f"theta_0 at shifted argument is {abs(den.value):.3e} for z={z}")
        num = eval_theta(num_delta, omega, z, tol).value
        if multiplier is not None:
            num /= multiplier(z)
        out.append(num / den.value)
    return out


def _max_deviation(ratios: Sequence[complex]) -> float:
    if len(ratios) < 2:
        raise ValueError("need at least two sample points")
    worst = 0.0
    for ra in ratios:
        for rb in ratios:
            worst = max(worst, abs(ra - rb) / abs(ra))
    return worst


def shift_ratio_check(delta: Characteristic, omega, z_samples, tol: float = DEFAULT_EVAL_TOL,
                      margin: float = TOL_NONZERO) -> float:
    """Spread of ``theta_delta(Omega, z) / theta_0(Omega, z + delta' + delta'' Omega)`` over samples.

    Returns ``max |r(z_a) - r(z_b)| / |r(z_a)|``.  The argument is shifted
    exactly as written, ``delta'`` as a real translation and ``delta''`` along
    ``Omega``.  Compare :func:`shift_multiplier_check`, which uses the shift
    that the series actually produces.
    """
    omega = as_period_matrix(omega)
    a, b = delta.shifts()
    shifted = lambda z: z + a + omega.matrix @ b  # noqa: E731
    return _max_deviation(_ratios(delta, omega, z_samples, shifted, tol, margin))


def shift_multiplier(delta: Characteristic, omega, z) -> complex:
    """``exp(pi i a Omega a + 2 pi i a (z + b))`` with ``a = delta'``, ``b = delta''``.

    Reindexing the series gives
    ``theta_delta(Omega, z) = shift_multiplier * theta_0(Omega, z + b + Omega a)``.
    """
    omega = as_period_matrix(omega)
    a, b = delta.shifts()
    z = np.asarray(z, dtype=complex)
    return complex(np.exp(1j * math.pi * (a @ omega.matrix @ a + 2 * a @ (z + b))))


def shift_multiplier_check(delta: Characteristic, omega, z_samples, tol: float = DEFAULT_EVAL_TOL,
                           margin: float = TOL_NONZERO) -> float:
    """Like :func:`shift_ratio_check` for the exact reindexing identity.

    The ratio ``theta_delta(Omega, z) / (exp(2 pi i a z) theta_0(Omega, z + b + Omega a))``
    is the constant ``exp(pi i a Omega a + 2 pi i a b)``; the returned spread
    should sit at rounding level.
    """
    omega = as_period_matrix(omega)
    a, b = delta.shifts()
    shifted = lambda z: z + b + omega.matrix @ a  # noqa: E731
    mult = lambda z: np.exp(2j * math.pi * (a @ z))  # noqa: E731
    return _max_deviation(_ratios(delta, omega, z_samples, shifted, tol, margin, mult))


def theta_sum_at_radius(delta: Characteristic, omega, z=None, radius: float = 5.0) -> complex:
    """Plain truncated sum over ``q(m) <= radius^2``, no bound; used to audit the bounds."""
    s = _setup(delta, omega, z)
    x = _points(s, radius)
    zb = s.z + s.b
    terms = np.exp(1j * math.pi * (np.einsum("ni,ij,nj->n", x, s.omega, x) + 2 * x @ zb))
    return _fsum_complex(terms)
