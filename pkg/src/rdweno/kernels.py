"""Sixth-order finite-difference and WENO fluxes for the second-derivative operator.

Every flux approximates ``g`` at the half point ``i + 1/2`` from the six values
``u[i-2], ..., u[i+3]`` so that ``u''(x_i) ~ (g[i+1/2] - g[i-1/2]) / dx**2``.

The per-window routines are numba-compiled and take an array plus the index
``j`` of ``u_i`` inside it; the public wrappers accept a bare 6-element window.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction as F

import numba
import numpy as np

from .grid import BoundarySpec, Grid, StateField, extend_with_ghosts, GHOST_WIDTH


class BlowUpError(FloatingPointError):
    """Raised when a spatial operator produces non-finite values."""


class DegenerateWeightsError(ZeroDivisionError):
    """Raised when the mapped LSZ weights cannot be normalized."""


class Scheme(enum.Enum):
    FD6 = "FD6"
    WENO_LSZ = "WENO_LSZ"
    MWENO = "MWENO"
    CWENO = "CWENO"

    @classmethod
    def parse(cls, name) -> Scheme:
        if isinstance(name, cls):
            return name
        key = str(name).strip().upper().replace("-", "_")
        if key == "FD":
            key = "FD6"
        if key == "LSZ":
            key = "WENO_LSZ"
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown scheme {name!r}; expected one of {choices}") from None


DEFAULT_EPSILON = {
    Scheme.FD6: 1e-6,  # unused
    Scheme.WENO_LSZ: 1e-6,
    Scheme.MWENO: 1e-30,
    Scheme.CWENO: 1e-40,
}

_SCHEME_CODE = {Scheme.FD6: 0, Scheme.WENO_LSZ: 1, Scheme.MWENO: 2, Scheme.CWENO: 3}


@dataclass(frozen=True)
class SchemeSpec:
    kind: Scheme
    epsilon: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    @classmethod
    def of(cls, kind, epsilon: float | None = None) -> SchemeSpec:
        kind = Scheme.parse(kind)
        return cls(kind, DEFAULT_EPSILON[kind] if epsilon is None else float(epsilon))


# Exact coefficient tables; floats are derived from these once.

FD_COEFFS_EXACT = (F(-1, 90), F(5, 36), F(-49, 36), F(49, 36), F(-5, 36), F(1, 90))

SUBSTENCIL_COEFFS_EXACT = (
    (F(1, 12), F(-1, 4), F(-3, 4), F(11, 12), F(0), F(0)),
    (F(0), F(1, 12), F(-5, 4), F(5, 4), F(-1, 12), F(0)),
    (F(0), F(0), F(-11, 12), F(3, 4), F(1, 4), F(-1, 12)),
)

CENTRAL_COEFFS_EXACT = (F(-3, 40), F(11, 24), F(-2), F(2), F(-11, 24), F(3, 40))

# (weight, row) pairs of the central smoothness indicator: sum of weight * (row . w)**2
CENTRAL_SMOOTHNESS_EXACT = (
    (F(4273, 20160), (1, -5, 10, -10, 5, -1)),
    (F(29, 345600), (5, 11, -70, 94, -47, 7)),
    (F(1, 3600), (35, -139, 230, -206, 103, -23)),
    (F(1, 576), (7, -51, 134, -166, 99, -23)),
    (F(1, 2304), (7, -56, 106, -76, 23, -4)),
    (F(1, 9216), (65, -353, 690, -602, 221, -21)),
    (F(1, 9216), (23, -63, -34, 186, -133, 21)),
    (F(1, 2304), (13, -28, 30, -28, 13, 0)),
    (F(2, 15), (1, -4, 6, -4, 1, 0)),
    (F(1, 1152), (1, -12, 22, -12, 1, 0)),
)


@dataclass(frozen=True)
class LinearWeightTable:
    d: tuple[F, F, F]
    sigma_plus: F
    sigma_minus: F
    gamma_plus: tuple[F, F, F]
    gamma_minus: tuple[F, F, F]
    theta: tuple[F, F, F, F]  # (theta_0, theta_1, theta_2, theta_C)

    @classmethod
    def from_split(cls, d=(F(-2, 15), F(19, 15), F(-2, 15)),
                   theta=(F(1, 6), F(1, 3), F(1, 6), F(1, 3))) -> LinearWeightTable:
        """Split signed weights into positive/negative parts with the 3|d| shift."""
        gp = [(dk + 3 * abs(dk)) / 2 for dk in d]
        gm = [g - dk for g, dk in zip(gp, d)]
        sp, sm = sum(gp), sum(gm)
        return cls(tuple(d), sp, sm, tuple(g / sp for g in gp), tuple(g / sm for g in gm), tuple(theta))


WEIGHTS = LinearWeightTable.from_split()

# (weight, row) pairs of the substencil smoothness indicators
SMOOTHNESS_EXACT = (
    ((F(13, 12), (1, -3, 3, -1, 0, 0)), (F(1, 4), (1, -5, 7, -3, 0, 0))),
    ((F(13, 12), (0, 1, -3, 3, -1, 0)), (F(1, 4), (0, 1, -1, -1, 1, 0))),
    ((F(13, 12), (0, 0, 1, -3, 3, -1)), (F(1, 4), (0, 0, -3, 7, -5, 1))),
)


def difference_form(coeffs) -> np.ndarray:
    """Rewrite a zero-sum 6-point stencil on the 5 consecutive differences ``w[j+1] - w[j]``.

    Constant data then cancels exactly instead of to round-off.
    """
    if sum(coeffs) != 0:
        raise ValueError("stencil coefficients must sum to zero")
    partial, out = 0, []
    for c in coeffs[:-1]:
        partial += c
        out.append(-partial)
    return np.array([float(c) for c in out])


FD_COEFFS = difference_form(FD_COEFFS_EXACT)
SUB_COEFFS = np.array([difference_form(row) for row in SUBSTENCIL_COEFFS_EXACT])
CENTRAL_COEFFS = difference_form(CENTRAL_COEFFS_EXACT)
BETA_WEIGHTS = np.array([[float(wt) for wt, _ in terms] for terms in SMOOTHNESS_EXACT])
BETA_ROWS = np.array([[difference_form(row) for _, row in terms] for terms in SMOOTHNESS_EXACT])
BETA_C_WEIGHTS = np.array([float(wt) for wt, _ in CENTRAL_SMOOTHNESS_EXACT])
BETA_C_ROWS = np.array([difference_form(row) for _, row in CENTRAL_SMOOTHNESS_EXACT])

D = np.array([float(v) for v in WEIGHTS.d])
SIGMA_PLUS = float(WEIGHTS.sigma_plus)
SIGMA_MINUS = float(WEIGHTS.sigma_minus)
GAMMA_PLUS = np.array([float(v) for v in WEIGHTS.gamma_plus])
GAMMA_MINUS = np.array([float(v) for v in WEIGHTS.gamma_minus])
THETA = np.array([float(v) for v in WEIGHTS.theta])

_jit = numba.njit(cache=True, error_model="numpy")


@_jit
def _diffs(u, j):
    return (u[j - 1] - u[j - 2], u[j] - u[j - 1], u[j + 1] - u[j], u[j + 2] - u[j + 1], u[j + 3] - u[j + 2])


@_jit
def _dot5(c, d):
    return c[0] * d[0] + c[1] * d[1] + c[2] * d[2] + c[3] * d[3] + c[4] * d[4]


@_jit
def _fd_flux(u, j):
    return _dot5(FD_COEFFS, _diffs(u, j))


@_jit
def _central_flux(u, j):
    return _dot5(CENTRAL_COEFFS, _diffs(u, j))


@_jit
def _substencil_fluxes(u, j):
    d = _diffs(u, j)
    return _dot5(SUB_COEFFS[0], d), _dot5(SUB_COEFFS[1], d), _dot5(SUB_COEFFS[2], d)


@_jit
def _beta(k, d):
    return (BETA_WEIGHTS[k, 0] * _dot5(BETA_ROWS[k, 0], d) ** 2
            + BETA_WEIGHTS[k, 1] * _dot5(BETA_ROWS[k, 1], d) ** 2)


@_jit
def _smoothness(u, j):
    d = _diffs(u, j)
    return _beta(0, d), _beta(1, d), _beta(2, d)


@_jit
def _central_smoothness(u, j):
    d = _diffs(u, j)
    s = 0.0
    for r in range(BETA_C_ROWS.shape[0]):
        s += BETA_C_WEIGHTS[r] * _dot5(BETA_C_ROWS[r], d) ** 2
    return s


@_jit
def _normalized(a0, a1, a2):
    s = a0 + a1 + a2
    return a0 / s, a1 / s, a2 / s


@_jit
def _mapped(w, d):
    return w * (d + d * d - 3.0 * d * w + w * w) / (d * d + w * (1.0 - 2.0 * d))


@_jit
def _lsz_weights(b0, b1, b2, eps):
    q0, q1, q2 = 1.0 / (b0 + eps) ** 2, 1.0 / (b1 + eps) ** 2, 1.0 / (b2 + eps) ** 2
    p0, p1, p2 = _normalized(GAMMA_PLUS[0] * q0, GAMMA_PLUS[1] * q1, GAMMA_PLUS[2] * q2)
    m0, m1, m2 = _normalized(GAMMA_MINUS[0] * q0, GAMMA_MINUS[1] * q1, GAMMA_MINUS[2] * q2)
    a0 = _mapped(SIGMA_PLUS * p0 - SIGMA_MINUS * m0, D[0])
    a1 = _mapped(SIGMA_PLUS * p1 - SIGMA_MINUS * m1, D[1])
    a2 = _mapped(SIGMA_PLUS * p2 - SIGMA_MINUS * m2, D[2])
    return _normalized(a0, a1, a2)


@_jit
def _mweno_weights(b0, b1, b2, eps):
    tau = abs(b0 - b2)
    q0 = 1.0 + (tau / (b0 + eps)) ** 2
    q1 = 1.0 + (tau / (b1 + eps)) ** 2
    q2 = 1.0 + (tau / (b2 + eps)) ** 2
    p0, p1, p2 = _normalized(GAMMA_PLUS[0] * q0, GAMMA_PLUS[1] * q1, GAMMA_PLUS[2] * q2)
    m0, m1, m2 = _normalized(GAMMA_MINUS[0] * q0, GAMMA_MINUS[1] * q1, GAMMA_MINUS[2] * q2)
    return (SIGMA_PLUS * p0 - SIGMA_MINUS * m0,
            SIGMA_PLUS * p1 - SIGMA_MINUS * m1,
            SIGMA_PLUS * p2 - SIGMA_MINUS * m2)


@_jit
def _cweno_weights(b0, b1, b2, bc, eps):
    tau6 = abs(bc - (5.0 * b0 + 14.0 * b1 + 5.0 * b2) / 24.0)
    a0 = THETA[0] * (1.0 + tau6 / (b0 + eps))
    a1 = THETA[1] * (1.0 + tau6 / (b1 + eps))
    a2 = THETA[2] * (1.0 + tau6 / (b2 + eps))
    ac = THETA[3] * (1.0 + tau6 / (bc + eps))
    s = a0 + a1 + a2 + ac
    return a0 / s, a1 / s, a2 / s, ac / s


@_jit
def _flux(u, j, code, eps):
    if code == 0:
        return _fd_flux(u, j)
    g0, g1, g2 = _substencil_fluxes(u, j)
    b0, b1, b2 = _smoothness(u, j)
    if code == 1:
        w0, w1, w2 = _lsz_weights(b0, b1, b2, eps)
        return w0 * g0 + w1 * g1 + w2 * g2
    if code == 2:
        w0, w1, w2 = _mweno_weights(b0, b1, b2, eps)
        return w0 * g0 + w1 * g1 + w2 * g2
    bc = _central_smoothness(u, j)
    w0, w1, w2, wc = _cweno_weights(b0, b1, b2, bc, eps)
    return w0 * g0 + w1 * g1 + w2 * g2 + wc * _central_flux(u, j)


@_jit
def _flux_sweep(u_ext, code, eps, out):
    # out[k] = flux at half point (k - 1) + 1/2 of the unextended grid, k = 0..N
    ghost = 3
    for k in range(out.shape[0]):
        out[k] = _flux(u_ext, k - 1 + ghost, code, eps)


@_jit
def _second_derivative_row(u_ext, code, eps, inv_dx2, out):
    n_points = out.shape[0]
    fluxes = np.empty(n_points)
    _flux_sweep(u_ext, code, eps, fluxes)
    out[0] = 0.0
    out[n_points - 1] = 0.0
    for i in range(1, n_points - 1):
        out[i] = (fluxes[i + 1] - fluxes[i]) * inv_dx2


# Public per-window API

def _window(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.shape != (6,):
        raise ValueError(f"stencil window must have exactly 6 values, got shape {w.shape}")
    return w


def fd_flux(window) -> float:
    return _fd_flux(_window(window), 2)


def substencil_fluxes(window) -> np.ndarray:
    return np.array(_substencil_fluxes(_window(window), 2))


def central_flux(window) -> float:
    return _central_flux(_window(window), 2)


def smoothness_indicators(window) -> np.ndarray:
    return np.array(_smoothness(_window(window), 2))


def central_smoothness(window) -> float:
    return _central_smoothness(_window(window), 2)


def lsz_weights(betas, eps: float) -> np.ndarray:
    b0, b1, b2 = (float(b) for b in betas)
    q = 1.0 / (np.array([b0, b1, b2]) + eps) ** 2
    wp = GAMMA_PLUS * q / np.sum(GAMMA_PLUS * q)
    wm = GAMMA_MINUS * q / np.sum(GAMMA_MINUS * q)
    mapped = _mapped(SIGMA_PLUS * wp - SIGMA_MINUS * wm, D)
    total = mapped.sum()
    if total == 0.0 or not np.isfinite(total):
        raise DegenerateWeightsError(f"mapped LSZ weights {mapped} cannot be normalized")
    return mapped / total


def mweno_weights(betas, eps: float) -> np.ndarray:
    b0, b1, b2 = (float(b) for b in betas)
    return np.array(_mweno_weights(b0, b1, b2, eps))


def cweno_weights(betas, beta_c: float, eps: float) -> np.ndarray:
    """Weights ordered ``(w0, w1, w2, wC)``."""
    b0, b1, b2 = (float(b) for b in betas)
    return np.array(_cweno_weights(b0, b1, b2, float(beta_c), eps))


def weno_flux(window, spec: SchemeSpec) -> float:
    w = _window(window)
    if spec.kind is Scheme.WENO_LSZ:
        # route through the raising wrapper so degenerate weights surface as an error
        weights = lsz_weights(smoothness_indicators(w), spec.epsilon)
        return float(weights @ substencil_fluxes(w))
    return _flux(w, 2, _SCHEME_CODE[spec.kind], spec.epsilon)


# Whole-grid operators

def half_point_fluxes(extended_row: np.ndarray, spec: SchemeSpec) -> np.ndarray:
    """Fluxes at ``x_{-1/2}, x_{1/2}, ..., x_{N-1/2}`` from a row padded with 3 ghosts."""
    row = np.ascontiguousarray(extended_row, dtype=float)
    out = np.empty(row.shape[0] - 2 * GHOST_WIDTH)
    _flux_sweep(row, _SCHEME_CODE[spec.kind], spec.epsilon, out)
    return out


def second_derivative_values(extended: np.ndarray, dx: float, spec: SchemeSpec) -> np.ndarray:
    """Non-raising core of :func:`second_derivative` on a ghost-extended array."""
    n_species, n_ext = extended.shape
    out = np.empty((n_species, n_ext - 2 * GHOST_WIDTH))
    code = _SCHEME_CODE[spec.kind]
    for s in range(n_species):
        _second_derivative_row(np.ascontiguousarray(extended[s]), code, spec.epsilon, 1.0 / dx**2, out[s])
    return out


def second_derivative(field: StateField, grid: Grid, bc: BoundarySpec, spec: SchemeSpec) -> np.ndarray:
    """Flux-difference approximation of ``u_xx`` at interior nodes; boundary entries are 0."""
    field.check_grid(grid)
    out = second_derivative_values(extend_with_ghosts(field, bc), grid.dx, spec)
    if not np.all(np.isfinite(out)):
        raise BlowUpError("second derivative produced non-finite values")
    return out
