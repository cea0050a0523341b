"""
Additive measures on ``P(M_2)`` with no linear extension.

In ``M_2`` the only orthogonal pairs of nontrivial projections are antipodal
Bloch projections ``p(n), p(-n)``.  Any odd function ``g`` on the sphere
therefore gives an additive, bounded measure ``mu(p(n)) = c/2 + g(n)``.  A
linear functional can only produce affine functions of ``n``, so the sup
distance from ``mu`` to the nearest trace form measures the failure of
linearity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .algebra import Element, Projection
from .measures import PAULI, Frame2, bloch_vector

DEFAULT_GRID = 2048
CHEBYSHEV_CUBIC_GAP = 0.125


@dataclass(frozen=True)
class BlochVector:
    n: tuple

    def __post_init__(self):
        v = np.asarray(self.n, dtype=float)
        if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError(f"Bloch vector must be a unit 3-vector, got {self.n}")
        object.__setattr__(self, "n", tuple(float(t) for t in v))

    def __neg__(self):
        return BlochVector(tuple(-t for t in self.n))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.n, dtype=dtype)


def bloch_projection(n) -> Projection:
    """``(I + n . sigma) / 2``, the rank-one projection with Bloch vector ``n``."""
    v = np.asarray(n if not isinstance(n, BlochVector) else n.n, dtype=float)
    if v.shape != (3,) or abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise ValueError("bloch_projection needs a unit 3-vector")
    block = 0.5 * (np.eye(2) + sum(t * s for t, s in zip(v, PAULI)))
    return Projection((2,), [block], check=False)


def qubit_frame_measure(c: float, odd_coeffs=()) -> Frame2:
    """
    ``mu(p(n)) = c/2 + sum_k odd_coeffs[k] n_z**(2k+1)``.

    A single coefficient gives a linear measure; any higher odd power
    breaks linearity while keeping additivity.
    """
    power = [0.0] * (2 * len(odd_coeffs))
    for k, a in enumerate(odd_coeffs):
        power[2 * k + 1] = float(a)
    return Frame2.poly_nz(c, power)


def cubic_measure() -> Frame2:
    return qubit_frame_measure(1.0, [0.0, 0.5])


def fibonacci_sphere(size: int) -> np.ndarray:
    """Deterministic, nearly uniform points on the unit sphere, shape ``(size, 3)``."""
    if size < 1:
        raise ValueError("grid size must be positive")
    i = np.arange(size)
    z = 1.0 - (2.0 * i + 1.0) / size
    r = np.sqrt(1.0 - z * z)
    phi = i * np.pi * (3.0 - np.sqrt(5.0))
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


@dataclass
class NonlinearityCertificate:
    best_fit: Element
    residual: float
    witness: BlochVector
    grid_size: int


def minimax_affine_fit(points: np.ndarray, values: np.ndarray):
    """
    Chebyshev fit of ``values`` by ``(t + v . n) / 2`` over unit vectors ``n``.

    Linear program in ``(t, v_1, v_2, v_3, s)``: minimise ``s`` subject to
    ``|values_k - (t + v . n_k)/2| <= s``.  Returns ``(t, v, s)``.
    """
    m = len(points)
    design = 0.5 * np.column_stack([np.ones(m), points])
    ones = np.ones((m, 1))
    a_ub = np.vstack([np.hstack([design, -ones]), np.hstack([-design, -ones])])
    b_ub = np.concatenate([values, -values])
    cost = np.zeros(5)
    cost[-1] = 1.0
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * 4 + [(0, None)],
                  method="highs")
    if not res.success:
        raise ArithmeticError(f"minimax fit failed: {res.message}")
    return res.x[0], res.x[1:4], res.x[4]


def nonlinearity_residual(mu: Frame2, grid_size: int = DEFAULT_GRID) -> NonlinearityCertificate:
    """
    Sup distance, over a Fibonacci grid of rank-one projections, from ``mu`` to
    the best trace-form measure.  A positive residual certifies that ``mu``
    has no linear extension.
    """
    if grid_size < 100:
        raise ValueError("grid_size must be at least 100")
    points = fibonacci_sphere(grid_size)
    values = np.array([mu.rank_one_value(n) for n in points])
    t, v, _ = minimax_affine_fit(points, values)
    fitted = 0.5 * (t + points @ v)
    errors = np.abs(values - fitted)
    k = int(np.argmax(errors))
    witness = points[k] / np.linalg.norm(points[k])
    best = 0.5 * (t * np.eye(2) + sum(a * s for a, s in zip(v, PAULI)))
    return NonlinearityCertificate(best_fit=Element((2,), [best]), residual=float(errors[k]),
                                   witness=BlochVector(tuple(witness)), grid_size=grid_size)


def certificate_table(mu: Frame2, cert: NonlinearityCertificate) -> np.ndarray:
    """Rows ``(n_z, mu(p(n)), best-fit value)`` over the certificate grid, sorted by ``n_z``."""
    points = fibonacci_sphere(cert.grid_size)
    best = cert.best_fit.blocks[0]
    values = np.array([mu.rank_one_value(n) for n in points])
    # trace(rho p(n)) = (trace(rho) + v . n) / 2 with v the Bloch vector of rho
    fitted = 0.5 * (np.trace(best).real + points @ bloch_vector(best))
    rows = np.column_stack([points[:, 2], values, fitted])
    return rows[np.argsort(rows[:, 0], kind="stable")]
