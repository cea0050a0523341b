"""
Finitely additive measures on the projection lattice of a block algebra.

Three representations are supported:

* :class:`TraceForm` -- ``mu(p) = trace(rho p)``, the linear case;
* :class:`Frame2` -- a frame function on the rank-one projections of ``M_2``,
  ``mu(p(n)) = c/2 + odd(n)``;
* :class:`Table` -- a black box given by tabulated values and an optional
  fallback callable.

The functions below test the measure axioms on sampled projections and
compute variation, ``alpha``, the positivity shift and centre normalization
for trace-form measures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .algebra import (
    AlgebraShape,
    Element,
    Projection,
    _projection_test,
    matrix_functionals,
    random_unitary,
)
from .exceptions import (
    DegenerateMeasureError,
    RepresentationError,
    UnevaluableError,
    UnsupportedMeasureError,
)

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)

KEY_DECIMALS = 12
PSD_FLOOR = -1e-10


def bloch_vector(block: np.ndarray) -> np.ndarray:
    """Real vector ``n`` with ``block = (trace(block) I + n . sigma) / 2``."""
    return np.array([np.trace(block @ s).real for s in PAULI])


class ScalarMeasure:
    """Base class; subclasses implement :meth:`evaluate`."""

    shape: AlgebraShape

    def evaluate(self, p: Element) -> complex:
        raise NotImplementedError

    def __call__(self, p: Element) -> complex:
        return self.evaluate(p)


class TraceForm(ScalarMeasure):
    def __init__(self, rho: Element):
        self.rho = rho
        self.shape = rho.shape

    def evaluate(self, p):
        if p.shape != self.shape:
            raise RepresentationError("projection does not conform to the measure's shape")
        return complex(sum(np.sum(r.T * q) for r, q in zip(self.rho.blocks, p.blocks)))

    def __repr__(self):
        return f"TraceForm(shape={list(self.shape.blocks)})"


class Frame2(ScalarMeasure):
    """
    Frame-function measure on ``P(M_2)``.

    ``mu(0) = 0``, ``mu(1) = c`` and ``mu(p(n)) = c/2 + odd(n)`` on the rank-one
    projection with Bloch vector ``n``.  ``odd`` must satisfy
    ``odd(-n) = -odd(n)``, which is what makes the measure additive.
    ``power_coeffs[k]`` is the coefficient of ``n_z**k`` when ``odd`` is a
    polynomial in ``n_z``; it is kept for serialization.
    """

    def __init__(self, c: float, odd: Callable[[np.ndarray], float],
                 power_coeffs: Optional[Sequence[float]] = None, tol: float = 1e-8):
        self.c = float(c)
        self.odd = odd
        self.power_coeffs = None if power_coeffs is None else [float(a) for a in power_coeffs]
        self.tol = tol
        self.shape = AlgebraShape((2,))

    @classmethod
    def poly_nz(cls, c: float, power_coeffs: Sequence[float]) -> "Frame2":
        coeffs = [float(a) for a in power_coeffs]
        if any(a != 0.0 for a in coeffs[0::2]):
            raise RepresentationError("odd polynomial may only have odd powers of n_z")
        poly = np.polynomial.Polynomial(coeffs if coeffs else [0.0])

        def odd(n):
            return float(poly(n[2]))

        return cls(c, odd, coeffs)

    def rank_one_value(self, n: np.ndarray) -> float:
        return self.c / 2 + self.odd(np.asarray(n, dtype=float))

    def evaluate(self, p):
        if p.shape != self.shape:
            raise RepresentationError("Frame2 lives on the single-qubit algebra M_2")
        block = p.blocks[0]
        if not _projection_test(p, self.tol):
            raise RepresentationError("Frame2 can only be evaluated on projections")
        rank = int(round(np.trace(block).real))
        if rank == 0:
            return 0j
        if rank == 2:
            return complex(self.c)
        n = bloch_vector(block)
        return complex(self.rank_one_value(n / np.linalg.norm(n)))

    def __repr__(self):
        return f"Frame2(c={self.c}, power_coeffs={self.power_coeffs})"


def canonical_key(p: Element) -> tuple:
    """Hashable key for a projection, entries rounded to 12 decimals."""
    parts: list = [p.shape.blocks]
    for b in p.blocks:
        r = np.round(b, KEY_DECIMALS) + (0.0 + 0.0j)
        parts.append(tuple(r.real.ravel().tolist()))
        parts.append(tuple(r.imag.ravel().tolist()))
    return tuple(parts)


class Table(ScalarMeasure):
    """
    Tabulated measure.  Lookups are keyed by :func:`canonical_key`; misses go
    to ``oracle`` when one is given and raise :class:`UnevaluableError` otherwise.
    """

    def __init__(self, shape, entries=(), oracle: Optional[Callable[[Element], complex]] = None,
                 oracle_spec: Optional[dict] = None):
        self.shape = AlgebraShape.of(shape)
        self.entries: dict = {}
        self._points: list = []
        for p, value in entries:
            self.entries[canonical_key(p)] = complex(value)
            self._points.append((p, complex(value)))
        self.oracle = oracle
        self.oracle_spec = oracle_spec

    @classmethod
    def trace_power(cls, shape, power: int, entries=()) -> "Table":
        """Black box ``mu(p) = trace(p)**power``; additive only for power 1."""
        return cls(shape, entries, oracle=lambda p: complex(p.trace().real ** power),
                   oracle_spec={"kind": "trace_power", "power": power})

    def items(self):
        return list(self._points)

    def evaluate(self, p):
        if p.shape != self.shape:
            raise RepresentationError("projection does not conform to the table's shape")
        key = canonical_key(p)
        if key in self.entries:
            return self.entries[key]
        if self.oracle is not None:
            return complex(self.oracle(p))
        raise UnevaluableError("no table entry for this projection and no fallback oracle")

    def __repr__(self):
        return f"Table(shape={list(self.shape.blocks)}, entries={len(self.entries)})"


@dataclass
class VectorMeasure:
    """``m: P(A) -> C^d`` given by its coordinate measures; norm is max-coordinate."""

    components: list

    def __post_init__(self):
        if not self.components:
            raise RepresentationError("a vector measure needs at least one component")
        shapes = {m.shape for m in self.components}
        if len(shapes) != 1:
            raise RepresentationError("all components must share one shape")

    @property
    def shape(self) -> AlgebraShape:
        return self.components[0].shape

    @property
    def dimension(self) -> int:
        return len(self.components)

    def evaluate(self, p) -> np.ndarray:
        return np.array([m.evaluate(p) for m in self.components])

    __call__ = evaluate


# -- axioms ---------------------------------------------------------------

@dataclass
class AdditivityReport:
    trials: int
    max_violation: float
    worst_pair: Optional[tuple] = None
    bound_estimate: float = 0.0
    skipped: int = 0
    tol: float = 1e-9

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tol


def orthogonal_pair(shape: AlgebraShape, rng: np.random.Generator) -> tuple[Projection, Projection]:
    """
    Random orthogonal pair: pick a random subspace per block, then split it
    into two random complementary subspaces.  ``pq = 0`` holds by construction.
    """
    pb, qb = [], []
    for n in shape.blocks:
        r = int(rng.integers(0, n + 1))
        k = int(rng.integers(0, r + 1))
        basis = random_unitary(n, rng)[:, :r]
        if r:
            basis = basis @ random_unitary(r, rng)
        u, v = basis[:, :k], basis[:, k:]
        pb.append(u @ u.conj().T)
        qb.append(v @ v.conj().T)
    return Projection(shape, pb, check=False), Projection(shape, qb, check=False)


def additivity_check(mu: ScalarMeasure, trials: int = 200, seed: int = 0,
                     tol: float = 1e-9) -> AdditivityReport:
    """
    Largest violation of ``mu(p+q) = mu(p) + mu(q)`` over sampled orthogonal
    pairs, together with the largest sampled ``|mu(p)|``.  Pairs where the
    measure cannot be evaluated are skipped and counted.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    worst, worst_pair, bound, skipped = 0.0, None, 0.0, 0
    for _ in range(trials):
        p, q = orthogonal_pair(mu.shape, rng)
        s = Projection(mu.shape, (p + q).blocks, check=False)
        try:
            vp, vq, vs = mu.evaluate(p), mu.evaluate(q), mu.evaluate(s)
        except UnevaluableError:
            skipped += 1
            continue
        bound = max(bound, abs(vp), abs(vq), abs(vs))
        violation = abs(vs - vp - vq)
        if worst_pair is None or violation > worst:
            worst, worst_pair = violation, (p, q)
    return AdditivityReport(trials=trials, max_violation=float(worst), worst_pair=worst_pair,
                            bound_estimate=float(bound), skipped=skipped, tol=tol)


# -- functionals of trace-form measures -------------------------------------

def _hermitian_rho(mu, tol=1e-9) -> Element:
    if not isinstance(mu, TraceForm):
        raise UnsupportedMeasureError("only trace-form measures are supported here")
    if not mu.rho.is_selfadjoint(tol):
        raise UnsupportedMeasureError(
            "rho must be Hermitian; split a complex measure into real and imaginary parts first")
    return mu.rho


def real_part(mu: TraceForm) -> TraceForm:
    a, _ = mu.rho.hermitian_parts()
    return TraceForm(a)


def imag_part(mu: TraceForm) -> TraceForm:
    _, b = mu.rho.hermitian_parts()
    return TraceForm(b)


class VariationAlpha(NamedTuple):
    variation: float
    alpha: float


def compressed_spectrum(rho: Element, p: Element) -> np.ndarray:
    """Eigenvalues of ``p rho p`` restricted to the range of ``p``."""
    eigs = []
    for r, q in zip(rho.blocks, p.blocks):
        w, v = np.linalg.eigh(0.5 * (q + q.conj().T))
        basis = v[:, w > 0.5]
        if basis.shape[1]:
            c = basis.conj().T @ r @ basis
            eigs.append(np.linalg.eigvalsh(0.5 * (c + c.conj().T)))
    return np.concatenate(eigs) if eigs else np.zeros(0)


def variation_and_alpha(mu: TraceForm, p: Element) -> VariationAlpha:
    """
    ``V(p) = sup |mu(e)|`` and ``alpha(p) = sup mu(e)`` over ``e <= p``.

    Subprojections of ``p`` are subspaces of its range, and ``mu(e)`` is the
    trace of the compression of ``rho`` to that subspace, so the suprema are
    the positive (resp. absolute negative) eigenvalue sums of the compression.
    """
    rho = _hermitian_rho(mu)
    w = compressed_spectrum(rho, p)
    pos = float(w[w > 0].sum())
    neg = float(-w[w < 0].sum())
    return VariationAlpha(variation=max(pos, neg), alpha=pos)


def alpha_one(mu: TraceForm) -> float:
    return variation_and_alpha(mu, Element.identity(mu.shape)).alpha


def positive_spectral_projection(rho: Element) -> Projection:
    """Projection onto the span of eigenvectors of ``rho`` with positive eigenvalue."""
    blocks = []
    for r in rho.blocks:
        w, v = np.linalg.eigh(0.5 * (r + r.conj().T))
        u = v[:, w > 0]
        blocks.append(u @ u.conj().T)
    return Projection(rho.shape, blocks, check=False)


def positivity_shift(mu: TraceForm) -> TraceForm:
    """
    ``alpha(1) T - mu`` with ``T`` the unnormalized trace.  Since
    ``mu(e) <= alpha(1)`` for every minimal projection this is a positive
    measure; the result is checked to be positive semidefinite.
    """
    rho = _hermitian_rho(mu)
    if len(rho.shape) != 1:
        raise UnsupportedMeasureError("positivity_shift works on a single matrix block")
    a1 = alpha_one(mu)
    shifted = a1 * Element.identity(rho.shape) - rho
    lowest = min(np.linalg.eigvalsh(0.5 * (b + b.conj().T)).min() for b in shifted.blocks)
    if lowest < PSD_FLOOR:
        raise ArithmeticError(f"shifted measure is not positive (min eigenvalue {lowest:.3g})")
    return TraceForm(shifted)


class CentreNormalization(NamedTuple):
    sigma: list
    normalized: TraceForm
    scale: float


def centre_normalize(mu: TraceForm) -> CentreNormalization:
    """
    Subtract the central part of ``rho`` (``sigma_j`` times each block identity)
    and divide by the trace norm of what remains.  The result vanishes on the
    centre, has norm one as a functional and ``alpha(1) = 1/2``.
    """
    rho = _hermitian_rho(mu)
    sigma = [float(np.trace(b).real) / b.shape[0] for b in rho.blocks]
    centered = Element(rho.shape, [b - s * np.eye(b.shape[0]) for b, s in zip(rho.blocks, sigma)])
    scale = matrix_functionals(centered).trace_norm
    if scale <= 1e-12:
        raise DegenerateMeasureError("measure is central; nothing left after centering")
    return CentreNormalization(sigma=sigma, normalized=TraceForm(centered / scale), scale=scale)
