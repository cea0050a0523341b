"""
Linear extension of finitely additive measures.

In a block algebra the projections span everything, so a measure that is
the restriction of a linear functional is pinned down by its values on
``n_j**2`` projections per block.  :func:`reconstruct` solves for the
representing matrix ``rho`` on such a spanning family and then checks the
fit on independent random projections: a small residual certifies the
extension, a large one shows the measure has no linear extension (the
``M_2`` pathology) or was never additive.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .algebra import (
    AlgebraShape,
    Element,
    Projection,
    dyadic_projections,
    random_projection,
    random_unitary,
    spectral_decompose,
    trace_norm,
)
from .exceptions import ExtensionError
from .measures import ScalarMeasure, VectorMeasure, positive_spectral_projection

VERIFY_SAMPLES = 64


@dataclass(frozen=True)
class SpanningFamily:
    """``n**2`` projections in ``M_n`` whose linear span is all of ``M_n``."""

    n: int
    projections: tuple
    block: int = 0

    def gram_matrix(self) -> np.ndarray:
        vecs = np.array([p.ravel() for p in self.projections])
        return vecs.conj() @ vecs.T

    def gram_rank(self) -> int:
        return int(np.linalg.matrix_rank(self.gram_matrix()))

    def __len__(self):
        return len(self.projections)


def _rank_one(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def spanning_projections(n: int, order: Optional[Sequence[int]] = None,
                         block: int = 0) -> SpanningFamily:
    """
    Diagonal units ``e_ii``, then for each ``i < l`` the rank-one projections
    onto ``(e_i + e_l)/sqrt 2`` and ``(e_i + i e_l)/sqrt 2``.  ``order`` is an
    optional permutation of the family.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    eye = np.eye(n, dtype=np.complex128)
    family = [_rank_one(eye[i]) for i in range(n)]
    for i in range(n):
        for l in range(i + 1, n):
            family.append(_rank_one((eye[i] + eye[l]) / np.sqrt(2)))
            family.append(_rank_one((eye[i] + 1j * eye[l]) / np.sqrt(2)))
    if order is not None:
        order = list(order)
        if sorted(order) != list(range(len(family))):
            raise ValueError("order must be a permutation of the family")
        family = [family[k] for k in order]
    return SpanningFamily(n=n, projections=tuple(family), block=block)


class Status(enum.Enum):
    EXTENDED = "extended"
    I2_OBSTRUCTION = "i2_obstruction"
    NOT_A_MEASURE = "not_a_measure"


@dataclass
class ExtensionResult:
    rho: Element
    residual: float
    verified_on: int
    status: Status
    tol: float = 1e-8

    @property
    def extended(self) -> bool:
        return self.status is Status.EXTENDED


def _embedded(shape: AlgebraShape, j: int, block: np.ndarray) -> Projection:
    return Projection(shape, Element.embed(shape, j, block).blocks, check=False)


def _trace_pairing(rho: Element, p: Element) -> complex:
    return complex(sum(np.sum(r.T * q) for r, q in zip(rho.blocks, p.blocks)))


def verification_projections(shape: AlgebraShape, samples: int, rng) -> list[Projection]:
    """
    ``samples`` projections inside each block with ranks cycling through
    ``1..n_j-1``, plus ``samples`` projections with random rank in every block.
    """
    points = []
    k = len(shape.blocks)
    for j, n in enumerate(shape.blocks):
        ranks = list(range(1, n)) or [1]
        for s in range(samples):
            r = [0] * k
            r[j] = ranks[s % len(ranks)]
            points.append(random_projection(shape, r, rng))
    for _ in range(samples):
        r = [int(rng.integers(0, n + 1)) for n in shape.blocks]
        points.append(random_projection(shape, r, rng))
    return points


def reconstruct(mu: ScalarMeasure, tol: float = 1e-8, verify_samples: int = VERIFY_SAMPLES,
                seed: int = 0, family_seed: Optional[int] = None) -> ExtensionResult:
    """
    Representing matrix of the linear extension of ``mu``, with a certificate.

    Per block, ``trace(rho_j p) = mu(p)`` is solved over the spanning family
    (a square, nonsingular system).  The solution is then checked on the
    spanning family and on random projections; ``residual`` is the largest
    deviation ``|mu(p) - trace(rho p)|``.  ``family_seed`` shuffles the
    spanning family, which must not change the answer.
    """
    shape = mu.shape
    order_rng = None if family_seed is None else np.random.default_rng(family_seed)
    blocks = []
    checks = []
    for j, n in enumerate(shape.blocks):
        order = None if order_rng is None else order_rng.permutation(n * n)
        family = spanning_projections(n, order=order, block=j)
        points = [_embedded(shape, j, p) for p in family.projections]
        values = np.array([mu.evaluate(p) for p in points])
        system = np.array([p.T.ravel() for p in family.projections])
        blocks.append(np.linalg.solve(system, values).reshape(n, n))
        checks.extend(zip(points, values))
    rho = Element(shape, blocks)

    rng = np.random.default_rng(seed)
    for p in verification_projections(shape, verify_samples, rng):
        checks.append((p, mu.evaluate(p)))
    residual = max(abs(v - _trace_pairing(rho, p)) for p, v in checks)

    if residual <= tol:
        status = Status.EXTENDED
    elif shape.has_I2_summand:
        status = Status.I2_OBSTRUCTION
    else:
        status = Status.NOT_A_MEASURE
    return ExtensionResult(rho=rho, residual=float(residual), verified_on=len(checks),
                           status=status, tol=tol)


def _spectral_sum(mu: ScalarMeasure, a: Element, tol: float) -> complex:
    dec = spectral_decompose(a, tol=tol)
    return sum((lam * mu.evaluate(q) for lam, q in zip(dec.eigenvalues, dec.projections)), 0j)


def omega(mu: ScalarMeasure, x: Element, tol: float = 1e-9) -> complex:
    """
    Spectral extension of ``mu``: for ``x = a + ib`` with ``a, b`` selfadjoint,
    ``omega(x) = sum lam mu(q_lam)`` over the spectral decomposition of ``a``,
    plus ``i`` times the same for ``b``.  Linear on every abelian subalgebra;
    linear overall exactly when ``mu`` extends.
    """
    a, b = x.hermitian_parts()
    value = _spectral_sum(mu, a, tol)
    if b.op_norm() > 0:
        value += 1j * _spectral_sum(mu, b, tol)
    return complex(value)


def omega_dyadic(mu: ScalarMeasure, x: Element, depth: int) -> complex:
    """``sum_n 2**-n mu(e_n)`` over the dyadic projections of ``0 <= x <= 1``."""
    es = dyadic_projections(x, depth)
    return sum((2.0 ** -(n + 1) * mu.evaluate(e) for n, e in enumerate(es)), 0j)


class LinearityAudit(NamedTuple):
    max_commuting_defect: float
    max_general_defect: float
    worst_pair: Optional[tuple]


def _from_frame(shape, frames, eigs) -> Element:
    return Element(shape, [(u * w) @ u.conj().T for u, w in zip(frames, eigs)])


def commuting_pair(shape: AlgebraShape, rng) -> tuple[Element, Element]:
    """``0 <= x, y`` with ``x + y <= 1`` diagonal in one shared random frame."""
    frames = [random_unitary(n, rng) for n in shape.blocks]
    u = [rng.uniform(0, 1, n) for n in shape.blocks]
    v = [rng.uniform(0, 1, n) * (1 - a) for a, n in zip(u, shape.blocks)]
    return _from_frame(shape, frames, u), _from_frame(shape, frames, v)


def general_pair(shape: AlgebraShape, rng) -> tuple[Element, Element]:
    """Independent frames; both rescaled so that ``x + y <= 1``."""
    x = _from_frame(shape, [random_unitary(n, rng) for n in shape.blocks],
                    [rng.uniform(0, 1, n) for n in shape.blocks])
    y = _from_frame(shape, [random_unitary(n, rng) for n in shape.blocks],
                    [rng.uniform(0, 1, n) for n in shape.blocks])
    top = max(np.linalg.eigvalsh(b).max() for b in (x + y).blocks)
    if top > 1:
        x, y = x / top, y / top
    return x, y


def linearity_audit(mu: ScalarMeasure, trials: int = 200, seed: int = 0) -> LinearityAudit:
    """Largest ``|omega(x+y) - omega(x) - omega(y)|`` over commuting and general pairs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    shape = mu.shape

    def defect(x, y):
        return abs(omega(mu, x + y) - omega(mu, x) - omega(mu, y))

    commuting, general, worst = 0.0, 0.0, None
    for _ in range(trials):
        commuting = max(commuting, defect(*commuting_pair(shape, rng)))
        x, y = general_pair(shape, rng)
        d = defect(x, y)
        if worst is None or d > general:
            general, worst = d, (x, y)
    return LinearityAudit(float(commuting), float(general), worst)


class NormBound(NamedTuple):
    trace_norm: float
    four_sup: float
    sup: float


def norm_probe_projections(rho: Element) -> list[Projection]:
    """Spectral projections of the Hermitian parts of ``rho`` where ``|trace(rho p)|`` peaks."""
    eye = Element.identity(rho.shape)
    out = []
    for part in rho.hermitian_parts():
        pos = positive_spectral_projection(part)
        neg = positive_spectral_projection(-part)
        out.extend([pos, neg])
    out.append(Projection(rho.shape, eye.blocks, check=False))
    return out


def functional_norm_bound(rho: Element, samples: int = 64, seed: int = 0) -> NormBound:
    """
    Norm of ``x -> trace(rho x)`` (the trace norm of ``rho``) next to four
    times the largest ``|trace(rho p)|`` over projections.  The sup is taken
    over random projections and the spectral projections of the real and
    imaginary parts of ``rho``, so ``trace_norm <= four_sup`` always holds.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    shape = rho.shape
    points = norm_probe_projections(rho)
    for _ in range(samples):
        points.append(random_projection(shape, [int(rng.integers(0, n + 1)) for n in shape.blocks], rng))
    sup = max(abs(_trace_pairing(rho, p)) for p in points)
    return NormBound(trace_norm=trace_norm(rho), four_sup=4 * sup, sup=float(sup))


@dataclass
class OperatorRep:
    """Bounded operator ``T(x)_i = trace(rho_i x)`` into ``C^d`` with the max norm."""

    shape: AlgebraShape
    rhos: list
    norm_bound: float
    K: float
    results: list = field(default_factory=list, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.rhos)

    def apply(self, x: Element) -> np.ndarray:
        return np.array([_trace_pairing(r, x) for r in self.rhos])

    __call__ = apply


def _unit_elements(shape, rhos, samples, rng) -> list[Element]:
    xs = []
    # unitaries u with trace(rho u) = ||rho||_1 realize each coordinate's norm
    for rho in rhos:
        blocks = []
        for r in rho.blocks:
            w, _, vh = np.linalg.svd(r)
            blocks.append((w @ vh).conj().T)
        xs.append(Element(shape, blocks))
    for _ in range(samples):
        z = Element(shape, [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                            for n in shape.blocks])
        xs.append(z / z.op_norm())
    return xs


def extend_vector_measure(m: VectorMeasure, tol: float = 1e-8, seed: int = 0,
                          samples: int = 500,
                          verify_samples: int = VERIFY_SAMPLES) -> OperatorRep:
    """
    Lift a vector measure to a linear operator by extending each coordinate.

    ``K`` is the largest sampled ``||m(p)||_inf``; the operator norm estimate
    over sampled unit elements must not exceed ``4 K``.
    """
    shape = m.shape
    results = []
    for i, comp in enumerate(m.components):
        res = reconstruct(comp, tol=tol, verify_samples=verify_samples, seed=seed + i)
        if not res.extended:
            raise ExtensionError(i, res)
        results.append(res)
    rhos = [r.rho for r in results]

    rng = np.random.default_rng(seed)
    probes = [p for rho in rhos for p in norm_probe_projections(rho)]
    for _ in range(samples):
        probes.append(random_projection(shape, [int(rng.integers(0, n + 1)) for n in shape.blocks], rng))
    K = max(float(np.max(np.abs(m.evaluate(p)))) for p in probes)

    rep = OperatorRep(shape=shape, rhos=rhos, norm_bound=0.0, K=K, results=results)
    rep.norm_bound = max(float(np.max(np.abs(rep.apply(x))))
                         for x in _unit_elements(shape, rhos, samples, rng))
    if rep.norm_bound > 4 * K + 1e-9:
        raise ArithmeticError(f"operator norm {rep.norm_bound:.6g} exceeds 4K = {4 * K:.6g}")
    return rep
