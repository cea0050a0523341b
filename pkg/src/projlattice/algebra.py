"""
Finite-dimensional von Neumann algebras as direct sums of matrix blocks.

An algebra ``M_{n_1} + ... + M_{n_k}`` is described by an :class:`AlgebraShape`
and its elements by :class:`Element`, which keeps one dense complex matrix per
block.  Projections, spectral decompositions and the dyadic expansion of
positive contractions live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
import scipy.linalg as la

from .exceptions import (
    MalformedElementError,
    NotSelfAdjointError,
    RankError,
    SpectrumError,
)

DEFAULT_TOL = 1e-10
CLUSTER_GAP = 1e-8


@dataclass(frozen=True)
class AlgebraShape:
    """Ordered list of block sizes ``n_j``."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        blocks = tuple(int(n) for n in self.blocks)
        if not blocks:
            raise MalformedElementError("an algebra needs at least one block")
        if any(n < 1 for n in blocks):
            raise MalformedElementError(f"block sizes must be >= 1, got {blocks}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def of(cls, blocks: int | Iterable[int]) -> "AlgebraShape":
        if isinstance(blocks, AlgebraShape):
            return blocks
        if isinstance(blocks, (int, np.integer)):
            return cls((int(blocks),))
        return cls(tuple(blocks))

    @property
    def has_I2_summand(self) -> bool:
        return 2 in self.blocks

    @property
    def dimension(self) -> int:
        """Complex dimension of the algebra, ``sum n_j**2``."""
        return sum(n * n for n in self.blocks)

    @property
    def size(self) -> int:
        """Side length of the block-diagonal matrix."""
        return sum(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)


class Element:
    """
    Block-diagonal complex matrix conforming to an :class:`AlgebraShape`.

    Blocks are stored as read-only ``complex128`` arrays, so elements can be
    shared freely.  Arithmetic (``+``, ``-``, scalar ``*``, ``@``) acts block
    by block.
    """

    __slots__ = ("shape", "blocks")

    def __init__(self, shape, blocks: Sequence[np.ndarray]):
        shape = AlgebraShape.of(shape)
        if len(blocks) != len(shape.blocks):
            raise MalformedElementError(
                f"expected {len(shape.blocks)} blocks, got {len(blocks)}")
        stored = []
        for n, b in zip(shape.blocks, blocks):
            arr = np.array(b, dtype=np.complex128)
            if arr.shape != (n, n):
                raise MalformedElementError(
                    f"block of shape {arr.shape} does not match size {n}")
            arr.setflags(write=False)
            stored.append(arr)
        self.shape = shape
        self.blocks = tuple(stored)

    @classmethod
    def zeros(cls, shape) -> "Element":
        shape = AlgebraShape.of(shape)
        return cls(shape, [np.zeros((n, n)) for n in shape.blocks])

    @classmethod
    def identity(cls, shape) -> "Element":
        shape = AlgebraShape.of(shape)
        return cls(shape, [np.eye(n) for n in shape.blocks])

    @classmethod
    def from_dense(cls, shape, matrix) -> "Element":
        """Cut the diagonal blocks out of a dense matrix (off-block entries must vanish)."""
        shape = AlgebraShape.of(shape)
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.shape != (shape.size, shape.size):
            raise MalformedElementError(
                f"dense matrix {matrix.shape} does not fit shape {shape.blocks}")
        blocks = []
        start = 0
        for n in shape.blocks:
            blocks.append(matrix[start:start + n, start:start + n])
            start += n
        x = cls(shape, blocks)
        if not np.allclose(x.to_dense(), matrix, atol=1e-12):
            raise MalformedElementError("dense matrix has off-block entries")
        return x

    @classmethod
    def embed(cls, shape, j: int, block) -> "Element":
        """Element equal to ``block`` on block ``j`` and zero elsewhere."""
        shape = AlgebraShape.of(shape)
        blocks = [np.zeros((n, n)) for n in shape.blocks]
        blocks[j] = block
        return cls(shape, blocks)

    def to_dense(self) -> np.ndarray:
        return la.block_diag(*self.blocks)

    def _check_same_shape(self, other: "Element"):
        if not isinstance(other, Element):
            raise MalformedElementError(f"expected an Element, got {type(other).__name__}")
        if other.shape != self.shape:
            raise MalformedElementError(
                f"shape mismatch: {self.shape.blocks} vs {other.shape.blocks}")

    def _new(self, blocks) -> "Element":
        return Element(self.shape, blocks)

    def __add__(self, other):
        self._check_same_shape(other)
        return self._new([a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._check_same_shape(other)
        return self._new([a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return self._new([-a for a in self.blocks])

    def __mul__(self, scalar):
        if isinstance(scalar, Element):
            raise TypeError("use @ for the algebra product")
        return self._new([scalar * a for a in self.blocks])

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self._new([a / scalar for a in self.blocks])

    def __matmul__(self, other):
        self._check_same_shape(other)
        return self._new([a @ b for a, b in zip(self.blocks, other.blocks)])

    def adjoint(self) -> "Element":
        return self._new([a.conj().T for a in self.blocks])

    @property
    def H(self) -> "Element":
        return self.adjoint()

    def trace(self) -> complex:
        return complex(sum(np.trace(a) for a in self.blocks))

    def op_norm(self) -> float:
        return max(float(np.linalg.norm(a, 2)) for a in self.blocks)

    def is_selfadjoint(self, tol: float = DEFAULT_TOL) -> bool:
        return (self - self.adjoint()).op_norm() <= tol

    def hermitian_parts(self) -> tuple["Element", "Element"]:
        """Return selfadjoint ``(a, b)`` with ``self = a + i b``."""
        adj = self.adjoint()
        return (self + adj) * 0.5, (self - adj) * (-0.5j)

    def allclose(self, other: "Element", atol: float = 1e-9) -> bool:
        self._check_same_shape(other)
        return (self - other).op_norm() <= atol

    def __repr__(self):
        return f"Element(shape={list(self.shape.blocks)})"


class Projection(Element):
    """An :class:`Element` that is a selfadjoint idempotent within ``tol``."""

    __slots__ = ("tol",)

    def __init__(self, shape, blocks, tol: float = 1e-9, check: bool = True):
        super().__init__(shape, blocks)
        self.tol = tol
        if check and not _projection_test(self, tol):
            raise MalformedElementError("element is not a projection")

    @classmethod
    def of(cls, x: Element, tol: float = 1e-9) -> "Projection":
        if isinstance(x, Projection):
            return x
        return cls(x.shape, x.blocks, tol=tol)

    @property
    def value(self) -> Element:
        return Element(self.shape, self.blocks)

    def rank(self) -> int:
        return int(round(self.trace().real))

    def complement(self) -> "Projection":
        eye = Element.identity(self.shape)
        return Projection(self.shape, (eye - self).blocks, tol=self.tol, check=False)

    def __repr__(self):
        return f"Projection(shape={list(self.shape.blocks)}, rank={self.rank()})"


def _projection_test(x: Element, tol: float) -> bool:
    for a in x.blocks:
        if np.linalg.norm(a - a.conj().T, 2) > tol:
            return False
        if np.linalg.norm(a @ a - a, 2) > tol:
            return False
        ev = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
        if np.any(np.minimum(np.abs(ev), np.abs(ev - 1.0)) > tol):
            return False
    return True


def is_projection(x: Element, tol: float = DEFAULT_TOL) -> bool:
    if not isinstance(x, Element):
        raise MalformedElementError(f"expected an Element, got {type(x).__name__}")
    return _projection_test(x, tol)


class Relation(NamedTuple):
    orthogonal: bool
    below: bool


def relation(e: Element, p: Element, tol: float = 1e-9) -> Relation:
    """Orthogonality ``ep = 0`` and order ``e <= p`` (i.e. ``ep = e``)."""
    e._check_same_shape(p)
    ep = e @ p
    return Relation(orthogonal=ep.op_norm() <= tol, below=(ep - e).op_norm() <= tol)


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: tuple[float, ...]
    projections: tuple[Projection, ...]

    def resum(self) -> Element:
        shape = self.projections[0].shape
        total = Element.zeros(shape)
        for lam, q in zip(self.eigenvalues, self.projections):
            total = total + lam * q
        return total

    def __len__(self):
        return len(self.eigenvalues)


def _block_eigh(x: Element):
    """Per-block eigenpairs of the symmetrized blocks."""
    out = []
    for a in x.blocks:
        w, v = np.linalg.eigh(0.5 * (a + a.conj().T))
        out.append((w, v))
    return out


def spectral_decompose(x: Element, tol: float = 1e-9,
                       gap: float = CLUSTER_GAP) -> SpectralDecomposition:
    """
    Distinct eigenvalues (descending) of a selfadjoint element with their
    spectral projections.  Eigenvalues closer than ``gap`` are merged, also
    across blocks, so the projections are the spectral projections of ``x``
    in the whole algebra.
    """
    if not x.is_selfadjoint(tol):
        raise NotSelfAdjointError("spectral_decompose needs a selfadjoint element")
    pairs = []
    for j, (w, v) in enumerate(_block_eigh(x)):
        for k in range(len(w)):
            pairs.append((float(w[k]), j, v[:, k]))
    pairs.sort(key=lambda t: -t[0])

    clusters: list[list] = []
    for item in pairs:
        if clusters and clusters[-1][-1][0] - item[0] <= gap:
            clusters[-1].append(item)
        else:
            clusters.append([item])

    shape = x.shape
    eigenvalues = []
    projections = []
    for cluster in clusters:
        eigenvalues.append(float(np.mean([c[0] for c in cluster])))
        blocks = [np.zeros((n, n), dtype=np.complex128) for n in shape.blocks]
        for _, j, vec in cluster:
            blocks[j] += np.outer(vec, vec.conj())
        projections.append(Projection(shape, blocks, check=False))
    return SpectralDecomposition(tuple(eigenvalues), tuple(projections))


def binary_digit(lam: float, n: int) -> int:
    """``floor(2**n * lam) mod 2`` with ``lam == 1`` mapped to all ones."""
    if lam >= 1.0:
        return 1
    return int(np.floor(np.ldexp(lam, n))) % 2


def dyadic_projections(x: Element, depth: int, tol: float = 1e-9) -> list[Projection]:
    """
    Spectral projections ``e_1, ..., e_m`` with ``x ~ sum 2**-n e_n``.

    ``e_n`` projects onto the eigenvectors of ``x`` whose eigenvalue has
    ``n``-th binary digit one, so ``||x - sum_n 2**-n e_n|| <= 2**-m``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not x.is_selfadjoint(tol):
        raise NotSelfAdjointError("dyadic expansion needs a selfadjoint element")
    eig = _block_eigh(x)
    lo = min(w[0] for w, _ in eig)
    hi = max(w[-1] for w, _ in eig)
    if lo < -tol or hi > 1 + tol:
        raise SpectrumError(f"spectrum [{lo:.3g}, {hi:.3g}] is not inside [0, 1]")

    shape = x.shape
    out = []
    for n in range(1, depth + 1):
        blocks = []
        for w, v in eig:
            digits = np.array([binary_digit(min(max(lam, 0.0), 1.0), n) for lam in w],
                              dtype=float)
            blocks.append((v * digits) @ v.conj().T)
        out.append(Projection(shape, blocks, check=False))
    return out


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_projection(shape, ranks: Sequence[int], seed=None) -> Projection:
    """
    Seeded random projection with the given rank in each block.

    ``seed`` may be an integer or an existing ``numpy.random.Generator``.
    """
    shape = AlgebraShape.of(shape)
    ranks = list(ranks)
    if len(ranks) != len(shape.blocks):
        raise RankError(f"need one rank per block, got {ranks}")
    for r, n in zip(ranks, shape.blocks):
        if not 0 <= r <= n:
            raise RankError(f"rank {r} out of range for block of size {n}")
    rng = np.random.default_rng(seed)
    blocks = []
    for r, n in zip(ranks, shape.blocks):
        if r == 0:
            blocks.append(np.zeros((n, n)))
            continue
        if r == n:
            blocks.append(np.eye(n))
            continue
        # orthonormalized Gaussian columns span a Haar-random r-dim subspace
        z = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
        q, _ = np.linalg.qr(z)
        blocks.append(q @ q.conj().T)
    return Projection(shape, blocks, check=False)


def random_selfadjoint(shape, seed=None, scale: float = 1.0) -> Element:
    """GUE-like selfadjoint element, rescaled to operator norm ``scale``."""
    shape = AlgebraShape.of(shape)
    rng = np.random.default_rng(seed)
    blocks = []
    for n in shape.blocks:
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        blocks.append(0.5 * (z + z.conj().T))
    x = Element(shape, blocks)
    norm = x.op_norm()
    return x * (scale / norm) if norm > 0 else x


def random_element(shape, seed=None) -> Element:
    """Complex Gaussian element (no symmetry)."""
    shape = AlgebraShape.of(shape)
    rng = np.random.default_rng(seed)
    return Element(shape, [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                           for n in shape.blocks])


class MatrixFunctionals(NamedTuple):
    trace: complex
    trace_norm: float
    operator_norm: float


def matrix_functionals(x: Element) -> MatrixFunctionals:
    svals = [np.linalg.svd(a, compute_uv=False) for a in x.blocks]
    return MatrixFunctionals(
        trace=x.trace(),
        trace_norm=float(sum(s.sum() for s in svals)),
        operator_norm=float(max(s.max() for s in svals)),
    )


def trace_norm(x: Element) -> float:
    return matrix_functionals(x).trace_norm


def central_projections(shape) -> list[Projection]:
    """Block identities; they span the centre of the algebra."""
    shape = AlgebraShape.of(shape)
    return [Projection(shape, Element.embed(shape, j, np.eye(n)).blocks, check=False)
            for j, n in enumerate(shape.blocks)]
