"""Phase points of the original and the doubled (extended) phase space.

The extended state is stored as four separate length-`d` vectors. The maps
`defect` and `shift` apply the fixed `2d x 4d` matrix `A` (and its transpose)
through index arithmetic only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray

FloatArray: TypeAlias = NDArray[np.float64]


class InvalidDimensionError(ValueError):
    """For when vectors have mismatched or empty dimensions."""

    pass


def as_vector(values: ArrayLike) -> FloatArray:
    """Return `values` as a 1-D float64 array."""
    vector = np.asarray(values, dtype=np.float64)
    if vector.ndim == 0:
        vector = vector.reshape(1)
    if vector.ndim != 1:
        raise InvalidDimensionError(f"Expected a 1-D vector, got shape {vector.shape}.")
    return vector


@dataclass(frozen=True, slots=True)
class PhasePoint:
    """A state `(q, p)` of the original system."""

    q: FloatArray
    p: FloatArray

    def __init__(self, q: ArrayLike, p: ArrayLike) -> None:
        q_vec, p_vec = as_vector(q), as_vector(p)
        if q_vec.size < 1 or q_vec.shape != p_vec.shape:
            raise InvalidDimensionError(
                f"q and p must share a length >= 1 (got {q_vec.size} and {p_vec.size})."
            )
        if not (np.all(np.isfinite(q_vec)) and np.all(np.isfinite(p_vec))):
            raise ValueError("Phase point entries must be finite.")
        object.__setattr__(self, "q", q_vec)
        object.__setattr__(self, "p", p_vec)

    @property
    def dim(self) -> int:
        return self.q.size

    def flatten(self) -> FloatArray:
        """Flat `2d` view ordered as `(q, p)`."""
        return np.concatenate((self.q, self.p))

    @classmethod
    def from_flat(cls, values: ArrayLike) -> PhasePoint:
        flat = as_vector(values)
        if flat.size % 2:
            raise InvalidDimensionError("A flat phase point needs an even length.")
        d = flat.size // 2
        return cls(flat[:d], flat[d:])

    def __eq__(self, __o: object) -> bool:
        if not isinstance(__o, PhasePoint):
            return False
        return bool(np.array_equal(self.q, __o.q) and np.array_equal(self.p, __o.p))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(q={self.q.tolist()}, p={self.p.tolist()})"


@dataclass(frozen=True, slots=True)
class ExtendedPoint:
    """A state `(q, x, p, y)` of the doubled phase space.

    `(q, x)` are the positions and `(p, y)` their conjugate momenta, so the
    flat view `(q, x, p, y)` carries the canonical structure `J_4d`.
    """

    q: FloatArray
    x: FloatArray
    p: FloatArray
    y: FloatArray

    def __init__(
        self, q: ArrayLike, x: ArrayLike, p: ArrayLike, y: ArrayLike
    ) -> None:
        vectors = [as_vector(v) for v in (q, x, p, y)]
        if vectors[0].size < 1 or any(v.shape != vectors[0].shape for v in vectors):
            raise InvalidDimensionError("q, x, p and y must share a length >= 1.")
        for name, vector in zip("qxpy", vectors, strict=True):
            object.__setattr__(self, name, vector)

    @property
    def dim(self) -> int:
        """Dimension `d` of the original system."""
        return self.q.size

    @property
    def is_finite(self) -> bool:
        return bool(
            np.all(np.isfinite(self.q))
            and np.all(np.isfinite(self.x))
            and np.all(np.isfinite(self.p))
            and np.all(np.isfinite(self.y))
        )

    def flatten(self) -> FloatArray:
        """Flat `4d` view ordered as `(q, x, p, y)`."""
        return np.concatenate((self.q, self.x, self.p, self.y))

    @classmethod
    def from_flat(cls, values: ArrayLike) -> ExtendedPoint:
        flat = as_vector(values)
        if flat.size % 4:
            raise InvalidDimensionError("A flat extended point needs a length of 4d.")
        d = flat.size // 4
        return cls(flat[:d], flat[d : 2 * d], flat[2 * d : 3 * d], flat[3 * d :])

    def __eq__(self, __o: object) -> bool:
        if not isinstance(__o, ExtendedPoint):
            return False
        return bool(np.array_equal(self.flatten(), __o.flatten()))

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}(q={self.q.tolist()}, x={self.x.tolist()}, "
            + f"p={self.p.tolist()}, y={self.y.tolist()})"
        )


@dataclass(frozen=True, slots=True)
class DefectVector:
    """An element `mu = (mu1, mu2)` of `R^2d`, the codomain of `A`."""

    mu1: FloatArray
    mu2: FloatArray

    def __init__(self, mu1: ArrayLike, mu2: ArrayLike) -> None:
        first, second = as_vector(mu1), as_vector(mu2)
        if first.shape != second.shape:
            raise InvalidDimensionError("mu1 and mu2 must share a length.")
        object.__setattr__(self, "mu1", first)
        object.__setattr__(self, "mu2", second)

    @classmethod
    def zeros(cls, dim: int) -> DefectVector:
        return cls(np.zeros(dim), np.zeros(dim))

    @classmethod
    def from_flat(cls, values: ArrayLike) -> DefectVector:
        flat = as_vector(values)
        if flat.size % 2:
            raise InvalidDimensionError("A flat defect vector needs an even length.")
        d = flat.size // 2
        return cls(flat[:d], flat[d:])

    @property
    def dim(self) -> int:
        return self.mu1.size

    def flatten(self) -> FloatArray:
        return np.concatenate((self.mu1, self.mu2))

    def norm(self) -> float:
        """Euclidean norm on `R^2d`."""
        return float(np.sqrt(self.mu1 @ self.mu1 + self.mu2 @ self.mu2))

    def __add__(self, other: DefectVector) -> DefectVector:
        return DefectVector(self.mu1 + other.mu1, self.mu2 + other.mu2)

    def __sub__(self, other: DefectVector) -> DefectVector:
        return DefectVector(self.mu1 - other.mu1, self.mu2 - other.mu2)

    def __mul__(self, scalar: float) -> DefectVector:
        return DefectVector(scalar * self.mu1, scalar * self.mu2)

    __rmul__ = __mul__

    def __neg__(self) -> DefectVector:
        return DefectVector(-self.mu1, -self.mu2)


def embed(z: PhasePoint) -> ExtendedPoint:
    """Map `(q, p)` onto the invariant submanifold as `(q, q, p, p)`."""
    return ExtendedPoint(z.q, z.q.copy(), z.p, z.p.copy())


def restrict(zeta: ExtendedPoint) -> PhasePoint:
    """Drop the copy, keeping `(q, p)`."""
    return PhasePoint(zeta.q, zeta.p)


def defect(zeta: ExtendedPoint) -> DefectVector:
    """Apply `A`: `(q - x, p - y)`."""
    return DefectVector(zeta.q - zeta.x, zeta.p - zeta.y)


def defect_norm(zeta: ExtendedPoint) -> float:
    """Euclidean norm of the copy discrepancy `(q, p) - (x, y)`."""
    return defect(zeta).norm()


def shift(zeta: ExtendedPoint, mu: DefectVector) -> ExtendedPoint:
    """Translate by `A^T mu = (mu1, -mu1, mu2, -mu2)`."""
    if mu.dim != zeta.dim:
        raise InvalidDimensionError(
            f"Defect vector of dimension {mu.dim} cannot shift a point of "
            + f"dimension {zeta.dim}."
        )
    return ExtendedPoint(
        zeta.q + mu.mu1, zeta.x - mu.mu1, zeta.p + mu.mu2, zeta.y - mu.mu2
    )


def average_restrict(zeta: ExtendedPoint) -> PhasePoint:
    """Average the two copies: `((q + x) / 2, (p + y) / 2)`.

    Invariant under `shift`, and the identity on the image of `embed`.
    """
    return PhasePoint(0.5 * (zeta.q + zeta.x), 0.5 * (zeta.p + zeta.y))
