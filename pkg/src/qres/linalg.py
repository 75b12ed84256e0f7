"""Dense complex states and operators on tensor-product Hilbert spaces.

Basis convention for a qubit: index 0 is |z+>, index 1 is |z->.  Multi-party
spaces list their factors left to right in the order the kets are written.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence, Union

import numpy as np

NORM_TOL = 1e-12
PROJECTOR_TOL = 1e-12
IMAG_TOL = 1e-12


class DimensionError(ValueError):
    """Raised when factor dimensions of operands do not line up."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state with an explicit list of factor dimensions."""

    amplitudes: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        dims = tuple(int(d) for d in self.dims) if self.dims else (amps.size,)
        if any(d <= 0 for d in dims):
            raise DimensionError(f"factor dimensions must be positive, got {dims}")
        if prod(dims) != amps.size:
            raise DimensionError(f"dims {dims} do not match {amps.size} amplitudes")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) >= NORM_TOL:
            raise ValueError(f"state is not normalized (norm={norm!r}); use StateVector.normalized")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "dims", dims)

    @classmethod
    def normalized(cls, amplitudes, dims: Sequence[int] = ()) -> StateVector:
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0.0 or not np.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(amps / norm, tuple(dims))

    @classmethod
    def basis(cls, index: int, dims: Sequence[int]) -> StateVector:
        amps = np.zeros(prod(dims), dtype=complex)
        amps[index] = 1.0
        return cls(amps, tuple(dims))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: StateVector) -> complex:
        """<self|other>."""
        if self.dims != other.dims:
            raise DimensionError(f"dims differ: {self.dims} vs {other.dims}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: StateVector) -> float:
        return abs(self.overlap(other)) ** 2

    def same_ray(self, other: StateVector, tol: float = 1e-10) -> bool:
        """Equality up to a global phase."""
        return abs(abs(self.overlap(other)) - 1.0) < tol


@dataclass(frozen=True)
class Operator:
    """Square complex matrix acting on a space with factor dimensions ``dims``."""

    matrix: np.ndarray
    dims: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"operator must be a square matrix, got shape {mat.shape}")
        dims = tuple(int(d) for d in self.dims) if self.dims else (mat.shape[0],)
        if prod(dims) != mat.shape[0]:
            raise DimensionError(f"dims {dims} do not match matrix size {mat.shape[0]}")
        object.__setattr__(self, "matrix", _frozen(mat))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            if other.dims != self.dims:
                raise DimensionError(f"dims differ: {self.dims} vs {other.dims}")
            return StateVector.normalized(self.matrix @ other.amplitudes, self.dims)
        if isinstance(other, Operator):
            if other.dims != self.dims:
                raise DimensionError(f"dims differ: {self.dims} vs {other.dims}")
            return Operator(self.matrix @ other.matrix, self.dims)
        return NotImplemented

    def __add__(self, other: Operator) -> Operator:
        if other.dims != self.dims:
            raise DimensionError(f"dims differ: {self.dims} vs {other.dims}")
        return Operator(self.matrix + other.matrix, self.dims)

    def scaled(self, factor: complex) -> Operator:
        return Operator(factor * self.matrix, self.dims)

    def dagger(self) -> Operator:
        return Operator(self.matrix.conj().T, self.dims)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> Operator:
        return cls(np.eye(prod(dims)), tuple(dims))


class Projector(Operator):
    """Hermitian idempotent operator; checked on construction."""

    def __post_init__(self) -> None:
        super().__post_init__()
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        idem = np.max(np.abs(m @ m - m)) if m.size else 0.0
        if herm >= PROJECTOR_TOL:
            raise ValueError(f"projector is not Hermitian (deviation {herm:.3e})")
        if idem >= PROJECTOR_TOL:
            raise ValueError(f"projector is not idempotent (deviation {idem:.3e})")

    @classmethod
    def onto(cls, *states: StateVector) -> Projector:
        """Projector onto the span of mutually orthonormal ``states``."""
        dims = states[0].dims
        mat = sum(np.outer(s.amplitudes, s.amplitudes.conj()) for s in states)
        return cls(mat, dims)

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))


Tensorable = Union[StateVector, Operator]


def tensor(a: Tensorable, b: Tensorable, *rest: Tensorable) -> Tensorable:
    """Kronecker product; factor dimensions are concatenated."""
    if rest:
        return tensor(tensor(a, b), *rest)
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)
    if isinstance(a, Operator) and isinstance(b, Operator):
        out_cls = Projector if isinstance(a, Projector) and isinstance(b, Projector) else Operator
        return out_cls(np.kron(a.matrix, b.matrix), a.dims + b.dims)
    raise TypeError(f"cannot tensor {type(a).__name__} with {type(b).__name__}")


def permute(obj: Tensorable, order: Sequence[int]) -> Tensorable:
    """Reorder tensor factors: new factor ``k`` is old factor ``order[k]``."""
    order = tuple(order)
    n = len(obj.dims)
    if sorted(order) != list(range(n)):
        raise ValueError(f"{order} is not a permutation of {n} factors")
    new_dims = tuple(obj.dims[i] for i in order)
    if isinstance(obj, StateVector):
        amps = obj.amplitudes.reshape(obj.dims).transpose(order).ravel()
        return StateVector(amps, new_dims)
    mat = obj.matrix.reshape(obj.dims + obj.dims)
    mat = mat.transpose(order + tuple(n + i for i in order)).reshape(obj.dim, obj.dim)
    return type(obj)(mat, new_dims)


def ket(*labels: str) -> StateVector:
    """Product of qubit basis kets, e.g. ``ket('+', '-')`` for |z+, z->."""
    index = {"+": 0, "0": 0, "-": 1, "1": 1}
    if not labels or any(label not in index for label in labels):
        raise ValueError(f"qubit labels must be '+'/'0' or '-'/'1', got {labels}")
    out = None
    for label in labels:
        v = StateVector.basis(index[label], (2,))
        out = v if out is None else tensor(out, v)
    return out


def bloch_ket(theta: float, phi: float = 0.0) -> StateVector:
    """Qubit pointing along polar angle ``theta`` and azimuth ``phi``."""
    if not (0.0 <= theta <= np.pi):
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    phi = float(np.mod(phi, 2 * np.pi))
    return StateVector(
        np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]), (2,)
    )


def bloch_angles(n) -> tuple[float, float]:
    """Polar and azimuthal angles of a (not necessarily unit) 3-vector."""
    n = np.asarray(n, dtype=float)
    r = np.linalg.norm(n)
    if r == 0.0:
        raise ValueError("direction vector must be non-zero")
    x, y, z = n / r
    return float(np.arccos(np.clip(z, -1.0, 1.0))), float(np.arctan2(y, x))


def _block_sizes(state_dims: tuple[int, ...], ops: Sequence[Operator]) -> list[int]:
    # each operator must cover a contiguous run of state factors
    sizes, pos = [], 0
    for op in ops:
        run = len(op.dims)
        if state_dims[pos:pos + run] != op.dims:
            raise DimensionError(
                f"operator dims {op.dims} do not match state factors {state_dims[pos:pos + run]}"
            )
        sizes.append(op.dim)
        pos += run
    if pos != len(state_dims):
        raise DimensionError(f"operators cover {pos} of {len(state_dims)} factors")
    return sizes


def apply(ops: Operator | Sequence[Operator], state: StateVector) -> np.ndarray:
    """Unnormalized amplitudes of ``(op_1 x op_2 x ...)|state>``.

    A sequence of operators acts on consecutive factor blocks without
    forming the Kronecker product.
    """
    if isinstance(ops, Operator):
        ops = [ops]
    sizes = _block_sizes(state.dims, ops)
    psi = state.amplitudes.reshape(sizes)
    for axis, op in enumerate(ops):
        psi = np.moveaxis(np.tensordot(op.matrix, psi, axes=([1], [axis])), 0, axis)
    return psi.ravel()


def prob(state: StateVector, op: Operator | Sequence[Operator]) -> float:
    """Expectation <state|op|state>, returned as a real number.

    ``op`` may be a single operator on the full space or a sequence of
    operators on consecutive factor blocks.
    """
    value = np.vdot(state.amplitudes, apply(op, state))
    if abs(value.imag) > IMAG_TOL:
        raise ValueError(f"expectation has imaginary part {value.imag:.3e}; operator not Hermitian?")
    return float(value.real)


def haar_random_su2(seed: int) -> Operator:
    """Haar-distributed SU(2) matrix, deterministic in ``seed``.

    Uses the identification of SU(2) with the unit 3-sphere: a normalized
    real Gaussian 4-vector is uniform on S^3.
    """
    rng = np.random.default_rng(seed)
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    a = q[0] + 1j * q[1]
    b = q[2] + 1j * q[3]
    return Operator(np.array([[a, -np.conj(b)], [b, np.conj(a)]]), (2,))
