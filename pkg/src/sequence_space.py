"""
The space E of zero-extended sequences on Z[1-n, N+n] and its q-norms.

Public interfaces use the problem index convention (k = 1..N for interior
values, k = 1-n..N+n for extended sequences); storage is 0-based.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np


ArrayLike = Union["InteriorVector", Sequence[float], np.ndarray]


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class InteriorVector:
    """
    A point of E restricted to its interior indices k = 1..N.

    Parameters:
    -----------
    values : sequence of float
        N finite reals; values[0] is x(1).
    """

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values, "InteriorVector")
        if len(arr) < 2:
            raise ValueError(f"InteriorVector needs N >= 2 entries, got {len(arr)}")
        object.__setattr__(self, "values", arr)

    @property
    def N(self) -> int:
        return len(self.values)

    def at(self, k: int) -> float:
        """Value x(k) for k in Z[1, N]."""
        if not 1 <= k <= self.N:
            raise IndexError(f"k={k} outside Z[1,{self.N}]")
        return float(self.values[k - 1])

    def to_list(self) -> list:
        return [float(v) for v in self.values]

    def __len__(self) -> int:
        return self.N

    def __repr__(self) -> str:
        return f"InteriorVector({self.to_list()})"

    @classmethod
    def zeros(cls, N: int) -> "InteriorVector":
        return cls(np.zeros(N))


@dataclass(frozen=True, eq=False)
class ExtendedSequence:
    """A sequence on Z[1-n, N+n] vanishing on both n-wide collars."""

    values: np.ndarray
    n: int
    N: int

    def __post_init__(self):
        arr = _frozen_array(self.values, "ExtendedSequence")
        if len(arr) != self.N + 2 * self.n:
            raise ValueError(
                f"ExtendedSequence needs N+2n={self.N + 2 * self.n} entries, got {len(arr)}"
            )
        if np.any(arr[: self.n] != 0.0) or np.any(arr[self.n + self.N:] != 0.0):
            raise ValueError("ExtendedSequence must vanish on Z[1-n,0] and Z[N+1,N+n]")
        object.__setattr__(self, "values", arr)

    @property
    def first_index(self) -> int:
        return 1 - self.n

    @property
    def last_index(self) -> int:
        return self.N + self.n

    def at(self, k: int) -> float:
        """Value s(k) for k in Z[1-n, N+n]."""
        if not self.first_index <= k <= self.last_index:
            raise IndexError(f"k={k} outside Z[{self.first_index},{self.last_index}]")
        return float(self.values[k - self.first_index])

    def interior(self) -> InteriorVector:
        return InteriorVector(self.values[self.n:self.n + self.N])


def as_array(x: ArrayLike) -> np.ndarray:
    """Interior values of x as a float array (no copy for InteriorVector)."""
    if isinstance(x, InteriorVector):
        return x.values
    return np.asarray(x, dtype=float)


def extend(x: ArrayLike, n: int) -> ExtendedSequence:
    """
    Zero-extend an interior vector to Z[1-n, N+n].

    Parameters:
    -----------
    x : InteriorVector or sequence of float
        Interior values x(1..N)
    n : int
        Order parameter (collar width), n >= 1

    Returns:
    --------
    ExtendedSequence
        Agrees with x on Z[1,N], zero elsewhere
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    values = as_array(x)
    N = len(values)
    out = np.zeros(N + 2 * n)
    out[n:n + N] = values
    return ExtendedSequence(out, n=n, N=N)


def norm_q(x: ArrayLike, q: float = 2.0) -> float:
    """(sum |x(k)|^q)^(1/q) over k = 1..N; q = 2 is the default norm of E."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    values = np.abs(as_array(x))
    if q == 2.0:
        return float(np.sqrt(np.dot(values, values)))
    return float(np.sum(values ** q) ** (1.0 / q))
