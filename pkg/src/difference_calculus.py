"""
Forward differences, the Δⁿ operator matrix, the weighted Gram matrix and
the embedding constants λ, 4ⁿ of the inequality

    λ‖x‖² ≤ Σ (Δⁿx(k))² ≤ 4ⁿ‖x‖².

λ is defined as the smallest eigenvalue of DᵀD, the sharp constant.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .sequence_space import ExtendedSequence


class SpectralError(RuntimeError):
    """Raised when the symmetric eigensolver fails or the spectrum breaks its bounds."""


@dataclass(frozen=True, eq=False)
class DifferenceMatrix:
    """
    Matrix D of shape (N+n, N) with (Dx)(k) = Δⁿ(extend(x))(k), k = 1-n..N.

    Row r corresponds to k = r + 1 - n, column c to j = c + 1.
    """

    matrix: np.ndarray
    n: int
    N: int

    @property
    def rows(self) -> int:
        return self.N + self.n

    @property
    def cols(self) -> int:
        return self.N

    def apply(self, x) -> np.ndarray:
        return self.matrix @ np.asarray(x, dtype=float)

    def entry(self, k: int, j: int) -> float:
        """Entry at problem indices (k, j), k in Z[1-n, N], j in Z[1, N]."""
        return float(self.matrix[k - 1 + self.n, j - 1])


@dataclass(frozen=True)
class SpectralBounds:
    """Extreme eigenvalues of DᵀD (p ≡ 1) and the bound 4ⁿ."""

    lambda_min: float
    lambda_max: float
    upper_bound: float

    def to_dict(self) -> dict:
        return {
            'lambda': self.lambda_min,
            'lambda_max': self.lambda_max,
            'bound': self.upper_bound,
        }


def nth_diff(s: Union[ExtendedSequence, Sequence[float]], n: int, width: int = None) -> np.ndarray:
    """
    Apply Δⁿ to a sequence on Z[1-w, N+w].

    Parameters:
    -----------
    s : ExtendedSequence or sequence of float
        Values on Z[1-w, N+w]; w is s.n for an ExtendedSequence, else `width`
    n : int
        Number of differences, 0 <= n <= w
    width : int, optional
        Collar width w for raw arrays (defaults to n)

    Returns:
    --------
    np.ndarray
        Δⁿs(k) for k = 1-n..N+w-n (k = 1-n..N when n = w); for n = 0 the
        restriction of s to Z[1, N]
    """
    if isinstance(s, ExtendedSequence):
        values, w = s.values, s.n
    else:
        values = np.asarray(s, dtype=float)
        w = n if width is None else width
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > w:
        raise ValueError(f"n={n} exceeds the extension width {w} of the sequence")
    if n == 0:
        return values[w:len(values) - w].copy()
    # Δⁿ on Z[1-w, N+w] lives on Z[1-w, N+w-n]; keep k >= 1-n.
    return np.diff(values, n)[w - n:]


@lru_cache(maxsize=64)
def _stencil(N: int, n: int) -> np.ndarray:
    eye = np.eye(N + 2 * n)
    D = np.diff(eye, n, axis=0)[:, n:n + N]
    D.setflags(write=False)
    return D


def build_operator_matrix(N: int, n: int) -> DifferenceMatrix:
    """
    Dense matrix form of Δⁿ acting on zero-extended interior vectors.

    Parameters:
    -----------
    N : int
        Interior length, N >= 2
    n : int
        Order parameter, n >= 1

    Returns:
    --------
    DifferenceMatrix
        (N+n) x N matrix; column j holds the binomial stencil (-1)^(n-i) C(n,i)
        at rows k = j - i
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return DifferenceMatrix(_stencil(N, n), n=n, N=N)


def weighted_gram(D: DifferenceMatrix, p: Sequence[float]) -> np.ndarray:
    """
    A = Dᵀ diag(p) D, so that xᵀAx = Σ_{k=1-n}^{N} p(k)(Δⁿx(k))².

    Parameters:
    -----------
    D : DifferenceMatrix
        Operator matrix from build_operator_matrix
    p : sequence of float
        N+n coefficients ordered from k = 1-n to k = N

    Returns:
    --------
    np.ndarray
        Symmetric N x N matrix
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (D.rows,):
        raise ValueError(f"p must have N+n={D.rows} entries, got {p.size}")
    M = D.matrix
    A = M.T @ (p[:, None] * M)
    return 0.5 * (A + A.T)


def symmetric_spectrum(A: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a symmetric matrix via LAPACK eigh."""
    try:
        return np.linalg.eigh(A)[0]
    except np.linalg.LinAlgError as e:
        raise SpectralError(f"symmetric eigensolver did not converge: {e}") from e


@lru_cache(maxsize=256)
def embedding_constants(N: int, n: int) -> SpectralBounds:
    """
    Extreme eigenvalues of DᵀD.

    Returns:
    --------
    SpectralBounds
        lambda_min = λ, lambda_max, upper_bound = 4ⁿ
    """
    D = build_operator_matrix(N, n)
    eigenvalues = symmetric_spectrum(weighted_gram(D, np.ones(D.rows)))
    lam_min, lam_max = float(eigenvalues[0]), float(eigenvalues[-1])
    bound = float(4 ** n)
    if not (0.0 < lam_min <= lam_max <= bound + 1e-9 * bound):
        raise SpectralError(
            f"spectrum of DᵀD out of bounds for N={N}, n={n}: "
            f"lambda_min={lam_min}, lambda_max={lam_max}, 4^n={bound}"
        )
    return SpectralBounds(lambda_min=lam_min, lambda_max=lam_max, upper_bound=bound)


def dirichlet_lambda_min(N: int) -> float:
    """Analytic smallest eigenvalue 4 sin²(π / (2(N+1))) for n = 1."""
    return float(4.0 * np.sin(np.pi / (2 * (N + 1))) ** 2)
