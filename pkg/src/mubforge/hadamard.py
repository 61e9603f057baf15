"""Complex Hadamard matrices: the Fourier family and the Heisenberg-Weyl bases for prime p."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .algebra import is_prime, roots_of_unity

logger = logging.getLogger(__name__)

__all__ = [
    "fourier",
    "hadamard_verify",
    "hw_diag",
    "hw_diag_exponents",
    "hw_power",
    "hw_family",
    "HWFamily",
    "FDReport",
    "lemma_fd_check",
]


def fourier(d: int) -> np.ndarray:
    """Unnormalized Fourier matrix, entry ``[j, k] = w_d^{jk}``."""
    if d < 1:
        raise ValueError("Fourier matrix needs d >= 1")
    k = np.arange(d)
    return roots_of_unity(d)[np.outer(k, k) % d]


def hadamard_verify(H, unit_tol: float = 1e-10, gram_tol: float = 1e-9) -> bool:
    """Unit-modulus entries and ``H H^dag = H^dag H = d I`` within tolerance."""
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"Hadamard check needs a square matrix, got shape {H.shape}")
    d = H.shape[0]
    dev = np.abs(np.abs(H) - 1).max()
    if dev > unit_tol:
        logger.debug("entry modulus off by %.3g", dev)
        return False
    target = d * np.eye(d)
    for name, G in (("H H^dag", H @ H.conj().T), ("H^dag H", H.conj().T @ H)):
        dev = np.abs(G - target).max()
        if dev > gram_tol:
            logger.debug("%s deviates from dI by %.3g", name, dev)
            return False
    return True


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p={p} must be prime")


def hw_diag_exponents(p: int) -> tuple[int, np.ndarray]:
    """``(n, e)`` such that the diagonal phase matrix is ``diag(w_n^{e_j})``."""
    _require_prime(p)
    if p == 2:
        return 4, np.array([0, 1])
    j = np.arange(p)
    return p, (j * j) % p


def hw_diag(p: int) -> np.ndarray:
    """Diagonal of D: ``w_p^{j^2}`` for odd p, ``(1, i)`` for p = 2."""
    n, e = hw_diag_exponents(p)
    return roots_of_unity(n)[e]


def hw_power(p: int, m: int) -> np.ndarray:
    """``D^m F_p`` as a Hadamard matrix (m may be negative)."""
    n, e = hw_diag_exponents(p)
    phases = roots_of_unity(n)[(m * e) % n]
    return phases[:, None] * fourier(p)


@dataclass(frozen=True)
class HWFamily:
    p: int
    diag: np.ndarray
    members: tuple[np.ndarray, ...]  # I, F, D F, ..., D^{p-1} F

    def scaled(self) -> list[np.ndarray]:
        return [M / math.sqrt(self.p) if k else M for k, M in enumerate(self.members)]


def hw_family(p: int) -> HWFamily:
    _require_prime(p)
    members = [np.eye(p, dtype=np.complex128)] + [hw_power(p, m) for m in range(p)]
    return HWFamily(p, hw_diag(p), tuple(members))


@dataclass(frozen=True)
class FDReport:
    p: int
    m: int
    m2: int
    j: int
    j2: int
    identity_error: float  # max entrywise error of the product identity
    magnitude: float  # |sum_i conj(<i|D^m F|j>) <i|D^m2 F|j2>|
    expected_magnitude: float
    passed: bool


def lemma_fd_check(p: int, m: int, m2: int, j: int, j2: int, tol: float = 1e-10) -> FDReport:
    """Check ``conj(<i|D^m F|j>) <i|D^m2 F|j2> = <i|D^{m2-m} F|j2-j>`` for every i, and
    the magnitude of the summed product (sqrt(p) when m != m2)."""
    _require_prime(p)
    for v in (m, m2, j, j2):
        if not 0 <= v < p:
            raise ValueError(f"indices must lie in [0, {p}), got {v}")
    A, B = hw_power(p, m), hw_power(p, m2)
    lhs = A[:, j].conj() * B[:, j2]
    rhs = hw_power(p, m2 - m)[:, (j2 - j) % p]
    err = float(np.abs(lhs - rhs).max())
    mag = float(abs(lhs.sum()))
    if m != m2:
        expected = math.sqrt(p)
    else:
        expected = float(p) if j == j2 else 0.0
    passed = err <= tol and abs(mag - expected) <= max(tol, 1e-9)
    return FDReport(p, m, m2, j, j2, err, mag, expected, passed)
