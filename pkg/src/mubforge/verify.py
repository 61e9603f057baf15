"""Brute-force verification of bases: Gram matrices, Schmidt profiles, unbiasedness.

Nothing here looks at how a basis was built; all checks work from the amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from .bases import MEB, PRODUCT, Basis, BasisFamily

__all__ = [
    "DEFAULT_TOL",
    "OrthoReport",
    "SchmidtProfile",
    "RoleReport",
    "PairReport",
    "VerificationReport",
    "basis_orthonormal",
    "schmidt_profile",
    "schmidt_values",
    "role_check",
    "mutual_unbiasedness",
    "family_report",
]

DEFAULT_TOL = 1e-9

MAXIMALLY_ENTANGLED = "maximally-entangled"
PRODUCT_STATE = "product"
OTHER = "other"


@dataclass(frozen=True)
class OrthoReport:
    max_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def basis_orthonormal(B: Basis, tol: float = DEFAULT_TOL) -> OrthoReport:
    """Max entry of ``|G - I|`` for the full Gram matrix of B."""
    V = B.vectors
    if V.shape[0] != V.shape[1]:
        raise ValueError(f"{V.shape[0]} states cannot span a space of dimension {V.shape[1]}")
    G = V.conj() @ V.T
    dev = float(np.abs(G - np.eye(V.shape[0])).max())
    return OrthoReport(dev, tol)


def schmidt_values(vectors: np.ndarray, dims) -> np.ndarray:
    """Singular values (descending) of the d x d' reshape of each row of ``vectors``."""
    d, dp = dims
    V = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
    if V.shape[1] != d * dp:
        raise ValueError(f"state length {V.shape[1]} does not match dims {tuple(dims)}")
    return np.linalg.svd(V.reshape(-1, d, dp), compute_uv=False)


@dataclass(frozen=True)
class SchmidtProfile:
    values: tuple[float, ...]
    classification: str


def _classify(sigma: np.ndarray, d: int, tol: float) -> str:
    if abs(sigma[0] - 1) <= tol and (d == 1 or sigma[1] <= tol):
        return PRODUCT_STATE
    if np.all(np.abs(sigma - 1 / math.sqrt(d)) <= tol):
        return MAXIMALLY_ENTANGLED
    return OTHER


def schmidt_profile(state, dims, tol: float = DEFAULT_TOL) -> SchmidtProfile:
    state = np.asarray(state, dtype=np.complex128).ravel()
    if not np.any(state):
        raise ValueError("zero vector has no Schmidt profile")
    sigma = schmidt_values(state, dims)[0]
    return SchmidtProfile(tuple(float(s) for s in sigma), _classify(sigma, dims[0], tol))


@dataclass(frozen=True)
class RoleReport:
    role: str
    max_deviation: float  # distance of the Schmidt vector from the role's ideal profile
    n_failed: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.n_failed == 0


def role_check(B: Basis, tol: float = DEFAULT_TOL) -> RoleReport:
    """Compare every state's Schmidt profile with the basis role tag."""
    d = B.dims[0]
    sigma = schmidt_values(B.vectors, B.dims)
    if B.role == MEB:
        dev = np.abs(sigma - 1 / math.sqrt(d)).max(axis=1)
    else:
        ideal = np.zeros(d)
        ideal[0] = 1.0
        dev = np.abs(sigma - ideal).max(axis=1)
    return RoleReport(B.role, float(dev.max()), int((dev > tol).sum()), tol)


@dataclass(frozen=True)
class PairReport:
    first: int
    second: int
    min_magnitude: float
    max_magnitude: float
    expected: float
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max(abs(self.min_magnitude - self.expected), abs(self.max_magnitude - self.expected))

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def mutual_unbiasedness(B1: Basis, B2: Basis, tol: float = DEFAULT_TOL, *, indices=(0, 1)) -> PairReport:
    """All ``|<u|v>|`` for u in B1, v in B2 against ``1/sqrt(d d')``."""
    if B1.dims != B2.dims:
        raise ValueError(f"dimension mismatch: {B1.dims} vs {B2.dims}")
    mags = np.abs(B1.vectors.conj() @ B2.vectors.T)
    expected = 1 / math.sqrt(B1.dims[0] * B1.dims[1])
    return PairReport(indices[0], indices[1], float(mags.min()), float(mags.max()), expected, tol)


@dataclass
class VerificationReport:
    dims: tuple[int, int]
    tolerance: float
    orthonormality: list[OrthoReport]
    roles: list[RoleReport]
    pairs: list[PairReport]
    unbiased_claimed: bool
    verified_meb_count: int
    summary: str = ""
    bound: str = ""
    passed: bool = field(default=False)

    @property
    def all_pairs_unbiased(self) -> bool:
        return all(p.passed for p in self.pairs)

    def to_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "summary": self.summary,
            "bound": self.bound,
            "dims": list(self.dims),
            "tolerance": self.tolerance,
            "unbiasedness": "claimed" if self.unbiased_claimed else "not claimed / measured only",
            "verified_meb_count": self.verified_meb_count,
            "bases": [
                {
                    "index": k,
                    "role": rr.role,
                    "orthonormal": o.passed,
                    "max_gram_deviation": o.max_deviation,
                    "role_verified": rr.passed,
                    "max_schmidt_deviation": rr.max_deviation,
                    "states_failing_role": rr.n_failed,
                }
                for k, (o, rr) in enumerate(zip(self.orthonormality, self.roles))
            ],
            "pairs": [
                {**asdict(p), "passed": p.passed, "max_deviation": p.max_deviation}
                for p in self.pairs
            ],
        }


def _largest_unbiased_set(candidates: list[int], ok_pairs: set[tuple[int, int]]) -> int:
    for size in range(len(candidates), 0, -1):
        for combo in combinations(candidates, size):
            if all((a, b) in ok_pairs for a, b in combinations(combo, 2)):
                return size
    return 0


def family_report(F: BasisFamily, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Run every per-basis and pairwise check and state the achieved MUMEB lower bound."""
    ortho = [basis_orthonormal(B, tol) for B in F.bases]
    roles = [role_check(B, tol) for B in F.bases]
    pairs = [
        mutual_unbiasedness(F.bases[a], F.bases[b], tol, indices=(a, b))
        for a, b in combinations(range(len(F.bases)), 2)
    ]
    good_meb = [
        k for k, B in enumerate(F.bases) if B.role == MEB and ortho[k].passed and roles[k].passed
    ]
    ok_pairs = {(p.first, p.second) for p in pairs if p.passed}
    k = _largest_unbiased_set(good_meb, ok_pairs)

    per_basis_ok = all(o.passed for o in ortho) and all(r.passed for r in roles)
    unbiased = all(p.passed for p in pairs)
    passed = per_basis_ok and (unbiased or not F.unbiased_claimed)

    n = len(F.bases)
    n_meb = sum(B.role == MEB for B in F.bases)
    n_pb = sum(B.role == PRODUCT for B in F.bases)
    d, dp = F.dims
    noun = "MUBs" if unbiased and per_basis_ok else "bases"
    summary = f"{n} {noun}: {n_meb} MEB + {n_pb} PB"
    if not F.unbiased_claimed:
        summary += " (unbiasedness not claimed / measured only)"
    bound = f"M({d},{dp}) ≥ {k}"
    return VerificationReport(
        F.dims, tol, ortho, roles, pairs, F.unbiased_claimed, k,
        summary=f"{summary}; {bound}", bound=bound, passed=passed,
    )
