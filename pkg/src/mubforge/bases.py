"""Bipartite product and maximally entangled bases built from difference matrices.

States live in C^d (x) C^d' with amplitude index ``a*d' + b``. A basis stores its
states as the rows of a ``(n_states, d*d')`` complex array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import is_prime
from .designs import DifferenceMatrix, dm_construct_qq1, dm_develop_row, dm_verify
from .hadamard import fourier, hw_power

__all__ = [
    "Basis",
    "BasisFamily",
    "PRODUCT",
    "MEB",
    "product_basis",
    "meb_from_ls",
    "mub_family_dd",
    "rank_within_symbol",
    "reduce_for_lambda",
    "meb_family_d_lambda_d",
    "mub_family_p_p2",
]

PRODUCT = "product"
MEB = "meb"


@dataclass(frozen=True, eq=False)
class Basis:
    dims: tuple[int, int]
    vectors: np.ndarray
    labels: tuple[tuple[int, ...], ...]
    role: str
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        d, dp = self.dims
        if d > dp:
            raise ValueError(f"expected d <= d', got dims {self.dims}")
        if self.vectors.ndim != 2 or self.vectors.shape[1] != d * dp:
            raise ValueError(f"state vectors must have length {d * dp}")
        if len(self.labels) != self.vectors.shape[0]:
            raise ValueError("one label per state required")
        if self.role not in (PRODUCT, MEB):
            raise ValueError(f"unknown role {self.role!r}")

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def state(self, label) -> np.ndarray:
        return self.vectors[self.labels.index(tuple(label))]


@dataclass(frozen=True, eq=False)
class BasisFamily:
    dims: tuple[int, int]
    bases: tuple[Basis, ...]
    # False when the construction only promises MEB + PB structure, not unbiasedness
    unbiased_claimed: bool = True

    def __post_init__(self):
        if not self.bases:
            raise ValueError("a basis family needs at least one basis")
        if any(b.dims != self.dims for b in self.bases):
            raise ValueError("all bases in a family must share dims")

    @property
    def expected_magnitude(self) -> float:
        d, dp = self.dims
        return 1 / math.sqrt(d * dp)

    @property
    def n_meb(self) -> int:
        return sum(b.role == MEB for b in self.bases)

    @property
    def n_product(self) -> int:
        return sum(b.role == PRODUCT for b in self.bases)


def _square(H, d: int, what: str) -> np.ndarray:
    H = np.asarray(H, dtype=np.complex128)
    if H.shape != (d, d):
        raise ValueError(f"{what} must have order {d}, got shape {H.shape}")
    return H


def product_basis(H0, d: int, provenance=None) -> Basis:
    """States ``|i> (x) H0|j> / sqrt(d)``, labelled (i, j)."""
    H0 = _square(H0, d, "H0")
    vecs = np.zeros((d, d, d, d), dtype=np.complex128)  # [i, j, a, b]
    idx = np.arange(d)
    vecs[idx, :, idx, :] = H0.T[None, :, :]
    labels = tuple((i, j) for i in range(d) for j in range(d))
    return Basis((d, d), vecs.reshape(d * d, d * d) / math.sqrt(d), labels, PRODUCT, dict(provenance or {}))


def meb_from_ls(L, H, provenance=None) -> Basis:
    """States ``sum_k |L[i,k]> (x) |k> <k|H|j> / sqrt(d)``, labelled (i, j)."""
    L = np.asarray(L)
    d = L.shape[0]
    if L.shape != (d, d):
        raise ValueError(f"Latin square must be square, got {L.shape}")
    H = _square(H, d, "Hadamard matrix")
    vecs = np.zeros((d, d, d * d), dtype=np.complex128)  # [i, j, a*d + b]
    k = np.arange(d)
    for i in range(d):
        vecs[i][:, L[i] * d + k] = H.T
    labels = tuple((i, j) for i in range(d) for j in range(d))
    return Basis((d, d), vecs.reshape(d * d, d * d) / math.sqrt(d), labels, MEB, dict(provenance or {}))


def mub_family_dd(M: DifferenceMatrix, Hs) -> BasisFamily:
    """A product basis plus one MEB per nonzero row of a normalized (d,N,1)-DM."""
    if M.lam != 1:
        raise ValueError(f"need lambda = 1, got {M.lam}")
    if not M.normalized:
        raise ValueError("difference matrix must be normalized")
    Hs = list(Hs)
    if len(Hs) != M.n_rows:
        raise ValueError(f"need {M.n_rows} Hadamard matrices, got {len(Hs)}")
    d = M.d
    prov = {"construction": "dd", "dm": M.name}
    bases = [product_basis(Hs[0], d, {**prov, "row": 0})]
    for r in range(1, M.n_rows):
        bases.append(meb_from_ls(dm_develop_row(M, r), Hs[r], {**prov, "row": r}))
    return BasisFamily((d, d), tuple(bases))


def rank_within_symbol(row, symbol: int, lam: int | None = None) -> list[tuple[int, int]]:
    """Positions of ``symbol`` in ``row`` (increasing) paired with ranks 0, 1, ..."""
    pos = np.flatnonzero(np.asarray(row) == symbol)
    if lam is not None and pos.size != lam:
        raise ValueError(f"symbol {symbol} occurs {pos.size} times, expected {lam}")
    return [(int(x), rank) for rank, x in enumerate(pos)]


def reduce_for_lambda(M: DifferenceMatrix) -> DifferenceMatrix:
    """Drop an all-identity row if present, then stable-sort columns by row 0.

    Every remaining row must contain each element exactly lam times.
    """
    rows = M.rows
    ident = np.flatnonzero(np.all(rows == M.group.identity, axis=1))
    if ident.size:
        rows = np.delete(rows, ident[0], axis=0)
    if rows.shape[0] == 0:
        raise ValueError("no rows left after dropping the identity row")
    for r, row in enumerate(rows):
        if not np.all(np.bincount(row, minlength=M.d) == M.lam):
            raise ValueError(f"row {r} is not balanced: every element must occur {M.lam} times")
    order = np.argsort(rows[0], kind="stable")
    return M.with_rows(rows[:, order], name=M.name)


def _symbol_ranks(dev: np.ndarray, d: int) -> np.ndarray:
    """``rank[s, x]`` = number of earlier positions in translate s holding the same symbol."""
    rank = np.zeros(dev.shape, dtype=np.int64)
    for s in range(dev.shape[0]):
        seen = np.zeros(d, dtype=np.int64)
        for x, k in enumerate(dev[s]):
            rank[s, x] = seen[k]
            seen[k] += 1
    return rank


def meb_family_d_lambda_d(M: DifferenceMatrix, H1s, H2s, *, unbiased_claimed=False,
                          construction="d-lambda-d") -> BasisFamily:
    """One product basis and N-1 MEBs in C^d (x) C^{lam d}.

    ``M`` may be a normalized (d,N+1,lam)-DM or already the N balanced rows.
    ``H1s`` holds N-1 Hadamards of order d (for rows 1..N-1), ``H2s`` holds N of order lam.
    """
    if M.lam < 2:
        raise ValueError(f"need lambda >= 2, got {M.lam}")
    R = reduce_for_lambda(M)
    d, lam, N = R.d, R.lam, R.n_rows
    H1s, H2s = list(H1s), list(H2s)
    if len(H1s) != N - 1:
        raise ValueError(f"need {N - 1} Hadamards of order {d}, got {len(H1s)}")
    if len(H2s) != N:
        raise ValueError(f"need {N} Hadamards of order {lam}, got {len(H2s)}")
    H1s = [None] + [_square(H, d, "H1") for H in H1s]
    H2s = [_square(H, lam, "H2") for H in H2s]
    dp = lam * d
    labels = tuple((i, j, l) for i in range(d) for j in range(d) for l in range(lam))
    x = np.arange(dp)
    prov = {"construction": construction, "dm": M.name}

    bases = []
    for r in range(N):
        S = dm_develop_row(R, r)
        ranks = _symbol_ranks(S, d)
        vecs = np.zeros((d, d, lam, d * dp), dtype=np.complex128)  # [i, j, l, a*dp + b]
        for i in range(d):
            # amplitude on |k>|x> with k = S[i, x] is H2[rank_x, l]
            second = H2s[r][ranks[i]]  # (dp, lam)
            if r == 0:
                for j in range(d):
                    sel = S[i] == j
                    vecs[i, j][:, j * dp + x[sel]] = second[sel].T
            else:
                k = S[i]
                coef = H1s[r][k]  # (dp, d): <k_x|H1|j>
                vecs[i][:, :, k * dp + x] = (coef[:, :, None] * second[:, None, :]).transpose(1, 2, 0)
        scale = math.sqrt(lam) if r == 0 else math.sqrt(lam * d)
        role = PRODUCT if r == 0 else MEB
        bases.append(Basis((d, dp), vecs.reshape(-1, d * dp) / scale, labels, role, {**prov, "row": r}))
    return BasisFamily((d, dp), tuple(bases), unbiased_claimed=unbiased_claimed)


def mub_family_p_p2(p: int) -> BasisFamily:
    """p+1 mutually unbiased bases of C^p (x) C^{p^2}: p MEBs and one product basis."""
    if not is_prime(p):
        raise ValueError(f"p={p} must be prime")
    M = dm_construct_qq1(p)
    assert dm_verify(M), "construction produced an invalid difference matrix"
    F = fourier(p)
    H1s = [hw_power(p, r) for r in range(1, p + 1)]
    H2s = [F] * (p + 1)
    return meb_family_d_lambda_d(M, H1s, H2s, unbiased_claimed=True, construction="p-p2")
