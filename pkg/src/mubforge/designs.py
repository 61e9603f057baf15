"""Difference matrices, their developments, Latin squares and translate intersections."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import (
    FiniteGroup,
    cyclic,
    direct_product,
    field_additive,
    gf_construct,
    group_construct,
    is_prime,
    prime_power,
    smallest_prime_factor,
)

logger = logging.getLogger(__name__)

__all__ = [
    "DifferenceMatrix",
    "DMReport",
    "IntersectionReport",
    "CaseReport",
    "dm_verify",
    "dm_normalize",
    "dm_construct_gf_mult",
    "dm_construct_qq1",
    "dm_construct_cyclic_smallest_prime",
    "dm_builtin",
    "BUILTIN_NAMES",
    "dm_develop_row",
    "latin_square_check",
    "latin_square_violation",
    "wols_check",
    "mwols_from_dm",
    "translate_intersections",
    "lemma_qq_case_check",
    "dm_to_json",
    "dm_from_json",
    "dm_from_dict",
]


@dataclass(frozen=True, eq=False)
class DifferenceMatrix:
    """An ``N x lam*d`` array of canonical group indices.

    Construction only checks shape and entry range; use :func:`dm_verify` for the
    difference property.
    """

    group: FiniteGroup
    lam: int
    rows: np.ndarray
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        rows = np.array(self.rows, dtype=np.int64, copy=True)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise ValueError(f"rows must be a non-empty 2-D array, got shape {rows.shape}")
        if self.lam < 1:
            raise ValueError(f"lambda must be positive, got {self.lam}")
        d = self.group.order
        if rows.shape[1] != self.lam * d:
            raise ValueError(
                f"dimension mismatch: {rows.shape[1]} columns but lambda*d = {self.lam * d}"
            )
        if rows.min() < 0 or rows.max() >= d:
            raise ValueError(f"entries must be group indices in [0, {d})")
        rows.setflags(write=False)
        object.__setattr__(self, "rows", rows)

    @property
    def d(self) -> int:
        return self.group.order

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def n_cols(self) -> int:
        return self.rows.shape[1]

    @property
    def normalized(self) -> bool:
        return bool(np.all(self.rows[0] == self.group.identity))

    def __eq__(self, other):
        if not isinstance(other, DifferenceMatrix):
            return NotImplemented
        return (
            self.group == other.group
            and self.lam == other.lam
            and np.array_equal(self.rows, other.rows)
        )

    def __hash__(self):
        return hash((self.group, self.lam, self.rows.tobytes()))

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"<DifferenceMatrix{tag} ({self.d},{self.n_rows},{self.lam}) over {self.group.label}>"

    def with_rows(self, rows, name=None) -> "DifferenceMatrix":
        return DifferenceMatrix(self.group, self.lam, rows, name=name)


@dataclass(frozen=True)
class DMReport:
    valid: bool
    # (row i, row j, element, count) of the first unbalanced difference multiset
    violation: tuple[int, int, int, int] | None = None

    def __bool__(self) -> bool:
        return self.valid


def dm_verify(M: DifferenceMatrix) -> DMReport:
    """Count every pairwise difference multiset ``m_i - m_j`` and check each is lam-balanced."""
    d = M.d
    if M.n_cols != M.lam * d:
        raise ValueError("dimension mismatch: columns != lambda*d")
    op, inv = M.group.op_table, M.group.inverse_table
    for i in range(M.n_rows):
        for j in range(M.n_rows):
            if i == j:
                continue
            diffs = op[M.rows[i], inv[M.rows[j]]]
            counts = np.bincount(diffs, minlength=d)
            bad = np.flatnonzero(counts != M.lam)
            if bad.size:
                g = int(bad[0])
                return DMReport(False, (i, j, g, int(counts[g])))
    return DMReport(True)


def dm_normalize(M: DifferenceMatrix) -> DifferenceMatrix:
    """Act on column l with ``m_{0,l}^{-1}`` so that row 0 becomes the identity."""
    report = dm_verify(M)
    if not report:
        raise ValueError(f"cannot normalize an invalid difference matrix: {report.violation}")
    shift = M.group.inverse_table[M.rows[0]]
    rows = M.group.op_table[M.rows, shift[None, :]]
    return M.with_rows(rows, name=M.name)


def _field_group(q: int) -> FiniteGroup:
    # GF(p) is written as Z_p so prime-order constructions match the cyclic built-ins
    p, n = prime_power(q)
    return cyclic(q) if n == 1 else field_additive(q)


def _require_prime_power(q: int) -> None:
    if not isinstance(q, (int, np.integer)) or prime_power(int(q)) is None:
        raise ValueError(f"q={q} is not a prime power")


def dm_construct_gf_mult(q: int) -> DifferenceMatrix:
    """The (q,q,1)-DM given by the multiplication table of GF(q)."""
    _require_prime_power(q)
    F = gf_construct(q)
    return DifferenceMatrix(_field_group(q), 1, F.mul_table, name=f"gf-mult-{q}")


def dm_construct_qq1(q: int) -> DifferenceMatrix:
    """The (q,q+1,q)-DM with columns ``(i, j)`` in lexicographic order.

    Row 0 is ``a_i``, row 1 is ``a_j`` and row r >= 2 is ``a_i + a_{r-1} a_j``.
    Columns ``i*q .. i*q + q-1`` form the block ``P_i``.
    """
    _require_prime_power(q)
    F = gf_construct(q)
    i = np.repeat(np.arange(q), q)
    j = np.tile(np.arange(q), q)
    rows = [i, j]
    for r in range(2, q + 1):
        rows.append(F.add_table[i, F.mul_table[r - 1, j]])
    return DifferenceMatrix(_field_group(q), q, np.array(rows), name=f"qq1-{q}")


def dm_construct_cyclic_smallest_prime(d: int) -> DifferenceMatrix:
    """A (d,p,1)-DM over Z_d with ``m_{ij} = i*j mod d``, p the smallest prime factor of d."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise ValueError(f"d must be an integer >= 2, got {d!r}")
    p = smallest_prime_factor(int(d))
    rows = np.outer(np.arange(p), np.arange(d)) % d
    return DifferenceMatrix(cyclic(d), 1, rows, name=f"cyclic-{d}")


_DM_12_6_1 = [
    "00 00 00 00 00 00 00 00 00 00 00 00",
    "00 01 02 03 04 05 10 11 12 13 14 15",
    "00 03 10 01 13 15 02 12 05 04 11 14",
    "00 12 01 15 05 13 03 14 02 11 10 04",
    "00 04 15 14 02 11 12 10 13 01 03 05",
    "00 10 12 02 11 01 13 15 04 14 05 03",
]

_DM_3_5_2 = [
    [0, 0, 1, 1, 2, 2],
    [0, 1, 0, 2, 2, 1],
    [0, 1, 2, 0, 1, 2],
    [0, 2, 1, 2, 1, 0],
    [0, 2, 2, 1, 0, 1],
]

_DM_3_4_3 = [
    [0, 0, 0, 1, 1, 1, 2, 2, 2],
    [0, 1, 2, 0, 1, 2, 0, 1, 2],
    [0, 1, 2, 1, 2, 0, 2, 0, 1],
    [0, 2, 1, 1, 0, 2, 2, 1, 0],
]

BUILTIN_NAMES = ("12-6-1", "3-5-2", "3-4-3")


@lru_cache(maxsize=None)
def dm_builtin(name: str) -> DifferenceMatrix:
    if name == "12-6-1":
        G = direct_product([2, 6])
        rows = [[G.index((int(e[0]), int(e[1]))) for e in line.split()] for line in _DM_12_6_1]
        return DifferenceMatrix(G, 1, rows, name=name)
    if name == "3-5-2":
        return DifferenceMatrix(cyclic(3), 2, _DM_3_5_2, name=name)
    if name == "3-4-3":
        return DifferenceMatrix(cyclic(3), 3, _DM_3_4_3, name=name)
    raise ValueError(f"unknown built-in difference matrix {name!r}; choose from {BUILTIN_NAMES}")


def dm_develop_row(M: DifferenceMatrix, r: int) -> np.ndarray:
    """All d translates of row r; entry ``[s, l]`` is ``m_{rl} + g_s``."""
    if not 0 <= r < M.n_rows:
        raise ValueError(f"row {r} out of range for {M.n_rows} rows")
    dev = M.group.op_table[M.rows[r][None, :], np.arange(M.d)[:, None]]
    dev.setflags(write=False)
    return dev


def latin_square_violation(L) -> str | None:
    """Describe why L is not a Latin square, or None if it is one."""
    L = np.asarray(L)
    if L.ndim != 2 or L.shape[0] != L.shape[1] or L.shape[0] == 0:
        return f"not a non-empty square array (shape {L.shape})"
    d = L.shape[0]
    if not np.issubdtype(L.dtype, np.integer):
        return "entries are not integers"
    if L.min() < 0 or L.max() >= d:
        return f"symbols outside [0, {d})"
    target = np.arange(d)
    for i in range(d):
        if not np.array_equal(np.sort(L[i]), target):
            return f"row {i} repeats a symbol"
    for k in range(d):
        if not np.array_equal(np.sort(L[:, k]), target):
            return f"column {k} repeats a symbol"
    return None


def latin_square_check(L) -> bool:
    problem = latin_square_violation(L)
    if problem:
        logger.debug("not a Latin square: %s", problem)
    return problem is None


def wols_check(L, K) -> bool:
    """True iff for every ordered pair of distinct rows i, j exactly one s has L[i,s] == K[j,s]."""
    L, K = np.asarray(L), np.asarray(K)
    if L.shape != K.shape:
        raise ValueError(f"order mismatch: {L.shape} vs {K.shape}")
    agree = (L[:, None, :] == K[None, :, :]).sum(axis=2)
    off = ~np.eye(L.shape[0], dtype=bool)
    return bool(np.all(agree[off] == 1))


def mwols_from_dm(M: DifferenceMatrix) -> list[np.ndarray]:
    """Developments of rows 1..N-1 of a normalized (d,N,1)-DM."""
    if M.lam != 1:
        raise ValueError("mutually weak orthogonal Latin squares need lambda = 1")
    if not M.normalized:
        raise ValueError("difference matrix must be normalized")
    return [dm_develop_row(M, r) for r in range(1, M.n_rows)]


@dataclass(frozen=True)
class IntersectionReport:
    r: int
    s: int
    r2: int
    s2: int
    positions: tuple[int, ...]
    values: tuple[int, ...]
    # (block i, column j) per position, for matrices with lam == d columns
    blocks: tuple[tuple[int, int], ...] | None
    case: int | None


def _intersection_case(r: int, r2: int) -> int:
    lo, hi = sorted((r, r2))
    if lo == 1:
        return 1 if hi == 2 else 2
    return 3


def _is_qq1_shape(M: DifferenceMatrix) -> bool:
    return M.lam == M.d and M.n_rows == M.d + 1


def translate_intersections(M: DifferenceMatrix, r: int, s: int, r2: int, s2: int) -> IntersectionReport:
    """Positions where translate s of row r agrees with translate s2 of row r2."""
    if r == r2:
        raise ValueError("rows must differ")
    a = dm_develop_row(M, r)[s]
    b = dm_develop_row(M, r2)[s2]
    pos = np.flatnonzero(a == b)
    blocks = case = None
    if M.lam == M.d:
        blocks = tuple((int(x) // M.d, int(x) % M.d) for x in pos)
        if _is_qq1_shape(M) and r >= 1 and r2 >= 1:
            case = _intersection_case(r, r2)
    return IntersectionReport(
        r, s, r2, s2,
        positions=tuple(int(x) for x in pos),
        values=tuple(int(v) for v in a[pos]),
        blocks=blocks,
        case=case,
    )


@dataclass(frozen=True)
class CaseReport:
    p: int
    r: int
    r2: int
    s: int
    s2: int
    case: int
    passed: bool
    intersections: IntersectionReport
    step: int | None = None  # expected block-to-block value step in case 2
    reason: str = ""


def lemma_qq_case_check(p: int, r: int, r2: int, s: int, s2: int) -> CaseReport:
    """Check the block structure of the p intersections of two translates in the
    (p,p+1,p)-DM, according to which pair of rows is involved."""
    if not is_prime(p):
        raise ValueError(f"p={p} must be prime")
    if not (1 <= r <= p and 1 <= r2 <= p) or r == r2:
        raise ValueError(f"need distinct rows in [1, {p}], got {r}, {r2}")
    if not (0 <= s < p and 0 <= s2 < p):
        raise ValueError(f"translate indices must lie in [0, {p})")

    rep = translate_intersections(_qq1_cached(p), r, s, r2, s2)
    case = _intersection_case(r, r2)
    blocks = rep.blocks
    values = rep.values
    step = None

    def done(ok: bool, why: str = "") -> CaseReport:
        return CaseReport(p, r, r2, s, s2, case, ok, rep, step, why)

    if len(rep.positions) != p:
        return done(False, f"{len(rep.positions)} intersections, expected {p}")
    if sorted(values) != list(range(p)):
        return done(False, f"intersection values {values} do not cover [p] once")

    block_ids = [i for i, _ in blocks]
    if case == 1:
        if len(set(block_ids)) != 1:
            return done(False, f"intersections spread over blocks {block_ids}")
        return done(True)

    if sorted(block_ids) != list(range(p)):
        return done(False, f"expected one intersection per block, got blocks {block_ids}")
    by_block = [values[block_ids.index(i)] for i in range(p)]
    if case == 2:
        g = max(r, r2) - 1
        step = pow(g - 1, -1, p)
        diffs = {(by_block[i + 1] - by_block[i]) % p for i in range(p - 1)}
        if len(diffs) != 1 or diffs.pop() not in {step, (-step) % p}:
            return done(False, f"adjacent-block steps are not a fixed +-{step}")
        return done(True)

    cols = {j for _, j in blocks}
    if len(cols) != 1:
        return done(False, f"intersections use columns {sorted(cols)}, expected one")
    shift = by_block[0]
    if by_block != [(shift + i) % p for i in range(p)]:
        return done(False, f"values {by_block} are not a cyclic shift of 0..{p - 1}")
    return done(True)


@lru_cache(maxsize=None)
def _qq1_cached(p: int) -> DifferenceMatrix:
    return dm_construct_qq1(p)


# ---------------------------------------------------------------------------
# file format


def dm_to_json(M: DifferenceMatrix) -> str:
    """Serialize with fixed key order and one row per line."""
    group = json.dumps(M.group.to_spec())
    rows = ",\n".join("  " + json.dumps([int(v) for v in row]) for row in M.rows)
    return f'{{"group": {group}, "lambda": {M.lam}, "rows": [\n{rows}\n]}}\n'


def dm_from_dict(obj, name=None) -> DifferenceMatrix:
    if not isinstance(obj, dict):
        raise ValueError("difference matrix file must hold a JSON object")
    missing = {"group", "lambda", "rows"} - obj.keys()
    if missing:
        raise ValueError(f"missing keys {sorted(missing)}")
    group = group_construct(obj["group"])
    lam = obj["lambda"]
    rows = obj["rows"]
    if not isinstance(lam, int) or isinstance(lam, bool):
        raise ValueError("lambda must be an integer")
    if (
        not isinstance(rows, list)
        or not rows
        or not all(isinstance(row, list) for row in rows)
        or len({len(row) for row in rows}) != 1
        or not all(isinstance(v, int) and not isinstance(v, bool) for row in rows for v in row)
    ):
        raise ValueError("rows must be a non-empty rectangular list of integer lists")
    return DifferenceMatrix(group, lam, rows, name=name)


def dm_from_json(text: str, name=None) -> DifferenceMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from exc
    return dm_from_dict(obj, name=name)
