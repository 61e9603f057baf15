"""Acceptance gate. Each criterion runs at its stated tolerance and time budget and
prints one ``ACCEPTANCE <n> PASS|FAIL`` line.

Run directly (``python tests/test_acceptance.py``) or through pytest.
"""

import math
import sys
import time
from itertools import combinations, product
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from mubforge.bases import MEB, PRODUCT, Basis, BasisFamily, meb_family_d_lambda_d, mub_family_dd, mub_family_p_p2
from mubforge.designs import (
    BUILTIN_NAMES,
    dm_builtin,
    dm_construct_gf_mult,
    dm_develop_row,
    dm_normalize,
    dm_verify,
    latin_square_check,
    lemma_qq_case_check,
    mwols_from_dm,
    wols_check,
)
from mubforge.hadamard import fourier
from mubforge.verify import family_report, role_check

from golden_small import golden_3_6, golden_3_9

TOL = 1e-9
SEED = 20240
LINES = []  # collected for the pytest terminal summary


def _report(n, title, ok, detail, elapsed, budget=None):
    timing = f"{elapsed:.2f}s" + (f" (limit {budget:g}s)" if budget else "")
    line = f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {title} | {detail} | {timing}"
    LINES.append(line)
    print(line, flush=True)
    return line


def _max_cross_deviation(F, expected):
    dev = 0.0
    for a, b in combinations(range(len(F.bases)), 2):
        mags = np.abs(F.bases[a].vectors.conj() @ F.bases[b].vectors.T)
        dev = max(dev, float(np.abs(mags - expected).max()))
    return dev


def criterion_1():
    t0 = time.perf_counter()
    F = mub_family_dd(dm_builtin("12-6-1"), [fourier(12)] * 6)
    rep = family_report(F, TOL)
    dev = _max_cross_deviation(F, 1 / 12)
    roles = [B.role for B in F.bases]
    elapsed = time.perf_counter() - t0
    ok = (
        rep.passed
        and roles.count(MEB) == 5
        and roles.count(PRODUCT) == 1
        and all(r.passed for r in rep.roles)
        and len(rep.pairs) == 15
        and dev <= TOL
        and rep.bound == "M(12,12) ≥ 5"
        and elapsed < 10
    )
    return ok, f"{rep.summary}; max |mag-1/12| = {dev:.2e}", elapsed, 10


def criterion_2():
    t0 = time.perf_counter()
    parts, ok = [], True
    for q in (2, 3, 4, 5, 7, 8, 9):
        F = mub_family_dd(dm_normalize(dm_construct_gf_mult(q)), [fourier(q)] * q)
        rep = family_report(F, TOL)
        good = rep.passed and F.n_meb == q - 1 and F.n_product == 1 and len(F.bases) == q
        ok &= good
        parts.append(f"q={q}:{'ok' if good else 'bad'}")
    elapsed = time.perf_counter() - t0
    return ok and elapsed < 30, " ".join(parts), elapsed, 30


def criterion_3():
    t0 = time.perf_counter()
    parts, ok, t7 = [], True, 0.0
    for p in (2, 3, 5, 7):
        tp = time.perf_counter()
        F = mub_family_p_p2(p)
        rep = family_report(F, TOL)
        dev = _max_cross_deviation(F, 1 / math.sqrt(p ** 3))
        if p == 7:
            t7 = time.perf_counter() - tp
        good = rep.passed and len(F.bases) == p + 1 and F.n_meb == p and dev <= TOL
        ok &= good
        parts.append(f"p={p}:{'ok' if good else 'bad'}({dev:.1e})")
    elapsed = time.perf_counter() - t0
    return ok and t7 < 120, " ".join(parts) + f"; p=7 took {t7:.2f}s", elapsed, 120


def criterion_4():
    t0 = time.perf_counter()
    F = mub_family_p_p2(3)
    worst = 0.0
    for r, B in enumerate(F.bases):
        for lab in B.labels:
            worst = max(worst, float(np.abs(B.state(lab) - golden_3_9(r, *lab)).max()))
    dev = _max_cross_deviation(F, 1 / (3 * math.sqrt(3)))
    elapsed = time.perf_counter() - t0
    ok = len(F.bases) == 4 and worst <= 1e-10 and dev <= TOL
    return ok, f"max entry error {worst:.1e}; max |mag-1/(3√3)| = {dev:.1e}", elapsed, None


def criterion_5():
    t0 = time.perf_counter()
    F = meb_family_d_lambda_d(dm_builtin("3-5-2"), [fourier(3)] * 4, [fourier(2)] * 5)
    s = 1 / math.sqrt(2)
    e = np.eye(18)
    err = 0.0
    for l in (0, 1):
        a0 = s * (e[0] + (-1) ** l * e[1])  # |0>(|0> ± |1>)
        err = max(err, float(np.abs(F.bases[0].state((0, 0, l)) - a0).max()))
        for j in range(3):
            w = np.exp(2j * np.pi * j / 3)
            a1 = (e[0 * 6 + 0] + (-1) ** l * e[0 * 6 + 2]
                  + w * (e[1 * 6 + 1] + (-1) ** l * e[1 * 6 + 5])
                  + w ** 2 * (e[2 * 6 + 3] + (-1) ** l * e[2 * 6 + 4])) / math.sqrt(6)
            err = max(err, float(np.abs(F.bases[1].state((0, j, l)) - a1).max()))
    full = max(
        float(np.abs(B.state(lab) - golden_3_6(r, *lab)).max())
        for r, B in enumerate(F.bases) for lab in B.labels
    )
    rep = family_report(F, TOL)
    ortho = all(o.passed for o in rep.orthonormality)
    roles_ok = all(role_check(B, TOL).passed for B in F.bases)
    elapsed = time.perf_counter() - t0
    ok = F.n_meb == 4 and F.n_product == 1 and err <= 1e-10 and full <= 1e-10 and ortho and roles_ok
    detail = (f"{F.n_meb} MEB + {F.n_product} PB in C^3⊗C^6; formula error {err:.1e}, "
              f"full listing error {full:.1e}; orthonormal={ortho}, roles={roles_ok}")
    return ok, detail, elapsed, None


def criterion_6():
    t0 = time.perf_counter()
    checked, bad = 0, []
    for p in (3, 5, 7):
        for r, r2 in combinations(range(1, p + 1), 2):
            for s, s2 in product(range(p), repeat=2):
                rep = lemma_qq_case_check(p, r, r2, s, s2)
                checked += 1
                if not (rep.passed and sorted(rep.intersections.values) == list(range(p))):
                    bad.append((p, r, r2, s, s2))
    elapsed = time.perf_counter() - t0
    return not bad and elapsed < 5, f"{checked} tuples checked, {len(bad)} failures", elapsed, 5


def criterion_7():
    t0 = time.perf_counter()
    M = dm_builtin("12-6-1")
    squares = [dm_develop_row(M, r) for r in range(1, 6)]
    latin = all(latin_square_check(L) for L in squares)
    mwols = mwols_from_dm(M)
    wols = all(wols_check(a, b) for a, b in product(mwols, repeat=2) if a is not b)
    once = True
    for a, b in combinations(range(5), 2):
        counts = (squares[a][:, None, :] == squares[b][None, :, :]).sum(axis=2)
        once &= bool(np.all(counts == 1))
    elapsed = time.perf_counter() - t0
    ok = latin and len(mwols) == 5 and wols and once and elapsed < 5
    return ok, f"Latin={latin}, 5-MWOLS(12)={wols}, single intersections={once}", elapsed, 5


def _mutated_family(F, rng):
    b = int(rng.integers(len(F.bases)))
    B = F.bases[b]
    V = B.vectors.copy()
    V[rng.integers(V.shape[0]), rng.integers(V.shape[1])] += 1e-3 * np.exp(2j * np.pi * rng.random())
    bases = list(F.bases)
    bases[b] = Basis(B.dims, V, B.labels, B.role, B.provenance)
    return BasisFamily(F.dims, tuple(bases), F.unbiased_claimed)


def criterion_8():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    missed = []
    for name in BUILTIN_NAMES:
        M = dm_builtin(name)
        for _ in range(100):
            rows = M.rows.copy()
            i, j = rng.integers(M.n_rows), rng.integers(M.n_cols)
            rows[i, j] = (rows[i, j] + rng.integers(1, M.d)) % M.d
            if dm_verify(M.with_rows(rows)):
                missed.append((name, i, j))
    families = {
        "12-6-1 family": mub_family_dd(dm_builtin("12-6-1"), [fourier(12)] * 6),
        "3-5-2 family": meb_family_d_lambda_d(dm_builtin("3-5-2"), [fourier(3)] * 4, [fourier(2)] * 5),
        "p-p2 p=3 family": mub_family_p_p2(3),
    }
    for label, F in families.items():
        if not family_report(F, TOL).passed:
            missed.append((label, "unmutated failed"))
        for _ in range(100):
            if family_report(_mutated_family(F, rng), TOL).passed:
                missed.append((label, "mutation undetected"))
    elapsed = time.perf_counter() - t0
    total = 100 * (len(BUILTIN_NAMES) + len(families))
    return not missed, f"{total - len(missed)}/{total} mutations detected (seed {SEED})", elapsed, None


CRITERIA = [
    (1, "12-6-1 family: 5 MEB + 1 PB, 15 unbiased pairs, M(12,12) ≥ 5", criterion_1),
    (2, "GF(q) multiplication-table sweep q ∈ {2,3,4,5,7,8,9}", criterion_2),
    (3, "C^p⊗C^{p²} sweep p ∈ {2,3,5,7}", criterion_3),
    (4, "C^3⊗C^9 golden state lists", criterion_4),
    (5, "C^3⊗C^6 golden states and roles", criterion_5),
    (6, "translate intersection cases p ∈ {3,5,7}", criterion_6),
    (7, "12-6-1 developments are 5-MWOLS(12) with single intersections", criterion_7),
    (8, "verifier falsification by random mutations", criterion_8),
]


@pytest.mark.parametrize("n, title, fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_acceptance(n, title, fn):
    ok, detail, elapsed, budget = fn()
    line = _report(n, title, ok, detail, elapsed, budget)
    assert ok, line


if __name__ == "__main__":
    results = []
    for n, title, fn in CRITERIA:
        ok, detail, elapsed, budget = fn()
        _report(n, title, ok, detail, elapsed, budget)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
