"""JSON file formats for basis families and verification reports."""

from __future__ import annotations

import json

import numpy as np

from .bases import MEB, PRODUCT, Basis, BasisFamily
from .verify import VerificationReport

__all__ = ["family_to_json", "family_from_json", "report_to_json"]

# constructions that promise only MEB + PB structure
_UNCLAIMED = {"d-lambda-d"}


def _num(x: float) -> str:
    return "%.17g" % x


def family_to_json(F: BasisFamily) -> str:
    """Byte-stable serialization: fixed key order, 17 significant digits, one state per line."""
    out = ['{"dims": [%d, %d], "bases": [' % F.dims]
    for b, B in enumerate(F.bases):
        prov = json.dumps(B.provenance, sort_keys=True, ensure_ascii=False)
        out.append('{"role": "%s", "provenance": %s, "states": [' % (B.role, prov))
        lines = []
        for label, vec in zip(B.labels, B.vectors):
            amps = ",".join(f"[{_num(z.real)},{_num(z.imag)}]" for z in vec)
            lines.append('{"label": %s, "amplitudes": [%s]}' % (json.dumps(list(label)), amps))
        out.append(",\n".join(lines))
        out.append("]}" + ("," if b < len(F.bases) - 1 else ""))
    out.append("]}")
    return "\n".join(out) + "\n"


def family_from_json(text: str) -> BasisFamily:
    """Parse a basis family file; any structural problem raises ValueError."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc}") from exc
    try:
        d, dp = (int(v) for v in obj["dims"])
        if d < 1 or dp < d:
            raise ValueError(f"bad dims {obj['dims']}")
        raw_bases = obj["bases"]
        if not isinstance(raw_bases, list) or not raw_bases:
            raise ValueError("'bases' must be a non-empty list")
        bases = []
        for rb in raw_bases:
            role = rb["role"]
            if role not in (PRODUCT, MEB):
                raise ValueError(f"unknown role {role!r}")
            states = rb["states"]
            labels = tuple(tuple(int(v) for v in s["label"]) for s in states)
            amps = np.array([s["amplitudes"] for s in states], dtype=np.float64)
            if amps.ndim != 3 or amps.shape[1:] != (d * dp, 2):
                raise ValueError(f"amplitude arrays must have shape ({d * dp}, 2)")
            vectors = amps[..., 0] + 1j * amps[..., 1]
            bases.append(Basis((d, dp), vectors, labels, role, dict(rb.get("provenance") or {})))
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed basis file: {exc!r}") from exc
    claimed = not any(B.provenance.get("construction") in _UNCLAIMED for B in bases)
    return BasisFamily((d, dp), tuple(bases), unbiased_claimed=claimed)


def report_to_json(report: VerificationReport) -> str:
    return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
