"""Verification records, the report envelope, and their JSON / CSV serialisation."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__

CSV_COLUMNS = ("check_id", "params", "measured", "bound", "margin", "status")
CONSTANT_COLUMNS = ("quantity", "params", "value")


@dataclass
class VerificationReport:
    """One checked inequality.

    ``sense`` is ``">="`` (measured must stay above bound) or ``"<="``;
    ``margin`` is positive on the safe side, so PASS iff margin >= 0.
    """

    check_id: str
    params: dict
    measured: float
    bound: float
    sense: str = ">="
    tolerance: float = 0.0
    extremal_point: object = None
    note: str = ""

    @property
    def margin(self) -> float:
        d = self.measured - self.bound
        return d if self.sense == ">=" else -d

    @property
    def passed(self) -> bool:
        return bool(self.margin >= 0)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> dict:
        return {"check_id": self.check_id, "params": self.params, "measured": self.measured,
                "bound": self.bound, "sense": self.sense, "margin": self.margin,
                "tolerance": self.tolerance, "extremal_point": self.extremal_point,
                "status": self.status, "note": self.note}

    def line(self) -> str:
        p = ", ".join(f"{k}={_short(v)}" for k, v in self.params.items())
        return (f"{self.status} {self.check_id}({p}): measured={self.measured:.6g} "
                f"{self.sense} {self.bound:.6g} margin={self.margin:.3g}")


def _short(v):
    if isinstance(v, float):
        return f"{v:g}"
    return v


def jsonable(obj):
    """Plain JSON types; non-finite floats become strings so the output stays strict JSON."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    return obj


@dataclass
class ReportEnvelope:
    command: str
    config: dict
    checks: list = field(default_factory=list)
    table: list | None = None
    timings: dict = field(default_factory=dict)

    @property
    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    @property
    def all_passed(self) -> bool:
        return not self.failed

    def payload(self) -> dict:
        out = {
            "tool": "diracbounds",
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "summary": {"total": len(self.checks), "passed": len(self.checks) - len(self.failed),
                        "failed": len(self.failed), "status": "PASS" if self.all_passed else "FAIL"},
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.table is not None:
            out["table"] = self.table
        return jsonable(out)

    def digest(self) -> str:
        text = json.dumps(self.payload(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def to_json(self, *, timings: bool = True) -> str:
        doc = self.payload()
        doc["payload_sha256"] = self.digest()
        if timings:
            doc["timings"] = jsonable(self.timings)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.table is not None:
            w.writerow(CONSTANT_COLUMNS)
            for row in self.table:
                w.writerow([row["quantity"], json.dumps(jsonable(row["params"]), sort_keys=True),
                            "N/A" if row["value"] is None else repr(float(row["value"]))])
            return buf.getvalue()
        w.writerow(CSV_COLUMNS)
        for c in self.checks:
            w.writerow([c.check_id, json.dumps(jsonable(c.params), sort_keys=True),
                        repr(float(c.measured)), repr(float(c.bound)), repr(float(c.margin)), c.status])
        return buf.getvalue()
