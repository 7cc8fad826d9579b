"""Structured identity reports, suite results and the errata ledger.

Numbers are rendered as exact strings (rationals "a/b", p-adic values with
their digit lists); the only floating-point renderings are archimedean
residuals, printed with 15 significant digits.  Output is deterministic
for a fixed configuration.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .arith import PadicNumber
from .logring import LogLaurent

PASS = "pass"
FAIL = "fail"
INFORMATIVE = "informative"


_MAX_RENDER_BITS = 13000  # ~4000 decimal digits; larger rationals are digests


def render_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, PadicNumber):
        return v.render()
    if isinstance(v, LogLaurent):
        return str(v)
    if isinstance(v, int):
        v = Fraction(v)
    if isinstance(v, Fraction):
        if (v.numerator.bit_length() < _MAX_RENDER_BITS
                and v.denominator.bit_length() < _MAX_RENDER_BITS):
            return str(v)
        # safety net: exact rationals of this size never carry report-level
        # information; callers should pass digit-form values instead
        return (f"<rational ~{v.numerator.bit_length()}/"
                f"~{v.denominator.bit_length()} bits>")
    if isinstance(v, (float, mpmath.mpf)):
        return mpmath.nstr(mpmath.mpf(v), 15)
    return str(v)


def render_agreement(a) -> str:
    if a is None:
        return ""
    if a == math.inf:
        return "inf"
    if isinstance(a, (int,)):
        return str(a)
    return mpmath.nstr(mpmath.mpf(a), 15)


@dataclass
class IdentityReport:
    identity: str
    params: dict
    lhs: str
    rhs: str
    agreement: str  # p-adic valuation of (lhs - rhs), or real |error|
    residual: str
    verdict: str
    note: str = ""

    @classmethod
    def build(cls, identity, params, lhs, rhs, agreement, residual,
              verdict, note=""):
        return cls(identity, {k: render_value(v) for k, v in params.items()},
                   render_value(lhs), render_value(rhs),
                   render_agreement(agreement), render_value(residual),
                   verdict, note)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "agreement": self.agreement,
            "residual": self.residual,
            "verdict": self.verdict,
            "note": self.note,
        }


@dataclass
class ErratumEntry:
    """A machine-readable record of a printed formula disagreeing with the
    governing definitions, as detected by independent-route computation."""

    key: str
    statement: str
    evidence: str

    def to_dict(self) -> dict:
        return {"key": self.key, "statement": self.statement, "evidence": self.evidence}


@dataclass
class SuiteResult:
    config: dict
    reports: list[IdentityReport] = field(default_factory=list)
    errata: list[ErratumEntry] = field(default_factory=list)

    def add(self, report: IdentityReport) -> None:
        self.reports.append(report)

    def add_erratum(self, key: str, statement: str, evidence: str) -> None:
        self.errata.append(ErratumEntry(key, statement, evidence))

    @property
    def counts(self) -> dict:
        c = {PASS: 0, FAIL: 0, INFORMATIVE: 0}
        for r in self.reports:
            c[r.verdict] += 1
        return c

    def ok(self) -> bool:
        return self.counts[FAIL] == 0

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "reports": [r.to_dict() for r in self.reports],
            "errata": [e.to_dict() for e in self.errata],
            "summary": self.counts,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["identity", "m", "n", "p", "q", "agreement", "verdict"])
        for r in self.reports:
            w.writerow([
                r.identity,
                r.params.get("m", ""),
                r.params.get("n", ""),
                r.params.get("p", ""),
                r.params.get("q", ""),
                r.agreement,
                r.verdict,
            ])
        return buf.getvalue()


REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "qbernoulli verification report",
    "type": "object",
    "required": ["config", "reports", "errata", "summary"],
    "properties": {
        "config": {"type": "object"},
        "reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["identity", "params", "lhs", "rhs",
                             "agreement", "residual", "verdict"],
                "properties": {
                    "identity": {"type": "string"},
                    "params": {"type": "object",
                               "additionalProperties": {"type": "string"}},
                    "lhs": {"type": "string"},
                    "rhs": {"type": "string"},
                    "agreement": {"type": "string"},
                    "residual": {"type": "string"},
                    "verdict": {"enum": ["pass", "fail", "informative"]},
                    "note": {"type": "string"},
                },
            },
        },
        "errata": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["key", "statement", "evidence"],
                "properties": {
                    "key": {"type": "string"},
                    "statement": {"type": "string"},
                    "evidence": {"type": "string"},
                },
            },
        },
        "summary": {
            "type": "object",
            "required": ["pass", "fail", "informative"],
            "additionalProperties": {"type": "integer"},
        },
    },
}
