from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "PASS"
FAIL = "FAIL"


@dataclass
class Certificate:
    """Outcome of an exact check.

    ``witness`` names what failed (a generator, a holonomy element, ...) and
    ``residual`` is the nonzero polynomial that should have vanished.
    ``data`` carries any extra polynomials or values worth reporting.
    """

    check: str
    status: str
    witness: str | None = None
    residual: Any = None
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self):
        return self.passed

    def to_record(self) -> dict:
        rec = {"check": self.check, "status": self.status}
        if self.witness is not None:
            rec["witness"] = self.witness
        if self.residual is not None:
            rec["residual"] = str(self.residual)
        if self.data:
            rec["data"] = {k: _render(v) for k, v in self.data.items()}
        return rec


def _render(v):
    if isinstance(v, (str, int, bool)) or v is None:
        return v
    if isinstance(v, dict):
        return {str(k): _render(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_render(x) for x in v]
    if isinstance(v, Certificate):
        return v.to_record()
    return str(v)


def passed(check: str, **data) -> Certificate:
    return Certificate(check, PASS, data=data)


def failed(check: str, witness: str, residual=None, **data) -> Certificate:
    return Certificate(check, FAIL, witness=witness, residual=residual, data=data)


def combine(check: str, certs: list[Certificate], **data) -> Certificate:
    """PASS iff every sub-certificate passed; the first failure is the witness."""
    for c in certs:
        if not c.passed:
            return Certificate(check, FAIL, witness=f"{c.check}: {c.witness}",
                               residual=c.residual, data={"parts": certs, **data})
    return Certificate(check, PASS, data={"parts": certs, **data})
