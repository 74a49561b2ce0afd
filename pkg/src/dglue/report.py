"""Check results shared by the verification operations and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of one check: truthy iff it passed."""

    name: str
    passed: bool
    residual: float = 0.0
    location: object = None
    samples: int = 0
    law: str = ""
    seed: int | None = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return bool(self.passed)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "law": self.law or self.name,
            "passed": bool(self.passed),
            "residual": float(self.residual),
            "location": _jsonable(self.location),
            "samples": int(self.samples),
            "seed": self.seed,
        }
        if self.detail:
            out["detail"] = self.detail
        if self.extra:
            out["extra"] = _jsonable(self.extra)
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = "" if self.location is None else f" at {_fmt_loc(self.location)}"
        text = f"{status}  {self.name}: residual {self.residual:.3e}{where} ({self.samples} samples)"
        return text + (f"  {self.detail}" if self.detail else "")


def worst(name: str, residuals, locations, tol: float, law: str = "", **kw) -> CheckReport:
    """Report for ``max(residuals) <= tol`` with the location of the maximum."""
    residuals = list(residuals)
    locations = list(locations)
    if not residuals:
        return CheckReport(name, True, 0.0, None, 0, law=law, **kw)
    i = max(range(len(residuals)), key=lambda j: residuals[j])
    r = float(residuals[i])
    return CheckReport(name, r <= tol, r, locations[i], len(residuals), law=law, **kw)


def _fmt_loc(loc) -> str:
    if isinstance(loc, float):
        return f"{loc:.6g}"
    return str(loc)


def _jsonable(v):
    import numpy as np
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)
