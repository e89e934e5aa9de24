"""Run configuration: a single JSON document validated at load time.

Unknown keys are rejected at every level. ``effective`` applies command-line
overrides, and ``config_hash`` fingerprints the result so every output
document can be traced back to the exact inputs that produced it.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .ahead import Box, ConstantField, Side, TaylorField
from .errors import ConfigError
from .fluid import Eos
from .scheme import R_FORMS, IterationConfig

_KEYS = ("t", "r", "tt", "tr", "rr")


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class EosSpec(_Model):
    gamma: float = Field(2.0, ge=1.0, allow_inf_nan=False)
    kappa: float = Field(1.0, gt=0.0, allow_inf_nan=False)

    def build(self) -> Eos:
        return Eos(self.gamma, self.kappa)


class BoxSpec(_Model):
    """Validity box; a missing side is unbounded."""

    t0: float | None = Field(None, allow_inf_nan=False)
    t1: float | None = Field(None, allow_inf_nan=False)
    r0: float | None = Field(None, allow_inf_nan=False)
    r1: float | None = Field(None, allow_inf_nan=False)

    @model_validator(mode="after")
    def _ordered(self) -> "BoxSpec":
        b = self.build()
        if not (b.t0 < b.t1 and b.r0 < b.r1):
            raise ValueError("box needs t0 < t1 and r0 < r1")
        return self

    def build(self) -> Box:
        lo, hi = -math.inf, math.inf
        return Box(lo if self.t0 is None else self.t0, hi if self.t1 is None else self.t1,
                   lo if self.r0 is None else self.r0, hi if self.r1 is None else self.r1)


class AheadSpec(_Model):
    """Field ahead of one shock: ``constant`` or quadratic ``taylor`` in ``(t, r - r_ref)``."""

    kind: Literal["constant", "taylor"] = "taylor"
    rho: float = Field(gt=0.0, allow_inf_nan=False)
    w: float = Field(allow_inf_nan=False)
    r_ref: float | None = None  # defaults to r0
    rho_coef: dict[str, float] = Field(default_factory=dict)
    w_coef: dict[str, float] = Field(default_factory=dict)
    box: BoxSpec | None = None

    @field_validator("rho_coef", "w_coef")
    @classmethod
    def _known_keys(cls, v: dict[str, float]) -> dict[str, float]:
        unknown = sorted(set(v) - set(_KEYS))
        if unknown:
            raise ValueError(f"unknown Taylor coefficient(s) {unknown}; allowed {list(_KEYS)}")
        if not all(math.isfinite(c) for c in v.values()):
            raise ValueError("Taylor coefficients must be finite")
        return v

    @model_validator(mode="after")
    def _constant_has_no_coefficients(self) -> "AheadSpec":
        if self.kind == "constant" and (self.rho_coef or self.w_coef or self.r_ref is not None):
            raise ValueError("a constant field takes no Taylor coefficients or r_ref")
        return self

    def build(self, side: Side, r0: float):
        box = self.box.build() if self.box is not None else Box()
        if self.kind == "constant":
            return ConstantField(self.rho, self.w, side, box)
        r_ref = r0 if self.r_ref is None else self.r_ref
        return TaylorField(self.rho, self.w, r_ref, dict(self.rho_coef), dict(self.w_coef), side, box)


class IterationSpec(_Model):
    tol_fix: float = Field(1e-10, gt=0.0, allow_inf_nan=False)
    max_iters: int = Field(100, ge=1)
    newton_tol: float = Field(1e-12, gt=0.0, allow_inf_nan=False)
    newton_max_iter: int = Field(50, ge=1)
    r_form: str = "direct"

    @field_validator("r_form")
    @classmethod
    def _form(cls, v: str) -> str:
        if v not in R_FORMS:
            raise ValueError(f"r_form must be one of {list(R_FORMS)}")
        return v

    def build(self) -> IterationConfig:
        return IterationConfig(**self.model_dump())


class ProbeSpec(_Model):
    r_perturbation: float = Field(0.0, allow_inf_nan=False)  # coefficient of v^2 added to the initial r
    uniqueness_amplitude: float = Field(1e-3, allow_inf_nan=False)


class ValidationSpec(_Model):
    """Refinement resolutions and tolerance.

    Residuals difference over the u-spacing ``a h``, so the fixed-point
    error must sit well below the truncation error for orders to show.
    """

    N_list: list[int] = Field(default_factory=lambda: [32, 64, 128], min_length=1)
    tol_fix: float = Field(1e-13, gt=0.0, allow_inf_nan=False)
    gamma0_override: float | None = Field(None, allow_inf_nan=False)

    @field_validator("N_list")
    @classmethod
    def _resolutions(cls, v: list[int]) -> list[int]:
        if any(n < 8 for n in v) or len(set(v)) != len(v):
            raise ValueError("resolutions must be distinct integers >= 8")
        return sorted(v)


class PhiSpec(_Model):
    """``f(x) = a x + quadratic x^2 + cubic x^3`` on ``[0, x_max]``."""

    a: float = Field(0.5, allow_inf_nan=False)
    quadratic: float = Field(1.0, allow_inf_nan=False)
    cubic: float = Field(0.0, allow_inf_nan=False)
    x_max: float = Field(0.1, gt=0.0, allow_inf_nan=False)
    tol: float = Field(1e-14, gt=0.0, allow_inf_nan=False)
    n_max: int = Field(200, ge=1)
    n_points: int = Field(1001, ge=5)


class RunConfig(_Model):
    eos: EosSpec = Field(default_factory=EosSpec)
    r0: float = Field(1.0, gt=0.0, allow_inf_nan=False)
    ahead1: AheadSpec | None = None
    ahead2: AheadSpec | None = None
    epsilon: float = Field(5e-3, gt=0.0, allow_inf_nan=False)
    N: int = Field(64, ge=8)
    iteration: IterationSpec = Field(default_factory=IterationSpec)
    out: str = "out"
    probe: ProbeSpec = Field(default_factory=ProbeSpec)
    validation: ValidationSpec = Field(default_factory=ValidationSpec)
    phi: PhiSpec = Field(default_factory=PhiSpec)

    def require_fields(self) -> tuple[AheadSpec, AheadSpec]:
        if self.ahead1 is None or self.ahead2 is None:
            raise ConfigError("this command needs both 'ahead1' and 'ahead2'")
        return self.ahead1, self.ahead2

    def build_fields(self):
        s1, s2 = self.require_fields()
        return s1.build(Side.LEFT, self.r0), s2.build(Side.RIGHT, self.r0)


def _first_error(exc: ValidationError) -> str:
    err = exc.errors()[0]
    loc = ".".join(str(p) for p in err["loc"]) or "<root>"
    return f"{loc}: {err['msg']}"


def from_dict(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration ({_first_error(exc)})",
                          errors=exc.errors(include_url=False, include_context=False)) from None


def load(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    return from_dict(data)


def effective(cfg: RunConfig, N: int | None = None, epsilon: float | None = None,
              tol: float | None = None, out: str | None = None) -> RunConfig:
    """Configuration after command-line overrides, revalidated.

    ``tol`` sets the fixed-point tolerances of solve and validate and the
    phi tolerance.
    """
    data = to_dict(cfg)
    if N is not None:
        data["N"] = N
    if epsilon is not None:
        data["epsilon"] = epsilon
    if tol is not None:
        data["iteration"]["tol_fix"] = tol
        data["validation"]["tol_fix"] = tol
        data["phi"]["tol"] = tol
    if out is not None:
        data["out"] = out
    return from_dict(data)


def to_dict(cfg: RunConfig) -> dict:
    return cfg.model_dump(mode="json")


def dumps(cfg: RunConfig) -> str:
    """Canonical JSON text: sorted keys, fixed separators."""
    return json.dumps(to_dict(cfg), sort_keys=True, indent=2, allow_nan=False)


def config_hash(cfg: RunConfig) -> str:
    """sha256 of the canonical effective configuration, output location excluded."""
    data = to_dict(cfg)
    data.pop("out")
    canon = json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=False)
    return hashlib.sha256(canon.encode()).hexdigest()
