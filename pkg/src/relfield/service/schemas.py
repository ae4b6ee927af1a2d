"""Pydantic request/response models of the verification service."""

from __future__ import annotations

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, Field


class SampledRequest(BaseModel):
    """Common sampling knobs shared by the point-cloud subcommands."""

    m: float = Field(1.0, gt=0, description="mass parameter")
    psi: float = Field(0.3, ge=0, description="family angle for broglie entries")
    g2: float = Field(1.0, description="coupling of the short-range entries")
    sign: Literal[-1, 1] = Field(1, description="phase sign of oscillating entries")
    k: List[float] = Field(default=[0.0, 0.0, 0.0], min_length=3, max_length=3,
                           description="plane-wave 3-momentum")
    seed: int = 42
    count: int = Field(500, gt=0)
    box_half_width: float = Field(3.0, gt=0)
    exclusion_radius: float = Field(0.1, gt=0)
    time_window: float = Field(2.0, gt=0)
    tol: float = Field(1e-8, gt=0)

    def sample_params(self) -> dict:
        return {
            "psi": self.psi, "g2": self.g2, "sign": self.sign, "k": tuple(self.k),
            "seed": self.seed, "count": self.count,
            "box_half_width": self.box_half_width,
            "exclusion_radius": self.exclusion_radius,
            "time_window": self.time_window,
        }


class VerifyRequest(SampledRequest):
    solution: str


class ChainRequest(SampledRequest):
    base: str
    depth: int = Field(..., ge=1)
    comp: Literal[1, 2] = 1
    slot: Literal["upper", "lower"] = "lower"


class TransformRequest(SampledRequest):
    solution: str
    law: Literal["canonical", "alternative", "general"]
    kind: Literal["rotation", "boost"]
    axis: Literal["x", "y", "z"] = "z"
    angle: float = Field(..., description="rotation angle or boost rapidity")
    mix_equals_s: bool = False
    mix_kind: Optional[Literal["rotation", "boost"]] = None
    mix_axis: Literal["x", "y", "z"] = "z"
    mix_angle: float = 0.0

    def mix_params(self) -> dict:
        return {
            "mix_equals_s": self.mix_equals_s,
            "mix_kind": self.mix_kind,
            "mix_axis": self.mix_axis,
            "mix_angle": self.mix_angle,
        }


class ChargeRequest(BaseModel):
    psi: float = Field(..., ge=0)
    m: float = Field(1.0, gt=0)
    rel_tol: float = Field(1e-9, gt=0)


class ProfileRequest(BaseModel):
    solution: str
    density: str = "rho-dirac"
    m: float = Field(1.0, gt=0)
    psi: float = Field(0.3, ge=0)
    g2: float = 1.0
    r_min: float = Field(0.1, gt=0)
    r_max: float = Field(3.0, gt=0)
    steps: int = Field(30, ge=1)
    exclusion_radius: float = Field(0.1, gt=0)


class PaperCheck(BaseModel):
    name: str
    expected: Optional[Union[float, List[float]]] = None
    actual: Union[float, List[float]]
    tol: Optional[float] = None
    passed: bool = Field(..., alias="pass")

    model_config = {"populate_by_name": True}


class ReportPayload(BaseModel):
    """Envelope returned by every JSON endpoint."""

    config: dict
    report: dict
    paper_checks: List[PaperCheck]


class ErrorDetail(BaseModel):
    code: str
    message: str
