"""Pydantic request/response models for the network service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class LayerDoc(BaseModel):
    weights: list[list[float]]
    bias: list[float]
    input_block_cols: Optional[int] = None


class NetworkDoc(BaseModel):
    kind: Literal["mlp", "skip"]
    input_dim: int = Field(ge=1)
    layers: list[LayerDoc]
    output: LayerDoc


class PolyTerm(BaseModel):
    exponents: list[int]
    coeff: float


class PolynomialDoc(BaseModel):
    dim: int = Field(ge=1)
    terms: list[PolyTerm]


class FemFunctionDoc(BaseModel):
    level: int = Field(ge=0)
    domain: list[float] = Field(min_length=4, max_length=4)
    values: list[float]


class BuildRequest(BaseModel):
    target: str
    levels: Optional[int] = None
    bound: float = 1.0
    exponents: Optional[list[int]] = None
    polynomial: Optional[PolynomialDoc] = None
    fem: Optional[FemFunctionDoc] = None


class BuildResponse(BaseModel):
    network: NetworkDoc
    depth: int
    widths: list[int]


class EvalRequest(BaseModel):
    network: NetworkDoc
    points: list[list[float]]


class EvalResponse(BaseModel):
    values: list[float]


class ConvertRequest(BaseModel):
    network: NetworkDoc


class ConvertResponse(BaseModel):
    network: NetworkDoc
    width_delta: int


class VerifyRequest(BaseModel):
    suite: str
    seed: int = 0
    trials: int = 20
    max_level: Optional[int] = None
    mesh_level: int = 3


class ReportRow(BaseModel):
    claim_id: str
    statement: str
    theoretical: float
    measured: float
    witness: str
    tolerance: float
    mode: str
    passed: bool
    runtime_ms: float


class VerifyResponse(BaseModel):
    rows: list[ReportRow]
    passed: bool


class ReportFilesResponse(BaseModel):
    files: dict[str, str]


class HealthResponse(BaseModel):
    status: str
