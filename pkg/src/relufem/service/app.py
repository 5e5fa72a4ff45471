"""FastAPI service wrapping the constructive core.

Stateless: every endpoint is a pure function of its request body, so the
service can be replicated freely.  Networks travel as their JSON document
format; validation errors surface as 422 responses with the offending
location in the detail string.
"""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, HTTPException

from .. import constructions as cons
from .. import fem2d, reports
from ..netcore import (
    MlpNetwork,
    NetworkFormatError,
    SkipNetwork,
    evaluate,
    net_from_dict,
    net_to_dict,
)
from .schemas import (
    BuildRequest,
    BuildResponse,
    ConvertRequest,
    ConvertResponse,
    EvalRequest,
    EvalResponse,
    HealthResponse,
    ReportFilesResponse,
    VerifyRequest,
    VerifyResponse,
)

BUILD_TARGETS = ("g", "g-ell", "relu1", "x2", "xy", "psi", "hat2d", "monomial", "polynomial", "fem")


def _build_network(req: BuildRequest):
    t = req.target
    if t == "g":
        return cons.build_g()
    if t == "g-ell":
        if req.levels is None:
            raise ValueError("target 'g-ell' needs levels")
        return cons.build_g_ell(req.levels)
    if t == "relu1":
        return cons.build_relu1()
    if t == "x2":
        if req.levels is None:
            raise ValueError("target 'x2' needs levels")
        return cons.build_x2_hat(req.levels)
    if t == "xy":
        if req.levels is None:
            raise ValueError("target 'xy' needs levels")
        return cons.build_xy_hat(req.levels, req.bound)
    if t == "psi":
        if req.levels is None:
            raise ValueError("target 'psi' needs levels")
        return cons.build_psi_ell(req.levels)
    if t == "hat2d":
        return cons.build_hat2d()
    if t == "monomial":
        if not req.exponents:
            raise ValueError("target 'monomial' needs exponents")
        if req.levels is None:
            raise ValueError("target 'monomial' needs levels")
        return cons.build_monomial(tuple(req.exponents), req.levels)
    if t == "polynomial":
        if req.polynomial is None:
            raise ValueError("target 'polynomial' needs a polynomial document")
        if req.levels is None:
            raise ValueError("target 'polynomial' needs levels")
        poly = cons.Polynomial.from_dict(req.polynomial.model_dump())
        return cons.build_polynomial(poly, req.levels)
    if t == "fem":
        if req.fem is None:
            raise ValueError("target 'fem' needs a nodal-function document")
        fem = fem2d.FemFunction2D.from_dict(req.fem.model_dump())
        return cons.build_fem2d(cons.fem_to_placements(fem))
    raise ValueError(f"unknown build target {t!r}; expected one of {', '.join(BUILD_TARGETS)}")


def create_app() -> FastAPI:
    app = FastAPI(
        title="relufem",
        description="Constructive ReLU networks with finite-element verification.",
    )

    @app.exception_handler(ValueError)
    async def _value_error(request, exc: ValueError):  # pragma: no cover - thin shim
        raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.post("/build", response_model=BuildResponse)
    def build(req: BuildRequest) -> BuildResponse:
        try:
            net = _build_network(req)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return BuildResponse(network=net_to_dict(net), depth=net.depth, widths=net.widths)

    @app.post("/eval", response_model=EvalResponse)
    def eval_points(req: EvalRequest) -> EvalResponse:
        try:
            net = net_from_dict(req.network.model_dump(exclude_none=True))
            if req.points:
                values = evaluate(net, req.points)
                return EvalResponse(values=[float(v) for v in values])
            return EvalResponse(values=[])
        except (NetworkFormatError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/convert", response_model=ConvertResponse)
    def convert(req: ConvertRequest) -> ConvertResponse:
        try:
            net = net_from_dict(req.network.model_dump(exclude_none=True))
        except NetworkFormatError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        if isinstance(net, MlpNetwork):
            raise HTTPException(status_code=422, detail="network is already plain")
        assert isinstance(net, SkipNetwork)
        try:
            mlp = cons.skip_to_mlp(net)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return ConvertResponse(network=net_to_dict(mlp), width_delta=2 * (net.input_dim + 1))

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        try:
            rows = reports.run_suite(
                req.suite,
                seed=req.seed,
                trials=req.trials,
                max_level=req.max_level,
                mesh_level=req.mesh_level,
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return VerifyResponse(
            rows=[asdict(r) for r in rows], passed=all(r.passed for r in rows)
        )

    @app.post("/report", response_model=ReportFilesResponse)
    def report() -> ReportFilesResponse:
        return ReportFilesResponse(files=reports.report_tables())

    return app


app = create_app()
