"""FastAPI service wrapping the verification package.

Every computation endpoint returns the {config, report, paper_checks}
payload and sets the X-Relfield-Exit-Code header with the CLI exit code
(0 pass, 1 tolerance fail).  Request errors map to structured detail
objects: unknown-solution (404), bad-request (422), sampling-budget /
divergent-charge / precondition-failed (409).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Response
from fastapi.responses import PlainTextResponse

from .. import reports
from ..errors import (
    DivergentChargeError,
    PreconditionError,
    SamplingBudgetError,
    UnknownSolutionError,
)
from .schemas import (
    ChainRequest,
    ChargeRequest,
    ProfileRequest,
    ReportPayload,
    TransformRequest,
    VerifyRequest,
)

EXIT_HEADER = "X-Relfield-Exit-Code"

_ERROR_MAP = (
    (UnknownSolutionError, 404, "unknown-solution"),
    (SamplingBudgetError, 409, "sampling-budget"),
    (DivergentChargeError, 409, "divergent-charge"),
    (PreconditionError, 409, "precondition-failed"),
    (ValueError, 422, "bad-request"),
)


def _run(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except Exception as exc:
        for etype, status, code in _ERROR_MAP:
            if isinstance(exc, etype):
                raise HTTPException(status_code=status,
                                    detail={"code": code, "message": str(exc)}) from exc
        raise


def create_app() -> FastAPI:
    app = FastAPI(
        title="relfield",
        description="Numerical verification of singular spinor/scalar "
                    "field solutions, their transformations and conserved "
                    "quantities.",
        version="0.1.0",
    )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/solutions")
    def solutions():
        return reports.catalog_listing()

    @app.post("/verify", response_model=ReportPayload)
    def verify_endpoint(req: VerifyRequest, response: Response):
        payload, code = _run(reports.run_verify, req.solution, req.m, req.tol,
                             req.sample_params())
        response.headers[EXIT_HEADER] = str(code)
        return payload

    @app.post("/chain", response_model=ReportPayload)
    def chain_endpoint(req: ChainRequest, response: Response):
        payload, code = _run(reports.run_chain, req.base, req.depth, req.comp,
                             req.slot, req.m, req.tol, req.sample_params())
        response.headers[EXIT_HEADER] = str(code)
        return payload

    @app.post("/transform", response_model=ReportPayload)
    def transform_endpoint(req: TransformRequest, response: Response):
        payload, code = _run(reports.run_transform, req.solution, req.m, req.law,
                             req.kind, req.axis, req.angle, req.mix_params(),
                             req.tol, req.sample_params())
        response.headers[EXIT_HEADER] = str(code)
        return payload

    @app.post("/charge", response_model=ReportPayload)
    def charge_endpoint(req: ChargeRequest, response: Response):
        payload, code = _run(reports.run_charge, req.psi, req.m, req.rel_tol)
        response.headers[EXIT_HEADER] = str(code)
        return payload

    @app.post("/profile")
    def profile_endpoint(req: ProfileRequest):
        csv_text, code = _run(
            reports.run_profile, req.solution, req.density, req.m, req.r_min,
            req.r_max, req.steps, req.exclusion_radius,
            {"psi": req.psi, "g2": req.g2},
        )
        return PlainTextResponse(csv_text, media_type="text/csv",
                                 headers={EXIT_HEADER: str(code)})

    return app


app = create_app()
