"""HTTP facade: thin FastAPI routes over the shared handlers.

Error mapping: unparseable specs and labels (SpecError) become 400;
semantically invalid requests (DataError, other ValueErrors) become 422,
except unknown labels on GET /forms/{label}, which are 404.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..formdb import DataError, FormDatabase
from . import handlers
from .handlers import SpecError
from .models import (FormResponse, FormsResponse, InterpRequest,
                     InterpResponse, LValueRequest, LValueResponse,
                     QexpRequest, QexpResponse, VerifyRequest, VerifyResponse)


def create_app(data_dir=None) -> FastAPI:
    app = FastAPI(title="rankin", description="Exact q-expansion, character, "
                  "Euler-factor, and interpolation-factor computations")
    db = FormDatabase(data_dir)

    @app.exception_handler(DataError)
    async def data_error(request: Request, exc: DataError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(SpecError)
    async def spec_error(request: Request, exc: SpecError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok"}

    @app.post("/qexp", response_model=QexpResponse)
    async def qexp(req: QexpRequest) -> QexpResponse:
        return handlers.handle_qexp(req, db=db)

    @app.post("/verify", response_model=VerifyResponse)
    async def verify(req: VerifyRequest) -> VerifyResponse:
        return handlers.handle_verify(req, db=db)

    @app.post("/lvalue", response_model=LValueResponse)
    async def lvalue(req: LValueRequest) -> LValueResponse:
        return handlers.handle_lvalue(req, db=db)

    @app.post("/interp", response_model=InterpResponse)
    async def interp(req: InterpRequest) -> InterpResponse:
        return handlers.handle_interp(req, db=db)

    @app.get("/forms", response_model=FormsResponse)
    async def forms() -> FormsResponse:
        return handlers.handle_forms(db=db)

    @app.get("/forms/{label}", response_model=FormResponse)
    async def form(label: str) -> FormResponse:
        try:
            return handlers.handle_form(label, db=db)
        except DataError as exc:
            if "unknown eigenform label" in str(exc):
                return JSONResponse(status_code=404,
                                    content={"error": str(exc)})
            raise

    return app


app = create_app()
