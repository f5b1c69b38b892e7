"""HTTP facade composing catalog, matching, scoring, and SLA management.

JSON API under /v1, bearer-token authenticated with two scopes: the user
token covers everything except violation intake, which each registered
monitor signs with its own token. Errors use a uniform envelope::

    {"error": {"code": "...", "message": "...", "details": [...]}}

Selection responses embed the catalog snapshot id used, so any ranking can be
replayed byte-for-byte later.
"""

from __future__ import annotations

import json
import logging
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import sla as sla_mod
from .catalog import CatalogStore, catalog_to_dict, ingest_catalog
from .errors import (
    BrokerError,
    DegenerateInputError,
    DomainError,
    IllegalTransitionError,
    KeyMismatchError,
    NotAViolationError,
    NotFoundError,
    SchemaError,
    SlaNotActiveError,
    StorageError,
    ValidationError,
    WrongActorError,
)
from .pipeline import parse_selection_request, run_selection, selection_result_to_dict

logger = logging.getLogger(__name__)

_STATUS_BY_ERROR: tuple[tuple[type[BrokerError], int], ...] = (
    (SchemaError, 400),
    (ValidationError, 400),  # covers UnknownAttributeError
    (DomainError, 400),
    (KeyMismatchError, 400),
    (DegenerateInputError, 400),
    (NotAViolationError, 400),
    (IllegalTransitionError, 409),
    (WrongActorError, 409),
    (SlaNotActiveError, 409),
    (NotFoundError, 404),  # covers unknown sla/provider/monitor/snapshot
    (StorageError, 500),
)


def _status_for(exc: BrokerError) -> int:
    for cls, status in _STATUS_BY_ERROR:
        if isinstance(exc, cls):
            return status
    return 500


def _error_response(status: int, code: str, message: str,
                    details: list[str] | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"error": {"code": code, "message": message,
                           "details": details or []}},
    )


@dataclass
class BrokerConfig:
    """Runtime configuration; loadable from a JSON file."""

    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    catalog_store_path: str = "./catalog-store"
    user_token: str = "change-me"
    monitor_tokens: dict[str, str] = field(default_factory=dict)
    weight_sum_tolerance: float = 1e-9
    log_level: str = "info"

    def __post_init__(self):
        if not (isinstance(self.weight_sum_tolerance, (int, float))
                and self.weight_sum_tolerance > 0):
            raise ValidationError(
                [f"weight_sum_tolerance: must be > 0, got {self.weight_sum_tolerance!r}"])
        if not (1 <= int(self.listen_port) <= 65535):
            raise ValidationError([f"listen_port: out of range, got {self.listen_port!r}"])

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "BrokerConfig":
        if not isinstance(doc, Mapping):
            raise ValidationError(["config: must be a JSON object"])
        known = {"listen", "catalog_store_path", "user_token", "monitor_tokens",
                 "weight_sum_tolerance", "log_level", "description"}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ValidationError([f"config: unknown fields {unknown}"])
        kwargs: dict[str, Any] = {}
        listen = doc.get("listen")
        if listen is not None:
            if not isinstance(listen, str) or ":" not in listen:
                raise ValidationError(["listen: must be 'host:port'"])
            host, _, port = listen.rpartition(":")
            try:
                kwargs["listen_host"], kwargs["listen_port"] = host, int(port)
            except ValueError:
                raise ValidationError([f"listen: port must be an integer, got {port!r}"]) from None
        for key in ("catalog_store_path", "user_token", "log_level"):
            if key in doc:
                kwargs[key] = doc[key]
        if "monitor_tokens" in doc:
            tokens = doc["monitor_tokens"]
            if not isinstance(tokens, Mapping) or not all(
                    isinstance(k, str) and isinstance(v, str) for k, v in tokens.items()):
                raise ValidationError(["monitor_tokens: must map monitor_id -> token"])
            kwargs["monitor_tokens"] = dict(tokens)
        if "weight_sum_tolerance" in doc:
            kwargs["weight_sum_tolerance"] = doc["weight_sum_tolerance"]
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "BrokerConfig":
        text = Path(path).read_text(encoding="utf-8")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"config {path}: invalid JSON: {exc}") from exc
        return cls.from_dict(doc)


def _bearer_token(request: Request) -> str | None:
    header = request.headers.get("authorization", "")
    if header.startswith("Bearer "):
        return header[len("Bearer "):]
    return None


def create_app(config: BrokerConfig) -> FastAPI:
    app = FastAPI(title="rfbroker", version="0.1.0", docs_url=None, redoc_url=None)
    # The web portal is served from its own origin; auth stays token-based.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["Authorization",
                                                           "Content-Type"])
    store = CatalogStore(config.catalog_store_path)
    manager = sla_mod.SlaManager()
    for monitor_id, token in config.monitor_tokens.items():
        manager.register_monitor(monitor_id, {"endpoint": "configured", "token": token})
    selections: dict[str, dict[str, Any]] = {}

    app.state.store = store
    app.state.sla_manager = manager
    app.state.config = config

    @app.exception_handler(BrokerError)
    async def broker_error_handler(_request: Request, exc: BrokerError):
        return _error_response(_status_for(exc), exc.code, str(exc), exc.details)

    def require_user(request: Request) -> None:
        if _bearer_token(request) != config.user_token:
            raise _Unauthorized()

    class _Unauthorized(Exception):
        pass

    @app.exception_handler(_Unauthorized)
    async def unauthorized_handler(_request: Request, _exc: _Unauthorized):
        return _error_response(401, "unauthorized", "missing or invalid bearer token")

    async def read_json_body(request: Request) -> Any:
        raw = await request.body()
        try:
            return json.loads(raw, parse_constant=_reject_nan)
        except SchemaError:
            raise
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON body: {exc}") from exc

    def _reject_nan(token: str):
        raise SchemaError(f"non-finite number literal {token!r} is not accepted")

    def latest_catalog():
        if store.latest_id() is None:
            raise _NoCatalog()
        return store.latest()

    class _NoCatalog(Exception):
        pass

    @app.exception_handler(_NoCatalog)
    async def no_catalog_handler(_request: Request, _exc: _NoCatalog):
        return _error_response(409, "no_catalog", "no catalog snapshot has been stored yet")

    # -- health ----------------------------------------------------------

    @app.get("/v1/healthz")
    async def healthz():
        return {"status": "ok"}

    # -- catalog ---------------------------------------------------------

    @app.put("/v1/catalog")
    async def put_catalog(request: Request):
        require_user(request)
        raw = await request.body()
        catalog = ingest_catalog(raw.decode("utf-8", errors="strict"))
        snapshot_id = store.store(catalog)
        logger.info("stored catalog snapshot %d (%d providers)",
                    snapshot_id, len(catalog.providers))
        return {"snapshot_id": snapshot_id, "catalog": catalog_to_dict(catalog)}

    @app.get("/v1/catalog")
    async def get_catalog(request: Request):
        require_user(request)
        snapshot_id, catalog = latest_catalog()
        return {"snapshot_id": snapshot_id, "catalog": catalog_to_dict(catalog)}

    @app.get("/v1/catalog/{snapshot}")
    async def get_catalog_snapshot(snapshot: str, request: Request):
        require_user(request)
        try:
            snapshot_id = int(snapshot)
        except ValueError:
            raise NotFoundError(f"unknown catalog snapshot id {snapshot!r}") from None
        catalog = store.load(snapshot_id)
        return {"snapshot_id": snapshot_id, "catalog": catalog_to_dict(catalog)}

    # -- selection -------------------------------------------------------

    @app.post("/v1/selections")
    async def post_selection(request: Request):
        require_user(request)
        body = await read_json_body(request)
        selection = parse_selection_request(
            body, tolerance=config.weight_sum_tolerance)
        snapshot_id, catalog = latest_catalog()
        status, report = run_selection(catalog, selection)
        record = {
            "request_id": uuid.uuid4().hex,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "snapshot_id": snapshot_id,
            **selection_result_to_dict(status, report, catalog.mode),
        }
        selections[record["request_id"]] = record
        return record

    @app.get("/v1/selections/{request_id}")
    async def get_selection(request_id: str, request: Request):
        require_user(request)
        record = selections.get(request_id)
        if record is None:
            raise NotFoundError(f"unknown selection request '{request_id}'")
        return record

    # -- sla ---------------------------------------------------------------

    def sla_representation(sla_id: str) -> dict[str, Any]:
        draft = manager.get(sla_id)
        return sla_mod.sla_to_dict(draft, manager.violations_for(sla_id))

    @app.post("/v1/slas")
    async def post_sla(request: Request):
        require_user(request)
        body = await read_json_body(request)
        if not isinstance(body, dict):
            raise ValidationError(["body: must be a JSON object"])
        user_id = body.get("user_id")
        provider_id = body.get("provider_id")
        problems = []
        if not isinstance(user_id, str) or not user_id:
            problems.append("user_id: must be a non-empty string")
        if not isinstance(provider_id, str) or not provider_id:
            problems.append("provider_id: must be a non-empty string")
        if problems:
            raise ValidationError(problems)
        _snapshot_id, catalog = latest_catalog()
        terms = sla_mod.parse_terms(body.get("terms"), catalog.registry())
        draft = manager.propose(user_id, provider_id, terms,
                                registry=catalog.registry(),
                                provider_ids=set(catalog.provider_ids()))
        return sla_representation(draft.sla_id)

    @app.get("/v1/slas/{sla_id}")
    async def get_sla(sla_id: str, request: Request):
        require_user(request)
        return sla_representation(sla_id)

    @app.post("/v1/slas/{sla_id}/respond")
    async def post_respond(sla_id: str, request: Request):
        require_user(request)
        body = await read_json_body(request)
        if not isinstance(body, dict):
            raise ValidationError(["body: must be a JSON object"])
        actor_raw = body.get("actor")
        action_raw = body.get("action")
        problems = []
        if actor_raw not in (sla_mod.Actor.USER.value, sla_mod.Actor.PROVIDER.value):
            problems.append(f"actor: must be 'user' or 'provider', got {actor_raw!r}")
        if action_raw not in tuple(a.value for a in sla_mod.Action):
            problems.append(f"action: must be one of accept/reject/counter, got {action_raw!r}")
        if problems:
            raise ValidationError(problems)
        terms = None
        if body.get("terms") is not None:
            _snapshot_id, catalog = latest_catalog()
            terms = sla_mod.parse_terms(body["terms"], catalog.registry())
        manager.respond(sla_id, sla_mod.Actor(actor_raw),
                        sla_mod.Action(action_raw), terms)
        return sla_representation(sla_id)

    @app.post("/v1/slas/{sla_id}/violations")
    async def post_violation(sla_id: str, request: Request):
        body = await read_json_body(request)
        if not isinstance(body, dict):
            raise ValidationError(["body: must be a JSON object"])
        monitor_id = body.get("monitor_id")
        if not isinstance(monitor_id, str) or not monitor_id:
            raise ValidationError(["monitor_id: must be a non-empty string"])
        registration = manager.monitor(monitor_id)  # 404 when unregistered
        if _bearer_token(request) != registration.token:
            raise _Unauthorized()
        if not isinstance(body.get("attribute_id"), str) or not body["attribute_id"]:
            raise ValidationError(["attribute_id: must be a non-empty string"])
        observed_at = None
        if body.get("observed_at") is not None:
            try:
                observed_at = datetime.fromisoformat(body["observed_at"])
            except (TypeError, ValueError):
                raise ValidationError(
                    [f"observed_at: must be an ISO-8601 timestamp, got {body.get('observed_at')!r}"]
                ) from None
        report = manager.submit_violation(
            sla_id=sla_id,
            monitor_id=monitor_id,
            attribute_id=body.get("attribute_id"),
            observed=body.get("observed"),
            observed_at=observed_at,
            bound=body.get("bound"),
        )
        return {"status": "recorded", "report": {
            "report_id": report.report_id, "sla_id": report.sla_id,
            "monitor_id": report.monitor_id, "attribute_id": report.attribute_id,
            "observed": report.observed, "bound": report.bound,
            "comparator": report.comparator.value,
            "observed_at": report.observed_at.isoformat(),
        }}

    return app
