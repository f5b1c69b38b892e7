"""Command-line interface: batch ranking, validation, normalization, serving.

Exit codes: 0 success, 1 I/O failure, 2 validation failure. Error messages
name the offending file and field; stack traces never reach the operator.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import Catalog, QosMode, catalog_to_dict, ingest_catalog
from .errors import BrokerError, SchemaError, ValidationError
from .pipeline import (
    STATUS_NO_MATCH,
    parse_selection_request,
    run_selection,
    selection_result_to_dict,
)
from .scoring import normalize_offers

EXIT_OK = 0
EXIT_IO = 1
EXIT_INVALID = 2


class _CliFailure(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliFailure(f"{path}: cannot read file: {exc.strerror or exc}", EXIT_IO) from exc


def _write_file(path: str, content: str) -> None:
    try:
        Path(path).write_text(content, encoding="utf-8")
    except OSError as exc:
        raise _CliFailure(f"{path}: cannot write file: {exc.strerror or exc}", EXIT_IO) from exc


def _load_catalog(path: str) -> Catalog:
    try:
        return ingest_catalog(_read_file(path))
    except BrokerError as exc:
        raise _CliFailure(_format_error(path, exc), EXIT_INVALID) from exc


def _load_request(path: str):
    text = _read_file(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _CliFailure(f"{path}: invalid JSON: {exc}", EXIT_INVALID) from exc
    try:
        return parse_selection_request(doc)
    except BrokerError as exc:
        raise _CliFailure(_format_error(path, exc), EXIT_INVALID) from exc


def _format_error(path: str, exc: BrokerError) -> str:
    if exc.details:
        lines = [f"{path}: {len(exc.details)} problem(s):"]
        lines += [f"  - {d}" for d in exc.details]
        return "\n".join(lines)
    return f"{path}: {exc}"


def _render_table(status: str, report_dict: dict) -> str:
    lines = []
    if status == STATUS_NO_MATCH:
        lines.append("no matching providers")
    else:
        width = max([len("provider")] + [len(e["provider_id"])
                                         for e in report_dict["entries"]])
        lines.append(f"{'provider':<{width}}  {'AU':>8}  eligible")
        for e in report_dict["entries"]:
            flag = "yes" if e["eligible"] else "no"
            lines.append(f"{e['provider_id']:<{width}}  {e['aggregate_utility']:>8.4f}  {flag}")
    lines.append(f"threshold EU = {report_dict['threshold']:.4f}")
    return "\n".join(lines)


def cmd_rank(args: argparse.Namespace) -> int:
    catalog = _load_catalog(args.catalog)
    request = _load_request(args.request)
    status, report = run_selection(catalog, request)
    result = selection_result_to_dict(status, report, catalog.mode)
    if args.out:
        _write_file(args.out, json.dumps(result, indent=2, sort_keys=True) + "\n")
    if args.format == "json":
        print(json.dumps(result, indent=2, sort_keys=True))
    else:
        print(_render_table(status, result["report"]))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    text = _read_file(args.file)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _CliFailure(f"{args.file}: invalid JSON: {exc}", EXIT_INVALID) from exc
    try:
        if isinstance(doc, dict) and "providers" in doc:
            ingest_catalog(doc)
            kind = "catalog"
        else:
            parse_selection_request(doc)
            kind = "request"
    except BrokerError as exc:
        raise _CliFailure(_format_error(args.file, exc), EXIT_INVALID) from exc
    print(f"{args.file}: valid {kind}")
    return EXIT_OK


def cmd_normalize(args: argparse.Namespace) -> int:
    catalog = _load_catalog(args.catalog)
    try:
        offers = normalize_offers(list(catalog.providers), catalog.registry())
    except BrokerError as exc:
        raise _CliFailure(_format_error(args.catalog, exc), EXIT_INVALID) from exc
    by_id = {o.provider_id: o for o in offers}
    doc = catalog_to_dict(catalog)
    doc["mode"] = QosMode.NORMALIZED.value
    for entry in doc["providers"]:
        values = by_id[entry["provider_id"]].values
        entry["qos_offering"] = {k: values[k] for k in sorted(values)}
    _write_file(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(f"wrote normalized catalog to {args.out}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    # Imported lazily so batch commands never pay the server import cost.
    import uvicorn

    from .service import BrokerConfig, create_app

    try:
        config = BrokerConfig.from_file(args.config)
    except OSError as exc:
        raise _CliFailure(f"{args.config}: cannot read config: {exc.strerror or exc}",
                          EXIT_IO) from exc
    except (SchemaError, ValidationError) as exc:
        raise _CliFailure(_format_error(args.config, exc), EXIT_INVALID) from exc
    app = create_app(config)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port,
                log_level=config.log_level)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rfbroker",
        description="Render-farm service broker: rank providers by weighted "
                    "QoS utility, validate catalogs, run the HTTP service.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="rank catalog providers against a request file")
    p_rank.add_argument("--catalog", required=True, help="catalog JSON file")
    p_rank.add_argument("--request", required=True, help="selection request JSON file")
    p_rank.add_argument("--out", help="write the full JSON report here")
    p_rank.add_argument("--format", choices=("json", "table"), default="table",
                        help="stdout format (default: table)")
    p_rank.set_defaults(func=cmd_rank)

    p_validate = sub.add_parser("validate", help="validate a catalog or request file")
    p_validate.add_argument("file", help="JSON file to validate")
    p_validate.set_defaults(func=cmd_validate)

    p_norm = sub.add_parser("normalize",
                            help="rewrite a raw catalog with min-max normalized offerings")
    p_norm.add_argument("--catalog", required=True, help="raw-mode catalog JSON file")
    p_norm.add_argument("--out", required=True, help="output path for the normalized catalog")
    p_norm.set_defaults(func=cmd_normalize)

    p_serve = sub.add_parser("serve", help="run the HTTP broker service")
    p_serve.add_argument("--config", required=True, help="broker config JSON file")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CliFailure as exc:
        print(str(exc), file=sys.stderr)
        return exc.exit_code
    except BrokerError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
