"""Command-line client for the explanation service.

The CLI only assembles request payloads, sends them to the service and
renders responses; all semantics live behind the HTTP endpoints.  By
default requests go to an in-process application instance (no network);
``--server`` points them at a running remote service instead.

Exit codes: 0 ok, 2 input error, 3 model-integrity error, 4 capacity.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTEGRITY = 3
EXIT_CAPACITY = 4

_STATUS_EXIT = {400: EXIT_INPUT, 422: EXIT_INPUT, 409: EXIT_INTEGRITY, 413: EXIT_CAPACITY}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reasonkit",
        description="explanations with formal guarantees for discrete classifiers",
    )
    parser.add_argument(
        "--server",
        metavar="URL",
        help="base URL of a running service (default: run in process)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    explain = sub.add_parser("explain", help="explain a decision on an instance")
    explain.add_argument("--model", required=True, help="model document path")
    explain.add_argument("--instance", required=True, help="instance document path")
    explain.add_argument(
        "--kind",
        action="append",
        default=None,
        help="cr|gr|sr|gsr|nr|gnr (repeatable or comma-separated; default cr)",
    )
    explain.add_argument("--target-class", default=None)
    explain.add_argument("--format", choices=("text", "machine"), default="text")
    explain.add_argument("--precision", type=int, default=None)

    compile_p = sub.add_parser("compile", help="compile a model to a document")
    compile_p.add_argument("--model", required=True)
    compile_p.add_argument("--class", dest="class_label", default=None)
    compile_p.add_argument("--method", choices=("dnf", "cnnf", "graph"), default="cnnf")
    compile_p.add_argument("--out", default=None, help="output path (default stdout)")
    compile_p.add_argument("--precision", type=int, default=None)

    verify_p = sub.add_parser("verify", help="run oracle checks against a model")
    verify_p.add_argument("--model", required=True)
    verify_p.add_argument("--seed", type=int, default=0)
    verify_p.add_argument("--budget", type=int, default=None)
    verify_p.add_argument("--samples", type=int, default=4)
    verify_p.add_argument("--format", choices=("text", "machine"), default="text")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_document(path: str, precision=None) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        _fail(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        _fail(f"{path}: invalid JSON ({exc})")
    if precision is not None and isinstance(doc.get("model"), dict):
        doc["model"]["precision"] = precision
    return doc


def _fail(message: str, code: int = EXIT_INPUT):
    print(f"error: {message}", file=sys.stderr)
    raise SystemExit(code)


class _Client:
    """POSTs either to a remote server or to the in-process app."""

    def __init__(self, server: str | None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=300.0)
        else:
            import warnings

            with warnings.catch_warnings():
                # the vendored starlette test client import warns on 3.10
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

                from .service import app

                self._client = TestClient(app)

    def post(self, path: str, payload: dict):
        response = self._client.post(path, json=payload)
        if response.status_code != 200:
            try:
                detail = response.json().get("detail")
            except ValueError:
                detail = response.text
            if isinstance(detail, dict):
                message = detail.get("message", str(detail))
            else:
                message = str(detail)
            _fail(message, _STATUS_EXIT.get(response.status_code, 1))
        return response.json()


def _parse_kinds(raw) -> list[str]:
    if not raw:
        return ["cr"]
    kinds = []
    for chunk in raw:
        kinds.extend(k.strip() for k in chunk.split(",") if k.strip())
    return kinds


def cmd_explain(args) -> int:
    client = _Client(args.server)
    payload = {
        "model": _load_document(args.model, args.precision),
        "instance": _load_document(args.instance),
        "kinds": _parse_kinds(args.kind),
        "target_class": args.target_class,
    }
    body = client.post("/explain", payload)
    if args.format == "machine":
        print(json.dumps(body["report"], indent=2, sort_keys=True))
    else:
        print(body["text"])
    return EXIT_OK


def cmd_compile(args) -> int:
    client = _Client(args.server)
    payload = {
        "model": _load_document(args.model, args.precision),
        "class": args.class_label,
        "method": args.method,
    }
    body = client.post("/compile", payload)
    text = json.dumps(body["document"], indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    client = _Client(args.server)
    payload = {
        "model": _load_document(args.model),
        "seed": args.seed,
        "budget": args.budget,
        "samples": args.samples,
    }
    body = client.post("/verify", payload)
    if args.format == "machine":
        print(json.dumps(body, indent=2, sort_keys=True))
    else:
        for check in body["checks"]:
            mark = "PASS" if check["passed"] else "FAIL"
            detail = f" ({check['detail']})" if check.get("detail") else ""
            print(f"[{mark}] {check['name']}{detail}")
        print("result:", "pass" if body["passed"] else "fail")
    return EXIT_OK if body["passed"] else 1


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("reasonkit.service:app", host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "explain": cmd_explain,
        "compile": cmd_compile,
        "verify": cmd_verify,
        "serve": cmd_serve,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
