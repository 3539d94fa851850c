#!/usr/bin/env python3
"""Batch runner: ``python -m src.run_service <verb> <inputs...> [flags]``.

Builds a :class:`src.main.CommandRequest` from the command line, runs it and
prints the canonical JSON document on stdout. When ``--output`` (or the
``OUTPUT_JSON_FILE`` environment variable) names a file the document is
written there too. Errors are printed as ``{"error": {...}}`` on stderr and
mapped to the exit codes of :mod:`src.utils.errors`.
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from src.main import VERBS, CommandRequest, run
from src.utils.errors import EXIT_REJECTED, CohomologyError

logger = logging.getLogger(__name__)


def _format_result(doc: Dict[str, Any]) -> str:
    """Canonical rendering: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _write_output_file(out_file: str, readable: str) -> bool:
    """Write ``readable`` to ``out_file``; False on filesystem errors."""
    try:
        with open(out_file, "w", encoding="utf-8") as fh:
            fh.write(readable)
        return True
    except OSError as exc:
        logger.error("failed to write result to %s: %s", out_file, exc)
        return False


def _error_document(code: str, message: str, detail: Optional[Dict[str, Any]] = None) -> str:
    return _format_result({"error": {"code": code, "message": message, "detail": detail or {}}})


def _places(value: str) -> List[str]:
    return [name.strip() for name in value.split(",") if name.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.run_service",
        description="Exact finite Galois cohomology: enumerations, liens and global solvers.",
    )
    parser.add_argument("verb", choices=sorted(VERBS))
    parser.add_argument("inputs", nargs="+", help="input JSON documents")
    parser.add_argument("--q", type=int, help="residue field size class (local verbs)")
    parser.add_argument("--degree", type=int, choices=(1, 2), help="degree for global-sha")
    parser.add_argument("--places", type=_places, help="comma-separated place names (weak approximation)")
    parser.add_argument("--budget", type=int, help="search budget override")
    parser.add_argument("--threads", type=int, help="worker threads for inner enumerations")
    parser.add_argument("--output", help="also write the JSON document to this file")
    return parser


def request_from_args(args: argparse.Namespace) -> CommandRequest:
    options = {
        name: getattr(args, name)
        for name in ("q", "degree", "places", "budget", "threads")
        if getattr(args, name) is not None
    }
    return CommandRequest(args.verb, tuple(args.inputs), options)


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return the process exit code."""
    load_dotenv()
    logging.basicConfig(
        level=os.getenv("LOG_LEVEL", "WARNING").upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        doc, code = run(request_from_args(args))
    except CohomologyError as exc:
        sys.stderr.write(_format_result(exc.to_dict()))
        return exc.exit_code
    except RuntimeError as exc:
        # raised by the settings loader for malformed environment values
        sys.stderr.write(_error_document("InvalidConfiguration", str(exc)))
        return EXIT_REJECTED

    readable = _format_result(doc)
    sys.stdout.write(readable)
    out_file = args.output or os.getenv("OUTPUT_JSON_FILE", "")
    if out_file and not _write_output_file(out_file, readable):
        sys.stderr.write(_error_document("OutputNotWritten", f"cannot write {out_file}"))
        return EXIT_REJECTED
    return code


if __name__ == "__main__":
    sys.exit(main())
