"""Command-line front end: expand, query, explain, validate, stats, serve."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import (
    ConfigurationError,
    DataError,
    ExplainError,
    ExplanationUnavailable,
    NotFound,
)
from .prov import parse_provn, write_provn
from .query import evaluate, parse_query
from .service import (
    AssistantServer,
    DecisionStore,
    ExplanationAssistant,
    explain,
    explanation_body,
    expand_for,
    load_bundle,
    parse_bindings_for,
    parse_listen,
)
from .stats import cmd_stats
from .template import expand_decision, load_template, parse_bindings_csv
from .validate import cmd_validate

EXIT_OK = 0
EXIT_DATA = 1
EXIT_CONFIG = 2
EXIT_USAGE = 64

log = logging.getLogger("explainprov")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def shipped_bundles() -> dict[str, Path]:
    root = Path(str(resources.files("explainprov") / "bundles"))
    return {p.name: p for p in sorted(root.iterdir()) if (p / "manifest.json").is_file()}


def resolve_bundle(arg: str) -> Path:
    """A bundle directory, or the name of a bundle shipped with the package."""
    path = Path(arg)
    if path.is_dir():
        return path
    shipped = shipped_bundles()
    if arg in shipped:
        return shipped[arg]
    raise UsageError(f"no bundle directory {arg!r} (shipped bundles: {', '.join(shipped)})")


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _template_files(paths: Sequence[str]) -> list[Path]:
    out = []
    for p in map(Path, paths):
        out += sorted(p.glob("*.provn")) if p.is_dir() else [p]
    return out


# subcommands


def cmd_expand(args) -> int:
    if args.bundle:
        bundle = load_bundle(resolve_bundle(args.bundle))
        table = parse_bindings_for(bundle, read_text(args.bindings))
        doc = expand_for(bundle, table)
    else:
        if not args.template:
            raise UsageError("give --bundle or at least one --template")
        templates = {}
        for path in _template_files(args.template):
            templates[path.stem] = load_template(parse_provn(read_text(str(path))), path.stem)
        namespaces = {}
        for t in templates.values():
            namespaces.update(t.namespaces)
        table = parse_bindings_csv(read_text(args.bindings), namespaces)
        doc = expand_decision(templates, table)
    sys.stdout.write(write_provn(doc))
    return EXIT_OK


def cmd_query(args) -> int:
    ast = parse_query(read_text(args.query))
    doc = parse_provn(read_text(args.document))
    result = evaluate(ast, doc)
    print(json.dumps(result.to_json(), indent=None if args.compact else 2))
    return EXIT_OK


def cmd_explain(args) -> int:
    bundle = load_bundle(resolve_bundle(args.bundle))
    spec = bundle.explanation(args.explanation)
    if spec is None:
        raise NotFound(
            f"unknown explanation {args.explanation!r} "
            f"(available: {', '.join(s.id for s in bundle.manifest)})"
        )
    doc = expand_for(bundle, parse_bindings_for(bundle, read_text(args.bindings)))
    if args.format == "json":
        sentences = explain(bundle, doc, spec, args.profile, args.render)
        sys.stdout.buffer.write(explanation_body(sentences) + b"\n")
    else:
        for sentence in explain(bundle, doc, spec, args.profile, args.format):
            print(sentence)
    return EXIT_OK


def cmd_validate_(args) -> int:
    report = cmd_validate(resolve_bundle(args.bundle), args.bindings)
    if args.format == "json":
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.render())
    return EXIT_OK if report.ok else EXIT_CONFIG


def cmd_stats_(args) -> int:
    report = cmd_stats(resolve_bundle(args.bundle))
    print(json.dumps(report.to_json(), indent=2) if args.format == "json" else report.table())
    return EXIT_OK


def cmd_serve(args) -> int:
    raw = args.bundle or [p for p in os.environ.get("EA_BUNDLE_DIR", "").split(os.pathsep) if p]
    paths = [resolve_bundle(b) for b in raw] if raw else list(shipped_bundles().values())
    try:
        address = parse_listen(args.listen or os.environ.get("EA_LISTEN", "127.0.0.1:8080"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    store = DecisionStore(args.store or os.environ.get("EA_STORE_DIR", "ea-store"))
    assistant = ExplanationAssistant([load_bundle(p) for p in paths], store)
    server = AssistantServer(address, assistant)
    log.info("serving %s on %s (store %s)", ", ".join(sorted(assistant.bundles)), server.url, store.root)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="explainprov", description="Provenance-driven explanations for automated decisions.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("expand", help="expand templates with bindings and print PROV-N")
    p.add_argument("bindings", help="bindings CSV (template,instance,variable,value); '-' for stdin")
    p.add_argument("--bundle", help="take templates from this bundle (directory or shipped name)")
    p.add_argument("--template", action="append", default=[], help="template file or directory (repeatable)")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("query", help="evaluate a provenance query and print the result table as JSON")
    p.add_argument("query", help="query file")
    p.add_argument("document", help="PROV-N document; '-' for stdin")
    p.add_argument("--compact", action="store_true", help="single-line JSON")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("explain", help="print the sentences of one explanation")
    p.add_argument("bundle", help="bundle directory or shipped bundle name")
    p.add_argument("bindings", help="bindings CSV; '-' for stdin")
    p.add_argument("explanation", help="explanation id from the bundle manifest")
    p.add_argument("--profile", required=True, help="audience profile")
    p.add_argument("--format", choices=("text", "html", "json"), default="text",
                   help="json prints the service's response body")
    p.add_argument("--render", choices=("text", "html"), default="text",
                   help="sentence format inside --format json")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("validate", help="check a bundle and report findings")
    p.add_argument("bundle", help="bundle directory or shipped bundle name")
    p.add_argument("--bindings", help="sample bindings CSV (default: the bundle's samples/*.csv)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_validate_)

    p = sub.add_parser("stats", help="print artifact size metrics")
    p.add_argument("bundle", help="bundle directory or shipped bundle name")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_stats_)

    p = sub.add_parser("serve", help="run the Explanation Assistant HTTP service")
    p.add_argument("--bundle", action="append", help="bundle to serve (repeatable; env EA_BUNDLE_DIR)")
    p.add_argument("--listen", help="HOST:PORT (env EA_LISTEN, default 127.0.0.1:8080)")
    p.add_argument("--store", help="decision store directory (env EA_STORE_DIR, default ./ea-store)")
    p.set_defaults(func=cmd_serve)
    return parser


def exit_code(exc: BaseException) -> int:
    if isinstance(exc, (UsageError, NotFound)):
        return EXIT_USAGE
    if isinstance(exc, (DataError, ExplanationUnavailable)):
        return EXIT_DATA
    return EXIT_CONFIG


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose or args.command == "serve" else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ExplainError) as exc:
        kind = "usage error" if isinstance(exc, UsageError) else type(exc).__name__
        print(f"explainprov: {kind}: {exc}", file=sys.stderr)
        return exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
