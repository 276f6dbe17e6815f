"""Command-line entry points: suggest | interpret | render | ctest | serve.

interpret exit codes: 0 success, 2 mismatch, 3 synthesis failed with no
expression, 4 transport failure; 1 for anything else.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import jsonio
from .agents import (
    FailNoExpression, Mismatch, Success, suggest as run_suggest, synthesize,
)
from .counterfactual import Suite, format_report, run_suite
from .docmodel import RenderError
from .errors import (
    DocumentError, GatewayError, ProjectError, TracedocError, WorkflowError,
)
from .gateway import gateway_from_env
from .lang.pretty import pretty
from .page import render_page
from .project import build_wire, load_project, save_project
from .service import ServiceApp, serve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2
EXIT_NO_EXPRESSION = 3
EXIT_TRANSPORT = 4


def _cmd_suggest(args) -> int:
    project = load_project(args.project)
    if not project.paragraph:
        print("error: empty paragraph", file=sys.stderr)
        return EXIT_ERROR
    gateway = gateway_from_env()
    try:
        result = run_suggest(project.paragraph, project.datasets, gateway)
    except GatewayError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_TRANSPORT
    project.replace_suggestions(result.fragments)
    save_project(project)
    print(result.annotated_paragraph)
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"({len(result.fragments)} fragment(s) registered)", file=sys.stderr)
    return EXIT_OK


def _resolve_pending(project, args) -> int:
    session = project.session
    if args.approve:
        session.approve()
        save_project(project)
        print("approved; document head advanced")
        return EXIT_OK
    if args.abort:
        session.reject()
        save_project(project)
        print("rejected; document unchanged")
        return EXIT_OK
    if args.revise_goal:
        old, new = session.revise_goal()
        project.shift_registry(old, len(new.text))
        save_project(project)
        print(f'goal revised: "{old.text}" -> "{new.text}"; awaiting validation')
        return EXIT_OK
    return -1


def _cmd_interpret(args) -> int:
    project = load_project(args.project)
    pending = _resolve_pending(project, args)
    if pending != -1:
        return pending

    if args.fragment_id is None:
        print("error: a fragment id is required (or --approve/--abort/--revise-goal)",
              file=sys.stderr)
        return EXIT_ERROR
    entry = project.find_fragment(args.fragment_id)
    if entry is None:
        print(f"error: unknown fragment {args.fragment_id}", file=sys.stderr)
        return EXIT_ERROR

    gateway = gateway_from_env()
    task = project.session.select_fragment(
        entry.fragment, entry.id, share_target=not args.no_target,
        paragraph_value=project.paragraph_value)
    try:
        outcome = synthesize(task, gateway, max_retries=args.max_retries)
    except GatewayError as err:
        project.session.on_outcome(FailNoExpression(f"transport: {err}", 0))
        save_project(project)
        print(f"error: {err}", file=sys.stderr)
        return EXIT_TRANSPORT
    project.session.on_outcome(outcome)
    save_project(project)

    if isinstance(outcome, Success):
        print(pretty(outcome.expr))
        print(f"(validated in {outcome.attempts} attempt(s); "
              "approve with: interpret --approve)", file=sys.stderr)
        return EXIT_OK
    if isinstance(outcome, Mismatch):
        print(f'target    s : "{entry.fragment.text}"')
        print(f'evaluated s\': "{outcome.s_prime}"')
        print(f"expression  : {pretty(outcome.expr)}")
        print("(resolve with: interpret --revise-goal | interpret --abort)",
              file=sys.stderr)
        return EXIT_MISMATCH
    print(f"synthesis failed after {outcome.attempts} attempt(s): {outcome.last_error}",
          file=sys.stderr)
    return EXIT_NO_EXPRESSION


def _cmd_render(args) -> int:
    project = load_project(args.project)
    try:
        wire = build_wire(project)
    except RenderError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    if args.format == "wire":
        print(jsonio.dumps(wire))
    else:
        print(render_page(wire, title=Path(args.project).stem))
    return EXIT_OK


def _cmd_ctest(args) -> int:
    project = load_project(args.project)
    try:
        suite = Suite.from_json(jsonio.load_file(args.suite))
        report = run_suite(suite, project.datasets,
                           project.import_sources, project.code)
    except (ProjectError, TracedocError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    print(format_report(report))
    out_path = Path(args.report) if args.report else Path(args.suite).with_suffix(".report.json")
    jsonio.dump_file(out_path, report.to_json())
    print(f"\nreport written to {out_path}", file=sys.stderr)
    return EXIT_ERROR if report.totals["counterfactual_errors"] else EXIT_OK


def _cmd_serve(args) -> int:
    project = load_project(args.project)
    host, _, port = args.bind.partition(":")
    app = ServiceApp(project, gateway_from_env(), max_retries=args.max_retries)
    serve(app, host or "127.0.0.1", int(port or 0))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tracedoc",
        description="Author transparent, data-driven documents.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("suggest", help="annotate computable fragments")
    p.add_argument("project")
    p.set_defaults(fn=_cmd_suggest)

    p = sub.add_parser("interpret", help="synthesize an expression for a fragment")
    p.add_argument("project")
    p.add_argument("fragment_id", nargs="?", type=int, default=None)
    p.add_argument("--no-target", action="store_true",
                   help="withhold the target value from the prompt")
    p.add_argument("--max-retries", type=int, default=5)
    p.add_argument("--approve", action="store_true",
                   help="approve the pending validation")
    p.add_argument("--abort", action="store_true",
                   help="reject the pending validation or mismatch")
    p.add_argument("--revise-goal", action="store_true",
                   help="accept s' as the new goal for a mismatch")
    p.set_defaults(fn=_cmd_interpret)

    p = sub.add_parser("render", help="render the current document")
    p.add_argument("project")
    p.add_argument("--format", choices=("wire", "page"), default="wire")
    p.set_defaults(fn=_cmd_render)

    p = sub.add_parser("ctest", help="run a counterfactual suite")
    p.add_argument("suite")
    p.add_argument("project")
    p.add_argument("--report", default=None, help="machine-readable report path")
    p.set_defaults(fn=_cmd_ctest)

    p = sub.add_parser("serve", help="serve the project over HTTP")
    p.add_argument("project")
    p.add_argument("--bind", default="127.0.0.1:8787")
    p.add_argument("--max-retries", type=int, default=5)
    p.set_defaults(fn=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ProjectError, DocumentError, WorkflowError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
