"""Command-line front end: ``pkn check|query|ask|export|repl``."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from .argumentation import Stance, ask, explain
from .config import EngineConfig
from .errors import PKNError
from .graph import KnowledgeGraph
from .model import QUANTIFIERS
from .parser import parse_condition, parse_query, parse_with_recovery
from .query import QueryEngine
from .rdf import to_turtle
from .reasoner import ProofParams

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_IO = 2
EXIT_OPPOSED = 3
EXIT_UNDECIDED = 4

STANCE_EXIT = {Stance.SUPPORTED: EXIT_OK, Stance.OPPOSED: EXIT_OPPOSED,
               Stance.UNDECIDED: EXIT_UNDECIDED}


class LoadFailed(Exception):
    def __init__(self, code: int):
        super().__init__(code)
        self.code = code


def _read(path: str, err) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        print(f"{path}: {exc.strerror or exc}", file=err)
        raise LoadFailed(EXIT_IO) from exc


def load_graph(paths, err=sys.stderr) -> KnowledgeGraph:
    """Parse every file into one graph; any IO or parse error raises LoadFailed."""
    statements, failed = [], False
    for path in paths:
        result = parse_with_recovery(_read(path, err))
        for e in result.errors:
            print(f"{path}:{e}", file=err)
        failed = failed or bool(result.errors)
        statements.extend(result.statements)
    if failed:
        raise LoadFailed(EXIT_PARSE)
    try:
        return KnowledgeGraph(statements)
    except PKNError as exc:
        print(f"error: {exc}", file=err)
        raise LoadFailed(EXIT_PARSE) from exc


def config_from_args(args, env=None) -> EngineConfig:
    env = os.environ if env is None else env
    path = args.config or env.get("PKN_CONFIG")
    overrides = {"max_depth": args.depth, "min_certainty": args.min_certainty,
                 "alpha": args.alpha, "few": args.few, "many": args.many, "most": args.most}
    return EngineConfig.load(path, env, overrides)


# -------------------------------------------------------------- commands


def cmd_check(args, out, err) -> int:
    statements = errors = 0
    io_failed = False
    for path in args.files:
        try:
            text = _read(path, err)
        except LoadFailed:
            io_failed = True
            continue
        result = parse_with_recovery(text)
        for e in result.errors:
            print(f"{path}:{e}", file=out)
        statements += len(result.items)
        errors += len(result.errors)
    print(f"{statements} statements, {errors} errors", file=out)
    if io_failed:
        return EXIT_IO
    return EXIT_PARSE if errors else EXIT_OK


def cmd_query(args, out, err) -> int:
    config = config_from_args(args)
    graph = load_graph(args.files, err)
    try:
        query = parse_query(args.query)
        result = QueryEngine(graph, config).run(query)
    except (PKNError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    out.write(result.render())
    return EXIT_OK


def cmd_ask(args, out, err) -> int:
    config = config_from_args(args)
    graph = load_graph(args.files, err)
    try:
        supposition = parse_condition(args.supposition)
    except PKNError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    verdict = ask(graph, supposition, ProofParams.from_config(config), config.undecided_band)
    print(verdict.summary(), file=out)
    if args.explain:
        out.write(explain(verdict, graph))
    return STANCE_EXIT[verdict.polarity]


def cmd_export(args, out, err) -> int:
    graph = load_graph(args.files, err)
    out.write(to_turtle(graph))
    return EXIT_OK


def cmd_repl(args, out, err, stdin=None) -> int:
    config = config_from_args(args)
    graph = load_graph(args.files, err)
    stdin = stdin or sys.stdin
    return Repl(graph, config).run(stdin, out, prompt=stdin.isatty())


# ------------------------------------------------------------------ repl


@dataclass
class Repl:
    """Line-oriented session over a stack of graph snapshots."""

    graph: KnowledgeGraph
    config: EngineConfig = field(default_factory=EngineConfig)
    explain: bool = False
    history: list = field(default_factory=list)

    def run(self, stream, out, prompt: bool = False) -> int:
        while True:
            if prompt:
                out.write("pkn> ")
                out.flush()
            line = stream.readline()
            if not line:
                return EXIT_OK
            reply = self.handle(line.rstrip("\n"))
            if reply is None:
                return EXIT_OK
            out.write(reply)

    def handle(self, line: str) -> str | None:
        """Reply text for one input line; None means the session should end."""
        text = line.strip()
        if not text or text.startswith("#"):
            return ""
        word, _, rest = text.partition(" ")
        try:
            if word in ("quit", "exit") and not rest:
                return None
            if word == "undo" and not rest:
                return self.undo()
            if word == "explain" and rest in ("on", "off"):
                self.explain = rest == "on"
                return f"explain {rest}\n"
            if word == "ask" and rest:
                return self.ask(rest)
            if word in QUANTIFIERS and rest.startswith("?"):
                result = QueryEngine(self.graph, self.config).run(parse_query(text))
                return result.render()
            return self.assert_(text)
        except (PKNError, ValueError) as exc:
            return f"error: {exc}\n"

    def assert_(self, text: str) -> str:
        result = parse_with_recovery(text, allow_queries=False)
        if result.errors:
            raise result.errors[0]
        graph = self.graph
        ids = []
        for statement in result.statements:
            graph, sid = graph.add(statement)
            ids.append(sid)
        self.history.append(self.graph)
        self.graph = graph
        return "".join(f"asserted #{sid}\n" for sid in ids)

    def undo(self) -> str:
        if not self.history:
            return "nothing to undo\n"
        self.graph = self.history.pop()
        return f"undone, {len(self.graph)} statements\n"

    def ask(self, text: str) -> str:
        supposition = parse_condition(text)
        verdict = ask(self.graph, supposition, ProofParams.from_config(self.config),
                      self.config.undecided_band)
        reply = verdict.summary() + "\n"
        if self.explain:
            reply += explain(verdict, self.graph)
        return reply


# ---------------------------------------------------------------- parser


def _engine_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="key=value configuration file")
    p.add_argument("--depth", type=int, help="maximum proof depth")
    p.add_argument("--min-certainty", type=float, help="drop arguments below this anchor")
    p.add_argument("--alpha", type=float, help="fuzzy acceptance threshold")
    p.add_argument("--few", type=float, help="upper ratio for 'few'")
    p.add_argument("--many", type=float, help="lower ratio for 'many'")
    p.add_argument("--most", type=float, help="lower ratio for 'most'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pkn", description="Plausible Knowledge Notation tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse files and report errors")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("query", help="run a which/count/few/many/most query")
    p.add_argument("query")
    p.add_argument("files", nargs="+")
    _engine_flags(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("ask", help="weigh arguments for and against a supposition")
    p.add_argument("supposition")
    p.add_argument("files", nargs="+")
    p.add_argument("--explain", action="store_true", help="print the argument trees")
    _engine_flags(p)
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("export", help="write the graph as Turtle")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("repl", help="interactive session")
    p.add_argument("files", nargs="*")
    _engine_flags(p)
    p.set_defaults(func=cmd_repl)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args, out, err)
    except LoadFailed as exc:
        return exc.code
    except (OSError, ValueError) as exc:
        # bad config file or values
        print(f"error: {exc}", file=err)
        return EXIT_IO if isinstance(exc, OSError) else EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
