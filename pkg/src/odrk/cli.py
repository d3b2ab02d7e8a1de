"""``odrk`` command line.

Exit status: 0 on success, 1 when the request fails (not found, unreachable,
bad data), 2 on usage errors. Results go to stdout, warnings to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import repo_client, tabular
from .config import CONFIG_ENV, OUTPUT_FORMATS, CliConfig, ConfigError, load_config
from .errors import NotFound, NoSuchFile, OdrkError, Unreachable
from .federation import federated_search, render_aligned, to_result_table, value_counts
from .models import ItemRecord, RepositoryEndpoint, check_handle
from .profile import describe, render_profile
from .translation import GlossaryStub, TranslationCache
from .usability import StudyLog, read_sessions, read_sus, summarize_study

FIELD_ALIASES = {
    "author": "dc.contributor.author",
    "title": "dc.title",
    "subject": "dc.subject",
    "year": "dc.date.issued",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="odrk", description="Find, preview, profile and fetch repository research data.")
    parser.add_argument("--config", help=f"repository config file (default: ${CONFIG_ENV})")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def fmt(p, choices=OUTPUT_FORMATS):
        p.add_argument("--format", choices=choices, default=None)

    p = sub.add_parser("search", help="search every configured repository")
    p.add_argument("query")
    p.add_argument("--translate-to", metavar="LANG")
    p.add_argument("--repos", help="comma-separated repository names")
    fmt(p)

    p = sub.add_parser("datasets", help="list the files of an item")
    p.add_argument("handle")
    p.add_argument("--repos")
    fmt(p)

    p = sub.add_parser("preview", help="show the first or last rows of a tabular file")
    p.add_argument("handle")
    p.add_argument("file")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--head", type=int, metavar="N")
    which.add_argument("--tail", type=int, metavar="N")
    p.add_argument("--repos")
    fmt(p)

    p = sub.add_parser("describe", help="profile the columns of a tabular file")
    p.add_argument("handle")
    p.add_argument("file")
    p.add_argument("--repos")
    fmt(p, ("table", "text", "json"))

    p = sub.add_parser("download", help="download one file or the whole item")
    p.add_argument("handle")
    p.add_argument("file", nargs="?")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--overwrite", action="store_true")
    p.add_argument("--repos")
    fmt(p)

    p = sub.add_parser("convert", help="convert a local table between csv, tsv, json and ndjson")
    p.add_argument("in_path", metavar="in-path")
    p.add_argument("--to", required=True, choices=tabular.FORMATS)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("value-counts", help="tally a metadata field over search results")
    p.add_argument("query")
    p.add_argument("--field", required=True, metavar="KEY")
    p.add_argument("--top", type=int, metavar="K")
    p.add_argument("--repos")
    fmt(p)

    p = sub.add_parser("usability", help="completion rate, TBE, ORE and SUS from study logs")
    p.add_argument("sessions")
    p.add_argument("--sus")
    fmt(p, ("table", "json"))
    return parser


def _warn(messages) -> None:
    for m in messages:
        print(f"warning: {m}", file=sys.stderr)


def _repos(config: CliConfig, args) -> list[RepositoryEndpoint]:
    names = [n.strip() for n in args.repos.split(",") if n.strip()] if getattr(args, "repos", None) else None
    return config.select(names)


def _locate(config: CliConfig, args) -> tuple[RepositoryEndpoint, ItemRecord]:
    """First configured repository holding the handle."""
    check_handle(args.handle)
    endpoints = _repos(config, args)
    failures = []
    for endpoint in endpoints:
        try:
            return endpoint, repo_client.get_item(endpoint, args.handle)
        except NotFound:
            continue
        except Unreachable as exc:
            failures.append(str(exc))
    _warn(failures)
    raise NotFound(f"{args.handle} not found in {', '.join(e.name for e in endpoints) or 'any repository'}")


def _bitstream(item: ItemRecord, name: str):
    found = item.bitstream(name)
    if found is None:
        raise NoSuchFile(f"{item.handle} has no file named {name!r}")
    return found


def _emit(text: str) -> None:
    sys.stdout.write(text)


def cmd_search(args, config):
    cache = TranslationCache(config.cache_root) if args.translate_to else None
    items, warnings = federated_search(
        _repos(config, args), args.query, translate_to=args.translate_to,
        provider=GlossaryStub.bundled() if args.translate_to else None, cache=cache,
    )
    _warn(warnings)
    table = to_result_table(items, prefer_language=args.translate_to)
    _emit({"table": table.to_text, "json": lambda: table.to_json() + "\n", "csv": table.to_csv}[args.format]())


def cmd_datasets(args, config):
    _, item = _locate(config, args)
    rows = [{"name": b.name, "size_bytes": b.size_bytes, "media_type": b.media_type} for b in item.bitstreams]
    if args.format == "json":
        _emit(json.dumps(rows, ensure_ascii=False) + "\n")
    elif args.format == "csv":
        _emit(tabular.write_delimited([["name", "size_bytes", "media_type"]]
                                      + [[r["name"], str(r["size_bytes"]), r["media_type"]] for r in rows]))
    else:
        _emit(render_aligned(["NAME", "SIZE", "TYPE"],
                             [[r["name"], str(r["size_bytes"]), r["media_type"]] for r in rows]))


def cmd_preview(args, config):
    endpoint, item = _locate(config, args)
    bitstream = _bitstream(item, args.file)
    n = args.head if args.head is not None else args.tail
    if n <= 0:
        raise _Usage("--head/--tail must be positive")
    fn = tabular.preview_head if args.head is not None else tabular.preview_tail
    view = fn(endpoint, bitstream, n)
    if view.truncated_source:
        _warn([f"{bitstream.name} has only {len(view.rows)} rows"])
    if args.format == "json":
        _emit(json.dumps({
            "header": view.header, "rows": view.rows, "position": view.position,
            "requested": view.requested, "truncated_source": view.truncated_source,
        }, ensure_ascii=False) + "\n")
    elif args.format == "csv":
        _emit(tabular.write_delimited([view.header, *view.rows]))
    else:
        _emit(render_aligned(view.header, view.rows))


def cmd_describe(args, config):
    endpoint, item = _locate(config, args)
    table = tabular.fetch_table(endpoint, _bitstream(item, args.file))
    out = render_profile(describe(table), "json" if args.format == "json" else "text")
    _emit(out.decode("utf-8") + ("\n" if args.format == "json" else ""))


def cmd_download(args, config):
    endpoint, item = _locate(config, args)
    manifest = repo_client.download(endpoint, item, args.file, args.out, overwrite=args.overwrite)
    if args.format == "json":
        _emit(json.dumps(manifest.to_dict(), ensure_ascii=False) + "\n")
    else:
        _emit(render_aligned(
            ["NAME", "SIZE", manifest.hash_name.upper(), "PATH"],
            [[e.name, str(e.size_bytes), e.checksum, e.path] for e in manifest.entries],
        ))


def cmd_convert(args, config):
    source = Path(args.in_path)
    try:
        data = source.read_bytes()
    except OSError as exc:
        raise _Failure(f"cannot read {source}: {exc}") from exc
    try:
        fmt = tabular.format_for_path(source.name)
    except ValueError as exc:
        raise _Usage(str(exc)) from exc
    out = tabular.convert(tabular.read_table(data, fmt), args.to)
    if args.out:
        try:
            Path(args.out).write_bytes(out)
        except OSError as exc:
            raise _Failure(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.buffer.write(out) if hasattr(sys.stdout, "buffer") else _emit(out.decode("utf-8"))
        sys.stdout.flush()


def cmd_value_counts(args, config):
    if args.top is not None and args.top <= 0:
        raise _Usage("--top must be positive")
    items, warnings = federated_search(_repos(config, args), args.query)
    _warn(warnings)
    table = value_counts(items, FIELD_ALIASES.get(args.field, args.field), args.top)
    _emit({"table": table.to_text, "json": lambda: table.to_json() + "\n", "csv": table.to_csv}[args.format]())


def cmd_usability(args, config):
    try:
        outcomes = read_sessions(Path(args.sessions).read_text(encoding="utf-8"))
        sus = read_sus(Path(args.sus).read_text(encoding="utf-8")) if args.sus else []
    except OSError as exc:
        raise _Failure(str(exc)) from exc
    try:
        log = StudyLog(outcomes, sus)
    except ValueError as exc:
        raise _Failure(str(exc)) from exc
    report = summarize_study(log)
    _emit(report.to_json() + "\n" if args.format == "json" else report.to_text())


COMMANDS = {
    "search": cmd_search,
    "datasets": cmd_datasets,
    "preview": cmd_preview,
    "describe": cmd_describe,
    "download": cmd_download,
    "convert": cmd_convert,
    "value-counts": cmd_value_counts,
    "usability": cmd_usability,
}


class _Usage(Exception):
    pass


class _Failure(Exception):
    pass


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        print(f"odrk: {exc}", file=sys.stderr)
        return 2
    if getattr(args, "format", None) is None and args.command != "convert":
        args.format = config.default_format
        if args.command == "usability" and args.format == "csv":
            args.format = "table"
    try:
        COMMANDS[args.command](args, config)
    except (_Usage, ConfigError) as exc:
        parser.print_usage(sys.stderr)
        print(f"odrk: {exc}", file=sys.stderr)
        return 2
    except (OdrkError, _Failure) as exc:
        print(f"odrk: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
