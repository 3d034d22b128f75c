"""Command-line entry point: ``hansard-scale <subcommand> [flags]``.

Subcommands read and write the package's TSV formats, so they chain::

    ingest -> link -> query -> dtm -> wordfish | wordscore -> validate

Every run writes its outputs plus one ``manifest.json`` into ``--output``.
Exit codes: 0 success, 1 usage error, 2 data error (the message names the
offending file or record).
"""

from __future__ import annotations

import argparse
import datetime as dt
import hashlib
import json
import sys
import tempfile
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import __version__
from . import fixtures as fx
from .analysis import PairedSeries, correlate_with_series, ols, read_series, subset_filter
from .corpus_store import TSV_COLUMNS, CorpusQuery, CorpusStore, export_tsv, read_contributions_tsv, \
    read_members_tsv, unescape_field
from .dtm import CountMatrix, PreprocessConfig, build_matrix, default_stopwords, drop_interjections, \
    load_stopwords, read_matrix, read_triplets, top_terms
from .errors import DataError, HansardError
from .ingest import ingest_directory, read_manifest
from .linkage import LinkConfig, link_corpus, read_overrides, read_roles
from .scaling import wordfish_fit, wordscore_fit

PROG = "hansard-scale"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# -- inputs and manifests -------------------------------------------------


def _require(path: str | Path | None, what: str, estimation: bool = True) -> Path:
    if path is None:
        raise UsageError(f"missing required input: {what}")
    p = Path(path)
    if not p.exists():
        raise DataError(f"{what} not found: {p}")
    if estimation and "truth" in p.resolve().parts:
        raise DataError(f"refusing to read {p}: files under a truth/ directory are never estimation inputs")
    return p


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _digests(paths: Sequence[Path]) -> dict[str, str]:
    out = {}
    for p in paths:
        if p.is_dir():
            for f in sorted(q for q in p.rglob("*") if q.is_file()):
                out[f.as_posix()] = _sha256(f)
        else:
            out[p.as_posix()] = _sha256(p)
    return out


_NOT_CONFIG = {"func", "output", "config", "command"}


def _snapshot(args: argparse.Namespace) -> dict:
    snap = {}
    for k, v in sorted(vars(args).items()):
        if k in _NOT_CONFIG:
            continue
        snap[k] = str(v) if isinstance(v, Path) else v
    return snap


def write_manifest(out: Path, args: argparse.Namespace, inputs: Sequence[Path], started: str) -> Path:
    """Everything except ``timestamps`` is a pure function of inputs, config and seed."""
    outputs = {p.name: _sha256(p) for p in sorted(out.iterdir()) if p.is_file() and p.name != "manifest.json"}
    manifest = {
        "subcommand": args.command,
        "version": __version__,
        "seed": args.seed,
        "config": _snapshot(args),
        "inputs": _digests(inputs),
        "outputs": outputs,
        "timestamps": {"started": started, "finished": _now()},
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def _now() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# -- documents for dtm/freq -----------------------------------------------

GROUPS = ("contribution", "member", "speaker", "label")


def load_documents(path: Path, group_by: str) -> list[tuple[str, str]]:
    """Labelled documents from a contributions TSV or a ``label<TAB>text`` TSV.

    Rows sharing a group key are concatenated in file order. Grouping by
    member skips unlinked contributions.
    """
    with open(path, encoding="utf-8") as fh:
        header = tuple(fh.readline().rstrip("\n").split("\t"))
    groups: dict[str, list[str]] = {}
    if header == TSV_COLUMNS:
        if group_by == "label":
            group_by = "contribution"
        for c in read_contributions_tsv(path):
            if c.procedural:
                continue
            key = {"contribution": str(c.contribution_id), "member": c.member_id,
                   "speaker": c.speaker_raw}[group_by]
            if key:
                groups.setdefault(key, []).append(c.text)
    elif header[:2] == ("label", "text"):
        if group_by not in ("label", "contribution"):
            raise DataError(f"{path}: a label/text file can only be grouped by label")
        lines = path.read_text(encoding="utf-8").split("\n")[1:]
        for lineno, line in enumerate(lines, start=2):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected label and text")
            groups.setdefault(unescape_field(parts[0]), []).append(unescape_field(parts[1]))
    else:
        raise DataError(f"{path}: not a contributions TSV or a label/text TSV")
    if not groups:
        raise DataError(f"{path}: no documents to group by {group_by}")
    return [(k, "\n".join(v)) for k, v in groups.items()]


def _preprocess(args) -> PreprocessConfig:
    if args.stopwords in (None, "default"):
        stop = default_stopwords()
    elif args.stopwords == "none":
        stop = frozenset()
    else:
        stop = load_stopwords(_require(args.stopwords, "stopword list"))
    return PreprocessConfig(
        lowercase=not args.keep_case, strip_numbers=not args.keep_numbers, strip_punct=True,
        stopword_list=stop, min_doc_frequency=args.min_doc_freq,
    )


def _read_any_matrix(path: Path) -> CountMatrix:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
    return read_triplets(path) if header == ["doc", "term", "count"] else read_matrix(path)


# -- subcommands ----------------------------------------------------------


def cmd_ingest(args, out: Path) -> list[Path]:
    root = _require(args.input, "--input transcript directory")
    manifest = read_manifest(_require(args.manifest, "--manifest")) if args.manifest else None
    contributions, report = ingest_directory(root, manifest, threads=args.threads)
    with CorpusStore() as store:
        store.insert_many(contributions)
        export_tsv(store, out / "contributions.tsv")
    _write(out / "parse_report.json", report.to_json())
    return [root] + ([Path(args.manifest)] if args.manifest else [])


def cmd_link(args, out: Path) -> list[Path]:
    src = _require(args.input, "--input contributions TSV")
    members_path = _require(args.members, "--members register")
    register = read_members_tsv(members_path)
    roles = read_roles(_require(args.roles, "--roles")) if args.roles else []
    overrides = read_overrides(_require(args.overrides, "--overrides")) if args.overrides else {}
    cfg = LinkConfig(min_common_len=args.min_common_len, threshold=args.threshold,
                     date_window=not args.no_date_window)
    with CorpusStore() as store:
        store.insert_many(read_contributions_tsv(src))
        report = link_corpus(store, register, cfg, overrides, roles)
        export_tsv(store, out / "contributions.tsv")
    _write(out / "link_report.tsv", report.to_tsv())
    _write(out / "review.tsv", report.review_tsv())
    summary = dict(report.counts, total=len(report.rows), linked=report.linked)
    _write(out / "link_summary.json", _json(summary))
    return [p for p in (src, members_path, args.roles and Path(args.roles),
                        args.overrides and Path(args.overrides)) if p]


def _query_from_args(args) -> CorpusQuery:
    kw = dict(
        member_ids=frozenset(args.member.split(",")) if args.member else None,
        parties=frozenset(args.party.split(",")) if args.party else None,
        title_contains=args.title, speaker_contains=args.speaker,
    )
    try:
        if args.year is not None:
            return CorpusQuery.year(args.year, **kw)
        return CorpusQuery(
            date_from=dt.date.fromisoformat(args.date_from) if args.date_from else None,
            date_to=dt.date.fromisoformat(args.date_to) if args.date_to else None, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_query(args, out: Path) -> list[Path]:
    src = _require(args.input, "--input contributions TSV")
    inputs = [src]
    q = _query_from_args(args)
    with CorpusStore() as store:
        if args.members:
            inputs.append(_require(args.members, "--members register"))
            store.upsert_members(read_members_tsv(args.members))
        store.insert_many(read_contributions_tsv(src))
        n = export_tsv(store, out / "contributions.tsv", q)
        lines = ["member_id\tcontributions\twords"]
        for s in store.summarize_by_member(q):
            lines.append(f"{s.member_id or ''}\t{s.contribution_count}\t{s.total_word_count}")
    _write(out / "member_summary.tsv", "\n".join(lines) + "\n")
    print(f"{n} contributions selected", file=sys.stderr)
    return inputs


def cmd_dtm(args, out: Path) -> list[Path]:
    src = _require(args.input, "--input corpus file")
    docs = load_documents(src, args.group_by)
    cfg = _preprocess(args)
    if args.min_tokens:
        docs = drop_interjections(docs, args.min_tokens, cfg)
    m = build_matrix(docs, cfg)
    m.write(out / ("dtm_triplets.tsv" if args.sparse else "dtm.tsv"), sparse=args.sparse)
    stats = {"documents": len(m.docs), "terms": len(m.terms), "tokens": int(m.counts.sum())}
    _write(out / "dtm_stats.json", _json(stats))
    return [src] + ([Path(args.stopwords)] if args.stopwords not in (None, "default", "none") else [])


def cmd_freq(args, out: Path) -> list[Path]:
    src = _require(args.input, "--input corpus file")
    m = build_matrix(load_documents(src, args.group_by), _preprocess(args))
    lines = ["group\trank\tterm\tcount"]
    for group, rows in [("ALL", top_terms(m, n=args.top))] + [(d, top_terms(m, [d], n=args.top)) for d in m.docs]:
        lines += [f"{group}\t{k}\t{t}\t{c}" for k, (t, c) in enumerate(rows, start=1)]
    _write(out / "freq.tsv", "\n".join(lines) + "\n")
    return [src]


def _pair(text: str, flag: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise UsageError(f"{flag} expects two comma-separated labels, got {text!r}")
    return parts[0], parts[1]


def cmd_wordfish(args, out: Path) -> list[Path]:
    src = _require(args.dtm or args.input, "--dtm matrix")
    if not args.anchors:
        raise UsageError("wordfish needs --anchors LEFT,RIGHT")
    left, right = _pair(args.anchors, "--anchors")
    m = _read_any_matrix(src)
    for label in (left, right):
        if label not in m.docs:
            raise DataError(f"{src}: anchor document {label!r} is not a row of the matrix")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fit = wordfish_fit(m, (left, right), tol=args.tol, max_iter=args.max_iter, seed=args.seed)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _write(out / "documents.tsv", fit.documents_tsv())
    _write(out / "terms.tsv", fit.terms_tsv())
    _write(out / "fit.json", _json({
        "log_likelihood": fit.log_likelihood, "iterations": fit.iterations, "converged": fit.converged,
        "orientation": list(fit.orientation), "alpha_anchor": fit.docs[fit.anchor],
        "documents": len(fit.docs), "terms": len(fit.terms),
    }))
    return [src]


def _parse_refs(text: Optional[str]) -> dict[str, float]:
    if not text:
        raise UsageError("wordscore needs --refs LABEL=SCORE,LABEL=SCORE")
    refs = {}
    for item in text.split(","):
        label, sep, score = item.rpartition("=")
        try:
            if not sep or not label:
                raise ValueError
            refs[label.strip()] = float(score)
        except ValueError:
            raise UsageError(f"bad --refs item {item!r}; expected LABEL=SCORE") from None
    return refs


def cmd_wordscore(args, out: Path) -> list[Path]:
    src = _require(args.dtm or args.input, "--dtm matrix")
    refs = _parse_refs(args.refs)
    m = _read_any_matrix(src)
    missing = [r for r in refs if r not in m.docs]
    if missing:
        raise DataError(f"{src}: reference documents not in matrix: {missing}")
    if args.virgins == "all":
        virgins = list(m.docs)
    elif args.virgins == "others":
        virgins = [d for d in m.docs if d not in refs]
    else:
        virgins = [v.strip() for v in args.virgins.split(",")]
        unknown = [v for v in virgins if v not in m.docs]
        if unknown:
            raise DataError(f"{src}: virgin documents not in matrix: {unknown}")
    fit = wordscore_fit(m.subset(refs), refs, m.subset(virgins), args.transform)
    _write(out / "word_scores.tsv", fit.word_scores_tsv())
    _write(out / "doc_scores.tsv", fit.doc_scores_tsv())
    return [src]


def _read_positions(path: Path, column: Optional[str]) -> dict[str, float]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise DataError(f"{path}: empty positions file")
    header = lines[0].split("\t")
    col = header.index(column) if column in header else 1
    if column and column not in header:
        raise DataError(f"{path}: no column {column!r} (have {header})")
    out = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        try:
            out[parts[0]] = float(parts[col])
        except (IndexError, ValueError):
            raise DataError(f"{path}:{lineno}: bad row {line!r}") from None
    return out


def cmd_validate(args, out: Path) -> list[Path]:
    pos_path = _require(args.positions or args.input, "--positions TSV", estimation=False)
    series_path = _require(args.series, "--series TSV", estimation=False)
    positions = _read_positions(pos_path, args.column)
    series = read_series(series_path)
    fits = [("all", correlate_with_series(positions, series))]
    if args.subset:
        keep = args.subset.split(",")
        fits.append(("subset", ols(subset_filter(fits[0][1].series, keep))))
    lines = ["sample\tn\tbeta0\tbeta1\tr\tp_value"]
    for name, f in fits:
        lines.append(f"{name}\t{f.n}\t{f.beta0:.12g}\t{f.beta1:.12g}\t{f.r:.12g}\t{f.p_value:.12g}")
        _write(out / f"scatter_{name}.tsv", f.scatter_tsv())
    _write(out / "regression.tsv", "\n".join(lines) + "\n")
    for name, f in fits:
        print(f"[{name}] {f.summary()}", end="", file=sys.stderr)
    return [pos_path, series_path]


def cmd_demo(args, out: Path) -> list[Path]:
    report = pipeline_demo(out, seed=args.seed if args.seed is not None else 0)
    print(report.text, end="")
    if not report.ok:
        raise DataError("demo checks failed: " + ", ".join(k for k, v in report.checks.items() if not v))
    return []


# -- parser ---------------------------------------------------------------


def _shared() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("shared options")
    g.add_argument("--input", help="input file or directory")
    g.add_argument("--output", help="output directory (created if missing)")
    g.add_argument("--config", help="key=value file supplying defaults for any flag")
    g.add_argument("--seed", type=int, default=None, help="random seed (Wordfish start jitter)")
    g.add_argument("--tol", type=float, default=1e-6, help="Wordfish relative log-likelihood tolerance")
    g.add_argument("--anchors", help="LEFT,RIGHT documents orienting the Wordfish scale")
    g.add_argument("--threshold", type=float, default=0.80, help="linkage similarity threshold")
    g.add_argument("--min-doc-freq", type=float, default=0.0,
                   help="drop terms used in fewer than this share of documents")
    g.add_argument("--stopwords", default="default", help="stop-word file, 'default' or 'none'")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Parliamentary speech corpus and text scaling toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="SUBCOMMAND", parser_class=_Parser)
    shared = [_shared()]

    def add(name: str, func: Callable, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=shared, help=help_, description=help_)
        p.set_defaults(func=func)
        return p

    p = add("ingest", cmd_ingest, "parse a directory of transcripts into a contributions TSV")
    p.add_argument("--manifest", help="TSV path<TAB>sitting_date overriding in-file dates")
    p.add_argument("--threads", type=int, default=None, help="parser threads (default HANSARD_SCALE_THREADS or 1)")

    p = add("link", cmd_link, "link speaker names to the members register")
    p.add_argument("--members", help="members register TSV")
    p.add_argument("--roles", help="dated office holders TSV")
    p.add_argument("--overrides", help="manual speaker_raw -> member_id TSV")
    p.add_argument("--min-common-len", type=int, default=2)
    p.add_argument("--no-date-window", action="store_true", help="ignore members' service dates")

    p = add("query", cmd_query, "select contributions and summarise them by member")
    p.add_argument("--members", help="members register TSV (adds party and constituency)")
    p.add_argument("--title", help="debate title substring (case-insensitive)")
    p.add_argument("--speaker", help="printed speaker substring (case-insensitive)")
    p.add_argument("--member", help="comma-separated member ids")
    p.add_argument("--party", help="comma-separated parties")
    p.add_argument("--year", type=int)
    p.add_argument("--date-from")
    p.add_argument("--date-to")

    for name, func, help_ in (("dtm", cmd_dtm, "build a document-term matrix"),
                              ("freq", cmd_freq, "word frequency tables (word-cloud data)")):
        p = add(name, func, help_)
        p.add_argument("--group-by", choices=GROUPS, default="member")
        p.add_argument("--keep-case", action="store_true")
        p.add_argument("--keep-numbers", action="store_true")
        if name == "dtm":
            p.add_argument("--sparse", action="store_true", help="write doc/term/count triplets")
            p.add_argument("--min-tokens", type=int, default=0, help="drop documents shorter than this")
        else:
            p.add_argument("--top", type=int, default=20)

    p = add("wordfish", cmd_wordfish, "fit Wordfish positions")
    p.add_argument("--dtm", help="document-term matrix TSV (dense or triplets)")
    p.add_argument("--max-iter", type=int, default=500)

    p = add("wordscore", cmd_wordscore, "score virgin texts from reference texts")
    p.add_argument("--dtm", help="document-term matrix TSV (dense or triplets)")
    p.add_argument("--refs", help="LABEL=SCORE,LABEL=SCORE")
    p.add_argument("--virgins", default="others", help="'others', 'all' or comma-separated labels")
    p.add_argument("--transform", choices=("lbg", "identity"), default="lbg")

    p = add("validate", cmd_validate, "regress an outcome series on estimated positions")
    p.add_argument("--positions", help="positions TSV (first column labels)")
    p.add_argument("--column", help="position column (default: second column)")
    p.add_argument("--series", help="outcome TSV label<TAB>value")
    p.add_argument("--subset", help="comma-separated labels for a second, restricted regression")

    add("demo", cmd_demo, "run the three bundled applications end to end")
    return parser


def _read_config(path: str) -> dict[str, str]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"config file not found: {p}")
    out = {}
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{p}:{lineno}: expected key=value")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    """Parse ``argv``; values from ``--config`` act as defaults under explicit flags."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError(parser.format_usage() + f"{PROG}: error: a subcommand is required")
    if args.config:
        config = _read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        for key, value in config.items():
            if key not in known or key in _NOT_CONFIG:
                raise UsageError(f"{args.config}: unknown config key {key!r}")
            action = known[key]
            if isinstance(action, argparse._StoreTrueAction):
                action.default = value.lower() in ("1", "true", "yes")
            else:
                action.default = value
        args = parser.parse_args(argv)
    return args


def execute(argv: Sequence[str]) -> argparse.Namespace:
    """Run one subcommand, raising on failure (used by :func:`run` and the demo)."""
    args = parse_args(argv)
    if not args.output:
        raise UsageError(f"{args.command}: --output is required")
    started = _now()
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    inputs = args.func(args, out)
    if args.config:
        inputs = list(inputs) + [Path(args.config)]
    write_manifest(out, args, inputs, started)
    return args


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        execute(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (HansardError, FileNotFoundError) as exc:
        print(f"{PROG}: data error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    return 0


def main() -> None:
    sys.exit(run())


# -- demo -----------------------------------------------------------------


@dataclass
class DemoReport:
    output: Path
    sections: dict[str, str] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)
    values: dict[str, float] = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def text(self) -> str:
        parts = [f"== {name} ==\n{body}" for name, body in self.sections.items()]
        parts.append("== checks ==\n" + "".join(f"{'PASS' if v else 'FAIL'}  {k}\n" for k, v in self.checks.items()))
        return "\n".join(parts)


def _read_tsv(path: Path) -> list[dict[str, str]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split("\t")
    return [dict(zip(header, line.split("\t"))) for line in lines[1:] if line]


def pipeline_demo(output: str | Path | None = None, seed: int = 0) -> DemoReport:
    """Run the word-frequency, Wordscore and Wordfish applications on the bundled fixtures.

    Each step goes through the same subcommands a user would call; the
    combined report is written to ``report.txt`` and ``report.json``.
    """
    t0 = time.perf_counter()
    root = Path(output) if output is not None else Path(tempfile.mkdtemp(prefix="hansard-demo-"))
    root.mkdir(parents=True, exist_ok=True)
    fixture_dir = root / "fixtures"
    fx.write_fixtures(fixture_dir)
    inp = fixture_dir / "inputs"
    rep = DemoReport(root)
    s = ["--seed", str(seed)]

    def step(*argv: str, name: Optional[str] = None) -> Path:
        out = root / (name or argv[0])
        execute(list(argv) + ["--output", str(out)] + s)
        return out

    # 1. word frequencies of budget speeches
    freq = step("freq", "--input", str(inp / "budget_speeches.tsv"), "--group-by", "label", "--top", "10")
    rows = _read_tsv(freq / "freq.tsv")
    overall = [r["term"] for r in rows if r["group"] == "ALL"]
    firsts = {r["group"]: r["term"] for r in rows if r["rank"] == "1" and r["group"] != "ALL"}
    rep.sections["word frequencies"] = (
        f"overall top terms: {', '.join(overall[:10])}\n"
        + "".join(f"  {g}: {t}\n" for g, t in firsts.items())
    )
    rep.checks["'tax' is the most frequent budget word"] = bool(overall) and overall[0] == "tax"

    # 2. the 2007 budget debate under Wordscore
    ingest = step("ingest", "--input", str(inp / "transcripts"))
    link = step("link", "--input", str(ingest / "contributions.tsv"), "--members", str(inp / "members.tsv"),
                "--roles", str(inp / "roles.tsv"))
    summary = json.loads((link / "link_summary.json").read_text(encoding="utf-8"))
    rate = summary["linked"] / summary["total"]
    query = step("query", "--input", str(link / "contributions.tsv"), "--members", str(inp / "members.tsv"),
                 "--title", fx.BUDGET_DEBATE_TITLE, "--year", "2007")
    dtm_debate = root / "dtm_debate"
    execute(["dtm", "--input", str(query / "contributions.tsv"), "--group-by", "member",
             "--output", str(dtm_debate)] + s)
    left, right = fx.member_id("Enda Kenny"), fx.member_id("Bertie Ahern")
    ws = step("wordscore", "--dtm", str(dtm_debate / "dtm.tsv"), "--refs", f"{right}=1,{left}=-1")
    scores = {r["doc_label"]: float(r["rescaled"]) for r in _read_tsv(ws / "doc_scores.tsv")}
    government = {fx.member_id(sp.name) for sp, _ in fx.debate_fixture() if sp.government}
    gov_signs = [scores[d] > 0 for d in scores if d in government]
    opp_signs = [scores[d] < 0 for d in scores if d not in government]
    lines = [f"linked {summary['linked']}/{summary['total']} contributions ({100 * rate:.0f}%)",
             f"references: {right} = +1, {left} = -1; {len(scores)} virgin speakers"]
    for d, v in sorted(scores.items(), key=lambda kv: kv[1]):
        lines.append(f"  {v:+.3f}  {d}  {'government' if d in government else 'opposition'}")
    rep.sections["budget debate (Wordscore)"] = "\n".join(lines) + "\n"
    rep.checks["all clean fixture speakers linked"] = rate == 1.0
    rep.checks["government positive, opposition negative"] = all(gov_signs) and all(opp_signs)
    rep.values["linkage_rate"] = rate

    # 3. cabinet positions against spending shares: Wordscore with the two poles
    # as references, Wordfish anchored on the same pair as a second estimate
    dtm_cab = root / "dtm_cabinet"
    execute(["dtm", "--input", str(inp / "cabinet_documents.tsv"), "--group-by", "label",
             "--min-doc-freq", "0.2", "--output", str(dtm_cab)] + s)
    pro, contra = fx.member_id("Mary Coughlan"), fx.member_id("Charlie McCreevy")
    high = ",".join(fx.member_id(n) for n in fx.HIGH_SPENDING)
    ws_cab = step("wordscore", "--dtm", str(dtm_cab / "dtm.tsv"), "--refs", f"{pro}=-1,{contra}=1",
                  "--virgins", "all", name="wordscore_cabinet")
    wf = step("wordfish", "--dtm", str(dtm_cab / "dtm.tsv"), "--anchors", f"{pro},{contra}")
    lines = []
    for est, positions, column in (("wordscore", ws_cab / "doc_scores.tsv", "rescaled"),
                                   ("wordfish", wf / "documents.tsv", "omega")):
        val = step("validate", "--positions", str(positions), "--column", column,
                   "--series", str(inp / "spending_2004.tsv"), "--subset", high, name=f"validate_{est}")
        reg = {r["sample"]: r for r in _read_tsv(val / "regression.tsv")}
        for name, label in (("all", "all 14 ministers"), ("subset", "8 high-spending departments")):
            r = reg[name]
            lines.append(f"{est}, {label}: n={r['n']} slope={float(r['beta1']):.4f} r={float(r['r']):.3f} "
                         f"p={float(r['p_value']):.3g}")
        r8, b8 = float(reg["subset"]["r"]), float(reg["subset"]["beta1"])
        rep.checks[f"{est}: negative slope with r <= -0.9 on the 8-department subset"] = b8 < 0 and r8 <= -0.9
        suffix = "" if est == "wordscore" else "_wordfish"
        rep.values.update({f"r_all{suffix}": float(reg["all"]["r"]), f"r_subset{suffix}": r8,
                           f"slope_subset{suffix}": b8})
    rep.sections["cabinet positions vs spending"] = "\n".join(lines) + "\n"

    rep.seconds = time.perf_counter() - t0
    _write(root / "report.txt", rep.text)
    _write(root / "report.json", _json({"checks": rep.checks, "values": rep.values}))
    return rep


if __name__ == "__main__":
    main()
