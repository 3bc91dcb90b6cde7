"""Command line: gen, run, score, report.

Exit codes: 0 ok, 1 usage, 2 bad data, 3 backend failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import date
from pathlib import Path

from .corpus import read_corpus, render_corpus, write_corpus
from .errors import AuditError, BackendError, ConfigError, DataError
from .llmclient import DEFAULT_KEY_ENV, Client, ClientConfig, RunPlan, TranscriptWriter, read_transcripts, run_audit
from .protocol import REGIMES
from .records import generate_identities, read_dataset, write_dataset
from .report import CSV_SECTIONS, build_report, emit_report, fingerprint_file, read_report, score_transcripts

log = logging.getLogger("leakaudit")

DATASET_FILE = "dataset.jsonl"
CORPUS_FILE = "corpus.jsonl"
BACKEND_NAMES = {"http": "http", "echo": "echo_leaker", "redact": "redactor",
                 "mask": "partial_masker", "replay": "replay"}


class ArgParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _ratio(text: str) -> tuple[float, ...]:
    try:
        parts = tuple(float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"ratio must look like 1:1:1, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("ratio needs three parts (male:female:non-binary)")
    return parts


def _regimes(text: str) -> list[str]:
    items = [r.strip() for r in text.split(",") if r.strip()]
    bad = [r for r in items if r not in REGIMES]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"regimes must be a comma list of {','.join(REGIMES)}")
    return items


def build_parser() -> ArgParser:
    p = ArgParser(prog="leakaudit", description="Audit PII/PHI leakage in chat model table summaries.")
    p.add_argument("--config", help="key = value file supplying defaults for any flag")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    g = sub.add_parser("gen", help="generate a synthetic dataset and its documents")
    g.add_argument("--domain", choices=("medical", "hiring"))
    g.add_argument("--count", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--out", help="output directory")
    g.add_argument("--ratio", type=_ratio, help="gender weights male:female:non-binary")
    g.add_argument("--reference-date", type=date.fromisoformat, help="date ages are computed at")
    g.add_argument("--template", help="render every document with this template")

    r = sub.add_parser("run", help="send the documents to a model under each prompt regime")
    r.add_argument("--dataset", help="directory written by gen")
    r.add_argument("--backend", choices=sorted(BACKEND_NAMES))
    r.add_argument("--regimes", type=_regimes, default=list(REGIMES))
    r.add_argument("--out", help="transcript JSONL file")
    r.add_argument("--append", action="store_true", help="append to an existing transcript file")
    r.add_argument("--parallel", type=int, default=4)
    r.add_argument("--batch-size", type=int, default=10)
    r.add_argument("--two-turn", action="store_true", help="replay the baseline answer before the add-on")
    r.add_argument("--seed", type=int, help="simulator and jitter seed (default: dataset seed)")
    r.add_argument("--endpoint", default="")
    r.add_argument("--model", default="")
    r.add_argument("--api-key-env", default=DEFAULT_KEY_ENV,
                   help="name of the environment variable holding the API key")
    r.add_argument("--max-retries", type=int, default=3)
    r.add_argument("--backoff", type=float, default=1.0, help="base backoff in seconds")
    r.add_argument("--timeout", type=float, default=60.0)
    r.add_argument("--temperature", type=float)
    r.add_argument("--replay", help="transcript file to answer from (replay backend)")

    s = sub.add_parser("score", help="score transcripts into a report")
    s.add_argument("--dataset")
    s.add_argument("--transcripts")
    s.add_argument("--out", help="report JSON path")
    s.add_argument("--quarantine", help="where unparseable responses go (default: next to --out)")

    o = sub.add_parser("report", help="render a report as md, csv or json")
    o.add_argument("--in", dest="input")
    o.add_argument("--format", default="md")
    o.add_argument("--section", default="leakage", help=f"CSV section: {', '.join(CSV_SECTIONS)}")
    o.add_argument("--out", help="write here instead of stdout")
    return p


_REQUIRED = {
    "gen": ("domain", "count", "seed", "out"),
    "run": ("dataset", "backend", "out"),
    "score": ("dataset", "transcripts", "out"),
    "report": ("input",),
}


def load_config(path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"config line {no}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config(parser: ArgParser, argv: list[str]) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    cfg = load_config(known.config)
    if "api_key" in cfg:
        raise ConfigError("API keys are read from an environment variable only; set api_key_env instead")
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    args = parser.parse_args(argv)
    if args.command is None:
        return args
    sp = subparsers.choices[args.command]
    actions = {a.dest: a for a in sp._actions}
    # config values become defaults, so explicit flags still win
    for key, raw in cfg.items():
        dest = "input" if key == "in" else key
        if dest not in actions:
            raise ConfigError(f"unknown config key {key!r} for {args.command}")
        action = actions[dest]
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                value = action.type(raw)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise ConfigError(f"config {key}: {exc}") from exc
        else:
            value = raw
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"config {key}: {value!r} not in {sorted(action.choices)}")
        sp.set_defaults(**{dest: value})
    return parser.parse_args(argv)


def cmd_gen(args) -> int:
    ds = generate_identities(args.domain, args.count, args.seed, args.ratio,
                             **({"reference_date": args.reference_date} if args.reference_date else {}))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_dataset(ds, out / DATASET_FILE)
    write_corpus(render_corpus(ds, args.seed, args.template), out / CORPUS_FILE)
    log.info("wrote %d %s records to %s", len(ds), ds.domain, out)
    return 0


def cmd_run(args) -> int:
    data_dir = Path(args.dataset)
    dataset = read_dataset(data_dir / DATASET_FILE)
    docs = read_corpus(data_dir / CORPUS_FILE)
    fingerprint = fingerprint_file(data_dir / DATASET_FILE)
    config = ClientConfig(
        backend=BACKEND_NAMES[args.backend],
        endpoint_url=args.endpoint,
        model_id=args.model,
        api_key_env_name=args.api_key_env,
        max_retries=args.max_retries,
        base_backoff=args.backoff,
        max_parallel=args.parallel,
        timeout=args.timeout,
        temperature=args.temperature,
        seed=dataset.seed if args.seed is None else args.seed,
        replay_path=args.replay,
    )
    plan = RunPlan(args.regimes, args.batch_size, args.two_turn, fingerprint)
    with Client(config) as client, TranscriptWriter(args.out, append=args.append) as writer:
        transcripts = run_audit(client, docs, plan, sink=writer.write)
    failed = [t for t in transcripts if t.status != "ok"]
    if failed:
        print(f"leakaudit: {len(failed)} of {len(transcripts)} requests failed; first error: {failed[0].error}",
              file=sys.stderr)
        return 3
    log.info("wrote %d transcripts to %s", len(transcripts), args.out)
    return 0


def cmd_score(args) -> int:
    data_dir = Path(args.dataset)
    dataset = read_dataset(data_dir / DATASET_FILE)
    fingerprint = fingerprint_file(data_dir / DATASET_FILE)
    run = score_transcripts(dataset, read_transcripts(args.transcripts), fingerprint)
    report = build_report(dataset, run, fingerprint)
    out = Path(args.out)
    out.write_text(report.to_json(), encoding="utf-8")
    if run.quarantine:
        qpath = Path(args.quarantine) if args.quarantine else out.with_suffix(".quarantine.jsonl")
        qpath.write_text("".join(json.dumps(q, sort_keys=True, ensure_ascii=False) + "\n"
                                 for q in run.quarantine), encoding="utf-8")
        print(f"leakaudit: {len(run.quarantine)} responses quarantined in {qpath}", file=sys.stderr)
    return 0


def cmd_report(args) -> int:
    report = read_report(args.input)
    data = emit_report(report, args.format, args.section)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return 0


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "score": cmd_score, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except ConfigError as exc:
        print(f"leakaudit: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("leakaudit: error: a command is required", file=sys.stderr)
        return 1
    missing = [k for k in _REQUIRED[args.command] if getattr(args, k) is None]
    if missing:
        parser.print_usage(sys.stderr)
        flags = ", ".join("--" + ("in" if k == "input" else k.replace("_", "-")) for k in missing)
        print(f"leakaudit {args.command}: error: missing required {flags}", file=sys.stderr)
        return 1
    try:
        return COMMANDS[args.command](args)
    except BackendError as exc:
        print(f"leakaudit: backend failure: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"leakaudit: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"leakaudit: {exc}", file=sys.stderr)
        return 2
    except AuditError as exc:  # pragma: no cover - every AuditError is data or backend
        print(f"leakaudit: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
