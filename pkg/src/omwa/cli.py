"""Command line: simulation replays, offline baselines, snapshot tools, corpus
preparation and the HTTP service.

Engine parameters come from flags, falling back to OMWA_* environment
variables, then to the built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .baseline import OfflineEngine, load_training_corpus, train_offline
from .engine import OnlineEngine
from .evaluate import (
    extract_mius,
    first_reading_pinyin,
    interleave,
    load_corpus,
    run_simulation,
    write_report,
)
from .pinyin import PinyinTable, default_inventory, default_table, load_inventory
from .vocab import EngineConfig

_CONFIG_FIELDS = [
    ("alpha", float),
    ("beta", float),
    ("gamma", float),
    ("cap", int),
    ("per", int),
    ("maxlen", int),
    ("n", int),
    ("epsilon", float),
    ("backoff", float),
]


def _env(name: str, cast, fallback):
    raw = os.environ.get(f"OMWA_{name.upper()}")
    if raw is None:
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"bad OMWA_{name.upper()} value: {raw!r}")


def _add_config_args(p: argparse.ArgumentParser) -> None:
    defaults = EngineConfig()
    for name, cast in _CONFIG_FIELDS:
        p.add_argument(
            f"--{name}",
            type=cast,
            default=_env(name, cast, getattr(defaults, name)),
            help=f"engine parameter {name} (default {getattr(defaults, name)})",
        )
    p.add_argument("--bonus-norm", action="store_true",
                   default=_env("bonus_norm", lambda s: s not in ("", "0", "false"), False),
                   help="scale the segmentation bonus by the per-word geometric mean")


def _add_table_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--table", help="char-pinyin TSV (default: packaged table)")
    p.add_argument("--inventory", help="syllable inventory file (default: packaged)")


def _build_config(args, k: int) -> EngineConfig:
    kwargs = {name: getattr(args, name) for name, _ in _CONFIG_FIELDS}
    kwargs["bonus_norm"] = args.bonus_norm
    kwargs["k"] = k
    return EngineConfig(**kwargs)


def _read_file(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def _load_table(args) -> tuple[PinyinTable, frozenset[str]]:
    table = PinyinTable.load(_read_file(args.table)) if args.table else default_table()
    inv = load_inventory(_read_file(args.inventory)) if args.inventory else default_inventory()
    return table, inv


def cmd_simulate(args) -> int:
    table, inventory = _load_table(args)
    k_values = tuple(int(x) for x in args.k.split(","))
    config = _build_config(args, max(k_values))
    joints: list[int] = []
    if args.interleave:
        a = load_corpus(_read_file(args.interleave[0]))
        b = load_corpus(_read_file(args.interleave[1]))
        corpus, joints = interleave(a, b, args.segments)
    elif args.corpus:
        corpus = load_corpus(_read_file(args.corpus))
    else:
        print("simulate: need --corpus or --interleave", file=sys.stderr)
        return 2
    if args.engine == "omwa":
        engine = OnlineEngine(table, inventory, config)
    else:
        if not args.train:
            print(f"simulate: --engine {args.engine} requires --train", file=sys.stderr)
            return 2
        order = {"unigram": 1, "bigram": 2, "trigram": 3}[args.engine]
        model = train_offline(load_training_corpus(_read_file(args.train)), order)
        engine = OfflineEngine(model, table, config)
    report = run_simulation(
        corpus, engine, k_values, args.group, table=table, joints=joints, log=sys.stderr
    )
    paths = write_report(report, args.out, args.basename, figure=not args.no_figure)
    for k in k_values:
        print(f"top{k}: {report.totals[k]:.6f}")
    print(f"mius: {report.n_mius}  skipped: {report.skipped}")
    for p in paths:
        print(f"wrote {p}")
    return 0


def cmd_train_offline(args) -> int:
    records = load_training_corpus(_read_file(args.train))
    model = train_offline(records, args.order)
    dump = {
        "v": 1,
        "order": model.order,
        "counts": [[" ".join(g), c] for g, c in sorted(model.counts.items())],
        "emissions": {w: model.emissions[w] for w in sorted(model.emissions)},
    }
    with open(args.out, "w", encoding="utf-8") as f:
        json.dump(dump, f, ensure_ascii=False, sort_keys=True)
        f.write("\n")
    print(f"trained order-{model.order} model on {len(records)} records -> {args.out}")
    return 0


def cmd_serve(args) -> int:
    import signal

    from .service import EngineService, make_server

    table, inventory = _load_table(args)
    config = _build_config(args, args.k)
    engine = OnlineEngine(table, inventory, config)
    if args.snapshot and os.path.exists(os.path.join(args.snapshot, "meta.json")):
        engine.load_snapshot(args.snapshot)
        print(f"loaded snapshot from {args.snapshot} ({engine.vocab.size} words)")
    ui_dir = args.ui_dir
    if ui_dir is None:
        bundled = os.path.join(os.getcwd(), "frontend", "dist")
        ui_dir = bundled if os.path.isdir(bundled) else None
    service = EngineService(engine, snapshot_dir=args.snapshot, ui_dir=ui_dir)
    try:
        server = make_server(service, args.host, args.port)
    except OSError as exc:
        print(f"serve: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    print(f"serving on http://{args.host}:{args.port} (ui: {ui_dir or 'none'})")

    def _sigterm(*_):
        raise SystemExit(0)

    signal.signal(signal.SIGTERM, _sigterm)
    try:
        server.serve_forever()
    except (KeyboardInterrupt, SystemExit):
        pass
    finally:
        service.save()
        server.server_close()
    return 0


def cmd_export_vocab(args) -> int:
    from .vocab import export_ngrams_tsv, export_vocab_tsv, import_ngrams_tsv, import_vocab_tsv

    table, _ = _load_table(args)
    vocab = import_vocab_tsv(open(os.path.join(args.snapshot, "vocab.tsv"), encoding="utf-8"),
                             EngineConfig(), table)
    if args.top:
        for text, iwl in vocab.top_words(args.top):
            print(f"{text}\t{iwl:g}")
        return 0
    out_v = args.vocab_out or "vocab.tsv"
    with open(out_v, "w", encoding="utf-8") as f:
        f.write(export_vocab_tsv(vocab))
    print(f"wrote {out_v}")
    ngrams_src = os.path.join(args.snapshot, "ngrams.tsv")
    if args.ngrams_out and os.path.exists(ngrams_src):
        store = import_ngrams_tsv(open(ngrams_src, encoding="utf-8"))
        with open(args.ngrams_out, "w", encoding="utf-8") as f:
            f.write(export_ngrams_tsv(store))
        print(f"wrote {args.ngrams_out}")
    return 0


def cmd_import_vocab(args) -> int:
    table, inventory = _load_table(args)
    config = _build_config(args, 10)
    engine = OnlineEngine(table, inventory, config)
    from .vocab import import_ngrams_tsv, import_vocab_tsv

    with open(args.vocab, encoding="utf-8") as f:
        engine.vocab = import_vocab_tsv(f, config, table)
    if args.ngrams:
        with open(args.ngrams, encoding="utf-8") as f:
            engine.store = import_ngrams_tsv(f, config.n)
    engine.learner.vocab = engine.vocab
    engine.learner.store = engine.store
    engine.save_snapshot(args.out)
    print(f"imported {engine.vocab.size} words -> snapshot {args.out}")
    return 0


def cmd_prepare_corpus(args) -> int:
    table, _ = _load_table(args)
    kept = skipped = 0
    with open(args.input, encoding="utf-8") as src, open(args.out, "w", encoding="utf-8") as dst:
        for line_no, line in enumerate(src, 1):
            for miu in extract_mius(line, line_no):
                syls = first_reading_pinyin(miu.text, table)
                if syls is None:
                    skipped += 1
                    continue
                dst.write(f"{miu.text}\t{' '.join(syls)}\n")
                kept += 1
    print(f"wrote {kept} MIUs to {args.out} ({skipped} skipped: characters outside the table)",
          file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omwa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="replay a MIU corpus and write score reports")
    p.add_argument("--corpus", help="MIU corpus file: <text>[\\t<syl> ...] per line")
    p.add_argument("--interleave", nargs=2, metavar=("A", "B"), help="two corpora to interlace")
    p.add_argument("--segments", type=int, default=5, help="segments per corpus when interleaving")
    p.add_argument("--engine", choices=["omwa", "unigram", "bigram", "trigram"], default="omwa")
    p.add_argument("--train", help="training corpus for offline engines")
    p.add_argument("--k", default="1,10", help="comma-separated score depths (default 1,10)")
    p.add_argument("--group", type=int, default=2000, help="MIUs per report group")
    p.add_argument("--out", default=".", help="report output directory")
    p.add_argument("--basename", default="report")
    p.add_argument("--no-figure", action="store_true", help="skip the PNG learning curve")
    _add_table_args(p)
    _add_config_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("train-offline", help="train an offline n-gram model and save it")
    p.add_argument("--train", required=True)
    p.add_argument("--order", type=int, choices=[1, 2, 3], default=3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_offline)

    p = sub.add_parser("serve", help="run the HTTP service for the typing UI")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--snapshot", help="snapshot directory to load and autosave")
    p.add_argument("--ui-dir", help="static files to serve at / (default: ./frontend/dist if present)")
    p.add_argument("--k", type=int, default=10, help="candidate list depth")
    _add_table_args(p)
    _add_config_args(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export-vocab", help="export vocabulary from a snapshot")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--top", type=int, help="print the top-M words instead of writing files")
    p.add_argument("--vocab-out")
    p.add_argument("--ngrams-out")
    _add_table_args(p)
    p.set_defaults(func=cmd_export_vocab)

    p = sub.add_parser("import-vocab", help="build a snapshot from vocabulary/ngram TSVs")
    p.add_argument("--vocab", required=True)
    p.add_argument("--ngrams")
    p.add_argument("--out", required=True, help="snapshot directory to write")
    _add_table_args(p)
    _add_config_args(p)
    p.set_defaults(func=cmd_import_vocab)

    p = sub.add_parser("prepare-corpus", help="extract MIUs from raw text with first-reading pinyin")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    _add_table_args(p)
    p.set_defaults(func=cmd_prepare_corpus)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
