"""Command-line pipeline: ingest -> features -> train -> evaluate -> explain
-> stats -> serve.

Every run writes a provenance file (the fully resolved configuration) next to
its primary output, so results can be reproduced byte for byte. Exit codes:
0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import __version__
from .analyzer import CompilerConfig, analyze_snippet
from .analyzer.jdk import load_index
from .bundle import build_bundle, load_bundle, save_bundle
from .dataset import (
    CSV_HEADER,
    Label,
    Origin,
    encode,
    load_csv,
    save_csv,
    smote,
    synth_corpus,
)
from .errors import DatasetError, ReproLensError
from .explain import (
    beeswarm_csv,
    exact_shapley,
    export_plot_data,
    export_to_json,
    waterfall_svg,
)
from .ingest import (
    DEFAULT_KEYWORDS,
    combine_snippets,
    filter_issue_question,
    parse_posts_dump,
    question_record,
    write_questions_jsonl,
    DumpStats,
)
from .models import (
    GLOBAL,
    IN_FOLD,
    ModelSpec,
    evaluate_cv,
    metrics_to_csv,
    predict_proba,
    render_metrics_table,
    train,
)
from .stats import feature_impact_report, report_to_csv

FAMILY_ALIASES = {
    "rf": "random_forest",
    "random_forest": "random_forest",
    "gbt": "gbt",
    "xgb": "gbt",
    "ann": "mlp",
    "mlp": "mlp",
    "nb": "naive_bayes",
    "naive_bayes": "naive_bayes",
    "knn": "knn",
}


def _parse_hyper(pairs: list[str]) -> dict:
    out: dict = {}
    for pair in pairs:
        if "=" not in pair:
            raise ReproLensError(f"--hyper expects key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        if raw.lower() in ("true", "false"):
            out[key] = raw.lower() == "true"
        elif raw.lower() in ("none", "null"):
            out[key] = None
        else:
            try:
                out[key] = int(raw)
            except ValueError:
                try:
                    out[key] = float(raw)
                except ValueError:
                    out[key] = raw
    return out


def _compiler_config(args) -> CompilerConfig:
    raw = getattr(args, "compiler", None) or os.environ.get("REPROLENS_COMPILER")
    command = tuple(raw.split()) if raw else None
    return CompilerConfig(command=command, timeout_s=getattr(args, "compile_timeout", 30.0))


def _write_provenance(args, outputs: list[str], extra: dict | None = None) -> None:
    doc = {
        "tool": "reprolens",
        "version": __version__,
        "command": args.command,
        "config": {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("command", "func") and not k.startswith("_")
        },
        "outputs": outputs,
        "jdk_index_sha256": load_index().sha256,
    }
    if extra:
        doc.update(extra)
    target = getattr(args, "provenance", None)
    if target is None:
        base = outputs[0] if outputs else "reprolens"
        target = f"{base}.provenance.json"
    Path(target).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")


# -- subcommands ------------------------------------------------------------------


def cmd_ingest(args) -> int:
    keywords = tuple(args.keywords) if args.keywords else DEFAULT_KEYWORDS
    stats = DumpStats()
    records = []
    for post in parse_posts_dump(args.dump, args.tag, stats=stats):
        if filter_issue_question(post, keywords):
            records.append(question_record(post))
    n = write_questions_jsonl(records, args.output)
    _write_provenance(
        args,
        [args.output],
        {"keywords": list(keywords), "stats": {
            "rows_seen": stats.rows_seen,
            "questions": stats.questions,
            "tag_matched": stats.yielded,
            "retained": n,
            "warnings": stats.warnings,
        }},
    )
    print(f"retained {n} of {stats.yielded} tagged questions ({stats.warnings} warnings)")
    return 0


def _load_labels(path: str) -> dict[int, Label]:
    labels: dict[int, Label] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or row[0] in ("id", "question_id"):
                continue
            labels[int(row[0])] = Label(row[1].strip().lower())
    return labels


def cmd_features(args) -> int:
    labels = _load_labels(args.labels) if args.labels else {}
    compiler = _compiler_config(args)
    rows: list[list[str]] = []
    skipped = 0
    with open(args.questions, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            label = labels.get(rec["id"])
            if label is None:
                skipped += 1
                continue
            snippets = rec.get("snippets", [])
            if not snippets:
                continue
            texts = [combine_snippets(snippets)] if args.combine else snippets
            for text in texts:
                outcome = analyze_snippet(text, rec.get("question_text", ""), compiler)
                encoded = [repr(float(v)) for v in encode(outcome.features)]
                rows.append(encoded + [label.value, Origin.REAL.value, str(rec["id"])])
    if not rows:
        raise DatasetError(
            "no labeled feature rows produced; pass --labels with question labels"
        )
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER + ["source_id"])
        writer.writerows(rows)
    _write_provenance(args, [args.output], {"rows": len(rows), "unlabeled_skipped": skipped})
    print(f"wrote {len(rows)} feature rows ({skipped} questions without labels skipped)")
    return 0


def cmd_synth(args) -> int:
    ds = synth_corpus(args.repro, args.irrepro, seed=args.seed)
    save_csv(ds, args.output)
    _write_provenance(args, [args.output])
    print(f"wrote {len(ds)} synthetic examples to {args.output}")
    return 0


def _model_spec(args) -> ModelSpec:
    family = FAMILY_ALIASES.get(args.family)
    if family is None:
        raise ReproLensError(f"unknown family {args.family!r}; choose from {sorted(set(FAMILY_ALIASES))}")
    return ModelSpec(family, _parse_hyper(args.hyper or []), seed=args.seed)


def cmd_train(args) -> int:
    spec = _model_spec(args)
    ds = load_csv(args.data).real_only()
    train_ds = ds
    if not args.no_smote:
        counts = ds.class_counts()
        if min(counts.values()) >= 2 and min(counts.values()) != max(counts.values()):
            train_ds = smote(ds, seed=args.seed, round_tri_states=args.round)
    model = train(spec, train_ds)
    bundle = build_bundle(model, ds.X, background_size=args.background, seed=args.seed)
    save_bundle(bundle, args.output)
    _write_provenance(args, [args.output], {"trained_on": len(train_ds), "real_rows": len(ds)})
    print(f"trained {spec.family} on {len(train_ds)} rows -> {args.output}")
    return 0


def cmd_evaluate(args) -> int:
    spec = _model_spec(args)
    ds = load_csv(args.data).real_only()
    mode = GLOBAL if args.paper_mode else IN_FOLD
    report = evaluate_cv(
        spec, ds, k=args.k, seed=args.seed, smote_mode=mode, jobs=args.jobs
    )
    reports = {spec.family: report}
    if args.json:
        doc = {
            "family": spec.family,
            "k": args.k,
            "seed": args.seed,
            "smote_mode": mode,
            "accuracy": report.accuracy,
            "per_class": {
                name: vars(m) for name, m in report.per_class.items()
            },
            "confusion": report.confusion,
        }
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        text = render_metrics_table(reports)
    if args.output:
        Path(args.output).write_text(
            metrics_to_csv(reports) if args.output.endswith(".csv") else text,
            encoding="utf-8",
        )
        _write_provenance(args, [args.output])
    else:
        _write_provenance(args, [])
    sys.stdout.write(text)
    return 0


def cmd_explain(args) -> int:
    bundle = load_bundle(args.bundle)
    ds = load_csv(args.data)
    if args.export == "beeswarm":
        limit = min(args.limit, len(ds))
        explanations = [
            exact_shapley(bundle.model, ds.X[i], bundle.background) for i in range(limit)
        ]
        doc = export_plot_data("beeswarm", explanations)
    else:
        if not 0 <= args.instance < len(ds):
            raise DatasetError(f"instance {args.instance} out of range (n={len(ds)})")
        explanation = exact_shapley(bundle.model, ds.X[args.instance], bundle.background)
        doc = export_plot_data(args.export, explanation)
    outputs = [args.output]
    Path(args.output).write_text(export_to_json(doc), encoding="utf-8")
    if args.export == "beeswarm" and args.csv:
        Path(args.csv).write_text(beeswarm_csv(doc), encoding="utf-8")
        outputs.append(args.csv)
    if args.export == "waterfall" and args.svg:
        Path(args.svg).write_text(waterfall_svg(doc), encoding="utf-8")
        outputs.append(args.svg)
    _write_provenance(args, outputs)
    print(f"wrote {args.export} data to {args.output}")
    return 0


def cmd_stats(args) -> int:
    ds = load_csv(args.data)
    rows = feature_impact_report(ds, alpha=args.alpha)
    text = report_to_csv(rows)
    Path(args.output).write_text(text, encoding="utf-8")
    _write_provenance(args, [args.output])
    for row in rows:
        flag = "significant" if row["significant"] else "not significant"
        print(f"{row['feature']:<20} chi2={row['chi2']:<10.4g} df={row['df']} "
              f"p={row['p']:<12.4g} {flag}")
    return 0


def cmd_predict(args) -> int:
    bundle = load_bundle(args.bundle)
    snippet = Path(args.snippet).read_text(encoding="utf-8")
    question_text = args.question_text or ""
    if question_text.startswith("@"):
        question_text = Path(question_text[1:]).read_text(encoding="utf-8")
    outcome = analyze_snippet(snippet, question_text, _compiler_config(args))
    x = encode(outcome.features)
    probability = float(predict_proba(bundle.model, x))
    label = Label.REPRODUCIBLE if probability >= 0.5 else Label.IRREPRODUCIBLE
    if args.json:
        doc = {
            "features": outcome.features.as_dict(),
            "probability_reproducible": probability,
            "predicted": label.value,
            "compiler_status": outcome.compile_result.status.value,
            "notes": outcome.notes,
        }
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        lines = [f"{k}: {v}" for k, v in outcome.features.as_dict().items()]
        lines.append(f"probability_reproducible: {probability:.4f}")
        lines.append(f"predicted: {label.value}")
        text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        _write_provenance(args, [args.output])
    else:
        _write_provenance(args, [])
    sys.stdout.write(text)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.bundle, _compiler_config(args), static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reprolens",
        description="Predict and explain issue reproducibility from Q&A code snippets.",
    )
    parser.add_argument("--version", action="version", version=f"reprolens {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed=True, provenance=True):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if provenance:
            p.add_argument("--provenance", help="override the provenance file path")

    p = sub.add_parser("ingest", help="parse a posts dump into retained questions")
    p.add_argument("dump")
    p.add_argument("--tag", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--keywords", nargs="*", help="override the issue keyword list")
    add_common(p, seed=False)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("features", help="extract feature rows from ingested questions")
    p.add_argument("questions")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--labels", help="CSV of question_id,label")
    p.add_argument("--combine", action="store_true", help="merge a question's snippets")
    p.add_argument("--compiler", help="compiler command override")
    p.add_argument("--compile-timeout", type=float, default=30.0)
    add_common(p, seed=False)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("synth", help="generate the synthetic desk-scale corpus")
    p.add_argument("--repro", type=int, required=True)
    p.add_argument("--irrepro", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    add_common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train", help="train a model and build a serving bundle")
    p.add_argument("data")
    p.add_argument("--family", required=True, help="rf|gbt|mlp|nb|knn")
    p.add_argument("--hyper", action="append", help="key=value override", default=[])
    p.add_argument("--background", type=int, default=100)
    p.add_argument("--no-smote", action="store_true", help="train on the raw class balance")
    p.add_argument(
        "--round",
        action="store_true",
        help="snap interpolated SMOTE coordinates to legal categorical values",
    )
    p.add_argument("-o", "--output", required=True)
    add_common(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="cross-validated metrics for one family")
    p.add_argument("data")
    p.add_argument("--family", required=True)
    p.add_argument("--hyper", action="append", default=[])
    p.add_argument("--k", type=int, default=10)
    p.add_argument(
        "--paper-mode",
        action="store_true",
        help="apply SMOTE once to the whole dataset before folding (leaky)",
    )
    p.add_argument("--jobs", type=int, default=1, help="fold-level parallelism")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("explain", help="export Shapley plot data")
    p.add_argument("bundle")
    p.add_argument("--data", required=True, help="feature CSV with instances to explain")
    p.add_argument("--instance", type=int, default=0)
    p.add_argument("--export", choices=("beeswarm", "waterfall", "force"), required=True)
    p.add_argument("--limit", type=int, default=100, help="beeswarm instance cap")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--csv", help="also write beeswarm rows as CSV")
    p.add_argument("--svg", help="also render a waterfall SVG")
    add_common(p, seed=False)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("stats", help="chi-square significance of each feature")
    p.add_argument("data")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    add_common(p, seed=False)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("predict", help="analyze one snippet file with a trained bundle")
    p.add_argument("bundle")
    p.add_argument("snippet")
    p.add_argument("--question-text", help="question text, or @file to read one")
    p.add_argument("--compiler")
    p.add_argument("--compile-timeout", type=float, default=30.0)
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    add_common(p, seed=False)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("serve", help="run the HTTP analysis service")
    p.add_argument("bundle")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--static", help="directory of web client assets to serve")
    p.add_argument("--compiler")
    p.add_argument("--compile-timeout", type=float, default=30.0)
    add_common(p, seed=False, provenance=False)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ReproLensError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
