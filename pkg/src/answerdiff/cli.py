"""Command-line front end: validate, stats, features, train, evaluate,
synth, route, report.

Every command is deterministic given its flags and seeds; output files
carry no timestamps, so reruns overwrite bit-identically.  Exit codes:
0 ok, 1 data violations, 2 I/O or configuration error, 3 internal failure.
"""

from __future__ import annotations

import csv
import functools
import json
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import aggregate as agg
from . import agreement, dataio
from .baselines import random_scores, relevance_rule_scores
from .features import FEATURE_NAMES, feature_matrix, mask_feature_names, missing_image_ids
from .forest import ReasonForestClassifier
from .labels import REASON_CODES, validate_record
from .linear import ReasonLinearClassifier
from .metrics import EvaluationReport, compare, evaluate, pr_curve
from .persistence import load_model, save_model
from .routing import STEPS_BY_ID, route_resolutions
from .synth import SynthSpec, generate_fixture

EXIT_VIOLATIONS = 1
EXIT_CONFIG = 2
EXIT_INTERNAL = 3


def _fmt(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except (OSError, ValueError, TypeError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except SystemExit:
            raise
        except Exception as exc:  # internal invariant failure
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(EXIT_INTERNAL)

    return wrapper


@click.group()
@click.option("--seed", type=int, default=None, help="Seed for seeded subcommand behaviour.")
@click.option("--threshold", type=click.IntRange(1, 5), default=None,
              help="Validity threshold k; stats sweeps 1..5 when omitted.")
@click.option("--out", type=click.Path(path_type=Path), default=Path("out"),
              show_default=True, help="Output directory.")
@click.option("--lenient", is_flag=True, help="Skip invalid record lines instead of failing.")
@click.pass_context
def main(ctx, seed, threshold, out, lenient):
    """Analysis and prediction toolkit for crowd answer disagreement."""
    ctx.obj = {"seed": seed, "threshold": threshold, "out": out, "lenient": lenient}


def _outdir(ctx) -> Path:
    out = ctx.obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_records(ctx, path):
    errors: list = []
    records = dataio.load_records(path, lenient=ctx.obj["lenient"], errors=errors)
    for lineno, message in errors:
        click.echo(f"skipped line {lineno}: {message}", err=True)
    if errors:
        click.echo(f"skipped {len(errors)} invalid line(s)", err=True)
    if not records:
        raise ValueError(f"{path}: no records loaded")
    return records


def _resolve_split(records, manifest_path, proportions, seed):
    ids = [r.id for r in records]
    if manifest_path is not None:
        return dataio.load_split_manifest(manifest_path, ids)
    parts = tuple(float(p) for p in proportions.split(","))
    return dataio.generate_split(ids, parts, seed)


def _subset(records, assignment, split):
    wanted = {rid for rid, s in assignment.items() if s is split}
    return [r for r in records if r.id in wanted]


def _report_imputed(records, sidecar):
    missing = missing_image_ids(records, sidecar)
    if missing:
        click.echo(f"imputed all-zero image features for {len(missing)} image id(s)", err=True)


@main.command()
@click.argument("records_path", type=click.Path(exists=False, path_type=Path))
@click.option("--image-features", "features_path", type=click.Path(path_type=Path), default=None)
@click.pass_context
@_guarded
def validate(ctx, records_path, features_path):
    """Check a records file (and optional sidecar coverage); exit 1 on violations."""
    violations = 0
    n_lines = 0
    records = []
    first_seen: dict[str, int] = {}
    try:
        fh = open(records_path, "r", encoding="utf-8")
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            n_lines += 1
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                click.echo(f"line {lineno}: malformed JSON: {exc.msg}")
                violations += 1
                continue
            problems = validate_record(obj)
            rid = obj.get("id") if isinstance(obj, dict) else None
            if isinstance(rid, str):
                if rid in first_seen:
                    problems = problems + [
                        f"duplicate id '{rid}' (first seen line {first_seen[rid]})"
                    ]
                else:
                    first_seen[rid] = lineno
            for problem in problems:
                click.echo(f"line {lineno}: {problem}")
                violations += 1
            if not problems:
                records.append(obj)
    if features_path is not None:
        sidecar = dataio.load_image_features(features_path)
        image_ids = [r["image_id"] for r in records]
        covered = sum(1 for iid in image_ids if iid in sidecar)
        fraction = covered / len(image_ids) if image_ids else 0.0
        click.echo(f"image-feature sidecar coverage: {covered}/{len(image_ids)} ({fraction:.1%})")
    if violations:
        click.echo(f"FAIL: {violations} violation(s) in {n_lines} line(s)")
        sys.exit(EXIT_VIOLATIONS)
    click.echo(f"OK: {n_lines} record(s) valid")


@main.command()
@click.option("--records", "records_path", required=True, type=click.Path(path_type=Path))
@click.pass_context
@_guarded
def stats(ctx, records_path):
    """Write the descriptive-statistics CSV bundle."""
    records = _load_records(ctx, records_path)
    out = _outdir(ctx)
    ks = [ctx.obj["threshold"]] if ctx.obj["threshold"] else [1, 2, 3, 4, 5]

    gtvs_by_k = {k: [agg.aggregate_ground_truth(r.annotations, k) for r in records] for k in ks}

    _write_csv(
        out / "label_frequency.csv",
        ["k", *REASON_CODES],
        [[k, *(float(v) for v in agg.label_frequency(gtvs_by_k[k]))] for k in ks],
    )
    _write_csv(
        out / "source_type.csv",
        ["k", "qi_only", "a_only", "both", "neither"],
        [
            [
                k,
                dist[agg.SourceType.QI_ONLY],
                dist[agg.SourceType.A_ONLY],
                dist[agg.SourceType.BOTH],
                dist[agg.SourceType.NEITHER],
            ]
            for k in ks
            for dist in [agg.source_type_distribution(gtvs_by_k[k])]
        ],
    )
    _write_csv(
        out / "unique_reasons.csv",
        ["k", "unique_reasons", "fraction"],
        [
            [k, count, float(frac)]
            for k in ks
            for count, frac in enumerate(agg.unique_reason_histogram(gtvs_by_k[k]))
        ],
    )
    _write_csv(
        out / "co_occurrence.csv",
        ["k", "d_i", *REASON_CODES],
        [
            [k, code, *row]
            for k in ks
            for code, row in zip(
                REASON_CODES, agreement.co_occurrence_matrix(gtvs_by_k[k], threshold=k).values
            )
        ],
    )
    _write_csv(
        out / "clarity.csv",
        ["k", *REASON_CODES],
        [[k, *(agreement.clarity(code, gtvs_by_k[k]) for code in REASON_CODES)] for k in ks],
    )
    _write_csv(
        out / "worker_wws.csv",
        ["worker_id", "pair_count", "mean_wws_common", "mean_wws_cosine", "mean_wws_kappa"],
        [
            [s.worker_id, s.pair_count, s.mean_common, s.mean_cosine, s.mean_kappa]
            for s in agreement.worker_summary(records)
        ],
    )
    click.echo(f"wrote statistics bundle to {out}")


@main.command()
@click.option("--records", "records_path", required=True, type=click.Path(path_type=Path))
@click.option("--image-features", "features_path", type=click.Path(path_type=Path), default=None)
@click.option("--mask", default="QIA", show_default=True)
@click.pass_context
@_guarded
def features(ctx, records_path, features_path, mask):
    """Write the per-record feature matrix as CSV."""
    records = _load_records(ctx, records_path)
    sidecar = dataio.load_image_features(features_path) if features_path else {}
    _report_imputed(records, sidecar)
    X = feature_matrix(records, sidecar, mask=mask)
    out = _outdir(ctx)
    _write_csv(
        out / "features.csv",
        ["id", *mask_feature_names(mask)],
        [[r.id, *(float(v) for v in row)] for r, row in zip(records, X)],
    )
    click.echo(f"wrote {out / 'features.csv'}")


def _model_from_options(model_kind, mask, seed, options):
    if model_kind == "forest":
        return ReasonForestClassifier(
            n_trees=options["n_trees"],
            max_depth=options["max_depth"],
            class_weight=options["class_weight"],
            features_per_split=options["features_per_split"],
            min_samples_split=options["min_samples_split"],
            seed=seed,
            mask=mask,
            n_jobs=options["n_jobs"],
        )
    return ReasonLinearClassifier(
        learning_rate=options["learning_rate"],
        epochs=options["epochs"],
        l2=options["l2"],
        seed=seed,
        mask=mask,
    )


@main.command()
@click.option("--records", "records_path", required=True, type=click.Path(path_type=Path))
@click.option("--image-features", "features_path", type=click.Path(path_type=Path), default=None)
@click.option("--split-manifest", type=click.Path(path_type=Path), default=None)
@click.option("--split-proportions", default="0.65,0.10,0.25", show_default=True)
@click.option("--model", "model_kind", type=click.Choice(["forest", "linear"]), default="forest",
              show_default=True)
@click.option("--mask", default="QIA", show_default=True)
@click.option("--n-trees", default=1000, show_default=True)
@click.option("--max-depth", default=20, show_default=True)
@click.option("--class-weight", type=click.Choice(["balanced", "uniform"]), default="balanced",
              show_default=True)
@click.option("--features-per-split", default="sqrt", show_default=True)
@click.option("--min-samples-split", default=2, show_default=True)
@click.option("--n-jobs", default=1, show_default=True)
@click.option("--learning-rate", default=0.05, show_default=True)
@click.option("--epochs", default=500, show_default=True)
@click.option("--l2", default=1e-4, show_default=True)
@click.pass_context
@_guarded
def train(ctx, records_path, features_path, split_manifest, split_proportions, model_kind,
          mask, **options):
    """Train a model on the train split and write model + log files."""
    seed = ctx.obj["seed"] if ctx.obj["seed"] is not None else 0
    k = ctx.obj["threshold"] if ctx.obj["threshold"] is not None else 2
    records = _load_records(ctx, records_path)
    sidecar = dataio.load_image_features(features_path) if features_path else {}
    assignment = _resolve_split(records, split_manifest, split_proportions, seed)
    train_records = _subset(records, assignment, dataio.Split.TRAIN)
    if not train_records:
        raise ValueError("train split is empty")
    _report_imputed(train_records, sidecar)

    fps = options["features_per_split"]
    if fps != "sqrt":
        options["features_per_split"] = int(fps)
    X = feature_matrix(train_records, sidecar, mask=mask)
    Y = agg.ground_truth_matrix(train_records, k)
    model = _model_from_options(model_kind, mask, seed, options)

    started = time.perf_counter()
    model.fit(X, Y)
    elapsed = time.perf_counter() - started

    out = _outdir(ctx)
    model_path = out / "model.json"
    save_model(model, model_path, feature_names=mask_feature_names(mask))
    log = {
        "model": model_kind,
        "mask": mask,
        "threshold": k,
        "seed": seed,
        "n_train": len(train_records),
        "per_label_positive_counts": {
            code: int(c) for code, c in zip(REASON_CODES, Y.sum(axis=0))
        },
        "params": model.get_params(),
    }
    with open(out / "train_log.json", "w", encoding="utf-8") as fh:
        json.dump(log, fh, indent=1, sort_keys=True)
        fh.write("\n")
    click.echo(f"trained {model_kind} ({mask}) on {len(train_records)} records "
               f"in {elapsed:.1f}s; wrote {model_path}")


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(path_type=Path))
@click.option("--records", "records_path", required=True, type=click.Path(path_type=Path))
@click.option("--image-features", "features_path", type=click.Path(path_type=Path), default=None)
@click.option("--split-manifest", type=click.Path(path_type=Path), default=None)
@click.option("--split-proportions", default="0.65,0.10,0.25", show_default=True)
@click.option("--relevance", "relevance_path", type=click.Path(path_type=Path), default=None)
@click.option("--baseline", "baselines", type=click.Choice(["random", "qi-relevance"]),
              multiple=True, default=("random",), show_default=True)
@click.option("--name", default=None, help="Model row name; defaults to kind+mask.")
@click.pass_context
@_guarded
def evaluate_cmd(ctx, model_path, records_path, features_path, split_manifest,
                 split_proportions, relevance_path, baselines, name):
    """Score the test split and write report + PR-curve files."""
    seed = ctx.obj["seed"] if ctx.obj["seed"] is not None else 0
    k = ctx.obj["threshold"] if ctx.obj["threshold"] is not None else 2
    model = load_model(model_path)
    records = _load_records(ctx, records_path)
    sidecar = dataio.load_image_features(features_path) if features_path else {}
    assignment = _resolve_split(records, split_manifest, split_proportions, seed)
    test_records = _subset(records, assignment, dataio.Split.TEST)
    if not test_records:
        raise ValueError("test split is empty")
    _report_imputed(test_records, sidecar)

    mask = model.mask or "QIA"
    X = feature_matrix(test_records, sidecar, mask=mask)
    G = agg.ground_truth_matrix(test_records, k)
    model_name = name or f"{type(model).__name__}:{mask}"
    rows = [
        (model_name, model.predict_proba(X)),
    ]

    baselines = set(baselines) | {"random"}
    if relevance_path is not None:
        baselines.add("qi-relevance")
    if "qi-relevance" in baselines and relevance_path is None:
        raise ValueError("--baseline qi-relevance requires --relevance sidecar")
    rows.append(("Random", random_scores(len(test_records), seed)))
    if "qi-relevance" in baselines:
        relevance = dataio.load_relevance_scores(relevance_path)
        ids = [r.id for r in test_records]
        rows.append(("QI-Relevance-Rule", relevance_rule_scores(ids, relevance, seed)))

    reports = [
        evaluate(S, G, model=row_name, mask=mask, split="test", threshold=k)
        for row_name, S in rows
    ]

    out = _outdir(ctx)
    with open(out / "report.json", "w", encoding="utf-8") as fh:
        json.dump({"reports": [r.to_dict() for r in reports]}, fh, indent=1, sort_keys=True)
        fh.write("\n")
    _write_csv(
        out / "report.csv",
        ["model", "mask", "split", "threshold", "n_test", "mean_ap", *REASON_CODES],
        [
            [r.model, r.mask, r.split, r.threshold, r.n_test, r.mean_ap, *r.per_label_ap]
            for r in reports
        ],
    )
    curve_rows = []
    for row_name, S in rows:
        for j, code in enumerate(REASON_CODES):
            if G[:, j].sum() == 0:
                continue
            curve = pr_curve(S[:, j], G[:, j])
            for thr, prec, rec in zip(curve.thresholds, curve.precisions, curve.recalls):
                curve_rows.append([row_name, code, thr, prec, rec])
    _write_csv(out / "pr_curves.csv", ["model", "label", "threshold", "precision", "recall"],
               curve_rows)
    for r in reports:
        click.echo(f"{r.model}: mean AP {_fmt(r.mean_ap)}")
    click.echo(f"wrote report bundle to {out}")


@main.command()
@click.option("--n", default=2000, show_default=True)
@click.option("--noise", default=0.1, show_default=True)
@click.option("--workers", "n_workers", default=25, show_default=True)
@click.pass_context
@_guarded
def synth(ctx, n, noise, n_workers):
    """Generate a seeded synthetic fixture with a truth manifest."""
    seed = ctx.obj["seed"] if ctx.obj["seed"] is not None else 7
    spec = SynthSpec(n=n, seed=seed, noise=noise, n_workers=n_workers)
    records, image_features, manifest = generate_fixture(spec)
    out = _outdir(ctx)
    dataio.dump_records(records, out / "records.jsonl")
    dataio.dump_image_features(image_features, out / "image_features.jsonl")
    with open(out / "truth_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")
    click.echo(f"wrote fixture ({n} records) to {out}")


@main.command()
@click.option("--labels", "labels_arg", required=True,
              help="Comma-separated reason codes, e.g. AMB,SYN.")
@_guarded
def route(labels_arg):
    """Print the resolution steps for a set of detected reasons."""
    codes = [c for c in (part.strip() for part in labels_arg.split(",")) if c]
    steps = route_resolutions(codes)
    for step_id in steps:
        click.echo(f"{step_id}\t{STEPS_BY_ID[step_id].description}")
    if not steps:
        click.echo("(no resolution steps)")


@main.command()
@click.argument("report_files", nargs=-1, required=True, type=click.Path(path_type=Path))
@click.option("--baseline", "baseline_model", default=None,
              help="Model name of the baseline row; defaults to the first report.")
@click.pass_context
@_guarded
def report(ctx, report_files, baseline_model):
    """Merge report files into a comparison table versus a baseline row."""
    reports: list[EvaluationReport] = []
    for path in report_files:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        for obj in doc["reports"]:
            reports.append(EvaluationReport.from_dict(obj))
    rows = compare(reports, baseline_model=baseline_model)
    out = _outdir(ctx)
    header = ["model", "mask", "overall", "overall_delta"]
    for code in REASON_CODES:
        header += [code, f"{code}_delta"]
    header.append("below_baseline")
    csv_rows = []
    for row in rows:
        csv_row = [row["model"], row["mask"], row["overall"], row["overall_delta"]]
        for code in REASON_CODES:
            csv_row += [row[code], row[f"{code}_delta"]]
        csv_row.append("|".join(row["below_baseline"]))
        csv_rows.append(csv_row)
    _write_csv(out / "comparison.csv", header, csv_rows)
    click.echo(f"wrote {out / 'comparison.csv'}")


main.add_command(evaluate_cmd, name="evaluate")


if __name__ == "__main__":
    main()
