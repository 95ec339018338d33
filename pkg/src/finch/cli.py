"""Batch entry points: explain chains, generate fixtures, compare against
mutation-based curves, and serve the HTTP API.

Outputs are single self-describing JSON documents (schema in docs/), written
atomically (temp file + rename) so a failing run never leaves a partial file.
Identical inputs and flags produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

import numpy as np

from .config import EngineConfig, load_config
from .curves import align_curves, classic_pdp_oracle, compute_curve
from .effects import SCORE_KINDS, interaction_series, main_effect, rank_next_features
from .errors import FinchError, SchemaError
from .payload import ViewOptions, build_view_payload, dump_payload, ranking_payload
from .session import SessionStore
from .subsets import extend_chain, new_chain
from .synth import (
    DEFAULT_LEVELS,
    PREDICTION_COLUMN,
    TRUTH_COLUMN,
    builtin_function,
    generate,
    load_meta,
    meta_path,
    parse_polynomial,
    spec_from_meta,
    to_csv,
)
from .tabular import (
    Dataset,
    InstanceVector,
    TargetSpec,
    impute_instance,
    instance_from_row,
    load_table,
    resolve_target,
)


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".finch-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read_schema(path: str | None, data_path: str) -> dict[str, str]:
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            schema = json.load(fh)
        if not isinstance(schema, dict):
            raise SchemaError(f"schema file {path} must contain a JSON object")
        return {str(k): str(v) for k, v in schema.items()}
    # No schema: recognise the synthetic-table convention.
    with open(data_path, "r", encoding="utf-8-sig") as fh:
        first_line = fh.readline()
    header = [h.strip() for h in next(csv.reader(io.StringIO(first_line)))]
    schema = {}
    if PREDICTION_COLUMN in header:
        schema[PREDICTION_COLUMN] = "prediction"
    if TRUTH_COLUMN in header:
        schema[TRUTH_COLUMN] = "truth"
    if "prediction" not in schema.values():
        raise SchemaError(
            "no --schema given and the table has no 'prediction' column; "
            "pass a schema file mapping columns to roles"
        )
    return schema


def _parse_instance_values(text: str) -> dict[str, float]:
    values = {}
    for pair in text.split(","):
        pair = pair.strip()
        if not pair:
            continue
        if "=" not in pair:
            raise ValueError(f"bad instance value {pair!r}; expected name=value")
        name, raw = pair.split("=", 1)
        values[name.strip()] = float(raw)
    return values


def _make_instance(ds: Dataset, args) -> InstanceVector:
    if args.instance_row is not None:
        return instance_from_row(ds, args.instance_row)
    if args.instance_values:
        return impute_instance(_parse_instance_values(args.instance_values), ds)
    return impute_instance({}, ds)


def _resolve_cli_target(ds: Dataset, args):
    mode = args.target
    if mode == "classification":
        spec = TargetSpec(mode="classification", class_label=args.class_label)
    else:
        spec = TargetSpec(mode="regression")
    return resolve_target(ds, spec)


def cmd_explain(args, cfg: EngineConfig) -> int:
    schema = _read_schema(args.schema, args.data)
    ds = load_table(args.data, schema, cfg)
    target = _resolve_cli_target(ds, args)
    inst = _make_instance(ds, args)

    chain_feats = [f.strip() for f in (args.chain or "").split(",") if f.strip()]
    chain = new_chain(ds, args.x, inst, cfg)
    column = np.asarray(target.values)
    steps = []
    for feat in chain_feats:
        chain = extend_chain(chain, feat)
        prev = compute_curve(
            ds, chain.steps[-2].row_indices, chain.x_feature, column, smoothing=False, config=cfg
        )
        cur = compute_curve(
            ds, chain.current.row_indices, chain.x_feature, column, smoothing=False, config=cfg
        )
        bundle = align_curves([prev, cur], ds.feature(chain.x_feature).kind, center=target.mean)
        a = main_effect(ds, feat, inst, column, cfg)
        dec = interaction_series(bundle, a, feat, inst.value_of(ds, chain.x_feature))
        steps.append(
            {
                "feature": feat,
                "main_effect": dec.main_effect,
                "interaction": dec.interaction,
                "instance_x_score": dec.instance_x_score,
                "grid": dec.grid,
                "subset_size": chain.current.size,
            }
        )

    view = ViewOptions(
        highlight_mode=args.highlight,
        smoothing_enabled=not args.no_smoothing,
        show_truth=args.show_truth,
        show_uncertainty=args.show_uncertainty,
        show_interaction=args.show_interaction,
    )
    payload = build_view_payload(ds, target, chain, view, cfg)

    ranking = None
    if args.rank:
        ranking = ranking_payload(
            rank_next_features(
                ds, chain, inst, column, args.rank_kind, workers=args.workers, config=cfg
            )
        )

    document = {"payload": payload, "steps": steps, "ranking": ranking}
    _atomic_write(args.out, dump_payload(document))
    return 0


def cmd_synth(args, cfg: EngineConfig) -> int:
    names = tuple(f.strip() for f in args.features.split(",") if f.strip())
    if len(names) < 1:
        raise ValueError("--features needs at least one name")
    if args.function == "custom-polynomial":
        if not args.poly:
            raise ValueError("custom-polynomial needs --poly, e.g. 'x:1,z:1,x*z:0.5'")
        spec = parse_polynomial(args.poly, names)
    else:
        spec = builtin_function(args.function, names)
    quantize = None
    if args.quantize is not None:
        quantize = tuple(f.strip() for f in args.quantize.split(",") if f.strip())
    table = generate(
        spec,
        n=args.n,
        seed=args.seed,
        levels=args.levels,
        quantize=quantize,
        correlated_noise=args.correlated,
    )
    _atomic_write(args.out, to_csv(table).encode("utf-8"))
    _atomic_write(
        meta_path(args.out),
        (json.dumps(table.meta, sort_keys=True, indent=2) + "\n").encode("utf-8"),
    )
    return 0


def cmd_pdp_compare(args, cfg: EngineConfig) -> int:
    meta = load_meta(args.data)
    if meta is None:
        raise FinchError(
            f"{args.data} has no {meta_path(args.data)} sidecar: the mutation-based "
            "comparison needs the generating function, so it only works on synthetic tables"
        )
    spec = spec_from_meta(meta)
    schema = {meta["prediction_column"]: "prediction", meta["truth_column"]: "truth"}
    ds = load_table(args.data, schema, cfg)
    column = np.asarray(ds.predictions[meta["prediction_column"]])
    engine = compute_curve(
        ds, np.arange(ds.n_rows), args.feature, column, smoothing=False, config=cfg
    )
    predict = spec.predictor(ds.feature_names)
    pdp = classic_pdp_oracle(ds, predict, args.feature, engine.x)
    gap = float(np.abs(engine.mean - pdp.mean).max())
    document = {
        "feature": args.feature,
        "grid": engine.x,
        "engine_mean": engine.mean,
        "engine_count": engine.count,
        "pdp_mean": pdp.mean,
        "max_abs_gap": gap,
        "function": meta["function"],
        "correlated_noise": meta.get("correlated_noise"),
    }
    _atomic_write(args.out, dump_payload(document))
    print(f"max abs gap between subset curve and mutation-based curve: {gap:.6f}")
    return 0


def cmd_serve(args, cfg: EngineConfig) -> int:
    import uvicorn

    from .service import create_app

    store = SessionStore(cfg)
    if args.data_dir:
        for name in sorted(os.listdir(args.data_dir)):
            if not name.endswith(".csv"):
                continue
            csv_path = os.path.join(args.data_dir, name)
            schema_path = os.path.join(args.data_dir, name[:-4] + ".schema.json")
            if os.path.exists(schema_path):
                with open(schema_path, "r", encoding="utf-8") as fh:
                    schema = json.load(fh)
            else:
                schema = _read_schema(None, csv_path)
            ds = load_table(csv_path, schema, cfg)
            store.add_dataset(ds, dataset_id=name[:-4])
    app = create_app(store, cfg)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finch",
        description="Instance-level dependence curves over real data subsets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("explain", help="compute a subset chain and write the view payload")
    p.add_argument("--data", required=True, help="CSV table with a header row")
    p.add_argument("--schema", help="JSON file mapping columns to roles")
    p.add_argument("--x", required=True, help="x-axis feature")
    p.add_argument("--chain", default="", help="comma-separated conditioning features")
    p.add_argument("--instance-row", type=int, help="use this dataset row as the instance")
    p.add_argument("--instance-values", help="custom instance, e.g. 'age=30,sex=1'")
    p.add_argument("--target", choices=["regression", "classification"], default="regression")
    p.add_argument("--class", dest="class_label", help="class label for classification targets")
    p.add_argument("--no-smoothing", action="store_true")
    p.add_argument("--highlight", help="highlight mode override")
    p.add_argument("--show-truth", action="store_true")
    p.add_argument("--show-uncertainty", action="store_true")
    p.add_argument("--show-interaction", action="store_true")
    p.add_argument("--rank", action="store_true", help="rank remaining candidate features")
    p.add_argument("--rank-kind", choices=list(SCORE_KINDS), default=SCORE_KINDS[0])
    p.add_argument("--workers", type=int, default=1, help="threads for candidate ranking")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("synth", help="write a seeded synthetic table with known function")
    p.add_argument(
        "--function",
        choices=["constant", "additive", "product", "custom-polynomial"],
        required=True,
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--features", default="x,z", help="comma-separated feature names")
    p.add_argument("--poly", help="custom polynomial, e.g. 'x:1,z:1,x*z:0.5'")
    p.add_argument("--levels", type=int, default=DEFAULT_LEVELS, help="0 = keep continuous")
    p.add_argument("--quantize", help="only quantize these features (comma list)")
    p.add_argument("--correlated", type=float, help="tie z to x with this noise sd")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pdp-compare", help="subset curve vs mutation-based curve")
    p.add_argument("--data", required=True, help="synthetic CSV written by `finch synth`")
    p.add_argument("--feature", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pdp_compare)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--data-dir", help="preload every CSV (+ .schema.json) in this directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8433)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config()
        return args.func(args, cfg)
    except (FinchError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"finch {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
