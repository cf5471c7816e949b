"""Command-line surface: dataset tooling, offline evaluation, fixture
authoring, and service launchers.

Commands are thin shells over the library modules; anything they print is
computed by the same code paths the services use.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import click

from paddydx.augment.annotations import (
    ManifestRow,
    read_annotation_file,
    read_manifest,
    write_annotation_file,
    write_manifest,
)
from paddydx.augment.split import split_dataset
from paddydx.augment.transforms import (
    AnnotatedImage,
    AugmentConfig,
    apply_transform,
    random_transform,
)
from paddydx.core.image import decode_image, encode_png
from paddydx.core.taxonomy import CLASSES, NUM_CLASSES, class_index
from paddydx.errors import InvalidInput, PaddydxError, Refused
from paddydx.inference.backends import ClassificationResult
from paddydx.inference.fixtures import FixtureStore
from paddydx.metrics.classification import classification_report, confusion, cross_entropy
from paddydx.metrics.detection import detection_report

IMAGE_EXTS = {".jpg", ".jpeg", ".png"}


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(str(exc))


def _load_augment_config(path: str | None, seed: int | None) -> AugmentConfig:
    kwargs: dict = {}
    if path:
        doc = json.loads(Path(path).read_text("utf-8"))
        for key in (
            "rotation_range",
            "brightness_range",
            "shear_range",
            "flip_probabilities",
        ):
            if key in doc:
                kwargs[key] = tuple(doc[key])
        for key in ("min_visibility", "seed"):
            if key in doc:
                kwargs[key] = doc[key]
    if seed is not None:
        kwargs["seed"] = seed
    return AugmentConfig(**kwargs)


@click.group()
@click.option("--seed", type=int, default=None, help="Global RNG seed.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file (augmentation ranges, seed).")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx, seed, config_path, as_json):
    """paddydx: paddy-disease diagnosis platform tooling."""
    ctx.obj = {"seed": seed, "config": config_path, "json": as_json}


# ---------------------------------------------------------------- dataset --

@main.group()
def dataset():
    """Dataset statistics, splitting, and augmentation."""


@dataset.command("stats")
@click.argument("dataset_dir", type=click.Path(exists=True, file_okay=False))
def cmd_stats(dataset_dir):
    """Per-class image counts for a directory-per-class dataset tree."""
    root = Path(dataset_dir)
    known = {c.slug for c in CLASSES}
    counts = {c.slug: 0 for c in CLASSES}
    unrecognized = []
    for child in sorted(root.iterdir()):
        if not child.is_dir():
            continue
        n = sum(1 for p in child.iterdir() if p.suffix.lower() in IMAGE_EXTS)
        if child.name in known:
            counts[child.name] = n
        else:
            unrecognized.append((child.name, n))
    width = max(len(s) for s in [*counts, "total"])
    total = 0
    for c in CLASSES:
        if counts[c.slug]:
            click.echo(f"{c.slug.ljust(width)}  {counts[c.slug]}")
            total += counts[c.slug]
    click.echo(f"{'total'.ljust(width)}  {total}")
    for name, n in unrecognized:
        click.echo(f"warning: unrecognized class directory {name!r} ({n} files)", err=True)


def _manifest_from_dir(images_dir: Path) -> list[ManifestRow]:
    rows = []
    for child in sorted(images_dir.iterdir()):
        if not child.is_dir():
            continue
        slug = child.name if child.name in {c.slug for c in CLASSES} else ""
        for p in sorted(child.iterdir()):
            if p.suffix.lower() in IMAGE_EXTS:
                rows.append(
                    ManifestRow(
                        id=f"{child.name}__{p.stem}",
                        path=str(p.relative_to(images_dir)),
                        class_slug=slug,
                    )
                )
    return rows


@dataset.command("split")
@click.option("--manifest", "manifest_path", type=click.Path(exists=True), default=None)
@click.option("--images-dir", type=click.Path(exists=True, file_okay=False), default=None,
              help="Build the manifest from a directory-per-class tree.")
@click.option("--ratio", type=float, default=0.8, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
@click.pass_context
def cmd_split(ctx, manifest_path, images_dir, ratio, out_path):
    """Assign train/test splits with a seeded shuffle."""
    seed = ctx.obj.get("seed") or 0
    try:
        if manifest_path:
            rows = read_manifest(manifest_path)
        elif images_dir:
            rows = _manifest_from_dir(Path(images_dir))
        else:
            raise InvalidInput("provide --manifest or --images-dir")
        manifest = split_dataset([r.id for r in rows], ratio=ratio, seed=seed)
        train = set(manifest.train)
        out_rows = [
            ManifestRow(r.id, r.path, r.class_slug, "train" if r.id in train else "test")
            for r in rows
        ]
        write_manifest(out_path, out_rows)
        click.echo(f"{len(manifest.train)} train / {len(manifest.test)} test -> {out_path}")
    except PaddydxError as exc:
        raise _fail(exc)


@dataset.command("augment")
@click.option("--manifest", "manifest_path", type=click.Path(exists=True), required=True)
@click.option("--out-dir", type=click.Path(), required=True)
@click.option("--multiplier", type=int, default=1, show_default=True)
@click.pass_context
def cmd_augment(ctx, manifest_path, out_dir, multiplier):
    """Emit augmented variants of every train item (test items untouched)."""
    if multiplier < 1:
        raise _fail(InvalidInput("multiplier must be >= 1"))
    try:
        rows = read_manifest(manifest_path)
        if any(not r.split for r in rows):
            raise Refused("manifest has unsplit rows; run 'dataset split' first")
        config = _load_augment_config(ctx.obj.get("config"), ctx.obj.get("seed"))
        base = Path(manifest_path).parent
        out = Path(out_dir)
        (out / "images").mkdir(parents=True, exist_ok=True)
        new_rows = list(rows)
        produced = 0
        for i, row in enumerate(rows):
            if row.split != "train":
                continue
            image_path = base / row.path
            image = decode_image(image_path.read_bytes())
            ann_path = image_path.with_suffix(".txt")
            boxes = read_annotation_file(ann_path) if ann_path.exists() else ()
            ann = AnnotatedImage(image=image, boxes=tuple(boxes))
            safe_id = row.id.replace("/", "__")
            for k in range(multiplier):
                spec = random_transform(config, i * multiplier + k)
                result = apply_transform(ann, spec, config.min_visibility)
                stem = f"{safe_id}_aug{k}"
                (out / "images" / f"{stem}.png").write_bytes(encode_png(result.image))
                if ann_path.exists():
                    write_annotation_file(out / "images" / f"{stem}.txt", result.boxes)
                new_rows.append(
                    ManifestRow(
                        id=f"{row.id}_aug{k}",
                        path=str(Path("images") / f"{stem}.png"),
                        class_slug=row.class_slug,
                        split="train",
                    )
                )
                produced += 1
        write_manifest(out / "manifest.csv", new_rows)
        click.echo(f"wrote {produced} augmented items -> {out}")
    except PaddydxError as exc:
        raise _fail(exc)


# ---------------------------------------------------------------- eval --

@main.group("eval")
def eval_group():
    """Offline evaluation producing report tables."""


def _read_classification_preds(path: Path) -> dict[str, list[float]]:
    preds = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        expected = ["id"] + [f"prob_{i}" for i in range(NUM_CLASSES)]
        missing = set(expected) - set(reader.fieldnames or ())
        if missing:
            raise InvalidInput(f"{path}: missing columns {sorted(missing)}")
        for lineno, rec in enumerate(reader, start=2):
            try:
                preds[rec["id"]] = [float(rec[f"prob_{i}"]) for i in range(NUM_CLASSES)]
            except ValueError as exc:
                raise InvalidInput(f"{path}:{lineno}: {exc}") from None
    return preds


def _read_labels(path: Path) -> dict[str, int]:
    labels = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if not {"id", "label"} <= set(reader.fieldnames or ()):
            raise InvalidInput(f"{path}: expected columns id,label")
        for lineno, rec in enumerate(reader, start=2):
            raw = rec["label"]
            try:
                labels[rec["id"]] = int(raw) if raw.isdigit() else class_index(raw)
            except PaddydxError as exc:
                raise InvalidInput(f"{path}:{lineno}: {exc}") from None
    return labels


@eval_group.command("classify")
@click.argument("preds_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("labels_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def cmd_eval_classify(ctx, preds_file, labels_file):
    """Report accuracy / per-class P-R-F1 / loss from prediction CSVs."""
    try:
        preds = _read_classification_preds(Path(preds_file))
        labels = _read_labels(Path(labels_file))
        missing = sorted(set(labels) - set(preds))
        if missing:
            raise InvalidInput(f"predictions missing for ids: {missing[:5]}")
        ids = sorted(labels)
        prob_rows = [preds[i] for i in ids]
        y = [labels[i] for i in ids]
        loss = cross_entropy(prob_rows, y)
        top = [max(range(NUM_CLASSES), key=lambda c: row[c]) for row in prob_rows]
        cm = confusion(top, y, NUM_CLASSES)
        report = classification_report(cm, labels=[c.slug for c in CLASSES])
        report = type(report)(
            columns=report.columns,
            rows=report.rows,
            metadata={**report.metadata, "cross_entropy": loss},
        )
        click.echo(report.to_json() if ctx.obj.get("json") else report.render_text(), nl=False)
    except PaddydxError as exc:
        raise _fail(exc)


def _parse_detection_file(path: Path, with_conf: bool):
    rows = []
    for lineno, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        want = 6 if with_conf else 5
        if len(parts) != want:
            raise InvalidInput(f"{path}:{lineno}: expected {want} fields, got {len(parts)}")
        try:
            cls = int(parts[0])
            nums = [float(p) for p in parts[1:]]
        except ValueError as exc:
            raise InvalidInput(f"{path}:{lineno}: {exc}") from None
        from paddydx.core.geometry import NormalizedBox

        try:
            if with_conf:
                rows.append((cls, nums[0], NormalizedBox(*nums[1:])))
            else:
                rows.append((cls, NormalizedBox(*nums)))
        except PaddydxError as exc:
            raise InvalidInput(f"{path}:{lineno}: {exc}") from None
    return rows


@eval_group.command("detect")
@click.argument("preds_dir", type=click.Path(exists=True, file_okay=False))
@click.argument("gts_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--conf-cutoff", type=float, default=None,
              help="Operating-point confidence for box precision/recall "
                   "(AP always sweeps all predictions).")
@click.pass_context
def cmd_eval_detect(ctx, preds_dir, gts_dir, conf_cutoff):
    """Report box precision / box recall / mAP50 from per-image text files."""
    try:
        preds_dir, gts_dir = Path(preds_dir), Path(gts_dir)
        stems = sorted(
            {p.stem for p in preds_dir.glob("*.txt")} | {p.stem for p in gts_dir.glob("*.txt")}
        )
        preds_by_image, gts_by_image = [], []
        for stem in stems:
            pred_path = preds_dir / f"{stem}.txt"
            gt_path = gts_dir / f"{stem}.txt"
            preds_by_image.append(
                _parse_detection_file(pred_path, with_conf=True) if pred_path.exists() else []
            )
            gts_by_image.append(
                _parse_detection_file(gt_path, with_conf=False) if gt_path.exists() else []
            )
        report = detection_report(preds_by_image, gts_by_image, conf_cutoff=conf_cutoff)
        click.echo(report.to_json() if ctx.obj.get("json") else report.render_text(), nl=False)
    except PaddydxError as exc:
        raise _fail(exc)


# ---------------------------------------------------------------- fixtures --

@main.group()
def fixtures():
    """Author fixture stores for deterministic backends."""


@fixtures.command("make")
@click.argument("images_dir", type=click.Path(exists=True, file_okay=False))
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--out", "out_path", type=click.Path(), required=True)
def cmd_fixtures(images_dir, spec_file, out_path):
    """Digest images and write their canned outputs as a fixture store."""
    try:
        entries = json.loads(Path(spec_file).read_text("utf-8"))
        if not isinstance(entries, list):
            raise InvalidInput("fixture spec must be a JSON array")
        import hashlib

        doc: dict = {"classify": {}, "detect": {}}
        for entry in entries:
            image_path = Path(images_dir) / entry["image"]
            if not image_path.exists():
                raise InvalidInput(f"fixture spec references missing image {entry['image']!r}")
            digest = hashlib.sha256(image_path.read_bytes()).hexdigest()
            if "probs" in entry:
                ClassificationResult.from_probs(entry["probs"])  # validates sum/argmax
                doc["classify"][digest] = {"probs": [float(p) for p in entry["probs"]]}
            if "detections" in entry:
                doc["detect"][digest] = entry["detections"]
        store = FixtureStore.from_dict(doc)  # validates boxes and class ranges
        store.save(out_path)
        click.echo(
            f"wrote {len(store.classify_map)} classify + {len(store.detect_map)} detect "
            f"fixtures -> {out_path}"
        )
    except PaddydxError as exc:
        raise _fail(exc)


# ---------------------------------------------------------------- serve --

@main.group()
def serve():
    """Run platform services."""


def _build_backend_factory(backend: str, fixtures_path: str | None):
    from paddydx.inference.fixtures import FixtureBackend
    from paddydx.inference.heuristic import HeuristicBackend

    if backend == "heuristic":
        return lambda: HeuristicBackend()
    if backend == "fixture":
        if not fixtures_path:
            raise InvalidInput("--fixtures PATH is required for the fixture backend")
        store = FixtureStore.load(fixtures_path)
        return lambda: FixtureBackend(store)
    raise InvalidInput(f"unknown backend: {backend!r}")


@serve.command("gateway")
@click.option("--host", default=lambda: os.getenv("PADDYDX_HOST", "127.0.0.1"))
@click.option("--port", type=int, default=lambda: int(os.getenv("PADDYDX_PORT", "8077")))
@click.option("--data-dir", type=click.Path(),
              default=lambda: os.getenv("PADDYDX_DATA_DIR", "./paddydx-data"))
@click.option("--token-ttl", type=float,
              default=lambda: float(os.getenv("PADDYDX_TOKEN_TTL", str(24 * 3600.0))))
@click.option("--durable/--no-durable",
              default=lambda: os.getenv("PADDYDX_DURABLE", "0") == "1")
@click.option("--max-deliveries", type=int,
              default=lambda: int(os.getenv("PADDYDX_MAX_DELIVERIES", "5")))
@click.option("--treatments", "treatments_path", type=click.Path(exists=True),
              default=lambda: os.getenv("PADDYDX_TREATMENTS") or None,
              help="Treatment KB JSON (defaults to the bundled one).")
@click.option("--classification-workers", type=int, default=0)
@click.option("--detection-workers", type=int, default=0)
@click.option("--backend", default="heuristic", show_default=True)
@click.option("--fixtures", "fixtures_path", type=click.Path(exists=True), default=None)
def cmd_serve_gateway(host, port, data_dir, token_ttl, durable, max_deliveries,
                      treatments_path, classification_workers, detection_workers,
                      backend, fixtures_path):
    """Run the gateway (optionally with an in-process worker pool)."""
    import uvicorn

    from paddydx.broker.queue import Broker
    from paddydx.core.treatments import load_kb
    from paddydx.gateway.http import create_app
    from paddydx.gateway.service import GatewayConfig, GatewayService
    from paddydx.orchestrator.master import BackendRegistry, MasterConfig, start_master

    try:
        data_dir = Path(data_dir)
        journal = data_dir / "broker.journal" if durable else None
        broker = Broker(max_deliveries=max_deliveries, journal_path=journal)
        service = GatewayService(
            GatewayConfig(data_dir=data_dir, token_ttl_seconds=token_ttl,
                          durable_queues=durable),
            broker,
            kb=load_kb(treatments_path) if treatments_path else None,
        )
        service.start_consumers()
        master = None
        pools = {"classification": classification_workers, "detection": detection_workers}
        if any(pools.values()):
            registry = BackendRegistry()
            registry.register(backend, _build_backend_factory(backend, fixtures_path))
            master = start_master(
                broker,
                registry,
                service.blobs,
                MasterConfig(
                    pool_sizes={k: v for k, v in pools.items() if v},
                    backend_ids={k: backend for k, v in pools.items() if v},
                ),
            )
        click.echo(f"gateway listening on http://{host}:{port} (data: {data_dir})")
        try:
            uvicorn.run(create_app(service), host=host, port=port, log_level="warning")
        finally:
            if master is not None:
                master.stop()
            service.stop()
    except PaddydxError as exc:
        raise _fail(exc)


@serve.command("worker")
@click.option("--kind", type=click.Choice(["classification", "detection"]), required=True)
@click.option("--backend", default="heuristic", show_default=True)
@click.option("--fixtures", "fixtures_path", type=click.Path(exists=True), default=None)
@click.option("--gateway-url",
              default=lambda: os.getenv("PADDYDX_GATEWAY_URL", "http://127.0.0.1:8077"))
@click.option("--lease-seconds", type=float,
              default=lambda: float(os.getenv("PADDYDX_LEASE_SECONDS", "30")))
def cmd_serve_worker(kind, backend, fixtures_path, gateway_url, lease_seconds):
    """Run one worker against a remote gateway's broker."""
    import time as _time

    from paddydx.broker.clock import MonotonicClock
    from paddydx.gateway.remote import RemoteBlobs, RemoteBroker
    from paddydx.messages import JOB_QUEUES, RESULTS_QUEUE
    from paddydx.orchestrator.worker import Worker, WorkerSpec

    try:
        factory = _build_backend_factory(backend, fixtures_path)
        broker = RemoteBroker(gateway_url)
        spec = WorkerSpec(
            task_kind=kind,
            backend_id=backend,
            queue_in=JOB_QUEUES[kind],
            queue_out=RESULTS_QUEUE,
        )
        worker = Worker(
            spec,
            broker,
            factory(),
            RemoteBlobs(gateway_url),
            heartbeat=lambda _id, _now: None,
            clock=MonotonicClock(),
            lease_duration=lease_seconds,
            poll_timeout=1.0,
        )
        worker.start()
        click.echo(f"worker {worker.worker_id} consuming {spec.queue_in} via {gateway_url}")
        try:
            while worker.alive:
                _time.sleep(0.5)
        except KeyboardInterrupt:
            worker.stop()
            worker.join(timeout=10.0)
    except PaddydxError as exc:
        raise _fail(exc)


if __name__ == "__main__":
    main()
