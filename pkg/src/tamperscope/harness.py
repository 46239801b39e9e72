"""Batch execution: detector runs, scoring reports, corpus writing.

Everything here is engineered for reproducibility: work is parallelized
per image only (per-image float accumulation order never changes), outputs
are ordered by imageId, files are written atomically, and the report's run
id is a content hash, so a rerun at any parallelism degree produces
byte-identical artifacts.
"""

import hashlib
import json
import logging
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .dataset import IndexRow, read_index, write_index
from .detectors import DETECTORS, make_detector
from .errors import InvalidInputError, TamperscopeError, UndefinedScoreError
from .imaging.io import load_image, load_mask, save_heatmap_png, save_image, save_mask_png
from .scoring import (
    DEFAULT_KERNEL,
    ScoreRow,
    aggregate,
    auc,
    gwl1,
    no_score_weights,
    pristine_mask,
)
from .synth import _generate, corpus, corpus_digest

log = logging.getLogger(__name__)


def _atomic_write(path, data: bytes):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _sig6(value):
    """Round to 6 significant digits for stable JSON serialization."""
    return float(f"{float(value):.6g}")


def _content_run_id(payload):
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def heatmap_filename(image_id, algo):
    return f"{image_id}_{algo}.png"


# ---------------------------------------------------------------------------
# detect


def run_detect(index_path, algos, out_dir, jobs=1, detector_params=None):
    """Run detectors over an indexed dataset, writing one heatmap PNG per
    (image, detector) and a manifest.

    Undecodable or unsupported images are skipped and listed in the
    manifest rather than failing the run.  Returns the manifest dict.
    """
    rows = read_index(index_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    detector_params = detector_params or {}
    detectors = {name: make_detector(name, **detector_params.get(name, {})) for name in algos}

    def process(row: IndexRow):
        entry = {"id": row.image_id, "heatmaps": {}, "timings": {}}
        try:
            image = load_image(row.image_path)
        except (OSError, InvalidInputError) as exc:
            return row.image_id, None, f"decode failed: {exc}"
        error = None
        for name, det in detectors.items():
            started = time.perf_counter()
            try:
                heat = det.predict(image)
            except InvalidInputError as exc:
                error = f"{name}: {exc}"
                break
            fname = heatmap_filename(row.image_id, name)
            save_heatmap_png(out_dir / fname, heat)
            entry["heatmaps"][name] = fname
            entry["timings"][name] = round(time.perf_counter() - started, 4)
        if error:
            return row.image_id, None, error
        return row.image_id, entry, None

    results = {}
    skipped = []
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(process, rows))
    else:
        outcomes = [process(row) for row in rows]
    for image_id, entry, error in outcomes:
        if error is None:
            results[image_id] = entry
        else:
            skipped.append({"id": image_id, "reason": error})
            log.warning("skipping %s: %s", image_id, error)

    params_blob = {
        "algos": sorted(algos),
        "detectorParams": {k: dict(sorted(v.items())) for k, v in sorted(detector_params.items())},
    }
    manifest = {
        "runId": _content_run_id({"params": params_blob, "images": sorted(results)}),
        "version": __version__,
        "params": params_blob,
        "images": [results[image_id] for image_id in sorted(results)],
        "skipped": sorted(skipped, key=lambda s: s["id"]),
    }
    _atomic_write(out_dir / "manifest.json", (json.dumps(manifest, indent=2) + "\n").encode())
    return manifest


# ---------------------------------------------------------------------------
# score


def _algos_present(pred_dir, rows):
    found = set()
    names = {p.name for p in Path(pred_dir).glob("*.png")}
    for row in rows:
        for algo in DETECTORS:
            if heatmap_filename(row.image_id, algo) in names:
                found.add(algo)
    return sorted(found)


def score_pair(mask, heat, kernel=DEFAULT_KERNEL):
    """GWL1 and AUC for one (mask, heatmap) pair.

    When the evaluated manipulated region erodes to nothing (tiny masks,
    e.g. the pristine protocol's 10x10 square under the default kernel),
    the ROC curve is pinned at zero TPR; the AUC is reported as 0 under
    that convention rather than left undefined.
    """
    weights = no_score_weights(mask, kernel)
    g = gwl1(mask, heat, weights)
    try:
        a = auc(mask, heat, weights)
    except UndefinedScoreError:
        a = 0.0
    return g, a


def run_score(pred_dir, index_path, out_path, pristine=False, kernel=DEFAULT_KERNEL, jobs=1):
    """Score heatmaps against ground truth and write the report JSON.

    Masked rows are always scored; pristine rows are scored against the
    deterministic pristine-protocol mask when ``pristine`` is set and
    skipped otherwise.  Returns (report, errors).
    """
    rows = read_index(index_path)
    pred_dir = Path(pred_dir)
    algos = _algos_present(pred_dir, rows)
    if not algos:
        raise InvalidInputError(f"no heatmaps found in {pred_dir}")

    def score_row(row: IndexRow):
        row_scores, row_errors = [], []
        if row.pristine and not pristine:
            return row_scores, row_errors
        try:
            if row.pristine:
                mask = None  # sized per heatmap below
            else:
                mask = load_mask(row.mask_path)
        except (OSError, InvalidInputError) as exc:
            return row_scores, [{"id": row.image_id, "reason": f"mask: {exc}"}]
        for algo in algos:
            hm_path = pred_dir / heatmap_filename(row.image_id, algo)
            if not hm_path.is_file():
                row_errors.append({"id": row.image_id, "reason": f"missing heatmap for {algo}"})
                continue
            heat = load_image(hm_path) / 255.0
            target = mask
            if target is None:
                target = pristine_mask(heat.shape[1], heat.shape[0])
            try:
                g, a = score_pair(target, heat, kernel)
            except (TamperscopeError, InvalidInputError) as exc:
                row_errors.append({"id": row.image_id, "reason": f"{algo}: {exc}"})
                continue
            row_scores.append(ScoreRow(image_id=row.image_id, detector=algo, gwl1=g, auc=a))
        return row_scores, row_errors

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(score_row, rows))
    else:
        outcomes = [score_row(row) for row in rows]

    scores, errors = [], []
    for row_scores, row_errors in outcomes:
        scores.extend(row_scores)
        errors.extend(row_errors)
    if not scores:
        raise InvalidInputError("no rows could be scored")

    scores.sort(key=lambda r: (r.image_id, r.detector))
    per_image = [
        {
            "id": r.image_id,
            "detector": r.detector,
            "gwl1": _sig6(100.0 * r.gwl1),
            "auc": _sig6(100.0 * r.auc),
        }
        for r in scores
    ]
    agg = [
        {
            "detector": a.detector,
            "gwl1Mean": _sig6(100.0 * a.gwl1_mean),
            "gwl1Std": _sig6(100.0 * a.gwl1_std),
            "aucMean": _sig6(100.0 * a.auc_mean),
            "aucStd": _sig6(100.0 * a.auc_std),
        }
        for a in aggregate(scores)
    ]
    params = {
        "kernel": int(kernel),
        "pristineProtocol": bool(pristine),
        "detectors": algos,
    }
    report = {
        "runId": _content_run_id({"params": params, "perImage": per_image, "aggregate": agg}),
        "params": params,
        "perImage": per_image,
        "aggregate": agg,
    }
    if errors:
        report["errors"] = sorted(errors, key=lambda e: (e["id"], e["reason"]))
    _atomic_write(out_path, (json.dumps(report, indent=2) + "\n").encode())
    return report, errors


# ---------------------------------------------------------------------------
# synth


def write_corpus(template, n, seed, out_dir):
    """Materialize a corpus: images, masks, dataset index, metadata.

    Images whose post chain ends in a jpeg step are written as JPEG (the
    file encoding realizes that step); everything else is PNG.  Returns
    the corpus metadata dict.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    items = corpus(template, n, seed)
    rows = []
    for item in items:
        trailing_q = None
        if item.spec.post and "jpeg" in item.spec.post[-1]:
            trailing_q = int(item.spec.post[-1]["jpeg"])
        if trailing_q is not None:
            # re-derive the pre-encode payload so the file *is* the final step
            payload, mask, q = _generate(item.spec)
            image_name = f"{item.item_id}.jpg"
            save_image(out_dir / image_name, payload, jpeg_quality=q)
        else:
            image_name = f"{item.item_id}.png"
            save_image(out_dir / image_name, item.image)
        mask_name = None
        if not item.pristine:
            mask_name = f"{item.item_id}_mask.png"
            save_mask_png(out_dir / mask_name, item.mask)
        rows.append(
            IndexRow(
                image_id=item.item_id,
                image_path=str(out_dir / image_name),
                mask_path=str(out_dir / mask_name) if mask_name else None,
                pristine=item.pristine,
            )
        )
    write_index(out_dir / "index.csv", rows)
    metadata = {
        "digest": corpus_digest(items),
        "seed": int(seed),
        "n": int(n),
        "template": template.to_dict(),
        "items": [it.metadata() for it in items],
    }
    _atomic_write(out_dir / "corpus.json", (json.dumps(metadata, indent=2) + "\n").encode())
    return metadata
