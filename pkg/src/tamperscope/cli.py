"""Command line interface.

Subcommands: ``detect`` (batch heatmaps), ``score`` (GWL1/AUC report),
``synth`` (corpus generation), ``aen-loss`` (loss diagnostics).  The
TAMPERSCOPE_LOG environment variable selects the log level (debug, info,
warning, error).

Exit codes: 0 success, 1 partial success (items skipped or missing),
2 invalid input.
"""

import json
import logging
import os
import sys

import click
import numpy as np

from . import __version__
from .aen import LossWeights, enhancement_loss, mine_triplets
from .detectors import DETECTORS
from .errors import InvalidInputError, NoTripletsError, TamperscopeError
from .harness import run_detect, run_score, write_corpus
from .imaging.io import load_image, load_mask
from .scoring import DEFAULT_KERNEL
from .synth import SynthSpec


def _setup_logging():
    level = os.environ.get("TAMPERSCOPE_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


@click.group()
@click.version_option(__version__, prog_name="tamperscope")
def main():
    """Learning-free image forgery localization toolkit."""
    _setup_logging()


def _fail(message, code=2):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@main.command()
@click.option(
    "--algo",
    default="all",
    show_default=True,
    help="Detector to run: one of %s or 'all'." % "|".join(DETECTORS),
)
@click.option("--index", "index_path", required=True, type=click.Path(), help="Dataset index CSV.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Heatmap output directory.")
@click.option("--jobs", default=1, show_default=True, type=int, help="Parallel image workers.")
def detect(algo, index_path, out_dir, jobs):
    """Run detectors over an indexed dataset and write heatmap PNGs."""
    if algo == "all":
        algos = list(DETECTORS)
    elif algo in DETECTORS:
        algos = [algo]
    else:
        _fail(f"unknown algo {algo!r}; choose from {'|'.join(DETECTORS)} or 'all'")
    if jobs < 1:
        _fail("--jobs must be >= 1")
    try:
        manifest = run_detect(index_path, algos, out_dir, jobs=jobs)
    except (TamperscopeError, InvalidInputError) as exc:
        _fail(exc)
    except OSError as exc:
        _fail(f"cannot write outputs: {exc}")
    n_done = len(manifest["images"])
    n_skip = len(manifest["skipped"])
    click.echo(f"detect: {n_done} images x {len(algos)} detectors, {n_skip} skipped")
    if n_skip:
        sys.exit(1)


@main.command()
@click.option("--pred", "pred_dir", required=True, type=click.Path(), help="Heatmap directory.")
@click.option("--index", "index_path", required=True, type=click.Path(), help="Dataset index CSV.")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Report JSON path.")
@click.option("--pristine", is_flag=True, help="Score pristine rows against the 10x10 protocol mask.")
@click.option("--kernel", default=DEFAULT_KERNEL, show_default=True, type=int,
              help="No-score structuring element size (odd).")
@click.option("--jobs", default=1, show_default=True, type=int, help="Parallel score workers.")
def score(pred_dir, index_path, out_path, pristine, kernel, jobs):
    """Score predicted heatmaps against ground truth (GWL1 and AUC)."""
    if kernel < 1 or kernel % 2 == 0:
        _fail("--kernel must be an odd positive integer")
    try:
        report, errors = run_score(
            pred_dir, index_path, out_path, pristine=pristine, kernel=kernel, jobs=jobs
        )
    except (TamperscopeError, InvalidInputError) as exc:
        _fail(exc)
    for agg in report["aggregate"]:
        click.echo(
            "score: {detector}: GWL1 {gwl1Mean:.2f}% +- {gwl1Std:.2f}, "
            "AUC {aucMean:.2f}% +- {aucStd:.2f}".format(**agg)
        )
    if errors:
        click.echo(f"score: {len(errors)} rows had errors (see report)", err=True)
        sys.exit(1)


@main.command()
@click.option("--spec", "spec_path", required=True, type=click.Path(), help="SynthSpec JSON file.")
@click.option("--n", "n", required=True, type=int, help="Number of corpus items.")
@click.option("--seed", default=0, show_default=True, type=int, help="Corpus seed.")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Corpus output directory.")
def synth(spec_path, n, seed, out_dir):
    """Generate a synthetic corpus with ground-truth masks and an index."""
    try:
        with open(spec_path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        _fail(f"cannot read spec: {exc}")
    except json.JSONDecodeError as exc:
        _fail(f"spec is not valid JSON: {exc}")
    if n < 1:
        _fail("--n must be >= 1")
    try:
        template = SynthSpec.from_dict(data)
        metadata = write_corpus(template, n, seed, out_dir)
    except (TamperscopeError, InvalidInputError) as exc:
        _fail(exc)
    click.echo(f"synth: wrote {n} items to {out_dir} (digest {metadata['digest'][:12]})")


@main.command("aen-loss")
@click.option("--image", "image_path", required=True, type=click.Path(), help="Image file.")
@click.option("--mask", "mask_path", required=True, type=click.Path(), help="Ground-truth mask PNG.")
@click.option("--weights", default="1,1,1", show_default=True,
              help="Loss weights w0,w1,w2.")
@click.option("--patch-side", default=64, show_default=True, type=int)
@click.option("--count", default=32, show_default=True, type=int, help="Triplets to mine.")
@click.option("--seed", default=0, show_default=True, type=int)
def aen_loss(image_path, mask_path, weights, patch_side, count, seed):
    """Evaluate the anomaly-enhancement loss on mined triplets.

    Uses the identity reconstruction (enhanced = anchor) as the baseline,
    so the pixel term is 0 and the output reflects the embedding geometry
    of the mined patches.
    """
    try:
        parts = [float(v) for v in weights.split(",")]
        if len(parts) != 3:
            raise ValueError
        lw = LossWeights(*parts)
    except (ValueError, InvalidInputError):
        _fail(f"--weights must be three non-negative numbers w0,w1,w2, got {weights!r}")
    try:
        image = load_image(image_path)
        mask = load_mask(mask_path)
        batch = mine_triplets(image, mask, patch_side=patch_side, count=count, seed=seed)
    except (OSError, InvalidInputError) as exc:
        _fail(exc)
    except NoTripletsError as exc:
        _fail(f"no triplets: {exc}")
    values = [enhancement_loss(a, a, p, n, lw) for a, p, n in batch]
    out = {
        "triplets": len(batch),
        "weights": {"w0": lw.w0, "w1": lw.w1, "w2": lw.w2},
        "loss": {
            "mean": float(np.mean(values)),
            "min": float(np.min(values)),
            "max": float(np.max(values)),
        },
    }
    click.echo(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
