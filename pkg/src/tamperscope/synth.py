"""Seeded synthetic forgery generator with exact ground-truth masks.

Every item is fully determined by its spec (content kind, forgery op,
region, post chain, seed), so corpora regenerate bit-identically and
detector acceptance suites need no external datasets.  Global post-chain
steps (recompression, resizing) apply to the whole image and never enlarge
the mask; a resize rescales the mask with nearest-neighbor resampling to
keep it binary.
"""

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import SpecError
from .imaging.bayer import bilinear_demosaic, mosaic_from_rgb
from .imaging.io import jpeg_roundtrip
from .imaging.ops import gaussian_blur, resize_image

BASE_KINDS = ("gradient", "texture", "demosaiced", "noise-over-smooth")
FORGERY_OPS = ("splice", "copy-move", "blur-region", "noise-region", "grid-shift-region", "none")

# Texture defaults: a 1/f^1.4 Gaussian field under a smooth lognormal
# envelope.  The scale mixing makes the DCT band statistics leptokurtic
# the way natural content is, which the kurtosis-based detector requires.
_TEXTURE_STD = 20.0
_TEXTURE_ALPHA = 1.4
_TEXTURE_ENV_SIGMA = 1.3
_TEXTURE_ENV_SCALE = 12.0


@dataclass
class SynthSpec:
    """Recipe for one synthetic image."""

    width: int = 512
    height: int = 512
    base: str = "texture"
    op: str = "none"
    region: tuple | None = None  # (x, y, w, h); sampled per item when None
    op_params: dict = field(default_factory=dict)
    base_params: dict = field(default_factory=dict)
    post: list = field(default_factory=list)  # [{"jpeg": q} | {"resize": f}]
    seed: int = 0

    def validate(self):
        if self.width < 64 or self.height < 64:
            raise SpecError("width/height", "frame must be at least 64x64")
        if self.base not in BASE_KINDS:
            raise SpecError("base", f"unknown kind {self.base!r}; choose from {BASE_KINDS}")
        if self.op not in FORGERY_OPS:
            raise SpecError("op", f"unknown op {self.op!r}; choose from {FORGERY_OPS}")
        if self.op != "none" and self.region is not None:
            x, y, w, h = self.region
            if w < 1 or h < 1:
                raise SpecError("region", "region must have positive size")
            if x < 0 or y < 0 or x + w > self.width or y + h > self.height:
                raise SpecError(
                    "region",
                    f"({x},{y},{w},{h}) extends outside the {self.width}x{self.height} frame",
                )
        if len(self.post) > 4:
            raise SpecError("post", "post chain longer than 4 steps")
        for step in self.post:
            if not isinstance(step, dict) or len(step) != 1:
                raise SpecError("post", f"malformed step {step!r}")
            key = next(iter(step))
            if key == "jpeg":
                if not 1 <= int(step[key]) <= 100:
                    raise SpecError("post", f"jpeg quality {step[key]} outside 1..100")
            elif key == "resize":
                if not 0.1 <= float(step[key]) <= 4.0:
                    raise SpecError("post", f"resize factor {step[key]} outside 0.1..4.0")
            else:
                raise SpecError("post", f"unknown step kind {key!r}")
        return self

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise SpecError("spec", "expected a JSON object")
        known = {
            "width", "height", "base", "op", "region",
            "op_params", "base_params", "post", "seed",
        }
        unknown = set(data) - known
        if unknown:
            raise SpecError(sorted(unknown)[0], "unknown field")
        region = data.get("region")
        if region is not None:
            if isinstance(region, dict):
                try:
                    region = (region["x"], region["y"], region["width"], region["height"])
                except KeyError as exc:
                    raise SpecError("region", f"missing key {exc.args[0]!r}") from None
            region = tuple(int(v) for v in region)
            if len(region) != 4:
                raise SpecError("region", "expected [x, y, width, height]")
        spec = cls(
            width=int(data.get("width", 512)),
            height=int(data.get("height", 512)),
            base=str(data.get("base", "texture")),
            op=str(data.get("op", "none")),
            region=region,
            op_params=dict(data.get("op_params", {})),
            base_params=dict(data.get("base_params", {})),
            post=list(data.get("post", [])),
            seed=int(data.get("seed", 0)),
        )
        return spec.validate()

    def to_dict(self):
        return {
            "width": self.width,
            "height": self.height,
            "base": self.base,
            "op": self.op,
            "region": list(self.region) if self.region is not None else None,
            "op_params": self.op_params,
            "base_params": self.base_params,
            "post": self.post,
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# base content


def _spectral_field(rng, height, width, alpha):
    """Zero-mean unit-variance field with a 1/f^alpha amplitude spectrum."""
    noise = rng.normal(size=(height, width))
    spectrum = np.fft.fft2(noise)
    fy = np.fft.fftfreq(height)[:, None]
    fx = np.fft.fftfreq(width)[None, :]
    radius = np.sqrt(fy * fy + fx * fx)
    radius[0, 0] = 1.0
    out = np.real(np.fft.ifft2(spectrum / radius**alpha))
    return (out - out.mean()) / out.std()


def _gray3(plane):
    return np.repeat(plane[:, :, None], 3, axis=2)


def _base_gradient(rng, height, width, params):
    gx, gy = rng.uniform(-1.0, 1.0, size=2)
    freq = rng.uniform(0.5, 2.0)
    yy, xx = np.meshgrid(np.linspace(0, 1, height), np.linspace(0, 1, width), indexing="ij")
    plane = 110.0 + 70.0 * (gx * xx + gy * yy) + 25.0 * np.sin(2 * np.pi * freq * (xx + yy))
    return _gray3(np.clip(plane, 0, 255))


def _base_texture(rng, height, width, params):
    std = float(params.get("std", _TEXTURE_STD))
    alpha = float(params.get("alpha", _TEXTURE_ALPHA))
    env_sigma = float(params.get("env_sigma", _TEXTURE_ENV_SIGMA))
    env_scale = float(params.get("env_scale", _TEXTURE_ENV_SCALE))
    noise_sigma = float(params.get("noise_sigma", 0.0))
    carrier = _spectral_field(rng, height, width, alpha)
    envelope = ndimage.gaussian_filter(rng.normal(size=(height, width)), env_scale)
    envelope /= envelope.std()
    plane = 128.0 + std * carrier * np.exp(env_sigma * envelope - env_sigma**2 / 2.0)
    if noise_sigma > 0:
        plane = plane + rng.normal(0.0, noise_sigma, size=(height, width))
    return _gray3(np.clip(plane, 0, 255))


def _color_scene(rng, height, width, noise_sigma=2.0):
    """Smooth correlated color content with mild sensor-like noise."""
    shared = gaussian_blur(rng.normal(size=(height, width)), 8.0)
    img = np.empty((height, width, 3))
    for c in range(3):
        detail = gaussian_blur(rng.normal(size=(height, width)), 2.0)
        plane = 0.7 * shared + 0.5 * detail
        plane = 128.0 + 36.0 * plane / plane.std()
        img[..., c] = plane + rng.normal(0.0, noise_sigma, size=(height, width))
    return np.clip(img, 0, 255)


def _base_demosaiced(rng, height, width, params):
    pattern = params.get("pattern", "RGGB")
    scene = _color_scene(rng, height, width, float(params.get("noise_sigma", 2.0)))
    return np.clip(bilinear_demosaic(mosaic_from_rgb(scene, pattern), pattern), 0, 255)


def _base_noise_over_smooth(rng, height, width, params):
    sigma = float(params.get("noise_sigma", 1.0))
    smooth = gaussian_blur(rng.normal(size=(height, width)), 16.0)
    plane = 128.0 + 40.0 * smooth / smooth.std()
    plane = plane + rng.normal(0.0, sigma, size=(height, width))
    return _gray3(np.clip(plane, 0, 255))


_BASE_GENERATORS = {
    "gradient": _base_gradient,
    "texture": _base_texture,
    "demosaiced": _base_demosaiced,
    "noise-over-smooth": _base_noise_over_smooth,
}


def _make_base(kind, height, width, rng, params):
    return _BASE_GENERATORS[kind](rng, height, width, params)


# ---------------------------------------------------------------------------
# forgery operations


def _apply_jpeg_chain(img, qualities):
    for q in qualities:
        img = jpeg_roundtrip(img, q)
    return img


def _region_slices(region):
    x, y, w, h = region
    return slice(y, y + h), slice(x, x + w)


def synth(spec: SynthSpec):
    """Generate one image and its ground-truth mask.

    Returns (image, mask): image is (H, W, 3) float on 0-255, mask is
    uint8 {0, 255} marking exactly the forged region.
    """
    image, mask, trailing_q = _generate(spec)
    if trailing_q is not None:
        image = jpeg_roundtrip(image, trailing_q)
    return image, mask


def _generate(spec: SynthSpec):
    """Build (payload, mask, trailing_jpeg_quality).

    The payload has every post step except a trailing jpeg applied, so a
    writer can realize that last step as the actual file encoding.
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    base_seed, donor_seed = rng.integers(0, 2**63, size=2)
    image = _make_base(spec.base, spec.height, spec.width, np.random.default_rng(base_seed), spec.base_params)
    mask = np.zeros((spec.height, spec.width), dtype=np.uint8)

    if spec.op != "none":
        if spec.region is None:
            raise SpecError("region", f"op {spec.op!r} requires a region")
        image, mask = _apply_op(spec, image, mask, np.random.default_rng(donor_seed))

    trailing_q = None
    steps = list(spec.post)
    if steps and "jpeg" in steps[-1]:
        trailing_q = int(steps[-1]["jpeg"])
        steps = steps[:-1]
    for step in steps:
        if "jpeg" in step:
            image = _apply_jpeg_chain(image, [int(step["jpeg"])])
        else:
            factor = float(step["resize"])
            image = np.clip(resize_image(image, factor), 0, 255)
            mask = resize_image(mask, factor, nearest=True).astype(np.uint8)
    return image, mask, trailing_q


def _apply_op(spec, image, mask, rng):
    op = spec.op
    params = spec.op_params
    region = spec.region
    rows, cols = _region_slices(region)

    if op == "splice":
        host_chain = params.get("host_jpeg", [])
        donor_chain = params.get("donor_jpeg", [])
        donor_kind = params.get("donor_base", spec.base)
        if donor_kind not in BASE_KINDS:
            raise SpecError("op_params.donor_base", f"unknown kind {donor_kind!r}")
        if host_chain:
            image = _apply_jpeg_chain(image, host_chain)
        donor = _make_base(donor_kind, spec.height, spec.width, rng, spec.base_params)
        if donor_chain:
            donor = _apply_jpeg_chain(donor, donor_chain)
        image = image.copy()
        image[rows, cols] = donor[rows, cols]

    elif op == "copy-move":
        source = params.get("source")
        x, y, w, h = region
        if source is None:
            source = _sample_copy_source(rng, spec.width, spec.height, region)
        sx, sy = int(source[0]), int(source[1])
        if sx < 0 or sy < 0 or sx + w > spec.width or sy + h > spec.height:
            raise SpecError("op_params.source", "source patch extends outside the frame")
        if _overlaps((sx, sy, w, h), region):
            raise SpecError("op_params.source", "source and destination overlap")
        image = image.copy()
        image[rows, cols] = image[sy : sy + h, sx : sx + w]

    elif op == "blur-region":
        sigma = float(params.get("blur_sigma", 2.5))
        blurred = gaussian_blur(image, sigma)
        image = image.copy()
        image[rows, cols] = blurred[rows, cols]

    elif op == "noise-region":
        sigma = float(params.get("noise_sigma", 5.0))
        image = image.copy()
        x, y, w, h = region
        image[rows, cols] = np.clip(
            image[rows, cols] + rng.normal(0.0, sigma, size=(h, w, 3)), 0, 255
        )

    elif op == "grid-shift-region":
        host_chain = params.get("host_jpeg", [75])
        dx, dy = (int(v) for v in params.get("shift", (4, 4)))
        x, y, w, h = region
        if x + w + dx > spec.width or y + h + dy > spec.height:
            raise SpecError("region", "shifted source extends outside the frame")
        if host_chain:
            image = _apply_jpeg_chain(image, host_chain)
        image = image.copy()
        image[rows, cols] = image[y + dy : y + dy + h, x + dx : x + dx + w]

    mask[rows, cols] = 255
    return image, mask


def _overlaps(a, b):
    ax, ay, aw, ah = a
    bx, by, bw, bh = b
    return not (ax + aw <= bx or bx + bw <= ax or ay + ah <= by or by + bh <= ay)


def _sample_copy_source(rng, width, height, region):
    x, y, w, h = region
    for _ in range(256):
        sx = int(rng.integers(0, width - w + 1))
        sy = int(rng.integers(0, height - h + 1))
        if not _overlaps((sx, sy, w, h), region):
            return sx, sy
    raise SpecError("region", "could not place a non-overlapping copy-move source")


# ---------------------------------------------------------------------------
# corpora

# Manipulated-pixel fraction band, mirroring the small manipulated areas of
# real evaluation data.  Sampled slightly inside [0.02, 0.15] so integer
# rounding of the region never leaves the band.
_FRACTION_LO = 0.0205
_FRACTION_HI = 0.1495


def _sample_region(rng, spec_template):
    width, height = spec_template.width, spec_template.height
    margin = 0
    if spec_template.op == "grid-shift-region":
        shift = spec_template.op_params.get("shift", (4, 4))
        margin = max(int(shift[0]), int(shift[1]))
    fraction = rng.uniform(_FRACTION_LO, _FRACTION_HI)
    aspect = rng.uniform(0.6, 1.6)
    area = fraction * width * height
    w = int(round(np.sqrt(area * aspect)))
    h = int(round(area / max(w, 1)))
    w = min(max(w, 8), width - margin - 1)
    h = min(max(h, 8), height - margin - 1)
    x = int(rng.integers(0, width - w - margin + 1))
    y = int(rng.integers(0, height - h - margin + 1))
    return (x, y, w, h)


@dataclass
class CorpusItem:
    item_id: str
    spec: SynthSpec
    image: np.ndarray
    mask: np.ndarray
    fraction: float

    @property
    def pristine(self):
        return self.spec.op == "none"

    def metadata(self):
        return {
            "id": self.item_id,
            "spec": self.spec.to_dict(),
            "fraction": round(self.fraction, 6),
            "pristine": self.pristine,
        }


def corpus(template: SynthSpec, n, seed):
    """Generate n independent items from a template.

    Per-item seeds derive as seed XOR index; items without a fixed region
    sample one with a manipulated-pixel fraction in [2%, 15%].  Generation
    order is irrelevant: every item depends only on its own derived seed.
    """
    if n < 1:
        raise SpecError("n", "corpus size must be >= 1")
    template.validate()
    items = []
    for index in range(n):
        item_seed = int(seed) ^ index
        spec = SynthSpec(**{**template.to_dict(), "seed": item_seed, "region": template.region})
        if spec.op != "none" and spec.region is None:
            region_rng = np.random.default_rng(np.random.SeedSequence([item_seed, 0xA11CE]))
            spec.region = _sample_region(region_rng, spec)
        spec.validate()
        image, mask = synth(spec)
        fraction = float((mask > 0).mean())
        items.append(
            CorpusItem(
                item_id=f"img{index:04d}",
                spec=spec,
                image=image,
                mask=mask,
                fraction=fraction,
            )
        )
    return items


def corpus_digest(items):
    """Stable digest of the corpus metadata (content-addressed identity)."""
    payload = json.dumps([it.metadata() for it in items], sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def matched_template(algo):
    """Detector-matched corpus template: the forgery type the detector targets.

    blk: recompressed host with a grid-misaligned region; dct/ela: splices
    with mismatched compression histories; cfa1/cfa2: demosaiced host with
    a region of direct (never mosaiced) content; noi1/noi2: regional noise;
    noi4: regional blur.
    """
    templates = {
        "blk": SynthSpec(
            base="texture",
            op="grid-shift-region",
            op_params={"host_jpeg": [75], "shift": (4, 4)},
        ),
        "dct": SynthSpec(
            base="texture",
            op="splice",
            op_params={"host_jpeg": [85], "donor_jpeg": [95]},
        ),
        "ela": SynthSpec(
            base="texture",
            op="splice",
            op_params={"host_jpeg": [90, 90], "donor_jpeg": []},
        ),
        "cfa1": SynthSpec(
            base="demosaiced",
            op="splice",
            op_params={"donor_base": "noise-over-smooth"},
        ),
        "cfa2": SynthSpec(
            base="demosaiced",
            op="splice",
            op_params={"donor_base": "noise-over-smooth"},
        ),
        "noi1": SynthSpec(
            base="noise-over-smooth",
            op="noise-region",
            op_params={"noise_sigma": 5.0},
            base_params={"noise_sigma": 1.0},
        ),
        "noi2": SynthSpec(
            base="texture",
            op="noise-region",
            op_params={"noise_sigma": 5.0},
        ),
        "noi4": SynthSpec(
            base="texture",
            op="blur-region",
            op_params={"blur_sigma": 2.5},
            base_params={"noise_sigma": 2.0},
        ),
    }
    try:
        return templates[algo]
    except KeyError:
        raise KeyError(f"no matched template for {algo!r}") from None
