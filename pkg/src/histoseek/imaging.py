"""Image decoding, grayscale conversion, histograms, and signatures.

An image's signature is the 256-vector of percentages

    p[i] = counts[i] / tnp * 100

where ``counts[i]`` is the number of pixels at 8-bit intensity level ``i``
and ``tnp`` the total number of pixels.  Signatures sum to 100 and do not
depend on image size (pixel replication leaves the proportions, and hence
the stored doubles, bitwise unchanged) nor on color (all inputs pass
through the same grayscale conversion).

Grayscale conversion is pinned for reproducibility: pixels are
alpha-composited over white, then reduced with BT.601 luma
``y = 0.299 r + 0.587 g + 0.114 b`` and rounded half-up to an integer
in [0, 255].
"""

import io
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

__all__ = [
    "ImageDecodeError",
    "GrayImage",
    "Histogram",
    "Signature",
    "SIGNATURE_BINS",
    "decode_image",
    "to_gray8",
    "histogram",
    "signature",
    "signature_of_bytes",
    "chebyshev_gap",
    "intersection_similarity",
]

SIGNATURE_BINS = 256

# Formats always accepted; TIFF support is feature-flagged.
BASE_FORMATS = frozenset({"PNG", "JPEG", "BMP", "GIF"})


class ImageDecodeError(ValueError):
    """Raised for unsupported formats, corrupt streams, or empty rasters."""


@dataclass(frozen=True, eq=False)
class GrayImage:
    """An 8-bit grayscale raster; ``pixels`` is (height, width) uint8, row-major."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = self.pixels
        if not isinstance(px, np.ndarray) or px.ndim != 2 or px.dtype != np.uint8:
            raise ValueError("pixels must be a 2-D uint8 array")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image dimensions must be positive")
        px = np.ascontiguousarray(px)
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass(frozen=True, eq=False)
class Histogram:
    """Per-level pixel counts; ``tnp`` is the source image's total pixel count."""

    counts: np.ndarray
    tnp: int

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts)
        if counts.shape != (SIGNATURE_BINS,) or not np.issubdtype(
            counts.dtype, np.integer
        ):
            raise ValueError(f"counts must be {SIGNATURE_BINS} integers")
        if np.any(counts < 0):
            raise ValueError("counts must be nonnegative")
        counts = np.ascontiguousarray(counts, dtype=np.int64)
        if int(counts.sum()) != self.tnp:
            raise ValueError("counts must sum to tnp")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)


@dataclass(frozen=True, eq=False)
class Signature:
    """256 per-level pixel percentages summing to 100."""

    p: np.ndarray

    #: |sum(p) - 100| must stay within this bound.
    SUM_TOLERANCE = 1e-9

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=np.float64)
        if p.shape != (SIGNATURE_BINS,):
            raise ValueError(f"signature must have {SIGNATURE_BINS} entries")
        if np.any(p < 0.0) or not np.all(np.isfinite(p)):
            raise ValueError("signature entries must be finite and >= 0")
        if abs(float(p.sum()) - 100.0) > self.SUM_TOLERANCE:
            raise ValueError(f"signature sums to {p.sum()!r}, expected 100")
        p = np.ascontiguousarray(p)
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return bool(np.array_equal(self.p, other.p))

    def to_list(self) -> list[float]:
        return [float(v) for v in self.p]

    @classmethod
    def from_values(cls, values) -> "Signature":
        return cls(np.asarray(values, dtype=np.float64))


def decode_image(data: bytes, *, allow_tiff: bool = False) -> np.ndarray:
    """Decode an encoded image to an RGBA raster (height, width, 4) uint8.

    Accepts PNG, JPEG, BMP, and GIF (first frame); TIFF only when
    ``allow_tiff`` is set.  Raises :class:`ImageDecodeError` for anything
    else, for corrupt streams, and for zero-dimension images.
    """
    allowed = BASE_FORMATS | ({"TIFF"} if allow_tiff else frozenset())
    try:
        with Image.open(io.BytesIO(data)) as im:
            fmt = im.format
            if fmt not in allowed:
                raise ImageDecodeError(f"unsupported image format: {fmt or 'unknown'}")
            # Animated formats decode as their first frame (PIL opens at frame 0).
            rgba = im.convert("RGBA")
    except UnidentifiedImageError as exc:
        # PIL's message only names the BytesIO object, which helps nobody.
        raise ImageDecodeError("not a decodable image") from exc
    except (OSError, SyntaxError, ValueError) as exc:
        if isinstance(exc, ImageDecodeError):
            raise
        raise ImageDecodeError(f"corrupt image stream: {exc}") from exc
    arr = np.asarray(rgba, dtype=np.uint8)
    if arr.ndim != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ImageDecodeError("image has zero dimension")
    return arr


def to_gray8(raster: np.ndarray) -> GrayImage:
    """Convert an RGB(A) raster to 8-bit grayscale.

    Pixels are alpha-composited over white, then reduced with BT.601 luma
    and rounded half-up.  A 3-channel raster is treated as fully opaque.
    Output dimensions equal input dimensions.
    """
    arr = np.asarray(raster)
    if arr.ndim != 3 or arr.shape[2] not in (3, 4):
        raise ValueError("raster must be (height, width, 3|4)")
    rgb = arr[..., :3].astype(np.float64)
    if arr.shape[2] == 4:
        alpha = arr[..., 3].astype(np.float64) / 255.0
        rgb = rgb * alpha[..., None] + 255.0 * (1.0 - alpha[..., None])
    y = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    gray = np.clip(np.floor(y + 0.5), 0.0, 255.0).astype(np.uint8)
    return GrayImage(gray)


def histogram(img: GrayImage) -> Histogram:
    """Count pixels per intensity level: ``counts[i] = #{pixels == i}``."""
    counts = np.bincount(img.pixels.ravel(), minlength=SIGNATURE_BINS)
    return Histogram(counts=counts.astype(np.int64), tnp=int(img.pixels.size))


def signature(h: Histogram) -> Signature:
    """Percentage of pixels per level: ``p[i] = counts[i] / tnp * 100``."""
    if h.tnp <= 0:
        raise ValueError("cannot compute a signature for an empty histogram")
    return Signature(h.counts / h.tnp * 100.0)


def signature_of_bytes(data: bytes, *, allow_tiff: bool = False) -> Signature:
    """Full pipeline: decode -> grayscale -> histogram -> signature."""
    return signature(histogram(to_gray8(decode_image(data, allow_tiff=allow_tiff))))


def chebyshev_gap(a: Signature, b: Signature) -> float:
    """Largest per-bin percentage difference, ``max_i |a.p[i] - b.p[i]|``."""
    return float(np.max(np.abs(a.p - b.p)))


def intersection_similarity(a: Signature, b: Signature) -> float:
    """Shared distribution mass, ``sum_i min(a.p[i], b.p[i])`` in [0, 100]."""
    return float(np.minimum(a.p, b.p).sum())
