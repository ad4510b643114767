"""Deterministic tile-parallel rasterization and image encoding.

Pixel axes are computed once per render from absolute pixel indices, tiles
index into them, and each tile writes a disjoint region of preallocated
arrays; output is therefore byte-identical for any tile size and worker
count.  The per-pixel work runs in the selected kernel engine (compiled or
pure Python -- also bit-identical to each other).

Output formats: binary PPM (header ``P6\\n<w> <h>\\n255\\n`` followed by
row-major RGB triples) and PNG (stdlib zlib, fixed encoder settings), plus
a plain-text ``key=value`` metadata sidecar describing the fully resolved
run configuration.
"""

from __future__ import annotations

import math
import os
import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _engine, _scalar
from .correspondence import Parameter, _aval
from .domains import StandardDomains
from .per11 import DEFAULT_ESCAPE_RADIUS

__all__ = [
    "Viewport", "RenderOptions", "ImageGrid",
    "render_limit_set", "render_mset", "render_julia_per11",
    "encode_ppm", "encode_png", "encode_image", "write_image",
]

CODE_BOUNDED = _scalar.BOUNDED
CODE_ESCAPED = _scalar.ESCAPED
CODE_MASKED = _scalar.MASKED

# combined limit-set codes
LIMSET_REGULAR = 0
LIMSET_BACKWARD = 1
LIMSET_FORWARD = 2
LIMSET_BOTH = 3

WORKERS_ENV = "CORRDYN_WORKERS"


@dataclass(frozen=True)
class Viewport:
    """Rectangular frame in the complex plane mapped onto a pixel grid."""

    center: complex
    width: float
    pixels: tuple[int, int] = (512, 512)
    coordinate: str = "big"

    def __post_init__(self):
        if not (self.width > 0):
            raise ValueError("viewport width must be positive")
        w, h = self.pixels
        if w < 1 or h < 1:
            raise ValueError("pixel counts must be positive")
        if self.coordinate not in ("big", "small"):
            raise ValueError("coordinate must be 'big' or 'small'")
        object.__setattr__(self, "center", complex(self.center))

    @property
    def height(self) -> float:
        w, h = self.pixels
        return self.width * h / w

    @property
    def scale(self) -> float:
        return self.width / self.pixels[0]

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Pixel-centre coordinate arrays (re by column, im by row, row 0 on top)."""
        w, h = self.pixels
        s = self.scale
        u = np.arange(w, dtype=np.float64) - (w - 1) / 2.0
        v = np.arange(h, dtype=np.float64) - (h - 1) / 2.0
        return self.center.real + u * s, self.center.imag - v * s

    def pixel_of(self, z: complex) -> tuple[float, float]:
        """Fractional (row, col) of a plane point."""
        s = self.scale
        w, h = self.pixels
        col = (z.real - self.center.real) / s + (w - 1) / 2.0
        row = (self.center.imag - z.imag) / s + (h - 1) / 2.0
        return row, col

    def describe(self) -> dict[str, str]:
        return {
            "center": format_complex(self.center),
            "width": repr(self.width),
            "pixels": f"{self.pixels[0]}x{self.pixels[1]}",
            "coordinate": self.coordinate,
        }


@dataclass(frozen=True)
class RenderOptions:
    max_iter: int = 2000
    tile_size: int = 64
    workers: int | None = None
    palette: str = "default"
    escape_radius: float = DEFAULT_ESCAPE_RADIUS
    engine: str | None = None
    transversality_threshold: float = 1e-3

    def resolved_workers(self) -> int:
        if self.workers is not None:
            return max(1, self.workers)
        env = os.environ.get(WORKERS_ENV, "").strip()
        if env:
            return max(1, int(env))
        return min(8, os.cpu_count() or 1)


@dataclass
class ImageGrid:
    """Per-pixel classification plus the colormapped 8-bit image."""

    codes: np.ndarray
    steps: np.ndarray
    rgb: np.ndarray
    meta: dict[str, str]
    layers: dict[str, np.ndarray] = field(default_factory=dict)


def format_complex(z: complex) -> str:
    return f"{z.real!r}{z.imag:+}i"


def _tiles(h: int, w: int, tile: int):
    for r0 in range(0, h, tile):
        for c0 in range(0, w, tile):
            yield r0, min(r0 + tile, h), c0, min(c0 + tile, w)


def _run_tiles(fn, h: int, w: int, opts: RenderOptions):
    tiles = list(_tiles(h, w, max(1, opts.tile_size)))
    workers = opts.resolved_workers()
    if workers <= 1:
        for t in tiles:
            fn(*t)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda t: fn(*t), tiles))


def _pack_moebius(coeffs) -> np.ndarray:
    out = np.empty(8, dtype=np.float64)
    for i, c in enumerate(coeffs):
        out[2 * i] = c.real
        out[2 * i + 1] = c.imag
    return out


_NO_PRE = np.empty(0, dtype=np.float64)


def _classify_plane(a: complex, viewport: Viewport, opts: RenderOptions,
                    forward: bool) -> tuple[np.ndarray, np.ndarray]:
    kern = _engine.get_kernels(opts.engine)
    s = StandardDomains.for_parameter(a)
    jc = _scalar.j_coefficients(a)
    if viewport.coordinate == "small":
        m = _scalar.small_to_big_coefficients(a)
        pre = _pack_moebius(_scalar.compose_moebius(jc, m) if forward else m)
    else:
        pre = _pack_moebius(jc) if forward else _NO_PRE
    re_cols, im_rows = viewport.axes()
    w, h = viewport.pixels
    codes = np.empty((h, w), dtype=np.int8)
    steps = np.empty((h, w), dtype=np.int32)
    invol = _pack_moebius(jc)

    def tile(r0, r1, c0, c1):
        kern.classify_corr_block(re_cols, im_rows, r0, r1, c0, c1, pre, invol,
                                 s.center, s.radius_sq_slack, opts.max_iter,
                                 codes, steps)

    _run_tiles(tile, h, w, opts)
    return codes, steps


def _base_meta(command: str, viewport: Viewport, opts: RenderOptions) -> dict[str, str]:
    from . import __version__
    meta = {"command": command}
    meta.update(viewport.describe())
    meta.update({
        "max_iter": str(opts.max_iter),
        "tile_size": str(opts.tile_size),
        "workers": str(opts.resolved_workers()),
        "palette": opts.palette,
        "engine": opts.engine or _engine.backend_name(),
        "version": __version__,
    })
    return meta


def render_limit_set(a, viewport: Viewport, opts: RenderOptions = RenderOptions()) -> ImageGrid:
    """Rasterize both limit sets and the escape-shaded regular set.

    Each pixel is classified along the restricted branch directly (backward
    set) and after the involution (forward set).  Renders for parameters
    near the boundary of the parameter disc carry a tangent-regime flag in
    the metadata.
    """
    a = _aval(a)
    p = Parameter(a)
    if not p.in_disc:
        raise ValueError("limit-set rendering requires a in the parameter disc")
    codes_b, steps_b = _classify_plane(a, viewport, opts, forward=False)
    codes_f, steps_f = _classify_plane(a, viewport, opts, forward=True)
    bounded_b = codes_b == CODE_BOUNDED
    bounded_f = codes_f == CODE_BOUNDED
    codes = np.zeros(codes_b.shape, dtype=np.int8)
    codes[bounded_b] = LIMSET_BACKWARD
    codes[bounded_f] = LIMSET_FORWARD
    codes[bounded_b & bounded_f] = LIMSET_BOTH
    steps = np.minimum(steps_b, steps_f)
    rgb = _palette_limitset(codes, steps, opts.max_iter)
    margin = p.transversality_margin
    meta = _base_meta("limitset", viewport, opts)
    meta["a"] = format_complex(a)
    meta["transversality_margin"] = repr(margin)
    meta["tangent_regime"] = str(margin < opts.transversality_threshold)
    return ImageGrid(codes, steps, rgb, meta,
                     layers={"codes_backward": codes_b, "steps_backward": steps_b,
                             "codes_forward": codes_f, "steps_forward": steps_f})


def render_mset(viewport: Viewport, opts: RenderOptions = RenderOptions(max_iter=500)) -> ImageGrid:
    """Rasterize the parameter plane: free critical orbit per pixel,
    pixels outside the parameter disc masked."""
    if viewport.coordinate != "big":
        raise ValueError("parameter-plane rendering uses the big coordinate")
    kern = _engine.get_kernels(opts.engine)
    re_cols, im_rows = viewport.axes()
    w, h = viewport.pixels
    codes = np.empty((h, w), dtype=np.int8)
    steps = np.empty((h, w), dtype=np.int32)

    def tile(r0, r1, c0, c1):
        kern.classify_mset_block(re_cols, im_rows, r0, r1, c0, c1,
                                 opts.max_iter, codes, steps)

    _run_tiles(tile, h, w, opts)
    rgb = _palette_mset(codes, steps, opts.max_iter)
    meta = _base_meta("mset", viewport, opts)
    return ImageGrid(codes, steps, rgb, meta)


def render_julia_per11(A, viewport: Viewport,
                       opts: RenderOptions = RenderOptions(max_iter=1000)) -> ImageGrid:
    """Rasterize a filled Julia set of the parabolic quadratic family."""
    A = complex(A)
    if viewport.coordinate != "big":
        raise ValueError("Julia rendering uses the plane coordinate directly")
    re_cols, im_rows = viewport.axes()
    w, h = viewport.pixels
    if A == 0.0:
        # closed form: filled set is the closed left half-plane
        re_grid = np.broadcast_to(re_cols[None, :], (h, w))
        codes = np.where(re_grid <= 0.0, CODE_BOUNDED, CODE_ESCAPED).astype(np.int8)
        steps = np.zeros((h, w), dtype=np.int32)
        steps[codes == CODE_BOUNDED] = opts.max_iter
    else:
        kern = _engine.get_kernels(opts.engine)
        codes = np.empty((h, w), dtype=np.int8)
        steps = np.empty((h, w), dtype=np.int32)
        rsq = opts.escape_radius * opts.escape_radius

        def tile(r0, r1, c0, c1):
            kern.classify_per11_block(re_cols, im_rows, r0, r1, c0, c1,
                                      A.real, A.imag, opts.max_iter, rsq,
                                      codes, steps)

        _run_tiles(tile, h, w, opts)
    rgb = _palette_julia(codes, steps, opts.max_iter)
    meta = _base_meta("julia", viewport, opts)
    meta["A"] = format_complex(A)
    meta["escape_radius"] = repr(opts.escape_radius)
    return ImageGrid(codes, steps, rgb, meta)


# ---------------------------------------------------------------------------
# palettes

def _escape_shade(steps: np.ndarray, max_iter: int) -> np.ndarray:
    v = np.log1p(steps.astype(np.float64)) / math.log1p(max(1, max_iter))
    return np.clip(55.0 + 200.0 * (1.0 - v), 0.0, 255.0).astype(np.uint8)


def _palette_limitset(codes, steps, max_iter) -> np.ndarray:
    h, w = codes.shape
    rgb = np.zeros((h, w, 3), dtype=np.uint8)
    shade = _escape_shade(steps, max_iter)
    regular = codes == LIMSET_REGULAR
    rgb[regular, 2] = shade[regular]
    rgb[regular, 1] = (shade[regular] * 0.85).astype(np.uint8)
    rgb[regular, 0] = (shade[regular] * 0.55).astype(np.uint8)
    rgb[codes == LIMSET_BACKWARD] = (0, 0, 0)
    rgb[codes == LIMSET_FORWARD] = (90, 90, 90)
    rgb[codes == LIMSET_BOTH] = (170, 40, 40)
    return rgb


def _palette_mset(codes, steps, max_iter) -> np.ndarray:
    h, w = codes.shape
    rgb = np.zeros((h, w, 3), dtype=np.uint8)
    shade = _escape_shade(steps, max_iter)
    escaped = codes == CODE_ESCAPED
    rgb[escaped, 0] = shade[escaped]
    rgb[escaped, 1] = (shade[escaped] * 0.75).astype(np.uint8)
    rgb[escaped, 2] = (shade[escaped] * 0.45).astype(np.uint8)
    rgb[codes == CODE_BOUNDED] = (0, 0, 0)
    rgb[codes == CODE_MASKED] = (220, 220, 220)
    return rgb


def _palette_julia(codes, steps, max_iter) -> np.ndarray:
    h, w = codes.shape
    rgb = np.zeros((h, w, 3), dtype=np.uint8)
    shade = _escape_shade(steps, max_iter)
    escaped = codes == CODE_ESCAPED
    rgb[escaped, 1] = shade[escaped]
    rgb[escaped, 2] = (shade[escaped] * 0.8).astype(np.uint8)
    rgb[escaped, 0] = (shade[escaped] * 0.35).astype(np.uint8)
    rgb[codes == CODE_BOUNDED] = (0, 0, 0)
    return rgb


# ---------------------------------------------------------------------------
# encoding

def encode_ppm(rgb: np.ndarray) -> bytes:
    """Binary PPM, bit-exact: header then row-major RGB triples."""
    h, w, _ = rgb.shape
    return b"P6\n%d %d\n255\n" % (w, h) + rgb.astype(np.uint8, copy=False).tobytes()


def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    body = tag + payload
    return struct.pack(">I", len(payload)) + body + struct.pack(">I", zlib.crc32(body) & 0xFFFFFFFF)


def encode_png(rgb: np.ndarray) -> bytes:
    """Minimal 8-bit truecolor PNG (filter 0, one IDAT, fixed zlib level)."""
    h, w, _ = rgb.shape
    raw = np.empty((h, w * 3 + 1), dtype=np.uint8)
    raw[:, 0] = 0
    raw[:, 1:] = rgb.reshape(h, w * 3)
    ihdr = struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0)
    return b"".join([
        b"\x89PNG\r\n\x1a\n",
        _png_chunk(b"IHDR", ihdr),
        _png_chunk(b"IDAT", zlib.compress(raw.tobytes(), 6)),
        _png_chunk(b"IEND", b""),
    ])


def encode_image(grid: ImageGrid, format: str = "ppm") -> bytes:
    fmt = format.lower().lstrip(".")
    if fmt == "ppm":
        return encode_ppm(grid.rgb)
    if fmt == "png":
        return encode_png(grid.rgb)
    raise ValueError(f"unsupported image format {format!r}")


def write_image(grid: ImageGrid, path: str, format: str | None = None) -> None:
    """Write the image plus its metadata sidecar ``<path>.meta.txt``."""
    fmt = format or os.path.splitext(path)[1].lstrip(".").lower() or "ppm"
    data = encode_image(grid, fmt)
    with open(path, "wb") as f:
        f.write(data)
    lines = [f"{k}={grid.meta[k]}" for k in sorted(grid.meta)]
    with open(path + ".meta.txt", "w") as f:
        f.write("\n".join(lines) + "\n")
