"""Decimated 2D tight-frame (framelet) transform.

Each level applies three 1D filters along both axes and keeps every second
sample, giving 9 subbands; the 8 that are not low-pass in both directions
are the detail bands and the low/low band is decomposed again.

The 1D analysis step for a signal of length ``n`` is materialised as three
``ceil(n/2) x n`` matrices whose stacked transpose is an exact left inverse
(the stacked operator is an isometry). Boundaries are handled as follows:

* even ``n``: periodic wrap. The filter bank satisfies the unitary extension
  principle, so the decimated periodic operator is an isometry and high-pass
  bands annihilate constants exactly.
* odd ``n``: whole-sample symmetric extension to period ``2n - 2``. The
  endpoint samples appear once per period and interior samples twice, so the
  input endpoints are scaled by ``sqrt(2)`` and the kept coefficients by
  ``sqrt(multiplicity / 2)``. This keeps the operator an isometry; high-pass
  bands of a constant pick up small values at the two boundary coefficients.

Synthesis is the adjoint, so ``synthesize(analyze(x)) == x`` to rounding.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

BANDS = ("LH1", "LH2", "HL1", "HL2", "HH11", "HH12", "HH21", "HH22")

# band name -> (filter index along axis 0, filter index along axis 1)
BAND_FILTERS = {
    "LH1": (0, 1),
    "LH2": (0, 2),
    "HL1": (1, 0),
    "HL2": (2, 0),
    "HH11": (1, 1),
    "HH12": (1, 2),
    "HH21": (2, 1),
    "HH22": (2, 2),
}


class StructureError(ValueError):
    """Pyramid subbands have inconsistent dimensions."""


class NoParentError(IndexError):
    """Coefficient at the coarsest level has no parent."""


@dataclass(frozen=True)
class FilterBank:
    """Three centred, odd-length analysis filters ``(h0, h1, h2)``.

    ``h0`` is the low-pass refinement mask (DC gain 1); ``h1`` and ``h2`` are
    the high-pass framelet masks. Taps are indexed ``-c..c`` around the centre.
    """

    h0: tuple[float, ...]
    h1: tuple[float, ...]
    h2: tuple[float, ...]

    def __post_init__(self):
        lengths = {len(self.h0), len(self.h1), len(self.h2)}
        if len(lengths) != 1 or lengths.pop() % 2 == 0:
            raise ValueError("filters must share one odd length")
        for taps in self.filters:
            if not np.all(np.isfinite(taps)):
                raise ValueError("filter taps must be finite")

    @property
    def filters(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (np.asarray(self.h0, float), np.asarray(self.h1, float), np.asarray(self.h2, float))

    @property
    def length(self) -> int:
        return len(self.h0)

    def frequency_response(self, omega) -> np.ndarray:
        """Return ``H_k(omega)`` for k = 0, 1, 2 as a ``(3, len(omega))`` array."""
        omega = np.atleast_1d(np.asarray(omega, float))
        c = self.length // 2
        t = np.arange(-c, c + 1)
        phase = np.exp(-1j * np.outer(t, omega))
        return np.stack([f @ phase for f in self.filters])

    def uep_residuals(self, n_points: int = 4096) -> tuple[float, float]:
        """Max deviation from the two unitary-extension conditions on a grid."""
        omega = np.linspace(-np.pi, np.pi, n_points)
        H = self.frequency_response(omega)
        Hpi = self.frequency_response(omega + np.pi)
        power = np.sum(np.abs(H) ** 2, axis=0)
        cross = np.sum(H * np.conj(Hpi), axis=0)
        return float(np.max(np.abs(power - 1.0))), float(np.max(np.abs(cross)))


def default_filter_bank() -> FilterBank:
    """Piecewise-linear B-spline tight frame."""
    return FilterBank(
        h0=(0.25, 0.5, 0.25),
        h1=(math.sqrt(2) / 4, 0.0, -math.sqrt(2) / 4),
        h2=(-0.25, 0.5, -0.25),
    )


def _periodic_filter(taps: np.ndarray, period: int) -> np.ndarray:
    """Circulant matrix ``F`` with ``(F x)[m] = sum_t taps[t] x[m - t]``."""
    c = len(taps) // 2
    F = np.zeros((period, period))
    rows = np.arange(period)
    for t in range(-c, c + 1):
        np.add.at(F, (rows, (rows - t) % period), taps[t + c])
    return F


def _is_symmetric(taps: np.ndarray) -> bool:
    return np.allclose(taps, taps[::-1], rtol=0, atol=1e-15) or np.allclose(
        taps, -taps[::-1], rtol=0, atol=1e-15
    )


@functools.lru_cache(maxsize=256)
def analysis_matrices(n: int, fb: FilterBank) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One-level 1D analysis operators for a length-``n`` signal.

    Returns three read-only ``(ceil(n/2), n)`` matrices ``A_k`` such that
    ``sum_k A_k.T @ A_k`` is the identity.
    """
    if n < 2:
        raise ValueError(f"signal length {n} too short for one decomposition level")
    scaled = [math.sqrt(2) * f for f in fb.filters]
    if n % 2 == 0:
        mats = [_periodic_filter(f, n)[::2] for f in scaled]
    else:
        if not all(_is_symmetric(f) for f in fb.filters):
            raise ValueError("odd-length signals need symmetric or antisymmetric filters")
        period = 2 * n - 2
        E = np.zeros((period, n))
        m = np.arange(period)
        E[m, np.where(m < n, m, period - m)] = 1.0
        mu = E.sum(axis=0)
        D = np.diag(np.sqrt(2.0 / mu))
        half = n - 1
        reps = np.arange(half // 2 + 1)
        nu = np.where((reps == 0) | (2 * reps == half), 1.0, 2.0)
        weights = np.sqrt(nu / 2.0)[:, None]
        mats = [weights * (_periodic_filter(f, period) @ E @ D)[2 * reps] for f in scaled]
    for a in mats:
        a.setflags(write=False)
    return tuple(mats)


@dataclass
class FrameletPyramid:
    """Multi-level framelet decomposition.

    ``detail[l - 1][band]`` holds level ``l`` (1 = finest). ``shapes[l - 1]`` is
    the shape of the array that level ``l`` decomposed, so the inverse knows
    the exact sizes even for odd dimensions.
    """

    detail: list[dict[str, np.ndarray]]
    approx: np.ndarray
    shapes: list[tuple[int, int]]
    filter_bank: FilterBank = field(default_factory=default_filter_bank)

    @property
    def levels(self) -> int:
        return len(self.detail)

    def band_shape(self, level: int) -> tuple[int, int]:
        h, w = self.shapes[level - 1]
        return (-(-h // 2), -(-w // 2))

    def copy(self) -> "FrameletPyramid":
        return FrameletPyramid(
            detail=[{b: d.copy() for b, d in lvl.items()} for lvl in self.detail],
            approx=self.approx.copy(),
            shapes=list(self.shapes),
            filter_bank=self.filter_bank,
        )

    def energy(self) -> float:
        total = float(np.sum(self.approx**2))
        for lvl in self.detail:
            total += sum(float(np.sum(d**2)) for d in lvl.values())
        return total

    def validate(self) -> None:
        if len(self.shapes) != self.levels or self.levels < 1:
            raise StructureError("shapes must list one entry per level")
        for level in range(1, self.levels + 1):
            expected = self.band_shape(level)
            bands = self.detail[level - 1]
            if set(bands) != set(BANDS):
                raise StructureError(f"level {level} must hold bands {BANDS}")
            for name, arr in bands.items():
                if arr.shape != expected:
                    raise StructureError(
                        f"level {level} band {name} has shape {arr.shape}, expected {expected}"
                    )
            if level < self.levels and self.shapes[level] != expected:
                raise StructureError(f"level {level + 1} input shape does not match level {level}")
        if self.approx.shape != self.band_shape(self.levels):
            raise StructureError(
                f"approx has shape {self.approx.shape}, expected {self.band_shape(self.levels)}"
            )


def as_image(image) -> np.ndarray:
    """Validate a grayscale image and return it as a float64 2D array."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2D image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite samples")
    return arr


def max_levels(shape: tuple[int, int]) -> int:
    """Deepest decomposition such that every level decomposes at least 2 samples."""
    n = min(shape)
    levels = 0
    while n >= 2:
        levels += 1
        n = -(-n // 2)
        if n == 1:
            break
    return levels


def analyze(image, levels: int = 3, fb: FilterBank | None = None) -> FrameletPyramid:
    """Forward transform of a 2D image into a ``levels``-deep pyramid."""
    fb = fb or default_filter_bank()
    x = as_image(image)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if levels > max_levels(x.shape):
        raise ValueError(
            f"{levels} levels too many for a {x.shape[0]}x{x.shape[1]} image "
            f"(at most {max_levels(x.shape)})"
        )
    detail, shapes = [], []
    for _ in range(levels):
        shapes.append(x.shape)
        rows = analysis_matrices(x.shape[0], fb)
        cols = analysis_matrices(x.shape[1], fb)
        along_cols = [x @ c.T for c in cols]
        sub = {(a, b): rows[a] @ along_cols[b] for a in range(3) for b in range(3)}
        detail.append({name: sub[ab] for name, ab in BAND_FILTERS.items()})
        x = sub[(0, 0)]
    return FrameletPyramid(detail=detail, approx=x, shapes=shapes, filter_bank=fb)


def synthesize(pyr: FrameletPyramid, fb: FilterBank | None = None) -> np.ndarray:
    """Inverse transform (adjoint of :func:`analyze`)."""
    fb = fb or pyr.filter_bank
    pyr.validate()
    x = pyr.approx
    for level in range(pyr.levels, 0, -1):
        h, w = pyr.shapes[level - 1]
        rows = analysis_matrices(h, fb)
        cols = analysis_matrices(w, fb)
        sub = {ab: pyr.detail[level - 1][name] for name, ab in BAND_FILTERS.items()}
        sub[(0, 0)] = x
        out = np.zeros((h, w))
        for b in range(3):
            inner = sum(rows[a].T @ sub[(a, b)] for a in range(3))
            out += inner @ cols[b]
        x = out
    return x


@functools.lru_cache(maxsize=256)
def _row_norms(shape: tuple[tuple[int, int], ...], fb: FilterBank, axis: int) -> tuple:
    """Per-level 1D atom norms along one axis, for filters 0, 1, 2."""
    lengths = [s[axis] for s in shape]
    chain = np.eye(lengths[0])
    norms = []
    for n in lengths:
        mats = analysis_matrices(n, fb)
        norms.append(tuple(np.linalg.norm(m @ chain, axis=1) for m in mats))
        chain = mats[0] @ chain
    return tuple(norms)


def atom_norms(pyr: FrameletPyramid, level: int, band: str) -> np.ndarray:
    """l2 norm of the synthesis atom behind every coefficient of a subband.

    White noise of std ``s`` in the image has std ``s * atom_norms`` on that
    subband's coefficients.
    """
    key = tuple(pyr.shapes)
    a, b = BAND_FILTERS[band]
    r = _row_norms(key, pyr.filter_bank, 0)[level - 1][a]
    c = _row_norms(key, pyr.filter_bank, 1)[level - 1][b]
    return np.outer(r, c)


def expand_parent(parent: np.ndarray, child_shape: tuple[int, int]) -> np.ndarray:
    """Nearest-neighbour expansion: child (i, j) sees parent (i // 2, j // 2)."""
    big = np.repeat(np.repeat(parent, 2, axis=0), 2, axis=1)
    return big[: child_shape[0], : child_shape[1]]


def parent_of(pyr: FrameletPyramid, level: int, band: str, i: int, j: int) -> float:
    """Coefficient one level coarser, same band, covering child ``(i, j)``."""
    if band not in BAND_FILTERS:
        raise KeyError(f"unknown band {band!r}")
    if level == pyr.levels:
        raise NoParentError(f"level {level} is the coarsest level and has no parent")
    if not 1 <= level < pyr.levels:
        raise IndexError(f"level {level} outside 1..{pyr.levels - 1}")
    h, w = pyr.band_shape(level)
    if not (0 <= i < h and 0 <= j < w):
        raise IndexError(f"({i}, {j}) out of bounds for subband of shape {(h, w)}")
    return float(pyr.detail[level][band][i // 2, j // 2])
