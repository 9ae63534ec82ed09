"""Epsilon-indexed nets of grid functions: the representatives of
generalized functions.

A :class:`NetFunction` holds one frame per rung of an epsilon ladder.
Frames are sampled on ``grid.refine(oversample)`` so that spectra that
widen like 1/eps stay below the Nyquist frequency; ``base_frames`` reads
the same functions back on the caller's grid by exact decimation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import GridMismatchError
from .grids import GridSpec, forward, inverse
from .mollifier import plateau_window
from .weights import (WeightFunction, WeightSequence, assoc, assoc_inverse)

#: |z| below this multiple of the ambient scale is treated as an exact zero
#: produced by floating point, not as data with a measurable decay rate.
MACHINE_FLOOR = 1e-12

#: log|z| assigned to exact zeros.
LOG_FLOOR = -745.0


@dataclass(frozen=True)
class EpsilonLadder:
    """Geometric ladder eps_j = eps0 * ratio**j, j = 0..count-1."""

    eps0: float
    ratio: float
    count: int

    def __post_init__(self):
        if not 0.0 < self.eps0 <= 1.0:
            raise ValueError("eps0 must lie in (0, 1]")
        if not 0.0 < self.ratio < 1.0:
            raise ValueError("ratio must lie in (0, 1)")
        if self.count < 6:
            raise ValueError("ladder needs at least 6 rungs")

    @property
    def values(self) -> np.ndarray:
        return self.eps0 * self.ratio ** np.arange(self.count)

    @property
    def eps_min(self) -> float:
        return float(self.eps0 * self.ratio ** (self.count - 1))

    def to_json(self) -> dict:
        return {"eps0": self.eps0, "ratio": self.ratio, "count": self.count}

    @classmethod
    def from_json(cls, data: dict) -> "EpsilonLadder":
        return cls(data["eps0"], data["ratio"], data["count"])


@dataclass(frozen=True)
class NetFunction:
    """Per-epsilon frames on a (possibly internally refined) grid."""

    ladder: EpsilonLadder
    grid: GridSpec
    frames: tuple = field(repr=False, compare=False)
    mode: str = "beurling"
    weight: object = None
    oversample: int = 1

    def __post_init__(self):
        if self.mode not in ("beurling", "roumieu"):
            raise ValueError("mode must be 'beurling' or 'roumieu'")
        if self.oversample < 1 or self.oversample & (self.oversample - 1):
            raise ValueError("oversample must be a power of two")
        fine = self.fine_grid
        for fr in self.frames:
            if fr.shape != fine.shape:
                raise GridMismatchError(
                    f"frame shape {fr.shape} does not match grid {fine.shape}")
            if not np.all(np.isfinite(fr)):
                raise ValueError("frames must be finite-valued")
        if len(self.frames) != self.ladder.count:
            raise GridMismatchError("one frame per ladder rung required")

    @property
    def fine_grid(self) -> GridSpec:
        return self.grid.refine(self.oversample)

    def base_frames(self) -> tuple:
        """Frames decimated to the base grid (exact: refinement keeps the
        base nodes)."""
        if self.oversample == 1:
            return self.frames
        step = (slice(None, None, self.oversample),) * self.grid.dim
        return tuple(fr[step] for fr in self.frames)

    def _compatible(self, other: "NetFunction"):
        if self.grid != other.grid or self.ladder != other.ladder:
            raise GridMismatchError("nets live on different grids or ladders")
        if self.oversample != other.oversample:
            raise GridMismatchError(
                "nets carry different internal refinements; rebuild with a "
                "common oversample")


@dataclass(frozen=True)
class GeneralizedNumber:
    ladder: EpsilonLadder
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.ladder.count:
            raise ValueError("one value per ladder rung required")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")


@dataclass(frozen=True)
class GeneralizedPoint:
    """Per-epsilon evaluation points confined to one compact box."""

    ladder: EpsilonLadder
    points: np.ndarray
    box: tuple

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[0] != self.ladder.count:
            raise ValueError("one point per ladder rung required")
        lo, hi = self.box
        lo = np.broadcast_to(np.asarray(lo, dtype=float), pts.shape[1:])
        hi = np.broadcast_to(np.asarray(hi, dtype=float), pts.shape[1:])
        if np.any(pts < lo) or np.any(pts > hi):
            raise ValueError("points leave the declared compact box")


def constant_embed(f, ladder: EpsilonLadder, grid: GridSpec,
                   mode: str = "beurling", weight=None,
                   oversample: int = 1) -> NetFunction:
    """Net with every frame equal to ``f``.

    ``f`` may be an array of samples on the base grid (oversample must then
    be 1) or a callable evaluated on the refined grid.
    """
    fine = grid.refine(oversample)
    if callable(f):
        samples = np.asarray(f(*fine.points()))
        if samples.shape != fine.shape:
            raise GridMismatchError("callable did not broadcast to the grid")
    else:
        samples = np.asarray(f)
        if oversample != 1:
            raise GridMismatchError(
                "sample input requires oversample=1; pass a callable to "
                "embed on a refined grid")
        if samples.shape != grid.shape:
            raise GridMismatchError(
                f"samples of shape {samples.shape} on grid {grid.shape}")
    samples = samples.copy()
    samples.setflags(write=False)
    return NetFunction(ladder=ladder, grid=grid,
                       frames=(samples,) * ladder.count,
                       mode=mode, weight=weight, oversample=oversample)


_OPS = {"add": np.add, "sub": np.subtract, "mul": np.multiply}


def combine(a: NetFunction, b: NetFunction, op: str) -> NetFunction:
    """Frame-wise pointwise ring operation (add | sub | mul)."""
    if op not in _OPS:
        raise ValueError(f"unknown op {op!r}")
    a._compatible(b)
    fn = _OPS[op]
    frames = tuple(fn(x, y) for x, y in zip(a.frames, b.frames))
    return replace(a, frames=frames)


def scale(a: NetFunction, c) -> NetFunction:
    frames = tuple(c * fr for fr in a.frames)
    return replace(a, frames=frames)


def _derivative_symbol(grid: GridSpec, alpha) -> np.ndarray:
    """Fourier symbol of D^alpha = (-i d/dx)^alpha: multiplication by
    (-xi)^alpha under the convention fhat(xi) = int f e^{+i x xi} dx."""
    alpha = tuple(int(k) for k in alpha)
    if len(alpha) != grid.dim or any(k < 0 for k in alpha):
        raise ValueError("alpha must be a non-negative multi-index of the "
                         "grid dimension")
    duals = grid.dual_points()
    sym = np.ones(grid.shape, dtype=float)
    for k, xi in zip(alpha, duals):
        if k:
            sym = sym * (-xi) ** k
    return sym


def _edge_mass(frame: np.ndarray) -> float:
    """Largest magnitude on the outermost layer of nodes."""
    vals = []
    for ax in range(frame.ndim):
        vals.append(np.max(np.abs(np.take(frame, 0, axis=ax))))
        vals.append(np.max(np.abs(np.take(frame, -1, axis=ax))))
    return float(max(vals))


def _apply_symbol(a: NetFunction, symbol: np.ndarray,
                  warn_label: str) -> NetFunction:
    fine = a.fine_grid
    frames = []
    for eps, fr in zip(a.ladder.values, a.frames):
        sup = float(np.max(np.abs(fr)))
        if sup > 0 and _edge_mass(fr) > 1e-8 * sup:
            warnings.warn(
                f"{warn_label}: frame at eps={eps:.6g} carries boundary mass "
                f"above 1e-8 of its sup; periodic wrap-around will pollute "
                f"the result (window the net first)",
                RuntimeWarning, stacklevel=3)
        out = inverse(forward(fr, fine) * symbol, fine)
        frames.append(out)
    return replace(a, frames=tuple(frames))


def spectral_derivative(a: NetFunction, alpha) -> NetFunction:
    """Frame-wise D^alpha with D = -i d/dx, computed as a Fourier
    multiplier on the refined grid."""
    if np.isscalar(alpha):
        if a.grid.dim != 1:
            raise ValueError("scalar alpha is ambiguous on a 2-D grid; "
                             "pass a multi-index")
        alpha = (int(alpha),)
    if all(k == 0 for k in alpha):
        return a
    sym = _derivative_symbol(a.fine_grid, alpha)
    return _apply_symbol(a, sym, "spectral_derivative")


@dataclass(frozen=True)
class UltradiffOperator:
    """Truncation Sum_{|alpha| <= n_max} a_alpha D^alpha of an infinite-order
    operator whose coefficients obey |a_alpha| <= C L^|alpha| / M_|alpha|."""

    coeffs: dict
    seq: WeightSequence
    bound_c: float
    bound_l: float

    def __post_init__(self):
        coeffs = {}
        for alpha, val in self.coeffs.items():
            alpha = (int(alpha),) if np.isscalar(alpha) else tuple(
                int(k) for k in alpha)
            coeffs[alpha] = complex(val)
        object.__setattr__(self, "coeffs", coeffs)
        if self.n_max > 64:
            raise ValueError("operator order capped at 64")
        log_m = self.seq.log_m
        for alpha, val in coeffs.items():
            order = sum(alpha)
            if order >= len(log_m):
                raise ValueError(f"weight table too short for order {order}")
            bound = (np.log(self.bound_c) + order * np.log(self.bound_l)
                     - log_m[order])
            if val != 0 and np.log(abs(val)) > bound + 1e-9:
                raise ValueError(
                    f"coefficient a_{alpha} = {val} violates the growth "
                    f"bound C*L^|a|/M_|a| with (C, L) = "
                    f"({self.bound_c}, {self.bound_l})")

    @property
    def n_max(self) -> int:
        return max((sum(a) for a in self.coeffs), default=0)

    def symbol(self, grid: GridSpec) -> np.ndarray:
        """P(-xi): the Fourier multiplier of Sum a_alpha D^alpha."""
        duals = grid.dual_points()
        sym = np.zeros(grid.shape, dtype=complex)
        for alpha, val in self.coeffs.items():
            if len(alpha) != grid.dim:
                raise ValueError("multi-index dimension mismatch")
            term = np.full(grid.shape, val, dtype=complex)
            for k, xi in zip(alpha, duals):
                if k:
                    term = term * (-xi) ** k
            sym += term
        return sym


def apply_ultradiff(op: UltradiffOperator, a: NetFunction) -> NetFunction:
    """Apply the truncated operator spectrally as a single multiplier."""
    sym = op.symbol(a.fine_grid)
    return _apply_symbol(a, sym, "apply_ultradiff")


def window_net(a: NetFunction, center=0.0, radius: float = None,
               sigma: float = 2.0) -> NetFunction:
    """Multiply every frame by a plateau window (1 within radius/2 of the
    center, 0 beyond radius), making the net edge-negligible before
    spectral operations."""
    if radius is None:
        radius = 0.5 * a.grid.half_width
    w = plateau_window(a.fine_grid, center, radius, sigma)
    frames = tuple(fr * w for fr in a.frames)
    return replace(a, frames=frames)


def point_value(a: NetFunction, x: GeneralizedPoint) -> GeneralizedNumber:
    """values[j] = frame_j(points[j]) by linear interpolation."""
    if x.ladder != a.ladder:
        raise GridMismatchError("point and net use different ladders")
    fine = a.fine_grid
    axis = fine.axis()
    pts = np.atleast_2d(np.asarray(x.points, dtype=float))
    if pts.shape[1] != a.grid.dim:
        raise ValueError("point dimension does not match the grid")
    lo, hi = axis[0], axis[-1]
    if np.any(pts < lo) or np.any(pts > hi):
        raise ValueError("generalized point leaves the grid")
    vals = []
    for j, fr in enumerate(a.frames):
        if a.grid.dim == 1:
            if np.iscomplexobj(fr):
                v = (np.interp(pts[j, 0], axis, fr.real)
                     + 1j * np.interp(pts[j, 0], axis, fr.imag))
            else:
                v = np.interp(pts[j, 0], axis, fr)
        else:
            v = _bilinear(fr, axis, pts[j])
        vals.append(v)
    return GeneralizedNumber(ladder=a.ladder, values=np.asarray(vals))


def _bilinear(fr: np.ndarray, axis: np.ndarray, pt: np.ndarray):
    dx = axis[1] - axis[0]
    out = None
    i = np.clip(((pt - axis[0]) // dx).astype(int), 0, len(axis) - 2)
    t = (pt - axis[i]) / dx
    f00 = fr[i[0], i[1]]
    f10 = fr[i[0] + 1, i[1]]
    f01 = fr[i[0], i[1] + 1]
    f11 = fr[i[0] + 1, i[1] + 1]
    out = ((1 - t[0]) * (1 - t[1]) * f00 + t[0] * (1 - t[1]) * f10
           + (1 - t[0]) * t[1] * f01 + t[0] * t[1] * f11)
    return out


@dataclass(frozen=True)
class NumberVerdict:
    """Growth classification of a generalized number on a finite ladder."""

    mode: str
    moderate: bool
    negligible: bool
    kappa: np.ndarray
    nu: np.ndarray
    k_moderate: float
    k_negligible: float

    @property
    def verdict(self) -> str:
        if self.negligible:
            return "negligible"
        if self.moderate:
            return "moderate"
        return "neither"

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "moderate": self.moderate,
            "negligible": self.negligible,
            "verdict": self.verdict,
            "kappa": [float(k) for k in self.kappa],
            "nu": [float(v) for v in self.nu],
            "k_moderate": self.k_moderate,
            "k_negligible": self.k_negligible,
        }


def _safe_log_abs(z: np.ndarray) -> np.ndarray:
    mag = np.abs(np.asarray(z, dtype=complex))
    out = np.full(mag.shape, LOG_FLOOR)
    pos = mag > 0
    out[pos] = np.log(mag[pos])
    return out


def _inverse_resilient(seq: WeightSequence, y: float) -> tuple:
    """assoc_inverse that deepens gevrey tables on demand (log magnitudes
    down at the exp floor need an M-range no default table covers)."""
    from .weights import SaturationError
    for _ in range(16):
        try:
            return assoc_inverse(seq, y), seq
        except SaturationError:
            if seq.kind != "gevrey":
                raise
            seq = WeightSequence.gevrey(seq.s, 2 * seq.p_max)
    raise SaturationError("assoc_inverse table deepening did not converge",
                          seq.t_saturation)


def growth_statistics(ladder: EpsilonLadder, log_abs: np.ndarray,
                      seq: WeightSequence):
    """Per-rung growth rates kappa_j (excess) and decay rates nu_j against
    the scales exp(+-M(k/eps))."""
    eps = ladder.values
    kappa = np.zeros(ladder.count)
    nu = np.zeros(ladder.count)
    for j, (e, y) in enumerate(zip(eps, log_abs)):
        t, seq = _inverse_resilient(seq, max(y, 0.0))
        kappa[j] = e * t
        t, seq = _inverse_resilient(seq, max(-y, 0.0))
        nu[j] = e * t
    return kappa, nu


def _bounded(trace: np.ndarray) -> bool:
    """Empirical 'bounded along the ladder': the tail does not keep growing
    past the head."""
    half = len(trace) // 2
    head = float(np.max(trace[:half]))
    tail = float(np.max(trace[half:]))
    return tail <= max(1.5 * head, head + 0.1)


def _tends_to_zero(trace: np.ndarray) -> bool:
    """Empirical 'tends to 0': final value below half the initial one and
    below 0.5, with a non-increasing tail."""
    final = float(trace[-1])
    initial = float(trace[0])
    return final <= max(0.5 * initial, 0.05) and final <= 0.5


def _tends_to_infinity(trace: np.ndarray) -> bool:
    half = len(trace) // 2
    head = float(np.min(trace[:half])) if half else float(trace[0])
    tail = float(np.min(trace[half:]))
    return tail >= max(2.0 * head, 1.0)


def classify_generalized_number(z: GeneralizedNumber, seq: WeightSequence,
                                mode: str = "beurling",
                                reference_scale: float = 1.0) -> NumberVerdict:
    """Moderate / negligible / neither verdict for a generalized number.

    kappa_j = eps_j * assoc_inverse(max(log|z_j|, 0)) estimates the k in
    |z_j| <= e^{M(k/eps_j)}; nu_j does the same for decay.  Quantifier
    alternation over all k is certified empirically from the trend of these
    traces (an estimator, not a proof).
    """
    if mode not in ("beurling", "roumieu"):
        raise ValueError("mode must be 'beurling' or 'roumieu'")
    if z.ladder.count < 6:
        raise ValueError("classification needs at least 6 rungs")
    log_abs = _safe_log_abs(z.values)
    kappa, nu = growth_statistics(z.ladder, log_abs, seq)

    floor = MACHINE_FLOOR * (1.0 + abs(reference_scale))
    at_floor = bool(np.max(np.abs(z.values)) <= floor)
    # a rung indistinguishable from zero certifies any decay rate there;
    # censor it so a constant -log(floor) cannot mask genuine decay trends
    censored = np.abs(z.values) <= floor
    nu_eff = np.where(censored, np.inf, nu)

    if mode == "beurling":
        moderate = _bounded(kappa)
        negligible = at_floor or _tends_to_infinity(nu_eff)
    else:
        moderate = _tends_to_zero(kappa)
        negligible = at_floor or bool(np.min(nu_eff) >= 0.05)
        moderate = moderate or negligible
    if negligible:
        moderate = True
    half = len(kappa) // 2
    return NumberVerdict(
        mode=mode,
        moderate=moderate,
        negligible=negligible,
        kappa=kappa,
        nu=nu,
        k_moderate=float(np.max(kappa[half:])),
        k_negligible=float(np.min(nu)),
    )
