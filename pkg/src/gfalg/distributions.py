"""Catalog of model singular objects with exact spectral data, and their
regularization f * phi_eps into nets.

Spectral data use the convention fhat(xi) = int f(x) e^{+i x xi} dx, under
which delta -> 1, delta' -> -i*xi, exp(-x^2) -> sqrt(pi) exp(-xi^2/4) and
pv(1/x) -> i*pi*sgn(xi).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import AliasingError, GfalgError
from .grids import GridSpec, forward, inverse
from .mollifier import MollifierNet, plateau_window
from .nets import EpsilonLadder, NetFunction

#: internal head-room factor above the bare aliasing bound eps*Nyquist >= 2;
#: the margin absorbs spectral broadening from windowing.
ALIAS_MARGIN = 2.0

MAX_OVERSAMPLE = 64


class SpatialPathError(GfalgError):
    """The kind has no usable closed-form transform; regularization goes
    through the spatial path instead."""


@dataclass(frozen=True)
class ModelDistribution:
    """Catalog entry.  Kinds: delta, delta_prime, heaviside, pv_inverse,
    gaussian, gaussian_times_sine, polynomial, tensor2d, table."""

    kind: str
    dim: int = 1
    freq: float = 0.0
    coeffs: tuple = ()
    window_radius: float = 5.0
    factors: tuple = ()
    table: dict = None

    _KINDS = ("delta", "delta_prime", "heaviside", "pv_inverse", "gaussian",
              "gaussian_times_sine", "polynomial", "tensor2d", "table")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == "tensor2d":
            if self.dim != 2 or len(self.factors) != 2:
                raise ValueError("tensor2d needs dim=2 and two 1-D factors")
            for f in self.factors:
                if f.dim != 1:
                    raise ValueError("tensor2d factors must be 1-D")
        elif self.dim != 1:
            raise ValueError(f"kind {self.kind!r} is 1-D only")
        if self.kind == "gaussian_times_sine" and self.freq <= 0:
            raise ValueError("gaussian_times_sine needs freq > 0")
        if self.kind == "polynomial" and not self.coeffs:
            raise ValueError("polynomial needs coefficients")
        if self.kind == "table":
            t = self.table
            if (not isinstance(t, dict)
                    or not {"xi", "re", "im"} <= set(t)
                    or len(t["xi"]) != len(t["re"])
                    or len(t["xi"]) != len(t["im"])):
                raise ValueError(
                    'table kind needs {"xi": [...], "re": [...], "im": [...]}'
                    " of equal lengths")

    @classmethod
    def from_table_json(cls, path: str) -> "ModelDistribution":
        with open(path) as fh:
            return cls(kind="table", table=json.load(fh))


def spectral_data(m: ModelDistribution):
    """The function xi -> fhat(xi), for kinds with closed-form or tabulated
    transforms."""
    if m.kind == "delta":
        return lambda xi: np.ones_like(np.asarray(xi, dtype=float))
    if m.kind == "delta_prime":
        # derivative of delta: (d/dx delta)^ = -i xi under e^{+i x xi}
        return lambda xi: -1j * np.asarray(xi, dtype=float)
    if m.kind == "gaussian":
        return lambda xi: np.sqrt(np.pi) * np.exp(-np.asarray(xi) ** 2 / 4.0)
    if m.kind == "pv_inverse":
        return lambda xi: 1j * np.pi * np.sign(np.asarray(xi, dtype=float))
    if m.kind == "gaussian_times_sine":
        a = m.freq

        def fhat(xi):
            xi = np.asarray(xi, dtype=float)
            return (np.sqrt(np.pi) / 2j) * (np.exp(-(xi + a) ** 2 / 4.0)
                                            - np.exp(-(xi - a) ** 2 / 4.0))
        return fhat
    if m.kind == "table":
        xi_t = np.asarray(m.table["xi"], dtype=float)
        re_t = np.asarray(m.table["re"], dtype=float)
        im_t = np.asarray(m.table["im"], dtype=float)
        order = np.argsort(xi_t)
        xi_t, re_t, im_t = xi_t[order], re_t[order], im_t[order]

        def fhat(xi):
            xi = np.asarray(xi, dtype=float)
            return (np.interp(xi, xi_t, re_t, left=0.0, right=0.0)
                    + 1j * np.interp(xi, xi_t, im_t, left=0.0, right=0.0))
        return fhat
    raise SpatialPathError(
        f"kind {m.kind!r} has no tabulated transform; regularize() uses its "
        "spatial path")


def required_oversample(ladder: EpsilonLadder, grid: GridSpec,
                        margin: float = ALIAS_MARGIN) -> int:
    """Smallest power-of-two refinement making the scaled mollifier spectrum
    fit below Nyquist with head-room at every rung."""
    need = margin * 2.0 / (ladder.eps_min * grid.dual_max)
    m = 1
    while m < need:
        m *= 2
        if m > MAX_OVERSAMPLE:
            eps_min = margin * 2.0 / (MAX_OVERSAMPLE * grid.dual_max)
            raise AliasingError(
                f"ladder reaches eps={ladder.eps_min:.3g}, below the smallest "
                f"value {eps_min:.3g} resolvable with oversampling capped at "
                f"{MAX_OVERSAMPLE}", eps_min_admissible=eps_min)
    return m


def _maybe_real(frame: np.ndarray) -> np.ndarray:
    tol = 1e-9 * (1.0 + float(np.max(np.abs(frame))))
    if float(np.max(np.abs(frame.imag))) <= tol:
        return np.ascontiguousarray(frame.real)
    return frame


def _spatial_samples(m: ModelDistribution, grid: GridSpec) -> np.ndarray:
    """Classical samples for kinds regularized through the discrete
    transform of their (windowed) spatial restriction."""
    x = grid.axis()
    if m.kind == "polynomial":
        q = np.polynomial.polynomial.polyval(x, np.asarray(m.coeffs))
        return q * plateau_window(grid, 0.0, m.window_radius)
    raise SpatialPathError(f"kind {m.kind!r} has no spatial sample path")


def _heaviside_frame(psi_eps: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Exact band-limited-plus-ramp antiderivative of the periodized
    phi_eps: the cumulative of the delta frame with H(0) = 1/2."""
    xi = grid.dual_axis()
    coef = np.zeros(grid.n, dtype=complex)
    nz = xi != 0
    # antiderivative coefficients: (dA/dx)^ = -i xi A^ must equal psi_eps
    coef[nz] = psi_eps[nz] / (-1j * xi[nz])
    osc = inverse(coef, grid).real
    # the xi=0 mode of phi_eps has mean psi(0)/(2L); restore it as a ramp
    return 0.5 + grid.axis() / (2.0 * grid.half_width) + osc


def regularize(m: ModelDistribution, moll: MollifierNet,
               ladder: EpsilonLadder, grid: GridSpec,
               mode: str = "beurling", weight=None,
               margin: float = ALIAS_MARGIN) -> NetFunction:
    """The embedding on the catalog: frames are f * phi_eps, built on an
    internally refined grid chosen so every psi(eps*xi) is alias-free."""
    if m.kind == "tensor2d":
        return _regularize_tensor(m, moll, ladder, grid, mode, weight, margin)
    if grid.dim != 1:
        raise ValueError("non-tensor kinds are 1-D")
    over = required_oversample(ladder, grid, margin)
    fine = grid.refine(over)
    xi = fine.dual_axis()
    abs_xi = np.abs(xi)

    fhat_vals = None
    if m.kind not in ("delta", "heaviside"):
        try:
            fhat_vals = spectral_data(m)(xi)
        except SpatialPathError:
            fhat_vals = forward(_spatial_samples(m, fine), fine)

    frames = []
    for eps in ladder.values:
        psi_eps = moll.profile(eps * abs_xi)
        if m.kind == "delta":
            frames.append(inverse(psi_eps, fine).real)
        elif m.kind == "heaviside":
            frames.append(_heaviside_frame(psi_eps, fine))
        else:
            frames.append(_maybe_real(inverse(fhat_vals * psi_eps, fine)))
    return NetFunction(ladder=ladder, grid=grid, frames=tuple(frames),
                       mode=mode, weight=weight, oversample=over)


def _regularize_tensor(m, moll, ladder, grid, mode, weight, margin):
    """tensor2d frames: outer products of the factors' 1-D frames, stored on
    the base 2-D grid (pointwise-exact decimated samples; keeping small-eps
    2-D frames on a refined grid would be prohibitively large)."""
    if grid.dim != 2:
        raise ValueError("tensor2d needs a 2-D grid")
    axis_grid = GridSpec(1, grid.half_width, grid.n)
    nets = [regularize(f, moll, ladder, axis_grid, mode, weight, margin)
            for f in m.factors]
    f1 = nets[0].base_frames()
    f2 = nets[1].base_frames()
    frames = tuple(np.outer(a, b) for a, b in zip(f1, f2))
    return NetFunction(ladder=ladder, grid=grid, frames=frames,
                       mode=mode, weight=weight, oversample=1)


@dataclass(frozen=True)
class WfOracle:
    """Classical wave front set of a catalog entry, queryable per window."""

    kind: str
    entries: tuple  # ((point, direction), ...) with 'line' markers for 2-D

    @property
    def is_empty(self) -> bool:
        return not self.entries

    def singular_directions(self, center, radius: float) -> set:
        """Directions singular somewhere within ``radius`` of ``center``."""
        center = np.atleast_1d(np.asarray(center, dtype=float))
        out = set()
        for point, direction in self.entries:
            if point[0] == "line":
                # the set {x : x[axis] = value}, any other coordinate
                _, axis, value = point
                dist = abs(center[axis] - value)
            else:
                dist = float(np.linalg.norm(center - np.asarray(point)))
            if dist <= radius:
                out.add(direction)
        return out


def classical_wf_oracle(m: ModelDistribution) -> WfOracle:
    if m.kind in ("delta", "delta_prime", "pv_inverse", "heaviside"):
        entries = (((0.0,), (1.0,)), ((0.0,), (-1.0,)))
        return WfOracle(kind=m.kind, entries=entries)
    if m.kind in ("gaussian", "gaussian_times_sine", "polynomial"):
        return WfOracle(kind=m.kind, entries=())
    if m.kind == "tensor2d":
        f1, f2 = m.factors
        singular_1d = ("delta", "delta_prime", "pv_inverse", "heaviside")
        if f1.kind in singular_1d and f2.kind not in singular_1d:
            entries = ((("line", 0, 0.0), (1.0, 0.0)),
                       (("line", 0, 0.0), (-1.0, 0.0)))
            return WfOracle(kind=m.kind, entries=entries)
        if not (f1.kind in singular_1d or f2.kind in singular_1d):
            return WfOracle(kind=m.kind, entries=())
        raise ValueError(
            "oracle covers tensor2d only for singular-first-factor or "
            "smooth-smooth combinations")
    raise ValueError(f"no classical oracle for kind {m.kind!r}")
