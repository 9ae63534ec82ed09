"""Generalized wave front sets: cone-restricted Fourier decay of windowed
net frames, and comparison against classical singularity oracles."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ResolutionError
from .estimators import _log_transform_sups, _pattern_search
from .grids import GridSpec
from .mollifier import plateau_window
from .nets import NetFunction
from .weights import WeightSequence

#: dual nodes with |xi| below this are excluded from cone sups: decay
#: statements are asymptotic and the core is dominated by window mass.
LOW_FREQUENCY_CUTOFF = 2.0

MIN_CONE_NODES = 8

#: Gevrey index of the spatial windows; strictly below common weight orders
#: so the window itself never creates spurious cone growth.
WINDOW_SIGMA = 1.5

#: a windowed frame whose sup falls below this fraction of its parent
#: frame's sup holds only transform round-off, not data; it is zeroed so
#: the round-off cannot masquerade as spectral growth.
WINDOW_NOISE_REL = 1e-10


@dataclass(frozen=True)
class Cone:
    label: str
    direction: tuple  # unit vector
    half_angle: float  # radians; 1-D rays use pi/2 (a half-line)

    def contains(self, vectors) -> np.ndarray:
        """Boolean mask: does each dual vector lie in the cone?"""
        d = np.asarray(self.direction, dtype=float)
        if len(d) == 1:
            xi = np.asarray(vectors[0])
            return np.sign(xi) == np.sign(d[0])
        norms = np.hypot(vectors[0], vectors[1])
        with np.errstate(invalid="ignore", divide="ignore"):
            cos = (vectors[0] * d[0] + vectors[1] * d[1]) / norms
        cos = np.where(norms > 0, cos, -2.0)
        return cos >= np.cos(self.half_angle)


@dataclass(frozen=True)
class ConePartition:
    dim: int
    cones: tuple

    @staticmethod
    def rays_1d() -> "ConePartition":
        return ConePartition(dim=1, cones=(
            Cone("+", (1.0,), np.pi / 2),
            Cone("-", (-1.0,), np.pi / 2)))

    @staticmethod
    def sectors_2d(n_cones: int = 8, overlap: float = 0.25) -> "ConePartition":
        if n_cones < 2:
            raise ValueError("need at least 2 cones")
        half = (1.0 + overlap) * np.pi / n_cones
        cones = []
        for i in range(n_cones):
            th = 2.0 * np.pi * i / n_cones
            cones.append(Cone(f"sector{i}", (np.cos(th), np.sin(th)), half))
        return ConePartition(dim=2, cones=tuple(cones))

    @staticmethod
    def default(dim: int) -> "ConePartition":
        return ConePartition.rays_1d() if dim == 1 else ConePartition.sectors_2d()


@dataclass(frozen=True)
class ConeVerdict:
    label: str
    direction: tuple
    verdict: str  # regular | singular | inconclusive
    witness: dict
    half_angle: float = np.pi / 2

    def to_json(self) -> dict:
        return {"label": self.label,
                "direction": [float(v) for v in self.direction],
                "verdict": self.verdict,
                "witness": {k: float(v) for k, v in self.witness.items()}}


def sigma_g(a: NetFunction, cones: ConePartition = None, mode: str = None,
            seq: WeightSequence = None) -> tuple:
    """Per-cone decay verdicts of a compactly supported (windowed) net: a
    cone is regular when the mode's (k, h) quantifier pattern bounds the
    cone-restricted weighted transform sup along the ladder."""
    mode = mode or a.mode
    if seq is None:
        seq = a.weight
    if not isinstance(seq, WeightSequence):
        raise ValueError("a weight sequence is required")
    if cones is None:
        cones = ConePartition.default(a.grid.dim)
    if cones.dim != a.grid.dim:
        raise ValueError("cone partition dimension mismatch")
    fine = a.fine_grid
    duals = fine.dual_points()
    radius = fine.dual_radius().ravel()
    from .estimators import FORALL_EXTENSION, KH_GRID
    h_values = np.concatenate([[FORALL_EXTENSION], KH_GRID])
    out = []
    for cone in cones.cones:
        mask = cone.contains(duals).ravel() & (radius >= LOW_FREQUENCY_CUTOFF)
        if int(mask.sum()) < MIN_CONE_NODES:
            raise ResolutionError(
                f"cone {cone.label} holds only {int(mask.sum())} dual nodes; "
                "refine the grid")
        sups, seq_big = _log_transform_sups(a, h_values, seq, node_mask=mask)
        verdict, witness, _ = _pattern_search(a, sups, seq_big, mode)
        out.append(ConeVerdict(
            label=cone.label, direction=cone.direction,
            verdict="regular" if verdict == "regular" else "singular",
            witness=witness, half_angle=cone.half_angle))
    return tuple(out)


@dataclass(frozen=True)
class WaveFrontReport:
    centers: tuple
    radius: float
    mode: str
    entries: tuple  # ((center, ConeVerdict), ...)

    @property
    def singular_set(self) -> tuple:
        return tuple((c, v.direction) for c, v in self.entries
                     if v.verdict == "singular")

    def flagged_centers(self) -> tuple:
        return tuple(sorted({c for c, _ in self.singular_set}))

    def verdicts_at(self, center) -> tuple:
        return tuple(v for c, v in self.entries if c == center)

    def to_json(self) -> dict:
        return {
            "centers": [list(np.atleast_1d(c).astype(float))
                        for c in self.centers],
            "radius": self.radius,
            "mode": self.mode,
            "entries": [
                {"center": list(np.atleast_1d(c).astype(float)),
                 **v.to_json()}
                for c, v in self.entries],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["center", "cone", "verdict"])
        for c, v in self.entries:
            wr.writerow([json.dumps(list(np.atleast_1d(c).astype(float))),
                         v.label, v.verdict])
        return buf.getvalue()


def wavefront(a: NetFunction, window_centers, window_radius: float,
              cones: ConePartition = None, mode: str = None,
              seq: WeightSequence = None) -> WaveFrontReport:
    """Window-and-test wave front estimate: for each center, localize the
    net with a plateau window and run the per-cone decay test."""
    mode = mode or a.mode
    if cones is None:
        cones = ConePartition.default(a.grid.dim)
    fine = a.fine_grid
    entries = []
    for center in window_centers:
        c_arr = np.atleast_1d(np.asarray(center, dtype=float))
        if np.any(np.abs(c_arr) + window_radius > a.grid.half_width):
            raise ValueError(f"window at {center} leaves the grid")
        w = plateau_window(fine, tuple(c_arr), window_radius, WINDOW_SIGMA)
        loc_frames = []
        for fr in a.frames:
            lf = fr * w
            if np.max(np.abs(lf)) <= WINDOW_NOISE_REL * np.max(np.abs(fr)):
                lf = np.zeros_like(lf)
            loc_frames.append(lf)
        localized = replace(a, frames=tuple(loc_frames))
        for v in sigma_g(localized, cones, mode, seq):
            key = float(c_arr[0]) if a.grid.dim == 1 else tuple(map(float, c_arr))
            entries.append((key, v))
    return WaveFrontReport(centers=tuple(
        float(np.atleast_1d(c)[0]) if a.grid.dim == 1
        else tuple(map(float, np.atleast_1d(c))) for c in window_centers),
        radius=window_radius, mode=mode, entries=tuple(entries))


def wf_compare(oracle, report: WaveFrontReport) -> bool:
    """True iff the report's singular set matches the classical oracle up to
    window granularity: every oracle direction near a window must be flagged
    there, and every flagged cone must contain an oracle direction within
    one window radius."""
    for center in report.centers:
        expected = oracle.singular_directions(center, report.radius)
        for v in report.verdicts_at(center):
            dir_arr = np.asarray(v.direction, dtype=float)
            covered = {
                d for d in expected
                if _direction_in_cone(np.asarray(d, dtype=float), v)}
            if v.verdict == "singular" and not covered:
                return False
            if v.verdict != "singular" and covered:
                return False
    return True


def _direction_in_cone(d: np.ndarray, v: ConeVerdict) -> bool:
    c = np.asarray(v.direction, dtype=float)
    if len(c) == 1:
        return bool(np.sign(d[0]) == np.sign(c[0]))
    cosang = float(np.dot(d, c) / (np.linalg.norm(d) * np.linalg.norm(c)))
    return cosang >= np.cos(v.half_angle)
