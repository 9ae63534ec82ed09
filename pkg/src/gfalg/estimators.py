"""Growth classification of nets, the zero-order null test, the
Landau-Kolmogorov inequality check, and the Fourier-decay regularity test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import GridSpec, forward
from .nets import (EpsilonLadder, GeneralizedNumber, NetFunction,
                   _apply_symbol, _bounded, _derivative_symbol,
                   _safe_log_abs, _tends_to_infinity, _tends_to_zero,
                   classify_generalized_number, growth_statistics)
from .weights import WeightSequence, assoc, resolved_for

#: relative magnitude under which transform samples count as noise, not
#: data, in decay fits.  Set well above fft rounding noise: the spatial
#: windows used for localization carry heavy spectral tails of their own,
#: and keeping those tails down to rounding level lets an eps-independent
#: window artifact dominate the weighted sups and mask genuine growth.
SPECTRAL_FLOOR = 1e-8

#: geometric search grid for the (k, h) quantifier patterns.
KH_GRID = 2.0 ** np.arange(-4, 5)

#: the "for all" legs are additionally certified one octave past the hard
#: end of the grid, so a witness cannot sit exactly on a boundary artifact.
FORALL_EXTENSION = 2.0 ** -5

#: log-residual slack operationalizing "O(...)" along the ladder.
O_SLACK = 1.0


def _multi_indices(dim: int, order_max: int):
    if dim == 1:
        return [(k,) for k in range(order_max + 1)]
    return [(i, j) for i in range(order_max + 1)
            for j in range(order_max + 1 - i)]


@dataclass(frozen=True)
class SeminormLadder:
    """Per-epsilon values of the derivative-graded sup-norm
    max_{|a| <= alpha_max, x in K} |f^(a)(x)| / (h^|a| M_|a|)."""

    ladder: EpsilonLadder
    values: np.ndarray
    box: tuple
    h: float
    alpha_max: int


def _box_mask(grid: GridSpec, box) -> np.ndarray:
    lo, hi = box
    pts = grid.points()
    lo = np.broadcast_to(np.asarray(lo, dtype=float), (grid.dim,))
    hi = np.broadcast_to(np.asarray(hi, dtype=float), (grid.dim,))
    mask = np.ones(grid.shape, dtype=bool)
    for ax, p in enumerate(pts):
        mask &= (p >= lo[ax]) & (p <= hi[ax])
    if not mask.any():
        raise ValueError("box contains no grid points")
    return mask


def seminorm_ladder(a: NetFunction, box, h: float, alpha_max: int,
                    seq: WeightSequence = None) -> SeminormLadder:
    """Derivative-graded sup-norms over the box, one value per rung."""
    if alpha_max > 16:
        raise ValueError("alpha_max capped at 16")
    if seq is None:
        seq = a.weight
    if not isinstance(seq, WeightSequence):
        raise ValueError("a weight sequence is required")
    fine = a.fine_grid
    mask = _box_mask(fine, box)
    values = np.zeros(a.ladder.count)
    for alpha in _multi_indices(a.grid.dim, alpha_max):
        order = sum(alpha)
        if order == 0:
            deriv = a
        else:
            sym = _derivative_symbol(fine, alpha)
            deriv = _apply_symbol(a, sym, "seminorm_ladder")
        denom = np.exp(order * np.log(h) + seq.log_m[order])
        for j, fr in enumerate(deriv.frames):
            values[j] = max(values[j],
                            float(np.max(np.abs(fr)[mask])) / denom)
    return SeminormLadder(ladder=a.ladder, values=values, box=tuple(box),
                         h=h, alpha_max=alpha_max)


@dataclass(frozen=True)
class GrowthVerdict:
    classification: str  # moderate | negligible | neither | inconclusive
    mode: str
    fitted: dict
    kappa: dict = field(repr=False)
    nu: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.classification == "negligible":
            pass  # negligible implies moderate by construction below

    @property
    def moderate(self) -> bool:
        return self.classification in ("moderate", "negligible")

    @property
    def negligible(self) -> bool:
        return self.classification == "negligible"

    def to_json(self) -> dict:
        return {
            "classification": self.classification,
            "mode": self.mode,
            "fitted": {str(k): float(v) for k, v in self.fitted.items()},
            "kappa": {str(h): [float(x) for x in tr]
                      for h, tr in self.kappa.items()},
            "nu": [float(x) for x in self.nu],
        }


MODERATION_H_GRID = (4.0, 1.0, 0.25)
MODERATION_ALPHA_MAX = 4


def classify_net(a: NetFunction, box, mode: str = None,
                 seq: WeightSequence = None,
                 h_grid=MODERATION_H_GRID,
                 alpha_max: int = MODERATION_ALPHA_MAX) -> GrowthVerdict:
    """Moderate / negligible / neither / inconclusive verdict for a net.

    Moderation samples derivative-graded seminorms over the h grid;
    negligibility is decided on the 0-th order sup-norm alone (the null
    characterization licenses exactly this shortcut).
    """
    mode = mode or a.mode
    if seq is None:
        seq = a.weight
    if not isinstance(seq, WeightSequence):
        raise ValueError("a weight sequence is required")
    if a.ladder.count < 6:
        raise ValueError("classification needs at least 6 rungs")

    kappas = {}
    bounded_per_h = {}
    tozero_per_h = {}
    fitted = {}
    for h in h_grid:
        sl = seminorm_ladder(a, box, h, alpha_max, seq)
        log_abs = _safe_log_abs(sl.values)
        kappa, _ = growth_statistics(a.ladder, log_abs, seq)
        kappas[h] = kappa
        bounded_per_h[h] = _bounded(kappa)
        tozero_per_h[h] = _tends_to_zero(kappa)
        fitted[f"k_at_h={h:g}"] = float(np.max(kappa[len(kappa) // 2:]))

    # zero-order sups for the null test
    sl0 = seminorm_ladder(a, box, 1.0, 0, seq)
    sup_scale = max(float(np.max(np.abs(fr))) for fr in a.frames)
    z = GeneralizedNumber(a.ladder, sl0.values.astype(complex))
    zero_verdict = classify_generalized_number(z, seq, mode,
                                               reference_scale=sup_scale)
    negligible = zero_verdict.negligible
    fitted["k_negligible"] = zero_verdict.k_negligible

    if mode == "beurling":
        moderate = all(bounded_per_h.values())
    else:
        moderate = any(tozero_per_h.values())
    if negligible:
        classification = "negligible"
    elif moderate:
        classification = "moderate"
    else:
        # distinguish clear growth from noise: growth at the most
        # demanding h (smallest) must show an increasing trajectory
        h_hard = min(h_grid)
        kappa = kappas[h_hard]
        half = len(kappa) // 2
        clearly_growing = float(np.min(kappa[half:])) >= max(
            1.2 * float(np.max(kappa[:half])),
            float(np.max(kappa[:half])) + 0.05)
        classification = "neither" if clearly_growing else "inconclusive"
    return GrowthVerdict(classification=classification, mode=mode,
                         fitted=fitted, kappa=kappas, nu=zero_verdict.nu)


@dataclass(frozen=True)
class LKReport:
    lhs: float
    rhs: float
    ratio: float
    holds: bool
    k: int
    n: int

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio,
                "holds": self.holds, "k": self.k, "n": self.n}


def landau_kolmogorov_check(f: np.ndarray, grid: GridSpec, k: int,
                            n: int) -> LKReport:
    """Check sup_{|a|=k} ||f^(a)|| <= 2 pi d^k ||f||^{1-k/n} *
    (sup_{|a|=n} ||f^(a)||)^{k/n} with spectral derivative sups."""
    if not 0 < k < n <= 8:
        raise ValueError("need 0 < k < n <= 8")
    f = np.asarray(f)
    if f.shape != grid.shape:
        raise ValueError("samples do not match the grid")
    d = grid.dim

    def sup_order(order: int) -> float:
        best = 0.0
        fhat = forward(f, grid)
        from .grids import inverse as _inv
        for alpha in _multi_indices(d, order):
            if sum(alpha) != order:
                continue
            sym = _derivative_symbol(grid, alpha)
            best = max(best, float(np.max(np.abs(_inv(fhat * sym, grid)))))
        return best

    norm0 = float(np.max(np.abs(f)))
    lhs = sup_order(k)
    sup_n = sup_order(n)
    rhs = 2.0 * np.pi * d ** k * norm0 ** (1.0 - k / n) * sup_n ** (k / n)
    ratio = lhs / rhs if rhs > 0 else (0.0 if lhs == 0 else np.inf)
    return LKReport(lhs=lhs, rhs=rhs, ratio=float(ratio),
                    holds=bool(lhs <= rhs * (1.0 + 1e-9)), k=k, n=n)


@dataclass(frozen=True)
class RegularityVerdict:
    verdict: str  # regular | not_regular | inconclusive
    mode: str
    witness: dict
    residual_table: dict = field(repr=False)

    @property
    def regular(self) -> bool:
        return self.verdict == "regular"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "witness": {k: float(v) for k, v in self.witness.items()},
            "residuals": {k: [float(x) for x in v]
                          for k, v in self.residual_table.items()},
        }


def _log_transform_sups(a: NetFunction, h_values, seq: WeightSequence,
                        node_mask=None):
    """For each rung j and each h: max over admissible dual nodes of
    log|fhat_j(xi)| + M(|xi|/h).  Nodes below the fft noise floor of the
    frame are excluded (they carry rounding noise, not decay data)."""
    fine = a.fine_grid
    radius = fine.dual_radius()
    flat_r = radius.ravel()
    h_values = np.asarray(h_values, dtype=float)
    seq = resolved_for(seq, float(flat_r.max()) / float(h_values.min()))
    penalties = {float(h): assoc(seq, flat_r / h) for h in h_values}
    out = {float(h): np.full(a.ladder.count, -np.inf) for h in h_values}
    mags = [np.abs(forward(fr, fine)).ravel() for fr in a.frames]
    # one floor for the whole ladder: frames windowed down to rounding noise
    # must not be re-normalized into fake decay data
    top = max((float(m.max()) for m in mags), default=0.0)
    for j, fhat in enumerate(mags):
        keep = fhat > SPECTRAL_FLOOR * top if top > 0 else np.zeros_like(
            fhat, dtype=bool)
        if node_mask is not None:
            keep &= node_mask
        if not keep.any():
            continue
        log_f = np.log(fhat[keep])
        for h in h_values:
            out[float(h)][j] = float(np.max(log_f + penalties[float(h)][keep]))
    return out, seq


def _pattern_search(a: NetFunction, sups_by_h, seq: WeightSequence,
                    mode: str):
    """Search for the mode's quantifier pattern.

    Beurling: exists k such that for every h the residual sequence
    log-sup(h) - M(k/eps) is bounded (value at the largest eps + slack).
    Roumieu: exists h working for every k.  The 'for all' leg includes one
    octave beyond the hard end of the grid.
    """
    eps = a.ladder.values
    seq = resolved_for(seq, float(KH_GRID.max()) / float(eps.min()))
    scale = {float(k): np.array([assoc(seq, k / e) for e in eps])
             for k in np.concatenate([KH_GRID, [FORALL_EXTENSION]])}

    def bounded(h: float, k: float) -> bool:
        sup = sups_by_h[float(h)]
        if np.all(np.isneginf(sup)):
            return True  # empty data: nothing to bound
        r = sup - scale[float(k)]
        finite = np.isfinite(r)
        if not finite.any():
            return True
        rf = r[finite]
        r0 = rf[0]  # largest eps among rungs carrying data
        # bounded: never above the head value, and the tail is not on a
        # rebound (a dip-then-grow sequence is unbounded in the limit even
        # if it has not yet re-crossed its head value on the ladder)
        return bool(np.max(rf) <= r0 + O_SLACK
                    and rf[-1] <= np.min(rf) + O_SLACK)

    residuals = {}
    if mode == "beurling":
        h_all = np.concatenate([[FORALL_EXTENSION], KH_GRID])
        for k in KH_GRID[::-1]:
            if all(bounded(h, k) for h in h_all):
                return "regular", {"k": float(k)}, residuals
        k_max = float(KH_GRID.max())
        for h in h_all:
            r = sups_by_h[float(h)] - scale[k_max]
            residuals[f"h={h:g},k={k_max:g}"] = r
        return "not_regular", {"k_tried_max": k_max}, residuals
    else:
        k_all = np.concatenate([[FORALL_EXTENSION], KH_GRID])
        for h in KH_GRID[::-1]:
            if all(bounded(h, k) for k in k_all):
                return "regular", {"h": float(h)}, residuals
        h_max = float(KH_GRID.max())
        for k in k_all:
            r = sups_by_h[h_max] - scale[float(k)]
            residuals[f"h={h_max:g},k={k:g}"] = r
        return "not_regular", {"h_tried_max": h_max}, residuals


def regularity_test(a: NetFunction, mode: str = None,
                    seq: WeightSequence = None) -> RegularityVerdict:
    """Uniform Fourier-decay regularity of a compactly supported net:
    does |fhat_eps(xi)| e^{M(|xi|/h)} stay O(e^{M(k/eps)}) in the mode's
    quantifier pattern over the (k, h) grid?"""
    mode = mode or a.mode
    if mode not in ("beurling", "roumieu"):
        raise ValueError("mode must be 'beurling' or 'roumieu'")
    if seq is None:
        seq = a.weight
    if not isinstance(seq, WeightSequence):
        raise ValueError("a weight sequence is required")
    h_values = np.concatenate([[FORALL_EXTENSION], KH_GRID])
    sups, seq_big = _log_transform_sups(a, h_values, seq)
    verdict, witness, residuals = _pattern_search(a, sups, seq_big, mode)
    return RegularityVerdict(verdict=verdict, mode=mode, witness=witness,
                             residual_table=residuals)
