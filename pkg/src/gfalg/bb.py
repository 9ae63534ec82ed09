"""Weight-function mode: Fourier--Lebesgue norms with a submultiplicative
weight exp(lambda * omega(|xi|)), their equivalences, net classification at
the scales exp(k * omega(1/eps)), and the cross-check against classical
polynomial (Colombeau) scales for omega = log(1+t).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import GridSpec, forward
from .nets import (MACHINE_FLOOR, NetFunction, _bounded, _edge_mass,
                   _tends_to_infinity, _tends_to_zero)
from .weights import WeightFunction

#: lambda exponents sampled by the graded moderation test.
LAMBDA_GRID = (0.25, 1.0, 4.0)

#: polynomial decay orders tested by the Colombeau cross-check.
Q_GRID = tuple(range(1, 9))

#: exponent size beyond which norm values are reported only in log space
#: (exp would overflow float64 near 709).
LOG_SPACE_GUARD = 600.0

#: log-residual slack operationalizing "O(...)" along a ladder.
_SLACK = 1.0

_EDGE_TOL = 1e-6


def _require_edge_negligible(f: np.ndarray, label: str) -> None:
    sup = float(np.max(np.abs(f)))
    if sup > 0 and _edge_mass(np.asarray(f)) > _EDGE_TOL * sup:
        raise ValueError(
            f"{label}: samples are not edge-negligible; window them first "
            "(dual-grid quadrature assumes a compactly supported function)")


def _log_norm(f: np.ndarray, grid: GridSpec, w: WeightFunction,
              lam: float, variant) -> float:
    """log of the weighted Fourier--Lebesgue norm; -inf for the zero
    function.  All accumulation happens in log space so that large
    lambda*omega exponents cannot overflow."""
    fhat = forward(np.asarray(f), grid)
    mag = np.abs(fhat).ravel()
    radius = grid.dual_radius().ravel()
    log_w = lam * w(radius)
    pos = mag > 0
    if not pos.any():
        return -np.inf
    log_terms = np.log(mag[pos]) + log_w[pos]
    if variant == "inf":
        return float(np.max(log_terms))
    p = float(variant)
    # trapezoid on the periodic dual grid == uniform Riemann sum
    log_dxi = grid.dim * np.log(2.0 * np.pi / (grid.n * grid.spacing))
    scaled = p * log_terms
    top = float(np.max(scaled))
    total = top + np.log(np.sum(np.exp(scaled - top)))
    return float((total + log_dxi) / p)


def fl_norm(f: np.ndarray, grid: GridSpec, w: WeightFunction, lam: float,
            variant="1") -> float:
    """Weighted Fourier--Lebesgue norm of edge-negligible samples:
    (integral of |fhat|^p exp(p*lam*omega(|xi|)))^(1/p) for p in {1, 2},
    or the weighted sup for variant "inf"."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if str(variant) not in ("1", "2", "inf"):
        raise ValueError('variant must be one of "1", "2", "inf"')
    _require_edge_negligible(f, "fl_norm")
    ln = _log_norm(f, grid, w, lam, str(variant))
    if ln == -np.inf:
        return 0.0
    if ln > LOG_SPACE_GUARD:
        return float(np.inf)
    return float(np.exp(ln))


@dataclass(frozen=True)
class OmegaNormLadder:
    """Per-rung weighted Fourier--Lebesgue norms of a net's frames, stored
    in log space (values may exceed float range in linear space)."""

    lam: float
    variant: str
    weight: WeightFunction
    log_values: np.ndarray

    @property
    def values(self) -> np.ndarray:
        with np.errstate(over="ignore"):
            return np.exp(np.minimum(self.log_values, 709.0))

    def to_json(self) -> dict:
        return {"lambda": self.lam, "variant": self.variant,
                "weight": self.weight.to_json(),
                "log_values": [float(v) for v in self.log_values]}


def omega_norm_ladder(a: NetFunction, w: WeightFunction, lam: float,
                      variant="1") -> OmegaNormLadder:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    fine = a.fine_grid
    for fr in a.frames:
        _require_edge_negligible(fr, "omega_norm_ladder")
    logs = np.array([_log_norm(fr, fine, w, lam, str(variant))
                     for fr in a.frames])
    return OmegaNormLadder(lam=float(lam), variant=str(variant), weight=w,
                           log_values=logs)


@dataclass(frozen=True)
class NormEquivalenceReport:
    lam: float
    lam_shift: float
    norm_inf: float
    norm_one: float
    norm_two: float
    norm_inf_shifted: float
    c_lower: float
    c_upper: float
    lower_holds: bool
    upper_holds: bool
    l2_holds: bool

    @property
    def holds(self) -> bool:
        return self.lower_holds and self.upper_holds

    def to_json(self) -> dict:
        return {k: (bool(v) if isinstance(v, (bool, np.bool_)) else float(v))
                for k, v in self.__dict__.items()} | {"holds": self.holds}


def norm_equivalence_check(f: np.ndarray, grid: GridSpec, w: WeightFunction,
                           lam: float) -> NormEquivalenceReport:
    """Numerical check of the sandwich
    C1*||f||_{FLinf,lam} <= ||f||_{FL1,lam} <= C2*||f||_{FLinf,lam+shift}
    with shift = (d+1)/b taken from the weight's lower-growth constants,
    plus the Cauchy--Schwarz side ||f||_{FL2}^2 <= ||f||_{FLinf}*||f||_{FL1}.
    C1 and C2 are the measured ratios."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    b = w.gamma_constants[1]
    if b <= 0:
        raise ValueError("weight needs a positive logarithmic lower-growth "
                         "constant b")
    shift = (grid.dim + 1) / b
    _require_edge_negligible(f, "norm_equivalence_check")
    log_inf = _log_norm(f, grid, w, lam, "inf")
    log_one = _log_norm(f, grid, w, lam, "1")
    log_two = _log_norm(f, grid, w, lam, "2")
    log_inf_sh = _log_norm(f, grid, w, lam + shift, "inf")
    if log_one == -np.inf:  # zero function: 0 <= 0 <= 0
        return NormEquivalenceReport(
            lam=lam, lam_shift=shift, norm_inf=0.0, norm_one=0.0,
            norm_two=0.0, norm_inf_shifted=0.0, c_lower=0.0, c_upper=0.0,
            lower_holds=True, upper_holds=True, l2_holds=True)

    def lin(x):
        return float(np.exp(x)) if x <= LOG_SPACE_GUARD else float(np.inf)

    c_lower = np.exp(log_one - log_inf)
    c_upper = np.exp(log_one - log_inf_sh)
    l2_holds = bool(2.0 * log_two <= log_inf + log_one + 1e-9)
    return NormEquivalenceReport(
        lam=lam, lam_shift=float(shift), norm_inf=lin(log_inf),
        norm_one=lin(log_one), norm_two=lin(log_two),
        norm_inf_shifted=lin(log_inf_sh),
        c_lower=float(c_lower), c_upper=float(c_upper),
        lower_holds=bool(np.isfinite(c_lower) and c_lower > 0),
        upper_holds=bool(np.isfinite(c_upper) and c_upper > 0),
        l2_holds=l2_holds)


@dataclass(frozen=True)
class BBVerdict:
    """Growth classification of a net against exp(k*omega(1/eps)) scales."""

    classification: str  # moderate | negligible | neither | inconclusive
    mode: str
    fitted: dict
    kappa: dict = field(repr=False)
    nu: np.ndarray = field(repr=False)

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
            "kappa": {str(k): [float(x) for x in tr]
                      for k, tr in self.kappa.items()},
            "nu": [float(x) for x in self.nu],
        }


def classify_net_bb(a: NetFunction, w: WeightFunction,
                    mode: str = None) -> BBVerdict:
    """Moderate / negligible verdict at exp(k*omega(1/eps)) scales.

    Moderation grades the weighted FL1 norms over the lambda grid: the
    statistic kappa_j = log||f_eps||_lam / omega(1/eps_j) estimates the k
    in ||f_eps|| <= C exp(k*omega(1/eps)); Beurling asks every lambda to
    stay bounded, Roumieu asks some lambda to.  Negligibility is decided on
    the 0-th order sup norms via nu_j = (-log S_eps)/omega(1/eps_j), which
    the weight-function null characterization licenses."""
    mode = mode or a.mode
    if mode not in ("beurling", "roumieu"):
        raise ValueError("mode must be 'beurling' or 'roumieu'")
    if a.ladder.count < 6:
        raise ValueError("classification needs at least 6 rungs")
    omega_inv = w(1.0 / a.ladder.values)
    if np.any(omega_inv <= 0):
        raise ValueError("omega(1/eps) must be positive on the ladder")

    kappas = {}
    bounded_per_lam = {}
    tozero_per_lam = {}
    fitted = {}
    for lam in LAMBDA_GRID:
        ladder = omega_norm_ladder(a, w, lam, "1")
        kappa = np.maximum(ladder.log_values, 0.0) / omega_inv
        kappas[lam] = kappa
        bounded_per_lam[lam] = _bounded(kappa)
        tozero_per_lam[lam] = _tends_to_zero(kappa)
        fitted[f"k_at_lambda={lam:g}"] = float(np.max(kappa[len(kappa) // 2:]))

    sups = np.array([float(np.max(np.abs(fr))) for fr in a.frames])
    scale = float(np.max(sups)) if sups.size else 0.0
    floor = MACHINE_FLOOR * (1.0 + scale)
    at_floor = bool(np.max(sups) <= floor)
    log_sups = np.log(np.maximum(sups, floor))
    nu = -log_sups / omega_inv
    # rungs indistinguishable from zero certify any decay rate
    nu_eff = np.where(sups <= floor, np.inf, nu)
    if mode == "beurling":
        negligible = at_floor or _tends_to_infinity(nu_eff)
        moderate = all(bounded_per_lam.values())
    else:
        negligible = at_floor or bool(np.min(nu_eff) >= 0.05)
        moderate = any(bounded_per_lam.values()) or any(
            tozero_per_lam.values())
    fitted["k_negligible"] = float(np.min(nu))
    if negligible:
        classification = "negligible"
    elif moderate:
        classification = "moderate"
    else:
        lam_hard = min(LAMBDA_GRID)
        kappa = kappas[lam_hard]
        half = len(kappa) // 2
        clearly_growing = float(np.min(kappa[half:])) >= max(
            1.2 * float(np.max(kappa[:half])),
            float(np.max(kappa[:half])) + 0.05)
        classification = "neither" if clearly_growing else "inconclusive"
    return BBVerdict(classification=classification, mode=f"bb-{mode}",
                     fitted=fitted, kappa=kappas, nu=nu)


@dataclass(frozen=True)
class CrosscheckReport:
    """Polynomial-scale re-reading of a log(1+t)-weighted verdict."""

    fitted_order: float
    poly_moderate: bool
    poly_negligible: bool
    negligible_per_q: dict
    omega_verdict: BBVerdict
    agree: bool

    def to_json(self) -> dict:
        return {
            "fitted_order": float(self.fitted_order),
            "poly_moderate": bool(self.poly_moderate),
            "poly_negligible": bool(self.poly_negligible),
            "negligible_per_q": {str(q): bool(v)
                                 for q, v in self.negligible_per_q.items()},
            "omega_verdict": self.omega_verdict.to_json(),
            "agree": bool(self.agree),
        }


def _poly_bounded(trace: np.ndarray) -> bool:
    half = len(trace) // 2
    return bool(np.max(trace[half:]) <= np.max(trace[:half]) + _SLACK)


def colombeau_crosscheck(a: NetFunction) -> CrosscheckReport:
    """For omega = log(1+t) the weighted scales coincide with the classical
    polynomial ones; this re-expresses the verdict in eps powers and flags
    any disagreement.  Moderate means sup <= C * eps^{-k} for some k
    (fitted from the log-log slope); negligible means sup <= C * eps^q for
    every q on the tested grid."""
    if a.ladder.count < 6:
        raise ValueError("cross-check needs at least 6 rungs")
    w = WeightFunction.log_one_plus_t()
    verdict = classify_net_bb(a, w, "beurling")

    sups = np.array([float(np.max(np.abs(fr))) for fr in a.frames])
    scale = float(np.max(sups)) if sups.size else 0.0
    floor = MACHINE_FLOOR * (1.0 + scale)
    at_floor = bool(np.max(sups) <= floor)
    log_sups = np.log(np.maximum(sups, floor))
    log_inv_eps = np.log(1.0 / a.ladder.values)

    # growth order: slope of log sup against log(1/eps) over the tail
    half = a.ladder.count // 2
    slope = float(np.polyfit(log_inv_eps[half:], log_sups[half:], 1)[0])
    poly_moderate = _poly_bounded(np.maximum(log_sups, 0.0)
                                  / np.maximum(log_inv_eps, 1e-12))
    # rungs indistinguishable from zero certify any decay rate
    log_eff = np.where(sups <= floor, -np.inf, log_sups)
    per_q = {}
    for q in Q_GRID:
        # sup <= C eps^q  <=>  log sup + q log(1/eps) bounded above
        per_q[q] = at_floor or _poly_bounded(log_eff + q * log_inv_eps)
    poly_negligible = all(per_q.values())

    agree = (poly_moderate == verdict.moderate
             and poly_negligible == verdict.negligible)
    return CrosscheckReport(fitted_order=slope, poly_moderate=poly_moderate,
                            poly_negligible=poly_negligible,
                            negligible_per_q=per_q, omega_verdict=verdict,
                            agree=agree)
