"""Weight sequences and weight functions.

Log-convex weight sequences M_p are stored on a log scale (factorials are
never materialized), together with their associated function

    M(t) = max_p (p*log t - log M_p)

and its inverse.  Weight functions omega(t) cover the Fourier-Lebesgue
(Beurling-Bjorck) mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SaturationError

DEFAULT_P_MAX = 256

# Numerical slack for log-scale comparisons.
_LOG_TOL = 1e-9


@dataclass(frozen=True)
class WeightSequence:
    """A positive weight sequence with M_0 = 1, kept as log M_p.

    ``kind`` is "gevrey" (log M_p = s*log p!) or "custom" (user table).
    """

    kind: str
    log_m: np.ndarray
    p_max: int
    s: float | None = None

    def __post_init__(self):
        lm = np.asarray(self.log_m, dtype=float)
        if lm.ndim != 1 or lm.shape[0] != self.p_max + 1:
            raise ValueError("log_m must have p_max + 1 entries")
        if abs(lm[0]) > 1e-12:
            raise ValueError("M_0 must be 1 (log_m[0] = 0)")
        object.__setattr__(self, "log_m", lm)
        object.__setattr__(self, "_inc", np.diff(lm))

    @staticmethod
    def gevrey(s: float, p_max: int = DEFAULT_P_MAX) -> "WeightSequence":
        if s <= 0:
            raise ValueError("gevrey order s must be positive")
        # log p! by cumulative sums, no factorial evaluation
        log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, p_max + 1)))))
        return WeightSequence(kind="gevrey", log_m=s * log_fact, p_max=p_max, s=s)

    @staticmethod
    def custom(log_m, p_max: int | None = None) -> "WeightSequence":
        lm = np.asarray(log_m, dtype=float)
        if p_max is None:
            p_max = lm.shape[0] - 1
        return WeightSequence(kind="custom", log_m=lm, p_max=p_max)

    @property
    def m1(self) -> float:
        """M_1, the right endpoint of the flat region of the associated function."""
        return float(math.exp(self.log_m[1]))

    @property
    def increments(self) -> np.ndarray:
        """log(M_p / M_{p-1}) for p = 1..p_max; non-decreasing under (M.1)."""
        return self._inc

    def is_log_convex(self, tol: float = 1e-10) -> bool:
        return bool(np.all(np.diff(self._inc) >= -tol))

    @property
    def t_saturation(self) -> float:
        """Largest t at which assoc() is still resolved by this table."""
        return float(math.exp(self._inc[-1]))

    def to_json(self) -> dict:
        if self.kind == "gevrey":
            return {"kind": "gevrey", "s": self.s, "p_max": self.p_max}
        return {"kind": "custom", "log_m": [float(v) for v in self.log_m]}

    @staticmethod
    def from_json(obj: dict) -> "WeightSequence":
        if obj["kind"] == "gevrey":
            return WeightSequence.gevrey(float(obj["s"]), int(obj.get("p_max", DEFAULT_P_MAX)))
        if obj["kind"] == "custom":
            return WeightSequence.custom(obj["log_m"])
        raise ValueError(f"unknown weight sequence kind {obj['kind']!r}")


@dataclass(frozen=True)
class ConditionReport:
    m1_ok: bool
    m2_ok: bool
    m2_constants: tuple[float, float]  # (A, H)
    m3prime_partial_sum: float
    m3prime_converges: bool  # ratio-test heuristic, not a proof


def assoc(seq: WeightSequence, t, on_saturation: str = "raise"):
    """Associated function M(t) = max_p (p*log t - log M_p), t >= 0.

    Under (M.1) the maximizer is located by a searchsorted on the increment
    sequence; for non-log-convex custom tables a full scan is used.  Scalar
    in, scalar out; arrays are mapped elementwise.

    ``on_saturation``: "raise" (default) raises SaturationError when the
    maximizer hits p_max; "clip" returns the truncated maximum, which equals
    the brute-force max over p <= p_max.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr < 0):
        raise ValueError("assoc requires t >= 0")
    out = np.zeros_like(t_arr)
    pos = t_arr > 0
    if np.any(pos):
        logt = np.log(t_arr[pos])
        if seq.is_log_convex():
            p_star = np.searchsorted(seq.increments, logt, side="right")
        else:
            vals = np.outer(logt, np.arange(seq.p_max + 1)) - seq.log_m[None, :]
            p_star = np.argmax(vals, axis=1)
        if on_saturation == "raise" and np.any(p_star >= seq.p_max):
            raise SaturationError(
                f"assoc maximizer hit p_max={seq.p_max}; raise p_max "
                f"(reliable up to t ~ {seq.t_saturation:.6g})",
                seq.t_saturation,
            )
        p_star = np.minimum(p_star, seq.p_max)
        out[pos] = np.maximum(p_star * logt - seq.log_m[p_star], 0.0)
    return out[0] if np.isscalar(t) or np.ndim(t) == 0 else out.reshape(np.shape(t))


def assoc_inverse(seq: WeightSequence, y: float) -> float:
    """Inverse of the associated function by monotone bisection.

    Returns t with |assoc(t) - y| <= 1e-9*(1+y).  For y in the flat region
    [0, assoc(M_1)] the convention is to return M_1.
    """
    if y < 0:
        raise ValueError("assoc_inverse requires y >= 0")
    t_lo = seq.m1
    if y <= _LOG_TOL:
        return t_lo
    # bracket: grow geometrically until assoc passes y (or saturates)
    t_hi = max(2.0 * t_lo, 1.0)
    while assoc(seq, t_hi) < y:
        t_hi *= 2.0
        if t_hi > seq.t_saturation:
            # one last honest evaluation so the error carries context
            if assoc(seq, seq.t_saturation * 0.999999, on_saturation="clip") < y:
                raise SaturationError(
                    f"assoc_inverse target y={y:.6g} beyond saturation; raise p_max",
                    seq.t_saturation,
                )
            t_hi = seq.t_saturation * 0.999999
            break
    tol = 1e-9 * (1.0 + y)
    for _ in range(200):
        t_mid = 0.5 * (t_lo + t_hi)
        v = assoc(seq, t_mid, on_saturation="clip")
        if abs(v - y) <= tol:
            return t_mid
        if v < y:
            t_lo = t_mid
        else:
            t_hi = t_mid
    return 0.5 * (t_lo + t_hi)


def resolved_for(seq: WeightSequence, t_needed: float) -> WeightSequence:
    """A sequence whose table resolves assoc up to ``t_needed``.

    Gevrey tables are deepened as required; custom tables cannot be extended
    and raise SaturationError instead.
    """
    if seq.t_saturation >= t_needed:
        return seq
    if seq.kind == "gevrey":
        depth = int(math.exp(math.log(max(t_needed, 2.0)) / seq.s) * 1.25) + 16
        return WeightSequence.gevrey(seq.s, depth)
    raise SaturationError(
        f"custom weight table saturates at t ~ {seq.t_saturation:.6g} but "
        f"t ~ {t_needed:.6g} is required; supply a deeper table",
        seq.t_saturation)


def check_conditions(seq: WeightSequence) -> ConditionReport:
    """Certify (M.1), (M.2) and the (M.3)' ratio-test heuristic.

    (M.2) constants: A is pinned to 1 by the p=q=0 case (M_0 = 1) and H is
    the smallest power of two making the log-scale inequality hold for all
    p+q <= p_max.
    """
    if seq.p_max < 64:
        raise ValueError("check_conditions requires p_max >= 64")
    m1_ok = seq.is_log_convex()
    if not m1_ok:
        return ConditionReport(
            m1_ok=False,
            m2_ok=False,
            m2_constants=(1.0, math.inf),
            m3prime_partial_sum=math.nan,
            m3prime_converges=False,
        )

    lm = seq.log_m
    # smallest admissible log H: max over r of (log M_r - min_p (log M_p + log M_{r-p}))/r
    log_h_req = 0.0
    for r in range(1, seq.p_max + 1):
        p = np.arange(0, r + 1)
        split_min = np.min(lm[p] + lm[r - p])
        log_h_req = max(log_h_req, (lm[r] - split_min) / r)
    h_grid = 2.0 ** np.arange(0, 13)
    ok = h_grid >= math.exp(log_h_req) * (1.0 - 1e-12)
    if np.any(ok):
        H = float(h_grid[np.argmax(ok)])
        m2_ok = True
    else:
        H = math.inf
        m2_ok = False

    ratios = np.exp(-seq.increments)  # M_{p-1}/M_p
    partial = float(np.sum(ratios))
    # heuristic: tail log-log slope of the ratios against p^{-(1+delta)}
    p = np.arange(1, seq.p_max + 1)
    tail = p >= seq.p_max // 2
    slope = np.polyfit(np.log(p[tail]), np.log(np.maximum(ratios[tail], 1e-300)), 1)[0]
    converges = bool(slope < -1.05)

    return ConditionReport(
        m1_ok=True,
        m2_ok=m2_ok,
        m2_constants=(1.0, H),
        m3prime_partial_sum=partial,
        m3prime_converges=converges,
    )


def check_assoc_m2(seq: WeightSequence, t_grid, A: float = 1.0, H: float | None = None) -> bool:
    """Functional (M.2): 2*M(t) <= M(H*t) + log A on the grid, slack 1e-6."""
    if H is None:
        H = check_conditions(seq).m2_constants[1]
    t_grid = np.asarray(t_grid, dtype=float)
    lhs = 2.0 * assoc(seq, t_grid)
    rhs = assoc(seq, H * t_grid) + math.log(A)
    return bool(np.all(lhs <= rhs + 1e-6))


def gevrey_pair(s: float, p_max: int = DEFAULT_P_MAX, t_max: float = 1e6):
    """Mollifier weight pair (M, N) = (gevrey(s), gevrey((1+s)/2)).

    Validates numerically that for l in {1, 1/2, 1/10} a finite C exists with
    2*M(t) <= N(l*t) + C on [0, t_max]; the slower Gevrey order of N makes
    N(l*t) eventually dominate 2*M(t).
    """
    if s <= 1:
        raise ValueError("non-quasianalyticity requires gevrey order s > 1")
    s_n = 0.5 * (1.0 + s)
    m_seq = WeightSequence.gevrey(s, p_max)
    n_seq = WeightSequence.gevrey(s_n, p_max)

    # validation tables sized for t_max, independent of the returned p_max
    def _table(order, top):
        depth = int(math.exp(math.log(max(top, 2.0)) / order) * 1.25) + 16
        return WeightSequence.gevrey(order, depth)

    m_val = _table(s, t_max)
    t = np.logspace(-2, math.log10(t_max), 160)
    two_m = 2.0 * assoc(m_val, t)
    top = t >= t_max / 100.0  # top two decades carry the asymptotics
    for l in (1.0, 0.5, 0.1):
        n_val = _table(s_n, l * t_max)
        n_of_lt = assoc(n_val, l * t)
        # a finite C exists iff N(l t) eventually dominates 2M(t); certify by
        # the tail log-log growth exponents (1/s_n > 1/s for a Gevrey pair)
        slope_m = np.polyfit(np.log(t[top]), np.log(np.maximum(two_m[top], 1e-12)), 1)[0]
        slope_n = np.polyfit(np.log(t[top]), np.log(np.maximum(n_of_lt[top], 1e-12)), 1)[0]
        if slope_n <= slope_m + 1e-3:
            raise ValueError(
                f"gevrey pair validation failed for s={s}, l={l}: "
                "N(lt) does not outgrow 2M(t) on the tail"
            )
    return m_seq, n_seq


# ---------------------------------------------------------------------------
# weight functions


@dataclass(frozen=True)
class WeightFunction:
    """Non-decreasing weight omega(t) with omega(0) = 0."""

    kind: str  # log_one_plus_t | power | custom
    a: float | None = None  # power exponent
    t_table: np.ndarray | None = None
    w_table: np.ndarray | None = None
    gamma_constants: tuple[float, float] = (0.0, 1.0)  # (a, b) in omega >= b*log(1+t)+a

    @staticmethod
    def log_one_plus_t() -> "WeightFunction":
        return WeightFunction(kind="log_one_plus_t", gamma_constants=(0.0, 1.0))

    @staticmethod
    def power(a: float) -> "WeightFunction":
        if not 0.0 < a <= 1.0:
            raise ValueError("power exponent must lie in (0, 1]")
        return WeightFunction(kind="power", a=a, gamma_constants=(0.0, a))

    @staticmethod
    def custom(t_table, w_table) -> "WeightFunction":
        t_tab = np.asarray(t_table, dtype=float)
        w_tab = np.asarray(w_table, dtype=float)
        if t_tab[0] != 0.0 or w_tab[0] != 0.0:
            raise ValueError("custom table must start at omega(0) = 0")
        if np.any(np.diff(w_tab) < 0) or np.any(np.diff(t_tab) <= 0):
            raise ValueError("custom table must be monotone")
        return WeightFunction(kind="custom", t_table=t_tab, w_table=w_tab)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "log_one_plus_t":
            return np.log1p(t)
        if self.kind == "power":
            return np.power(t, self.a)
        # linear interpolation, linear extrapolation of the last segment
        w = np.interp(t, self.t_table, self.w_table)
        last_slope = (self.w_table[-1] - self.w_table[-2]) / (self.t_table[-1] - self.t_table[-2])
        beyond = t > self.t_table[-1]
        w = np.where(beyond, self.w_table[-1] + last_slope * (t - self.t_table[-1]), w)
        return w

    def to_json(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "a": self.a}
        if self.kind == "custom":
            return {
                "kind": "custom",
                "t": [float(v) for v in self.t_table],
                "omega": [float(v) for v in self.w_table],
            }
        return {"kind": "log_one_plus_t"}

    @staticmethod
    def from_json(obj: dict) -> "WeightFunction":
        if obj["kind"] == "log_one_plus_t":
            return WeightFunction.log_one_plus_t()
        if obj["kind"] == "power":
            return WeightFunction.power(float(obj["a"]))
        if obj["kind"] == "custom":
            return WeightFunction.custom(obj["t"], obj["omega"])
        raise ValueError(f"unknown weight function kind {obj['kind']!r}")


@dataclass(frozen=True)
class OmegaReport:
    subadditive_ok: bool
    subadditivity_max_violation: float
    beta_integral: float
    beta_tail_estimate: float
    beta_converges: bool
    gamma_constants: tuple[float, float]  # fitted (a, b)
    gamma_ok: bool
    gamma0_ratio: float
    gamma0_ok: bool
    details: dict = field(default_factory=dict)


def omega_check(w: WeightFunction, t_grid) -> OmegaReport:
    """Report on conditions (alpha), (beta), (gamma), (gamma_0) for omega."""
    t_grid = np.asarray(t_grid, dtype=float)
    T = float(t_grid.max())
    if T < 1e4:
        raise ValueError("omega_check grid must reach T >= 1e4")

    # (alpha) subadditivity on a coarse pair grid
    sub = t_grid[:: max(1, len(t_grid) // 120)]
    s1 = sub[:, None]
    s2 = sub[None, :]
    viol = w(s1 + s2) - (w(s1) + w(s2))
    max_viol = float(np.max(viol))
    alpha_ok = max_viol <= 1e-9 * (1.0 + float(np.max(w(sub))))

    # (beta) quadrature of omega(t)/t^2 on [1, T] plus a tail estimate from
    # the local log-log slope at T
    tq = np.logspace(0.0, math.log10(T), 2000)
    integral = float(np.trapezoid(w(tq) / tq**2, tq))
    slope = (math.log(max(w(T), 1e-300)) - math.log(max(w(T / 2.0), 1e-300))) / math.log(2.0)
    if slope < 0.999:
        tail = float(w(T)) / ((1.0 - slope) * T)
        beta_converges = True
    else:
        tail = math.inf
        beta_converges = False

    # (gamma) fit: b = worst-case ratio on t >= 1, then a as the residual floor
    mask = t_grid >= 1.0
    b = float(np.min(w(t_grid[mask]) / np.log1p(t_grid[mask])))
    a = float(np.min(w(t_grid) - b * np.log1p(t_grid)))
    gamma_ok = b > 1e-9

    # (gamma_0): the ratio omega(T)/log(1+T) must diverge
    r_T = float(w(T) / math.log1p(T))
    r_half = float(w(T / 10.0) / math.log1p(T / 10.0))
    gamma0_ok = r_T > 1.5 * r_half and r_T > 2.0

    return OmegaReport(
        subadditive_ok=bool(alpha_ok),
        subadditivity_max_violation=max_viol,
        beta_integral=integral,
        beta_tail_estimate=tail,
        beta_converges=beta_converges,
        gamma_constants=(a, b),
        gamma_ok=gamma_ok,
        gamma0_ratio=r_T,
        gamma0_ok=bool(gamma0_ok),
        details={"beta_slope_at_T": slope, "gamma0_ratio_at_T_over_10": r_half},
    )
