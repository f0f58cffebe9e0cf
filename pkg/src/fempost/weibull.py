"""Three-parameter Weibull weakest-link analysis of cleavage fracture.

The failure probability of a component loaded to a Weibull stress sigma_w is

    P_f = 1 - exp[-((sigma_w - sigma_th) / sigma_u)**m]

where sigma_w aggregates the per-element maximum principal stresses above the
threshold sigma_th as a volume-weighted m-norm:

    sigma_w = sigma_th + [ sum_i max(sigma1_i - sigma_th, 0)**m * V_i/V0 ]**(1/m)

The calibration loop alternates between evaluating sigma_w at each observed
failure load (for the current threshold and modulus) and least-squares fitting
the three parameters against the empirical rank probabilities, until the
relative change of the parameter vector drops below tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

__all__ = [
    "WeibullParams",
    "ElementField",
    "FailureSample",
    "DomainError",
    "RankOutOfRange",
    "NoConvergence",
    "DegenerateFit",
    "max_principal_stress",
    "weibull_stress",
    "failure_probability",
    "empirical_cdf",
    "rank_samples",
    "fit_three_parameter",
    "hazard_map",
    "load_element_fields_csv",
]

LOG10_FLOOR = -16.0


class DomainError(ValueError):
    """Weibull stress below the threshold stress."""


class RankOutOfRange(ValueError):
    """Empirical rank outside 1..n."""


class NoConvergence(RuntimeError):
    """Iterative calibration did not converge within the iteration budget."""


class DegenerateFit(ValueError):
    """Fewer distinct Weibull-stress values than free parameters."""


@dataclass(frozen=True)
class WeibullParams:
    """Threshold stress, modulus, scaling stress and reference volume."""

    sigma_th: float
    m: float
    sigma_u: float
    V0: float = 1.0

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError(f"modulus m must be positive, got {self.m}")
        if self.sigma_u <= 0:
            raise ValueError(f"sigma_u must be positive, got {self.sigma_u}")
        if self.sigma_th < 0:
            raise ValueError(f"sigma_th must be non-negative, got {self.sigma_th}")
        if self.V0 <= 0:
            raise ValueError(f"V0 must be positive, got {self.V0}")


@dataclass(frozen=True)
class ElementField:
    """Per-element (max principal stress, volume) arrays at one load level."""

    load_level: float
    sigma1: np.ndarray
    volume: np.ndarray

    def __post_init__(self):
        sigma1 = np.atleast_1d(np.asarray(self.sigma1, dtype=float))
        volume = np.atleast_1d(np.asarray(self.volume, dtype=float))
        if sigma1.shape != volume.shape or sigma1.ndim != 1 or sigma1.size < 1:
            raise ValueError("sigma1 and volume must be equal-length 1-d arrays")
        if np.any(volume <= 0):
            raise ValueError("all element volumes must be positive")
        object.__setattr__(self, "sigma1", sigma1)
        object.__setattr__(self, "volume", volume)


@dataclass(frozen=True)
class FailureSample:
    """One experiment: failure load, empirical rank j of n."""

    failure_load: float
    rank: int
    count: int

    def __post_init__(self):
        if not 1 <= self.rank <= self.count:
            raise RankOutOfRange(f"rank {self.rank} outside 1..{self.count}")


def max_principal_stress(components) -> float:
    """Largest eigenvalue of a symmetric stress tensor.

    Accepts 4 components (S11, S22, S33, S12; plane problems) or 6 components
    (S11, S22, S33, S12, S13, S23).
    """
    c = np.asarray(components, dtype=float)
    if c.shape == (4,):
        s11, s22, s33, s12 = c
        s13 = s23 = 0.0
    elif c.shape == (6,):
        s11, s22, s33, s12, s13, s23 = c
    else:
        raise ValueError(f"expected 4 or 6 stress components, got shape {c.shape}")
    tensor = np.array(
        [[s11, s12, s13], [s12, s22, s23], [s13, s23, s33]]
    )
    return float(np.linalg.eigvalsh(tensor)[-1])


def weibull_stress(field: ElementField, params: WeibullParams) -> float:
    """Weibull stress of one element field.

    Elements at or below the threshold contribute nothing; if no element
    exceeds it the Weibull stress equals the threshold.
    """
    excess = np.maximum(field.sigma1 - params.sigma_th, 0.0)
    total = np.sum(excess**params.m * (field.volume / params.V0))
    return params.sigma_th + float(total ** (1.0 / params.m))


def failure_probability(sigma_w, params: WeibullParams):
    """Cumulative failure probability at a given Weibull stress."""
    sw = np.asarray(sigma_w, dtype=float)
    if np.any(sw < params.sigma_th):
        raise DomainError("sigma_w below the threshold stress")
    pf = 1.0 - np.exp(-(((sw - params.sigma_th) / params.sigma_u) ** params.m))
    return float(pf) if np.isscalar(sigma_w) or sw.ndim == 0 else pf


def empirical_cdf(rank: int, count: int) -> float:
    """Median-rank plotting position (j - 0.3) / (n + 0.4)."""
    if not 1 <= rank <= count:
        raise RankOutOfRange(f"rank {rank} outside 1..{count}")
    return (rank - 0.3) / (count + 0.4)


def rank_samples(failure_loads, count=None) -> list:
    """Build rank-ordered FailureSamples from raw failure loads."""
    loads = sorted(float(x) for x in failure_loads)
    n = count if count is not None else len(loads)
    return [FailureSample(load, j + 1, n) for j, load in enumerate(loads)]


def _sigma_w_curve(fields, params: WeibullParams) -> np.ndarray:
    return np.array([weibull_stress(f, params) for f in fields])


def _interp_sigma_w(load_levels, sw_levels, loads) -> np.ndarray:
    lo, hi = load_levels[0], load_levels[-1]
    if np.any(loads < lo) or np.any(loads > hi):
        raise ValueError(
            f"failure loads outside the field load-level range [{lo}, {hi}]; "
            "extrapolation is not supported"
        )
    return np.interp(loads, load_levels, sw_levels)


def _fit_cdf(sw, pf_emp, start, bounds):
    """Least-squares fit of the three-parameter CDF to empirical points."""

    def residual(x):
        sigma_th, m, sigma_u = x
        arg = np.maximum(sw - sigma_th, 0.0) / sigma_u
        model = 1.0 - np.exp(-(arg**m))
        return float(np.sum((model - pf_emp) ** 2))

    res = minimize(
        residual,
        np.asarray(start, dtype=float),
        method="Nelder-Mead",
        bounds=bounds,
        options={"xatol": 1e-8, "fatol": 1e-14, "maxiter": 4000},
    )
    return np.asarray(res.x, dtype=float)


def fit_three_parameter(
    fields,
    samples,
    V0: float = 1.0,
    tol: float = 1e-4,
    max_iter: int = 100,
):
    """Iteratively calibrate (sigma_th, m, sigma_u) from failure experiments.

    Each iteration evaluates the Weibull stress at every sample's failure load
    (piecewise-linear in the load level) using the previous threshold and
    modulus, then refits all three parameters to the empirical rank
    probabilities by least squares.  Stops when the relative norm of the
    parameter change drops below *tol*.

    Returns ``(WeibullParams, trace)`` where *trace* is the per-iteration list
    of parameter triples.
    """
    if len(samples) < 3:
        raise ValueError("at least 3 failure samples are required")
    fields = sorted(fields, key=lambda f: f.load_level)
    load_levels = np.array([f.load_level for f in fields])
    loads = np.array([s.failure_load for s in samples])
    pf_emp = np.array([empirical_cdf(s.rank, s.count) for s in samples])

    # neutral start: no threshold, modest modulus, spread-scaled sigma_u
    sigma_th, m = 0.0, 2.0
    probe = WeibullParams(sigma_th, m, 1.0, V0)
    sw_probe = _interp_sigma_w(load_levels, _sigma_w_curve(fields, probe), loads)
    sigma_u = max(float(np.std(sw_probe)), 1e-6)

    trace = []
    for _ in range(max_iter):
        params = WeibullParams(sigma_th, max(m, 0.5), max(sigma_u, 1e-9), V0)
        sw = _interp_sigma_w(load_levels, _sigma_w_curve(fields, params), loads)
        if np.unique(sw).size < 3:
            raise DegenerateFit(
                "fewer distinct Weibull-stress values than free parameters"
            )
        bounds = [
            (0.0, float(sw.min()) * (1 - 1e-9)),
            (0.5, 50.0),
            (1e-6, 10.0 * float(sw.max())),
        ]
        new = _fit_cdf(sw, pf_emp, (sigma_th, m, sigma_u), bounds)
        old = np.array([sigma_th, m, sigma_u])
        trace.append(tuple(new))
        change = np.linalg.norm(new - old) / max(np.linalg.norm(old), 1e-30)
        sigma_th, m, sigma_u = new
        if change < tol:
            return WeibullParams(sigma_th, m, sigma_u, V0), trace
    raise NoConvergence(f"no convergence after {max_iter} iterations")


def hazard_map(field: ElementField, params: WeibullParams):
    """Local failure probability of each element, linear and log10 scale.

    Each element is treated as its own weakest link: its local Weibull stress
    uses only its own volume.  Returns ``(pf, log10_pf)`` arrays; the log is
    floored at -16 so zero-probability elements stay plottable.
    """
    excess = np.maximum(field.sigma1 - params.sigma_th, 0.0)
    sw_local = params.sigma_th + (
        excess**params.m * (field.volume / params.V0)
    ) ** (1.0 / params.m)
    pf = failure_probability(sw_local, params)
    pf = np.atleast_1d(pf)
    with np.errstate(divide="ignore"):
        log_pf = np.log10(pf)
    log_pf = np.maximum(log_pf, LOG10_FLOOR)
    return pf, log_pf


def load_element_fields_csv(path) -> list:
    """Read element fields from comma-separated text.

    Expected columns: load_level, element_id, sigma1, volume (one-line
    header).  Rows are grouped by load level; element order within a level
    follows element_id.
    """
    groups: dict[float, list] = {}
    with open(path) as fh:
        header = fh.readline()
        if header.strip() == "":
            raise ValueError("empty element-field file")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            level_s, eid_s, sigma_s, vol_s = line.split(",")
            groups.setdefault(float(level_s), []).append(
                (int(eid_s), float(sigma_s), float(vol_s))
            )
    fields = []
    for level in sorted(groups):
        rows = sorted(groups[level])
        fields.append(
            ElementField(
                load_level=level,
                sigma1=np.array([r[1] for r in rows]),
                volume=np.array([r[2] for r in rows]),
            )
        )
    return fields
