"""Critical half-width and expansion-rate thresholds, plus trajectory classification.

The spreading/vanishing verdicts are finite-horizon surrogates for the
asymptotic dichotomy: vanishing means the densities have dropped below
an extinction floor with a stalled front, spreading means the infected
width has cleared twice the critical half-width with persistent
densities.  Anything else is Undetermined, a first-class outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .coefficients import LinearizationMatrix
from .lyapunov import EstimatorConfig, LyapunovEstimate, lyapunov_exponent
from .model import InitialData, ModelSpec
from .solver import SolverConfig, Trajectory, simulate

DEFAULT_SHIFTS = (-20.0, -10.0, -5.0, 0.0, 5.0, 10.0, 20.0)


class BadBracketError(ValueError):
    """The supplied bracket does not straddle the threshold."""


class NotConvergedError(RuntimeError):
    """Search aborted without meeting its stopping rule."""


@dataclass(frozen=True)
class ClassifyConfig:
    extinction_eps: float = 1e-6
    width_slope_eps: float = 1e-4
    window_frac: float = 0.2  # trailing fraction of the horizon used as evidence
    spreading_margin: float = 0.5  # added to 2*L_star for the spreading width bar


@dataclass(frozen=True)
class Classification:
    verdict: str  # Spreading | Vanishing | Undetermined
    evidence: Dict[str, float]


def classify(traj: Trajectory, L_star: float, cfg: ClassifyConfig = ClassifyConfig()) -> Classification:
    """Classify a completed trajectory against the finite-horizon evidence rules."""
    if traj.status != "completed":
        raise ValueError(f"cannot classify a trajectory with status {traj.status!r}")
    t = traj.t
    span = t[-1] - t[0]
    tail = t >= t[-1] - cfg.window_frac * span
    if np.count_nonzero(tail) < 2:
        tail = np.ones_like(t, dtype=bool)

    width = traj.width
    norms = np.maximum(traj.sup_m, traj.sup_n)
    floor_tail = float(np.min(np.minimum(traj.sup_m, traj.sup_n)[tail]))
    width_slope = float(np.polyfit(t[tail], width[tail], 1)[0])
    norm_slope = float(np.polyfit(t[tail], norms[tail], 1)[0])
    evidence = {
        "final_width": float(width[-1]),
        "final_sup_U": float(traj.sup_m[-1]),
        "final_sup_V": float(traj.sup_n[-1]),
        "width_slope": width_slope,
        "norm_slope": norm_slope,
        "tail_norm_floor": floor_tail,
        "max_width": float(np.max(width)),
        "width_bar": 2.0 * L_star + cfg.spreading_margin,
    }
    final_norm = max(evidence["final_sup_U"], evidence["final_sup_V"])
    if final_norm < cfg.extinction_eps and width_slope < cfg.width_slope_eps:
        return Classification("Vanishing", evidence)
    if evidence["max_width"] > evidence["width_bar"] and floor_tail > cfg.extinction_eps:
        return Classification("Spreading", evidence)
    return Classification("Undetermined", evidence)


@dataclass(frozen=True)
class LStarConfig:
    estimator: EstimatorConfig = EstimatorConfig()
    shifts: Tuple[float, ...] = DEFAULT_SHIFTS
    bracket_tol: float = 1e-2
    max_iter: int = 60


def _worst_lambda(mat, D, L, cfg: LStarConfig) -> LyapunovEstimate:
    """Shift-sampled worst-case (smallest) exponent at half-width L."""
    best: Optional[LyapunovEstimate] = None
    for s in cfg.shifts:
        est = lyapunov_exponent(mat.shifted_x(s), L, D, cfg.estimator)
        if best is None or est.lam < best.lam:
            best = est
    return best


def find_L_star(
    mat: LinearizationMatrix, D, bracket: Tuple[float, float], cfg: LStarConfig = LStarConfig()
) -> Tuple[float, int]:
    """Bisect the exponent's zero crossing in L.  Returns (L_star, iterations)."""
    L_lo, L_hi = bracket
    if not (0 < L_lo < L_hi):
        raise ValueError("need 0 < L_lo < L_hi")
    e_lo = _worst_lambda(mat, D, L_lo, cfg)
    e_hi = _worst_lambda(mat, D, L_hi, cfg)
    if not (e_lo.lam < 0.0 < e_hi.lam):
        raise BadBracketError(
            f"no sign change: lambda({L_lo})={e_lo.lam:.4g}, lambda({L_hi})={e_hi.lam:.4g}"
        )
    iterations = 0
    while L_hi - L_lo > cfg.bracket_tol and iterations < cfg.max_iter:
        mid = 0.5 * (L_lo + L_hi)
        est = _worst_lambda(mat, D, mid, cfg)
        iterations += 1
        ci_width = est.tail_slope_ci[1] - est.tail_slope_ci[0]
        if abs(est.lam) < ci_width:
            return mid, iterations
        if est.lam < 0.0:
            L_lo = mid
        else:
            L_hi = mid
    if L_hi - L_lo > cfg.bracket_tol:
        raise NotConvergedError("L* bisection hit the iteration cap")
    return 0.5 * (L_lo + L_hi), iterations


@dataclass(frozen=True)
class MuStarConfig:
    solver: SolverConfig = SolverConfig(t_end=300.0)
    classify: ClassifyConfig = ClassifyConfig()
    L_star: float = 1.0
    rel_tol: float = 1e-2
    max_iter: int = 40


@dataclass(frozen=True)
class ProbeRecord:
    mu: float
    verdict: str
    t_end: float


def find_mu_star(
    spec: ModelSpec,
    init: InitialData,
    bracket: Tuple[float, float],
    cfg: MuStarConfig = MuStarConfig(),
) -> Tuple[float, int, List[ProbeRecord]]:
    """Bisect the expansion rate on the simulate+classify predicate.

    Returns (mu_star, iterations, transcript); Undetermined probes get
    one doubled horizon before aborting the search.
    """
    transcript: List[ProbeRecord] = []

    def probe(mu: float) -> str:
        scfg = cfg.solver
        verdict = classify(simulate(spec.with_mu(mu), init, scfg), cfg.L_star, cfg.classify).verdict
        if verdict == "Undetermined":
            scfg = replace(scfg, t_end=2.0 * scfg.t_end)
            verdict = classify(
                simulate(spec.with_mu(mu), init, scfg), cfg.L_star, cfg.classify
            ).verdict
            if verdict == "Undetermined":
                transcript.append(ProbeRecord(mu, verdict, scfg.t_end))
                raise NotConvergedError(f"probe at mu={mu} undetermined after horizon extension")
        transcript.append(ProbeRecord(mu, verdict, scfg.t_end))
        return verdict

    mu_lo, mu_hi = bracket
    if not (0 < mu_lo < mu_hi):
        raise ValueError("need 0 < mu_lo < mu_hi")
    if probe(mu_lo) != "Vanishing":
        raise BadBracketError(f"mu_lo={mu_lo} does not vanish")
    if probe(mu_hi) != "Spreading":
        raise BadBracketError(f"mu_hi={mu_hi} does not spread")
    tol = cfg.rel_tol * mu_hi
    iterations = 0
    while mu_hi - mu_lo > tol and iterations < cfg.max_iter:
        mid = 0.5 * (mu_lo + mu_hi)
        iterations += 1
        if probe(mid) == "Spreading":
            mu_hi = mid
        else:
            mu_lo = mid
    return 0.5 * (mu_lo + mu_hi), iterations, transcript


def transcript_monotone(transcript: Sequence[ProbeRecord]) -> bool:
    """True when no larger-mu probe vanished below a smaller-mu spreading probe."""
    records = sorted(transcript, key=lambda r: r.mu)
    seen_spreading_at = None
    for r in records:
        if r.verdict == "Spreading" and seen_spreading_at is None:
            seen_spreading_at = r.mu
        if r.verdict == "Vanishing" and seen_spreading_at is not None and r.mu > seen_spreading_at:
            return False
    return True


def dichotomy_check(
    traj: Trajectory,
    L_star: float,
    lyap_series: Sequence[Tuple[float, LyapunovEstimate]],
    cfg: ClassifyConfig = ClassifyConfig(),
    width_tol: float = 0.1,
) -> Dict[str, object]:
    """Cross-validate a classified trajectory against the dichotomy clauses."""
    cls = classify(traj, L_star, cfg)
    clauses: List[Tuple[str, bool, str]] = []
    if cls.verdict == "Undetermined":
        return {"verdict": cls.verdict, "clauses": clauses}

    if cls.verdict == "Vanishing":
        final_width = cls.evidence["final_width"]
        ok = final_width <= 2.0 * L_star + width_tol
        clauses.append(
            ("vanishing_width_bound", ok, f"final width {final_width:.4g} vs 2L*+tol {2*L_star+width_tol:.4g}")
        )
    if cls.verdict == "Spreading" and lyap_series:
        t0, e0 = min(lyap_series, key=lambda p: p[0])
        if e0.lam > 0:
            w0 = float(np.interp(t0, traj.t, traj.width))
            ok = w0 >= 2.0 * L_star - width_tol
            clauses.append(
                ("positive_lambda_width_bound", ok, f"width({t0:g})={w0:.4g} vs 2L*-tol {2*L_star-width_tol:.4g}")
            )
    if len(lyap_series) >= 2:
        ordered = sorted(lyap_series, key=lambda p: p[0])
        ok = True
        for (_, e1), (_, e2) in zip(ordered, ordered[1:]):
            slack = (e1.tail_slope_ci[1] - e1.tail_slope_ci[0]) + (
                e2.tail_slope_ci[1] - e2.tail_slope_ci[0]
            )
            if e2.lam < e1.lam - slack:
                ok = False
        clauses.append(("lambda_nondecreasing_in_t", ok, f"{len(ordered)} samples"))
    return {"verdict": cls.verdict, "clauses": clauses}
