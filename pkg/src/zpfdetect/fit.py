"""Fitting the threshold-accumulation rate law to counting data.

Given measured pairs (I_s, R), recover the detector constants (E_m, Sigma)
by weighted nonlinear least squares and report the dark rate the fitted
model predicts at I_s = 0.  That number is the point of the exercise: a
detector whose counting curve bends the way the accumulation model says it
should must also count in the dark at Sigma**2/E_m**2.

Positivity of both parameters is enforced by optimizing in log space.
The residual Jacobian is analytic; the reported covariance is mapped back
to (E_m, Sigma) coordinates from the log-space Gauss-Newton estimate.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .curves import RateCurve, RatePoint
from .first_passage import FirstPassageDetector, dark_rate

__all__ = [
    "FitResult",
    "UnderdeterminedError",
    "fit_rate_curve",
    "slope_change",
    "load_rate_csv",
    "save_rate_csv",
]


class UnderdeterminedError(ValueError):
    """Too few usable points to constrain the two fit parameters."""


@dataclass(frozen=True)
class FitResult:
    """Weighted least-squares estimate of the accumulation-detector constants.

    ``covariance`` is the 2x2 matrix over (E_m, Sigma).  The two dark-rate
    predictions differ by exactly a factor 2: the exact value is the
    I_s -> 0 limit of the rationalized rate law, the series value comes
    from truncating its expansion, and their ratio is fixed by algebra,
    not by the data.  ``iterations`` counts residual evaluations.
    """

    E_m: float
    Sigma: float
    residual_norm: float
    covariance: np.ndarray
    predicted_dark_rate_exact: float
    predicted_dark_rate_series: float
    iterations: int
    converged: bool

    @property
    def detector(self) -> FirstPassageDetector:
        return FirstPassageDetector(self.E_m, self.Sigma)


def _model_and_jac(model: str):
    """Return f(I, logE, logS) -> (R, dR/dlogE, dR/dlogS) for the rate law."""
    if model == "exact":

        def f(I, log_e, log_s):
            em = math.exp(log_e)
            sg = math.exp(log_s)
            root = np.sqrt(sg**2 + 4.0 * I * em)
            u = root + sg
            r = u**2 / (4.0 * em**2)
            # dR/dSigma = u**2 / (2 E**2 root); dR/dE = u I/(E**2 root) - u**2/(2 E**3)
            dr_ds = u**2 / (2.0 * em**2 * root)
            dr_de = u * I / (em**2 * root) - u**2 / (2.0 * em**3)
            return r, dr_de * em, dr_ds * sg

    elif model == "series":

        def f(I, log_e, log_s):
            em = math.exp(log_e)
            sg = math.exp(log_s)
            sq = np.sqrt(I)
            r = I / em + sg * sq / em**1.5 + sg**2 / (2.0 * em**2)
            dr_de = -I / em**2 - 1.5 * sg * sq / em**2.5 - sg**2 / em**3
            dr_ds = sq / em**1.5 + sg / em**2
            return r, dr_de * em, dr_ds * sg

    else:
        raise ValueError(f"model must be 'exact' or 'series', got {model!r}")
    return f


def _initial_guess(I, R):
    """Slope/intercept of the upper-half linear trend seeds (E_m, Sigma)."""
    order = np.argsort(I)
    upper = order[len(order) // 2 :]
    if upper.size < 2:
        upper = order
    x, y = I[upper], R[upper]
    slope, intercept = np.polyfit(x, y, 1)
    if slope <= 0:
        slope = np.mean(R) / np.mean(I)
    e0 = 1.0 / slope
    # series intercept at the window midpoint is roughly Sigma*sqrt(I)/E**1.5
    s0 = intercept * e0**1.5 / math.sqrt(np.mean(x))
    if not s0 > 0 or not np.isfinite(s0):
        s0 = 0.05 * e0 * math.sqrt(max(np.mean(R), np.min(R[R > 0], initial=1.0)))
    return e0, s0


def fit_rate_curve(points, model: str = "exact", init=None) -> FitResult:
    """Fit (E_m, Sigma) of the chosen rate law to weighted rate points.

    ``points`` is a sequence of RatePoint or a RateCurve.  Needs at least 3
    distinct intensities, at least 2 of them positive.  ``init`` overrides
    the automatic (E_m, Sigma) starting guess.  A fit that exhausts its
    iteration budget comes back with converged=False rather than raising.
    """
    if isinstance(points, RateCurve):
        points = points.points()
    pts = list(points)
    I = np.array([p.I_s for p in pts], dtype=float)
    R = np.array([p.R for p in pts], dtype=float)
    w = np.array([p.weight for p in pts], dtype=float)

    if np.unique(I).size < 3:
        raise UnderdeterminedError(
            f"need at least 3 distinct intensities, got {np.unique(I).size}"
        )
    if np.count_nonzero(I > 0) < 2:
        raise UnderdeterminedError("need at least 2 strictly positive intensities")

    f = _model_and_jac(model)
    sw = np.sqrt(w)

    def residuals(p):
        r, _, _ = f(I, p[0], p[1])
        return sw * (r - R)

    def jac(p):
        _, de, ds = f(I, p[0], p[1])
        return np.column_stack([sw * de, sw * ds])

    if init is not None:
        e0, s0 = init
        if not e0 > 0 or not s0 > 0:
            raise ValueError("init must give positive (E_m, Sigma)")
    else:
        e0, s0 = _initial_guess(I, R)
    x0 = np.array([math.log(e0), math.log(s0)])

    # stop on relative step < 1e-10 or gradient < 1e-12; ftol kept near
    # machine precision so those two criteria decide convergence
    res = least_squares(
        residuals, x0, jac=jac, method="lm",
        xtol=1e-10, ftol=1e-15, gtol=1e-12, max_nfev=200,
    )

    em = math.exp(res.x[0])
    sg = math.exp(res.x[1])
    n, p = I.size, 2
    rw = res.fun
    residual_norm = math.sqrt(float(np.sum(rw**2)) / float(np.sum(w)))

    jtj = res.jac.T @ res.jac
    try:
        cov_log = np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        cov_log = np.linalg.pinv(jtj)
    dof = max(n - p, 1)
    cov_log = cov_log * (float(np.sum(rw**2)) / dof)
    scale = np.diag([em, sg])
    cov = scale @ cov_log @ scale

    det = FirstPassageDetector(em, sg)
    return FitResult(
        E_m=em,
        Sigma=sg,
        residual_norm=residual_norm,
        covariance=cov,
        predicted_dark_rate_exact=dark_rate(det, "exact"),
        predicted_dark_rate_series=dark_rate(det, "series"),
        iterations=int(res.nfev),
        converged=bool(res.status > 0),
    )


def _local_slope(I, R, w, center, lo, hi):
    mask = (I >= lo) & (I <= hi)
    if np.count_nonzero(mask) < 3:
        raise ValueError(
            f"slope window [{lo:.6g}, {hi:.6g}] around I_s={center:.6g} holds only "
            f"{np.count_nonzero(mask)} points; need at least 3"
        )
    x, y, ww = I[mask], R[mask], w[mask]
    xbar = np.average(x, weights=ww)
    ybar = np.average(y, weights=ww)
    denom = np.sum(ww * (x - xbar) ** 2)
    if denom == 0:
        raise ValueError(f"slope window around I_s={center:.6g} has no spread in I_s")
    return float(np.sum(ww * (x - xbar) * (y - ybar)) / denom)


def slope_change(curve: RateCurve, I_lo: float, I_hi: float) -> float:
    """Fractional decrease of the local slope between two intensities.

    Local slopes come from weighted linear regression over the points within
    a factor 10**0.1 of each center (a fifth of a decade each way); returns
    (slope_lo - slope_hi) / slope_lo.  Positive values mean the curve
    flattens with intensity, the signature of the sqrt(I_s) noise term.
    """
    if not 0 < I_lo < I_hi:
        raise ValueError(f"need 0 < I_lo < I_hi, got {I_lo}, {I_hi}")
    if len(curve) < 4:
        raise ValueError(f"curve must hold at least 4 points, got {len(curve)}")
    I = curve.intensities
    if I_lo < I.min() or I_hi > I.max():
        raise ValueError(
            f"window centers must lie inside the curve range "
            f"[{I.min():.6g}, {I.max():.6g}]"
        )
    if curve.weights is not None:
        w = curve.weights
    elif curve.stderr is not None:
        w = np.where(curve.stderr > 0, 1.0 / np.maximum(curve.stderr, 1e-300) ** 2, 1.0)
    else:
        w = np.ones_like(I)

    half = 10.0**0.1
    s_lo = _local_slope(I, curve.rates, w, I_lo, I_lo / half, I_lo * half)
    s_hi = _local_slope(I, curve.rates, w, I_hi, I_hi / half, I_hi * half)
    if s_lo == 0:
        raise ValueError(f"slope at I_lo={I_lo:.6g} is zero; fraction undefined")
    return (s_lo - s_hi) / s_lo


def load_rate_csv(path) -> list[RatePoint]:
    """Read rate points from a CSV with header ``I_s,R`` or ``I_s,R,weight``.

    Comment lines starting with '#' before the header are skipped (run
    outputs embed their parameters there).  Errors carry the 1-based data
    row number.
    """
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    if header not in (["I_s", "R"], ["I_s", "R", "weight"]):
        raise ValueError(
            f"{path}: header must be 'I_s,R' or 'I_s,R,weight', got {','.join(header)}"
        )
    points = []
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != len(header):
            raise ValueError(f"{path}: row {i}: expected {len(header)} fields, got {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError as exc:
            raise ValueError(f"{path}: row {i}: {exc}") from None
        try:
            points.append(RatePoint(*vals))
        except ValueError as exc:
            raise ValueError(f"{path}: row {i}: {exc}") from None
    return points


def save_rate_csv(path, points, header_comments=()) -> None:
    """Write rate points with full round-trip precision.

    ``header_comments`` lines are emitted first, '#'-prefixed, so outputs
    describe the run that made them.  The weight column appears only when
    some weight differs from 1.
    """
    if isinstance(points, RateCurve):
        points = points.points()
    pts = list(points)
    with_weights = any(p.weight != 1.0 for p in pts)
    with open(path, "w", newline="") as fh:
        for line in header_comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(["I_s", "R", "weight"] if with_weights else ["I_s", "R"])
        for p in pts:
            # repr of builtin float is shortest-round-trip; numpy scalars are not
            row = [repr(float(p.I_s)), repr(float(p.R))]
            if with_weights:
                row.append(repr(float(p.weight)))
            writer.writerow(row)
