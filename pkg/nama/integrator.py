"""Adaptive embedded Runge-Kutta integration with PI step-size control."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from nama.errors import BlowUpError, ConvergenceError

logger = logging.getLogger(__name__)

Rhs = Callable[[float, np.ndarray], np.ndarray]
Guard = Callable[[float, np.ndarray], "str | None"]

SAFETY = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0
# PI controller exponents (alpha = 1/5 - 3/4 beta)
PI_BETA = 0.04
PI_ALPHA = 0.2 - 0.75 * PI_BETA
DEFAULT_MAX_STEPS = 200_000


class RKDP54:
    """Dormand-Prince 5(4) pair: seven stages, first-same-as-last, 5th order propagation."""

    s = 7
    n = 5
    m = 4

    eval_stages = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)

    BT = {
        0: [1 / 5],
        1: [3 / 40, 9 / 40],
        2: [44 / 45, -56 / 15, 32 / 9],
        3: [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
        4: [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
        5: [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
    }

    # 5th order weights minus embedded 4th order weights
    TR = np.array(
        [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
    )

    def step(
        self, f: Rhs, t: float, y: np.ndarray, k1: np.ndarray, h: float
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """One trial step. Returns (y_new, f(t+h, y_new), local error estimate)."""
        ks = [k1]
        for i in range(self.s - 1):
            weights = self.BT[i]
            incr = sum(w * k for w, k in zip(weights, ks) if w)
            stage_y = y + h * incr
            ks.append(np.asarray(f(t + self.eval_stages[i + 1] * h, stage_y), dtype=float))
        y_new = stage_y
        err = h * sum(e * k for e, k in zip(self.TR, ks) if e)
        return y_new, ks[-1], err


@dataclass
class StepStats:
    accepted: int = 0
    rejected: int = 0
    evaluations: int = 0


@dataclass
class Trajectory:
    """Accepted steps: abscissae, states and state derivatives."""

    t: np.ndarray
    y: np.ndarray
    dy: np.ndarray
    stats: StepStats = field(default_factory=StepStats)


def error_norm(
    err: np.ndarray, y: np.ndarray, y_new: np.ndarray, rtol: float, atol: float
) -> float:
    scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
    return float(np.sqrt(np.mean((err / scale) ** 2)))


def integrate(
    f: Rhs,
    t0: float,
    y0: np.ndarray,
    t_end: float,
    *,
    rtol: float,
    atol: float,
    h0: float,
    max_step: float = np.inf,
    max_steps: int = DEFAULT_MAX_STEPS,
    guard: Guard | None = None,
) -> Trajectory:
    """Integrate y' = f(t, y) from t0 to exactly t_end (t_end > t0).

    The right-hand side may return non-finite values outside the region where
    the problem is defined; such trial steps are rejected and shrunk. ``guard``
    inspects every accepted state and returns a reason string to abort with
    ``BlowUpError``.
    """
    tableau = RKDP54()
    stats = StepStats()
    t = float(t0)
    y = np.asarray(y0, dtype=float)
    k1 = np.asarray(f(t, y), dtype=float)
    stats.evaluations += 1
    ts, ys, dys = [t], [y], [k1]

    h = min(h0, max_step, t_end - t)
    err_prev = 1e-4
    just_rejected = False

    while t < t_end:
        if stats.accepted + stats.rejected >= max_steps:
            raise ConvergenceError(f"integration stalled at t={t} after {max_steps} steps")
        last = t + h >= t_end
        if last:
            h = t_end - t
        y_new, k7, err_vec = tableau.step(f, t, y, k1, h)
        stats.evaluations += tableau.s - 1
        err = error_norm(err_vec, y, y_new, rtol, atol)
        if not np.isfinite(err) or not np.all(np.isfinite(y_new)):
            err = np.inf

        if err <= 1.0:
            t = t_end if last else t + h
            if guard is not None:
                reason = guard(t, y_new)
                if reason:
                    raise BlowUpError(t, reason)
            y, k1 = y_new, k7
            ts.append(t)
            ys.append(y)
            dys.append(k1)
            stats.accepted += 1
            err = max(err, 1e-10)
            fac = SAFETY * err**-PI_ALPHA * err_prev**PI_BETA
            fac = min(FAC_MAX, max(FAC_MIN, fac))
            if just_rejected:
                fac = min(fac, 1.0)
            h = min(h * fac, max_step)
            err_prev = max(err, 1e-4)
            just_rejected = False
        else:
            stats.rejected += 1
            fac = FAC_MIN if not np.isfinite(err) else max(FAC_MIN, SAFETY * err**-0.2)
            h *= fac
            just_rejected = True
            if h < 1e-14 * max(1.0, abs(t)):
                raise BlowUpError(t, "step size underflow")

    logger.debug(
        "integrated [%g, %g]: %d accepted, %d rejected, %d evaluations",
        t0,
        t_end,
        stats.accepted,
        stats.rejected,
        stats.evaluations,
    )
    return Trajectory(t=np.array(ts), y=np.array(ys), dy=np.array(dys), stats=stats)
