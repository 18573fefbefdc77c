"""Solvers for ``min ||r||_1  s.t.  ||A r - f||_2 <= eps``.

Two independent methods are provided.

``homotopy``
    Follows the piecewise-linear path of the l1-penalized least-squares
    solutions ``argmin 1/2 ||A r - f||^2 + lam ||r||_1`` from ``lam = ||A^T f||_inf``
    downward, adding and dropping active columns at breakpoints, and stops
    exactly where the residual norm reaches ``eps``. Every point on the path
    is a fixed point of the soft-thresholding map, and the stopping point is
    the constrained minimizer. Finite, exact up to rounding, and insensitive
    to the conditioning of ``A`` outside the active set.

``admm``
    Alternating direction splitting ``r = z`` between the residual ball
    (exact Euclidean projection via the SVD of ``A`` and a scalar secular
    equation) and the l1 norm (soft thresholding). Simple and robust on
    well-conditioned matrices, but slow on highly coherent dictionaries.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.optimize import brentq

log = logging.getLogger(__name__)


def soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def homotopy_bpdn(A, f, eps, max_iterations=5000, tol=1e-10):
    """Run the l1 homotopy until ``||A r - f|| = eps``.

    Returns ``(r, iterations, converged)``. ``converged`` is false when the
    iteration budget runs out or the path reaches ``lam = 0`` without meeting
    the residual target (``f`` is farther than ``eps`` from the range of A).
    """
    A = np.asarray(A, dtype=float)
    f = np.asarray(f, dtype=float)
    n = A.shape[1]
    r = np.zeros(n)
    resid = f.copy()
    if np.linalg.norm(resid) <= eps:
        return r, 0, True
    # stop slightly inside the ball so rounding in A @ r cannot push us out
    eps_in = max(eps - 1e3 * np.finfo(float).eps * np.linalg.norm(f), 0.5 * eps)

    corr = A.T @ resid
    lam = lam0 = float(np.max(np.abs(corr)))
    active = [int(np.argmax(np.abs(corr)))]
    is_active = np.zeros(n, dtype=bool)
    is_active[active] = True
    signs = {active[0]: np.sign(corr[active[0]])}

    for it in range(1, max_iterations + 1):
        A_S = A[:, active]
        s = np.array([signs[i] for i in active])
        gram = A_S.T @ A_S
        try:
            direction = np.linalg.solve(gram, s)
        except np.linalg.LinAlgError:
            direction = np.linalg.lstsq(gram, s, rcond=None)[0]
        v = A_S @ direction
        av = A.T @ v

        # as lam decreases by g: corr(g) = corr - g * av, |corr_S(g)| = lam - g
        step, event, index = lam, "end", -1
        floor = tol * lam
        inactive = np.flatnonzero(~is_active)
        if inactive.size:
            c_in, a_in = corr[inactive], av[inactive]
            with np.errstate(divide="ignore", invalid="ignore"):
                g_pos = np.where(1 - a_in > tol, (lam - c_in) / (1 - a_in), np.inf)
                g_neg = np.where(1 + a_in > tol, (lam + c_in) / (1 + a_in), np.inf)
            g_all = np.minimum(np.where(g_pos > floor, g_pos, np.inf), np.where(g_neg > floor, g_neg, np.inf))
            k = int(np.argmin(g_all))
            if g_all[k] < step:
                step, event, index = float(g_all[k]), "add", int(inactive[k])

        r_S = r[active]
        with np.errstate(divide="ignore", invalid="ignore"):
            g_drop = np.where(direction != 0, -r_S / direction, np.inf)
        g_drop = np.where(g_drop > floor, g_drop, np.inf)
        k = int(np.argmin(g_drop))
        if g_drop[k] < step:
            step, event, index = float(g_drop[k]), "drop", active[k]

        # residual along the segment: ||resid - g v||^2 = ||w||^2 + a2 (p - g)^2
        # with w orthogonal to v; this form avoids cancellation when eps is tiny
        a2 = v @ v
        if a2 > 0:
            p_coef = (resid @ v) / a2
            w2 = float(np.sum((resid - p_coef * v) ** 2))
            slack = eps_in * eps_in - w2
            if slack >= 0:
                g_hit = max(p_coef - np.sqrt(slack / a2), 0.0)
                if g_hit <= step:
                    r[active] += g_hit * direction
                    return r, it, True

        r[active] += step * direction
        lam -= step
        resid = f - A @ r
        corr = A.T @ resid
        if lam <= tol * lam0:
            # end of the path: further events are rounding noise
            return r, it, bool(np.linalg.norm(resid) <= eps * (1 + 1e-9))

        if event == "add":
            active.append(index)
            is_active[index] = True
            signs[index] = np.sign(corr[index])
        elif event == "drop":
            active.remove(index)
            is_active[index] = False
            r[index] = 0.0
            del signs[index]
            if not active:
                log.debug("homotopy: active set emptied at lam=%g", lam)
                return r, it, False
        else:
            return r, it, bool(np.linalg.norm(resid) <= eps * (1 + 1e-9))
    return r, max_iterations, False


class BallProjector:
    """Euclidean projection onto ``{x : ||A x - f|| <= eps}``."""

    def __init__(self, A, f, eps, rank_tol=1e-13):
        U, S, Vt = np.linalg.svd(A, full_matrices=False)
        keep = S > S[0] * rank_tol if S.size else np.zeros(0, dtype=bool)
        self.U, self.S, self.Vt = U[:, keep], S[keep], Vt[keep]
        self.b = self.U.T @ f
        self.perp2 = max(float(f @ f - self.b @ self.b), 0.0)
        self.eps2 = eps * eps

    @property
    def feasible(self) -> bool:
        return self.perp2 <= self.eps2

    def _res2(self, lam, g):
        return np.sum((g / (1 + lam * self.S ** 2)) ** 2) + self.perp2

    def __call__(self, v):
        vp = self.Vt @ v
        g = self.S * vp - self.b
        if self._res2(0.0, g) <= self.eps2:
            return v
        hi = 1.0
        while self._res2(hi, g) > self.eps2:
            hi *= 10.0
            if hi > 1e300:
                break
        lam = brentq(lambda t: self._res2(t, g) - self.eps2, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        c = (vp + lam * self.S * self.b) / (1 + lam * self.S ** 2)
        return v + self.Vt.T @ (c - vp)


def admm_bpdn(A, f, eps, rho=1.0, max_iterations=5000, tol=1e-8):
    """ADMM for the constrained problem, returning the sparse iterate.

    The problem is solved on ``f / ||f||`` so that ``rho`` has a fixed scale;
    the result is rescaled. After the loop the sparse iterate is projected
    onto the residual ball within its own support, which keeps it sparse
    and makes it exactly feasible when that is possible.
    """
    A = np.asarray(A, dtype=float)
    f = np.asarray(f, dtype=float)
    scale = float(np.linalg.norm(f))
    n = A.shape[1]
    if scale == 0 or scale <= eps:
        return np.zeros(n), 0, True
    fs, es = f / scale, eps / scale
    proj = BallProjector(A, fs, es)
    if not proj.feasible:
        return np.zeros(n), 0, False

    z = np.zeros(n)
    w = np.zeros(n)
    converged = False
    it = 0
    for it in range(1, max_iterations + 1):
        x = proj(z - w)
        z_old = z
        z = soft_threshold(x + w, 1.0 / rho)
        w = w + x - z
        primal = np.linalg.norm(x - z)
        dual = rho * np.linalg.norm(z - z_old)
        if primal <= tol * max(np.linalg.norm(x), np.linalg.norm(z), 1e-12) and dual <= tol * max(
            rho * np.linalg.norm(w), 1e-12
        ):
            converged = True
            break

    support = np.flatnonzero(z)
    if support.size:
        sub = BallProjector(A[:, support], fs, es)
        if sub.feasible:
            z = z.copy()
            z[support] = sub(z[support])
        else:
            converged = False
    return z * scale, it, converged
