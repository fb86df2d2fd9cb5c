"""Primal-dual interior-point solver for box-bounded NLPs.

Solves   min f(x)  s.t.  cl <= c(x) <= cu,  lb <= x <= ub
with exact first and second derivatives supplied by the problem's
oracle.  Inequality rows get slack variables; equality rows (cl == cu)
are kept as-is; variables with lb == ub are pinned and eliminated from
the linear algebra.  A monotone (Fiacco-McCormick) barrier schedule, a
fraction-to-boundary rule, and a backtracking line search on an l1
exact-penalty merit function drive the iteration.  The KKT system is
factored dense (LDL^T with inertia correction) for small problems and
sparse (LU with a curvature test) for large ones.

Multiplier convention, pinned here and relied on by the costate
transform: the Lagrangian is f(x) + mult . c(x), so at a solution
grad f + J^T mult - z_lower + z_upper = 0 with z >= 0 on both sides.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .hyperdual import EvaluationError

__all__ = ["SolverOptions", "KktResiduals", "NlpResult", "solve"]

_STATUS_OK = "converged"
_STATUS_MAXIT = "max-iterations"
_STATUS_INFEAS = "infeasible"
_STATUS_FAIL = "numerical-failure"


@dataclass
class SolverOptions:
    tolerance: float = 1e-9
    max_iterations: int = 500
    mu_initial: float = 0.1
    dense_limit: int = 1600
    log: Optional[Callable[[str], None]] = None

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass
class KktResiduals:
    stationarity: float
    feasibility: float
    complementarity: float

    def worst(self) -> float:
        return max(self.stationarity, self.feasibility, self.complementarity)


@dataclass
class NlpResult:
    x: np.ndarray
    eq_multipliers: np.ndarray
    bound_multipliers: np.ndarray  # (n, 2): lower, upper
    status: str
    kkt: KktResiduals
    iterations: int
    wall_time: float
    objective: float
    message: str = ""


def _push_interior(x, lo, hi, kappa=1e-2):
    """Move x strictly inside [lo, hi] (IPOPT-style push)."""
    x = np.array(x, dtype=float)
    both = np.isfinite(lo) & np.isfinite(hi)
    width = np.where(both, hi - lo, np.inf)
    pl = np.where(np.isfinite(lo), np.minimum(kappa * np.maximum(1.0, np.abs(lo)), kappa * width), 0.0)
    pu = np.where(np.isfinite(hi), np.minimum(kappa * np.maximum(1.0, np.abs(hi)), kappa * width), 0.0)
    x = np.where(np.isfinite(lo), np.maximum(x, lo + pl), x)
    x = np.where(np.isfinite(hi), np.minimum(x, hi - pu), x)
    return x


def _ldl_inertia(d: np.ndarray):
    """(pos, neg, zero) eigenvalue counts of an LDL^T block-diagonal D."""
    n = d.shape[0]
    pos = neg = zero = 0
    i = 0
    while i < n:
        if i + 1 < n and d[i, i + 1] != 0.0:
            blk = d[i : i + 2, i : i + 2]
            ev = np.linalg.eigvalsh(0.5 * (blk + blk.T))
            for e in ev:
                if e > 0:
                    pos += 1
                elif e < 0:
                    neg += 1
                else:
                    zero += 1
            i += 2
        else:
            e = d[i, i]
            if e > 0:
                pos += 1
            elif e < 0:
                neg += 1
            else:
                zero += 1
            i += 1
    return pos, neg, zero


class _DenseKkt:
    """Dense LDL^T factorization with inertia reporting."""

    def __init__(self, kmat: np.ndarray):
        self.lu, self.d, self.perm = sla.ldl(kmat, lower=True)
        self.inertia = _ldl_inertia(self.d)
        self._tri = self.lu[self.perm]

    def solve(self, b: np.ndarray) -> np.ndarray:
        w = sla.solve_triangular(self._tri, b[self.perm], lower=True, unit_diagonal=True)
        z = self._block_solve(w)
        yv = sla.solve_triangular(self._tri.T, z, lower=False, unit_diagonal=True)
        out = np.empty_like(yv)
        out[self.perm] = yv
        return out

    def _block_solve(self, w: np.ndarray) -> np.ndarray:
        d = self.d
        n = d.shape[0]
        z = np.empty_like(w)
        i = 0
        while i < n:
            if i + 1 < n and d[i, i + 1] != 0.0:
                a, b_, c = d[i, i], d[i, i + 1], d[i + 1, i + 1]
                det = a * c - b_ * b_
                z[i] = (c * w[i] - b_ * w[i + 1]) / det
                z[i + 1] = (a * w[i + 1] - b_ * w[i]) / det
                i += 2
            else:
                z[i] = w[i] / d[i, i]
                i += 1
        return z


class _Ipm:
    def __init__(self, nlp, options: SolverOptions, x0):
        self.nlp = nlp
        self.opt = options
        n = nlp.n_var
        self.lb = np.asarray(nlp.lb, dtype=float)
        self.ub = np.asarray(nlp.ub, dtype=float)
        self.cl = np.asarray(nlp.cl, dtype=float)
        self.cu = np.asarray(nlp.cu, dtype=float)
        self.m = self.cl.size
        self.fixed = self.lb == self.ub
        self.free = ~self.fixed
        self.nf = int(self.free.sum())
        self.eq_row = self.cl == self.cu
        self.ineq_rows = np.where(~self.eq_row)[0]
        self.ns = self.ineq_rows.size
        self.nv = self.nf + self.ns

        self.vlb = np.concatenate([self.lb[self.free], self.cl[self.ineq_rows]])
        self.vub = np.concatenate([self.ub[self.free], self.cu[self.ineq_rows]])
        self.has_lb = np.isfinite(self.vlb)
        self.has_ub = np.isfinite(self.vub)
        # relax strict boxes slightly so constraints active at a bound keep a
        # barrier interior (degenerate rows otherwise blow the duals up);
        # reported iterates are clipped back into the original boxes
        relax = 1e-8
        self.vlb[self.has_lb] -= relax * np.maximum(1.0, np.abs(self.vlb[self.has_lb]))
        self.vub[self.has_ub] += relax * np.maximum(1.0, np.abs(self.vub[self.has_ub]))

        # residual offset: equality rows compare against cl
        self.row_rhs = np.where(self.eq_row, self.cl, 0.0)
        # slack scatter matrix (m x ns)
        if self.ns:
            self.smat = sp.coo_matrix(
                (np.ones(self.ns), (self.ineq_rows, np.arange(self.ns))),
                shape=(self.m, self.ns),
            ).tocsr()
        else:
            self.smat = sp.csr_matrix((self.m, 0))

        x0 = np.asarray(x0, dtype=float).copy()
        x0[self.fixed] = self.lb[self.fixed]
        xf0 = _push_interior(x0[self.free], self.lb[self.free], self.ub[self.free])
        self.x_full = x0
        self.x_full[self.free] = xf0
        c0 = self._con(self.x_full)
        s0 = _push_interior(c0[self.ineq_rows], self.cl[self.ineq_rows], self.cu[self.ineq_rows])
        self.v = np.concatenate([xf0, s0])
        self.y = np.zeros(self.m)
        self.zl = np.where(self.has_lb, 1.0, 0.0)
        self.zu = np.where(self.has_ub, 1.0, 0.0)
        self.mu = options.mu_initial
        self.nu = 1.0
        self.delta_w_last = 0.0
        self.evals = 0

    # -- problem callbacks -------------------------------------------------

    def _obj(self, x) -> float:
        self.evals += 1
        return float(self.nlp.objective(x))

    def _con(self, x) -> np.ndarray:
        return np.asarray(self.nlp.constraints(x), dtype=float)

    def _sync_x(self, v) -> np.ndarray:
        x = self.x_full.copy()
        x[self.free] = v[: self.nf]
        return x

    def residual(self, v, c=None) -> np.ndarray:
        if c is None:
            c = self._con(self._sync_x(v))
        e = c - self.row_rhs
        if self.ns:
            e = e - self.smat @ v[self.nf :]
        return e

    # -- merit ------------------------------------------------------------

    def _barrier_value(self, v, f) -> float:
        gl = v - self.vlb
        gu = self.vub - v
        if np.any(gl[self.has_lb] <= 0) or np.any(gu[self.has_ub] <= 0):
            return np.inf
        val = f
        if self.has_lb.any():
            val -= self.mu * np.log(gl[self.has_lb]).sum()
        if self.has_ub.any():
            val -= self.mu * np.log(gu[self.has_ub]).sum()
        return val

    def merit(self, v) -> tuple[float, float]:
        try:
            x = self._sync_x(v)
            f = self._obj(x)
            e = self.residual(v)
        except (EvaluationError, FloatingPointError, OverflowError):
            return np.inf, np.inf
        if not np.isfinite(f) or not np.all(np.isfinite(e)):
            return np.inf, np.inf
        theta = np.abs(e).sum()
        return self._barrier_value(v, f) + self.nu * theta, theta

    # -- KKT pieces ---------------------------------------------------------

    def full_jacobian(self, x) -> sp.csr_matrix:
        jx = self.nlp.jacobian(x)
        if not sp.issparse(jx):
            jx = sp.csr_matrix(jx)
        jfree = jx[:, self.free]
        if self.ns:
            return sp.hstack([jfree, -self.smat], format="csr")
        return jfree.tocsr()

    def grad_v(self, gx) -> np.ndarray:
        return np.concatenate([gx[self.free], np.zeros(self.ns)])

    def kkt_errors(self, gv, jv, e, v):
        dual = gv + jv.T @ self.y - self.zl + self.zu
        stat = float(np.max(np.abs(dual))) if dual.size else 0.0
        feas = float(np.max(np.abs(e))) if e.size else 0.0
        gl = v - self.vlb
        gu = self.vub - v
        comp0 = 0.0
        comp_mu = 0.0
        if self.has_lb.any():
            cl_ = self.zl[self.has_lb] * gl[self.has_lb]
            comp0 = max(comp0, float(np.max(np.abs(cl_))))
            comp_mu = max(comp_mu, float(np.max(np.abs(cl_ - self.mu))))
        if self.has_ub.any():
            cu_ = self.zu[self.has_ub] * gu[self.has_ub]
            comp0 = max(comp0, float(np.max(np.abs(cu_))))
            comp_mu = max(comp_mu, float(np.max(np.abs(cu_ - self.mu))))
        return stat, feas, comp0, comp_mu

    def _sigma(self, v):
        gl = v - self.vlb
        gu = self.vub - v
        sig = np.zeros(self.nv)
        sig[self.has_lb] += self.zl[self.has_lb] / gl[self.has_lb]
        sig[self.has_ub] += self.zu[self.has_ub] / gu[self.has_ub]
        return sig

    def _barrier_grad(self, gv, v):
        gl = v - self.vlb
        gu = self.vub - v
        g = gv.copy()
        g[self.has_lb] -= self.mu / gl[self.has_lb]
        g[self.has_ub] += self.mu / gu[self.has_ub]
        return g

    def _kkt_error_at(self, v, y, zl, zu) -> float:
        """Barrier KKT error at a trial point (one extra oracle pass)."""
        try:
            x = self._sync_x(v)
            gx = np.asarray(self.nlp.gradient(x), dtype=float)
            jx = self.nlp.jacobian(x)
            if not sp.issparse(jx):
                jx = sp.csr_matrix(jx)
            jfree = jx[:, self.free]
            jv = sp.hstack([jfree, -self.smat], format="csr") if self.ns else jfree.tocsr()
            e = self.residual(v)
        except (EvaluationError, FloatingPointError, OverflowError):
            return np.inf
        gv = self.grad_v(gx)
        dual = gv + jv.T @ y - zl + zu
        if not (np.all(np.isfinite(dual)) and np.all(np.isfinite(e))):
            return np.inf
        err = max(
            float(np.max(np.abs(dual))) if dual.size else 0.0,
            float(np.max(np.abs(e))) if e.size else 0.0,
        )
        gl = v - self.vlb
        gu = self.vub - v
        if np.any(gl[self.has_lb] <= 0.0) or np.any(gu[self.has_ub] <= 0.0):
            return np.inf
        if self.has_lb.any():
            err = max(err, float(np.max(np.abs(zl[self.has_lb] * gl[self.has_lb] - self.mu))))
        if self.has_ub.any():
            err = max(err, float(np.max(np.abs(zu[self.has_ub] * gu[self.has_ub] - self.mu))))
        return err

    def hess_v(self, x) -> sp.csr_matrix:
        hx = self.nlp.hessian(x, 1.0, self.y)
        if not sp.issparse(hx):
            hx = sp.csr_matrix(hx)
        hff = hx[self.free][:, self.free]
        if self.ns:
            return sp.block_diag([hff, sp.csr_matrix((self.ns, self.ns))], format="csr")
        return hff.tocsr()

    # -- KKT solve with regularization ---------------------------------------

    def _solve_kkt(self, hv, sig, jv, rd, rp):
        nv, m = self.nv, self.m
        dim = nv + m
        rhs = -np.concatenate([rd, rp])
        dense = dim <= self.opt.dense_limit
        delta_c = 0.0
        delta_w = 0.0
        tried_free = False
        for attempt in range(40):
            wmat = hv + sp.diags(sig + delta_w, 0, shape=(nv, nv))
            corner = -delta_c * sp.identity(m) if delta_c else sp.csc_matrix((m, m))
            kmat = sp.bmat([[wmat, jv.T], [jv, corner]], format="csc")
            try:
                if dense:
                    fact = _DenseKkt(kmat.toarray())
                    pos, neg, zero = fact.inertia
                    ok = pos == nv and neg == m and zero == 0
                else:
                    fact = spla.splu(kmat)
                    ok = True
            except (RuntimeError, ValueError, np.linalg.LinAlgError):
                ok = False
                fact = None
            if fact is not None and ok:
                sol = fact.solve(rhs)
                # one step of iterative refinement sharpens the direction
                res = kmat @ sol - rhs
                if np.max(np.abs(res)) > 1e-12 * max(1.0, np.max(np.abs(rhs))):
                    sol = sol - fact.solve(res)
                dv, dy = sol[:nv], sol[nv:]
                if not dense:
                    curv = dv @ (wmat @ dv)
                    if curv < 1e-10 * float(dv @ dv) and float(dv @ dv) > 0:
                        ok = False
                if ok and np.all(np.isfinite(sol)):
                    self.delta_w_last = delta_w
                    return dv, dy
            # regularize and retry
            if not tried_free and fact is not None and not ok and dense and fact.inertia[2] > 0:
                delta_c = max(delta_c, 1e-8 * max(self.mu, 1e-8) ** 0.25)
                tried_free = True
                continue
            if delta_w == 0.0:
                delta_w = 1e-4 if self.delta_w_last == 0.0 else max(1e-20, self.delta_w_last / 3.0)
            else:
                delta_w *= 8.0
                delta_c = max(delta_c, 1e-8 * max(self.mu, 1e-8) ** 0.25)
            if delta_w > 1e40:
                break
        raise RuntimeError("KKT system could not be regularized")

    # -- main loop ----------------------------------------------------------

    def run(self) -> NlpResult:
        opt = self.opt
        start = time.perf_counter()
        status = _STATUS_MAXIT
        message = ""
        kappa_eps = 10.0
        kappa_mu = 0.2
        theta_mu = 1.5
        mu_floor = opt.tolerance / 20.0
        fails = 0
        it = 0
        best = None
        stat = feas = comp0 = np.inf

        for it in range(opt.max_iterations):
            x = self._sync_x(self.v)
            try:
                f = self._obj(x)
                gx = np.asarray(self.nlp.gradient(x), dtype=float)
                c = self._con(x)
                jv = self.full_jacobian(x)
            except (EvaluationError, FloatingPointError, OverflowError) as exc:
                status, message = _STATUS_FAIL, f"evaluation failed: {exc}"
                break
            e = self.residual(self.v, c)
            gv = self.grad_v(gx)
            stat, feas, comp0, comp_mu = self.kkt_errors(gv, jv, e, self.v)
            if best is None or max(stat, feas, comp0) < best[0]:
                best = (
                    max(stat, feas, comp0),
                    self.v.copy(),
                    self.y.copy(),
                    self.zl.copy(),
                    self.zu.copy(),
                    KktResiduals(stat, feas, comp0),
                )
            if opt.log is not None:
                opt.log(
                    f"it={it:4d} obj={f: .10e} feas={feas:8.2e} stat={stat:8.2e} "
                    f"comp={comp0:8.2e} mu={self.mu:8.2e}"
                )
            if max(stat, feas, comp0) <= opt.tolerance:
                status = _STATUS_OK
                break
            # multiplier-scaled error keeps huge duals from stalling mu
            sd = max(100.0, (np.abs(self.y).sum() + self.zl.sum() + self.zu.sum()) / max(1, self.m + self.nv)) / 100.0
            mu_dropped = False
            while max(stat / sd, feas, comp_mu / sd) <= kappa_eps * self.mu and self.mu > mu_floor:
                self.mu = max(mu_floor, min(kappa_mu * self.mu, self.mu**theta_mu))
                mu_dropped = True
                _, _, _, comp_mu = self.kkt_errors(gv, jv, e, self.v)
            if mu_dropped:
                self.nu = 1.0  # stale penalty weights block late steps

            try:
                hv = self.hess_v(x)
            except (EvaluationError, FloatingPointError, OverflowError) as exc:
                status, message = _STATUS_FAIL, f"Hessian evaluation failed: {exc}"
                break
            sig = self._sigma(self.v)
            rd = self._barrier_grad(gv, self.v) + jv.T @ self.y
            try:
                dv, dy = self._solve_kkt(hv, sig, jv, rd, e)
            except RuntimeError as exc:
                status, message = _STATUS_FAIL, str(exc)
                break

            gl = self.v - self.vlb
            gu = self.vub - self.v
            dzl = np.zeros_like(self.zl)
            dzu = np.zeros_like(self.zu)
            dzl[self.has_lb] = (
                self.mu / gl[self.has_lb]
                - self.zl[self.has_lb]
                - self.zl[self.has_lb] / gl[self.has_lb] * dv[self.has_lb]
            )
            dzu[self.has_ub] = (
                self.mu / gu[self.has_ub]
                - self.zu[self.has_ub]
                + self.zu[self.has_ub] / gu[self.has_ub] * dv[self.has_ub]
            )

            tau = max(0.99, 1.0 - self.mu)
            alpha_max = 1.0
            neg = dv < 0
            msk = neg & self.has_lb
            if msk.any():
                alpha_max = min(alpha_max, float(np.min(-tau * gl[msk] / dv[msk])))
            pos = dv > 0
            msk = pos & self.has_ub
            if msk.any():
                alpha_max = min(alpha_max, float(np.min(tau * gu[msk] / dv[msk])))
            alpha_z = 1.0
            msk = (dzl < 0) & self.has_lb
            if msk.any():
                alpha_z = min(alpha_z, float(np.min(-tau * self.zl[msk] / dzl[msk])))
            msk = (dzu < 0) & self.has_ub
            if msk.any():
                alpha_z = min(alpha_z, float(np.min(-tau * self.zu[msk] / dzu[msk])))

            # penalty weight large enough that the direction is descent
            gphi = self._barrier_grad(gv, self.v)
            dphi0 = float(gphi @ dv)
            theta0 = float(np.abs(e).sum())
            if theta0 > 1e-14:
                curv = float(dv @ (hv @ dv)) + float((sig * dv) @ dv)
                need = (dphi0 + 0.5 * max(0.0, curv)) / (0.5 * theta0)
                self.nu = min(max(self.nu, need + 1.0), 1e12)
            dmerit = dphi0 - self.nu * theta0

            phi0, _ = self.merit(self.v)
            noise = 10.0 * np.finfo(float).eps * max(1.0, abs(phi0))
            alpha = alpha_max
            accepted = False
            # a step that barely moves the primal refines the multipliers;
            # the merit cannot see it, so judge it by the barrier KKT error
            dv_scale = float(np.max(np.abs(dv))) / (1.0 + float(np.max(np.abs(self.v))))
            if dv_scale < 1e-12:
                if self._kkt_error_at(
                    self.v + alpha * dv,
                    self.y + alpha * dy,
                    np.clip(self.zl + alpha_z * dzl, 0.0, None),
                    np.clip(self.zu + alpha_z * dzu, 0.0, None),
                ) <= max(stat, feas, comp_mu):
                    accepted = True
            if not accepted:
                alpha = alpha_max
                for _ in range(60):
                    phi_t, _ = self.merit(self.v + alpha * dv)
                    if np.isfinite(phi_t) and phi_t <= phi0 + 1e-4 * alpha * min(dmerit, 0.0) + noise:
                        accepted = True
                        break
                    alpha *= 0.5
                    if alpha < 1e-14:
                        break
            if not accepted:
                # merit roundoff can reject pure dual-refinement steps near a
                # solution; take the full step anyway when it reduces the
                # barrier KKT error
                alpha = alpha_max
                if self._kkt_error_at(
                    self.v + alpha * dv,
                    self.y + alpha * dy,
                    np.clip(self.zl + alpha_z * dzl, 0.0, None),
                    np.clip(self.zu + alpha_z * dzu, 0.0, None),
                ) <= 0.99 * max(stat, feas, comp_mu):
                    accepted = True
            if not accepted:
                fails += 1
                if fails >= 8:
                    status = _STATUS_INFEAS if feas > max(1e3 * opt.tolerance, 1e-7) else _STATUS_FAIL
                    message = "line search failed repeatedly"
                    break
                alpha = min(alpha_max, 1e-8)  # crawl and hope curvature changes
            else:
                fails = 0

            self.v = self.v + alpha * dv
            self.y = self.y + alpha * dy
            self.zl = self.zl + alpha_z * dzl
            self.zu = self.zu + alpha_z * dzu
            # keep duals within a large multiple of the primal estimate
            gl = self.v - self.vlb
            gu = self.vub - self.v
            ksig = 1e10
            msk = self.has_lb
            self.zl[msk] = np.clip(self.zl[msk], self.mu / (ksig * gl[msk]), ksig * self.mu / gl[msk])
            msk = self.has_ub
            self.zu[msk] = np.clip(self.zu[msk], self.mu / (ksig * gu[msk]), ksig * self.mu / gu[msk])

        wall = time.perf_counter() - start
        kkt = KktResiduals(stationarity=stat, feasibility=feas, complementarity=comp0)
        if status != _STATUS_OK and best is not None and best[0] < max(stat, feas, comp0):
            _, self.v, self.y, self.zl, self.zu, kkt = best
        x = np.clip(self._sync_x(self.v), self.lb, self.ub)
        try:
            fval = self._obj(x)
        except (EvaluationError, FloatingPointError, OverflowError):
            fval = np.nan
        eq_mult = self.y.copy()
        zl_x = np.zeros(self.nlp.n_var)
        zu_x = np.zeros(self.nlp.n_var)
        zl_x[self.free] = self.zl[: self.nf]
        zu_x[self.free] = self.zu[: self.nf]
        if self.fixed.any():
            # pinned variables absorb the stationarity residual exactly
            try:
                gx = np.asarray(self.nlp.gradient(x), dtype=float)
                jx = self.nlp.jacobian(x)
                resid = gx + np.asarray(jx.T @ eq_mult).ravel()
                zl_x[self.fixed] = np.maximum(resid[self.fixed], 0.0)
                zu_x[self.fixed] = np.maximum(-resid[self.fixed], 0.0)
            except (EvaluationError, FloatingPointError, OverflowError):
                pass
        return NlpResult(
            x=x,
            eq_multipliers=eq_mult,
            bound_multipliers=np.stack([zl_x, zu_x], axis=1),
            status=status,
            kkt=kkt,
            iterations=it + 1,
            wall_time=wall,
            objective=fval,
            message=message,
        )


def solve(nlp, options: Optional[SolverOptions] = None, initial_point=None) -> NlpResult:
    """Solve a box-bounded NLP to the requested KKT tolerance.

    The initial point is clipped into the variable boxes.  Failures are
    reported through the result status; the process is never aborted.
    """
    opt = options or SolverOptions()
    if initial_point is None:
        initial_point = np.zeros(nlp.n_var)
    try:
        ipm = _Ipm(nlp, opt, initial_point)
        return ipm.run()
    except (EvaluationError, FloatingPointError, OverflowError) as exc:
        x = np.clip(np.asarray(initial_point, dtype=float), nlp.lb, nlp.ub)
        return NlpResult(
            x=x,
            eq_multipliers=np.zeros(nlp.n_con),
            bound_multipliers=np.zeros((nlp.n_var, 2)),
            status=_STATUS_FAIL,
            kkt=KktResiduals(np.inf, np.inf, np.inf),
            iterations=0,
            wall_time=0.0,
            objective=np.nan,
            message=f"initialization failed: {exc}",
        )
