"""Multi-domain LGR transcription of a Bolza problem into an NLP.

Variable layout (all domains share their boundary state variables, so
state continuity between domains holds structurally):

  * states:   one block of n_y variables per global support point; the
              global support points are the concatenated collocation
              points of all domains plus the final endpoint, so support
              point g coincides with collocation point g for g < P.
  * controls: one block of n_u variables per collocation point; pinned
              (bang) components are boxed to their constant value.
  * times:    t0 and tf appear only when their boxes have width; the
              switch times are always variables.

Constraint layout: defect rows (point-major, state component within),
then path rows, then boundary rows.  Defect rows follow
``D Y - ((e - s)/2) a = 0`` per domain, so the multiplier of a defect
row in the Lagrangian ``f + mu.c`` maps to the costate via the
quadrature-weight transform implemented in :meth:`Transcription.extract`.

Derivatives are exact: every defect/path/integrand value at a
collocation point is a function of that point's state and control plus
the domain's two endpoint times, so first and second derivatives are
obtained by hyper-dual probing of those few local slots, vectorized
over all collocation points at once.  The ``D Y`` part is linear with
constant coefficients and is assembled once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from . import hyperdual as hd
from .hyperdual import HyperDual, parts
from .lgr import MeshLayout, affine_to_time, diff_matrix, lgr_rule
from .ocp import BolzaProblem, CollocatedSolution, DomainSolution, MultiDomainProblem

__all__ = [
    "NlpProblem",
    "VariableLayout",
    "Transcription",
    "assemble",
    "extract",
    "hamiltonian",
]


def hamiltonian(problem: BolzaProblem, y, lam, u, t):
    """H = L(y, u, t) + lam . a(y, u, t); works with hyper-dual entries."""
    h = problem.lagrangian_value(y, u, t)
    a = problem.dynamics(y, u, t)
    for lam_m, a_m in zip(lam, a):
        h = h + lam_m * a_m
    return h


def costate_transform(lam_defect: np.ndarray, weights: np.ndarray, dlast: np.ndarray):
    """Quadrature-weight costate map for one domain.

    Collocation-point costates are the defect multipliers divided by
    the matching LGR weights; the non-collocated endpoint costate is
    the last differentiation-matrix column applied to the multipliers.
    """
    lam_defect = np.atleast_2d(np.asarray(lam_defect, dtype=float))
    weights = np.asarray(weights, dtype=float)
    lam_coll = lam_defect / weights[:, None]
    lam_end = np.asarray(dlast, dtype=float) @ lam_defect
    return lam_coll, lam_end


class NlpProblem:
    """Box-bounded NLP with a hyper-dual derivative oracle.

    ``objective_fn(xs)`` and ``constraints_fn(xs)`` take a list of
    scalars (floats or hyper-duals).  Derivatives are assembled by
    probing variable pairs; subclasses with structure override the
    oracle methods.
    """

    def __init__(self, n_var, lb, ub, cl, cu, objective_fn=None, constraints_fn=None,
                 var_names=None, con_names=None):
        self.n_var = int(n_var)
        self.lb = np.asarray(lb, dtype=float)
        self.ub = np.asarray(ub, dtype=float)
        self.cl = np.asarray(cl, dtype=float)
        self.cu = np.asarray(cu, dtype=float)
        self.n_con = self.cl.size
        self._objective_fn = objective_fn
        self._constraints_fn = constraints_fn
        self.var_names = var_names or [f"x[{i}]" for i in range(self.n_var)]
        self.con_names = con_names or [f"c[{r}]" for r in range(self.n_con)]
        if np.any(self.lb > self.ub):
            raise ValueError("variable bounds must satisfy lb <= ub")
        if np.any(self.cl > self.cu):
            raise ValueError("constraint bounds must satisfy cl <= cu")

    def objective(self, x) -> float:
        return float(parts(self._objective_fn(list(x)))[0])

    def gradient(self, x) -> np.ndarray:
        _, g, _ = hd.gradient_and_hessian(self._objective_fn, x)
        return g

    def constraints(self, x) -> np.ndarray:
        out = self._constraints_fn([float(v) for v in x])
        return np.array([float(parts(v)[0]) for v in out])

    def jacobian(self, x) -> sp.csr_matrix:
        rows = []
        for r in range(self.n_con):
            fn = lambda xs, r=r: self._constraints_fn(xs)[r]
            _, g, _ = hd.gradient_and_hessian(fn, x)
            rows.append(g)
        return sp.csr_matrix(np.array(rows).reshape(self.n_con, self.n_var))

    def hessian(self, x, obj_factor: float, mult) -> sp.csr_matrix:
        _, _, h = hd.gradient_and_hessian(self._objective_fn, x)
        total = obj_factor * h
        for r in range(self.n_con):
            if mult[r] == 0.0:
                continue
            fn = lambda xs, r=r: self._constraints_fn(xs)[r]
            _, _, hr = hd.gradient_and_hessian(fn, x)
            total = total + mult[r] * hr
        return sp.csr_matrix(total)


@dataclass(frozen=True)
class VariableLayout:
    """Index maps from (domain, point, component) to NLP variables."""

    n_y: int
    n_u: int
    points_per_domain: tuple[int, ...]
    domain_offsets: tuple[int, ...]
    n_colloc: int
    n_support: int
    control_base: int
    t0_index: Optional[int]
    tf_index: Optional[int]
    switch_indices: tuple[int, ...]
    n_var: int

    def state_index(self, d: int, j: int, m: int) -> int:
        return (self.domain_offsets[d] + j) * self.n_y + m

    def control_index(self, d: int, l: int, i: int) -> int:
        return self.control_base + (self.domain_offsets[d] + l) * self.n_u + i


class Transcription(NlpProblem):
    """Assembled collocation NLP for one multi-domain problem + meshes."""

    def __init__(self, mdp: MultiDomainProblem, meshes: Sequence[MeshLayout]):
        self.mdp = mdp
        self.problem = mdp.base
        self.meshes = list(meshes)
        q = mdp.n_domains
        if len(self.meshes) != q:
            raise ValueError(f"need one mesh per domain ({q}), got {len(self.meshes)}")
        p = self.problem
        if p.n_c and np.any(p.c_min > p.c_max):
            raise ValueError("path bounds must satisfy min <= max")
        if np.any(p.b_min > p.b_max):
            raise ValueError("boundary bounds must satisfy min <= max")
        if np.any(p.control_lower > p.control_upper):
            raise ValueError("control bounds must satisfy min <= max")

        n_y, n_u, n_c = p.n_y, p.n_u, p.n_c
        pts_per_dom = tuple(m.n_collocation for m in self.meshes)
        dom_off = tuple(int(v) for v in np.concatenate([[0], np.cumsum(pts_per_dom)[:-1]]))
        n_pts = int(sum(pts_per_dom))
        n_sup = n_pts + 1

        # time variables: t0/tf only when their boxes have width
        t0_free = p.t0_bounds[1] > p.t0_bounds[0]
        tf_free = p.tf_bounds[1] > p.tf_bounds[0]
        control_base = n_sup * n_y
        time_base = control_base + n_pts * n_u
        idx = time_base
        t0_idx = tf_idx = None
        if t0_free:
            t0_idx = idx
            idx += 1
        if tf_free:
            tf_idx = idx
            idx += 1
        sw_idx = tuple(range(idx, idx + mdp.n_switches))
        idx += mdp.n_switches
        n_var = idx

        self.layout = VariableLayout(
            n_y=n_y, n_u=n_u, points_per_domain=pts_per_dom, domain_offsets=dom_off,
            n_colloc=n_pts, n_support=n_sup, control_base=control_base,
            t0_index=t0_idx, tf_index=tf_idx, switch_indices=sw_idx, n_var=n_var,
        )
        self._t0_fixed = float(p.t0_bounds[0])
        self._tf_fixed = float(p.tf_bounds[0])

        # domain durations stay non-negative iff consecutive edge boxes
        # do not overlap: upper(edge d) <= lower(edge d+1)
        edges_lo, edges_hi = self._edge_boxes()
        for d in range(q):
            if edges_hi[d] > edges_lo[d + 1] + 1e-12:
                raise ValueError(
                    "time-edge boxes overlap: upper bound of edge "
                    f"{d} exceeds lower bound of edge {d + 1}"
                )

        # per-point geometry: domain-level tau, quadrature weights, D blocks
        tau_pts = np.empty(n_pts)
        w_pts = np.empty(n_pts)
        dom_of = np.empty(n_pts, dtype=int)
        tau_sup_dom: list[np.ndarray] = []
        d_rows, d_cols, d_vals = [], [], []
        dlast: list[np.ndarray] = []
        for d, mesh in enumerate(self.meshes):
            off = dom_off[d]
            tau_sup = np.empty(pts_per_dom[d] + 1)
            last_col = np.zeros(pts_per_dom[d])
            loc = 0
            for k, nk in enumerate(mesh.points):
                rule = lgr_rule(nk)
                dmat = diff_matrix(rule)
                ta, tb = mesh.interval(k)
                h = tb - ta
                rows_k = off + loc + np.arange(nk)
                cols_k = off + loc + np.arange(nk + 1)
                scale = 2.0 / h
                rr, cc = np.meshgrid(rows_k, cols_k, indexing="ij")
                d_rows.append(rr.ravel())
                d_cols.append(cc.ravel())
                d_vals.append((dmat.entries * scale).ravel())
                tau_pts[off + loc : off + loc + nk] = affine_to_time(rule.nodes, ta, tb)
                w_pts[off + loc : off + loc + nk] = rule.weights * (h / 2.0)
                dom_of[off + loc : off + loc + nk] = d
                tau_sup[loc : loc + nk] = affine_to_time(rule.nodes, ta, tb)
                if k == mesh.n_intervals - 1:
                    tau_sup[loc + nk] = tb
                    last_col[loc : loc + nk] = dmat.last_column * scale
                loc += nk
            tau_sup_dom.append(tau_sup)
            dlast.append(last_col)
        self._tau_pts = tau_pts
        self._w_pts = w_pts
        self._dom_of_point = dom_of
        self._tau_support = tau_sup_dom
        self._dlast = dlast
        self._dmat = sp.coo_matrix(
            (np.concatenate(d_vals), (np.concatenate(d_rows), np.concatenate(d_cols))),
            shape=(n_pts, n_sup),
        ).tocsr()

        # defect-row triplets for the constant D-part, expanded over components
        di, dj = self._dmat.nonzero()
        dv = np.asarray(self._dmat[di, dj]).ravel()
        self._d_rows = (di[:, None] * n_y + np.arange(n_y)[None, :]).ravel()
        self._d_cols = (dj[:, None] * n_y + np.arange(n_y)[None, :]).ravel()
        self._d_vals = np.repeat(dv, n_y)

        # local probe slots: states, controls, domain start/end times
        self._nloc = n_y + n_u + 2
        lmat = np.full((n_pts, self._nloc), -1, dtype=int)
        for m in range(n_y):
            lmat[:, m] = np.arange(n_pts) * n_y + m
        for i in range(n_u):
            lmat[:, n_y + i] = control_base + np.arange(n_pts) * n_u + i
        s_idx_dom, e_idx_dom = self._endpoint_indices()
        lmat[:, n_y + n_u] = np.asarray(s_idx_dom)[dom_of]
        lmat[:, n_y + n_u + 1] = np.asarray(e_idx_dom)[dom_of]
        self._lmat = lmat

        # boundary/Mayer probe slots: y0 components, t0, yf components, tf
        bcol = np.full(2 * n_y + 2, -1, dtype=int)
        bcol[:n_y] = np.arange(n_y)
        bcol[n_y] = -1 if t0_idx is None else t0_idx
        bcol[n_y + 1 : 2 * n_y + 1] = (n_sup - 1) * n_y + np.arange(n_y)
        bcol[2 * n_y + 1] = -1 if tf_idx is None else tf_idx
        self._bcol = bcol

        # Hessian scatter template over the pointwise blocks
        a_idx, b_idx = np.meshgrid(np.arange(self._nloc), np.arange(self._nloc), indexing="ij")
        hrow = lmat[:, a_idx.ravel()]
        hcol = lmat[:, b_idx.ravel()]
        hmask = (hrow >= 0) & (hcol >= 0)
        self._hrow, self._hcol, self._hmask = hrow, hcol, hmask

        lb, ub = self._variable_bounds()
        cl, cu, con_names = self._constraint_bounds()
        var_names = self._variable_names()
        super().__init__(n_var, lb, ub, cl, cu, var_names=var_names, con_names=con_names)
        self.n_defect = n_pts * n_y
        self.n_path = n_pts * n_c
        self._value_cache: tuple = (None, None)
        self._probe_cache: tuple = (None, None)

    # -- layout helpers ---------------------------------------------------

    def _edge_boxes(self):
        """Lower/upper boxes of the Q+1 domain edges (t0, switches, tf)."""
        p, mdp = self.problem, self.mdp
        lo = [p.t0_bounds[0]] + [s.lower for s in mdp.switch_params] + [p.tf_bounds[0]]
        hi = [p.t0_bounds[1]] + [s.upper for s in mdp.switch_params] + [p.tf_bounds[1]]
        return np.asarray(lo), np.asarray(hi)

    def _endpoint_indices(self):
        lay = self.layout
        q = self.mdp.n_domains
        s_idx = np.full(q, -1, dtype=int)
        e_idx = np.full(q, -1, dtype=int)
        for d in range(q):
            if d == 0:
                s_idx[d] = -1 if lay.t0_index is None else lay.t0_index
            else:
                s_idx[d] = lay.switch_indices[d - 1]
            if d == q - 1:
                e_idx[d] = -1 if lay.tf_index is None else lay.tf_index
            else:
                e_idx[d] = lay.switch_indices[d]
        return s_idx, e_idx

    def _variable_bounds(self):
        p, mdp, lay = self.problem, self.mdp, self.layout
        n = lay.n_var
        lb = np.full(n, -np.inf)
        ub = np.full(n, np.inf)
        if p.state_lower is not None:
            lb[: lay.control_base] = np.tile(p.state_lower, lay.n_support)
        if p.state_upper is not None:
            ub[: lay.control_base] = np.tile(p.state_upper, lay.n_support)
        for d in range(mdp.n_domains):
            off = lay.domain_offsets[d]
            for l in range(lay.points_per_domain[d]):
                for i in range(lay.n_u):
                    j = lay.control_index(d, l, i)
                    if i in mdp.fixed_controls[d]:
                        lb[j] = ub[j] = mdp.fixed_controls[d][i]
                    else:
                        lb[j] = p.control_lower[i]
                        ub[j] = p.control_upper[i]
        if lay.t0_index is not None:
            lb[lay.t0_index], ub[lay.t0_index] = p.t0_bounds
        if lay.tf_index is not None:
            lb[lay.tf_index], ub[lay.tf_index] = p.tf_bounds
        for s, j in enumerate(lay.switch_indices):
            lb[j] = mdp.switch_params[s].lower
            ub[j] = mdp.switch_params[s].upper
        return lb, ub

    def _constraint_bounds(self):
        p, lay = self.problem, self.layout
        n_pts, n_y, n_c = lay.n_colloc, lay.n_y, p.n_c
        cl = [np.zeros(n_pts * n_y)]
        cu = [np.zeros(n_pts * n_y)]
        names = [f"defect[p{pt},{m}]" for pt in range(n_pts) for m in range(n_y)]
        if n_c:
            cl.append(np.tile(p.c_min, n_pts))
            cu.append(np.tile(p.c_max, n_pts))
            names += [f"path[p{pt},{q}]" for pt in range(n_pts) for q in range(n_c)]
        cl.append(p.b_min)
        cu.append(p.b_max)
        names += [f"bc[{r}]" for r in range(p.n_b)]
        return np.concatenate(cl), np.concatenate(cu), names

    def _variable_names(self):
        lay = self.layout
        names = [f"y[g{g},{m}]" for g in range(lay.n_support) for m in range(lay.n_y)]
        names += [f"u[p{pt},{i}]" for pt in range(lay.n_colloc) for i in range(lay.n_u)]
        if lay.t0_index is not None:
            names.append("t0")
        if lay.tf_index is not None:
            names.append("tf")
        names += [f"ts[{s}]" for s in range(len(lay.switch_indices))]
        return names

    # -- point data -------------------------------------------------------

    def domain_edges(self, x) -> np.ndarray:
        """Current values of the Q+1 domain edge times."""
        lay = self.layout
        t0 = self._t0_fixed if lay.t0_index is None else float(x[lay.t0_index])
        tf = self._tf_fixed if lay.tf_index is None else float(x[lay.tf_index])
        sw = [float(x[j]) for j in lay.switch_indices]
        return np.array([t0, *sw, tf])

    def _point_arrays(self, x):
        lay = self.layout
        ys = x[: lay.control_base].reshape(lay.n_support, lay.n_y)
        u = x[lay.control_base : lay.control_base + lay.n_colloc * lay.n_u].reshape(
            lay.n_colloc, lay.n_u
        )
        edges = self.domain_edges(x)
        s_p = edges[:-1][self._dom_of_point]
        e_p = edges[1:][self._dom_of_point]
        return ys, u, s_p, e_p

    # -- value pass ---------------------------------------------------------

    def _values(self, x):
        x = np.asarray(x, dtype=float)
        key = x.tobytes()
        if self._value_cache[0] == key:
            return self._value_cache[1]
        p, lay = self.problem, self.layout
        ys, u, s_p, e_p = self._point_arrays(x)
        half = 0.5 * (e_p - s_p)
        t_p = half * self._tau_pts + 0.5 * (e_p + s_p)
        ylist = [ys[: lay.n_colloc, m] for m in range(lay.n_y)]
        ulist = [u[:, i] for i in range(lay.n_u)]
        shape = (lay.n_colloc,)
        a_out = p.dynamics(ylist, ulist, t_p)
        amat = np.stack([parts(v, like=shape)[0] for v in a_out], axis=1)
        defects = (self._dmat @ ys) - half[:, None] * amat
        lvals = parts(p.lagrangian_value(ylist, ulist, t_p), like=shape)[0]
        cvals = None
        if p.n_c:
            c_out = p.path(ylist, ulist, t_p)
            cvals = np.stack([parts(v, like=shape)[0] for v in c_out], axis=1)
        edges = self.domain_edges(x)
        y0 = [float(v) for v in ys[0]]
        yf = [float(v) for v in ys[-1]]
        bvals = np.atleast_1d(
            np.asarray(p.boundary(y0, edges[0], yf, edges[-1]), dtype=float)
        )
        obj = float(parts(p.mayer_value(y0, edges[0], yf, edges[-1]))[0])
        obj += float(np.dot(self._w_pts * half, lvals))
        pieces = [defects.ravel()]
        if cvals is not None:
            pieces.append(cvals.ravel())
        pieces.append(bvals)
        res = {"objective": obj, "constraints": np.concatenate(pieces)}
        self._value_cache = (key, res)
        return res

    def objective(self, x) -> float:
        return self._values(x)["objective"]

    def constraints(self, x) -> np.ndarray:
        return self._values(x)["constraints"]

    # -- probe pass -----------------------------------------------------

    def _probe(self, x):
        """All pointwise first/second derivatives at x, plus the endpoint block."""
        x = np.asarray(x, dtype=float)
        key = x.tobytes()
        if self._probe_cache[0] == key:
            return self._probe_cache[1]
        p, lay = self.problem, self.layout
        n_y, n_u, n_c = lay.n_y, lay.n_u, p.n_c
        n_pts, nloc = lay.n_colloc, self._nloc
        ys, u, s_p, e_p = self._point_arrays(x)
        base = [ys[:n_pts, m] for m in range(n_y)]
        base += [u[:, i] for i in range(n_u)]
        base += [s_p, e_p]

        nsf = n_y + 1  # duration-scaled dynamics rows plus integrand
        grads_s = np.zeros((nsf, nloc, n_pts))
        hess_s = np.zeros((nsf, nloc, nloc, n_pts))
        grads_c = np.zeros((n_c, nloc, n_pts)) if n_c else None
        hess_c = np.zeros((n_c, nloc, nloc, n_pts)) if n_c else None
        shape = (n_pts,)

        for alpha in range(nloc):
            for beta in range(alpha, nloc):
                args = []
                for sl, arr in enumerate(base):
                    d1 = 1.0 if sl == alpha else 0.0
                    d2 = 1.0 if sl == beta else 0.0
                    args.append(HyperDual(arr, d1, d2, 0.0) if (d1 or d2) else arr)
                yh, uh = args[:n_y], args[n_y : n_y + n_u]
                sh, eh = args[-2], args[-1]
                halfh = (eh - sh) * 0.5
                th = halfh * self._tau_pts + (eh + sh) * 0.5
                a_out = p.dynamics(yh, uh, th)
                outs = [halfh * a_m for a_m in a_out]
                outs.append(halfh * p.lagrangian_value(yh, uh, th))
                for f, o in enumerate(outs):
                    _, d1, d2, d12 = parts(o, like=shape)
                    grads_s[f, alpha] = d1
                    grads_s[f, beta] = d2
                    hess_s[f, alpha, beta] = d12
                    hess_s[f, beta, alpha] = d12
                if n_c:
                    for f, o in enumerate(p.path(yh, uh, th)):
                        _, d1, d2, d12 = parts(o, like=shape)
                        grads_c[f, alpha] = d1
                        grads_c[f, beta] = d2
                        hess_c[f, alpha, beta] = d12
                        hess_c[f, beta, alpha] = d12

        # endpoint block: Mayer and boundary rows over (y0, t0, yf, tf)
        edges = self.domain_edges(x)
        bvals0 = [float(v) for v in ys[0]] + [edges[0]] + [float(v) for v in ys[-1]] + [edges[-1]]
        nb_loc = len(bvals0)
        n_b = p.n_b
        grads_b = np.zeros((1 + n_b, nb_loc))
        hess_b = np.zeros((1 + n_b, nb_loc, nb_loc))

        def endpoint_outputs(vals):
            y0v, t0v = vals[:n_y], vals[n_y]
            yfv, tfv = vals[n_y + 1 : 2 * n_y + 1], vals[2 * n_y + 1]
            outs = [p.mayer_value(y0v, t0v, yfv, tfv)]
            outs.extend(p.boundary(y0v, t0v, yfv, tfv))
            return outs

        for alpha in range(nb_loc):
            for beta in range(alpha, nb_loc):
                args = list(bvals0)
                if alpha == beta:
                    args[alpha] = HyperDual(bvals0[alpha], 1.0, 1.0, 0.0)
                else:
                    args[alpha] = HyperDual(bvals0[alpha], 1.0, 0.0, 0.0)
                    args[beta] = HyperDual(bvals0[beta], 0.0, 1.0, 0.0)
                for f, o in enumerate(endpoint_outputs(args)):
                    _, d1, d2, d12 = parts(o)
                    grads_b[f, alpha] = float(np.asarray(d1))
                    grads_b[f, beta] = float(np.asarray(d2))
                    hess_b[f, alpha, beta] = hess_b[f, beta, alpha] = float(np.asarray(d12))

        res = {
            "grads_s": grads_s,
            "hess_s": hess_s,
            "grads_c": grads_c,
            "hess_c": hess_c,
            "grads_b": grads_b,
            "hess_b": hess_b,
        }
        self._probe_cache = (key, res)
        return res

    # -- oracle ---------------------------------------------------------

    def gradient(self, x) -> np.ndarray:
        pr = self._probe(x)
        lay = self.layout
        g = np.zeros(lay.n_var)
        lag = pr["grads_s"][lay.n_y]  # integrand row
        for sl in range(self._nloc):
            cols = self._lmat[:, sl]
            mask = cols >= 0
            if mask.any():
                np.add.at(g, cols[mask], (self._w_pts * lag[sl])[mask])
        for sl in range(self._bcol.size):
            if self._bcol[sl] >= 0:
                g[self._bcol[sl]] += pr["grads_b"][0, sl]
        return g

    def jacobian(self, x) -> sp.csr_matrix:
        pr = self._probe(x)
        lay = self.layout
        n_y, n_u, n_c = lay.n_y, lay.n_u, self.problem.n_c
        n_pts = lay.n_colloc
        rows = [self._d_rows]
        cols = [self._d_cols]
        vals = [self._d_vals]
        point_rows = np.arange(n_pts)
        for sl in range(self._nloc):
            cidx = self._lmat[:, sl]
            mask = cidx >= 0
            if not mask.any():
                continue
            for m in range(n_y):
                rows.append((point_rows * n_y + m)[mask])
                cols.append(cidx[mask])
                vals.append(-pr["grads_s"][m, sl][mask])
            for qc in range(n_c):
                rows.append(self.n_defect + (point_rows * n_c + qc)[mask])
                cols.append(cidx[mask])
                vals.append(pr["grads_c"][qc, sl][mask])
        base_b = self.n_defect + self.n_path
        for r in range(self.problem.n_b):
            for sl in range(self._bcol.size):
                if self._bcol[sl] >= 0:
                    rows.append(np.array([base_b + r]))
                    cols.append(np.array([self._bcol[sl]]))
                    vals.append(np.array([pr["grads_b"][1 + r, sl]]))
        mat = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(self.n_con, lay.n_var),
        )
        return mat.tocsr()

    def hessian(self, x, obj_factor: float, mult) -> sp.csr_matrix:
        pr = self._probe(x)
        lay = self.layout
        n_y, n_c = lay.n_y, self.problem.n_c
        n_pts = lay.n_colloc
        mult = np.asarray(mult, dtype=float)
        coef = np.empty((n_y + 1, n_pts))
        coef[:n_y] = -mult[: self.n_defect].reshape(n_pts, n_y).T
        coef[n_y] = obj_factor * self._w_pts
        hpt = np.einsum("fp,fabp->pab", coef, pr["hess_s"])
        if n_c:
            lam_c = mult[self.n_defect : self.n_defect + self.n_path].reshape(n_pts, n_c).T
            hpt += np.einsum("fp,fabp->pab", lam_c, pr["hess_c"])
        data = hpt.reshape(n_pts, -1)[self._hmask]
        rows = [self._hrow[self._hmask]]
        cols = [self._hcol[self._hmask]]
        vals = [data]
        hb = obj_factor * pr["hess_b"][0]
        lam_b = mult[self.n_defect + self.n_path :]
        for r in range(self.problem.n_b):
            hb = hb + lam_b[r] * pr["hess_b"][1 + r]
        valid = self._bcol >= 0
        bi, bj = np.meshgrid(np.arange(self._bcol.size), np.arange(self._bcol.size), indexing="ij")
        bmask = valid[bi] & valid[bj]
        rows.append(self._bcol[bi[bmask]])
        cols.append(self._bcol[bj[bmask]])
        vals.append(hb[bmask])
        mat = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(lay.n_var, lay.n_var),
        )
        return mat.tocsr()

    # -- initial point ----------------------------------------------------

    def initial_point(self, source: Optional[CollocatedSolution] = None) -> np.ndarray:
        """Build x0 from the problem guess or a previous solution."""
        p, mdp, lay = self.problem, self.mdp, self.layout
        if source is not None:
            t0g, tfg = source.t0, source.tf
        else:
            t0g, tfg = p.guess.t0, p.guess.tf
        edges = np.array([t0g] + [s.guess for s in mdp.switch_params] + [tfg])
        x0 = np.zeros(lay.n_var)
        lo = np.where(np.isfinite(p.control_lower), p.control_lower, 0.0)
        hi = np.where(np.isfinite(p.control_upper), p.control_upper, lo + 0.0)
        u_mid = 0.5 * (lo + hi)
        for d in range(mdp.n_domains):
            ts = affine_to_time(self._tau_support[d], edges[d], edges[d + 1])
            if source is not None:
                states = source.sample_state(ts)
                controls = source.sample_control(ts[:-1])
            else:
                states = p.guess.state_at(ts)
                controls = p.guess.control_at(ts[:-1])
                if controls is None:
                    controls = np.tile(u_mid, (ts.size - 1, 1))
            off = lay.domain_offsets[d]
            npd = lay.points_per_domain[d]
            x0[(off) * lay.n_y : (off + npd + 1) * lay.n_y] = np.asarray(states).ravel()
            ublock = np.array(controls, dtype=float)
            for i, v in mdp.fixed_controls[d].items():
                ublock[:, i] = v
            x0[lay.control_base + off * lay.n_u : lay.control_base + (off + npd) * lay.n_u] = ublock.ravel()
        if lay.t0_index is not None:
            x0[lay.t0_index] = t0g
        if lay.tf_index is not None:
            x0[lay.tf_index] = tfg
        for s, j in enumerate(lay.switch_indices):
            x0[j] = mdp.switch_params[s].guess
        return x0

    # -- solution extraction ---------------------------------------------

    def extract(self, result) -> CollocatedSolution:
        """Map an NLP result back to trajectories and costate estimates.

        Costates at collocation points come from the quadrature-weight
        transform of the defect multipliers (:func:`costate_transform`);
        the non-collocated endpoint uses the last
        differentiation-matrix column.  Sign convention, pinned here
        and validated against the analytic adjoint of the
        double-integrator problem: the solver's Lagrangian adds
        multiplier times constraint, and with defects written as
        D Y - ((e-s)/2) a the transform input is the *negated* solver
        multiplier.
        """
        if getattr(result, "eq_multipliers", None) is None:
            raise RuntimeError("solver returned no constraint multipliers; cannot form costates")
        x = np.asarray(result.x, dtype=float)
        lay = self.layout
        ys, u, _, _ = self._point_arrays(x)
        edges = self.domain_edges(x)
        lam_defect = -np.asarray(result.eq_multipliers[: self.n_defect]).reshape(
            lay.n_colloc, lay.n_y
        )
        domains = []
        for d in range(self.mdp.n_domains):
            off = lay.domain_offsets[d]
            npd = lay.points_per_domain[d]
            sl = slice(off, off + npd)
            w = self._w_pts[sl]
            lam_coll, lam_end = costate_transform(lam_defect[sl], w, self._dlast[d])
            times = affine_to_time(self._tau_support[d], edges[d], edges[d + 1])
            times[0], times[-1] = edges[d], edges[d + 1]
            domains.append(
                DomainSolution(
                    times=times,
                    states=ys[off : off + npd + 1].copy(),
                    controls=u[sl].copy(),
                    costates=np.vstack([lam_coll, lam_end]),
                    mesh=self.meshes[d],
                    weights=w.copy(),
                )
            )
        return CollocatedSolution(
            domains=domains,
            t0=edges[0],
            tf=edges[-1],
            switch_times=tuple(edges[1:-1]),
            objective=self.objective(x),
            status=getattr(result, "status", "unknown"),
            nlp_result=result,
        )


def assemble(mdp: MultiDomainProblem, meshes: Sequence[MeshLayout]):
    """Build the collocation NLP; returns (transcription, layout)."""
    tr = Transcription(mdp, meshes)
    return tr, tr.layout


def extract(nlp_result, transcription: Transcription) -> CollocatedSolution:
    """Module-level alias for :meth:`Transcription.extract`."""
    return transcription.extract(nlp_result)
