"""Disk-constrained semidefinite relaxation of the product-state problem.

Variables are per-vertex x_i in [-1, 1] (transverse polarization) and a
correlation matrix C with unit diagonal, C PSD.  Writing t_ij = -J_ij c_ij,
the relaxation maximizes

    sum_edges w (1 + t_ij)/2  +  sum_i h_i (1 + x_i)/2

subject to, for every edge {i, j}, the two disk constraints
x_i^2 + c_ij^2 <= 1 and x_j^2 + c_ij^2 <= 1 that anticommutation of X_i
with Z_i Z_j forces on every quantum state.  The optimum therefore upper
bounds the maximum eigenvalue of the constraint Hamiltonian.

The solver is an operator-splitting (consensus ADMM) loop over the simple
pieces of the feasible set: the PSD cone (eigenvalue clipping), the unit
diagonal, the box on x, and one unit-disk projection per edge endpoint,
with shared coordinates reconciled by averaging and a linear objective tilt.
A final exact repair projects the iterate into the feasible set so that
every reported solution is feasible to machine precision, not just to
solver tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .instance import Instance

__all__ = [
    "SdpSolution",
    "SolverError",
    "solve_soc_sdp",
    "gram_vectors",
    "repair_feasibility",
]

DEFAULT_TOL = 1e-7
# Inner residual target as a fraction of tol; calibrated so that the
# objective gap after repair stays well below tol * (W + H).
_RESIDUAL_FACTOR = 0.05
_CHECK_EVERY = 25


class SolverError(RuntimeError):
    """Iteration cap hit before reaching tolerance.

    Carries the best feasible (repaired) iterate and the final residuals.
    """

    def __init__(self, message: str, x, C, residuals, iterations):
        super().__init__(message)
        self.x = x
        self.C = C
        self.residuals = residuals
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class SdpSolution:
    """Feasible relaxation point plus its objective decomposition."""

    x: np.ndarray            # (n,)
    C: np.ndarray            # (n, n) PSD, unit diagonal
    grams: np.ndarray        # (n, r) unit rows with <u_i, u_j> = c_ij
    objective: float
    edge_terms: np.ndarray   # per-edge w (1 + t)/2 with t = -J c
    field_terms: np.ndarray  # per-vertex h (1 + x)/2
    residuals: dict = field(default_factory=dict)
    iterations: int = 0

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def edge_total(self) -> float:
        return float(np.sum(self.edge_terms)) if self.edge_terms.size else 0.0

    @property
    def field_total(self) -> float:
        return float(np.sum(self.field_terms)) if self.field_terms.size else 0.0

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "edge_total": self.edge_total,
            "field_total": self.field_total,
            "x": self.x.tolist(),
            "C": self.C.flatten().tolist(),
            "edge_terms": self.edge_terms.tolist(),
            "field_terms": self.field_terms.tolist(),
            "residuals": dict(self.residuals),
            "iterations": self.iterations,
        }


def _objective_terms(inst: Instance, x, C):
    if inst.m:
        ei, ej = inst.edge_index
        t = -inst.edge_signs * C[ei, ej]
        edge_terms = inst.edge_weights * (1.0 + t) / 2.0
    else:
        edge_terms = np.zeros(0)
    field_terms = inst.field_array * (1.0 + x) / 2.0
    return edge_terms, field_terms


def _psd_clip(C: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(C)
    if vals[0] >= 0.0:
        return C
    out = (vecs * np.maximum(vals, 0.0)) @ vecs.T
    return (out + out.T) / 2.0


def repair_feasibility(x_raw, C_raw, inst: Instance, residuals=None, iterations: int = 0) -> SdpSolution:
    """Project a raw iterate into the feasible set, never loosening anything.

    Steps: PSD-clip C, rescale to unit diagonal, clamp x into [-1, 1], then
    shrink |x_i| to sqrt(1 - max incident c_ij^2) where a disk demands it.
    Already-feasible input passes through unchanged.
    """
    x = np.clip(np.asarray(x_raw, dtype=float).copy(), -1.0, 1.0)
    C = np.asarray(C_raw, dtype=float)
    C = _psd_clip((C + C.T) / 2.0)
    d = np.diag(C).copy()
    bad = d < 1e-12
    if np.any(bad):
        C = C.copy()
        C[bad, :] = 0.0
        C[:, bad] = 0.0
        d[bad] = 1.0
    scale = np.sqrt(d)
    C = C / np.outer(scale, scale)
    np.fill_diagonal(C, 1.0)
    if inst.m:
        ei, ej = inst.edge_index
        c2 = np.minimum(C[ei, ej] ** 2, 1.0)
        lim = np.sqrt(1.0 - c2)
        cap = np.ones(inst.n)
        np.minimum.at(cap, ei, lim)
        np.minimum.at(cap, ej, lim)
        x = np.sign(x) * np.minimum(np.abs(x), cap)
    edge_terms, field_terms = _objective_terms(inst, x, C)
    objective = float(np.sum(edge_terms) + np.sum(field_terms))
    grams = gram_vectors(C)
    return SdpSolution(
        x=x,
        C=C,
        grams=grams,
        objective=objective,
        edge_terms=edge_terms,
        field_terms=field_terms,
        residuals=dict(residuals or {}),
        iterations=iterations,
    )


def gram_vectors(C: np.ndarray, neg_tol: float = 1e-6, recon_tol: float = 1e-6) -> np.ndarray:
    """Unit vectors u_i (rows) with <u_i, u_j> reproducing C entrywise.

    Eigenvalues below -neg_tol mean the upstream repair failed and are
    refused; small negative ones are clipped to zero.  The factor keeps only
    the numerically nonzero spectrum, so its column count is the rank.
    """
    C = np.asarray(C, dtype=float)
    vals, vecs = np.linalg.eigh((C + C.T) / 2.0)
    if vals[0] < -neg_tol:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {vals[0]}")
    vals = np.maximum(vals, 0.0)
    keep = vals > max(vals[-1], 1.0) * 1e-14
    if not np.any(keep):
        keep[-1] = True
    U = vecs[:, keep] * np.sqrt(vals[keep])
    norms = np.linalg.norm(U, axis=1)
    if np.any(norms < 1e-8):
        raise ValueError("degenerate Gram row; unit diagonal was lost upstream")
    U = U / norms[:, None]
    err = np.max(np.abs(U @ U.T - C))
    if err > recon_tol:
        raise ValueError(f"Gram reconstruction error {err} exceeds {recon_tol}")
    return U


def _trivial_solution(inst: Instance, x_val: float) -> SdpSolution:
    x = np.full(inst.n, x_val)
    C = np.eye(inst.n)
    return repair_feasibility(x, C, inst, residuals={"primal": 0.0, "dual": 0.0}, iterations=0)


def solve_soc_sdp(
    inst: Instance,
    tol: float = DEFAULT_TOL,
    max_iter: int = 200_000,
    rho: float | None = None,
    over_relax: float = 1.6,
) -> SdpSolution:
    """Solve the relaxation to within tol * (W + H) of its optimum.

    Deterministic consensus ADMM; see the module docstring for the split.
    Raises SolverError (carrying the repaired best iterate) if the residual
    targets are not met within max_iter sweeps.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n, m = inst.n, inst.m
    W, H = inst.W, inst.H
    scale = W + H
    if scale <= 0.0:
        return _trivial_solution(inst, 0.0)
    if m == 0:
        return _trivial_solution(inst, 1.0)

    ei, ej = inst.edge_index
    h = inst.field_array
    gx = h / 2.0                                    # objective gradient on x
    gc = -inst.edge_weights * inst.edge_signs / 2.0  # and on each C_ij coordinate

    # Disk blocks: one per edge endpoint, covering (x_a, C_e).
    av = np.concatenate([ei, ej])
    ae = np.concatenate([np.arange(m), np.arange(m)])
    mult_x = 1.0 + np.bincount(av, minlength=n).astype(float)
    idx = np.arange(n)

    if rho is None:
        rho = max(1.0, scale) / n
    alpha = over_relax
    eps = tol * _RESIDUAL_FACTOR * max(scale, 1.0)

    x = np.zeros(n)
    C = np.eye(n)
    Zp = np.eye(n)
    Up = np.zeros((n, n))
    zbx = np.zeros(n)
    ubx = np.zeros(n)
    ubd = np.zeros(n)
    Zd = np.zeros((2 * m, 2))
    Ud = np.zeros((2 * m, 2))

    pr = dr = np.inf
    for it in range(1, max_iter + 1):
        # v update: per-coordinate average of (z - u) over covering blocks,
        # tilted by the objective gradient.
        x = zbx - ubx + gx / rho
        np.add.at(x, av, Zd[:, 0] - Ud[:, 0])
        x /= mult_x

        M = Zp - Up
        C = (M + M.T) / 2.0
        C[idx, idx] = (C[idx, idx] + 1.0 - ubd) / 2.0
        contrib = Zd[:, 1] - Ud[:, 1]
        cv = (C[ei, ej] + gc / rho + contrib[:m] + contrib[m:]) / 3.0
        C[ei, ej] = cv
        C[ej, ei] = cv

        # z updates (projections) with over-relaxation, then dual ascent.
        ep = alpha * C + (1.0 - alpha) * Zp
        vals, vecs = np.linalg.eigh(ep + Up)
        Zp_prev = Zp
        Zp = (vecs * np.maximum(vals, 0.0)) @ vecs.T
        Zp = (Zp + Zp.T) / 2.0
        Up = Up + ep - Zp

        eb = alpha * x + (1.0 - alpha) * zbx
        zbx_prev = zbx
        zbx = np.clip(eb + ubx, -1.0, 1.0)
        ubx = ubx + eb - zbx

        # diag block projects onto the constant 1, so its z never moves
        ubd = ubd + alpha * C[idx, idx] + (1.0 - alpha) - 1.0

        pts = np.stack([x[av], C[ei, ej][ae]], axis=1)
        ed = alpha * pts + (1.0 - alpha) * Zd
        td = ed + Ud
        r2 = (td**2).sum(axis=1)
        shrink = np.where(r2 > 1.0, 1.0 / np.sqrt(np.maximum(r2, 1e-300)), 1.0)
        Zd_prev = Zd
        Zd = td * shrink[:, None]
        Ud = Ud + ed - Zd

        if it % _CHECK_EVERY == 0:
            pr = np.sqrt(
                np.linalg.norm(C - Zp) ** 2
                + np.linalg.norm(x - zbx) ** 2
                + np.linalg.norm(C[idx, idx] - 1.0) ** 2
                + np.linalg.norm(pts - Zd) ** 2
            )
            dr = rho * np.sqrt(
                np.linalg.norm(Zp - Zp_prev) ** 2
                + np.linalg.norm(zbx - zbx_prev) ** 2
                + np.linalg.norm(Zd - Zd_prev) ** 2
            )
            if pr < eps and dr < eps:
                return repair_feasibility(
                    x, C, inst,
                    residuals={"primal": float(pr), "dual": float(dr), "rho": float(rho)},
                    iterations=it,
                )

    residuals = {"primal": float(pr), "dual": float(dr), "rho": float(rho)}
    best = repair_feasibility(x, C, inst, residuals=residuals, iterations=max_iter)
    raise SolverError(
        f"no convergence within {max_iter} iterations (primal {pr:.3e}, dual {dr:.3e}, target {eps:.3e})",
        best.x, best.C, residuals, max_iter,
    )
