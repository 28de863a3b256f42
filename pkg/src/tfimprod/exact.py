"""Desk-scale exact oracles: dense Hamiltonians, spectra, product states.

Two dense builds are provided.  The *constraint form* is the nonnegative sum
of weighted projectors

    sum_edges w * (I - J Z_i Z_j) / 2  +  sum_i h_i * (I + X_i) / 2,

whose maximum eigenvalue is the quantity every algorithm in this package
approximates.  The *coupling form* is the raw signed Hamiltonian

    sum_edges w * J * Z_i Z_j  -  sum_i h_i X_i,

kept for the affine shift identity lambda_min(coupling) = W + H - 2 *
lambda_max(constraint).  Both are real symmetric in the computational basis
(only X and ZZ terms appear); qubit 0 is the most significant bit.

Product states are handled in Bloch form: qubit i is (x_i, y_i, z_i) with
norm <= 1, and the energy has the closed form

    sum_edges w * (1 - J z_i z_j) / 2  +  sum_i h_i (1 + x_i) / 2,

so no state vector is ever needed for evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance

__all__ = [
    "DEFAULT_CAP",
    "CapExceeded",
    "DenseHamiltonian",
    "BlochAssignment",
    "build_hamiltonian",
    "build_tfim_hamiltonian",
    "spectrum",
    "lambda_max",
    "lambda_min",
    "evaluate_product_state",
    "product_state_vector",
    "state_moments",
    "optimize_product_state",
    "classical_z_optimum",
]

DEFAULT_CAP = 14
_BRUTE_FORCE_CAP = 20


class CapExceeded(ValueError):
    """Dense construction refused: qubit count exceeds the configured cap."""


@dataclass(frozen=True)
class DenseHamiltonian:
    n: int
    data: np.ndarray  # (2^n, 2^n) real symmetric


@dataclass(frozen=True, eq=False)
class BlochAssignment:
    """One Bloch vector (x, y, z) per qubit, rows of an (n, 3) array."""

    vectors: np.ndarray

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def norms(self) -> np.ndarray:
        return np.sqrt((self.vectors**2).sum(axis=1))

    @classmethod
    def from_xz(cls, xs, zs) -> "BlochAssignment":
        xs = np.asarray(xs, dtype=float)
        zs = np.asarray(zs, dtype=float)
        return cls(np.stack([xs, np.zeros_like(xs), zs], axis=1))

    @classmethod
    def plus_states(cls, n: int) -> "BlochAssignment":
        return cls.from_xz(np.ones(n), np.zeros(n))


def _check_cap(n: int, cap: int):
    if n > cap:
        raise CapExceeded(f"dense build limited to {cap} qubits, instance has {n}")


def _spin_table(n: int) -> np.ndarray:
    """(n, 2^n) array of +/-1 z-spins; qubit 0 in the most significant bit."""
    ks = np.arange(1 << n)
    bits = (ks[None, :] >> (n - 1 - np.arange(n)[:, None])) & 1
    return 1.0 - 2.0 * bits


def _dense_build(inst: Instance, cap: int, zz_diag, x_coeff) -> DenseHamiltonian:
    _check_cap(inst.n, cap)
    n = inst.n
    N = 1 << n
    spins = _spin_table(n)
    diag = np.zeros(N)
    if inst.m:
        ei, ej = inst.edge_index
        for k in range(inst.m):
            diag += zz_diag(inst.edge_weights[k], inst.edge_signs[k], spins[ei[k]] * spins[ej[k]])
    H = np.zeros((N, N))
    ks = np.arange(N)
    for i in range(n):
        coeff, shift = x_coeff(inst.field_array[i])
        diag += shift
        if coeff:
            H[ks ^ (1 << (n - 1 - i)), ks] += coeff
    H[ks, ks] += diag
    return DenseHamiltonian(n, H)


def build_hamiltonian(inst: Instance, cap: int = DEFAULT_CAP) -> DenseHamiltonian:
    """Constraint form: sum of weighted projectors, PSD with spectrum in [0, W + H]."""
    return _dense_build(
        inst,
        cap,
        zz_diag=lambda w, J, ss: w * (1.0 - J * ss) / 2.0,
        x_coeff=lambda h: (h / 2.0, h / 2.0),
    )


def build_tfim_hamiltonian(inst: Instance, cap: int = DEFAULT_CAP) -> DenseHamiltonian:
    """Coupling form: signed ZZ couplings minus transverse fields."""
    return _dense_build(
        inst,
        cap,
        zz_diag=lambda w, J, ss: w * J * ss,
        x_coeff=lambda h: (-h, 0.0),
    )


def spectrum(hd: DenseHamiltonian) -> np.ndarray:
    """All eigenvalues, ascending."""
    return np.linalg.eigvalsh(hd.data)


def lambda_max(hd: DenseHamiltonian) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a unit eigenvector."""
    vals, vecs = np.linalg.eigh(hd.data)
    return float(vals[-1]), vecs[:, -1]


def lambda_min(hd: DenseHamiltonian) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a unit eigenvector."""
    vals, vecs = np.linalg.eigh(hd.data)
    return float(vals[0]), vecs[:, 0]


def evaluate_product_state(
    inst: Instance, bloch: BlochAssignment, tol: float = 1e-12
) -> tuple[float, np.ndarray, np.ndarray]:
    """Closed-form energy of a product state on the constraint Hamiltonian.

    Returns (total, per-edge terms w (1 - J z_i z_j)/2, per-vertex terms
    h (1 + x)/2).  Mixed states (Bloch norm < 1) are fine; norms beyond
    1 + tol are rejected.
    """
    if bloch.n != inst.n:
        raise ValueError(f"assignment has {bloch.n} qubits, instance has {inst.n}")
    norms2 = (bloch.vectors**2).sum(axis=1)
    if np.any(norms2 > 1.0 + tol):
        bad = int(np.argmax(norms2))
        raise ValueError(f"Bloch vector {bad} has norm {np.sqrt(norms2[bad])} > 1")
    xs = bloch.vectors[:, 0]
    zs = bloch.vectors[:, 2]
    if inst.m:
        ei, ej = inst.edge_index
        edge_terms = inst.edge_weights * (1.0 - inst.edge_signs * zs[ei] * zs[ej]) / 2.0
    else:
        edge_terms = np.zeros(0)
    field_terms = inst.field_array * (1.0 + xs) / 2.0
    total = float(np.sum(edge_terms) + np.sum(field_terms))
    return total, edge_terms, field_terms


def product_state_vector(bloch: BlochAssignment, tol: float = 1e-9) -> np.ndarray:
    """State vector of a pure product state, qubit 0 most significant.

    Qubit (x, y, z) of unit norm maps to cos(t/2)|0> + e^{i phi} sin(t/2)|1>
    with z = cos t and (x, y) = sin t (cos phi, sin phi).
    """
    norms = np.sqrt((bloch.vectors**2).sum(axis=1))
    if np.any(np.abs(norms - 1.0) > tol):
        raise ValueError("state vector requires pure (unit-norm) Bloch vectors")
    psi = np.ones(1, dtype=complex)
    for x, y, z in bloch.vectors:
        theta = np.arccos(np.clip(z, -1.0, 1.0))
        phi = np.arctan2(y, x)
        qubit = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
        psi = np.kron(psi, qubit)
    return psi


def state_moments(psi: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-qubit <X_i> and the full matrix of <Z_i Z_j> (unit diagonal).

    Computed by bit manipulation on the amplitudes, no operator matrices.
    """
    N = 1 << n
    if psi.shape != (N,):
        raise ValueError(f"state vector must have length {N}")
    prob = np.abs(psi) ** 2
    spins = _spin_table(n)
    x = np.empty(n)
    ks = np.arange(N)
    for i in range(n):
        x[i] = float(np.real(np.vdot(psi, psi[ks ^ (1 << (n - 1 - i))])))
    sp = spins * prob  # (n, N)
    C = sp @ spins.T
    np.fill_diagonal(C, float(prob.sum()))
    return x, C


def _ascent_objective(inst: Instance, theta: np.ndarray) -> np.ndarray:
    """Energy for each row of angles; (x, z) = (cos theta, sin theta)."""
    zs = np.sin(theta)
    xs = np.cos(theta)
    vals = (inst.field_array * (1.0 + xs) / 2.0).sum(axis=1)
    if inst.m:
        ei, ej = inst.edge_index
        vals = vals + (inst.edge_weights * (1.0 - inst.edge_signs * zs[:, ei] * zs[:, ej]) / 2.0).sum(axis=1)
    return vals


def _ascent_gradient(inst: Instance, theta: np.ndarray) -> np.ndarray:
    zs = np.sin(theta)
    cs = np.cos(theta)
    grad = -(inst.field_array / 2.0) * zs
    if inst.m:
        ei, ej = inst.edge_index
        coef = -(inst.edge_weights * inst.edge_signs) / 2.0
        acc = np.zeros_like(theta)
        np.add.at(acc.T, ei, (coef * zs[:, ej]).T)
        np.add.at(acc.T, ej, (coef * zs[:, ei]).T)
        grad = grad + acc * cs
    return grad


def optimize_product_state(
    inst: Instance,
    restarts: int = 128,
    seed: int = 0,
    max_iter: int = 4000,
    step_tol: float = 1e-14,
) -> BlochAssignment:
    """Best product state found by multi-start projected gradient ascent.

    Optimal product states need no y component (the Hamiltonian has no Y
    terms) and x_i >= 0 only helps the field terms, so each qubit reduces to
    one angle theta_i in [-pi/2, pi/2] with (x, z) = (cos theta, sin theta).
    All restarts ascend in lockstep with per-restart adaptive step sizes;
    deterministic for fixed (restarts, seed).
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    rng = np.random.default_rng(seed)
    half_pi = np.pi / 2
    theta = rng.uniform(-half_pi, half_pi, size=(restarts, inst.n))
    vals = _ascent_objective(inst, theta)
    step = np.full(restarts, 0.5)
    for _ in range(max_iter):
        grad = _ascent_gradient(inst, theta)
        cand = np.clip(theta + step[:, None] * grad, -half_pi, half_pi)
        cand_vals = _ascent_objective(inst, cand)
        accept = cand_vals >= vals
        theta = np.where(accept[:, None], cand, theta)
        vals = np.where(accept, cand_vals, vals)
        step = np.minimum(np.where(accept, step * 1.2, step * 0.5), 1.0)
        if np.all(step < step_tol):
            break
    best = theta[int(np.argmax(vals))]
    return BlochAssignment.from_xz(np.cos(best), np.sin(best))


def classical_z_optimum(inst: Instance, cap: int = _BRUTE_FORCE_CAP) -> tuple[float, np.ndarray]:
    """Brute-force best z-basis assignment of the constraint objective.

    With all fields at zero this is the signed MaxCut optimum; fields
    contribute a constant h/2 each on z-basis states.
    """
    _check_cap(inst.n, cap)
    spins = _spin_table(inst.n)
    vals = np.full(1 << inst.n, float(np.sum(inst.field_array)) / 2.0)
    if inst.m:
        ei, ej = inst.edge_index
        for k in range(inst.m):
            vals += inst.edge_weights[k] * (1.0 - inst.edge_signs[k] * spins[ei[k]] * spins[ej[k]]) / 2.0
    best = int(np.argmax(vals))
    return float(vals[best]), spins[:, best].copy()
