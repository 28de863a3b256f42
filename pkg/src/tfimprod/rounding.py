"""Product-state rounding of relaxation solutions.

Five constructions, all emitting pure product states as Bloch vectors:

* FieldOnly: every qubit at (1, 0, 0); fields fully satisfied, each edge
  contributes w/2.
* IsingGW: hyperplane rounding of the field-free relaxation (the classical
  signed MaxCut SDP); qubits at (0, 0, s_i).
* AlgA: hyperplane rounding of the full relaxation's correlation matrix,
  ignoring its x values; qubits at (0, 0, s_i).
* AlgB: matches the relaxation's x values exactly and spends the leftover
  Bloch budget on z; qubits at (x_i, 0, sqrt(1 - x_i^2) s_i).
* AlgC: scales x by q in [0, 1] before spending the leftover; reduces
  bitwise to AlgA at q = 0 and to AlgB at q = 1 under a shared seed.

Randomness is counter-based: trial t of master seed s draws from a Philox
stream keyed by s at counter block t, so trials are reproducible in
isolation and independent of execution order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import relax
from .exact import BlochAssignment, evaluate_product_state
from .instance import Instance

__all__ = [
    "ALGO_ORDER",
    "RoundingOutcome",
    "TrialStats",
    "trial_rng",
    "hyperplane_signs",
    "hyperplane_sign_samples",
    "algorithm_a",
    "algorithm_b",
    "algorithm_c",
    "warmup_field_state",
    "warmup_ising_state",
    "best_of",
    "run_trials",
]

# Tie-break order for best_of.
ALGO_ORDER = ("FieldOnly", "IsingGW", "AlgA", "AlgB", "AlgC")


@dataclass(frozen=True, eq=False)
class RoundingOutcome:
    state: BlochAssignment
    value: float
    algo: str
    q: float | None = None
    seed: int | None = None
    trial: int = 0

    def to_dict(self) -> dict:
        return {
            "algo": self.algo,
            "q": self.q,
            "seed": self.seed,
            "trial": self.trial,
            "value": self.value,
            "bloch": self.state.vectors.tolist(),
        }


class TrialStats(NamedTuple):
    best: RoundingOutcome
    mean: float
    stderr: float


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Counter-based per-trial stream: Philox keyed by seed, offset by trial."""
    if seed < 0 or trial < 0:
        raise ValueError("seed and trial must be nonnegative")
    return np.random.Generator(np.random.Philox(key=seed, counter=trial << 128))


def hyperplane_signs(grams: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Signs of Gaussian projections of the Gram rows; sign(0) resolves to +1."""
    g = rng.standard_normal(grams.shape[1])
    return np.where(grams @ g >= 0.0, 1.0, -1.0)


def hyperplane_sign_samples(grams: np.ndarray, rng: np.random.Generator, trials: int) -> np.ndarray:
    """(trials, n) sign matrix from one batched Gaussian draw."""
    G = rng.standard_normal((trials, grams.shape[1]))
    return np.where(G @ grams.T >= 0.0, 1.0, -1.0)


def _tilted_state(xs: np.ndarray, signs: np.ndarray) -> BlochAssignment:
    # +0.0 maps any -0.0 to +0.0 so the q = 0 and q = 1 collapses are bitwise.
    xs = np.asarray(xs, dtype=float) + 0.0
    alpha = np.sqrt(1.0 - xs * xs)
    return BlochAssignment.from_xz(xs, alpha * signs)


def _outcome(inst, state, algo, q, seed, trial) -> RoundingOutcome:
    value, _, _ = evaluate_product_state(inst, state)
    return RoundingOutcome(state=state, value=value, algo=algo, q=q, seed=seed, trial=trial)


def algorithm_a(inst: Instance, sdp: relax.SdpSolution, rng, seed=None, trial=0) -> RoundingOutcome:
    """Pure-z hyperplane rounding: qubit i at (0, 0, s_i)."""
    s = hyperplane_signs(sdp.grams, rng)
    return _outcome(inst, _tilted_state(np.zeros(inst.n), s), "AlgA", None, seed, trial)


def algorithm_b(inst: Instance, sdp: relax.SdpSolution, rng, seed=None, trial=0) -> RoundingOutcome:
    """Field-matched rounding: qubit i at (x_i, 0, sqrt(1 - x_i^2) s_i)."""
    s = hyperplane_signs(sdp.grams, rng)
    return _outcome(inst, _tilted_state(sdp.x, s), "AlgB", None, seed, trial)


def algorithm_c(inst: Instance, sdp: relax.SdpSolution, q: float, rng, seed=None, trial=0) -> RoundingOutcome:
    """Interpolated rounding: qubit i at (q x_i, 0, sqrt(1 - (q x_i)^2) s_i)."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    s = hyperplane_signs(sdp.grams, rng)
    return _outcome(inst, _tilted_state(q * sdp.x, s), "AlgC", q, seed, trial)


def warmup_field_state(inst: Instance, seed=None, trial=0) -> RoundingOutcome:
    """All qubits at (1, 0, 0): value is exactly W/2 + H."""
    return _outcome(inst, BlochAssignment.plus_states(inst.n), "FieldOnly", None, seed, trial)


def field_free(inst: Instance) -> Instance:
    """Copy of the instance with all fields zeroed (edge-only relaxation)."""
    return Instance(inst.n, inst.edges, (0.0,) * inst.n)


def warmup_ising_state(
    inst: Instance,
    rng,
    sdp: relax.SdpSolution | None = None,
    tol: float = relax.DEFAULT_TOL,
    seed=None,
    trial=0,
) -> RoundingOutcome:
    """Hyperplane rounding of the field-free relaxation; qubits at (0, 0, s_i).

    With the fields dropped the disk constraints are slack, so the edge-only
    relaxation is the classical signed MaxCut SDP.  Pass a presolved ``sdp``
    of ``field_free(inst)`` to avoid re-solving per trial.
    """
    if sdp is None:
        sdp = relax.solve_soc_sdp(field_free(inst), tol)
    s = hyperplane_signs(sdp.grams, rng)
    return _outcome(inst, _tilted_state(np.zeros(inst.n), s), "IsingGW", None, seed, trial)


def best_of(inst: Instance, candidates: list[RoundingOutcome]) -> RoundingOutcome:
    """Highest-value candidate; exact ties go to the earliest algorithm tag."""
    if not candidates:
        raise ValueError("best_of requires at least one candidate")
    best = None
    for cand in candidates:
        check, _, _ = evaluate_product_state(inst, cand.state)
        if abs(check - cand.value) > 1e-12:
            raise ValueError(f"stale candidate: recorded {cand.value}, evaluates to {check}")
        if best is None or cand.value > best.value or (
            cand.value == best.value
            and ALGO_ORDER.index(cand.algo) < ALGO_ORDER.index(best.algo)
        ):
            best = cand
    return best


def _trial_xs(inst: Instance, sdp, algo: str, q):
    if algo in ("AlgA", "IsingGW"):
        return np.zeros(inst.n)
    if algo == "AlgB":
        return sdp.x
    if algo == "AlgC":
        if q is None or not 0.0 <= q <= 1.0:
            raise ValueError("AlgC needs q in [0, 1]")
        return q * sdp.x
    raise ValueError(f"unknown algorithm tag {algo!r}")


def _rebuild(inst, sdp, algo, q, seed, trial) -> RoundingOutcome:
    rng = trial_rng(seed, trial)
    if algo == "AlgA":
        return algorithm_a(inst, sdp, rng, seed=seed, trial=trial)
    if algo == "AlgB":
        return algorithm_b(inst, sdp, rng, seed=seed, trial=trial)
    if algo == "AlgC":
        return algorithm_c(inst, sdp, q, rng, seed=seed, trial=trial)
    return warmup_ising_state(inst, rng, sdp=sdp, seed=seed, trial=trial)


def run_trials(
    inst: Instance,
    sdp: relax.SdpSolution | None,
    algo: str,
    q: float | None = None,
    trials: int = 1000,
    seed: int = 0,
) -> TrialStats:
    """Repeat one rounding algorithm over counter-derived trial streams.

    Returns the best outcome (rebuilt from its own stream, so it matches a
    standalone call with ``trial_rng(seed, t)``) plus the empirical mean and
    standard error of the value across trials.  For ``IsingGW`` pass the
    solved relaxation of ``field_free(inst)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if algo not in ALGO_ORDER:
        raise ValueError(f"unknown algorithm tag {algo!r}")

    if algo == "FieldOnly":
        best = warmup_field_state(inst, seed=seed, trial=0)
        return TrialStats(best, best.value, 0.0)

    if sdp is None:
        base = field_free(inst) if algo == "IsingGW" else inst
        sdp = relax.solve_soc_sdp(base)

    xs = np.asarray(_trial_xs(inst, sdp, algo, q), dtype=float) + 0.0
    alpha = np.sqrt(1.0 - xs * xs)
    r = sdp.grams.shape[1]
    G = np.empty((trials, r))
    for t in range(trials):
        G[t] = trial_rng(seed, t).standard_normal(r)
    S = np.where(G @ sdp.grams.T >= 0.0, 1.0, -1.0)

    Z = alpha[None, :] * S
    values = np.full(trials, float(np.sum(inst.field_array * (1.0 + xs) / 2.0)))
    if inst.m:
        ei, ej = inst.edge_index
        values += (inst.edge_weights * (1.0 - inst.edge_signs * Z[:, ei] * Z[:, ej]) / 2.0).sum(axis=1)

    t_best = int(np.argmax(values))
    best = _rebuild(inst, sdp, algo, q, seed, t_best)
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(trials)) if trials > 1 else 0.0
    return TrialStats(best, mean, stderr)
