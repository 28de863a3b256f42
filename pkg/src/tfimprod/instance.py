"""Signed transverse-field Ising problem instances.

An instance is an undirected graph on vertices 0..n-1 with a nonnegative
weight w and a coupling sign J in {+1, -1} per edge, plus a nonnegative
transverse field h per vertex.  J = +1 means the edge prefers anti-aligned
z-spins, J = -1 prefers aligned ones.  All downstream modules consume the
validated, immutable ``Instance``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Edge",
    "Instance",
    "InstanceError",
    "parse_instance",
    "serialize_instance",
    "load_instance",
    "shift_constants",
    "is_frustrated",
    "random_instance",
    "triangle_instance",
]


class InstanceError(ValueError):
    """Invalid instance document; ``path`` points at the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    w: float
    J: int


@dataclass(frozen=True)
class Instance:
    n: int
    edges: tuple[Edge, ...]
    fields: tuple[float, ...]

    def __post_init__(self):
        _validate(self)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def W(self) -> float:
        """Total edge weight."""
        return float(np.sum(self.edge_weights)) if self.edges else 0.0

    @property
    def H(self) -> float:
        """Total field strength."""
        return float(np.sum(self.field_array)) if self.n else 0.0

    # Cached index/weight arrays; treat as read-only.
    @cached_property
    def edge_index(self) -> tuple[np.ndarray, np.ndarray]:
        ei = np.array([e.u for e in self.edges], dtype=np.intp)
        ej = np.array([e.v for e in self.edges], dtype=np.intp)
        ei.setflags(write=False)
        ej.setflags(write=False)
        return ei, ej

    @cached_property
    def edge_weights(self) -> np.ndarray:
        w = np.array([e.w for e in self.edges], dtype=float)
        w.setflags(write=False)
        return w

    @cached_property
    def edge_signs(self) -> np.ndarray:
        J = np.array([e.J for e in self.edges], dtype=float)
        J.setflags(write=False)
        return J

    @cached_property
    def field_array(self) -> np.ndarray:
        h = np.array(self.fields, dtype=float)
        h.setflags(write=False)
        return h

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "edges": [{"u": e.u, "v": e.v, "w": e.w, "J": e.J} for e in self.edges],
            "fields": list(self.fields),
        }


def _is_int(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


def _validate(inst: Instance):
    if not _is_int(inst.n) or inst.n < 0:
        raise InstanceError("n", f"vertex count must be a nonnegative integer, got {inst.n!r}")
    if len(inst.fields) != inst.n:
        raise InstanceError("fields", f"expected {inst.n} entries, got {len(inst.fields)}")
    for i, h in enumerate(inst.fields):
        if not np.isfinite(h) or h < 0:
            raise InstanceError(f"fields[{i}]", f"field must be finite and >= 0, got {h!r}")
    seen = set()
    for k, e in enumerate(inst.edges):
        for key, idx in (("u", e.u), ("v", e.v)):
            if not _is_int(idx) or not (0 <= idx < inst.n):
                raise InstanceError(f"edges[{k}].{key}", f"vertex index out of range [0, {inst.n}), got {idx!r}")
        if e.u == e.v:
            raise InstanceError(f"edges[{k}]", f"self-loop on vertex {e.u}")
        pair = (min(e.u, e.v), max(e.u, e.v))
        if pair in seen:
            raise InstanceError(f"edges[{k}]", f"duplicate edge {{{pair[0]}, {pair[1]}}}")
        seen.add(pair)
        if not np.isfinite(e.w) or e.w < 0:
            raise InstanceError(f"edges[{k}].w", f"weight must be finite and >= 0, got {e.w!r}")
        if e.J not in (1, -1):
            raise InstanceError(f"edges[{k}].J", f"coupling sign must be +1 or -1, got {e.J!r}")


def parse_instance(text: str) -> Instance:
    """Parse and validate a JSON instance document.

    Schema: ``{"n": int, "edges": [{"u", "v", "w", "J"}, ...], "fields": [...]}``
    where ``"fields"`` may be a single number as shorthand for a uniform field.
    Edge endpoints are normalized to u < v.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("$", f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceError("$", "top-level document must be an object")
    for key in ("n", "edges", "fields"):
        if key not in doc:
            raise InstanceError(key, "missing required key")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InstanceError("n", f"must be a nonnegative integer, got {n!r}")
    raw_fields = doc["fields"]
    if isinstance(raw_fields, (int, float)) and not isinstance(raw_fields, bool):
        fields = tuple(float(raw_fields) for _ in range(n))
    elif isinstance(raw_fields, list):
        fields = []
        for i, h in enumerate(raw_fields):
            if not isinstance(h, (int, float)) or isinstance(h, bool):
                raise InstanceError(f"fields[{i}]", f"must be a number, got {h!r}")
            fields.append(float(h))
        fields = tuple(fields)
    else:
        raise InstanceError("fields", "must be a list of numbers or a single number")
    if not isinstance(doc["edges"], list):
        raise InstanceError("edges", "must be a list")
    edges = []
    for k, rec in enumerate(doc["edges"]):
        if not isinstance(rec, dict):
            raise InstanceError(f"edges[{k}]", "must be an object")
        for key in ("u", "v", "w", "J"):
            if key not in rec:
                raise InstanceError(f"edges[{k}].{key}", "missing required key")
        u, v = rec["u"], rec["v"]
        for key, idx in (("u", u), ("v", v)):
            if not isinstance(idx, int) or isinstance(idx, bool):
                raise InstanceError(f"edges[{k}].{key}", f"must be an integer, got {idx!r}")
        w = rec["w"]
        if not isinstance(w, (int, float)) or isinstance(w, bool):
            raise InstanceError(f"edges[{k}].w", f"must be a number, got {w!r}")
        J = rec["J"]
        if isinstance(J, bool) or J not in (1, -1):
            raise InstanceError(f"edges[{k}].J", f"must be exactly 1 or -1, got {J!r}")
        if u > v:
            u, v = v, u
        edges.append(Edge(u, v, float(w), int(J)))
    try:
        return Instance(n, tuple(edges), fields)
    except InstanceError:
        raise


def serialize_instance(inst: Instance) -> str:
    """Canonical JSON form; ``parse_instance`` round-trips it exactly."""
    return json.dumps(inst.to_dict())


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def shift_constants(inst: Instance) -> tuple[float, float]:
    """Return (W, H) = (total edge weight, total field strength).

    These link the two Hamiltonian forms: the minimum energy of the signed
    coupling form equals W + H - 2 * (maximum of the constraint form).
    """
    return inst.W, inst.H


def is_frustrated(inst: Instance) -> bool:
    """True iff some cycle's coupling signs multiply to -1.

    Gauge propagation: fix a spin per component and propagate the preferred
    relative sign (J = +1 prefers opposite spins); any inconsistent closed
    walk certifies frustration.  Weights are irrelevant, zero-weight edges
    still count.
    """
    adj: list[list[tuple[int, int]]] = [[] for _ in range(inst.n)]
    for e in inst.edges:
        adj[e.u].append((e.v, e.J))
        adj[e.v].append((e.u, e.J))
    spin = [0] * inst.n
    for root in range(inst.n):
        if spin[root]:
            continue
        spin[root] = 1
        stack = [root]
        while stack:
            u = stack.pop()
            for v, J in adj[u]:
                want = -J * spin[u]
                if spin[v] == 0:
                    spin[v] = want
                    stack.append(v)
                elif spin[v] != want:
                    return True
    return False


def random_instance(n: int, p: float, seed: int, w_max: float = 1.0, h_max: float = 1.0) -> Instance:
    """Erdos-Renyi G(n, p) instance with random signs, w ~ U[0, w_max], h ~ U[0, h_max]."""
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append(Edge(i, j, float(rng.random() * w_max), int(rng.choice((-1, 1)))))
    fields = tuple(float(h) for h in rng.random(n) * h_max)
    return Instance(n, tuple(edges), fields)


def triangle_instance(g: float = 0.6) -> Instance:
    """The 3-vertex triangle with unit weights, all J = +1, uniform field g.

    At g = 3/5 this is the canonical instance whose best product state
    reaches only 169/180 of the true optimum.
    """
    edges = (Edge(0, 1, 1.0, 1), Edge(1, 2, 1.0, 1), Edge(0, 2, 1.0, 1))
    return Instance(3, edges, (g, g, g))
