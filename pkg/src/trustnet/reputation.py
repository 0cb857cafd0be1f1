"""Reputation: damped power iteration over a trust-propagation matrix.

Agents that received at least one trusted rating form the node set.  Each
node splits its unit of reputation: a share equal to its strongest outgoing
weight goes to trusted neighbours proportionally to their weights, the rest
is spread over the remaining recipients.  The stationary vector of the
damped chain, max-normalized to [0, 1], is the reputation.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse

from .core import AgentId, Environment, TrustConfig


@dataclass
class ReputationModel:
    """Converged reputation over the node set.

    ``vector`` is max-normalized (its largest entry is 1 when nodes exist);
    ``mean_reputation`` is its mean and doubles as the newcomer value.
    """

    nodes: list[AgentId]
    matrix: sparse.csr_matrix
    vector: np.ndarray
    iterations_used: int
    converged: bool
    mean_reputation: float

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReputationModel):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.matrix.shape == other.matrix.shape
            and (self.matrix != other.matrix).nnz == 0
            and np.array_equal(self.vector, other.vector)
            and self.iterations_used == other.iterations_used
            and self.converged == other.converged
            and self.mean_reputation == other.mean_reputation
        )


def reputation_nodes(env: Environment, trust_threshold: float) -> list[AgentId]:
    """Agents with at least one incoming edge of weight >= threshold, sorted."""
    nodes = {
        dst for (_, dst), stats in env.edges.items() if stats.weight >= trust_threshold
    }
    return sorted(nodes)


def propagation_matrix(
    env: Environment, nodes: list[AgentId], trust_threshold: float
) -> sparse.csr_matrix:
    """Row-stochastic reputation-propagation matrix over ``nodes``.

    Row i: out-edges into the node set share mass r_max (the row's maximum
    weight) proportionally to weight when trusted, and the remaining
    1 - r_max equally among untrusted out-edges; with no untrusted edges the
    remainder is spread uniformly over all other nodes, as is the orphaned
    trusted share when no trusted out-edges exist.  Rows without out-edges
    are uniform over the other nodes (a single-node set keeps its mass).
    """
    n = len(nodes)
    index = {a: i for i, a in enumerate(nodes)}
    data: list[float] = []
    rows: list[int] = []
    cols: list[int] = []

    def put(i: int, j: int, value: float) -> None:
        if value != 0.0:
            rows.append(i)
            cols.append(j)
            data.append(value)

    for i, agent in enumerate(nodes):
        out = [
            (index[nbr], env.edges[(agent, nbr)].weight)
            for nbr in env.neighbours(agent)
            if nbr in index
        ]
        if not out:
            if n == 1:
                put(i, i, 1.0)
            else:
                share = 1.0 / (n - 1)
                for j in range(n):
                    if j != i:
                        put(i, j, share)
            continue

        r_max = max(w for _, w in out)
        trusted = [(j, w) for j, w in out if w >= trust_threshold]
        untrusted = [(j, w) for j, w in out if w < trust_threshold]
        entries: dict[int, float] = {}

        if trusted:
            total = sum(w for _, w in trusted)
            for j, w in trusted:
                entries[j] = entries.get(j, 0.0) + w * r_max / total
        elif n > 1:
            share = r_max / (n - 1)
            for j in range(n):
                if j != i:
                    entries[j] = entries.get(j, 0.0) + share

        if untrusted:
            share = (1.0 - r_max) / len(untrusted)
            for j, _ in untrusted:
                entries[j] = entries.get(j, 0.0) + share
        elif r_max < 1.0 and n > 1:
            share = (1.0 - r_max) / (n - 1)
            for j in range(n):
                if j != i:
                    entries[j] = entries.get(j, 0.0) + share

        for j in sorted(entries):
            put(i, j, entries[j])

    return sparse.csr_matrix((data, (rows, cols)), shape=(n, n))


def pagerank(
    matrix: sparse.csr_matrix,
    damping: float,
    tolerance: float,
    max_iterations: int,
    time_budget: Optional[float] = None,
) -> tuple[np.ndarray, int, bool]:
    """Damped power iteration: v <- damping * M^T v + (1 - damping) * e.

    Starts from the uniform vector e and stops when the L1 change drops to
    ``tolerance``, the iteration cap is hit, or the wall-clock budget runs
    out.  Returns (vector, iterations, converged).
    """
    n = matrix.shape[0]
    if n == 0:
        raise ValueError("node set must be non-empty")
    transposed = matrix.transpose().tocsr()
    uniform = np.full(n, 1.0 / n)
    vec = uniform.copy()
    started = _time.monotonic()
    iterations = 0
    converged = False
    while iterations < max_iterations:
        if time_budget is not None and _time.monotonic() - started >= time_budget:
            break
        nxt = damping * (transposed @ vec) + (1.0 - damping) * uniform
        iterations += 1
        delta = float(np.abs(nxt - vec).sum())
        vec = nxt
        if delta <= tolerance:
            converged = True
            break
    return vec, iterations, converged


def build_reputation(env: Environment, config: TrustConfig) -> ReputationModel:
    """Construct and converge the reputation model for an environment."""
    nodes = reputation_nodes(env, config.trust_threshold)
    if not nodes:
        return ReputationModel(
            nodes=[],
            matrix=sparse.csr_matrix((0, 0)),
            vector=np.zeros(0),
            iterations_used=0,
            converged=True,
            mean_reputation=0.5,
        )
    matrix = propagation_matrix(env, nodes, config.trust_threshold)
    raw, iterations, converged = pagerank(
        matrix,
        config.damping,
        config.tolerance,
        config.max_iterations,
        config.pagerank_seconds,
    )
    vector = raw / raw.max()
    return ReputationModel(
        nodes=nodes,
        matrix=matrix,
        vector=vector,
        iterations_used=iterations,
        converged=converged,
        mean_reputation=float(np.mean(vector)),
    )


def reputation_of(model: ReputationModel, trustee: AgentId) -> float:
    """Trustee's normalized reputation, or the population mean for outsiders.

    An empty model (no agent ever received a trusted rating) yields the
    neutral prior 0.5.
    """
    if not model.nodes:
        return 0.5
    try:
        idx = model.nodes.index(trustee)
    except ValueError:
        return model.mean_reputation
    return float(model.vector[idx])
