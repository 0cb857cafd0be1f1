"""Indirect trust: best-first propagation through trusted neighbours.

The search grows a table of reached agents ordered by the product of
cumulative propagation probability and cumulative trust.  Paths never
revisit an agent, and a hop into an agent the trustor already trusts
directly is skipped (first-hand evidence outranks a recommendation chain).
Each agent holding ratings of the trustee contributes one candidate path;
the aggregation step combines the survivors of the path-trust filter.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (
    AgentId,
    Environment,
    Interaction,
    InvariantError,
    TaskCategory,
    TrustConfig,
    UnknownAgentError,
)


@dataclass
class TableRow:
    """One reached agent: cumulative probability/trust and its ancestor chain.

    ``path`` runs from the trustor (inclusive) to the agent's parent; the
    trustor's own row has an empty path.  ``cum_prob`` may later be rescaled
    when a sibling subtree is re-attached elsewhere.
    """

    agent: AgentId
    cum_prob: float
    cum_trust: float
    path: tuple[AgentId, ...]


@dataclass
class TrusteeRow:
    """One discovered path endpoint: the advisor's rating of the trustee."""

    advisor: AgentId
    rating: float
    path: tuple[AgentId, ...]


@dataclass(frozen=True)
class PropagationProbability:
    """Likelihood of consulting one trusted neighbour.

    ``volume`` grows logarithmically with the neighbour's interaction count
    on the category, ``recency`` decays exponentially with time since its
    last one, and ``value`` is their product normalized to sum to 1 over the
    neighbour set.
    """

    volume: float
    recency: float
    value: float


@dataclass
class PropagationTable:
    """Search state and result: reached agents plus trustee-path records."""

    trustor: AgentId
    trustee: AgentId
    category: TaskCategory
    eval_time: float
    rows: dict[AgentId, TableRow] = field(default_factory=dict)
    trustee_rows: list[TrusteeRow] = field(default_factory=list)
    expansions: int = 0

    def put_trustee_row(self, advisor: AgentId, rating: float, path: tuple[AgentId, ...]) -> None:
        for row in self.trustee_rows:
            if row.advisor == advisor:
                row.path = path
                return
        self.trustee_rows.append(TrusteeRow(advisor=advisor, rating=rating, path=path))

    def check(self, env: Environment, trust_threshold: float) -> None:
        """Assert loop-freedom, threshold and product soundness of every path."""
        for row in self.rows.values():
            chain = row.path + (row.agent,)
            if len(set(chain)) != len(chain):
                raise InvariantError(f"repeated agent on path of {row.agent!r}: {chain}")
            if self.trustee in row.path:
                raise InvariantError(f"trustee inside path of {row.agent!r}")
            if not (0.0 <= row.cum_prob <= 1.0) or not (0.0 <= row.cum_trust <= 1.0):
                raise InvariantError(f"cumulative values out of range for {row.agent!r}")
            product = 1.0
            for a, b in zip(chain, chain[1:]):
                stats = env.edges.get((a, b))
                if stats is None or stats.weight < trust_threshold:
                    raise InvariantError(f"untrusted hop {a!r}->{b!r} on stored path")
                product *= stats.weight
            if abs(product - row.cum_trust) > 1e-12:
                raise InvariantError(
                    f"cum_trust of {row.agent!r} diverges from its path product"
                )
        for trow in self.trustee_rows:
            if trow.advisor not in self.rows:
                raise InvariantError(f"advisor {trow.advisor!r} has no table row")

    def to_dict(self) -> dict:
        """Stable-field-order dump used by the CLI ``paths`` command."""
        return {
            "trustor": self.trustor,
            "trustee": self.trustee,
            "category": self.category,
            "time": self.eval_time,
            "rows": [
                {
                    "agent": row.agent,
                    "cum_prob": row.cum_prob,
                    "cum_trust": row.cum_trust,
                    "path": list(row.path),
                }
                for row in self.rows.values()
            ],
            "trustee_rows": [
                {"advisor": row.advisor, "rating": row.rating, "path": list(row.path)}
                for row in self.trustee_rows
            ],
        }


def trusted_neighbours(
    env: Environment, agent: AgentId, category: TaskCategory, trust_threshold: float
) -> set[AgentId]:
    """Out-neighbours trusted at or above the threshold with history in ``category``."""
    if agent not in env.agents:
        raise UnknownAgentError(agent)
    result = set()
    for nbr in env.neighbours(agent):
        if env.edges[(agent, nbr)].weight < trust_threshold:
            continue
        if category in env.agents[nbr].completed:
            result.add(nbr)
    return result


def _category_activity(
    log: Sequence[Interaction], category: TaskCategory, eval_time: float
) -> tuple[dict[AgentId, int], dict[AgentId, float]]:
    """Per-agent interaction count and latest time on ``category`` before ``eval_time``."""
    counts: dict[AgentId, int] = {}
    last: dict[AgentId, float] = {}
    for r in log:
        if r.category != category or r.time >= eval_time:
            continue
        for agent in (r.trustor, r.trustee):
            counts[agent] = counts.get(agent, 0) + 1
            if agent not in last or r.time > last[agent]:
                last[agent] = r.time
    return counts, last


def _probabilities(
    counts: dict[AgentId, int],
    last: dict[AgentId, float],
    neighbours: Sequence[AgentId],
    eval_time: float,
    recency_rate: float,
) -> dict[AgentId, PropagationProbability]:
    max_count = max((counts.get(a, 0) for a in neighbours), default=0)
    raw: list[float] = []
    parts: list[tuple[float, float]] = []
    for a in neighbours:
        n = counts.get(a, 0)
        volume = math.log(1 + n) / math.log(1 + max_count) if max_count > 0 else 0.0
        last_time = last.get(a)
        recency = 0.0 if last_time is None else math.exp(-recency_rate * (eval_time - last_time))
        parts.append((volume, recency))
        raw.append(volume * recency)
    total = sum(raw)
    out = {}
    for a, (volume, recency), r in zip(neighbours, parts, raw):
        value = r / total if total > 0 else 1.0 / len(neighbours)
        out[a] = PropagationProbability(volume=volume, recency=recency, value=value)
    return out


def propagation_probabilities(
    env: Environment,
    log: Sequence[Interaction],
    agent: AgentId,
    neighbours: Sequence[AgentId],
    category: TaskCategory,
    eval_time: float,
    recency_rate: float,
) -> dict[AgentId, PropagationProbability]:
    """Normalized consultation probabilities over a trusted-neighbour set.

    The neighbour set must be non-empty; callers are expected to pass
    neighbours that qualify under :func:`trusted_neighbours`.
    """
    if agent not in env.agents:
        raise UnknownAgentError(agent)
    if not neighbours:
        raise ValueError("neighbour set must be non-empty")
    ordered = sorted(neighbours)
    counts, last = _category_activity(log, category, eval_time)
    return _probabilities(counts, last, ordered, eval_time, recency_rate)


def _ratings_of_trustee(
    log: Sequence[Interaction], trustee: AgentId, category: TaskCategory, eval_time: float
) -> dict[AgentId, list[float]]:
    out: dict[AgentId, list[float]] = {}
    for r in log:
        if r.trustee == trustee and r.category == category and r.time < eval_time:
            out.setdefault(r.trustor, []).append(r.rating)
    return out


def _detach(table: PropagationTable, agent: AgentId) -> None:
    """Remove a row and rescale the probabilities of its old sibling subtrees."""
    old = table.rows.pop(agent)
    if old.cum_prob >= 1.0:
        # Siblings (if any) carry zero probability; no mass to redistribute.
        return
    factor = 1.0 / (1.0 - old.cum_prob)
    depth = len(old.path)
    for row in table.rows.values():
        if row.path[:depth] == old.path and agent not in row.path:
            row.cum_prob = min(1.0, row.cum_prob * factor)


def find_paths(
    env: Environment,
    log: Sequence[Interaction],
    trustor: AgentId,
    trustee: AgentId,
    category: TaskCategory,
    config: TrustConfig,
) -> PropagationTable:
    """Best-first search for trust propagation paths from trustor to trustee.

    The frontier is re-ranked every step by cum_prob * cum_trust (ties go to
    the lexicographically smallest agent id).  Expanding an agent considers
    each out-neighbour: the trustee yields a path record when the agent has
    rated it on the category; an unvisited trusted neighbour with category
    history is attached as a child; a visited one is re-attached when the
    new chain carries strictly more trust and introduces no loop.  A hop
    into an agent the trustor trusts directly is skipped unless it is the
    trustor's own expansion.  The search stops when the frontier empties or
    the step / wall-clock budget runs out.
    """
    if trustor not in env.agents:
        raise UnknownAgentError(trustor)
    if trustee not in env.agents:
        raise UnknownAgentError(trustee)
    if trustor == trustee:
        raise ValueError("trustor and trustee must differ")

    eval_time = env.snapshot_time
    counts, last = _category_activity(log, category, eval_time)
    ratings = _ratings_of_trustee(log, trustee, category, eval_time)

    table = PropagationTable(
        trustor=trustor, trustee=trustee, category=category, eval_time=eval_time
    )
    table.rows[trustor] = TableRow(agent=trustor, cum_prob=1.0, cum_trust=1.0, path=())
    frontier: set[AgentId] = {trustor}
    started = _time.monotonic()

    def rank(agent: AgentId) -> tuple[float, AgentId]:
        row = table.rows[agent]
        return (-(row.cum_prob * row.cum_trust), agent)

    while frontier:
        if config.search_steps is not None and table.expansions >= config.search_steps:
            break
        if (
            config.search_seconds is not None
            and _time.monotonic() - started >= config.search_seconds
        ):
            break
        current = min(frontier, key=rank)
        frontier.discard(current)
        table.expansions += 1
        row = table.rows[current]

        attach: list[AgentId] = []
        for nbr in env.neighbours(current):
            weight = env.edges[(current, nbr)].weight
            if nbr == trustee:
                rated = ratings.get(current)
                if rated:
                    rating = sum(rated) / len(rated)
                    table.put_trustee_row(current, rating, row.path + (current,))
                continue
            if current != trustor and env.has_trusted_edge(
                trustor, nbr, config.trust_threshold
            ):
                continue
            if weight < config.trust_threshold:
                continue
            if category not in env.agents[nbr].completed:
                continue
            existing = table.rows.get(nbr)
            if existing is None:
                attach.append(nbr)
            elif nbr not in row.path and existing.cum_trust < row.cum_trust * weight:
                _detach(table, nbr)
                attach.append(nbr)

        if attach:
            probs = _probabilities(counts, last, attach, eval_time, config.recency_rate)
            for nbr in attach:
                weight = env.edges[(current, nbr)].weight
                table.rows[nbr] = TableRow(
                    agent=nbr,
                    cum_prob=min(1.0, row.cum_prob * probs[nbr].value),
                    cum_trust=row.cum_trust * weight,
                    path=row.path + (current,),
                )
                frontier.add(nbr)

    table.check(env, config.trust_threshold)
    return table


def retained_paths(
    table: PropagationTable, path_threshold: float
) -> list[tuple[AgentId, float, float]]:
    """(advisor, rating, path trust) for trustee rows passing the filter."""
    kept = []
    for trow in table.trustee_rows:
        path_trust = table.rows[trow.advisor].cum_trust
        if path_trust > path_threshold:
            kept.append((trow.advisor, trow.rating, path_trust))
    return kept


def aggregate(
    table: PropagationTable, path_threshold: float, path_decay: float
) -> Optional[float]:
    """Combine the discovered paths into one indirect trust value.

    Multiple surviving paths are averaged with their path trusts as weights.
    A single path is discounted by ``path_decay`` per hop of the chain
    trustor -> advisor -> trustee.  Returns None when nothing survives.
    """
    kept = retained_paths(table, path_threshold)
    if not kept:
        return None
    if len(kept) == 1:
        advisor, rating, _ = kept[0]
        hops = len(table.rows[advisor].path) + 1
        return rating * path_decay**hops
    num = sum(rating * w for _, rating, w in kept)
    den = sum(w for _, _, w in kept)
    return num / den
