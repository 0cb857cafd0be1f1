"""Brute-force references and the comparison suites built on them.

These deliberately re-derive the engine's results by different means:
exhaustive simple-path enumeration instead of best-first search, and a
dense matrix pipeline instead of the sparse one.  They stay independent of
the engine code paths they check.
"""

from __future__ import annotations

import graphlib
import math
from typing import Optional, Sequence

import numpy as np

from .core import (
    AgentId,
    AgentProfile,
    Environment,
    Interaction,
    TaskCategory,
    TrustConfig,
    build_environment,
)
from .indirect import aggregate, find_paths
from .reputation import build_reputation
from .simulate import SplitMix64, agent_name, category_name


def is_acyclic(env: Environment) -> bool:
    graph: dict[AgentId, set[AgentId]] = {a: set() for a in env.agents}
    for src, dst in env.edges:
        graph[src].add(dst)
    try:
        list(graphlib.TopologicalSorter(graph).static_order())
        return True
    except graphlib.CycleError:
        return False


def oracle_indirect(
    env: Environment,
    log: Sequence[Interaction],
    trustor: AgentId,
    trustee: AgentId,
    category: TaskCategory,
    config: TrustConfig,
) -> Optional[float]:
    """Indirect trust by exhaustive enumeration of qualifying simple paths.

    Every simple path trustor -> trustee is considered whose interior nodes
    have category history, whose interior edges carry weight at or above the
    trust threshold, and whose interior nodes (beyond the first hop) are not
    directly trusted by the trustor.  Per advisor the maximum edge-weight
    product decides the retained path; aggregation mirrors the engine rule.
    """
    if len(env.agents) > 12:
        raise ValueError("oracle limited to environments of at most 12 agents")
    if trustor == trustee or trustor not in env.agents or trustee not in env.agents:
        raise ValueError("trustor and trustee must be distinct known agents")

    eval_time = env.snapshot_time
    ratings: dict[AgentId, list[float]] = {}
    for r in log:
        if r.trustee == trustee and r.category == category and r.time < eval_time:
            ratings.setdefault(r.trustor, []).append(r.rating)

    threshold = config.trust_threshold
    # advisor -> (best product, hops to trustee, node chain) with deterministic ties
    best: dict[AgentId, tuple[float, int, tuple[AgentId, ...]]] = {}

    def consider(chain: tuple[AgentId, ...], product: float) -> None:
        advisor = chain[-1]
        if advisor not in ratings:
            return
        hops = len(chain)  # edges trustor -> advisor plus the final hop
        candidate = (product, hops, chain)
        seen = best.get(advisor)
        if (
            seen is None
            or candidate[0] > seen[0]
            or (candidate[0] == seen[0] and (candidate[1], candidate[2]) < (seen[1], seen[2]))
        ):
            best[advisor] = candidate

    def walk(node: AgentId, chain: tuple[AgentId, ...], product: float, visited: set) -> None:
        consider(chain, product)
        for nbr in env.neighbours(node):
            if nbr == trustee or nbr in visited:
                continue
            weight = env.edges[(node, nbr)].weight
            if weight < threshold:
                continue
            if category not in env.agents[nbr].completed:
                continue
            if node != trustor and env.has_trusted_edge(trustor, nbr, threshold):
                continue
            walk(nbr, chain + (nbr,), product * weight, visited | {nbr})

    walk(trustor, (trustor,), 1.0, {trustor})

    kept = []
    for advisor in sorted(best):
        product, hops, _ = best[advisor]
        if product > config.path_threshold:
            rated = ratings[advisor]
            kept.append((sum(rated) / len(rated), product, hops))
    if not kept:
        return None
    if len(kept) == 1:
        rating, _, hops = kept[0]
        return rating * config.path_decay**hops
    num = sum(r * w for r, w, _ in kept)
    den = sum(w for _, w, _ in kept)
    return num / den


def oracle_reputation(env: Environment, config: TrustConfig) -> tuple[list[AgentId], np.ndarray]:
    """Dense re-derivation of the reputation pipeline.

    Rebuilds the node set, the propagation matrix, and the damped power
    iteration with plain numpy arrays, then max-normalizes.  Returns the
    node order and the normalized vector.
    """
    threshold = config.trust_threshold
    members = sorted(
        {dst for (_, dst), stats in env.edges.items() if stats.weight >= threshold}
    )
    n = len(members)
    if n > 200:
        raise ValueError("oracle limited to node sets of at most 200 agents")
    if n == 0:
        return [], np.zeros(0)
    pos = {a: i for i, a in enumerate(members)}

    matrix = np.zeros((n, n))
    for a in members:
        i = pos[a]
        targets = [
            (pos[b], env.edges[(a, b)].weight)
            for b in env.agents
            if b != a and (a, b) in env.edges and b in pos
        ]
        if not targets:
            if n == 1:
                matrix[i, i] = 1.0
            else:
                for j in range(n):
                    if j != i:
                        matrix[i, j] = 1.0 / (n - 1)
            continue
        r_max = max(w for _, w in targets)
        trusted = [(j, w) for j, w in targets if w >= threshold]
        untrusted = [(j, w) for j, w in targets if w < threshold]
        if trusted:
            total = sum(w for _, w in trusted)
            for j, w in trusted:
                matrix[i, j] += w * r_max / total
        elif n > 1:
            for j in range(n):
                if j != i:
                    matrix[i, j] += r_max / (n - 1)
        if untrusted:
            for j, _ in untrusted:
                matrix[i, j] += (1.0 - r_max) / len(untrusted)
        elif n > 1:
            for j in range(n):
                if j != i:
                    matrix[i, j] += (1.0 - r_max) / (n - 1)

    uniform = np.full(n, 1.0 / n)
    vec = uniform.copy()
    for _ in range(config.max_iterations):
        nxt = config.damping * matrix.T.dot(vec) + (1.0 - config.damping) * uniform
        delta = float(np.abs(nxt - vec).sum())
        vec = nxt
        if delta <= config.tolerance:
            break
    return members, vec / vec.max()


def indirect_instance(
    seed: int, max_agents: int = 8, max_categories: int = 3
) -> tuple[list[AgentProfile], list[Interaction], AgentId, AgentId, TaskCategory]:
    """Seeded random instance for the indirect comparison.

    Even seeds orient every interaction from a lower to a higher agent
    index, which forces an acyclic environment; odd seeds are unconstrained.
    """
    rng = SplitMix64(seed)
    n = 4 + rng.below(max_agents - 3)
    n_cats = 1 + rng.below(max_categories)
    m = 2 * n + rng.below(2 * n)
    force_dag = seed % 2 == 0
    agents = [agent_name(i, n) for i in range(n)]
    categories = [category_name(i) for i in range(n_cats)]
    profiles = [
        AgentProfile(id=a, completed=frozenset(), able=frozenset(categories)) for a in agents
    ]
    log = []
    for _ in range(m):
        i = rng.below(n)
        j = rng.below(n - 1)
        if j >= i:
            j += 1
        if force_dag and i > j:
            i, j = j, i
        log.append(
            Interaction(
                trustor=agents[i],
                trustee=agents[j],
                rating=rng.uniform(),
                category=categories[rng.below(n_cats)],
                time=rng.uniform() * 100.0,
            )
        )
    return profiles, log, agents[0], agents[-1], categories[0]


def compare_indirect(
    seeds: Sequence[int],
    config: Optional[TrustConfig] = None,
    max_agents: int = 8,
    max_categories: int = 3,
    tolerance: float = 1e-9,
) -> dict:
    """Engine vs exhaustive oracle over seeded instances; returns a report.

    Acyclic instances must agree within ``tolerance``; deviations on cyclic
    instances are expected occasionally (the search may settle on a
    non-optimal re-attachment order) and are reported, not failed.
    """
    cfg = config or TrustConfig(search_steps=None, search_seconds=None)
    report = {
        "instances": 0,
        "acyclic": 0,
        "cyclic": 0,
        "acyclic_mismatches": 0,
        "cyclic_deviations": 0,
        "max_acyclic_deviation": 0.0,
        "max_cyclic_deviation": 0.0,
        "cyclic_deviation_rate": 0.0,
        "with_paths": 0,
        "deviations": [],
    }
    for seed in seeds:
        profiles, log, trustor, trustee, category = indirect_instance(
            seed, max_agents, max_categories
        )
        env = build_environment(log, 100.0, cfg.decay_rate, profiles)
        acyclic = is_acyclic(env)
        engine = aggregate(
            find_paths(env, log, trustor, trustee, category, cfg),
            cfg.path_threshold,
            cfg.path_decay,
        )
        reference = oracle_indirect(env, log, trustor, trustee, category, cfg)
        report["instances"] += 1
        report["acyclic" if acyclic else "cyclic"] += 1
        if engine is not None or reference is not None:
            report["with_paths"] += 1
        if engine is None and reference is None:
            continue
        if engine is None or reference is None:
            deviation = math.inf
        else:
            deviation = abs(engine - reference)
        key = "max_acyclic_deviation" if acyclic else "max_cyclic_deviation"
        report[key] = max(report[key], deviation)
        if deviation > tolerance:
            report["acyclic_mismatches" if acyclic else "cyclic_deviations"] += 1
            report["deviations"].append(
                {
                    "seed": seed,
                    "acyclic": acyclic,
                    "engine": engine,
                    "oracle": reference,
                    "deviation": deviation,
                }
            )
    if report["cyclic"]:
        report["cyclic_deviation_rate"] = report["cyclic_deviations"] / report["cyclic"]
    return report


def reputation_instance(
    seed: int, max_agents: int = 50
) -> tuple[list[AgentProfile], list[Interaction]]:
    rng = SplitMix64(seed)
    n = 10 + rng.below(max(max_agents - 9, 1))
    m = 4 * n
    agents = [agent_name(i, n) for i in range(n)]
    categories = [category_name(i) for i in range(2)]
    profiles = [
        AgentProfile(id=a, completed=frozenset(), able=frozenset(categories)) for a in agents
    ]
    log = []
    for _ in range(m):
        i = rng.below(n)
        j = rng.below(n - 1)
        if j >= i:
            j += 1
        log.append(
            Interaction(
                trustor=agents[i],
                trustee=agents[j],
                rating=rng.uniform(),
                category=categories[rng.below(2)],
                time=rng.uniform() * 100.0,
            )
        )
    return profiles, log


def compare_reputation(
    seeds: Sequence[int],
    config: Optional[TrustConfig] = None,
    max_agents: int = 50,
    tolerance: float = 1e-8,
    row_sum_tolerance: float = 1e-9,
) -> dict:
    """Sparse engine pipeline vs dense oracle over seeded instances."""
    cfg = config or TrustConfig()
    report = {
        "instances": 0,
        "mismatches": 0,
        "max_deviation": 0.0,
        "max_row_sum_error": 0.0,
        "max_iterations_used": 0,
        "all_converged": True,
        "failures": [],
    }
    for seed in seeds:
        profiles, log = reputation_instance(seed, max_agents)
        env = build_environment(log, 100.0, cfg.decay_rate, profiles)
        model = build_reputation(env, cfg)
        nodes, reference = oracle_reputation(env, cfg)
        report["instances"] += 1
        report["max_iterations_used"] = max(
            report["max_iterations_used"], model.iterations_used
        )
        report["all_converged"] = report["all_converged"] and model.converged
        problems = []
        if model.nodes != nodes:
            problems.append("node sets differ")
            deviation = math.inf
        else:
            deviation = (
                float(np.max(np.abs(model.vector - reference))) if nodes else 0.0
            )
            if deviation > tolerance:
                problems.append(f"vector deviation {deviation}")
        if len(model.nodes):
            row_sums = np.asarray(model.matrix.sum(axis=1)).ravel()
            row_err = float(np.max(np.abs(row_sums - 1.0)))
            report["max_row_sum_error"] = max(report["max_row_sum_error"], row_err)
            if row_err > row_sum_tolerance:
                problems.append(f"row sum error {row_err}")
        report["max_deviation"] = max(report["max_deviation"], deviation)
        if problems:
            report["mismatches"] += 1
            report["failures"].append({"seed": seed, "problems": problems})
    return report
