"""
Network-wide reputation by power iteration
==========================================

Agents that received at least one trusted rating form the node set.  Each
node splits its reputation mass between trusted neighbours (proportionally)
and everyone else (evenly), and the damped power iteration settles on a
stationary vector that is then max-normalized.  Outsiders inherit the mean.
"""

import numpy as np

from trustnet import (
    Interaction,
    TrustConfig,
    build_environment,
    build_reputation,
    propagation_matrix,
    reputation_nodes,
    reputation_of,
)

log = [
    Interaction("ana", "bo", 0.9, "c", 1.0),
    Interaction("bo", "cy", 0.8, "c", 2.0),
    Interaction("cy", "ana", 0.7, "c", 3.0),
    Interaction("ana", "cy", 0.4, "c", 4.0),   # a weak rating still spreads mass
    Interaction("dee", "bo", 0.95, "c", 5.0),  # dee votes but receives nothing
]
env = build_environment(log, 10.0, 0.0)
cfg = TrustConfig(decay_rate=0.0)

nodes = reputation_nodes(env, cfg.trust_threshold)
print("node set:", nodes, "(dee is a voter, not a member)")

matrix = propagation_matrix(env, nodes, cfg.trust_threshold)
print("propagation matrix rows (each sums to 1):")
print(np.round(matrix.toarray(), 4))

model = build_reputation(env, cfg)
print("converged:", model.converged, "after", model.iterations_used, "iterations")
for agent in nodes:
    print(f"  reputation[{agent}] = {reputation_of(model, agent):.6f}")

# newcomers and any outsider inherit the population mean
print("outsider reputation:", reputation_of(model, "newcomer"))
print("mean:", model.mean_reputation)
