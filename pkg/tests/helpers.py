"""Shared builders and hypothesis strategies for the test suite."""

from __future__ import annotations

from hypothesis import strategies as st

from trustnet import AgentProfile, Interaction

AGENTS = ["A", "B", "C", "D", "E", "F", "G", "H"]
CATEGORIES = ["c1", "c2", "c3"]


def rec(trustor, trustee, rating, category="c1", time=0.0) -> Interaction:
    return Interaction(trustor=trustor, trustee=trustee, rating=rating, category=category, time=time)


def profiles_able_everywhere(agents=AGENTS, categories=CATEGORIES):
    return [
        AgentProfile(id=a, completed=frozenset(), able=frozenset(categories)) for a in agents
    ]


ratings = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
times = st.floats(min_value=0.0, max_value=99.0, allow_nan=False, allow_infinity=False)


@st.composite
def interactions(draw, agents=AGENTS, categories=CATEGORIES):
    trustor = draw(st.sampled_from(agents))
    trustee = draw(st.sampled_from([a for a in agents if a != trustor]))
    return Interaction(
        trustor=trustor,
        trustee=trustee,
        rating=draw(ratings),
        category=draw(st.sampled_from(categories)),
        time=draw(times),
    )


def logs(min_size=0, max_size=30, agents=AGENTS, categories=CATEGORIES):
    return st.lists(interactions(agents=agents, categories=categories), min_size=min_size, max_size=max_size)
