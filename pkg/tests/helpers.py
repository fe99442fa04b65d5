"""Shared builders for the test suites"""

from pathlib import Path

import hypothesis.strategies as st
import numpy as np

from osbrp.instance_io import load_instance
from osbrp.model import Instance, Visit

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> Instance:
    return load_instance(str(FIXTURES / name))


def single_visit_instance(rng: np.random.Generator, max_epochs: int = 10, max_capacity: int = 6,
                          demand_bound: int = 8, max_vehicle: int = 5) -> Instance:
    m = int(rng.integers(1, max_epochs + 1))
    C = int(rng.integers(0, max_capacity + 1))
    Q = int(rng.integers(0, max_vehicle + 1))
    return Instance(
        capacity=C,
        initial_stock=int(rng.integers(0, C + 1)),
        demand=rng.integers(-demand_bound, demand_bound + 1, size=m).tolist(),
        visits=[Visit(int(rng.integers(1, m + 1)), int(rng.integers(0, Q + 1)), Q)],
    )


@st.composite
def instances(draw, max_epochs=8, max_visits=3, max_capacity=5, demand_bound=6, max_vehicle=4):
    m = draw(st.integers(min_value=1, max_value=max_epochs))
    C = draw(st.integers(min_value=0, max_value=max_capacity))
    s0 = draw(st.integers(min_value=0, max_value=C))
    demand = draw(st.lists(st.integers(-demand_bound, demand_bound), min_size=m, max_size=m))
    w = draw(st.integers(min_value=0, max_value=min(max_visits, m)))
    epochs = sorted(draw(st.sets(st.integers(1, m), min_size=w, max_size=w)))
    visits = []
    for e in epochs:
        Q = draw(st.integers(min_value=0, max_value=max_vehicle))
        q = draw(st.integers(min_value=0, max_value=Q))
        visits.append(Visit(e, q, Q))
    return Instance(C, s0, demand, visits)
