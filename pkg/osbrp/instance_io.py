"""
Instance I/O
JSON instance documents, CSV trajectory export and seeded instance generation
"""

import io
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import pandas as pd

from .exceptions import InputError, InstanceParseError, InstanceValidationError
from .model import BaseTrajectory, Instance, Visit, check_instance

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = [
    'epoch', 'demand', 'intervention', 'virtual_stock', 'surplus_loss', 'stockout_loss', 'stock'
]


@dataclass
class _VisitDoc:
    epoch: Any
    load: Any
    vehicle_capacity: Any


def _require(doc: Dict[str, Any], key: str, path: str) -> Any:
    if key not in doc:
        raise InstanceValidationError(f"{path}{key}", "missing field")
    return doc[key]


def document_to_instance(doc: Any) -> Instance:
    """Validate a parsed document and build the Instance (field paths in errors)"""
    if not isinstance(doc, dict):
        raise InstanceParseError("instance document must be a JSON object")
    capacity = _require(doc, 'capacity', '')
    initial_stock = _require(doc, 'initial_stock', '')
    demand = _require(doc, 'demand', '')
    visits = doc.get('visits', [])
    if not isinstance(demand, list):
        raise InstanceValidationError('demand', "must be an array of integers")
    if not isinstance(visits, list):
        raise InstanceValidationError('visits', "must be an array of visit objects")

    visit_docs = []
    for i, v in enumerate(visits):
        if not isinstance(v, dict):
            raise InstanceValidationError(f'visits[{i}]', "must be an object")
        visit_docs.append(_VisitDoc(
            _require(v, 'epoch', f'visits[{i}].'),
            _require(v, 'load', f'visits[{i}].'),
            _require(v, 'capacity', f'visits[{i}].'),
        ))

    checks = check_instance(capacity, initial_stock, demand, visit_docs)
    failed = [c for c in checks if c['status'] == 'failed']
    if failed:
        logger.debug("instance rejected: %s", [c['message'] for c in failed])
        raise InstanceValidationError(failed[0]['field'], failed[0]['message'], checks)

    return Instance(
        capacity=capacity,
        initial_stock=initial_stock,
        demand=demand,
        visits=[Visit(v.epoch, v.load, v.vehicle_capacity) for v in visit_docs],
    )


def read_instance(text: str) -> Instance:
    """Parse an instance document (JSON text)"""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceParseError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from e
    return document_to_instance(doc)


def load_instance(path: str) -> Instance:
    with open(path, 'r', encoding='utf-8') as f:
        try:
            text = f.read()
        except UnicodeDecodeError as e:
            raise InstanceParseError(f"{path} is not valid UTF-8 (byte offset {e.start}): {e.reason}") from e
    return read_instance(text)


def instance_to_document(instance: Instance) -> Dict[str, Any]:
    return {
        'capacity': instance.capacity,
        'initial_stock': instance.initial_stock,
        'demand': list(instance.demand),
        'visits': [
            {'epoch': v.epoch, 'load': v.load, 'capacity': v.vehicle_capacity}
            for v in instance.visits
        ],
    }


def write_instance(instance: Instance) -> str:
    """Canonical JSON text: fixed key order, 2-space indent, trailing newline"""
    return json.dumps(instance_to_document(instance), indent=2) + "\n"


def trajectory_frame(trajectory: BaseTrajectory,
                     interventions: Optional[Sequence[int]] = None) -> pd.DataFrame:
    """One row per epoch; `interventions` (per epoch) replaces the stored column"""
    column = list(interventions) if interventions is not None else list(trajectory.intervention)
    if len(column) != trajectory.m:
        raise InputError(f"expected {trajectory.m} per-epoch interventions, got {len(column)}")
    return pd.DataFrame({
        'epoch': range(1, trajectory.m + 1),
        'demand': list(trajectory.demand) or [0] * trajectory.m,
        'intervention': column,
        'virtual_stock': list(trajectory.virtual_stock),
        'surplus_loss': list(trajectory.surplus_loss),
        'stockout_loss': list(trajectory.stockout_loss),
        'stock': list(trajectory.stock),
    }, columns=TRAJECTORY_COLUMNS)


def write_trajectory(trajectory: BaseTrajectory, sink: Union[str, TextIO],
                     interventions: Optional[Sequence[int]] = None) -> None:
    """Write the trajectory as CSV (header + one row per epoch, LF endings)"""
    frame = trajectory_frame(trajectory, interventions)
    frame.to_csv(sink, index=False, lineterminator="\n")


def trajectory_csv(trajectory: BaseTrajectory) -> str:
    buffer = io.StringIO()
    write_trajectory(trajectory, buffer)
    return buffer.getvalue()


@dataclass
class GeneratorConfig:
    """
    Random instance family.

    initial_stock_policy is an integer (fixed stock) or "uniform" (uniform on
    [0, C]). Randomness comes from numpy's PCG64 seeded with `seed`; the draw
    order is initial stock (uniform policy only), demand, visit epochs,
    vehicle capacities, loads.
    """
    epochs: int
    visit_count: int
    station_capacity: int
    demand_range: Tuple[int, int]
    vehicle_capacity_range: Tuple[int, int] = (0, 10)
    seed: int = 0
    initial_stock_policy: Union[int, str] = "uniform"

    def validate(self) -> None:
        a, b = self.demand_range
        qa, qb = self.vehicle_capacity_range
        problems = []
        if self.epochs < 1:
            problems.append(('epochs', f"must be >= 1, got {self.epochs}"))
        if not (0 <= self.visit_count <= self.epochs):
            problems.append(('visit_count', f"must lie in [0, epochs={self.epochs}], got {self.visit_count}"))
        if self.station_capacity < 0:
            problems.append(('station_capacity', f"must be >= 0, got {self.station_capacity}"))
        if a > b:
            problems.append(('demand_range', f"lower bound {a} exceeds upper bound {b}"))
        if qa < 0 or qa > qb:
            problems.append(('vehicle_capacity_range', f"invalid range [{qa}, {qb}]"))
        if not (0 <= self.seed < 2 ** 64):
            problems.append(('seed', "must be a 64-bit unsigned integer"))
        policy = self.initial_stock_policy
        if policy != "uniform":
            if not isinstance(policy, int) or not (0 <= policy <= self.station_capacity):
                problems.append(('initial_stock_policy',
                                 f"must be 'uniform' or an integer in [0, {self.station_capacity}]"))
        if problems:
            field_name, message = problems[0]
            raise InstanceValidationError(field_name, message)

    @classmethod
    def from_settings(cls, generator: Dict[str, Any], **overrides: Any) -> "GeneratorConfig":
        values = {
            'epochs': generator.get('epochs', 24),
            'visit_count': generator.get('visits', 3),
            'station_capacity': generator.get('station_capacity', 10),
            'demand_range': tuple(generator.get('demand_range', [-5, 5])),
            'vehicle_capacity_range': tuple(generator.get('vehicle_capacity_range', [0, 10])),
            'seed': generator.get('seed', 0),
            'initial_stock_policy': generator.get('initial_stock_policy', 'uniform'),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def generate(config: GeneratorConfig) -> Instance:
    """Deterministic random instance for `config`"""
    config.validate()
    rng = np.random.Generator(np.random.PCG64(config.seed))
    C = config.station_capacity

    if config.initial_stock_policy == "uniform":
        initial_stock = int(rng.integers(0, C + 1))
    else:
        initial_stock = int(config.initial_stock_policy)

    a, b = config.demand_range
    demand = rng.integers(a, b + 1, size=config.epochs).tolist()

    epochs = np.sort(rng.choice(config.epochs, size=config.visit_count, replace=False)) + 1
    qa, qb = config.vehicle_capacity_range
    capacities = rng.integers(qa, qb + 1, size=config.visit_count)
    loads = [int(rng.integers(0, Q + 1)) for Q in capacities]

    visits = [Visit(int(e), load, int(Q)) for e, load, Q in zip(epochs, loads, capacities)]
    return Instance(capacity=C, initial_stock=initial_stock, demand=demand, visits=visits)
