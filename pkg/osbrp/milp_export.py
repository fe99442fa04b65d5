"""
MILP Export
Builds the integer program of an instance and writes it in LP file format
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .exceptions import ContractError
from .model import Instance

logger = logging.getLogger(__name__)

TERMS_PER_LINE = 8

LP_HEADER = """\\ One-station repositioning model
\\ sh_h = s_(h-1) + d_h (+ x_i when visit i is at epoch h)
\\ s_h = sh_h - lp_h + lm_h with 0 <= s_h <= C and lp_h, lm_h >= 0
\\ Surplus and stockout losses are written without max(): any slack in
\\ lp_h / lm_h raises the objective, so at the optimum lp_h = max(0, sh_h - C)
\\ and lm_h = max(0, -sh_h).
"""

Bound = Tuple[Optional[int], Optional[int]]


@dataclass
class LpRow:
    name: str
    terms: List[Tuple[int, str]]
    sense: str
    rhs: int


@dataclass
class LpModel:
    """
    Linear model of one instance.

    Variables are ordered x_1..x_w then (sh_h, lp_h, lm_h, s_h) per epoch; a
    bound of None is infinite. `generals` is empty for the relaxation.
    """
    variables: List[str]
    objective: List[str]
    rows: List[LpRow]
    bounds: Dict[str, Bound]
    generals: List[str] = field(default_factory=list)
    relax: bool = False

    @property
    def variable_count(self) -> int:
        return len(self.variables)

    @property
    def constraint_count(self) -> int:
        return len(self.rows)

    def to_lp_text(self) -> str:
        lines = [LP_HEADER.rstrip("\n"), "Minimize"]
        lines.extend(_wrap("obj:", [(1, v) for v in self.objective]))
        lines.append("Subject To")
        for row in self.rows:
            body = _wrap(f"{row.name}:", row.terms)
            body[-1] += f" {row.sense} {row.rhs}"
            lines.extend(body)
        lines.append("Bounds")
        for name in self.variables:
            lines.append(" " + _bound_line(name, self.bounds[name]))
        if self.generals:
            lines.append("Generals")
            for start in range(0, len(self.generals), TERMS_PER_LINE):
                lines.append(" " + " ".join(self.generals[start:start + TERMS_PER_LINE]))
        lines.append("End")
        return "\n".join(lines) + "\n"


def _format_terms(terms: List[Tuple[int, str]], first: bool) -> str:
    parts = []
    for coef, name in terms:
        sign = "-" if coef < 0 else "+"
        magnitude = "" if abs(coef) == 1 else f"{abs(coef)} "
        if first and not parts:
            parts.append(f"{'-' if coef < 0 else ''}{magnitude}{name}")
        else:
            parts.append(f"{sign} {magnitude}{name}")
    return " ".join(parts)


def _wrap(label: str, terms: List[Tuple[int, str]]) -> List[str]:
    if not terms:
        return [f" {label} 0"]
    lines = []
    for start in range(0, len(terms), TERMS_PER_LINE):
        chunk = _format_terms(terms[start:start + TERMS_PER_LINE], first=(start == 0))
        lines.append(f" {label} {chunk}" if start == 0 else f"   {chunk}")
    return lines


def _bound_line(name: str, bound: Bound) -> str:
    lo, hi = bound
    if lo is None and hi is None:
        return f"{name} free"
    if hi is None:
        return f"{name} >= {lo}"
    if lo is None:
        return f"-inf <= {name} <= {hi}"
    return f"{lo} <= {name} <= {hi}"


def build_lp_model(instance: Instance, relax: bool = False) -> LpModel:
    """
    Variables w + 4m, rows 3m: per epoch a balance row bal_h, a loss-linking
    row lnk_h and a capacity row cap_h.
    """
    visit_at = {v.epoch: i for i, v in enumerate(instance.visits, start=1)}
    x_names = [f"x_{i}" for i in range(1, instance.w + 1)]
    variables = list(x_names)
    bounds: Dict[str, Bound] = {
        f"x_{i}": (v.lower, v.upper) for i, v in enumerate(instance.visits, start=1)
    }
    objective = []
    rows = []
    for h, d in enumerate(instance.demand, start=1):
        sh, lp, lm, s = f"sh_{h}", f"lp_{h}", f"lm_{h}", f"s_{h}"
        variables.extend([sh, lp, lm, s])
        bounds[sh] = (None, None)
        bounds[lp] = (0, None)
        bounds[lm] = (0, None)
        bounds[s] = (0, None)
        objective.extend([lp, lm])

        terms = [(1, sh)]
        rhs = d
        if h == 1:
            rhs += instance.initial_stock
        else:
            terms.append((-1, f"s_{h - 1}"))
        if h in visit_at:
            terms.append((-1, f"x_{visit_at[h]}"))
        rows.append(LpRow(f"bal_{h}", terms, "=", rhs))
        rows.append(LpRow(f"lnk_{h}", [(1, s), (-1, sh), (1, lp), (-1, lm)], "=", 0))
        rows.append(LpRow(f"cap_{h}", [(1, s)], "<=", instance.capacity))

    model = LpModel(
        variables=variables,
        objective=objective,
        rows=rows,
        bounds=bounds,
        generals=[] if relax else x_names,
        relax=relax,
    )
    logger.debug("LP model: %d variables, %d rows", model.variable_count, model.constraint_count)
    return model


def export_lp(instance: Instance, relax: bool = False) -> str:
    """LP file text of `instance`; relax=True drops the Generals section"""
    return build_lp_model(instance, relax).to_lp_text()


@dataclass
class LpSolution:
    status: int
    message: str
    objective: Optional[float]
    values: Dict[str, float] = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.status == 0


def _matrices(model: LpModel):
    index = {name: j for j, name in enumerate(model.variables)}
    n = len(model.variables)
    c = np.zeros(n)
    for name in model.objective:
        c[index[name]] += 1.0
    eq_rows = [r for r in model.rows if r.sense == "="]
    ub_rows = [r for r in model.rows if r.sense == "<="]

    def dense(rows: List[LpRow]):
        A = np.zeros((len(rows), n))
        b = np.zeros(len(rows))
        for k, row in enumerate(rows):
            for coef, name in row.terms:
                A[k, index[name]] += coef
            b[k] = row.rhs
        return A, b

    A_eq, b_eq = dense(eq_rows)
    A_ub, b_ub = dense(ub_rows)
    bounds = [model.bounds[name] for name in model.variables]
    return c, A_eq, b_eq, A_ub, b_ub, bounds


def solve_lp_model(model: LpModel) -> LpSolution:
    """
    Solve the model with scipy's HiGHS bindings.

    The relaxation goes through the dual simplex so the answer is a basic
    (vertex) solution; the integral model goes through `scipy.optimize.milp`.
    """
    from scipy.optimize import Bounds, LinearConstraint, linprog, milp

    if any(r.sense not in ("=", "<=") for r in model.rows):
        raise ContractError("only '=' and '<=' rows are supported")
    c, A_eq, b_eq, A_ub, b_ub, bounds = _matrices(model)

    if model.relax:
        result = linprog(c, A_ub=A_ub if len(b_ub) else None, b_ub=b_ub if len(b_ub) else None,
                         A_eq=A_eq if len(b_eq) else None, b_eq=b_eq if len(b_eq) else None,
                         bounds=bounds, method="highs-ds")
    else:
        lower = np.array([-np.inf if lo is None else lo for lo, _ in bounds], dtype=float)
        upper = np.array([np.inf if hi is None else hi for _, hi in bounds], dtype=float)
        general = set(model.generals)
        integrality = np.array([1 if name in general else 0 for name in model.variables])
        constraints = []
        if len(b_eq):
            constraints.append(LinearConstraint(A_eq, b_eq, b_eq))
        if len(b_ub):
            constraints.append(LinearConstraint(A_ub, -np.inf, b_ub))
        result = milp(c, constraints=constraints, integrality=integrality, bounds=Bounds(lower, upper))

    if result.status != 0 or result.x is None:
        logger.warning("LP solve failed: %s", result.message)
        return LpSolution(status=result.status, message=str(result.message), objective=None)
    values = {name: float(v) for name, v in zip(model.variables, result.x)}
    return LpSolution(status=0, message=str(result.message), objective=float(result.fun), values=values)
