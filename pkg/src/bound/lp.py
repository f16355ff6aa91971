"""
The optimal-share-size LP over the Shannon cone plus access-structure axioms.

Variables are h(X) for every subset of P+{S} and an objective variable t
bounded below by every participant's h({p}). Minimizing t gives the
largest lower bound on the max normalized share size that Shannon
inequalities and the access axioms can prove for the structure.
"""

import logging
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict

from src.access import AccessStructure
from src.bound import inequalities as ineq
from src.bound.inequalities import T_VAR, LinearInequality, Provenance
from src.bound.simplex import OPTIMAL, UNBOUNDED, SimplexTableau
from src.config import settings
from src.errors import LpStatusError, ProblemTooLarge
from src.utils.bitsets import members

logger = logging.getLogger(__name__)

Number = Union[Fraction, float, int]
Expression = Tuple[Dict[int, Fraction], Fraction]


class LpProblem(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    structure: AccessStructure
    constraints: List[LinearInequality]

    @property
    def ground_size(self) -> int:
        return self.structure.size + 1

    @property
    def num_variables(self) -> int:
        return (1 << self.ground_size) + 1

    def count(self, kind: Provenance) -> int:
        return sum(1 for c in self.constraints if c.provenance == kind)


class LpSolution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Fraction
    point: Dict[int, Fraction]
    pivots: int


def build_lp(structure: AccessStructure, max_elements: Optional[int] = None) -> LpProblem:
    """Normalizations, secret equalities, elemental Shannon inequalities, objective bounds."""
    cap = settings.lp_max_elements if max_elements is None else max_elements
    ground = structure.size + 1
    if ground > cap:
        raise ProblemTooLarge(
            f"LP over {ground} elements exceeds the limit of {cap}",
            {"elements": ground, "limit": cap},
        )
    full = (1 << ground) - 1
    constraints = [
        ineq.normalization(structure, secret=False),
        ineq.normalization(structure, secret=True),
    ]
    constraints.extend(ineq.secret_equality(structure, x) for x in range(1 << structure.size))
    for y in range(full + 1):
        rest = members(full & ~y)
        constraints.extend(ineq.monotone(structure, y, y | (1 << a)) for a in rest)
        constraints.extend(
            ineq.submodular(structure, y | (1 << a), y | (1 << b))
            for a, b in combinations(rest, 2)
        )
    constraints.extend(ineq.objective_bound(structure, p) for p in range(structure.size))
    logger.debug(
        "Built LP for %d participants: %d constraints", structure.size, len(constraints)
    )
    return LpProblem(structure=structure, constraints=constraints)


def _expand(
    coeffs: Mapping[int, Fraction], offset: Fraction, subst: Mapping[int, Expression]
) -> Expression:
    """Rewrite the affine form ``coeffs.h + offset`` in the surviving variables."""
    out: Dict[int, Fraction] = {}
    for var, a in coeffs.items():
        if var in subst:
            expr, shift = subst[var]
            offset += a * shift
            for w, e in expr.items():
                out[w] = out.get(w, Fraction(0)) + a * e
        else:
            out[var] = out.get(var, Fraction(0)) + a
    return {v: a for v, a in out.items() if a}, offset


def _eliminate_equalities(problem: LpProblem) -> Dict[int, Expression]:
    """Solve each equality for its highest-mask variable."""
    subst: Dict[int, Expression] = {}
    for c in problem.constraints:
        if not c.equality:
            continue
        coeffs, offset = _expand(c.coeffs, -c.constant, subst)
        if not coeffs:
            if offset != 0:
                raise LpStatusError("infeasible", "Equality constraints are inconsistent")
            continue
        pivot = max(coeffs)
        a = coeffs.pop(pivot)
        expr = ({v: -e / a for v, e in coeffs.items()}, -offset / a)
        for var, (other, shift) in list(subst.items()):
            if pivot in other:
                subst[var] = _expand(other, shift, {pivot: expr})
        subst[pivot] = expr
    return subst


def _reduce(problem: LpProblem, subst: Mapping[int, Expression]) -> List[Expression]:
    """Substitute equalities into the inequalities, keeping the strongest duplicate."""
    strongest: Dict[Tuple[Tuple[int, Fraction], ...], Fraction] = {}
    for c in problem.constraints:
        if c.equality:
            continue
        coeffs, offset = _expand(c.coeffs, -c.constant, subst)
        constant = -offset
        if not coeffs:
            if constant > 0:
                raise LpStatusError("infeasible", "A constraint reduces to 0 >= positive")
            continue
        key = tuple(sorted(coeffs.items()))
        if key not in strongest or constant > strongest[key]:
            strongest[key] = constant
    return [(dict(key), constant) for key, constant in strongest.items()]


def _evaluate(coeffs: Mapping[int, Number], point: Mapping[int, Number]) -> Number:
    return sum(a * point.get(v, 0) for v, a in coeffs.items())


def check_point(
    problem: LpProblem, point: Mapping[int, Number], tol: Number = 0
) -> List[LinearInequality]:
    """Constraints the point violates by more than ``tol``."""
    violated = []
    for c in problem.constraints:
        lhs = _evaluate(c.coeffs, point)
        if c.equality:
            if abs(lhs - c.constant) > tol:
                violated.append(c)
        elif lhs < c.constant - tol:
            violated.append(c)
    return violated


def solve_lp(problem: LpProblem, max_pivots: Optional[int] = None) -> LpSolution:
    subst = _eliminate_equalities(problem)
    reduced = _reduce(problem, subst)

    variables = sorted({v for coeffs, _ in reduced for v in coeffs} | {T_VAR})
    column = {v: j for j, v in enumerate(variables)}
    cost = [Fraction(1 if v == T_VAR else 0) for v in variables]
    rows = [{column[v]: a for v, a in coeffs.items()} for coeffs, _ in reduced]
    bounds = [constant for _, constant in reduced]
    logger.info(
        "Solving LP: %d variables, %d constraints after presolve", len(variables), len(rows)
    )

    tableau = SimplexTableau(cost, rows, bounds)
    status = tableau.solve(max_pivots)
    if status != OPTIMAL:
        # An unbounded dual means the primal has no feasible point.
        raise LpStatusError("infeasible" if status == UNBOUNDED else status)

    x = tableau.primal()
    point: Dict[int, Fraction] = {v: x[column[v]] for v in variables}
    for var, (expr, offset) in subst.items():
        point[var] = offset + sum(e * point.get(w, Fraction(0)) for w, e in expr.items())
    for mask in range(1 << problem.ground_size):
        point.setdefault(mask, Fraction(0))

    if check_point(problem, point) or point[T_VAR] != tableau.value:
        raise LpStatusError("inexact", "Recovered point does not satisfy the LP exactly")
    logger.info("LP optimum %s after %d pivots", tableau.value, tableau.pivots)
    return LpSolution(value=tableau.value, point=point, pivots=tableau.pivots)


def kappa(structure: AccessStructure) -> Fraction:
    return solve_lp(build_lp(structure)).value


def rate_upper_bound(structure: AccessStructure) -> Fraction:
    return 1 / kappa(structure)
