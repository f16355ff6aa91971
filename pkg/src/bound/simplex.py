"""
Exact simplex over Fractions with the least-index (Bland) pivot rule.

``SimplexTableau`` solves ``min c.x`` subject to ``rows[i].x >= b[i]`` and
``x >= 0`` for a nonnegative cost vector ``c``. It pivots on the dual
``max b.y`` subject to ``A^T y <= c``, ``y >= 0``, whose slack basis is
feasible from the start. The primal optimum is read off the reduced costs
of the dual slack columns.
"""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

logger = logging.getLogger(__name__)

Row = Dict[int, Fraction]

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
PIVOT_LIMIT = "pivot_limit"


class SimplexTableau:
    def __init__(
        self,
        cost: Sequence[Fraction],
        rows: Sequence[Dict[int, Fraction]],
        bounds: Sequence[Fraction],
    ) -> None:
        if any(c < 0 for c in cost):
            raise ValueError("Cost vector must be nonnegative")
        if len(rows) != len(bounds):
            raise ValueError("One bound per constraint row")

        self.n_primal = len(cost)
        self.n_constraints = len(rows)
        # Tableau row j is dual constraint j (primal variable j).
        self.rows: List[Row] = [{} for _ in range(self.n_primal)]
        for i, row in enumerate(rows):
            for j, value in row.items():
                if value:
                    self.rows[j][i] = Fraction(value)
        for j in range(self.n_primal):
            self.rows[j][self.n_constraints + j] = Fraction(1)
        self.rhs: List[Fraction] = [Fraction(c) for c in cost]
        self.basis: List[int] = [self.n_constraints + j for j in range(self.n_primal)]
        self.reduced: Row = {i: -Fraction(b) for i, b in enumerate(bounds) if b}
        self.value = Fraction(0)
        self.pivots = 0

    def _entering(self) -> Optional[int]:
        candidates = [col for col, v in self.reduced.items() if v < 0]
        return min(candidates) if candidates else None

    def _leaving(self, col: int) -> Optional[int]:
        best = None
        best_key = None
        for r, row in enumerate(self.rows):
            a = row.get(col)
            if a is None or a <= 0:
                continue
            key = (self.rhs[r] / a, self.basis[r])
            if best_key is None or key < best_key:
                best, best_key = r, key
        return best

    @staticmethod
    def _eliminate(target: Row, factor: Fraction, source: Row) -> None:
        for col, v in source.items():
            updated = target.get(col, 0) - factor * v
            if updated:
                target[col] = updated
            else:
                target.pop(col, None)

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        a = row[col]
        if a != 1:
            row = {c: v / a for c, v in row.items()}
            self.rows[r] = row
            self.rhs[r] /= a
        for k, other in enumerate(self.rows):
            if k == r:
                continue
            factor = other.get(col)
            if factor:
                self._eliminate(other, factor, row)
                self.rhs[k] -= factor * self.rhs[r]
        factor = self.reduced.get(col)
        if factor:
            self._eliminate(self.reduced, factor, row)
            self.value -= factor * self.rhs[r]
        self.basis[r] = col
        self.pivots += 1

    def solve(self, max_pivots: Optional[int] = None) -> str:
        while True:
            col = self._entering()
            if col is None:
                logger.debug("Simplex optimal after %d pivots", self.pivots)
                return OPTIMAL
            r = self._leaving(col)
            if r is None:
                return UNBOUNDED
            if max_pivots is not None and self.pivots >= max_pivots:
                return PIVOT_LIMIT
            self.pivot(r, col)

    def primal(self) -> List[Fraction]:
        """Primal solution: reduced costs of the dual slack columns."""
        return [self.reduced.get(self.n_constraints + j, Fraction(0)) for j in range(self.n_primal)]

    def multipliers(self) -> List[Fraction]:
        """Dual values per constraint row."""
        y = [Fraction(0)] * self.n_constraints
        for r, col in enumerate(self.basis):
            if col < self.n_constraints:
                y[col] = self.rhs[r]
        return y
