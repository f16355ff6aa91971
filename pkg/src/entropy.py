"""
Exhaustive oracle over a scheme's joint distribution.

Every (secret, transcript) pair is dealt exactly once, so the resulting table
is the exact joint law of (shares, secret) for a uniform secret and uniform
dealer randomness. Perfectness and uniformity are decided by integer counts;
Shannon entropies are derived from the same counts as a cross-check.
"""

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.access import AccessStructure, maximal_unqualified_masks
from src.config import get_budget, settings
from src.errors import EnumerationTooLarge, InvalidParameter
from src.models import PerfectnessReport, Violation
from src.schemes import (
    SchemeSpec,
    secret_length,
    share_lengths,
    share_vectors,
    transcript_length,
)
from src.utils.bitsets import label, members, submasks

logger = logging.getLogger(__name__)

SECRET = "S"
_KEY_LIMIT = 2**62

Rate = Union[Fraction, float]


def _encode(vector: Sequence[int], q: int) -> int:
    code = 0
    for v in vector:
        code = code * q + v
    return code


def _decode(code: int, length: int, q: int) -> List[int]:
    out = []
    for _ in range(length):
        code, v = divmod(code, q)
        out.append(v)
    return out[::-1]


def _group(rows: np.ndarray, radices: Sequence[int]) -> Tuple[np.ndarray, int, np.ndarray]:
    """Group rows by their values: (group index per row, group count, first row per group)."""
    if rows.shape[1] == 0:
        return np.zeros(len(rows), dtype=np.int64), 1, np.zeros(1, dtype=np.int64)
    if math.prod(radices) < _KEY_LIMIT:
        keys = np.zeros(len(rows), dtype=np.int64)
        for j, radix in enumerate(radices):
            keys = keys * radix + rows[:, j]
        _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    else:
        _, first, inverse = np.unique(rows, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    return inverse, len(first), first


class CountTable:
    """Distinct outcomes of (shares, secret) with their multiplicities.

    Column ``i`` holds participant ``i``'s share and the last column the
    secret, each encoded as a base-q integer (first symbol most significant).
    Column indices coincide with the bit positions used for subsets of P+{S}.
    """

    def __init__(
        self,
        participants: Sequence[str],
        share_lengths: Sequence[int],
        secret_length: int,
        q: int,
        outcomes: np.ndarray,
        counts: np.ndarray,
        scheme: Optional[SchemeSpec] = None,
    ):
        if len(participants) != len(share_lengths):
            raise InvalidParameter("Every participant needs a share length")
        self.participants = tuple(participants)
        self.share_lengths = tuple(share_lengths)
        self.secret_length = secret_length
        self.q = q
        self.outcomes = outcomes
        self.counts = counts
        self.scheme = scheme

    @classmethod
    def from_rows(
        cls,
        participants: Sequence[str],
        share_lengths: Sequence[int],
        secret_length: int,
        q: int,
        rows: np.ndarray,
        weights: Optional[np.ndarray] = None,
        scheme: Optional[SchemeSpec] = None,
    ) -> "CountTable":
        radices = [q**m for m in share_lengths] + [q**secret_length]
        if weights is None:
            weights = np.ones(len(rows), dtype=np.int64)
        inverse, size, first = _group(rows, radices)
        counts = np.rint(np.bincount(inverse, weights=weights, minlength=size))
        return cls(
            participants,
            share_lengths,
            secret_length,
            q,
            rows[first],
            counts.astype(np.int64),
            scheme,
        )

    @property
    def secret_column(self) -> int:
        return len(self.participants)

    @property
    def radices(self) -> List[int]:
        return [self.q**m for m in self.share_lengths] + [self.q**self.secret_length]

    @property
    def secret_domain(self) -> int:
        return self.q**self.secret_length

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def mask(self, subset: Union[int, Iterable[str]]) -> int:
        """Bitmask over P+{S}; the secret is named ``S``."""
        if isinstance(subset, int):
            return subset
        index = {name: i for i, name in enumerate(self.participants)}
        index[SECRET] = self.secret_column
        mask = 0
        for name in subset:
            if name not in index:
                raise InvalidParameter(f"Unknown element {name!r}")
            mask |= 1 << index[name]
        return mask

    def group(self, mask: int) -> Tuple[np.ndarray, int, np.ndarray]:
        cols = members(mask)
        return _group(self.outcomes[:, cols], [self.radices[c] for c in cols])

    def marginal(self, mask: int) -> np.ndarray:
        inverse, size, _ = self.group(mask)
        return np.rint(np.bincount(inverse, weights=self.counts, minlength=size)).astype(
            np.int64
        )

    def assignment(self, mask: int, row: int) -> Dict[str, List[int]]:
        names = list(self.participants) + [SECRET]
        lengths = list(self.share_lengths) + [self.secret_length]
        return {
            names[c]: _decode(int(self.outcomes[row, c]), lengths[c], self.q)
            for c in members(mask)
        }

    def merge(self, other: "CountTable") -> "CountTable":
        if (self.participants, self.share_lengths, self.secret_length, self.q) != (
            other.participants,
            other.share_lengths,
            other.secret_length,
            other.q,
        ):
            raise InvalidParameter("Cannot merge tables over different outcome spaces")
        return CountTable.from_rows(
            self.participants,
            self.share_lengths,
            self.secret_length,
            self.q,
            np.concatenate([self.outcomes, other.outcomes]),
            np.concatenate([self.counts, other.counts]),
            scheme=self.scheme or other.scheme,
        )


# Enumeration

def enumeration_size(spec: SchemeSpec) -> int:
    return spec.q.q ** (secret_length(spec) + transcript_length(spec))


def _deal_block(spec: SchemeSpec, secrets: Sequence[Tuple[int, ...]]) -> np.ndarray:
    q = spec.q.q
    blocks = []
    for secret in secrets:
        code = _encode(secret, q)
        rows = []
        for rand in itertools.product(range(q), repeat=transcript_length(spec)):
            row = [_encode(v, q) for v in share_vectors(spec, secret, rand)]
            row.append(code)
            rows.append(row)
        blocks.append(np.array(rows, dtype=np.int64))
    if not blocks:
        return np.empty((0, spec.n + 2), dtype=np.int64)
    return np.concatenate(blocks)


def enumerate_joint(
    spec: SchemeSpec, budget: Optional[int] = None, workers: Optional[int] = None
) -> CountTable:
    """Deal every (secret, transcript) pair once and count the outcomes."""
    budget = get_budget(budget)
    size = enumeration_size(spec)
    if size > budget:
        raise EnumerationTooLarge(size, budget)
    workers = max(1, workers or settings.workers)
    lengths = share_lengths(spec)
    names = list(lengths)
    secrets = list(itertools.product(range(spec.q.q), repeat=secret_length(spec)))
    logger.info(
        "Enumerating %s n=%d q=%d: %d outcomes on %d worker(s)",
        spec.kind.value,
        spec.n,
        spec.q.q,
        size,
        workers,
    )

    def build(rows: np.ndarray) -> CountTable:
        return CountTable.from_rows(
            names,
            [lengths[x] for x in names],
            secret_length(spec),
            spec.q.q,
            rows,
            scheme=spec,
        )

    if workers == 1:
        return build(_deal_block(spec, secrets))
    chunks = [secrets[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        partials = [build(rows) for rows in pool.map(_deal_block, [spec] * workers, chunks)]
    table = partials[0]
    for partial in partials[1:]:
        table = table.merge(partial)
    return table


# Exact checks

def _check_structure(table: CountTable, structure: AccessStructure) -> None:
    if tuple(structure.participants) != table.participants:
        raise InvalidParameter(
            "Table and access structure disagree on participants",
            {"table": list(table.participants), "structure": list(structure.participants)},
        )


def _secrets_per_assignment(
    table: CountTable, mask: int
) -> Tuple[np.ndarray, int, np.ndarray, np.ndarray]:
    """Per joint (X, S) group: its X group and its count."""
    x_inverse, x_size, _ = table.group(mask)
    xs_inverse, xs_size, xs_first = table.group(mask | (1 << table.secret_column))
    joint = np.rint(
        np.bincount(xs_inverse, weights=table.counts, minlength=xs_size)
    ).astype(np.int64)
    return x_inverse, x_size, x_inverse[xs_first], joint


def check_perfect(
    table: CountTable, structure: AccessStructure, max_reported: Optional[int] = None
) -> PerfectnessReport:
    """Decide perfectness by counting over the structure's boundary sets.

    A minimal qualified coalition must see every realized share assignment
    with exactly one secret. A maximal unqualified coalition must see every
    realized assignment equally often with every secret.
    """
    _check_structure(table, structure)
    limit = settings.max_reported_violations if max_reported is None else max_reported
    violations: List[Violation] = []
    count = 0

    def record(kind: str, mask: int, inverse: np.ndarray, group: int, detail: str) -> None:
        nonlocal count
        count += 1
        if len(violations) < limit:
            row = int(np.flatnonzero(inverse == group)[0])
            violations.append(
                Violation(
                    kind=kind,
                    subset=structure.names(mask),
                    assignment=table.assignment(mask, row),
                    detail=detail,
                )
            )

    for mask in structure.minimal_masks:
        x_inverse, x_size, x_of_joint, _ = _secrets_per_assignment(table, mask)
        distinct = np.bincount(x_of_joint, minlength=x_size)
        for g in np.flatnonzero(distinct > 1):
            record(
                "qualified", mask, x_inverse, g, f"consistent with {int(distinct[g])} secrets"
            )

    unqualified = maximal_unqualified_masks(structure)
    domain = table.secret_domain
    for mask in unqualified:
        x_inverse, x_size, x_of_joint, joint = _secrets_per_assignment(table, mask)
        distinct = np.bincount(x_of_joint, minlength=x_size)
        low = np.full(x_size, np.iinfo(np.int64).max, dtype=np.int64)
        high = np.zeros(x_size, dtype=np.int64)
        np.minimum.at(low, x_of_joint, joint)
        np.maximum.at(high, x_of_joint, joint)
        bad = (distinct != domain) | (low != high)
        for g in np.flatnonzero(bad):
            record(
                "unqualified",
                mask,
                x_inverse,
                g,
                f"seen with {int(distinct[g])} of {domain} secrets, "
                f"counts {int(low[g])}..{int(high[g])}",
            )

    logger.info(
        "Perfectness: %d minimal qualified, %d maximal unqualified, %d violation(s)",
        len(structure.minimal_masks),
        len(unqualified),
        count,
    )
    return PerfectnessReport(
        scheme=table.scheme.kind.value if table.scheme else None,
        perfect=count == 0,
        violations=violations,
        violation_count=count,
        checked_qualified=len(structure.minimal_masks),
        checked_unqualified=len(unqualified),
    )


def _is_uniform(table: CountTable, column: int) -> bool:
    marginal = table.marginal(1 << column)
    return len(marginal) == table.radices[column] and int(marginal.min()) == int(
        marginal.max()
    )


def check_uniform_shares(table: CountTable) -> Dict[str, bool]:
    """Per participant: every possible share vector occurs equally often."""
    return {name: _is_uniform(table, i) for i, name in enumerate(table.participants)}


# Entropies

def entropy(table: CountTable, mask: int) -> float:
    """Shannon entropy in bits of the marginal on ``mask``."""
    p = table.marginal(mask) / table.total
    return float(-(p * np.log2(p)).sum())


def conditional_entropy(table: CountTable, target: int, given: int) -> float:
    return entropy(table, target | given) - entropy(table, given)


class EntropyReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    participants: Tuple[str, ...]
    entropies: Dict[int, float]
    normalized: Dict[int, float]
    rates: Dict[str, Rate]
    min_rate: Rate
    uniform: Dict[str, bool]

    @property
    def secret_bit(self) -> int:
        return 1 << len(self.participants)

    @property
    def ground(self) -> List[str]:
        return list(self.participants) + [SECRET]

    def H(self, mask: int) -> float:
        return self.entropies[mask]

    def h(self, mask: int) -> float:
        return self.normalized[mask]

    def label(self, mask: int) -> str:
        return label(mask, self.ground) or "{}"


def entropy_report(
    table: CountTable, subsets: Optional[Iterable[Union[int, Iterable[str]]]] = None
) -> EntropyReport:
    """Entropies, normalized entropies and per-participant rates.

    Rates are exact ``secret symbols / share symbols`` when both the secret
    and the participant's share are uniform, floating otherwise.
    """
    m = len(table.participants)
    secret_bit = 1 << m
    if subsets is None:
        masks = set(range(1 << (m + 1)))
    else:
        masks = {table.mask(s) for s in subsets}
    masks |= {0, secret_bit} | {1 << i for i in range(m)}
    entropies = {mask: (entropy(table, mask) if mask else 0.0) for mask in sorted(masks)}
    h_secret = entropies[secret_bit]
    normalized = {mask: value / h_secret for mask, value in entropies.items()}

    uniform = check_uniform_shares(table)
    secret_uniform = _is_uniform(table, m)
    rates: Dict[str, Rate] = {}
    for i, name in enumerate(table.participants):
        if uniform[name] and secret_uniform:
            rates[name] = Fraction(table.secret_length, table.share_lengths[i])
        elif entropies[1 << i] == 0:
            rates[name] = math.inf
        else:
            rates[name] = h_secret / entropies[1 << i]
    return EntropyReport(
        participants=table.participants,
        entropies=entropies,
        normalized=normalized,
        rates=rates,
        min_rate=min(rates.values()),
        uniform=uniform,
    )


def _require_full(report: EntropyReport) -> int:
    size = 1 << (len(report.participants) + 1)
    if len(report.entropies) < size:
        raise InvalidParameter("Axiom checks need entropies of every subset of P+{S}")
    return size


def check_axioms(
    report: EntropyReport, structure: AccessStructure, tol: Optional[float] = None
) -> List[str]:
    """Monotonicity, submodularity and +-submodularity on the report's entropies."""
    tol = settings.tolerance if tol is None else tol
    size = _require_full(report)
    H = report.entropies
    h_secret = H[report.secret_bit]
    found = []
    for y in range(size):
        for x in submasks(y):
            if H[x] > H[y] + tol:
                found.append(f"monotonicity: H({report.label(x)}) > H({report.label(y)})")
    for x in range(size):
        for y in range(x + 1, size):
            if H[x] + H[y] + tol < H[x & y] + H[x | y]:
                found.append(
                    f"submodularity: {report.label(x)} / {report.label(y)}"
                )
    participants = structure.full_mask
    for x in range(participants + 1):
        for y in range(x + 1, participants + 1):
            if not (structure.qualifies(x) and structure.qualifies(y)):
                continue
            if structure.qualifies(x & y):
                continue
            if H[x] + H[y] + tol < H[x & y] + H[x | y] + h_secret:
                found.append(
                    f"+-submodularity: {report.label(x)} / {report.label(y)}"
                )
    return found


def check_secret_conditioning(
    report: EntropyReport, structure: AccessStructure, tol: Optional[float] = None
) -> List[str]:
    """H(S|X) is 0 on qualified X and H(S) on unqualified X."""
    tol = settings.tolerance if tol is None else tol
    _require_full(report)
    H = report.entropies
    s = report.secret_bit
    found = []
    for x in range(structure.full_mask + 1):
        residual = H[x | s] - H[x]
        expected = 0.0 if structure.qualifies(x) else H[s]
        if abs(residual - expected) > tol:
            found.append(
                f"H(S|{report.label(x)}) = {residual:.12f}, expected {expected:.12f}"
            )
    return found

