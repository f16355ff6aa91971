"""
Nonnegative combinations of axiom instances that prove a target inequality.

A certificate stores each instance by provenance so a verifier can rebuild
it from the access structure alone. The three king-and-pawns derivations
bound h(k) + h(p2) + ... + h(p_{n-1}) from below by 2n-3, which forces some
participant to hold at least (2n-3)/(n-1) secret-sized units.
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Union

from pydantic import BaseModel, ConfigDict

from src.access import AccessStructure, make_gamma
from src.bound import inequalities as ineq
from src.bound.inequalities import LinearInequality, Provenance
from src.errors import InvalidParameter
from src.models import CertificateEntry, CertificateReport
from src.utils.bitsets import mask_of, members
from src.utils.rationals import format_rational

logger = logging.getLogger(__name__)


class Lemma(str, Enum):
    DOWN = "down"
    UP = "up"
    COMBINED = "combined"


class CertificateItem(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    inequality: LinearInequality
    multiplier: Fraction = Fraction(1)


class Certificate(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    structure: AccessStructure
    items: List[CertificateItem]
    target: LinearInequality

    def combined(self) -> LinearInequality:
        """The weighted sum of all items."""
        coeffs: Dict[int, Fraction] = {}
        constant = Fraction(0)
        for item in self.items:
            for mask, a in item.inequality.coeffs.items():
                coeffs[mask] = coeffs.get(mask, Fraction(0)) + item.multiplier * a
            constant += item.multiplier * item.inequality.constant
        return LinearInequality(
            coeffs={m: a for m, a in coeffs.items() if a},
            constant=constant,
            provenance=Provenance.TARGET,
        )


def _items(*inequalities: LinearInequality) -> List[CertificateItem]:
    return [CertificateItem(inequality=i) for i in inequalities]


def _down(a: AccessStructure, n: int) -> Certificate:
    king = 1
    pawns = [1 << i for i in range(1, n + 1)]
    all_pawns = mask_of(range(1, n + 1))
    everyone = king | all_pawns
    items: List[LinearInequality] = []
    for i in range(2, n + 1):
        p_i = pawns[i - 1]
        first_i = mask_of(range(1, i + 1))
        items.append(ineq.plus_submodular(a, all_pawns, everyone & ~p_i))
        items.append(ineq.submodular(a, first_i, all_pawns & ~p_i))
    for i in range(2, n):
        items.append(ineq.monotone(a, everyone & ~pawns[i - 1], everyone))
    items.append(ineq.monotone(a, all_pawns, everyone))
    goal = ineq.target([(king | mask_of(range(1, n)), 1), (pawns[0], -1)], n - 1)
    return Certificate(name=Lemma.DOWN.value, structure=a, items=_items(*items), target=goal)


def _up(a: AccessStructure, n: int) -> Certificate:
    king = 1
    pawns = [1 << i for i in range(1, n + 1)]
    items: List[LinearInequality] = []
    for i in range(2, n):
        p_i = pawns[i - 1]
        items.append(ineq.plus_submodular(a, king | pawns[0], king | p_i))
        items.append(ineq.submodular(a, king, p_i))
        items.append(
            ineq.submodular(a, king | mask_of(range(1, i)), king | pawns[0] | p_i)
        )
    terms = [(king | pawns[0], 1), (king | mask_of(range(1, n)), -1)]
    terms.extend((pawns[i - 1], 1) for i in range(2, n))
    goal = ineq.target(terms, n - 2)
    return Certificate(name=Lemma.UP.value, structure=a, items=_items(*items), target=goal)


def _combined(a: AccessStructure, n: int) -> Certificate:
    down, up = _down(a, n), _up(a, n)
    items = down.items + up.items + _items(ineq.submodular(a, 1 << 1, 1))
    terms = [(1, 1)] + [(1 << i, 1) for i in range(2, n)]
    goal = ineq.target(terms, 2 * n - 3)
    return Certificate(name=Lemma.COMBINED.value, structure=a, items=items, target=goal)


def lemma_certificate(lemma: Union[Lemma, str], n: int) -> Certificate:
    """Certificate for one of the king-and-pawns share-size derivations over Gamma_n."""
    try:
        which = Lemma(lemma)
    except ValueError:
        raise InvalidParameter(
            f"Unknown lemma {lemma!r}; expected one of {[m.value for m in Lemma]}"
        ) from None
    structure = make_gamma(n)
    build = {Lemma.DOWN: _down, Lemma.UP: _up, Lemma.COMBINED: _combined}[which]
    certificate = build(structure, n)
    logger.debug(
        "Built %s certificate for n=%d with %d items", which.value, n, len(certificate.items)
    )
    return certificate


def verify_certificate(certificate: Certificate) -> bool:
    """Rebuild every item from provenance and check the weighted sum yields the target."""
    structure = certificate.structure
    for item in certificate.items:
        if item.multiplier < 0:
            return False
        try:
            fresh = ineq.rebuild(structure, item.inequality)
        except InvalidParameter:
            return False
        if fresh.coeffs != item.inequality.coeffs or fresh.constant != item.inequality.constant:
            return False
    total = certificate.combined()
    target = certificate.target
    return total.coeffs == target.coeffs and total.constant >= target.constant


def submodular_chain(structure: AccessStructure, x: int, y: int) -> Certificate:
    """Derive submodularity of (X, Y) from elemental instances.

    With I = X & Y, X - Y = {a_1..a_r} and Y - X = {b_1..b_s}, the elemental
    inequality at base I + a_1..a_{i-1} + b_1..b_{j-1} for the pair (a_i, b_j)
    telescopes over all i, j to the target.
    """
    meet = x & y
    a, b = members(x & ~y), members(y & ~x)

    def g(i: int, j: int) -> int:
        return meet | mask_of(a[:i]) | mask_of(b[:j])

    items = []
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            base = g(i - 1, j - 1)
            items.append(
                ineq.submodular(structure, base | (1 << a[i - 1]), base | (1 << b[j - 1]))
            )
    return Certificate(
        name="submodular",
        structure=structure,
        items=_items(*items),
        target=ineq.submodular(structure, x, y),
    )


def derive_plus_submodular(structure: AccessStructure, x: int, y: int) -> Certificate:
    """Derive +-submodularity of (X, Y) from Shannon inequalities and secret equalities."""
    goal = ineq.plus_submodular(structure, x, y)
    s = ineq.secret_bit(structure)
    chain = submodular_chain(structure, x | s, y | s)
    extra = [
        ineq.secret_equality(structure, x, reverse=True),
        ineq.secret_equality(structure, y, reverse=True),
        ineq.secret_equality(structure, x & y),
        ineq.secret_equality(structure, x | y),
    ]
    return Certificate(
        name="plus_submodular",
        structure=structure,
        items=chain.items + _items(*extra),
        target=goal,
    )


def implied_kappa_bound(certificate: Certificate) -> Fraction:
    """Lower bound on max h({p}) from a target of the form sum over Q of h({p}) >= c."""
    coeffs = certificate.target.coeffs
    if not coeffs or any(a != 1 for a in coeffs.values()):
        raise InvalidParameter("Target must be a plain sum of singleton entropies")
    if any(len(members(m)) != 1 or m >= 1 << certificate.structure.size for m in coeffs):
        raise InvalidParameter("Target must only involve singleton participant sets")
    return certificate.target.constant / len(coeffs)


def to_report(certificate: Certificate, n: int) -> CertificateReport:
    structure = certificate.structure
    entries = [
        CertificateEntry(
            provenance=item.inequality.provenance.value,
            X=ineq.subset_members(structure, item.inequality.x),
            Y=ineq.subset_members(structure, item.inequality.y)
            if item.inequality.y is not None
            else None,
            multiplier=format_rational(item.multiplier),
        )
        for item in certificate.items
    ]
    return CertificateReport(
        lemma=certificate.name,
        n=n,
        verified=verify_certificate(certificate),
        target=ineq.format_inequality(structure, certificate.target),
        constant=format_rational(certificate.target.constant),
        items=entries,
    )
