"""
Linear inequalities over the normalized entropy h of subsets of P+{S}.

Subsets are bitmasks whose low bits follow the access structure's
participant order; the secret is the highest bit. ``h(empty) = 0`` is built
in, so the empty set never carries a coefficient in an axiom instance.
"""

from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict

from src.access import AccessStructure, is_plus_submodular_pair
from src.errors import InvalidParameter
from src.utils.bitsets import is_subset, members

T_VAR = -1


class Provenance(str, Enum):
    MONOTONE = "monotone"
    SUBMODULAR = "submodular"
    PLUS_SUBMODULAR = "plus_submodular"
    SECRET_EQUALITY = "secret_equality"
    NORMALIZATION = "normalization"
    OBJECTIVE_BOUND = "objective_bound"
    TARGET = "target"


class LinearInequality(BaseModel):
    """``sum(coeffs[X] * h(X)) >= constant`` (``==`` when ``equality``)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: Dict[int, Fraction]
    constant: Fraction
    provenance: Provenance
    x: Optional[int] = None
    y: Optional[int] = None
    equality: bool = False
    reverse: bool = False


def secret_bit(structure: AccessStructure) -> int:
    return 1 << structure.size


def ground_mask(structure: AccessStructure) -> int:
    return (1 << (structure.size + 1)) - 1


def _terms(pairs: Iterable[Tuple[int, int]]) -> Dict[int, Fraction]:
    out: Dict[int, Fraction] = {}
    for mask, coeff in pairs:
        if mask == 0:
            continue
        out[mask] = out.get(mask, Fraction(0)) + coeff
        if out[mask] == 0:
            del out[mask]
    return out


def _check_within(structure: AccessStructure, *masks: int) -> None:
    ground = ground_mask(structure)
    for mask in masks:
        if mask < 0 or mask & ~ground:
            raise InvalidParameter(f"Subset {mask:#b} lies outside P+{{S}}")


def monotone(structure: AccessStructure, x: int, y: int) -> LinearInequality:
    """h(Y) >= h(X) for X inside Y."""
    _check_within(structure, x, y)
    if not is_subset(x, y):
        raise InvalidParameter("Monotonicity needs X to be a subset of Y")
    return LinearInequality(
        coeffs=_terms([(y, 1), (x, -1)]),
        constant=Fraction(0),
        provenance=Provenance.MONOTONE,
        x=x,
        y=y,
    )


def submodular(structure: AccessStructure, x: int, y: int) -> LinearInequality:
    """h(X) + h(Y) >= h(X & Y) + h(X | Y)."""
    _check_within(structure, x, y)
    return LinearInequality(
        coeffs=_terms([(x, 1), (y, 1), (x & y, -1), (x | y, -1)]),
        constant=Fraction(0),
        provenance=Provenance.SUBMODULAR,
        x=x,
        y=y,
    )


def plus_submodular(structure: AccessStructure, x: int, y: int) -> LinearInequality:
    """Submodularity with an extra 1 for qualified X, Y whose meet is unqualified."""
    if x & secret_bit(structure) or y & secret_bit(structure):
        raise InvalidParameter("+-submodularity is stated on participant sets")
    _check_within(structure, x, y)
    if not is_plus_submodular_pair(structure, x, y):
        raise InvalidParameter("+-submodularity needs X, Y qualified and X & Y unqualified")
    return LinearInequality(
        coeffs=_terms([(x, 1), (y, 1), (x & y, -1), (x | y, -1)]),
        constant=Fraction(1),
        provenance=Provenance.PLUS_SUBMODULAR,
        x=x,
        y=y,
    )


def secret_equality(
    structure: AccessStructure, x: int, reverse: bool = False
) -> LinearInequality:
    """h(X + S) - h(X) is 0 for qualified X and 1 otherwise."""
    s = secret_bit(structure)
    if x & s:
        raise InvalidParameter("Secret equalities are indexed by participant sets")
    _check_within(structure, x)
    gap = 0 if structure.qualifies(x) else 1
    sign = -1 if reverse else 1
    return LinearInequality(
        coeffs=_terms([(x | s, sign), (x, -sign)]),
        constant=Fraction(sign * gap),
        provenance=Provenance.SECRET_EQUALITY,
        x=x,
        equality=True,
        reverse=reverse,
    )


def normalization(structure: AccessStructure, secret: bool) -> LinearInequality:
    """h(S) = 1 when ``secret``, else h(empty) = 0."""
    if secret:
        mask, value = secret_bit(structure), 1
    else:
        mask, value = 0, 0
    return LinearInequality(
        coeffs={mask: Fraction(1)},
        constant=Fraction(value),
        provenance=Provenance.NORMALIZATION,
        x=mask,
        equality=True,
    )


def objective_bound(structure: AccessStructure, participant: int) -> LinearInequality:
    """t >= h({p})."""
    return LinearInequality(
        coeffs={T_VAR: Fraction(1), 1 << participant: Fraction(-1)},
        constant=Fraction(0),
        provenance=Provenance.OBJECTIVE_BOUND,
        x=1 << participant,
    )


def target(terms: Iterable[Tuple[int, int]], constant: int) -> LinearInequality:
    """Goal inequality; repeated masks accumulate."""
    return LinearInequality(
        coeffs=_terms(terms),
        constant=Fraction(constant),
        provenance=Provenance.TARGET,
    )


def rebuild(structure: AccessStructure, inequality: LinearInequality) -> LinearInequality:
    """Regenerate an axiom instance from its provenance alone."""
    kind = inequality.provenance
    x, y = inequality.x, inequality.y
    if kind == Provenance.MONOTONE and x is not None and y is not None:
        return monotone(structure, x, y)
    if kind == Provenance.SUBMODULAR and x is not None and y is not None:
        return submodular(structure, x, y)
    if kind == Provenance.PLUS_SUBMODULAR and x is not None and y is not None:
        return plus_submodular(structure, x, y)
    if kind == Provenance.SECRET_EQUALITY and x is not None:
        return secret_equality(structure, x, inequality.reverse)
    if kind == Provenance.NORMALIZATION and x is not None:
        return normalization(structure, secret=bool(x))
    if kind == Provenance.OBJECTIVE_BOUND and x is not None:
        return objective_bound(structure, members(x)[0])
    raise InvalidParameter(f"Cannot rebuild a {kind.value} inequality")


def subset_name(structure: AccessStructure, mask: int) -> str:
    """Concatenated element names, e.g. ``kp1p2``; ``S`` is the secret."""
    if mask == T_VAR:
        return "t"
    names = list(structure.participants) + ["S"]
    return "".join(names[i] for i in members(mask)) or "{}"


def subset_members(structure: AccessStructure, mask: Optional[int]) -> List[str]:
    if mask is None:
        return []
    names = list(structure.participants) + ["S"]
    return [names[i] for i in members(mask)]


def format_inequality(structure: AccessStructure, inequality: LinearInequality) -> str:
    parts = []
    for mask, coeff in sorted(inequality.coeffs.items(), key=lambda kv: (-kv[1], kv[0])):
        sign = "-" if coeff < 0 else "+"
        size = abs(coeff)
        factor = "" if size == 1 else f"{size}*"
        parts.append(f"{sign} {factor}h({subset_name(structure, mask)})")
    lhs = " ".join(parts).lstrip("+ ") or "0"
    op = "=" if inequality.equality else ">="
    return f"{lhs} {op} {inequality.constant}"
