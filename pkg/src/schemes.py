"""
Dealers and reconstructors for the king-and-pawns schemes.

Sigma1 is a Shamir polynomial of degree n-1 where the king holds the values
at 1..n-1 and pawn i holds the value at n-1+i. Sigma2 combines a (2,2)
threshold piece (king r, every pawn r+s) with an (n,n) piece over the pawns.
The composite shares one secret symbol over Sigma1 and one over each of n-2
independent Sigma2 copies; every participant then holds 2n-3 symbols.
"""

import logging
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.access import KING, AccessStructure, make_gamma, pawn, pawn_index
from src.errors import InvalidParameter, NotQualified
from src.field import Prime, horner, interpolate_at_zero, make_rng, sample_vector
from src.utils.bitsets import members

logger = logging.getLogger(__name__)

Shares = Tuple[Tuple[int, ...], ...]


def _messages(exc: ValidationError) -> List[str]:
    return [e["msg"].removeprefix("Value error, ") for e in exc.errors()]


class SchemeKind(str, Enum):
    SIGMA1 = "sigma1"
    SIGMA2 = "sigma2"
    COMPOSITE = "composite"


class SchemeSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: SchemeKind = Field(..., description="Which dealer to run")
    n: int = Field(..., description="Number of pawns", ge=2)
    q: Prime = Field(..., description="Field modulus")

    @model_validator(mode="after")
    def _check_modulus(self) -> "SchemeSpec":
        if self.kind != SchemeKind.SIGMA2 and self.q.q <= 2 * self.n - 1:
            raise ValueError(
                f"{self.kind.value} needs q > 2n-1 = {2 * self.n - 1}, got {self.q.q}"
            )
        return self

    @classmethod
    def create(
        cls, kind: Union[SchemeKind, str], n: int, q: Optional[int] = None
    ) -> "SchemeSpec":
        """Build a spec, defaulting q to the smallest prime above 2n-1."""
        if n < 2:
            raise InvalidParameter(f"Schemes need n >= 2, got {n}")
        try:
            modulus = Prime.default_for(n) if q is None else Prime(q=q)
            return cls(kind=SchemeKind(kind), n=n, q=modulus)
        except ValidationError as exc:
            raise InvalidParameter("; ".join(_messages(exc))) from exc
        except ValueError as exc:
            raise InvalidParameter(str(exc)) from exc


class SecretVector(BaseModel):
    model_config = ConfigDict(frozen=True)

    symbols: Tuple[int, ...]


class DealTranscript(BaseModel):
    model_config = ConfigDict(frozen=True)

    randomness: Tuple[int, ...]


def secret_length(spec: SchemeSpec) -> int:
    return spec.n - 1 if spec.kind == SchemeKind.COMPOSITE else 1


def transcript_length(spec: SchemeSpec) -> int:
    n = spec.n
    if spec.kind == SchemeKind.SIGMA1:
        return n - 1
    if spec.kind == SchemeKind.SIGMA2:
        return n
    return (n - 1) + (n - 2) * n


@lru_cache(maxsize=None)
def _participants(n: int) -> Tuple[str, ...]:
    return (KING,) + tuple(pawn(i) for i in range(1, n + 1))


def structure_for(spec: SchemeSpec) -> AccessStructure:
    return make_gamma(spec.n)


def share_lengths(spec: SchemeSpec) -> Dict[str, int]:
    n = spec.n
    if spec.kind == SchemeKind.SIGMA1:
        king, each_pawn = n - 1, 1
    elif spec.kind == SchemeKind.SIGMA2:
        king, each_pawn = 1, 2
    else:
        king, each_pawn = 2 * n - 3, 2 * n - 3
    return {name: (king if name == KING else each_pawn) for name in _participants(n)}


class ShareBundle(BaseModel):
    """Shares keyed by participant name; may cover only part of the structure."""

    model_config = ConfigDict(frozen=True)

    scheme: SchemeSpec
    shares: Dict[str, Tuple[int, ...]]

    @model_validator(mode="after")
    def _check_shapes(self) -> "ShareBundle":
        expected = share_lengths(self.scheme)
        q = self.scheme.q.q
        for name, vector in self.shares.items():
            if name not in expected:
                raise ValueError(f"Unknown participant {name!r}")
            if len(vector) != expected[name]:
                raise ValueError(
                    f"{name} holds {len(vector)} symbols, expected {expected[name]}"
                )
            if any(not 0 <= v < q for v in vector):
                raise ValueError(f"{name} holds a value outside Z_{q}")
        return self

    def restrict(self, names: Iterable[str]) -> "ShareBundle":
        wanted = list(names)
        missing = [name for name in wanted if name not in self.shares]
        if missing:
            raise InvalidParameter(f"No shares for {missing}")
        return ShareBundle(scheme=self.scheme, shares={n: self.shares[n] for n in wanted})


# Dealing

def _sigma1(n: int, q: int, s: int, coeffs: Sequence[int]) -> Shares:
    poly = (s, *coeffs)
    king = tuple(horner(poly, x, q) for x in range(1, n))
    pawns = tuple((horner(poly, n - 1 + i, q),) for i in range(1, n + 1))
    return (king,) + pawns


def _sigma2(n: int, q: int, s: int, rand: Sequence[int]) -> Shares:
    r, rs = rand[0], rand[1:]
    masked = (r + s) % q
    pawns = [(masked, rs[i]) for i in range(n - 1)]
    pawns.append((masked, (s + sum(rs)) % q))
    return ((r,),) + tuple(pawns)


def share_vectors(spec: SchemeSpec, secret: Sequence[int], randomness: Sequence[int]) -> Shares:
    """Unchecked dealing map: per-participant vectors in structure order."""
    n, q = spec.n, spec.q.q
    if spec.kind == SchemeKind.SIGMA1:
        return _sigma1(n, q, secret[0], randomness)
    if spec.kind == SchemeKind.SIGMA2:
        return _sigma2(n, q, secret[0], randomness)
    parts = [_sigma1(n, q, secret[0], randomness[: n - 1])]
    for j in range(1, n - 1):
        start = n - 1 + (j - 1) * n
        parts.append(_sigma2(n, q, secret[j], randomness[start : start + n]))
    return tuple(sum((part[i] for part in parts), ()) for i in range(n + 1))


def _check_inputs(spec: SchemeSpec, secret: SecretVector, transcript: DealTranscript) -> None:
    q = spec.q.q
    if len(secret.symbols) != secret_length(spec):
        raise InvalidParameter(
            f"{spec.kind.value} expects {secret_length(spec)} secret symbols, "
            f"got {len(secret.symbols)}"
        )
    if len(transcript.randomness) != transcript_length(spec):
        raise InvalidParameter(
            f"{spec.kind.value} expects {transcript_length(spec)} random symbols, "
            f"got {len(transcript.randomness)}"
        )
    for v in (*secret.symbols, *transcript.randomness):
        if not 0 <= v < q:
            raise InvalidParameter(f"{v} is not a residue mod {q}")


def deal_with_randomness(
    spec: SchemeSpec, secret: SecretVector, transcript: DealTranscript
) -> ShareBundle:
    _check_inputs(spec, secret, transcript)
    vectors = share_vectors(spec, secret.symbols, transcript.randomness)
    return ShareBundle(scheme=spec, shares=dict(zip(_participants(spec.n), vectors)))


def deal(
    spec: SchemeSpec, secret: SecretVector, seed: int
) -> Tuple[ShareBundle, DealTranscript]:
    rng = make_rng(seed)
    transcript = DealTranscript(
        randomness=tuple(sample_vector(rng, spec.q, transcript_length(spec)))
    )
    logger.debug("Dealt %s n=%d with seed %d", spec.kind.value, spec.n, seed)
    return deal_with_randomness(spec, secret, transcript), transcript


# Reconstruction

def _layout(spec: SchemeSpec) -> List[Tuple[str, int, int]]:
    """(component, king offset, pawn offset) for every secret symbol."""
    n = spec.n
    if spec.kind == SchemeKind.SIGMA1:
        return [("sigma1", 0, 0)]
    if spec.kind == SchemeKind.SIGMA2:
        return [("sigma2", 0, 0)]
    return [("sigma1", 0, 0)] + [
        ("sigma2", n - 1 + (j - 1), 1 + 2 * (j - 1)) for j in range(1, n - 1)
    ]


def _recover_sigma1(
    spec: SchemeSpec, shares: Dict[str, Tuple[int, ...]], group: List[str], ko: int, po: int
) -> int:
    n = spec.n
    points = []
    for name in group:
        if name == KING:
            points.extend((x, shares[KING][ko + x - 1]) for x in range(1, n))
        else:
            points.append((n - 1 + pawn_index(name), shares[name][po]))
    return interpolate_at_zero(points, spec.q)


def _recover_sigma2(
    spec: SchemeSpec, shares: Dict[str, Tuple[int, ...]], group: List[str], ko: int, po: int
) -> int:
    q = spec.q.q
    if KING in group:
        other = next(name for name in group if name != KING)
        return (shares[other][po] - shares[KING][ko]) % q
    last = pawn(spec.n)
    total = sum(shares[pawn(i)][po + 1] for i in range(1, spec.n))
    return (shares[last][po + 1] - total) % q


def reconstruct(
    spec: SchemeSpec, partial: ShareBundle, coalition: Iterable[str]
) -> SecretVector:
    """Recover the secret from a qualified coalition's pooled shares.

    A coalition larger than a minimal qualified set uses the lexicographically
    first minimal set it contains.
    """
    structure = structure_for(spec)
    names = list(coalition)
    mask = structure.mask(names)
    if not structure.qualifies(mask):
        raise NotQualified(
            f"{sorted(names)} is not qualified for Gamma_{spec.n}",
            {"coalition": structure.names(mask)},
        )
    missing = [name for name in names if name not in partial.shares]
    if missing:
        raise InvalidParameter(f"No shares for {missing}")
    chosen = next(m for m in structure.minimal_masks if m & mask == m)
    group = [structure.participants[i] for i in members(chosen)]
    symbols = []
    for component, ko, po in _layout(spec):
        recover = _recover_sigma1 if component == "sigma1" else _recover_sigma2
        symbols.append(recover(spec, partial.shares, group, ko, po))
    return SecretVector(symbols=tuple(symbols))


# Shape-derived quantities

def share_domains(spec: SchemeSpec) -> Dict[str, int]:
    q = spec.q.q
    return {name: q**m for name, m in share_lengths(spec).items()}


def nominal_rate(spec: SchemeSpec) -> Fraction:
    """Secret symbols over the largest share; the true rate once shares are uniform."""
    return Fraction(secret_length(spec), max(share_lengths(spec).values()))
