"""
Arithmetic in the prime field Z_q.

Residues are plain ints kept in canonical form ``0 <= r < q``. Randomness
comes from numpy's PCG64 generator; ``sample_uniform`` draws raw 64-bit words
and rejects out-of-range values so no residue is favoured.
"""

import logging
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import isprime, nextprime

from src.errors import DegenerateInterpolation, InvalidParameter

logger = logging.getLogger(__name__)

MAX_SEED = 2**64 - 1


class Prime(BaseModel):
    model_config = ConfigDict(frozen=True)

    q: int = Field(..., description="Field modulus", ge=2)

    @field_validator("q")
    @classmethod
    def _check_prime(cls, value: int) -> int:
        if not isprime(value):
            raise ValueError(f"{value} is not prime")
        return value

    @classmethod
    def default_for(cls, n: int) -> "Prime":
        """Smallest prime strictly greater than 2n-1."""
        return cls(q=int(nextprime(2 * n - 1)))


class Polynomial(BaseModel):
    """Coefficients lowest degree first; the length fixes the degree bound."""

    model_config = ConfigDict(frozen=True)

    coeffs: Tuple[int, ...] = Field(..., min_length=1)
    modulus: Prime

    @model_validator(mode="after")
    def _check_residues(self) -> "Polynomial":
        q = self.modulus.q
        for c in self.coeffs:
            if not 0 <= c < q:
                raise ValueError(f"Coefficient {c} is not a residue mod {q}")
        return self

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1


def horner(coeffs: Sequence[int], x: int, q: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % q
    return acc


def poly_eval(f: Polynomial, x: int) -> int:
    q = f.modulus.q
    if not 0 <= x < q:
        raise InvalidParameter(f"Evaluation point {x} is not a residue mod {q}")
    return horner(f.coeffs, x, q)


def _check_points(points: Sequence[Tuple[int, int]], q: int) -> List[Tuple[int, int]]:
    if not points:
        raise InvalidParameter("At least one interpolation point is required")
    seen = set()
    reduced = []
    for x, y in points:
        x, y = x % q, y % q
        if x == 0:
            raise InvalidParameter("Interpolation points must be nonzero")
        if x in seen:
            raise DegenerateInterpolation(
                f"Duplicate abscissa {x} mod {q}", {"x": x, "q": q}
            )
        seen.add(x)
        reduced.append((x, y))
    return reduced


def interpolate_at_zero(points: Sequence[Tuple[int, int]], modulus: Prime) -> int:
    """f(0) for the unique polynomial of degree < len(points) through ``points``."""
    q = modulus.q
    pts = _check_points(points, q)
    secret = 0
    for i, (xi, yi) in enumerate(pts):
        num, den = 1, 1
        for j, (xj, _) in enumerate(pts):
            if i != j:
                num = num * xj % q
                den = den * (xj - xi) % q
        secret = (secret + yi * num * pow(den, -1, q)) % q
    return secret


def count_interpolants(
    points: Sequence[Tuple[int, int]], degree_bound: int, modulus: Prime
) -> int:
    """Number of polynomials of degree <= degree_bound through ``points``."""
    q = modulus.q
    seen = set()
    for x, _ in points:
        if x % q in seen:
            raise DegenerateInterpolation(f"Duplicate abscissa {x % q} mod {q}")
        seen.add(x % q)
    if len(points) > degree_bound + 1:
        raise InvalidParameter("More points than free coefficients")
    return q ** (degree_bound + 1 - len(points))


def make_rng(seed: int) -> np.random.Generator:
    if not 0 <= seed <= MAX_SEED:
        raise InvalidParameter(f"Seed {seed} does not fit in 64 bits")
    return np.random.Generator(np.random.PCG64(seed))


def sample_uniform(rng: np.random.Generator, modulus: Prime) -> int:
    q = modulus.q
    bits = (q - 1).bit_length() or 1
    words = -(-bits // 64)
    mask = (1 << bits) - 1
    while True:
        raw = 0
        for _ in range(words):
            raw = (raw << 64) | int(rng.bit_generator.random_raw())
        candidate = raw & mask
        if candidate < q:
            return candidate


def sample_vector(rng: np.random.Generator, modulus: Prime, length: int) -> List[int]:
    return [sample_uniform(rng, modulus) for _ in range(length)]


def residues(values: Iterable[int], modulus: Prime) -> Tuple[int, ...]:
    """Validate that every value is already canonical mod q."""
    q = modulus.q
    out = tuple(values)
    for v in out:
        if not 0 <= v < q:
            raise InvalidParameter(f"{v} is not a residue mod {q}")
    return out
