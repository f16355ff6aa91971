from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator
from sympy import isprime

from src.schemes import (
    DealTranscript,
    SchemeKind,
    SchemeSpec,
    SecretVector,
    ShareBundle,
    deal_with_randomness,
    secret_length,
)

RationalStr = Annotated[str, Field(pattern=r"^-?\d+/\d+$", description="Exact rational a/b")]


class ErrorReport(BaseModel):
    error: str = Field(..., description="Error message")
    code: Optional[str] = Field(None, description="Error code")
    details: Optional[Dict[str, Any]] = Field(None, description="Additional error details")


class CliConfig(BaseModel):
    """Validated view of the parsed command line."""

    command: str
    n: Optional[int] = Field(None, ge=2, description="Number of pawns")
    q: Optional[int] = Field(None, description="Field modulus; defaults per scheme")
    seed: Optional[int] = Field(None, ge=0, le=2**64 - 1)
    shares: Optional[Path] = Field(None, description="Share file to read")
    out: Optional[Path] = Field(None, description="Share file to write")
    budget: Optional[int] = Field(None, gt=0, description="Enumeration budget override")
    output_format: Literal["json", "plain"] = "json"

    @field_validator("q")
    @classmethod
    def _check_prime(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and not isprime(value):
            raise ValueError(f"{value} is not prime")
        return value


class StructureReport(BaseModel):
    structure: str
    participants: List[str]
    minimal_qualified: List[List[str]]
    maximal_unqualified: List[List[str]]


class ShareFile(BaseModel):
    """On-disk share bundle; the transcript allows replaying the deal."""

    scheme: SchemeKind = Field(..., description="Dealer that produced the shares")
    n: int = Field(..., description="Number of pawns", ge=2)
    q: int = Field(..., description="Field modulus")
    secret_len: int = Field(..., description="Number of secret symbols", ge=1)
    shares: Dict[str, List[int]] = Field(..., description="Share vectors by participant")
    transcript: Optional[List[int]] = Field(None, description="Dealer randomness")

    @model_validator(mode="after")
    def _check_secret_len(self) -> "ShareFile":
        expected = secret_length(self.spec())
        if self.secret_len != expected:
            raise ValueError(
                f"secret_len {self.secret_len} does not match {self.scheme.value} at n={self.n}, "
                f"which shares {expected} symbols"
            )
        return self

    def spec(self) -> SchemeSpec:
        return SchemeSpec.create(self.scheme, self.n, self.q)

    def to_bundle(self) -> ShareBundle:
        return ShareBundle(
            scheme=self.spec(), shares={k: tuple(v) for k, v in self.shares.items()}
        )

    @classmethod
    def from_bundle(
        cls, bundle: ShareBundle, transcript: Optional[DealTranscript] = None
    ) -> "ShareFile":
        spec = bundle.scheme
        return cls(
            scheme=spec.kind,
            n=spec.n,
            q=spec.q.q,
            secret_len=secret_length(spec),
            shares={k: list(v) for k, v in bundle.shares.items()},
            transcript=list(transcript.randomness) if transcript else None,
        )

    def replay(self, secret: SecretVector) -> bool:
        """True iff re-dealing ``secret`` with the stored transcript reproduces the shares."""
        if self.transcript is None:
            return False
        bundle = deal_with_randomness(
            self.spec(), secret, DealTranscript(randomness=tuple(self.transcript))
        )
        return bundle.shares == self.to_bundle().shares


class ReconstructReport(BaseModel):
    scheme: SchemeKind
    n: int
    q: int
    coalition: List[str]
    secret: List[int]


class Violation(BaseModel):
    kind: str = Field(..., description="'qualified' or 'unqualified'")
    subset: List[str] = Field(..., description="Coalition that breaks perfectness")
    assignment: Dict[str, List[int]] = Field(..., description="Offending share values")
    detail: str = Field(..., description="What went wrong")


class PerfectnessReport(BaseModel):
    scheme: Optional[str] = None
    perfect: bool
    violations: List[Violation] = Field(default_factory=list)
    violation_count: int = 0
    checked_qualified: int = 0
    checked_unqualified: int = 0


class VerifyReport(BaseModel):
    scheme: SchemeKind
    n: int
    q: int
    perfect: bool
    violations: List[Violation]
    uniform: Dict[str, bool]
    rates: Dict[str, str]
    min_rate: str
    verified: bool


class ComponentCheck(BaseModel):
    q: int
    perfect: bool
    uniform: bool


class RateReport(BaseModel):
    scheme: SchemeKind = SchemeKind.COMPOSITE
    n: int
    q: int
    oracle: bool = Field(..., description="True when enumerated, False when nominal")
    min_rate: RationalStr
    nominal_rate: RationalStr
    rates: Optional[Dict[str, str]] = None
    perfect: Optional[bool] = None
    components: Optional[Dict[str, ComponentCheck]] = None


class BoundReport(BaseModel):
    structure: str
    kappa: RationalStr
    rate_upper_bound: RationalStr
    certificate_verified: Optional[bool] = None


class CertificateEntry(BaseModel):
    provenance: str
    X: List[str]
    Y: Optional[List[str]] = None
    multiplier: RationalStr


class CertificateReport(BaseModel):
    lemma: str
    n: int
    verified: bool
    target: str
    constant: RationalStr
    items: List[CertificateEntry]


class TheoremReport(BaseModel):
    n: int
    q: int
    lower_bound: RationalStr
    lower_source: str = Field(..., description="'oracle' or 'nominal'")
    upper_bound: Optional[RationalStr] = None
    upper_source: str = Field(..., description="'lp' or 'certificate'")
    expected: RationalStr
    tight: bool

