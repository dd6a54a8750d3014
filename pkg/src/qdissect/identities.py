"""Identity cases, replayable derivation chains, and their verifiers.

An :class:`IdentityCase` is a claimed equality between two expressions,
checked coefficientwise to an explicit order (exactly, or in Z/M).  A
:class:`ProofChain` mechanizes a derivation: starting from an expression, it
applies extraction/relabel/reduction moves to a concrete series and compares
the running value against each claimed stage.

Chains follow two reporting rules.  A stage whose expectation is ``"record"``
is allowed to mismatch: the outcome (pass, or first mismatching coefficient)
is recorded as an erratum candidate instead of a failure.  After any
mismatch the chain continues from the *claimed* stage, so a single
transcription slip cannot cascade through the remaining stages.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Optional, Union

from . import series
from .qexpr import QExpr, eval_qexpr
from .series import EXACT, CoeffRing, PrecisionError


# ---------------------------------------------------------------------------
# identity cases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityCase:
    """A claimed equality ``lhs == rhs`` to ``default_order`` coefficients.

    ``modulus == 0`` checks over exact integers.  ``expect`` is ``"pass"`` for
    catalog entries that must hold, ``"record"`` for entries whose outcome is
    recorded either way (suspected transcription issues).
    """

    id: str
    section: str
    lhs: QExpr
    rhs: QExpr
    modulus: int = 0
    default_order: int = 500
    expect: str = "pass"
    note: str = ""


@dataclass(frozen=True)
class Mismatch:
    exponent: int
    lhs: int
    rhs: int


@dataclass(frozen=True)
class IdentityReport:
    id: str
    status: str  # pass | mismatch | erratum
    order: int
    modulus: int
    first_mismatch: Optional[Mismatch]
    runtime_ms: float
    detail: str = ""

    @property
    def ok(self) -> bool:
        """True when the outcome does not fail a verification run."""
        return self.status in ("pass", "erratum")


def _is_probable_prime(n: int, rounds: int = 24) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    rng = random.Random(0xC0FFEE ^ n)
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _random_primes(seed: str, count: int = 3, bits: int = 62) -> list[int]:
    rng = random.Random(f"qdissect:{seed}")
    primes: list[int] = []
    while len(primes) < count:
        cand = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if _is_probable_prime(cand) and cand not in primes:
            primes.append(cand)
    return primes


# Exact checks above this order run modulo several random 62-bit primes
# instead of over Z (eta-quotient coefficients grow superpolynomially).
EXACT_ORDER_CAP = 600


def verify(case: IdentityCase, order: Optional[int] = None) -> IdentityReport:
    """Evaluate both sides of a case and report pass or first mismatch."""
    n = case.default_order if order is None else order
    t0 = time.perf_counter()
    detail = case.note
    try:
        if case.modulus == 0 and n > EXACT_ORDER_CAP:
            mismatch = None
            primes = _random_primes(case.id)
            for p in primes:
                mismatch = _compare(case, CoeffRing(p), n)
                if mismatch:
                    break
            detail = (detail + " " if detail else "") + (
                f"exact claim checked mod {len(primes)} random 62-bit primes"
            )
        else:
            ring = EXACT if case.modulus == 0 else CoeffRing(case.modulus)
            mismatch = _compare(case, ring, n)
    except Exception as exc:
        raise type(exc)(f"[case {case.id}] {exc}") from exc
    ms = (time.perf_counter() - t0) * 1000
    if mismatch is None:
        return IdentityReport(case.id, "pass", n, case.modulus, None, ms, detail)
    status = "erratum" if case.expect == "record" else "mismatch"
    return IdentityReport(case.id, status, n, case.modulus, mismatch, ms, detail)


def _compare(case: IdentityCase, ring: CoeffRing, n: int) -> Optional[Mismatch]:
    a = eval_qexpr(case.lhs, ring, n)
    b = eval_qexpr(case.rhs, ring, n)
    ok, idx = series.eq_to_order(a, b, n)
    if ok:
        return None
    return Mismatch(idx, a[idx], b[idx])


# ---------------------------------------------------------------------------
# proof chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Substitute:
    """Annotation step: the upcoming stage is justified by a catalog identity."""

    identity_id: str


@dataclass(frozen=True)
class Extract:
    """Keep exponents congruent to ``r`` mod ``s`` and divide by ``q^r``;
    the series stays on the ``q^s`` lattice until :class:`DilateBack`."""

    r: int
    s: int


@dataclass(frozen=True)
class DilateBack:
    """The relabeling move: replace ``q^s`` by ``q``."""

    s: int


@dataclass(frozen=True)
class ReduceMod:
    modulus: int


@dataclass(frozen=True)
class AssertStage:
    """Compare the running series against a claimed stage expression."""

    stage_id: str
    expr: QExpr
    expect: str = "pass"  # "record" for erratum-candidate stages


ProofStep = Union[Substitute, Extract, DilateBack, ReduceMod, AssertStage]


@dataclass(frozen=True)
class ProofChain:
    """One replayable derivation segment.

    ``modulus`` is the ring of the starting expression (0 = exact; a
    :class:`ReduceMod` step may switch it mid-chain).  ``base_order`` is the
    evaluation order; after every passing assertion the running series is
    re-evaluated from the claimed stage at full order, so precision is spent
    only between consecutive assertions.
    """

    id: str
    section: str
    start: QExpr
    steps: tuple[ProofStep, ...]
    modulus: int = 0
    base_order: int = 512
    min_surviving: int = 32
    note: str = ""


@dataclass(frozen=True)
class StageReport:
    stage_id: str
    status: str  # pass | mismatch | erratum
    compared_order: int
    surviving: int
    justified_by: tuple[str, ...]
    first_mismatch: Optional[Mismatch]

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "erratum")


@dataclass(frozen=True)
class ChainReport:
    chain_id: str
    stages: tuple[StageReport, ...]
    runtime_ms: float

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.stages)

    @property
    def failures(self) -> list[StageReport]:
        return [s for s in self.stages if s.status == "mismatch"]


def replay(chain: ProofChain, order: Optional[int] = None) -> ChainReport:
    """Execute a chain's steps on a concrete series and report every stage."""
    n = chain.base_order if order is None else order
    t0 = time.perf_counter()
    ring = EXACT if chain.modulus == 0 else CoeffRing(chain.modulus)
    try:
        current = eval_qexpr(chain.start, ring, n)
    except Exception as exc:
        raise type(exc)(f"[chain {chain.id}] start: {exc}") from exc
    lattice = 1  # current coordinate scale: q^lattice is the step
    pending: list[str] = []
    stages: list[StageReport] = []

    for step in chain.steps:
        if isinstance(step, Substitute):
            pending.append(step.identity_id)
        elif isinstance(step, Extract):
            eff_r = step.r * lattice if lattice > 1 else step.r
            lattice *= step.s
            try:
                current = series.dilate(series.extract(current, eff_r, lattice), lattice)
            except PrecisionError as exc:
                raise PrecisionError(f"[chain {chain.id}] {exc}") from exc
        elif isinstance(step, DilateBack):
            if lattice % step.s:
                raise ValueError(
                    f"[chain {chain.id}] DilateBack({step.s}) but lattice is {lattice}"
                )
            current = series.extract(current, 0, step.s)
            lattice //= step.s
        elif isinstance(step, ReduceMod):
            current = series.reduce_mod(current, step.modulus)
            ring = CoeffRing(step.modulus)
        elif isinstance(step, AssertStage):
            claimed = eval_qexpr(step.expr, ring, n)
            compared = min(current.order, claimed.order)
            surviving = compared // lattice + 1
            if surviving < chain.min_surviving:
                raise PrecisionError(
                    f"[chain {chain.id}] stage {step.stage_id}: only {surviving} "
                    f"coefficients survive (need {chain.min_surviving}); "
                    f"raise the base order"
                )
            ok, idx = series.eq_to_order(current, claimed, compared)
            if ok:
                status, mismatch = "pass", None
            else:
                mismatch = Mismatch(idx, current[idx], claimed[idx])
                status = "erratum" if step.expect == "record" else "mismatch"
            stages.append(
                StageReport(step.stage_id, status, compared, surviving,
                            tuple(pending), mismatch)
            )
            pending = []
            # continue from the claimed stage at full order (re-inflate); on a
            # mismatch this also localizes the discrepancy to one stage
            current = claimed
        else:  # pragma: no cover
            raise TypeError(f"unknown proof step {step!r}")

    ms = (time.perf_counter() - t0) * 1000
    return ChainReport(chain.id, tuple(stages), ms)
