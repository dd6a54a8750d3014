"""Theorem-level congruence families and the order-2 recurrence constants.

A :class:`CongruenceFamily` states that a coefficient stream vanishes, is
proportional to another stream, or satisfies a fixed three-term relation on an
affine progression of indices.  Verification walks the progression against an
oracle table and reports every violation; instances whose largest index
exceeds the desk-scale cap (or the supplied table) are reported as skipped,
never silently dropped.

The closed-form constants of the lemma combinations live in order-2 integer
recurrences (``s_{k+1} = alpha*s_k + beta*s_{k-1}``); their initial values
were re-derived from the closed forms by exact surd arithmetic, which pins
``(s0, s1) = (0, 1)`` for each main sequence and ``(1, 0)`` for its companion.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .oracle import CountTable

DESK_INDEX_CAP = 30_000_000  # largest coefficient index attempted by policy


# ---------------------------------------------------------------------------
# recurrence sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecurrenceSeq:
    """``s_{k+1} = alpha * s_k + beta * s_{k-1}`` with start ``(s0, s1)``."""

    name: str
    alpha: int
    beta: int
    s0: int
    s1: int


def seq_eval(seq: RecurrenceSeq, k: int, p: int = 0) -> int:
    """``s_k``, reduced mod ``p`` when ``p >= 2`` (iterative; exact for p=0)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    a, b = seq.s0, seq.s1
    if p:
        a, b = a % p, b % p
    if k == 0:
        return a
    for _ in range(k - 1):
        a, b = b, seq.alpha * b + seq.beta * a
        if p:
            b %= p
    return b


#: The eight lemma-constant sequences, keyed by their conventional letter.
SEQUENCES: dict[str, RecurrenceSeq] = {
    "E": RecurrenceSeq("E", 6, 5, 0, 1),
    "e": RecurrenceSeq("e", 6, 5, 1, 0),
    "A": RecurrenceSeq("A", 1, 7, 0, 1),
    "a": RecurrenceSeq("a", 1, 7, 1, 0),
    "C": RecurrenceSeq("C", 8, 1, 0, 1),
    "c": RecurrenceSeq("c", 8, 1, 1, 0),
    "D": RecurrenceSeq("D", 2, 4, 0, 1),
    "d": RecurrenceSeq("d", 2, 4, 1, 0),
}


def recurrence_consistency_checks(max_m: int = 3) -> list[tuple[str, bool, str]]:
    """Composition checks tying each recurrence pair to its theorem constants:
    at the theorem's step size the main sequence vanishes and the companion
    carries the theorem's power constant."""
    plans = [
        ("E/e", "E", "e", 7, 7, 3),    # step 7 mod 7, constant 3^m
        ("A/a", "A", "a", 6, 11, 2),   # step 6 mod 11, constant 2^m
        ("C/c", "C", "c", 3, 13, 8),   # step 3 mod 13, constant 8^m
        ("D/d", "D", "d", 9, 17, 8),   # step 9 mod 17, constant 8^m
    ]
    results = []
    for label, main, comp, step, p, const in plans:
        ok = True
        detail = []
        for m in range(1, max_m + 1):
            zero = seq_eval(SEQUENCES[main], step * m, p)
            carry = seq_eval(SEQUENCES[comp], step * m, p)
            want = pow(const, m, p)
            detail.append(f"m={m}: {main}={zero}, {comp}={carry} (want 0, {want})")
            ok = ok and zero == 0 and carry == want
        results.append((label, ok, "; ".join(detail)))
    return results


# ---------------------------------------------------------------------------
# congruence families
# ---------------------------------------------------------------------------

def exact_div(num: int, den: int) -> int:
    """Integer division that refuses to round (offset exactness guard)."""
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{num} is not divisible by {den}")
    return q


@dataclass(frozen=True)
class SourceSpec:
    """Which coefficient stream a family reads: regular b_l or bipartite B_{l,m}."""

    kind: str  # "regular" | "bipartite"
    l: int
    m: int = 0

    def describe(self) -> str:
        if self.kind == "regular":
            return f"b_{self.l}"
        return f"B_{{{self.l},{self.m}}}"


@dataclass(frozen=True)
class AffineIndex:
    """``index(n; m, k) = scale(m, k) * n + offset(m, k)``."""

    formula: str
    scale: Callable[[int, int], int]
    offset: Callable[[int, int], int]

    def at(self, n: int, m: int = 0, k: int = 0) -> int:
        return self.scale(m, k) * n + self.offset(m, k)


def plain_index(scale: int = 1, offset: int = 0) -> AffineIndex:
    return AffineIndex(f"{scale}n+{offset}", lambda m, k: scale, lambda m, k: offset)


@dataclass(frozen=True)
class Zero:
    """LHS coefficient vanishes mod p."""


@dataclass(frozen=True)
class Recur:
    """LHS = constant^m * reference coefficient mod p."""

    constant: int
    ref: AffineIndex
    ref_source: Optional[SourceSpec] = None


@dataclass(frozen=True)
class ThreeTerm:
    """LHS = c1 * ref1 + c2 * ref2 mod p."""

    c1: int
    ref1: AffineIndex
    c2: int
    ref2: AffineIndex


Relation = Union[Zero, Recur, ThreeTerm]


@dataclass(frozen=True)
class CongruenceFamily:
    id: str
    section: str
    modulus: int
    source: SourceSpec
    index: AffineIndex
    relation: Relation
    m_values: tuple[int, ...] = (0,)
    k_values: tuple[int, ...] = (0,)
    default_n_max: int = 500
    slow: bool = False
    expect: str = "pass"  # "record" for ambiguous-reading probes
    note: str = ""


@dataclass(frozen=True)
class Violation:
    params: tuple[tuple[str, int], ...]
    n: int
    index: int
    got: int
    expected: int


@dataclass(frozen=True)
class FamilyReport:
    id: str
    modulus: int
    n_max: int
    params_tested: tuple[tuple[tuple[str, int], ...], ...]
    violations: tuple[Violation, ...]
    skipped: tuple[tuple[tuple[tuple[str, int], ...], str, int], ...]
    status: str  # pass | fail | skipped
    source_desc: str
    runtime_ms: float
    expect: str = "pass"
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail" or self.expect == "record"


def required_order(family: CongruenceFamily, n_max: Optional[int] = None,
                   index_cap: int = DESK_INDEX_CAP) -> dict[SourceSpec, int]:
    """Largest table index each source needs, over the non-skipped instances."""
    n = family.default_n_max if n_max is None else n_max
    needs: dict[SourceSpec, int] = {}

    def bump(spec: SourceSpec, idx: int) -> None:
        needs[spec] = max(needs.get(spec, 0), idx)

    for m in family.m_values:
        for k in family.k_values:
            top = family.index.at(n, m, k)
            if top > index_cap:
                continue
            bump(family.source, top)
            rel = family.relation
            if isinstance(rel, Recur):
                bump(rel.ref_source or family.source, rel.ref.at(n, m, k))
            elif isinstance(rel, ThreeTerm):
                bump(family.source, rel.ref1.at(n, m, k))
                bump(family.source, rel.ref2.at(n, m, k))
    return needs


def verify_family(
    family: CongruenceFamily,
    source: CountTable,
    n_max: Optional[int] = None,
    ref_source: Optional[CountTable] = None,
    index_cap: int = DESK_INDEX_CAP,
) -> FamilyReport:
    """Check every (m, k, n) instance of the family against oracle tables.

    ``source`` must be a modular table matching the family's modulus (or an
    exact table, reduced on the fly).  Instances whose largest index exceeds
    ``index_cap`` or the table are reported in ``skipped`` with the smallest
    uncovered index.
    """
    t0 = time.perf_counter()
    n_top = family.default_n_max if n_max is None else n_max
    p = family.modulus
    rel = family.relation
    ref_table = ref_source if ref_source is not None else source

    violations: list[Violation] = []
    tested: list[tuple[tuple[str, int], ...]] = []
    skipped: list[tuple[tuple[tuple[str, int], ...], str, int]] = []

    def val(table: CountTable, idx: int) -> int:
        return table[idx] % p

    def first_uncovered(maps: list[AffineIndex], m: int, k: int, limit: int) -> int:
        """Smallest progression index (n <= n_top) exceeding ``limit``."""
        smallest = None
        for ix in maps:
            if ix.at(n_top, m, k) <= limit:
                continue
            offset, scale = ix.offset(m, k), ix.scale(m, k)
            n = 0 if offset > limit else (limit - offset) // scale + 1
            idx = ix.at(n, m, k)
            smallest = idx if smallest is None else min(smallest, idx)
        return smallest if smallest is not None else limit + 1

    for m in family.m_values:
        for k in family.k_values:
            params = (("m", m), ("k", k))
            src_maps = [family.index]
            ref_maps: list[AffineIndex] = []
            if isinstance(rel, Recur):
                ref_maps = [rel.ref]
                if rel.ref_source is None:
                    src_maps += ref_maps
                    ref_maps = []
            elif isinstance(rel, ThreeTerm):
                src_maps += [rel.ref1, rel.ref2]
            src_top = max(ix.at(n_top, m, k) for ix in src_maps)
            ref_top = max((ix.at(n_top, m, k) for ix in ref_maps), default=0)
            if max(src_top, ref_top) > index_cap:
                skipped.append((params, "index exceeds desk scale",
                                first_uncovered(src_maps + ref_maps, m, k, index_cap)))
                continue
            if src_top > source.n_max:
                skipped.append((params, "source table too small",
                                first_uncovered(src_maps, m, k, source.n_max)))
                continue
            if ref_top > ref_table.n_max:
                skipped.append((params, "reference table too small",
                                first_uncovered(ref_maps, m, k, ref_table.n_max)))
                continue
            tested.append(params)
            for n in range(n_top + 1):
                idx = family.index.at(n, m, k)
                got = val(source, idx)
                if isinstance(rel, Zero):
                    expected = 0
                elif isinstance(rel, Recur):
                    expected = (
                        pow(rel.constant, m, p) * val(ref_table, rel.ref.at(n, m, k))
                    ) % p
                else:
                    expected = (
                        rel.c1 * val(source, rel.ref1.at(n, m, k))
                        + rel.c2 * val(source, rel.ref2.at(n, m, k))
                    ) % p
                if got != expected:
                    violations.append(Violation(params, n, idx, got, expected))

    if violations:
        status = "fail"
    elif tested:
        status = "pass"
    else:
        status = "skipped"
    ms = (time.perf_counter() - t0) * 1000
    return FamilyReport(
        family.id, p, n_top, tuple(tested), tuple(violations), tuple(skipped),
        status, f"{family.source.describe()} table to {source.n_max} mod {source.modulus}",
        ms, family.expect, family.note,
    )


def verify_three_term(
    relation_id: str,
    p: int,
    maps: tuple[AffineIndex, AffineIndex, AffineIndex],
    coeffs: tuple[int, int],
    n_max: int,
    source: CountTable,
) -> FamilyReport:
    """Standalone three-term check ``src[maps[0](n)] = c1*src[maps[1](n)] + c2*src[maps[2](n)]``."""
    lhs, ref1, ref2 = maps
    fam = CongruenceFamily(
        relation_id, "adhoc", p,
        SourceSpec("bipartite" if source.kind == "bipartite" else "regular",
                   source.l, source.m),
        lhs, ThreeTerm(coeffs[0], ref1, coeffs[1], ref2),
        default_n_max=n_max,
    )
    return verify_family(fam, source, n_max=n_max)


# ---------------------------------------------------------------------------
# family catalog
# ---------------------------------------------------------------------------

def _pow_index(base_pow: Callable[[int, int], int],
               offset: Callable[[int, int], int], formula: str) -> AffineIndex:
    return AffineIndex(formula, base_pow, offset)


def build_families() -> list[CongruenceFamily]:
    """All congruence families, in catalog order."""
    fams: list[CongruenceFamily] = []

    B37 = SourceSpec("bipartite", 3, 7)
    B95 = SourceSpec("bipartite", 9, 5)
    B511 = SourceSpec("bipartite", 5, 11)
    B513 = SourceSpec("bipartite", 5, 13)
    B8117 = SourceSpec("bipartite", 81, 17)
    B28 = SourceSpec("bipartite", 2, 8)
    B311 = SourceSpec("bipartite", 3, 11)
    b17 = SourceSpec("regular", 17)

    fams.append(CongruenceFamily(
        "w.11", "s3", 7, B37,
        plain_index(16, 5),
        ThreeTerm(5, plain_index(1, 0), 6, plain_index(4, 1)),
        default_n_max=5000,
        note="order-16 base relation for the (3,7) stream",
    ))
    fams.append(CongruenceFamily(
        "ak1", "s3", 7, B37,
        _pow_index(lambda m, k: 4 ** (7 * m),
                   lambda m, k: exact_div(4 ** (7 * m) - 1, 3),
                   "4^(7m) n + (4^(7m)-1)/3"),
        Recur(3, plain_index(1, 0)),
        m_values=(0, 1), default_n_max=100,
    ))
    fams.append(CongruenceFamily(
        "ak2", "s3", 7, B37,
        _pow_index(lambda m, k: 4 ** (7 * m + 7),
                   lambda m, k: exact_div(10 * 4 ** (7 * m + 6) - 1, 3),
                   "4^(7m+7) n + (10*4^(7m+6)-1)/3"),
        Zero(),
        m_values=(0,), default_n_max=100,
    ))

    fams.append(CongruenceFamily(
        "0a1", "s4", 3, B95,
        _pow_index(lambda m, k: 5 ** (4 * m),
                   lambda m, k: exact_div(5 ** (4 * m) - 1, 2),
                   "5^(4m) n + (5^(4m)-1)/2"),
        Recur(2, plain_index(1, 0)),
        m_values=(0, 1), default_n_max=2000,
        note="m=1 instance is the section-4 base relation",
    ))
    fams.append(CongruenceFamily(
        "0a2", "s4", 3, B95,
        _pow_index(lambda m, k: 5 ** (4 * m + 4),
                   lambda m, k: exact_div((2 * k + 1) * 5 ** (4 * m + 3) - 1, 2),
                   "5^(4m+4) n + ((2k+1)5^(4m+3)-1)/2"),
        Zero(),
        m_values=(0,), k_values=(4, 5), default_n_max=2000,
    ))

    fams.append(CongruenceFamily(
        "1.x", "s5", 11, B511,
        plain_index(625, 364),
        ThreeTerm(1, plain_index(25, 14), 7, plain_index(1, 0)),
        default_n_max=2000,
        note="order-625 base relation for the (5,11) stream",
    ))
    fams.append(CongruenceFamily(
        "thm12", "s5", 11, B511,
        _pow_index(lambda m, k: 5 ** (12 * m),
                   lambda m, k: exact_div(7 * 5 ** (12 * m) - 7, 12),
                   "5^(12m) n + (7*5^(12m)-7)/12"),
        Recur(2, plain_index(1, 0)),
        m_values=(0, 1), default_n_max=100,
        note="m>=1 indices are beyond desk scale; assurance is the replayed "
             "chain plus the base relation",
    ))
    fams.append(CongruenceFamily(
        "thm13", "s5", 11, B511,
        _pow_index(lambda m, k: 5 ** (12 * m + 12),
                   lambda m, k: exact_div((12 * k + 11) * 5 ** (12 * m + 11) - 7, 12),
                   "5^(12m+12) n + ((12k+11)5^(12m+11)-7)/12"),
        Zero(),
        m_values=(0,), k_values=(4, 5), default_n_max=100,
        note="source statement omits n on the leading power; read as "
             "5^(12m+12)*n by analogy with the other theorems",
    ))

    fams.append(CongruenceFamily(
        "2.x", "s6", 13, B513,
        plain_index(625, 416),
        ThreeTerm(8, plain_index(25, 16), 1, plain_index(1, 0)),
        default_n_max=2000,
        note="order-625 base relation for the (5,13) stream",
    ))
    fams.append(CongruenceFamily(
        "thm14", "s6", 13, B513,
        _pow_index(lambda m, k: 5 ** (6 * m),
                   lambda m, k: exact_div(2 * 5 ** (6 * m) - 2, 3),
                   "5^(6m) n + (2*5^(6m)-2)/3"),
        Recur(8, plain_index(1, 0)),
        m_values=(0, 1), default_n_max=79,
    ))
    fams.append(CongruenceFamily(
        "thm15", "s6", 13, B513,
        _pow_index(lambda m, k: 5 ** (6 * m + 6),
                   lambda m, k: exact_div((3 * k + 1) * 5 ** (6 * m + 5) - 2, 3),
                   "5^(6m+6) n + ((3k+1)5^(6m+5)-2)/3"),
        Zero(),
        m_values=(0,), k_values=(1, 5), default_n_max=79,
    ))

    fams.append(CongruenceFamily(
        "x1", "s8", 11, B28,
        AffineIndex("8(11n+k)+7", lambda m, k: 88, lambda m, k: 8 * k + 7),
        Zero(),
        k_values=tuple(range(1, 11)), default_n_max=500,
    ))

    fams.append(CongruenceFamily(
        "s8", "s7", 17, B8117,
        AffineIndex("27(3n+k)+23", lambda m, k: 81, lambda m, k: 27 * k + 23),
        Zero(),
        k_values=(2, 3), default_n_max=300,
    ))
    fams.append(CongruenceFamily(
        "7.22", "s7", 17, B8117,
        plain_index(81, 50),
        Recur(5, plain_index(1, 0), ref_source=b17),
        m_values=(1,), default_n_max=500,
        note="cross-stream relation onto the 17-regular counts",
    ))
    fams.append(CongruenceFamily(
        "7.15", "s7", 17, b17,
        plain_index(4 ** 8, exact_div(2 * (4 ** 8 - 1), 3)),
        ThreeTerm(2, plain_index(4, 2), 13, plain_index(1, 0)),
        default_n_max=15,
        note="imported order-2 lemma instance at k=8, checked empirically",
    ))
    fams.append(CongruenceFamily(
        "s10", "s7", 17, b17,
        plain_index(4 ** 9, exact_div(2 * (4 ** 8 - 1), 3)),
        Zero(),
        default_n_max=4,
    ))
    fams.append(CongruenceFamily(
        "s11", "s7", 17, b17,
        plain_index(4 ** 9, exact_div(2 * (4 ** 9 - 1), 3)),
        Recur(8, plain_index(1, 0)),
        m_values=(1,), default_n_max=4,
    ))
    fams.append(CongruenceFamily(
        "s12", "s7", 17, b17,
        plain_index(2 * 4 ** 8, exact_div(5 * 4 ** 8 - 2, 3)),
        Recur(1, plain_index(2, 1)),
        m_values=(1,), default_n_max=9,
    ))

    fams.append(CongruenceFamily(
        "dou", "s1", 11, B311,
        _pow_index(lambda m, k: 3 ** m,
                   lambda m, k: exact_div(5 * 3 ** (m - 1) - 1, 2),
                   "3^a n + (5*3^(a-1)-1)/2  (a = m)"),
        Zero(),
        m_values=(2, 3), default_n_max=3000,
        note="imported result, verified empirically for a = 2, 3",
    ))

    # Theorem for the (81,17) stream: the printed statement mixes 4^(9m) and
    # 4^(8m) and claims every m >= 0; the readings and the m-range are probed
    # separately and the outcomes recorded.
    fams.append(CongruenceFamily(
        "s13", "s7", 17, B8117,
        _pow_index(lambda m, k: 81 * 4 ** (9 * m),
                   lambda m, k: 81 * exact_div(2 * 4 ** (8 * m) - 2, 3) + 50,
                   "81*4^(9m) n + 81(2*4^(8m)-2)/3 + 50"),
        Zero(),
        m_values=(1,), default_n_max=1, slow=True,
        note="printed mixed-exponent reading, from m = 1 on",
    ))
    fams.append(CongruenceFamily(
        "s13-m0-probe", "s7", 17, B8117,
        plain_index(81, 50),
        Zero(),
        m_values=(0,), default_n_max=10, expect="record",
        note="the printed m-range starts at 0, but there the progression is "
             "the proportional one (5 times the 17-regular stream), nonzero "
             "already at n = 0; recorded as an erratum candidate for the "
             "stated range",
    ))
    fams.append(CongruenceFamily(
        "s13-uniform", "s7", 17, B8117,
        _pow_index(lambda m, k: 81 * 4 ** (9 * m),
                   lambda m, k: 81 * exact_div(2 * 4 ** (9 * m) - 2, 3) + 50,
                   "81*4^(9m) n + 81(2*4^(9m)-2)/3 + 50"),
        Zero(),
        m_values=(1,), default_n_max=0, slow=True, expect="record",
        note="uniform-exponent reading probe; expected to violate (it is the "
             "index of the proportional family, not the vanishing one)",
    ))
    fams.append(CongruenceFamily(
        "s14", "s7", 17, B8117,
        _pow_index(lambda m, k: 81 * 4 ** (9 * m),
                   lambda m, k: 81 * exact_div(2 * 4 ** (9 * m) - 2, 3) + 50,
                   "81*4^(9m) n + 81(2*4^(9m)-2)/3 + 50"),
        Recur(8, plain_index(81, 50)),
        m_values=(0, 1), default_n_max=0, slow=True,
    ))
    fams.append(CongruenceFamily(
        "s15-printed", "s7", 17, B8117,
        _pow_index(lambda m, k: 162 * 4 ** (8 * m),
                   lambda m, k: 81 * exact_div(5 * 4 ** (8 * m) - 2, 3) + 50,
                   "162*4^(8m) n + 81(5*4^(8m)-2)/3 + 50"),
        Recur(5, plain_index(162, 131)),
        m_values=(0, 1), default_n_max=1, slow=True, expect="record",
        note="printed constant 5^m; the composed derivation suggests constant 1, "
             "both readings recorded",
    ))
    fams.append(CongruenceFamily(
        "s15-unit", "s7", 17, B8117,
        _pow_index(lambda m, k: 162 * 4 ** (8 * m),
                   lambda m, k: 81 * exact_div(5 * 4 ** (8 * m) - 2, 3) + 50,
                   "162*4^(8m) n + 81(5*4^(8m)-2)/3 + 50"),
        Recur(1, plain_index(162, 131)),
        m_values=(1,), default_n_max=1, slow=True, expect="record",
        note="constant-1 reading probe for the same progression",
    ))
    return fams


def family_index() -> dict[str, CongruenceFamily]:
    return {f.id: f for f in build_families()}
