"""Good-prime congruence pipeline over Q.

For elliptic curves A, B over Q the exponent e of the group of extensions of
A by B divides #A(F_p) - #B(F_p) at every prime p coprime to the modulus
S = 2 rad(MN).  Sweeping primes and taking a gcd therefore yields a
divisibility bound on e; the bound only ever shrinks as the sweep grows.

Coefficient tables expand Frobenius traces into Hecke eigenform coefficients
(good indices only; bad-prime coefficients are never synthesized from
reductions and must come from ingested eigenform data).
"""

from dataclasses import dataclass
from math import gcd

from .ec_core import RationalECurve, ap_sweep
from .errors import EmptySweep, InvalidArgument, MissingPrime
from .primes import primes_upto, radical, smallest_prime_factors

INTERPRETATION = "e divides G"


def compute_S(curveA: RationalECurve, curveB: RationalECurve) -> int:
    """S = 2 rad(M N), with the model discriminant standing in for a missing
    conductor (a superset of the bad primes, so the sweep stays sound)."""
    mA = curveA.conductor if curveA.conductor is not None else abs(curveA.discriminant)
    mB = curveB.conductor if curveB.conductor is not None else abs(curveB.discriminant)
    return 2 * radical(mA * mB)


@dataclass(frozen=True)
class CongruenceReport:
    """Result of a prime sweep: differences #A(F_p) - #B(F_p) and their gcd."""

    S: int
    p_max: int
    primes_used: tuple[int, ...]
    differences: dict[int, int]
    gcd_bound: int
    interpretation: str = INTERPRETATION

    def __post_init__(self):
        for p in self.primes_used:
            if self.S % p == 0:
                raise InvalidArgument(f"swept prime {p} divides S = {self.S}")
        g = 0
        for d in self.differences.values():
            g = gcd(g, d)
        if g != self.gcd_bound:
            raise InvalidArgument("gcd_bound does not match recorded differences")

    def to_json_dict(self) -> dict:
        return {
            "S": self.S,
            "p_max": self.p_max,
            "primes_used": list(self.primes_used),
            "differences": {str(p): d for p, d in sorted(self.differences.items())},
            "gcd_bound": self.gcd_bound,
            "interpretation": self.interpretation,
        }


def ext_exponent_gcd_bound(
    curveA: RationalECurve, curveB: RationalECurve, p_max: int
) -> CongruenceReport:
    """Sweep good primes p <= p_max coprime to S and gcd the count differences.

    The exponent e of the extension group of A by B over Q divides the
    reported gcd_bound; an all-zero sweep reports 0 (no constraint).  Primes
    dividing either model discriminant are skipped even when coprime to S
    (possible for non-minimal models); omitting primes never unsounds the
    bound.
    """
    if p_max < 3:
        raise InvalidArgument("p_max must be at least 3")
    S = compute_S(curveA, curveB)
    tracesA = ap_sweep(curveA, p_max, skip_divisors_of=S * curveB.discriminant)
    tracesB = ap_sweep(curveB, p_max, skip_divisors_of=S * curveA.discriminant)
    primes = sorted(set(tracesA) & set(tracesB))
    if not primes:
        raise EmptySweep(f"no admissible prime <= {p_max} (S = {S})")
    differences = {p: tracesB[p] - tracesA[p] for p in primes}  # countA - countB
    g = 0
    for d in differences.values():
        g = gcd(g, d)
    return CongruenceReport(
        S=S,
        p_max=p_max,
        primes_used=tuple(primes),
        differences=differences,
        gcd_bound=g,
    )


@dataclass(frozen=True)
class CoefficientTable:
    """Truncated eigenform coefficients a_n, defined on n coprime to ``bad``.

    Multiplicativity and the prime-power recurrence are re-checked after
    construction.
    """

    precision: int
    an: dict[int, int]
    bad: frozenset[int] = frozenset()
    level: int | None = None

    def __post_init__(self):
        if self.precision < 1:
            raise InvalidArgument("precision must be >= 1")
        if 1 in self.an and self.an[1] != 1:
            raise InvalidArgument("normalization requires a_1 = 1")
        spf = smallest_prime_factors(self.precision)
        for n in self.an:
            if n < 1 or n > self.precision:
                raise InvalidArgument(f"index {n} outside 1..{self.precision}")
            if n == 1:
                continue
            p = spf[n]
            pk, m = p, n // p
            while m % p == 0:
                pk *= p
                m //= p
            if m > 1:
                if self.an[n] != self.an[pk] * self.an[m]:
                    raise InvalidArgument(f"multiplicativity fails at n = {n}")
            elif pk > p and p not in self.bad:
                # a_{p^k} = a_p a_{p^{k-1}} - p a_{p^{k-2}}, a_{p^0} = 1
                expect = self.an[p] * self.an[pk // p] - p * self.an[pk // (p * p)]
                if self.an[n] != expect:
                    raise InvalidArgument(f"Hecke recurrence fails at n = {n}")

    def __contains__(self, n: int) -> bool:
        return n in self.an

    def __getitem__(self, n: int) -> int:
        return self.an[n]


def hecke_expand(
    apmap: dict[int, int], bad: set[int], B: int, level: int | None = None
) -> CoefficientTable:
    """Expand prime coefficients to all n <= B coprime to ``bad``.

    a_{p^{k+1}} = a_p a_{p^k} - p a_{p^{k-1}} at good p, and a_{mn} = a_m a_n
    for coprime m, n.
    """
    if B < 1:
        raise InvalidArgument("precision must be >= 1")
    an: dict[int, int] = {1: 1}
    for p in primes_upto(B):
        if p in bad:
            continue
        if p not in apmap:
            raise MissingPrime(p)
        a_p = apmap[p]
        prev, cur = 1, a_p
        pk = p
        while pk <= B:
            an[pk] = cur
            prev, cur = cur, a_p * cur - p * prev
            pk *= p
    spf = smallest_prime_factors(B)
    for n in range(2, B + 1):
        if n in an:
            continue
        p = spf[n]
        if p in bad:
            continue
        pk, m = p, n // p
        while m % p == 0:
            pk *= p
            m //= p
        if m in an and pk in an:
            an[n] = an[pk] * an[m]
    return CoefficientTable(precision=B, an=an, bad=frozenset(bad), level=level)


def table_from_curve(curve: RationalECurve, B: int) -> CoefficientTable:
    """Good-index coefficient table of the newform attached to the curve.

    Bad primes are read from the conductor when present, else from the model
    discriminant; their coefficients are omitted.
    """
    source = curve.conductor if curve.conductor is not None else curve.discriminant
    bad = {p for p in primes_upto(B) if source % p == 0}
    traces = ap_sweep(curve, B)
    return hecke_expand(traces, bad, B, level=curve.conductor)


@dataclass(frozen=True)
class CongruenceCheck:
    """Outcome of a coefficientwise congruence test a_n = b_n (mod m)."""

    modulus: int
    tested_max: int
    tested_count: int
    violations: tuple[tuple[int, int, int], ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "tested_max": self.tested_max,
            "tested_count": self.tested_count,
            "violations": [list(v) for v in self.violations],
            "holds": self.holds,
        }


def verify_congruence(
    tA: CoefficientTable,
    tB: CoefficientTable,
    m: int,
    index_filter,
) -> CongruenceCheck:
    """Collect violations of a_n = b_n (mod m) over the filtered index range.

    ``index_filter`` is either an integer Q (test indices with gcd(n, Q) = 1)
    or a predicate on n.  Indices missing from either table are skipped; the
    tested range is min(precisions) and is recorded in the result.
    """
    if m < 1:
        raise InvalidArgument("modulus must be >= 1")
    if callable(index_filter):
        keep = index_filter
    else:
        Q = int(index_filter)
        if Q < 1:
            raise InvalidArgument("coprimality mask must be >= 1")
        keep = lambda n: gcd(n, Q) == 1
    limit = min(tA.precision, tB.precision)
    tested = 0
    violations = []
    for n in range(1, limit + 1):
        if not keep(n) or n not in tA or n not in tB:
            continue
        tested += 1
        if (tA[n] - tB[n]) % m:
            violations.append((n, tA[n], tB[n]))
    return CongruenceCheck(
        modulus=m,
        tested_max=limit,
        tested_count=tested,
        violations=tuple(violations),
    )
