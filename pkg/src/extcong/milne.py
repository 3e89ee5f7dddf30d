"""Order of the extension group of abelian varieties over a finite field.

The order formula  q^(dA dB) / D * prod_{a_i != b_j} (1 - a_i/b_j)  is
evaluated exactly from the Weil polynomials of the two varieties: the product
of all root differences is a resultant, shared roots are excluded through the
gcd factorization

    prod_{a_i != b_j} (b_j - a_i) = +-Res(fA/g, fB) * Res(g, fB/g) * disc(g),

and the denominator prod b_j over the surviving pairs comes from constant
terms.  No floating-point root is ever taken.  Group orders are positive, so
the result is reported in absolute value with an explicit sign-ambiguity flag.

Polynomials are tuples of integer coefficients in descending degree order.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .ec_core import FrobeniusData
from .errors import (
    InvalidArgument,
    InvalidWeilPolynomial,
    MismatchedField,
    RepeatedRoot,
)
from .primes import factorize

Poly = tuple[int, ...]


def poly_trim(f) -> Poly:
    f = list(f)
    while len(f) > 1 and f[0] == 0:
        f.pop(0)
    return tuple(f)


def poly_degree(f: Poly) -> int:
    f = poly_trim(f)
    return 0 if f == (0,) else len(f) - 1


def poly_eval(f: Poly, x):
    acc = 0
    for c in f:
        acc = acc * x + c
    return acc


def poly_derivative(f: Poly) -> Poly:
    f = poly_trim(f)
    n = len(f) - 1
    if n == 0:
        return (0,)
    return poly_trim(tuple(c * (n - i) for i, c in enumerate(f[:-1])))


def _bareiss_det(M: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    n = len(M)
    if n == 0:
        return 1
    M = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def resultant(f: Poly, g: Poly) -> int:
    """Res(f, g) as the Sylvester determinant; Res(c, g) = c^deg g for constants."""
    f, g = poly_trim(f), poly_trim(g)
    m, n = poly_degree(f), poly_degree(g)
    if m == 0:
        return f[0] ** n
    if n == 0:
        return g[0] ** m
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return _bareiss_det(rows)


def poly_discriminant(f: Poly) -> int:
    """Discriminant of a monic integer polynomial; 1 for degree <= 1."""
    f = poly_trim(f)
    d = poly_degree(f)
    if d <= 1:
        return 1
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * resultant(f, poly_derivative(f))


def poly_gcd_monic(f: Poly, g: Poly) -> Poly:
    """Monic gcd over Q, returned with integer coefficients.

    For monic integer inputs the monic rational gcd is integral (Gauss).
    """
    a = [Fraction(c) for c in poly_trim(f)]
    b = [Fraction(c) for c in poly_trim(g)]

    def deg(u):
        return len(u) - 1 if any(u) else -1

    def rem(u, v):
        u = u[:]
        dv = deg(v)
        while deg(u) >= dv >= 0:
            q = u[0] / v[0]
            for i in range(dv + 1):
                u[i] = u[i] - q * v[i]
            u.pop(0)
            while u and u[0] == 0 and len(u) - 1 >= dv:
                u.pop(0)
        while len(u) > 1 and u[0] == 0:
            u.pop(0)
        return u if u else [Fraction(0)]

    while any(b):
        a, b = b, rem(a, b)
    lead = a[0]
    monic = [c / lead for c in a]
    out = []
    for c in monic:
        if c.denominator != 1:
            raise ArithmeticError("gcd of monic integer polynomials must be integral")
        out.append(int(c))
    return tuple(out)


def poly_exact_div(f: Poly, g: Poly) -> Poly:
    """f // g for monic integer g with exact zero remainder."""
    f = list(poly_trim(f))
    g = poly_trim(g)
    if g[0] != 1:
        raise ValueError("divisor must be monic")
    dg = poly_degree(g)
    if dg == 0:
        return tuple(f)
    q = []
    while len(f) - 1 >= dg:
        c = f[0]
        q.append(c)
        for i in range(dg + 1):
            f[i] -= c * g[i]
        assert f[0] == 0
        f.pop(0)
    if any(f):
        raise ArithmeticError("division was not exact")
    return poly_trim(tuple(q) or (1,))


def _is_squarefree(f: Poly) -> bool:
    return poly_degree(poly_gcd_monic(f, poly_derivative(f))) == 0


@dataclass(frozen=True)
class WeilPolynomial:
    """Monic integer polynomial of even degree 2d over F_q, constant term q^d.

    Degree-2 polynomials additionally satisfy the Hasse constraint
    (middle coefficient)^2 <= 4q.
    """

    q: int
    coeffs: Poly

    def __post_init__(self):
        object.__setattr__(self, "coeffs", poly_trim(self.coeffs))
        if self.q < 2 or len(factorize(self.q)) != 1:
            raise InvalidWeilPolynomial(f"q = {self.q} is not a prime power")
        deg = poly_degree(self.coeffs)
        if deg < 2 or deg % 2:
            raise InvalidWeilPolynomial("degree must be even and >= 2")
        if self.coeffs[0] != 1:
            raise InvalidWeilPolynomial("polynomial must be monic")
        if self.coeffs[-1] != self.q ** (deg // 2):
            raise InvalidWeilPolynomial(
                f"constant term must be q^d = {self.q ** (deg // 2)}"
            )
        if deg == 2 and self.coeffs[1] ** 2 > 4 * self.q:
            raise InvalidWeilPolynomial(
                f"Hasse bound violated: {self.coeffs[1]}^2 > 4*{self.q}"
            )

    @property
    def degree(self) -> int:
        return poly_degree(self.coeffs)

    @property
    def dimension(self) -> int:
        return self.degree // 2

    @classmethod
    def from_frobenius(cls, fd: FrobeniusData) -> "WeilPolynomial":
        return cls(q=fd.q, coeffs=(1, -fd.trace, fd.q))


@dataclass(frozen=True)
class ExtOrderResult:
    """|order| of the extension group, sign left ambiguous by the formula."""

    value: Fraction
    excluded_pairs: int
    sign_ambiguous: bool = True


def ext_order_ff(
    fA: WeilPolynomial, fB: WeilPolynomial, D: int = 1
) -> ExtOrderResult:
    """Exact |q^(dA dB)/D * prod_{a_i != b_j}(1 - a_i/b_j)|.

    D is the trace-pairing discriminant, supplied by the caller (1 is valid
    whenever Hom = 0).  Pairs with a_i = b_j are excluded from both numerator
    and denominator; their count is deg gcd(fA, fB).
    """
    if fA.q != fB.q:
        raise MismatchedField(f"different base fields: q={fA.q} vs q={fB.q}")
    if D == 0:
        raise InvalidArgument("trace-pairing discriminant D must be nonzero")
    for f in (fA, fB):
        if not _is_squarefree(f.coeffs):
            raise RepeatedRoot(
                "Weil polynomial has a repeated root (unsupported multiplicity)"
            )
    q = fA.q
    g = poly_gcd_monic(fA.coeffs, fB.coeffs)
    excluded = poly_degree(g)
    if excluded == 0:
        num = abs(resultant(fA.coeffs, fB.coeffs))
    else:
        fA_red = poly_exact_div(fA.coeffs, g)
        fB_red = poly_exact_div(fB.coeffs, g)
        num = (
            abs(resultant(fA_red, fB.coeffs))
            * abs(resultant(g, fB_red))
            * abs(poly_discriminant(g))
            * abs(g[-1])  # excluded pairs also leave the denominator
        )
    den = abs(D) * q ** (fA.dimension * fB.dimension)
    return ExtOrderResult(value=Fraction(num, den), excluded_pairs=excluded)


def ext_order_nonisogenous_ec(fdA: FrobeniusData, fdB: FrobeniusData) -> int:
    """(#A(F_q) - #B(F_q))^2; 0 signals that the Hom = 0 hypothesis fails."""
    if (fdA.p, fdA.n) != (fdB.p, fdB.n):
        raise MismatchedField("Frobenius data over different fields")
    return (fdA.count - fdB.count) ** 2


def sha_exponent_bound(fdA: FrobeniusData, fdB: FrobeniusData) -> int:
    """|#A(F_q) - #B(F_q)|: the exponent of the extension group divides this."""
    if (fdA.p, fdA.n) != (fdB.p, fdB.n):
        raise MismatchedField("Frobenius data over different fields")
    return abs(fdA.count - fdB.count)
