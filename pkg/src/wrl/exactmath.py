"""Exact arithmetic core.

Rationals are :class:`fractions.Fraction` (always in lowest terms with a
positive denominator).  This module adds Gaussian rationals, a small dense
univariate polynomial type, fraction-free linear algebra and Sturm chains.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "GaussianRational",
    "UniPoly",
    "as_rational",
    "parse_rational",
    "rat_rank",
    "rat_kernel",
    "rat_solve",
    "independent_columns",
    "poly_gcd",
    "is_squarefree",
    "squarefree_part",
    "sturm_chain",
    "sturm_distinct_real_roots",
    "count_roots_in",
    "isolate_real_roots",
    "rational_roots",
]


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, GaussianRational):
        if x.im:
            raise ValueError(f"{x} is not real")
        return x.re
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; floats and zero denominators are rejected."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


class GaussianRational:
    """Element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", as_rational(re))
        object.__setattr__(self, "im", as_rational(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        return cls(x, 0)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n, (self.im * o.re - self.re * o.im) / n
        )

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussianRational(1) / (self ** (-k))
        result, base = GaussianRational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


I = GaussianRational(0, 1)


def _is_zero(x) -> bool:
    return not x


def conj(x):
    """Complex conjugate of an exact scalar (identity on rationals)."""
    if isinstance(x, GaussianRational):
        return x.conj()
    return x


# ---------------------------------------------------------------------------
# univariate polynomials


class UniPoly:
    """Dense univariate polynomial, coefficients stored low-to-high.

    Trailing zeros are stripped so ``coeffs[-1]`` is the leading coefficient
    (the zero polynomial has ``coeffs == ()``).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [x if isinstance(x, GaussianRational) else as_rational(x) for x in coeffs]
        c = [x.re if isinstance(x, GaussianRational) and x.is_real else x for x in c]
        while c and _is_zero(c[-1]):
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-r, 1])
        return p

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self) -> bool:
        return all(not isinstance(c, GaussianRational) for c in self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = out[i + j] + x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        result = UniPoly([1])
        for _ in range(k):
            result = result * self
        return result

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead
        if len(rem) - 1 < dq:
            return UniPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            q = rem[k + dq] / lead
            quot[k] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - q * c
        return UniPoly(quot), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def primitive_int_coeffs(self) -> list[int]:
        """Integer multiple of a real polynomial with content 1 and positive lead."""
        if not self.is_real():
            raise ValueError("polynomial has non-real coefficients")
        den = lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g == 0:
            return ints
        if ints[-1] < 0:
            g = -g
        return [x // g for x in ints]


def _as_poly(p) -> UniPoly:
    return p if isinstance(p, UniPoly) else UniPoly(p)


def poly_gcd(p, q) -> UniPoly:
    """Monic gcd over the coefficient field."""
    p, q = _as_poly(p), _as_poly(q)
    if p.is_zero() and q.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not q.is_zero():
        p, q = q, p % q
    return p.monic()


def squarefree_part(p) -> UniPoly:
    p = _as_poly(p)
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree part")
    if p.degree <= 0:
        return UniPoly([1])
    return (p // poly_gcd(p, p.derivative())).monic()


def is_squarefree(p) -> bool:
    p = _as_poly(p)
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree <= 0:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_chain(p) -> list[UniPoly]:
    """Sturm sequence p, p', -rem(p, p'), ... of a real polynomial."""
    p = _as_poly(p)
    if not p.is_real():
        raise ValueError("Sturm chains need real coefficients")
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _variations(signs: Iterable[int]) -> int:
    n, last = 0, 0
    for s in signs:
        if s:
            if last and s != last:
                n += 1
            last = s
    return n


def _int_scaled(q: UniPoly) -> list[int]:
    """Positive integer multiple of a real polynomial (signs preserved)."""
    den = lcm(*(Fraction(c).denominator for c in q.coeffs)) if q.coeffs else 1
    ints = [int(c * den) for c in q.coeffs]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints


def _sign_at(ints: Sequence[int], x: Fraction) -> int:
    # sign of den^deg * q(num/den), all in integers
    n, d = x.numerator, x.denominator
    acc, dpow = 0, 1
    for c in reversed(ints):
        acc = acc * n + c * dpow
        dpow *= d
    return (acc > 0) - (acc < 0)


def _var_at(chain: Sequence, x) -> int:
    x = Fraction(x)
    return _variations(_sign_at(q if isinstance(q, list) else _int_scaled(q), x) for q in chain)


def _var_at_inf(chain: Sequence[UniPoly], negative: bool) -> int:
    signs = []
    for q in chain:
        s = _sign(q.lead)
        if negative and q.degree % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def sturm_distinct_real_roots(p) -> int:
    """Number of distinct real roots of a nonzero real polynomial."""
    p = _as_poly(p)
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if p.degree <= 0:
        return 0
    chain = sturm_chain(squarefree_part(p))
    return _var_at_inf(chain, True) - _var_at_inf(chain, False)


def count_roots_in(p, lo, hi, chain=None) -> int:
    """Distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    if chain is None:
        chain = sturm_chain(squarefree_part(p))
    chain = [q if isinstance(q, list) else _int_scaled(q) for q in chain]
    return _var_at(chain, lo) - _var_at(chain, hi)


def _root_bound(p: UniPoly) -> Fraction:
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p, width=None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint half-open rational intervals (lo, hi], one per distinct real root.

    Intervals are refined by bisection until narrower than ``width`` when given.
    """
    p = squarefree_part(_as_poly(p))
    if p.degree <= 0:
        return []
    chain = [_int_scaled(q) for q in sturm_chain(p)]
    bound = _root_bound(p)
    todo = [(-bound, bound)]
    out = []
    while todo:
        lo, hi = todo.pop()
        n = count_roots_in(p, lo, hi, chain)
        if n == 0:
            continue
        if n == 1 and (width is None or hi - lo < width):
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        todo.append((mid, hi))
        todo.append((lo, mid))
    out.sort()
    return out


def rational_roots(p) -> list[Fraction]:
    """All distinct rational roots of a real polynomial (no factorization needed).

    A root p/q in lowest terms has q dividing the integer leading coefficient L,
    so distinct candidates are separated by at least 1/L**2; isolating each real
    root below that width leaves one candidate, tested exactly.
    """
    p = _as_poly(p)
    if p.degree <= 0:
        return []
    sf = squarefree_part(p)
    ints = UniPoly(sf.primitive_int_coeffs())
    L = abs(ints.lead)
    found = []
    for lo, hi in isolate_real_roots(sf, Fraction(1, 2 * L * L)):
        if sf(hi) == 0:
            found.append(hi)
            continue
        cand = ((lo + hi) / 2).limit_denominator(L)
        if lo < cand <= hi and sf(cand) == 0:
            found.append(cand)
    return found


# ---------------------------------------------------------------------------
# linear algebra


def _is_rational_entry(x) -> bool:
    return isinstance(x, (int, Fraction))


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * den) for x in row])
    return out


def _bareiss_echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form of an integer matrix, in place.

    Returns the nonzero echelon rows and their pivot columns.  Every division
    is exact (Bareiss' identity), so entries stay integers of bounded size.
    """
    m = rows
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        rowr = m[r]
        for i in range(r + 1, nrows):
            rowi = m[i]
            f = rowi[c]
            if f:
                for j in range(c + 1, ncols):
                    rowi[j] = (p * rowi[j] - f * rowr[j]) // prev
            else:
                for j in range(c + 1, ncols):
                    rowi[j] = (p * rowi[j]) // prev
            rowi[c] = 0
        prev = p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _field_echelon(rows: list[list], ncols: int) -> tuple[list[list], list[int]]:
    """Gauss-Jordan echelon over any exact field (used for Q(i) entries)."""
    m = [[Fraction(x) if isinstance(x, int) else x for x in row] for row in rows]
    nrows = len(m)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _ncols(rows, ncols):
    if ncols is not None:
        return ncols
    return len(rows[0]) if rows else 0


def _echelon(rows, ncols):
    rows = [list(r) for r in rows]
    if all(_is_rational_entry(x) for row in rows for x in row):
        ech, piv = _bareiss_echelon(_integer_rows(rows), ncols)
        return ech, piv, True
    ech, piv = _field_echelon(rows, ncols)
    return ech, piv, False


def rat_rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    """Exact rank of a dense matrix with rational (or Q(i)) entries."""
    n = _ncols(rows, ncols)
    if not rows or n == 0:
        return 0
    return len(_echelon(rows, n)[1])


def _back_substitute(ech, pivots, ncols, integer: bool) -> list[list]:
    """Kernel basis from an echelon form: one vector per free column."""
    pivset = set(pivots)
    basis = []
    for free in (c for c in range(ncols) if c not in pivset):
        v: list = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in reversed(list(zip(ech, pivots))):
            s = sum((row[j] * v[j] for j in range(pc + 1, ncols) if v[j]), Fraction(0))
            v[pc] = -s / row[pc]
        basis.append(v)
    return basis


def _matvec(rows, v):
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in rows]


def rat_kernel(rows: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Exact basis of the right kernel, one vector per non-pivot column.

    Rank-nullity and ``M v = 0`` are re-checked before returning.
    """
    n = _ncols(rows, ncols)
    if n == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    ech, pivots, integer = _echelon(rows, n)
    basis = _back_substitute(ech, pivots, n, integer)
    if len(pivots) + len(basis) != n:
        raise AssertionError("rank-nullity violated")
    for v in basis:
        if any(_matvec(rows, v)):
            raise AssertionError("kernel vector fails M v = 0")
    return basis


def rat_solve(rows: Sequence[Sequence], rhs: Sequence) -> list | None:
    """One exact solution of ``M x = rhs`` or ``None`` if inconsistent.

    Free variables are set to zero, so the solution is unique whenever M has
    full column rank.
    """
    n = len(rows[0]) if rows else 0
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    ech, pivots, integer = _echelon(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    x: list = [Fraction(0)] * n
    for row, pc in reversed(list(zip(ech, pivots))):
        s = row[n] - sum((row[j] * x[j] for j in range(pc + 1, n) if x[j]), Fraction(0))
        x[pc] = s / row[pc]
    return x


def _column_order(ncols: int) -> list[int]:
    """Deterministic spread-out scan order (golden-ratio stride, coprime to ncols)."""
    if ncols <= 2:
        return list(range(ncols))
    step = max(1, int(ncols * 0.6180339887))
    while gcd(step, ncols) != 1:
        step += 1
    return [(k * step) % ncols for k in range(ncols)]


def independent_columns(rows: Sequence[Sequence], want: int | None = None) -> list[int]:
    """Indices of independent columns, found greedily.

    Stops once ``want`` columns (default: the row count) are found.  Columns
    are visited in a spread-out deterministic order so that structured zero
    blocks (e.g. all monomials divisible by a coordinate that vanishes at one
    point) do not force a scan of the whole matrix.  The returned indices are
    sorted.
    """
    nrows = len(rows)
    target = nrows if want is None else want
    if target == 0 or nrows == 0:
        return []
    ncols = len(rows[0])
    integer = all(isinstance(x, int) for row in rows for x in row)
    # reduced column vectors, each with a distinct leading index
    basis: list[tuple[int, list]] = []
    chosen: list[int] = []
    for c in _column_order(ncols):
        v = [rows[i][c] for i in range(nrows)]
        if not integer:
            v = [Fraction(x) if isinstance(x, int) else x for x in v]
        for piv, b in basis:
            if v[piv]:
                if integer:
                    p, q = b[piv], v[piv]
                    v = [p * x - q * y for x, y in zip(v, b)]
                    g = 0
                    for x in v:
                        g = gcd(g, x)
                    if g > 1:
                        v = [x // g for x in v]
                else:
                    f = v[piv] / b[piv]
                    v = [x - f * y for x, y in zip(v, b)]
        lead = next((i for i, x in enumerate(v) if x), None)
        if lead is None:
            continue
        basis.append((lead, v))
        chosen.append(c)
        if len(chosen) == target:
            break
    return sorted(chosen)
