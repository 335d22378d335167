"""Veronese embeddings, conjugation-typed point configurations, span sampling.

Monomials of degree ``d`` in ``x0..xm`` are ordered lexicographically with
``x0 > x1 > ... > xm`` (graded-lex restricted to one degree), so
``x0^d`` comes first and ``xm^d`` last.  A :class:`SymmetricForm` stores
weighted coefficients ``a_alpha`` with ``f = sum multinom(alpha) a_alpha x^alpha``;
the form ``(p . x)^d`` then has ``a_alpha = p^alpha``.

A configuration of type ``(e, a)`` has ``e`` real points and ``a``
conjugate pairs ``{Q, conj(Q)}``; ``b = e + 2a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, lcm
from typing import Sequence

import numpy as np

from ._serial import scalar_from_json, scalar_to_json
from .binaryforms import BinaryForm
from .exactmath import (
    GaussianRational,
    as_rational,
    independent_columns,
    rat_kernel,
    rat_rank,
    rat_solve,
)

DEFAULT_POINT_HEIGHT = 10
DEFAULT_SPAN_HEIGHT = 100
DEFAULT_RESAMPLE_BUDGET = 64


class DegenerateConfiguration(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# monomials


@lru_cache(maxsize=None)
def monomials(nvars: int, d: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree ``d`` in ``nvars`` variables, lex order."""
    if nvars == 1:
        return ((d,),)
    out = []
    for e0 in range(d, -1, -1):
        out.extend((e0,) + rest for rest in monomials(nvars - 1, d - e0))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars: int, d: int) -> dict:
    return {alpha: i for i, alpha in enumerate(monomials(nvars, d))}


@lru_cache(maxsize=None)
def multinomials(nvars: int, d: int) -> tuple[int, ...]:
    fd = factorial(d)
    out = []
    for alpha in monomials(nvars, d):
        w = fd
        for e in alpha:
            w //= factorial(e)
        out.append(w)
    return tuple(out)


def _powers_table(x, d, one):
    p = [one]
    for _ in range(d):
        p.append(p[-1] * x)
    return p


def weighted_powers(coords: Sequence, d: int) -> list:
    """All ``p^alpha`` for ``|alpha| = d`` in monomial order.

    Works for ints, Fractions and GaussianRationals; Gaussian-integer input
    is better passed through :func:`gaussian_weighted_powers`.
    """
    n = len(coords)
    tables = [_powers_table(x, d, 1) for x in coords]
    memo: dict = {}

    def rec(i: int, deg: int) -> list:
        key = (i, deg)
        if key in memo:
            return memo[key]
        if i == n - 1:
            res = [tables[i][deg]]
        else:
            res = []
            t = tables[i]
            for e in range(deg, -1, -1):
                pe = t[e]
                sub = rec(i + 1, deg - e)
                if pe == 1:
                    res.extend(sub)
                elif pe == 0:
                    res.extend([0] * len(sub))
                else:
                    res.extend([pe * v for v in sub])
        memo[key] = res
        return res

    return rec(0, d)


def gaussian_weighted_powers(re: Sequence[int], im: Sequence[int], d: int) -> tuple[list[int], list[int]]:
    """Real and imaginary parts of ``q^alpha`` for a Gaussian-integer point ``q = re + i*im``."""
    n = len(re)

    def gmul(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    tables = []
    for x, y in zip(re, im):
        t = [(1, 0)]
        for _ in range(d):
            t.append(gmul(t[-1], (x, y)))
        tables.append(t)
    memo: dict = {}

    def rec(i: int, deg: int):
        key = (i, deg)
        if key in memo:
            return memo[key]
        if i == n - 1:
            r, s = tables[i][deg]
            res = ([r], [s])
        else:
            rr: list[int] = []
            ss: list[int] = []
            for e in range(deg, -1, -1):
                pr, pi = tables[i][e]
                sr, si = rec(i + 1, deg - e)
                if pi == 0:
                    if pr == 1:
                        rr.extend(sr)
                        ss.extend(si)
                    else:
                        rr.extend([pr * v for v in sr])
                        ss.extend([pr * v for v in si])
                else:
                    rr.extend([pr * u - pi * v for u, v in zip(sr, si)])
                    ss.extend([pr * v + pi * u for u, v in zip(sr, si)])
            res = (rr, ss)
        memo[key] = res
        return res

    return rec(0, d)


# ---------------------------------------------------------------------------
# points and configurations


def _exact(x):
    if isinstance(x, GaussianRational):
        return x.re if x.is_real else x
    return as_rational(x)


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of P^m(C); coordinates normalized so the first nonzero one is 1."""

    coords: tuple

    def __post_init__(self):
        c = [_exact(x) for x in self.coords]
        lead = next((x for x in c if x), None)
        if lead is None:
            raise ValueError("all-zero coordinates")
        if lead != 1:
            c = [_exact(x / lead) for x in c]
        object.__setattr__(self, "coords", tuple(c))

    @property
    def m(self) -> int:
        return len(self.coords) - 1

    def is_real(self) -> bool:
        return not any(isinstance(x, GaussianRational) for x in self.coords)

    def conj(self) -> "ProjectivePoint":
        return ProjectivePoint(tuple(x.conj() if isinstance(x, GaussianRational) else x
                                     for x in self.coords))

    def parts(self) -> tuple[list[Fraction], list[Fraction]]:
        re = [x.re if isinstance(x, GaussianRational) else x for x in self.coords]
        im = [x.im if isinstance(x, GaussianRational) else Fraction(0) for x in self.coords]
        return re, im

    def integer_parts(self) -> tuple[list[int], list[int]]:
        """Re/Im of the representative scaled by the lcm of all denominators (> 0)."""
        re, im = self.parts()
        den = lcm(*(x.denominator for x in re + im))
        return [int(x * den) for x in re], [int(x * den) for x in im]

    def to_json(self):
        return [scalar_to_json(x) for x in self.coords]

    @classmethod
    def from_json(cls, obj) -> "ProjectivePoint":
        return cls(tuple(scalar_from_json(x) for x in obj))


def _points_rank(points: Sequence[ProjectivePoint]) -> int:
    return rat_rank([list(p.coords) for p in points])


@dataclass(frozen=True)
class PointConfiguration:
    m: int
    e: int
    a: int
    reals: tuple = ()
    pairs: tuple = ()

    def __post_init__(self):
        if len(self.reals) != self.e or len(self.pairs) != self.a:
            raise ValueError("point counts do not match the type")
        for p in self.reals:
            if not p.is_real() or p.m != self.m:
                raise ValueError("real points must be conjugation-fixed and in P^m")
        for q in self.pairs:
            if q.m != self.m or q == q.conj():
                raise ValueError("pair representatives must be non-real points of P^m")
        pts = self.points()
        for p, q in combinations(pts, 2):
            if _points_rank([p, q]) < 2:
                raise DegenerateConfiguration("configuration points are not pairwise distinct")

    @property
    def b(self) -> int:
        return self.e + 2 * self.a

    @property
    def type(self) -> tuple[int, int]:
        return (self.e, self.a)

    def points(self) -> list[ProjectivePoint]:
        """All ``b`` points: Q_1, conj(Q_1), ..., then the real points."""
        out = []
        for q in self.pairs:
            out += [q, q.conj()]
        return out + list(self.reals)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "e": self.e,
            "a": self.a,
            "reals": [p.to_json() for p in self.reals],
            "pairs": [q.to_json() for q in self.pairs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PointConfiguration":
        return cls(
            int(obj["m"]), int(obj["e"]), int(obj["a"]),
            tuple(ProjectivePoint.from_json(p) for p in obj["reals"]),
            tuple(ProjectivePoint.from_json(q) for q in obj["pairs"]),
        )


@dataclass(frozen=True)
class SymmetricForm:
    """Degree-``d`` form in ``x0..xm`` with weighted coefficients in monomial order."""

    m: int
    d: int
    coeffs: tuple

    def __post_init__(self):
        # ints stay ints (the fast integer elimination path relies on it)
        object.__setattr__(self, "coeffs", tuple(
            x.re if isinstance(x, GaussianRational) and x.is_real else x for x in self.coeffs))
        if len(self.coeffs) != comb(self.m + self.d, self.m):
            raise ValueError("coefficient count does not match (m, d)")
        if not any(self.coeffs):
            raise ValueError("the zero form is not allowed")

    @classmethod
    def from_plain(cls, m: int, d: int, coeffs: Sequence) -> "SymmetricForm":
        w = multinomials(m + 1, d)
        return cls(m, d, tuple(Fraction(c) / k if not isinstance(c, GaussianRational) else c / k
                               for c, k in zip(coeffs, w)))

    @classmethod
    def power(cls, point: Sequence, d: int) -> "SymmetricForm":
        return cls(len(point) - 1, d, tuple(weighted_powers([_exact(x) for x in point], d)))

    @property
    def plain_coeffs(self) -> tuple:
        return tuple(c * k for c, k in zip(self.coeffs, multinomials(self.m + 1, self.d)))

    def is_real(self) -> bool:
        return not any(isinstance(x, GaussianRational) and not x.is_real for x in self.coeffs)

    def scaled(self, lam) -> "SymmetricForm":
        return SymmetricForm(self.m, self.d, tuple(lam * x for x in self.coeffs))

    def as_binary(self) -> BinaryForm:
        if self.m != 1:
            raise ValueError("not a binary form")
        return BinaryForm(self.d, tuple(self.coeffs))

    @classmethod
    def from_binary(cls, f: BinaryForm) -> "SymmetricForm":
        return cls(1, f.d, tuple(f.coeffs))

    def __eq__(self, other):
        if not isinstance(other, SymmetricForm):
            return NotImplemented
        return (self.m, self.d) == (other.m, other.d) and all(
            x == y for x, y in zip(self.coeffs, other.coeffs))

    __hash__ = None

    def to_json(self) -> dict:
        return {"m": self.m, "d": self.d, "weighted_coeffs": [scalar_to_json(x) for x in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "SymmetricForm":
        return cls(int(obj["m"]), int(obj["d"]), tuple(scalar_from_json(x) for x in obj["weighted_coeffs"]))


# ---------------------------------------------------------------------------
# embedding and spans


def veronese_embed(p: ProjectivePoint, d: int) -> list:
    """Coefficients of ``(p . x)^d`` in the monomial basis (multinomial weights included)."""
    w = multinomials(p.m + 1, d)
    return [_exact(k * v) for k, v in zip(w, weighted_powers(list(p.coords), d))]


def _real_vectors(A: PointConfiguration, d: int) -> list[list[int]]:
    """Integer real basis of <nu_d(A)>(R) in weighted coordinates.

    Pair ``j`` contributes Re and Im of ``q_j^alpha`` (``q_j`` a Gaussian-integer
    representative), each real point its own weighted powers.
    """
    vecs = []
    for q in A.pairs:
        re, im = q.integer_parts()
        r, s = gaussian_weighted_powers(re, im, d)
        vecs += [r, s]
    for p in A.reals:
        re, _ = p.integer_parts()
        vecs.append(weighted_powers(re, d))
    return vecs


@dataclass
class SpanBasis:
    """Real basis of ``<nu_d(A)>(R)`` with an injective coordinate projection."""

    config: PointConfiguration
    d: int
    vectors: list
    coords: list  # b coordinate indices on which the basis is invertible

    def project(self, vec: Sequence) -> list:
        return [vec[i] for i in self.coords]

    def solve(self, coeffs: Sequence) -> list[Fraction] | None:
        """Real span coordinates of ``coeffs``, or None if it is not in the span."""
        square = [[v[i] for v in self.vectors] for i in self.coords]
        x = rat_solve(square, self.project(coeffs))
        if x is None:
            return None
        den = lcm(*(c.denominator for c in x))
        ints = [int(c * den) for c in x]
        for k, target in enumerate(coeffs):
            s = 0
            for c, v in zip(ints, self.vectors):
                if c:
                    s += c * v[k]
            if s != target * den:
                return None
        return x

    def complex_coordinates(self, x: Sequence[Fraction]) -> list:
        """Coefficients on nu_d(Q_1), nu_d(conj Q_1), ..., nu_d(P_1), ...

        ``u Re(v) + w Im(v) = c v + conj(c) conj(v)`` with ``c = (u - i w)/2``.
        """
        out = []
        for j in range(self.config.a):
            u, w = x[2 * j], x[2 * j + 1]
            c = GaussianRational(u / 2, -w / 2)
            out += [c, c.conj()]
        return out + list(x[2 * self.config.a:])


def real_span_basis(A: PointConfiguration, d: int) -> SpanBasis:
    if d < A.b - 1:
        raise DegenerateConfiguration(f"need d >= b - 1 (d={d}, b={A.b})")
    vecs = _real_vectors(A, d)
    cols = independent_columns(vecs)
    if len(cols) < A.b:
        raise DegenerateConfiguration(
            f"nu_{d}(A) spans only dimension {len(cols)} < b={A.b}; points are in special position")
    return SpanBasis(A, d, vecs, cols)


def _complex_embedded(A: PointConfiguration, basis: SpanBasis) -> list[list]:
    """Projected nu_d of every point of A (complex), for sub-span rank tests."""
    out = []
    for j in range(A.a):
        r, s = basis.vectors[2 * j], basis.vectors[2 * j + 1]
        out.append([GaussianRational(r[i], s[i]) for i in basis.coords])
        out.append([GaussianRational(r[i], -s[i]) for i in basis.coords])
    for h in range(A.e):
        v = basis.vectors[2 * A.a + h]
        out.append([v[i] for i in basis.coords])
    return out


def is_generic_in_span(coeffs: Sequence, basis: SpanBasis) -> bool:
    """``f`` lies in <nu_d(A)> but in no <nu_d(A')> for a proper subset A'.

    Rank tests run on the projected coordinates, which are injective on the
    full span; it suffices to test the ``b`` maximal proper subsets.
    """
    if basis.solve(coeffs) is None:
        return False
    pts = _complex_embedded(basis.config, basis)
    target = basis.project(coeffs)
    for drop in range(len(pts)):
        sub = [v for k, v in enumerate(pts) if k != drop]
        if rat_rank(sub + [target]) == rat_rank(sub):
            return False
    return True


@dataclass
class SpanSample:
    form: SymmetricForm
    config: PointConfiguration
    weights: list  # integer coefficients on the real span basis
    seed: int
    resamples: int

    def to_json(self) -> dict:
        return {
            "form": self.form.to_json(),
            "config": self.config.to_json(),
            "weights": self.weights,
            "seed": self.seed,
            "resamples": self.resamples,
        }


def _rng(seed):
    return np.random.default_rng(seed)


def sample_in_span(A: PointConfiguration, d: int, rng_seed: int,
                   height_bound: int = DEFAULT_SPAN_HEIGHT,
                   budget: int = DEFAULT_RESAMPLE_BUDGET,
                   basis: SpanBasis | None = None) -> SpanSample:
    """Random integer combination of the real span basis, certified generic."""
    basis = basis or real_span_basis(A, d)
    rng = _rng(rng_seed)
    for attempt in range(budget):
        w = [int(x) for x in rng.integers(-height_bound, height_bound + 1, size=A.b)]
        if not any(w):
            continue
        coeffs = [0] * len(basis.vectors[0])
        for c, v in zip(w, basis.vectors):
            if c:
                coeffs = [x + c * y for x, y in zip(coeffs, v)]
        if is_generic_in_span(coeffs, basis):
            form = SymmetricForm(A.m, d, tuple(coeffs))
            return SpanSample(form, A, w, rng_seed, attempt)
    raise BudgetExhausted(f"no generic span sample after {budget} draws")


def _random_vector(rng, n: int, h: int) -> list[int]:
    return [int(x) for x in rng.integers(-h, h + 1, size=n)]


def sample_configuration(m: int, e: int, a: int, rng_seed: int,
                         height_bound: int = DEFAULT_POINT_HEIGHT,
                         span_condition: bool = True,
                         budget: int = 256,
                         fixed_pairs: Sequence[ProjectivePoint] = ()) -> PointConfiguration:
    """Random configuration of type ``(e, a)`` with small integer/Gaussian-integer coordinates.

    With ``span_condition`` the points are also required to be in linear
    general position (every ``min(m+1, b)`` of them independent), which
    gives ``dim <A> = min(m, b-1)`` and ``dim <pairs> = min(m, 2a-1)``.
    ``fixed_pairs`` pins the first pair representatives.
    """
    if m < 1 or e < 0 or a < 0 or e + 2 * a < 1:
        raise ValueError("need m >= 1, e, a >= 0 and e + 2a >= 1")
    rng = _rng(rng_seed)
    n = m + 1
    for _ in range(budget):
        reals = []
        for _ in range(e):
            v = _random_vector(rng, n, height_bound)
            if any(v):
                reals.append(ProjectivePoint(tuple(Fraction(x) for x in v)))
        pairs = list(fixed_pairs)
        while len(pairs) < a:
            re = _random_vector(rng, n, height_bound)
            im = _random_vector(rng, n, height_bound)
            if rat_rank([re, im]) < 2:
                continue
            pairs.append(ProjectivePoint(tuple(GaussianRational(x, y) for x, y in zip(re, im))))
        if len(reals) < e:
            continue
        try:
            A = PointConfiguration(m, e, a, tuple(reals), tuple(pairs[:a]))
        except DegenerateConfiguration:
            continue
        if span_condition and not in_general_position(A):
            continue
        return A
    raise BudgetExhausted("configuration rejection budget exhausted; raise the height bound")


def in_general_position(A: PointConfiguration) -> bool:
    pts = A.points()
    k = min(A.m + 1, len(pts))
    return all(_points_rank(sub) == k for sub in combinations(pts, k))


# ---------------------------------------------------------------------------
# catalecticants


def catalecticant_multi(f: SymmetricForm, k: int) -> list[list]:
    """Contraction matrix: rows degree-``k`` monomials, columns degree-``(d-k)``."""
    if not 0 <= k <= f.d:
        raise ValueError(f"k={k} outside 0..{f.d}")
    n = f.m + 1
    idx = monomial_index(n, f.d)
    cols = monomials(n, f.d - k)
    a = f.coeffs
    rows = []
    for alpha in monomials(n, k):
        rows.append([a[idx[tuple(x + y for x, y in zip(alpha, beta))]] for beta in cols])
    return rows


def catalecticant_rank(f: SymmetricForm, k: int, stop_at: int | None = None) -> int:
    """Exact rank of the k-th catalecticant, or ``stop_at`` once that many
    independent columns have been seen (a certified lower bound)."""
    rows = catalecticant_multi(f, k)
    if stop_at is None and len(rows) * len(rows[0]) <= 40000:
        return rat_rank(rows)
    want = min(len(rows), stop_at) if stop_at is not None else len(rows)
    return len(independent_columns(rows, want))


def border_rank_lower(f: SymmetricForm, target: int | None = None) -> tuple[int, int]:
    """Max catalecticant rank over ``k = 1..floor(d/2)``; returns (bound, k).

    Stops early once ``target`` is reached.
    """
    best, best_k = 0, 0
    for k in range(1, f.d // 2 + 1):
        r = catalecticant_rank(f, k, stop_at=target)
        if r > best:
            best, best_k = r, k
        if target is not None and best >= target:
            break
    return best, best_k


# ---------------------------------------------------------------------------
# lines and sigma_2


def line_map_matrix(R0: Sequence, R1: Sequence, d: int) -> list[list]:
    """Matrix of ``Sym^d`` of the map ``(s, t) -> s R0 + t R1`` in weighted coordinates.

    Row ``alpha`` holds the coefficients of ``s^(d-k) t^k`` in
    ``prod_j (s R0_j + t R1_j)^alpha_j``.
    """
    n = len(R0)
    rows = []
    lin = [[Fraction(x), Fraction(y)] for x, y in zip(R0, R1)]
    pow_cache: dict = {}

    def lpow(j, e):
        key = (j, e)
        if key not in pow_cache:
            p = [Fraction(1)]
            for _ in range(e):
                q = [Fraction(0)] * (len(p) + 1)
                for i, c in enumerate(p):
                    q[i] += c * lin[j][0]
                    q[i + 1] += c * lin[j][1]
                p = q
            pow_cache[key] = p
        return pow_cache[key]

    for alpha in monomials(n, d):
        poly = [Fraction(1)]
        for j, e in enumerate(alpha):
            if e:
                lp = lpow(j, e)
                q = [Fraction(0)] * (len(poly) + len(lp) - 1)
                for i, c in enumerate(poly):
                    if c:
                        for k2, c2 in enumerate(lp):
                            q[i + k2] += c * c2
                poly = q
        rows.append(poly)
    return rows


def pushforward_binary(g: BinaryForm, R0: Sequence, R1: Sequence, m: int) -> SymmetricForm:
    """The ambient form obtained by substituting the line ``s R0 + t R1``."""
    M = line_map_matrix(R0, R1, g.d)
    coeffs = [sum((x * y for x, y in zip(row, g.coeffs)), Fraction(0)) for row in M]
    return SymmetricForm(m, g.d, tuple(coeffs))


def restrict_to_line(f: SymmetricForm, R0: Sequence, R1: Sequence) -> BinaryForm | None:
    """Binary form ``g`` with ``pushforward(g) = f``, or None if ``f`` is not on that line."""
    M = line_map_matrix(R0, R1, f.d)
    x = rat_solve(M, list(f.coeffs))
    if x is None:
        return None
    return BinaryForm(f.d, tuple(x))


def essential_line(f: SymmetricForm) -> tuple[list, list]:
    """Two real vectors spanning the column space of the first catalecticant.

    For border rank 2 that space is the line <Z> carrying the unique scheme.
    """
    cat1 = catalecticant_multi(f, 1)
    cols = independent_columns(cat1, 2)
    if len(cols) != 2:
        raise DegenerateConfiguration("first catalecticant does not have rank 2")
    return [row[cols[0]] for row in cat1], [row[cols[1]] for row in cat1]


SIGMA2_CLASSES = ("real-pair", "conj-pair", "tangential")


def classify_sigma2(f: SymmetricForm) -> str:
    """Real-pair / conj-pair / tangential type of a real border-rank-2 form."""
    if not f.is_real():
        raise ValueError("classification needs a real form")
    ranks = [catalecticant_rank(f, k) for k in range(1, f.d // 2 + 1)]
    if max(ranks) != 2:
        raise ValueError(f"border rank is not 2 (catalecticant ranks {ranks})")
    if f.d < 3:
        raise ValueError("degree must be >= 3")
    R0, R1 = essential_line(f)
    g = restrict_to_line(f, R0, R1)
    if g is None:
        raise DegenerateConfiguration("form does not restrict to its essential line")
    from .binaryforms import catalecticant_binary

    kernel = rat_kernel(catalecticant_binary(g, 2), 3)
    if len(kernel) != 1:
        raise DegenerateConfiguration("degree-2 apolar locus is not a single quadric")
    q0, q1, q2 = kernel[0]
    disc = q1 * q1 - 4 * q0 * q2
    if disc > 0:
        return "real-pair"
    if disc < 0:
        return "conj-pair"
    return "tangential"


def tangential_form(p: Sequence, v: Sequence, d: int) -> SymmetricForm:
    """``(p . x)^(d-1) (v . x)``: a point on the tangent line to nu_d(p) toward v."""
    pp = weighted_powers([Fraction(x) for x in p], d - 1)
    n = len(p)
    idx = monomial_index(n, d)
    coeffs = [Fraction(0)] * len(idx)
    for beta, val in zip(monomials(n, d - 1), pp):
        for j in range(n):
            if v[j]:
                alpha = list(beta)
                alpha[j] += 1
                # weighted coefficient of the polarization: mean over the d slots
                coeffs[idx[tuple(alpha)]] += Fraction(val * v[j] * (beta[j] + 1), d)
    return SymmetricForm(n - 1, d, tuple(coeffs))
