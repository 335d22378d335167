"""Binary forms: catalecticants, complex/border/real Waring rank, witnesses.

Conventions
-----------
A degree-``d`` binary form is stored by its *weighted* coefficients
``a_0..a_d`` with ``f = sum_k C(d, k) a_k x0^(d-k) x1^k``.  With this
choice ``(u x0 + v x1)^d`` has ``a_k = u^(d-k) v^k`` and the catalecticant
is the plain Hankel matrix of ``(a_k)``.

An apolar (kernel) vector ``g = (g_0..g_r)`` of the level-``r``
catalecticant is read as the univariate polynomial ``g_0 + g_1 z + ...``.
Its root ``z`` stands for the linear form ``x0 + z x1``; a drop in degree
below ``r`` means a root at infinity, standing for ``x1``.  The
dehomogenization of ``f`` itself uses ``z = x1 / x0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from ._serial import scalar_from_json, scalar_to_json
from .exactmath import (
    GaussianRational,
    UniPoly,
    as_rational,
    conj,
    is_squarefree,
    isolate_real_roots,
    poly_gcd,
    rat_kernel,
    rat_rank,
    rat_solve,
    rational_roots,
    sturm_distinct_real_roots,
)

log = logging.getLogger(__name__)

DEFAULT_SEARCH_HEIGHTS = (1, 2, 4, 8)
DEFAULT_SEARCH_BUDGET = 512
MAX_HALVINGS = 64


def _scalar(x):
    if isinstance(x, GaussianRational):
        return x.re if x.is_real else x
    return as_rational(x)


@dataclass(frozen=True)
class BinaryForm:
    """Degree-``d`` binary form given by weighted coefficients ``a_0..a_d``."""

    d: int
    coeffs: tuple

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("degree must be >= 1")
        c = tuple(_scalar(x) for x in self.coeffs)
        if len(c) != self.d + 1:
            raise ValueError(f"expected {self.d + 1} coefficients, got {len(c)}")
        if not any(c):
            raise ValueError("the zero form is not allowed")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, weighted: bool = True) -> "BinaryForm":
        """Build from coefficients in the ``x0^(d-i) x1^i`` basis.

        With ``weighted=False`` the input is the plain polynomial coefficient
        list and binomial weights are divided out.
        """
        d = len(coeffs) - 1
        c = [_scalar(x) for x in coeffs]
        if not weighted:
            c = [x / comb(d, i) for i, x in enumerate(c)]
        return cls(d, tuple(c))

    @classmethod
    def power(cls, u, v, d: int, coeff=1) -> "BinaryForm":
        """``coeff * (u x0 + v x1)^d``."""
        u, v = _scalar(u), _scalar(v)
        return cls(d, tuple(coeff * u ** (d - k) * v ** k for k in range(d + 1)))

    @classmethod
    def root_power(cls, alpha, d: int, coeff=1) -> "BinaryForm":
        """``coeff * (z - alpha)^d`` homogenized, i.e. ``coeff * (x1 - alpha x0)^d``."""
        return cls.power(-_scalar(alpha), 1, d, coeff)

    @property
    def plain_coeffs(self) -> tuple:
        return tuple(comb(self.d, k) * a for k, a in enumerate(self.coeffs))

    def is_real(self) -> bool:
        return not any(isinstance(x, GaussianRational) for x in self.coeffs)

    def conj(self) -> "BinaryForm":
        return BinaryForm(self.d, tuple(conj(x) for x in self.coeffs))

    def dehomogenize(self) -> UniPoly:
        """``f(1, z)`` as a polynomial in ``z = x1/x0``."""
        return UniPoly(self.plain_coeffs)

    def scaled(self, lam) -> "BinaryForm":
        return BinaryForm(self.d, tuple(lam * x for x in self.coeffs))

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.d != other.d:
            raise ValueError("degree mismatch")
        return BinaryForm(self.d, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def to_json(self) -> dict:
        return {"d": self.d, "weighted_coeffs": [scalar_to_json(x) for x in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "BinaryForm":
        return cls(int(obj["d"]), tuple(scalar_from_json(x) for x in obj["weighted_coeffs"]))


# ---------------------------------------------------------------------------
# apolarity


def catalecticant_binary(f: BinaryForm, k: int) -> list[list]:
    """The ``(d-k+1) x (k+1)`` Hankel matrix ``[a_{i+j}]``."""
    if not 0 <= k <= f.d:
        raise ValueError(f"k={k} outside 0..{f.d}")
    a = f.coeffs
    return [[a[i + j] for j in range(k + 1)] for i in range(f.d - k + 1)]


def border_rank_binary(f: BinaryForm) -> int:
    return rat_rank(catalecticant_binary(f, f.d // 2))


def apolar_kernel(f: BinaryForm, r: int) -> list[UniPoly]:
    """Basis of the degree-``r`` part of the apolar ideal, as polynomials in z."""
    return [UniPoly(v) for v in rat_kernel(catalecticant_binary(f, r), r + 1)]


def _infinity_multiplicity(g: UniPoly, level: int) -> int:
    return level - g.degree


def projective_squarefree(g: UniPoly, level: int) -> bool:
    """Whether the degree-``level`` form with dehomogenization ``g`` has no repeated root."""
    if g.is_zero() or g.degree > level:
        return False
    if _infinity_multiplicity(g, level) > 1:
        return False
    return g.degree <= 0 or is_squarefree(g)


def projective_real_root_count(g: UniPoly, level: int) -> int:
    """Distinct real roots on P^1, the root at infinity included."""
    n = 1 if _infinity_multiplicity(g, level) > 0 else 0
    if g.degree > 0:
        n += sturm_distinct_real_roots(g)
    return n


def is_real_rooted_squarefree(g: UniPoly, level: int) -> bool:
    return (
        g.is_real()
        and projective_squarefree(g, level)
        and projective_real_root_count(g, level) == level
    )


def form_real_root_count(f: BinaryForm) -> int:
    """Distinct real roots of ``f`` itself on P^1(R)."""
    return projective_real_root_count(f.dehomogenize(), f.d)


def is_hyperbolic(f: BinaryForm) -> bool:
    """``f`` has ``d`` distinct real roots (then its real rank is exactly ``d``)."""
    return f.is_real() and form_real_root_count(f) == f.d


def _combination(basis: Sequence[UniPoly], weights: Iterable[int]) -> UniPoly:
    acc = UniPoly()
    for w, g in zip(weights, basis):
        if w:
            acc = acc + g * w
    return acc


def _candidates(basis: Sequence[UniPoly], rng, heights, budget: int):
    yield from basis
    if len(basis) < 2:
        return
    per_height = max(1, budget // len(heights))
    for h in heights:
        for _ in range(per_height):
            w = [int(x) for x in rng.integers(-h, h + 1, size=len(basis))]
            if any(w):
                yield _combination(basis, w)


def complex_rank_binary(f: BinaryForm, seed: int = 0,
                        budget: int = DEFAULT_SEARCH_BUDGET) -> tuple[int, UniPoly]:
    """Sylvester's algorithm: complex Waring rank and a squarefree apolar witness.

    The witness has level equal to the returned rank (a degree drop encodes
    a root at infinity).
    """
    rng = np.random.default_rng(seed)
    r0 = border_rank_binary(f)
    kernel = apolar_kernel(f, r0)
    for g in _candidates(kernel, rng, DEFAULT_SEARCH_HEIGHTS, budget):
        if projective_squarefree(g, r0):
            return r0, g
    if len(kernel) >= 2:
        raise RuntimeError("no squarefree member found in a base-point-free pencil")
    r1 = f.d - r0 + 2
    kernel = apolar_kernel(f, r1)
    for g in _candidates(kernel, rng, DEFAULT_SEARCH_HEIGHTS, 4 * budget):
        if projective_squarefree(g, r1):
            return r1, g
    raise RuntimeError(f"no squarefree apolar form at level {r1}")


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class Decomposition:
    """``f = sum c_i (u_i x0 + v_i x1)^d``.

    When the witness roots are irrational, ``terms`` is empty and the
    decomposition is kept symbolically as ``(witness, level, intervals)``:
    the i-th linear form is ``x0 + z_i x1`` with ``z_i`` the unique root of
    ``witness`` in the half-open interval ``intervals[i]``.
    """

    d: int
    terms: tuple = ()
    witness: UniPoly | None = None
    level: int | None = None
    intervals: tuple = ()
    infinity: bool = False

    @property
    def exact(self) -> bool:
        return not self.intervals

    @property
    def size(self) -> int:
        if self.exact:
            return len(self.terms)
        return self.level

    def expand(self) -> BinaryForm:
        if not self.exact:
            raise ValueError("symbolic decomposition has no exact expansion")
        acc = [Fraction(0)] * (self.d + 1)
        for c, (u, v) in self.terms:
            for k in range(self.d + 1):
                acc[k] = acc[k] + c * u ** (self.d - k) * v ** k
        return BinaryForm(self.d, tuple(acc))

    def to_json(self) -> dict:
        out = {
            "d": self.d,
            "terms": [
                {"coeff": scalar_to_json(c), "form": [scalar_to_json(u), scalar_to_json(v)]}
                for c, (u, v) in self.terms
            ],
        }
        if self.witness is not None:
            out["witness"] = [scalar_to_json(x) for x in self.witness.coeffs]
            out["level"] = self.level
        if self.intervals:
            out["intervals"] = [[scalar_to_json(lo), scalar_to_json(hi)] for lo, hi in self.intervals]
            out["infinity"] = self.infinity
        return out


def _gaussian_quadratic_roots(q: UniPoly):
    """Roots of a real quadratic lying in Q(i), else None."""
    c, b, a = q.coeffs
    disc = b * b - 4 * a * c
    if disc >= 0:
        return None
    s = _rational_sqrt(-disc)
    if s is None:
        return None
    return [GaussianRational(-b / (2 * a), s / (2 * a)), GaussianRational(-b / (2 * a), -s / (2 * a))]


def _rational_sqrt(x: Fraction):
    from math import isqrt

    n, dd = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(dd)
    if rn * rn == n and rd * rd == dd:
        return Fraction(rn, rd)
    return None


def _power_columns(points: Sequence[tuple], d: int) -> list[list]:
    return [[u ** (d - k) * v ** k for (u, v) in points] for k in range(d + 1)]


def decompose_binary(f: BinaryForm, witness: UniPoly, level: int | None = None,
                     roots: Sequence | None = None) -> Decomposition:
    """Turn a squarefree apolar witness into a Waring decomposition of ``f``.

    ``level`` is the claimed rank (defaults to ``witness.degree``); if it
    exceeds the degree the missing roots are at infinity.  Known affine
    ``roots`` of the witness skip the root search.
    """
    level = witness.degree if level is None else level
    if witness.is_zero() or level < 1 or level > f.d or witness.degree > level:
        raise ValueError("witness degree mismatch")
    if not projective_squarefree(witness, level):
        raise ValueError("witness is not squarefree")
    cat = catalecticant_binary(f, level)
    padded = list(witness.coeffs) + [0] * (level + 1 - len(witness.coeffs))
    if any(sum((x * y for x, y in zip(row, padded)), Fraction(0)) for row in cat):
        raise ValueError("witness is not apolar to f")

    infinity = witness.degree < level
    affine = witness
    if roots is not None:
        roots = list(roots)
        for r in roots:
            affine, rem = affine.divmod(UniPoly([-r, 1]))
            if not rem.is_zero():
                raise ValueError(f"{r} is not a root of the witness")
        if affine.degree > 0:
            raise ValueError("given roots do not exhaust the witness")
    elif not witness.is_real():
        roots = []
    else:
        roots = rational_roots(witness)
        for r in roots:
            affine = affine // UniPoly([-r, 1])
        if affine.degree == 2:
            gauss = _gaussian_quadratic_roots(affine)
            if gauss is not None:
                roots += gauss
                affine = UniPoly([1])
    if affine.degree > 0:
        if not (affine.is_real() and sturm_distinct_real_roots(affine) == affine.degree):
            raise ValueError("witness has non-real roots outside Q(i)")
        return Decomposition(
            d=f.d,
            witness=witness,
            level=level,
            intervals=tuple(isolate_real_roots(witness)),
            infinity=infinity,
        )

    points = [(Fraction(1), r) for r in roots]
    if infinity:
        points.append((Fraction(0), Fraction(1)))
    lam = rat_solve(_power_columns(points, f.d), f.coeffs)
    if lam is None:
        raise AssertionError("apolar witness did not yield a decomposition")
    terms = tuple((c, p) for c, p in zip(lam, points) if c)
    return Decomposition(d=f.d, terms=terms, witness=witness, level=level)


def verify_decomposition(f: BinaryForm, dec: Decomposition) -> bool:
    """Exact check; symbolic decompositions are checked through apolarity."""
    if dec.exact:
        return dec.expand() == f
    w = dec.witness
    if w is None or not is_real_rooted_squarefree(w, dec.level):
        return False
    padded = list(w.coeffs) + [0] * (dec.level + 1 - len(w.coeffs))
    return all(
        not sum((x * y for x, y in zip(row, padded)), Fraction(0))
        for row in catalecticant_binary(f, dec.level)
    )


def top_level_decomposition(f: BinaryForm, max_shifts: int = 256) -> Decomposition:
    """A real decomposition with at most ``d`` terms and rational points.

    Fix ``d - 1`` integer roots for the apolar form and solve the single
    apolarity equation for the last linear factor, which is then rational.
    """
    if not f.is_real():
        raise ValueError("real decomposition needs a real form")
    d = f.d
    a = f.coeffs
    pair = lambda g: sum((x * y for x, y in zip(a, g.coeffs)), Fraction(0))  # noqa: E731
    for shift in range(max_shifts):
        base = [Fraction(shift - (d - 1) // 2 + j) for j in range(d - 1)]
        h = UniPoly.from_roots(base)
        p, q = pair(h * UniPoly([0, 1])), -pair(h)
        if not p and not q:
            continue
        g = h * UniPoly([p, q])
        if q and -p / q in base:
            continue
        dec = decompose_binary(f, g, d, roots=base + ([-p / q] if q else []))
        if dec.exact and dec.expand() == f:
            return dec
    raise RuntimeError("no rational top-level decomposition found")


# ---------------------------------------------------------------------------
# real rank


@dataclass
class RankCertificate:
    lower: int
    upper: int
    complex_rank: int
    border_rank: int
    witness_apolar: UniPoly | None = None
    witness_level: int | None = None
    witness_decomposition: Decomposition | None = None
    levels: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return "exact" if self.lower == self.upper else "bounded"

    @property
    def rank(self) -> int | None:
        return self.upper if self.lower == self.upper else None

    def to_json(self) -> dict:
        out = {
            "lower": self.lower,
            "upper": self.upper,
            "status": self.status,
            "complex_rank": self.complex_rank,
            "border_rank": self.border_rank,
            "levels": self.levels,
        }
        if self.witness_apolar is not None:
            out["witness_apolar"] = [scalar_to_json(x) for x in self.witness_apolar.coeffs]
            out["witness_level"] = self.witness_level
        if self.witness_decomposition is not None:
            out["witness_decomposition"] = self.witness_decomposition.to_json()
        return out


def _common_factor_excludes(kernel: Sequence[UniPoly], level: int) -> bool:
    """True when every kernel form shares a factor that is not real-rooted squarefree."""
    inf = min(_infinity_multiplicity(g, level) for g in kernel)
    if inf >= 2:
        return True
    h = kernel[0]
    for g in kernel[1:]:
        h = poly_gcd(h, g)
    h = h.monic()
    if h.degree <= 0:
        return False
    if not is_squarefree(h):
        return True
    return sturm_distinct_real_roots(h) < h.degree


def real_rank_binary(f: BinaryForm, seed: int = 0, budget: int = DEFAULT_SEARCH_BUDGET,
                     heights: Sequence[int] = DEFAULT_SEARCH_HEIGHTS) -> RankCertificate:
    """Real Waring rank with a certificate.

    Levels ``r = complex_rank .. d-1`` are tried in turn.  A level is ruled
    out exactly when its apolar kernel is empty, one-dimensional without a
    real-rooted squarefree member, or when all its members share a factor
    with a non-real or repeated root.  Otherwise the kernel is searched
    (basis, then random integer combinations); a failed search leaves the
    level undecided and the certificate ``bounded``.  Level ``d`` always
    succeeds with a rational decomposition.
    """
    if not f.is_real():
        raise ValueError("real rank needs real coefficients")
    rng = np.random.default_rng(seed)
    br = border_rank_binary(f)
    cr, cw = complex_rank_binary(f, seed=seed)
    cert = RankCertificate(lower=cr, upper=f.d, complex_rank=cr, border_rank=br)

    if is_hyperbolic(f):
        cert.lower = f.d
        cert.levels.append({"level": f.d, "outcome": "hyperbolic"})
    else:
        undecided = False
        for r in range(cr, f.d):
            kernel = apolar_kernel(f, r)
            outcome = None
            if not kernel:
                outcome = "empty"
            elif _common_factor_excludes(kernel, r):
                outcome = "common-factor"
            else:
                for g in _candidates(kernel, rng, heights, budget):
                    if is_real_rooted_squarefree(g, r):
                        cert.upper = r
                        cert.witness_apolar, cert.witness_level = g, r
                        cert.witness_decomposition = decompose_binary(f, g, r)
                        outcome = "found"
                        break
                else:
                    outcome = "exhausted" if len(kernel) == 1 else "undecided"
            cert.levels.append({"level": r, "kernel_dim": len(kernel), "outcome": outcome})
            if outcome == "found":
                break
            if outcome == "undecided":
                undecided = True
            elif not undecided:
                cert.lower = r + 1
        if cert.witness_apolar is not None:
            return cert

    dec = top_level_decomposition(f)
    cert.upper = min(cert.upper, dec.size)
    cert.witness_apolar, cert.witness_level = dec.witness, f.d
    cert.witness_decomposition = dec
    if cert.lower > cert.upper:
        raise AssertionError("real-rank certificate is inconsistent")
    return cert


# ---------------------------------------------------------------------------
# rank-d witnesses


@dataclass(frozen=True)
class WitnessResult:
    form: BinaryForm
    real_roots: int
    halvings: int
    scale: Fraction
    eps: Fraction

    def to_json(self) -> dict:
        return {
            "form": self.form.to_json(),
            "real_roots": self.real_roots,
            "halvings": self.halvings,
            "scale": scalar_to_json(self.scale),
            "eps": scalar_to_json(self.eps),
        }


def _pair_term(c, alpha, d: int) -> BinaryForm:
    """``c (z - alpha)^d + conj(c) (z - conj(alpha))^d`` (real for any c, alpha)."""
    c, alpha = GaussianRational.coerce(c), GaussianRational.coerce(alpha)
    if alpha.is_real:
        if not c.is_real:
            raise ValueError("a real point needs a real coefficient")
        return BinaryForm.root_power(alpha.re, d, c.re)
    t = BinaryForm.root_power(alpha, d, c)
    return t + t.conj()


def witness_rank_d(d: int, c, perturbation: Sequence[tuple] = ()) -> WitnessResult:
    """``c (z-i)^d + conj(c) (z+i)^d`` plus small terms, with ``d`` real roots certified.

    ``perturbation`` is a list of ``(coefficient, point)`` slots: a non-real
    point contributes a conjugate pair of powers, a real point a single real
    power.  Coefficients are halved until Sturm certifies ``d`` distinct real
    roots (at most 64 halvings).
    """
    c = GaussianRational.coerce(c)
    if not c:
        raise ValueError("c must be nonzero")
    if d < 1:
        raise ValueError("degree must be >= 1")
    base = _pair_term(c, GaussianRational(0, 1), d)
    slots = [(GaussianRational.coerce(k), GaussianRational.coerce(p)) for k, p in perturbation]
    for halvings in range(MAX_HALVINGS + 1):
        scale = Fraction(1, 2 ** halvings)
        acc = list(base.coeffs)
        for k, p in slots:
            if k:
                acc = [x + y for x, y in zip(acc, _pair_term(k * scale, p, d).coeffs)]
        if any(acc):
            f = BinaryForm(d, tuple(acc))
            n = form_real_root_count(f)
            if n == d:
                eps = max((max(abs(k.re), abs(k.im)) * scale for k, _ in slots), default=Fraction(0))
                return WitnessResult(f, n, halvings, scale, eps)
        if not slots:
            break
    raise ValueError("could not certify d distinct real roots; shrink the perturbation")
