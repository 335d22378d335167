"""Certified real-rank bounds for forms sampled on a typed span.

For ``f`` generic in ``<nu_d(A)>(R)`` with ``A`` of type ``(e, a)`` the
form splits uniquely as ``O_1 + ... + O_a + sum_h d_h nu_d(P_h)``, where
each ``O_j`` is real and lives on the rational normal curve of the real
line ``D_j = <Q_j, conj(Q_j)>``.  Writing each ``O_j`` with ``d`` real
powers on its line gives an explicit real decomposition with ``a*d + e``
terms.  Where a typical-rank theorem covers the parameters, that size is
also the rank; elsewhere only bounds are reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from ._serial import scalar_to_json
from .binaryforms import BinaryForm, Decomposition, real_rank_binary, top_level_decomposition
from .exactmath import GaussianRational
from .veronese import (
    PointConfiguration,
    ProjectivePoint,
    SpanBasis,
    SymmetricForm,
    border_rank_lower,
    classify_sigma2,
    essential_line,
    is_generic_in_span,
    pushforward_binary,
    real_span_basis,
    restrict_to_line,
    weighted_powers,
)


class CertificationError(RuntimeError):
    """An internal inconsistency: a decomposition failed exact verification."""


# theorem id -> (b, min m, min d, typical ranks as a function of d)
TYPICAL_RANK_THEOREMS = {
    "w3": (3, 2, 6, lambda d: {3, d + 1}),
    "w4": (4, 3, 8, lambda d: {4, d + 2, 2 * d}),
    "w5": (5, 4, 10, lambda d: {5, d + 3, 2 * d + 1}),
    "w6": (6, 5, 12, lambda d: {6, d + 4, 2 * d + 2, 3 * d}),
    "w7": (7, 6, 14, lambda d: {7, d + 5, 2 * d + 3, 3 * d + 1}),
}


def theorem_for(m: int, d: int, e: int, a: int) -> str | None:
    """Which result (if any) pins the real rank of a generic point of type (e, a)."""
    b = e + 2 * a
    if a == 0:
        return None
    if b == 2 and m >= 1 and d >= 3:
        return "w2"
    for tag, (tb, min_m, min_d, _) in TYPICAL_RANK_THEOREMS.items():
        if b == tb and m >= min_m and d >= min_d:
            return tag
    if a == 1 and m >= 2 and b >= 2 and d >= 2 * b - 1:
        return "w8"
    return None


# ---------------------------------------------------------------------------
# lines


@dataclass(frozen=True)
class LineParam:
    """Real line ``D = <Q, conj Q>`` parametrized by ``(s, t) -> s R + t I``.

    ``R``/``I`` are the real and imaginary parts of an integer representative
    of ``Q``; ``Q`` and ``conj Q`` pull back to the parameters ``(1 : i)`` and
    ``(1 : -i)``.
    """

    R: tuple
    I: tuple

    def point(self, s, t) -> list[Fraction]:
        return [s * x + t * y for x, y in zip(self.R, self.I)]

    def pullbacks(self) -> tuple:
        return ((Fraction(1), GaussianRational(0, 1)), (Fraction(1), GaussianRational(0, -1)))


def line_parametrize(Q: ProjectivePoint, conjQ: ProjectivePoint | None = None) -> LineParam:
    if conjQ is not None and conjQ != Q.conj():
        raise ValueError("second point is not the conjugate of the first")
    if Q.is_real():
        raise ValueError("a real point does not define a conjugate pair")
    re, im = Q.integer_parts()
    return LineParam(tuple(re), tuple(im))


# ---------------------------------------------------------------------------
# splitting


@dataclass
class PairPiece:
    line: LineParam
    coeff: GaussianRational  # c_j in c_j nu_d(Q_j) + conj(c_j) nu_d(conj Q_j)
    binary: BinaryForm  # O_j in the line parameter
    decomposition: Decomposition | None = None

    def ambient_terms(self) -> list[tuple[Fraction, list[int]]]:
        """Binary terms pushed to P^m as (coefficient, integer point)."""
        out = []
        d = self.binary.d
        for c, (s, t) in self.decomposition.terms:
            pt = self.line.point(s, t)
            den = lcm(*(x.denominator for x in pt))
            out.append((c / Fraction(den) ** d, [int(x * den) for x in pt]))
        return out


@dataclass
class SplitResult:
    pieces: list[PairPiece]
    real_terms: list[tuple[Fraction, list[int]]]  # (d_h, integer representative of P_h)
    span_coords: list[Fraction]


def _pair_binary(u: Fraction, w: Fraction, d: int) -> BinaryForm:
    """``u Re(nu(q)) + w Im(nu(q))`` in the line parameter: ``o_k = u Re(i^k) + w Im(i^k)``."""
    re_ik = (1, 0, -1, 0)
    im_ik = (0, 1, 0, -1)
    return BinaryForm(d, tuple(u * re_ik[k % 4] + w * im_ik[k % 4] for k in range(d + 1)))


def split_along_pairs(f: SymmetricForm, A: PointConfiguration, d: int | None = None,
                      basis: SpanBasis | None = None) -> SplitResult:
    """Unique split of ``f`` into real pieces ``O_j`` on the pair lines plus real-point terms."""
    d = f.d if d is None else d
    basis = basis or real_span_basis(A, d)
    x = basis.solve(f.coeffs)
    if x is None:
        raise CertificationError("form is not in the span of nu_d(A)")
    if not is_generic_in_span(f.coeffs, basis):
        raise CertificationError("form lies in the span of a proper subset (genericity violated)")
    pieces = []
    for j, q in enumerate(A.pairs):
        u, w = x[2 * j], x[2 * j + 1]
        pieces.append(PairPiece(
            line=line_parametrize(q),
            coeff=GaussianRational(u / 2, -w / 2),
            binary=_pair_binary(u, w, d),
        ))
    real_terms = []
    for h, p in enumerate(A.reals):
        re, _ = p.integer_parts()
        real_terms.append((x[2 * A.a + h], re))
    return SplitResult(pieces, real_terms, x)


# ---------------------------------------------------------------------------
# decompositions and certificates


@dataclass
class LineDecomposition:
    m: int
    d: int
    pieces: list[PairPiece]
    real_terms: list[tuple[Fraction, list[int]]]

    def terms(self) -> list[tuple[Fraction, list[int]]]:
        out = []
        for piece in self.pieces:
            out += piece.ambient_terms()
        return out + [t for t in self.real_terms if t[0]]

    @property
    def size(self) -> int:
        return sum(len(p.decomposition.terms) for p in self.pieces) + sum(
            1 for c, _ in self.real_terms if c)

    def expand(self) -> list[Fraction]:
        terms = self.terms()
        den = lcm(*(Fraction(c).denominator for c, _ in terms)) if terms else 1
        acc = None
        for c, pt in terms:
            k = int(c * den)
            vec = weighted_powers(pt, self.d)
            acc = [k * v for v in vec] if acc is None else [x + k * v for x, v in zip(acc, vec)]
        return [Fraction(x, den) for x in acc]

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "d": self.d,
            "pairs": [
                {
                    "line": {"R": [scalar_to_json(x) for x in p.line.R],
                             "I": [scalar_to_json(x) for x in p.line.I]},
                    "coeff": scalar_to_json(p.coeff),
                    "O": p.binary.to_json(),
                    "decomposition": p.decomposition.to_json(),
                }
                for p in self.pieces
            ],
            "reals": [
                {"coeff": scalar_to_json(c), "point": [scalar_to_json(x) for x in pt]}
                for c, pt in self.real_terms
            ],
        }


def verify_reconstruction(f: SymmetricForm, dec: LineDecomposition) -> bool:
    """Exact equality of ``f`` with the expanded decomposition."""
    if any(p.decomposition is None or not p.decomposition.exact for p in dec.pieces):
        return False
    terms = dec.terms()
    if not terms:
        return False
    den = lcm(*(Fraction(c).denominator for c, _ in terms))
    acc = [0] * len(f.coeffs)
    for c, pt in terms:
        k = int(c * den)
        vec = weighted_powers(pt, dec.d)
        acc = [x + k * v for x, v in zip(acc, vec)]
    return all(x == y * den for x, y in zip(acc, f.coeffs))


@dataclass
class MultiRankCertificate:
    m: int
    d: int
    type: tuple
    border_lower: int
    upper: int
    certified_value: int | None
    theorem: str | None
    decomposition: LineDecomposition
    border_k: int = 0
    checks: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "certified-exact" if self.certified_value is not None else "bounds-only"

    @property
    def rank(self) -> int | None:
        return self.certified_value

    def to_json(self, full: bool = True) -> dict:
        out = {
            "m": self.m,
            "d": self.d,
            "type": list(self.type),
            "border_lower": self.border_lower,
            "border_k": self.border_k,
            "upper": self.upper,
            "certified_value": self.certified_value,
            "theorem": self.theorem,
            "status": self.status,
            "checks": self.checks,
        }
        if full:
            out["decomposition"] = self.decomposition.to_json()
        return out


def certified_rank_multi(f: SymmetricForm, A: PointConfiguration, d: int | None = None,
                         m: int | None = None, basis: SpanBasis | None = None,
                         cross_check: bool = True) -> MultiRankCertificate:
    """Explicit ``a*d + e`` decomposition plus, when a theorem applies, the exact rank."""
    d = f.d if d is None else d
    m = f.m if m is None else m
    if (f.m, f.d) != (m, d) or A.m != m:
        raise ValueError("form, configuration and (m, d) disagree")
    split = split_along_pairs(f, A, d, basis)
    for piece in split.pieces:
        if any(isinstance(x, GaussianRational) for x in piece.binary.coeffs):
            raise CertificationError("pair piece is not real")
        piece.decomposition = top_level_decomposition(piece.binary)
    dec = LineDecomposition(m, d, split.pieces, split.real_terms)
    if not verify_reconstruction(f, dec):
        raise CertificationError("decomposition does not reconstruct the form")
    upper = dec.size
    lower, k = border_rank_lower(f, target=A.b)
    checks = {"reconstruction": True}

    tag = theorem_for(m, d, A.e, A.a)
    value = None
    if A.a == 0:
        if lower == upper:
            value, tag = upper, "border"
    elif tag is not None:
        value = A.a * d + A.e
        if value != upper:
            raise CertificationError(f"decomposition size {upper} != certified {value}")
    if cross_check and tag == "w2" and A.type == (0, 1):
        sub = real_rank_binary(split.pieces[0].binary)
        checks["line_real_rank"] = sub.rank
        if sub.rank != d:
            raise CertificationError("line restriction disagrees with the w2 value")
    if cross_check and A.b == 2 and m >= 2:
        checks["sigma2_class"] = classify_sigma2(f)
    if value is not None and lower > value:
        raise CertificationError("border lower bound exceeds certified value")
    return MultiRankCertificate(m, d, A.type, lower, upper, value, tag, dec, k, checks)


def tangential_certificate(f: SymmetricForm) -> dict:
    """Rank of a real tangential point through its essential line (binary Sylvester path)."""
    R0, R1 = essential_line(f)
    g = restrict_to_line(f, R0, R1)
    cert = real_rank_binary(g)
    dec = cert.witness_decomposition
    # the binary decomposition, pushed back to P^m, must give f itself
    ok = dec is not None and dec.exact and pushforward_binary(dec.expand(), R0, R1, f.m) == f
    if not ok:
        raise CertificationError("tangential decomposition does not reconstruct the form")
    return {
        "checks": {"reconstruction": True},
        "class": classify_sigma2(f),
        "complex_rank": cert.complex_rank,
        "rank": cert.rank,
        "status": cert.status,
        "line": [[scalar_to_json(x) for x in R0], [scalar_to_json(x) for x in R1]],
        "binary": cert.to_json(),
    }
