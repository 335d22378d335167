from fractions import Fraction

import pytest

from wrl.exactmath import GaussianRational
from wrl.rankcert import (
    CertificationError,
    LineDecomposition,
    certified_rank_multi,
    line_parametrize,
    split_along_pairs,
    tangential_certificate,
    theorem_for,
    verify_reconstruction,
)
from wrl.veronese import (
    ProjectivePoint,
    SymmetricForm,
    gaussian_weighted_powers,
    real_span_basis,
    sample_configuration,
    sample_in_span,
    tangential_form,
    weighted_powers,
)

I = GaussianRational(0, 1)


@pytest.mark.parametrize("args,tag", [
    ((2, 7, 0, 1), "w2"), ((1, 3, 0, 1), "w2"), ((1, 2, 0, 1), None),
    ((2, 6, 1, 1), "w3"), ((2, 5, 1, 1), "w8"), ((3, 8, 2, 1), "w4"), ((2, 8, 0, 2), None),
    ((4, 10, 1, 2), "w5"), ((5, 12, 0, 3), "w6"), ((4, 12, 0, 3), None),
    ((6, 14, 1, 3), "w7"), ((2, 7, 2, 1), "w8"), ((2, 6, 2, 1), None), ((3, 9, 4, 0), None),
])
def test_theorem_gating(args, tag):
    assert theorem_for(*args) == tag


def test_line_parametrize_examples():
    L = line_parametrize(ProjectivePoint((1, I)))
    assert (L.R, L.I) == ((1, 0), (0, 1))
    L = line_parametrize(ProjectivePoint((1, I, 0)))
    assert (L.R, L.I) == ((1, 0, 0), (0, 1, 0))
    L = line_parametrize(ProjectivePoint((1, 1 + I, 2 * I)))
    assert (L.R, L.I) == ((1, 1, 0), (0, 1, 2))
    with pytest.raises(ValueError):
        line_parametrize(ProjectivePoint((1, 2)))
    q = ProjectivePoint((1, I, 0))
    with pytest.raises(ValueError):
        line_parametrize(q, q)


def _known_form(A, d, c, reals):
    re, im = A.pairs[0].integer_parts()
    r, s = gaussian_weighted_powers(re, im, d)
    coeffs = [2 * (c.re * x - c.im * y) for x, y in zip(r, s)]
    for k, p in zip(reals, A.reals):
        coeffs = [x + k * y for x, y in zip(coeffs, weighted_powers(p.integer_parts()[0], d))]
    return SymmetricForm(A.m, d, tuple(coeffs))


def test_split_recovers_known_coefficients():
    A = sample_configuration(2, 2, 1, 3)
    c, reals = GaussianRational(3, -2), [Fraction(5), Fraction(-7)]
    f = _known_form(A, 7, c, reals)
    split = split_along_pairs(f, A)
    assert split.pieces[0].coeff == c
    assert [k for k, _ in split.real_terms] == reals
    assert split.pieces[0].binary.is_real()


def test_split_binary_pair_is_the_form():
    A = sample_configuration(1, 0, 1, 2)
    f = sample_in_span(A, 5, 1).form
    (piece,) = split_along_pairs(f, A).pieces
    assert piece.line.R == tuple(A.pairs[0].integer_parts()[0])


def test_split_rejects_non_generic():
    A = sample_configuration(2, 2, 1, 3)
    f = _known_form(A, 7, GaussianRational(1, 1), [Fraction(1), Fraction(0)])
    with pytest.raises(CertificationError):
        split_along_pairs(f, A)


@pytest.mark.parametrize("m,d,e,a,value,tag", [
    (2, 7, 0, 1, 7, "w2"),
    (2, 7, 2, 1, 9, "w8"),
    (5, 12, 0, 3, 36, "w6"),
    (2, 6, 3, 0, 3, "border"),
])
def test_certified_values(m, d, e, a, value, tag):
    A = sample_configuration(m, e, a, 1)
    basis = real_span_basis(A, d)
    f = sample_in_span(A, d, 2, basis=basis).form
    cert = certified_rank_multi(f, A, basis=basis)
    assert cert.status == "certified-exact"
    assert (cert.certified_value, cert.theorem) == (value, tag)
    assert cert.border_lower <= cert.certified_value == cert.upper
    assert cert.border_lower == A.b
    assert verify_reconstruction(f, cert.decomposition)


def test_w2_cross_checks():
    A = sample_configuration(2, 0, 1, 5)
    f = sample_in_span(A, 6, 5).form
    cert = certified_rank_multi(f, A)
    assert cert.checks["line_real_rank"] == 6
    assert cert.checks["sigma2_class"] == "conj-pair"


def test_bounds_only_outside_theorems():
    A = sample_configuration(2, 0, 2, 4)
    f = sample_in_span(A, 8, 4).form
    cert = certified_rank_multi(f, A)
    assert cert.status == "bounds-only" and cert.certified_value is None
    assert cert.border_lower == 4 <= cert.upper == 16


def test_reconstruction_detects_perturbation():
    A = sample_configuration(2, 2, 1, 6)
    f = sample_in_span(A, 7, 6).form
    cert = certified_rank_multi(f, A)
    dec = cert.decomposition
    c, p = dec.real_terms[0]
    bad = LineDecomposition(dec.m, dec.d, dec.pieces, [(c + 1, p)] + dec.real_terms[1:])
    assert verify_reconstruction(f, dec)
    assert not verify_reconstruction(f, bad)


def test_certificate_json_is_serializable():
    import json

    A = sample_configuration(2, 2, 1, 8)
    f = sample_in_span(A, 7, 8).form
    cert = certified_rank_multi(f, A)
    out = json.loads(json.dumps(cert.to_json()))
    assert out["certified_value"] == 9 and len(out["decomposition"]["pairs"]) == 1
    assert "decomposition" not in cert.to_json(full=False)


def test_mismatched_inputs_rejected():
    A = sample_configuration(2, 2, 1, 8)
    f = sample_in_span(A, 7, 8).form
    with pytest.raises(ValueError):
        certified_rank_multi(f, A, m=3)


@pytest.mark.parametrize("m,d", [(2, 5), (3, 6)])
def test_tangential_certificate(m, d):
    f = tangential_form([1] + [2] * m, [0, 1] + [0] * (m - 1), d)
    info = tangential_certificate(f)
    assert info["class"] == "tangential"
    assert info["complex_rank"] == d and info["rank"] == d
