from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wrl.binaryforms import BinaryForm
from wrl.exactmath import GaussianRational, rat_rank
from wrl.veronese import (
    BudgetExhausted,
    DegenerateConfiguration,
    PointConfiguration,
    ProjectivePoint,
    SymmetricForm,
    border_rank_lower,
    catalecticant_multi,
    catalecticant_rank,
    classify_sigma2,
    essential_line,
    in_general_position,
    is_generic_in_span,
    monomials,
    multinomials,
    pushforward_binary,
    real_span_basis,
    restrict_to_line,
    sample_configuration,
    sample_in_span,
    tangential_form,
    veronese_embed,
    weighted_powers,
)

I = GaussianRational(0, 1)


def pt(*xs):
    return ProjectivePoint(tuple(xs))


def conj(x):
    return x.conj() if isinstance(x, GaussianRational) else x


def test_monomial_order_and_count():
    mons = monomials(3, 2)
    assert len(mons) == comb(4, 2)
    assert mons[0] == (2, 0, 0) and mons[-1] == (0, 0, 2)
    assert list(mons) == sorted(mons, reverse=True)
    assert sum(multinomials(3, 4)) == 3 ** 4


def test_weighted_powers_matches_direct():
    p = [2, -1, 3]
    for alpha, v in zip(monomials(3, 4), weighted_powers(p, 4)):
        assert v == p[0] ** alpha[0] * p[1] ** alpha[1] * p[2] ** alpha[2]


def test_embed_examples():
    assert veronese_embed(pt(1, 1), 2) == [1, 2, 1]
    assert veronese_embed(pt(1, 0), 5) == [1, 0, 0, 0, 0, 0]
    v = veronese_embed(pt(1, I, 0), 2)
    idx = {a: k for k, a in enumerate(monomials(3, 2))}
    assert v[idx[(0, 2, 0)]] == -1
    assert v[idx[(1, 1, 0)]] == 2 * I


def test_point_normalization_and_conj():
    p = pt(2, 2 * I, 4)
    assert p.coords == (1, I, 2)
    assert p.conj().coords == (1, -I, 2)
    assert not p.is_real() and pt(3, 6).is_real()
    with pytest.raises(ValueError):
        pt(0, 0)


gauss = st.builds(GaussianRational, st.integers(-5, 5), st.integers(-5, 5))


@settings(max_examples=500)
@given(st.lists(gauss, min_size=2, max_size=4).filter(any), st.integers(1, 5))
def test_embed_conj_equivariant(coords, d):
    p = pt(*coords)
    assert veronese_embed(p.conj(), d) == [conj(x) for x in veronese_embed(p, d)]


def test_symmetric_form_round_trips():
    f = SymmetricForm.power([1, 2, -1], 3)
    assert SymmetricForm.from_json(f.to_json()) == f
    assert SymmetricForm.from_plain(2, 3, f.plain_coeffs) == f
    b = BinaryForm.power(1, 2, 4)
    assert SymmetricForm.from_binary(b).as_binary() == b


def test_configuration_validation():
    with pytest.raises(DegenerateConfiguration):
        PointConfiguration(1, 2, 0, (pt(1, 0), pt(2, 0)), ())
    with pytest.raises(ValueError):
        PointConfiguration(1, 0, 1, (), (pt(1, 1),))
    A = PointConfiguration(2, 1, 1, (pt(1, 0, 0),), (pt(1, I, 1),))
    assert A.b == 3 and A.type == (1, 1)
    assert PointConfiguration.from_json(A.to_json()) == A


def test_span_basis_two_real_points():
    A = PointConfiguration(1, 2, 0, (pt(1, 0), pt(1, 1)), ())
    basis = real_span_basis(A, 3)
    assert len(basis.vectors) == 2 and rat_rank(basis.vectors) == 2


def test_span_basis_of_conjugate_pair_is_equ1_space():
    A = PointConfiguration(1, 0, 1, (), (pt(1, I),))
    basis = real_span_basis(A, 3)
    # c (x0 + i x1)^3 + conj: weighted coefficients Re/Im of i^k
    assert basis.vectors == [[1, 0, -1, 0], [0, 1, 0, -1]]
    for c in (GaussianRational(1), GaussianRational(2, -3)):
        t = BinaryForm.power(1, I, 3, c)
        f = t + t.conj()
        assert basis.solve(f.coeffs) is not None


def test_span_basis_rejects_small_degree():
    A = sample_configuration(2, 4, 0, 1)
    with pytest.raises(DegenerateConfiguration):
        real_span_basis(A, 2)


@pytest.mark.parametrize("m,e,a,d", [(1, 2, 1, 7), (2, 2, 1, 7), (3, 0, 2, 8), (2, 3, 0, 5)])
def test_span_sample_is_generic(m, e, a, d):
    A = sample_configuration(m, e, a, 7)
    basis = real_span_basis(A, d)
    assert rat_rank(basis.vectors) == A.b
    s = sample_in_span(A, d, 3, basis=basis)
    assert basis.solve(s.form.coeffs) is not None
    assert is_generic_in_span(s.form.coeffs, basis)
    # a point of nu_d(A) itself is not generic
    assert not is_generic_in_span(basis.vectors[-1], basis)


def test_sample_in_span_determinism_and_budget():
    A = sample_configuration(2, 2, 1, 4)
    s1, s2 = sample_in_span(A, 5, 9), sample_in_span(A, 5, 9)
    assert s1.form == s2.form and s1.weights == s2.weights
    with pytest.raises(BudgetExhausted):
        sample_in_span(A, 5, 9, budget=0)


def test_sample_configuration_shapes():
    A = sample_configuration(1, 2, 0, 0)
    assert A.type == (2, 0) and all(p.is_real() for p in A.reals)
    B = sample_configuration(2, 2, 1, 0)
    assert len(B.points()) == 4 and in_general_position(B)
    C = sample_configuration(5, 0, 3, 0)
    assert rat_rank([list(p.coords) for p in C.points()]) == 6
    with pytest.raises(ValueError):
        sample_configuration(0, 1, 0, 0)


def test_catalecticant_of_power_and_tangent():
    f = SymmetricForm.power([1, -2, 3], 6)
    assert all(rat_rank(catalecticant_multi(f, k)) == 1 for k in range(0, 7))
    t = tangential_form([1, 0, 0], [0, 1, 0], 5)
    assert catalecticant_rank(t, 1) == 2
    with pytest.raises(ValueError):
        catalecticant_multi(f, 7)


@pytest.mark.parametrize("m,d,b", [(2, 7, 3), (3, 8, 4), (2, 6, 3)])
def test_generic_catalecticant_rank_is_b(m, d, b):
    for seed in range(5):
        A = sample_configuration(m, b, 0, seed)
        f = sample_in_span(A, d, seed).form
        k = min(b, d // 2)
        assert catalecticant_rank(f, k) == b
        assert border_rank_lower(f)[0] == b


def test_classify_sigma2_three_classes():
    d = 5
    real_pair = SymmetricForm.power([1, 0, 0], d)
    real_pair = SymmetricForm(2, d, tuple(x + y for x, y in zip(real_pair.coeffs, SymmetricForm.power([0, 1, 0], d).coeffs)))
    assert classify_sigma2(real_pair) == "real-pair"
    q = SymmetricForm.power([1, I, 0], d)
    conj_pair = SymmetricForm(2, d, tuple(x + conj(x) for x in q.coeffs))
    assert classify_sigma2(conj_pair) == "conj-pair"
    assert classify_sigma2(tangential_form([1, 0, 0], [0, 1, 0], d)) == "tangential"
    with pytest.raises(ValueError):
        classify_sigma2(SymmetricForm.power([1, 1, 1], d))


def test_classify_sigma2_binary():
    t = BinaryForm.power(1, I, 3)
    assert classify_sigma2(SymmetricForm.from_binary(t + t.conj())) == "conj-pair"


def test_line_restriction_round_trip():
    R0, R1 = [1, 2, 0, -1], [0, 1, 3, 1]
    g = BinaryForm.from_coeffs([3, -1, 2, 0, 5])
    f = pushforward_binary(g, R0, R1, 3)
    assert restrict_to_line(f, R0, R1) == g
    assert restrict_to_line(SymmetricForm.power([0, 0, 0, 1], 4), R0, R1) is None


def test_essential_line_of_tangential_point():
    f = tangential_form([1, 2, 3], [0, 1, -1], 6)
    R0, R1 = essential_line(f)
    assert rat_rank([R0, R1, [1, 2, 3], [0, 1, -1]]) == 2


def test_tangential_form_matches_product():
    rng = np.random.default_rng(0)
    p, v = [int(x) for x in rng.integers(-3, 4, 3)], [int(x) for x in rng.integers(-3, 4, 3)]
    f = tangential_form(p, v, 4)
    # plain coefficients of (p.x)^3 (v.x) by direct expansion
    from itertools import product

    plain = {}
    for idx in product(range(3), repeat=4):
        c = p[idx[0]] * p[idx[1]] * p[idx[2]] * v[idx[3]]
        alpha = tuple(idx.count(j) for j in range(3))
        plain[alpha] = plain.get(alpha, 0) + c
    assert list(f.plain_coeffs) == [Fraction(plain.get(a, 0)) for a in monomials(3, 4)]
