import random

import pytest

from qchar2.algebras import (
    AdjBilinearE,
    AdjHermitianE,
    CriteriaDisagree,
    DegreeCapExceeded,
    HermitianForm,
    QuatE,
    TensorE,
    TwistE,
    contains_canonical_quaternion,
    decompose_brauer_Q,
    diagonalize_hermitian,
    hermitian_diag,
    hyperbolicity,
    involution_type,
    isotropy,
    materialize,
)
from qchar2.fields import GF2, GF4, random_value, rational_extension
from qchar2.forms import bilinear_diag, bilinear_hyperbolic, hyperbolic, qblock
from qchar2.oracles import check_certificate
from qchar2.quaternions import Quaternion, QuaternionAlgebra

from conftest import gf2t


# ---------------------------------------------------------------------------
# materialization
# ---------------------------------------------------------------------------

def test_quat_materialization_matches_table():
    F = gf2t()
    H = QuaternionAlgebra(F, F.one, F.gen())
    m = materialize(QuatE(H))
    assert m.dim == 4
    for i in range(4):
        for j in range(4):
            assert m.table[i][j] == H.table[i][j]


def test_tensor_symd_dimension():
    Q = QuaternionAlgebra(GF2, GF2.one, GF2.one)
    Q2 = QuaternionAlgebra(GF2, GF2.zero, GF2.one)
    m = materialize(TensorE(QuatE(Q), QuatE(Q2)))
    assert m.dim == 16
    assert len(m.symd_basis()) == 6
    assert len(m.sym_basis()) == 10


def test_matrix_hermitian_accepted_at_degree_4():
    Q = QuaternionAlgebra(GF2, GF2.one, GF2.one)
    h = hermitian_diag(Q, [GF2.one, GF2.one])
    m = materialize(AdjHermitianE(h))
    assert m.dim == 16 and m.degree() == 4


def test_degree_cap():
    Q = QuaternionAlgebra(GF2, GF2.one, GF2.one)
    h = hermitian_diag(Q, [GF2.one] * 5)  # degree 10
    with pytest.raises(DegreeCapExceeded):
        materialize(AdjHermitianE(h))


def test_twist_requires_symmetric_invertible():
    from qchar2.algebras import TwistNotSymmetric

    Q = QuaternionAlgebra(GF2, GF2.one, GF2.one)
    expr = QuatE(Q)
    m = materialize(expr)
    # u is not symmetric under conj
    x = m.basis_vector(1)
    with pytest.raises(TwistNotSymmetric):
        materialize(TwistE(expr, x))


def test_materialization_invariants(rng):
    F = gf2t()
    Q = QuaternionAlgebra(F, F.one, F.gen())
    Q2 = QuaternionAlgebra(F, F.gen(), F.one)
    m = materialize(TensorE(QuatE(Q), QuatE(Q2)))
    d = m.dim
    for _ in range(200):
        x = tuple(random_value(F, rng, 1) if rng.random() < 0.3 else F.zero for _ in range(d))
        y = tuple(random_value(F, rng, 1) if rng.random() < 0.3 else F.zero for _ in range(d))
        assert m.apply_invol(m.mul(x, y)) == tuple(m.mul(m.apply_invol(y), m.apply_invol(x)))
    # Symd inside Sym and complementary dimensions
    assert len(m.sym_basis()) + len(m.symd_basis()) == d


# ---------------------------------------------------------------------------
# involution type
# ---------------------------------------------------------------------------

def test_involution_types():
    Q = QuaternionAlgebra(GF2, GF2.one, GF2.one)
    assert involution_type(materialize(QuatE(Q))) == "symplectic"
    Q2 = QuaternionAlgebra(GF2, GF2.zero, GF2.one)
    assert involution_type(materialize(TensorE(QuatE(Q), QuatE(Q2)))) == "symplectic"
    F = gf2t()
    b = bilinear_diag(F, [F.one, F.gen()])
    assert involution_type(materialize(AdjBilinearE(b))) == "orthogonal"
    assert involution_type(materialize(AdjBilinearE(bilinear_hyperbolic(F)))) == "symplectic"


# ---------------------------------------------------------------------------
# isotropy / hyperbolicity
# ---------------------------------------------------------------------------

def test_hyperbolicity_adjoint_hyperbolic_form():
    m = materialize(AdjBilinearE(bilinear_hyperbolic(GF2)))
    r = hyperbolicity(m)
    assert r.is_yes
    e = r.witness
    assert m.mul(e, e) == tuple(e)
    assert m.apply_invol(e) == tuple(m.add(m.one, e))


def test_hyperbolicity_division_quaternion_no():
    F = gf2t()
    Q = QuaternionAlgebra(F, F.one, F.gen())
    r = hyperbolicity(materialize(QuatE(Q)))
    assert r.is_no


def test_isotropy_tensor_square(rng):
    F = gf2t()
    Q = QuaternionAlgebra(F, F.one, F.gen())
    m = materialize(TensorE(QuatE(Q), QuatE(Q)))
    r = isotropy(m)
    assert r.is_yes
    x = r.witness
    assert any(x) and not any(m.mul(m.apply_invol(x), x))


def test_hyperbolicity_implies_isotropy_witness():
    m = materialize(AdjBilinearE(bilinear_hyperbolic(GF2).orth(bilinear_hyperbolic(GF2))))
    r = hyperbolicity(m)
    assert r.is_yes
    e = r.witness
    # sigma(e) e = (1+e) e = e + e^2 = 0
    assert not any(m.mul(m.apply_invol(e), e))


def test_deg4_hyperbolicity_via_pfaffian():
    # (Q,conj) (x) (Q,conj) is split hyperbolic
    Q = QuaternionAlgebra(GF2, GF2.one, GF2.one)
    m = materialize(TensorE(QuatE(Q), QuatE(Q)))
    r = hyperbolicity(m)
    assert r.is_yes
    e = r.witness
    assert m.mul(e, e) == tuple(e)
    assert m.apply_invol(e) == tuple(m.add(m.one, e))


def test_deg4_division_not_hyperbolic_two_variables():
    Fs = rational_extension(GF2, "s")
    Fst = rational_extension(Fs, "t")
    s = Fst.constant(Fs.gen())
    t = Fst.gen()
    Q = QuaternionAlgebra(Fst, Fst.one, s)
    Qp = QuaternionAlgebra(Fst, s, t)
    m = materialize(TensorE(QuatE(Q), QuatE(Qp)))
    r = hyperbolicity(m)
    assert r.is_no
    assert check_certificate(r.certificate)
    r2 = isotropy(m)
    assert r2.is_no


# ---------------------------------------------------------------------------
# hermitian forms
# ---------------------------------------------------------------------------

def test_hermitian_diagonalize_diag():
    F = gf2t()
    Q = QuaternionAlgebra(F, F.one, F.gen())
    h = hermitian_diag(Q, [F.one, F.gen()])
    scalars, basis = diagonalize_hermitian(h)
    assert scalars == [F.one, F.gen()]


def test_hermitian_diagonalize_offdiag(rng):
    F = gf2t()
    t = F.gen()
    Q = QuaternionAlgebra(F, F.one, t)
    z = Q.element(F.one, F.one, F.zero, F.one)
    zero = Q.element(0, 0, 0, 0)
    one = Q.element(1, 0, 0, 0)
    entries = (
        (one, z),
        (Q.conj(z), Q.element(t, F.zero, F.zero, F.zero)),
    )
    h = HermitianForm(Q, entries)
    assert h.is_alternating()
    scalars, basis = diagonalize_hermitian(h)
    assert len(scalars) == 2 and all(scalars)


def test_hermitian_degenerate_rejected():
    from qchar2.algebras import DegenerateHermitian

    Q = QuaternionAlgebra(GF2, GF2.one, GF2.one)
    zero = Q.element(0, 0, 0, 0)
    h = HermitianForm(Q, ((zero, zero), (zero, zero)))
    with pytest.raises(DegenerateHermitian):
        diagonalize_hermitian(h)


def test_decompose_brauer_Q():
    F = gf2t()
    t = F.gen()
    Q = QuaternionAlgebra(F, F.one, t)
    h = hermitian_diag(Q, [F.one, t + 1])
    b, report = decompose_brauer_Q(AdjHermitianE(h))
    assert report["verified_generators"] == 16
    assert b.gram[0][0] == F.one and b.gram[1][1] == t + 1


def test_decompose_brauer_Q_offdiagonal():
    F = gf2t()
    t = F.gen()
    Q = QuaternionAlgebra(F, F.one, t)
    z = Q.element(F.zero, F.one, F.one, F.zero)
    one = Q.element(1, 0, 0, 0)
    entries = ((one, z), (Q.conj(z), Q.element(t, F.zero, F.zero, F.zero)))
    h = HermitianForm(Q, entries)
    b, report = decompose_brauer_Q(AdjHermitianE(h))
    assert report["verified_generators"] == 16


# ---------------------------------------------------------------------------
# containment of (Q, conj)
# ---------------------------------------------------------------------------

def test_contains_by_construction():
    F = gf2t()
    Q = QuaternionAlgebra(F, F.one, F.gen())
    Q2 = QuaternionAlgebra(F, F.gen(), F.one)
    m = materialize(TensorE(QuatE(Q2), QuatE(Q)))
    r = contains_canonical_quaternion(m, Q)
    assert r.is_yes
    p, q = r.witness
    assert m.apply_invol(p) == tuple(m.add(m.one, p))


def test_contains_split_degree_6_no():
    b = bilinear_hyperbolic(GF2).orth(bilinear_hyperbolic(GF2)).orth(bilinear_hyperbolic(GF2))
    m = materialize(AdjBilinearE(b))
    Q = QuaternionAlgebra(GF2, GF2.one, GF2.one)
    r = contains_canonical_quaternion(m, Q)
    assert r.is_no


def test_contains_split_degree_4_yes():
    F = gf2t()
    t = F.gen()
    Q = QuaternionAlgebra(F, F.one, t)
    b = bilinear_hyperbolic(F).orth(bilinear_hyperbolic(F))
    m = materialize(AdjBilinearE(b))
    r = contains_canonical_quaternion(m, Q)
    assert r.is_yes
    p, q = r.witness
    one = m.one
    assert m.add(m.mul(p, p), p) == tuple(m.scale(Q.r, one))
    assert m.mul(q, q) == tuple(m.scale(Q.s, one))


def test_contains_division_obstruction():
    Fs = rational_extension(GF2, "s")
    Fst = rational_extension(Fs, "t")
    s = Fst.constant(Fs.gen())
    t = Fst.gen()
    Q = QuaternionAlgebra(Fst, Fst.one, s)
    Qp = QuaternionAlgebra(Fst, s, t)
    h = hermitian_diag(Qp, [Fst.one, Fst.one])
    m = materialize(AdjHermitianE(h))  # M_2(Q'), Brauer class Q'
    r = contains_canonical_quaternion(m, Q)
    assert r.is_no
