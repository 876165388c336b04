import random

import pytest

from qchar2.fields import GF2, GF4, as_class, random_value, rational_extension
from qchar2.forms import (
    IsometryWitness,
    NotNonsingular,
    OracleInconclusive,
    PreconditionFailed,
    analyze,
    apply_identity,
    arf,
    bilinear_diag,
    bilinear_hyperbolic,
    bilinear_pfister,
    block_normalize,
    check_isometry_witness,
    compose,
    hyperbolic,
    hyperbolic_plane,
    qblock,
    qdiag,
    qtensor,
    quad_pfister,
)
from qchar2 import linalg

from conftest import gf2t, random_nonsingular


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------

def test_analyze_hyperbolic_plane():
    info = analyze(hyperbolic_plane(GF2))
    assert info.dim == 2 and info.radical_dim == 0 and info.classification == "nonsingular"


def test_analyze_conic():
    # <1> + b[1,a]: a nondegenerate conic
    F = gf2t()
    t = F.gen()
    q = qdiag(F, [F.one]).orth(qblock(F, F.one, F.one).scaled(t))
    info = analyze(q)
    assert info.dim == 3 and info.radical_dim == 1 and info.classification == "nondegenerate"


def test_analyze_quasilinear_degenerate():
    q = qdiag(GF2, [GF2.one, GF2.one])
    info = analyze(q)
    assert info.radical_dim == 2 and info.classification == "degenerate"
    # the vector (1,1) is isotropic
    assert not q.evaluate((GF2.one, GF2.one))


# ---------------------------------------------------------------------------
# block_normalize
# ---------------------------------------------------------------------------

def test_block_normalize_already_normal():
    # x^2 + xy + y^2 + z^2
    q = qblock(GF2, GF2.one, GF2.one).orth(qdiag(GF2, [GF2.one]))
    nf = block_normalize(q)
    assert nf.blocks == ((GF2.one, GF2.one),)
    assert nf.diagonal == (GF2.one,)
    assert check_isometry_witness(nf.witness)


def test_block_normalize_hand_instance():
    # gram rows (0 1 1 / 0 0 0 / 0 0 1): q = xy + xz + z^2.
    # By hand: pair (e1, e2) is hyperbolic, e3 + e2 spans the radical with
    # value 1, so the normal form is [0,0] + <1>.
    z, o = GF2.zero, GF2.one
    q = __import__("qchar2.forms", fromlist=["QuadraticForm"]).QuadraticForm(
        GF2, [[z, o, o], [z, z, z], [z, z, o]]
    )
    nf = block_normalize(q)
    assert len(nf.blocks) == 1 and nf.blocks[0] == (z, z)
    assert nf.diagonal == (o,)
    assert check_isometry_witness(nf.witness)


def test_block_normalize_two_hyperbolic_planes():
    q = hyperbolic(GF2, 2)
    nf = block_normalize(q)
    assert nf.blocks == ((GF2.zero, GF2.zero),) * 2 and not nf.diagonal


def test_block_normalize_random_witnesses(rng):
    F = gf2t()
    for _ in range(25):
        q = random_nonsingular(F, rng, rng.randrange(1, 4)).orth(
            qdiag(F, [random_value(F, rng, 1, nonzero=True)])
        )
        nf = block_normalize(q)
        assert check_isometry_witness(nf.witness)
        assert len(nf.diagonal) == analyze(q).radical_dim


# ---------------------------------------------------------------------------
# compose / tensor
# ---------------------------------------------------------------------------

def test_compose_bilinear_tensor_block():
    # <1,lam>^bi (x) [1,c] = [1,c] + lam[1,c]
    F = gf2t()
    lam = F.gen()
    c = F.one + F.gen()
    got = qtensor(bilinear_diag(F, [F.one, lam]), qblock(F, F.one, c))
    want = qblock(F, F.one, c).orth(qblock(F, F.one, c).scaled(lam))
    assert got == want


def test_compose_hyperbolic_bilinear_gives_hyperbolic():
    F = gf2t()
    c = F.gen()
    got = qtensor(bilinear_hyperbolic(F), qblock(F, F.one, c))
    from qchar2.oracles import witt_decompose

    wd = witt_decompose(got)
    assert wd.index == 2 and wd.anisotropic_part.dim == 0


def test_compose_scalar_parts():
    F = gf2t()
    t = F.gen()
    a = F.one
    got = compose(F, [(F.one, qblock(F, F.one, a)), (t, qblock(F, F.one, a))])
    want = qtensor(bilinear_pfister(F, [t]), qblock(F, F.one, a))
    assert got == want


def test_tensor_polar_identity(rng):
    # polar(b (x) q) = b (x) polar(q) on random instances
    F = GF4
    for _ in range(20):
        b = bilinear_diag(F, [random_value(F, rng, 0, nonzero=True) for _ in range(2)])
        q = random_nonsingular(F, rng, 1)
        tq = qtensor(b, q)
        P = tq.polar_matrix()
        BP = b.tensor(q.polar())
        assert linalg.mat(P) == BP.gram


def test_pure_tensor_values(rng):
    F = gf2t()
    for _ in range(10):
        b = bilinear_diag(F, [random_value(F, rng, 1, nonzero=True) for _ in range(2)])
        q = random_nonsingular(F, rng, 1)
        tq = qtensor(b, q)
        w = (random_value(F, rng, 1), random_value(F, rng, 1))
        v = (random_value(F, rng, 1), random_value(F, rng, 1))
        pure = tuple(w[i] * v[j] for i in range(2) for j in range(2))
        assert tq.evaluate(pure) == b.evaluate(w, w) * q.evaluate(v)


# ---------------------------------------------------------------------------
# the five identities
# ---------------------------------------------------------------------------

def test_identity_2_example():
    F = gf2t()
    t = F.gen()
    out, w = apply_identity(F, 2, t, t)
    assert out == qblock(F, F.one, F.zero).orth(hyperbolic_plane(F))
    assert check_isometry_witness(w)


def test_identity_3_example():
    F = gf2t()
    t = F.gen()
    out, w = apply_identity(F, 3, t, F.one, F.one)
    assert out == qblock(F, t, F.one / t)
    assert check_isometry_witness(w)


def test_identity_4_example():
    out, w = apply_identity(GF2, 4, GF2.one, GF2.one, GF2.one)
    assert out == qblock(GF2, GF2.zero, GF2.one).orth(qdiag(GF2, [GF2.one]))
    assert check_isometry_witness(w)


def test_identity_5_shape_and_preconditions():
    # [1,1] + <t> over GF(2)(t) is anisotropic (residue grading at t):
    # the precondition fails
    F = gf2t()
    t = F.gen()
    with pytest.raises(PreconditionFailed):
        apply_identity(F, 5, F.one, F.one, t)
    # [1,1] + <1> over GF(2) is isotropic at (1,1,1): rewrite succeeds
    out, w = apply_identity(GF2, 5, GF2.one, GF2.one, GF2.one)
    assert out == hyperbolic_plane(GF2).orth(qdiag(GF2, [GF2.one]))
    assert check_isometry_witness(w)
    with pytest.raises(PreconditionFailed):
        apply_identity(GF2, 5, GF2.one, GF2.one, GF2.zero)


def test_identity_1_random(rng):
    F = GF4
    for _ in range(50):
        ops = [random_value(F, rng, 0) for _ in range(4)]
        out, w = apply_identity(F, 1, *ops)
        assert check_isometry_witness(w)


# ---------------------------------------------------------------------------
# Arf invariant
# ---------------------------------------------------------------------------

def test_arf_examples():
    assert arf(hyperbolic_plane(GF2)).is_trivial()
    assert not arf(qblock(GF2, GF2.one, GF2.one)).is_trivial()
    F = gf2t()
    t = F.gen()
    assert arf(qblock(F, F.one, t).orth(qblock(F, F.one, t))).is_trivial()
    with pytest.raises(NotNonsingular):
        arf(qdiag(GF2, [GF2.one]))


def test_arf_additive(rng):
    for _ in range(100):
        q1 = random_nonsingular(GF4, rng, rng.randrange(1, 3))
        q2 = random_nonsingular(GF4, rng, rng.randrange(1, 3))
        assert arf(q1.orth(q2)) == as_class(
            arf(q1).representative + arf(q2).representative
        )


# ---------------------------------------------------------------------------
# witness checker: positive and negative controls
# ---------------------------------------------------------------------------

def test_witness_checker_rejects_bad_matrix():
    q = qblock(GF2, GF2.one, GF2.one)
    good = IsometryWitness(q, q, linalg.identity(GF2, 2))
    assert check_isometry_witness(good)
    bad = IsometryWitness(q, hyperbolic_plane(GF2), linalg.identity(GF2, 2))
    assert not check_isometry_witness(bad)
    singular = IsometryWitness(q, q, linalg.zeros(GF2, 2, 2))
    assert not check_isometry_witness(singular)


# ---------------------------------------------------------------------------
# bilinear Pfister sum identity and its quadratic consequence
# ---------------------------------------------------------------------------

def _three_ones_congruence(field, lam, mu):
    """Explicit congruence <<lam>> + <<mu>> + <<lam mu>> ~ <<lam,mu>> + H^bi:
    the three <1> slots regroup as <1> + H^bi."""
    lhs = bilinear_diag(field, [field.one, lam, field.one, mu, field.one, lam * mu])
    rhs = bilinear_pfister(field, [lam, mu]).orth(bilinear_hyperbolic(field))
    z, o = field.zero, field.one
    # columns: images of the rhs basis inside the lhs space
    # <<lam,mu>> basis: 1, mu, lam, lam*mu slots; then the H^bi pair
    cols = [
        (o, z, o, z, o, z),  # e1+e3+e5: value 1+1+1 = 1
        (z, z, z, o, z, z),  # mu slot
        (z, o, z, z, z, z),  # lam slot
        (z, z, z, z, z, o),  # lam*mu slot
        (o, z, o, z, z, z),  # e1+e3: value 0
        (o, z, z, z, o, z),  # e1+e5: value 0
    ]
    T = linalg.transpose(linalg.mat(cols))
    got = linalg.mat_mul(linalg.transpose(T), linalg.mat_mul(lhs.gram, T))
    return got == rhs.gram, T, lhs, rhs


def test_bilinear_pfister_sum_identity(rng):
    F = gf2t()
    for _ in range(20):
        lam = random_value(F, rng, 1, nonzero=True)
        mu = random_value(F, rng, 1, nonzero=True)
        ok, T, lhs, rhs = _three_ones_congruence(F, lam, mu)
        assert ok


def test_quadratic_pfister_sum_witt_level(rng):
    # (<<lam>> + <<mu>> + <<lam mu>>) (x) rho is isometric to
    # (<<lam,mu>> + H^bi) (x) rho via the same congruence tensored with the
    # identity, and the H^bi (x) rho part carries an explicit Lagrangian.
    F = GF4
    for _ in range(10):
        lam = random_value(F, rng, 0, nonzero=True)
        mu = random_value(F, rng, 0, nonzero=True)
        rho = random_nonsingular(F, rng, 1)
        ok, T, lhs, rhs = _three_ones_congruence(F, lam, mu)
        assert ok
        lq = qtensor(lhs, rho)
        rq = qtensor(rhs, rho)
        n = rho.dim
        # T (x) id witnesses the quadratic isometry
        TI = [[F.zero] * (6 * n) for _ in range(6 * n)]
        for i in range(6):
            for j in range(6):
                for k in range(n):
                    TI[i * n + k][j * n + k] = T[i][j]
        w = IsometryWitness(rq, lq, linalg.mat(TI))
        assert check_isometry_witness(w)
        # the trailing H^bi (x) rho block is hyperbolic: its first half is
        # totally isotropic
        base = 4 * n
        for k in range(n):
            v = [F.zero] * (6 * n)
            v[base + k] = F.one
            assert not rq.evaluate(v)


def test_quad_pfister_slots():
    F = gf2t()
    t = F.gen()
    # <<t, c]] = <<t>> (x) [1, c]
    c = F.one
    got = quad_pfister(F, [t, c])
    want = qtensor(bilinear_pfister(F, [t]), qblock(F, F.one, c))
    assert got == want
    assert got.evaluate((F.one,) + (F.zero,) * 3) == F.one  # represents 1
