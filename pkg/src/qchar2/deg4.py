"""Degree-4 algebras with symplectic involution.

On symmetrised elements of such an algebra every element satisfies a
quadratic relation s^2 + T(s) s + N(s) = 0 with T linear and N a
6-dimensional nonsingular quadratic form (the Pfaffian reduced trace
and norm).  Both are extracted from the materialization itself: the
relation is solved on a Symd basis and polarization fills in the Gram
matrix; determinants of left multiplication provide an independent
cross-check, det L_s = N(s)^8, verified via exact square roots.

The 12-dimensional twist form <<N(x)>> (x) N attached to a twisted
involution Int(x) o gamma has a unique 3-fold Pfister normalization,
computed here by Witt decomposition and binary-slot peeling, and this
normalization classifies the involutions up to conjugacy and decides
hyperbolicity over the function field of a conic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from . import linalg
from .algebras import (
    AlgExpr,
    MaterializedAlgebra,
    QuatE,
    TensorE,
    TwistE,
    _brauer_quaternion_class,
    contains_canonical_quaternion,
    hyperbolicity,
    involution_type,
    isotropy,
    materialize,
)
from .fields import FieldValue, FiniteField, enumerate_field
from .forms import (
    PreconditionFailed,
    QuadraticForm,
    bilinear_diag,
    qblock,
    qdiag,
    qtensor,
    quad_pfister,
)
from .oracles import (
    Budget,
    Certificate,
    Verdict,
    _budget_for,
    _embed_search,
    _vector_stream,
    default_height,
    is_isometric,
    isotropic_vector,
    represents,
    witt_decompose,
)
from .quaternions import QuaternionAlgebra


class SquareRootFailure(ArithmeticError):
    """The Pfaffian extraction failed: the input is not a degree-4
    symplectic materialization (or is corrupted)."""


class NotInvertible(ValueError):
    pass


class ReferenceMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# Pfaffian data
# ---------------------------------------------------------------------------

@dataclass
class PfaffianData:
    algebra: MaterializedAlgebra
    symd: tuple  # 6 basis vectors, algebra coordinates
    nrp: QuadraticForm  # on Symd coordinates
    trp: tuple  # linear functional on Symd coordinates

    def coords_of(self, x):
        field = self.algebra.field
        A = linalg.transpose(linalg.mat(self.symd))
        sol = linalg.solve(field, A, x)
        if sol is None:
            raise ValueError("element is not symmetrised")
        return sol

    def nrp_of(self, x) -> FieldValue:
        return self.nrp.evaluate(self.coords_of(x))

    def trp_of(self, x) -> FieldValue:
        return linalg._dot(self.trp, self.coords_of(x))

    def trace_zero_basis(self):
        field = self.algebra.field
        return linalg.kernel_basis(field, [list(self.trp)])

    def restricted_to_trace_zero(self) -> QuadraticForm:
        return self.nrp.restrict(self.trace_zero_basis())

    def symd0_to_algebra(self, v5):
        """Map coordinates on the trace-zero basis to algebra coordinates."""
        field = self.algebra.field
        tz = self.trace_zero_basis()
        coords = [sum((v5[k] * tz[k][i] for k in range(len(tz))), field.zero) for i in range(6)]
        return self.symd_to_algebra(coords)

    def symd_to_algebra(self, c6):
        field = self.algebra.field
        out = [field.zero] * self.algebra.dim
        for k in range(6):
            if not c6[k]:
                continue
            for i in range(self.algebra.dim):
                out[i] = out[i] + c6[k] * self.symd[k][i]
        return tuple(out)


def _quadratic_relation(m: MaterializedAlgebra, s):
    """For s with s^2 in span(1, s): the pair (t, n) with
    s^2 + t s + n = 0; None if no such relation exists."""
    field = m.field
    sq = m.mul(s, s)
    c = m.is_scalar(s)
    if c is not None:
        return field.zero, c * c
    A = linalg.transpose(linalg.mat([m.one, s]))
    sol = linalg.solve(field, A, sq)
    if sol is None:
        return None
    n, t = sol
    return t, n


def pfaffian(m: MaterializedAlgebra) -> PfaffianData:
    """Pfaffian reduced norm and trace of a degree-4 symplectic
    materialization, from the quadratic relations on Symd."""
    field = m.field
    if m.degree() != 4:
        raise SquareRootFailure("Pfaffian data needs a degree-4 algebra")
    if involution_type(m) != "symplectic":
        raise SquareRootFailure("Pfaffian data needs a symplectic involution")
    symd = m.symd_basis()
    if len(symd) != 6:
        raise SquareRootFailure("Symd has the wrong dimension")
    diag = []
    trp = []
    for s in symd:
        rel = _quadratic_relation(m, s)
        if rel is None:
            raise SquareRootFailure("symmetrised element without a quadratic relation")
        t, n = rel
        trp.append(t)
        diag.append(n)
    g = [[field.zero] * 6 for _ in range(6)]
    for i in range(6):
        g[i][i] = diag[i]
    for i in range(6):
        for j in range(i + 1, 6):
            s = m.add(symd[i], symd[j])
            rel = _quadratic_relation(m, s)
            if rel is None:
                raise SquareRootFailure("symmetrised element without a quadratic relation")
            tij, nij = rel
            if tij != trp[i] + trp[j]:
                raise SquareRootFailure("Pfaffian trace is not linear")
            g[i][j] = nij + diag[i] + diag[j]
    pf = PfaffianData(m, symd, QuadraticForm(field, g), tuple(trp))
    one_c = pf.coords_of(m.one)
    if pf.nrp.evaluate(one_c) != field.one:
        raise SquareRootFailure("Nrp(1) != 1")
    if linalg._dot(pf.trp, one_c):
        raise SquareRootFailure("Trp(1) != 0")
    # Trp is the polarization of Nrp against 1
    for k in range(6):
        e = [field.zero] * 6
        e[k] = field.one
        if pf.nrp.bvalue(one_c, e) != pf.trp[k]:
            raise SquareRootFailure("Trp disagrees with the polar form against 1")
    # spot cross-check against the regular representation determinant
    ncheck = 6 if field.depth() <= 1 else 1
    for s in symd[:ncheck]:
        if nrp_via_determinant(m, s) != pf.nrp_of(s):
            raise SquareRootFailure("determinant cross-check failed")
    return pf


def nrp_via_determinant(m: MaterializedAlgebra, x) -> FieldValue:
    """Nrp(x) as the 8th root of det of left multiplication, taken by
    three exact square roots (unique in characteristic 2)."""
    d = linalg.det(m.field, m.left_mul_matrix(x))
    for _ in range(3):
        r = d.sqrt_or_none()
        if r is None:
            raise SquareRootFailure("det L_x is not an 8th power")
        d = r
    return d


def pfaffian_determinant_check(m: MaterializedAlgebra, pf: PfaffianData, x) -> bool:
    """det L_x = Nrp(x)^8 on a symmetrised element, checked exactly."""
    d = linalg.det(m.field, m.left_mul_matrix(x))
    return d == pf.nrp_of(x) ** 8


# ---------------------------------------------------------------------------
# Twisted involutions on a fixed reference
# ---------------------------------------------------------------------------

@dataclass
class Deg4Symplectic:
    """A symplectic involution Int(x) o gamma on a degree-4 algebra,
    relative to a reference materialization carrying gamma."""

    base: AlgExpr
    reference: MaterializedAlgebra
    x: tuple
    twisted: MaterializedAlgebra

    @classmethod
    def from_twist(cls, base: AlgExpr, x) -> "Deg4Symplectic":
        ref = materialize(base)
        x = tuple(x)
        pf = pfaffian(ref)
        n = pf.nrp_of(x)
        if not n:
            raise NotInvertible("twist element has Nrp = 0")
        tw = materialize(TwistE(base, x))
        return cls(base, ref, x, tw)


def biquaternion_reference(Qleft: QuaternionAlgebra, Qright: QuaternionAlgebra) -> AlgExpr:
    """The tensor product of two quaternion algebras with the product of
    the canonical involutions."""
    return TensorE(QuatE(Qleft), QuatE(Qright))


# ---------------------------------------------------------------------------
# 3-fold Pfister normalization (relative discriminant)
# ---------------------------------------------------------------------------

@dataclass
class Pfister3:
    slots: tuple  # (c1, c2, c3): <<c1, c2>> (x) [1, c3]
    form: QuadraticForm
    hyperbolic: bool
    similarity: Optional[FieldValue] = None  # c with anisotropic part = c * form
    witness: object = None

    @classmethod
    def hyperbolic_form(cls, field):
        slots = (field.one, field.one, field.zero)
        return cls(slots, quad_pfister(field, list(slots)), True)


def _first_value(q: QuadraticForm, height):
    field = q.field
    budget = _budget_for(field, height)
    for v in _vector_stream(q, height, budget):
        c = q.evaluate(v)
        if c:
            return c, v
    return None, None


def _quadratic_slot(qs: QuadraticForm, height):
    """A value c3 such that qs contains the block [1, c3]: take any v0 of
    value 1 and any polar partner w with b(v0, w) = 1; c3 = qs(w)."""
    field = qs.field
    rep = represents(qs, field.one, height)
    if not rep.is_yes:
        return None
    v0 = rep.witness
    n = qs.dim
    for i in range(n):
        e = tuple(field.one if j == i else field.zero for j in range(n))
        beta = qs.bvalue(v0, e)
        if beta:
            w = tuple(x / beta for x in e)
            return qs.evaluate(w)
    return None


def _represented_values(qs: QuadraticForm, height, limit):
    field = qs.field
    budget = _budget_for(field, height)
    vals = []
    for v in _vector_stream(qs, height, budget):
        b = qs.evaluate(v)
        if b and all(b != s for s in vals):
            vals.append(b)
        if len(vals) >= limit:
            break
    return vals


def recognize_pfister(q: QuadraticForm, height: int) -> Optional[Pfister3]:
    """Recognize q (dim 4 or 8) as c * (quadratic Pfister form) by slot
    search plus a final witnessed embedding of the assembled slot form.
    For dim 4 the slots are (1, b1, c3) with c2 unused."""
    field = q.field
    if q.dim not in (4, 8):
        return None
    c, _ = _first_value(q, height)
    if c is None:
        return None
    qs = q.scaled(c.inv())
    c3 = _quadratic_slot(qs, height)
    if c3 is None:
        return None
    vals = _represented_values(qs, height, 8)
    budget = _budget_for(field, height)

    def confirmed(slots):
        target = quad_pfister(field, list(slots) + [c3]).scaled(c)
        emb = _embed_search(q, target, height)
        if emb is None:
            return None
        return Pfister3(tuple(slots) + (c3,), quad_pfister(field, list(slots) + [c3]), False, similarity=c, witness=emb)

    if q.dim == 4:
        for b1 in vals:
            r = confirmed([b1])
            if r is not None:
                return r
            if not budget.spend(20):
                return None
        return None
    for b1 in vals:
        for b2 in vals:
            r = confirmed([b1, b2])
            if r is not None:
                return r
            if not budget.spend(50):
                return None
    return None


def relative_discriminant(d: Deg4Symplectic, height: Optional[int] = None) -> Verdict:
    """The unique 3-fold Pfister form equivalent to <<Nrp(x)>> (x) Nrp
    modulo the fourth power of the fundamental ideal, computed by Witt
    reduction and slot recognition.

    The 12-dimensional twist form is reduced structurally: first the
    Pfaffian norm itself is decomposed (small entries), then the doubled
    anisotropic remainder, seeded by exact represented-value matches."""
    field = d.reference.field
    if height is None:
        height = default_height(field)
    pf = pfaffian(d.reference)
    mu = pf.nrp_of(d.x)
    if not mu:
        raise NotInvertible("twist element is not invertible")
    xc = pf.coords_of(d.x)
    onec = pf.coords_of(d.reference.one)
    wd_n = witt_decompose(pf.nrp, height, seeds=[])
    n_an = wd_n.anisotropic_part
    index = 2 * wd_n.index
    if n_an.dim == 0:
        return Verdict.yes(Pfister3.hyperbolic_form(field), witt=wd_n)
    reduced = n_an.orth(n_an.scaled(mu))
    seeds = list(_twist_seeds(n_an, mu, height))
    if wd_n.index == 0:
        seeds.insert(0, tuple(xc) + tuple(onec))
    wd = witt_decompose(reduced, height, seeds=seeds)
    index += wd.index
    an = wd.anisotropic_part
    if an.dim == 0:
        return Verdict.yes(Pfister3.hyperbolic_form(field), witt=wd, index=index)
    if an.dim == 8:
        rec = recognize_pfister(an, height)
        if rec is not None and isinstance(rec, Pfister3):
            rec.witness = (wd, rec.witness)
            return Verdict.yes(rec, witt=wd, index=index)
        return Verdict.unknown(height, reason="pfister recognition failed", witt=wd)
    return Verdict.unknown(height, reason=f"anisotropic part of dimension {an.dim}", witt=wd)


def _twist_seeds(n_an: QuadraticForm, mu, height):
    """Isotropic seeds for n_an + mu n_an: pairs (v, w) with
    n_an(v) = mu n_an(w), found by exact represented-value solving."""
    field = n_an.field
    n = n_an.dim
    budget = Budget(600)
    count = 0
    for w in _vector_stream(n_an, min(height, 1), budget):
        target = mu * n_an.evaluate(w)
        if not target:
            continue
        rep = represents(n_an, target, height)
        if rep.is_yes:
            yield tuple(rep.witness) + tuple(w)
            count += 1
            if count >= 4:
                return


def conjugate_test(d1: Deg4Symplectic, d2: Deg4Symplectic, height: Optional[int] = None) -> Verdict:
    """Two twists of one reference are conjugate iff their 3-fold Pfister
    normalizations are isometric."""
    if d1.reference is not d2.reference and d1.base != d2.base:
        raise ReferenceMismatch("twists over different references")
    field = d1.reference.field
    if height is None:
        height = default_height(field)
    j1 = relative_discriminant(d1, height)
    j2 = relative_discriminant(d2, height)
    if j1.is_unknown or j2.is_unknown:
        return Verdict.unknown(height)
    p1, p2 = j1.witness, j2.witness
    if p1.hyperbolic and p2.hyperbolic:
        return Verdict.yes("both hyperbolic")
    if p1.hyperbolic != p2.hyperbolic:
        return Verdict.no(Certificate("invariant", ("hyperbolic-vs-anisotropic",)))
    return is_isometric(p1.form, p2.form, height)


# ---------------------------------------------------------------------------
# Hyperbolicity over the conic function field, degree 4
# ---------------------------------------------------------------------------

def hyperbolic_over_conic_deg4(d: Deg4Symplectic, Q: QuaternionAlgebra, height: Optional[int] = None) -> Verdict:
    """Theorem-level trichotomy for an anisotropic degree-4 symplectic
    involution over the function field of Q's conic.

    Yes with tag 'contains_Q': a sigma-stable canonical copy of Q found.
    Yes with tag 'ad_lambda': the Pfister normalization is <<lambda>> (x) n_Q
    with the division and common-slot side conditions certified.
    No with tag 'not_hyperbolic': exhausted (finite fields).
    """
    field = d.reference.field
    if height is None:
        height = default_height(field)
    m = d.twisted
    iso = isotropy(m, height)
    if iso.is_yes:
        raise PreconditionFailed("the involution is isotropic")
    if iso.is_unknown:
        return Verdict.unknown(height, reason="anisotropy undecided")
    contains = contains_canonical_quaternion(m, Q, height)
    if contains.is_yes:
        return Verdict.yes("contains_Q", pair=contains.witness, anisotropy=iso.certificate)
    # reference must be hyperbolic over the conic field for the j-test
    ref_ok = contains_canonical_quaternion(d.reference, Q, height)
    gamma_fq = ref_ok.is_yes
    if not gamma_fq:
        hyp = hyperbolicity(d.reference, height)
        gamma_fq = hyp.is_yes
    if not gamma_fq:
        return Verdict.unknown(height, reason="reference not certified hyperbolic over the conic field")
    j = relative_discriminant(d, height)
    if j.is_unknown:
        return Verdict.unknown(height)
    p3 = j.witness
    a, b = Q.r, Q.s
    lam_candidates = []
    if p3.hyperbolic:
        lam_candidates.append(field.one)
    else:
        lam_candidates.extend([p3.slots[0], p3.slots[1], p3.slots[0] * p3.slots[1]])
    lam_candidates.extend(c for c in itertools.islice(enumerate_field(field, min(height, 1)), 8) if c)
    tried = []
    for lam in lam_candidates:
        if any(lam == t for t in tried):
            continue
        tried.append(lam)
        target = quad_pfister(field, [lam, b, a])
        r = is_isometric(p3.form, target, height)
        if r.is_yes:
            tag, details = _case_b_details(d, Q, lam, height)
            if tag == "ad_lambda":
                return Verdict.yes("ad_lambda", lam=lam, j_isometry=r.witness, **details)
            return Verdict.yes("hyperbolic_over_FQ", lam=lam, j_isometry=r.witness, **details)
    if isinstance(field, FiniteField):
        for lam in field.elements():
            if not lam or any(lam == t for t in tried):
                continue
            target = quad_pfister(field, [lam, b, a])
            r = is_isometric(p3.form, target, height)
            if r.is_yes:
                return Verdict.yes("hyperbolic_over_FQ", lam=lam, j_isometry=r.witness)
        return Verdict.no(Certificate("finite-field-exhaustion", (p3.form,)), tag="not_hyperbolic")
    return Verdict.unknown(height)


def _case_b_details(d: Deg4Symplectic, Q: QuaternionAlgebra, lam, height):
    """Verify the Ad_<<lam>> (x) (Q', conj) side conditions: the Brauer
    partner Q' with Q (x) Q' division (Albert certificate) and the slot
    condition <<lam>> n_Q ~ <<lam>> n_Q'."""
    field = d.reference.field
    Q2 = _brauer_quaternion_class(d.base)
    details = {}
    if Q2 is None:
        return "plain", details
    albert = Q2.norm_form.orth(Q.norm_form)
    wd = witt_decompose(albert, height)
    division = wd.index == 1 and wd.residual.is_no and wd.anisotropic_part.dim == 6
    if not division:
        return "plain", details
    slot = is_isometric(
        qtensor(bilinear_diag(field, [field.one, lam]), Q.norm_form),
        qtensor(bilinear_diag(field, [field.one, lam]), Q2.norm_form),
        height,
    )
    details["albert_certificate"] = wd.residual.certificate
    details["slot_condition"] = slot.status
    if slot.is_yes:
        details["contains_Q"] = "no"
        return "ad_lambda", details
    return "plain", details


# ---------------------------------------------------------------------------
# Explicit hyperbolic references
# ---------------------------------------------------------------------------

def build_hyperbolic_reference(m: MaterializedAlgebra, height: Optional[int] = None):
    """For a degree-4 symplectic materialization (A, sigma) whose algebra
    is not division, construct an explicit hyperbolic involution gamma
    on the same algebra together with the idempotent witnessing it and
    the twist x in Symd(A, gamma) with sigma = Int(x) o gamma.

    The idempotent comes from an isotropic vector of the Pfaffian norm
    with nonzero Pfaffian trace: z^2 = Trp(z) z means e = z / Trp(z) is
    idempotent; gamma is then solved for linearly.  Returns
    (Deg4Symplectic, idempotent) or None.
    """
    from .oracles import find_isotropic_vector

    field = m.field
    if height is None:
        height = default_height(field)
    pf = pfaffian(m)
    v6 = find_isotropic_vector(pf.nrp, height)
    if v6 is None:
        return None
    e = _idempotent_from_pfaffian_isotropy(m, pf, v6)
    if e is None:
        return None
    # gamma = Int(g) o sigma with g sigma-symmetric and g sigma(e) = (1+e) g
    se = m.apply_invol(e)
    one_plus_e = m.add(m.one, e)
    d = m.dim
    rows = []
    for j in range(d):
        ej = m.basis_vector(j)
        img = m.add(m.mul(ej, se), m.mul(one_plus_e, ej))
        rows.append(img)
    lin = linalg.transpose(linalg.mat(rows))
    sym_rows = m._splus()
    comb = [tuple(r) for r in lin] + [tuple(r) for r in sym_rows]
    ker = linalg.kernel_basis(field, comb)
    combos = list(ker)
    for i in range(min(4, len(ker))):
        for j in range(i + 1, min(5, len(ker))):
            combos.append(tuple(a + b for a, b in zip(ker[i], ker[j])))
    for g in combos:
        ginv = m.inverse_of(g)
        if ginv is None:
            continue
        gamma = linalg.mat_mul(m.left_mul_matrix(g), linalg.mat_mul(m.right_mul_matrix(ginv), m.invol))
        ref = MaterializedAlgebra(field, m.labels, m.table, gamma, m.trd, m.one, m.expr)
        try:
            ref.verify()
        except AssertionError:
            continue
        if involution_type(ref) != "symplectic":
            continue
        if ref.apply_invol(e) != tuple(one_plus_e):
            continue
        # twist x = g^{-1}: Int(x) o gamma = sigma; x must be gamma-symmetrised
        x = ginv
        if ref.apply_invol(x) != tuple(x):
            continue
        if linalg.solve(field, ref._splus(), x) is None:
            continue
        try:
            pf_ref = pfaffian(ref)
        except SquareRootFailure:
            continue
        if not pf_ref.nrp_of(x):
            continue
        tw = linalg.mat_mul(m.left_mul_matrix(x), linalg.mat_mul(m.right_mul_matrix(g), gamma))
        if tw != m.invol:
            continue
        d4 = Deg4Symplectic(m.expr, ref, tuple(x), m)
        return d4, e
    return None


def _idempotent_from_pfaffian_isotropy(m, pf, v6):
    """Idempotent from an Nrp-isotropic symmetrised element, steering
    toward nonzero Pfaffian trace along the polar pairing."""
    field = m.field
    t = linalg._dot(pf.trp, v6)
    if t:
        z = pf.symd_to_algebra(v6)
        return tuple(c / t for c in z)
    # replace v6 by q(f) v6 + f for a polar partner f: still isotropic
    for i in range(6):
        e = tuple(field.one if j == i else field.zero for j in range(6))
        beta = pf.nrp.bvalue(v6, e)
        if not beta:
            continue
        f = tuple(x / beta for x in e)
        cand = tuple(pf.nrp.evaluate(f) * a + b for a, b in zip(v6, f))
        if pf.nrp.evaluate(cand):
            continue
        t = linalg._dot(pf.trp, cand)
        if t:
            z = pf.symd_to_algebra(cand)
            return tuple(c / t for c in z)
    return None


# ---------------------------------------------------------------------------
# Common values of <mu> n_Q and the pure conic of Q'
# ---------------------------------------------------------------------------

def common_value(Q: QuaternionAlgebra, Q2: QuaternionAlgebra, x_coords, height: Optional[int] = None) -> Verdict:
    """Given a symmetrised element x of (Q, conj) (x) (Q', conj) with
    <<Nrp(x)>> (x) n_Q' hyperbolic, find a nonzero common value of
    <Nrp(x)> n_Q and the pure norm form of Q'.  Existence is guaranteed;
    a miss only ever means the budget ran out."""
    field = Q.field
    if height is None:
        height = default_height(field)
    base = biquaternion_reference(Q, Q2)
    ref = materialize(base)
    pf = pfaffian(ref)
    mu = pf.nrp_of(tuple(x_coords))
    if not any(x_coords):
        raise PreconditionFailed("x must be nonzero")
    twisted8 = quad_pfister(field, [mu, Q2.s, Q2.r]) if mu else None
    if not mu:
        raise PreconditionFailed("Nrp(x) = 0")
    wd = witt_decompose(twisted8, height)
    if wd.anisotropic_part.dim != 0:
        if wd.residual.is_no:
            raise PreconditionFailed("<<Nrp(x)>> n_Q' is not hyperbolic")
        return Verdict.unknown(height, reason="hypothesis not certified")
    conic = Q2.pure_norm_form
    scaled_norm = Q.norm_form.scaled(mu)
    budget = _budget_for(field, height)
    for yv in _vector_stream(conic, height, budget):
        c = conic.evaluate(yv)
        if not c:
            continue
        rep = represents(scaled_norm, c, height)
        if rep.is_yes:
            return Verdict.yes((c, rep.witness, yv), hypothesis_witness=wd.witness)
        if not budget.spend(10):
            break
    return Verdict.unknown(height)
