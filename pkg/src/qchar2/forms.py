"""Quadratic and symmetric bilinear forms over fields of characteristic 2.

A quadratic form is held as an upper-triangular Gram matrix M, meaning
q(x) = sum_{i<=j} M[i][j] x_i x_j.  Its polar form M + M^T is
alternating.  Two Gram matrices present the same polynomial exactly
when their difference is symmetric with zero diagonal, which is the
equality notion used here; isometry is a separate, witnessed relation.

Every isometry produced anywhere in the package is carried by an
:class:`IsometryWitness`, a concrete matrix that an independent checker
re-verifies.  The five standard binary-block rewriting identities are
implemented with closed-form transition matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from . import linalg
from .fields import ArtinSchreierClass, BaseField, FieldMismatch, FieldValue, as_class


class PreconditionFailed(ValueError):
    pass


class OracleInconclusive(RuntimeError):
    """A bounded search could not decide a precondition."""


class NotNonsingular(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


def _coerce_scalar(field, c):
    if isinstance(c, int):
        return field.from_int(c)
    if not isinstance(c, FieldValue):
        raise TypeError(f"expected scalar, got {c!r}")
    if c.field is not field:
        raise FieldMismatch("scalar from the wrong field")
    return c


class BilinearForm:
    """Symmetric bilinear form given by its full Gram matrix."""

    def __init__(self, field: BaseField, gram):
        self.field = field
        self.gram = linalg.mat(gram)
        n = len(self.gram)
        for row in self.gram:
            if len(row) != n:
                raise ValueError("gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("gram matrix must be symmetric")

    @property
    def dim(self):
        return len(self.gram)

    def evaluate(self, u, v):
        return linalg._dot(linalg.mat_vec(self.gram, v), u)

    def is_alternating(self) -> bool:
        return all(not self.gram[i][i] for i in range(self.dim))

    def is_nondegenerate(self) -> bool:
        return linalg.rank(self.field, self.gram) == self.dim

    def orth(self, other: "BilinearForm") -> "BilinearForm":
        n, m = self.dim, other.dim
        z = self.field.zero
        rows = []
        for i in range(n):
            rows.append(tuple(self.gram[i]) + tuple(z for _ in range(m)))
        for i in range(m):
            rows.append(tuple(z for _ in range(n)) + tuple(other.gram[i]))
        return BilinearForm(self.field, rows)

    def tensor(self, other: "BilinearForm") -> "BilinearForm":
        rows = []
        for i in range(self.dim):
            for j in range(other.dim):
                row = []
                for k in range(self.dim):
                    for l in range(other.dim):
                        row.append(self.gram[i][k] * other.gram[j][l])
                rows.append(row)
        return BilinearForm(self.field, rows)

    def scaled(self, c) -> "BilinearForm":
        c = _coerce_scalar(self.field, c)
        return BilinearForm(self.field, [[c * x for x in row] for row in self.gram])

    def __eq__(self, other):
        return (
            isinstance(other, BilinearForm)
            and self.field is other.field
            and self.gram == other.gram
        )

    def __hash__(self):
        return hash((id(self.field), self.gram))

    def __repr__(self):
        return f"BilinearForm(dim={self.dim})"


def bilinear_diag(field, entries) -> BilinearForm:
    entries = [_coerce_scalar(field, c) for c in entries]
    z = field.zero
    n = len(entries)
    return BilinearForm(field, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])


def bilinear_hyperbolic(field) -> BilinearForm:
    z, o = field.zero, field.one
    return BilinearForm(field, [[z, o], [o, z]])


def bilinear_pfister(field, slots) -> BilinearForm:
    """<1,b_1> (x) ... (x) <1,b_m>."""
    form = bilinear_diag(field, [field.one])
    for b in slots:
        form = form.tensor(bilinear_diag(field, [field.one, _coerce_scalar(field, b)]))
    return form


class QuadraticForm:
    """Quadratic form held as an upper-triangular Gram matrix."""

    def __init__(self, field: BaseField, gram_upper):
        self.field = field
        g = linalg.mat(gram_upper)
        n = len(g)
        z = field.zero
        rows = []
        for i, row in enumerate(g):
            if len(row) != n:
                raise ValueError("gram matrix must be square")
            rows.append(tuple(z if j < i else row[j] for j in range(n)))
        self.gram = tuple(rows)

    @property
    def dim(self):
        return len(self.gram)

    def evaluate(self, v):
        acc = self.field.zero
        for i in range(self.dim):
            if not v[i]:
                continue
            for j in range(i, self.dim):
                if self.gram[i][j] and v[j]:
                    acc = acc + self.gram[i][j] * v[i] * v[j]
        return acc

    def polar_matrix(self):
        cached = getattr(self, "_polar_cache", None)
        if cached is None:
            g = self.gram
            cached = linalg.mat_add(g, linalg.transpose(g))
            self._polar_cache = cached
        return cached

    def polar(self) -> BilinearForm:
        return BilinearForm(self.field, self.polar_matrix())

    def bvalue(self, u, v):
        return linalg._dot(linalg.mat_vec(self.polar_matrix(), v), u)

    def orth(self, other: "QuadraticForm") -> "QuadraticForm":
        if other.field is not self.field:
            raise FieldMismatch("orthogonal sum over mixed fields")
        n, m = self.dim, other.dim
        z = self.field.zero
        rows = []
        for i in range(n):
            rows.append(tuple(self.gram[i]) + tuple(z for _ in range(m)))
        for i in range(m):
            rows.append(tuple(z for _ in range(n)) + tuple(other.gram[i]))
        return QuadraticForm(self.field, rows)

    def scaled(self, c) -> "QuadraticForm":
        c = _coerce_scalar(self.field, c)
        if not c:
            raise ValueError("scaling a form by zero")
        return QuadraticForm(self.field, [[c * x for x in row] for row in self.gram])

    def restrict(self, vectors) -> "QuadraticForm":
        """Form induced on the span of the given (independent) vectors."""
        vecs = [tuple(v) for v in vectors]
        m = len(vecs)
        z = self.field.zero
        g = [[z] * m for _ in range(m)]
        for i in range(m):
            g[i][i] = self.evaluate(vecs[i])
            for j in range(i + 1, m):
                g[i][j] = self.bvalue(vecs[i], vecs[j])
        return QuadraticForm(self.field, g)

    def __eq__(self, other):
        """Equality of the induced polynomials."""
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        if self.field is not other.field or self.dim != other.dim:
            return False
        d = linalg.mat_add(self.gram, other.gram)
        dt = linalg.transpose(d)
        return d == dt and all(not d[i][i] for i in range(self.dim))

    def __hash__(self):
        # canonical key: polar matrix plus diagonal
        return hash((id(self.field), self.polar_matrix(), tuple(self.gram[i][i] for i in range(self.dim))))

    def __repr__(self):
        return f"QuadraticForm(dim={self.dim})"


def qblock(field, a, b) -> QuadraticForm:
    a = _coerce_scalar(field, a)
    b = _coerce_scalar(field, b)
    z, o = field.zero, field.one
    return QuadraticForm(field, [[a, o], [z, b]])


def qdiag(field, entries) -> QuadraticForm:
    entries = [_coerce_scalar(field, c) for c in entries]
    z = field.zero
    n = len(entries)
    return QuadraticForm(field, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])


def hyperbolic_plane(field) -> QuadraticForm:
    return qblock(field, field.zero, field.zero)


def hyperbolic(field, m: int) -> QuadraticForm:
    q = hyperbolic_plane(field)
    out = q
    for _ in range(m - 1):
        out = out.orth(q)
    return out


def qtensor(b: BilinearForm, q: QuadraticForm) -> QuadraticForm:
    """Quadratic form b (x) q on the tensor product space.

    Characterized by value b(w,w)q(v) on pure tensors and polar form
    b (x) polar(q); both identities hold for the Gram matrix built here.
    """
    if b.field is not q.field:
        raise FieldMismatch("tensor over mixed fields")
    field = q.field
    n, m = b.dim, q.dim
    P = q.polar_matrix()
    z = field.zero
    size = n * m
    rows = [[z] * size for _ in range(size)]
    for i in range(n):
        for j in range(m):
            r = i * m + j
            for k in range(i, n):
                for l in range(m):
                    c = k * m + l
                    if c < r:
                        continue
                    if k == i:
                        if l >= j:
                            rows[r][c] = b.gram[i][i] * q.gram[j][l]
                    else:
                        rows[r][c] = b.gram[i][k] * P[j][l]
    return QuadraticForm(field, rows)


def quad_pfister(field, slots) -> QuadraticForm:
    """<<b_1,...,b_{m-1}, c]] = <<b_1,...,b_{m-1}>> (x) [1, c]."""
    if not slots:
        raise ValueError("need at least the quadratic slot")
    *bs, c = slots
    base = qblock(field, field.one, _coerce_scalar(field, c))
    if not bs:
        return base
    return qtensor(bilinear_pfister(field, bs), base)


def compose(field, parts) -> QuadraticForm:
    """Orthogonal sum of scalar multiples of quadratic forms and of
    bilinear-times-quadratic tensor products."""
    out = None
    for scalar, payload in parts:
        scalar = _coerce_scalar(field, scalar)
        if isinstance(payload, QuadraticForm):
            piece = payload
        else:
            b, q = payload
            piece = qtensor(b, q)
        if piece.field is not field:
            raise FieldMismatch("compose over mixed fields")
        if scalar != field.one:
            piece = piece.scaled(scalar)
        out = piece if out is None else out.orth(piece)
    if out is None:
        raise ValueError("empty composition")
    return out


# ---------------------------------------------------------------------------
# Witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsometryWitness:
    """Invertible T with q_target(T x) = q_source(x) for all x."""

    source: QuadraticForm
    target: QuadraticForm
    matrix: tuple

    def then(self, other: "IsometryWitness") -> "IsometryWitness":
        """Compose: self: A -> B, other: B -> C gives A -> C."""
        if other.source.dim != self.target.dim:
            raise ValueError("witness composition dimension mismatch")
        return IsometryWitness(self.source, other.target, linalg.mat_mul(other.matrix, self.matrix))

    def inverse(self) -> "IsometryWitness":
        inv = linalg.inverse(self.source.field, self.matrix)
        if inv is None:
            raise ValueError("witness matrix not invertible")
        return IsometryWitness(self.target, self.source, inv)


@dataclass(frozen=True)
class EmbeddingWitness:
    """Injective E with q_ambient(E x) = q_sub(x) for all x."""

    sub: QuadraticForm
    ambient: QuadraticForm
    matrix: tuple  # ambient.dim x sub.dim


def check_isometry_witness(w: IsometryWitness) -> bool:
    """Independent verification: T invertible and T^T M_t T + M_s is
    symmetric with zero diagonal (i.e. the two polynomials coincide)."""
    field = w.source.field
    n = w.source.dim
    if w.target.dim != n or len(w.matrix) != n or any(len(r) != n for r in w.matrix):
        return False
    if linalg.inverse(field, w.matrix) is None:
        return False
    t = w.matrix
    d = linalg.mat_add(
        linalg.mat_mul(linalg.transpose(t), linalg.mat_mul(w.target.gram, t)),
        w.source.gram,
    )
    if d != linalg.transpose(d):
        return False
    return all(not d[i][i] for i in range(n))


def check_embedding_witness(w: EmbeddingWitness) -> bool:
    field = w.sub.field
    n, m = w.ambient.dim, w.sub.dim
    if len(w.matrix) != n or any(len(r) != m for r in w.matrix):
        return False
    if linalg.rank(field, linalg.transpose(w.matrix)) != m:
        return False
    e = w.matrix
    d = linalg.mat_add(
        linalg.mat_mul(linalg.transpose(e), linalg.mat_mul(w.ambient.gram, e)),
        w.sub.gram,
    )
    if d != linalg.transpose(d):
        return False
    return all(not d[i][i] for i in range(m))


def witness_from_basis(normal: QuadraticForm, original: QuadraticForm, columns) -> IsometryWitness:
    """Witness normal -> original whose matrix columns are the chosen
    basis vectors of the original space."""
    matrix = linalg.transpose(linalg.mat(columns))
    return IsometryWitness(normal, original, matrix)


# ---------------------------------------------------------------------------
# Analysis and block normal form
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Analysis:
    dim: int
    polar: BilinearForm
    radical_dim: int
    classification: str  # nonsingular | nondegenerate | degenerate


def analyze(q: QuadraticForm) -> Analysis:
    field = q.field
    P = q.polar_matrix()
    rad = linalg.kernel_basis(field, P)
    rdim = len(rad)
    if rdim == 0:
        cls = "nonsingular"
    elif rdim == 1 and q.evaluate(rad[0]):
        cls = "nondegenerate"
    else:
        cls = "degenerate"
    return Analysis(q.dim, BilinearForm(field, P), rdim, cls)


@dataclass(frozen=True)
class NormalForm:
    blocks: tuple  # ((a_1, b_1), ...) nonsingular planes [a_i, b_i]
    diagonal: tuple  # (c_1, ..., c_s) quasilinear part
    witness: IsometryWitness  # normal form -> original
    form: QuadraticForm  # the assembled normal-form Gram


def assemble_normal(field, blocks, diagonal) -> QuadraticForm:
    q = None
    for a, b in blocks:
        piece = qblock(field, a, b)
        q = piece if q is None else q.orth(piece)
    if diagonal:
        piece = qdiag(field, diagonal)
        q = piece if q is None else q.orth(piece)
    if q is None:
        q = QuadraticForm(field, [])
    return q


def block_normalize(q: QuadraticForm) -> NormalForm:
    """Symplectic reduction of the polar form: q is isometric to
    [a_1,b_1] + ... + [a_r,b_r] + <c_1,...,c_s> and the change of basis
    is returned as a verified witness."""
    field = q.field
    n = q.dim
    P = q.polar_matrix()

    def bval(u, v):
        return linalg._dot(linalg.mat_vec(P, v), u)

    rem = [tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)]
    pairs = []
    while True:
        found = None
        for i in range(len(rem)):
            for j in range(i + 1, len(rem)):
                beta = bval(rem[i], rem[j])
                if beta:
                    found = (i, j, beta)
                    break
            if found:
                break
        if not found:
            break
        i, j, beta = found
        v = rem[i]
        w = linalg.vec_scale(beta.inv(), rem[j])
        pairs.append((v, w))
        new_rem = []
        for k, u in enumerate(rem):
            if k in (i, j):
                continue
            u2 = linalg.vec_add(u, linalg.vec_add(linalg.vec_scale(bval(u, w), v), linalg.vec_scale(bval(u, v), w)))
            new_rem.append(u2)
        rem = new_rem

    blocks = tuple((q.evaluate(v), q.evaluate(w)) for v, w in pairs)
    diagonal = tuple(q.evaluate(u) for u in rem)
    columns = [v for p in pairs for v in p] + rem
    normal = assemble_normal(field, blocks, diagonal)
    witness = witness_from_basis(normal, q, columns)
    assert check_isometry_witness(witness), "block_normalize produced a bad witness"
    return NormalForm(blocks, diagonal, witness, normal)


def arf(q: QuadraticForm) -> ArtinSchreierClass:
    """Sum of a_i b_i over the normal-form blocks, as a class mod {x^2+x}."""
    nf = block_normalize(q)
    if nf.diagonal:
        raise NotNonsingular("Arf invariant needs a nonsingular form")
    acc = q.field.zero
    for a, b in nf.blocks:
        acc = acc + a * b
    return as_class(acc)


# ---------------------------------------------------------------------------
# The five binary-block identities
# ---------------------------------------------------------------------------

def apply_identity(field, ident: int, *operands, height: Optional[int] = None):
    """Rewrite one of the five standard isometries, returning the output
    form and a witness from it back to the input form.

    1: [b1,b2] + [c1,c2]  ->  [b1+c1, b2] + [c1, b2+c2]
    2: [1,b1] + [1,b2]    ->  [1, b1+b2] + H
    3: x*[b1,b2]          ->  [x*b1, b2/x]          (x != 0)
    4: [b1,b2] + <c1>     ->  [b1+c1, b2] + <c1>
    5: [b1,b2] + <c1>     ->  H + <c1>              (input isotropic, c1 != 0)
    """
    o, z = field.one, field.zero
    ops = [_coerce_scalar(field, c) for c in operands]
    if ident == 1:
        b1, b2, c1, c2 = ops
        src = qblock(field, b1, b2).orth(qblock(field, c1, c2))
        out = qblock(field, b1 + c1, b2).orth(qblock(field, c1, b2 + c2))
        cols = [(o, z, o, z), (z, o, z, z), (z, z, o, z), (z, o, z, o)]
    elif ident == 2:
        b1, b2 = ops
        src = qblock(field, o, b1).orth(qblock(field, o, b2))
        out = qblock(field, o, b1 + b2).orth(hyperbolic_plane(field))
        cols = [(o, z, z, z), (z, o, z, o), (o, z, o, z), (b2, z, b2, o)]
    elif ident == 3:
        x, b1, b2 = ops
        if not x:
            raise PreconditionFailed("identity 3 needs x != 0")
        src = qblock(field, b1, b2).scaled(x)
        out = qblock(field, x * b1, b2 / x)
        cols = [(o, z), (z, x.inv())]
    elif ident == 4:
        b1, b2, c1 = ops
        src = qblock(field, b1, b2).orth(qdiag(field, [c1]))
        out = qblock(field, b1 + c1, b2).orth(qdiag(field, [c1]))
        cols = [(o, z, o), (z, o, z), (z, z, o)]
    elif ident == 5:
        b1, b2, c1 = ops
        if not c1:
            raise PreconditionFailed("identity 5 needs c1 != 0")
        src = qblock(field, b1, b2).orth(qdiag(field, [c1]))
        from . import oracles  # local import: the oracle layer sits above forms

        verdict = oracles.isotropic_vector(src, height=height)
        if verdict.status == "unknown":
            raise OracleInconclusive("isotropy of the input is undecided at this height")
        if verdict.status == "no":
            raise PreconditionFailed("identity 5 needs an isotropic input")
        v = verdict.witness
        out = hyperbolic_plane(field).orth(qdiag(field, [c1]))
        # complete v to a hyperbolic pair inside the nonsingular part
        e1 = (o, z, z)
        f1 = (z, o, z)
        y = None
        for cand in (e1, f1):
            beta = src.bvalue(v, cand)
            if beta:
                y = linalg.vec_scale(beta.inv(), cand)
                break
        assert y is not None, "isotropic vector pairs with the plane"
        f = linalg.vec_add(y, linalg.vec_scale(src.evaluate(y), v))
        g = (z, z, o)
        cols = [v, f, g]
    else:
        raise ValueError("identity index must be 1..5")
    witness = witness_from_basis(out, src, cols)
    if not check_isometry_witness(witness):
        raise AssertionError(f"identity {ident} produced an invalid witness")
    return out, witness


# ---------------------------------------------------------------------------
# Convenience: scaled-square and mod-wp block rewrites used by the oracles
# ---------------------------------------------------------------------------

def square_scale_witness(q: QuadraticForm, c: FieldValue) -> IsometryWitness:
    """Witness c^2 * q -> q via x |-> c x."""
    field = q.field
    scaled = q.scaled(c * c)
    t = [[c if i == j else field.zero for j in range(q.dim)] for i in range(q.dim)]
    w = IsometryWitness(scaled, q, linalg.mat(t))
    assert check_isometry_witness(w)
    return w


def block_shift_witness(field, a, e, x) -> IsometryWitness:
    """Witness a[1, e + x^2 + x] -> a[1, e] via (u, v) |-> (u + x v, v)."""
    src = qblock(field, field.one, e + x * x + x).scaled(a)
    tgt = qblock(field, field.one, e).scaled(a)
    t = linalg.mat([[field.one, x], [field.zero, field.one]])
    w = IsometryWitness(src, tgt, t)
    assert check_isometry_witness(w)
    return w
