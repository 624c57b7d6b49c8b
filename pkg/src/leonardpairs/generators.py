"""Generators: algebraic module constructions and random sources.

Structured families, all returned as exact matrix pairs:

* example2: the classical 4x4 pair together with the transition matrix P
  satisfying AP = PA* and P^2 = 8I.
* sl2_module / sl2_pair: the (d+1)-dimensional irreducible module with
  h v_i = (d-2i) v_i, f v_i = (i+1) v_{i+1}, e v_i = (d-i+1) v_{i-1};
  pairs are K-linear combinations x e + y f + z h chosen semisimple and
  generating.
* uq_module / uq_pair: the quantum weight module with k u_i = eps
  q^(d-2i) u_i, f u_i = [i+1] u_{i+1}, e u_i = eps [d-i+1] u_{i-1};
  A = alpha f + k/(q - 1/q) against A* = beta e + k^(-1)/(q - 1/q).
  The pair is Leonard exactly when eps alpha beta avoids q^(d-1),
  q^(d-3), ..., q^(1-d); uq_pair reports that membership as a flag.
* build_lattice / lattice_pair: grading, raising and lowering operators
  K, R, L on the full subspace lattice of GF(q)^n over Q(sqrt q), with
  the quantum relations verified exactly; lattice_pair splits the module
  into irreducible chains, each carrying one Leonard pair in split form.

Plus deterministic random sources for valid parameter arrays and for
certified non-examples.

All module relations and decompositions are re-verified at construction
time; a failure there raises InternalCheckError and means a bug, not bad
input.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    GeneratorError,
    InternalCheckError,
    LatticeSizeError,
)
from .field import Field, QuadraticExtension, Rationals
from .leonard import is_leonard_pair
from .matrix import ExactMatrix, _nullspace_grid, conjugate, is_multiplicity_free
from .parray import ParameterArray, pa3_rhs, pa4_rhs, validate

EXAMPLE2_NAME = "example2"


def example2(field: Field) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix]:
    """The classical 4x4 pair and its transition matrix, embedded in field.

    Over characteristics other than 2 and 3 this is a Leonard pair and
    AP = PA* with P^2 = 8I; in characteristics 2 and 3 the matrices still
    embed but the eigenvalues collide and recognition rejects the pair.
    """
    a = ExactMatrix(field, [[0, 3, 0, 0], [1, 0, 2, 0], [0, 2, 0, 1], [0, 0, 3, 0]])
    a_star = ExactMatrix.diagonal(field, (3, 1, -1, -3))
    p = ExactMatrix(
        field,
        [[1, 3, 3, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -3, 3, -1]],
    )
    return a, a_star, p


@dataclass(frozen=True)
class Sl2Module:
    """The irreducible module of diameter d with exact bracket relations."""

    field: Field
    d: int
    e: ExactMatrix
    f: ExactMatrix
    h: ExactMatrix


def sl2_module(field: Field, d: int) -> Sl2Module:
    if d < 0:
        raise GeneratorError("diameter must be nonnegative")
    n = d + 1
    z = field.zero
    e_rows = [[z] * n for _ in range(n)]
    f_rows = [[z] * n for _ in range(n)]
    for i in range(n):
        if i + 1 <= d:
            f_rows[i + 1][i] = field.from_int(i + 1)
        if i - 1 >= 0:
            e_rows[i - 1][i] = field.from_int(d - i + 1)
    e = ExactMatrix._raw(field, e_rows)
    f = ExactMatrix._raw(field, f_rows)
    h = ExactMatrix.diagonal(field, [d - 2 * i for i in range(n)])
    module = Sl2Module(field, d, e, f, h)
    _verify_sl2_relations(module)
    return module


def _verify_sl2_relations(module: Sl2Module) -> None:
    e, f, h = module.e, module.f, module.h
    two = module.field.from_int(2)
    checks = (
        (h @ e + (e @ h).scale(module.field.from_int(-1)), e.scale(two)),
        (h @ f + (f @ h).scale(module.field.from_int(-1)), f.scale(module.field.from_int(-2))),
        (e @ f + (f @ e).scale(module.field.from_int(-1)), h),
    )
    for got, want in checks:
        if got != want:
            raise InternalCheckError("bracket relations fail on the module")


def _sl2_combination(module: Sl2Module, coeffs) -> ExactMatrix:
    field = module.field
    x, y, z = (field.coerce(c) for c in coeffs)
    return (
        module.e.scale(x) + module.f.scale(y) + module.h.scale(z)
    )


def _sl2_bracket(field: Field, u, v):
    """Coordinates of [u, v] in the (e, f, h) basis."""
    x1, y1, z1 = u
    x2, y2, z2 = v
    two = field.from_int(2)
    x = field.mul(two, field.sub(field.mul(z1, x2), field.mul(x1, z2)))
    y = field.mul(two, field.sub(field.mul(y1, z2), field.mul(z1, y2)))
    z = field.sub(field.mul(x1, y2), field.mul(y1, x2))
    return (x, y, z)


def sl2_pair(
    field: Field,
    d: int,
    a=(0, 0, 1),
    a_star=(1, 1, 0),
) -> tuple[ExactMatrix, ExactMatrix]:
    """The pair (x e + y f + z h, x' e + y' f + z' h) on the module.

    Both elements must be semisimple (z^2 + xy != 0) and together generate
    the algebra (bracket closure of dimension 3); the defaults give the
    pair (h, e + f).  The built matrices are confirmed multiplicity-free
    on the module, which also rejects characteristics where the weights
    d - 2i collide.
    """
    module = sl2_module(field, d)
    u = tuple(field.coerce(c) for c in a)
    v = tuple(field.coerce(c) for c in a_star)
    for name, (x, y, z) in (("A", u), ("A*", v)):
        if field.is_zero(field.add(field.mul(z, z), field.mul(x, y))):
            raise GeneratorError(f"{name} = xe+yf+zh is not semisimple: z^2 + xy = 0")
    w = _sl2_bracket(field, u, v)
    det = _det3(field, u, v, w)
    if field.is_zero(det):
        raise GeneratorError(
            "the chosen elements do not generate: bracket closure has dimension < 3"
        )
    mat_a = _sl2_combination(module, u)
    mat_s = _sl2_combination(module, v)
    for name, m in (("A", mat_a), ("A*", mat_s)):
        check = is_multiplicity_free(m)
        if not check:
            raise GeneratorError(
                f"{name} is not multiplicity-free on the diameter-{d} module "
                f"over {field.name}: {check.reason}"
            )
    return mat_a, mat_s


def _det3(field: Field, r0, r1, r2):
    def m2(a, b, c, d):
        return field.sub(field.mul(a, d), field.mul(b, c))

    return field.add(
        field.sub(
            field.mul(r0[0], m2(r1[1], r1[2], r2[1], r2[2])),
            field.mul(r0[1], m2(r1[0], r1[2], r2[0], r2[2])),
        ),
        field.mul(r0[2], m2(r1[0], r1[1], r2[0], r2[1])),
    )


@dataclass(frozen=True)
class UqModule:
    """The quantum weight module; relations kk^-1 = 1, ke = q^2 ek,
    kf = q^-2 fk and ef - fe = (k - k^-1)/(q - 1/q) hold exactly."""

    field: Field
    d: int
    q: object
    epsilon: object
    e: ExactMatrix
    f: ExactMatrix
    k: ExactMatrix
    k_inv: ExactMatrix


def _q_int(field: Field, q, n: int):
    """[n] = (q^n - q^-n)/(q - 1/q) as a payload."""
    qi = field.inv(q)
    num = field.sub(field.pow(q, n), field.pow(qi, n))
    den = field.sub(q, qi)
    return field.div(num, den)


def _signed_power(field: Field, base, e: int):
    if e >= 0:
        return field.pow(base, e)
    return field.pow(field.inv(base), -e)


def uq_module(field: Field, d: int, q, epsilon=1) -> UqModule:
    if d < 0:
        raise GeneratorError("diameter must be nonnegative")
    q = field.coerce(q)
    epsilon = field.coerce(epsilon)
    if field.is_zero(q):
        raise GeneratorError("q must be nonzero")
    qsq = field.mul(q, q)
    power = field.one
    for j in range(1, max(d, 1) + 1):
        power = field.mul(power, qsq)
        if power == field.one:
            raise GeneratorError(
                f"q^{2 * j} = 1, so the weights q^(d-2i) collide at diameter {d}"
            )
    if epsilon not in (field.one, field.from_int(-1)):
        raise GeneratorError("epsilon must be 1 or -1")
    if field.characteristic() == 2:
        epsilon = field.one  # the sign set collapses

    n = d + 1
    z = field.zero
    e_rows = [[z] * n for _ in range(n)]
    f_rows = [[z] * n for _ in range(n)]
    k_diag, k_inv_diag = [], []
    for i in range(n):
        weight = field.mul(epsilon, _signed_power(field, q, d - 2 * i))
        k_diag.append(weight)
        k_inv_diag.append(field.inv(weight))
        if i + 1 <= d:
            f_rows[i + 1][i] = _q_int(field, q, i + 1)
        if i - 1 >= 0:
            e_rows[i - 1][i] = field.mul(epsilon, _q_int(field, q, d - i + 1))
    module = UqModule(
        field,
        d,
        q,
        epsilon,
        ExactMatrix._raw(field, e_rows),
        ExactMatrix._raw(field, f_rows),
        ExactMatrix._raw(field, [[k_diag[i] if i == j else z for j in range(n)] for i in range(n)]),
        ExactMatrix._raw(field, [[k_inv_diag[i] if i == j else z for j in range(n)] for i in range(n)]),
    )
    _verify_uq_relations(module)
    return module


def _verify_uq_relations(module: UqModule) -> None:
    field = module.field
    q = module.q
    e, f, k, k_inv = module.e, module.f, module.k, module.k_inv
    ident = ExactMatrix.identity(field, module.d + 1)
    qsq = field.mul(q, q)
    neg = field.from_int(-1)
    ok = (
        k @ k_inv == ident
        and k @ e == (e @ k).scale(qsq)
        and k @ f == (f @ k).scale(field.inv(qsq))
    )
    if ok:
        den = field.sub(q, field.inv(q))
        lhs = e @ f + (f @ e).scale(neg)
        rhs = (k + k_inv.scale(neg)).scale(field.inv(den))
        ok = lhs == rhs
    if not ok:
        raise InternalCheckError("quantum relations fail on the module")


def uq_forbidden_set(field: Field, d: int, q) -> list:
    """The payloads q^(d-1), q^(d-3), ..., q^(1-d)."""
    q = field.coerce(q)
    return [_signed_power(field, q, d - 1 - 2 * t) for t in range(d)]


def uq_pair(
    field: Field,
    d: int,
    q,
    *,
    alpha=1,
    beta=1,
    epsilon=1,
) -> tuple[ExactMatrix, ExactMatrix, bool]:
    """The quantum pair plus a flag telling whether eps alpha beta avoids
    the forbidden powers of q.

    A flagged-forbidden pair is still returned: one of its dual split
    products vanishes, so recognition rejects it, and callers may want
    the boundary object itself.
    """
    alpha = field.coerce(alpha)
    beta = field.coerce(beta)
    if field.is_zero(alpha) or field.is_zero(beta):
        raise GeneratorError("alpha and beta must be nonzero")
    module = uq_module(field, d, q, epsilon)
    q_pay = module.q
    den = field.inv(field.sub(q_pay, field.inv(q_pay)))
    a = module.f.scale(alpha) + module.k.scale(den)
    a_star = module.e.scale(beta) + module.k_inv.scale(den)
    scalar = field.mul(module.epsilon, field.mul(alpha, beta))
    allowed = scalar not in uq_forbidden_set(field, d, q_pay)
    return a, a_star, allowed


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    value = Fraction(1)
    for i in range(k):
        value *= Fraction(q ** (n - i) - 1, q ** (i + 1) - 1)
    if value.denominator != 1:
        raise InternalCheckError("Gaussian binomial did not reduce to an integer")
    return int(value)


# monic irreducibles (coefficients low to high, leading 1 omitted is not:
# full tuples) used to realize GF(p^k); each table is re-verified by
# checking every nonzero element is invertible
_TINY_MODULI = {
    4: (1, 1, 1),
    8: (1, 1, 0, 1),
    16: (1, 1, 0, 0, 1),
    32: (1, 0, 1, 0, 0, 1),
    64: (1, 1, 0, 0, 0, 0, 1),
    9: (1, 0, 1),
    27: (1, 2, 0, 1),
    81: (2, 1, 0, 0, 1),
    25: (3, 0, 1),
    125: (1, 1, 0, 1),
    49: (1, 0, 1),
    343: (2, 1, 0, 1),
}


def _factor_prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise GeneratorError(f"{q} is not a prime power")
    for p in (2, 3, 5, 7):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise GeneratorError(f"{q} is not a power of the prime {p}")
            return p, k
    raise GeneratorError(f"the lattice supports prime powers of 2, 3, 5, 7; got {q}")


class _TinyField:
    """GF(q) for small prime powers, elements encoded as 0..q-1 (base-p
    digit vectors of the polynomial representation), arithmetic by
    precomputed tables.  Internal to the lattice enumeration."""

    def __init__(self, q: int):
        p, k = _factor_prime_power(q)
        self.q, self.p, self.k = q, p, k
        if k == 1:
            self.add_table = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.mul_table = [[a * b % p for b in range(p)] for a in range(p)]
        else:
            modulus = _TINY_MODULI.get(q)
            if modulus is None:
                raise GeneratorError(f"no internal representation for GF({q})")
            digits = [self._digits(a) for a in range(q)]
            self.add_table = [
                [
                    self._undigits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                    for b in range(q)
                ]
                for a in range(q)
            ]
            self.mul_table = [
                [self._polymul(digits[a], digits[b], modulus) for b in range(q)]
                for a in range(q)
            ]
        self.neg_table = [next(b for b in range(q) if self.add_table[a][b] == 0)
                          for a in range(q)]
        self.inv_table = [None] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_table[a][b] == 1:
                    self.inv_table[a] = b
                    break
            if self.inv_table[a] is None:
                raise InternalCheckError(f"GF({q}) table modulus is not irreducible")

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, digits) -> int:
        out = 0
        for c in reversed(digits):
            out = out * self.p + c
        return out

    def _polymul(self, a, b, modulus) -> int:
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for top in range(2 * k - 2, k - 1, -1):
            c = prod[top]
            if c:
                prod[top] = 0
                for j in range(k):
                    prod[top - k + j] = (prod[top - k + j] - c * modulus[j]) % p
        return self._undigits(prod[:k])


def _rref_subspaces(n: int, dim: int, tiny: _TinyField):
    """All dim-dimensional subspaces of GF(q)^n as RREF row tuples."""
    if dim == 0:
        yield ()
        return
    q = tiny.q
    for pivots in itertools.combinations(range(n), dim):
        free = [
            (r, c)
            for r in range(dim)
            for c in range(n)
            if c > pivots[r] and c not in pivots
        ]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(dim)]
            for r, pc in enumerate(pivots):
                rows[r][pc] = 1
            for (r, c), v in zip(free, values):
                rows[r][c] = v
            yield tuple(tuple(row) for row in rows)


def _contains(big, small, tiny: _TinyField) -> bool:
    """Whether span(small) <= span(big), both in RREF."""
    pivots = [next(c for c, v in enumerate(row) if v) for row in big]
    for row in small:
        vec = list(row)
        for prow, pc in zip(big, pivots):
            coeff = vec[pc]
            if coeff:
                for j, b in enumerate(prow):
                    vec[j] = tiny.add_table[vec[j]][tiny.neg_table[tiny.mul_table[coeff][b]]]
        if any(vec):
            return False
    return True


@dataclass(frozen=True)
class SubspaceLattice:
    """All subspaces of GF(q)^n with the grading, raising and lowering
    operators over the sqrt(q) scalars; covers[k][j] lists the grade-(k+1)
    indices covering vertex j of grade k."""

    n: int
    q: int
    field: Field
    grades: tuple
    offsets: tuple[int, ...]
    covers: tuple
    k_op: ExactMatrix
    r_op: ExactMatrix
    l_op: ExactMatrix

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.grades)

    @property
    def points(self) -> tuple:
        """All subspaces in grade order, matching the vertex coordinates."""
        return tuple(x for grade in self.grades for x in grade)

    @property
    def total_subspaces(self) -> int:
        return self.offsets[-1]


MAX_LATTICE_SUBSPACES = 3000


def _sqrt_q_setup(q: int):
    """Field containing sqrt q and the payload of sqrt q itself."""
    p, k = _factor_prime_power(q)
    if k % 2 == 0:
        field = Rationals()
        return field, field.from_int(p ** (k // 2))
    field = QuadraticExtension(p)
    return field, field.from_parts(0, p ** ((k - 1) // 2))


def build_lattice(n: int, q: int, *, max_subspaces: int = MAX_LATTICE_SUBSPACES) -> SubspaceLattice:
    """Enumerate the subspace lattice of GF(q)^n and build K, R, L.

    K scales a grade-k vertex by sqrt(q)^(n-2k); R sends a vertex to the
    sum of its covers; L sends it to sqrt(q)^(1-n) times the sum of the
    vertices it covers.  The relations KL = q LK, KR = q^-1 RK and
    LR - RL = (K - K^-1)/(sqrt q - 1/sqrt q) are verified exactly before
    returning.
    """
    if n < 1:
        raise GeneratorError("n must be at least 1")
    if n > 5:
        raise GeneratorError(f"the lattice construction is guarded at n <= 5; got {n}")
    tiny = _TinyField(q)
    counts = tuple(gaussian_binomial(n, k, q) for k in range(n + 1))
    if sum(counts) > max_subspaces:
        raise LatticeSizeError(
            f"the lattice of GF({q})^{n} has {sum(counts)} subspaces, "
            f"above the limit of {max_subspaces}"
        )
    grades = tuple(tuple(_rref_subspaces(n, k, tiny)) for k in range(n + 1))
    for k, verts in enumerate(grades):
        if len(verts) != counts[k]:
            raise InternalCheckError(
                f"enumerated {len(verts)} subspaces of dimension {k}, "
                f"expected {counts[k]}"
            )
    offsets = [0]
    for k in range(n + 1):
        offsets.append(offsets[-1] + counts[k])
    covers = tuple(
        tuple(
            tuple(
                i
                for i, up in enumerate(grades[k + 1])
                if _contains(up, x, tiny)
            )
            for x in grades[k]
        )
        for k in range(n)
    )

    field, sq = _sqrt_q_setup(q)
    total = offsets[-1]
    z = field.zero
    den = field.inv(field.sub(sq, field.inv(sq)))
    k_rows = [[z] * total for _ in range(total)]
    r_rows = [[z] * total for _ in range(total)]
    l_rows = [[z] * total for _ in range(total)]
    l_scale = _signed_power(field, sq, 1 - n)
    for k in range(n + 1):
        for j in range(counts[k]):
            col = offsets[k] + j
            k_rows[col][col] = _signed_power(field, sq, n - 2 * k)
            if k < n:
                for up in covers[k][j]:
                    r_rows[offsets[k + 1] + up][col] = field.one
                    l_rows[col][offsets[k + 1] + up] = l_scale
    lattice = SubspaceLattice(
        n,
        q,
        field,
        grades,
        tuple(offsets),
        covers,
        ExactMatrix._raw(field, k_rows),
        ExactMatrix._raw(field, r_rows),
        ExactMatrix._raw(field, l_rows),
    )
    _verify_lattice_relations(lattice, sq, den)
    return lattice


def _sparse_rows(matrix: ExactMatrix) -> list[dict]:
    f = matrix.field
    return [
        {j: v for j, v in enumerate(row) if not f.is_zero(v)}
        for row in matrix.rows
    ]


def _sparse_mul(field: Field, a: list[dict], b: list[dict]) -> list[dict]:
    out = []
    for row in a:
        acc: dict = {}
        for mid, va in row.items():
            for j, vb in b[mid].items():
                term = field.mul(va, vb)
                cur = acc.get(j)
                acc[j] = term if cur is None else field.add(cur, term)
        out.append({j: v for j, v in acc.items() if not field.is_zero(v)})
    return out


def _sparse_scale(field: Field, a: list[dict], c) -> list[dict]:
    return [{j: field.mul(c, v) for j, v in row.items()} for row in a]


def _sparse_sub(field: Field, a: list[dict], b: list[dict]) -> list[dict]:
    out = []
    for ra, rb in zip(a, b):
        row = dict(ra)
        for j, v in rb.items():
            diff = field.sub(row.get(j, field.zero), v)
            if field.is_zero(diff):
                row.pop(j, None)
            else:
                row[j] = diff
        out.append(row)
    return out


def _verify_lattice_relations(lat: SubspaceLattice, sq, den) -> None:
    """Check the three quantum relations entrywise on the built operators.

    The products are formed sparsely; that skips structural zeros but
    compares every surviving entry exactly.
    """
    field = lat.field
    q_pay = field.from_int(lat.q)
    k_sp = _sparse_rows(lat.k_op)
    r_sp = _sparse_rows(lat.r_op)
    l_sp = _sparse_rows(lat.l_op)
    if _sparse_mul(field, k_sp, l_sp) != _sparse_scale(
        field, _sparse_mul(field, l_sp, k_sp), q_pay
    ):
        raise InternalCheckError("KL = qLK fails")
    if _sparse_mul(field, k_sp, r_sp) != _sparse_scale(
        field, _sparse_mul(field, r_sp, k_sp), field.inv(q_pay)
    ):
        raise InternalCheckError("KR = q^-1 RK fails")
    lhs = _sparse_sub(
        field,
        _sparse_mul(field, l_sp, r_sp),
        _sparse_mul(field, r_sp, l_sp),
    )
    k_inv_sp = [
        {i: field.inv(row[i])} for i, row in enumerate(k_sp)
    ]
    rhs = _sparse_scale(field, _sparse_sub(field, k_sp, k_inv_sp), den)
    if lhs != rhs:
        raise InternalCheckError("LR - RL = (K - K^-1)/(sq - 1/sq) fails")


@dataclass(frozen=True)
class LatticeComponent:
    """One irreducible chain: grade of its lowest vector, diameter, the
    split-form pair carried on it, and the chain vectors in grade-sorted
    vertex coordinates (rational payloads)."""

    grade: int
    index: int
    diameter: int
    a: ExactMatrix
    a_star: ExactMatrix
    basis: tuple[tuple, ...]


@dataclass(frozen=True)
class LatticeDecomposition:
    n: int
    q: int
    field: Field
    counts: tuple[int, ...]
    components: tuple[LatticeComponent, ...]

    @property
    def total_subspaces(self) -> int:
        return sum(self.counts)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for comp in self.components:
            out[comp.diameter] = out.get(comp.diameter, 0) + 1
        return out


def lattice_forbidden_set(lat: SubspaceLattice) -> list:
    """The payloads sqrt(q)^(n-1), sqrt(q)^(n-3), ..., sqrt(q)^(1-n)."""
    _, sq = _sqrt_q_setup(lat.q)
    return [_signed_power(lat.field, sq, lat.n - 1 - 2 * t) for t in range(lat.n)]


def lattice_pair(
    lat: SubspaceLattice,
    alpha=1,
    beta=None,
) -> tuple[ExactMatrix, ExactMatrix, LatticeDecomposition]:
    """A = alpha R + K/(sqrt q - 1/sqrt q) and A* = beta L +
    K^(-1)/(sqrt q - 1/sqrt q), plus the decomposition into chains.

    Each grade-k kernel vector of L generates a chain of diameter n - 2k
    on which the pair restricts to a split bidiagonal Leonard pair; every
    component is certified by recognition before returning.  alpha beta
    must avoid sqrt(q)^(n-1), ..., sqrt(q)^(1-n); beta defaults to q^n,
    which is always safe.
    """
    field = lat.field
    n, q = lat.n, lat.q
    alpha = field.coerce(alpha)
    beta = field.coerce(q**n if beta is None else beta)
    if field.is_zero(alpha) or field.is_zero(beta):
        raise GeneratorError("alpha and beta must be nonzero")
    product = field.mul(alpha, beta)
    if product in lattice_forbidden_set(lat):
        raise GeneratorError(
            "alpha * beta equals a forbidden power of sqrt(q); "
            "the chains degenerate"
        )
    _, sq = _sqrt_q_setup(q)
    den = field.inv(field.sub(sq, field.inv(sq)))
    counts = lat.counts
    # assembled cell by cell so the handful of distinct payloads is shared
    # across the whole grid (the dense operators get large near the guard)
    total = lat.total_subspaces
    z = field.zero
    rows_a = [[z] * total for _ in range(total)]
    rows_s = [[z] * total for _ in range(total)]
    super_pay = field.mul(beta, _signed_power(field, sq, 1 - n))
    for k in range(n + 1):
        diag = field.mul(_signed_power(field, sq, n - 2 * k), den)
        diag_s = field.mul(_signed_power(field, sq, 2 * k - n), den)
        for j in range(counts[k]):
            col = lat.offsets[k] + j
            rows_a[col][col] = diag
            rows_s[col][col] = diag_s
            if k < n:
                for up in lat.covers[k][j]:
                    rows_a[lat.offsets[k + 1] + up][col] = alpha
                    rows_s[col][lat.offsets[k + 1] + up] = super_pay
    big_a = ExactMatrix._raw(field, rows_a)
    big_s = ExactMatrix._raw(field, rows_s)
    q_rat = Rationals()
    l_scale = _signed_power(field, sq, 1 - n)
    components = []
    for k in range(n // 2 + 1):
        d_comp = n - 2 * k
        if k == 0:
            kernel = [[q_rat.one]]
        else:
            rows = [[q_rat.zero] * counts[k] for _ in range(counts[k - 1])]
            for j_low in range(counts[k - 1]):
                for j_up in lat.covers[k - 1][j_low]:
                    rows[j_low][j_up] = q_rat.one
            kernel = _nullspace_grid(q_rat, rows)
        expected = counts[k] - (counts[k - 1] if k >= 1 else 0)
        if len(kernel) != expected:
            raise InternalCheckError(
                f"grade {k} kernel has dimension {len(kernel)}, expected {expected}"
            )
        for idx, low in enumerate(kernel):
            chain = [list(low)]
            for j in range(d_comp):
                here = k + j
                nxt = [q_rat.zero] * counts[here + 1]
                for col, coeff in enumerate(chain[j]):
                    if q_rat.is_zero(coeff):
                        continue
                    for target in lat.covers[here][col]:
                        nxt[target] = q_rat.add(nxt[target], coeff)
                if all(q_rat.is_zero(v) for v in nxt):
                    raise InternalCheckError("chain ended before its diameter")
                chain.append(nxt)
            _check_chain_top(q_rat, chain[-1], lat.covers, k + d_comp, counts, n)
            c_raw = _lowering_coefficients(q_rat, chain, lat.covers, k, counts)
            basis = tuple(
                _embed(q_rat, vec, k + j, counts) for j, vec in enumerate(chain)
            )
            comp = _component_pair(
                field, sq, den, l_scale, alpha, beta, k, idx, d_comp, c_raw, n, basis
            )
            if not is_leonard_pair(comp.a, comp.a_star):
                raise InternalCheckError(
                    f"grade-{k} component failed recognition despite an "
                    f"allowed alpha * beta"
                )
            components.append(comp)
    dim_sum = sum(c.diameter + 1 for c in components)
    if dim_sum != sum(counts):
        raise InternalCheckError(
            f"component dimensions sum to {dim_sum}, not {sum(counts)}"
        )
    decomposition = LatticeDecomposition(n, q, field, counts, tuple(components))
    return big_a, big_s, decomposition


def lattice_decomposition(
    n: int,
    q: int,
    *,
    alpha=1,
    beta=None,
    max_subspaces: int = MAX_LATTICE_SUBSPACES,
) -> LatticeDecomposition:
    """Build the lattice and return just the decomposition."""
    lat = build_lattice(n, q, max_subspaces=max_subspaces)
    return lattice_pair(lat, alpha, beta)[2]


def _check_chain_top(q_rat, top, covers, grade, counts, n) -> None:
    if grade == n:
        return
    out = [q_rat.zero] * counts[grade + 1]
    for col, coeff in enumerate(top):
        if q_rat.is_zero(coeff):
            continue
        for target in covers[grade][col]:
            out[target] = q_rat.add(out[target], coeff)
    if any(not q_rat.is_zero(v) for v in out):
        raise InternalCheckError("R does not kill the top of the chain")


def _lowering_coefficients(q_rat, chain, covers, k, counts):
    """c_j with (unscaled lowering) w_j = c_j w_{j-1}, verified entrywise."""
    out = []
    for j in range(1, len(chain)):
        here = k + j
        image = [q_rat.zero] * counts[here - 1]
        for j_low in range(counts[here - 1]):
            acc = q_rat.zero
            for j_up in covers[here - 1][j_low]:
                acc = q_rat.add(acc, chain[j][j_up])
            image[j_low] = acc
        prev = chain[j - 1]
        lead = next(i for i, v in enumerate(prev) if not q_rat.is_zero(v))
        c = q_rat.div(image[lead], prev[lead])
        for a, b in zip(image, prev):
            if a != q_rat.mul(c, b):
                raise InternalCheckError("L does not act by a scalar on the chain")
        out.append(c)
    return out


def _embed(q_rat, vec, grade, counts):
    out = []
    for k, size in enumerate(counts):
        out.extend(vec if k == grade else [q_rat.zero] * size)
    return tuple(out)


def _component_pair(field, sq, den, l_scale, alpha, beta, k, idx, d_comp, c_raw, n, basis):
    m = d_comp + 1
    z = field.zero
    rows_a = [[z] * m for _ in range(m)]
    rows_s = [[z] * m for _ in range(m)]
    for j in range(m):
        weight = _signed_power(field, sq, n - 2 * (k + j))
        rows_a[j][j] = field.mul(weight, den)
        rows_s[j][j] = field.mul(field.inv(weight), den)
        if j + 1 < m:
            rows_a[j + 1][j] = alpha
            rows_s[j][j + 1] = field.mul(
                field.mul(beta, l_scale), field.from_rational(c_raw[j])
            )
    return LatticeComponent(
        k,
        idx,
        d_comp,
        ExactMatrix._raw(field, rows_a),
        ExactMatrix._raw(field, rows_s),
        basis,
    )


def random_parameter_array(field: Field, d: int, rng, max_tries: int = 500) -> ParameterArray:
    """A valid parameter array drawn from the direct construction: shared
    three-term ratio for the eigenvalue sequences, free phi_1, rejection on
    the nonvanishing axiom."""
    for _ in range(max_tries):
        if d <= 2:
            theta = _distinct(field, rng, d + 1)
            theta_star = _distinct(field, rng, d + 1)
        else:
            r = field.random_element(rng).payload
            theta = _recurrence(field, _distinct(field, rng, 3), r, d)
            theta_star = _recurrence(field, _distinct(field, rng, 3), r, d)
        if theta is None or theta_star is None:
            continue
        phi1 = field.random_element(rng).payload
        if field.is_zero(phi1):
            continue
        candidate = _complete_array(field, theta, theta_star, phi1)
        if candidate is not None and validate(candidate).valid:
            return candidate
    raise GeneratorError(
        f"no valid parameter array of diameter {d} over {field.name} "
        f"after {max_tries} draws"
    )


def _distinct(field: Field, rng, count: int, tries: int = 60):
    for _ in range(tries):
        values = [field.random_element(rng).payload for _ in range(count)]
        if len({field.serialize(v) for v in values}) == count:
            return values
    return None


def _recurrence(field: Field, starts, r, d: int):
    if starts is None:
        return None
    seq = list(starts)
    while len(seq) < d + 1:
        seq.append(field.sub(seq[-3], field.mul(r, field.sub(seq[-2], seq[-1]))))
    seq = seq[: d + 1]
    if len({field.serialize(v) for v in seq}) != len(seq):
        return None
    return seq


def _complete_array(field: Field, theta, theta_star, phi1):
    d = len(theta) - 1
    probe = ParameterArray(
        field,
        theta,
        theta_star,
        [field.one] * d,
        ([phi1] + [field.one] * (d - 1)) if d >= 1 else [],
    )
    varphi = [pa3_rhs(probe, i) for i in range(1, d + 1)]
    if any(field.is_zero(v) for v in varphi):
        return None
    probe2 = ParameterArray(field, theta, theta_star, varphi, probe.phi)
    phi = [pa4_rhs(probe2, i) for i in range(1, d + 1)]
    if any(field.is_zero(v) for v in phi):
        return None
    return ParameterArray(field, theta, theta_star, varphi, phi)


NONEXAMPLE_KINDS = ("repeated-eigenvalue", "reducible", "one-sided", "defective")


def random_nonexample(field: Field, n: int, rng, kind: "str | None" = None):
    """A pair certified not to be a Leonard pair, dressed by conjugation.

    Every kind fails for a structural reason that conjugation cannot cure:
    a repeated dual eigenvalue, a disconnected support, a one-directional
    support, or a defective (nondiagonalizable) member.
    """
    if n < 2:
        raise GeneratorError("non-examples need size at least 2")
    if kind is None:
        kind = NONEXAMPLE_KINDS[rng.randrange(len(NONEXAMPLE_KINDS))]
    if kind not in NONEXAMPLE_KINDS:
        raise GeneratorError(f"unknown non-example kind {kind!r}")

    diag = _structural_scalars(field, n, rng)
    z = field.zero
    rows = [[z] * n for _ in range(n)]

    if kind == "repeated-eigenvalue":
        for i in range(n):
            rows[i][i] = diag[i]
            if i + 1 < n:
                rows[i + 1][i] = field.one
                rows[i][i + 1] = field.one
        a = ExactMatrix._raw(field, rows)
        dup = list(diag)
        dup[-1] = dup[0]
        a_star = ExactMatrix.diagonal(field, dup)
    elif kind == "reducible":
        cut = rng.randrange(1, n - 1) if n > 2 else 1
        for i in range(n):
            rows[i][i] = diag[i]
            if i + 1 < n and i + 1 != cut:
                rows[i + 1][i] = field.one
                rows[i][i + 1] = field.one
        a = ExactMatrix._raw(field, rows)
        a_star = ExactMatrix.diagonal(field, diag)
    elif kind == "one-sided":
        for i in range(n):
            rows[i][i] = diag[i]
            if i + 1 < n:
                rows[i + 1][i] = field.one
        a = ExactMatrix._raw(field, rows)
        a_star = ExactMatrix.diagonal(field, diag)
    else:  # defective
        lam = diag[0]
        for i in range(n):
            rows[i][i] = lam
            if i + 1 < n:
                rows[i][i + 1] = field.one
        a = ExactMatrix._raw(field, rows)
        a_star = ExactMatrix.diagonal(field, diag)

    g = _random_invertible(field, n, rng)
    return conjugate(a, g), conjugate(a_star, g), kind


def _structural_scalars(field: Field, n: int, rng):
    """Distinct scalars from the prime subfield, so characteristic
    polynomials stay inside the decidable root-finding fragment."""
    p = field.characteristic()
    if p:
        if n > p:
            raise GeneratorError(f"{field.name} has only {p} prime-subfield scalars")
        values = rng.sample(range(p), n)
    else:
        values = rng.sample(range(-3 * n, 3 * n + 1), n)
    return [field.from_int(v) for v in values]


def _random_invertible(field: Field, n: int, rng) -> ExactMatrix:
    low = [[field.zero] * n for _ in range(n)]
    up = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        low[i][i] = field.one
        up[i][i] = field.one
        for j in range(i):
            low[i][j] = field.random_element(rng).payload
            up[j][i] = field.random_element(rng).payload
    return ExactMatrix._raw(field, low) @ ExactMatrix._raw(field, up)


__all__ = [
    "EXAMPLE2_NAME",
    "LatticeComponent",
    "LatticeDecomposition",
    "MAX_LATTICE_SUBSPACES",
    "NONEXAMPLE_KINDS",
    "Sl2Module",
    "SubspaceLattice",
    "UqModule",
    "build_lattice",
    "example2",
    "gaussian_binomial",
    "lattice_decomposition",
    "lattice_forbidden_set",
    "lattice_pair",
    "random_nonexample",
    "random_parameter_array",
    "sl2_module",
    "sl2_pair",
    "uq_forbidden_set",
    "uq_module",
    "uq_pair",
]
