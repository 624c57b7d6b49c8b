"""Parameter arrays: validation, canonical constructions, classification.

A parameter array of diameter d holds two eigenvalue sequences theta,
theta* (length d+1) and two split sequences varphi, phi (length d, 1-indexed
in the classical formulas).  The five axioms:

PA1  theta mutually distinct, theta* mutually distinct
PA2  every varphi_i and phi_i nonzero
PA3  varphi_i = phi_1 * S_i + (theta*_i - theta*_0)(theta_{i-1} - theta_d)
PA4  phi_i    = varphi_1 * S_i + (theta*_i - theta*_0)(theta_{d-i+1} - theta_0)
PA5  (theta_{i-2} - theta_{i+1}) / (theta_{i-1} - theta_i) is independent of
     i for 2 <= i <= d-1 and equals the same expression in theta*

with S_i = sum_{h=0}^{i-1} (theta_h - theta_{d-h}) / (theta_0 - theta_d).

Valid arrays are exactly the classification data of Leonard systems: the
bidiagonal construction below realizes each array, and extraction inverts
it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    InvalidParameterArrayError,
    InternalCheckError,
    UnsupportedFieldOperationError,
)
from .field import (
    ExactPolynomial,
    Field,
    FieldElement,
    PrimeField,
    QuadraticExtension,
    Rationals,
    field_from_dict,
    field_to_dict,
    roots_in_field,
    squarefree_part,
)
from ._backend import Rational
from .matrix import (
    ExactMatrix,
    _nullspace_grid,
    _rref,
    invertible_in_span,
)

FAMILY_CLASSICAL = "classical"
FAMILY_BANNAI_ITO = "bannai-ito"
FAMILY_Q_TYPE = "q-type"
FAMILY_SMALL_DIAMETER = "small-diameter"
FAMILY_CHAR2 = "char2-special"


class ParameterArray:
    """Immutable parameter array over one exact field."""

    __slots__ = ("field", "theta", "theta_star", "varphi", "phi")

    def __init__(self, field: Field, theta, theta_star, varphi, phi):
        th = tuple(field.coerce(v) for v in theta)
        ts = tuple(field.coerce(v) for v in theta_star)
        vp = tuple(field.coerce(v) for v in varphi)
        ph = tuple(field.coerce(v) for v in phi)
        if len(th) == 0:
            raise InvalidParameterArrayError("theta must have length d+1 >= 1")
        if len(ts) != len(th):
            raise InvalidParameterArrayError(
                f"length mismatch: {len(th)} thetas vs {len(ts)} dual thetas"
            )
        d = len(th) - 1
        if len(vp) != d or len(ph) != d:
            raise InvalidParameterArrayError(
                f"length mismatch: diameter {d} needs {d} varphi and phi values, "
                f"got {len(vp)} and {len(ph)}"
            )
        self.field = field
        self.theta = th
        self.theta_star = ts
        self.varphi = vp
        self.phi = ph

    @property
    def d(self) -> int:
        return len(self.theta) - 1

    def theta_elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, v) for v in self.theta)

    def theta_star_elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, v) for v in self.theta_star)

    def varphi_elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, v) for v in self.varphi)

    def phi_elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, v) for v in self.phi)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ParameterArray)
            and other.field == self.field
            and other.theta == self.theta
            and other.theta_star == self.theta_star
            and other.varphi == self.varphi
            and other.phi == self.phi
        )

    def __hash__(self) -> int:
        return hash((self.field, self.theta, self.theta_star, self.varphi, self.phi))

    def __repr__(self) -> str:
        ser = self.field.serialize
        return (
            f"ParameterArray({self.field.name}; d={self.d}; "
            f"theta=({', '.join(ser(v) for v in self.theta)}); "
            f"theta*=({', '.join(ser(v) for v in self.theta_star)}); "
            f"varphi=({', '.join(ser(v) for v in self.varphi)}); "
            f"phi=({', '.join(ser(v) for v in self.phi)}))"
        )


@dataclass(frozen=True)
class AxiomStatus:
    name: str
    passed: bool
    evaluated: bool = True
    first_failure: "int | None" = None
    detail: "str | None" = None


@dataclass(frozen=True)
class ValidityReport:
    axioms: tuple[AxiomStatus, ...]

    @property
    def valid(self) -> bool:
        return all(a.passed for a in self.axioms)

    def axiom(self, name: str) -> AxiomStatus:
        for a in self.axioms:
            if a.name == name:
                return a
        raise KeyError(name)

    def failing(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.axioms if not a.passed)


def _distinctness(field: Field, values, label: str) -> "tuple[int, str] | None":
    seen: dict = {}
    for i, v in enumerate(values):
        key = field.serialize(v)
        if key in seen:
            return i, f"{label}[{seen[key]}] == {label}[{i}] == {key}"
        seen[key] = i
    return None


def _prefix_sums(field: Field, theta) -> list:
    """S_i = sum_{h<i} (theta_h - theta_{d-h}) / (theta_0 - theta_d), i = 0..d."""
    d = len(theta) - 1
    denom = field.sub(theta[0], theta[d])
    sums = [field.zero]
    acc = field.zero
    for h in range(d):
        acc = field.add(acc, field.div(field.sub(theta[h], theta[d - h]), denom))
        sums.append(acc)
    return sums


def pa3_rhs(pa: ParameterArray, i: int):
    """Right-hand side of PA3 for 1 <= i <= d, as a payload."""
    f = pa.field
    sums = _prefix_sums(f, pa.theta)
    return f.add(
        f.mul(pa.phi[0], sums[i]),
        f.mul(
            f.sub(pa.theta_star[i], pa.theta_star[0]),
            f.sub(pa.theta[i - 1], pa.theta[pa.d]),
        ),
    )


def pa4_rhs(pa: ParameterArray, i: int):
    """Right-hand side of PA4 for 1 <= i <= d, as a payload."""
    f = pa.field
    sums = _prefix_sums(f, pa.theta)
    return f.add(
        f.mul(pa.varphi[0], sums[i]),
        f.mul(
            f.sub(pa.theta_star[i], pa.theta_star[0]),
            f.sub(pa.theta[pa.d - i + 1], pa.theta[0]),
        ),
    )


def validate(pa: ParameterArray) -> ValidityReport:
    """Check PA1-PA5 and report per-axiom outcomes.

    PA3-PA5 involve divisions guarded by PA1, so they are reported as not
    evaluated (and not passed) when PA1 fails.
    """
    f = pa.field
    d = pa.d

    pa1_fail = _distinctness(f, pa.theta, "theta") or _distinctness(
        f, pa.theta_star, "theta*"
    )
    pa1 = AxiomStatus(
        "PA1",
        pa1_fail is None,
        first_failure=None if pa1_fail is None else pa1_fail[0],
        detail=None if pa1_fail is None else pa1_fail[1],
    )

    pa2_fail = None
    for i in range(d):
        if f.is_zero(pa.varphi[i]):
            pa2_fail = (i + 1, f"varphi_{i + 1} == 0")
            break
        if f.is_zero(pa.phi[i]):
            pa2_fail = (i + 1, f"phi_{i + 1} == 0")
            break
    pa2 = AxiomStatus(
        "PA2",
        pa2_fail is None,
        first_failure=None if pa2_fail is None else pa2_fail[0],
        detail=None if pa2_fail is None else pa2_fail[1],
    )

    if not pa1.passed:
        skipped = AxiomStatus(
            "", False, evaluated=False, detail="not evaluated: PA1 failed"
        )
        return ValidityReport(
            (
                pa1,
                pa2,
                AxiomStatus("PA3", **_skip_kwargs(skipped)),
                AxiomStatus("PA4", **_skip_kwargs(skipped)),
                AxiomStatus("PA5", **_skip_kwargs(skipped)),
            )
        )

    sums = _prefix_sums(f, pa.theta) if d >= 1 else [f.zero]

    def _check_eq34(values, seed, second_factor) -> "tuple[int, str] | None":
        for i in range(1, d + 1):
            rhs = f.add(
                f.mul(seed, sums[i]),
                f.mul(
                    f.sub(pa.theta_star[i], pa.theta_star[0]), second_factor(i)
                ),
            )
            if values[i - 1] != rhs:
                return i, (
                    f"index {i}: {f.serialize(values[i - 1])} != "
                    f"{f.serialize(rhs)}"
                )
        return None

    pa3_fail = _check_eq34(
        pa.varphi,
        pa.phi[0] if d >= 1 else f.zero,
        lambda i: f.sub(pa.theta[i - 1], pa.theta[d]),
    )
    pa3 = AxiomStatus(
        "PA3",
        pa3_fail is None,
        first_failure=None if pa3_fail is None else pa3_fail[0],
        detail=None if pa3_fail is None else pa3_fail[1],
    )

    pa4_fail = _check_eq34(
        pa.phi,
        pa.varphi[0] if d >= 1 else f.zero,
        lambda i: f.sub(pa.theta[d - i + 1], pa.theta[0]),
    )
    pa4 = AxiomStatus(
        "PA4",
        pa4_fail is None,
        first_failure=None if pa4_fail is None else pa4_fail[0],
        detail=None if pa4_fail is None else pa4_fail[1],
    )

    pa5_fail = None
    ratio = None
    for i in range(2, d):
        r = f.div(
            f.sub(pa.theta[i - 2], pa.theta[i + 1]),
            f.sub(pa.theta[i - 1], pa.theta[i]),
        )
        r_star = f.div(
            f.sub(pa.theta_star[i - 2], pa.theta_star[i + 1]),
            f.sub(pa.theta_star[i - 1], pa.theta_star[i]),
        )
        if r != r_star:
            pa5_fail = (
                i,
                f"index {i}: ratio {f.serialize(r)} != dual ratio {f.serialize(r_star)}",
            )
            break
        if ratio is None:
            ratio = r
        elif r != ratio:
            pa5_fail = (
                i,
                f"index {i}: ratio {f.serialize(r)} != ratio {f.serialize(ratio)} at index 2",
            )
            break
    pa5 = AxiomStatus(
        "PA5",
        pa5_fail is None,
        first_failure=None if pa5_fail is None else pa5_fail[0],
        detail=None if pa5_fail is None else pa5_fail[1],
    )

    return ValidityReport((pa1, pa2, pa3, pa4, pa5))


def _skip_kwargs(template: AxiomStatus) -> dict:
    return {
        "passed": template.passed,
        "evaluated": template.evaluated,
        "detail": template.detail,
    }


def _require_valid(pa: ParameterArray, what: str) -> None:
    report = validate(pa)
    if not report.valid:
        raise InvalidParameterArrayError(
            f"{what} requires a valid parameter array; failing axioms: "
            + ", ".join(report.failing())
        )


def _require_pa12(pa: ParameterArray, what: str) -> None:
    report = validate(pa)
    bad = [n for n in report.failing() if n in ("PA1", "PA2")]
    if bad:
        raise InvalidParameterArrayError(
            f"{what} requires PA1 and PA2; failing: " + ", ".join(bad)
        )


def _lower_bidiagonal(field: Field, diag, sub) -> ExactMatrix:
    n = len(diag)
    z = field.zero
    rows = [[z] * n for _ in range(n)]
    for i, v in enumerate(diag):
        rows[i][i] = v
    for i, v in enumerate(sub):
        rows[i + 1][i] = v
    return ExactMatrix._raw(field, rows)


def _upper_bidiagonal(field: Field, diag, sup) -> ExactMatrix:
    n = len(diag)
    z = field.zero
    rows = [[z] * n for _ in range(n)]
    for i, v in enumerate(diag):
        rows[i][i] = v
    for i, v in enumerate(sup):
        rows[i][i + 1] = v
    return ExactMatrix._raw(field, rows)


def construct_bidiagonal(pa: ParameterArray) -> tuple[ExactMatrix, ExactMatrix]:
    """The canonical split-form pair of a valid array.

    A is lower bidiagonal with diagonal theta and subdiagonal all 1; A* is
    upper bidiagonal with diagonal theta* and superdiagonal varphi.
    """
    _require_valid(pa, "construct_bidiagonal")
    f = pa.field
    a = _lower_bidiagonal(f, pa.theta, [f.one] * pa.d)
    a_star = _upper_bidiagonal(f, pa.theta_star, pa.varphi)
    return a, a_star


def tridiagonal_products(pa: ParameterArray) -> tuple[FieldElement, ...]:
    """Off-diagonal products a_{i,i-1} a_{i-1,i}, i = 1..d, of the
    tridiagonal realization."""
    f = pa.field
    d = pa.d
    ts = pa.theta_star
    out = []
    for i in range(1, d + 1):
        num1 = f.one
        for h in range(i - 1):
            num1 = f.mul(num1, f.sub(ts[i - 1], ts[h]))
        den1 = f.one
        for h in range(i):
            den1 = f.mul(den1, f.sub(ts[i], ts[h]))
        num2 = f.one
        for h in range(i + 1, d + 1):
            num2 = f.mul(num2, f.sub(ts[i], ts[h]))
        den2 = f.one
        for h in range(i, d + 1):
            den2 = f.mul(den2, f.sub(ts[i - 1], ts[h]))
        value = f.mul(
            f.mul(pa.varphi[i - 1], pa.phi[i - 1]),
            f.div(f.mul(num1, num2), f.mul(den1, den2)),
        )
        out.append(FieldElement(f, value))
    return tuple(out)


def construct_tridiagonal(
    pa: ParameterArray, split: str = "unit"
) -> tuple[ExactMatrix, ExactMatrix]:
    """Tridiagonal-diagonal realization of a valid array.

    A has diagonal theta_i + varphi_i/(theta*_i - theta*_{i-1})
    + varphi_{i+1}/(theta*_i - theta*_{i+1}) (out-of-range terms dropped)
    and off-diagonal products given by tridiagonal_products; A* is
    diag(theta*).  split="unit" puts 1 on the subdiagonal; "symmetric"
    splits each product as a square root and needs those roots to exist in
    the field.
    """
    if split not in ("unit", "symmetric"):
        raise ValueError(f"unknown split {split!r}; expected 'unit' or 'symmetric'")
    _require_valid(pa, "construct_tridiagonal")
    f = pa.field
    d = pa.d
    ts = pa.theta_star
    diag = []
    for i in range(d + 1):
        v = pa.theta[i]
        if i >= 1:
            v = f.add(v, f.div(pa.varphi[i - 1], f.sub(ts[i], ts[i - 1])))
        if i <= d - 1:
            v = f.add(v, f.div(pa.varphi[i], f.sub(ts[i], ts[i + 1])))
        diag.append(v)
    products = [e.payload for e in tridiagonal_products(pa)]
    if split == "unit":
        sub = [f.one] * d
        sup = products
    else:
        sub = []
        for i, p in enumerate(products):
            root = f.sqrt(p)
            if root is None:
                raise UnsupportedFieldOperationError(
                    f"symmetric split needs square roots in {f.name}; "
                    f"product at index {i + 1} ({f.serialize(p)}) is not a square"
                )
            sub.append(root)
        sup = sub
    z = f.zero
    n = d + 1
    rows = [[z] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = diag[i]
    for i in range(d):
        rows[i + 1][i] = sub[i]
        rows[i][i + 1] = sup[i]
    a = ExactMatrix._raw(f, rows)
    a_star = ExactMatrix.diagonal(f, pa.theta_star)
    return a, a_star


@dataclass(frozen=True)
class GMatrixResult:
    """Outcome of the reversal-intertwiner search."""

    found: bool
    g: "ExactMatrix | None"
    solution_dimension: int
    pencil_exhausted: bool


def reversal_intertwiner_systems(
    pa: ParameterArray,
) -> tuple[ExactMatrix, ExactMatrix, ExactMatrix, ExactMatrix]:
    """The two matrix pairs (B1, B2), (C1, C2) that G must intertwine."""
    f = pa.field
    ones = [f.one] * pa.d
    b1 = _lower_bidiagonal(f, pa.theta, ones)
    b2 = _lower_bidiagonal(f, tuple(reversed(pa.theta)), ones)
    c1 = _upper_bidiagonal(f, pa.theta_star, pa.varphi)
    c2 = _upper_bidiagonal(f, pa.theta_star, pa.phi)
    return b1, b2, c1, c2


def find_g_matrix(pa: ParameterArray) -> GMatrixResult:
    """Search for invertible G with B1 G = G B2 and C1 G = G C2.

    B1, B2 are the lower-bidiagonal matrices with diagonals theta and
    reversed theta (subdiagonals 1); C1, C2 are upper bidiagonal with
    diagonal theta*, superdiagonals varphi and phi.  Such an invertible G
    exists precisely when PA3-PA5 hold (given PA1 and PA2, which are
    required here).

    The first column of G determines the rest: column recurrence
    g_{j+1} = (B1 - theta_{d-j} I) g_j, with the tail constraint
    (B1 - theta_0 I) g_d = 0 and the C-side constraints expressed through
    the same column maps.  The solver therefore works in d+1 unknowns.
    Candidate selection is deterministic: reduced basis of the solution
    space, earliest leading coordinate first, then 0/1 combinations capped
    at 4096 with the exhaustion flag raised if the cap is hit.
    """
    _require_pa12(pa, "find_g_matrix")
    f = pa.field
    d = pa.d
    n = d + 1
    b1, _, c1, _ = reversal_intertwiner_systems(pa)

    mats = [ExactMatrix.identity(f, n)]
    for j in range(d):
        step = b1.add_scalar_diagonal(f.neg(pa.theta[d - j]))
        mats.append(step @ mats[-1])

    rows: list[list] = []
    tail = b1.add_scalar_diagonal(f.neg(pa.theta[0])) @ mats[d]
    rows.extend(list(r) for r in tail.rows)
    for j in range(n):
        lhs = c1 @ mats[j]
        lhs = lhs + mats[j].scale(f.neg(pa.theta_star[j]))
        if j >= 1:
            lhs = lhs + mats[j - 1].scale(f.neg(pa.phi[j - 1]))
        rows.extend(list(r) for r in lhs.rows)

    kernel = _nullspace_grid(f, rows)
    dim = len(kernel)
    if dim == 0:
        return GMatrixResult(False, None, 0, False)

    candidates = []
    for g0 in kernel:
        cols = [[f.zero] * n for _ in range(n)]
        for j in range(n):
            mj = mats[j]
            for r in range(n):
                acc = f.zero
                row = mj.rows[r]
                for k in range(n):
                    acc = f.add(acc, f.mul(row[k], g0[k]))
                cols[j][r] = acc
        candidates.append(
            ExactMatrix._raw(f, [[cols[j][r] for j in range(n)] for r in range(n)])
        )

    # canonical basis of the G-span: reduce the row-major vectorizations
    vecs = [[v for row in g.rows for v in row] for g in candidates]
    rref, pivots = _rref(f, vecs)
    basis = [
        ExactMatrix._raw(f, [vec[i * n : (i + 1) * n] for i in range(n)])
        for vec in rref[: len(pivots)]
    ]
    g, exhausted = invertible_in_span(basis)
    if g is None:
        return GMatrixResult(False, None, dim, exhausted)

    _check_intertwines(pa, g)
    return GMatrixResult(True, g, dim, False)


def _check_intertwines(pa: ParameterArray, g: ExactMatrix) -> None:
    b1, b2, c1, c2 = reversal_intertwiner_systems(pa)
    if b1 @ g != g @ b2 or c1 @ g != g @ c2:
        raise InternalCheckError("candidate G fails the intertwining identities")


def poly_u(pa: ParameterArray, i: int) -> ExactPolynomial:
    """u_i(x) = sum_n prod_{h<n}(x - theta_h) prod_{h<n}(theta*_i - theta*_h)
    / (varphi_1 ... varphi_n), for 0 <= n <= i.

    Normalized so that u_i(theta_0) = 1 (only the n = 0 term survives
    there).  Requires PA1 and PA2.
    """
    return _poly_u_generic(pa, i, pa.theta, pa.varphi)


def poly_u_dual(pa: ParameterArray, i: int) -> ExactPolynomial:
    """The mirror of poly_u: theta reversed and phi in place of varphi."""
    return _poly_u_generic(pa, i, tuple(reversed(pa.theta)), pa.phi)


def _poly_u_generic(pa: ParameterArray, i: int, theta, denoms) -> ExactPolynomial:
    if not 0 <= i <= pa.d:
        raise ValueError(f"index {i} outside 0..{pa.d}")
    _require_pa12(pa, "poly_u")
    f = pa.field
    acc = ExactPolynomial(f, [f.one])
    running = ExactPolynomial(f, [f.one])
    coeff = f.one
    for n in range(1, i + 1):
        running = running * ExactPolynomial(f, [f.neg(theta[n - 1]), f.one])
        coeff = f.mul(
            coeff,
            f.div(
                f.sub(pa.theta_star[i], pa.theta_star[n - 1]), denoms[n - 1]
            ),
        )
        acc = acc + running.scale(coeff)
    return acc


def check_poly_characterization(pa: ParameterArray) -> bool:
    """Whether every u_i is a scalar multiple of its dual.

    Given PA1 and PA2, this holds exactly when PA3-PA5 do.  The scalar is
    fixed from the leading coefficients, so the comparison is exact.
    """
    _require_pa12(pa, "check_poly_characterization")
    f = pa.field
    for i in range(pa.d + 1):
        u = poly_u(pa, i)
        v = poly_u_dual(pa, i)
        if u.degree != v.degree:
            return False
        scalar = f.div(u.coeffs[-1], v.coeffs[-1])
        if u != v.scale(scalar):
            return False
    return True


@dataclass(frozen=True)
class ClassificationFingerprint:
    """Coarse classification data extracted from a valid array.

    For d <= 2 the defining ratio has no instances and the family is
    "small-diameter" with every other attribute None.  Otherwise beta + 1
    is the common PA5 ratio; the family tells how x^2 - beta x + 1 splits:
    beta = 2 is classical (q = 1), beta = -2 is bannai-ito (q = -1), the
    char-2 collapse of those two is char2-special, and anything else is
    q-type with q a root of that quadratic.  For q-type, q is reported in
    the base field when possible, else inside a constructed quadratic
    extension (q_field), else only by its minimal polynomial.
    """

    family: str
    beta: "FieldElement | None"
    beta_plus_one: "FieldElement | None"
    q: "FieldElement | None" = None
    q_field: "Field | None" = None
    q_minimal_poly: "ExactPolynomial | None" = None


def classify_beta(field: Field, beta) -> ClassificationFingerprint:
    """Family and q data for a known beta (the d >= 3 fingerprint core)."""
    b = field.coerce(beta)
    beta_elem = FieldElement(field, b)
    r_elem = FieldElement(field, field.add(b, field.one))
    if field.characteristic() == 2 and field.is_zero(b):
        return ClassificationFingerprint(FAMILY_CHAR2, beta_elem, r_elem)
    if b == field.from_int(2):
        return ClassificationFingerprint(FAMILY_CLASSICAL, beta_elem, r_elem)
    if b == field.from_int(-2):
        return ClassificationFingerprint(FAMILY_BANNAI_ITO, beta_elem, r_elem)

    quadratic = ExactPolynomial(field, [field.one, field.neg(b), field.one])
    roots = roots_in_field(quadratic)
    if roots:
        q = min((root for root, _ in roots), key=lambda e: e.sort_key())
        return ClassificationFingerprint(FAMILY_Q_TYPE, beta_elem, r_elem, q=q)

    if isinstance(field, Rationals):
        # embed into Q(sqrt D): disc = beta^2 - 4 = D * t^2 with D squarefree
        disc = b * b - 4
        num, den = int(disc.numerator), int(disc.denominator)
        d_part = squarefree_part(num * den)
        ext = QuadraticExtension(d_part)
        t_squared = disc / d_part
        t = Rationals().sqrt(t_squared)
        if t is None:
            raise InternalCheckError("squarefree decomposition failed")
        half = Rational(1, 2)
        roots_ext = [
            FieldElement(ext, ((b * half), (t * half))),
            FieldElement(ext, ((b * half), (-t * half))),
        ]
        q = min(roots_ext, key=lambda e: e.sort_key())
        return ClassificationFingerprint(
            FAMILY_Q_TYPE, beta_elem, r_elem, q=q, q_field=ext
        )

    # GF(p) nonresidue disc, or a quadratic-extension base needing degree 4:
    # report the minimal polynomial instead of a representative.
    return ClassificationFingerprint(
        FAMILY_Q_TYPE, beta_elem, r_elem, q_minimal_poly=quadratic
    )


def fingerprint(pa: ParameterArray) -> ClassificationFingerprint:
    """Classification fingerprint of a valid array.

    The ratio (theta_{i-2} - theta_{i+1})/(theta_{i-1} - theta_i) is
    determined for d >= 3 (one instance at d = 3, all equal by PA5 beyond)
    and equals beta + 1; below that the family is "small-diameter".
    """
    _require_valid(pa, "fingerprint")
    f = pa.field
    if pa.d <= 2:
        return ClassificationFingerprint(FAMILY_SMALL_DIAMETER, None, None)
    ratio = f.div(
        f.sub(pa.theta[0], pa.theta[3]), f.sub(pa.theta[1], pa.theta[2])
    )
    return classify_beta(f, f.sub(ratio, f.one))


def affine_transform(pa: ParameterArray, a, b, a_star, b_star) -> ParameterArray:
    """The array (a theta + b, a* theta* + b*, a a* varphi, a a* phi).

    Affine changes of the two eigenvalue sequences preserve validity and
    the fingerprint; a and a_star must be nonzero.
    """
    f = pa.field
    pa_, pb = f.coerce(a), f.coerce(b)
    pas, pbs = f.coerce(a_star), f.coerce(b_star)
    if f.is_zero(pa_) or f.is_zero(pas):
        raise ValueError("affine scale factors must be nonzero")
    scale = f.mul(pa_, pas)
    return ParameterArray(
        f,
        [f.add(f.mul(pa_, t), pb) for t in pa.theta],
        [f.add(f.mul(pas, t), pbs) for t in pa.theta_star],
        [f.mul(scale, v) for v in pa.varphi],
        [f.mul(scale, v) for v in pa.phi],
    )


def parameter_array_to_dict(pa: ParameterArray) -> dict:
    """JSON-ready form: field descriptor, diameter, canonical strings."""
    ser = pa.field.serialize
    return {
        "field": field_to_dict(pa.field),
        "d": pa.d,
        "theta": [ser(v) for v in pa.theta],
        "theta_star": [ser(v) for v in pa.theta_star],
        "varphi": [ser(v) for v in pa.varphi],
        "phi": [ser(v) for v in pa.phi],
    }


def parameter_array_from_dict(data: dict) -> ParameterArray:
    field = field_from_dict(data["field"])
    pa = ParameterArray(
        field, data["theta"], data["theta_star"], data["varphi"], data["phi"]
    )
    if "d" in data and data["d"] != pa.d:
        raise InvalidParameterArrayError(
            f"declared diameter {data['d']} but theta has length {pa.d + 1}"
        )
    return pa


def validity_report_to_dict(report: ValidityReport) -> dict:
    return {
        "valid": report.valid,
        "axioms": {
            a.name: {
                "passed": a.passed,
                "evaluated": a.evaluated,
                "first_failure": a.first_failure,
                "detail": a.detail,
            }
            for a in report.axioms
        },
    }


def fingerprint_to_dict(fp: ClassificationFingerprint) -> dict:
    out: dict = {"family": fp.family}
    out["beta"] = None if fp.beta is None else str(fp.beta)
    out["beta_plus_one"] = None if fp.beta_plus_one is None else str(fp.beta_plus_one)
    out["q"] = None if fp.q is None else str(fp.q)
    out["q_field"] = None if fp.q_field is None else field_to_dict(fp.q_field)
    out["q_minimal_poly"] = (
        None
        if fp.q_minimal_poly is None
        else [str(c) for c in fp.q_minimal_poly.coefficients()]
    )
    return out


__all__ = [
    "AxiomStatus",
    "ClassificationFingerprint",
    "FAMILY_BANNAI_ITO",
    "FAMILY_CHAR2",
    "FAMILY_CLASSICAL",
    "FAMILY_Q_TYPE",
    "FAMILY_SMALL_DIAMETER",
    "GMatrixResult",
    "ParameterArray",
    "ValidityReport",
    "affine_transform",
    "check_poly_characterization",
    "classify_beta",
    "construct_bidiagonal",
    "construct_tridiagonal",
    "find_g_matrix",
    "fingerprint",
    "pa3_rhs",
    "pa4_rhs",
    "parameter_array_from_dict",
    "parameter_array_to_dict",
    "poly_u",
    "poly_u_dual",
    "reversal_intertwiner_systems",
    "tridiagonal_products",
    "validate",
    "validity_report_to_dict",
    "fingerprint_to_dict",
]
