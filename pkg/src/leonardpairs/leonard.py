"""Leonard pairs: recognition, systems, extraction, Askey-Wilson fits.

A square pair (A, A*) over one exact field is a Leonard pair when each
matrix is multiplicity-free and acts irreducibly tridiagonally on the
eigenspace chain of the other for some ordering of those eigenspaces.  A
Leonard system fixes both orderings.  Recognition finds every admissible
ordering (at most two per side, so at most four systems) by reading the
support pattern of E_i X E_j products; the pattern must be a Hamiltonian
path with both directions present on every edge.

Extraction walks a system down to its parameter array through the split
basis u_i = (A - theta_{i-1} I) ... (A - theta_0 I) xi with xi spanning
the E*_0 image; the second split sequence comes from the same walk with
theta reversed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegenerateSplitError,
    FieldMismatchError,
    InternalCheckError,
)
from .field import Field, FieldElement, field_to_dict
from ._backend import BACKEND
from .matrix import (
    ExactMatrix,
    EigenData,
    _rref,
    inverse,
    is_irreducible_tridiagonal,
    is_multiplicity_free,
    is_tridiagonal,
)
from .parray import (
    ParameterArray,
    check_poly_characterization,
    construct_bidiagonal,
    construct_tridiagonal,
    find_g_matrix,
    fingerprint,
    fingerprint_to_dict,
    parameter_array_to_dict,
    validate,
    validity_report_to_dict,
)


class LeonardSystem:
    """A Leonard pair with fixed eigenvalue orderings on both sides.

    theta and theta_star are payload tuples; idempotents and
    dual_idempotents are index-aligned with them.
    """

    __slots__ = (
        "field",
        "a",
        "a_star",
        "theta",
        "theta_star",
        "idempotents",
        "dual_idempotents",
        "_pa_cache",
    )

    def __init__(self, field, a, a_star, theta, theta_star, idempotents, dual_idempotents):
        self.field = field
        self.a = a
        self.a_star = a_star
        self.theta = tuple(theta)
        self.theta_star = tuple(theta_star)
        self.idempotents = tuple(idempotents)
        self.dual_idempotents = tuple(dual_idempotents)
        self._pa_cache = None

    @property
    def d(self) -> int:
        return len(self.theta) - 1

    def theta_elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, v) for v in self.theta)

    def theta_star_elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, v) for v in self.theta_star)

    def parameter_array(self) -> ParameterArray:
        if self._pa_cache is None:
            self._pa_cache = extract_parameter_array(self)
        return self._pa_cache

    def relative(self, reverse_e: bool = False, reverse_e_star: bool = False) -> "LeonardSystem":
        """The system with one or both eigenvalue orderings reversed."""
        theta = tuple(reversed(self.theta)) if reverse_e else self.theta
        ts = tuple(reversed(self.theta_star)) if reverse_e_star else self.theta_star
        es = tuple(reversed(self.idempotents)) if reverse_e else self.idempotents
        ds = (
            tuple(reversed(self.dual_idempotents))
            if reverse_e_star
            else self.dual_idempotents
        )
        return LeonardSystem(self.field, self.a, self.a_star, theta, ts, es, ds)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LeonardSystem)
            and other.field == self.field
            and other.a == self.a
            and other.a_star == self.a_star
            and other.theta == self.theta
            and other.theta_star == self.theta_star
        )

    def __hash__(self) -> int:
        return hash((self.field, self.a, self.a_star, self.theta, self.theta_star))

    def __repr__(self) -> str:
        ser = self.field.serialize
        return (
            f"LeonardSystem({self.field.name}; d={self.d}; "
            f"theta=({', '.join(ser(v) for v in self.theta)}); "
            f"theta*=({', '.join(ser(v) for v in self.theta_star)}))"
        )


@dataclass(frozen=True)
class RecognitionResult:
    """Outcome of is_leonard_pair.

    systems lists every admissible ordering pair; canonical is the one
    whose (theta, theta*) string sequences are smallest in shortlex order.
    """

    is_pair: bool
    d: "int | None"
    failure_reason: "str | None"
    systems: tuple
    canonical: "LeonardSystem | None"

    def __bool__(self) -> bool:
        return self.is_pair


def _structural_check(a: ExactMatrix, a_star: ExactMatrix) -> Field:
    if a.field != a_star.field:
        raise FieldMismatchError("A and A* live over different fields")
    if a.n != a_star.n:
        raise ValueError(f"size mismatch: A is {a.n}x{a.n}, A* is {a_star.n}x{a_star.n}")
    return a.field


def _support_matrix(x: ExactMatrix, idempotents) -> list[list[bool]]:
    """support[i][j] says whether E_i X E_j is nonzero."""
    left = [e @ x for e in idempotents]
    return [
        [not (left[i] @ idempotents[j]).is_zero for j in range(len(idempotents))]
        for i in range(len(idempotents))
    ]


def _path_orderings(support, labels):
    """Orderings that chain the support into an irreducible tridiagonal.

    Returns (orderings, None) with one or two index tuples, or
    ((), reason-fragment) describing the first obstruction.  labels gives
    the eigenvalue strings used in messages.
    """
    n = len(support)
    if n == 1:
        return ((0,),), None
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if support[i][j] != support[j][i]:
                src, dst = (i, j) if support[i][j] else (j, i)
                return (), (
                    f"links the eigenspace of {labels[src]} to that of "
                    f"{labels[dst]} but not back"
                )
            if support[i][j]:
                edges.add((i, j))
    degree = [0] * n
    for i, j in edges:
        degree[i] += 1
        degree[j] += 1
    for v in range(n):
        if degree[v] > 2:
            return (), f"branches at the eigenspace of {labels[v]}"
    if len(edges) >= n:
        return (), "closes into a cycle"
    if len(edges) < n - 1 or degree.count(1) != 2:
        return (), "leaves the eigenspaces disconnected"
    start = degree.index(1)
    walk = [start]
    prev = -1
    while True:
        nxt = [
            u
            for u in range(n)
            if u != prev and u != walk[-1] and (min(u, walk[-1]), max(u, walk[-1])) in edges
        ]
        if not nxt:
            break
        prev = walk[-1]
        walk.append(nxt[0])
    if len(walk) != n:
        return (), "leaves the eigenspaces disconnected"
    return (tuple(walk), tuple(reversed(walk))), None


def is_leonard_pair(
    a: ExactMatrix,
    a_star: ExactMatrix,
    *,
    eigenvalue_hints=None,
    dual_eigenvalue_hints=None,
) -> RecognitionResult:
    """Recognize a Leonard pair and enumerate its systems.

    Hints are optional candidate eigenvalues for A and A*; they are
    certified before use and cannot change the verdict.  On failure the
    reason strings name the first obstruction on each side.
    """
    field = _structural_check(a, a_star)

    mf_a = is_multiplicity_free(a, eigenvalue_hints=eigenvalue_hints)
    mf_star = is_multiplicity_free(a_star, eigenvalue_hints=dual_eigenvalue_hints)
    clauses = []
    if not mf_a:
        clauses.append(f"A is not multiplicity-free: {mf_a.reason}")
    if not mf_star:
        clauses.append(f"A* is not multiplicity-free: {mf_star.reason}")
    if clauses:
        if is_tridiagonal(a) and not is_irreducible_tridiagonal(a):
            clauses.append("A is tridiagonal but not irreducible")
        if is_tridiagonal(a_star) and not is_irreducible_tridiagonal(a_star):
            clauses.append("A* is tridiagonal but not irreducible")
        return RecognitionResult(False, None, "; ".join(clauses), (), None)

    eigen_a: EigenData = mf_a.eigen
    eigen_star: EigenData = mf_star.eigen

    star_labels = [str(v) for v in eigen_star.eigenvalues]
    support_iv = _support_matrix(a, eigen_star.idempotents)
    star_orders, obstruction = _path_orderings(support_iv, star_labels)
    if obstruction:
        return RecognitionResult(
            False,
            None,
            f"the action of A on the A*-eigenspaces {obstruction}",
            (),
            None,
        )

    a_labels = [str(v) for v in eigen_a.eigenvalues]
    support_v = _support_matrix(a_star, eigen_a.idempotents)
    e_orders, obstruction = _path_orderings(support_v, a_labels)
    if obstruction:
        return RecognitionResult(
            False,
            None,
            f"the action of A* on the A-eigenspaces {obstruction}",
            (),
            None,
        )

    systems = []
    for e_order in e_orders:
        ea = eigen_a.reordered(e_order)
        for star_order in star_orders:
            es = eigen_star.reordered(star_order)
            systems.append(
                LeonardSystem(
                    field,
                    a,
                    a_star,
                    tuple(v.payload for v in ea.eigenvalues),
                    tuple(v.payload for v in es.eigenvalues),
                    ea.idempotents,
                    es.idempotents,
                )
            )
    canonical = min(systems, key=_system_sort_key)
    return RecognitionResult(True, a.n - 1, None, tuple(systems), canonical)


def _system_sort_key(system: LeonardSystem):
    f = system.field
    return (
        tuple(f.sort_key(v) for v in system.theta),
        tuple(f.sort_key(v) for v in system.theta_star),
    )


def system_from_pair_with_orderings(
    a: ExactMatrix,
    a_star: ExactMatrix,
    theta,
    theta_star,
    *,
    verify: bool = True,
) -> LeonardSystem:
    """Assemble a system with prescribed eigenvalue orderings.

    theta and theta_star must list the eigenvalues of A and A* exactly, in
    the desired order.  With verify=True the tridiagonal support conditions
    are checked directly and a ValueError names any violation.
    """
    field = _structural_check(a, a_star)
    theta = [field.coerce(v) for v in theta]
    theta_star = [field.coerce(v) for v in theta_star]

    mf_a = is_multiplicity_free(a, eigenvalue_hints=theta)
    if not mf_a:
        raise ValueError(f"A is not multiplicity-free: {mf_a.reason}")
    mf_star = is_multiplicity_free(a_star, eigenvalue_hints=theta_star)
    if not mf_star:
        raise ValueError(f"A* is not multiplicity-free: {mf_star.reason}")

    ea = _reorder_to(mf_a.eigen, theta, "theta")
    es = _reorder_to(mf_star.eigen, theta_star, "theta_star")
    system = LeonardSystem(
        field,
        a,
        a_star,
        tuple(theta),
        tuple(theta_star),
        ea.idempotents,
        es.idempotents,
    )
    if verify:
        _verify_system_supports(system)
    return system


def _reorder_to(eigen: EigenData, wanted, label: str) -> EigenData:
    field = eigen.idempotents[0].field if eigen.idempotents else None
    have = {str(v): i for i, v in enumerate(eigen.eigenvalues)}
    order = []
    for v in wanted:
        key = field.serialize(v)
        if key not in have:
            raise ValueError(f"{label} lists {key}, which is not an eigenvalue")
        order.append(have[key])
    if sorted(order) != list(range(len(have))):
        raise ValueError(f"{label} does not list each eigenvalue exactly once")
    return eigen.reordered(order)


def _verify_system_supports(system: LeonardSystem) -> None:
    support = _support_matrix(system.a, system.dual_idempotents)
    _assert_tridiagonal_support(support, "A", "A*")
    support = _support_matrix(system.a_star, system.idempotents)
    _assert_tridiagonal_support(support, "A*", "A")


def _assert_tridiagonal_support(support, actor: str, basis: str) -> None:
    n = len(support)
    for i in range(n):
        for j in range(n):
            gap = abs(i - j)
            if gap > 1 and support[i][j]:
                raise ValueError(
                    f"{actor} does not act tridiagonally on the ordered "
                    f"{basis}-eigenspaces: block ({i}, {j}) is nonzero"
                )
            if gap == 1 and not support[i][j]:
                raise ValueError(
                    f"{actor} acts reducibly on the ordered {basis}-eigenspaces: "
                    f"block ({i}, {j}) vanishes"
                )


def system_from_bidiagonal_pair(a: ExactMatrix, a_star: ExactMatrix) -> LeonardSystem:
    """System of a split-form pair, keeping the diagonal orderings.

    A must be lower bidiagonal and A* upper bidiagonal; their diagonals
    are taken as theta and theta* in the given order.
    """
    field = _structural_check(a, a_star)
    n = a.n
    for i in range(n):
        for j in range(n):
            if j > i and not field.is_zero(a.entry(i, j)):
                raise ValueError("A is not lower bidiagonal")
            if j > i + 1 and not field.is_zero(a.entry(j, i)):
                raise ValueError("A is not lower bidiagonal")
            if j < i and not field.is_zero(a_star.entry(i, j)):
                raise ValueError("A* is not upper bidiagonal")
            if j > i + 1 and not field.is_zero(a_star.entry(i, j)):
                raise ValueError("A* is not upper bidiagonal")
    theta = [a.entry(i, i) for i in range(n)]
    theta_star = [a_star.entry(i, i) for i in range(n)]
    return system_from_pair_with_orderings(a, a_star, theta, theta_star)


def system_from_parameter_array(pa: ParameterArray) -> LeonardSystem:
    """Realize a valid array as the system of its split-form pair."""
    a, a_star = construct_bidiagonal(pa)
    return system_from_bidiagonal_pair(a, a_star)


def split_basis(system: LeonardSystem, *, reverse_theta: bool = False) -> ExactMatrix:
    """Columns u_i = (A - theta_{i-1} I) ... (A - theta_0 I) xi.

    xi spans the image of E*_0; it is normalized to leading coordinate 1,
    which makes the basis deterministic.  In this basis A is lower
    bidiagonal with subdiagonal 1 and A* is upper bidiagonal; passing
    reverse_theta walks the thetas backwards, which swaps the two split
    sequences.
    """
    field = system.field
    n = system.d + 1
    e0 = system.dual_idempotents[0]
    xi = None
    for k in range(n):
        col = e0.column(k)
        if any(not field.is_zero(v) for v in col):
            xi = list(col)
            break
    if xi is None:
        raise DegenerateSplitError("E*_0 is the zero matrix")
    lead = next(v for v in xi if not field.is_zero(v))
    inv_lead = field.inv(lead)
    xi = [field.mul(v, inv_lead) for v in xi]

    theta = tuple(reversed(system.theta)) if reverse_theta else system.theta
    cols = [xi]
    for i in range(n - 1):
        step = system.a.add_scalar_diagonal(field.neg(theta[i]))
        nxt = step.apply(cols[-1])
        if all(field.is_zero(v) for v in nxt):
            raise DegenerateSplitError(f"split vector u_{i + 1} vanishes")
        cols.append(nxt)
    s = ExactMatrix._raw(field, [[cols[j][i] for j in range(n)] for i in range(n)])
    return s


def extract_parameter_array(system: LeonardSystem) -> ParameterArray:
    """Parameter array of a system: theta, theta*, and both split sequences.

    varphi is the superdiagonal of A* in the split basis; phi is the same
    reading after reversing theta.  The result is checked against the
    axioms, so a malformed system cannot slip through.
    """
    field = system.field
    varphi = _split_superdiagonal(system, reverse_theta=False)
    phi = _split_superdiagonal(system, reverse_theta=True)
    pa = ParameterArray(field, system.theta, system.theta_star, varphi, phi)
    report = validate(pa)
    if not report.valid:
        raise InternalCheckError(
            "extracted data violates the parameter array axioms: "
            + ", ".join(report.failing())
        )
    return pa


def _split_superdiagonal(system: LeonardSystem, *, reverse_theta: bool) -> list:
    field = system.field
    n = system.d + 1
    theta = tuple(reversed(system.theta)) if reverse_theta else system.theta
    s = split_basis(system, reverse_theta=reverse_theta)
    try:
        s_inv = inverse(s)
    except Exception as exc:
        raise DegenerateSplitError(f"split basis is singular: {exc}") from exc
    b = s_inv @ system.a @ s
    c = s_inv @ system.a_star @ s
    for i in range(n):
        for j in range(n):
            bij = b.entry(i, j)
            if i == j:
                if bij != theta[i]:
                    raise DegenerateSplitError(
                        f"split form of A has diagonal entry "
                        f"{field.serialize(bij)} != theta_{i}"
                    )
            elif i == j + 1:
                if bij != field.one:
                    raise DegenerateSplitError(
                        "split form of A has a subdiagonal entry != 1"
                    )
            elif not field.is_zero(bij):
                raise DegenerateSplitError("split form of A is not lower bidiagonal")
            cij = c.entry(i, j)
            if i == j:
                if cij != system.theta_star[i]:
                    raise DegenerateSplitError(
                        f"split form of A* has diagonal entry "
                        f"{field.serialize(cij)} != theta*_{i}"
                    )
            elif j != i + 1 and not field.is_zero(cij):
                raise DegenerateSplitError("split form of A* is not upper bidiagonal")
    return [c.entry(i, i + 1) for i in range(n - 1)]


AW_COEFFICIENT_NAMES = (
    "beta",
    "gamma",
    "gamma_star",
    "rho",
    "rho_star",
    "omega",
    "eta",
    "eta_star",
)


@dataclass(frozen=True)
class AskeyWilsonFit:
    """Solution of the two three-term relations.

    found is False when no coefficient vector satisfies them.  When the
    pair admits a fit, unique says whether it is the only one (d >= 3 for
    Leonard pairs); with freedom left, nullity counts it and the reported
    coefficients set every free parameter to zero.
    """

    found: bool
    unique: bool
    nullity: int
    coefficients: "dict[str, FieldElement] | None"

    @property
    def beta(self) -> "FieldElement | None":
        return None if self.coefficients is None else self.coefficients["beta"]


def fit_askey_wilson(a: ExactMatrix, a_star: ExactMatrix) -> AskeyWilsonFit:
    """Fit (beta, gamma, gamma*, rho, rho*, omega, eta, eta*) exactly.

    The relations, with every term moved left:
      A^2 A* - beta A A* A + A* A^2 - gamma (A A* + A* A) - rho A*
        - gamma* A^2 - omega A - eta I = 0
      A*^2 A - beta A* A A* + A A*^2 - gamma* (A* A + A A*) - rho* A
        - gamma A*^2 - omega A* - eta* I = 0
    Each matrix entry of each relation contributes one linear equation.
    """
    field = _structural_check(a, a_star)
    n = a.n
    aa = a @ a
    ss = a_star @ a_star
    as_ = a @ a_star
    sa = a_star @ a
    asa = as_ @ a
    sas = sa @ a_star
    anti = as_ + sa
    ident = ExactMatrix.identity(field, n)
    zero = ExactMatrix.zeros(field, n)

    rhs1 = (aa @ a_star + a_star @ aa).scale(field.neg(field.one))
    rhs2 = (ss @ a + a @ ss).scale(field.neg(field.one))

    columns1 = (asa, anti, aa, a_star, zero, a, ident, zero)
    columns2 = (sas, ss, anti, zero, a, a_star, zero, ident)

    rows = []
    rhs = []
    for mats, target in ((columns1, rhs1), (columns2, rhs2)):
        for i in range(n):
            for j in range(n):
                rows.append([field.neg(m.entry(i, j)) for m in mats])
                rhs.append(target.entry(i, j))

    solution = _solve_rectangular(field, rows, rhs)
    if solution is None:
        return AskeyWilsonFit(False, False, 0, None)
    values, nullity = solution
    coeffs = {
        name: FieldElement(field, v) for name, v in zip(AW_COEFFICIENT_NAMES, values)
    }
    fit = AskeyWilsonFit(True, nullity == 0, nullity, coeffs)
    res1, res2 = askey_wilson_residuals(a, a_star, fit)
    if not (res1.is_zero and res2.is_zero):
        raise InternalCheckError("Askey-Wilson fit does not satisfy the relations")
    return fit


def _solve_rectangular(field, rows, rhs):
    """Exact solve of an overdetermined system; None when inconsistent.

    Returns (values, nullity) with free variables set to zero.
    """
    width = len(rows[0])
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    reduced, pivots = _rref(field, aug)
    if width in pivots:
        return None
    values = [field.zero] * width
    for r_idx, pc in enumerate(pivots):
        values[pc] = reduced[r_idx][width]
    return values, width - len(pivots)


def askey_wilson_residuals(
    a: ExactMatrix, a_star: ExactMatrix, fit: AskeyWilsonFit
) -> tuple[ExactMatrix, ExactMatrix]:
    """The two relation left-hand sides under the given coefficients."""
    if fit.coefficients is None:
        raise ValueError("fit carries no coefficients")
    field = a.field
    c = {k: v.payload for k, v in fit.coefficients.items()}
    n = a.n
    ident = ExactMatrix.identity(field, n)
    aa = a @ a
    ss = a_star @ a_star
    as_ = a @ a_star
    sa = a_star @ a
    anti = as_ + sa
    neg = field.neg
    res1 = (
        aa @ a_star
        + a_star @ aa
        + (as_ @ a).scale(neg(c["beta"]))
        + anti.scale(neg(c["gamma"]))
        + a_star.scale(neg(c["rho"]))
        + aa.scale(neg(c["gamma_star"]))
        + a.scale(neg(c["omega"]))
        + ident.scale(neg(c["eta"]))
    )
    res2 = (
        ss @ a
        + a @ ss
        + (sa @ a_star).scale(neg(c["beta"]))
        + anti.scale(neg(c["gamma_star"]))
        + a.scale(neg(c["rho_star"]))
        + ss.scale(neg(c["gamma"]))
        + a_star.scale(neg(c["omega"]))
        + ident.scale(neg(c["eta_star"]))
    )
    return res1, res2


def _root_of_unity_betas(field: Field) -> "set | None":
    """Payloads beta = q + 1/q with q a root of unity in fields of
    characteristic zero; None for finite fields (where every nonzero q
    qualifies)."""
    if field.characteristic() != 0:
        return None
    core = {field.from_int(v) for v in (-2, -1, 0, 1, 2)}
    m = getattr(field, "m", None)
    if m in (2, 3):
        core.update(field.coerce(s) for s in ("s", "-s"))
    elif m == 5:
        core.update(
            field.coerce(s)
            for s in ("1/2+1/2*s", "1/2-1/2*s", "-1/2+1/2*s", "-1/2-1/2*s")
        )
    return core


@dataclass(frozen=True)
class ConverseReport:
    """Sufficient-condition check for the converse direction.

    When every flag is true the relations force (A, A*) to be a Leonard
    pair; a false flag only means this criterion is silent.
    """

    relations_hold: bool
    unique_fit: bool
    multiplicity_free_a: bool
    multiplicity_free_a_star: bool
    q_not_root_of_unity: "bool | None"
    conclusive: bool
    notes: tuple[str, ...]
    fit: "AskeyWilsonFit | None" = None


def check_converse_preconditions(a: ExactMatrix, a_star: ExactMatrix) -> ConverseReport:
    """Check the hypotheses under which the relations imply a Leonard pair:
    a unique coefficient fit, both matrices multiplicity-free, and the
    quantum parameter attached to beta not a root of unity."""
    field = _structural_check(a, a_star)
    notes = []
    fit = fit_askey_wilson(a, a_star)
    if not fit.found:
        notes.append("the pair satisfies no Askey-Wilson relations")
    elif not fit.unique:
        notes.append(
            f"the coefficient fit has {fit.nullity} degrees of freedom, "
            "so beta is not pinned down"
        )
    mf_a = bool(is_multiplicity_free(a))
    mf_star = bool(is_multiplicity_free(a_star))
    if not mf_a:
        notes.append("A is not multiplicity-free")
    if not mf_star:
        notes.append("A* is not multiplicity-free")

    q_ok: "bool | None" = None
    if fit.found and fit.unique:
        bad = _root_of_unity_betas(field)
        if bad is None:
            q_ok = False
            notes.append(
                "every nonzero element of a finite field is a root of unity, "
                "so the root-of-unity hypothesis cannot hold"
            )
        elif fit.beta.payload in bad:
            q_ok = False
            notes.append(
                f"beta = {fit.beta} makes x^2 - beta x + 1 a cyclotomic factor, "
                "so q is a root of unity"
            )
        else:
            q_ok = True

    conclusive = bool(fit.found and fit.unique and mf_a and mf_star and q_ok)
    return ConverseReport(
        fit.found,
        fit.unique,
        mf_a,
        mf_star,
        q_ok,
        conclusive,
        tuple(notes),
        fit,
    )


def askey_wilson_to_dict(fit: AskeyWilsonFit) -> dict:
    out: dict = {
        "found": fit.found,
        "unique": fit.unique,
        "nullity": fit.nullity,
    }
    out["coefficients"] = (
        None
        if fit.coefficients is None
        else {k: str(v) for k, v in fit.coefficients.items()}
    )
    return out


def converse_report_to_dict(report: ConverseReport) -> dict:
    return {
        "relations_hold": report.relations_hold,
        "unique_fit": report.unique_fit,
        "multiplicity_free_a": report.multiplicity_free_a,
        "multiplicity_free_a_star": report.multiplicity_free_a_star,
        "q_not_root_of_unity": report.q_not_root_of_unity,
        "conclusive": report.conclusive,
        "notes": list(report.notes),
        "askey_wilson": None if report.fit is None else askey_wilson_to_dict(report.fit),
    }


def verification_report(
    a: ExactMatrix,
    a_star: ExactMatrix,
    *,
    eigenvalue_hints=None,
    dual_eigenvalue_hints=None,
) -> dict:
    """Full cross-validation of a pair, as one JSON-ready dictionary.

    Recognition, canonical parameter array, axiom report, fingerprint,
    both construction roundtrips, the polynomial characterization, the
    reversal intertwiner, and the Askey-Wilson fit with its beta checked
    against the fingerprint.
    """
    field = _structural_check(a, a_star)
    rec = is_leonard_pair(
        a,
        a_star,
        eigenvalue_hints=eigenvalue_hints,
        dual_eigenvalue_hints=dual_eigenvalue_hints,
    )
    fit = fit_askey_wilson(a, a_star)
    out: dict = {
        "backend": BACKEND,
        "field": field_to_dict(field),
        "size": a.n,
        "is_leonard_pair": rec.is_pair,
        "failure_reason": rec.failure_reason,
        "diameter": rec.d,
        "orderings_found": len(rec.systems),
        "askey_wilson": askey_wilson_to_dict(fit),
    }
    if not rec.is_pair:
        out["parameter_array"] = None
        out["fingerprint"] = None
        return out

    pa = rec.canonical.parameter_array()
    report = validate(pa)
    fp = fingerprint(pa)
    out["parameter_array"] = parameter_array_to_dict(pa)
    out["validity"] = validity_report_to_dict(report)
    out["fingerprint"] = fingerprint_to_dict(fp)
    out["orderings"] = [
        {
            "theta": [field.serialize(v) for v in system.theta],
            "theta_star": [field.serialize(v) for v in system.theta_star],
        }
        for system in rec.systems
    ]

    cross: dict = {}
    cross["bidiagonal_roundtrip"] = (
        system_from_parameter_array(pa).parameter_array() == pa
    )
    tri_a, tri_star = construct_tridiagonal(pa)
    tri_system = system_from_pair_with_orderings(
        tri_a, tri_star, pa.theta, pa.theta_star
    )
    cross["tridiagonal_roundtrip"] = tri_system.parameter_array() == pa
    cross["poly_characterization"] = check_poly_characterization(pa)
    g = find_g_matrix(pa)
    cross["g_matrix_found"] = g.found
    out["g_matrix_pencil_exhausted"] = g.pencil_exhausted
    if fp.beta is not None and fit.found and fit.unique:
        cross["askey_wilson_beta_matches"] = fit.beta == fp.beta
    else:
        cross["askey_wilson_beta_matches"] = None
    out["cross_checks"] = cross
    out["all_checks_passed"] = all(
        v is True or v is None for v in cross.values() if not isinstance(v, str)
    ) and report.valid
    return out


__all__ = [
    "AW_COEFFICIENT_NAMES",
    "AskeyWilsonFit",
    "ConverseReport",
    "LeonardSystem",
    "RecognitionResult",
    "askey_wilson_residuals",
    "askey_wilson_to_dict",
    "check_converse_preconditions",
    "converse_report_to_dict",
    "extract_parameter_array",
    "fit_askey_wilson",
    "is_leonard_pair",
    "split_basis",
    "system_from_bidiagonal_pair",
    "system_from_pair_with_orderings",
    "system_from_parameter_array",
    "verification_report",
]
