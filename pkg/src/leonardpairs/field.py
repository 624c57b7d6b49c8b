"""Exact scalar fields: Q, GF(p), and quadratic extensions Q(sqrt m).

Payload conventions (the raw values field methods operate on):

- ``Rationals``: a backend rational (gmpy2 ``mpq`` or ``fractions.Fraction``),
  always in lowest terms with positive denominator.
- ``PrimeField(p)``: a plain ``int`` in ``range(p)``.
- ``QuadraticExtension(m)``: a pair ``(a, b)`` of backend rationals meaning
  ``a + b*sqrt(m)``; ``m`` is squarefree, not 0 or 1, and may be negative.

``FieldElement`` wraps one payload together with its field and provides the
usual operators; the matrix and polynomial layers call the payload-level
methods directly to keep inner loops lean.

Element strings: rationals serialize as ``"a"`` or ``"a/b"``; prime-field
elements as the canonical decimal residue; quadratic-extension elements as
``"a/b+c/d*s"`` where ``s`` stands for sqrt(m) and zero terms are elided
(``"0"``, ``"s"``, ``"-s"``, ``"1/2-3*s"``).  Parsing accepts any integer
for prime fields and reduces it; serialization always emits the canonical
form.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from ._backend import BACKEND, Rational
from .errors import (
    FieldConstructionError,
    FieldMismatchError,
    ParseError,
    PolynomialError,
    SearchTooLargeError,
    UnsupportedFieldOperationError,
)

_RAT_ZERO = Rational(0)
_RAT_ONE = Rational(1)
_RAT_TYPES = (int, Fraction, type(_RAT_ZERO))

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_DIVISION_BOUND = 10**7


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < _TRIAL_DIVISION_BOUND:
        if n % 2 == 0:
            return n == 2
        f = 3
        while f * f <= n:
            if n % f == 0:
                return False
            f += 2
        return True
    for a in _MR_BASES:
        if n % a == 0:
            return n == a
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factorint(n: int) -> dict[int, int]:
    # Guard keeps exactness: an incomplete factorization would silently drop
    # root candidates, so refuse inputs we cannot certify.
    if n.bit_length() > 200:
        raise SearchTooLargeError(
            f"cannot factor {n.bit_length()}-bit integer exactly; "
            "coefficients this large are outside the supported range"
        )
    import sympy

    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


def squarefree_part(n: int) -> int:
    """Largest squarefree divisor pattern: n = squarefree_part(n) * square."""
    if n == 0:
        return 0
    sign = -1 if n < 0 else 1
    out = sign
    for p, e in _factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in _factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _sqrt_rational(x) -> "Rational | None":
    if x < 0:
        return None
    num, den = int(x.numerator), int(x.denominator)
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Rational(rn, rd)
    return None


def _sqrt_mod_p(a: int, p: int) -> "int | None":
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, u = 0, t
        while u != 1:
            u = u * u % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


_RATIONAL_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


def _parse_rational(text: str) -> Rational:
    if not _RATIONAL_RE.fullmatch(text):
        raise ParseError(f"malformed rational {text!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return Rational(int(num), int(den))
    return Rational(int(text))


class Field:
    """Base class; subclasses provide payload-level arithmetic."""

    kind: str

    def _params(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self._params() == other._params()

    def __hash__(self) -> int:
        return hash((type(self).__name__, self._params()))

    def __repr__(self) -> str:
        return self.name

    # --- payload arithmetic (overridden) ---

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def from_int(self, n: int):
        raise NotImplementedError

    def from_rational(self, r):
        raise NotImplementedError

    def characteristic(self) -> int:
        raise NotImplementedError

    def serialize(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def sqrt(self, a):
        """A payload x with x*x == a, or None when a is not a square."""
        raise NotImplementedError

    def pow(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        out, base = self.one, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    # --- element layer ---

    def coerce(self, value):
        """Turn ints, strings, rationals, or same-field elements into a payload."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(
                    f"element of {value.field.name} used in {self.name}"
                )
            return value.payload
        if isinstance(value, bool) or isinstance(value, int):
            return self.from_int(value)
        if isinstance(value, _RAT_TYPES):
            return self.from_rational(value)
        if isinstance(value, str):
            return self.parse(value)
        raise TypeError(
            f"cannot coerce {type(value).__name__} into {self.name}; "
            "exact inputs only (int, rational, or element string)"
        )

    def element(self, value) -> "FieldElement":
        return FieldElement(self, self.coerce(value))

    def __call__(self, value) -> "FieldElement":
        return self.element(value)

    def sort_key(self, a) -> tuple[int, str]:
        # Shortlex on the canonical string: length first, then bytes.  This
        # is the single ordering used for every deterministic selection.
        s = self.serialize(a)
        return (len(s), s)

    def random_element(self, rng) -> "FieldElement":
        raise NotImplementedError


class Rationals(Field):
    """The field of rational numbers."""

    kind = "rationals"
    name = "Q"

    def __init__(self):
        self.zero = _RAT_ZERO
        self.one = _RAT_ONE

    def _params(self) -> tuple:
        return ()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / a

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, n: int):
        return Rational(n)

    def from_rational(self, r):
        if isinstance(r, Fraction):
            return Rational(r.numerator, r.denominator)
        return Rational(r)

    def characteristic(self) -> int:
        return 0

    def serialize(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        return _parse_rational(text.strip())

    def sqrt(self, a):
        return _sqrt_rational(a)

    def pow(self, a, n: int):
        if n < 0 and a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return a**n

    def random_element(self, rng) -> "FieldElement":
        return self.element(Rational(rng.randint(-60, 60), rng.randint(1, 12)))


class PrimeField(Field):
    """GF(p) for prime p, elements stored as canonical residues."""

    kind = "prime_field"

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2:
            raise FieldConstructionError(f"prime field modulus must be an integer >= 2, got {p!r}")
        if p > 2**61 - 1:
            raise FieldConstructionError(f"modulus {p} exceeds the supported bound 2^61 - 1")
        if not _is_prime(p):
            raise FieldConstructionError(f"modulus {p} is not prime")
        self.p = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1 % p

    def _params(self) -> tuple:
        return (self.p,)

    def add(self, a, b):
        c = a + b
        return c - self.p if c >= self.p else c

    def sub(self, a, b):
        c = a - b
        return c + self.p if c < 0 else c

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, n: int):
        return n % self.p

    def from_rational(self, r):
        num, den = int(r.numerator) % self.p, int(r.denominator) % self.p
        if den == 0:
            raise ZeroDivisionError(
                f"denominator of {r} vanishes modulo {self.p}"
            )
        return num * pow(den, -1, self.p) % self.p

    def characteristic(self) -> int:
        return self.p

    def serialize(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        text = text.strip()
        if not re.fullmatch(r"[+-]?\d+", text):
            raise ParseError(f"malformed {self.name} element {text!r}")
        return int(text) % self.p

    def sqrt(self, a):
        return _sqrt_mod_p(a, self.p)

    def pow(self, a, n: int):
        if a == 0 and n < 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return pow(a, n, self.p)

    def random_element(self, rng) -> "FieldElement":
        return self.element(rng.randrange(self.p))


class QuadraticExtension(Field):
    """Q(sqrt m) for squarefree m not in {0, 1}; payloads are (a, b) pairs."""

    kind = "quadratic_extension"

    def __init__(self, m: int):
        if not isinstance(m, int):
            raise FieldConstructionError(f"discriminant must be an integer, got {m!r}")
        if m in (0, 1):
            raise FieldConstructionError(f"discriminant {m} does not give a quadratic extension")
        if squarefree_part(m) != m:
            raise FieldConstructionError(f"discriminant {m} is not squarefree")
        self.m = m
        self._mr = Rational(m)
        self.name = f"Q(sqrt {m})"
        self.zero = (_RAT_ZERO, _RAT_ZERO)
        self.one = (_RAT_ONE, _RAT_ZERO)

    def _params(self) -> tuple:
        return (self.m,)

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def mul(self, a, b):
        a0, a1 = a
        b0, b1 = b
        return (a0 * b0 + self._mr * a1 * b1, a0 * b1 + a1 * b0)

    def neg(self, a):
        return (-a[0], -a[1])

    def inv(self, a):
        a0, a1 = a
        norm = a0 * a0 - self._mr * a1 * a1
        if norm == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return (a0 / norm, -a1 / norm)

    def is_zero(self, a) -> bool:
        return a[0] == 0 and a[1] == 0

    def from_int(self, n: int):
        return (Rational(n), _RAT_ZERO)

    def from_rational(self, r):
        if isinstance(r, Fraction):
            return (Rational(r.numerator, r.denominator), _RAT_ZERO)
        return (Rational(r), _RAT_ZERO)

    def from_parts(self, a, b):
        """Payload a + b*sqrt(m) from two rational-like parts."""
        base = Rationals()
        return (base.coerce(a), base.coerce(b))

    def coerce(self, value):
        if isinstance(value, tuple) and len(value) == 2:
            return self.from_parts(*value)
        return super().coerce(value)

    def characteristic(self) -> int:
        return 0

    def serialize(self, a) -> str:
        a0, a1 = a
        if a1 == 0:
            return str(a0)
        if a1 == 1:
            s_part = "s"
        elif a1 == -1:
            s_part = "-s"
        else:
            s_part = f"{a1}*s"
        if a0 == 0:
            return s_part
        if s_part.startswith("-"):
            return f"{a0}{s_part}"
        return f"{a0}+{s_part}"

    def parse(self, text: str):
        compact = text.strip().replace(" ", "")
        if not compact:
            raise ParseError("empty element string")
        terms = re.findall(r"[+-]?[^+-]+", compact)
        if "".join(terms) != compact:
            raise ParseError(f"malformed {self.name} element {text!r}")
        rat, coef = None, None
        for term in terms:
            sign = _RAT_ONE
            body = term
            if body[0] in "+-":
                if body[0] == "-":
                    sign = -_RAT_ONE
                body = body[1:]
            if body == "s":
                part = _RAT_ONE
            elif body.endswith("*s"):
                part = _parse_rational(body[:-2])
            else:
                if rat is not None or coef is not None:
                    raise ParseError(f"malformed {self.name} element {text!r}")
                rat = sign * _parse_rational(body)
                continue
            if coef is not None:
                raise ParseError(f"malformed {self.name} element {text!r}")
            coef = sign * part
        return (rat if rat is not None else _RAT_ZERO,
                coef if coef is not None else _RAT_ZERO)

    def sqrt(self, a):
        a0, a1 = a
        if a1 == 0:
            r = _sqrt_rational(a0)
            if r is not None:
                return (r, _RAT_ZERO)
            r = _sqrt_rational(a0 / self._mr)
            if r is not None:
                return (_RAT_ZERO, r)
            return None
        norm = a0 * a0 - self._mr * a1 * a1
        s = _sqrt_rational(norm)
        if s is None:
            return None
        for t in ((a0 + s) / 2, (a0 - s) / 2):
            x = _sqrt_rational(t)
            if x is not None and x != 0:
                return (x, a1 / (2 * x))
        return None

    def random_element(self, rng) -> "FieldElement":
        return self.element(
            (
                Rational(rng.randint(-30, 30), rng.randint(1, 8)),
                Rational(rng.randint(-30, 30), rng.randint(1, 8)),
            )
        )


class FieldElement:
    """One field value; arithmetic stays inside the carrying field."""

    __slots__ = ("field", "payload")

    def __init__(self, field: Field, payload):
        self.field = field
        self.payload = payload

    def _coerce_other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"mixed arithmetic between {self.field.name} and {other.field.name}"
                )
            return other.payload
        if isinstance(other, (int, *(_RAT_TYPES))) and not isinstance(other, bool):
            return self.field.coerce(other)
        return None

    def __add__(self, other):
        p = self._coerce_other(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.payload, p))

    __radd__ = __add__

    def __sub__(self, other):
        p = self._coerce_other(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.payload, p))

    def __rsub__(self, other):
        p = self._coerce_other(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(p, self.payload))

    def __mul__(self, other):
        p = self._coerce_other(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.payload, p))

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._coerce_other(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.payload, p))

    def __rtruediv__(self, other):
        p = self._coerce_other(other)
        if p is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(p, self.payload))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.payload))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        return FieldElement(self.field, self.field.pow(self.payload, n))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return other.field == self.field and other.payload == self.payload
        p = self._coerce_other(other)
        if p is None:
            return NotImplemented
        return self.payload == p

    def __hash__(self) -> int:
        return hash((self.field, self.payload))

    def __bool__(self) -> bool:
        return not self.field.is_zero(self.payload)

    @property
    def is_zero(self) -> bool:
        return self.field.is_zero(self.payload)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.payload))

    def sqrt(self) -> "FieldElement | None":
        root = self.field.sqrt(self.payload)
        return None if root is None else FieldElement(self.field, root)

    def sort_key(self) -> tuple[int, str]:
        return self.field.sort_key(self.payload)

    def __str__(self) -> str:
        return self.field.serialize(self.payload)

    def __repr__(self) -> str:
        return f"{self.field.name}[{self}]"


class ExactPolynomial:
    """Dense univariate polynomial; coefficients run low degree to high.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        payloads = [field.coerce(c) for c in coeffs]
        while payloads and field.is_zero(payloads[-1]):
            payloads.pop()
        self.field = field
        self.coeffs = tuple(payloads)

    @classmethod
    def _raw(cls, field: Field, payloads) -> "ExactPolynomial":
        poly = object.__new__(cls)
        trimmed = list(payloads)
        while trimmed and field.is_zero(trimmed[-1]):
            trimmed.pop()
        poly.field = field
        poly.coeffs = tuple(trimmed)
        return poly

    @classmethod
    def from_roots(cls, field: Field, roots) -> "ExactPolynomial":
        out = [field.one]
        for r in roots:
            rp = field.coerce(r)
            nxt = [field.zero] * (len(out) + 1)
            for i, c in enumerate(out):
                nxt[i + 1] = field.add(nxt[i + 1], c)
                nxt[i] = field.sub(nxt[i], field.mul(c, rp))
            out = nxt
        return cls._raw(field, out)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> FieldElement:
        if 0 <= i < len(self.coeffs):
            return FieldElement(self.field, self.coeffs[i])
        return FieldElement(self.field, self.field.zero)

    def coefficients(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, c) for c in self.coeffs)

    def eval_payload(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = self.field.add(self.field.mul(acc, x), c)
        return acc

    def __call__(self, x) -> FieldElement:
        return FieldElement(self.field, self.eval_payload(self.field.coerce(x)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactPolynomial)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    def __add__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        f = self._same_field(other)
        n = max(len(self.coeffs), len(other.coeffs))
        out = [
            f.add(
                self.coeffs[i] if i < len(self.coeffs) else f.zero,
                other.coeffs[i] if i < len(other.coeffs) else f.zero,
            )
            for i in range(n)
        ]
        return ExactPolynomial._raw(f, out)

    def __sub__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        return self + (-other)

    def __neg__(self) -> "ExactPolynomial":
        return ExactPolynomial._raw(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        f = self._same_field(other)
        if self.is_zero or other.is_zero:
            return ExactPolynomial._raw(f, [])
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return ExactPolynomial._raw(f, out)

    def scale(self, scalar) -> "ExactPolynomial":
        s = self.field.coerce(scalar)
        return ExactPolynomial._raw(
            self.field, [self.field.mul(c, s) for c in self.coeffs]
        )

    def monic(self) -> "ExactPolynomial":
        if self.is_zero:
            raise PolynomialError("the zero polynomial has no monic form")
        return self.scale(FieldElement(self.field, self.field.inv(self.coeffs[-1])))

    def deflate(self, root) -> tuple["ExactPolynomial", FieldElement]:
        """Synthetic division by (x - root): quotient and remainder."""
        f = self.field
        r = f.coerce(root)
        if self.is_zero:
            raise PolynomialError("cannot deflate the zero polynomial")
        quotient = [f.zero] * (len(self.coeffs) - 1)
        acc = f.zero
        for i in range(len(self.coeffs) - 1, 0, -1):
            acc = f.add(f.mul(acc, r), self.coeffs[i])
            quotient[i - 1] = acc
        rem = f.add(f.mul(acc, r), self.coeffs[0])
        return ExactPolynomial._raw(f, quotient), FieldElement(f, rem)

    def _same_field(self, other: "ExactPolynomial") -> Field:
        if self.field != other.field:
            raise FieldMismatchError("polynomials over different fields")
        return self.field

    def __repr__(self) -> str:
        inner = ", ".join(self.field.serialize(c) for c in self.coeffs)
        return f"ExactPolynomial({self.field.name}; [{inner}])"


def _mults_by_deflation(poly: ExactPolynomial, candidates) -> list[tuple]:
    """Roots among candidates with multiplicities, found by exact deflation."""
    field = poly.field
    found = []
    current = poly
    for cand in candidates:
        mult = 0
        while current.degree >= 1:
            quotient, rem = current.deflate(cand)
            if not rem.is_zero:
                break
            mult += 1
            current = quotient
        if mult:
            found.append((cand, mult))
        if current.degree < 1:
            break
    return found


def _roots_rationals(poly: ExactPolynomial) -> list[tuple]:
    field = poly.field
    dens = [int(c.denominator) for c in poly.coeffs]
    scale = math.lcm(*dens) if dens else 1
    ints = [int(c * scale) for c in poly.coeffs]

    k = 0
    while ints[k] == 0:
        k += 1
    found = [(field.zero, k)] if k else []

    trimmed = ints[k:]
    if len(trimmed) == 1:
        return found
    content = math.gcd(*(abs(c) for c in trimmed))
    trimmed = [c // content for c in trimmed]

    candidates = set()
    for num in _divisors(abs(trimmed[0])):
        for den in _divisors(abs(trimmed[-1])):
            candidates.add(Rational(num, den))
            candidates.add(Rational(-num, den))
    reduced = ExactPolynomial._raw(field, [Rational(c) for c in trimmed])
    ordered = sorted(candidates, key=field.sort_key)
    found.extend(_mults_by_deflation(reduced, ordered))
    return found


def _roots_prime_field(poly: ExactPolynomial) -> list[tuple]:
    field = poly.field
    p = field.p
    if p > 10**6:
        raise SearchTooLargeError(
            f"exhaustive root search over {field.name} is limited to p <= 10^6"
        )
    degree = poly.degree
    rev = tuple(reversed(poly.coeffs))
    roots = []
    total = 0
    for x in range(p):
        acc = 0
        for c in rev:
            acc = (acc * x + c) % p
        if acc == 0:
            roots.append(x)
            total += 1
            if total == degree:
                break
    return _mults_by_deflation(poly, roots)


def _quadratic_roots_in_field(field: Field, c0, c1, c2) -> "list[tuple] | None":
    """Roots of c2 x^2 + c1 x + c0 inside field, or None when irreducible."""
    disc = field.sub(field.mul(c1, c1), field.mul(field.from_int(4), field.mul(c2, c0)))
    s = field.sqrt(disc)
    if s is None:
        return None
    two_a = field.mul(field.from_int(2), c2)
    if field.is_zero(s):
        return [(field.div(field.neg(c1), two_a), 2)]
    r1 = field.div(field.sub(s, c1), two_a)
    r2 = field.div(field.sub(field.neg(s), c1), two_a)
    return [(r1, 1), (r2, 1)]


def _roots_quadext(poly: ExactPolynomial) -> list[tuple]:
    field = poly.field
    degree = poly.degree
    if degree == 1:
        c0, c1 = poly.coeffs
        return [(field.div(field.neg(c0), c1), 1)]
    if degree == 2:
        c0, c1, c2 = poly.coeffs
        return _quadratic_roots_in_field(field, c0, c1, c2) or []
    if any(c[1] != 0 for c in poly.coeffs):
        raise UnsupportedFieldOperationError(
            f"root finding over {field.name} covers degree <= 2 and arbitrary-degree "
            f"polynomials with rational coefficients; got degree {degree} with "
            "irrational coefficients"
        )

    dens = [int(c[0].denominator) for c in poly.coeffs]
    scale = math.lcm(*dens)
    ints = [int(c[0] * scale) for c in poly.coeffs]

    import sympy

    x = sympy.Symbol("x")
    _, factors = sympy.Poly(list(reversed(ints)), x, domain="QQ").factor_list()
    found = []
    for factor, mult in factors:
        fc = [Rational(int(c.p), int(c.q)) for c in reversed(factor.all_coeffs())]
        if factor.degree() == 1:
            root = (-fc[0] / fc[1], _RAT_ZERO)
            found.append((root, mult))
        elif factor.degree() == 2:
            pair = _quadratic_roots_in_field(
                field, (fc[0], _RAT_ZERO), (fc[1], _RAT_ZERO), (fc[2], _RAT_ZERO)
            )
            if pair:
                found.extend((root, mult) for root, _ in pair)
        # degree >= 3 irreducible over Q has no root in a quadratic extension
    return found


def roots_in_field(poly: ExactPolynomial) -> list[tuple[FieldElement, int]]:
    """All roots of poly lying in its own field, with multiplicities.

    Sorted by the canonical shortlex order on serialized roots.  Raises
    PolynomialError for the zero polynomial and SearchTooLargeError or
    UnsupportedFieldOperationError outside the documented decidable range.
    """
    if poly.is_zero:
        raise PolynomialError("every scalar is a root of the zero polynomial")
    field = poly.field
    if poly.degree < 1:
        return []
    if isinstance(field, PrimeField):
        raw = _roots_prime_field(poly)
    elif isinstance(field, Rationals):
        raw = _roots_rationals(poly)
    else:
        raw = _roots_quadext(poly)
    raw.sort(key=lambda pair: field.sort_key(pair[0]))
    return [(FieldElement(field, r), m) for r, m in raw]


def verify_root_multiset(poly: ExactPolynomial, candidates) -> "list[tuple] | None":
    """Check whether candidate payloads exactly exhaust poly's roots.

    Returns (root, multiplicity) pairs when repeated deflation by the
    candidates reduces poly to a nonzero constant, None otherwise.  Used to
    certify externally supplied eigenvalue hints without trusting them.
    """
    if poly.is_zero:
        return None
    field = poly.field
    seen = []
    for cand in candidates:
        payload = field.coerce(cand)
        if all(payload != s for s, _ in seen):
            seen.append((payload, 0))
    found = _mults_by_deflation(poly, [s for s, _ in seen])
    if sum(m for _, m in found) == poly.degree:
        found.sort(key=lambda pair: field.sort_key(pair[0]))
        return found
    return None


_FIELD_NAME_RE = re.compile(
    r"(?i)^\s*(?:(q|qq|rationals)|gf\(\s*(\d+)\s*\)|q\(\s*sqrt\s*(-?\d+)\s*\))\s*$"
)


def parse_field_name(text: str) -> Field:
    """Field from a command-line style name: Q, GF(7), Q(sqrt 2)."""
    match = _FIELD_NAME_RE.match(text)
    if not match:
        raise ParseError(
            f"unrecognized field {text!r}; expected Q, GF(p), or Q(sqrt m)"
        )
    if match.group(1):
        return Rationals()
    if match.group(2):
        return PrimeField(int(match.group(2)))
    return QuadraticExtension(int(match.group(3)))


def field_to_dict(field: Field) -> dict:
    if isinstance(field, Rationals):
        return {"kind": "rationals"}
    if isinstance(field, PrimeField):
        return {"kind": "prime_field", "p": field.p}
    if isinstance(field, QuadraticExtension):
        return {"kind": "quadratic_extension", "discriminant": field.m}
    raise TypeError(f"unknown field {field!r}")


def field_from_dict(data: dict) -> Field:
    if not isinstance(data, dict) or "kind" not in data:
        raise ParseError(f"field description must be an object with a 'kind': {data!r}")
    kind = data["kind"]
    if kind == "rationals":
        return Rationals()
    if kind == "prime_field":
        if "p" not in data:
            raise ParseError("prime_field needs a modulus 'p'")
        return PrimeField(data["p"])
    if kind == "quadratic_extension":
        if "discriminant" not in data:
            raise ParseError("quadratic_extension needs a 'discriminant'")
        return QuadraticExtension(data["discriminant"])
    raise ParseError(f"unknown field kind {kind!r}")


__all__ = [
    "BACKEND",
    "ExactPolynomial",
    "Field",
    "FieldElement",
    "PrimeField",
    "QuadraticExtension",
    "Rationals",
    "field_from_dict",
    "field_to_dict",
    "parse_field_name",
    "roots_in_field",
    "squarefree_part",
    "verify_root_multiset",
]
