"""Rational arithmetic backend selection.

Two interchangeable cores provide the rational number type used for all
characteristic-zero payloads: gmpy2's ``mpq`` (compiled, GMP-backed) and the
standard library's ``fractions.Fraction`` (pure Python).  The compiled core
is picked automatically when importable.  Set ``LEONARDPAIRS_BACKEND`` to
``gmp`` or ``fractions`` to force a choice; forcing ``gmp`` without gmpy2
installed is an import error rather than a silent downgrade.

Both types normalize on construction (positive denominator, lowest terms),
expose ``numerator``/``denominator``, and hash/compare consistently with
ints, which is all the rest of the package relies on.
"""

from __future__ import annotations

import os

_requested = os.environ.get("LEONARDPAIRS_BACKEND", "auto").strip().lower()

if _requested not in ("auto", "gmp", "fractions"):
    raise ImportError(
        f"LEONARDPAIRS_BACKEND={_requested!r} not understood; "
        "expected 'gmp' or 'fractions'"
    )

if _requested in ("auto", "gmp"):
    try:
        from gmpy2 import mpq as Rational

        BACKEND = "gmp"
    except ImportError:
        if _requested == "gmp":
            raise
        from fractions import Fraction as Rational

        BACKEND = "fractions"
else:
    from fractions import Fraction as Rational

    BACKEND = "fractions"
