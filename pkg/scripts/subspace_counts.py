"""Count subspaces of F_q^n three independent ways.

Run before trusting any hard-coded lattice sizes.  Prints, for each (n, q),
the Gaussian-binomial column counts and their total, cross-checked against
the q-Pascal recurrence and against brute enumeration of reduced row
echelon forms for prime q.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def gauss_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = Fraction(1)
    for i in range(k):
        num *= Fraction(q ** (n - i) - 1, q ** (k - i) - 1)
    assert num.denominator == 1
    return int(num)


def gauss_binomial_pascal(n: int, k: int, q: int) -> int:
    # [n,k]_q = [n-1,k-1]_q + q^k [n-1,k]_q
    table = {(0, 0): 1}
    for m in range(1, n + 1):
        for j in range(m + 1):
            table[(m, j)] = table.get((m - 1, j - 1), 0) + q**j * table.get((m - 1, j), 0)
    return table[(n, k)]


def count_rref(n: int, k: int, q: int) -> int:
    """Enumerate reduced row echelon forms of rank k, k by n, entries mod q."""
    total = 0
    for pivots in itertools.combinations(range(n), k):
        free = 0
        for r, p in enumerate(pivots):
            for c in range(p + 1, n):
                if c not in pivots:
                    free += 1
        total += q**free
    return total


def main() -> None:
    cases = [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)]
    for n, q in cases:
        cols = [gauss_binomial(n, k, q) for k in range(n + 1)]
        cols2 = [gauss_binomial_pascal(n, k, q) for k in range(n + 1)]
        cols3 = [count_rref(n, k, q) for k in range(n + 1)]
        assert cols == cols2 == cols3, (n, q, cols, cols2, cols3)
        print(f"n={n} q={q}: per-dimension {cols} total {sum(cols)}")


if __name__ == "__main__":
    main()
