"""Independent brute-force reference implementations for the test suite.

Everything here is written against the documented definitions only, with
plain itertools and tuples, no numpy and no imports from the package, so the
package's kernels and closed forms can be checked against a second route.
"""

from fractions import Fraction
from itertools import product

UNDET = 2


def all_sign_vectors(n):
    """Every nonzero vector over {-1, 0, +1}**n."""
    return [v for v in product((0, 1, -1), repeat=n) if any(v)]


def canonical(v):
    first = next(e for e in v if e)
    return tuple(v) if first > 0 else tuple(-e for e in v)


def order_key(v):
    return tuple({0: 0, 1: 1, -1: 2}[e] for e in v)


def canonical_vectors(n):
    return sorted({canonical(v) for v in all_sign_vectors(n)}, key=order_key)


def eliminates(t, s):
    pos = neg = False
    for ti, si in zip(t, s):
        if ti == UNDET:
            if si != 0:
                return False
        elif ti and si:
            if ti * si > 0:
                pos = True
            else:
                neg = True
    return pos != neg


def eliminated(X, n):
    members = [tuple(t) for t in X]
    return {
        s for s in canonical_vectors(n) if any(eliminates(t, s) for t in members)
    }


def jointly_eliminated(X, n):
    members = [tuple(t) for t in X]
    return {
        s for s in canonical_vectors(n) if all(eliminates(t, s) for t in members)
    }


def evaluate_table(arities, table, point):
    """Multilinear interpolation of a table, written directly from scratch."""
    total = None
    for idx in product(*(range(a) for a in arities)):
        weight = Fraction(1)
        for block, j in zip(point, idx):
            weight *= Fraction(block[j])
        vec = table[idx]
        term = [weight * Fraction(v) for v in vec]
        total = term if total is None else [a + b for a, b in zip(total, term)]
    return tuple(total)
