"""Independent reference computations the library is checked against.

Nothing here imports the code paths under test beyond plain data types.
"""

import itertools
from fractions import Fraction


def cut_by_definition(edges, assignment):
    """edges: iterable of (pins, weight)."""
    return sum(w for pins, w in edges if len({assignment[p] for p in pins}) > 1)


def brute_force_product(n, k, max_block, edges):
    """Optimal balanced cut via itertools.product, scanning in reverse order.

    Ties resolve to the lexicographically smallest assignment by explicit
    comparison, so the result is independent of scan order.
    """
    best = None
    for a in reversed(list(itertools.product(range(k), repeat=n))):
        if any(a.count(b) > max_block for b in range(k)):
            continue
        c = cut_by_definition(edges, a)
        if best is None or c < best[1] or (c == best[1] and a < best[0]):
            best = (a, c)
    return best


def u_pairwise(a, b):
    """U of ``a``: pairs with a_i > b_j plus half the ties."""
    return sum(1.0 if x > y else 0.5 if x == y else 0.0 for x in a for y in b)


def mwu_permutation_p(a, b):
    """Exact two-sided p from relabelling the pooled values every possible way."""
    pooled = list(a) + list(b)
    n1 = len(a)
    u_obs = u_pairwise(a, b)
    le = ge = total = 0
    for idx in itertools.combinations(range(len(pooled)), n1):
        chosen = set(idx)
        xa = [pooled[i] for i in idx]
        xb = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        u = u_pairwise(xa, xb)
        total += 1
        le += u <= u_obs
        ge += u >= u_obs
    return float(min(Fraction(1), Fraction(2 * min(le, ge), total)))


def spearman_closed_form(x, y):
    """1 - 6 sum d^2 / (n (n^2 - 1)) for tie-free rankings."""
    n = len(x)
    rx = {v: i for i, v in enumerate(sorted(x))}
    ry = {v: i for i, v in enumerate(sorted(y))}
    d2 = sum((rx[a] - ry[b]) ** 2 for a, b in zip(x, y))
    return 1 - 6 * d2 / (n * (n * n - 1))


def move_gain(edges, assignment, v, t):
    after = list(assignment)
    after[v] = t
    return cut_by_definition(edges, assignment) - cut_by_definition(edges, after)
