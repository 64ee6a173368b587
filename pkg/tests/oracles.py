"""Reference computations kept independent of the library code paths."""

import itertools
import math
from fractions import Fraction


def shapley_by_subsets(values):
    """Shapley values of v(C) = max_{j in C} values[j] via the coalition-weight sum."""
    n = len(values)
    out = []
    for j in range(n):
        others = [k for k in range(n) if k != j]
        total = Fraction(0)
        for size in range(n):
            weight = Fraction(math.factorial(size) * math.factorial(n - size - 1), math.factorial(n))
            for c in itertools.combinations(others, size):
                with_j = max([values[k] for k in c] + [values[j]])
                without = max([values[k] for k in c], default=Fraction(0))
                total += weight * (with_j - without)
        out.append(total)
    return tuple(out)


def potential_by_resources(values_by_user, breakpoints):
    """Sum over users and intervals of len * (1 + 1/2 + ... + 1/load)."""
    total = Fraction(0)
    for values in values_by_user:
        for lo, hi in zip(breakpoints, breakpoints[1:]):
            load = sum(1 for x in values if x >= hi)
            total += sum((Fraction(hi - lo) / k for k in range(1, load + 1)), Fraction(0))
    return total
