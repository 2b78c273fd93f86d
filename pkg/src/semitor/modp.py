"""Linear algebra over prime fields and the generic-specialization protocol."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from sympy import isprime, prevprime

from .errors import InconsistencyError

PRIME_CEILING = 2**31


def rank_mod(rows: Sequence[Sequence[int]], p: int) -> int:
    m = [[x % p for x in row] for row in rows if any(x % p for x in row)]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        prow = [(x * inv) % p for x in m[r]]
        m[r] = prow
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                m[i] = [(a - f * b) % p for a, b in zip(m[i], prow)]
        r += 1
        if r == len(m):
            break
    return r


def nullspace_mod(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of ``{x : rows x = 0}`` over ``F_p``."""
    m = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for i, pc in enumerate(pivots):
            vec[pc] = (-m[i][f]) % p
        basis.append(vec)
    return basis


def solve_mod(basis: Sequence[Sequence[int]], target: Sequence[int], p: int) -> list[int]:
    """Coefficients ``a`` with ``sum a_i basis_i = target``; raises if unsolvable."""
    k = len(basis)
    n = len(target)
    rows = [[basis[i][j] % p for i in range(k)] + [target[j] % p] for j in range(n)]
    sol = nullspace_mod(rows, k + 1, p)
    for vec in sol:
        if vec[k] % p:
            scale = pow(vec[k], p - 2, p)
            return [(-x * scale) % p for x in vec[:k]]
    if not any(x % p for x in target):
        return [0] * k
    raise InconsistencyError("vector outside the claimed subspace")


@dataclass(frozen=True)
class Specialization:
    p: int
    v: int

    def to_json(self) -> list[int]:
        return [self.p, self.v]


class SpecializationStream:
    """Deterministic stream of ``(prime, v)`` draws seeded by an integer."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def draw(self) -> Specialization:
        p = prevprime(PRIME_CEILING - self.rng.randrange(1, 2**20))
        assert isprime(p)
        v = self.rng.randint(2, p - 2)
        return Specialization(p, v)


def generic_evaluate(
    compute: Callable[[Specialization], object], seed: int, min_agree: int = 2, max_draws: int = 4
):
    """Evaluate ``compute`` at random specializations until ``min_agree`` draws agree.

    Returns ``(value, used_specializations, all_results)``. Disagreement that
    persists through ``max_draws`` draws raises an inconsistency error tagged
    ``specialization-unstable``.
    """
    stream = SpecializationStream(seed)
    used: list[Specialization] = []
    results: list = []
    while len(used) < max_draws:
        spec = stream.draw()
        used.append(spec)
        results.append(compute(spec))
        if len(results) >= min_agree:
            latest = results[-1]
            matching = [r for r in results if r == latest]
            if len(matching) >= min_agree:
                return latest, used, results
    raise InconsistencyError(
        "specialization-unstable",
        data={"specializations": [s.to_json() for s in used], "results": results},
    )
