"""Affine Weyl group arithmetic on ``Y = Z[I]`` and its dual ``X``.

Elements are integer matrices acting on ``Y`` (column ``j`` is the image of
the basis vector ``j``). Reduced words are cached but never define identity.
Weights in ``X`` are written as pairing vectors ``(<i, x>)_i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from . import linalg
from .cartan import RootDatum
from .errors import BudgetError, InconsistencyError, UsageError, ValidationError

Matrix = tuple[tuple[int, ...], ...]

DEFAULT_ITERATION_CAP = 10**6


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def _identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def sign_of(vec: Sequence[int]) -> int:
    """+1 for a nonzero nonnegative vector, -1 for nonpositive, 0 for zero.

    Mixed signs cannot happen for roots and raise an inconsistency error.
    """
    pos = any(x > 0 for x in vec)
    neg = any(x < 0 for x in vec)
    if pos and neg:
        raise InconsistencyError(f"vector {tuple(vec)} is neither positive nor negative")
    return 1 if pos else (-1 if neg else 0)


@dataclass(frozen=True)
class TranslationVector:
    """Coefficients of ``z`` over ``{e_i i' : i in I-bar}``, in finite-node order.

    ``e_i`` is the root-string step of the simple root ``i`` (see
    ``WeylGroup.steps``); it equals ``dhat_i`` for simply laced data.
    """

    coeffs: tuple[int, ...]

    def __add__(self, other: "TranslationVector") -> "TranslationVector":
        return TranslationVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "TranslationVector":
        return TranslationVector(tuple(-a for a in self.coeffs))

    def scale(self, m: int) -> "TranslationVector":
        return TranslationVector(tuple(m * a for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_json(self, rd: RootDatum) -> dict:
        return {"coeffs": {rd.labels[i]: c for i, c in zip(rd.finite, self.coeffs)}}


class WeylElement:
    """An element of the affine Weyl group ``W`` of a root datum."""

    __slots__ = ("group", "matrix", "_word", "_inverse", "__weakref__")

    def __init__(self, group: "WeylGroup", matrix: Matrix, word: tuple[int, ...] | None = None):
        self.group = group
        self.matrix = matrix
        self._word = word
        self._inverse = None

    def __eq__(self, other):
        if not isinstance(other, WeylElement):
            return NotImplemented
        return self.group is other.group and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return self.group.multiply(self, other)

    def __repr__(self):
        return f"WeylElement({self.group.format_word(self.word)!r})"

    @property
    def word(self) -> tuple[int, ...]:
        if self._word is None:
            self._word = self.group.reduced_word(self)
        return self._word

    @property
    def length(self) -> int:
        return len(self.word)

    def inverse(self) -> "WeylElement":
        return self.group.inverse(self)

    def is_identity(self) -> bool:
        return self.matrix == self.group.identity.matrix

    def apply(self, y: Sequence[int]) -> tuple[int, ...]:
        """Action on ``Y``."""
        return tuple(sum(m * v for m, v in zip(row, y)) for row in self.matrix)

    def apply_x(self, x: Sequence[int]) -> tuple[int, ...]:
        """Action on ``X`` in pairing coordinates: ``<k, w x> = <w^{-1} k, x>``."""
        inv = self.inverse().matrix
        n = len(x)
        return tuple(sum(inv[j][k] * x[j] for j in range(n)) for k in range(n))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.matrix)


class WeylGroup:
    """The affine Weyl group of an untwisted affine root datum."""

    def __init__(self, rd: RootDatum, iteration_cap: int = DEFAULT_ITERATION_CAP):
        self.rd = rd
        self.n = rd.rank
        self.iteration_cap = iteration_cap
        self.identity = WeylElement(self, _identity(self.n), ())
        self._gens = tuple(self._make_reflection(i) for i in range(self.n))
        self._bruhat_memo: dict = {}

    # construction -------------------------------------------------------

    def _make_reflection(self, i: int) -> WeylElement:
        a = self.rd.cartan
        n = self.n
        # s_i(e_j) = e_j - <j, i'> e_i
        rows = [[int(r == c) for c in range(n)] for r in range(n)]
        for j in range(n):
            rows[i][j] -= a[j][i]
        el = WeylElement(self, tuple(map(tuple, rows)), (i,))
        el._inverse = el
        return el

    def s(self, i) -> WeylElement:
        """Simple reflection by index or label."""
        return self._gens[self._idx(i)]

    simple_reflection = s

    def _idx(self, i) -> int:
        if isinstance(i, int) and not isinstance(i, bool):
            if 0 <= i < self.n:
                return i
            raise ValidationError(f"node index {i} out of range")
        return self.rd.index(i)

    def from_word(self, word: Iterable) -> WeylElement:
        w = self.identity
        for letter in word:
            w = self.multiply(w, self.s(letter))
        return w

    def parse_word(self, text: str) -> WeylElement:
        text = text.strip()
        if not text:
            return self.identity
        return self.from_word([part.strip() for part in text.split(",")])

    def format_word(self, word: Sequence[int]) -> str:
        return ",".join(self.rd.labels[i] for i in word)

    def from_matrix(self, matrix) -> WeylElement:
        m = tuple(tuple(int(x) for x in row) for row in matrix)
        if len(m) != self.n or any(len(r) != self.n for r in m):
            raise ValidationError(f"matrix must be {self.n}x{self.n}")
        if abs(linalg.det(m)) != 1:
            raise ValidationError("matrix is not invertible over Z")
        el = WeylElement(self, m)
        if el.apply(self.rd.c) != self.rd.c:
            raise ValidationError("matrix does not fix c")
        # peeling either terminates at the identity or proves non-membership
        el.word
        return el

    # group operations ---------------------------------------------------

    def multiply(self, u: WeylElement, w: WeylElement) -> WeylElement:
        if u.group is not self or w.group is not self:
            raise UsageError("elements from different Weyl groups")
        word = None
        if u._word is not None and w._word is not None:
            # keep a word only when it is certainly reduced
            if not w._word:
                word = u._word
            elif not u._word:
                word = w._word
        return WeylElement(self, _matmul(u.matrix, w.matrix), word)

    def inverse(self, w: WeylElement) -> WeylElement:
        if w._inverse is None:
            inv = linalg.inverse(w.matrix)
            m = tuple(tuple(int(x) for x in row) for row in inv)
            if any(Fraction(x).denominator != 1 for row in inv for x in row):
                raise InconsistencyError("Weyl element matrix not unimodular")
            res = WeylElement(self, m)
            if w._word is not None:
                res._word = None  # reversed word is reduced but not canonical
            res._inverse = w
            w._inverse = res
        return w._inverse

    def equals(self, u: WeylElement, w: WeylElement) -> bool:
        return u == w

    # length and words ---------------------------------------------------

    def is_right_descent(self, w: WeylElement, i: int) -> bool:
        return sign_of(w.column(i)) < 0

    def is_left_descent(self, w: WeylElement, i: int) -> bool:
        return sign_of(w.inverse().column(i)) < 0

    def reduced_word(self, w: WeylElement) -> tuple[int, ...]:
        """Descent peeling: repeatedly strip the smallest right descent."""
        letters = []
        m = w.matrix
        n = self.n
        a = self.rd.cartan
        ident = self.identity.matrix
        steps = 0
        while m != ident:
            steps += 1
            if steps > self.iteration_cap:
                raise BudgetError(
                    f"descent peeling exceeded {self.iteration_cap} steps",
                    data={"partial_word": self.format_word(letters[::-1])},
                )
            for i in range(n):
                col_i = [row[i] for row in m]
                if sign_of(col_i) < 0:
                    break
            else:
                raise ValidationError("matrix has no right descent; not an element of W")
            # right multiplication by s_i: column j becomes col_j - <j,i'> col_i
            m = tuple(
                tuple(row[j] - a[j][i] * row[i] for j in range(n)) for row in m
            )
            letters.append(i)
        return tuple(reversed(letters))

    def length(self, w: WeylElement) -> int:
        return w.length

    def length_and_word(self, w: WeylElement) -> tuple[int, tuple[int, ...]]:
        return w.length, w.word

    # real roots ----------------------------------------------------------

    def is_real_root(self, y: Sequence[int]) -> bool:
        """Membership in ``W . I`` by greedy height reduction."""
        y = list(y)
        if all(v <= 0 for v in y):
            y = [-v for v in y]
        if any(v < 0 for v in y) or not any(y):
            return False
        a = self.rd.cartan
        n = self.n
        for _ in range(self.iteration_cap):
            if sum(y) == 1:
                return True
            for i in range(n):
                p = sum(y[k] * a[k][i] for k in range(n))
                if p > 0:
                    break
            else:
                return False
            y[i] -= p
            if y[i] < 0:
                return False
        raise BudgetError("root membership test exceeded its iteration cap")

    def root_step(self, finite: Sequence[int]) -> int:
        """Smallest ``e > 0`` with ``abar + e c`` a root; the string is ``abar + e Z c``."""
        c = self.rd.c
        for e in range(1, self.rd.D + 1):
            if self.is_real_root([f + e * ci for f, ci in zip(finite, c)]):
                break
        else:
            raise InconsistencyError(f"no affine root over finite root {tuple(finite)}")
        for k in range(-2 * e, 2 * e + 1):
            if self.is_real_root([f + k * ci for f, ci in zip(finite, c)]) != (k % e == 0):
                raise InconsistencyError(f"root string over {tuple(finite)} is not periodic")
        return e

    @cached_property
    def steps(self) -> tuple[int, ...]:
        """Root-string step of each simple root (1 at the affine node by convention)."""
        return tuple(
            1 if i == self.rd.i0 else self.root_step([int(k == i) for k in range(self.n)])
            for i in range(self.n)
        )

    # translations and normal form --------------------------------------

    def translation_pairings(self, z: TranslationVector) -> tuple[int, ...]:
        """``<k, zX>`` for every node ``k``, where ``zX = sum z_i e_i i'``."""
        rd = self.rd
        if len(z.coeffs) != len(rd.finite):
            raise ValidationError(f"translation needs {len(rd.finite)} coefficients")
        a = rd.cartan
        e = self.steps
        return tuple(
            sum(zc * e[i] * a[k][i] for zc, i in zip(z.coeffs, rd.finite))
            for k in range(self.n)
        )

    def translation(self, z: TranslationVector) -> WeylElement:
        p = self.translation_pairings(z)
        c = self.rd.c
        n = self.n
        m = tuple(tuple(int(r == k) - c[r] * p[k] for k in range(n)) for r in range(n))
        return WeylElement(self, m, () if z.is_zero() else None)

    def is_dominant(self, z: TranslationVector, strict: bool = True) -> bool:
        p = self.translation_pairings(z)
        vals = [p[i] for i in self.rd.finite]
        return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)

    @cached_property
    def _finite_pairing_inverse(self):
        rd = self.rd
        a = rd.cartan
        mat = [[self.steps[i] * a[k][i] for i in rd.finite] for k in rd.finite]
        return linalg.inverse(mat)

    def solve_translation(self, pairings: Sequence[int]) -> TranslationVector:
        """Find ``z`` with ``<k, zX> = pairings[k]`` for all ``k``."""
        rd = self.rd
        inv = self._finite_pairing_inverse
        rhs = [pairings[k] for k in rd.finite]
        sol = [sum(inv[r][c] * rhs[c] for c in range(len(rhs))) for r in range(len(rhs))]
        if any(Fraction(x).denominator != 1 for x in sol):
            raise InconsistencyError(f"translation part {sol} is not integral")
        z = TranslationVector(tuple(int(x) for x in sol))
        if self.translation_pairings(z) != tuple(pairings):
            raise InconsistencyError("translation part does not reproduce the X-displacement")
        return z

    def normal_form(self, w: WeylElement) -> tuple[TranslationVector, WeylElement]:
        """``w = theta_z * wbar`` with ``wbar`` in the finite Weyl group."""
        rd = self.rd
        x0 = tuple(int(k == rd.i0) for k in range(self.n))
        moved = w.apply_x(x0)
        z = self.solve_translation(tuple(a - b for a, b in zip(moved, x0)))
        wbar = self.multiply(self.translation(-z), w)
        if rd.i0 in wbar.word:
            raise InconsistencyError("finite part of the normal form uses the affine node")
        if self.multiply(self.translation(z), wbar) != w:
            raise InconsistencyError("normal form does not reconstruct the element")
        return z, wbar

    def default_dominant(self) -> TranslationVector:
        """Smallest integer ``z`` with ``<i, zX>`` equal across finite nodes (strictly dominant)."""
        inv = self._finite_pairing_inverse
        k = len(self.rd.finite)
        sol = [sum(inv[r][c] for c in range(k)) for r in range(k)]
        return TranslationVector(tuple(linalg.primitive_integer(sol)))

    # Bruhat order ------------------------------------------------------

    def bruhat_leq(self, u: WeylElement, w: WeylElement) -> bool:
        key = (u.matrix, w.matrix)
        memo = self._bruhat_memo
        if key in memo:
            return memo[key]
        if u.length > w.length:
            res = False
        elif w.length == 0:
            res = u.is_identity()
        elif u.length == w.length:
            res = u == w
        else:
            s = next(i for i in range(self.n) if self.is_left_descent(w, i))
            sw = self.multiply(self.s(s), w)
            su = self.multiply(self.s(s), u)
            low = su if self.is_left_descent(u, s) else u
            res = self.bruhat_leq(low, sw)
        if len(memo) > 200_000:
            memo.clear()
        memo[key] = res
        return res

    # weights -----------------------------------------------------------

    @property
    def rho(self) -> tuple[int, ...]:
        return (1,) * self.n

    def dot_action(self, w: WeylElement, lam: Sequence[int]) -> tuple[int, ...]:
        shifted = tuple(x + 1 for x in lam)
        return tuple(x - 1 for x in w.apply_x(shifted))

    def word_lift(self, w: WeylElement, lam: Sequence[int], word: Sequence[int] | None = None):
        """Telescoping lift of ``lam - w.lam`` to ``Z[I]`` along a reduced word.

        Returns ``(lift, height)``; ``lift`` pairs to ``lam - w.lam`` under ``y -> sum y_i i'``.
        """
        if word is None:
            word = w.word
        a = self.rd.cartan
        mu = [x + 1 for x in lam]
        lift = [0] * self.n
        for i in reversed(word):
            cj = mu[i]
            lift[i] += cj
            mu = [mu[k] - cj * a[k][i] for k in range(self.n)]
        return tuple(lift), sum(lift)

    # enumeration -------------------------------------------------------

    def ball(self, max_length: int, budget: int | None = None) -> list[list[WeylElement]]:
        """All elements grouped by length ``0..max_length``."""
        layers = [[self.identity]]
        total = 1
        for _ in range(max_length):
            seen = set()
            nxt = []
            for w in layers[-1]:
                for i in range(self.n):
                    if sign_of(w.column(i)) > 0:
                        v = WeylElement(self, _matmul(w.matrix, self._gens[i].matrix))
                        if v.matrix not in seen:
                            seen.add(v.matrix)
                            nxt.append(v)
            total += len(nxt)
            if budget is not None and total > budget:
                raise BudgetError(
                    f"length ball exceeded {budget} elements", data={"reached_length": len(layers)}
                )
            layers.append(nxt)
        return layers

    def iter_ball(self, max_length: int, budget: int | None = None) -> Iterator[WeylElement]:
        for layer in self.ball(max_length, budget):
            yield from layer

    # serialization -----------------------------------------------------

    def to_json(self, w: WeylElement) -> dict:
        return {"matrix": [list(r) for r in w.matrix], "word": self.format_word(w.word)}

    def dumps(self, w: WeylElement) -> str:
        return json.dumps(self.to_json(w), sort_keys=True)
