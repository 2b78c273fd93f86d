"""Cartan data, root data, and classification.

A Cartan datum is given by its symmetric dot matrix ``(i.j)``. The pairing
``<i, j'> = 2 (i.j) / (i.i)`` is the (generalized) Cartan matrix used
everywhere else; row index is the ``Y`` side, column index the ``X`` side.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import linalg
from .errors import InconsistencyError, ValidationError


class Classification(str, Enum):
    FINITE = "finite"
    AFFINE_UNTWISTED = "affine-untwisted"
    AFFINE_TWISTED = "affine-twisted"
    OTHER = "other"


@dataclass(frozen=True)
class CartanDatum:
    labels: tuple[str, ...]
    dot: tuple[tuple[int, ...], ...]
    i0: str

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dot", tuple(tuple(int(x) for x in row) for row in self.dot))
        n = len(labels)
        if n == 0:
            raise ValidationError("empty index set")
        if len(set(labels)) != n:
            raise ValidationError(f"duplicate labels in {labels}")
        if len(self.dot) != n or any(len(row) != n for row in self.dot):
            raise ValidationError(f"dot matrix must be {n}x{n}")
        if self.i0 not in labels:
            raise ValidationError(f"distinguished index {self.i0!r} not among labels")
        for a in range(n):
            ii = self.dot[a][a]
            if ii <= 0 or ii % 2:
                raise ValidationError(f"i.i must lie in {{2,4,6,...}}; got {ii} at {labels[a]!r}")
            for b in range(n):
                if self.dot[a][b] != self.dot[b][a]:
                    raise ValidationError(
                        f"dot matrix not symmetric at ({labels[a]!r}, {labels[b]!r})"
                    )
                if a == b:
                    continue
                num = 2 * self.dot[a][b]
                if num % ii or num // ii > 0:
                    raise ValidationError(
                        f"2(i.j)/(i.i) must lie in {{0,-1,-2,...}} for pair "
                        f"({labels[a]!r}, {labels[b]!r}); got {Fraction(num, ii)}"
                    )

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise ValidationError(f"unknown label {label!r}; labels are {list(self.labels)}") from None

    @cached_property
    def cartan(self) -> tuple[tuple[int, ...], ...]:
        """``cartan[i][j] = <i, j'>``."""
        return tuple(
            tuple(2 * self.dot[i][j] // self.dot[i][i] for j in range(self.rank))
            for i in range(self.rank)
        )

    def is_irreducible(self) -> bool:
        n = self.rank
        seen = {0}
        stack = [0]
        while stack:
            a = stack.pop()
            for b in range(n):
                if b not in seen and self.dot[a][b] != 0:
                    seen.add(b)
                    stack.append(b)
        return len(seen) == n

    def to_json(self) -> dict:
        return {"dot": [list(r) for r in self.dot], "i0": self.i0, "labels": list(self.labels)}

    @classmethod
    def from_json(cls, obj: dict) -> "CartanDatum":
        try:
            return cls(labels=tuple(obj["labels"]), dot=tuple(map(tuple, obj["dot"])), i0=str(obj["i0"]))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed datum object: {exc}") from None


def classify(datum: CartanDatum) -> Classification:
    dot = datum.dot
    if linalg.is_positive_definite(dot):
        return Classification.FINITE
    if not datum.is_irreducible() or not linalg.is_positive_semidefinite(dot):
        return Classification.OTHER
    if datum.rank - linalg.rank(dot) != 1:
        return Classification.OTHER
    d = [dot[i][i] // 2 for i in range(datum.rank)]
    return Classification.AFFINE_UNTWISTED if min(d) == 1 else Classification.AFFINE_TWISTED


def _normalized_kernel(rows, at: int, what: str) -> tuple[int, ...]:
    basis = linalg.nullspace(rows)
    if len(basis) != 1:
        raise InconsistencyError(f"{what}: kernel has dimension {len(basis)}, expected 1")
    vec = basis[0]
    if vec[at] == 0:
        raise InconsistencyError(f"{what}: kernel vanishes at the distinguished index")
    scaled = [x / vec[at] for x in vec]
    if any(x.denominator != 1 or x <= 0 for x in scaled):
        raise InconsistencyError(f"{what}: normalized kernel {scaled} is not a positive integer vector")
    return tuple(int(x) for x in scaled)


def marks_comarks(datum: CartanDatum) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Marks ``r`` (left kernel of the Cartan matrix) and comarks ``r'`` (right kernel)."""
    kind = classify(datum)
    if kind is not Classification.AFFINE_UNTWISTED:
        raise ValidationError(f"marks need an untwisted affine datum, got {kind.value}")
    a = datum.cartan
    n = datum.rank
    at = datum.index(datum.i0)
    transpose = [[a[i][j] for i in range(n)] for j in range(n)]
    r = _normalized_kernel(transpose, at, "marks")
    rp = _normalized_kernel(a, at, "comarks")
    return r, rp


@dataclass(frozen=True)
class DualCoxeter:
    # sum of comarks over the finite nodes only (omits the distinguished node)
    finite: int
    # the customary value, which also counts r'_{i0} = 1
    conventional: int


def dual_coxeter(datum: CartanDatum) -> DualCoxeter:
    _, rp = marks_comarks(datum)
    at = datum.index(datum.i0)
    s = sum(x for i, x in enumerate(rp) if i != at)
    return DualCoxeter(finite=s, conventional=s + rp[at])


@dataclass(frozen=True)
class RootDatum:
    """Simply connected root datum of an untwisted affine Cartan datum.

    ``Y = Z[I]`` holds the roots; ``X = Hom(Y, Z)`` holds weights, written
    through their pairings with the basis of ``Y``.
    """

    datum: CartanDatum
    marks: tuple[int, ...] = field(init=False)
    comarks: tuple[int, ...] = field(init=False)
    d: tuple[int, ...] = field(init=False)
    D: int = field(init=False)
    dhat: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        kind = classify(self.datum)
        if kind is not Classification.AFFINE_UNTWISTED:
            raise ValidationError(f"root datum requires an untwisted affine datum, got {kind.value}")
        at = self.datum.index(self.datum.i0)
        d = tuple(self.datum.dot[i][i] // 2 for i in range(self.datum.rank))
        if d[at] != 1:
            raise ValidationError(f"distinguished node {self.datum.i0!r} must have d = 1, has {d[at]}")
        D = max(d)
        if any(D % x for x in d):
            raise ValidationError(f"d-values {d} do not divide D = {D}")
        r, rp = marks_comarks(self.datum)
        object.__setattr__(self, "marks", r)
        object.__setattr__(self, "comarks", rp)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "dhat", tuple(D // x for x in d))
        fin = [i for i in range(self.datum.rank) if i != at]
        sub = [[self.datum.dot[i][j] for j in fin] for i in fin]
        if not linalg.is_positive_definite(sub):
            raise ValidationError("datum restricted to the finite nodes is not of finite type")
        if D not in (1, 2, 3):
            raise ValidationError(f"D = {D} outside {{1,2,3}}")

    # convenience views -------------------------------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        return self.datum.labels

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def cartan(self):
        return self.datum.cartan

    @cached_property
    def i0(self) -> int:
        return self.datum.index(self.datum.i0)

    @cached_property
    def finite(self) -> tuple[int, ...]:
        """Positions of the finite nodes, in datum order."""
        return tuple(i for i in range(self.rank) if i != self.i0)

    @property
    def c(self) -> tuple[int, ...]:
        return self.marks

    @cached_property
    def height_c(self) -> int:
        return sum(self.marks)

    def index(self, label) -> int:
        return self.datum.index(label)

    def pair(self, y: Sequence[int], x: Sequence[int]) -> int:
        """``<y, x>`` for ``y`` in ``Y`` (coefficients) and ``x`` in ``X`` (pairings)."""
        return sum(a * b for a, b in zip(y, x))

    def prime(self, i: int) -> tuple[int, ...]:
        """The weight ``i'`` in ``X``: pairings ``<k, i'>`` over all ``k``."""
        return tuple(self.cartan[k][i] for k in range(self.rank))

    def prime_linear(self, y: Sequence[int]) -> tuple[int, ...]:
        """Linear extension ``sum y_i i'``; the X-weight of a degree-``y`` element."""
        return tuple(
            sum(y[i] * self.cartan[k][i] for i in range(self.rank)) for k in range(self.rank)
        )

    def level(self, pairings: Sequence[int]) -> int:
        return sum(r * p for r, p in zip(self.marks, pairings))

    def describe(self) -> dict:
        dc = dual_coxeter(self.datum)
        return {
            "classification": classify(self.datum).value,
            "labels": list(self.labels),
            "i0": self.datum.i0,
            "marks": dict(zip(self.labels, self.marks)),
            "comarks": dict(zip(self.labels, self.comarks)),
            "d": dict(zip(self.labels, self.d)),
            "dhat": dict(zip(self.labels, self.dhat)),
            "D": self.D,
            "dual_coxeter_finite": dc.finite,
            "dual_coxeter_conventional": dc.conventional,
        }


PRESETS = {"A1~": "a1aff.json", "A2~": "a2aff.json", "C2~": "c2aff.json"}


def load_datum(path) -> CartanDatum:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read datum file {path}: {exc}") from None
    return CartanDatum.from_json(obj)


def preset(name: str) -> CartanDatum:
    try:
        fname = PRESETS[name]
    except KeyError:
        raise ValidationError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    text = resources.files("semitor").joinpath("data", fname).read_text()
    return CartanDatum.from_json(json.loads(text))


def dump_datum(datum: CartanDatum) -> str:
    return json.dumps(datum.to_json(), sort_keys=True)
