"""Beck's convex order on positive affine roots and the theta-window index sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import InconsistencyError, UsageError, ValidationError
from .roots import RootSystem
from .weyl import TranslationVector, WeylGroup, _matmul, sign_of

Vec = tuple[int, ...]


@dataclass(frozen=True)
class Real:
    k: int

    def to_json(self, labels) -> dict:
        return {"real": self.k}


@dataclass(frozen=True)
class Imag:
    m: int
    node: int  # position in the datum, always a finite node

    def to_json(self, labels) -> dict:
        return {"imag": [self.m, labels[self.node]]}


Index = Union[Real, Imag]


@dataclass(frozen=True)
class Window:
    """Beck indices ``lo..hi`` (inclusive) plus imaginary roots ``m c`` with ``m <= imcap``."""

    lo: int
    hi: int
    imcap: int = 0

    @classmethod
    def parse(cls, text: str) -> "Window":
        """``"lo:hi"`` or ``"lo:hi,imcap"``."""
        try:
            rng, _, cap = text.partition(",")
            lo, hi = (int(t) for t in rng.split(":"))
            return cls(lo, hi, int(cap) if cap else 0)
        except ValueError:
            raise ValidationError(f"bad window {text!r}; expected lo:hi[,imcap]") from None

    def __str__(self):
        return f"{self.lo}:{self.hi},{self.imcap}"


class ConvexOrder:
    def __init__(self, roots: RootSystem, x: TranslationVector | None = None):
        self.R = roots
        self.W: WeylGroup = roots.W
        self.rd = roots.rd
        if x is None:
            x = self.W.default_dominant()
        if not self.W.is_dominant(x, strict=True):
            raise ValidationError(f"x = {x.coeffs} is not strictly dominant")
        self.x = x
        self.theta = self.W.translation(x)
        self.theta_word = self.theta.word
        self.period = len(self.theta_word)
        ident = self.W.identity.matrix
        # prefix products s_{p_1}...s_{p_{k-1}} (k >= 1) and s_{p_0}...s_{p_{k+1}} (k <= 0)
        self._pos = [ident]
        self._neg = [ident]
        self._cache: dict[int, Vec] = {}

    def p(self, k: int) -> int:
        return self.theta_word[(k - 1) % self.period]

    def _prefix(self, k: int):
        if k >= 1:
            while len(self._pos) < k:
                j = len(self._pos)  # next factor s_{p_j}
                self._pos.append(_matmul(self._pos[-1], self.W.s(self.p(j)).matrix))
            return self._pos[k - 1]
        idx = -k
        while len(self._neg) <= idx:
            j = -(len(self._neg) - 1)  # next factor s_{p_j}
            self._neg.append(_matmul(self._neg[-1], self.W.s(self.p(j)).matrix))
        return self._neg[idx]

    def beck_root(self, k: int) -> Vec:
        got = self._cache.get(k)
        if got is not None:
            return got
        m = self._prefix(k)
        i = self.p(k)
        beta = tuple(row[i] for row in m)
        if sign_of(beta) <= 0:
            raise InconsistencyError(f"beta_{k} = {beta} is not positive")
        self._cache[k] = beta
        return beta

    def project(self, a: Index) -> Vec:
        if isinstance(a, Real):
            return self.beck_root(a.k)
        if a.m <= 0 or a.node == self.rd.i0:
            raise ValidationError(f"invalid imaginary index {a}")
        return tuple(a.m * c for c in self.rd.c)

    # order -----------------------------------------------------------------

    def key(self, a: Index):
        if isinstance(a, Real):
            return (0, -a.k) if a.k <= 0 else (2, -a.k)
        return (1, a.m, a.node)

    def compare(self, a: Index, b: Index) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def indices(self, window: Window) -> list[Index]:
        """Window indices sorted ascending in the convex order."""
        out: list[Index] = [Real(k) for k in range(window.lo, window.hi + 1)]
        out += [Imag(m, i) for m in range(1, window.imcap + 1) for i in self.rd.finite]
        out.sort(key=self.key)
        return out

    # lookups ---------------------------------------------------------------

    def lookup(self, root: Vec, max_height: int | None = None) -> int | None:
        """Beck index of a real positive root, searching outward until heights exceed it."""
        root = tuple(root)
        h = sum(root)
        if max_height is None:
            max_height = h
        d = self.period
        k = 0
        # every period shifts heights by a positive multiple of hgt(c), so two
        # consecutive periods above the target height settle the search
        quiet = 0
        while quiet < 2 * d:
            lowest = None
            for kk in (1 - k, k + 1) if k else (0, 1):
                b = self.beck_root(kk)
                if b == root:
                    return kk
                lowest = sum(b) if lowest is None else min(lowest, sum(b))
            quiet = quiet + 1 if lowest > max_height else 0
            k += 1
        return None

    def coverage(self, max_height: int) -> dict[Vec, int]:
        """Beck index of every real positive root up to ``max_height``; certifies distinctness."""
        wanted = set(self.R.positive_real_roots(max_height))
        found: dict[Vec, int] = {}
        seen: dict[Vec, int] = {}
        k = 0
        quiet = 0
        while quiet < 2 * self.period:
            lowest = None
            for kk in ((0, 1) if k == 0 else (-k, k + 1)):
                b = self.beck_root(kk)
                if b in seen:
                    raise InconsistencyError(f"beta_{kk} repeats beta_{seen[b]}")
                seen[b] = kk
                if b in wanted:
                    found[b] = kk
                elif sum(b) <= max_height:
                    raise InconsistencyError(f"beta_{kk} = {b} is not a real positive root")
                lowest = sum(b) if lowest is None else min(lowest, sum(b))
            quiet = quiet + 1 if lowest > max_height else 0
            k += 1
        missing = wanted - found.keys()
        if missing:
            raise InconsistencyError(f"real positive roots missing from the Beck sequence: {sorted(missing)}")
        return found

    # convexity -------------------------------------------------------------

    def convexity_check(self, window: Window) -> list[dict]:
        """Pairs ``a < b`` in the window with ``a+b`` a positive root not strictly between them.

        Sums of two imaginary roots are skipped: ``mc + nc`` can never sit
        strictly between ``mc`` and ``nc`` in any order, so convexity is only
        meaningful when at least one summand is real.
        """
        idx = self.indices(window)
        proj = {a: self.project(a) for a in idx}
        violations = []
        for p in range(len(idx)):
            a = idx[p]
            for q in range(p + 1, len(idx)):
                b = idx[q]
                if isinstance(a, Imag) and isinstance(b, Imag):
                    continue
                s = tuple(x + y for x, y in zip(proj[a], proj[b]))
                fin = self.R.finite_part(s)
                if not any(fin):
                    m = s[self.rd.i0]
                    between = [Imag(m, i) for i in self.rd.finite]
                elif self.W.is_real_root(s):
                    k = self.lookup(s)
                    if k is None:
                        violations.append({"a": a, "b": b, "sum": s, "reason": "sum not in sequence"})
                        continue
                    between = [Real(k)]
                else:
                    continue
                for g in between:
                    if not (self.compare(a, g) < 0 < self.compare(b, g)):
                        violations.append({"a": a, "b": b, "sum": s, "at": g, "reason": "order"})
        return violations

    def check_reduced_windows(self, lo: int, hi: int) -> bool:
        """Every contiguous subword ``s_{p_k} ... s_{p_l}`` with ``lo <= k < l <= hi`` is reduced."""
        W = self.W
        for k in range(lo, hi + 1):
            w = W.identity
            for l in range(k, hi + 1):
                i = self.p(l)
                if sign_of(w.column(i)) < 0:
                    return False
                w = WeylElementProduct(W, w, i)
        return True

    # theta windows ----------------------------------------------------------

    def theta_window(self, m: int) -> dict:
        """Index sets cut out by ``theta_{+-mx}`` acting on projected roots.

        ``plus``: ``{a : theta_{-mx}(a) < 0}`` = ``beta_1 .. beta_{md}``.
        ``minus``: ``{a : theta_{mx}(a) < 0}`` = ``beta_{-md+1} .. beta_0``; these are
        the generators of the theta_{mx}-subalgebra.
        """
        if m < 0:
            raise ValidationError("m must be nonnegative")
        W = self.W
        d = self.period
        t_plus = W.translation(self.x.scale(m))
        t_minus = W.translation(self.x.scale(-m))
        span = range(-m * d - 2 * d, m * d + 2 * d + 1)
        plus = [k for k in span if sign_of(t_minus.apply(self.beck_root(k))) < 0]
        minus = [k for k in span if sign_of(t_plus.apply(self.beck_root(k))) < 0]
        if plus != list(range(1, m * d + 1)) or minus != list(range(-m * d + 1, 1)):
            raise InconsistencyError(
                "theta window does not match the Beck ranges", data={"plus": plus, "minus": minus}
            )
        if len(minus) != t_plus.length or len(plus) != t_minus.length:
            raise InconsistencyError("theta window size differs from the translation length")
        return {
            "plus": [Real(k) for k in plus],
            "minus": [Real(k) for k in minus],
            "generators": sorted((Real(k) for k in minus), key=self.key),
        }

    def semiinf_side(self, a: Index) -> int:
        """+1 for the semi-infinite positive side, -1 for the negative side."""
        sign = self.R.semiinf_sign(self.project(a))
        if isinstance(a, Real):
            expected = 1 if a.k <= 0 else -1
            if sign != expected:
                raise InconsistencyError(f"beta_{a.k} sits on an unexpected semi-infinite side")
        return sign

    def semiinf_pbw_index(self, window: Window) -> dict:
        idx = self.indices(window)
        return {
            "minus": [a for a in idx if self.semiinf_side(a) < 0],
            "plus": [a for a in idx if self.semiinf_side(a) > 0],
        }


def WeylElementProduct(W: WeylGroup, w, i: int):
    return W.multiply(w, W.s(i))


def same_order(a: ConvexOrder, b: ConvexOrder) -> None:
    if a is not b:
        raise UsageError("operands belong to different convex orders")
