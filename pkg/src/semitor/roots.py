"""Affine roots, inversion sets, twisted and semi-infinite lengths.

Roots are vectors in ``Y = Z[I]``. A real root is ``abar + m*e(abar)*c``
with ``abar`` in the finite root system over the finite nodes and ``e`` the
root-string step read off from the W-orbit; an imaginary root is ``m*c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Sequence

from .errors import BudgetError, InconsistencyError, ValidationError
from .weyl import TranslationVector, WeylElement, WeylGroup, sign_of

Vec = tuple[int, ...]

INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, order=True)
class AffineRoot:
    """Split form of a root: finite part over the finite nodes and an ``m`` coefficient."""

    finite: tuple[int, ...]
    m: int

    @property
    def is_imaginary(self) -> bool:
        return not any(self.finite)


class RootSystem:
    def __init__(self, group: WeylGroup):
        self.W = group
        self.rd = group.rd
        self.n = group.n

    # finite root system ------------------------------------------------

    @cached_property
    def finite_roots(self) -> tuple[Vec, ...]:
        """All roots of the finite system, as full-length ``Z[I]`` vectors."""
        rd = self.rd
        a = rd.cartan
        start = [tuple(int(k == i) for k in range(self.n)) for i in rd.finite]
        seen = set(start)
        stack = list(start)
        while stack:
            y = stack.pop()
            for i in rd.finite:
                p = sum(y[k] * a[k][i] for k in range(self.n))
                if p:
                    z = tuple(y[k] - (p if k == i else 0) for k in range(self.n))
                    if z not in seen:
                        seen.add(z)
                        stack.append(z)
        return tuple(sorted(seen))

    @cached_property
    def finite_positive(self) -> tuple[Vec, ...]:
        return tuple(r for r in self.finite_roots if sign_of(r) > 0)

    @cached_property
    def _gram(self):
        g = self.rd.datum.dot
        dh = self.rd.dhat
        return tuple(tuple(g[i][j] * dh[i] * dh[j] for j in range(self.n)) for i in range(self.n))

    def form(self, y: Sequence[int], z: Sequence[int]) -> int:
        """W-invariant form on ``Y``: ``(k, l) -> (k.l) dhat_k dhat_l``."""
        g = self._gram
        return sum(y[i] * g[i][j] * z[j] for i in range(self.n) for j in range(self.n) if y[i] and z[j])

    @cached_property
    def _steps(self) -> dict:
        return {r: self.W.root_step(r) for r in self.finite_roots}

    def step_of(self, finite: Sequence[int]) -> int:
        """Root-string step ``e`` over a finite root: the string is ``abar + e m c``."""
        return self._steps[tuple(finite)]

    def coroot_pairing(self, alpha: Sequence[int], beta: Sequence[int]) -> int:
        """``<abar, bbar'>`` on finite parts; zero if either root is imaginary."""
        fa = self.finite_part(alpha)
        fb = self.finite_part(beta)
        if not any(fa) or not any(fb):
            return 0
        num = 2 * self.form(fa, fb)
        den = self.form(fb, fb)
        if num % den:
            raise InconsistencyError(f"non-integral pairing between {alpha} and {beta}")
        return num // den

    # conversions ---------------------------------------------------------

    def finite_part(self, y: Sequence[int]) -> Vec:
        c = self.rd.c
        k = y[self.rd.i0]
        return tuple(y[i] - k * c[i] for i in range(self.n))

    def split(self, y: Sequence[int]) -> AffineRoot:
        fin = self.finite_part(y)
        k = y[self.rd.i0]
        short = tuple(fin[i] for i in self.rd.finite)
        if not any(fin):
            if k == 0:
                raise ValidationError("zero is not a root")
            return AffineRoot(short, k)
        if fin not in self.finite_roots:
            raise ValidationError(f"{tuple(y)} is not a root")
        dh = self.step_of(fin)
        if k % dh:
            raise ValidationError(f"{tuple(y)} is not a root (m-coefficient not divisible by {dh})")
        return AffineRoot(short, k // dh)

    def join(self, root: AffineRoot) -> Vec:
        rd = self.rd
        fin = [0] * self.n
        for i, v in zip(rd.finite, root.finite):
            fin[i] = v
        scale = root.m * (self.step_of(fin) if any(fin) else 1)
        return tuple(fin[i] + scale * rd.c[i] for i in range(self.n))

    def is_root(self, y: Sequence[int]) -> bool:
        try:
            self.split(y)
            return True
        except ValidationError:
            return False

    def is_real(self, y: Sequence[int]) -> bool:
        return any(self.finite_part(y))

    def height(self, y: Sequence[int]) -> int:
        return sum(y)

    def to_json(self, y: Sequence[int]) -> dict:
        r = self.split(y)
        return {"finite": {self.rd.labels[i]: v for i, v in zip(self.rd.finite, r.finite)}, "m": r.m}

    def semiinf_sign(self, y: Sequence[int]) -> int:
        """+1 if the root lies in the semi-infinite positive half, -1 otherwise."""
        fin = self.finite_part(y)
        if any(fin):
            return sign_of(fin)
        return 1 if y[self.rd.i0] > 0 else -1

    # enumeration ---------------------------------------------------------

    def positive_real_roots(self, max_height: int) -> list[Vec]:
        """Positive real roots of height at most ``max_height``, sorted by (height, vector)."""
        out = []
        c = self.rd.c
        for fin in self.finite_roots:
            dh = self.step_of(fin)
            m = 0 if sign_of(fin) > 0 else 1
            while True:
                y = tuple(fin[i] + m * dh * c[i] for i in range(self.n))
                if sum(y) > max_height:
                    break
                out.append(y)
                m += 1
        out.sort(key=lambda y: (sum(y), y))
        return out

    def positive_imaginary_roots(self, max_height: int) -> list[Vec]:
        return [tuple(m * x for x in self.rd.c) for m in range(1, max_height // self.rd.height_c + 1)]

    # inversion sets ------------------------------------------------------

    def apply(self, w: WeylElement, y: Sequence[int]) -> Vec:
        return w.apply(y)

    def inversion_set(self, w: WeylElement) -> list[Vec]:
        """``{a > 0 : w(a) < 0}`` via the telescoping product along a reduced word."""
        word = w.word
        out = []
        for k in range(len(word)):
            # s_{i_n} ... s_{i_{k+1}} (alpha_{i_k})
            y = tuple(int(j == word[k]) for j in range(self.n))
            for i in word[k + 1 :]:
                y = self.W.s(i).apply(y)
            if sign_of(y) <= 0:
                raise InconsistencyError(f"telescoping root {y} is not positive; word not reduced")
            out.append(y)
        return out

    # lengths ---------------------------------------------------------------

    def twisted_length(self, twist: WeylElement, u: WeylElement) -> int:
        """``l(twist^{-1} u) - l(twist^{-1})``."""
        ti = twist.inverse()
        return (ti * u).length - ti.length

    def semiinf_length(self, w: WeylElement, max_doublings: int = 12) -> int:
        """Signed count over ``{a > 0 : w^{-1}(a) < 0}``; ``+1`` on the semi-infinite positive half.

        Computed by enumerating real roots with bounded ``|m|`` and certifying
        the bound on a boundary shell. The result is cross-checked against the
        inversion set of ``w^{-1}``.
        """
        W = self.W
        rd = self.rd
        winv = w.inverse()
        z, _ = W.normal_form(w)
        zx = W.translation_pairings(z)
        bound = 1 + max((abs(sum(a * b for a, b in zip(r, zx))) for r in self.finite_positive), default=0)

        def flips(lo: int, hi: int) -> list[Vec]:
            found = []
            for fin in self.finite_roots:
                dh = self.step_of(fin)
                for m in range(lo, hi + 1):
                    for mm in {m, -m}:
                        y = tuple(fin[i] + mm * dh * rd.c[i] for i in range(self.n))
                        if sign_of(y) > 0 and sign_of(winv.apply(y)) < 0:
                            found.append(y)
            return found

        for _ in range(max_doublings):
            inner = flips(0, bound)
            shell = flips(bound + 1, 2 * bound)
            if not shell:
                break
            bound *= 2
        else:
            raise BudgetError("semi-infinite length bound did not certify", data={"bound": bound})
        total = sum(self.semiinf_sign(y) for y in set(inner))
        check = sum(self.semiinf_sign(y) for y in self.inversion_set(winv))
        if total != check or len(set(inner)) != w.length:
            raise InconsistencyError(
                "semi-infinite length enumeration disagrees with inversion set",
                data={"enumerated": total, "inversion_set": check},
            )
        return total

    def tor_degree(self, theta: WeylElement, v: WeylElement) -> int:
        """Homological degree of ``v`` for the twist ``theta``: ``l(theta^{-1} v) - l(theta)``."""
        return self.twisted_length(theta, v)

    def stabilization_m0(
        self, w: WeylElement, x: TranslationVector, window: int = 3, max_m: int = 64
    ) -> tuple[int, int, list[int]]:
        """Smallest ``m0 >= 0`` with the degrees constant on ``m0+1 .. m0+window``.

        Returns ``(m0, stable_value, sequence)`` where ``sequence[m]`` is the
        degree at ``m = 0 .. m0+window``.
        """
        if not self.W.is_dominant(x, strict=True):
            raise ValidationError(f"x = {x.coeffs} is not strictly dominant")
        W = self.W
        seq: list[int] = []
        m0 = 0
        while True:
            while len(seq) <= m0 + window:
                m = len(seq)
                if m > max_m:
                    raise BudgetError(
                        f"no stabilization for m <= {max_m}", data={"sequence": seq}
                    )
                seq.append(self.tor_degree(W.translation(x.scale(m)), w))
            tail = seq[m0 + 1 : m0 + window + 1]
            if len(set(tail)) == 1:
                break
            m0 += 1
        value = seq[m0 + 1]
        expected = self.semiinf_length(w)
        if value != expected:
            raise InconsistencyError(
                "stabilized twisted length differs from semi-infinite length",
                data={"sequence": seq, "semiinf_length": expected},
            )
        return m0, value, seq

    def semiinf_bruhat_leq(
        self, u: WeylElement, w: WeylElement, certify_depth: int = 3, x: TranslationVector | None = None
    ):
        """Certified semi-decision for ``u <= w`` in the semi-infinite Bruhat order.

        Compares ``theta^{-1} u`` and ``theta^{-1} w`` in the ordinary Bruhat
        order for ``theta = theta_{lam + lam0}`` over a grid of dominant ``lam``.
        Returns ``True``, ``False`` or ``"inconclusive"``.
        """
        if u == w:
            return True
        W = self.W
        if x is None:
            x = W.default_dominant()
        try:
            self.stabilization_m0(u, x)
            self.stabilization_m0(w, x)
        except BudgetError:
            return INCONCLUSIVE
        k = len(self.rd.finite)
        # lam0 large enough to put both elements past their stabilization point
        z_u, _ = W.normal_form(u)
        z_w, _ = W.normal_form(w)
        spread = max([abs(c) for c in z_u.coeffs + z_w.coeffs], default=0)
        base = x.scale(spread + 1)
        verdicts = set()
        for a in range(certify_depth):
            for extra in product(range(certify_depth), repeat=k):
                lam = x.scale(a) + TranslationVector(extra)
                if not W.is_dominant(lam, strict=False):
                    continue
                theta_inv = W.translation(-(lam + base))
                verdicts.add(W.bruhat_leq(theta_inv * u, theta_inv * w))
                if len(verdicts) > 1:
                    return INCONCLUSIVE
        return verdicts.pop()
