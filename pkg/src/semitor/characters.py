"""Truncated formal characters, BGG Euler characteristics and Tor tables.

A character relative to a base weight ``lam`` is a table ``nu -> coeff`` with
``nu`` in ``Z[I]`` (the degree of the lowering), standing for
``coeff * e^{lam - nu'} q^{-hgt nu}``. Since ``nu -> (nu', hgt nu)`` is injective,
this loses nothing and sidesteps the degenerate imaginary direction of ``X``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .convex import ConvexOrder
from .errors import InconsistencyError, ValidationError
from .qalgebra import GradedAlgebra
from .roots import RootSystem
from .weyl import TranslationVector, WeylElement, WeylGroup

Vec = tuple[int, ...]

DEFAULT_BALL_BUDGET = 200_000


@dataclass
class FormalCharacter:
    base: tuple[int, ...]
    depth: int
    table: dict[Vec, int]
    certificate: dict = field(default_factory=dict)

    def coefficient(self, nu: Sequence[int]) -> int:
        return self.table.get(tuple(nu), 0)

    def nonzero(self) -> dict[Vec, int]:
        return {k: v for k, v in self.table.items() if v}

    def by_energy(self) -> dict[int, int]:
        out: Counter = Counter()
        for nu, c in self.table.items():
            out[-sum(nu)] += c
        return dict(out)

    def to_json(self, rd) -> dict:
        entries = []
        for nu, c in self.nonzero().items():
            k = nu[rd.i0]
            off = {rd.labels[i]: -(nu[i] - k * rd.c[i]) for i in rd.finite}
            entries.append({"coeff": c, "offset": off, "t": -sum(nu)})
        entries.sort(key=lambda e: (-e["t"], [e["offset"][rd.labels[i]] for i in rd.finite]))
        return {
            "base": dict(zip(rd.labels, self.base)),
            "certificate": self.certificate,
            "depth": self.depth,
            "entries": entries,
        }


@dataclass
class TorEntry:
    n: int
    element: WeylElement
    weight: tuple[int, ...]


@dataclass
class TorTable:
    entries: list[TorEntry]
    window: tuple[int, int]
    tag: str
    certificate: dict

    def counts(self) -> list[int]:
        lo, hi = self.window
        c = Counter(e.n for e in self.entries)
        return [c[n] for n in range(lo, hi + 1)]

    def to_json(self, W: WeylGroup) -> dict:
        rd = W.rd
        return {
            "certificate": self.certificate,
            "entries": [
                {
                    "n": e.n,
                    "weight": dict(zip(rd.labels, e.weight)),
                    "word": W.format_word(e.element.word),
                }
                for e in self.entries
            ],
            "tag": self.tag,
            "window": list(self.window),
        }


class CharacterEngine:
    def __init__(self, order: ConvexOrder, ball_budget: int = DEFAULT_BALL_BUDGET):
        self.order = order
        self.R: RootSystem = order.R
        self.W: WeylGroup = order.W
        self.rd = self.W.rd
        self.algebra = GradedAlgebra(order)
        self.ball_budget = ball_budget
        self._verma_cache: dict[int, Counter] = {}

    # helpers -------------------------------------------------------------------

    def check_weight(self, lam: Sequence[int], dominant: bool = True) -> tuple[int, ...]:
        lam = tuple(int(x) for x in lam)
        if len(lam) != self.W.n:
            raise ValidationError(f"weight needs {self.W.n} pairings, got {len(lam)}")
        if dominant and any(x < 0 for x in lam):
            raise ValidationError(f"weight {lam} is not dominant")
        return lam

    def level(self, lam: Sequence[int]) -> int:
        return self.rd.level(lam)

    def energy_shift(self, lam: Sequence[int], w: WeylElement) -> int:
        lam = self.check_weight(lam)
        return self.W.word_lift(w, lam)[1]

    def _verma_series(self, depth: int) -> Counter:
        """Inverse of the denominator ``sum_w (-1)^l(w) e^{-lift(w, rho)}``.

        Lowering degrees live in ``X`` through ``nu -> nu'``, where the simple
        reflections act by ``e_j -> e_j - A[i][j] e_i``. For non-symmetric
        Cartan matrices this is not the ``Y``-action, so the series is built
        from the denominator rather than from the ``Y``-side root list.
        """
        got = self._verma_cache.get(depth)
        if got is None:
            got = self._invert(self.denominator(depth), depth)
            self._verma_cache[depth] = got
        return got

    def denominator(self, depth: int) -> dict[Vec, int]:
        # rho - w(rho) is the dot-action lift of the zero weight
        zero = (0,) * self.W.n
        out: Counter = Counter()
        for layer in self._ball(depth):
            for w in layer:
                lift, h = self.W.word_lift(w, zero)
                if h < w.length:
                    raise InconsistencyError("rho shift below length")
                if h <= depth:
                    out[lift] += (-1) ** w.length
        return {k: v for k, v in out.items() if v}

    def _invert(self, series: dict[Vec, int], depth: int) -> Counter:
        n = self.W.n
        zero = (0,) * n
        if series.get(zero) != 1:
            raise InconsistencyError("denominator must start with 1")
        tail = [(k, v) for k, v in series.items() if k != zero]
        out: Counter = Counter({zero: 1})
        layers: list[list[Vec]] = [[zero]]
        for h in range(1, depth + 1):
            acc: Counter = Counter()
            for mu, d in tail:
                hm = sum(mu)
                if hm > h:
                    continue
                for nu in layers[h - hm]:
                    acc[tuple(a + b for a, b in zip(mu, nu))] -= d * out[nu]
            layer = [k for k, v in acc.items() if v]
            for k in layer:
                out[k] = acc[k]
            layers.append(layer)
        return Counter({k: v for k, v in out.items() if v})

    # characters -------------------------------------------------------------------

    def verma_character(self, lam: Sequence[int], depth: int) -> FormalCharacter:
        """``e^lam`` over the Weyl-Kac denominator."""
        lam = self.check_weight(lam, dominant=False)
        if depth < 0:
            raise ValidationError("depth must be nonnegative")
        series = self._verma_series(depth)
        return FormalCharacter(
            base=lam,
            depth=depth,
            table=dict(series),
            certificate={"exact_below_energy": depth, "kind": "verma"},
        )

    def _accumulate(self, lam, terms, depth) -> dict[Vec, int]:
        series = self._verma_series(depth)
        acc: Counter = Counter()
        for sign, lift in terms:
            room = depth - sum(lift)
            for nu, c in series.items():
                if sum(nu) <= room:
                    acc[tuple(a + b for a, b in zip(lift, nu))] += sign * c
        return {k: v for k, v in acc.items() if v}

    def _ball(self, radius: int) -> list[list[WeylElement]]:
        return self.W.ball(radius, budget=self.ball_budget)

    def bgg_euler(self, lam: Sequence[int], depth: int) -> FormalCharacter:
        """Alternating sum of shifted Verma characters over ``W``.

        For dominant ``lam`` every telescoping coefficient is at least 1, so
        ``shift(w) >= l(w)`` and the ball of radius ``depth`` holds every
        contributing element.
        """
        lam = self.check_weight(lam)
        if self.level(lam) < 0:
            raise ValidationError("level must be nonnegative")
        terms = []
        for layer in self._ball(depth):
            for w in layer:
                lift, h = self.W.word_lift(w, lam)
                if h < w.length:
                    raise InconsistencyError("energy shift below length for a dominant weight")
                if h <= depth:
                    terms.append(((-1) ** w.length, lift))
        return FormalCharacter(
            base=lam,
            depth=depth,
            table=self._accumulate(lam, terms, depth),
            certificate={"ball_radius": depth, "exact_below_energy": depth, "kind": "bgg"},
        )

    def twisted_bgg_euler(self, lam: Sequence[int], m: int, depth: int) -> FormalCharacter:
        """Same sum, organised by the twist: ``v = theta u`` with signs ``(-1)^{n(v) + l(theta)}``.

        ``n(v) = l(theta^{-1} v) - l(theta)``. The ball is taken in ``u``
        with radius ``l(theta) + depth``, enough to contain every ``v`` of length at most ``depth``.
        """
        lam = self.check_weight(lam)
        if m < 0:
            raise ValidationError("m must be nonnegative")
        theta = self.W.translation(self.order.x.scale(m))
        lt = theta.length
        terms = []
        for layer in self._ball(lt + depth):
            for u in layer:
                v = theta * u
                n = u.length - lt
                lift, h = self.W.word_lift(v, lam)
                if h <= depth:
                    terms.append(((-1) ** (n + lt), lift))
        return FormalCharacter(
            base=lam,
            depth=depth,
            table=self._accumulate(lam, terms, depth),
            certificate={"ball_radius": lt + depth, "exact_below_energy": depth, "kind": "twisted-bgg", "m": m},
        )

    # Tor tables ---------------------------------------------------------------------

    def tor_table(self, lam: Sequence[int], m: int, window: tuple[int, int]) -> TorTable:
        lam = self.check_weight(lam)
        lo, hi = window
        theta = self.W.translation(self.order.x.scale(m))
        lt = theta.length
        radius = hi + lt
        entries = []
        if radius >= 0:
            for layer in self._ball(radius):
                for u in layer:
                    n = u.length - lt
                    if lo <= n <= hi:
                        v = theta * u
                        if self.R.tor_degree(theta, v) != n:
                            raise InconsistencyError("twisted length disagrees with the ball layer")
                        entries.append(TorEntry(n, v, self.W.dot_action(v, lam)))
        entries.sort(key=lambda e: (e.n, e.element.word))
        self._check_distinct(entries, lam)
        return TorTable(
            entries=entries,
            window=(lo, hi),
            tag=f"m={m}",
            certificate={"ball_radius": radius, "complete": True, "theta_length": lt},
        )

    @staticmethod
    def _check_distinct(entries: list[TorEntry], lam) -> None:
        # dominant lam has trivial stabilizer under the dot action
        seen: dict = {}
        for e in entries:
            key = (e.n, e.weight)
            if key in seen and seen[key] != e.element:
                raise InconsistencyError(f"repeated weight {e.weight} in degree {e.n}")
            seen[key] = e.element

    def tor_limit_table(self, lam: Sequence[int], window: tuple[int, int], box: int | None = None) -> TorTable:
        """Entries ``(l_semi(v), v, v.lam)`` over normal forms ``v = theta_z wbar``.

        ``l_semi(theta_z wbar) + <2 rho-bar, zX>`` is bounded by the number of
        finite positive roots, which bounds ``<2 rho-bar, zX>`` on the window.
        In rank one that pins ``z`` down and the table is complete; otherwise
        ``z`` is also restricted to ``|z_i| <= box`` and the table is partial.
        """
        lam = self.check_weight(lam)
        lo, hi = window
        W, R = self.W, self.R
        fpos = R.finite_positive
        N = len(fpos)
        finite_group = self._finite_group()
        k = len(self.rd.finite)

        def rho_pair(z: TranslationVector) -> int:
            zx = W.translation_pairings(z)
            return sum(sum(a * b for a, b in zip(r, zx)) for r in fpos)

        if k == 1:
            unit = rho_pair(TranslationVector((1,)))
            bound = (max(abs(lo), abs(hi)) + N) // unit + 1
            zs = [TranslationVector((a,)) for a in range(-bound, bound + 1)]
            complete = True
            box_used = bound
        else:
            if box is None:
                box = max(abs(lo), abs(hi)) + N
            from itertools import product as _product

            zs = [TranslationVector(t) for t in _product(range(-box, box + 1), repeat=k)]
            complete = False
            box_used = box
        entries = []
        for z in zs:
            rp = rho_pair(z)
            if not (lo - N <= -rp <= hi + N):
                continue
            t = W.translation(z)
            for wbar in finite_group:
                v = t * wbar
                n = R.semiinf_length(v)
                if abs(n + rp) > N:
                    raise InconsistencyError("semi-infinite length outside the normal-form bound")
                if lo <= n <= hi:
                    entries.append(TorEntry(n, v, W.dot_action(v, lam)))
        entries.sort(key=lambda e: (e.n, e.element.word))
        return TorTable(
            entries=entries,
            window=(lo, hi),
            tag="limit",
            certificate={"complete": complete, "translation_box": box_used},
        )

    def _finite_group(self) -> list[WeylElement]:
        W = self.W
        out = [W.identity]
        seen = {W.identity.matrix}
        frontier = [W.identity]
        while frontier:
            nxt = []
            for w in frontier:
                for i in self.rd.finite:
                    u = w * W.s(i)
                    if u.matrix not in seen:
                        seen.add(u.matrix)
                        out.append(u)
                        nxt.append(u)
            frontier = nxt
        return out

    def stabilization_report(self, lam: Sequence[int], window: tuple[int, int], max_m: int = 16, stable_window: int = 3) -> list[dict]:
        limit = self.tor_limit_table(lam, window)
        rows = []
        for e in limit.entries:
            m0, value, seq = self.R.stabilization_m0(e.element, self.order.x, stable_window, max_m)
            rows.append(
                {
                    "m0": m0,
                    "semiinf_length": e.n,
                    "sequence": seq,
                    "stable_value": value,
                    "verdict": value == e.n,
                    "word": self.W.format_word(e.element.word),
                }
            )
        return rows
