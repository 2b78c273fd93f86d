"""The associated-graded PBW algebra, twisted exterior algebra and Koszul checks.

The associated-graded algebra on generators ``E_a`` (indexed by the convex
order) satisfies ``E_a E_b = v^{<a, b'>} E_b E_a`` whenever ``b < a``. All
structure constants are therefore signed powers of ``v``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .convex import ConvexOrder, Imag, Index, Real, Window
from .errors import InconsistencyError, UsageError, ValidationError
from .laurent import ONE, ZERO, LaurentScalar, v_power
from .modp import Specialization, generic_evaluate, nullspace_mod, rank_mod, solve_mod

Vec = tuple[int, ...]


# -- PBW monomials and straightening ------------------------------------------


@dataclass(frozen=True)
class PBWMonomial:
    """Exponents over indices, stored ascending in the convex order."""

    factors: tuple[tuple[Index, int], ...]

    def degree(self, order: ConvexOrder) -> Vec:
        n = order.W.n
        out = [0] * n
        for a, e in self.factors:
            pa = order.project(a)
            for i in range(n):
                out[i] += e * pa[i]
        return tuple(out)

    def energy(self, order: ConvexOrder) -> int:
        return sum(self.degree(order))

    def word(self) -> list[Index]:
        return [a for a, e in self.factors for _ in range(e)]


class GradedAlgebra:
    """``gr`` of the positive half, relative to a fixed convex order."""

    def __init__(self, order: ConvexOrder):
        self.order = order
        self.R = order.R

    def swap_exponent(self, big: Index, small: Index) -> int:
        """Exponent ``e`` in ``E_big E_small = v^e E_small E_big``."""
        o = self.order
        return self.R.coroot_pairing(o.project(big), o.project(small))

    def monomial(self, exps: dict[Index, int] | Iterable[tuple[Index, int]]) -> PBWMonomial:
        items = exps.items() if isinstance(exps, dict) else exps
        agg: dict[Index, int] = {}
        for a, e in items:
            if e < 0:
                raise ValidationError("negative exponent")
            if e:
                agg[a] = agg.get(a, 0) + e
        return PBWMonomial(tuple(sorted(agg.items(), key=lambda t: self.order.key(t[0]))))

    def straighten_word(self, word: Sequence[Index]) -> tuple[LaurentScalar, PBWMonomial]:
        """Bubble sort a word of generators into convex order, tracking ``v``-powers."""
        w = list(word)
        key = self.order.key
        exp = 0
        changed = True
        while changed:
            changed = False
            for t in range(len(w) - 1):
                if key(w[t]) > key(w[t + 1]):
                    exp += self.swap_exponent(w[t], w[t + 1])
                    w[t], w[t + 1] = w[t + 1], w[t]
                    changed = True
        return v_power(exp), self.monomial(Counter(w))

    def multiply_monomials(self, a: PBWMonomial, b: PBWMonomial) -> tuple[LaurentScalar, PBWMonomial]:
        return self.straighten_word(a.word() + b.word())

    def product(self, x: "GradedElement", y: "GradedElement") -> "GradedElement":
        if x.algebra is not self or y.algebra is not self:
            raise UsageError("elements carry different convex orders")
        acc: dict[PBWMonomial, LaurentScalar] = {}
        for ma, ca in x.terms.items():
            for mb, cb in y.terms.items():
                s, m = self.multiply_monomials(ma, mb)
                acc[m] = acc.get(m, ZERO) + ca * cb * s
        return GradedElement(self, acc)

    def element(self, terms: dict[PBWMonomial, LaurentScalar | int]) -> "GradedElement":
        return GradedElement(self, {m: (c if isinstance(c, LaurentScalar) else LaurentScalar(c)) for m, c in terms.items()})

    def generator(self, a: Index) -> "GradedElement":
        return self.element({self.monomial({a: 1}): 1})

    # graded dimensions ------------------------------------------------------

    def series(self, gens: Sequence[Index], max_height: int) -> Counter:
        """PBW monomial counts by ``Y``-degree, up to total height ``max_height``."""
        o = self.order
        acc: Counter = Counter({(0,) * o.W.n: 1})
        for g in gens:
            pg = o.project(g)
            h = sum(pg)
            if h > max_height:
                continue
            nxt: Counter = Counter()
            for deg, cnt in acc.items():
                cur = deg
                while sum(cur) <= max_height:
                    nxt[cur] += cnt
                    cur = tuple(x + y for x, y in zip(cur, pg))
            acc = nxt
        return acc

    def full_generators(self, max_height: int) -> list[Index]:
        """All indices of the full positive set whose projection has height <= max_height."""
        o = self.order
        cov = o.coverage(max_height)
        gens: list[Index] = [Real(k) for k in cov.values()]
        hc = o.rd.height_c
        gens += [Imag(m, i) for m in range(1, max_height // hc + 1) for i in o.rd.finite]
        gens.sort(key=o.key)
        return gens

    def graded_dimension(self, gens: Sequence[Index] | None, degree: Sequence[int], max_height: int | None = None) -> int:
        """Number of PBW monomials over ``gens`` of ``Y``-degree ``degree``."""
        degree = tuple(degree)
        if max_height is None:
            max_height = sum(degree)
        if max_height < sum(degree):
            raise UsageError("height cap below the requested degree")
        if gens is None:
            gens = self.full_generators(max_height)
        return self.series(gens, max_height)[degree]

    def split_sets(self, k: int, max_height: int) -> tuple[list[Index], list[Index]]:
        """``(R_{<beta_k}, R_{>=beta_k})`` restricted to height ``<= max_height``."""
        gens = self.full_generators(max_height)
        pivot = self.order.key(Real(k))
        return [g for g in gens if self.order.key(g) < pivot], [g for g in gens if self.order.key(g) >= pivot]

    def factorization_check(self, k: int, max_height: int) -> list[dict]:
        """Degrees where ``dim U = sum dim U_{<beta_k} * dim U_{>=beta_k}`` fails."""
        full = self.series(self.full_generators(max_height), max_height)
        lo, hi = self.split_sets(k, max_height)
        a = self.series(lo, max_height)
        b = self.series(hi, max_height)
        conv: Counter = Counter()
        for d1, c1 in a.items():
            for d2, c2 in b.items():
                d = tuple(x + y for x, y in zip(d1, d2))
                if sum(d) <= max_height:
                    conv[d] += c1 * c2
        bad = []
        for d in set(full) | set(conv):
            if full[d] != conv[d]:
                bad.append({"degree": d, "full": full[d], "split": conv[d]})
        return bad

    # semi-infinite span --------------------------------------------------------

    def semiinf_generators(self, window: Window) -> tuple[list[Index], list[Index]]:
        """``(E-side, F-side)``: E-generators on the negative side, F-generators on the positive side."""
        part = self.order.semiinf_pbw_index(window)
        return part["minus"], part["plus"]

    def semiinf_series(self, window: Window, degree_bound: int) -> dict[str, Counter]:
        """Counts of E-side monomials (degree ``+pi``) and F-side monomials (degree ``-pi``).

        Truncation: E-side by height ``<= degree_bound``; F-side by height ``<= degree_bound``.
        """
        e_gens, f_gens = self.semiinf_generators(window)
        e = self.series(e_gens, degree_bound)
        f = self.series(f_gens, degree_bound)
        return {"E": e, "F": Counter({tuple(-x for x in d): c for d, c in f.items()})}

    def semiinf_pbw_dimension(self, window: Window, degree: Sequence[int]) -> int:
        """Dimension of the span of ordered monomials ``E...F...`` of total ``Y``-degree ``degree``.

        Finite because every real generator lowers the finite-part height of
        the degree; the number of real factors is bounded by that drop and the
        imaginary factors are then determined up to partitions.
        """
        o = self.order
        degree = tuple(degree)
        e_gens, f_gens = self.semiinf_generators(window)
        gens = [(g, o.project(g)) for g in e_gens] + [(g, tuple(-x for x in o.project(g))) for g in f_gens]
        fin = o.R.finite_part
        budget = -sum(fin(degree))
        if budget < 0:
            return 0
        real = [(g, d) for g, d in gens if any(fin(d))]
        imag = [(g, d) for g, d in gens if not any(fin(d))]
        # real part: bounded by the finite-height budget
        acc: Counter = Counter({((0,) * o.W.n, 0): 1})
        for g, d in real:
            cost = -sum(fin(d))
            if cost <= 0:
                raise InconsistencyError(f"generator {g} does not lower the finite height")
            nxt: Counter = Counter()
            for (deg, used), cnt in acc.items():
                cur, u = deg, used
                while u <= budget:
                    nxt[(cur, u)] += cnt
                    cur = tuple(x + y for x, y in zip(cur, d))
                    u += cost
            acc = nxt
        total = 0
        c = o.rd.c
        for (deg, used), cnt in acc.items():
            if used != budget:
                continue
            rest = tuple(t - s for t, s in zip(degree, deg))
            if any(fin(rest)):
                continue
            mm = -rest[o.rd.i0]
            if mm < 0 or tuple(-mm * x for x in c) != rest:
                continue
            total += cnt * self._imag_partitions(imag, mm)
        return total

    def _imag_partitions(self, imag, mm: int) -> int:
        o = self.order
        ways = [1] + [0] * mm
        for g, d in imag:
            step = -d[o.rd.i0]
            if step <= 0:
                continue
            for t in range(step, mm + 1):
                ways[t] += ways[t - step]
        return ways[mm]

    def semiinf_closure_check(self, window: Window, samples: int = 50) -> list[dict]:
        """Products of same-side generators must straighten back into that side's span."""
        e_gens, f_gens = self.semiinf_generators(window)
        bad = []
        for side, gens in (("E", e_gens), ("F", f_gens)):
            allowed = set(gens)
            pairs = list(product(gens, gens))[:samples]
            for a, b in pairs:
                _, m = self.straighten_word([a, b])
                if any(g not in allowed for g, _ in m.factors):
                    bad.append({"side": side, "a": a, "b": b})
        return bad


@dataclass
class GradedElement:
    algebra: GradedAlgebra
    terms: dict[PBWMonomial, LaurentScalar]

    def __post_init__(self):
        self.terms = {m: c for m, c in self.terms.items() if not c.is_zero()}

    def __mul__(self, other: "GradedElement") -> "GradedElement":
        return self.algebra.product(self, other)

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def degree_set(self) -> set[Vec]:
        return {m.degree(self.algebra.order) for m in self.terms}


# -- twisted exterior algebra ---------------------------------------------------


class ExteriorAlgebra:
    """``Lambda_q`` on generators ``E*_a``: ``E*_a E*_b + E*_b E*_a = 0`` and ``E*_a^2 = 0``.

    Basis elements are subsets written as tuples strictly decreasing in the
    convex order (positions into ``gens`` descending).
    """

    def __init__(self, gens: Sequence[Index], order: ConvexOrder):
        self.order = order
        self.gens = sorted(gens, key=order.key)
        self.pos = {g: t for t, g in enumerate(self.gens)}
        if len(self.pos) != len(self.gens):
            raise ValidationError("repeated generator")

    @property
    def rank(self) -> int:
        return len(self.gens)

    def basis(self, j: int) -> list[tuple[int, ...]]:
        return [tuple(sorted(s, reverse=True)) for s in combinations(range(self.rank), j)]

    def element(self, terms: dict) -> "ExteriorElement":
        return ExteriorElement(self, {k: (c if isinstance(c, LaurentScalar) else LaurentScalar(c)) for k, c in terms.items()})

    def gen(self, a: Index) -> "ExteriorElement":
        return self.element({(self.pos[a],): 1})

    def unit(self) -> "ExteriorElement":
        return self.element({(): 1})

    def top(self) -> "ExteriorElement":
        return self.element({tuple(range(self.rank - 1, -1, -1)): 1})

    @staticmethod
    def _merge(s: tuple[int, ...], t: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
        if set(s) & set(t):
            return None
        seq = list(s) + list(t)
        inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] < seq[j])
        return (-1) ** inv, tuple(sorted(seq, reverse=True))

    def product(self, x: "ExteriorElement", y: "ExteriorElement") -> "ExteriorElement":
        if x.algebra is not self or y.algebra is not self:
            raise UsageError("exterior elements from different windows")
        acc: dict = {}
        for s, cs in x.terms.items():
            for t, ct in y.terms.items():
                got = self._merge(s, t)
                if got is None:
                    continue
                sign, key = got
                acc[key] = acc.get(key, ZERO) + cs * ct * sign
        return ExteriorElement(self, acc)

    def frobenius_pairing(self, x: "ExteriorElement", y: "ExteriorElement") -> LaurentScalar:
        prod_ = self.product(x, y)
        return prod_.terms.get(tuple(range(self.rank - 1, -1, -1)), ZERO)

    def gram_matrix(self, j: int) -> list[list[LaurentScalar]]:
        left = self.basis(j)
        right = self.basis(self.rank - j)
        return [
            [self.frobenius_pairing(self.element({s: 1}), self.element({t: 1})) for t in right]
            for s in left
        ]


@dataclass
class ExteriorElement:
    algebra: ExteriorAlgebra
    terms: dict[tuple[int, ...], LaurentScalar]

    def __post_init__(self):
        self.terms = {k: c for k, c in self.terms.items() if not c.is_zero()}

    def __mul__(self, other):
        return self.algebra.product(self, other)

    def __eq__(self, other):
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms


# -- quadratic dual -----------------------------------------------------------


def window_generators(order: ConvexOrder, m: int) -> list[Index]:
    return order.theta_window(m)["generators"]


def quadratic_dual(order: ConvexOrder, m: int) -> dict:
    """Relations of ``A^!`` for ``A = gr U^+_{theta_{mx}}`` and their comparison with ``Lambda_q``.

    ``J`` is spanned by ``E_b E_a - v^{e} E_a E_b`` for ``a < b`` with
    ``e = <b, a'>``. Its annihilator is spanned by ``E*_a E*_b + v^{e} E*_b E*_a``
    for ``a < b`` together with the squares ``E*_a^2``. Rescaling generators
    multiplies both terms of a binomial by the same factor, so the dual agrees
    with the plain exterior relations only when every ``e`` vanishes.
    """
    alg = GradedAlgebra(order)
    gens = window_generators(order, m)
    ell = len(gens)
    pos = {g: t for t, g in enumerate(gens)}

    def tensor(a, b):
        return (pos[a], pos[b])

    J = []
    perp = []
    exponents = []
    for a, b in combinations(gens, 2):
        e = alg.swap_exponent(b, a)
        J.append({tensor(b, a): ONE, tensor(a, b): -v_power(e)})
        perp.append({tensor(a, b): ONE, tensor(b, a): v_power(e)})
        exponents.append({"a": a, "b": b, "exponent": e})
    for a in gens:
        perp.append({tensor(a, a): ONE})
    # verify orthogonality exactly
    for r in J:
        for q in perp:
            s = ZERO
            for k, c in r.items():
                if k in q:
                    s = s + c * q[k]
            if not s.is_zero():
                raise InconsistencyError("relation annihilator is not orthogonal to the relations")
    if len(J) + len(perp) != ell * ell:
        raise InconsistencyError("relation space and annihilator do not fill A1 (x) A1")
    plain_match = all(e["exponent"] == 0 for e in exponents)
    return {
        "generators": gens,
        "relations": J,
        "dual_relations": perp,
        "dim_J": len(J),
        "dim_J_perp": len(perp),
        "exponents": exponents,
        "matches_plain_exterior_up_to_rescaling": plain_match,
        "matches_v_twisted_exterior": True,
    }


# -- Koszul complexes ------------------------------------------------------------


class QuantumPolynomial:
    """``A`` on ordered generators ``g_1 < ... < g_l`` with ``g_b g_a = v^{q[b][a]} g_a g_b`` (a < b)."""

    def __init__(self, order: ConvexOrder, gens: Sequence[Index]):
        self.order = order
        self.gens = list(gens)
        self.ell = len(gens)
        alg = GradedAlgebra(order)
        self.q = [[alg.swap_exponent(gens[b], gens[a]) if b > a else 0 for a in range(self.ell)] for b in range(self.ell)]
        self.heights = [sum(order.project(g)) for g in gens]

    def right_mult_exponent(self, mono: Sequence[int], i: int) -> int:
        """``M_mono * g_i = v^e M_{mono + e_i}``: ``g_i`` moves left past larger generators."""
        return sum(mono[k] * self.q[k][i] for k in range(i + 1, self.ell))

    def left_mult_exponent(self, mono: Sequence[int], i: int) -> int:
        """``g_i * M_mono = v^e M_{mono + e_i}``: ``g_i`` moves right past smaller generators."""
        return sum(mono[k] * self.q[i][k] for k in range(i))

    # J^perp components per letter content, used to carve out W_s
    def _relation_rows(self, words: list[tuple[int, ...]], spec: Specialization) -> list[list[int]]:
        """Rows of ``V^p (x) J^perp (x) V^r`` restricted to a word set."""
        p, v = spec.p, spec.v
        index = {w: t for t, w in enumerate(words)}
        rows = []
        j = len(words[0]) if words else 0
        seen = set()
        for w in words:
            for t in range(j - 1):
                a, b = w[t], w[t + 1]
                pre, post = w[:t], w[t + 2 :]
                if a == b:
                    row = [0] * len(words)
                    row[index[w]] = 1
                    key = (pre, a, a, post)
                else:
                    lo, hi = min(a, b), max(a, b)
                    e = self.q[hi][lo]
                    key = (pre, lo, hi, post)
                    row = [0] * len(words)
                    row[index[pre + (lo, hi) + post]] = 1
                    row[index[pre + (hi, lo) + post]] = pow(v, e % (p - 1), p) if e >= 0 else pow(pow(v, p - 2, p), -e, p)
                if key in seen:
                    continue
                seen.add(key)
                rows.append(row)
        return rows

    def words(self, content: Sequence[int]) -> list[tuple[int, ...]]:
        letters = [i for i, c in enumerate(content) for _ in range(c)]
        out = set()

        def rec(prefix, remaining):
            if not remaining:
                out.add(tuple(prefix))
                return
            for x in sorted(set(remaining)):
                r = list(remaining)
                r.remove(x)
                rec(prefix + [x], r)

        rec([], letters)
        return sorted(out)

    def koszul_dual_component(self, content: Sequence[int], spec: Specialization) -> tuple[list[tuple[int, ...]], list[list[int]]]:
        """Basis of ``W_s = (A^!_s)^*``: tensors orthogonal to every ``V^p (x) J^perp (x) V^r``."""
        words = self.words(content)
        if sum(content) < 2:
            return words, [[1 if t == u else 0 for t in range(len(words))] for u in range(len(words))]
        rows = self._relation_rows(words, spec)
        return words, nullspace_mod(rows, len(words), spec.p)


def _vpow(v: int, e: int, p: int) -> int:
    return pow(v, e, p) if e >= 0 else pow(pow(v, p - 2, p), -e, p)


def _box(ell: int, upper: int):
    return product(range(upper + 1), repeat=ell)


def _energy(A: QuantumPolynomial, n: Sequence[int]) -> int:
    return sum(x * h for x, h in zip(n, A.heights))


class DualCache:
    """Lazily computed ``W_s`` components for one specialization."""

    def __init__(self, A: QuantumPolynomial, spec: Specialization):
        self.A = A
        self.spec = spec
        self._store: dict = {}

    def __getitem__(self, s):
        s = tuple(s)
        got = self._store.get(s)
        if got is None:
            got = self.A.koszul_dual_component(s, self.spec)
            self._store[s] = got
        return got


def certify_dual_support(A: QuantumPolynomial, duals: DualCache) -> dict:
    """Dimensions of ``W_s`` on the ``{0,1,2}`` box up to total degree ``l + 1``.

    Contents with an entry 2 must give zero and 0/1 contents must give a line.
    Larger contents vanish because ``E*_a^2 = 0`` and every other relation is
    an invertible rewrite of adjacent letters.
    """
    dims = {}
    for s in _box(A.ell, 2):
        if sum(s) > A.ell + 1:
            continue
        _, basis = duals[s]
        dims[s] = len(basis)
        if 2 in s and basis:
            raise InconsistencyError(f"W_s nonzero at s = {s}", data={"dim": len(basis)})
        if 2 not in s and len(basis) != 1:
            raise InconsistencyError(f"W_s has dimension {len(basis)} at s = {s}, expected 1")
    return dims


def _koszul_ranks_at(A: QuantumPolynomial, n: Sequence[int], spec: Specialization, orientation: str, duals: DualCache) -> list[int]:
    """Homology ranks of ``A (x) W`` (or ``W (x) A``) in total multidegree ``n``."""
    p, v = spec.p, spec.v
    top = sum(n)
    # chain groups: (s, basis-vector index) over all contents s <= n
    groups: list[list[tuple[tuple[int, ...], int]]] = []
    for j in range(top + 2):
        grp = []
        for s in product(*(range(x + 1) for x in n)):
            if sum(s) == j:
                words, basis = duals[s]
                grp.extend((s, b) for b in range(len(basis)))
        groups.append(grp)

    def differential(j: int) -> list[list[int]]:
        src, dst = groups[j], groups[j - 1]
        dindex = {key: t for t, key in enumerate(dst)}
        mat = [[0] * len(src) for _ in dst]
        for col, (s, b) in enumerate(src):
            words, basis = duals[s]
            vec = basis[b]
            a_deg = tuple(x - y for x, y in zip(n, s))
            images: dict[tuple[int, ...], list[int]] = {}
            for t, w in enumerate(words):
                c = vec[t]
                if not c:
                    continue
                if orientation == "right":
                    letter, rest = w[0], w[1:]
                    e = A.right_mult_exponent(a_deg, letter)
                else:
                    letter, rest = w[-1], w[:-1]
                    e = A.left_mult_exponent(a_deg, letter)
                s2 = tuple(x - (1 if i == letter else 0) for i, x in enumerate(s))
                words2, _ = duals[s2]
                tgt = images.setdefault(s2, [0] * len(words2))
                tgt[words2.index(rest)] = (tgt[words2.index(rest)] + c * _vpow(v, e, p)) % p
            for s2, image in images.items():
                _, basis2 = duals[s2]
                coeffs = solve_mod(basis2, image, p)
                for b2, x in enumerate(coeffs):
                    if x:
                        mat[dindex[(s2, b2)]][col] = x
        return mat

    ranks = [0] * (top + 2)
    mats = {}
    for j in range(1, top + 1):
        if groups[j] and groups[j - 1]:
            mats[j] = differential(j)
            ranks[j] = rank_mod(mats[j], p)
    for j in range(2, top + 1):
        if j in mats and j - 1 in mats:
            for r in range(len(groups[j - 2])):
                for c in range(len(groups[j])):
                    s = sum(mats[j - 1][r][k] * mats[j][k][c] for k in range(len(groups[j - 1]))) % p
                    if s:
                        raise InconsistencyError("Koszul differential does not square to zero")
    return [len(groups[j]) - ranks[j] - ranks[j + 1] for j in range(top + 1)]


def koszul_homology(order: ConvexOrder, m: int, energy_cap: int, seed: int = 0, orientation: str = "right") -> dict:
    """Homology of the Koszul complex of ``gr U^+_{theta_{mx}}`` per multidegree.

    The algebra is a quantum polynomial ring, fine-graded by ``Z^l``. Ranks are
    computed over prime fields at random values of ``v`` and must agree.
    """
    if orientation not in ("right", "left"):
        raise ValidationError("orientation must be 'right' or 'left'")
    A = QuantumPolynomial(order, window_generators(order, m))
    degrees = [n for n in _box(A.ell, energy_cap) if _energy(A, n) <= energy_cap]

    def compute(spec: Specialization):
        duals = DualCache(A, spec)
        certify_dual_support(A, duals)
        return tuple((n, tuple(_koszul_ranks_at(A, n, spec, orientation, duals))) for n in degrees)

    table, used, _ = generic_evaluate(compute, seed)
    nontrivial = [(n, r) for n, r in table if any(r) and not (sum(n) == 0 and list(r) == [1])]
    return {
        "m": m,
        "ell": A.ell,
        "energy_cap": energy_cap,
        "orientation": orientation,
        "specializations": [s.to_json() for s in used],
        "table": [{"multidegree": list(n), "ranks": list(r)} for n, r in table],
        "koszul": not nontrivial,
    }


def _tor_dual_ranks_at(A: QuantumPolynomial, g: Sequence[int], spec: Specialization, duals: DualCache) -> list[int]:
    """Homology of ``A^* (x)_A K`` in multidegree ``g = s - n``, ``f in (A_n)^*``, ``w in W_s``."""
    p, v = spec.p, spec.v
    ell = A.ell
    groups: list[list[tuple[tuple[int, ...], int]]] = [[] for _ in range(ell + 2)]
    for s in _box(ell, 1):
        n = tuple(x - y for x, y in zip(s, g))
        if min(n) < 0:
            continue
        _, basis = duals[s]
        groups[sum(s)].extend((s, b) for b in range(len(basis)))

    def differential(j: int) -> list[list[int]]:
        src, dst = groups[j], groups[j - 1]
        dindex = {key: t for t, key in enumerate(dst)}
        mat = [[0] * len(src) for _ in dst]
        for col, (s, b) in enumerate(src):
            words, basis = duals[s]
            vec = basis[b]
            n = tuple(x - y for x, y in zip(s, g))
            images: dict = {}
            for t, w in enumerate(words):
                c = vec[t]
                if not c:
                    continue
                letter, rest = w[0], w[1:]
                # (M_n^* . g)(a) = M_n^*(g a): nonzero only on a = M_{n - e_letter}
                if n[letter] == 0:
                    continue
                base = tuple(x - (1 if i == letter else 0) for i, x in enumerate(n))
                e = A.left_mult_exponent(base, letter)
                s2 = tuple(x - (1 if i == letter else 0) for i, x in enumerate(s))
                words2, _ = duals[s2]
                tgt = images.setdefault(s2, [0] * len(words2))
                tgt[words2.index(rest)] = (tgt[words2.index(rest)] + c * _vpow(v, e, p)) % p
            for s2, image in images.items():
                _, basis2 = duals[s2]
                for b2, x in enumerate(solve_mod(basis2, image, p)):
                    if x:
                        mat[dindex[(s2, b2)]][col] = x
        return mat

    ranks = [0] * (ell + 2)
    for j in range(1, ell + 1):
        if groups[j] and groups[j - 1]:
            ranks[j] = rank_mod(differential(j), p)
    return [len(groups[j]) - ranks[j] - ranks[j + 1] for j in range(ell + 1)]


def tor_dual_homology(order: ConvexOrder, m: int, energy_cap: int, seed: int = 0) -> dict:
    """Homology of ``A^* (x)_A K_A``; expected concentrated in degree ``l`` at ``g = (1,...,1)``.

    Multidegrees ``g`` are bounded by ``sum (1 - g_i) * height_i <= energy_cap``.
    """
    A = QuantumPolynomial(order, window_generators(order, m))
    ell = A.ell
    degrees = []
    for defect in _box(ell, energy_cap + 1):
        if _energy(A, defect) <= energy_cap:
            degrees.append(tuple(1 - d for d in defect))
    degrees.sort()

    def compute(spec: Specialization):
        duals = DualCache(A, spec)
        certify_dual_support(A, duals)
        return tuple((g, tuple(_tor_dual_ranks_at(A, g, spec, duals))) for g in degrees)

    table, used, _ = generic_evaluate(compute, seed)
    support = [(g, r) for g, r in table if any(r)]
    concentrated = all(
        list(r) == [int(j == ell) for j in range(ell + 1)] and all(x == 1 for x in g) for g, r in support
    ) and len(support) == 1
    return {
        "m": m,
        "ell": ell,
        "energy_cap": energy_cap,
        "specializations": [s.to_json() for s in used],
        "table": [{"multidegree": list(g), "ranks": list(r)} for g, r in table],
        "concentrated_in_top_degree": concentrated,
    }
