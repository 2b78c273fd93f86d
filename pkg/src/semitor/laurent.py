"""Sparse Laurent polynomials in ``v`` with integer coefficients."""

from __future__ import annotations

from typing import Iterable, Mapping


class LaurentScalar:
    """Element of ``Z[v, v^-1]``. Immutable; zero coefficients are never stored."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] | int = 0):
        if isinstance(terms, int):
            terms = {0: terms}
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentScalar":
        return cls({exponent: coeff})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentScalar(other)
        if not isinstance(other, LaurentScalar):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def _coerce(self, other) -> "LaurentScalar":
        return other if isinstance(other, LaurentScalar) else LaurentScalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._terms)
        for e, c in other._terms:
            acc[e] = acc.get(e, 0) + c
        return LaurentScalar(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentScalar({e: -c for e, c in self._terms})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        acc: dict[int, int] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentScalar(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial() or abs(self._terms[0][1]) != 1:
                raise ZeroDivisionError("only units v^e and -v^e are invertible")
            e, c = self._terms[0]
            return LaurentScalar({-e * -k: c ** (-k)})
        out = LaurentScalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def evaluate(self, v: int, p: int) -> int:
        """Value at ``v`` in ``F_p``."""
        total = 0
        for e, c in self._terms:
            total += c * pow(v, e, p)
        return total % p

    def __repr__(self):
        return f"LaurentScalar({dict(self._terms)})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            mono = "" if e == 0 else ("v" if e == 1 else f"v^{e}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {str(e): c for e, c in self._terms}


ZERO = LaurentScalar(0)
ONE = LaurentScalar(1)


def v_power(e: int) -> LaurentScalar:
    return LaurentScalar.monomial(e)
