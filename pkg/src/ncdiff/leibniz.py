"""Leibniz forms of higher order and their associative product.

A form of order n is a finite sum of canonical monomials

    a · d^{k1}(g1) ⊙ ... ⊙ d^{kr}(gr),        k1 + ... + kr = n,

with the algebra coefficient kept at the far left.  The ⊙ product is
defined by the recursion

    f ⊙ s            = f s
    d(f) ⊙ s         = d(f s) - f d(s)
    d^k(f) ⊙ s       = d(d^{k-1}(f) ⊙ s) - d^{k-1}(f) ⊙ d(s)    (k >= 2)

extended by associativity and bilinearity; d raises the order by one
and is a (non-graded) derivation for ⊙.  Interior coefficients are
eliminated eagerly through d(f) ⊙ (b·N) = d(fb) ⊙ N - f·(d(b) ⊙ N),
which follows from the rules above, so equality of normal forms is
decidable monomial by monomial.

The embedding realizes a form of order n inside level n of the frame
tower; it is the single source of truth against which the generator
tables are verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .algebra import AlgebraMismatchError, AlgebraSpec, AlgElem
from .frame import (
    FrameElem,
    SubsetIndex,
    delta_iter,
    frame_delta,
    lam,
    lift_to,
    rho,
)
from .scalars import Scalar

Factor = tuple[int, AlgElem]


@dataclass(frozen=True)
class LeibnizMonomial:
    coeff: AlgElem
    factors: tuple[Factor, ...]

    @property
    def order(self) -> int:
        return sum(k for k, _ in self.factors)

    @property
    def composition(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.factors)

    def __str__(self) -> str:
        return _monomial_str(self)


@dataclass(frozen=True)
class LeibnizForm:
    spec: AlgebraSpec
    order: int
    terms: tuple[LeibnizMonomial, ...]

    @staticmethod
    def of(spec: AlgebraSpec, order: int, terms: Iterable[LeibnizMonomial]) -> LeibnizForm:
        """Normalize: zero or unit-multiple differentiated elements kill a
        monomial, scalar content moves into the coefficient, and equal
        factor lists merge."""
        acc: dict[tuple, tuple[AlgElem, tuple[Factor, ...]]] = {}
        for mono in terms:
            if mono.order != order:
                raise ValueError("inhomogeneous sum of monomials")
            coeff = mono.coeff
            factors: list[Factor] = []
            dead = False
            for k, g in mono.factors:
                if k < 1:
                    raise ValueError("differential powers must be positive")
                if g.unit_multiple() is not None:
                    # d^k of a constant vanishes
                    dead = True
                    break
                c, prim = g.content()
                coeff = coeff.scale(c)
                factors.append((k, prim))
            if dead or coeff.is_zero():
                continue
            key = tuple((k, g.sort_key()) for k, g in factors)
            if key in acc:
                prev_coeff, prev_factors = acc[key]
                total = prev_coeff.add(coeff)
                if total.is_zero():
                    del acc[key]
                else:
                    acc[key] = (total, prev_factors)
            else:
                acc[key] = (coeff, tuple(factors))
        ordered = tuple(
            LeibnizMonomial(acc[k][0], acc[k][1]) for k in sorted(acc.keys())
        )
        return LeibnizForm(spec, order, ordered)

    @staticmethod
    def from_alg(a: AlgElem) -> LeibnizForm:
        return LeibnizForm.of(a.spec, 0, [LeibnizMonomial(a, ())])

    @staticmethod
    def monomial(coeff: AlgElem, factors: Sequence[Factor]) -> LeibnizForm:
        order = sum(k for k, _ in factors)
        return LeibnizForm.of(coeff.spec, order, [LeibnizMonomial(coeff, tuple(factors))])

    @staticmethod
    def zero(spec: AlgebraSpec, order: int) -> LeibnizForm:
        return LeibnizForm.of(spec, order, [])

    def add(self, other: LeibnizForm) -> LeibnizForm:
        if self.spec != other.spec:
            raise AlgebraMismatchError("forms over different algebras")
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")
        return LeibnizForm.of(self.spec, self.order, self.terms + other.terms)

    def sub(self, other: LeibnizForm) -> LeibnizForm:
        return self.add(other.scale(Scalar.of(-1)))

    def scale(self, c: Union[Scalar, int]) -> LeibnizForm:
        c = c if isinstance(c, Scalar) else Scalar.of(c)
        return LeibnizForm.of(
            self.spec,
            self.order,
            [LeibnizMonomial(m.coeff.scale(c), m.factors) for m in self.terms],
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: LeibnizForm) -> LeibnizForm:
        return self.add(other)

    def __sub__(self, other: LeibnizForm) -> LeibnizForm:
        return self.sub(other)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(m) for m in self.terms)


def _monomial_str(mono: LeibnizMonomial) -> str:
    factors = "@".join(
        (f"d({g})" if k == 1 else f"d{k}({g})") for k, g in mono.factors
    )
    c = mono.coeff.unit_multiple()
    if c is not None and c.is_one() and factors:
        return factors
    coeff = str(mono.coeff)
    if " + " in coeff or " - " in coeff:
        coeff = f"({coeff})"
    return f"{coeff}*{factors}" if factors else coeff


def generator_form_str(mono: LeibnizMonomial) -> str:
    """Generator-flavoured rendering, e.g. f·d{1,0}(g)."""
    parts = []
    c = mono.coeff.unit_multiple()
    if c is None or not c.is_one():
        parts.append(str(mono.coeff))
    for k, g in mono.factors:
        levels = "{" + ",".join(str(s) for s in range(k - 1, -1, -1)) + "}"
        parts.append(f"d{levels}({g})")
    return "·".join(parts)


# -- module structure and differential ----------------------------------


def module_mul(a: AlgElem, w: LeibnizForm) -> LeibnizForm:
    """Left action of the base algebra: multiply every coefficient."""
    if a.spec != w.spec:
        raise AlgebraMismatchError("coefficient from a different algebra")
    return LeibnizForm.of(
        w.spec, w.order, [LeibnizMonomial(a.mul(m.coeff), m.factors) for m in w.terms]
    )


def symbolic_delta(w: LeibnizForm) -> LeibnizForm:
    """Order-raising derivation.

    On a monomial a·N it contributes d(a) ⊙ N plus, for every factor,
    the monomial with that factor's power raised by one.
    """
    out: list[LeibnizMonomial] = []
    unit = w.spec.unit()
    for mono in w.terms:
        out.append(LeibnizMonomial(unit, ((1, mono.coeff),) + mono.factors))
        for i, (k, g) in enumerate(mono.factors):
            raised = mono.factors[:i] + ((k + 1, g),) + mono.factors[i + 1 :]
            out.append(LeibnizMonomial(mono.coeff, raised))
    return LeibnizForm.of(w.spec, w.order + 1, out)


# -- the ⊙ product -------------------------------------------------------


def odot(u: LeibnizForm, v: LeibnizForm) -> LeibnizForm:
    """Associative product of Leibniz forms; bilinear over scalars."""
    if u.spec != v.spec:
        raise AlgebraMismatchError("forms over different algebras")
    out = LeibnizForm.zero(u.spec, u.order + v.order)
    for mu in u.terms:
        for mv in v.terms:
            out = out + _odot_mono(mu, mv)
    return out


def _odot_mono(mu: LeibnizMonomial, mv: LeibnizMonomial) -> LeibnizForm:
    if not mu.factors:
        return module_mul(mu.coeff, _as_form(mv))
    acc = _as_form(mv)
    for k, g in reversed(mu.factors):
        acc = _odot_power(k, g, acc)
    return module_mul(mu.coeff, acc)


def _odot_power(k: int, g: AlgElem, w: LeibnizForm) -> LeibnizForm:
    out = LeibnizForm.zero(w.spec, w.order + k)
    for mono in w.terms:
        out = out + _odot_power_mono(k, g, mono)
    return out


@lru_cache(maxsize=None)
def _odot_power_mono(k: int, g: AlgElem, mono: LeibnizMonomial) -> LeibnizForm:
    spec = g.spec
    if k == 1:
        b, rest = mono.coeff, mono.factors
        # d(g) ⊙ b·N = d(gb) ⊙ N - g·(d(b) ⊙ N); a unit-multiple b makes
        # the subtracted monomial vanish during normalization.
        first = LeibnizMonomial(spec.unit(), ((1, g.mul(b)),) + rest)
        second = LeibnizMonomial(g.neg(), ((1, b),) + rest)
        return LeibnizForm.of(spec, mono.order + 1, [first, second])
    lower = _odot_power_mono(k - 1, g, mono)
    return symbolic_delta(lower) - _odot_power(k - 1, g, symbolic_delta(_as_form(mono)))


def _as_form(mono: LeibnizMonomial) -> LeibnizForm:
    return LeibnizForm.of(mono.coeff.spec, mono.order, [mono])


# -- embedding into the frame tower --------------------------------------


def embed(w: LeibnizForm) -> FrameElem:
    """Realize a form of order n inside level n of the frame tower."""
    out = FrameElem.zero(w.spec, w.order)
    for mono in w.terms:
        out = out + _embed_mono(mono)
    return out


@lru_cache(maxsize=None)
def _embed_mono(mono: LeibnizMonomial) -> FrameElem:
    n = mono.order
    if not mono.factors:
        return FrameElem.from_alg(mono.coeff)
    if len(mono.factors) == 1:
        k, g = mono.factors[0]
        return lift_to(mono.coeff, n).mul(delta_iter(g, k))
    (k, g), rest = mono.factors[0], mono.factors[1:]
    sigma = LeibnizForm.monomial(mono.coeff.spec.unit(), rest)
    return lift_to(mono.coeff, n).mul(_embed_power(k, g, sigma))


@lru_cache(maxsize=None)
def _embed_power(k: int, g: AlgElem, sigma: LeibnizForm) -> FrameElem:
    n = k + sigma.order
    if k == 1:
        return frame_delta(embed(module_mul(g, sigma))) - lift_to(g, n).mul(
            frame_delta(embed(sigma))
        )
    return frame_delta(_embed_power(k - 1, g, sigma)) - _embed_power(
        k - 1, g, symbolic_delta(sigma)
    )


# -- monomial types -------------------------------------------------------


def enumerate_types(n: int) -> list[tuple[int, ...]]:
    """All compositions of n, lexicographically descending.

    Order n has exactly 2**(n-1) of them; each one is the shape of a
    canonical monomial.
    """
    if n < 1:
        raise ValueError("order must be at least 1")

    def go(m: int) -> list[tuple[int, ...]]:
        if m == 0:
            return [()]
        out = []
        for first in range(m, 0, -1):
            out.extend((first,) + tail for tail in go(m - first))
        return out

    return go(n)


# -- generator monomials ---------------------------------------------------


def generator_monomial_eval(
    factors: Sequence[tuple[SubsetIndex, AlgElem]], n: int
) -> FrameElem:
    """Evaluate a product of generators with the lifts left implicit.

    Each level is owned by at most one factor.  Scanning levels upward,
    the owner is differentiated while factors to its left are padded on
    the right (rho) and factors to its right on the left (lam); levels
    owned by nobody pad every factor on the right.  This is forced by
    the product rule, under which differentiating a product at level s
    right-pads everything left of the differentiated factor and
    left-pads everything right of it.
    """
    if not factors:
        raise ValueError("empty generator monomial")
    owners: dict[int, int] = {}
    for pos, (index, _) in enumerate(factors):
        if index.p != n:
            raise ValueError(f"index {index} is not at level {n}")
        for s in index.members:
            if s in owners:
                raise ValueError(f"level {s} owned by two factors")
            owners[s] = pos
    built: list[FrameElem] = []
    for pos, (index, g) in enumerate(factors):
        elem = FrameElem.from_alg(g)
        for s in range(n):
            owner = owners.get(s)
            if owner == pos:
                elem = frame_delta(elem)
            elif owner is None or pos < owner:
                elem = rho(elem)
            else:
                elem = lam(elem)
        built.append(elem)
    out = built[0]
    for elem in built[1:]:
        out = out.mul(elem)
    return out
