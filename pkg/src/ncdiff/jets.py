"""Second-order jets in one and two variables.

The collection (value, first, second derivatives) of a function at a
point transforms under a change of variables by the second-order chain
rule; unlike the first-order case the second derivatives pick up a
contribution of the first.  In one variable the rule compresses into
multiplication by an upper-triangular 2x2 transfer matrix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

Rat = Fraction


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# -- exact polynomials in two variables (used to build jets) -------------


@dataclass(frozen=True)
class Poly2:
    """Polynomial with rational coefficients in two named variables."""

    coeffs: tuple[tuple[tuple[int, int], Fraction], ...]

    @staticmethod
    def of(coeffs: Mapping[tuple[int, int], Union[int, Fraction]]) -> Poly2:
        acc = {k: _rat(v) for k, v in coeffs.items() if v != 0}
        return Poly2(tuple(sorted(acc.items())))

    @staticmethod
    def const(c) -> Poly2:
        return Poly2.of({(0, 0): _rat(c)})

    @staticmethod
    def var(index: int) -> Poly2:
        return Poly2.of({(1, 0) if index == 0 else (0, 1): Fraction(1)})

    def __add__(self, other: Poly2) -> Poly2:
        acc = dict(self.coeffs)
        for k, v in other.coeffs:
            acc[k] = acc.get(k, Fraction(0)) + v
        return Poly2.of(acc)

    def __sub__(self, other: Poly2) -> Poly2:
        return self + other.scale(-1)

    def __mul__(self, other: Poly2) -> Poly2:
        acc: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.coeffs:
            for (i2, j2), c2 in other.coeffs:
                k = (i1 + i2, j1 + j2)
                acc[k] = acc.get(k, Fraction(0)) + c1 * c2
        return Poly2.of(acc)

    def scale(self, c) -> Poly2:
        c = _rat(c)
        return Poly2.of({k: v * c for k, v in self.coeffs})

    def pow(self, n: int) -> Poly2:
        out = Poly2.const(1)
        for _ in range(n):
            out = out * self
        return out

    def diff(self, index: int) -> Poly2:
        acc: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self.coeffs:
            if index == 0 and i > 0:
                acc[(i - 1, j)] = acc.get((i - 1, j), Fraction(0)) + c * i
            elif index == 1 and j > 0:
                acc[(i, j - 1)] = acc.get((i, j - 1), Fraction(0)) + c * j
        return Poly2.of(acc)

    def eval(self, a, b) -> Fraction:
        a, b = _rat(a), _rat(b)
        total = Fraction(0)
        for (i, j), c in self.coeffs:
            total += c * a**i * b**j
        return total


_POLY_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\*\*|[-+*^()]))")


def parse_poly2(text: str, vars: tuple[str, str]) -> Poly2:
    """Parse ``+ - * ^`` polynomial syntax over two named variables."""
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad polynomial syntax near column {pos + 1}")
        tokens.append(m.group(0).strip())
        pos = m.end()
    tokens.append("<end>")
    i = 0

    def peek() -> str:
        return tokens[i]

    def take() -> str:
        nonlocal i
        t = tokens[i]
        i += 1
        return t

    def atom() -> Poly2:
        t = take()
        if t == "(":
            e = expr()
            if take() != ")":
                raise ValueError("expected ')'")
        elif t.isdigit():
            e = Poly2.const(int(t))
        elif t == vars[0]:
            e = Poly2.var(0)
        elif t == vars[1]:
            e = Poly2.var(1)
        elif t == "-":
            return atom().scale(-1)
        else:
            raise ValueError(f"unexpected token {t!r}")
        while peek() in ("^", "**"):
            take()
            n = take()
            if not n.isdigit():
                raise ValueError("exponent must be a nonnegative integer")
            e = e.pow(int(n))
        return e

    def product() -> Poly2:
        e = atom()
        while peek() == "*":
            take()
            e = e * atom()
        return e

    def expr() -> Poly2:
        e = product()
        while peek() in ("+", "-"):
            if take() == "+":
                e = e + product()
            else:
                e = e - product()
        return e

    out = expr()
    if take() != "<end>":
        raise ValueError("trailing input after polynomial")
    return out


# -- jets -----------------------------------------------------------------


@dataclass(frozen=True)
class Jet2:
    """Value, first and second derivatives at a point; the mixed second
    derivative is stored once."""

    f: Fraction
    fx: Fraction
    fy: Fraction
    fxx: Fraction
    fxy: Fraction
    fyy: Fraction

    @staticmethod
    def of(f, fx, fy, fxx, fxy, fyy) -> Jet2:
        return Jet2(_rat(f), _rat(fx), _rat(fy), _rat(fxx), _rat(fxy), _rat(fyy))

    @staticmethod
    def of_poly(p: Poly2, at: tuple) -> Jet2:
        a, b = at
        px, py = p.diff(0), p.diff(1)
        return Jet2(
            p.eval(a, b),
            px.eval(a, b),
            py.eval(a, b),
            px.diff(0).eval(a, b),
            px.diff(1).eval(a, b),
            py.diff(1).eval(a, b),
        )


@dataclass(frozen=True)
class ChangeOfVars2:
    """2-jets of the substituted coordinates x(u,v), y(u,v) at the
    working point."""

    xj: Jet2
    yj: Jet2

    def is_linear(self) -> bool:
        return all(
            d == 0
            for d in (self.xj.fxx, self.xj.fxy, self.xj.fyy, self.yj.fxx, self.yj.fxy, self.yj.fyy)
        )


def transform_jet2(fj: Jet2, cv: ChangeOfVars2) -> Jet2:
    """Second-order chain rule in two variables.

    The new second derivatives carry both the quadratic first-derivative
    part of the substitution and a term proportional to the old first
    derivatives times the substitution's second derivatives.
    """
    x, y = cv.xj, cv.yj
    fu = fj.fx * x.fx + fj.fy * y.fx
    fv = fj.fx * x.fy + fj.fy * y.fy
    fuu = (
        fj.fxx * x.fx**2
        + fj.fyy * y.fx**2
        + 2 * fj.fxy * x.fx * y.fx
        + fj.fx * x.fxx
        + fj.fy * y.fxx
    )
    fvv = (
        fj.fxx * x.fy**2
        + fj.fyy * y.fy**2
        + 2 * fj.fxy * x.fy * y.fy
        + fj.fx * x.fyy
        + fj.fy * y.fyy
    )
    fuv = (
        fj.fxx * x.fx * x.fy
        + fj.fyy * y.fx * y.fy
        + fj.fxy * (x.fx * y.fy + x.fy * y.fx)
        + fj.fx * x.fxy
        + fj.fy * y.fxy
    )
    return Jet2(fj.f, fu, fv, fuu, fuv, fvv)


@dataclass(frozen=True)
class Jet1:
    d1: Fraction
    d2: Fraction

    @staticmethod
    def of(d1, d2) -> Jet1:
        return Jet1(_rat(d1), _rat(d2))


def chain2_1d(phi: Jet1, u: Jet1) -> Jet1:
    """One-variable second-order chain rule."""
    return Jet1(phi.d1 * u.d1, phi.d2 * u.d1**2 + phi.d1 * u.d2)


@dataclass(frozen=True)
class TransferMatrix1:
    """Upper-triangular matrix carrying a 1D change of variable.

    Acting on the row vector (first, second derivative) from the right
    it performs the second-order chain rule in one multiplication.
    """

    a: Fraction  # du/dv
    b: Fraction  # d2u/dv2

    @staticmethod
    def of_jet(u: Jet1) -> TransferMatrix1:
        return TransferMatrix1(u.d1, u.d2)

    def rows(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        return ((self.a, self.b), (Fraction(0), self.a**2))

    def apply(self, phi: Jet1) -> Jet1:
        return Jet1(phi.d1 * self.a, phi.d1 * self.b + phi.d2 * self.a**2)


def transfer_compose(m1: TransferMatrix1, m2: TransferMatrix1) -> TransferMatrix1:
    """Matrix product; the composite stays upper triangular with the
    squared top-left entry in the corner."""
    a = m1.a * m2.a
    b = m1.a * m2.b + m1.b * m2.a**2
    return TransferMatrix1(a, b)


_BASIS = ("du2", "dv2", "dudv", "d2u", "d2v")


def _expand_second_differential(fj: Jet2, cv: ChangeOfVars2, include_first_order: bool) -> dict[str, Fraction]:
    """Substitute the coordinate differentials into
    fxx dx^2 + fyy dy^2 + 2 fxy dx dy [+ fx d2x + fy d2y]
    and collect over the basis monomials in the new variables."""
    x, y = cv.xj, cv.yj
    out = {k: Fraction(0) for k in _BASIS}

    def add_square(coef: Fraction, au: Fraction, av: Fraction) -> None:
        out["du2"] += coef * au * au
        out["dv2"] += coef * av * av
        out["dudv"] += coef * 2 * au * av

    def add_cross(coef: Fraction, au: Fraction, av: Fraction, bu: Fraction, bv: Fraction) -> None:
        out["du2"] += coef * au * bu
        out["dv2"] += coef * av * bv
        out["dudv"] += coef * (au * bv + av * bu)

    add_square(fj.fxx, x.fx, x.fy)
    add_square(fj.fyy, y.fx, y.fy)
    add_cross(2 * fj.fxy, x.fx, x.fy, y.fx, y.fy)
    if include_first_order:
        for coef, j in ((fj.fx, x), (fj.fy, y)):
            out["du2"] += coef * j.fxx
            out["dv2"] += coef * j.fyy
            out["dudv"] += coef * 2 * j.fxy
            out["d2u"] += coef * j.fx
            out["d2v"] += coef * j.fy
    return out


def delta2_invariance_check(
    fj: Jet2, cv: ChangeOfVars2, *, drop_first_derivative_terms: bool = False
) -> bool:
    """Check that the substituted second differential reproduces the
    transformed jet's coefficients.

    With ``drop_first_derivative_terms`` the fx d2x + fy d2y part of the
    expansion is omitted and only the second-derivative coefficients are
    compared; that truncation survives linear changes of variables only.
    """
    got = _expand_second_differential(fj, cv, include_first_order=not drop_first_derivative_terms)
    want = transform_jet2(fj, cv)
    expected = {
        "du2": want.fxx,
        "dv2": want.fyy,
        "dudv": 2 * want.fxy,
        "d2u": want.fx,
        "d2v": want.fy,
    }
    keys = ("du2", "dv2", "dudv") if drop_first_derivative_terms else _BASIS
    return all(got[k] == expected[k] for k in keys)
