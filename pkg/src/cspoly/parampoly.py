"""Multivariate polynomials with rational coefficients in named parameters.

Used for the parametric table rows (entries such as ``a^2-a-1`` or
``(3b-2)a-b-9``) and for closed-form determinant identities.
"""

from __future__ import annotations

import ast
from fractions import Fraction


class ParamPoly:
    """Immutable map from exponent tuples (over ``variables``) to Fractions."""

    __slots__ = ("variables", "terms")

    def __init__(self, terms=None, variables=("a",)):
        self.variables = tuple(variables)
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = clean.get(tuple(mono), 0) + c
        self.terms = {m: c for m, c in clean.items() if c}

    # ------------------------------------------------------------ building
    @classmethod
    def const(cls, c, variables=("a",)):
        return cls({(0,) * len(variables): c}, variables)

    @classmethod
    def var(cls, name, variables=("a",)):
        mono = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return cls({mono: 1}, variables)

    @classmethod
    def parse(cls, text, variables=("a",)):
        """Parse ``3a^2-a+4``, ``(3b-2)a-b-9``, ``2*c1^3*c2`` and similar."""
        src = _insert_implicit_mul(text.replace("^", "**").replace("−", "-"), variables)
        tree = ast.parse(src, mode="eval")
        return _build(tree.body, tuple(variables))

    # ------------------------------------------------------------ algebra
    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            if other.variables != self.variables:
                raise ValueError("variable sets differ")
            return other
        return ParamPoly.const(other, self.variables)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ParamPoly(out, self.variables)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({m: -c for m, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return ParamPoly(out, self.variables)

    __rmul__ = __mul__

    def __pow__(self, e):
        out = ParamPoly.const(1, self.variables)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, ParamPoly):
            other = ParamPoly.const(other, self.variables) if isinstance(other, (int, Fraction)) else None
            if other is None:
                return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # ------------------------------------------------------------ queries
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def used_variables(self) -> set:
        return {v for m in self.terms for v, e in zip(self.variables, m) if e}

    def coefficient(self, mono) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def __call__(self, **values):
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in zip(self.variables, m):
                if e:
                    t *= Fraction(values[v]) ** e
            total += t
        return total

    def evaluate_int(self, **values) -> int:
        v = self(**values)
        if v.denominator != 1:
            raise ValueError(f"non-integral value {v}")
        return int(v)

    def substitute(self, **images):
        """Replace variables by ParamPolys over the same variable tuple."""
        out = ParamPoly({}, self.variables)
        for m, c in self.terms.items():
            t = ParamPoly.const(c, self.variables)
            for v, e in zip(self.variables, m):
                if e:
                    base = images.get(v, ParamPoly.var(v, self.variables))
                    t = t * base**e
            out = out + t
        return out

    # ------------------------------------------------------------ text
    def __str__(self):
        if not self.terms:
            return "0"
        order = sorted(self.terms, key=lambda m: (-sum(m), tuple(-e for e in m)))
        parts = []
        for m in order:
            c = self.terms[m]
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip(self.variables, m) if e
            )
            mag = abs(c)
            if mono:
                coef = "" if mag == 1 else f"{_fmt(mag)}*"
                body = coef + mono
            else:
                body = _fmt(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __repr__(self):
        return f"ParamPoly({self})"


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _tokens(s: str, variables):
    names = sorted(variables, key=len, reverse=True)
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            yield "num", s[i:j]
            i = j
        elif ch == "*" and s.startswith("**", i):
            yield "op", "**"
            i += 2
        elif ch in "+-*/()":
            yield ("op" if ch not in "()" else ch), ch
            i += 1
        else:
            for name in names:
                if s.startswith(name, i):
                    yield "name", name
                    i += len(name)
                    break
            else:
                raise ValueError(f"unexpected text at {s[i:]!r}")


def _insert_implicit_mul(s: str, variables) -> str:
    """Make juxtaposition explicit: ``3ab`` -> ``3*a*b``, ``(b-2)a`` -> ``(b-2)*a``."""
    out = []
    prev = None
    for kind, text in _tokens(s, variables):
        if prev in ("num", "name", ")") and kind in ("num", "name", "("):
            out.append("*")
        out.append(text)
        prev = kind
    return "".join(out)


def _build(node, variables):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return ParamPoly.const(node.value, variables)
    if isinstance(node, ast.Name):
        return ParamPoly.var(node.id, variables)
    if isinstance(node, ast.UnaryOp):
        inner = _build(node.operand, variables)
        if isinstance(node.op, ast.USub):
            return -inner
        if isinstance(node.op, ast.UAdd):
            return inner
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = node.right
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int) and exp.value >= 0):
                raise ValueError("exponents must be non-negative integer literals")
            return _build(node.left, variables) ** exp.value
        left = _build(node.left, variables)
        right = _build(node.right, variables)
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        if isinstance(node.op, ast.Mult):
            return left * right
        if isinstance(node.op, ast.Div):
            if not right.is_constant():
                raise ValueError("division only by constants")
            return left * ParamPoly.const(1 / right.coefficient((0,) * len(variables)), variables)
    raise ValueError(f"unsupported expression: {ast.dump(node)}")
