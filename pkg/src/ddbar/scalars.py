"""Exact coefficient arithmetic: Gaussian rationals and truncated parameter polynomials.

Everything here is immutable and exact; no floats anywhere.  Polynomials live
in a ring with variables t_1..t_r and their formal conjugates tbar_1..tbar_r,
truncated by total degree.
"""

from __future__ import annotations

import re
from fractions import Fraction


class GaussianRational:
    """An element of Q(i), stored as a pair of Fractions."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self):
        """|z|^2 as a Fraction (exact, nonnegative)."""
        return self.re * self.re + self.im * self.im

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def is_real(self):
        return self.im == 0

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return "%s*i" % self.im
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        imtxt = "i" if mag == 1 else "%s*i" % mag
        return "%s%s%s" % (self.re, sign, imtxt)

    def __repr__(self):
        return "GaussianRational(%r, %r)" % (str(self.re), str(self.im))

    def to_json(self):
        return {"re": str(self.re), "im": str(self.im)}


QI_ZERO = GaussianRational(0)
QI_ONE = GaussianRational(1)
QI_I = GaussianRational(0, 1)


def parse_rational(text):
    """Parse 'a/b' or 'a' into a Fraction."""
    return Fraction(str(text).strip())


_GAUSS_RE = re.compile(
    r"^\s*(?P<re>[+-]?\d+(?:/\d+)?)?\s*"
    r"(?P<im>(?:[+-]\s*)?(?:\d+(?:/\d+)?\s*\*\s*)?i)?\s*$"
)


def parse_gaussian(value):
    """Parse a Gaussian rational from JSON ({"re","im"}), 'a/b', or 'a/b+c/d*i'."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, dict):
        return GaussianRational(
            parse_rational(value.get("re", 0)), parse_rational(value.get("im", 0))
        )
    if isinstance(value, int):
        return GaussianRational(value)
    text = str(value).strip()
    m = _GAUSS_RE.match(text)
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ValueError("cannot parse Gaussian rational: %r" % text)
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_txt = m.group("im")
    if im_txt is None:
        return GaussianRational(re_part)
    im_txt = im_txt.replace(" ", "")
    sign = 1
    if im_txt.startswith("+"):
        im_txt = im_txt[1:]
    elif im_txt.startswith("-"):
        sign = -1
        im_txt = im_txt[1:]
    if im_txt == "i":
        im_part = Fraction(1)
    else:
        im_part = Fraction(im_txt[: im_txt.index("*")])
    return GaussianRational(re_part, sign * im_part)


class PolyRing:
    """Ring of polynomials in t_1..t_r, tbar_1..tbar_r truncated by total degree."""

    def __init__(self, params, order=10):
        self.params = tuple(params)
        self.r = len(self.params)
        self.order = int(order)
        if self.order < 0:
            raise ValueError("truncation order must be nonnegative")
        self.names = self.params + tuple(p + "bar" for p in self.params)
        self._index = {name: k for k, name in enumerate(self.names)}
        self._zero_exp = (0,) * (2 * self.r)

    def zero(self):
        return ParamPoly(self, {})

    def one(self):
        return self.const(QI_ONE)

    def const(self, c):
        c = parse_gaussian(c) if not isinstance(c, GaussianRational) else c
        if not c:
            return ParamPoly(self, {})
        return ParamPoly(self, {self._zero_exp: c})

    def var(self, name):
        if name not in self._index:
            raise KeyError("unknown ring variable: %s" % name)
        exp = [0] * (2 * self.r)
        exp[self._index[name]] = 1
        return ParamPoly(self, {tuple(exp): QI_ONE})

    def monomial(self, exponents, coeff=QI_ONE):
        """Monomial from a {name: power} map."""
        coeff = parse_gaussian(coeff)
        exp = [0] * (2 * self.r)
        for name, k in exponents.items():
            if name not in self._index:
                raise KeyError("unknown ring variable: %s" % name)
            exp[self._index[name]] += int(k)
        if sum(exp) > self.order or not coeff:
            return self.zero()
        return ParamPoly(self, {tuple(exp): coeff})

    def coerce(self, value):
        if isinstance(value, ParamPoly):
            if value.ring is not self:
                raise ValueError("ParamPoly from a different ring")
            return value
        return self.const(parse_gaussian(value) if not isinstance(value, GaussianRational) else value)

    def with_order(self, order):
        return PolyRing(self.params, order)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.params == other.params
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.params, self.order))

    def __repr__(self):
        return "PolyRing(%r, order=%d)" % (list(self.params), self.order)


class ParamPoly:
    """Sparse truncated polynomial; terms map exponent tuples to GaussianRationals."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", {e: c for e, c in terms.items() if c})

    def __setattr__(self, name, value):
        raise AttributeError("ParamPoly is immutable")

    def _binop_terms(self, other, sign):
        o = self.ring.coerce(other)
        terms = dict(self.terms)
        for e, c in o.terms.items():
            c = c if sign > 0 else -c
            s = terms.get(e, QI_ZERO) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return ParamPoly(self.ring, terms)

    def __add__(self, other):
        if not isinstance(other, (ParamPoly, GaussianRational, int, Fraction)):
            return NotImplemented
        return self._binop_terms(other, +1)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (ParamPoly, GaussianRational, int, Fraction)):
            return NotImplemented
        return self._binop_terms(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return ParamPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, (ParamPoly, GaussianRational, int, Fraction)):
            return NotImplemented
        o = self.ring.coerce(other)
        order = self.ring.order
        out = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in o.terms.items():
                if d1 + sum(e2) > order:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, QI_ZERO) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return ParamPoly(self.ring, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            other = self.ring.coerce(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def __bool__(self):
        return bool(self.terms)

    def degree(self):
        """Total degree, or -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, k):
        return ParamPoly(self.ring, {e: c for e, c in self.terms.items() if sum(e) == k})

    def conjugate(self):
        """Swap t_i <-> tbar_i and conjugate coefficients; an involution."""
        r = self.ring.r
        out = {}
        for e, c in self.terms.items():
            out[e[r:] + e[:r]] = c.conjugate()
        return ParamPoly(self.ring, out)

    def eval(self, point):
        """Exact substitution; `point` assigns every parameter, bars auto-conjugate."""
        vals = []
        for p in self.ring.params:
            if p not in point:
                raise KeyError("missing assignment for parameter %r" % p)
            vals.append(parse_gaussian(point[p]))
        vals.extend(v.conjugate() for v in vals[: self.ring.r])
        total = QI_ZERO
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                for _ in range(k):
                    term = term * v
            total = total + term
        return total

    def constant_term(self):
        return self.terms.get(self.ring._zero_exp, QI_ZERO)

    def _term_str(self, e, c):
        factors = []
        for name, k in zip(self.ring.names, e):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append("%s^%d" % (name, k))
        if not factors:
            return str(c)
        body = "*".join(factors)
        if c == QI_ONE:
            return body
        if c == -QI_ONE:
            return "-" + body
        ctxt = str(c)
        if "+" in ctxt[1:] or "-" in ctxt[1:]:
            ctxt = "(%s)" % ctxt
        return "%s*%s" % (ctxt, body)

    def __str__(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (sum(e), e))
        parts = []
        for e in keys:
            s = self._term_str(e, self.terms[e])
            if parts and not s.startswith("-"):
                parts.append("+" + s)
            else:
                parts.append(s)
        return "".join(parts)

    def __repr__(self):
        return "ParamPoly(%s)" % self

    def to_json(self):
        out = []
        for e in sorted(self.terms, key=lambda e: (sum(e), e)):
            exps = {n: k for n, k in zip(self.ring.names, e) if k}
            out.append({"coeff": self.terms[e].to_json(), "exponents": exps})
        return out


def poly_from_json(ring, data):
    p = ring.zero()
    for term in data:
        p = p + ring.monomial(term.get("exponents", {}), parse_gaussian(term["coeff"]))
    return p


_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*()]))")


def parse_poly(ring, text, extra=None):
    """Parse '+-*' expressions over ring variables, rationals, and extra symbols.

    `extra` maps symbol names to ParamPoly or GaussianRational values (used for
    stratum substitutions written in fresh symbols).
    """
    tokens = []
    pos = 0
    text = str(text)
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError("cannot tokenize %r at position %d" % (text, pos))
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", Fraction(m.group("num"))))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
    tokens.append(("end", None))
    idx = [0]

    def peek():
        return tokens[idx[0]]

    def advance():
        tok = tokens[idx[0]]
        idx[0] += 1
        return tok

    def atom():
        kind, val = advance()
        if kind == "num":
            return ring.const(GaussianRational(val))
        if kind == "name":
            if val == "i":
                return ring.const(QI_I)
            if extra and val in extra:
                return ring.coerce(extra[val])
            return ring.var(val)
        if kind == "op" and val == "(":
            e = expr()
            kind, val = advance()
            if (kind, val) != ("op", ")"):
                raise ValueError("unbalanced parentheses in %r" % text)
            return e
        if kind == "op" and val == "-":
            return -atom()
        if kind == "op" and val == "+":
            return atom()
        raise ValueError("unexpected token %r in %r" % (val, text))

    def term():
        e = atom()
        while peek() == ("op", "*"):
            advance()
            e = e * atom()
        return e

    def expr():
        e = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            _, op = advance()
            t = term()
            e = e + t if op == "+" else e - t
        return e

    result = expr()
    if peek()[0] != "end":
        raise ValueError("trailing input in %r" % text)
    return result
