"""Sparse multivariate polynomials over a FieldCtx.

Terms are stored as a dict mapping exponent tuples to nonzero scalars.  The
variable tuple is part of the value; mixed-variable arithmetic is an error.
Monomial order (graded lex) is fixed for printing and exact division only.
"""

from __future__ import annotations

from fractions import Fraction

from . import scalar as _sc
from .errors import (
    CommonComponent,
    DegreeTooLarge,
    DivisionByZero,
    ParseError,
    UnknownGenerator,
    UnknownVariable,
    ZeroPolynomial,
)
from .scalar import QQ, AlgNum, as_scalar, is_zero, scalar_div

__all__ = [
    "MPoly",
    "RatFunc",
    "parse_poly",
    "resultant",
    "mgcd",
    "exact_div",
    "factor_univariate",
    "factor_coeff_list",
    "univariate_coeffs",
    "poly_from_coeffs",
]


class MPoly:
    __slots__ = ("ctx", "vars", "terms", "_hash")

    def __init__(self, ctx, vars, terms):
        self.ctx = ctx
        self.vars = tuple(vars)
        self.terms = terms  # treated as immutable after construction
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ctx, vars):
        return cls(ctx, vars, {})

    @classmethod
    def const(cls, ctx, vars, c):
        c = as_scalar(ctx, c)
        if is_zero(c):
            return cls.zero(ctx, vars)
        return cls(ctx, vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, ctx, vars, name):
        i = tuple(vars).index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls(ctx, vars, {tuple(e): Fraction(1)})

    @classmethod
    def from_terms(cls, ctx, vars, items):
        terms = {}
        for e, c in items:
            if e in terms:
                c = terms[e] + c
            if is_zero(c):
                terms.pop(e, None)
            else:
                terms[e] = c
        return cls(ctx, vars, terms)

    # -- basic protocol -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.vars == other.vars and self.terms == other.terms
        if isinstance(other, (int, Fraction, AlgNum)):
            return self == MPoly.const(self.ctx, self.vars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))
        return self._hash

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")

    def _coerce(self, other):
        if isinstance(other, (int, Fraction, AlgNum)):
            return MPoly.const(self.ctx, self.vars, other)
        return other

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, 0) + c
            if is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        return MPoly(_join(self.ctx, other.ctx), self.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.ctx, self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, AlgNum)):
            if is_zero(other):
                return MPoly.zero(self.ctx, self.vars)
            return MPoly(self.ctx, self.vars, {e: c * other for e, c in self.terms.items()})
        if isinstance(other, RatFunc):
            return RatFunc(self * other.num, other.den)
        if not isinstance(other, MPoly):
            return NotImplemented
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if is_zero(s):
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return MPoly(_join(self.ctx, other.ctx), self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = MPoly.const(self.ctx, self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, AlgNum)):
            inv = _sc.scalar_inv(other)
            return self * inv
        return NotImplemented

    # -- structure ----------------------------------------------------------

    def total_degree(self):
        if not self.terms:
            raise ZeroPolynomial("degree of zero polynomial")
        return max(sum(e) for e in self.terms)

    def degree_in(self, var):
        if not self.terms:
            raise ZeroPolynomial("degree of zero polynomial")
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def order_at_origin(self):
        if not self.terms:
            raise ZeroPolynomial("order of zero polynomial")
        return min(sum(e) for e in self.terms)

    def order_in(self, var):
        """Largest k with var^k dividing self."""
        if not self.terms:
            raise ZeroPolynomial("order of zero polynomial")
        i = self.vars.index(var)
        return min(e[i] for e in self.terms)

    def homogeneous_parts(self):
        parts = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: MPoly(self.ctx, self.vars, t) for d, t in sorted(parts.items())}

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def tangent_cone(self):
        if not self.terms:
            raise ZeroPolynomial("tangent cone of zero polynomial")
        d = self.order_at_origin()
        terms = {e: c for e, c in self.terms.items() if sum(e) == d}
        return MPoly(self.ctx, self.vars, terms)

    def derivative(self, var):
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            terms[tuple(e2)] = c * e[i]
        return MPoly(self.ctx, self.vars, terms)

    def coeff_of(self, var, k):
        """Coefficient of var^k, as an MPoly in the same variables."""
        i = self.vars.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == k:
                e2 = list(e)
                e2[i] = 0
                terms[tuple(e2)] = c
        return MPoly(self.ctx, self.vars, terms)

    def set_var(self, var, value):
        """Substitute a scalar for one variable."""
        value = as_scalar(self.ctx, value)
        i = self.vars.index(var)
        terms = {}
        ctx = self.ctx
        for e, c in self.terms.items():
            cc = c * value ** e[i] if e[i] else c
            e2 = list(e)
            e2[i] = 0
            e2 = tuple(e2)
            s = terms.get(e2, 0) + cc
            if is_zero(s):
                terms.pop(e2, None)
            else:
                terms[e2] = s
        if isinstance(value, AlgNum):
            ctx = value.ctx if ctx.is_prefix_of(value.ctx) else ctx
        return MPoly(ctx, self.vars, terms)

    def shift(self, var, c):
        """Substitute var -> var + c."""
        c = as_scalar(self.ctx, c)
        if is_zero(c):
            return self.lift(_join_sc(self.ctx, c))
        i = self.vars.index(var)
        ctx = _join_sc(self.ctx, c)
        # Horner on the coefficient list in var
        deg = max((e[i] for e in self.terms), default=0)
        coeffs = [MPoly.zero(ctx, self.vars) for _ in range(deg + 1)]
        for e, co in self.terms.items():
            e2 = list(e)
            k = e2[i]
            e2[i] = 0
            coeffs[k] = coeffs[k] + MPoly(ctx, self.vars, {tuple(e2): co})
        x_plus_c = MPoly.var(ctx, self.vars, var) + MPoly.const(ctx, self.vars, c)
        result = MPoly.zero(ctx, self.vars)
        for k in range(deg, -1, -1):
            result = result * x_plus_c + coeffs[k]
        return result

    def scale_var(self, var, c):
        """Substitute var -> c * var (c a nonzero scalar)."""
        c = as_scalar(self.ctx, c)
        i = self.vars.index(var)
        terms = {e: co * c ** e[i] for e, co in self.terms.items()}
        return MPoly(_join_sc(self.ctx, c), self.vars, terms)

    def lift(self, ctx):
        """Reinterpret over a deeper context (coefficients unchanged)."""
        if ctx == self.ctx:
            return self
        if not self.ctx.is_prefix_of(ctx):
            raise _sc.ContextMismatch(f"cannot lift from {self.ctx} to {ctx}")
        return MPoly(ctx, self.vars, self.terms)

    def rename_vars(self, new_vars):
        if len(new_vars) != len(self.vars):
            raise ValueError("variable count mismatch")
        return MPoly(self.ctx, tuple(new_vars), self.terms)

    def evaluate(self, env):
        """Evaluate with variables bound to scalars, MPoly or RatFunc values.

        All polynomial/rational values must share one variable tuple; the
        result is an MPoly (or RatFunc if any binding is a RatFunc).
        """
        target = None
        for v in env.values():
            if isinstance(v, MPoly):
                target = (v.ctx, v.vars)
            elif isinstance(v, RatFunc):
                target = (v.num.ctx, v.num.vars)
        if target is None:
            # pure scalar evaluation
            total = Fraction(0)
            for e, c in self.terms.items():
                val = c
                for i, name in enumerate(self.vars):
                    if e[i]:
                        val = val * as_scalar(self.ctx, env[name]) ** e[i]
                total = total + val
            return total
        ctx, tvars = target
        pows = {}

        def power(name, k):
            key = (name, k)
            if key not in pows:
                base = env[name]
                if isinstance(base, (int, Fraction, AlgNum)):
                    base = MPoly.const(ctx, tvars, base)
                pows[key] = base ** k
            return pows[key]

        total = MPoly.zero(ctx, tvars)
        for e, c in self.terms.items():
            val = MPoly.const(ctx, tvars, c)
            for i, name in enumerate(self.vars):
                if e[i]:
                    val = val * power(name, e[i])
            total = val + total
        return total

    # -- display ------------------------------------------------------------

    def __repr__(self):
        return self.to_text()

    def to_text(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)
        parts = []
        for e, c in items:
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in zip(self.vars, e) if k
            )
            cs = _scalar_text(c)
            if mono:
                body = mono if cs == "1" else (f"-{mono}" if cs == "-1" else f"{cs}*{mono}")
            else:
                body = cs
            if parts and not body.startswith("-"):
                parts.append("+" + body)
            else:
                parts.append(body)
        return "".join(parts)


def _scalar_text(c):
    if isinstance(c, AlgNum):
        return f"({c!r})"
    if isinstance(c, Fraction) and c.denominator == 1:
        return str(c.numerator)
    return str(c)


def _join(c1, c2):
    if c1 == c2:
        return c1
    if c1.is_prefix_of(c2):
        return c2
    if c2.is_prefix_of(c1):
        return c1
    raise _sc.ContextMismatch(f"incompatible contexts {c1} and {c2}")


def _join_sc(ctx, s):
    if isinstance(s, AlgNum):
        return _join(ctx, s.ctx)
    return ctx


class RatFunc:
    """num/den with den not identically zero.

    No gcd reduction is performed; consumers take valuation differences, which
    are insensitive to common factors.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = MPoly.const(num.ctx, num.vars, 1)
        if not den:
            raise DivisionByZero("rational function with zero denominator")
        self.num = num
        self.den = den

    def __mul__(self, other):
        if isinstance(other, RatFunc):
            return RatFunc(self.num * other.num, self.den * other.den)
        return RatFunc(self.num * other, self.den)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(self.num._coerce(other))
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(self.num._coerce(other))
        return self + (-other)

    def __pow__(self, n):
        return RatFunc(self.num ** n, self.den ** n)

    def __repr__(self):
        return f"({self.num})/({self.den})"


# ---------------------------------------------------------------------------
# parsing

_WHITESPACE = " \t\n\r"


class _Parser:
    def __init__(self, text, ctx, vars):
        self.text = text
        self.pos = 0
        self.ctx = ctx
        self.vars = tuple(vars)

    def error(self, msg):
        raise ParseError(msg, self.pos)

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos] in _WHITESPACE:
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self):
        e = self.expr()
        if self.peek():
            self.error(f"unexpected character {self.peek()!r}")
        return e

    def expr(self):
        c = self.peek()
        sign = 1
        if c in ("+", "-"):
            self.pos += 1
            sign = -1 if c == "-" else 1
        t = self.term()
        if sign < 0:
            t = -t
        while True:
            c = self.peek()
            if c not in ("+", "-"):
                return t
            self.pos += 1
            u = self.term()
            t = t + u if c == "+" else t - u

    def term(self):
        f = self.factor()
        while self.peek() == "*":
            self.pos += 1
            f = f * self.factor()
        return f

    def factor(self):
        b = self.base()
        if self.peek() == "^":
            self.pos += 1
            n = self.natural()
            b = b ** n
        return b

    def natural(self):
        c = self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected a natural number")
        return int(self.text[start:self.pos])

    def base(self):
        c = self.peek()
        if c == "(":
            self.take("(")
            e = self.expr()
            self.take(")")
            return e
        if c == "-":
            self.pos += 1
            return -self.base()
        if c.isdigit():
            n = self.natural()
            if self.peek() == "/":
                self.pos += 1
                d = self.natural()
                if d == 0:
                    self.error("zero denominator")
                return MPoly.const(self.ctx, self.vars, Fraction(n, d))
            return MPoly.const(self.ctx, self.vars, n)
        if c.isalpha() or c == "_":
            start = self.pos
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            name = self.text[start:self.pos]
            if name in self.vars:
                return MPoly.var(self.ctx, self.vars, name)
            if name in self.ctx.gen_names():
                gen = _generator_scalar(self.ctx, name)
                return MPoly.const(self.ctx, self.vars, gen)
            raise UnknownVariable(f"unknown variable {name!r}", start)
        self.error("expected a factor")


def _generator_scalar(ctx, name):
    # generator of the level named `name`, embedded into ctx
    for depth, (lname, _) in enumerate(ctx.tower, start=1):
        if lname == name:
            level_ctx = _sc.FieldCtx(ctx.tower[:depth], ctx.max_depth)
            return level_ctx.gen()
    raise UnknownGenerator(f"unknown generator {name!r}")


def parse_poly(text, ctx=QQ, vars=("x", "y", "z", "v", "w")):
    """Parse an expression in the documented grammar into an MPoly."""
    return _Parser(text, ctx, vars).parse()


# ---------------------------------------------------------------------------
# univariate views

def univariate_coeffs(p, var=None):
    """Coefficient list (low to high) of a univariate MPoly."""
    if var is None:
        used = [v for i, v in enumerate(p.vars) if any(e[i] for e in p.terms)]
        if len(used) > 1:
            raise ValueError(f"polynomial is not univariate: uses {used}")
        var = used[0] if used else p.vars[0]
    i = p.vars.index(var)
    deg = max((e[i] for e in p.terms), default=0)
    coeffs = [Fraction(0)] * (deg + 1)
    for e, c in p.terms.items():
        if any(k for j, k in enumerate(e) if j != i and k):
            raise ValueError("polynomial is not univariate")
        coeffs[e[i]] = c
    return _sc._trim(coeffs)


def poly_from_coeffs(coeffs, ctx, vars, var):
    i = tuple(vars).index(var)
    terms = {}
    for k, c in enumerate(coeffs):
        if is_zero(c):
            continue
        e = [0] * len(vars)
        e[i] = k
        terms[tuple(e)] = c
    return MPoly(ctx, tuple(vars), terms)


# ---------------------------------------------------------------------------
# exact division, gcd, resultant

def exact_div(p, q):
    """Quotient p/q when q divides p exactly; None otherwise."""
    if not q:
        raise DivisionByZero("exact division by zero polynomial")
    if not p:
        return p
    ctx = _join(p.ctx, q.ctx)

    def key(e):
        return (sum(e), e)

    q_lead = max(q.terms, key=key)
    q_lc = q.terms[q_lead]
    rem = dict(p.terms)
    quot = {}
    while rem:
        r_lead = max(rem, key=key)
        diff = tuple(a - b for a, b in zip(r_lead, q_lead))
        if any(d < 0 for d in diff):
            return None
        c = scalar_div(rem[r_lead], q_lc)
        quot[diff] = c
        for e, co in q.terms.items():
            e2 = tuple(a + b for a, b in zip(diff, e))
            s = rem.get(e2, 0) - c * co
            if is_zero(s):
                rem.pop(e2, None)
            else:
                rem[e2] = s
    return MPoly(ctx, p.vars, quot)


def multiplicity_of_factor(p, phi):
    """Largest k with phi^k dividing p."""
    k = 0
    while True:
        q = exact_div(p, phi)
        if q is None:
            return k
        p = q
        k += 1


def _coeff_gcd_list(polys):
    g = None
    for p in polys:
        g = p if g is None else mgcd(g, p)
        if g and g.total_degree() == 0:
            break
    return g


def to_sympy(p, symbols):
    """Convert a rational-coefficient MPoly to a sympy expression."""
    import sympy

    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        mono = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(symbols, e):
            if k:
                mono *= s ** k
        expr += mono
    return expr


def from_sympy(expr, ctx, vars, symbols):
    import sympy

    poly = sympy.Poly(expr, *symbols, domain="QQ")
    terms = {}
    for mono, c in poly.terms():
        terms[tuple(mono)] = Fraction(c.p, c.q)
    return MPoly(ctx, tuple(vars), terms)


def _mgcd_qq(p, q):
    import sympy

    symbols = sympy.symbols(" ".join(f"s_{v}" for v in p.vars))
    if len(p.vars) == 1:
        symbols = (symbols,)
    g = sympy.gcd(
        sympy.Poly(to_sympy(p, symbols), *symbols, domain="QQ"),
        sympy.Poly(to_sympy(q, symbols), *symbols, domain="QQ"),
    )
    return _monic(from_sympy(g.as_expr(), p.ctx, p.vars, symbols))


def mgcd(p, q):
    """Monic-normalized gcd over the coefficient field (primitive PRS)."""
    if not p:
        return _monic(q)
    if not q:
        return _monic(p)
    if p.ctx == QQ and q.ctx == QQ and len(p.vars) > 1:
        return _mgcd_qq(p, q)
    # pick the last variable actually used by either
    used = [
        i
        for i in range(len(p.vars))
        if any(e[i] for e in p.terms) or any(e[i] for e in q.terms)
    ]
    if not used:
        return MPoly.const(_join(p.ctx, q.ctx), p.vars, 1)
    var = p.vars[used[-1]]
    if len(used) == 1:
        a = univariate_coeffs(p, var)
        b = univariate_coeffs(q, var)
        g = _uni_gcd(a, b)
        return poly_from_coeffs(g, _join(p.ctx, q.ctx), p.vars, var)
    # multivariate: primitive PRS in `var`
    cp, pp = _content_primitive(p, var)
    cq, pq = _content_primitive(q, var)
    cont = mgcd(cp, cq)
    a, b = pp, pq
    if a.degree_in(var) < b.degree_in(var):
        a, b = b, a
    while b and b.degree_in(var) > 0:
        r = _pseudo_rem(a, b, var)
        a, b = b, (_content_primitive(r, var)[1] if r else r)
    if b:
        # PRS dropped to degree 0 in var: the primitive parts are coprime
        return _monic(cont)
    return _monic(cont * a)


def _monic(p):
    if not p:
        return p
    lead = max(p.terms, key=lambda e: (sum(e), e))
    lc = p.terms[lead]
    if lc == 1:
        return p
    return p * _sc.scalar_inv(lc)


def _content_primitive(p, var):
    """(content, primitive part) of p viewed in K[other vars][var]."""
    i = p.vars.index(var)
    coeffs = {}
    for e, c in p.terms.items():
        e2 = list(e)
        k = e2[i]
        e2[i] = 0
        coeffs.setdefault(k, {})[tuple(e2)] = c
    polys = [MPoly(p.ctx, p.vars, t) for t in coeffs.values()]
    cont = _coeff_gcd_list(polys)
    prim = exact_div(p, cont)
    return cont, prim


def _pseudo_rem(a, b, var):
    db = b.degree_in(var)
    lb = b.coeff_of(var, db)
    r = a
    x = MPoly.var(a.ctx, a.vars, var)
    while r and r.degree_in(var) >= db:
        dr = r.degree_in(var)
        lr = r.coeff_of(var, dr)
        r = r * lb - b * lr * x ** (dr - db)
    return r


def _uni_gcd(a, b):
    a, b = _sc._trim(a), _sc._trim(b)
    while b:
        _, r = _sc._pdivmod(a, b)
        a, b = b, r
    if a:
        inv = _sc.scalar_inv(a[-1])
        a = [c * inv for c in a]
    return a


def squarefree_part_coeffs(a):
    """Radical of a univariate coefficient list over a field."""
    da = [c * k for k, c in enumerate(a)][1:]
    g = _uni_gcd(a, _sc._trim(da))
    if len(g) <= 1:
        return list(a)
    q, r = _sc._pdivmod(a, g)
    assert not r
    return q


def is_squarefree(p):
    """Squarefree test for a nonzero MPoly over a field of characteristic 0.

    p has a repeated nonconstant factor iff gcd(p, all partials) is
    nonconstant.
    """
    if not p:
        raise ZeroPolynomial("squarefree test of zero polynomial")
    g = p
    for i, var in enumerate(p.vars):
        if not any(e[i] for e in p.terms):
            continue
        g = mgcd(g, p.derivative(var))
        if g.total_degree() == 0:
            return True
    return g.total_degree() == 0


def resultant(p, q, var):
    """Classical resultant via fraction-free (Bareiss) Sylvester elimination."""
    if not p or not q:
        raise ZeroPolynomial("resultant of zero polynomial")
    m, n = p.degree_in(var), q.degree_in(var)
    if m == 0 and n == 0:
        raise ValueError(f"neither operand involves {var}")
    ctx = _join(p.ctx, q.ctx)
    vars = p.vars
    if m == 0:
        return p ** n
    if n == 0:
        return q ** m
    pc = [p.coeff_of(var, k) for k in range(m + 1)]
    qc = [q.coeff_of(var, k) for k in range(n + 1)]
    size = m + n
    rows = []
    for i in range(n):
        row = [MPoly.zero(ctx, vars) for _ in range(size)]
        for k in range(m + 1):
            row[i + (m - k)] = pc[k]
        rows.append(row)
    for i in range(m):
        row = [MPoly.zero(ctx, vars) for _ in range(size)]
        for k in range(n + 1):
            row[i + (n - k)] = qc[k]
        rows.append(row)
    return _bareiss_det(rows, ctx, vars)


def _bareiss_det(rows, ctx, vars):
    n = len(rows)
    sign = 1
    prev = MPoly.const(ctx, vars, 1)
    for k in range(n - 1):
        if not rows[k][k]:
            pivot_row = next((i for i in range(k + 1, n) if rows[i][k]), None)
            if pivot_row is None:
                return MPoly.zero(ctx, vars)
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]
                q = exact_div(num, prev)
                assert q is not None, "Bareiss exact division failed"
                rows[i][j] = q
            rows[i][k] = MPoly.zero(ctx, vars)
        prev = rows[k][k]
    det = rows[n - 1][n - 1]
    return det if sign > 0 else -det


# ---------------------------------------------------------------------------
# univariate factorization

FACTOR_DEGREE_CAP = 24


def factor_univariate(p, var=None):
    """Factor a univariate MPoly into monic irreducibles over its context.

    Returns a list of (factor, exponent); the product of factor^exponent
    times a unit equals p.
    """
    if not p:
        raise ZeroPolynomial("factorization of zero polynomial")
    if var is None:
        used = [v for i, v in enumerate(p.vars) if any(e[i] for e in p.terms)]
        if len(used) > 1:
            raise ValueError("factor_univariate needs a univariate input")
        var = used[0] if used else p.vars[0]
    coeffs = univariate_coeffs(p, var)
    if len(coeffs) - 1 > FACTOR_DEGREE_CAP:
        raise DegreeTooLarge(
            f"degree {len(coeffs)-1} exceeds factorization cap {FACTOR_DEGREE_CAP}"
        )
    out = factor_coeff_list(coeffs, p.ctx)
    return [
        (poly_from_coeffs(f, p.ctx, p.vars, var), k) for f, k in out
    ]


def factor_coeff_list(coeffs, ctx):
    """Monic irreducible factorization of a univariate coeff list over ctx."""
    coeffs = _sc._trim(list(coeffs))
    if not coeffs:
        raise ZeroPolynomial("factorization of zero polynomial")
    if len(coeffs) == 1:
        return []
    inv = _sc.scalar_inv(coeffs[-1])
    coeffs = [c * inv for c in coeffs]
    if ctx.depth == 0:
        return _factor_qq(coeffs)
    # factor the radical with Trager, then read off exponents by division
    out = []
    for f in _trager(squarefree_part_coeffs(coeffs), ctx):
        e = 0
        b = coeffs
        while True:
            q, r = _sc._pdivmod(b, f)
            if r:
                break
            b = q
            e += 1
        out.append((f, e))
    return out


def _factor_qq(coeffs):
    import sympy

    t = sympy.Symbol("t")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * t ** k for k, c in enumerate(coeffs))
    _, factors = sympy.Poly(expr, t, domain="QQ").factor_list()
    out = []
    for fac, k in factors:
        fc = fac.all_coeffs()[::-1]
        lead = Fraction(fc[-1].p, fc[-1].q)
        cs = [Fraction(c.p, c.q) / lead for c in fc]
        out.append((cs, k))
    return out


def _trager(f, ctx):
    """Irreducible monic factors of a squarefree monic f over an extension."""
    if len(f) <= 1:
        return []
    if len(f) == 2:
        return [list(f)]
    sub = ctx.sub
    beta = ctx.gen()
    m = list(ctx.top_minpoly)
    for s in range(0, 40):
        shifted = _shift_uni(f, -s, beta) if s else list(f)
        norm = _norm_down(shifted, m, sub, ctx)
        dn = _sc._trim([c * j for j, c in enumerate(norm)][1:])
        if len(_uni_gcd(norm, dn)) == 1:
            pieces = factor_coeff_list(norm, sub)
            out = []
            for h, _k in pieces:
                h_up = _shift_uni([as_scalar(ctx, c) for c in h], s, beta) if s else [
                    as_scalar(ctx, c) for c in h
                ]
                g = _uni_gcd(list(f), h_up)
                if len(g) > 1:
                    out.append(g)
            total = sum(len(g) - 1 for g in out)
            assert total == len(f) - 1, "Trager factor degrees do not add up"
            return out
    raise DegreeTooLarge("no squarefree norm found in Trager factorization")


def _shift_uni(f, s, beta):
    """f(x + s*beta) for integer s, coefficient list over the extension."""
    # Horner with x -> x + s*beta
    n = len(f) - 1
    out = [f[-1]]
    c = s * beta
    for k in range(n - 1, -1, -1):
        # out = out * (x + c) + f[k]
        new = [Fraction(0)] * (len(out) + 1)
        for i, a in enumerate(out):
            new[i + 1] = new[i + 1] + a
            new[i] = new[i] + a * c
        new[0] = new[0] + f[k]
        out = new
    return _sc._trim(out)


def _norm_down(f, m, sub, ctx):
    """Resultant_y(m(y), f_as_poly_in_x_and_y) over the subfield."""
    vars = ("_x", "_y")
    fy = MPoly.zero(sub, vars)
    for k, c in enumerate(f):
        cc = _coeffs_over_sub(c, ctx)
        for j, a in enumerate(cc):
            if is_zero(a):
                continue
            fy = fy + MPoly(sub, vars, {(k, j): a})
    my = poly_from_coeffs(m, sub, vars, "_y")
    res = resultant(my, fy, "_y")
    return univariate_coeffs(res, "_x")


def _coeffs_over_sub(c, ctx):
    if isinstance(c, AlgNum) and c.ctx == ctx:
        return list(c.coeffs)
    return [c]


def common_factor(p, q):
    """Nonconstant gcd if the inputs share a component, else None."""
    g = mgcd(p, q)
    if g and g.total_degree() > 0:
        return g
    return None


def require_coprime(p, q):
    if common_factor(p, q) is not None:
        raise CommonComponent("operands share a common factor")
