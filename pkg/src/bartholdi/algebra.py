"""Exact arithmetic: bivariate polynomials in (q, u), rational functions,
truncated series and fraction-free linear algebra.

Coefficients are Python ints or ``fractions.Fraction``; a Fraction whose
denominator is 1 is always stored as an int so integer-only work stays on
the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import gmpy2

from .errors import BadConstantTerm, NotInRange, ZeroPolynomial

Number = Union[int, Fraction]


def as_rational(x) -> Number:
    """Coerce ints, Fractions, mpq and rational strings to the canonical number type."""
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return as_rational(Fraction(x))
    if type(x).__name__ == "mpq":
        return as_rational(Fraction(int(x.numerator), int(x.denominator)))
    if type(x).__name__ == "mpz":
        return int(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _norm(c: Number) -> Number:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _div(a: Number, b: Number) -> Number:
    if type(a) is int and type(b) is int:
        if a % b == 0:
            return a // b
        return Fraction(a, b)
    return _norm(Fraction(a) / b)


def format_rational(c: Number) -> str:
    c = _norm(c)
    if type(c) is int:
        return str(c)
    return f"{c.numerator}/{c.denominator}"


# --------------------------------------------------------------------------
# Bivariate polynomials


class BiPoly:
    """Immutable polynomial in q and u with exact rational coefficients.

    Terms are stored as ``{(q_exp, u_exp): coeff}`` with no zero entries.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: dict | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                c = as_rational(c)
                if c:
                    i, j = k
                    if i < 0 or j < 0:
                        raise ValueError("negative exponent")
                    clean[(int(i), int(j))] = c
        self._t = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "BiPoly":
        obj = cls.__new__(cls)
        obj._t = terms
        obj._hash = None
        return obj

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "BiPoly":
        c = as_rational(c)
        return cls._raw({(0, 0): c} if c else {})

    @classmethod
    def q(cls) -> "BiPoly":
        return cls._raw({(1, 0): 1})

    @classmethod
    def u(cls) -> "BiPoly":
        return cls._raw({(0, 1): 1})

    @classmethod
    def from_q_coeffs(cls, coeffs: Sequence) -> "BiPoly":
        return cls({(i, 0): c for i, c in enumerate(coeffs)})

    @classmethod
    def from_u_coeffs(cls, coeffs: Sequence) -> "BiPoly":
        return cls({(0, j): c for j, c in enumerate(coeffs)})

    @classmethod
    def coerce(cls, x) -> "BiPoly":
        if isinstance(x, BiPoly):
            return x
        return cls.const(x)

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and (0, 0) in self._t)

    def constant_value(self) -> Number:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._t.get((0, 0), 0)

    def degree_q(self) -> int:
        return max((i for i, _ in self._t), default=-1)

    def degree_u(self) -> int:
        return max((j for _, j in self._t), default=-1)

    def coeff(self, i: int, j: int) -> Number:
        return self._t.get((i, j), 0)

    def coeff_q(self, i: int) -> "BiPoly":
        """Coefficient of q^i as a polynomial in u."""
        return BiPoly._raw({(0, j): c for (a, j), c in self._t.items() if a == i})

    def q_coeffs(self) -> list[Number]:
        """Coefficient list in q (low to high); requires the polynomial to be free of u."""
        if self.degree_u() > 0:
            raise ValueError("polynomial depends on u")
        out = [0] * (self.degree_q() + 1)
        for (i, _), c in self._t.items():
            out[i] = c
        return out

    def u_coeffs(self) -> list[Number]:
        if self.degree_q() > 0:
            raise ValueError("polynomial depends on q")
        out = [0] * (self.degree_u() + 1)
        for (_, j), c in self._t.items():
            out[j] = c
        return out

    def leading_term(self) -> tuple[tuple[int, int], Number]:
        """Leading term in graded lexicographic order, q before u."""
        if not self._t:
            raise ZeroPolynomial("zero polynomial has no leading term")
        k = max(self._t, key=lambda m: (m[0] + m[1], m[0]))
        return k, self._t[k]

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "BiPoly":
        if not isinstance(other, BiPoly):
            if isinstance(other, (int, Fraction)):
                other = BiPoly.const(other)
            else:
                return NotImplemented
        if len(other._t) > len(self._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        out = dict(a)
        for k, c in b.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _norm(v)
            else:
                out.pop(k, None)
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly._raw({k: -c for k, c in self._t.items()})

    def __sub__(self, other) -> "BiPoly":
        if not isinstance(other, BiPoly):
            if isinstance(other, (int, Fraction)):
                other = BiPoly.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "BiPoly":
        return (-self) + other

    def __mul__(self, other) -> "BiPoly":
        if not isinstance(other, BiPoly):
            if isinstance(other, (int, Fraction)):
                other = as_rational(other)
                if not other:
                    return BiPoly._raw({})
                return BiPoly._raw({k: _norm(c * other) for k, c in self._t.items()})
            return NotImplemented
        out: dict = {}
        get = out.get
        for (i1, j1), c1 in self._t.items():
            for (i2, j2), c2 in other._t.items():
                k = (i1 + i2, j1 + j2)
                out[k] = get(k, 0) + c1 * c2
        return BiPoly._raw({k: _norm(c) for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = BiPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other) -> "BiPoly":
        """Division by a nonzero rational scalar, or exact polynomial division."""
        if isinstance(other, BiPoly):
            return self.divexact(other)
        other = as_rational(other)
        return BiPoly._raw({k: _div(c, other) for k, c in self._t.items()})

    def divexact(self, other: "BiPoly") -> "BiPoly":
        """Exact quotient; raises ArithmeticError when ``other`` does not divide ``self``."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_constant():
            c = other._t[(0, 0)]
            return BiPoly._raw({k: _div(v, c) for k, v in self._t.items()})
        # lex order with q first; the remainder stays a multiple of ``other``
        (li, lj) = max(other._t)
        lc = other._t[(li, lj)]
        rest = [(k, v) for k, v in other._t.items() if k != (li, lj)]
        r = dict(self._t)
        quot = {}
        while r:
            (ri, rj) = max(r)
            di, dj = ri - li, rj - lj
            if di < 0 or dj < 0:
                raise ArithmeticError("inexact polynomial division")
            c = _div(r.pop((ri, rj)), lc)
            quot[(di, dj)] = c
            for (a, b), v in rest:
                k = (a + di, b + dj)
                nv = r.get(k, 0) - c * v
                if nv:
                    r[k] = _norm(nv)
                else:
                    r.pop(k, None)
        return BiPoly._raw(quot)

    # comparisons ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, BiPoly):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self._t == ({(0, 0): as_rational(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._t)

    # substitution -----------------------------------------------------------
    def evaluate(self, q=None, u=None):
        """Substitute rational values for q and/or u.

        Returns a number when both are given, otherwise a BiPoly in the
        remaining variable.
        """
        if q is not None:
            q = as_rational(q)
        if u is not None:
            u = as_rational(u)
        out: dict = {}
        for (i, j), c in self._t.items():
            v = c
            ni, nj = i, j
            if q is not None:
                v = v * q**i
                ni = 0
            if u is not None:
                v = v * u**j
                nj = 0
            out[(ni, nj)] = out.get((ni, nj), 0) + v
        res = BiPoly({k: _norm(Fraction(v)) for k, v in out.items()})
        if q is not None and u is not None:
            return res.coeff(0, 0)
        return res

    def evaluate_complex(self, q: complex, u: complex) -> complex:
        return sum(complex(c) * q**i * u**j for (i, j), c in self._t.items())

    def subs_u(self, poly: "BiPoly") -> "BiPoly":
        """Substitute u -> poly (poly may involve q and u)."""
        by_j: dict[int, dict] = {}
        for (i, j), c in self._t.items():
            by_j.setdefault(j, {})[(i, 0)] = c
        if not by_j:
            return BiPoly._raw({})
        result = BiPoly._raw({})
        for j in range(max(by_j), -1, -1):
            result = result * poly
            if j in by_j:
                result = result + BiPoly._raw(dict(by_j[j]))
        return result

    def subs_q(self, poly: "BiPoly") -> "BiPoly":
        """Substitute q -> poly."""
        by_i: dict[int, dict] = {}
        for (i, j), c in self._t.items():
            by_i.setdefault(i, {})[(0, j)] = c
        if not by_i:
            return BiPoly._raw({})
        result = BiPoly._raw({})
        for i in range(max(by_i), -1, -1):
            result = result * poly
            if i in by_i:
                result = result + BiPoly._raw(dict(by_i[i]))
        return result

    def reverse_q(self, scale, degree: int | None = None) -> "BiPoly":
        """Return (scale*q)^D * p(1/(scale*q)), D defaulting to the q-degree.

        ``scale`` may be a rational or a BiPoly in u; the result is a polynomial.
        """
        d = self.degree_q() if degree is None else degree
        if d < self.degree_q():
            raise ValueError("clearing degree below polynomial degree")
        scale = BiPoly.coerce(scale)
        result = BiPoly._raw({})
        for i in range(self.degree_q() + 1):
            ci = self.coeff_q(i)
            if ci.is_zero():
                continue
            term = ci * BiPoly._raw({(d - i, 0): 1})
            result = result + term * scale ** (d - i)
        return result

    def deriv_q(self) -> "BiPoly":
        return BiPoly._raw({(i - 1, j): i * c for (i, j), c in self._t.items() if i > 0})

    def deriv_u(self) -> "BiPoly":
        return BiPoly._raw({(i, j - 1): j * c for (i, j), c in self._t.items() if j > 0})

    # display ----------------------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, int], Number]]:
        """Terms in ascending graded order; ties broken with higher q-degree first."""
        return sorted(self._t.items(), key=lambda kv: (kv[0][0] + kv[0][1], -kv[0][0]))

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for n, ((i, j), c) in enumerate(self.sorted_terms()):
            mono = []
            if j:
                mono.append("u" if j == 1 else f"u^{j}")
            if i:
                mono.append("q" if i == 1 else f"q^{i}")
            neg = c < 0
            a = -c if neg else c
            if mono:
                body = "*".join(mono) if a == 1 else format_rational(a) + "*" + "*".join(mono)
            else:
                body = format_rational(a)
            if n == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"BiPoly({self})"


Q = BiPoly.q()
U = BiPoly.u()
ONE = BiPoly.const(1)
ZERO = BiPoly.const(0)


# --------------------------------------------------------------------------
# Rational functions


class RationalFunction:
    """Numerator/denominator pair of BiPoly; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = BiPoly.coerce(num)
        den = ONE if den is None else BiPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            if isinstance(other, (BiPoly, int, Fraction)):
                other = RationalFunction(other)
            else:
                return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None  # equality is not structural

    def difference_witness(self, other: "RationalFunction") -> BiPoly:
        """n1*d2 - n2*d1; zero exactly when the two functions are equal."""
        return self.num * other.den - other.num * self.den

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_as_rf(other))

    def __pow__(self, n: int) -> "RationalFunction":
        if n >= 0:
            return RationalFunction(self.num**n, self.den**n)
        return RationalFunction(self.den ** (-n), self.num ** (-n))

    def evaluate(self, q=None, u=None):
        n = self.num.evaluate(q=q, u=u)
        d = self.den.evaluate(q=q, u=u)
        if q is not None and u is not None:
            if d == 0:
                raise ZeroDivisionError("pole at evaluation point")
            return _div(n, d)
        return RationalFunction(n, d)

    def normalized(self) -> "RationalFunction":
        """Divide out the denominator when it divides the numerator exactly and fix the sign."""
        num, den = self.num, self.den
        try:
            num = num.divexact(den)
            den = ONE
        except ArithmeticError:
            pass
        _, lc = den.leading_term()
        if lc < 0:
            num, den = -num, -den
        return RationalFunction(num, den)

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    return RationalFunction(x)


# --------------------------------------------------------------------------
# Univariate helpers (coefficient lists, low degree first)


def _trim(p: list) -> list:
    p = [as_rational(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def upoly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def upoly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = _trim(list(a))
    if len(r) < len(b):
        return [], r
    quot = [0] * (len(r) - len(b) + 1)
    lc = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = _div(r[-1], lc)
        quot[shift] = c
        for k, bk in enumerate(b):
            r[shift + k] = _norm(r[shift + k] - c * bk)
        r = _trim(r)
    return _trim(quot), r


def upoly_gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd over the rationals."""
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = upoly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lc = a[-1]
    return [_div(c, lc) for c in a]


def upoly_deriv(p: Sequence) -> list:
    return _trim([i * c for i, c in enumerate(p)][1:])


def upoly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _as_coeff_list(p) -> list:
    if isinstance(p, BiPoly):
        if p.degree_u() > 0:
            return p.q_coeffs() if p.degree_q() > 0 else p.u_coeffs()
        return p.q_coeffs()
    return _trim(list(p))


def root_multiplicity(p, q0) -> int:
    """Largest k such that (x - q0)^k divides p, by repeated synthetic division."""
    coeffs = _trim(_as_coeff_list(p))
    if not coeffs:
        raise ZeroPolynomial("multiplicity of a root of the zero polynomial")
    q0 = as_rational(q0)
    k = 0
    while len(coeffs) > 1:
        # synthetic division by (x - q0), highest degree first
        hi = coeffs[::-1]
        out = [hi[0]]
        for c in hi[1:]:
            out.append(_norm(c + out[-1] * q0))
        if out[-1] != 0:
            break
        coeffs = out[:-1][::-1]
        k += 1
    return k


def square_free_decomposition(p: Sequence) -> tuple[Number, list[tuple[list, int]]]:
    """Yun's algorithm: p = c * prod a_i^i with a_i monic, square-free, pairwise coprime.

    Returns (c, [(a_i, i), ...]) omitting trivial factors.
    """
    p = _trim(list(p))
    if not p:
        raise ZeroPolynomial("square-free decomposition of zero")
    lc = p[-1]
    monic = [_div(c, lc) for c in p]
    if len(monic) == 1:
        return lc, []
    out = []
    dp = upoly_deriv(monic)
    a0 = upoly_gcd(monic, dp)
    b = upoly_divmod(monic, a0)[0]
    c = upoly_divmod(dp, a0)[0]
    d = _trim([x - y for x, y in _zip_pad(c, upoly_deriv(b))])
    i = 1
    while len(b) > 1:
        a = upoly_gcd(b, d)
        b = upoly_divmod(b, a)[0]
        c = upoly_divmod(d, a)[0]
        if len(a) > 1:
            out.append((a, i))
        d = _trim([x - y for x, y in _zip_pad(c, upoly_deriv(b))])
        i += 1
    return lc, out


def _zip_pad(a: Sequence, b: Sequence):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]


def interpolate(nodes: Sequence, values: Sequence) -> list:
    """Coefficients (low to high) of the unique polynomial through the given points."""
    n = len(nodes)
    xs = [as_rational(x) for x in nodes]
    dd = [as_rational(v) for v in values]
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            dd[i] = _div(dd[i] - dd[i - 1], xs[i] - xs[i - level])
    # Horner expansion of the Newton form
    poly = [dd[n - 1]]
    for i in range(n - 2, -1, -1):
        poly = upoly_mul(poly, [-xs[i], 1]) if poly else []
        if poly:
            poly[0] = _norm(poly[0] + dd[i])
        else:
            poly = [dd[i]]
    return _trim(poly)


# --------------------------------------------------------------------------
# Exact linear algebra


def _is_zero(x) -> bool:
    if isinstance(x, BiPoly):
        return x.is_zero()
    return x == 0


def _exact_div(a, b):
    if isinstance(a, BiPoly) or isinstance(b, BiPoly):
        return BiPoly.coerce(a).divexact(BiPoly.coerce(b))
    return _div(a, b)


def det_fraction_free(m) -> Number | BiPoly:
    """Determinant by Bareiss elimination with exact division at every pivot step.

    Works for matrices of ints, Fractions or BiPoly (the result has the
    same element type). Row swaps are tracked for the sign.
    """
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    poly = any(isinstance(x, BiPoly) for row in a for x in row)
    if poly:
        a = [[BiPoly.coerce(x) for x in row] for row in a]
    else:
        a = [[as_rational(x) for x in row] for row in a]
    sign = 1
    prev = ONE if poly else 1
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ZERO if poly else 0
        pivot = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            lead = rowi[k]
            if _is_zero(lead):
                for j in range(k + 1, n):
                    if not _is_zero(rowi[j]):
                        rowi[j] = _exact_div(rowi[j] * pivot, prev)
            else:
                for j in range(k + 1, n):
                    rowi[j] = _exact_div(rowi[j] * pivot - lead * rowk[j], prev)
            rowi[k] = ZERO if poly else 0
        prev = pivot
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def det_cofactor(m):
    """Laplace expansion along the first row; exponential cost, used as a test oracle."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if _is_zero(m[0][j]):
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def adjugate(m) -> list[list]:
    """Classical adjoint via signed cofactors, so m @ adj(m) = det(m) * I."""
    a = [list(row) for row in m]
    n = len(a)
    poly = any(isinstance(x, BiPoly) for row in a for x in row)
    one = ONE if poly else 1
    if n == 1:
        return [[one]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        rows = a[:i] + a[i + 1:]
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for r in rows]
            c = det_fraction_free(minor)
            if poly:
                c = BiPoly.coerce(c)
            adj[j][i] = c if (i + j) % 2 == 0 else -c
    return adj


def matmul(a, b) -> list[list]:
    n, k = len(a), len(b)
    p = len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(p):
            acc = 0
            for t in range(k):
                x = ai[t]
                if _is_zero(x):
                    continue
                y = b[t][j]
                if _is_zero(y):
                    continue
                acc = acc + x * y
            row.append(acc)
        out.append(row)
    return out


def rref(m) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over the rationals; returns (matrix, pivot columns)."""
    a = [[as_rational(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [_div(x, pv) for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [_norm(x - f * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank_exact(m) -> int:
    return len(rref(m)[1])


def nullspace_exact(m) -> list[list]:
    """Basis of the right kernel {x : m x = 0} with rational entries."""
    if not m:
        return []
    cols = len(m[0])
    a, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = _norm(-a[r][f])
        basis.append(v)
    return basis


def solve_exact(m, b) -> list:
    """Solve a nonsingular square system over the rationals."""
    n = len(m)
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ArithmeticError("singular system")
    return [red[i][n] for i in range(n)]


def solve_on_complement(delta, b) -> list:
    """Unique x with delta x = b and sum(x) = 0, i.e. the Moore-Penrose solution.

    ``delta`` must be a connected-graph Laplacian (kernel = constants).
    """
    b = [as_rational(x) for x in b]
    if sum(b) != 0:
        raise NotInRange(f"right-hand side sums to {format_rational(sum(b))}, not 0")
    n = len(b)
    # delta + 1 1^T is invertible and agrees with delta on the complement of 1
    shifted = [[as_rational(delta[i][j]) + 1 for j in range(n)] for i in range(n)]
    return solve_exact(shifted, b)


def charpoly(m) -> list:
    """Coefficients (low to high) of det(x I - m) by Hessenberg reduction over Q."""
    n = len(m)
    h = [[gmpy2.mpq(as_rational(x)) for x in row] for row in m]
    for k in range(1, n - 1):
        piv = next((i for i in range(k, n) if h[i][k - 1] != 0), None)
        if piv is None:
            continue
        if piv != k:
            h[k], h[piv] = h[piv], h[k]
            for row in h:
                row[k], row[piv] = row[piv], row[k]
        pv = h[k][k - 1]
        for i in range(k + 1, n):
            f = h[i][k - 1] / pv
            if f == 0:
                continue
            hi, hk = h[i], h[k]
            for j in range(k - 1, n):
                hi[j] -= f * hk[j]
            for row in h:
                row[k] += f * row[i]
    # recurrence for the characteristic polynomials of leading blocks
    polys: list[list] = [[gmpy2.mpq(1)]]
    for k in range(n):
        nxt = [gmpy2.mpq(0)] + polys[k]
        for idx in range(len(polys[k])):
            nxt[idx] -= h[k][k] * polys[k][idx]
        prod = gmpy2.mpq(1)
        for i in range(k - 1, -1, -1):
            prod *= h[i + 1][i]
            if prod == 0:
                break
            coef = prod * h[i][k]
            for idx in range(len(polys[i])):
                nxt[idx] -= coef * polys[i][idx]
        polys.append(nxt)
    return [as_rational(c) for c in polys[n]]


# --------------------------------------------------------------------------
# Truncated power series in q with coefficients in Q[u]


@dataclass(frozen=True)
class TruncatedSeries:
    """sum_{m=0}^{order} c_m q^m, each c_m a BiPoly in u alone."""

    order: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.order + 1:
            raise ValueError("coefficient count must equal order + 1")

    @classmethod
    def from_poly(cls, p: BiPoly, order: int) -> "TruncatedSeries":
        return cls(order, tuple(p.coeff_q(m) for m in range(order + 1)))

    def __getitem__(self, m: int) -> BiPoly:
        return self.coeffs[m]

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        out = []
        for m in range(n + 1):
            acc = ZERO
            for k in range(m + 1):
                if self.coeffs[k] and other.coeffs[m - k]:
                    acc = acc + self.coeffs[k] * other.coeffs[m - k]
            out.append(acc)
        return TruncatedSeries(n, tuple(out))

    def inverse(self) -> "TruncatedSeries":
        """Formal reciprocal; the constant coefficient must be 1."""
        if self.coeffs[0] != ONE:
            raise BadConstantTerm("series inverse needs constant term 1")
        out = [ONE]
        for m in range(1, self.order + 1):
            acc = ZERO
            for k in range(1, m + 1):
                if self.coeffs[k]:
                    acc = acc - self.coeffs[k] * out[m - k]
            out.append(acc)
        return TruncatedSeries(self.order, tuple(out))

    def exp(self) -> "TruncatedSeries":
        if not self.coeffs[0].is_zero():
            raise BadConstantTerm("exp needs a series without constant term")
        out = [ONE]
        for m in range(1, self.order + 1):
            acc = ZERO
            for k in range(1, m + 1):
                if self.coeffs[k]:
                    acc = acc + self.coeffs[k] * out[m - k] * k
            out.append(acc / m)
        return TruncatedSeries(self.order, tuple(out))


def log_inverse_series(p: BiPoly, order: int) -> TruncatedSeries:
    """Coefficients of log(1/p) up to q^order, from p * L' = -p'."""
    if p.coeff_q(0) != ONE:
        raise BadConstantTerm(f"constant term is {p.coeff_q(0)}, expected 1")
    pc = [p.coeff_q(j) for j in range(order + 1)]
    c = [ZERO]
    for m in range(1, order + 1):
        acc = -(pc[m] * m)
        for j in range(1, m):
            if pc[j] and c[m - j]:
                acc = acc - pc[j] * c[m - j] * (m - j)
        c.append(acc / m)
    return TruncatedSeries(order, tuple(c))
