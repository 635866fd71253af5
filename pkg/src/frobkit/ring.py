"""Multivariate polynomial arithmetic over prime fields.

A :class:`Ring` is F_p[x1..xn] together with an optional defining ideal, a
monomial order tag and resource budgets; with a nonempty defining ideal it
plays the role of the quotient ring.  Polynomials are immutable once built
and every operation is a pure function of its inputs, so values can be
shared freely across threads.

Coefficients are plain ints in [0, p); monomials are exponent tuples.
"""

from __future__ import annotations

from .errors import BudgetError, InputError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic Miller-Rabin, exact for word-sized integers."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _grevlex_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _grlex_key(exps):
    return (sum(exps), exps)


def _lex_key(exps):
    return exps


MONOMIAL_ORDERS = {
    "grevlex": _grevlex_key,
    "grlex": _grlex_key,
    "lex": _lex_key,
}

DEFAULT_DEGREE_BUDGET = 64
DEFAULT_BASIS_BUDGET = 20000


class Ring:
    """F_p[variables] modulo a defining ideal (empty ideal = polynomial ring).

    The maximal ideal is always taken to be the irrelevant ideal generated by
    all variables; elements meant to lie in it must have zero constant term.
    """

    __slots__ = ("p", "variables", "order", "order_key", "defining",
                 "degree_budget", "basis_budget", "regular",
                 "_gb", "_key", "_hash")

    def __init__(self, p, variables, order="grevlex", defining=(), *,
                 degree_budget=DEFAULT_DEGREE_BUDGET,
                 basis_budget=DEFAULT_BASIS_BUDGET,
                 regular=False):
        if not isinstance(p, int) or not is_prime(p):
            raise InputError(f"characteristic must be a prime integer, got {p!r}")
        if p.bit_length() > 62:
            raise InputError("characteristic must fit a machine word")
        variables = tuple(variables)
        if not variables:
            raise InputError("at least one variable is required")
        if len(set(variables)) != len(variables):
            raise InputError("duplicate variable names")
        for name in variables:
            if not name.isidentifier():
                raise InputError(f"bad variable name {name!r}")
        if order not in MONOMIAL_ORDERS:
            raise InputError(f"unknown monomial order {order!r}")
        self.p = p
        self.variables = variables
        self.order = order
        self.order_key = MONOMIAL_ORDERS[order]
        self.degree_budget = degree_budget
        self.basis_budget = basis_budget
        self.regular = bool(regular)
        self._gb = None
        self.defining = ()
        polys = tuple(self.poly(g) for g in defining)
        self.defining = tuple(g for g in polys if not g.is_zero())
        self._key = (p, variables, order, self.regular,
                     tuple(sorted(g.key() for g in self.defining)))
        self._hash = hash(self._key)

    # -- identity ----------------------------------------------------------

    def key(self):
        return self._key

    def __eq__(self, other):
        return self is other or (isinstance(other, Ring) and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        quot = " / (" + ", ".join(str(g) for g in self.defining) + ")" if self.defining else ""
        return f"F_{self.p}[{', '.join(self.variables)}]{quot}"

    # -- construction helpers ----------------------------------------------

    @property
    def nvars(self):
        return len(self.variables)

    @property
    def is_quotient(self):
        return bool(self.defining)

    def zero(self):
        return Poly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = c % self.p
        if c == 0:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name):
        try:
            i = self.variables.index(name)
        except ValueError:
            raise InputError(f"unknown variable {name!r} (declared: {', '.join(self.variables)})")
        exps = [0] * self.nvars
        exps[i] = 1
        return Poly(self, {tuple(exps): 1})

    def gens(self):
        return [self.var(v) for v in self.variables]

    def monomial(self, exps, c=1):
        exps = tuple(exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise InputError("bad exponent vector")
        c = c % self.p
        return Poly(self, {exps: c} if c else {})

    def from_terms(self, items):
        terms = {}
        for exps, c in items:
            exps = tuple(exps)
            c = (terms.get(exps, 0) + c) % self.p
            if c:
                terms[exps] = c
            else:
                terms.pop(exps, None)
        return Poly(self, terms)

    def poly(self, x):
        """Coerce a string, int or Poly into this ring."""
        if isinstance(x, Poly):
            if x.ring is self or x.ring.key()[:3] == self._key[:3]:
                return Poly(self, x.terms)
            raise InputError("polynomial from a different ring")
        if isinstance(x, int):
            return self.const(x)
        if isinstance(x, str):
            from .parse import parse_poly
            return parse_poly(x, self)
        raise InputError(f"cannot coerce {type(x).__name__} into {self!r}")

    # -- quotient structure --------------------------------------------------

    def defining_basis(self):
        """Reduced Groebner basis of the defining ideal (cached)."""
        if self._gb is None:
            from . import groebner
            self._gb = groebner.groebner(list(self.defining), self)
        return self._gb

    def normal(self, f):
        """Normal form of a ring element modulo the defining ideal."""
        from . import groebner
        return groebner.nf(self.poly(f), self.defining_basis(), self)

    def is_zero_in_quotient(self, f):
        return self.normal(f).is_zero()

    def check_degree(self, d):
        if self.degree_budget is not None and d > self.degree_budget:
            raise BudgetError(
                f"total degree {d} exceeds the degree budget {self.degree_budget}")

    def require_in_maximal(self, f, what="element"):
        """Validate zero constant term (graded-local convention)."""
        g = self.normal(f)
        if g.constant_term() != 0:
            raise InputError(f"{what} {f} has nonzero constant term, "
                             "so it is outside the maximal ideal")
        return g


class Poly:
    """A polynomial: sparse map from exponent tuples to coefficients in [1, p)."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    # -- predicates / views --------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def key(self):
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring._hash, self.key()))

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, 0)

    def lead(self):
        """(exponents, coefficient) of the leading term in the ring order."""
        if not self.terms:
            raise InputError("zero polynomial has no leading term")
        m = max(self.terms, key=self.ring.order_key)
        return m, self.terms[m]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: self.ring.order_key(t[0]),
                      reverse=True)

    def is_monomial(self):
        return len(self.terms) == 1

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise InputError("mixed-ring arithmetic")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly(self.ring, {m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.ring.p
            if c == 0:
                return self.ring.zero()
            p = self.ring.p
            return Poly(self.ring, {m: v * c % p for m, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.ring.p
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = (out.get(m, 0) + c1 * c2) % p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        if out:
            self.ring.check_degree(max(sum(e) for e in out))
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise InputError("negative exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n >>= 1
        return result

    def shift(self, exps, c=1):
        """Multiply by c * (monomial with the given exponents)."""
        p = self.ring.p
        c %= p
        if c == 0 or not self.terms:
            return self.ring.zero()
        out = {tuple(a + b for a, b in zip(m, exps)): v * c % p
               for m, v in self.terms.items()}
        return Poly(self.ring, out)

    def q_power(self, e):
        """The p^e-th power, via exponent scaling.

        Valid over the prime field only: coefficients are Frobenius-fixed.
        """
        if e < 0:
            raise InputError("negative Frobenius exponent")
        if e == 0:
            return self
        q = self.ring.p ** e
        out = {tuple(a * q for a in m): c for m, c in self.terms.items()}
        if out:
            self.ring.check_degree(max(sum(m) for m in out))
        return Poly(self.ring, out)

    # -- text -------------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for exps, c in self.sorted_terms():
            factors = []
            if c != 1 or not any(exps):
                factors.append(str(c))
            for name, e in zip(self.ring.variables, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            bits.append("*".join(factors))
        return "+".join(bits)

    def __repr__(self):
        return f"<{self} over {self.ring!r}>"
