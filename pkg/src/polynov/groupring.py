"""
Exact group ring arithmetic over pc normal forms.

Elements are finitely supported sums of normal forms with integer or
prime-field coefficients.  Multiplication collects products of group
elements; terms are kept in lexicographic exponent order, which fixes a
character-independent serialisation.
"""

import re

from .errors import MismatchedParents, ParseError, UndeclaredGenerator, ZeroElement
from .pcgroup import INFINITE


def _coeff_norm(c, p):
    if p is None:
        return c
    return c % p


class RingElement:
    """Finitely supported map normal form -> nonzero coefficient."""

    __slots__ = ("pres", "p", "terms")

    def __init__(self, pres, terms=None, p=None):
        self.pres = pres
        self.p = p
        clean = {}
        if terms:
            for nf, c in terms.items():
                c = _coeff_norm(c, p)
                if c:
                    clean[tuple(nf)] = c
        self.terms = clean

    # -- constructors

    @classmethod
    def zero(cls, pres, p=None):
        return cls(pres, {}, p)

    @classmethod
    def one(cls, pres, p=None):
        return cls(pres, {pres.identity: 1}, p)

    @classmethod
    def monomial(cls, pres, nf, coeff=1, p=None):
        return cls(pres, {tuple(nf): coeff}, p)

    @classmethod
    def from_int(cls, pres, n, p=None):
        return cls(pres, {pres.identity: n}, p)

    def _like(self, terms):
        return RingElement(self.pres, terms, self.p)

    def _check(self, other):
        if not isinstance(other, RingElement):
            raise TypeError("expected a ring element")
        if other.pres is not self.pres or other.p != self.p:
            raise MismatchedParents("ring elements live over different rings")

    # -- ring operations

    def __add__(self, other):
        if isinstance(other, int):
            other = RingElement.from_int(self.pres, other, self.p)
        self._check(other)
        terms = dict(self.terms)
        for nf, c in other.terms.items():
            terms[nf] = terms.get(nf, 0) + c
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._like({nf: -c for nf, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = RingElement.from_int(self.pres, other, self.p)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like({nf: c * other for nf, c in self.terms.items()})
        self._check(other)
        terms = {}
        mul = self.pres.multiply
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                gh = mul(g, h)
                terms[gh] = terms.get(gh, 0) + a * b
        return self._like(terms)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.__mul__(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, int):
            other = RingElement.from_int(self.pres, other, self.p)
        if not isinstance(other, RingElement):
            return NotImplemented
        return (self.pres is other.pres and self.p == other.p
                and self.terms == other.terms)

    def __hash__(self):
        return hash((id(self.pres), self.p, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    # -- structure maps

    def involution(self):
        """g -> g^-1 extended linearly; an anti-automorphism."""
        inv = self.pres.invert
        terms = {}
        for nf, c in self.terms.items():
            terms[inv(nf)] = terms.get(inv(nf), 0) + c
        return self._like(terms)

    def augmentation(self):
        """Sum of coefficients, in the coefficient ring."""
        return _coeff_norm(sum(self.terms.values()), self.p)

    # -- heights

    def heights(self, u):
        return [u.evaluate(nf) for nf in self.terms]

    def height_range(self, u):
        if not self.terms:
            raise ZeroElement("height range of the zero element")
        hs = self.heights(u)
        return (min(hs), max(hs))

    def is_u_positive(self, u):
        # vacuously true for the zero element
        return all(h > 0 for h in self.heights(u))

    def support(self):
        return sorted(self.terms)

    # -- display

    def __repr__(self):
        return "<RingElement %s>" % format_ring(self)


def format_ring(x):
    if not x.terms:
        return "0"
    parts = []
    for nf in sorted(x.terms):
        c = x.terms[nf]
        mono = "*".join(
            (g if e == 1 else "%s^%d" % (g, e))
            for g, e in zip(x.pres.gens, nf) if e)
        if not mono:
            body = str(abs(c)) if x.p is None else str(c)
        elif abs(c) == 1 and x.p is None:
            body = mono
        elif x.p is not None:
            body = "%d*%s" % (c, mono) if c != 1 else mono
        else:
            body = "%d*%s" % (abs(c), mono)
        if x.p is None and c < 0:
            parts.append(("- ", body))
        else:
            parts.append(("+ ", body))
    sign0, body0 = parts[0]
    text = ("-" + body0) if sign0 == "- " else body0
    for sign, body in parts[1:]:
        text += " " + sign + body
    return text


# ---------------------------------------------------------------------------
# matrices of ring elements, column-per-source with left coefficients

def mat_compose(A, B):
    """Matrix of A . B: inner entries multiply on the left.

    For maps stored column-per-source-basis-element with left-module
    coefficients, (A . B)[i][j] = sum_s B[s][j] * A[i][s].
    """
    if not A or not B:
        return []
    rows, mid, cols = len(A), len(B), len(B[0]) if B else 0
    if mid != (len(A[0]) if A else 0):
        raise MismatchedParents("shape mismatch in composition")
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for s in range(mid):
                term = B[s][j] * A[i][s]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def mat_ring_identity(pres, n, p=None):
    return [[RingElement.one(pres, p) if i == j else RingElement.zero(pres, p)
             for j in range(n)] for i in range(n)]


def mat_ring_zero(pres, rows, cols, p=None):
    return [[RingElement.zero(pres, p) for _ in range(cols)] for _ in range(rows)]


def mat_ring_sub(A, B):
    return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(A, B)]


def mat_ring_equal(A, B):
    if len(A) != len(B):
        return False
    return all(len(r1) == len(r2) and all(a == b for a, b in zip(r1, r2))
               for r1, r2 in zip(A, B))


def mat_ring_is_zero(A):
    return all(x.is_zero() for row in A for x in row)


# ---------------------------------------------------------------------------
# expression parser: signed integer coefficients, optional '*', '^' powers

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\^)|(\*)|(\+)|(-))")


def _tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ParseError("bad character %r in expression %r"
                                 % (text[pos], text))
            break
        pos = m.end()
        num, name, caret, star, plus, minus = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        elif caret:
            out.append(("pow", None))
        elif star:
            out.append(("mul", None))
        elif plus:
            out.append(("plus", None))
        elif minus:
            out.append(("minus", None))
    return out


def parse_ring_expr(pres, text, p=None):
    """Parse expressions like `1 - a*b^-1 + 3*b^2` into a RingElement."""
    toks = _tokenize(text)
    result = RingElement.zero(pres, p)
    i = 0
    n = len(toks)
    first = True
    while i < n:
        sign = 1
        saw_sign = False
        while i < n and toks[i][0] in ("plus", "minus"):
            if toks[i][0] == "minus":
                sign = -sign
            saw_sign = True
            i += 1
        if i >= n:
            if saw_sign:
                raise ParseError("dangling sign in expression %r" % text)
            break
        if not first and not saw_sign:
            raise ParseError("missing operator in expression %r" % text)
        first = False
        coeff = 1
        have_body = False
        if toks[i][0] == "num":
            coeff = toks[i][1]
            have_body = True
            i += 1
            if i < n and toks[i][0] == "mul":
                i += 1
        word = []
        while i < n and toks[i][0] == "name":
            gname = toks[i][1]
            if gname not in pres.names:
                raise UndeclaredGenerator("undeclared generator %r in expression"
                                          % gname)
            i += 1
            e = 1
            if i < n and toks[i][0] == "pow":
                i += 1
                esign = 1
                if i < n and toks[i][0] == "minus":
                    esign = -1
                    i += 1
                if i >= n or toks[i][0] != "num":
                    raise ParseError("bad power in expression %r" % text)
                e = esign * toks[i][1]
                i += 1
            word.append((pres.names[gname], e))
            have_body = True
            if i < n and toks[i][0] == "mul":
                i += 1
        if not have_body:
            raise ParseError("empty term in expression %r" % text)
        nf = pres.collect(tuple(word))
        result = result + RingElement.monomial(pres, nf, sign * coeff, p)
    return result
