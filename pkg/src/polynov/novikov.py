"""
Truncated arithmetic in the Novikov completion of a group ring.

A series is stored by its terms of height strictly below an absolute
precision N: the value is known modulo terms of height >= N, as in p-adic
arithmetic.  Heights are taken against a fixed integer character u, and the
zero series has valuation N by convention, which keeps precision
propagation total:

    prec(x + y)  =  min(prec x, prec y)
    prec(x * y)  =  min(prec x + val y, prec y + val x)

A series whose lowest stored level is a single group element with
coefficient +-1 (any nonzero scalar over a prime field) is a certified
unit: writing x = c*g*(1 + mu) with mu supported at strictly higher
relative height, the inverse is the geometric series sum((-mu)^k) * (c*g)^-1,
finite below any precision.  Certification reads only exact data, so a
positive answer is exact rather than approximate.
"""

from .errors import (
    MismatchedParents,
    NotAUnit,
    NotUPositive,
    PrecisionTooLow,
    ZeroBelowPrecision,
)
from .groupring import RingElement, format_ring

DEFAULT_PRECISION = 32


class UnitCertificate:
    """Leading height, leading group element and its coefficient."""

    __slots__ = ("height", "element", "coeff")

    def __init__(self, height, element, coeff):
        self.height = height
        self.element = element
        self.coeff = coeff

    def __repr__(self):
        return "UnitCertificate(v=%d, %d*%s)" % (self.height, self.coeff,
                                                 self.element)


class NovikovSeries:
    __slots__ = ("pres", "u", "p", "prec", "terms")

    def __init__(self, pres, u, terms, prec, p=None):
        self.pres = pres
        self.u = u
        self.p = p
        self.prec = prec
        clean = {}
        for nf, c in terms.items():
            if self.p is not None:
                c %= self.p
            if c and u.evaluate(nf) < prec:
                clean[tuple(nf)] = c
        self.terms = clean

    # -- constructors

    @classmethod
    def zero(cls, pres, u, prec, p=None):
        return cls(pres, u, {}, prec, p)

    @classmethod
    def one(cls, pres, u, prec, p=None):
        return cls(pres, u, {pres.identity: 1}, prec, p)

    @classmethod
    def monomial(cls, pres, u, nf, coeff, prec, p=None):
        return cls(pres, u, {tuple(nf): coeff}, prec, p)

    def _like(self, terms, prec):
        return NovikovSeries(self.pres, self.u, terms, prec, self.p)

    def _check(self, other):
        if (other.pres is not self.pres or other.p != self.p
                or other.u.values != self.u.values):
            raise MismatchedParents("series live over different completions")

    # -- inspection

    def val(self):
        """Leading height; the precision itself for the zero series."""
        if not self.terms:
            return self.prec
        return min(self.u.evaluate(nf) for nf in self.terms)

    def is_zero(self):
        return not self.terms

    def leading_level(self):
        v = self.val()
        return v, {nf: c for nf, c in self.terms.items()
                   if self.u.evaluate(nf) == v}

    def sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda item: (self.u.evaluate(item[0]), item[0]))

    def truncate(self, prec):
        if prec > self.prec:
            raise PrecisionTooLow("cannot raise precision by truncation")
        return self._like(self.terms, prec)

    def truncate_to(self, prec):
        """Truncate only when the series knows more than `prec`."""
        return self._like(self.terms, prec) if self.prec > prec else self

    def agrees_with(self, other, below=None):
        """Equality of all stored terms of height < below (default: min prec)."""
        cut = min(self.prec, other.prec)
        if below is not None:
            cut = min(cut, below)
        pick = lambda s: {nf: c for nf, c in s.terms.items()
                          if s.u.evaluate(nf) < cut}
        return pick(self) == pick(other)

    # -- arithmetic

    def __add__(self, other):
        if isinstance(other, int):
            other = NovikovSeries.one(self.pres, self.u, self.prec, self.p) * other
        self._check(other)
        prec = min(self.prec, other.prec)
        terms = dict(self.terms)
        for nf, c in other.terms.items():
            terms[nf] = terms.get(nf, 0) + c
        return self._like(terms, prec)

    __radd__ = __add__

    def __neg__(self):
        return self._like({nf: -c for nf, c in self.terms.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self._like({nf: c * other for nf, c in self.terms.items()},
                              self.prec)
        self._check(other)
        prec = min(self.prec + other.val(), other.prec + self.val())
        terms = {}
        mul = self.pres.multiply
        ev = self.u.evaluate
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                gh = mul(g, h)
                if ev(gh) < prec:
                    terms[gh] = terms.get(gh, 0) + a * b
        return self._like(terms, prec)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.__mul__(other)
        return NotImplemented

    def mul_monomial(self, coeff, g, side="left"):
        """Exact multiplication by a monomial; precision shifts by its height."""
        h = self.u.evaluate(g)
        mul = self.pres.multiply
        terms = {}
        for nf, c in self.terms.items():
            key = mul(g, nf) if side == "left" else mul(nf, g)
            terms[key] = terms.get(key, 0) + coeff * c
        return self._like(terms, self.prec + h)

    def __eq__(self, other):
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return (self.pres is other.pres and self.p == other.p
                and self.u.values == other.u.values
                and self.prec == other.prec and self.terms == other.terms)

    def __hash__(self):
        raise TypeError("unhashable")

    # -- units

    def certify_unit(self):
        """UnitCertificate if the lowest level is a single +-monomial, else None."""
        if not self.terms:
            raise ZeroBelowPrecision("no stored terms below precision")
        v, level = self.leading_level()
        if len(level) != 1:
            return None
        (nf, c), = level.items()
        if self.p is None and c not in (1, -1):
            return None
        return UnitCertificate(v, nf, c)

    def invert_unit(self):
        cert = self.certify_unit()
        if cert is None:
            raise NotAUnit("leading level is not a single invertible monomial")
        pres, u = self.pres, self.u
        ginv = pres.invert(cert.element)
        if self.p is None:
            cinv = cert.coeff           # +-1
        else:
            cinv = pow(cert.coeff, -1, self.p)
        # mu = (c g)^-1 x - 1, supported at heights > 0
        mu = self.mul_monomial(cinv, ginv, side="left") - \
            NovikovSeries.one(pres, u, self.prec - cert.height, self.p)
        work = mu.prec
        acc = NovikovSeries.one(pres, u, work, self.p)
        power = acc
        while True:
            # powers of mu gain precision as fast as valuation; cap at the
            # working precision so the series is finite
            power = (power * (-mu)).truncate_to(work)
            if power.is_zero():
                break
            acc = acc + power
        return acc.mul_monomial(cinv, ginv, side="right")

    def __repr__(self):
        body = " + ".join("%d*%s" % (c, self.pres.format_element(nf))
                          for nf, c in self.sorted_terms()) or "0"
        return "<NovikovSeries %s @prec %d>" % (body, self.prec)


def embed(x, u, prec, allow_truncate=False, p=None):
    """Image of a group ring element at the given absolute precision."""
    if p is None:
        p = x.p
    elif x.p is not None and x.p != p:
        raise MismatchedParents("coefficient fields disagree")
    if x.terms and not allow_truncate:
        top = max(u.evaluate(nf) for nf in x.terms)
        if top >= prec:
            raise PrecisionTooLow(
                "element has a term at height %d >= precision %d" % (top, prec))
    return NovikovSeries(x.pres, u, dict(x.terms), prec, p)


def series_to_ring(x):
    return RingElement(x.pres, dict(x.terms), x.p)


def format_series(x):
    return "%s @prec %d" % (format_ring(series_to_ring(x)), x.prec)


# ---------------------------------------------------------------------------

class NovikovMatrix:
    """Rectangular matrix of series sharing one character and precision."""

    __slots__ = ("pres", "u", "p", "rows", "cols", "entries")

    def __init__(self, entries, pres=None, u=None, p=None):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        for row in self.entries:
            if len(row) != self.cols:
                raise MismatchedParents("ragged matrix")
        if self.entries and self.cols:
            first = self.entries[0][0]
            pres, u, p = first.pres, first.u, first.p
        self.pres, self.u, self.p = pres, u, p

    @classmethod
    def identity(cls, pres, u, n, prec, p=None):
        one = NovikovSeries.one(pres, u, prec, p)
        zero = NovikovSeries.zero(pres, u, prec, p)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)],
                   pres, u, p)

    @classmethod
    def zeros(cls, pres, u, rows, cols, prec, p=None):
        zero = NovikovSeries.zero(pres, u, prec, p)
        return cls([[zero for _ in range(cols)] for _ in range(rows)],
                   pres, u, p)

    @classmethod
    def from_ring(cls, ring_rows, u, prec, p=None, allow_truncate=False):
        return cls([[embed(x, u, prec, allow_truncate, p) for x in row]
                    for row in ring_rows])

    def prec(self):
        if not self.entries or not self.cols:
            return None
        return min(x.prec for row in self.entries for x in row)

    def map(self, fn):
        return NovikovMatrix([[fn(x) for x in row] for row in self.entries],
                             self.pres, self.u, self.p)

    def __add__(self, other):
        return NovikovMatrix(
            [[a + b for a, b in zip(r1, r2)]
             for r1, r2 in zip(self.entries, other.entries)],
            self.pres, self.u, self.p)

    def __sub__(self, other):
        return NovikovMatrix(
            [[a - b for a, b in zip(r1, r2)]
             for r1, r2 in zip(self.entries, other.entries)],
            self.pres, self.u, self.p)

    def __neg__(self):
        return self.map(lambda x: -x)

    def compose(self, other):
        """Matrix of self . other for column-per-source, left-coefficient data.

        Left-module composition multiplies the inner map's entries on the
        left: (self . other)[i][j] = sum_s other[s][j] * self[i][s].
        """
        if other.rows != self.cols:
            raise MismatchedParents("shape mismatch in composition")
        if self.cols == 0 or other.cols == 0:
            prec = self.prec() or other.prec() or DEFAULT_PRECISION
            return NovikovMatrix.zeros(self.pres, self.u, self.rows, other.cols,
                                       prec, self.p)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = None
                for s in range(self.cols):
                    term = other.entries[s][j] * self.entries[i][s]
                    acc = term if acc is None else acc + term
                row.append(acc)
            out.append(row)
        return NovikovMatrix(out, self.pres, self.u, self.p)

    def is_zero_below_prec(self):
        return all(x.is_zero() for row in self.entries for x in row)

    def min_val(self):
        vals = [x.val() for row in self.entries for x in row]
        return min(vals) if vals else None

    def u_positive_violation(self):
        """(i, j) of the first entry that is not u-positive, or None."""
        for i, row in enumerate(self.entries):
            for j, x in enumerate(row):
                if not x.is_zero() and x.val() <= 0:
                    return (i, j)
        return None

    def normalized(self):
        """Truncate every entry to the common (minimal) precision."""
        prec = self.prec()
        if prec is None:
            return self
        return self.map(lambda x: x.truncate(min(x.prec, prec)) if x.prec > prec
                        else x)


def invert_id_minus(A):
    """B with (Id - A) . B = B . (Id - A) = Id, for u-positive A.

    The geometric series Id + A + A.A + ... is finite below the working
    precision because entry heights are at least 1 and add under
    composition.
    """
    bad = A.u_positive_violation()
    if bad is not None:
        raise NotUPositive("entry (%d, %d) is not u-positive" % bad,
                           entry=bad)
    if A.rows != A.cols:
        raise MismatchedParents("only square matrices can be inverted")
    prec = A.prec()
    B = NovikovMatrix.identity(A.pres, A.u, A.rows, prec, A.p)
    power = B
    while True:
        power = power.compose(A).map(lambda x: x.truncate_to(prec))
        if power.is_zero_below_prec():
            break
        B = B + power
    return B.normalized()
