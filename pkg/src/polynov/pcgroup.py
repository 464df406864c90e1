"""
Polycyclic group engine: presentations, collection, normal forms, characters.

Conventions.  Generators come in a fixed order g1 < g2 < ... < gk; a normal
form is g1^e1 ... gk^ek with 0 <= ei < ri whenever the relative order ri is
finite.  The subgroup generated by the last i generators is normalised by
every earlier one, so a conjugation relation gi^s gj gi^-s = w (i < j,
s = +-1) must rewrite gj into a word w in g_{i+1} ... gk.

Collection from the left moves an out-of-order syllable across a tail:
tail * gj^e  ->  gj^e * (gj^-e tail gj^e), then normalises finite exponents
through the power relations (g^e = g^(e mod r) * (g^r)^q, legal because g^r
commutes with g).  When the generators above gj form a free abelian block,
conjugation acts by a unimodular integer matrix and whole tails move in one
step; otherwise relation words are applied letterwise.  A global step budget
guards against inconsistent input, for which collection need not terminate.
"""

import itertools
import re
from fractions import Fraction

from .errors import (
    CharacterInconsistent,
    CollectionBudgetExceeded,
    InconsistentPresentation,
    MalformedRelation,
    ParseError,
    UndeclaredGenerator,
)

INFINITE = None
DEFAULT_BUDGET = 10 ** 6

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")


# ---------------------------------------------------------------------------
# words: tuples of (generator index, exponent) syllables

def parse_word(names, text, where=""):
    """Parse whitespace-separated tokens like `b a^-1` into syllables."""
    word = []
    for tok in text.split():
        if tok == "1":
            continue
        if "^" in tok:
            base, _, exp = tok.partition("^")
            try:
                e = int(exp)
            except ValueError:
                raise MalformedRelation("bad exponent in %r%s" % (tok, where))
        else:
            base, e = tok, 1
        if base not in names:
            raise UndeclaredGenerator("undeclared generator %r%s" % (base, where))
        if e:
            word.append((names[base], e))
    return tuple(word)


def invert_word(word):
    return tuple((i, -e) for i, e in reversed(word))


def word_power(word, q):
    if q >= 0:
        return tuple(word) * q
    return invert_word(word) * (-q)


def free_reduce(word):
    out = []
    for i, e in word:
        if e == 0:
            continue
        if out and out[-1][0] == i:
            m = out[-1][1] + e
            out.pop()
            if m:
                out.append((i, m))
        else:
            out.append((i, e))
    return tuple(out)


def format_word(gens, word):
    if not word:
        return "1"
    parts = []
    for i, e in word:
        parts.append(gens[i] if e == 1 else "%s^%d" % (gens[i], e))
    return " ".join(parts)


# ---------------------------------------------------------------------------
# small exact integer matrices (lists of lists)

def mat_id(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, m, r = len(A), len(B[0]), len(B)
    return [[sum(A[i][s] * B[s][j] for s in range(r)) for j in range(m)]
            for i in range(n)]


def mat_pow(A, e):
    n = len(A)
    result = mat_id(n)
    base = [row[:] for row in A]
    k = e
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def mat_vec(A, v):
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


def mat_inv_unimodular(A):
    """Exact inverse of an integer matrix; None unless det = +-1."""
    n = len(A)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(A)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            return None
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            det = -det
        det *= work[col][col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    if det not in (1, -1):
        return None
    return [[int(work[i][n + j]) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------

class PcPresentation:
    """A consistent-by-convention polycyclic presentation with collection."""

    def __init__(self, gens, orders, conj_relations=(), power_relations=(),
                 extra_relations=(), step_budget=DEFAULT_BUDGET):
        gens = list(gens)
        if len(set(gens)) != len(gens):
            raise ParseError("duplicate generator names")
        for g in gens:
            if not _NAME_RE.match(g):
                raise ParseError("bad generator name %r" % g)
        self.gens = gens
        self.names = {g: i for i, g in enumerate(gens)}
        self.k = len(gens)
        self.orders = list(orders)
        if len(self.orders) != self.k:
            raise ParseError("need one relative order per generator")
        for r in self.orders:
            if r is not INFINITE and (not isinstance(r, int) or r < 1):
                raise ParseError("relative orders are positive integers or infinite")
        self.step_budget = step_budget
        self.extra_relations = [(tuple(l), tuple(r)) for (l, r) in extra_relations]
        self.conj = {}
        for (i, s, j, word) in conj_relations:
            self._add_conj(i, s, j, tuple(word))
        self.power_words = {}
        for (i, word) in power_relations:
            if self.orders[i] is INFINITE:
                raise MalformedRelation(
                    "power relation for infinite-order generator %r" % self.gens[i])
            self._check_later(word, i, "power relation")
            self.power_words[i] = tuple(word)
        self._finalize()

    # -- construction helpers

    def _check_later(self, word, i, what):
        for (j, _) in word:
            if j <= i:
                raise MalformedRelation(
                    "%s for %s uses generator %s not later in the order"
                    % (what, self.gens[i], self.gens[j]))

    def _add_conj(self, i, s, j, word):
        if not (0 <= i < j < self.k) or s not in (1, -1):
            raise MalformedRelation("conjugation relation indices out of range")
        word = free_reduce(word)
        self._check_later(word, i, "conjugation relation")
        key = (i, s, j)
        if key in self.conj and self.conj[key] != word:
            # contradictory duplicate: keep the first as the rewriting rule and
            # remember the second as an extra identity for the consistency check
            lhs = ((i, s), (j, 1), (i, -s))
            self.extra_relations.append((lhs, word))
            return
        self.conj[key] = word

    def _finalize(self):
        k = self.k
        # suffix_abelian[j]: generators j+1..k-1 are infinite order and commute
        suffix = [True] * (k + 1)
        for j in range(k - 2, -1, -1):
            ok = suffix[j + 1] and self.orders[j + 1] is INFINITE
            if ok:
                for l in range(j + 2, k):
                    for s in (1, -1):
                        w = self.conj.get((j + 1, s, l))
                        if w is not None and w != ((l, 1),):
                            ok = False
            suffix[j] = ok
        self.suffix_abelian = suffix

        # derive missing conjugation directions over free abelian tails
        self.conj_matrix = {}
        for i in range(k - 1):
            given = {s: any((i, s, l) in self.conj for l in range(i + 1, k))
                     for s in (1, -1)}
            if not (given[1] or given[-1]):
                continue
            if self.suffix_abelian[i]:
                for s in (1, -1):
                    if given[s]:
                        self.conj_matrix[(i, s)] = self._tail_matrix(i, s)
                for s in (1, -1):
                    if given[s] and not given[-s]:
                        M = self.conj_matrix[(i, s)]
                        Minv = mat_inv_unimodular(M)
                        if Minv is None:
                            raise InconsistentPresentation(
                                "conjugation by %s does not act invertibly on the "
                                "abelian block above it" % self.gens[i])
                        for l in range(i + 1, k):
                            col = [Minv[r][l - i - 1] for r in range(k - i - 1)]
                            word = tuple((i + 1 + r, col[r])
                                         for r in range(len(col)) if col[r])
                            self.conj[(i, -s, l)] = word
                        self.conj_matrix[(i, -s)] = Minv
            elif self.orders[i] is not INFINITE:
                # g^-1 = g^(r-1) w^-1 for g^r = w, so the inverse conjugate is
                # the forward substitution applied r-1 times to w^-1 x w
                r = self.orders[i]
                w = self.power_words.get(i, ())
                for l in range(i + 1, k):
                    has_p = (i, 1, l) in self.conj
                    has_m = (i, -1, l) in self.conj
                    if has_p and not has_m:
                        word = invert_word(w) + ((l, 1),) + tuple(w)
                        for _ in range(r - 1):
                            word = self._subst_conj(i, 1, word)
                        self.conj[(i, -1, l)] = free_reduce(word)
                    elif has_m and not has_p:
                        word = ((l, 1),)
                        for _ in range(r - 1):
                            word = self._subst_conj(i, -1, word)
                        word = tuple(w) + tuple(word) + invert_word(w)
                        self.conj[(i, 1, l)] = free_reduce(word)
            else:
                for l in range(i + 1, k):
                    has_p = (i, 1, l) in self.conj
                    has_m = (i, -1, l) in self.conj
                    if has_p != has_m:
                        raise MalformedRelation(
                            "generators above %s are not free abelian; give both "
                            "conjugation directions for %s"
                            % (self.gens[i], self.gens[l]))
        self._mult_cache = {}
        self.identity = (0,) * k

    def _tail_matrix(self, i, s):
        """Action of conjugation by g_i^s on the free abelian block above i."""
        n = self.k - i - 1
        M = [[0] * n for _ in range(n)]
        for l in range(i + 1, self.k):
            word = self.conj.get((i, s, l), ((l, 1),))
            for (m, e) in word:
                M[m - i - 1][l - i - 1] += e
        return M

    # -- collection

    def _conj_word(self, i, s, l):
        return self.conj.get((i, s, l), ((l, 1),))

    def _subst_conj(self, i, s, word):
        """Replace every letter g_l by the word for g_i^s g_l g_i^-s."""
        out = []
        for (l, m) in word:
            out.extend(word_power(self._conj_word(i, s, l), m))
        return free_reduce(out)

    def collect(self, word, budget=None):
        """Unique normal form of a word, as an exponent tuple."""
        budget = self.step_budget if budget is None else budget
        out = []  # [(index, exponent)] with strictly increasing indices
        pending = [s for s in reversed(word) if s[1] != 0]
        steps = 0
        while pending:
            steps += 1
            if steps > budget:
                raise CollectionBudgetExceeded(
                    "collection exceeded %d steps; presentation may be "
                    "inconsistent" % budget)
            j, e = pending.pop()
            if e == 0:
                continue
            # split normal prefix around index j
            pos = len(out)
            while pos > 0 and out[pos - 1][0] >= j:
                pos -= 1
            e0 = 0
            tail_start = pos
            if pos < len(out) and out[pos][0] == j:
                e0 = out[pos][1]
                tail_start = pos + 1
            tail = out[tail_start:]
            del out[pos:]
            if not tail:
                self._append_norm(out, j, e0 + e, pending)
                continue
            moved = self._conjugate_tail(tail, j, e, budget, steps)
            pending.extend(reversed(moved))
            pending.append((j, e0 + e))
        return self._to_vector(out)

    def _append_norm(self, out, j, e, pending):
        # out ends strictly below j here
        if e == 0:
            return
        r = self.orders[j]
        if r is not INFINITE and not 0 <= e < r:
            q, e = divmod(e, r)
            w = self.power_words.get(j, ())
            if w and q:
                pending.extend(reversed(word_power(w, q)))
        if e:
            out.append((j, e))

    def _conjugate_tail(self, tail, j, e, budget, steps):
        """Syllables for g_j^-e * tail * g_j^e as a word in indices > j."""
        if self.suffix_abelian[j]:
            n = self.k - j - 1
            v = [0] * n
            for (l, m) in tail:
                v[l - j - 1] += m
            s = -1 if e > 0 else 1
            M = self.conj_matrix.get((j, s))
            if M is None:
                return list(tail)  # commuting block
            v = mat_vec(mat_pow(M, abs(e)), v)
            return [(j + 1 + r, v[r]) for r in range(n) if v[r]]
        word = list(tail)
        s = -1 if e > 0 else 1
        for _ in range(abs(e)):
            new = []
            for (l, m) in word:
                piece = word_power(self._conj_word(j, s, l), m)
                new.extend(piece)
                steps += len(piece)
                if steps > budget:
                    raise CollectionBudgetExceeded(
                        "collection exceeded %d steps during conjugation" % budget)
            word = new
        return word

    def _to_vector(self, out):
        v = [0] * self.k
        for (i, e) in out:
            v[i] = e
        return tuple(v)

    def syllables(self, nf):
        return tuple((i, e) for i, e in enumerate(nf) if e)

    # -- group operations on normal forms

    def multiply(self, x, y):
        key = (x, y)
        hit = self._mult_cache.get(key)
        if hit is None:
            hit = self.collect(self.syllables(x) + self.syllables(y))
            self._mult_cache[key] = hit
        return hit

    def invert(self, x):
        return self.collect(invert_word(self.syllables(x)))

    def format_element(self, nf):
        return format_word(self.gens, self.syllables(nf))

    # -- invariants

    def hirsch_number(self):
        return sum(1 for r in self.orders if r is INFINITE)

    def is_poly_Z(self):
        return all(r is INFINITE for r in self.orders)

    def torsion_status(self):
        return "TORSION_FREE" if self.is_poly_Z() else "UNKNOWN"

    def enumerate_elements(self):
        """All normal forms; only for presentations with finite relative orders."""
        if any(r is INFINITE for r in self.orders):
            raise InconsistentPresentation("group is not finite")
        return [tuple(v) for v in itertools.product(*(range(r) for r in self.orders))]

    # -- consistency

    def check_consistency(self):
        """Collect the overlap identities both ways and compare normal forms."""
        failures = []
        checked = 0

        def nf(word):
            return self.collect(word)

        def instance(name, lhs_nf, rhs_nf, lhs_text, rhs_text):
            nonlocal checked
            checked += 1
            if lhs_nf != rhs_nf:
                failures.append({
                    "identity": name,
                    "lhs": lhs_text,
                    "rhs": rhs_text,
                    "lhs_collected": self.format_element(lhs_nf),
                    "rhs_collected": self.format_element(rhs_nf),
                })

        k = self.k
        g = lambda i, e=1: ((i, e),)
        try:
            for i in range(k):
                for j in range(i + 1, k):
                    for l in range(j + 1, k):
                        a = self.multiply(nf(g(l)), nf(g(j) + g(i)))
                        b = self.multiply(nf(g(l) + g(j)), nf(g(i)))
                        instance("g%d (g%d g%d) = (g%d g%d) g%d" % (l, j, i, l, j, i),
                                 a, b,
                                 "%s (%s %s)" % (self.gens[l], self.gens[j], self.gens[i]),
                                 "(%s %s) %s" % (self.gens[l], self.gens[j], self.gens[i]))
            for j in range(k):
                rj = self.orders[j]
                for i in range(j):
                    ri = self.orders[i]
                    if rj is not INFINITE:
                        a = self.multiply(nf(g(j, rj)), nf(g(i)))
                        b = self.multiply(nf(g(j, rj - 1)), nf(g(j) + g(i)))
                        instance("%s^%d %s overlap" % (self.gens[j], rj, self.gens[i]),
                                 a, b,
                                 "%s^%d %s" % (self.gens[j], rj, self.gens[i]),
                                 "%s^%d (%s %s)" % (self.gens[j], rj - 1,
                                                    self.gens[j], self.gens[i]))
                    if ri is not INFINITE:
                        a = self.multiply(nf(g(j)), nf(g(i, ri)))
                        b = self.multiply(nf(g(j) + g(i)), nf(g(i, ri - 1)))
                        instance("%s %s^%d overlap" % (self.gens[j], self.gens[i], ri),
                                 a, b,
                                 "%s %s^%d" % (self.gens[j], self.gens[i], ri),
                                 "(%s %s) %s^%d" % (self.gens[j], self.gens[i],
                                                    self.gens[i], ri - 1))
                    else:
                        a = self.multiply(nf(g(j) + g(i, -1)), nf(g(i)))
                        instance("%s %s^-1 %s = %s" % (self.gens[j], self.gens[i],
                                                       self.gens[i], self.gens[j]),
                                 a, nf(g(j)),
                                 "(%s %s^-1) %s" % (self.gens[j], self.gens[i], self.gens[i]),
                                 self.gens[j])
                        a = self.multiply(nf(g(j) + g(i)), nf(g(i, -1)))
                        instance("%s %s %s^-1 = %s" % (self.gens[j], self.gens[i],
                                                       self.gens[i], self.gens[j]),
                                 a, nf(g(j)),
                                 "(%s %s) %s^-1" % (self.gens[j], self.gens[i], self.gens[i]),
                                 self.gens[j])
            for i in range(k):
                if self.orders[i] is not INFINITE:
                    ri = self.orders[i]
                    a = self.multiply(nf(g(i, ri)), nf(g(i)))
                    b = self.multiply(nf(g(i)), nf(g(i, ri)))
                    instance("%s^%d commutes with %s" % (self.gens[i], ri, self.gens[i]),
                             a, b, "%s^%d %s" % (self.gens[i], ri, self.gens[i]),
                             "%s %s^%d" % (self.gens[i], self.gens[i], ri))
            for (lhs, rhs) in self.extra_relations:
                instance("declared relation", nf(lhs), nf(rhs),
                         format_word(self.gens, lhs), format_word(self.gens, rhs))
        except CollectionBudgetExceeded as err:
            failures.append({"identity": "collection budget", "error": str(err)})
        return {"ok": not failures, "checked": checked, "failures": failures}


# ---------------------------------------------------------------------------

class Character:
    """An integer-valued homomorphism, stored by its values on the generators."""

    def __init__(self, pres, values):
        self.pres = pres
        self.values = tuple(int(v) for v in values)
        if len(self.values) != pres.k:
            raise CharacterInconsistent("need one value per generator")

    def evaluate(self, nf):
        return sum(e * u for e, u in zip(nf, self.values))

    def evaluate_word(self, word):
        return sum(e * self.values[i] for (i, e) in word)

    def is_zero(self):
        return all(v == 0 for v in self.values)

    def negate(self):
        return Character(self.pres, tuple(-v for v in self.values))

    def as_dict(self):
        return {g: v for g, v in zip(self.pres.gens, self.values)}

    def __repr__(self):
        return "Character(%s)" % ", ".join(
            "%s=%d" % (g, v) for g, v in zip(self.pres.gens, self.values))


def character_check(pres, values):
    """Validate generator values against every relation; return the Character."""
    u = Character(pres, values)
    for (i, s, j), word in pres.conj.items():
        if u.values[j] != u.evaluate_word(word):
            raise CharacterInconsistent(
                "character violates %s^%d %s %s^%d = %s"
                % (pres.gens[i], s, pres.gens[j], pres.gens[i], -s,
                   format_word(pres.gens, word)),
                relation=(i, s, j))
    for i, r in enumerate(pres.orders):
        if r is not INFINITE:
            w = pres.power_words.get(i, ())
            if r * u.values[i] != u.evaluate_word(w):
                raise CharacterInconsistent(
                    "character violates %s^%d = %s"
                    % (pres.gens[i], r, format_word(pres.gens, w)), relation=(i,))
    for (lhs, rhs) in pres.extra_relations:
        if u.evaluate_word(lhs) != u.evaluate_word(rhs):
            raise CharacterInconsistent(
                "character violates %s = %s"
                % (format_word(pres.gens, lhs), format_word(pres.gens, rhs)))
    return u


def evaluate_character(u, nf):
    return u.evaluate(nf)


# ---------------------------------------------------------------------------
# presentation files

def iter_statements(text):
    """Yield (line number, statement) with comments stripped; ';' also splits."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for piece in line.split(";"):
            piece = piece.strip()
            if piece:
                yield (lineno, piece)


_HEAD_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_-]*)\s*:?\s*(.*)$")


def _split_head(stmt):
    m = _HEAD_RE.match(stmt)
    if not m:
        raise ParseError("cannot parse statement %r" % stmt)
    return m.group(1), m.group(2)


def parse_order_token(tok, lineno):
    tok = tok.strip()
    if tok in ("inf", "infinity", "∞"):
        return INFINITE
    try:
        n = int(tok)
    except ValueError:
        raise ParseError("line %d: bad relative order %r" % (lineno, tok))
    if n < 1:
        raise ParseError("line %d: relative orders are positive" % lineno)
    return n


def presentation_from_statements(statements, step_budget=DEFAULT_BUDGET):
    """Build a presentation from (lineno, statement) pairs; returns (pres, char)."""
    gens = None
    names = {}
    orders = {}
    rels = []
    char_values = None
    for (lineno, stmt) in statements:
        head, rest = _split_head(stmt)
        if head == "gens":
            if gens is not None:
                raise ParseError("line %d: duplicate gens line" % lineno)
            gens = rest.split()
            if not gens:
                raise ParseError("line %d: empty generator list" % lineno)
            names = {g: i for i, g in enumerate(gens)}
        elif head == "order":
            parts = rest.replace(":", " ").split()
            if len(parts) != 2:
                raise ParseError("line %d: expected `order <gen> <n|inf>`" % lineno)
            gname, tok = parts
            if gens is None or gname not in names:
                raise UndeclaredGenerator(
                    "line %d: undeclared generator %r" % (lineno, gname))
            orders[gname] = parse_order_token(tok, lineno)
        elif head == "rel":
            if gens is None:
                raise ParseError("line %d: rel before gens" % lineno)
            if "=" not in rest:
                raise MalformedRelation("line %d: relation needs `=`" % lineno)
            lhs_text, _, rhs_text = rest.partition("=")
            where = " (line %d)" % lineno
            lhs = free_reduce(parse_word(names, lhs_text, where))
            rhs = free_reduce(parse_word(names, rhs_text, where))
            rels.append((lineno, lhs, rhs))
        elif head == "char":
            char_values = rest
        else:
            raise ParseError("line %d: unknown statement %r" % (lineno, stmt))
    if gens is None:
        raise ParseError("no gens line")
    order_list = [orders.get(g, INFINITE) for g in gens]

    conj = []
    powers = []
    extras = []
    for (lineno, lhs, rhs) in rels:
        where = " (line %d)" % lineno
        if len(lhs) == 1:
            i, e = lhs[0]
            if e < 2:
                raise MalformedRelation(
                    "line %d: single-syllable relation must be a power" % lineno)
            if order_list[i] != e:
                raise MalformedRelation(
                    "line %d: power %d does not match declared order of %s"
                    % (lineno, e, gens[i]))
            powers.append((i, rhs))
            continue
        if (len(lhs) == 3 and lhs[0][0] == lhs[2][0] and lhs[1][1] == 1
                and lhs[0][1] in (1, -1) and lhs[0][1] == -lhs[2][1]
                and lhs[0][0] < lhs[1][0]):
            conj.append((lhs[0][0], lhs[0][1], lhs[1][0], rhs))
            continue
        if (len(lhs) == 2 and lhs[1][1] == 1 and lhs[0][1] in (1, -1)
                and lhs[0][0] < lhs[1][0]):
            i, s = lhs[0]
            j = lhs[1][0]
            word = free_reduce(rhs + ((i, -s),))
            if all(m > i for (m, _) in word):
                conj.append((i, s, j, word))
                continue
        extras.append((lhs, rhs))
    pres = PcPresentation(gens, order_list, conj, powers, extras,
                          step_budget=step_budget)
    char = None
    if char_values is not None:
        char = parse_char_values(pres, char_values)
    return pres, char


def parse_presentation(text, step_budget=DEFAULT_BUDGET):
    pres, _ = presentation_from_statements(iter_statements(text), step_budget)
    return pres


def parse_char_values(pres, text):
    """Parse `a=0, b=1` (one assignment per generator; omitted means 0)."""
    values = [0] * pres.k
    seen = set()
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise ParseError("bad character assignment %r" % piece)
        gname, _, val = piece.partition("=")
        gname = gname.strip()
        if gname not in pres.names:
            raise UndeclaredGenerator("undeclared generator %r in character" % gname)
        if gname in seen:
            raise ParseError("duplicate character value for %r" % gname)
        seen.add(gname)
        try:
            values[pres.names[gname]] = int(val.strip())
        except ValueError:
            raise ParseError("bad integer in character assignment %r" % piece)
    return character_check(pres, values)
