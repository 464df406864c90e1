"""
Free chain complexes over a pc group ring and their Novikov reductions.

Boundary matrices store the image of each source basis element as a column
of left-module coefficients, so composing two boundaries multiplies the
inner map's entries on the left (see groupring.mat_compose); d.d = 0 is
always checked under that convention.

The reduction engine cancels one basis pair at a time on a certified unit
pivot: a base change in the source degree clears the pivot row from every
other column, the pivot row of the next boundary then has to vanish (this
is re-verified, not trusted), and the pair is deleted.  Each move preserves
the chain homotopy type over the completed ring, and the full d.d = 0
re-check runs after every move.
"""

import itertools

from .errors import BadComplex, Precondition, PrecisionExhausted
from .groupring import (
    RingElement,
    format_ring,
    mat_compose,
    mat_ring_is_zero,
    parse_ring_expr,
)
from .laurent import ladd, laurent_rank, lmono, lzero
from .novikov import DEFAULT_PRECISION, NovikovMatrix, NovikovSeries, embed
from .pcgroup import (
    INFINITE,
    format_word,
    iter_statements,
    parse_word,
    presentation_from_statements,
)
from .pcgroup import _split_head  # shared statement splitter


# ---------------------------------------------------------------------------

class FreeComplex:
    """Based free chain complex; degree k boundary has shape rank(k-1) x rank(k)."""

    def __init__(self, pres, ranks, boundaries, labels=None, p=None,
                 manifold_dim=None):
        self.pres = pres
        self.p = p
        self.ranks = list(ranks)
        self.d = {int(k): [list(row) for row in mat]
                  for k, mat in boundaries.items()}
        if labels is None:
            labels = [["c%d_%d" % (k, i) for i in range(r)]
                      for k, r in enumerate(self.ranks)]
        self.labels = [list(l) for l in labels]
        self.manifold_dim = manifold_dim
        self._validate()

    def _validate(self):
        if any(r < 0 for r in self.ranks):
            raise BadComplex("negative rank")
        for k, r in enumerate(self.ranks):
            if len(self.labels[k]) != r:
                raise BadComplex("labels of degree %d do not match rank" % k)
        for k in range(1, len(self.ranks)):
            mat = self.d.setdefault(k, [[RingElement.zero(self.pres, self.p)
                                         for _ in range(self.ranks[k])]
                                        for _ in range(self.ranks[k - 1])])
            if len(mat) != self.ranks[k - 1] or any(
                    len(row) != self.ranks[k] for row in mat):
                raise BadComplex("boundary %d has wrong shape" % k)
        for k in list(self.d):
            if not 1 <= k < len(self.ranks):
                raise BadComplex("boundary index %d out of range" % k)

    @property
    def top(self):
        return len(self.ranks) - 1

    def check_d_squared(self):
        for k in range(1, self.top):
            prod = mat_compose(self.d[k], self.d[k + 1])
            for i, row in enumerate(prod):
                for j, x in enumerate(row):
                    if not x.is_zero():
                        raise BadComplex(
                            "d.d != 0 at degrees (%d, %d), entry (%d, %d): %s"
                            % (k, k + 1, i, j, format_ring(x)),
                            degree=k, entry=(i, j))
        return True

    def euler(self):
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))

    def serialize(self):
        """Self-contained complex file text."""
        pres = self.pres
        lines = ["gens: " + " ".join(pres.gens)]
        for g, r in zip(pres.gens, pres.orders):
            lines.append("order %s: %s" % (g, "inf" if r is INFINITE else r))
        for (i, s, j), word in sorted(pres.conj.items()):
            if word == ((j, 1),):
                continue
            lhs = "%s%s %s %s%s" % (pres.gens[i], "" if s == 1 else "^-1",
                                    pres.gens[j],
                                    pres.gens[i], "^-1" if s == 1 else "")
            lines.append("rel: %s = %s" % (lhs, format_word(pres.gens, word)))
        for i, word in sorted(pres.power_words.items()):
            lines.append("rel: %s^%d = %s" % (pres.gens[i], pres.orders[i],
                                              format_word(pres.gens, word)))
        if self.p is not None:
            lines.append("coeffs: F%d" % self.p)
        if self.manifold_dim is not None:
            lines.append("manifold-dim %d" % self.manifold_dim)
        for k, r in enumerate(self.ranks):
            lines.append("degree %d rank %d" % (k, r))
            if r:
                lines.append("labels %d: %s" % (k, " ".join(self.labels[k])))
        for k in range(1, len(self.ranks)):
            if self.ranks[k] and self.ranks[k - 1]:
                rows = ", ".join(
                    "[" + ", ".join(format_ring(x) for x in row) + "]"
                    for row in self.d[k])
                lines.append("d %d: [%s]" % (k, rows))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# complex files

def _parse_matrix_text(pres, text, p, lineno):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise BadComplex("line %d: matrix must be bracketed" % lineno)
    body = text[1:-1].strip()
    rows = []
    depth = 0
    current = ""
    for ch in body:
        if ch == "[":
            depth += 1
            if depth == 1:
                current = ""
                continue
        elif ch == "]":
            depth -= 1
            if depth == 0:
                entries = [parse_ring_expr(pres, e, p)
                           for e in current.split(",") if e.strip()]
                rows.append(entries)
                continue
        if depth >= 1:
            current += ch
    if depth != 0:
        raise BadComplex("line %d: unbalanced brackets" % lineno)
    return rows


def parse_complex_text(text):
    """Parse a self-contained complex file.

    Returns (FreeComplex, default character or None, augmentation row or None).
    """
    pres_stmts = []
    other = []
    for (lineno, stmt) in iter_statements(text):
        head, _ = _split_head(stmt)
        if head in ("gens", "order", "rel", "char"):
            pres_stmts.append((lineno, stmt))
        else:
            other.append((lineno, stmt))
    pres, char = presentation_from_statements(pres_stmts)

    p = None
    manifold_dim = None
    rank_by_degree = {}
    label_lines = {}
    d_lines = {}
    aug_line = None
    for (lineno, stmt) in other:
        head, rest = _split_head(stmt)
        if head == "coeffs":
            rest = rest.strip()
            if rest in ("Z", "z"):
                p = None
            elif rest.startswith("F"):
                p = int(rest[1:])
                if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
                    raise BadComplex("line %d: %d is not prime" % (lineno, p))
            else:
                raise BadComplex("line %d: unknown coefficients %r" % (lineno, rest))
        elif head == "manifold-dim":
            manifold_dim = int(rest.strip())
        elif head == "degree":
            parts = rest.split()
            if len(parts) != 3 or parts[1] != "rank":
                raise BadComplex("line %d: expected `degree k rank r`" % lineno)
            rank_by_degree[int(parts[0])] = int(parts[2])
        elif head == "labels":
            deg_text, _, names = rest.partition(":")
            if not _:
                parts = rest.split(None, 1)
                deg_text, names = parts[0], parts[1] if len(parts) > 1 else ""
            label_lines[int(deg_text)] = names.split()
        elif head == "d":
            deg_text, _, mat_text = rest.partition(":")
            d_lines[int(deg_text)] = (lineno, mat_text)
        elif head == "aug":
            aug_line = (lineno, rest)
        else:
            raise BadComplex("line %d: unknown statement %r" % (lineno, stmt))

    if not rank_by_degree:
        raise BadComplex("no degree lines")
    top = max(rank_by_degree)
    if min(rank_by_degree) != 0 or set(rank_by_degree) != set(range(top + 1)):
        raise BadComplex("degrees must cover 0..%d" % top)
    ranks = [rank_by_degree[k] for k in range(top + 1)]
    boundaries = {}
    for k, (lineno, mat_text) in d_lines.items():
        if not 1 <= k <= top:
            raise BadComplex("line %d: boundary degree %d out of range"
                             % (lineno, k))
        mat = _parse_matrix_text(pres, mat_text, p, lineno)
        if len(mat) != ranks[k - 1] or any(len(row) != ranks[k] for row in mat):
            raise BadComplex(
                "line %d: boundary %d must be %d x %d"
                % (lineno, k, ranks[k - 1], ranks[k]))
        boundaries[k] = mat
    labels = None
    if label_lines:
        labels = [label_lines.get(k, ["c%d_%d" % (k, i) for i in range(r)])
                  for k, r in enumerate(ranks)]
    C = FreeComplex(pres, ranks, boundaries, labels, p, manifold_dim)
    C.check_d_squared()
    aug = None
    if aug_line is not None:
        lineno, rest = aug_line
        row = _parse_matrix_text(pres, "[%s]" % rest, p, lineno)
        aug = row[0] if row else []
        if len(aug) != ranks[0]:
            raise BadComplex("line %d: augmentation row must have %d entries"
                             % (lineno, ranks[0]))
    return C, char, aug


def parse_complex(text):
    C, _, _ = parse_complex_text(text)
    return C


# ---------------------------------------------------------------------------
# builders

def fox_derivative(pres, word, gen):
    """Left Fox derivative of a word with respect to one generator.

    d(uv) = du + u dv, d(x)/dx = 1, d(x^-1)/dx = -x^-1; the fundamental
    identity sum_x (dr/dx)(x - 1) = r - 1 holds in the group ring.
    """
    if isinstance(gen, str):
        gen = pres.names[gen]
    result = RingElement.zero(pres)
    prefix = pres.identity
    for (i, e) in word:
        step = 1 if e >= 0 else -1
        for _ in range(abs(e)):
            if step == 1:
                if i == gen:
                    result = result + RingElement.monomial(pres, prefix)
                prefix = pres.multiply(prefix, pres.collect(((i, 1),)))
            else:
                prefix = pres.multiply(prefix, pres.collect(((i, -1),)))
                if i == gen:
                    result = result - RingElement.monomial(pres, prefix)
    return result


def presentation_complex(pres, relators):
    """Chain complex of the 2-complex of a presentation; relators must hold."""
    rel_words = []
    for r in relators:
        word = parse_word(pres.names, r) if isinstance(r, str) else tuple(r)
        if pres.collect(word) != pres.identity:
            raise Precondition("relator %r does not collect to the identity" % (r,))
        rel_words.append(word)
    k = pres.k
    ranks = [1, k, len(rel_words)] if rel_words else [1, k]
    d1 = [[RingElement.monomial(pres, pres.collect(((i, 1),))) - 1
           for i in range(k)]]
    boundaries = {1: d1}
    labels = [["e0"], ["e_%s" % g for g in pres.gens]]
    if rel_words:
        d2 = [[fox_derivative(pres, w, i) for w in rel_words] for i in range(k)]
        boundaries[2] = d2
        labels.append(["e_r%d" % (i + 1) for i in range(len(rel_words))])
    C = FreeComplex(pres, ranks, boundaries, labels)
    C.check_d_squared()
    return C


def product_with_sphere(C, sphere_dim):
    """Tensor with a two-cell sphere: a shifted copy, block diagonal."""
    if sphere_dim < 2:
        raise Precondition("sphere dimension must be at least 2")
    n = C.top
    p_ = sphere_dim
    ranks = [(C.ranks[k] if k <= n else 0)
             + (C.ranks[k - p_] if 0 <= k - p_ <= n else 0)
             for k in range(n + p_ + 1)]
    labels = []
    for k in range(n + p_ + 1):
        lab = list(C.labels[k]) if k <= n else []
        if 0 <= k - p_ <= n:
            lab += [l + "*s" for l in C.labels[k - p_]]
        labels.append(lab)
    zero = RingElement.zero(C.pres, C.p)
    boundaries = {}
    for k in range(1, n + p_ + 1):
        rows, cols = ranks[k - 1], ranks[k]
        if rows == 0 or cols == 0:
            continue
        mat = [[zero for _ in range(cols)] for _ in range(rows)]
        if k <= n and C.ranks[k]:
            for i in range(C.ranks[k - 1]):
                for j in range(C.ranks[k]):
                    mat[i][j] = C.d[k][i][j]
        ks = k - p_
        if 1 <= ks <= n and C.ranks[ks]:
            roff = C.ranks[k - 1] if k - 1 <= n else 0
            coff = C.ranks[k] if k <= n else 0
            for i in range(C.ranks[ks - 1]):
                for j in range(C.ranks[ks]):
                    mat[roff + i][coff + j] = C.d[ks][i][j]
        boundaries[k] = mat
    dim = None if C.manifold_dim is None else C.manifold_dim + p_
    out = FreeComplex(C.pres, ranks, boundaries, labels, C.p, dim)
    out.check_d_squared()
    return out


def _det_ring(entries):
    """Determinant of a small matrix over a commutative block of the ring."""
    n = len(entries)
    pres = None
    for row in entries:
        for x in row:
            pres = x.pres
    acc = None
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = None
        for i in range(n):
            x = entries[i][perm[i]]
            term = x if term is None else term * x
        if term is None:
            continue
        term = term * sign
        acc = term if acc is None else acc + term
    return acc if acc is not None else RingElement.zero(pres)


def mapping_torus(k, phi, names=None):
    """Complex of the fibration over the circle with fibre a k-torus.

    The group is Z^k twisted by t with t a_i t^-1 = phi(a_i) (phi unimodular,
    columns give images).  The complex is the cone of (Theta - Id) on the
    induced Koszul complex, where Theta lifts the monodromy through the
    inverse twist; d.d = 0 is verified on construction.
    """
    from .pcgroup import PcPresentation, mat_inv_unimodular

    if len(phi) != k or any(len(row) != k for row in phi):
        raise Precondition("monodromy must be a %d x %d integer matrix" % (k, k))
    phi_inv = mat_inv_unimodular([list(r) for r in phi])
    if phi_inv is None:
        raise Precondition("monodromy matrix is not unimodular")
    if names is None:
        names = ["t"] + (["a", "b", "c"][:k] if k <= 3
                         else ["a%d" % (i + 1) for i in range(k)])
    if len(names) != k + 1:
        raise Precondition("need %d generator names" % (k + 1))
    conj = []
    for i in range(k):
        word = tuple((1 + l, phi[l][i]) for l in range(k) if phi[l][i])
        conj.append((0, 1, 1 + i, word))
    pres = PcPresentation(names, [INFINITE] * (k + 1), conj)

    # Koszul complex of the fibre, over the full group ring
    subsets = {j: [tuple(c) for c in itertools.combinations(range(k), j)]
               for j in range(k + 1)}
    index = {j: {S: i for i, S in enumerate(subsets[j])} for j in range(k + 1)}

    def gen_elem(i, e=1):
        return RingElement.monomial(pres, pres.collect(((1 + i, e),)))

    zero = RingElement.zero(pres)

    def koszul_matrix(j):
        """Boundary K_j -> K_{j-1}."""
        rows = [[zero for _ in subsets[j]] for _ in subsets[j - 1]]
        for cj, S in enumerate(subsets[j]):
            for m, i in enumerate(S):
                rest = tuple(x for x in S if x != i)
                sign = (-1) ** m
                rows[index[j - 1][rest]][cj] = (gen_elem(i) - 1) * sign
        return rows

    # degree-1 lift through the inverse twist, then wedge extension
    lift1 = []
    for i in range(k):
        word = tuple((1 + l, phi_inv[l][i]) for l in range(k) if phi_inv[l][i])
        lift1.append([fox_derivative(pres, word, 1 + l) for l in range(k)])

    t_elem = RingElement.monomial(pres, pres.collect(((0, 1),)))

    def theta_matrix(j):
        """Theta on K_j: t times the wedge of the degree-1 lifts."""
        rows = [[zero for _ in subsets[j]] for _ in subsets[j]]
        for cj, S in enumerate(subsets[j]):
            for ri, T in enumerate(subsets[j]):
                if j == 0:
                    c = RingElement.one(pres)
                else:
                    c = _det_ring([[lift1[i][l] for l in T] for i in S])
                if not c.is_zero():
                    rows[ri][cj] = t_elem * c
        return rows

    def label(S, shifted):
        body = "".join(names[1 + i] for i in S)
        return "e_" + body + ("t" if shifted else "") if (body or shifted) else "e"

    ranks = []
    labels = []
    for j in range(k + 2):
        base = subsets.get(j, [])
        shift = subsets.get(j - 1, [])
        ranks.append(len(base) + len(shift))
        labels.append([label(S, False) for S in base]
                      + [label(S, True) for S in shift])

    boundaries = {}
    for j in range(1, k + 2):
        rows = ranks[j - 1]
        cols = ranks[j]
        mat = [[zero for _ in range(cols)] for _ in range(rows)]
        nb = len(subsets.get(j, []))
        if j <= k and nb:
            kb = koszul_matrix(j)
            for i in range(len(subsets[j - 1])):
                for c in range(nb):
                    mat[i][c] = kb[i][c]
        # shifted columns: (Theta - Id) into base rows, -Koszul into shifted rows
        th = theta_matrix(j - 1)
        for c, S in enumerate(subsets.get(j - 1, [])):
            for i in range(len(subsets[j - 1])):
                entry = th[i][c]
                if i == c:
                    entry = entry - 1
                mat[i][nb + c] = entry
        if j >= 2:
            kb = koszul_matrix(j - 1)
            roff = len(subsets[j - 1])
            for c in range(len(subsets[j - 1])):
                for i in range(len(subsets[j - 2])):
                    mat[roff + i][nb + c] = -kb[i][c]
        boundaries[j] = mat

    C = FreeComplex(pres, ranks, boundaries, labels, manifold_dim=k + 1)
    C.check_d_squared()
    return C


# ---------------------------------------------------------------------------
# Novikov side

class NovikovComplex:
    def __init__(self, pres, u, ranks, boundaries, labels, prec, p=None):
        self.pres = pres
        self.u = u
        self.p = p
        self.prec = prec
        self.ranks = list(ranks)
        self.labels = [list(l) for l in labels]
        self.d = dict(boundaries)

    @property
    def top(self):
        return len(self.ranks) - 1

    def is_empty(self):
        return all(r == 0 for r in self.ranks)

    def euler(self):
        return sum((-1) ** k * r for k, r in enumerate(self.ranks))

    def check_dd(self, error=PrecisionExhausted):
        for k in range(1, self.top):
            A, B = self.d.get(k), self.d.get(k + 1)
            if A is None or B is None or A.cols == 0 or B.cols == 0 or A.rows == 0:
                continue
            prod = A.compose(B)
            if not prod.is_zero_below_prec():
                raise error("d.d != 0 up to precision at degrees (%d, %d)"
                            % (k, k + 1), degree=k)
        return True

    def all_zero_boundaries(self):
        for k in range(1, self.top + 1):
            M = self.d.get(k)
            if M is not None and M.rows and M.cols and not M.is_zero_below_prec():
                return False
        return True


def base_change_novikov(C, u, prec=DEFAULT_PRECISION):
    if u.is_zero():
        raise Precondition("the zero character does not define a completion")
    if u.pres is not C.pres:
        raise Precondition("character belongs to a different presentation")
    boundaries = {}
    for k in range(1, len(C.ranks)):
        boundaries[k] = NovikovMatrix(
            [[embed(x, u, prec, p=C.p) for x in row] for row in C.d[k]],
            C.pres, u, C.p)
    nc = NovikovComplex(C.pres, u, C.ranks, boundaries, C.labels, prec, C.p)
    nc.check_dd(error=BadComplex)
    return nc


# ---------------------------------------------------------------------------
# reduction

class ReductionTrace:
    """Ordered cancellation log; replaying it reproduces the residual."""

    def __init__(self):
        self.moves = []

    def record(self, degree, source_label, target_label, cert, pivot_repr):
        self.moves.append({
            "degree": degree,
            "source": source_label,
            "target": target_label,
            "height": cert.height,
            "pivot": pivot_repr,
        })

    def __len__(self):
        return len(self.moves)


def _pivot_candidates(nc):
    # cost: a pivot alone in its row needs no inversion, and one whose tail
    # above the leading level has at most one term keeps the geometric
    # series single-term; both count as free.  Larger tails can have
    # exponentially many monomials below precision in groups of
    # exponential growth, so they are taken last.
    for k in sorted(nc.d):
        M = nc.d[k]
        for i in range(M.rows):
            row_load = sum(1 for x in M.entries[i] if not x.is_zero())
            for j in range(M.cols):
                x = M.entries[i][j]
                if x.is_zero():
                    continue
                cert = x.certify_unit()
                if cert is not None:
                    cost = 0 if (row_load == 1 or len(x.terms) <= 2) \
                        else len(x.terms) - 1
                    yield (cost, cert.height, k, i, j, cert)


def reduce_complex(nc, strategy="lowheight", rng=None):
    """Cancel certified-unit pivots until stuck; returns (trace, residual).

    The residual complex is chain homotopy equivalent to the input over the
    completed ring.  Raises PrecisionExhausted when a move breaks d.d = 0
    below the working precision (rerun with a higher one).
    """
    pres, u, p = nc.pres, nc.u, nc.p
    ranks = list(nc.ranks)
    labels = [list(l) for l in nc.labels]
    d = {k: [row[:] for row in M.entries] for k, M in nc.d.items()}
    trace = ReductionTrace()

    def rebuild():
        boundaries = {}
        for k in d:
            boundaries[k] = (NovikovMatrix(d[k], pres, u, p)
                             if d[k] and d[k][0]
                             else NovikovMatrix.zeros(pres, u, ranks[k - 1],
                                                      ranks[k], nc.prec, p))
        return NovikovComplex(pres, u, ranks, boundaries, labels, nc.prec, p)

    while True:
        residual = rebuild()
        candidates = list(_pivot_candidates(residual))
        if not candidates:
            return trace, residual
        if strategy == "random":
            move = (rng or __import__("random")).choice(candidates)
        else:
            move = min(candidates)
        _, _, k, tau, sigma, cert = move
        mat = d[k]
        pivot = mat[tau][sigma]
        others = [j for j in range(len(mat[0]))
                  if j != sigma and not mat[tau][j].is_zero()]
        corrections = {}
        if others:
            pinv = pivot.invert_unit()
            for j in others:
                corrections[j] = mat[tau][j] * pinv
        for j, c in corrections.items():
            for i in range(len(mat)):
                mat[i][j] = mat[i][j] - c * mat[i][sigma]
        up = d.get(k + 1)
        if up is not None and up and up[0]:
            for m in range(len(up[0])):
                acc = up[sigma][m]
                for j, c in corrections.items():
                    acc = acc + up[j][m] * c
                up[sigma][m] = acc
            for m in range(len(up[0])):
                if not up[sigma][m].is_zero():
                    raise PrecisionExhausted(
                        "pivot row survives in degree %d after cancellation; "
                        "rerun at higher precision" % (k + 1),
                        trace=trace.moves)
        trace.record(k, labels[k][sigma], labels[k - 1][tau], cert,
                     repr(pivot))
        # delete the pair
        del mat[tau]
        for row in mat:
            del row[sigma]
        if up is not None and up and up[0]:
            del up[sigma]
        down = d.get(k - 1)
        if down is not None and down and down[0]:
            for row in down:
                del row[tau]
        ranks[k] -= 1
        ranks[k - 1] -= 1
        del labels[k][sigma]
        del labels[k - 1][tau]
        rebuild().check_dd()


# ---------------------------------------------------------------------------
# verdicts

ACYCLIC = "ACYCLIC"
FREE_HOMOLOGY = "FREE_HOMOLOGY"
INDETERMINATE = "INDETERMINATE"


class BettiReport:
    def __init__(self, verdict_kind, betti, euler, trace, precision):
        self.verdict = verdict_kind
        self.betti = betti
        self.euler = euler
        self.trace = trace
        self.precision = precision
        if self.verdict == ACYCLIC:
            assert euler == 0
        if self.verdict == FREE_HOMOLOGY:
            assert euler == sum((-1) ** i * b for i, b in enumerate(betti))

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "betti": self.betti,
            "euler": self.euler,
            "trace_length": len(self.trace),
            "precision": self.precision,
            "pivots": self.trace.moves,
        }


def verdict(residual, trace):
    eu = residual.euler()
    if residual.is_empty():
        return BettiReport(ACYCLIC, [0] * len(residual.ranks), eu, trace,
                           residual.prec)
    if residual.all_zero_boundaries():
        return BettiReport(FREE_HOMOLOGY, list(residual.ranks), eu, trace,
                           residual.prec)
    return BettiReport(INDETERMINATE, None, eu, trace, residual.prec)


def homology_verdict(C, u, prec=DEFAULT_PRECISION, strategy="lowheight",
                     rng=None):
    nc = base_change_novikov(C, u, prec)
    trace, residual = reduce_complex(nc, strategy, rng)
    return verdict(residual, trace)


def euler_characteristic(obj):
    if isinstance(obj, BettiReport):
        return obj.euler
    return obj.euler()


# ---------------------------------------------------------------------------
# fingerprint oracle: push along g -> t^u(g) into Laurent polynomials mod p

def fingerprint(C, u, p):
    """Exact betti numbers over F_p(t) after g -> t^u(g); zero iff vanishing."""
    if u.is_zero():
        raise Precondition("fingerprint needs a nonzero character")
    if C.p is not None and C.p != p:
        raise Precondition("complex already has coefficients mod %d" % C.p)

    def push(x):
        f = lzero()
        for nf, c in x.terms.items():
            f = ladd(f, lmono(u.evaluate(nf), c, p), p)
        return f

    ranks_d = {}
    for k in range(1, len(C.ranks)):
        if C.ranks[k] == 0 or C.ranks[k - 1] == 0:
            ranks_d[k] = 0
            continue
        mat = [[push(x) for x in row] for row in C.d[k]]
        ranks_d[k] = laurent_rank(mat, p)
    betti = []
    for k, r in enumerate(C.ranks):
        betti.append(r - ranks_d.get(k, 0) - ranks_d.get(k + 1, 0))
    return betti


# ---------------------------------------------------------------------------
# duality harness

def duality_check(C, u, prec=DEFAULT_PRECISION):
    """Test the reflection between the two completion directions.

    Needs a declared closed-manifold dimension; refuses otherwise.  Degrees
    the reduction leaves INDETERMINATE are reported untested, never failed.
    """
    if C.manifold_dim is None:
        raise Precondition("duality needs a complex tagged with manifold-dim")
    n = C.manifold_dim
    rep_u = homology_verdict(C, u, prec)
    rep_mu = homology_verdict(C, u.negate(), prec)

    if rep_mu.verdict == ACYCLIC:
        vanish_prefix = n
    elif rep_mu.verdict == FREE_HOMOLOGY:
        vanish_prefix = -1
        for i, b in enumerate(rep_mu.betti):
            if b:
                break
            vanish_prefix = i
    else:
        vanish_prefix = None

    report = {
        "manifold_dim": n,
        "verdict_u": rep_u.as_dict(),
        "verdict_minus_u": rep_mu.as_dict(),
        "vanishing_prefix_minus_u": vanish_prefix,
    }
    if vanish_prefix is None or vanish_prefix < 0:
        report["status"] = "UNTESTED"
        report["checked_degrees"] = []
        return report
    low = n - vanish_prefix
    degrees = [i for i in range(len(C.ranks)) if i >= low]
    if rep_u.verdict == ACYCLIC:
        report["status"] = "HOLDS"
    elif rep_u.verdict == FREE_HOMOLOGY:
        bad = [i for i in degrees
               if i < len(rep_u.betti) and rep_u.betti[i] != 0]
        report["status"] = "VIOLATED" if bad else "HOLDS"
        report["violations"] = bad
    else:
        report["status"] = "UNTESTED"
    report["checked_degrees"] = degrees
    return report
