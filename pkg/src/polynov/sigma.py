"""
Finiteness witnesses on based free resolutions.

A resolution is a free complex P_m -> ... -> P_0 together with an
augmentation row onto the coefficients.  A witness for a direction u is a
chain self-map lifting the identity of the augmentation whose matrices are
u-positive in the fixed basis; acceptance is a certificate (the criterion
is existential, so rejection certifies nothing).

The executor tensors the resolution with an integer representation
(diagonal action, the inverse twist absorbed into the coefficient blocks),
embeds at a chosen precision, and inverts Id - Psi degreewise by the
geometric series, verifying the two-sided identity and the chain-map
property up to precision.  That exhibits an invertible null-homotopic
chain map, so the tensored complex is acyclic up to the precision used.

Matrix conventions follow the rest of the package: columns per source
basis vector, left coefficients, composition via mat_compose.  The blocks
of the representation twist enter transposed, which is exactly what that
composition requires; with the trivial representation the tensored
complex coincides entrywise with the plain completion.
"""

import math
from fractions import Fraction

from .complexes import NovikovComplex, _parse_matrix_text, _split_head
from .errors import BadComplex, Precondition
from .groupring import (
    RingElement,
    mat_compose,
    mat_ring_identity,
    mat_ring_is_zero,
    mat_ring_sub,
)
from .novikov import NovikovMatrix, embed, invert_id_minus
from .pcgroup import INFINITE, iter_statements, mat_id, mat_mul


class Resolution:
    """FreeComplex plus an augmentation row P_0 -> coefficients."""

    def __init__(self, complex_, aug):
        self.complex = complex_
        if len(aug) != complex_.ranks[0]:
            raise BadComplex("augmentation row must have %d entries"
                             % complex_.ranks[0])
        self.aug = [x.augmentation() if isinstance(x, RingElement) else int(x)
                    for x in aug]
        if all(a not in (1, -1) for a in self.aug):
            raise BadComplex("augmentation is not surjective: no basis element "
                             "maps to a unit")
        d1 = complex_.d.get(1)
        if d1 is not None:
            for j in range(complex_.ranks[1]):
                total = sum(self.aug[i] * d1[i][j].augmentation()
                            for i in range(complex_.ranks[0]))
                if total != 0:
                    raise BadComplex(
                        "augmentation does not kill the degree-1 boundary "
                        "(column %d)" % j)

    @property
    def pres(self):
        return self.complex.pres

    @property
    def length(self):
        return self.complex.top


def parse_resolution(text):
    from .complexes import parse_complex_text
    C, char, aug = parse_complex_text(text)
    if aug is None:
        raise BadComplex("resolution file needs an `aug:` row")
    return Resolution(C, aug), char


# ---------------------------------------------------------------------------
# valuations

class ValuationAssignment:
    """One constant per degree; the module valuation adds the minimal height."""

    def __init__(self, u, nus):
        self.u = u
        self.nus = list(nus)


def valuation(va, degree, element):
    """nu_degree plus the minimal height over the support; +inf on zero.

    `element` is a list of ring elements, one coefficient per basis vector
    of the degree.
    """
    heights = []
    for x in element:
        heights.extend(x.heights(va.u))
    if not heights:
        return math.inf
    return va.nus[degree] + min(heights)


def check_valuation_condition(res, va):
    """Check v_j(e) <= v_{j-1}(boundary e) on every basis element.

    Returns a report; on failure suggests the largest workable nu_j given
    nu_{j-1}.
    """
    C = res.complex
    per_degree = []
    ok = True
    for j in range(1, C.top + 1):
        worst = math.inf
        for col in range(C.ranks[j]):
            column = [C.d[j][i][col] for i in range(C.ranks[j - 1])]
            v_target = valuation(ValuationAssignment(va.u, va.nus), j - 1, column)
            worst = min(worst, v_target)
        bound = worst  # v_j(e) = nu_j must stay <= this
        passed = va.nus[j] <= bound
        entry = {"degree": j, "nu": va.nus[j], "bound": bound, "ok": passed}
        if not passed:
            entry["suggestion"] = bound
            ok = False
        per_degree.append(entry)
    return {"ok": ok, "per_degree": per_degree}


# ---------------------------------------------------------------------------
# witness files

def parse_witness(text, pres, p=None):
    """Parse `phi k: [[...]]`, `s k: [[...]]`, `rho g: [[int,...],...]` lines."""
    phi = {}
    s = {}
    rho = {}
    for (lineno, stmt) in iter_statements(text):
        head, rest = _split_head(stmt)
        if head in ("phi", "s"):
            deg_text, _, mat_text = rest.partition(":")
            try:
                deg = int(deg_text)
            except ValueError:
                raise BadComplex("line %d: expected a degree number" % lineno)
            mat = _parse_matrix_text(pres, mat_text, p, lineno)
            (phi if head == "phi" else s)[deg] = mat
        elif head == "rho":
            gname, _, mat_text = rest.partition(":")
            gname = gname.strip()
            if gname not in pres.names:
                raise BadComplex("line %d: unknown generator %r" % (lineno, gname))
            rows = []
            body = mat_text.strip()
            if not (body.startswith("[") and body.endswith("]")):
                raise BadComplex("line %d: rho needs a bracketed matrix" % lineno)
            depth = 0
            current = ""
            for ch in body[1:-1]:
                if ch == "[":
                    depth += 1
                    if depth == 1:
                        current = ""
                        continue
                elif ch == "]":
                    depth -= 1
                    if depth == 0:
                        rows.append([int(x) for x in current.split(",") if x.strip()])
                        continue
                if depth >= 1:
                    current += ch
            rho[pres.names[gname]] = rows
        else:
            raise BadComplex("line %d: unknown witness statement %r"
                             % (lineno, stmt))
    return phi, s, rho


# ---------------------------------------------------------------------------
# witness verification

def _shape_check(res, mats, name, offset=0):
    C = res.complex
    for j, M in mats.items():
        if not 0 <= j <= C.top:
            raise Precondition("%s given in degree %d outside the resolution"
                               % (name, j))
        want_rows = C.ranks[j + offset] if 0 <= j + offset <= C.top else 0
        if len(M) != want_rows or any(len(row) != C.ranks[j] for row in M):
            raise Precondition("%s in degree %d has the wrong shape" % (name, j))


def verify_sigma_witness(res, phi, u):
    """Accept iff phi is a chain map lifting the augmentation identity and
    every matrix is u-positive.  Acceptance certifies membership of u in
    the directional finiteness set; rejection certifies nothing."""
    C = res.complex
    reasons = []
    for j in range(C.top + 1):
        if j not in phi:
            reasons.append({"kind": "missing-degree", "degree": j})
    if reasons:
        return {"accepted": False, "reasons": reasons}
    _shape_check(res, phi, "phi")
    for j in range(1, C.top + 1):
        lhs = mat_compose(C.d[j], phi[j])
        rhs = mat_compose(phi[j - 1], C.d[j])
        if not mat_ring_is_zero(mat_ring_sub(lhs, rhs)):
            reasons.append({"kind": "not-a-chain-map", "degree": j})
    aug = res.aug
    for j in range(C.ranks[0]):
        lifted = sum(aug[i] * phi[0][i][j].augmentation()
                     for i in range(C.ranks[0]))
        if lifted != aug[j]:
            reasons.append({"kind": "does-not-lift-identity", "column": j})
            break
    for j in range(C.top + 1):
        for i, row in enumerate(phi[j]):
            for c, x in enumerate(row):
                if not x.is_u_positive(u):
                    reasons.append({
                        "kind": "not-u-positive", "degree": j,
                        "entry": (i, c),
                        "heights": sorted(x.heights(u)),
                    })
    return {"accepted": not reasons, "reasons": reasons}


def verify_homotopy(res, phi, s):
    """Check d s + s d = phi - Id degreewise, exactly over the group ring."""
    C = res.complex
    pres = C.pres
    _shape_check(res, {j: M for j, M in s.items()}, "s", offset=1)
    for j in range(C.top + 1):
        acc = None
        if j in s and j + 1 <= C.top:
            acc = mat_compose(C.d[j + 1], s[j])
        if j - 1 in s and j >= 1:
            term = mat_compose(s[j - 1], C.d[j])
            acc = term if acc is None else [
                [a + b for a, b in zip(r1, r2)] for r1, r2 in zip(acc, term)]
        want = mat_ring_sub(phi[j], mat_ring_identity(pres, C.ranks[j], C.p))
        if acc is None:
            acc = [[RingElement.zero(pres, C.p) for _ in range(C.ranks[j])]
                   for _ in range(C.ranks[j])]
        if not mat_ring_is_zero(mat_ring_sub(acc, want)):
            return False
    return True


# ---------------------------------------------------------------------------
# integer representations and the tensored complex

def _int_mat_inv(M):
    n = len(M)
    work = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
            for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r][col]), None)
        if piv is None:
            raise Precondition("representation matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    out = [[work[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise Precondition("representation matrix is not invertible over the "
                           "integers")
    return [[int(x) for x in row] for row in out]


class Representation:
    """Integer matrices per generator, extended to normal forms."""

    def __init__(self, pres, mats):
        self.pres = pres
        if set(mats) != set(range(pres.k)):
            missing = [pres.gens[i] for i in range(pres.k) if i not in mats]
            raise Precondition("representation missing generators: %s"
                               % ", ".join(missing))
        dims = {len(M) for M in mats.values()}
        if len(dims) != 1:
            raise Precondition("representation matrices have mixed sizes")
        self.r = dims.pop()
        for M in mats.values():
            if any(len(row) != self.r for row in M):
                raise Precondition("representation matrices must be square")
        self.mats = {i: [row[:] for row in M] for i, M in mats.items()}
        self.inv = {i: _int_mat_inv(M) for i, M in self.mats.items()}
        self._cache = {}
        self._check_relations()

    @classmethod
    def trivial(cls, pres):
        return cls(pres, {i: [[1]] for i in range(pres.k)})

    def of_word(self, word):
        acc = mat_id(self.r)
        for (i, e) in word:
            base = self.mats[i] if e > 0 else self.inv[i]
            for _ in range(abs(e)):
                acc = mat_mul(acc, base)
        return acc

    def of_element(self, nf):
        hit = self._cache.get(nf)
        if hit is None:
            hit = self.of_word(self.pres.syllables(nf))
            self._cache[nf] = hit
        return hit

    def _check_relations(self):
        pres = self.pres
        for (i, sgn, j), word in pres.conj.items():
            lhs = self.of_word(((i, sgn), (j, 1), (i, -sgn)))
            if lhs != self.of_word(word):
                raise Precondition(
                    "representation violates the conjugation relation for %s, %s"
                    % (pres.gens[i], pres.gens[j]))
        for i, word in pres.power_words.items():
            if self.of_word(((i, pres.orders[i]),)) != self.of_word(word):
                raise Precondition("representation violates the power relation "
                                   "for %s" % pres.gens[i])
        for i, r in enumerate(pres.orders):
            if r is not INFINITE and i not in pres.power_words:
                if self.of_word(((i, r),)) != mat_id(self.r):
                    raise Precondition("representation violates the order of %s"
                                       % pres.gens[i])
        for lhs, rhs in pres.extra_relations:
            if self.of_word(lhs) != self.of_word(rhs):
                raise Precondition("representation violates a declared relation")


def _blow_up(mat, rep):
    """Expand each ring entry into an r x r block of twisted entries.

    Block (l, s) of entry lambda is sum c * rho(g)[s][l] * g over the terms
    c*g of lambda: the transpose is what left-convention composition
    needs, and the group parts are untouched, so supports never grow.
    """
    r = rep.r
    pres = rep.pres
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    out = [[None] * (cols * r) for _ in range(rows * r)]
    for i in range(rows):
        for j in range(cols):
            x = mat[i][j]
            blocks = [[{} for _ in range(r)] for _ in range(r)]
            for nf, c in x.terms.items():
                R = rep.of_element(nf)
                for l in range(r):
                    for s in range(r):
                        coeff = c * R[s][l]
                        if coeff:
                            blocks[l][s][nf] = blocks[l][s].get(nf, 0) + coeff
            for l in range(r):
                for s in range(r):
                    out[i * r + l][j * r + s] = RingElement(pres, blocks[l][s],
                                                            x.p)
    return out


def tensor_with_rep(res, rho, u, prec, phi=None):
    """Tensored complex over the completion, and the twisted witness.

    Returns (NovikovComplex, {degree: NovikovMatrix} or None).  With the
    trivial representation the complex agrees entrywise with the plain
    base change of the resolution.
    """
    C = res.complex
    pres = C.pres
    rep = rho if isinstance(rho, Representation) else Representation(pres, rho)
    ranks = [r * rep.r for r in C.ranks]
    labels = []
    for k, labs in enumerate(C.labels):
        if rep.r == 1:
            labels.append(list(labs))
        else:
            labels.append(["%s#%d" % (l, s) for l in labs for s in range(rep.r)])
    boundaries = {}
    for k in range(1, C.top + 1):
        blown = _blow_up(C.d[k], rep)
        boundaries[k] = NovikovMatrix(
            [[embed(x, u, prec, p=C.p) for x in row] for row in blown],
            pres, u, C.p)
    nc = NovikovComplex(pres, u, ranks, boundaries, labels, prec, C.p)
    nc.check_dd(error=BadComplex)
    psi = None
    if phi is not None:
        psi = {}
        for j in range(C.top + 1):
            blown = _blow_up(phi[j], rep)
            M = NovikovMatrix(
                [[embed(x, u, prec, p=C.p) for x in row] for row in blown],
                pres, u, C.p)
            if all(x.is_u_positive(u) for row in phi[j] for x in row):
                # the twist never enlarges supports, so positivity survives
                assert M.u_positive_violation() is None
            psi[j] = M
    return nc, psi


def finish_executor(res, phi, s, rho, u, prec):
    """Certify truncated acyclicity of the tensored resolution.

    Preconditions: the witness is accepted and the homotopy checks.  Then
    Id - Psi is an invertible chain map (geometric series) that is also
    null-homotopic, so all homology below the precision dies; the
    certificate records every identity verified.
    """
    witness = verify_sigma_witness(res, phi, u)
    if not witness["accepted"]:
        raise Precondition("witness rejected: %s" % witness["reasons"],
                           reasons=witness["reasons"])
    if not verify_homotopy(res, phi, s):
        raise Precondition("homotopy identity d s + s d = phi - Id fails")
    C = res.complex
    nc, psi = tensor_with_rep(res, rho, u, prec, phi=phi)
    rep = rho if isinstance(rho, Representation) else Representation(C.pres, rho)
    checks = []
    inverses = {}
    for j in range(C.top + 1):
        M = psi[j]
        bad = M.u_positive_violation()
        if bad is not None:
            raise Precondition("twisted witness not u-positive in degree %d "
                               "at entry %s" % (j, bad))
        B = invert_id_minus(M)
        Id = NovikovMatrix.identity(nc.pres, u, M.rows, prec, nc.p)
        IA = Id - M
        left = IA.compose(B) - Id
        right = B.compose(IA) - Id
        if not (left.is_zero_below_prec() and right.is_zero_below_prec()):
            raise Precondition("geometric inverse fails the two-sided identity "
                               "in degree %d" % j)
        inverses[j] = B
        checks.append({"degree": j, "rank": M.rows,
                       "two_sided_identity": True})
    # Id - Psi commutes with the tensored differential up to precision
    for j in range(1, C.top + 1):
        Id_j = NovikovMatrix.identity(nc.pres, u, psi[j].rows, prec, nc.p)
        Id_jm = NovikovMatrix.identity(nc.pres, u, psi[j - 1].rows, prec, nc.p)
        lhs = nc.d[j].compose(Id_j - psi[j])
        rhs = (Id_jm - psi[j - 1]).compose(nc.d[j])
        if not (lhs - rhs).is_zero_below_prec():
            raise Precondition("Id - Psi is not a chain map up to precision "
                               "in degree %d" % j)
    # the homotopy survives the twist: d s~ + s~ d = Psi - Id up to precision
    s_t = {j: NovikovMatrix(
        [[embed(x, u, prec, p=C.p) for x in row] for row in _blow_up(s[j], rep)],
        nc.pres, u, nc.p) for j in s}
    for j in range(C.top + 1):
        acc = None
        if j in s_t and j + 1 <= C.top:
            acc = nc.d[j + 1].compose(s_t[j])
        if j - 1 in s_t and j >= 1:
            term = s_t[j - 1].compose(nc.d[j])
            acc = term if acc is None else acc + term
        want = psi[j] - NovikovMatrix.identity(nc.pres, u, psi[j].rows, prec,
                                               nc.p)
        if acc is None:
            acc = NovikovMatrix.zeros(nc.pres, u, psi[j].rows, psi[j].rows,
                                      prec, nc.p)
        if not (acc - want).is_zero_below_prec():
            raise Precondition("twisted homotopy fails up to precision in "
                               "degree %d" % j)
    return {
        "acyclic_up_to_precision": prec,
        "rep_rank": rep.r,
        "degrees": checks,
        "witness": witness,
        "homotopy_verified": True,
        "chain_map_verified": True,
    }
