"""
Exact rank computation for matrices of Laurent polynomials over a prime
field, working over the fraction field F_p(t).

Polynomials are dicts {exponent: coefficient mod p}.  Rank is computed by
fraction-free elimination: scaling a row by a nonzero polynomial never
changes the rank over the fraction field, so rows are combined by
cross-multiplication and renormalised by stripping powers of t.
"""


def lzero():
    return {}


def lmono(e, c, p):
    c %= p
    return {e: c} if c else {}


def ladd(f, g, p):
    out = dict(f)
    for e, c in g.items():
        v = (out.get(e, 0) + c) % p
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def lneg(f, p):
    return {e: (-c) % p for e, c in f.items()}


def lmul(f, g, p):
    out = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = e1 + e2
            v = (out.get(e, 0) + c1 * c2) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def lshift(f, k):
    return {e + k: c for e, c in f.items()}


def lis_zero(f):
    return not f


def _strip_row(row):
    """Divide a whole row by the largest common power of t."""
    exps = [min(f) for f in row if f]
    if not exps:
        return row
    k = min(exps)
    if k == 0:
        return row
    return [lshift(f, -k) for f in row]


def laurent_rank(matrix, p):
    """Rank over F_p(t) of a matrix of Laurent polynomials."""
    rows = [_strip_row([dict(f) for f in row]) for row in matrix]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = None
        for r in range(rank, len(rows)):
            if not lis_zero(rows[r][col]):
                if piv is None or len(rows[r][col]) < len(rows[piv][col]):
                    piv = r
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pivot = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col]
            if lis_zero(f):
                continue
            nf = lneg(f, p)
            rows[r] = _strip_row([
                ladd(lmul(pivot, rows[r][j], p), lmul(nf, rows[rank][j], p), p)
                for j in range(ncols)])
        rank += 1
        col += 1
    return rank
