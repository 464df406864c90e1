"""
Decision logic turning group invariants into finite-generation verdicts.

The rules, stated on the inputs this tool can check or the user can
declare:

  CW complex of dimension q with polycyclic fundamental group of Hirsch
  number h:
    h > q            -> some higher homotopy group is not finitely
                        generated (the cohomological dimension already
                        exceeds the dimension of any aspherical model).
    h in {q-1, q}    -> the same unless the complex is aspherical; if the
                        group has torsion its cohomological dimension is
                        infinite, no aspherical model exists, and the
                        unconditional conclusion returns; likewise a
                        nonzero Euler characteristic together with
                        declared kernel finiteness forces vanishing
                        completed homology and contradicts chi != 0.
  Closed manifold of dimension n, h >= n-1:
    some homotopy group below max(floor(n/2), 3) is not finitely
    generated unless h = n and the manifold is aspherical; in dimension 4
    the conclusion lands on the second homotopy group.

Verdicts never claim a space is aspherical; the exception is carried as a
caveat.  Declared hypotheses are echoed, not verified.
"""

from .complexes import ACYCLIC, FREE_HOMOLOGY, fingerprint, homology_verdict
from .errors import Precondition

HOMOTOPY_NOT_FG = "HOMOTOPY_NOT_FG"
NOT_FG_UNLESS_ASPHERICAL = "NOT_FG_UNLESS_ASPHERICAL"
NOT_FG_SOME_LOW_DEGREE = "NOT_FG_SOME_LOW_DEGREE"
NO_CONCLUSION = "NO_CONCLUSION"

VERDICT_ORDER = {NO_CONCLUSION: 0, NOT_FG_UNLESS_ASPHERICAL: 1,
                 NOT_FG_SOME_LOW_DEGREE: 1, HOMOTOPY_NOT_FG: 2}


def advise(pres, kind, dim, torsion_declared=False, chi=None,
           kernel_finiteness=False, skip_consistency=False):
    """Return the strongest verdict the inputs support, with citations."""
    if dim < 1:
        raise Precondition("dimension must be at least 1")
    if kind not in ("CW", "MANIFOLD"):
        raise Precondition("kind must be CW or MANIFOLD")
    if not skip_consistency:
        report = pres.check_consistency()
        if not report["ok"]:
            raise Precondition("presentation fails consistency: %s"
                               % report["failures"][:1])
    h = pres.hirsch_number()
    caveats = []
    if torsion_declared and pres.is_poly_Z():
        caveats.append("torsion was declared but every relative order is "
                       "infinite, so the group is torsion free; the "
                       "declaration was ignored for soundness")
        torsion_declared = False

    justification = []
    citations = []
    result = NO_CONCLUSION
    low_degree = None

    if kind == "CW":
        q = dim
        if h > q:
            result = HOMOTOPY_NOT_FG
            citations.append("hirsch-exceeds-dimension")
            justification.append(
                "Hirsch number %d exceeds the complex dimension %d, so no "
                "aspherical model can exist and some higher homotopy group "
                "is not finitely generated." % (h, q))
        elif h in (q - 1, q):
            result = NOT_FG_UNLESS_ASPHERICAL
            citations.append("hirsch-near-dimension")
            justification.append(
                "Hirsch number %d is within one of the dimension %d: the "
                "homotopy is not finitely generated unless the complex is "
                "aspherical." % (h, q))
            if torsion_declared:
                result = HOMOTOPY_NOT_FG
                citations.append("torsion-excludes-aspherical")
                justification.append(
                    "Declared torsion gives infinite cohomological "
                    "dimension, ruling out an aspherical model; the "
                    "unconditional conclusion applies.")
            elif chi is not None and chi != 0 and kernel_finiteness:
                result = HOMOTOPY_NOT_FG
                citations.append("euler-characteristic-route")
                justification.append(
                    "Euler characteristic %d is nonzero while the declared "
                    "kernel finiteness would force it to vanish if the "
                    "homotopy were finitely generated." % chi)
            else:
                caveats.append("conclusion void if the complex is aspherical")
    else:
        n = dim
        if h >= n - 1:
            result = NOT_FG_SOME_LOW_DEGREE
            if n == 4:
                low_degree = 2
                citations.append("dimension-four-pi2")
                justification.append(
                    "Closed 4-manifold with Hirsch number %d >= 3: the "
                    "second homotopy group is not finitely generated unless "
                    "the manifold is aspherical with Hirsch number 4." % h)
            else:
                low_degree = max(n // 2, 3)
                citations.append("closed-manifold-low-degree")
                justification.append(
                    "Closed %d-manifold with Hirsch number %d >= %d: some "
                    "homotopy group in degree at most %d is not finitely "
                    "generated unless the manifold is aspherical with "
                    "Hirsch number %d." % (n, h, n - 1, low_degree, n))
            if h == n:
                caveats.append("conclusion void if the manifold is "
                               "aspherical")
            else:
                citations.append("aspherical-needs-full-hirsch")
                justification.append(
                    "Asphericity would force the Hirsch number to equal the "
                    "dimension %d, but it is %d, so the conclusion is "
                    "unconditional." % (n, h))
                result = NOT_FG_SOME_LOW_DEGREE

    verdict = {
        "verdict": result,
        "hirsch": h,
        "kind": kind,
        "dimension": dim,
        "citations": citations,
        "justification": justification,
        "caveats": caveats,
        "declared": {
            "torsion": torsion_declared,
            "chi": chi,
            "kernel_finiteness": kernel_finiteness,
        },
    }
    if low_degree is not None:
        verdict["low_degree_bound"] = low_degree
    return verdict


# ---------------------------------------------------------------------------

def obstruction_report(C, u, prec=32, primes=(2, 3, 5),
                       whitehead_declared=False, kernel_fp_declared=False):
    """Assemble the three fibration obstruction conditions at this level.

    Condition 1 (vanishing completed homology) is computed: the reduction
    verdict is cross-checked against the Laurent fingerprint for every
    requested prime.  Conditions 2 (torsion obstruction vanishes) and 3
    (kernel finitely presented) are declarations; condition 2 is declared
    automatically when the group visibly has only infinite cyclic factors.
    """
    rep = homology_verdict(C, u, prec)
    fps = {p: fingerprint(C, u, p) for p in primes} if C.p is None else \
        {C.p: fingerprint(C, u, C.p)}
    if rep.verdict == ACYCLIC:
        for p, b in fps.items():
            assert all(x == 0 for x in b), \
                "fingerprint oracle contradicts an exact certificate"
        cond1 = "COMPUTED-VANISHING"
    elif rep.verdict == FREE_HOMOLOGY:
        cond1 = "COMPUTED-NONVANISHING"
    else:
        cond1 = "INDETERMINATE"

    citations = []
    if whitehead_declared:
        wh = "DECLARED"
    elif C.pres.is_poly_Z():
        wh = "AUTO-POLY-Z"
        citations.append("poly-Z-whitehead-vanishing")
    else:
        wh = "NOT-DECLARED"
    kf = "DECLARED" if kernel_fp_declared else "NOT-DECLARED"

    unobstructed = (cond1 == "COMPUTED-VANISHING"
                    and wh in ("DECLARED", "AUTO-POLY-Z")
                    and kf == "DECLARED")
    if cond1 == "COMPUTED-VANISHING":
        citations.append("novikov-vanishing-computed")
    if cond1 == "COMPUTED-NONVANISHING":
        citations.append("euler-vanishing-contrapositive")

    return {
        "homology": rep.as_dict(),
        "fingerprints": {str(p): b for p, b in fps.items()},
        "conditions": [
            {"condition": "vanishing-completed-homology", "status": cond1},
            {"condition": "torsion-obstruction-vanishes", "status": wh},
            {"condition": "kernel-finitely-presented", "status": kf},
        ],
        "fibration_unobstructed": unobstructed,
        "euler": C.euler(),
        "citations": citations,
    }
