"""Independent reference computations used as test oracles."""

import itertools

from torofiber import linalg


def brute_hilbert_basis(rays):
    """Irreducible lattice points of a simplicial cone, by box enumeration."""
    n = len(rays)
    inv = linalg.inverse_rational([list(c) for c in zip(*rays)])
    lo = [min(0, *(r[k] for r in rays)) * n for k in range(n)]
    hi = [max(0, *(r[k] for r in rays)) * n for k in range(n)]
    pts = []
    for p in itertools.product(*[range(a, b + 1) for a, b in zip(lo, hi)]):
        if not any(p):
            continue
        lam = [sum(inv[i][k] * p[k] for k in range(n)) for i in range(n)]
        if all(0 <= x <= 1 for x in lam):
            pts.append((p, lam))
    pset = {p for p, _ in pts}
    out = []
    for p, lam in pts:
        if not any(
            q != p and all(b <= a for a, b in zip(lam, mu)) and tuple(a - b for a, b in zip(p, q)) in pset
            for q, mu in pts
        ):
            out.append(p)
    return sorted(out)
