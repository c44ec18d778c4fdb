"""Independent oracle: Koszul homology dimensions of graded ideals in C[z1, z2].

Chain group C_p in total degree t is I_{t-p} (x) Lambda^p; differential contracts against (z1, z2).
Ranks are computed with sympy over Q on explicit monomial coordinates.
"""
import itertools
import sympy as sp

M = 2


def monos(k):
    return [(a, k - a) for a in range(k, -1, -1)]


def ideal_basis(gens, k):
    """Rows spanning I_k in monomial coordinates; gens are dicts exponent->coeff."""
    cols = {mo: i for i, mo in enumerate(monos(k))}
    rows = []
    for g in gens:
        d = sum(next(iter(g)))
        if d > k:
            continue
        for b in monos(k - d):
            r = [0] * len(cols)
            for e, c in g.items():
                r[cols[(e[0] + b[0], e[1] + b[1])]] += c
            rows.append(r)
    if not rows:
        return sp.zeros(0, len(cols))
    mat = sp.Matrix(rows)
    rref, piv = mat.T.rref()  # column space of mat.T = row space of mat
    return sp.Matrix([list(mat.T[:, j]) for j in piv]) if piv else sp.zeros(0, len(cols))


def full_basis(k):
    return sp.eye(len(monos(k)))


def subsets(p):
    return list(itertools.combinations(range(M), p))


def chain_basis(basis_fn, t, p):
    """Basis of C_p at total degree t as rows in ambient coords (block per subset)."""
    k = t - p
    if k < 0:
        return sp.zeros(0, 0), []
    b = basis_fn(k)
    subs = subsets(p)
    n = len(monos(k))
    rows = []
    for si, _ in enumerate(subs):
        for r in range(b.rows):
            row = [0] * (n * len(subs))
            for c in range(n):
                row[si * n + c] = b[r, c]
            rows.append(row)
    return sp.Matrix(rows) if rows else sp.zeros(0, n * len(subs)), subs


def diff_image(row, t, p):
    """Apply d: e_S f -> sum_j (-1)^j z_{S_j} f e_{S minus S_j} to an ambient vector."""
    k = t - p
    subs = subsets(p)
    tsubs = subsets(p - 1)
    n, tn = len(monos(k)), len(monos(k + 1))
    tcols = {mo: i for i, mo in enumerate(monos(k + 1))}
    out = [0] * (tn * len(tsubs))
    for si, s in enumerate(subs):
        for c, mo in enumerate(monos(k)):
            v = row[si * n + c]
            if v == 0:
                continue
            for j, var in enumerate(s):
                rest = tuple(x for x in s if x != var)
                tgt = list(mo)
                tgt[var] += 1
                out[tsubs.index(rest) * tn + tcols[tuple(tgt)]] += (-1) ** j * v
    return out


def homology(basis_fn, dmax):
    dims = {}
    for t in range(dmax + 1):
        ranks = {}
        cdim = {}
        for p in range(M + 1):
            cb, _ = chain_basis(basis_fn, t, p)
            cdim[p] = cb.rows
            if p == 0 or cb.rows == 0:
                ranks[p] = 0
                continue
            img = sp.Matrix([diff_image(list(cb.row(r)), t, p) for r in range(cb.rows)])
            ranks[p] = img.rank()
        for p in range(M + 1):
            h = cdim[p] - ranks[p] - (ranks.get(p + 1, 0))
            if h:
                dims[(p, t)] = h
    return dims


def poly(d):
    return d


if __name__ == "__main__":
    cases = {
        "C[z]": full_basis,
        "<z1>": lambda k: ideal_basis([{(1, 0): 1}], k),
        "<z1+z2>": lambda k: ideal_basis([{(1, 0): 1, (0, 1): 1}], k),
        "<z1,z2>": lambda k: ideal_basis([{(1, 0): 1}, {(0, 1): 1}], k),
        "<z1^2,z1z2,z2^2>": lambda k: ideal_basis([{(2, 0): 1}, {(1, 1): 1}, {(0, 2): 1}], k),
    }
    for name, fn in cases.items():
        dims = homology(fn, 10)
        chi = sum((-1) ** p * h for (p, t), h in dims.items())
        print(name, dict(sorted(dims.items())), "chi", chi)
