"""Independent brute-force oracles used by the test suite.

These deliberately avoid the package's own linear algebra: finite abelian
groups are handled by element enumeration and invariant factors are
recovered from p-power annihilator counts, so agreement with the package
is meaningful evidence.
"""

from itertools import product
from math import gcd


def _factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def combine_cyclic_orders(orders):
    """Invariant-factor chain of a direct sum of cyclic groups."""
    per_prime = {}
    for n in orders:
        for p, e in _factor(n).items():
            per_prime.setdefault(p, []).append(e)
    if not per_prime:
        return ()
    slots = max(len(v) for v in per_prime.values())
    chain = [1] * slots
    for p, exps in per_prime.items():
        exps.sort(reverse=True)
        for i, e in enumerate(exps):
            chain[i] *= p**e
    chain.sort()
    return tuple(c for c in chain if c > 1)


def elements(mods):
    return list(product(*(range(m) for m in mods)))


def vec_add(a, b, mods):
    return tuple((x + y) % m for x, y, m in zip(a, b, mods))


def vec_scale(k, a, mods):
    return tuple((k * x) % m for x, m in zip(a, mods))


def apply_map(vec, matrix, mods_out):
    n = len(mods_out)
    out = [0] * n
    for i, x in enumerate(vec):
        if x:
            for j in range(n):
                out[j] = (out[j] + x * matrix[i][j]) % mods_out[j]
    return tuple(out)


def subgroup_span(gens, mods):
    """Closure of a generating set inside prod Z/mods."""
    zero = tuple(0 for _ in mods)
    seen = {zero}
    frontier = [zero]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = vec_add(cur, g, mods)
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def brute_quotient_invariants(sub_elems, quot_gens, mods):
    """Invariant factors of S/T for T = span(quot_gens) inside S.

    Works by counting p^j-annihilated elements of the quotient: the
    number of parts of the p-partition of size >= j is
    log_p |{x in S : p^j x in T}| - log_p |{x : p^(j-1) x in T}|.
    """
    T = subgroup_span(quot_gens, mods)
    assert T <= set(sub_elems)
    order = len(sub_elems) // len(T)
    factors = []
    for p in _factor(order):
        logs = [0]
        j = 1
        while True:
            n_j = sum(1 for x in sub_elems if vec_scale(p**j, x, mods) in T) // len(T)
            e = 0
            while n_j > 1:
                assert n_j % p == 0
                n_j //= p
                e += 1
            logs.append(e)
            if logs[-1] == logs[-2]:
                break
            j += 1
        parts_ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
        for k, cnt in enumerate(parts_ge):
            nxt = parts_ge[k + 1] if k + 1 < len(parts_ge) else 0
            factors.extend([p ** (k + 1)] * (cnt - nxt))
    return combine_cyclic_orders(factors)


def brute_homology(mods_a, mat_f, mods_b, mat_g, mods_c):
    """Invariant factors of ker(g)/im(f) for finite A --f--> B --g--> C."""
    zero_c = tuple(0 for _ in mods_c)
    ker = [b for b in elements(mods_b) if apply_map(b, mat_g, mods_c) == zero_c]
    img_gens = [
        apply_map(a, mat_f, mods_b)
        for a in [tuple(1 if j == i else 0 for j in range(len(mods_a))) for i in range(len(mods_a))]
    ]
    return brute_quotient_invariants(ker, img_gens, mods_b)
