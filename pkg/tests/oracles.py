"""Naive from-definition reference implementations used as test oracles.

Everything here works on plain edge sets and Python integers / Fractions and
shares no code with the package.
"""

import itertools
from fractions import Fraction


def adjacency(n, edges):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def neighborhood(adj, s):
    return {w for v in s for w in adj[v]} - set(s)


def induced_edges(adj, s):
    s = set(s)
    return {(u, v) for u in s for v in adj[u] if v in s and u < v}


def ks_d(a, b):
    hi = max(max(a), max(b))
    best = Fraction(0)
    for x in range(-1, hi + 1):
        fa = Fraction(sum(1 for d in a if d <= x), len(a))
        fb = Fraction(sum(1 for d in b if d <= x), len(b))
        best = max(best, abs(fa - fb))
    return best


def distsim(adj, s):
    g_deg = [len(adj[v]) for v in adj]
    sub = induced_edges(adj, s)
    s_deg = [sum(1 for e in sub if v in e) for v in s]
    return 1 - ks_d(g_deg, s_deg)


def hubs(adj, s, K):
    ranked = sorted(adj, key=lambda v: (-len(adj[v]), v))[:K]
    return Fraction(sum(1 for v in ranked if v in set(s)), len(ranked))


def ccloc(adj, s):
    s = set(s)
    total = Fraction(0)
    for v in s:
        nb = [u for u in adj[v] if u in s]
        d = len(nb)
        if d < 2:
            continue
        links = sum(1 for a, b in itertools.combinations(nb, 2) if b in adj[a])
        total += Fraction(2 * links, d * (d - 1))
    return total / len(s)


def ccglb(adj, s):
    s = sorted(set(s))
    closed = connected = 0
    for center in s:
        nb = [u for u in adj[center] if u in s]
        for a, b in itertools.combinations(nb, 2):
            connected += 1
            if b in adj[a]:
                closed += 1
    return Fraction(closed, connected) if connected else Fraction(0)


def community_reach(labels, s):
    return Fraction(len({labels[v] for v in s}), len(set(labels)))


def dq(adj, s):
    return Fraction(len(set(s) | neighborhood(adj, s)), len(adj))


def modularity(n, edges, labels):
    m = len(edges)
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    q = Fraction(0)
    for u in range(n):
        for v in range(n):
            if labels[u] != labels[v]:
                continue
            a = 1 if (min(u, v), max(u, v)) in edges else 0
            q += Fraction(a) - Fraction(deg[u] * deg[v], 2 * m)
    return q / (2 * m)


def set_partitions(items):
    """All set partitions of ``items`` (Bell-number many)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def greedy_scores(adj, s, rule):
    """Score of every frontier node under DS / SEC / XS, straight from the definitions."""
    s = set(s)
    front = neighborhood(adj, s)
    known = front | s
    if rule == "ds":
        return {v: len(adj[v]) for v in front}
    if rule == "sec":
        return {v: len(adj[v] & s) for v in front}
    return {v: len(adj[v] - known) for v in front}


def argmax_set(scores):
    if not scores:
        return set()
    best = max(scores.values())
    return {v for v, sc in scores.items() if sc == best}
