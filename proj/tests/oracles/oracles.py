"""Brute-force reference values frozen into the C++ unit tests.

Every quantity here is computed by direct enumeration, independent of the
library. Run with: python3 tests/oracles/oracles.py
"""
import itertools
import math


def is_prime(n):
    if n < 2:
        return False
    return all(n % p for p in range(2, int(math.isqrt(n)) + 1))


def ap_sets(N, r):
    out = set()
    for a in range(N):
        for d in range(1, N):
            s = frozenset((a + j * d) % N for j in range(r))
            if len(s) == r:
                out.add(s)
    return out


def is_ap(S, N):
    S = set(S)
    r = len(S)
    return any(frozenset((a + j * d) % N for j in range(r)) == S for a in range(N) for d in range(1, N))


def k_of_modulus(r, C, N):
    return math.ceil(C * (N / math.log(N)) ** (1 / (r - 1)) * math.log(N))


def select_modulus(r, k, C, N0, limit):
    best = None
    for N in range(max(2, N0), limit + 1):
        if is_prime(N) and k_of_modulus(r, C, N) <= k:
            best = N
    return best


def has_mono_ap(coloring, color, length):
    n = len(coloring)
    for a in range(1, n + 1):
        for d in range(1, n):
            if a + (length - 1) * d > n:
                break
            if all(coloring[a + j * d - 1] == color for j in range(length)):
                return True
    return False


def vdw(r, k):
    n = 1
    while True:
        if all(has_mono_ap(c, 1, r) or has_mono_ap(c, 0, k) for c in itertools.product((0, 1), repeat=n)):
            return n
        n += 1


def max_bip_min_degree(n, edges):
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    best = 0
    for size in range(1, n + 1):
        for S in itertools.combinations(range(n), size):
            Sset = set(S)
            color = {}
            ok = True
            for s in S:
                if s in color:
                    continue
                color[s] = 0
                stack = [s]
                while stack and ok:
                    x = stack.pop()
                    for y in adj[x] & Sset:
                        if y not in color:
                            color[y] = 1 - color[x]
                            stack.append(y)
                        elif color[y] == color[x]:
                            ok = False
                            break
            if ok:
                best = max(best, min(len(adj[s] & Sset) for s in S))
    return best


def cycle(n):
    return [(i, (i + 1) % n) for i in range(n)]


petersen = [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + \
    [(5 + i, 5 + (i + 2) % 5) for i in range(5)]

if __name__ == "__main__":
    for N in (5, 7, 11, 13):
        sets = ap_sets(N, 3)
        deg = sum(1 for s in sets if 0 in s)
        print(f"N={N} r=3 totalAPs={len(sets)} D={deg}")
    for N, r in ((11, 4), (13, 5)):
        sets = ap_sets(N, r)
        print(f"N={N} r={r} totalAPs={len(sets)} D={sum(1 for s in sets if 0 in s)}")
    print("N=5 x=0 APs:", sorted(sorted(s) for s in ap_sets(5, 3) if 0 in s))
    for S, N in (((0, 1, 2), 5), ((1, 2, 7), 11), ((0, 1, 3), 7)):
        print(f"is_ap({S}, N={N}) = {is_ap(S, N)}")
    print("k_of_modulus(3, 1, 1009) =", k_of_modulus(3, 1.0, 1009))
    print("select_modulus(3, 100, C=1, N0=2) =", select_modulus(3, 100, 1.0, 2, 10 ** 6))
    print("select_modulus(3, 500, C=2, N0=2) =", select_modulus(3, 500, 2.0, 2, 10 ** 6))
    print("select_modulus(4, 200, C=1, N0=2) =", select_modulus(4, 200, 1.0, 2, 10 ** 6))
    for r, k in ((2, 2), (2, 3), (3, 3), (3, 4)):
        print(f"W({r},{k}) = {vdw(r, k)}")
    print("bip C5 =", max_bip_min_degree(5, cycle(5)))
    print("bip C6 =", max_bip_min_degree(6, cycle(6)))
    print("bip C7 =", max_bip_min_degree(7, cycle(7)))
    print("bip Petersen =", max_bip_min_degree(10, petersen))
    print("bip K33 =", max_bip_min_degree(6, [(i, j) for i in range(3) for j in range(3, 6)]))
