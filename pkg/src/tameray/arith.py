"""Exact integer arithmetic: symbols, factoring, Smith/Hermite normal forms, CRT."""

import math
import random

__all__ = [
    "ResourceError",
    "kronecker_symbol",
    "is_prime",
    "factorize",
    "valuation",
    "multiplicative_order",
    "smith_normal_form",
    "hnf",
    "mat_mul",
    "det",
    "crt_combine",
    "primes_up_to",
]


class ResourceError(RuntimeError):
    """A computation exceeded its configured effort budget."""


def kronecker_symbol(a, n):
    """Kronecker symbol (a|n) for n != 0."""
    if n == 0:
        raise ValueError("kronecker_symbol: n must be nonzero")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Miller-Rabin; deterministic below 3.3e24, probabilistic beyond."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = list(_MR_BASES)
    if n >= 3317044064679887385961981:
        rng = random.Random(n)
        bases += [rng.randrange(2, n - 1) for _ in range(20)]
    for a in bases:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_up_to(n):
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


_TRIAL_LIMIT = 10**6
_SMALL_PRIMES = None


def _small_primes():
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        _SMALL_PRIMES = primes_up_to(_TRIAL_LIMIT)
    return _SMALL_PRIMES


def _brent(n, budget, rng):
    """Pollard rho with Brent's cycle detection; returns a nontrivial factor."""
    if n % 2 == 0:
        return 2
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
            spent += r
            if spent > budget:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise ResourceError(f"factorize: cofactor {n} resisted rho budget {budget}")


def factorize(n, budget=10**7, seed=0):
    """Prime factorisation of n >= 1 as a dict {prime: exponent}.

    Trial division up to 10**6, then Pollard-Brent rho on the cofactor.
    """
    if n < 1:
        raise ValueError("factorize: n must be >= 1")
    out = {}
    limit = math.isqrt(n)
    for p in _small_primes():
        if p > limit:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
            limit = math.isqrt(n)
    if n == 1:
        return dict(sorted(out.items()))
    rng = random.Random(seed)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _brent(m, budget, rng)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def valuation(n, p):
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def multiplicative_order(a, n, phi_factors=None):
    """Order of a in (Z/n)^x, given optionally the factorisation of a multiple of it."""
    a %= n
    if math.gcd(a, n) != 1:
        raise ValueError("element not invertible")
    if phi_factors is None:
        phi = n
        for p in factorize(n):
            phi = phi // p * (p - 1)
        phi_factors = factorize(phi)
    order = 1
    for p, e in phi_factors.items():
        order *= p**e
    for p in phi_factors:
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


# ---------------------------------------------------------------------------
# integer matrices (lists of lists of int)


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def det(M):
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def smith_normal_form(M):
    """Smith normal form with unimodular transforms.

    Returns ``(invariants, U, V)`` where ``U @ M @ V`` is diagonal with the
    given invariants on the diagonal, ``d_1 | d_2 | ...``, nonzero entries
    positive.  ``len(invariants) == min(rows, cols)``.  Pivots are picked by
    smallest absolute value, first in row-major order.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [list(r) for r in M]
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        if k:
            A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for R in (A, V):
                for row in R:
                    row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = A[t][t]
            done = True
            for i in range(t + 1, rows):
                add_row(i, t, -(A[i][t] // piv))
                if A[i][t]:
                    done = False
            for j in range(t + 1, cols):
                add_col(j, t, -(A[t][j] // piv))
                if A[t][j]:
                    done = False
            if not done:
                continue
            # divisibility: pivot must divide the rest of the block
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % piv:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < rows and t < cols and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-u for u in U[t]]
    invariants = [A[i][i] for i in range(min(rows, cols))]
    return invariants, U, V


def hnf(M):
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U @ M == H`` and U unimodular; H is upper
    echelon with positive pivots, entries above each pivot reduced into
    ``[0, pivot)``, and zero rows at the bottom.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    A = [list(r) for r in M]
    U = identity(rows)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        while True:
            nz = [i for i in range(r, rows) if A[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[piv] = A[piv], A[r]
            U[r], U[piv] = U[piv], U[r]
            clean = True
            for i in range(r + 1, rows):
                if A[i][c]:
                    q = A[i][c] // A[r][c]
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if r < rows and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
                U[r] = [-u for u in U[r]]
            for i in range(r):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
    return A, U


def crt_combine(pairs):
    """Combine residues ``[(r, m), ...]`` with pairwise coprime moduli.

    Returns ``(r, M)`` with ``M`` the product of the moduli, ``0 <= r < M``.
    """
    r, m = 0, 1
    for ri, mi in pairs:
        if mi <= 0:
            raise ValueError("crt_combine: moduli must be positive")
        if math.gcd(m, mi) != 1:
            raise ValueError(f"crt_combine: modulus {mi} not coprime to {m}")
        t = (ri - r) * pow(m, -1, mi) % mi
        r, m = r + m * t, m * mi
    return r % m, m
