"""Hot point-counting kernels: numba-jitted loops with a pure-numpy fallback.

The character-sum count over F_p is the only operation that touches every
residue of a (possibly large) prime field, so it dominates prime sweeps.  Both
implementations are exact: the quadratic-character table is built by squaring
every residue, and all intermediates fit in int64 for the supported ranges
(table path needs p <= 2^24; the no-table path needs p < 2^31).

Path selection: numba is used when importable unless the environment variable
EXTCONG_NUMBA is set to 0/false/no/off, in which case the numpy path runs.
``benchmarks/bench_kernels.py`` compares the two.
"""

import os

import numpy as np

# table path: memory p bytes, intermediates < 4 * 2^48
TABLE_LIMIT = 1 << 24

_flag = os.environ.get("EXTCONG_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _flag not in ("0", "false", "no", "off")

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


def use_numba() -> bool:
    return NUMBA_AVAILABLE and NUMBA_REQUESTED


# ---------------------------------------------------------------------------
# numba path


@njit(cache=True)
def _charsum_count_nb(p, b2, b4, b6):
    chi = np.full(p, -1, dtype=np.int8)
    for x in range(p):
        chi[(x * x) % p] = 1
    chi[0] = 0
    b42 = (2 * b4) % p
    acc = 0
    for x in range(p):
        s = (x * x) % p
        g = ((4 * s) % p * x + b2 * s + b42 * x + b6) % p
        acc += chi[g]
    return p + 1 + acc


@njit(cache=True)
def _charsum_counts_batch_nb(ps, b2s, b4s, b6s, out):
    for i in range(ps.shape[0]):
        out[i] = _charsum_count_nb(ps[i], b2s[i], b4s[i], b6s[i])


@njit(cache=True)
def _powmod_nb(base, exp, mod):
    result = 1
    base %= mod
    while exp > 0:
        if exp & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        exp >>= 1
    return result


@njit(cache=True)
def _charsum_count_powmod_nb(p, b2, b4, b6):
    half = (p - 1) // 2
    b42 = (2 * b4) % p
    acc = 0
    for x in range(p):
        s = (x * x) % p
        g = ((4 * s) % p * x + b2 * s + b42 * x + b6) % p
        if g != 0:
            e = _powmod_nb(g, half, p)
            acc += 1 if e == 1 else -1
    return p + 1 + acc


# ---------------------------------------------------------------------------
# numpy path


def _charsum_count_np(p, b2, b4, b6):
    x = np.arange(p, dtype=np.int64)
    s = (x * x) % p
    chi = np.full(p, -1, dtype=np.int8)
    chi[s] = 1
    chi[0] = 0
    g = ((4 * s) % p * x + b2 * s + ((2 * b4) % p) * x + b6) % p
    return int(p + 1 + chi[g].sum(dtype=np.int64))


def _charsum_count_powmod_np(p, b2, b4, b6, chunk=1 << 20):
    half = (p - 1) // 2
    b42 = (2 * b4) % p
    total = 0
    nonzero = 0
    for lo in range(0, p, chunk):
        x = np.arange(lo, min(lo + chunk, p), dtype=np.int64)
        s = (x * x) % p
        g = ((4 * s) % p * x + b2 * s + b42 * x + b6) % p
        g = g[g != 0]
        nonzero += g.size
        # vectorized square-and-multiply
        acc = np.ones_like(g)
        base = g.copy()
        e = half
        while e:
            if e & 1:
                acc = (acc * base) % p
            e >>= 1
            if e:
                base = (base * base) % p
        total += int(np.count_nonzero(acc == 1))
    # chi = +1 for residues, -1 for the rest of the nonzero values
    return p + 1 + (2 * total - nonzero)


# ---------------------------------------------------------------------------
# dispatch


def charsum_count(p: int, b2: int, b4: int, b6: int) -> int:
    """#E(F_p) = p + 1 + sum chi(4x^3 + b2 x^2 + 2 b4 x + b6), p odd.

    Arguments must already be reduced mod p.
    """
    if p <= TABLE_LIMIT:
        if use_numba():
            return int(_charsum_count_nb(p, b2, b4, b6))
        return _charsum_count_np(p, b2, b4, b6)
    if p >= 1 << 31:
        raise ValueError("character-sum path supports p < 2^31")
    if use_numba():
        return int(_charsum_count_powmod_nb(p, b2, b4, b6))
    return _charsum_count_powmod_np(p, b2, b4, b6)


def charsum_counts_batch(ps, b2s, b4s, b6s):
    """Counts for many primes at once; all inputs reduced mod the matching p."""
    ps = np.asarray(ps, dtype=np.int64)
    if ps.size and int(ps.max()) > TABLE_LIMIT:
        raise ValueError("batch path requires p <= TABLE_LIMIT")
    b2s = np.asarray(b2s, dtype=np.int64)
    b4s = np.asarray(b4s, dtype=np.int64)
    b6s = np.asarray(b6s, dtype=np.int64)
    out = np.empty(ps.shape[0], dtype=np.int64)
    if use_numba():
        _charsum_counts_batch_nb(ps, b2s, b4s, b6s, out)
        return out
    for i in range(ps.shape[0]):
        out[i] = _charsum_count_np(int(ps[i]), int(b2s[i]), int(b4s[i]), int(b6s[i]))
    return out
