"""Airy Ai and Ai' on the real line, their negative-axis zeros, and the
spectrum of the symmetric linear potential -d2/dz2 + |z|.

Evaluation uses the standard two-series Maclaurin decomposition

    Ai(x) = C1*f(x) - C2*g(x),   C1 = 3^(-2/3)/Gamma(2/3),  C2 = 3^(-1/3)/Gamma(1/3)

for |x| <= SERIES_RADIUS and Poincare asymptotic expansions beyond.  The
series suffers catastrophic cancellation away from the origin (the partial
sums reach ~1e5 at |x| = 8 while the result is O(1e-1)), so it is summed in
double-double arithmetic; plain double precision would lose the 1e-12
absolute-accuracy contract already near |x| = 6.

The switch sits at 8.0 because the *divergence floor* of the optimally
truncated asymptotic series on the negative axis is ~2e-11 at x = -6 and only
drops below 1e-12 past |x| ~ 7.2; this is an intrinsic property of the
expansion, independent of working precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

SERIES_RADIUS = 8.0

# Double-double decompositions of C1 = Ai(0) and C2 = -Ai'(0)
# (35-digit values from an arbitrary-precision computation).
_C1 = (0.3550280538878172, 2.05233632436212e-17)
_C2 = (0.2588194037928068, -2.522243111610832e-17)

_SQRT_PI = 1.7724538509055160273

_MAX_SERIES_TERMS = 160


class BracketingError(RuntimeError):
    """A zero search failed to bracket a sign change."""

    def __init__(self, message: str, interval: tuple[float, float]):
        super().__init__(f"{message} in [{interval[0]!r}, {interval[1]!r}]")
        self.interval = interval


# ---------------------------------------------------------------------------
# double-double primitives (Dekker/Knuth error-free transformations)

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _two_prod(a, b):
    p = a * b
    t = _SPLITTER * a
    ahi = t - (t - a)
    alo = a - ahi
    t = _SPLITTER * b
    bhi = t - (t - b)
    blo = b - bhi
    return p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo


def _dd_add(x, y):
    s, e = _two_sum(x[0], y[0])
    e += x[1] + y[1]
    return _quick_two_sum(s, e)


def _dd_sub(x, y):
    return _dd_add(x, (-y[0], -y[1]))


def _dd_mul(x, y):
    p, e = _two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return _quick_two_sum(p, e)


def _dd_mul_d(x, d):
    p, e = _two_prod(x[0], d)
    e += x[1] * d
    return _quick_two_sum(p, e)


def _dd_div_d(x, d):
    q1 = x[0] / d
    p, e = _two_prod(q1, d)
    r = ((x[0] - p) - e) + x[1]
    return _quick_two_sum(q1, r / d)


# ---------------------------------------------------------------------------
# Maclaurin branch

def _series_both(x: float) -> tuple[float, float]:
    """(Ai, Ai') by the two-series decomposition, summed in double-double."""
    x_dd = (x, 0.0)
    x2 = _dd_mul(x_dd, x_dd)
    x3 = _dd_mul(x2, x_dd)

    f = tf = (1.0, 0.0)
    g = tg = x_dd
    fp = tfp = _dd_div_d(x2, 2.0)
    gp = tgp = (1.0, 0.0)

    for k in range(_MAX_SERIES_TERMS):
        tk = 3.0 * k
        tf = _dd_div_d(_dd_mul(tf, x3), (tk + 2.0) * (tk + 3.0))
        tg = _dd_div_d(_dd_mul(tg, x3), (tk + 3.0) * (tk + 4.0))
        # f' terms are indexed from k=1, so their ratio uses k+1
        tfp = _dd_div_d(_dd_mul(tfp, x3), (tk + 3.0) * (tk + 5.0))
        tgp = _dd_div_d(_dd_mul(tgp, x3), (tk + 1.0) * (tk + 3.0))
        f = _dd_add(f, tf)
        g = _dd_add(g, tg)
        fp = _dd_add(fp, tfp)
        gp = _dd_add(gp, tgp)
        if (abs(tf[0]) < 1e-36 * abs(f[0]) and abs(tg[0]) < 1e-36 * (abs(g[0]) + 1e-300)
                and abs(tfp[0]) < 1e-36 * (abs(fp[0]) + 1e-300)
                and abs(tgp[0]) < 1e-36 * abs(gp[0])):
            break

    ai = _dd_sub(_dd_mul(_C1, f), _dd_mul(_C2, g))
    aip = _dd_sub(_dd_mul(_C1, fp), _dd_mul(_C2, gp))
    return ai[0] + ai[1], aip[0] + aip[1]


# ---------------------------------------------------------------------------
# asymptotic branch

def _asym_coefficients(zeta: float, max_terms: int = 46):
    """Terms u_k/zeta^k and v_k/zeta^k of the Poincare expansions, truncated
    just before the smallest term (the optimal-truncation point)."""
    us = []
    vs = []
    uk = 1.0
    zk = 1.0
    prev = math.inf
    for k in range(max_terms):
        term = uk * zk
        if abs(term) > prev:
            break
        us.append(term)
        vs.append(term * (6.0 * k + 1.0) / (1.0 - 6.0 * k) if k else 1.0)
        prev = abs(term)
        uk *= (6 * k + 1) * (6 * k + 3) * (6 * k + 5) / (216.0 * (k + 1) * (2 * k + 1))
        zk /= zeta
    return us, vs


def _asym_positive(x: float) -> tuple[float, float]:
    sqrt_x = math.sqrt(x)
    zeta = (2.0 / 3.0) * x * sqrt_x
    if zeta > 700.0:  # exp(-zeta) underflows: Ai and Ai' are zero to double precision
        return 0.0, 0.0
    us, vs = _asym_coefficients(zeta)
    s_a = sum(t if k % 2 == 0 else -t for k, t in enumerate(us))
    s_b = sum(t if k % 2 == 0 else -t for k, t in enumerate(vs))
    pref = math.exp(-zeta) / (2.0 * _SQRT_PI)
    root4 = math.sqrt(sqrt_x)
    return pref * s_a / root4, -pref * s_b * root4


def _asym_negative(x: float) -> tuple[float, float]:
    t = -x
    sqrt_t = math.sqrt(t)
    zeta = (2.0 / 3.0) * t * sqrt_t
    us, vs = _asym_coefficients(zeta)
    p = sum(us[k] * (-1.0) ** (k // 2) for k in range(0, len(us), 2))
    q = sum(us[k] * (-1.0) ** (k // 2) for k in range(1, len(us), 2))
    r = sum(vs[k] * (-1.0) ** (k // 2) for k in range(0, len(vs), 2))
    s = sum(vs[k] * (-1.0) ** (k // 2) for k in range(1, len(vs), 2))
    phase = zeta - 0.25 * math.pi
    cosp = math.cos(phase)
    sinp = math.sin(phase)
    root4 = math.sqrt(sqrt_t)
    ai = (cosp * p + sinp * q) / (_SQRT_PI * root4)
    aip = (sinp * r - cosp * s) * root4 / _SQRT_PI
    return ai, aip


@lru_cache(maxsize=1 << 16)
def _ai_both(x: float) -> tuple[float, float]:
    if abs(x) <= SERIES_RADIUS:
        return _series_both(x)
    if x > 0.0:
        return _asym_positive(x)
    return _asym_negative(x)


def airy_ai(x: float) -> float:
    """Ai(x). Absolute error <= 1e-12 for |x| <= 10; underflows to 0.0 for
    large positive x."""
    return _ai_both(float(x))[0]


def airy_ai_prime(x: float) -> float:
    """Ai'(x), same accuracy contract as airy_ai."""
    return _ai_both(float(x))[1]


# ---------------------------------------------------------------------------
# zeros and the linear-potential spectrum

def _zero_guess_ai(s: int) -> float:
    # McMahon-style expansion of the s-th negative zero of Ai
    t = 3.0 * math.pi * (4 * s - 1) / 8.0
    t2 = 1.0 / (t * t)
    return -(t ** (2.0 / 3.0)) * (1.0 + t2 * (5.0 / 48.0 - t2 * 5.0 / 36.0))


def _zero_guess_aip(s: int) -> float:
    t = 3.0 * math.pi * (4 * s - 3) / 8.0
    t2 = 1.0 / (t * t)
    return -(t ** (2.0 / 3.0)) * (1.0 - t2 * (7.0 / 48.0 - t2 * 35.0 / 288.0))


def _refine_zero(f, guess: float, halfwidth: float = 0.25) -> float:
    """Bracket a sign change around ``guess``, bisect, then one secant polish."""
    lo, hi = guess - halfwidth, guess + halfwidth
    flo, fhi = f(lo), f(hi)
    expansions = 0
    while flo * fhi > 0.0:
        expansions += 1
        if expansions > 8:
            raise BracketingError("no sign change for Airy zero", (lo, hi))
        halfwidth *= 1.6
        lo, hi = guess - halfwidth, guess + halfwidth
        flo, fhi = f(lo), f(hi)
    while hi - lo > 1e-11:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    # one secant step squeezes out the remaining bisection error
    if fhi != flo:
        return hi - fhi * (hi - lo) / (fhi - flo)
    return 0.5 * (lo + hi)


def ai_zeros(count: int) -> list[float]:
    """First ``count`` zeros of Ai (negative, decreasing)."""
    return [_refine_zero(airy_ai, _zero_guess_ai(s)) for s in range(1, count + 1)]


def ai_prime_zeros(count: int) -> list[float]:
    """First ``count`` zeros of Ai' (negative, decreasing)."""
    return [_refine_zero(airy_ai_prime, _zero_guess_aip(s)) for s in range(1, count + 1)]


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    lam: float          # eigenvalue of -d2/dz2 + |z|
    shifted: float      # lam - lam_0
    parity: str         # "even" | "odd"
    source: str         # "zero-of-Ai-prime" | "zero-of-Ai"


@dataclass(frozen=True)
class SpectrumTable:
    entries: tuple[SpectrumEntry, ...]

    @property
    def ground_energy(self) -> float:
        return self.entries[0].lam


def linear_spectrum(count: int) -> SpectrumTable:
    """First ``count`` eigenvalues of -d2/dz2 + |z|.

    Even-parity levels (psi'(0) = 0) sit at the zeros of Ai'(-lam), odd-parity
    levels (psi(0) = 0) at the zeros of Ai(-lam); the two families interlace.
    All values are located numerically, never read from a table.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    n_even = (count + 1) // 2
    n_odd = count // 2
    evens = [-z for z in ai_prime_zeros(n_even)]
    odds = [-z for z in ai_zeros(n_odd)] if n_odd else []
    lam0 = evens[0]
    entries = []
    for n in range(count):
        if n % 2 == 0:
            lam, parity, source = evens[n // 2], "even", "zero-of-Ai-prime"
        else:
            lam, parity, source = odds[n // 2], "odd", "zero-of-Ai"
        entries.append(SpectrumEntry(n, lam, lam - lam0, parity, source))
    for a, b in zip(entries, entries[1:]):
        if not b.lam > a.lam:
            raise BracketingError("spectrum not strictly increasing",
                                  (a.lam, b.lam))
    return SpectrumTable(tuple(entries))
