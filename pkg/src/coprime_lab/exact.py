"""Exact finite-range coprimality counts.

Every operation returns a :class:`DensityResult` whose numerator and
denominator are exact integers (Python ints never wrap, and every int64
fast path is guarded by a proven bound before use). The float ``value`` is
the correctly rounded quotient of those integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from . import constants
from .errors import ResourceLimitError
from .sieve import prime_count, shared_tables

#: Largest n accepted by the brute-force pairwise-triple counter.
TRIPLE_BRUTE_BOUND = 2000

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class DensityResult:
    """An exact count numerator/denominator plus its float value.

    ``reference`` is the limiting constant for the experiment (when one
    exists) and ``abs_gap`` the distance of ``value`` from it.
    """

    kind: str
    n: int
    numerator: int
    denominator: int
    value: float
    reference: float | None = None
    abs_gap: float | None = None


def _result(kind, n, num, den, reference=None):
    if not 0 <= num <= den:
        raise AssertionError(f"count invariant violated: {num}/{den} for {kind}")
    value = num / den
    gap = abs(value - reference) if reference is not None else None
    return DensityResult(kind, n, num, den, value, reference, gap)


# ---------------------------------------------------------------------------
# Totient summatory function
# ---------------------------------------------------------------------------

_phi_prefix = np.zeros(1, dtype=np.int64)  # _phi_prefix[m] = Phi(m)
_phi_memo: dict[int, int] = {}


def _prefix_up_to(m: int) -> np.ndarray:
    global _phi_prefix
    if len(_phi_prefix) <= m:
        tables = shared_tables(m)
        _phi_prefix = np.cumsum(tables.phi, dtype=np.int64)
    return _phi_prefix


def totient_sum(n: int, method: str = "auto") -> int:
    """Phi(n) = sum of phi(k) for k = 1..n, exactly.

    ``method="sieve"`` forces direct summation over a full table (needs
    n within the configured sieve cap); ``method="recurrence"`` forces the
    sublinear route Phi(n) = n(n+1)/2 - sum over quotients, which handles n
    far beyond any table. ``"auto"`` picks the cheap one.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return 0
    if method not in ("auto", "sieve", "recurrence"):
        raise ValueError(f"unknown method {method!r}")
    if method == "sieve":
        return int(_prefix_up_to(n)[n])
    if method == "auto" and (n < 10**4 or len(_phi_prefix) > n):
        return int(_prefix_up_to(n)[n])

    # Sublinear recurrence over the quotient set of n, smallest first.
    base = min(max(10**4, int(n ** (2 / 3))), n)
    try:
        prefix = _prefix_up_to(base)
    except ResourceLimitError:
        base = len(_phi_prefix) - 1
        if base < 1:
            raise
        prefix = _phi_prefix

    quotients = []
    d = 1
    while d <= n:
        q = n // d
        if q <= base:
            break
        quotients.append(q)
        d = n // q + 1
    for m in reversed(quotients):
        if m in _phi_memo:
            continue
        s = m * (m + 1) // 2
        d = 2
        while d <= m:
            q = m // d
            d2 = m // q
            s -= (d2 - d + 1) * (int(prefix[q]) if q <= base else _phi_memo[q])
            d = d2 + 1
        _phi_memo[m] = s
    return _phi_memo[n] if n > base else int(prefix[n])


def coprime_ordered_count_mobius(n: int) -> int:
    """#{(i, k) in [1,n]^2 : gcd(i, k) = 1} via sum of mu(d) * floor(n/d)^2.

    Needs mu up to n, so n must fit under the configured sieve cap.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    tables = shared_tables(n)
    d = np.arange(1, n + 1, dtype=np.int64)
    q = n // d
    # |sum| <= zeta(2) * n^2, safe in int64 for n up to the 1e8 build cap
    return int(np.dot(tables.mu[1 : n + 1].astype(np.int64), q * q))


def _pair_numerator(n: int) -> int:
    """|{(i, k): 1 <= i < k <= n, gcd = 1}| = Phi(n) - 1."""
    if n <= 1:
        return 0
    num = totient_sum(n) - 1
    try:
        ordered = coprime_ordered_count_mobius(n)
    except ResourceLimitError:
        pass  # beyond the mu table cap the Phi route stands alone
    else:
        if ordered != 2 * num + 1:
            raise AssertionError(
                f"mobius/totient cross-check failed at n={n}: {ordered} != {2 * num + 1}"
            )
    return num


def coprime_pair_count(n: int) -> DensityResult:
    """Exact count of unordered coprime pairs i < k <= n over all pairs."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    ref = constants.reference_constant("pair").value
    return _result("pair", n, _pair_numerator(n), n * (n - 1) // 2, ref)


def gcd_equal_count(n: int, t: int) -> DensityResult:
    """Exact count of pairs i < k <= n with gcd(i, k) = t.

    Scaling (i, k) -> (i/t, k/t) is a bijection onto coprime pairs below
    floor(n/t), so the numerator reuses the pair counter.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    ref = constants.reference_constant("gcd_eq", t=t).value
    return _result("gcd_eq", n, _pair_numerator(n // t), n * (n - 1) // 2, ref)


def ktuple_coprime_count(n: int, k: int) -> DensityResult:
    """Exact count of ordered k-tuples from [1,n]^k with overall gcd 1."""
    if not 2 <= k <= 10:
        raise ValueError(f"k must be in [2, 10], got {k}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ref = constants.reference_constant("ktuple", k=k).value
    if n == 1:
        return _result("ktuple", n, 1, 1, ref)
    tables = shared_tables(n)
    if k * n.bit_length() <= 62:
        d = np.arange(1, n + 1, dtype=np.int64)
        q = n // d
        num = int(np.dot(tables.mu[1 : n + 1].astype(np.int64), q**k))
    else:
        mu = tables.mu[: n + 1].tolist()
        num = sum(mu[d] * (n // d) ** k for d in range(1, n + 1) if mu[d])
    return _result("ktuple", n, num, n**k, ref)


def pairwise_coprime_triple_count(n: int) -> DensityResult:
    """Exact count of ordered triples from [1,n]^3 that are pairwise coprime.

    Full enumeration, expressed as sum over (b, c) of G[b,c] * (G^2)[b,c]
    with G the 0/1 coprimality matrix; all matrix entries stay below 2^53 so
    the float matmul is exact.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n > TRIPLE_BRUTE_BOUND:
        raise ResourceLimitError(
            f"exact pairwise-triple counting is brute force and capped at "
            f"n = {TRIPLE_BRUTE_BOUND}; use the Monte Carlo estimator for n = {n}"
        )
    ref = constants.reference_constant("triple3").value
    r = np.arange(1, n + 1, dtype=np.int64)
    g = (np.gcd.outer(r, r) == 1).astype(np.float64)
    num = int(round(float(np.sum(g * (g @ g)))))
    return _result("triple3", n, num, n**3, ref)


def odd_coprime_pair_count(n: int) -> DensityResult:
    """Exact count of coprime pairs of odd numbers i < k <= n.

    Ordered coprime odd pairs are sum over odd squarefree d of
    mu(d) * (#odd multiples of d up to n)^2; the only diagonal pair is (1,1).
    """
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    ref = constants.reference_constant("odd_pair").value
    tables = shared_tables(n)
    d = np.arange(1, n + 1, 2, dtype=np.int64)
    cnt = (n // d + 1) // 2
    ordered = int(np.dot(tables.mu[1 : n + 1 : 2].astype(np.int64), cnt * cnt))
    m = (n + 1) // 2
    return _result("odd_pair", n, (ordered - 1) // 2, m * (m - 1) // 2, ref)


def kfree_count(n: int, j: int = 2) -> DensityResult:
    """Exact count of m <= n divisible by no j-th power of a prime."""
    if not 2 <= j <= 16:
        raise ValueError(f"j must be in [2, 16], got {j}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ref = constants.reference_constant("kfree", j=j).value
    dmax = iroot(n, j)
    tables = shared_tables(max(dmax, 1))
    num = 0
    for d in range(1, dmax + 1):
        m = int(tables.mu[d])
        if m:
            num += m * (n // d**j)
    kind = "squarefree" if j == 2 else "kfree"
    return _result(kind, n, num, n, ref)


def squarefree_count(n: int) -> DensityResult:
    """Exact count of squarefree m <= n (kfree with j = 2)."""
    return kfree_count(n, 2)


def visible_points_in_disk(radius: int) -> DensityResult:
    """Count lattice points visible from the origin in the disk of the given
    radius, over all nonzero lattice points there.

    Visibility of (x, y) means gcd(|x|, |y|) = 1 with gcd(a, 0) = a, so the
    only visible axis points are the four units. Quadrants are symmetric:
    scan x >= 1, y >= 1 and add the 4R axis points.
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    if radius > 10**7:
        raise ResourceLimitError(f"disk scan capped at radius 1e7, got {radius}")
    ref = constants.reference_constant("visible").value
    r2 = radius * radius
    num = 4
    den = 4 * radius
    for x in range(1, radius + 1):
        ymax = isqrt(r2 - x * x)
        if ymax:
            ys = np.arange(1, ymax + 1, dtype=np.int64)
            num += 4 * int(np.count_nonzero(np.gcd(np.int64(x), ys) == 1))
            den += 4 * ymax
    return _result("visible", radius, num, den, ref)


def prime_density(x: int) -> DensityResult:
    """pi(x)/x as an exact ratio; the reference density is zero."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    tables = shared_tables(x)
    ref = constants.reference_constant("prime_density").value
    return _result("prime_density", x, prime_count(tables, x), x, ref)


# ---------------------------------------------------------------------------
# gcd(n, floor(f(n))) densities
# ---------------------------------------------------------------------------


def iroot(x: int, k: int) -> int:
    """Floor of the k-th root of x >= 0, exactly (Newton plus clamp)."""
    if x < 0 or k < 1:
        raise ValueError(f"need x >= 0 and k >= 1, got x={x}, k={k}")
    if x == 0 or k == 1:
        return x
    if k == 2:
        return isqrt(x)
    r = 1 << -(-x.bit_length() // k)
    while True:
        nr = ((k - 1) * r + x // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


@dataclass(frozen=True)
class FunctionSpec:
    """A growth function f for the gcd(m, floor(f(m))) experiment.

    Two forms: ``alpha_times_n`` is f(m) = alpha * m with alpha either the
    sqrt(2) marker or an exact rational, and ``n_pow_c`` is f(m) = m^c with
    c an exact non-integer rational > 0. Floors are always evaluated in
    exact integer arithmetic (isqrt / k-th roots / rational products), so
    there is no rounding to guard against.
    """

    form: str
    alpha: Fraction | None = None
    sqrt2: bool = False
    c: Fraction | None = None

    def __post_init__(self):
        if self.form == "alpha_times_n":
            if self.sqrt2:
                if self.alpha is not None:
                    raise ValueError("sqrt2 marker excludes an explicit alpha")
            elif self.alpha is None or self.alpha <= 0:
                raise ValueError("alpha_times_n needs alpha > 0 or the sqrt2 marker")
        elif self.form == "n_pow_c":
            if self.c is None or self.c <= 0 or self.c.denominator == 1:
                raise ValueError("n_pow_c needs a non-integer rational c > 0")
        else:
            raise ValueError(f"unknown form {self.form!r}")

    @staticmethod
    def sqrt2_times_n() -> "FunctionSpec":
        return FunctionSpec(form="alpha_times_n", sqrt2=True)

    @staticmethod
    def alpha_times_n(alpha) -> "FunctionSpec":
        return FunctionSpec(form="alpha_times_n", alpha=Fraction(alpha))

    @staticmethod
    def n_pow_c(c) -> "FunctionSpec":
        return FunctionSpec(form="n_pow_c", c=Fraction(c))

    def label(self) -> str:
        if self.form == "alpha_times_n":
            a = "sqrt2" if self.sqrt2 else str(self.alpha)
            return f"{a}*n"
        return f"n^{self.c}"


def floor_f(spec: FunctionSpec, m: int) -> int:
    """floor(f(m)) for a single m >= 1, in exact integer arithmetic."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if spec.form == "alpha_times_n":
        if spec.sqrt2:
            return isqrt(2 * m * m)
        return m * spec.alpha.numerator // spec.alpha.denominator
    p, q = spec.c.numerator, spec.c.denominator
    if p * m.bit_length() > 1_000_000:
        raise OverflowError(f"f({m}) = {m}^{spec.c} is too large to evaluate")
    return iroot(m**p, q)


def _floor_values(spec: FunctionSpec, n: int):
    """Floors for m = 1..n; int64 array when a vector path is safe."""
    if spec.form == "alpha_times_n":
        if spec.sqrt2:
            if 2 * n * n <= _INT64_MAX:
                m = np.arange(1, n + 1, dtype=np.int64)
                return _isqrt_vec(2 * m * m)
        else:
            a, b = spec.alpha.numerator, spec.alpha.denominator
            if n * a <= _INT64_MAX // 2:
                m = np.arange(1, n + 1, dtype=np.int64)
                return (m * a) // b
    else:
        p, q = spec.c.numerator, spec.c.denominator
        if q == 2 and n.bit_length() * p <= 62:
            m = np.arange(1, n + 1, dtype=np.int64)
            return _isqrt_vec(m**p)
    return [floor_f(spec, m) for m in range(1, n + 1)]


def _isqrt_vec(x: np.ndarray) -> np.ndarray:
    """Exact elementwise isqrt of nonnegative int64 via float sqrt + clamp."""
    r = np.sqrt(x.astype(np.float64)).astype(np.int64)
    # float sqrt of values < 2^63 is within 2 of the truth; two rounds settle it
    for _ in range(2):
        r = np.where((r + 1) * (r + 1) <= x, r + 1, r)
        r = np.where((r > 0) & (r * r > x), r - 1, r)
    return r


def f_gcd_density(n: int, spec: FunctionSpec) -> DensityResult:
    """Exact density of m <= n with gcd(m, floor(f(m))) = 1.

    floor(f(m)) = 0 pairs as gcd(m, 0) = m, so only m = 1 counts there.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ref = constants.reference_constant("fgcd").value
    floors = _floor_values(spec, n)
    if isinstance(floors, np.ndarray):
        m = np.arange(1, n + 1, dtype=np.int64)
        num = int(np.count_nonzero(np.gcd(m, floors) == 1))
    else:
        num = sum(1 for m, fl in enumerate(floors, start=1) if gcd(m, fl) == 1)
    return _result("fgcd", n, num, n, ref)
