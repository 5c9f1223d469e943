"""Limiting constants with certified absolute-error bounds.

Each function returns a :class:`ConstantValue` whose ``abs_error_bound`` is
rigorous: truncation tails are bounded analytically (Euler-Maclaurin
remainders, alternating-series terms, prime-sum comparisons) and the
floating-point contribution by standard pairwise-summation bounds, so the
true constant always lies in ``value +- abs_error_bound``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import PrecisionError, ResourceLimitError
from .sieve import MAX_SIEVE_LIMIT, primes_up_to

#: pi(x) < RS_CONST * x / ln x for all x > 1 (Rosser-Schoenfeld).
RS_CONST = 1.25506

#: Crude integer-comparison tails are used up to this prime bound.
_CRUDE_P_CAP = 10**7

_U = 2.0**-53


@dataclass(frozen=True)
class ConstantValue:
    """A computed constant: true value lies in value +- abs_error_bound."""

    value: float
    abs_error_bound: float
    method: str
    params: dict


_prime_cache = {"limit": 0, "primes": np.empty(0, dtype=np.int64)}


def _primes(limit: int) -> np.ndarray:
    if limit > _prime_cache["limit"]:
        _prime_cache["primes"] = primes_up_to(limit)
        _prime_cache["limit"] = limit
    pr = _prime_cache["primes"]
    return pr[: int(np.searchsorted(pr, limit, side="right"))]


def _sum_bound(abs_sum: float, count: int) -> float:
    """Rigorous bound on numpy pairwise-summation error plus per-term noise."""
    return (math.ceil(math.log2(max(count, 2))) + 4) * _U * abs_sum + 2**-52


def _prime_square_tail(budget: float) -> tuple[int, str]:
    """Smallest practical P with a certified bound sum_{p>P} p^-2 <= budget.

    Uses the integer-sum comparison (<= 1/P) while P stays small, else the
    Rosser-Schoenfeld partial-summation bound 2c/(P ln P).
    """
    if budget <= 0:
        raise PrecisionError("tail budget must be positive")
    crude = int(1.0 / budget) + 1
    if crude <= _CRUDE_P_CAP:
        return max(crude, 3), "integer_tail"
    p = 2 * RS_CONST / budget
    for _ in range(6):
        p = 2 * RS_CONST / (budget * math.log(p))
    p = int(p) + 1
    if p > MAX_SIEVE_LIMIT:
        raise ResourceLimitError(
            f"certifying a prime-sum tail of {budget:.2e} needs primes past "
            f"the sieve maximum {MAX_SIEVE_LIMIT}"
        )
    return max(p, 3), "rosser_schoenfeld"


def _certified_tail(P: int, n_primes: int, method: str) -> float:
    if method == "integer_tail":
        return 1.0 / P
    return 2 * RS_CONST / (P * math.log(P)) - n_primes / (float(P) * P)


def _log_product(log_terms: np.ndarray) -> tuple[float, float, float]:
    """exp(sum of logs) with a certified float-error bound on the result."""
    s = float(np.sum(log_terms))
    abs_sum = float(np.sum(np.abs(log_terms)))
    value = math.exp(s)
    fp = value * (_sum_bound(abs_sum, len(log_terms)) + 4 * _U)
    return value, s, fp


def zeta(k: int, eps: float = 1e-12) -> ConstantValue:
    """zeta(k) for integer 2 <= k <= 64 via Euler-Maclaurin acceleration.

    value = sum_{n<M} n^-k + M^(1-k)/(k-1) + M^-k/2; the omitted remainder is
    positive and at most (k/12) M^-(k+1), which fixes M.
    """
    if not 2 <= k <= 64:
        raise ValueError(f"k must be in [2, 64], got {k}")
    if eps < 1e-14:
        raise PrecisionError(f"zeta eps floor is 1e-14, got {eps}")
    M = max(2, int((k / (6.0 * eps)) ** (1.0 / (k + 1))) + 1)
    n = np.arange(1, M, dtype=np.float64)
    terms = n ** (-float(k))
    tail = M ** (1.0 - k) / (k - 1) + 0.5 * M ** (-float(k))
    value = float(np.sum(terms)) + tail
    trunc = (k / 12.0) * M ** (-(k + 1.0))
    bound = trunc + _sum_bound(value, M + 2)
    return ConstantValue(value, bound, "series", {"terms": M - 1, "eps": eps, "k": k})


def inv_zeta(k: int, eps: float = 1e-12) -> ConstantValue:
    """1/zeta(k), the k-tuple coprimality and k-free density limit."""
    z = zeta(k, eps / 2)
    value = 1.0 / z.value
    # zeta >= 1, so |d(1/z)| <= dz / z^2 <= dz
    bound = z.abs_error_bound / (z.value * (z.value - z.abs_error_bound)) + 2 * _U
    return ConstantValue(value, bound, "series", {"terms": z.params["terms"], "eps": eps, "k": k})


def euler_product_inv_zeta2(eps: float = 1e-9) -> ConstantValue:
    """prod_{p<=P} (1 - p^-2), the product route to 6/pi^2.

    The missing factors multiply the truncated product by exp(-T) with
    T = sum_{p>P} -log(1 - p^-2) <= tail/(1 - P^-2), so the value error is
    value * expm1(that); P is chosen to fit it inside eps.
    """
    if eps < 1e-11:
        raise PrecisionError(f"euler product eps floor is 1e-11, got {eps}")
    P, method = _prime_square_tail(0.93 * eps / 0.608)
    pr = _primes(P)
    pf = pr.astype(np.float64)
    value, _, fp = _log_product(np.log1p(-1.0 / (pf * pf)))
    tail = _certified_tail(P, len(pr), method) / (1.0 - 1.0 / (float(P) * P))
    bound = value * math.expm1(tail) + fp
    if bound > eps:
        raise PrecisionError(f"certified bound {bound:.2e} exceeds requested {eps:.2e}")
    return ConstantValue(
        value, bound, "euler_product",
        {"prime_bound": P, "primes": len(pr), "tail": method, "eps": eps},
    )


def catalan(eps: float = 1e-9) -> ConstantValue:
    """Catalan's constant via its alternating series.

    Summing K terms leaves a remainder below the next term 1/(2K+1)^2.
    """
    if eps < 1e-12:
        raise PrecisionError(f"catalan eps floor is 1e-12, got {eps}")
    K = int(0.5 * (1.0 / math.sqrt(0.9 * eps) - 1.0)) + 2
    k = np.arange(K, dtype=np.float64)
    terms = np.where(k % 2 == 0, 1.0, -1.0) / ((2 * k + 1) ** 2)
    value = float(np.sum(terms))
    bound = 1.0 / (2 * K + 1) ** 2 + _sum_bound(float(np.sum(np.abs(terms))), K)
    return ConstantValue(value, bound, "alternating_series", {"terms": K, "eps": eps})


def gaussian_coprime_constant(eps: float = 1e-9) -> ConstantValue:
    """6/(pi^2 G): density of coprime pairs of Gaussian integers."""
    if eps < 2e-12:
        raise PrecisionError(f"gaussian constant eps floor is 2e-12, got {eps}")
    g = catalan(eps / 2)
    value = 6.0 / (math.pi**2 * g.value)
    bound = g.abs_error_bound * value / (g.value - g.abs_error_bound) + 8 * _U * value
    return ConstantValue(value, bound, "alternating_series", {"eps": eps, "catalan_terms": g.params["terms"]})


def pairwise_triple_constant(eps: float = 1e-8) -> ConstantValue:
    """Q = (36/pi^4) prod_p (1 - (p+1)^-2): pairwise-coprime triple density."""
    if eps < 1e-8:
        raise PrecisionError(f"pairwise triple constant eps floor is 1e-8, got {eps}")
    P, method = _prime_square_tail(0.9 * eps / 0.287)
    pr = _primes(P)
    pf = pr.astype(np.float64) + 1.0
    prod, _, fp = _log_product(np.log1p(-1.0 / (pf * pf)))
    lead = 36.0 / math.pi**4
    value = lead * prod
    # (p+1)^-2 < p^-2, so the p^-2 tail bound covers this product's tail too
    tail = _certified_tail(P, len(pr), method) / (1.0 - 1.0 / (float(P) * P))
    bound = value * math.expm1(tail) + lead * fp + 8 * _U * value
    if bound > eps:
        raise PrecisionError(f"certified bound {bound:.2e} exceeds requested {eps:.2e}")
    return ConstantValue(
        value, bound, "euler_product",
        {"prime_bound": P, "primes": len(pr), "tail": method, "eps": eps},
    )


def delta_determinant_constant(n: int | None, eps: float = 1e-8) -> ConstantValue:
    """Determinant-coprimality constant for dimension n (None = limit).

    Per prime the factor is 1 - (1 - prod_{k=1..n} (1 - p^-k))^2; at n = 1 the
    bracket collapses algebraically to 1 - p^-2, so that case is served as the
    closed form 6/pi^2. The inner product is truncated once p^-k < eps/1000,
    the outer product at a prime bound with a certified p^-2-style tail.
    """
    if n is not None and not 1 <= n <= 500:
        raise ValueError(f"dimension must be in [1, 500] or None, got {n}")
    if eps < 1e-8:
        raise PrecisionError(f"delta eps floor is 1e-8, got {eps}")
    if n == 1:
        value = 6.0 / math.pi**2
        return ConstantValue(value, 8 * _U * value, "closed_form", {"dim": 1, "eps": eps})
    P, method = _prime_square_tail(0.9 * eps / 0.36)
    pr = _primes(P)
    pf = pr.astype(np.float64)
    thresh = eps * 1e-3
    inner = np.ones_like(pf)
    k = 1
    while n is None or k <= n:
        cut = int(np.searchsorted(pf, thresh ** (-1.0 / k), side="right"))
        if cut == 0:
            break
        inner[:cut] *= 1.0 - pf[:cut] ** (-float(k))
        k += 1
    factors = 1.0 - (1.0 - inner) ** 2
    value, _, fp = _log_product(np.log(factors))
    # -log F_p <= 1/(p(p-2)) <= p^-2 / (1 - 2/P) for the missing primes
    tail = _certified_tail(P, len(pr), method) / (1.0 - 2.0 / P)
    inner_cut = 8e-3 * eps  # effect of the p^-k < thresh inner truncation
    bound = value * math.expm1(tail) + fp + inner_cut + 8 * _U * value
    if bound > eps:
        raise PrecisionError(f"certified bound {bound:.2e} exceeds requested {eps:.2e}")
    return ConstantValue(
        value, bound, "euler_product",
        {"dim": n, "prime_bound": P, "primes": len(pr), "tail": method, "eps": eps},
    )


def _closed(value: float, extra: dict | None = None) -> ConstantValue:
    return ConstantValue(value, 8 * _U * abs(value), "closed_form", extra or {})


@lru_cache(maxsize=None)
def reference_constant(
    kind: str,
    k: int | None = None,
    j: int | None = None,
    t: int | None = None,
    dim: int | None = None,
    eps: float = 1e-9,
) -> ConstantValue:
    """Limiting constant for an experiment tag.

    Q and the determinant constant are served at their 1e-8 precision floor
    when the default eps asks for more.
    """
    if kind in ("pair", "visible", "squarefree", "fgcd"):
        return _closed(6.0 / math.pi**2)
    if kind == "odd_pair":
        return _closed(8.0 / math.pi**2)
    if kind == "gcd_eq":
        if t is None or t < 1:
            raise ValueError("gcd_eq reference needs t >= 1")
        return _closed(6.0 / (math.pi**2 * t * t), {"t": t})
    if kind == "ktuple":
        if k is None:
            raise ValueError("ktuple reference needs k")
        return inv_zeta(k, eps)
    if kind == "kfree":
        if j is None:
            raise ValueError("kfree reference needs j")
        return inv_zeta(j, eps)
    if kind == "triple3":
        return pairwise_triple_constant(max(eps, 1e-8))
    if kind == "gaussian":
        return gaussian_coprime_constant(eps)
    if kind == "det":
        return delta_determinant_constant(dim, max(eps, 1e-8))
    if kind == "prime_density":
        return ConstantValue(0.0, 0.0, "closed_form", {})
    raise ValueError(f"unknown experiment kind {kind!r}")
