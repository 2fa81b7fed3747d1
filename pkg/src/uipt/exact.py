"""Exact counts, partition functions and limit constants for rooted
triangulations of polygons.

Everything here is computed in integers or ``fractions.Fraction``.  The
irrational prefactor common to the asymptotic constants (``kappa``) is
never materialized; only kappa-scaled values are returned, so every ratio
that is a probability comes out as an exact rational.

Conventions: a triangulation of an (m+2)-gon is indexed by ``m`` (its
boundary index) and ``n`` (the number of internal vertices).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "TriType", "CriticalConstants", "ScaledConstant", "DomainError",
    "constants", "phi", "phi_recurrence_residual", "sphere_count",
    "z_closed", "z_critical", "z_series_partial", "z_pointed", "c_hat",
    "c_hat_scaled", "inf_face_distribution", "z0_power_coeff",
    "core_size_prob", "core_size_partial_sum", "deg3_limit",
    "deg3_normalization", "DEG3_C0", "catalan",
    "peel_grow_prob", "peel_swallow_prob", "free_grow_prob",
    "free_split_prob", "free_empty_prob", "unenclosed_weight",
    "core_size_tail_constant", "core_size_sum_extrapolated", "sub_prob",
]


class DomainError(ValueError):
    """Argument outside the domain of a counting formula."""


class TriType(enum.IntEnum):
    TypeII = 2
    TypeIII = 3

    @classmethod
    def parse(cls, value) -> "TriType":
        if isinstance(value, TriType):
            return value
        s = str(value).strip().upper()
        table = {"2": cls.TypeII, "II": cls.TypeII, "TYPEII": cls.TypeII,
                 "3": cls.TypeIII, "III": cls.TypeIII, "TYPEIII": cls.TypeIII}
        try:
            return table[s.replace("_", "").replace(" ", "")]
        except KeyError:
            raise DomainError(f"unknown triangulation type {value!r}") from None

    def __str__(self) -> str:
        return "II" if self is TriType.TypeII else "III"


@dataclass(frozen=True)
class CriticalConstants:
    tri_type: TriType
    alpha: Fraction
    theta_c: Fraction
    # kappa_II = sqrt(3)/(4 sqrt(pi)), kappa_III = 1/(3 sqrt(6 pi)); never evaluated
    kappa_note: str

    def check(self) -> bool:
        th = self.theta_c
        if self.tri_type is TriType.TypeII:
            return th * (1 - 2 * th) ** 2 == 1 / self.alpha
        return th * (1 - th) ** 3 == 1 / self.alpha


@dataclass(frozen=True)
class ScaledConstant:
    m: int
    c_hat: Fraction


_CONSTANTS = {
    TriType.TypeII: CriticalConstants(TriType.TypeII, Fraction(27, 2), Fraction(1, 6),
                                      "sqrt(3)/(4*sqrt(pi))"),
    TriType.TypeIII: CriticalConstants(TriType.TypeIII, Fraction(256, 27), Fraction(1, 4),
                                       "1/(3*sqrt(6*pi))"),
}


def constants(t) -> CriticalConstants:
    return _CONSTANTS[TriType.parse(t)]


@lru_cache(maxsize=None)
def _fact(k: int) -> int:
    return math.factorial(k)


def catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)


def _check_nm(t: TriType, n: int, m: int) -> None:
    if n < 0 or m < 0:
        raise DomainError(f"negative argument n={n}, m={m}")
    if t is TriType.TypeIII and m < 1:
        raise DomainError("type III needs m >= 1")


@lru_cache(maxsize=None)
def _phi(t: TriType, n: int, m: int) -> int:
    f = _fact
    if t is TriType.TypeII:
        num = 2 ** (n + 1) * f(2 * m + 1) * f(2 * m + 3 * n)
        den = f(m) ** 2 * f(n) * f(2 * m + 2 * n + 2)
    else:
        num = 2 * f(2 * m + 1) * f(4 * n + 2 * m - 1)
        den = f(m - 1) * f(m + 1) * f(n) * f(3 * n + 2 * m + 1)
    q, r = divmod(num, den)
    assert r == 0
    return q


def phi(t, n: int, m: int) -> int:
    """Number of rooted triangulations of an (m+2)-gon with n internal vertices.

    Type II with (n, m) = (0, 0) is the glued 2-gon, counted once.
    """
    t = TriType.parse(t)
    _check_nm(t, n, m)
    return _phi(t, n, m)


def _phi2_or_zero(n: int, m: int) -> int:
    if n < 0 or m < 0:
        return 0
    return _phi(TriType.TypeII, n, m)


def phi_recurrence_residual(t, n: int, m: int) -> int:
    """phi_{n,m} minus its root-edge decomposition (type II only); always 0."""
    t = TriType.parse(t)
    if t is not TriType.TypeII:
        raise DomainError("the root-edge recurrence is stated for type II")
    _check_nm(t, n, m)
    rhs = _phi2_or_zero(n - 1, m + 1)
    for k in range(1, m + 1):
        for j in range(n + 1):
            rhs += _phi2_or_zero(j, k - 1) * _phi2_or_zero(n - j, m - k)
    if n == 0 and m == 0:
        rhs += 1
    return _phi(t, n, m) - rhs


def sphere_count(t, n: int) -> int:
    """Rooted sphere triangulations with n vertices."""
    if n < 3:
        raise DomainError("a sphere triangulation has at least 3 vertices")
    return phi(t, n - 3, 1)


def _check_theta(t: TriType, theta: Fraction) -> None:
    if theta < 0 or theta > _CONSTANTS[t].theta_c:
        raise DomainError(f"theta={theta} outside [0, {_CONSTANTS[t].theta_c}]")


def z_closed(t, m: int, theta) -> Fraction:
    """Z_m at the weight t(theta), in closed form.

    Type II uses t = theta (1-2 theta)^2, type III t = theta (1-theta)^3.
    """
    t = TriType.parse(t)
    theta = Fraction(theta)
    _check_theta(t, theta)
    if m < 0 or (t is TriType.TypeIII and m < 0):
        raise DomainError("m must be >= 0")
    f = _fact
    if t is TriType.TypeII:
        base = Fraction(f(2 * m), f(m) * f(m + 2))
        return base * ((1 - 6 * theta) * m + 2 - 6 * theta) / (1 - 2 * theta) ** (2 * m + 2)
    base = Fraction(f(2 * m), f(m) * f(m + 2))
    return base * ((1 - 4 * theta) * m + 2 - 2 * theta) / (1 - theta) ** (2 * m + 1)


@lru_cache(maxsize=None)
def _z_crit(t: TriType, m: int) -> Fraction:
    f = _fact
    if t is TriType.TypeII:
        return Fraction(f(2 * m), f(m) * f(m + 2)) * Fraction(9, 4) ** (m + 1)
    return Fraction(2 * f(2 * m), f(m) * f(m + 2)) * Fraction(16, 9) ** m


def z_critical(t, m: int) -> Fraction:
    """Z_m at the critical weight 1/alpha.

    m = 0 is accepted for type III too (it evaluates to 1), although a
    simple 2-gon triangulation does not exist.
    """
    t = TriType.parse(t)
    if m < 0:
        raise DomainError("m must be >= 0")
    return _z_crit(t, m)


def z_pointed(m: int) -> Fraction:
    """Sum over n of n phi_{n,m} alpha^-n for type II.

    Equals Z_m (m+1)(2m+1)/3; the mean number of internal vertices under
    the free law is therefore (m+1)(2m+1)/3.
    """
    if m < 0:
        raise DomainError("m must be >= 0")
    return _z_crit(TriType.TypeII, m) * (m + 1) * (2 * m + 1) / 3


@lru_cache(maxsize=None)
def _beta(t: TriType, m: int, horizon: int = 1000) -> Fraction:
    # max_n phi_{n,m} (n+1)^{5/2} alpha^-n, with sqrt rounded up rationally
    alpha = _CONSTANTS[t].alpha
    best = Fraction(0)
    for n in range(horizon + 1):
        w = Fraction(_phi(t, n, m)) / alpha ** n
        s = math.isqrt(n + 1)
        if s * s != n + 1:
            s += 1
        v = w * (n + 1) ** 2 * s
        if v > best:
            best = v
    return best


def z_series_partial(t, m: int, terms: int) -> tuple[Fraction, Fraction]:
    """Partial sum of Z_m over n < terms and an explicit tail bound.

    The bound uses phi_{n,m} alpha^-n <= beta (n+1)^{-5/2} with beta twice
    the largest observed value for n <= 1000, and
    sum_{n>=N} (n+1)^{-5/2} <= (2/3) N^{-3/2}.
    """
    t = TriType.parse(t)
    _check_nm(t, 0, m)
    if terms < 1:
        raise DomainError("terms must be >= 1")
    alpha = _CONSTANTS[t].alpha
    partial = Fraction(0)
    for n in range(terms):
        partial += Fraction(_phi(t, n, m)) / alpha ** n
    beta = 2 * _beta(t, m)
    root = math.isqrt(terms)  # floor, so the bound is rounded up
    tail = beta * Fraction(2, 3) / (terms * root)
    return partial, tail


@lru_cache(maxsize=None)
def _c_hat(t: TriType, m: int) -> Fraction:
    f = _fact
    if t is TriType.TypeII:
        return Fraction(f(2 * m + 1), f(m) ** 2) * Fraction(9, 4) ** m
    return Fraction(f(2 * m + 1), f(m - 1) * f(m + 1)) * Fraction(16, 9) ** m


def c_hat(t, m: int) -> Fraction:
    """kappa-scaled asymptotic constant C_m / kappa."""
    t = TriType.parse(t)
    _check_nm(t, 0, m)
    return _c_hat(t, m)


def c_hat_scaled(t, m: int) -> ScaledConstant:
    return ScaledConstant(m, c_hat(t, m))


def inf_face_distribution(t, faces) -> list[Fraction]:
    """Probability that each listed external face is the infinite one."""
    t = TriType.parse(t)
    faces = list(faces)
    if not faces:
        raise DomainError("need at least one face")
    w = [c_hat(t, m) / z_critical(t, m) for m in faces]
    s = sum(w)
    return [x / s for x in w]


@lru_cache(maxsize=None)
def _z0_powers(e: int, jmax: int) -> tuple[int, ...]:
    base = [_phi(TriType.TypeII, n, 0) for n in range(jmax + 1)]
    out = [1] + [0] * jmax
    for _ in range(e):
        nxt = [0] * (jmax + 1)
        for i, a in enumerate(out):
            if a:
                for j in range(jmax + 1 - i):
                    nxt[i + j] += a * base[j]
        out = nxt
    return tuple(out)


def z0_power_coeff(edge_count: int, deficit: int) -> int:
    """Coefficient of x^deficit in Z_0(x)^edge_count, Z_0(x) = sum phi2_{n,0} x^n."""
    if edge_count < 0 or deficit < 0:
        raise DomainError("arguments must be >= 0")
    return _z0_powers(edge_count, deficit)[deficit]


def core_size_prob(n: int) -> Fraction:
    """Probability a_n that the root core is finite with n vertices."""
    if n < 3:
        raise DomainError("a core has at least 3 vertices")
    f = _fact
    return (Fraction(2 ** 20 * f(4 * n - 11), 3 ** 7 * f(n - 3) * f(3 * n - 7))
            * Fraction(27, 256) ** n)


def _nested_ratio_sum(first: Fraction, lo: int, hi: int, ratio) -> Fraction:
    """first * (1 + r_lo (1 + r_{lo+1} (... (1 + r_{hi-1})))), r_n = ratio(n).

    Evaluated from the inside out as one unreduced integer fraction, so
    each step multiplies a big integer by small ones only.
    """
    P, Q = 1, 1
    for n in range(hi - 1, lo - 1, -1):
        num, den = ratio(n)
        P, Q = Q * den + num * P, Q * den
    return first * Fraction(P, Q)


def _core_ratio(n: int) -> tuple:
    # a_{n+1}/a_n
    return ((4 * n - 7) * (4 * n - 8) * (4 * n - 9) * (4 * n - 10) * 27,
            (n - 2) * (3 * n - 4) * (3 * n - 5) * (3 * n - 6) * 256)


def core_size_partial_sum(N: int) -> Fraction:
    """sum_{n=3..N} a_n, accumulated through the term ratio."""
    if N < 3:
        return Fraction(0)
    return _nested_ratio_sum(core_size_prob(3), 3, N, _core_ratio)


# Normalizing constant of the type III root-degree law; fixed by
# deg3_normalization (sum over k >= 3 equals 1 with this value).
DEG3_C0 = Fraction(1)


def deg3_limit(k: int, c0: Fraction = DEG3_C0) -> Fraction:
    """Limiting root-degree probability in the type III UIPT."""
    if k < 3:
        raise DomainError("degree is at least 3")
    f = _fact
    return c0 * Fraction(f(2 * k - 3), f(k - 3) * f(k - 1)) * Fraction(3, 16) ** (k - 1)


def deg3_normalization(N: int, c0: Fraction = Fraction(1)) -> Fraction:
    """sum_{k=3..N} deg3_limit(k, c0), via the term ratio."""
    if N < 3:
        return Fraction(0)
    return _nested_ratio_sum(deg3_limit(3, c0), 3, N,
                             lambda k: ((2 * k - 1) * (2 * k - 2) * 3, (k - 2) * k * 16))


# One-step laws used by the samplers (all exact).

def peel_grow_prob(m: int) -> Fraction:
    """Type II peeling: the new triangle has a new vertex."""
    return Fraction(2 * m + 3, 3 * (m + 1))


def peel_swallow_prob(m: int, k: int) -> Fraction:
    """Type II peeling: third vertex k steps along the frontier on a given side."""
    if not 1 <= k <= m:
        raise DomainError("1 <= k <= m required")
    t = TriType.TypeII
    return _c_hat(t, m - k) * _z_crit(t, k - 1) / _c_hat(t, m)


def free_grow_prob(m: int) -> Fraction:
    """Free (m+2)-gon: the root-edge triangle has an internal apex."""
    return Fraction(2 * m + 1, 3 * (m + 3))


def free_split_prob(m: int, k: int) -> Fraction:
    """Free (m+2)-gon: apex is boundary vertex k+1 (a (k+1)-gon and an (m+2-k)-gon remain)."""
    if not 1 <= k <= m:
        raise DomainError("1 <= k <= m required")
    t = TriType.TypeII
    return _z_crit(t, k - 1) * _z_crit(t, m - k) / _z_crit(t, m)


def free_empty_prob() -> Fraction:
    """Free 2-gon: the two sides are glued."""
    return 1 / _z_crit(TriType.TypeII, 0)


def unenclosed_weight() -> Fraction:
    """kappa-scaled weight of infinite 2-gon fillings with no 2-cycle around
    the boundary: C_0 / (1 + sum over a single cut), which equals 4/9."""
    t = TriType.TypeII
    z0 = _z_crit(t, 0)
    return _c_hat(t, 0) / (3 * z_pointed(0) + z0)


def core_size_tail_constant() -> float:
    """c with a_n ~ c n^{-3/2}; it equals sqrt(2/(3 pi))/4."""
    return math.sqrt(2 / (3 * math.pi)) / 4


def core_size_sum_extrapolated(N: int) -> float:
    """Partial sum up to N plus the leading-order tail sum_{n>N} c n^{-3/2}.

    The tail is integrated with the midpoint rule, 2c/sqrt(N + 1/2), whose
    error is O(N^{-5/2}).
    """
    c = core_size_tail_constant()
    return float(core_size_partial_sum(N)) + 2 * c / math.sqrt(N + 0.5)


def sub_prob(t, n_vertices: int, faces) -> Fraction:
    """Probability that the UIPT contains a given rigid configuration around its root.

    ``n_vertices`` counts the configuration's vertices and ``faces`` lists
    the boundary index m_i of each of its external faces.
    """
    t = TriType.parse(t)
    faces = list(faces)
    if not faces:
        raise DomainError("need at least one external face")
    alpha = constants(t).alpha
    prod = Fraction(1)
    for m in faces:
        prod *= z_critical(t, m)
    s = sum(c_hat(t, m) / z_critical(t, m) for m in faces)
    return alpha ** (3 - n_vertices) / c_hat(t, 1) * prod * s
