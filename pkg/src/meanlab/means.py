"""The ten bivariate means, evaluated without catastrophic cancellation.

Two layers live here:

* array kernels (``arithmetic`` .. ``heronian_mean``) that accept floats or
  numpy arrays elementwise and are total on a == b via continuity limits;
* a typed scalar facade (:class:`PositivePair`, :class:`MeanKind`,
  :func:`eval_mean`, :func:`eval_all`, :func:`param_point`).

Every kernel canonicalizes to hi >= lo first, so symmetry is exact.  With
t = (hi - lo)/(hi + lo) the trigonometric parametrization is x = arcsin(t),
the hyperbolic one y = artanh(t) = log(hi/lo)/2, and

    P = A sin(x)/x     G = A cos(x)      H = A cos(x)^2    X = A e^(x cot x - 1)
    L = G sinh(y)/y    L = A tanh(y)/y   H = G / cosh(y)   Y = G e^(tanh(y)/y - 1)
    log(I/G) = A/L - 1

Direct closed forms are used where they are stable; below ``SERIES_T_THRESHOLD``
the removable-singularity routes switch to truncated series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import series
from .errors import DegeneratePairError, DomainError

#: |t| below which L, P, X, Y switch to their series fallbacks.  Direct
#: formulas keep roughly 8 fewer digits there; four series terms already
#: restore full double precision.
SERIES_T_THRESHOLD = 1e-4

#: |p| below which the power-type means use the log-space p -> 0 limit.
POWER_LIMIT_THRESHOLD = 1e-8

_QUIET = dict(divide="ignore", invalid="ignore", over="ignore", under="ignore")


def _split(a, b):
    """Validate and canonicalize; returns (hi, lo, scalar_input)."""
    aa = np.asarray(a, dtype=float)
    bb = np.asarray(b, dtype=float)
    scalar = aa.ndim == 0 and bb.ndim == 0
    for arr in (aa, bb):
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
            raise DomainError("means are defined for positive finite arguments only")
    return np.maximum(aa, bb), np.minimum(aa, bb), scalar


def _ret(out, scalar):
    return float(out) if scalar else out


def _half_ratio(hi, lo):
    return (hi - lo) / (hi + lo)


def arithmetic(a, b):
    hi, lo, s = _split(a, b)
    return _ret(0.5 * (hi + lo), s)


def geometric(a, b):
    hi, lo, s = _split(a, b)
    return _ret(np.where(hi == lo, hi, np.sqrt(hi) * np.sqrt(lo)), s)


def harmonic(a, b):
    hi, lo, s = _split(a, b)
    return _ret(2.0 * (lo / (hi + lo)) * hi, s)


def _log_ratio(hi, lo):
    """log(hi/lo) at full relative accuracy for any ratio."""
    u = (hi - lo) / lo
    with np.errstate(**_QUIET):
        return np.where(u < 1e15, np.log1p(u), np.log(hi) - np.log(lo))


def _half_log_ratio(hi, lo):
    """y = log(hi/lo)/2 = artanh(t); unlike arctanh(t) this stays
    relatively accurate when t is within a few ulp of 1."""
    return 0.5 * _log_ratio(hi, lo)


def _arcsin_t(hi, lo, t):
    """x = arcsin(t) for t = (hi-lo)/(hi+lo), accurate up to t -> 1.

    Plain arcsin amplifies the rounding of t by 1/sqrt(1-t^2); past 0.9 the
    half-angle form pi/2 - 2 arcsin(sqrt(lo/(hi+lo))) uses the exactly
    computable 1 - t instead.
    """
    comp = 2.0 * np.arcsin(np.sqrt(lo / (hi + lo)))
    return np.where(t > 0.9, 0.5 * math.pi - comp, np.arcsin(np.minimum(t, 0.9)))


def logarithmic(a, b):
    """L = (a - b)/log(a/b); series route G sinh(y)/y below the threshold."""
    hi, lo, s = _split(a, b)
    t = _half_ratio(hi, lo)
    small = t < SERIES_T_THRESHOLD
    with np.errstate(**_QUIET):
        direct = (hi - lo) / _log_ratio(hi, lo)
    y = np.where(small, _half_log_ratio(hi, lo), 0.0)
    fallback = np.sqrt(hi) * np.sqrt(lo) * series.sinh_over_y(y, terms=6)
    out = np.where(small, fallback, direct)
    return _ret(np.where(hi == lo, hi, out), s)


def logarithmic_direct(a, b):
    """Pure closed-form route, no series branch (a == b still returns a)."""
    hi, lo, s = _split(a, b)
    with np.errstate(**_QUIET):
        out = np.where(hi == lo, hi, (hi - lo) / _log_ratio(hi, lo))
    return _ret(out, s)


def logarithmic_param(a, b):
    """Hyperbolic route G sinh(y)/y, series below the threshold."""
    hi, lo, s = _split(a, b)
    t = _half_ratio(hi, lo)
    y = _half_log_ratio(hi, lo)
    small = t < SERIES_T_THRESHOLD
    with np.errstate(**_QUIET):
        big = np.sinh(np.where(small, 1.0, y)) / np.where(small, 1.0, y)
    ratio = np.where(small, series.sinh_over_y(np.where(small, y, 0.0), terms=6), big)
    return _ret(np.sqrt(hi) * np.sqrt(lo) * ratio, s)


def identric(a, b):
    """I = (1/e)(a^a/b^b)^(1/(a-b)), via the cancellation-free u-form.

    With u = (a-b)/b the exponent (a log a - b log b)/(a - b) - 1 rewrites
    exactly to log b + (1+u) log1p(u)/u - 1, which is stable for all u > 0.
    """
    hi, lo, s = _split(a, b)
    u = (hi - lo) / lo
    safe = np.where(u == 0.0, 1.0, u)
    with np.errstate(**_QUIET):
        q = (1.0 + safe) * np.log1p(safe) / safe - 1.0
        moderate = lo * np.exp(q)
        # for astronomically large ratios (1+u) overflows; the plain form has
        # no cancellation left there
        plain = np.exp((hi * np.log(hi) - lo * np.log(lo)) / (hi - lo) - 1.0)
        out = np.where(u == 0.0, hi, np.where(u < 1e15, moderate, plain))
    return _ret(out, s)


identric_direct = identric


def identric_param(a, b):
    """Identity route log(I/G) = A/L - 1."""
    hi, lo, s = _split(a, b)
    g = np.sqrt(hi) * np.sqrt(lo)
    ratio = arithmetic(hi, lo) / logarithmic(hi, lo)
    return _ret(g * np.exp(ratio - 1.0), s)


def seiffert(a, b):
    """P = (a - b)/(2 arcsin t); series route below the threshold."""
    hi, lo, s = _split(a, b)
    t = _half_ratio(hi, lo)
    small = t < SERIES_T_THRESHOLD
    with np.errstate(**_QUIET):
        direct = (hi - lo) / (2.0 * _arcsin_t(hi, lo, t))
    x = np.arcsin(np.where(small, t, 0.0))
    fallback = 0.5 * (hi + lo) / (1.0 + series.xoversin_minus_one(x, terms=6))
    return _ret(np.where(small, fallback, direct), s)


def seiffert_direct(a, b):
    hi, lo, s = _split(a, b)
    t = _half_ratio(hi, lo)
    with np.errstate(**_QUIET):
        out = np.where(t == 0.0, hi, (hi - lo) / (2.0 * _arcsin_t(hi, lo, t)))
    return _ret(out, s)


def seiffert_param(a, b):
    """Series route P = A / (x/sin x) on the whole domain."""
    hi, lo, s = _split(a, b)
    t = _half_ratio(hi, lo)
    x = _arcsin_t(hi, lo, t)
    return _ret(0.5 * (hi + lo) / (1.0 + series.xoversin_minus_one(x)), s)


def _xcotx_minus_one_hybrid(hi, lo, t, small_mask):
    """x cot x - 1 at x = arcsin(t): series under the mask, else
    arcsin(t) * (G/A) / t, which keeps cos(x) = G/A exact as t -> 1."""
    g_over_a = 2.0 * np.sqrt(hi) * np.sqrt(lo) / (hi + lo)
    with np.errstate(**_QUIET):
        direct = _arcsin_t(hi, lo, t) * g_over_a / t - 1.0
    ser = series.xcotx_minus_one(np.arcsin(np.where(small_mask, t, 0.0)), terms=6)
    return np.where(small_mask, ser, direct)


def x_mean(a, b):
    """X = A e^(x cot x - 1); exponent by series below the threshold."""
    hi, lo, s = _split(a, b)
    t = _half_ratio(hi, lo)
    w = _xcotx_minus_one_hybrid(hi, lo, t, t < SERIES_T_THRESHOLD)
    return _ret(0.5 * (hi + lo) * np.exp(w), s)


x_mean_param = x_mean


def x_mean_direct(a, b):
    """Defining route X = A e^(G/P - 1)."""
    hi, lo, s = _split(a, b)
    g = np.sqrt(hi) * np.sqrt(lo)
    p = seiffert(hi, lo)
    return _ret(0.5 * (hi + lo) * np.exp(g / p - 1.0), s)


def y_mean(a, b):
    """Y = G e^(tanh(y)/y - 1); exponent by series below the threshold."""
    hi, lo, s = _split(a, b)
    t = _half_ratio(hi, lo)
    y = _half_log_ratio(hi, lo)
    small = t < SERIES_T_THRESHOLD
    with np.errstate(**_QUIET):
        direct = np.tanh(y) / y - 1.0
    ser = series.tanh_over_y_minus_one(np.where(small, y, 0.0), terms=6)
    w = np.where(small, ser, direct)
    out = np.sqrt(hi) * np.sqrt(lo) * np.exp(w)
    return _ret(np.where(hi == lo, hi, out), s)


def y_mean_direct(a, b):
    """Defining route Y = G e^(L/A - 1)."""
    hi, lo, s = _split(a, b)
    g = np.sqrt(hi) * np.sqrt(lo)
    ratio = logarithmic(hi, lo) / arithmetic(hi, lo)
    return _ret(g * np.exp(ratio - 1.0), s)


def _log_mean_over_geometric(hi, lo, p):
    """log(M_p/G) = log(cosh(p*y))/p with the p -> 0 limit p*y^2/2."""
    y = 0.5 * _log_ratio(hi, lo)
    p_arr = np.asarray(p, dtype=float)
    tiny = np.abs(p_arr) < POWER_LIMIT_THRESHOLD
    psafe = np.where(tiny, 1.0, p_arr)
    v = psafe * y
    huge = np.abs(v) > 700.0  # sinh overflow; log(cosh v) ~ |v| - log 2
    vsafe = np.where(huge, 1.0, v)
    with np.errstate(**_QUIET):
        general = np.log1p(2.0 * np.sinh(0.5 * vsafe) ** 2) / psafe
        asym = (np.abs(v) - math.log(2.0)) / psafe
    return np.where(tiny, p_arr * y * y / 2.0, np.where(huge, asym, general))


def power_mean(a, b, p):
    """M_p = ((a^p + b^p)/2)^(1/p), with M_0 = G and a stable p ~ 0 limit."""
    hi, lo, s = _split(a, b)
    if not np.all(np.isfinite(np.asarray(p, dtype=float))):
        raise DomainError("power mean exponent must be finite")
    g = np.sqrt(hi) * np.sqrt(lo)
    out = g * np.exp(_log_mean_over_geometric(hi, lo, p))
    scalar = s and np.asarray(p).ndim == 0
    return _ret(np.where(hi == lo, hi, out), scalar)


def heronian_mean(a, b, p):
    """H_p = ((a^p + (ab)^(p/2) + b^p)/3)^(1/p), H_0 = G."""
    hi, lo, s = _split(a, b)
    p_arr = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p_arr)):
        raise DomainError("Heronian exponent must be finite")
    y = 0.5 * _log_ratio(hi, lo)
    g = np.sqrt(hi) * np.sqrt(lo)
    tiny = np.abs(p_arr) < POWER_LIMIT_THRESHOLD
    psafe = np.where(tiny, 1.0, p_arr)
    v = psafe * y
    huge = np.abs(v) > 700.0  # log((2 cosh v + 1)/3) ~ |v| - log 3
    vsafe = np.where(huge, 1.0, v)
    with np.errstate(**_QUIET):
        general = np.log1p((4.0 / 3.0) * np.sinh(0.5 * vsafe) ** 2) / psafe
        asym = (np.abs(v) - math.log(3.0)) / psafe
    expo = np.where(tiny, p_arr * y * y / 3.0, np.where(huge, asym, general))
    scalar = s and p_arr.ndim == 0
    return _ret(np.where(hi == lo, hi, g * np.exp(expo)), scalar)


# ---------------------------------------------------------------------------
# Relative-to-A kernels: rel(M) = M/A - 1 computed with full relative
# accuracy even when it is O(t^2).  These power the stable evaluation of
# vanishing mean differences like (G - Y)/(A - L) and log(X/A).
# ---------------------------------------------------------------------------

#: x (or y) above which direct transcendentals are as accurate as series.
_REL_DIRECT_CUTOFF = 0.1


def _rel_geometric(t):
    return -(t * t) / (1.0 + np.sqrt(1.0 - t * t))


def _piecewise_small(arg, small_fn, big_fn, cutoff=_REL_DIRECT_CUTOFF):
    mask = np.abs(arg) < cutoff
    small = small_fn(np.where(mask, arg, 0.0))
    with np.errstate(**_QUIET):
        big = big_fn(np.where(mask, cutoff, arg))
    return np.where(mask, small, big)


def _rel_logarithmic(y):
    return _piecewise_small(
        y,
        lambda v: series.tanh_over_y_minus_one(v, terms=10),
        lambda v: np.tanh(v) / v - 1.0,
    )


def _rel_identric_exponent(y):
    # A/L - 1 = y coth y - 1
    return _piecewise_small(
        y,
        lambda v: series.ycothy_minus_one(v, terms=10),
        lambda v: v / np.tanh(v) - 1.0,
    )


def rel_to_arithmetic(kind: "MeanKind", a, b):
    """(M/A) - 1 elementwise, accurate in relative terms for every t."""
    hi, lo, s = _split(a, b)
    t = _half_ratio(hi, lo)
    tag = kind.tag
    if tag == "A":
        out = np.zeros_like(t)
    elif tag == "G":
        out = _rel_geometric(t)
    elif tag == "H":
        out = -(t * t)
    elif tag == "P":
        sser = series.xoversin_minus_one(_arcsin_t(hi, lo, t))
        out = -sser / (1.0 + sser)
    elif tag == "X":
        out = np.expm1(series.xcotx_minus_one(_arcsin_t(hi, lo, t)))
    elif tag == "L":
        out = _rel_logarithmic(_half_log_ratio(hi, lo))
    elif tag == "Y":
        rg = _rel_geometric(t)
        e = np.expm1(_rel_logarithmic(_half_log_ratio(hi, lo)))
        out = rg + e + rg * e
    elif tag == "I":
        rg = _rel_geometric(t)
        e = np.expm1(_rel_identric_exponent(_half_log_ratio(hi, lo)))
        out = rg + e + rg * e
    elif tag in ("Mp", "Hp"):
        rg = _rel_geometric(t)
        if tag == "Mp":
            expo = _log_mean_over_geometric(hi, lo, kind.exponent)
        else:
            y = 0.5 * _log_ratio(hi, lo)
            p = kind.exponent
            if abs(p) < POWER_LIMIT_THRESHOLD:
                expo = p * y * y / 3.0
            else:
                with np.errstate(**_QUIET):
                    expo = np.log1p((4.0 / 3.0) * np.sinh(0.5 * p * y) ** 2) / p
        out = np.expm1(np.log1p(rg) + expo)
    else:  # pragma: no cover
        raise DomainError(f"unknown mean kind {kind!r}")
    return _ret(out, s)


# ---------------------------------------------------------------------------
# Typed facade
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositivePair:
    """An unordered pair of positive reals; the argument of every mean."""

    a: float
    b: float

    def __post_init__(self):
        for v in (self.a, self.b):
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"pair entries must be positive finite reals, got {v!r}")

    @property
    def t(self) -> float:
        """(a - b)/(a + b), signed; always in (-1, 1)."""
        return (self.a - self.b) / (self.a + self.b)


@dataclass(frozen=True)
class ParamPoint:
    """Trigonometric/hyperbolic coordinates of a pair with a != b."""

    x: float  # arcsin(t) in (0, pi/2)
    y: float  # artanh(t) = log(a/b)/2 > 0


def param_point(pair: PositivePair) -> ParamPoint:
    """Coordinates satisfying cos(x) = G/A and cosh(y) = A/G exactly."""
    if pair.a == pair.b:
        raise DegeneratePairError("x, y are undefined at a == b; use continuity limits")
    hi, lo = max(pair.a, pair.b), min(pair.a, pair.b)
    t = (hi - lo) / (hi + lo)
    if t > 0.9:
        x = 0.5 * math.pi - 2.0 * math.asin(math.sqrt(lo / (hi + lo)))
    else:
        x = math.asin(t)
    return ParamPoint(x=x, y=0.5 * math.log1p((hi - lo) / lo))


_PLAIN_TAGS = ("A", "G", "H", "L", "I", "P", "X", "Y")


@dataclass(frozen=True)
class MeanKind:
    """A mean selector: one of the eight named kinds or Mp[p] / Hp[p]."""

    tag: str
    exponent: float | None = None

    def __post_init__(self):
        if self.tag in _PLAIN_TAGS:
            if self.exponent is not None:
                raise DomainError(f"{self.tag} takes no exponent")
        elif self.tag in ("Mp", "Hp"):
            e = self.exponent
            if e is None or not math.isfinite(e):
                raise DomainError(f"{self.tag} needs a finite exponent")
        else:
            raise DomainError(f"unknown mean tag {self.tag!r}")

    @classmethod
    def power(cls, p: float) -> "MeanKind":
        return cls("Mp", float(p))

    @classmethod
    def heronian(cls, p: float) -> "MeanKind":
        return cls("Hp", float(p))

    def label(self) -> str:
        if self.exponent is None:
            return self.tag
        return f"{self.tag}[{self.exponent!r}]"


PLAIN_KINDS = {tag: MeanKind(tag) for tag in _PLAIN_TAGS}

_KERNELS = {
    "A": arithmetic,
    "G": geometric,
    "H": harmonic,
    "L": logarithmic,
    "I": identric,
    "P": seiffert,
    "X": x_mean,
    "Y": y_mean,
}


def mean_kernel(kind: MeanKind):
    """Two-argument array function implementing the kind."""
    if kind.tag == "Mp":
        return lambda a, b: power_mean(a, b, kind.exponent)
    if kind.tag == "Hp":
        return lambda a, b: heronian_mean(a, b, kind.exponent)
    return _KERNELS[kind.tag]


def eval_mean(kind: MeanKind, pair: PositivePair) -> float:
    return float(mean_kernel(kind)(pair.a, pair.b))


@dataclass(frozen=True)
class MeanVector:
    """All eight named means of one pair plus its parametrization."""

    pair: PositivePair
    point: ParamPoint | None
    arithmetic: float
    geometric: float
    harmonic: float
    logarithmic: float
    identric: float
    seiffert: float
    x_mean: float
    y_mean: float

    def as_dict(self) -> dict[str, float]:
        return {
            "A": self.arithmetic,
            "G": self.geometric,
            "H": self.harmonic,
            "L": self.logarithmic,
            "I": self.identric,
            "P": self.seiffert,
            "X": self.x_mean,
            "Y": self.y_mean,
        }


def eval_all(pair: PositivePair) -> MeanVector:
    point = None if pair.a == pair.b else param_point(pair)
    a, b = pair.a, pair.b
    return MeanVector(
        pair=pair,
        point=point,
        arithmetic=float(arithmetic(a, b)),
        geometric=float(geometric(a, b)),
        harmonic=float(harmonic(a, b)),
        logarithmic=float(logarithmic(a, b)),
        identric=float(identric(a, b)),
        seiffert=float(seiffert(a, b)),
        x_mean=float(x_mean(a, b)),
        y_mean=float(y_mean(a, b)),
    )
