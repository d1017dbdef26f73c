"""Registry of strict inequality chains between the means, a grid verifier,
sharpness probes for the best-possible constants, and exponent bracketing.

A chain is an ascending sequence of expressions; the verifier's primitive is
the per-link relative margin (rhs - lhs) / max(|lhs|, |rhs|), which equals
(rhs - lhs)/rhs for ascending positive links and stays meaningful for the
few chains whose members are negative.  A chain passes a grid when every
margin exceeds the strictness guard.

Near a == b most links are tangent to second order or higher, so margins
there sit at (or below) the double-precision noise floor; reports record
whatever the arithmetic resolves.  Sharpness probes therefore treat only
margins below -margin_guard as violations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import ratios as _ratios_mod
from .errors import (
    ConfigError,
    DomainError,
    EvalError,
    NonMonotonePredicateError,
)
from .expressions import MeanExpr, evaluate, parse_expr
from .means import power_mean

DEFAULT_MARGIN_GUARD = 1e-13

_NC = _ratios_mod.named_constants()
_ALPHA = 2.0 / 3.0
_BETA = _NC["beta"].value
_BETA1 = _NC["beta1"].value
_BETA2 = _NC["beta2"].value
_Q = _NC["q"].value
_K = _NC["k"].value
_THIRD = 1.0 / 3.0
_HERONIAN_UPPER = math.log(3.0) / (1.0 + math.log(2.0))  # ~0.6488


@dataclass(frozen=True)
class GridSpec:
    """b fixed, ratios a/b log-spaced over [1 + r_min, r_max]."""

    r_min: float = 1e-6
    r_max: float = 1e8
    n: int = 10_000
    b: float = 1.0

    def __post_init__(self):
        if not (self.n >= 2):
            raise ConfigError("grid needs n >= 2")
        if not (self.r_min > 0.0):
            raise ConfigError("grid needs r_min > 0")
        if not (self.r_max > 1.0 + self.r_min):
            raise ConfigError("grid needs r_max > 1 + r_min")
        if not (self.b > 0.0 and math.isfinite(self.b)):
            raise ConfigError("grid needs positive finite b")

    def ratios(self) -> np.ndarray:
        return np.geomspace(1.0 + self.r_min, self.r_max, self.n)

    def describe(self) -> str:
        return (
            f"{self.n} log-spaced ratios in [1+{self.r_min!r}, {self.r_max!r}],"
            f" b = {self.b!r}"
        )


def refined_ratios(grid: GridSpec) -> np.ndarray:
    """Default grid plus 100 extra points hugging each asymptotic end."""
    near = np.geomspace(1.0 + 1e-12, 1.0 + 1e-6, 100, endpoint=False)
    far = np.geomspace(grid.r_max, grid.r_max * 1e4, 100)
    return np.unique(np.concatenate([near, grid.ratios(), far]))


@dataclass(frozen=True)
class InequalityChain:
    """Ascending strict chain of expressions with a literature anchor."""

    id: str
    member_texts: tuple[str, ...]
    citation: str
    domain_note: str = ""

    def __post_init__(self):
        if len(self.member_texts) < 2:
            raise ConfigError("a chain needs at least two members")

    @cached_property
    def members(self) -> tuple[MeanExpr, ...]:
        return tuple(parse_expr(t) for t in self.member_texts)


@dataclass(frozen=True)
class LinkReport:
    lhs: str
    rhs: str
    min_margin: float
    argmin_ratio: float

    def as_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "min_margin": self.min_margin,
            "argmin_ratio": self.argmin_ratio,
        }


@dataclass(frozen=True)
class ChainReport:
    chain_id: str
    links: tuple[LinkReport, ...]
    passed: bool
    grid: str
    margin_guard: float
    error: str | None = None

    @property
    def min_margin(self) -> float:
        return min((l.min_margin for l in self.links), default=math.nan)

    def as_dict(self) -> dict:
        return {
            "chain": self.chain_id,
            "passed": self.passed,
            "margin_guard": self.margin_guard,
            "grid": self.grid,
            "links": [l.as_dict() for l in self.links],
            "error": self.error,
        }


def _rel_margins(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    denom = np.maximum(np.abs(lhs), np.abs(rhs))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(denom > 0.0, (rhs - lhs) / np.where(denom > 0.0, denom, 1.0), 0.0)
    return out


def verify_chain(
    chain: InequalityChain,
    grid: GridSpec | None = None,
    margin_guard: float = DEFAULT_MARGIN_GUARD,
) -> ChainReport:
    """Evaluate every adjacent link on the grid; pass iff all margins clear
    the guard.  Deterministic: fixed grid, fixed reduction order."""
    grid = grid or GridSpec()
    r = grid.ratios()
    a = r * grid.b
    b = grid.b
    try:
        values = [np.asarray(evaluate(m, a, b)) for m in chain.members]
    except EvalError as exc:
        return ChainReport(
            chain_id=chain.id,
            links=(),
            passed=False,
            grid=grid.describe(),
            margin_guard=margin_guard,
            error=str(exc),
        )
    links = []
    for i in range(len(values) - 1):
        margins = _rel_margins(values[i], values[i + 1])
        j = int(np.argmin(margins))
        links.append(
            LinkReport(
                lhs=chain.member_texts[i],
                rhs=chain.member_texts[i + 1],
                min_margin=float(margins[j]),
                argmin_ratio=float(r[j]),
            )
        )
    passed = all(l.min_margin > margin_guard for l in links)
    return ChainReport(
        chain_id=chain.id,
        links=tuple(links),
        passed=passed,
        grid=grid.describe(),
        margin_guard=margin_guard,
    )


# ---------------------------------------------------------------------------
# Parameterized chain builders (the constants that sharpness probes perturb)
# ---------------------------------------------------------------------------


def _chain_t21a(alpha: float = _ALPHA, beta: float = _BETA) -> InequalityChain:
    return InequalityChain(
        "T21a",
        (
            f"{alpha!r}*G + {1.0 - alpha!r}*A",
            "X",
            f"{beta!r}*G + {1.0 - beta!r}*A",
        ),
        "sharp convex combinations of G and A around X",
    )


def _chain_t21b(alpha1: float = 1.0, beta1: float = _BETA1) -> InequalityChain:
    return InequalityChain(
        "T21b",
        (f"A + G - {alpha1!r}*P", "X", f"A + G - {beta1!r}*P"),
        "sharp bounds A + G - c*P around X",
    )


def _chain_t26(alpha2: float = 2.0, beta2: float = _BETA2) -> InequalityChain:
    return InequalityChain(
        "T26",
        (
            f"(A*X)^{1.0 / alpha2!r}",
            "P",
            f"(A*X^{beta2!r})^(1/(1+{beta2!r}))",
        ),
        "sharp exponents placing P between geometric interpolations of A and X",
    )


def _chain_e11(p: float = _THIRD, q: float = _Q) -> InequalityChain:
    return InequalityChain(
        "E11",
        (f"Mp[{p!r}]", "X", f"Mp[{q!r}]"),
        "power-mean window for X (Chu, Long et al.)",
    )


def _chain_e12(alpha: float = 0.5, beta: float = _HERONIAN_UPPER) -> InequalityChain:
    return InequalityChain(
        "E12",
        (f"Hp[{alpha!r}]", "X", f"Hp[{beta!r}]"),
        "Heronian window for X (Zhou et al.)",
    )


def _chain_t24(s: float = 0.5, k: float = _K) -> InequalityChain:
    return InequalityChain(
        "T24",
        (f"Mp[{s!r}]", "(P+X)/2", f"Mp[{k!r}]"),
        "(P+X)/2 between the power means of orders 1/2 and k",
    )


def _static_chains() -> list[InequalityChain]:
    mk = InequalityChain
    third = repr(_THIRD)
    q = repr(_Q)
    return [
        mk(
            "T11-1",
            ("G", "A*G/P", "X", "A*P/(2*P - G)", "P"),
            "Sandor's bounds: X between G and the Seiffert mean",
        ),
        mk(
            "T11-2",
            ("H", "L*G/A", "Y", "A*G/(2*A - L)", "G"),
            "Sandor's bounds: Y between H and G",
        ),
        mk(
            "T11-3",
            ("1", "L^2/(I*G)", "L*exp(G/L - 1)/G", "P*X/(A*G)"),
            "lower bounds for PX/(AG) through L and I",
        ),
        mk(
            "T11-4",
            ("H", "G^2/I", "L*G/A", "G*(A+L)/(3*A - L)", "Y"),
            "refined harmonic-side bounds for Y",
        ),
        mk(
            "T12-1",
            ("(G+H)/e", "Y", "(G+H)/2"),
            "Y between (G+H)/e and (G+H)/2",
        ),
        mk(
            "T12-2",
            ("G^2", "I*Y", "I*G", "L^2"),
            "product bounds linking Y, I, G, L",
            domain_note=(
                "leading member is G^2; the variant with G^2*I is dimensionally"
                " inhomogeneous and fails for every a != b"
            ),
        ),
        mk(
            "T12-3",
            ("(G - Y)/(A - L)", "(Y+G)/(2*A)", "(3*G+H)/(4*A)", "1"),
            "difference-quotient bounds for Y near G",
        ),
        mk(
            "T12-4",
            ("L", "(2*G+A)/3", "X", "L(X, A)", "P", "(2*A+G)/3", "I"),
            "Carlson chain refined through X and the nested mean L(X, A)",
        ),
        mk(
            "T12-5",
            ("2*(1 - A/P)", "log(X/A)", "(P/A)^2"),
            "logarithmic bounds for X/A",
        ),
        _chain_e11(),
        _chain_e12(),
        _chain_t21a(),
        _chain_t21b(),
        mk(
            "R-ine1502a",
            ("X", "A*(1/e + (1 - 1/e)*G/P)"),
            "Sandor's upper bound for X via G/P",
        ),
        mk(
            "R-ine1502b",
            ("Y", "G*(1/e + (1 - 1/e)*L/A)"),
            "Sandor's upper bound for Y via L/A",
        ),
        mk(
            "T22",
            ("(A+G)/e", "X", f"Mp[{q}]", "(L+I)/2", "(A+G)/2"),
            "(A+G)/e < X < M_q < (L+I)/2, refining Alzer's bound",
        ),
        mk(
            "R-2402c",
            ("L", f"Mp[{third}]", "X", f"Mp[{q}]", "(L+I)/2", "I"),
            "power-mean ladder from L to I around X",
            domain_note=(
                "the sometimes-printed tail I < M_(2/3) is omitted: it fails for"
                " large ratios (already at a/b = 4, where I ~ 2.33588 exceeds"
                " M_(2/3) ~ 2.33471; the sharp upper power for I is log 2)"
            ),
        ),
        mk(
            "T23",
            ("A + G - P", "X", "P^2/A", "(A+G)/2"),
            "A + G - P below X below P^2/A",
        ),
        mk(
            "R-2402e",
            (
                "L",
                "(2*G+A)/3",
                "A + G - P",
                "X",
                "sqrt(P*X)",
                "(A+G)/2",
                "(P+X)/2",
                "P",
                "(2*A+G)/3",
                "I",
            ),
            "ten-term refinement interleaving X, sqrt(PX), (P+X)/2 and P",
        ),
        mk(
            "R-P2",
            ("A*X", "(A^2*((A+G)/2)^4)^(1/3)", "P^2"),
            "P^2 above a geometric interpolation of A^2 and ((A+G)/2)^4 above AX",
        ),
        _chain_t24(),
        mk(
            "R-2402g",
            ("sqrt(A*G)", "sqrt(P*X)", "(A+G)/2"),
            "sqrt(PX) between the geometric and arithmetic means of A and G",
        ),
        mk(
            "T25a",
            (f"Mp[{third}]", "(2*G+A)/3", "X"),
            "M_(1/3) below the Carlson bound below X",
        ),
        mk(
            "T25b",
            ("Hp[0.5]", "(2*G+A)/3", "X"),
            "H_(1/2) below the Carlson bound below X",
        ),
        _chain_t26(),
        mk(
            "C-AGe",
            ("(A+G)/e", "X", "(A+G)/2"),
            "(A+G)/e < X < (A+G)/2 with best constants e and 2",
        ),
        mk("C27-1", ("A*G", "P*L", "P*X"), "PX > PL > AG"),
        mk("C27-2", ("A*G", "P*L", "I*L"), "IL > PL > AG (improves IL > AG)"),
        mk(
            "C-46-1",
            ("L", "(2*G+A)/3", "A*(P+G)/(3*P - G)", "X"),
            "X above A(P+G)/(3P-G) above the Carlson bound",
        ),
        mk(
            "C-46-2",
            ("(P+G)/2", "X", "P^2/A"),
            "X between (P+G)/2 and P^2/A",
        ),
        mk(
            "C-2202a",
            ("I/L", "L/G", "1 + G/H - I/G"),
            "I/L < L/G < 1 + G/H - I/G (equivalent to L + I < A + G)",
        ),
        mk("R-ineq6", ("sqrt(I*G)", "L"), "Alzer's inequality L > sqrt(IG)"),
        mk(
            "R-0209f",
            ("sqrt(A*X)", "P", "A*(X/A)^log(pi/2)"),
            "sqrt(AX) < P < A(X/A)^log(pi/2)",
        ),
        mk(
            "C-coro89",
            ("A/e", "pi/(2*e)*P", "X", "P"),
            "A/e < (pi/(2e))P < X < P",
        ),
        mk("R-seiffert", ("2/pi*A", "P"), "Seiffert's lower bound (2/pi)A < P"),
        mk(
            "R-halfpi",
            ("(2/pi*A + G)/2", "X"),
            "X above the half-sum of (2/pi)A and G",
        ),
    ]


_SUITE: tuple[InequalityChain, ...] | None = None


def _sanity_check(chain: InequalityChain) -> None:
    # finite near the diagonal, strictly ascending at a reference point
    near = [float(evaluate(m, 1.0 + 1e-6, 1.0)) for m in chain.members]
    if not all(math.isfinite(v) for v in near):
        raise ConfigError(f"chain {chain.id} not finite near the diagonal")
    ref = [float(evaluate(m, 4.0, 1.0)) for m in chain.members]
    for lo, hi in zip(ref, ref[1:]):
        if not lo < hi:
            raise ConfigError(f"chain {chain.id} is not ascending at (4, 1)")


def builtin_suite() -> tuple[InequalityChain, ...]:
    """The full chain registry (validated once, then cached)."""
    global _SUITE
    if _SUITE is None:
        chains = _static_chains()
        ids = [c.id for c in chains]
        if len(set(ids)) != len(ids):
            raise ConfigError("duplicate chain ids in the registry")
        for c in chains:
            _sanity_check(c)
        _SUITE = tuple(chains)
    return _SUITE


def get_chain(chain_id: str) -> InequalityChain:
    for c in builtin_suite():
        if c.id == chain_id:
            return c
    raise DomainError(f"unknown chain id {chain_id!r}")


# ---------------------------------------------------------------------------
# Sharpness probes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeTemplate:
    chain_id: str
    constant: str
    nominal: float
    side: str  # "lower" | "upper"
    tighten_sign: float  # nominal + sign*eps tightens the bound
    build: object = field(repr=False)  # callable(value) -> InequalityChain


def _probe_templates() -> dict[tuple[str, str], ProbeTemplate]:
    t = [
        ProbeTemplate("T21a", "alpha", _ALPHA, "lower", -1.0, lambda v: _chain_t21a(alpha=v)),
        ProbeTemplate("T21a", "beta", _BETA, "upper", +1.0, lambda v: _chain_t21a(beta=v)),
        ProbeTemplate("T21b", "alpha1", 1.0, "lower", -1.0, lambda v: _chain_t21b(alpha1=v)),
        ProbeTemplate("T21b", "beta1", _BETA1, "upper", +1.0, lambda v: _chain_t21b(beta1=v)),
        ProbeTemplate("T26", "alpha2", 2.0, "lower", +1.0, lambda v: _chain_t26(alpha2=v)),
        ProbeTemplate("T26", "beta2", _BETA2, "upper", +1.0, lambda v: _chain_t26(beta2=v)),
        ProbeTemplate("E11", "p", _THIRD, "lower", +1.0, lambda v: _chain_e11(p=v)),
        ProbeTemplate("E11", "q", _Q, "upper", -1.0, lambda v: _chain_e11(q=v)),
        ProbeTemplate("E12", "alpha", 0.5, "lower", +1.0, lambda v: _chain_e12(alpha=v)),
        ProbeTemplate(
            "E12", "beta", _HERONIAN_UPPER, "upper", -1.0, lambda v: _chain_e12(beta=v)
        ),
        ProbeTemplate("T24", "s", 0.5, "lower", +1.0, lambda v: _chain_t24(s=v)),
        ProbeTemplate("T24", "k", _K, "upper", -1.0, lambda v: _chain_t24(k=v)),
    ]
    return {(p.chain_id, p.constant): p for p in t}


_TEMPLATES = _probe_templates()


def probe_constants() -> tuple[ProbeTemplate, ...]:
    return tuple(_TEMPLATES.values())


@dataclass(frozen=True)
class ProbeOutcome:
    chain_id: str
    constant: str
    direction: str
    epsilon: float
    violated: bool
    pair: tuple[float, float] | None
    worst_margin: float

    @property
    def label(self) -> str:
        return "violation_found" if self.violated else "still_holds"

    def as_dict(self) -> dict:
        return {
            "chain": self.chain_id,
            "constant": self.constant,
            "direction": self.direction,
            "epsilon": self.epsilon,
            "outcome": self.label,
            "pair": list(self.pair) if self.pair else None,
            "worst_margin": self.worst_margin,
        }


def sharpness_probe(
    chain_id: str,
    constant: str,
    direction: str,
    epsilon: float,
    grid: GridSpec | None = None,
    margin_guard: float = DEFAULT_MARGIN_GUARD,
) -> ProbeOutcome:
    """Tighten one best-possible constant by epsilon and hunt for a violation
    on the refined grid.  violation_found certifies the constant cannot be
    improved by epsilon; still_holds means no resolvable counterexample."""
    if direction not in ("tighten_upper", "tighten_lower"):
        raise DomainError("direction must be tighten_upper or tighten_lower")
    if not (epsilon > 0.0 and math.isfinite(epsilon)):
        raise DomainError("epsilon must be a positive real")
    tpl = _TEMPLATES.get((chain_id, constant))
    if tpl is None:
        known = sorted({c for c, _ in _TEMPLATES})
        raise DomainError(
            f"chain {chain_id!r} has no probe template for constant {constant!r}"
            f" (parameterized chains: {known})"
        )
    expected = "tighten_lower" if tpl.side == "lower" else "tighten_upper"
    if direction != expected:
        raise DomainError(
            f"constant {constant!r} of {chain_id} is a {tpl.side}-side constant;"
            f" use {expected}"
        )
    tightened = tpl.build(tpl.nominal + tpl.tighten_sign * epsilon)
    grid = grid or GridSpec()
    r = refined_ratios(grid)
    a = r * grid.b
    values = [np.asarray(evaluate(m, a, grid.b)) for m in tightened.members]
    worst = math.inf
    worst_idx = 0
    for i in range(len(values) - 1):
        margins = _rel_margins(values[i], values[i + 1])
        j = int(np.argmin(margins))
        if margins[j] < worst:
            worst = float(margins[j])
            worst_idx = j
    violated = worst < -margin_guard
    pair = (float(a[worst_idx]), float(grid.b)) if violated else None
    return ProbeOutcome(chain_id, constant, direction, epsilon, violated, pair, worst)


# ---------------------------------------------------------------------------
# Best-exponent bracketing and the product conjecture scan
# ---------------------------------------------------------------------------


def bracket_best_exponent(
    target,
    side: str,
    tolerance: float,
    grid: GridSpec | None = None,
    margin_guard: float = DEFAULT_MARGIN_GUARD,
    search_range: tuple[float, float] = (-8.0, 8.0),
) -> float:
    """Bisect for the critical power-mean order against a target expression.

    side="lower": largest s with M_s < target everywhere on the refined grid
    (the relation holds for small s and breaks as s grows); side="upper":
    smallest s with target < M_s (holds for large s).  The returned estimate
    sits on the holding side of a bracket of width <= tolerance.
    """
    if side not in ("lower", "upper"):
        raise DomainError("side must be 'lower' or 'upper'")
    if not (tolerance > 0.0 and math.isfinite(tolerance)):
        raise DomainError("tolerance must be positive")
    expr = parse_expr(target) if isinstance(target, str) else target
    grid = grid or GridSpec()
    r = refined_ratios(grid)
    a = r * grid.b
    tv = np.asarray(evaluate(expr, a, grid.b))
    if np.any(~(tv > 0.0)):
        raise DomainError("target must evaluate positive on the grid")

    def holds(s: float) -> bool:
        m = np.asarray(power_mean(a, grid.b, s))
        diff = (tv - m) if side == "lower" else (m - tv)
        scale = np.maximum(np.abs(tv), np.abs(m))
        return float(np.min(diff / scale)) > -margin_guard

    lo_lim, hi_lim = search_range
    steps = [float(s) for s in np.arange(math.floor(lo_lim), math.ceil(hi_lim) + 1)]
    flags = {}

    def cached(s: float) -> bool:
        if s not in flags:
            flags[s] = holds(s)
        return flags[s]

    holding = [s for s in steps if cached(s)]
    failing = [s for s in steps if not flags[s]]
    if not holding:
        raise DomainError(f"no integer exponent in {search_range} satisfies the {side} relation")
    if not failing:
        raise DomainError(f"the {side} relation never breaks inside {search_range}")
    # Monotone predicate: holding exponents form one contiguous run at the
    # small end (lower side) or the large end (upper side).
    ordered = [flags[s] for s in steps]
    expected = sorted(ordered, reverse=(side == "lower"))
    if ordered != expected:
        raise NonMonotonePredicateError(
            f"predicate not monotone over integer scan {steps}: {ordered}"
        )

    if side == "lower":
        s_true, s_false = max(holding), min(s for s in failing if s > max(holding))
    else:
        s_true, s_false = min(holding), max(s for s in failing if s < min(holding))
    lo, hi = (s_true, s_false) if side == "lower" else (s_false, s_true)
    # invariant for lower: holds(lo) and not holds(hi); for upper the reverse
    while abs(hi - lo) > tolerance:
        mid = 0.5 * (lo + hi)
        ok = holds(mid)
        if side == "lower":
            if ok:
                lo = mid
            else:
                hi = mid
        else:
            if ok:
                hi = mid
            else:
                lo = mid
    return lo if side == "lower" else hi


def conjecture_margin_expr() -> tuple[MeanExpr, MeanExpr]:
    return parse_expr("P*X"), parse_expr("I*L")


@dataclass(frozen=True)
class ConjectureReport:
    min_margin: float
    min_difference: float
    argmin_ratio: float
    sign: str
    resolved: bool
    note: str

    def as_dict(self) -> dict:
        return {
            "min_relative_margin": self.min_margin,
            "min_difference": self.min_difference,
            "argmin_ratio": self.argmin_ratio,
            "sign": self.sign,
            "resolved": self.resolved,
            "note": self.note,
        }


def conjecture_scan(grid: GridSpec | None = None) -> ConjectureReport:
    """Minimum of P*X - I*L over the grid: numerical evidence only."""
    grid = grid or GridSpec()
    r = grid.ratios()
    a = r * grid.b
    px_expr, il_expr = conjecture_margin_expr()
    px = np.asarray(evaluate(px_expr, a, grid.b))
    il = np.asarray(evaluate(il_expr, a, grid.b))
    margins = _rel_margins(il, px)  # (PX - IL)/max scale
    j = int(np.argmin(margins))
    m = float(margins[j])
    sign = "positive" if m > 0 else ("negative" if m < 0 else "zero")
    return ConjectureReport(
        min_margin=m,
        min_difference=float(px[j] - il[j]),
        argmin_ratio=float(r[j]),
        sign=sign,
        resolved=False,
        note=(
            "grid evidence only; the strict inequality P*X > I*L is unresolved."
            " Near a == b the two products agree beyond double precision, so"
            " the reported minimum reflects arithmetic resolution there."
        ),
    )
