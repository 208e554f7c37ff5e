import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import mpmath as mp
import pandas as pd

logger = logging.getLogger(__name__)

MAX_N = 200
EMPIRICAL_BASE = 1.15
EXPONENTIAL_PRECISION_BITS = 128

RECURRENCE_COLUMNS = [
    "n", "T", "log2T", "log2R",
    "log2T_eppstein", "log2_eppstein_bound", "log2_empirical",
]


@dataclass(frozen=True)
class BoundParams:
    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    @classmethod
    def published(cls) -> "BoundParams":
        return cls(Fraction(157, 531), Fraction(20, 413), Fraction(20, 1239))

    @property
    def objective(self) -> Fraction:
        """Exponent per vertex of the bound at the start state."""
        return self.alpha + self.beta / 3 + self.gamma


class RecurrenceTable:
    """
    Memoized T(n, s, a, b, f) for one fixed n, with a and b counting the A-
    and B-branches taken along a path.

    Base cases are tested in this order: s < 0 or f < 0 gives 0; 3a + 7b > n
    gives 0; s == 0 gives 1; a state whose five lines are all zero gives 1.
    """

    def __init__(self, n: int):
        self.n = n
        self.memo: Dict[Tuple[int, int, int, int], int] = {}

    def value(self, s: int, a: int, b: int, f: int) -> int:
        if s < 0 or f < 0:
            return 0
        if 3 * a + 7 * b > self.n:
            return 0
        if s == 0:
            return 1
        key = (s, a, b, f)
        cached = self.memo.get(key)
        if cached is not None:
            return cached

        t1 = self.value(s - 3, a + 1, b, f - 4)
        t2 = self.value(s - 3, a, b + 1, f)
        t3a, t3b = self.value(s - 5, a, b, f - 2), self.value(s - 2, a, b, f - 2)
        t4 = self.value(s - 4, a, b, f)
        t5a, t5b = self.value(s - 4, a, b, f - 2), self.value(s - 3, a, b, f - 2)

        if max(t1, t2, min(t3a, t3b), t4, min(t5a, t5b)) == 0:
            result = 1
        else:
            result = max(2 * t1, 2 * t2, t3a + t3b, 2 * t4, t5a + t5b)
        self.memo[key] = result
        return result

    def start_value(self) -> int:
        return self.value(self.n, 0, 0, self.n)


@dataclass
class RecurrenceValue:
    n: int
    value: int
    table: RecurrenceTable = field(repr=False, default=None)

    @property
    def log2(self) -> float:
        return math.log2(self.value) if self.value > 0 else float("-inf")


def _check_range(n: int):
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must lie in 1..{MAX_N}, got {n}")


def eval_T(n: int) -> RecurrenceValue:
    """Worst-case leaf count T(n, n, 0, 0, n) of the search tree."""
    _check_range(n)
    table = RecurrenceTable(n)
    value = table.start_value()
    logger.debug(f"T({n}) = {value} over {len(table.memo)} states")
    return RecurrenceValue(n, value, table)


def eval_T_naive(n: int, s: int = None, a: int = 0, b: int = 0, f: int = None) -> int:
    """Same recurrence without memoization; exponential, for cross-checks at small n."""
    s = n if s is None else s
    f = n if f is None else f
    if s < 0 or f < 0 or 3 * a + 7 * b > n:
        return 0
    if s == 0:
        return 1
    t1 = eval_T_naive(n, s - 3, a + 1, b, f - 4)
    t2 = eval_T_naive(n, s - 3, a, b + 1, f)
    t3a, t3b = eval_T_naive(n, s - 5, a, b, f - 2), eval_T_naive(n, s - 2, a, b, f - 2)
    t4 = eval_T_naive(n, s - 4, a, b, f)
    t5a, t5b = eval_T_naive(n, s - 4, a, b, f - 2), eval_T_naive(n, s - 3, a, b, f - 2)
    if max(t1, t2, min(t3a, t3b), t4, min(t5a, t5b)) == 0:
        return 1
    return max(2 * t1, 2 * t2, t3a + t3b, 2 * t4, t5a + t5b)


def eval_T_eppstein(s: int, memo: Dict[int, int] = None) -> int:
    """Single-variable recurrence max{2T(s-3), T(s-2) + T(s-5)} with the same base-case scheme."""
    if memo is None:
        memo = {}
    for k in range(0, s + 1):
        if k == 0:
            memo[k] = 1
            continue
        t3 = memo.get(k - 3, 0)
        t2 = memo.get(k - 2, 0)
        t5 = memo.get(k - 5, 0)
        if max(t3, min(t2, t5)) == 0:
            memo[k] = 1
        else:
            memo[k] = max(2 * t3, t2 + t5)
    return memo[s] if s >= 0 else 0


def bound_R(n: int, s: int, a: int, b: int, f: int, params: BoundParams) -> Fraction:
    """Exact exponent of R: alpha*s + beta*((n/4 - a) + 7/3*(n/7 - b) - n/4) + gamma*f."""
    x = Fraction(n, 4) - a
    y = Fraction(n, 7) - b
    return params.alpha * s + params.beta * (x + Fraction(7, 3) * y - Fraction(n, 4)) + params.gamma * f


def at_most_power_of_two(value: int, exponent: Fraction) -> bool:
    """Exact test of value <= 2**exponent for a non-negative integer value."""
    if value <= 0:
        return True
    if exponent < 0:
        return False
    if value.bit_length() <= exponent.numerator // exponent.denominator:
        return True
    if value.bit_length() - 1 > exponent:
        return False
    if value & (value - 1) == 0:
        return value.bit_length() - 1 <= exponent
    gap = math.log2(value) - float(exponent)
    if gap < -1e-9:
        return True
    if gap > 1e-9:
        return False
    return value ** exponent.denominator <= 1 << exponent.numerator


@dataclass
class DominanceReport:
    n: int
    states_checked: int = 0
    violations: List[Tuple[Tuple[int, int, int, int], int]] = field(default_factory=list)
    max_gap: float = float("-inf")

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_dominance(n: int, params: BoundParams = None) -> DominanceReport:
    """Check T <= R on every memoized state reached from the start state."""
    params = params or BoundParams.published()
    result = eval_T(n)
    report = DominanceReport(n)
    for (s, a, b, f), value in result.table.memo.items():
        exponent = bound_R(n, s, a, b, f, params)
        report.states_checked += 1
        if value > 0:
            report.max_gap = max(report.max_gap, math.log2(value) - float(exponent))
        if not at_most_power_of_two(value, exponent):
            report.violations.append(((s, a, b, f), value))
    if report.violations:
        logger.warning(f"T <= R fails on {len(report.violations)} states for n={n}")
    return report


def _upper_power_sum(exponents: List[Fraction]):
    """Outward-rounded interval for the sum of 2**(-e) over the exponents."""
    iv = mp.iv
    saved = iv.prec
    iv.prec = EXPONENTIAL_PRECISION_BITS
    try:
        total = iv.mpf(0)
        ln2 = iv.ln(2)
        for exponent in exponents:
            total += iv.exp(-(iv.mpf(exponent.numerator) / exponent.denominator) * ln2)
        return total
    finally:
        iv.prec = saved


@dataclass
class ConstraintReport:
    params: BoundParams
    residuals: Dict[str, float] = field(default_factory=dict)
    satisfied: Dict[str, bool] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.satisfied.values())

    @property
    def objective(self) -> Fraction:
        return self.params.objective


def verify_constraints(params: BoundParams = None) -> ConstraintReport:
    """
    Check the five feasibility constraints of the bound.

    Linear ones are exact rationals (residual = lhs - 1). The two sums of
    powers of two are evaluated as intervals; they pass only when the whole
    interval lies at or below 1 (residual = 1 - upper end).
    """
    params = params or BoundParams.published()
    alpha, beta, gamma = params.alpha, params.beta, params.gamma
    report = ConstraintReport(params)

    linear = {
        "3a+b+4g>=1": 3 * alpha + beta + 4 * gamma,
        "3a+7b/3>=1": 3 * alpha + Fraction(7, 3) * beta,
        "4a>=1": 4 * alpha,
    }
    for name, lhs in linear.items():
        report.residuals[name] = float(lhs - 1)
        report.satisfied[name] = lhs >= 1

    exponential = {
        "2^(-5a-2g)+2^(-2a-2g)<=1": [5 * alpha + 2 * gamma, 2 * alpha + 2 * gamma],
        "2^(-4a-2g)+2^(-3a-2g)<=1": [4 * alpha + 2 * gamma, 3 * alpha + 2 * gamma],
    }
    for name, exponents in exponential.items():
        total = _upper_power_sum(exponents)
        report.residuals[name] = 1.0 - float(total.b)
        report.satisfied[name] = (total <= 1) is True

    if not report.passed:
        failed = [name for name, ok in report.satisfied.items() if not ok]
        logger.info(f"Bound constraints violated: {failed}")
    return report


def growth_base(params: BoundParams = None, digits: int = 30):
    """2 ** objective, the base of the exponential bound, as an mpmath number."""
    params = params or BoundParams.published()
    with mp.workdps(digits):
        return mp.power(2, mp.mpf(params.objective.numerator) / params.objective.denominator)


def recurrence_frame(max_n: int, params: BoundParams = None) -> pd.DataFrame:
    """One row per n in 1..max_n: T, its log2, the bound exponent and the reference curves."""
    _check_range(max_n)
    params = params or BoundParams.published()
    eppstein_memo = {}
    rows = []
    for n in range(1, max_n + 1):
        result = eval_T(n)
        eppstein = eval_T_eppstein(n, eppstein_memo)
        rows.append({
            "n": n,
            "T": str(result.value),
            "log2T": round(result.log2, 6),
            "log2R": round(float(params.objective * n), 6),
            "log2T_eppstein": round(math.log2(eppstein), 6),
            "log2_eppstein_bound": round(n / 3, 6),
            "log2_empirical": round(n * math.log2(EMPIRICAL_BASE), 6),
        })
        if n % 20 == 0:
            logger.info(f"Recurrence evaluated up to n={n}")
    return pd.DataFrame(rows, columns=RECURRENCE_COLUMNS)
