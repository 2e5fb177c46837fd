"""Closed-form exponents for the classical table phase and the nested search phase.

All logarithms are base 2.  An exponent ``f`` stands for a running time
of ``2^(f k)`` up to polynomial and ``2^(O(eps k))`` factors.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass

BETA_STAR = 0.28325


def entropy(alpha: float) -> float:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"entropy argument {alpha} outside [0, 1]")
    if alpha in (0.0, 1.0):
        return 0.0
    return -alpha * math.log2(alpha) - (1 - alpha) * math.log2(1 - alpha)


def _check(beta: float, levels: int) -> None:
    if not 0 < beta <= 0.5:
        raise ValueError(f"beta={beta} outside (0, 1/2]")
    if levels < 1:
        raise ValueError(f"levels={levels} must be >= 1")


def classical_exponent(beta: float, levels: int) -> float:
    """Table phase: subsets of size (1-beta) k / 2^(levels-1), each with its sub-splits."""
    _check(beta, levels)
    x = (1 - beta) / 2 ** (levels - 1)
    return entropy(x) + x


def quantum_exponent(beta: float, levels: int) -> float:
    """Half the exponent of the binomial product C(k,k/2) C(k/2,k/4) ... C(k/2^(l-1), beta k/2^(l-1))."""
    _check(beta, levels)
    return (1 - 1 / 2 ** (levels - 1)) + entropy(beta) / 2 ** levels


def printed_quantum_exponent(beta: float, levels: int) -> float:
    """The closed form as typeset for the l-level quantum part (H(beta) divided by 2^(l-1))."""
    _check(beta, levels)
    return (1 - 1 / 2 ** (levels - 1)) + entropy(beta) / 2 ** (levels - 1)


@dataclass(frozen=True)
class ExponentReport:
    beta: float
    levels: int
    classical_exponent: float
    quantum_exponent: float
    overall_exponent: float
    base: float
    binding: str = "crossing"

    def as_dict(self) -> dict:
        return asdict(self)


def exponent_report(beta: float, levels: int, binding: str | None = None) -> ExponentReport:
    c = classical_exponent(beta, levels)
    q = quantum_exponent(beta, levels)
    overall = max(c, q)
    if binding is None:
        binding = "classical" if c > q else "quantum" if q > c else "crossing"
    return ExponentReport(beta, levels, c, q, overall, 2.0 ** overall, binding)


def solve_beta(levels: int = 3, tol: float = 1e-12) -> ExponentReport:
    """Balance the two exponents over beta in (0, 1/2] by bisection.

    When the curves do not cross, beta = 1/2 is returned and ``binding``
    names the side that dominates everywhere.
    """
    diff = lambda b: classical_exponent(b, levels) - quantum_exponent(b, levels)
    lo, hi = 1e-12, 0.5
    flo, fhi = diff(lo), diff(hi)
    if flo == 0:
        return exponent_report(lo, levels, "crossing")
    if fhi == 0 or (flo > 0) != (fhi > 0):
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if (diff(mid) > 0) == (flo > 0):
                lo = mid
            else:
                hi = mid
        beta = (lo + hi) / 2
        rep = exponent_report(beta, levels, "crossing")
        shared = (rep.classical_exponent + rep.quantum_exponent) / 2
        return ExponentReport(beta, levels, rep.classical_exponent, rep.quantum_exponent, shared, 2.0 ** shared, "crossing")
    return exponent_report(0.5, levels, "classical" if fhi > 0 else "quantum")


@dataclass(frozen=True)
class LevelRow:
    levels: int
    beta: float
    classical_exponent: float
    quantum_exponent: float
    printed_quantum_exponent: float
    quantum_floor: float
    overall_exponent: float
    base: float
    binding: str


@dataclass(frozen=True)
class LevelTable:
    rows: tuple[LevelRow, ...]
    notes: tuple[str, ...]

    def row(self, levels: int) -> LevelRow:
        for r in self.rows:
            if r.levels == levels:
                return r
        raise KeyError(levels)

    def to_csv(self) -> str:
        buf = io.StringIO()
        fields = list(LevelRow.__dataclass_fields__)
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({f: _fmt(getattr(r, f)) for f in fields})
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [
            f"{'l':>2} {'beta':>9} {'classical':>10} {'quantum':>10} {'printed-q':>10} {'floor-q':>8} {'base':>8}  binding"
        ]
        for r in self.rows:
            lines.append(
                f"{r.levels:>2} {r.beta:>9.5f} {r.classical_exponent:>10.4f} {r.quantum_exponent:>10.4f} "
                f"{r.printed_quantum_exponent:>10.4f} {r.quantum_floor:>8.4f} {r.base:>8.4f}  {r.binding}"
            )
        lines += [f"note: {n}" for n in self.notes]
        return "\n".join(lines)


def _fmt(x):
    return f"{x:.6f}" if isinstance(x, float) else x


TABLE_NOTES = (
    "quantum column is half the log2 of the binomial product (H(beta)/2^l term); "
    "the printed closed form divides H(beta) by 2^(l-1) instead and gives 0.965 at l=3, beta*.",
    "l=2: the tabulated quantum entry 2^k matches the printed form at beta=1/2 (1.0); "
    "the binomial product gives 2^(0.75k). Both are listed (quantum vs printed-q).",
    "l>=4: quantum part is at least 2^((1-1/2^(l-1))k) (floor-q), already 0.875 at l=4.",
)


def table2(levels=(1, 2, 3, 4)) -> LevelTable:
    rows = []
    for l in levels:
        rep = solve_beta(l)
        rows.append(
            LevelRow(
                l,
                rep.beta,
                rep.classical_exponent,
                rep.quantum_exponent,
                printed_quantum_exponent(rep.beta, l),
                1 - 1 / 2 ** (l - 1),
                rep.overall_exponent,
                rep.base,
                rep.binding,
            )
        )
    return LevelTable(tuple(rows), TABLE_NOTES)


@dataclass(frozen=True)
class LevelPrediction:
    level: int
    mask_size: int
    lo: int
    hi: int
    driver: int


def predicted_search_sizes(k: int, beta: float = BETA_STAR, levels: int = 3, epsilon: float = 0.0) -> list[LevelPrediction]:
    """Per-level subset counts of the nested searches for nominal mask sizes.

    Level i searches subsets of a k/2^(i-1) terminal mask whose size lies
    within floor(alpha_i k / 2^(i-1)) +- slack, where alpha is 1/2 except
    beta at the last level, and the slack is floor(eps k) at level 1 and
    floor(15 eps k) below.  The A-set factor is ``a_factor``.
    """
    if k < 4:
        raise ValueError(f"k={k} too small for a three-level split (need k >= 4)")
    out = []
    for i in range(1, levels + 1):
        m = k >> (i - 1)
        alpha = beta if i == levels else 0.5
        center = math.floor(alpha * k / 2 ** (i - 1) + 1e-9)
        slack = math.floor((epsilon if i == 1 else 15 * epsilon) * k + 1e-9)
        lo, hi = max(0, center - slack), min(m, center + slack)
        out.append(LevelPrediction(i, m, lo, hi, sum(math.comb(m, j) for j in range(lo, hi + 1))))
    return out


def a_factor(n: int, a_cap: int) -> int:
    """Number of split-node sets A with |A| <= a_cap in an n-vertex graph."""
    return sum(math.comb(n, j) for j in range(a_cap + 1))


def product_exponent(k: int, beta: float = BETA_STAR, levels: int = 3) -> float:
    """(1/k) * 1/2 * log2 of the exact nominal binomial product (floors on non-integer sizes)."""
    total = 0.0
    for p in predicted_search_sizes(k, beta, levels):
        total += math.log2(p.driver)
    return total / 2 / k
