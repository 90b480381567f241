"""Real root isolation by Sturm sequences.

Distinct roots are counted with the Sturm chain of the square-free part, so a
root sitting exactly on an interval endpoint is handled by exact evaluation
rather than perturbation: V(lo) - V(hi) counts the roots in (lo, hi].
Multiplicities come from the square-free decomposition.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from .poly import PolyQ
from .rational import PolynomialError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RootInterval:
    """Interval (lo, hi] holding exactly one distinct real root."""

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint)


def sign_variations(values) -> int:
    """Count sign changes in a sequence, ignoring zeros."""
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:], strict=False) if s != t)


def square_free_part(p: PolyQ) -> PolyQ:
    g = p.gcd(p.derivative())
    return p.exact_div(g).monic()


def square_free_decomposition(p: PolyQ) -> list[tuple[PolyQ, int]]:
    """Factors g_k with p = lc * prod g_k^k, each g_k square-free and monic."""
    _, factors = p.to_sympy().sqf_list()
    return [(PolyQ.from_sympy(f).monic(), k) for f, k in factors]


class SturmChain:
    """Sturm sequence of the square-free part of a polynomial."""

    def __init__(self, p: PolyQ):
        if p.is_zero():
            raise PolynomialError("Sturm chain of the zero polynomial")
        self.poly = square_free_part(p)
        if self.poly.degree <= 0:
            self.chain = [self.poly]
        else:
            self.chain = [PolyQ.from_sympy(s) for s in self.poly.to_sympy().sturm()]

    def variations(self, x: Fraction) -> int:
        return sign_variations([s(x) for s in self.chain])

    def variations_at_infinity(self, sign: int) -> int:
        leads = [s.leading * (sign ** s.degree) for s in self.chain]
        return sign_variations(leads)

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Number of distinct real roots in (lo, hi]."""
        return self.variations(lo) - self.variations(hi)


def cauchy_bound(p: PolyQ) -> Fraction:
    """Every real root satisfies |x| < 1 + max |a_k / a_n|."""
    if p.degree <= 0:
        return Fraction(1)
    lead = abs(p.leading)
    return 1 + max(abs(c) / lead for c in p.coefficients[:-1])


def _bisect(chain: SturmChain, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    found = []
    stack = [(lo, hi, chain.count(lo, hi))]
    while stack:
        left, right, count = stack.pop()
        if count == 0:
            continue
        if count == 1:
            found.append((left, right))
            continue
        mid = (left + right) / 2
        n_left = chain.count(left, mid)
        stack.append((mid, right, count - n_left))
        stack.append((left, mid, n_left))
    return sorted(found)


def refine(chain: SturmChain, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink (lo, hi] around its single root until hi - lo <= width."""
    while hi - lo > width:
        mid = (lo + hi) / 2
        if chain.count(lo, mid) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def isolate_real_roots(
    p: PolyQ, lo: Fraction, hi: Fraction | None = None, width: Fraction | None = None
) -> list[RootInterval]:
    """Isolate every distinct real root of p in (lo, hi].

    Args:
        p: Nonzero polynomial
        lo: Open lower end of the search interval
        hi: Closed upper end; None means beyond every root (twice the Cauchy bound)
        width: Optional target width for each returned interval

    Returns:
        Disjoint RootIntervals in increasing order, each with the multiplicity
        of its root

    Raises:
        PolynomialError: If p is zero or the interval is empty
    """
    if p.is_zero():
        raise PolynomialError("cannot isolate roots of the zero polynomial")
    lo = Fraction(lo)
    hi = Fraction(hi) if hi is not None else max(lo, Fraction(0)) + 1 + 2 * cauchy_bound(p)
    if lo >= hi:
        raise PolynomialError(f"empty interval ({lo}, {hi}]")
    if p.degree == 0:
        return []

    chain = SturmChain(p)
    factor_chains = [(SturmChain(f), k) for f, k in square_free_decomposition(p) if f.degree > 0]

    roots = []
    for left, right in _bisect(chain, lo, hi):
        if width is not None:
            left, right = refine(chain, left, right, width)
        multiplicity = next(k for fc, k in factor_chains if fc.count(left, right) == 1)
        roots.append(RootInterval(left, right, multiplicity))
    logger.debug("isolated %d root(s) of degree-%d polynomial in (%s, %s]", len(roots), p.degree, lo, hi)
    return roots


def has_no_roots(p: PolyQ, lo: Fraction, hi: Fraction | None = None) -> bool:
    """True when p has no real root in (lo, hi] (hi=None: in (lo, infinity))."""
    if p.degree <= 0:
        return not p.is_zero()
    lo = Fraction(lo)
    chain = SturmChain(p)
    upper = chain.variations_at_infinity(1) if hi is None else chain.variations(Fraction(hi))
    return chain.variations(lo) - upper == 0


def positive_on(p: PolyQ, lo: Fraction, hi: Fraction | None = None) -> bool:
    """Certify p > 0 on the open interval (lo, hi) by exact root counting.

    With hi=None the interval is (lo, infinity) and the leading coefficient
    decides the sign beyond the last root.
    """
    if p.is_zero():
        return False
    lo = Fraction(lo)
    if hi is None:
        return has_no_roots(p, lo) and p.leading > 0
    hi = Fraction(hi)
    chain = SturmChain(p)
    # roots in (lo, hi) = roots in (lo, hi] minus a root at hi
    interior = chain.count(lo, hi) - (1 if p(hi) == 0 else 0)
    if interior:
        return False
    return p((lo + hi) / 2) > 0
