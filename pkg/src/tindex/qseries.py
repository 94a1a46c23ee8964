"""Truncated Laurent series in q^(1/2) with integer coefficients.

Exponents are stored doubled ("half units") so that all bookkeeping is integral:
an exponent of 3/2 is stored as 3.  A series carries its truncation order, i.e.
it is only known modulo q^order, and every operation propagates the tightest
order that is still valid.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product as _iproduct
from typing import Dict, Iterable, Iterator, Optional, Tuple, Union

Number = Union[int, Fraction]


class WindowError(ValueError):
    """Requested x-exponent lies outside the known window of a BiSeries."""


def half2(x) -> int:
    """Convert an exponent (int, Fraction, or "n/2" string) to doubled units."""
    if isinstance(x, str):
        x = Fraction(x)
    twice = Fraction(x) * 2
    if twice.denominator != 1:
        raise ValueError(f"exponent {x} is not a half-integer")
    return int(twice)


def from_half2(t: int) -> Fraction:
    return Fraction(t, 2)


def _fmt_exp(t2: int) -> str:
    f = Fraction(t2, 2)
    if f.denominator == 1:
        s = str(f.numerator)
        return s if f >= 0 else f"({s})"
    return f"({f.numerator}/{f.denominator})"


def _fmt_power(t2: int) -> str:
    if t2 == 2:
        return "q"
    return "q^" + _fmt_exp(t2)


class TruncatedQSeries:
    """An element of Z((q^(1/2))) known modulo q^order.

    ``offset2`` is the doubled exponent of ``coeffs[0]``; ``order2`` the doubled
    truncation order.  Instances are immutable and kept in canonical form (no
    leading zero coefficient; the zero series has no stored coefficients).
    """

    __slots__ = ("offset2", "coeffs", "order2")

    def __init__(self, offset2: int, coeffs: Iterable[int], order2: int):
        coeffs = list(coeffs)
        n = order2 - offset2
        if n < 0:
            coeffs, offset2 = [], order2
        elif len(coeffs) > n:
            del coeffs[n:]
        # strip leading zeros
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        if i == len(coeffs):
            offset2, coeffs = order2, []
        else:
            offset2 += i
            coeffs = coeffs[i:]
            # pad to dense length, trailing zeros are significant up to order
            coeffs.extend([0] * (order2 - offset2 - len(coeffs)))
        object.__setattr__(self, "offset2", offset2)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "order2", order2)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedQSeries is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Dict[Number, int], order: Number) -> "TruncatedQSeries":
        """Build from ``{exponent: coefficient}``; terms at or past order are dropped."""
        order2 = half2(order)
        terms2 = {half2(k): v for k, v in terms.items() if v}
        terms2 = {k: v for k, v in terms2.items() if k < order2}
        if not terms2:
            return cls(order2, [], order2)
        lo = min(terms2)
        coeffs = [0] * (order2 - lo)
        for k, v in terms2.items():
            coeffs[k - lo] += v
        return cls(lo, coeffs, order2)

    @classmethod
    def zero(cls, order: Number) -> "TruncatedQSeries":
        o = half2(order)
        return cls(o, [], o)

    @classmethod
    def one(cls, order: Number) -> "TruncatedQSeries":
        return cls.from_terms({0: 1}, order)

    @classmethod
    def monomial(cls, exp: Number, coeff: int, order: Number) -> "TruncatedQSeries":
        return cls.from_terms({exp: coeff}, order)

    @classmethod
    def polynomial_in_q(cls, coeffs, order: Number) -> "TruncatedQSeries":
        """Series with integer-exponent coefficients ``coeffs[i]`` at q^i."""
        return cls.from_terms({i: c for i, c in enumerate(coeffs)}, order)

    # -- inspection -------------------------------------------------------

    @property
    def order(self) -> Fraction:
        return Fraction(self.order2, 2)

    @property
    def offset(self) -> Fraction:
        return Fraction(self.offset2, 2)

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> Optional[Fraction]:
        """Least exponent with a nonzero coefficient, or None if zero up to order."""
        if not self.coeffs:
            return None
        return Fraction(self.offset2, 2)

    def coeff(self, exp: Number) -> int:
        t = half2(exp)
        if t >= self.order2:
            raise ValueError(f"coefficient of q^{exp} is beyond the truncation order {self.order}")
        i = t - self.offset2
        if i < 0:
            return 0
        return self.coeffs[i]

    def terms(self) -> Iterator[Tuple[Fraction, int]]:
        for i, c in enumerate(self.coeffs):
            if c:
                yield Fraction(self.offset2 + i, 2), c

    def terms2(self) -> Iterator[Tuple[int, int]]:
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.offset2 + i, c

    # -- arithmetic -------------------------------------------------------

    def truncate(self, order: Number) -> "TruncatedQSeries":
        return self._truncate2(half2(order))

    def _truncate2(self, order2: int) -> "TruncatedQSeries":
        if order2 > self.order2:
            raise ValueError("cannot raise the truncation order of a series")
        if order2 == self.order2:
            return self
        return TruncatedQSeries(self.offset2, self.coeffs, order2)

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncatedQSeries(0, [other], self.order2)
        if not isinstance(other, TruncatedQSeries):
            return NotImplemented
        order2 = min(self.order2, other.order2)
        lo = min(self.offset2, other.offset2, order2)
        out = [0] * (order2 - lo)
        for s in (self, other):
            base = s.offset2 - lo
            for i, c in enumerate(s.coeffs):
                j = base + i
                if j >= len(out):
                    break
                out[j] += c
        return TruncatedQSeries(lo, out, order2)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedQSeries(self.offset2, [-c for c in self.coeffs], self.order2)

    def __sub__(self, other):
        if isinstance(other, int):
            return self + (-other)
        if not isinstance(other, TruncatedQSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedQSeries(self.offset2, [other * c for c in self.coeffs], self.order2)
        if not isinstance(other, TruncatedQSeries):
            return NotImplemented
        va, vb = self.offset2, other.offset2
        order2 = min(self.order2 + vb, other.order2 + va)
        lo = va + vb
        n = order2 - lo
        if n <= 0 or not self.coeffs or not other.coeffs:
            return TruncatedQSeries(order2, [], order2)
        a, b = self.coeffs, other.coeffs
        out = [0] * n
        for i, ca in enumerate(a):
            if i >= n:
                break
            if ca == 0:
                continue
            lim = min(len(b), n - i)
            for j in range(lim):
                cb = b[j]
                if cb:
                    out[i + j] += ca * cb
        return TruncatedQSeries(lo, out, order2)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = TruncatedQSeries(0, [1], self.order2)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, h: Number, sign: int = 1) -> "TruncatedQSeries":
        """Multiply by ``sign * q^h``."""
        return self.shift2(half2(h), sign)

    def shift2(self, h2: int, sign: int = 1) -> "TruncatedQSeries":
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        coeffs = self.coeffs if sign == 1 else [-c for c in self.coeffs]
        return TruncatedQSeries(self.offset2 + h2, coeffs, self.order2 + h2)

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, TruncatedQSeries):
            return NotImplemented
        return (self.order2 == other.order2 and self.offset2 == other.offset2
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.offset2, self.coeffs, self.order2))

    def agrees_with(self, other: "TruncatedQSeries") -> bool:
        """Equality of the coefficients below the common truncation order."""
        o = min(self.order2, other.order2)
        return self._truncate2(o) == other._truncate2(o)

    def __str__(self):
        parts = []
        for t2, c in self.terms2():
            if t2 == 0:
                body = str(abs(c))
            elif abs(c) == 1:
                body = _fmt_power(t2)
            else:
                body = f"{abs(c)}*{_fmt_power(t2)}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        big_o = "O(1)" if self.order2 == 0 else f"O({_fmt_power(self.order2)})"
        if not parts:
            return big_o
        return "".join(parts) + " + " + big_o

    def __repr__(self):
        return f"TruncatedQSeries({self})"


def add(a: TruncatedQSeries, b: TruncatedQSeries) -> TruncatedQSeries:
    return a + b


def mul(a: TruncatedQSeries, b: TruncatedQSeries) -> TruncatedQSeries:
    return a * b


def monomial_shift(a: TruncatedQSeries, h: Number, sign: int = 1) -> TruncatedQSeries:
    return a.shift(h, sign)


def valuation(a: TruncatedQSeries) -> Optional[Fraction]:
    return a.valuation()


# --- q-Pochhammer symbols --------------------------------------------------

@lru_cache(maxsize=None)
def _poch_coeffs(n: int, nterms: int) -> Tuple[int, ...]:
    """Coefficients of (q)_n = prod_{i=1}^n (1 - q^i) below q^nterms."""
    out = [0] * nterms
    if nterms:
        out[0] = 1
    for i in range(1, n + 1):
        if i >= nterms:
            break
        for j in range(nterms - 1, i - 1, -1):
            out[j] -= out[j - i]
    return tuple(out)


@lru_cache(maxsize=None)
def inv_poch_coeffs(n: int, nterms: int) -> Tuple[int, ...]:
    """Coefficients of 1/(q)_n below q^nterms (integer exponents)."""
    n = min(n, nterms)  # factors (1 - q^i) with i >= nterms are invisible
    out = [0] * nterms
    if nterms:
        out[0] = 1
    for i in range(1, n + 1):
        for j in range(i, nterms):
            out[j] += out[j - i]
    return tuple(out)


def _int_exp_series(coeffs, order2: int) -> TruncatedQSeries:
    dense = [0] * max(order2, 0)
    for i, c in enumerate(coeffs):
        if 2 * i >= order2:
            break
        dense[2 * i] = c
    return TruncatedQSeries(0, dense, order2)


def pochhammer(n: int, order: Number) -> TruncatedQSeries:
    """(q)_n truncated at ``order``; n must be nonnegative."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    order2 = half2(order)
    nterms = max(0, (order2 + 1) // 2)
    return _int_exp_series(_poch_coeffs(n, nterms), order2)


def inv_pochhammer(n: int, order: Number) -> TruncatedQSeries:
    """1/(q)_n truncated at ``order``; n must be nonnegative."""
    if n < 0:
        raise ValueError("inv_pochhammer needs n >= 0")
    order2 = half2(order)
    nterms = max(0, (order2 + 1) // 2)
    return _int_exp_series(inv_poch_coeffs(n, nterms), order2)


# --- series in auxiliary variables x_1..x_k with q-series coefficients -----

Key = Tuple[int, ...]


def _key(k) -> Key:
    return (k,) if isinstance(k, int) else tuple(k)


class BiSeries:
    """Series in x-variables with truncated q-series coefficients.

    Coefficients are known for x-exponents inside the box ``lo..hi`` (inclusive,
    per variable).  All stored coefficients share the q-order ``q_order2``.
    When ``bounded_below`` is set the series has no terms below ``lo`` in any
    variable, which is what makes products well defined; two-sided expansions
    (such as the quantum dilogarithm) clear the flag and cannot be multiplied.
    Most uses have a single variable; keys are always tuples internally.
    """

    def __init__(self, terms: Dict[Key, TruncatedQSeries], lo, hi, q_order2: int,
                 bounded_below: bool = True):
        self.lo = _key(lo)
        self.hi = _key(hi)
        if len(self.lo) != len(self.hi):
            raise ValueError("window bounds have different arity")
        self.q_order2 = q_order2
        self.bounded_below = bounded_below
        clean = {}
        for k, s in terms.items():
            k = _key(k)
            if not self._inside(k):
                continue
            if s.order2 < q_order2:
                raise ValueError("coefficient known to lower order than the series")
            s = s._truncate2(q_order2)
            if not s.is_zero():
                clean[k] = s
        self.terms = clean

    @property
    def nvars(self) -> int:
        return len(self.lo)

    @property
    def q_order(self) -> Fraction:
        return Fraction(self.q_order2, 2)

    def _inside(self, k: Key) -> bool:
        return all(l <= x <= h for l, x, h in zip(self.lo, k, self.hi))

    def keys_in_window(self) -> Iterator[Key]:
        return _iproduct(*[range(l, h + 1) for l, h in zip(self.lo, self.hi)])

    def extract(self, k) -> TruncatedQSeries:
        k = _key(k)
        if len(k) != self.nvars or not self._inside(k):
            raise WindowError(f"x-exponent {k} outside window {self.lo}..{self.hi}")
        s = self.terms.get(k)
        if s is None:
            return TruncatedQSeries(self.q_order2, [], self.q_order2)
        return s

    def min_valuation2(self) -> int:
        if not self.terms:
            return self.q_order2
        return min(s.offset2 for s in self.terms.values())

    # -- linear operations ------------------------------------------------

    def __add__(self, other: "BiSeries") -> "BiSeries":
        if self.nvars != other.nvars:
            raise ValueError("arity mismatch")
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        bounded = self.bounded_below and other.bounded_below
        if bounded:
            # a series bounded below is known to vanish below its window
            lo = tuple(min(a, b) for a, b in zip(self.lo, other.lo))
        else:
            lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        order2 = min(self.q_order2, other.q_order2)
        out: Dict[Key, TruncatedQSeries] = {}
        for src in (self, other):
            for k, s in src.terms.items():
                s = s._truncate2(order2)
                out[k] = out[k] + s if k in out else s
        return BiSeries(out, lo, hi, order2, bounded)

    def __neg__(self):
        return BiSeries({k: -s for k, s in self.terms.items()}, self.lo, self.hi,
                        self.q_order2, self.bounded_below)

    def __sub__(self, other):
        return self + (-other)

    def mul_q(self, h2: int, sign: int = 1) -> "BiSeries":
        """Multiply every coefficient by ``sign * q^(h2/2)``."""
        return BiSeries({k: s.shift2(h2, sign) for k, s in self.terms.items()},
                        self.lo, self.hi, self.q_order2 + h2, self.bounded_below)

    def mul_x(self, k) -> "BiSeries":
        """Multiply by the monomial x^k."""
        k = _key(k)
        return BiSeries({tuple(a + b for a, b in zip(key, k)): s for key, s in self.terms.items()},
                        tuple(a + b for a, b in zip(self.lo, k)),
                        tuple(a + b for a, b in zip(self.hi, k)),
                        self.q_order2, self.bounded_below)

    def scale_x(self, c2: Tuple[int, ...]) -> "BiSeries":
        """Substitute x_j -> q^(c2[j]/2) x_j."""
        c2 = _key(c2)
        shifts = {}
        for key in self.keys_in_window():
            shifts[key] = sum(a * b for a, b in zip(key, c2))
        order2 = self.q_order2 + min(shifts.values())
        out = {k: s.shift2(shifts[k]) for k, s in self.terms.items()}
        return BiSeries({k: s._truncate2(order2) for k, s in out.items()},
                        self.lo, self.hi, order2, self.bounded_below)

    def substitute(self, images, hi) -> "BiSeries":
        """Substitute x_j -> monomial ``images[j]`` (an exponent tuple in new variables).

        Images must have nonnegative exponents; ``hi`` is the window of the result
        and the caller guarantees every unknown source term lands outside it.
        """
        images = [tuple(m) for m in images]
        nv = len(images[0])
        if not self.bounded_below:
            raise WindowError("substitution needs a series bounded below")
        out: Dict[Key, TruncatedQSeries] = {}
        for key, s in self.terms.items():
            new = tuple(sum(key[j] * images[j][i] for j in range(self.nvars)) for i in range(nv))
            out[new] = out[new] + s if new in out else s
        lo = tuple(sum(self.lo[j] * images[j][i] for j in range(self.nvars)) for i in range(nv))
        return BiSeries(out, lo, hi, self.q_order2, True)

    def restrict(self, lo, hi) -> "BiSeries":
        lo, hi = _key(lo), _key(hi)
        if any(a < b for a, b in zip(lo, self.lo)) or any(a > b for a, b in zip(hi, self.hi)):
            raise WindowError("restriction window exceeds the known window")
        bounded = self.bounded_below and lo == self.lo
        return BiSeries(self.terms, lo, hi, self.q_order2, bounded)

    def truncate_q(self, order2: int) -> "BiSeries":
        return BiSeries(self.terms, self.lo, self.hi, order2, self.bounded_below)

    def agrees_with(self, other: "BiSeries") -> bool:
        """Coefficientwise agreement on the common window, below the common q-order."""
        lo = tuple(max(a, b) for a, b in zip(self.lo, other.lo))
        hi = tuple(min(a, b) for a, b in zip(self.hi, other.hi))
        o = min(self.q_order2, other.q_order2)
        for key in _iproduct(*[range(l, h + 1) for l, h in zip(lo, hi)]):
            if self.extract(key)._truncate2(o) != other.extract(key)._truncate2(o):
                return False
        return True

    def __repr__(self):
        return (f"BiSeries(nvars={self.nvars}, window={self.lo}..{self.hi}, "
                f"q_order={self.q_order}, nterms={len(self.terms)})")


def bi_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    """Product of two series that are bounded below in every x-variable."""
    if a.nvars != b.nvars:
        raise ValueError("arity mismatch")
    if not (a.bounded_below and b.bounded_below):
        raise WindowError("products need series bounded below in x")
    lo = tuple(x + y for x, y in zip(a.lo, b.lo))
    hi = tuple(min(ah + bl, bh + al) for ah, al, bh, bl in zip(a.hi, a.lo, b.hi, b.lo))
    order2 = min(a.q_order2 + b.min_valuation2(), b.q_order2 + a.min_valuation2())
    out: Dict[Key, TruncatedQSeries] = {}
    for ka, sa in a.terms.items():
        for kb, sb in b.terms.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if any(x > h for x, h in zip(k, hi)):
                continue
            p = (sa * sb)._truncate2(order2)
            out[k] = out[k] + p if k in out else p
    return BiSeries(out, lo, hi, order2, True)


def bi_extract(a: BiSeries, k) -> TruncatedQSeries:
    return a.extract(k)


def bi_from_terms(terms: Dict, lo, hi, q_order: Number, bounded_below: bool = True) -> BiSeries:
    return BiSeries({_key(k): v for k, v in terms.items()}, lo, hi, half2(q_order), bounded_below)
