"""Exact multivariate Laurent polynomial arithmetic over the rationals.

A polynomial lives in a ring with one base variable (z in the U frame, xi in
the V frame) that may carry negative exponents, ``fibers`` fiber variables
(u1..uf / v1..vf) and ``params`` deformation parameters (t1..tp), both
restricted to nonnegative exponents.  Terms are stored as a dict mapping flat
exponent tuples ``(base, fib_1..fib_f, par_1..par_p)`` to ``Fraction``
coefficients; zero coefficients are never stored, so structural equality is
polynomial equality.

Coefficients are exact rationals throughout.  No floating point enters any
computation in this package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

Exponent = Tuple[int, ...]

U_FRAME = "U"
V_FRAME = "V"


class SignatureError(ValueError):
    """Mixed-ring or mixed-frame arithmetic."""


class NonUnitSubstitution(ValueError):
    """Base variable substituted by something other than an invertible monomial."""


class SeriesDomainError(ValueError):
    """Series expansion argument outside the truncatable domain."""


@dataclass(frozen=True)
class RingSig:
    """Ring signature: fiber count, parameter count and chart frame tag.

    The frame tag makes cross-frame arithmetic a type error instead of a
    silent reinterpretation; the chart maps are the only sanctioned bridge.
    """

    fibers: int
    params: int = 0
    frame: str = U_FRAME

    def __post_init__(self):
        if self.fibers < 0 or self.params < 0:
            raise ValueError("fiber and parameter counts must be >= 0")
        if self.frame not in (U_FRAME, V_FRAME):
            raise ValueError(f"unknown frame {self.frame!r}")

    @property
    def nvars(self) -> int:
        return 1 + self.fibers + self.params

    def var_names(self) -> Tuple[str, ...]:
        if self.frame == U_FRAME:
            base = "z"
            fib = ["u"] if self.fibers == 1 else [f"u{i+1}" for i in range(self.fibers)]
        else:
            base = "xi"
            fib = ["v"] if self.fibers == 1 else [f"v{i+1}" for i in range(self.fibers)]
        par = [f"t{i+1}" for i in range(self.params)]
        return tuple([base] + fib + par)

    def var_index(self, name: str) -> int:
        try:
            return self.var_names().index(name)
        except ValueError:
            raise KeyError(f"variable {name!r} not in ring {self}") from None

    def opposite(self) -> "RingSig":
        other = V_FRAME if self.frame == U_FRAME else U_FRAME
        return RingSig(self.fibers, self.params, other)

    def drop_params(self) -> "RingSig":
        return RingSig(self.fibers, 0, self.frame)


def _as_fraction(c) -> Fraction:
    if isinstance(c, float):
        raise TypeError("floating point coefficients are forbidden")
    return Fraction(c)


class LaurentPoly:
    """Immutable exact Laurent polynomial attached to a :class:`RingSig`."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: RingSig, terms: Mapping[Exponent, Fraction]):
        clean: Dict[Exponent, Fraction] = {}
        n = ring.nvars
        for exp, coeff in terms.items():
            coeff = _as_fraction(coeff)
            if coeff == 0:
                continue
            if len(exp) != n:
                raise ValueError(f"exponent tuple {exp} has wrong arity for {ring}")
            if any(e < 0 for e in exp[1:]):
                raise ValueError(f"negative fiber/parameter exponent in {exp}")
            clean[tuple(exp)] = coeff
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(ring: RingSig) -> "LaurentPoly":
        return LaurentPoly(ring, {})

    @staticmethod
    def const(ring: RingSig, c) -> "LaurentPoly":
        return LaurentPoly(ring, {(0,) * ring.nvars: _as_fraction(c)})

    @staticmethod
    def monomial(ring: RingSig, exp: Sequence[int], coeff=1) -> "LaurentPoly":
        return LaurentPoly(ring, {tuple(exp): _as_fraction(coeff)})

    @staticmethod
    def var(ring: RingSig, name_or_index, power: int = 1) -> "LaurentPoly":
        idx = name_or_index if isinstance(name_or_index, int) else ring.var_index(name_or_index)
        exp = [0] * ring.nvars
        exp[idx] = power
        return LaurentPoly.monomial(ring, exp)

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if not isinstance(other, LaurentPoly):
            raise TypeError(f"expected LaurentPoly, got {type(other).__name__}")
        if other.ring != self.ring:
            raise SignatureError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.ring, other)
        self._check(other)
        out = dict(self.terms)
        for exp, c in other.terms.items():
            out[exp] = out.get(exp, Fraction(0)) + c
        return LaurentPoly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.ring, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _as_fraction(other)
            return LaurentPoly(self.ring, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return LaurentPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            if not self.is_unit():
                raise NonUnitSubstitution("negative power of a non-unit polynomial")
            (exp, coeff), = self.terms.items()
            return LaurentPoly.monomial(
                self.ring, tuple(e * n for e in exp), Fraction(1) / coeff ** (-n)
            )
        result = LaurentPoly.const(self.ring, 1)
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(self.ring, other)
        return (
            isinstance(other, LaurentPoly)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- structure queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """Single term with no fiber or parameter content (invertible)."""
        if len(self.terms) != 1:
            return False
        (exp,) = list(self.terms)
        return all(e == 0 for e in exp[1:])

    def sorted_terms(self):
        """Terms in the canonical monomial order: lex on (base, fibers, params)."""
        return sorted(self.terms.items())

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def base_range(self) -> Tuple[int, int]:
        """(min, max) base-variable exponent; (0, 0) for the zero polynomial."""
        if not self.terms:
            return (0, 0)
        exps = [e[0] for e in self.terms]
        return (min(exps), max(exps))

    def fiber_degree(self, exp: Exponent) -> int:
        f = self.ring.fibers
        return sum(exp[1 : 1 + f])

    def min_fiber_degree(self) -> int:
        if not self.terms:
            return 0
        return min(self.fiber_degree(e) for e in self.terms)

    def max_fiber_degree(self) -> int:
        if not self.terms:
            return 0
        return max(self.fiber_degree(e) for e in self.terms)

    def min_var_degree(self, idx: int) -> int:
        if not self.terms:
            return 0
        return min(e[idx] for e in self.terms)

    def max_var_degree(self, idx: int) -> int:
        if not self.terms:
            return 0
        return max(e[idx] for e in self.terms)

    def fiber_component(self, degree: int) -> "LaurentPoly":
        """Part of the polynomial with total fiber degree exactly ``degree``."""
        return LaurentPoly(
            self.ring,
            {e: c for e, c in self.terms.items() if self.fiber_degree(e) == degree},
        )

    def truncate_fiber(self, cutoff: int) -> "LaurentPoly":
        return LaurentPoly(
            self.ring,
            {e: c for e, c in self.terms.items() if self.fiber_degree(e) <= cutoff},
        )

    # -- homomorphisms -----------------------------------------------------

    def substitute(
        self, images: Mapping[int, "LaurentPoly"], target: Optional[RingSig] = None
    ) -> "LaurentPoly":
        """Apply the ring homomorphism sending variable i to ``images[i]``.

        The base variable image must be a unit (an invertible monomial),
        because base exponents may be negative.  Unmapped variables are sent
        to the same-index variable of the target ring.
        """
        if target is None:
            rings = {p.ring for p in images.values()}
            if len(rings) != 1:
                raise SignatureError("cannot infer target ring for substitution")
            target = rings.pop()
        full: Dict[int, LaurentPoly] = {}
        for i in range(self.ring.nvars):
            if i in images:
                img = images[i]
                if img.ring != target:
                    raise SignatureError("substitution image in wrong ring")
                full[i] = img
            else:
                if i >= target.nvars:
                    raise SignatureError("variable has no image in target ring")
                full[i] = LaurentPoly.var(target, i)
        if not full[0].is_unit():
            raise NonUnitSubstitution(
                f"base variable image must be an invertible monomial, got {full[0]}"
            )
        out = LaurentPoly.zero(target)
        power_cache: Dict[Tuple[int, int], LaurentPoly] = {}

        def pw(i: int, e: int) -> LaurentPoly:
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = full[i] ** e
            return power_cache[key]

        for exp, coeff in self.terms.items():
            term = LaurentPoly.const(target, coeff)
            for i, e in enumerate(exp):
                if e != 0:
                    term = term * pw(i, e)
            out = out + term
        return out

    def partial(self, idx: int) -> "LaurentPoly":
        """Exact partial derivative with respect to variable ``idx``."""
        out: Dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            e = exp[idx]
            if e == 0:
                continue
            if idx > 0 and e - 1 < 0:  # cannot happen: fiber exponents >= 0
                raise ValueError("derivative produced a negative fiber exponent")
            new = list(exp)
            new[idx] = e - 1
            key = tuple(new)
            out[key] = out.get(key, Fraction(0)) + coeff * e
        return LaurentPoly(self.ring, out)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        """Exact evaluation; base value must be nonzero."""
        vals = [_as_fraction(v) for v in values]
        if len(vals) != self.ring.nvars:
            raise ValueError("wrong number of evaluation values")
        if vals[0] == 0:
            raise ZeroDivisionError("base variable evaluated at 0")
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = coeff
            for v, e in zip(vals, exp):
                if e:
                    term *= v ** e
            total += term
        return total

    def restrict_fibers_zero(self) -> "LaurentPoly":
        """Set every fiber variable to zero (keep base and parameters)."""
        f = self.ring.fibers
        out: Dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            if any(exp[1 + i] for i in range(f)):
                continue
            out[exp] = coeff
        return LaurentPoly(self.ring, out)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.var_names()
        pieces = []
        for exp, coeff in self.sorted_terms():
            factors = []
            for name, e in zip(names, exp):
                if e == 0:
                    continue
                factors.append(name if e == 1 else f"{name}^{e}")
            mono = "*".join(factors)
            c = coeff
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"<{self.ring.frame}:{self}>"


def exp_trunc(arg: LaurentPoly, fiber_cutoff: int) -> LaurentPoly:
    """Truncated exponential series sum_{n<=N} arg^n / n!.

    Every term of ``arg`` must have total fiber degree >= 1 and a nonnegative
    base exponent; then arg^n has fiber degree >= n and the truncation to
    total fiber degree <= ``fiber_cutoff`` is exact.
    """
    if fiber_cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    for exp in arg.terms:
        if arg.fiber_degree(exp) < 1:
            raise SeriesDomainError(
                "series argument has a fiber-free term; truncation undefined"
            )
        if exp[0] < 0:
            raise SeriesDomainError("series argument has a negative base exponent")
    result = LaurentPoly.const(arg.ring, 1)
    power = LaurentPoly.const(arg.ring, 1)
    factorial = 1
    for n in range(1, fiber_cutoff + 1):
        power = (power * arg).truncate_fiber(fiber_cutoff)
        factorial *= n
        result = result + power * Fraction(1, factorial)
    return result
