"""Exact scalar arithmetic mod p and truncated (Laurent) power series.

Scalars are plain Python ints, always stored reduced into {0, ..., p-1}.
Series coefficients live in an arbitrary module: anything with +, scalar
multiplication and a zero test works (ints, EElement, SemiringElement, ...).
"""

from __future__ import annotations

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)


def check_prime(p: int) -> int:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"p must be one of {SUPPORTED_PRIMES}, got {p!r}")
    return p


def binom_mod_p(n: int, k: int, p: int) -> int:
    """Binomial coefficient C(n, k) mod p by Lucas' theorem.

    Convention: C(n, k) = n!/(k!(n-k)!) for 0 <= k <= n and 0 otherwise.
    """
    if k < 0 or n < 0 or k > n:
        return 0
    result = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        num, den = 1, 1
        for i in range(ki):
            num = (num * (ni - i)) % p
            den = (den * (i + 1)) % p
        result = (result * num * pow(den, p - 2, p)) % p
        n //= p
        k //= p
    return result % p


def multinom_mod_p(parts: tuple[int, ...], p: int) -> int:
    """(sum parts)! / prod(parts!) mod p, via iterated Lucas binomials."""
    total, result = 0, 1
    for part in parts:
        total += part
        result = (result * binom_mod_p(total, part, p)) % p
        if result == 0:
            return 0
    return result


def koszul_sign(left_degrees, right_degrees, p: int) -> int:
    """Sign (-1)^{|L||R|} for moving the block R past the block L, mod p.

    Always 1 when p = 2.
    """
    if p == 2:
        return 1
    t = sum(left_degrees) * sum(right_degrees)
    return (p - 1) if t % 2 else 1


def sign_to_scalar(sign: int, p: int) -> int:
    """Map a sign in {+1, -1} (or any int) into F_p."""
    return sign % p


class LaurentUnderflow(Exception):
    """A substitution produced exponents below the allowed Laurent bound."""


class TruncatedSeries:
    """Sparse truncated series in 1 or 2 formal variables.

    coeffs maps exponent tuples to module elements; every stored exponent
    tuple has total degree <= truncation.  Exponents may be negative down to
    ``low_exponent`` (a single integer bound applied per variable; only the
    shift -1 for the reindexed Bockstein-side series is needed in practice).
    """

    __slots__ = ("nvars", "coeffs", "truncation", "low_exponent")

    def __init__(self, nvars, coeffs, truncation, low_exponent=0):
        self.nvars = nvars
        self.truncation = truncation
        self.low_exponent = low_exponent
        clean = {}
        for exps, c in coeffs.items():
            if isinstance(exps, int):
                exps = (exps,)
            if len(exps) != nvars:
                raise ValueError("exponent arity mismatch")
            if any(e < low_exponent for e in exps):
                raise LaurentUnderflow(f"exponent {exps} below bound {low_exponent}")
            if sum(exps) <= truncation and not _is_zero(c):
                clean[exps] = c
        self.coeffs = clean

    # -- ring-ish structure ------------------------------------------------

    def __add__(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        coeffs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            coeffs[e] = coeffs[e] + c if e in coeffs else c
        return TruncatedSeries(self.nvars, coeffs,
                               min(self.truncation, other.truncation),
                               min(self.low_exponent, other.low_exponent))

    def scale(self, scalar_mul):
        """Apply a function to every coefficient."""
        return TruncatedSeries(
            self.nvars, {e: scalar_mul(c) for e, c in self.coeffs.items()},
            self.truncation, self.low_exponent)

    def multiply(self, other, mul):
        """Series product with coefficient products computed by ``mul(a, b)``.

        The formal variables are treated as degree-0 bookkeeping symbols, so
        no sign is introduced beyond what ``mul`` itself does.
        """
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        trunc = min(self.truncation, other.truncation)
        coeffs = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) > trunc:
                    continue
                prod = mul(c1, c2)
                coeffs[e] = coeffs[e] + prod if e in coeffs else prod
        return TruncatedSeries(self.nvars, coeffs, trunc,
                               self.low_exponent + other.low_exponent)

    # -- substitutions -----------------------------------------------------

    def shift(self, offset: int, var: int = 0):
        """Multiply by variable**offset (offset may be negative)."""
        coeffs = {}
        for e, c in self.coeffs.items():
            e2 = list(e)
            e2[var] += offset
            coeffs[tuple(e2)] = c
        low = min([self.low_exponent] + [min(e) for e in coeffs] or [0]) if coeffs else self.low_exponent
        return TruncatedSeries(self.nvars, coeffs, self.truncation, min(low, self.low_exponent + offset))

    def subst_power(self, k: int, var: int = 0):
        """Substitute variable -> variable**k."""
        if k <= 0:
            raise ValueError("power substitution needs k >= 1")
        coeffs = {}
        for e, c in self.coeffs.items():
            e2 = list(e)
            if e2[var] < 0 and e2[var] * k < self.low_exponent:
                raise LaurentUnderflow(f"exponent {e2[var] * k} below bound")
            e2[var] *= k
            if sum(e2) <= self.truncation:
                coeffs[tuple(e2)] = c
        return TruncatedSeries(self.nvars, coeffs, self.truncation, self.low_exponent)

    def subst_linear(self, c_scalar: int, p: int, scalar_mul, var: int = 0, out_nvars: int = 2):
        """Substitute variable ``var`` -> c*s + t, producing a 2-variable series.

        The source must be univariate with nonnegative exponents.  ``scalar_mul``
        multiplies a coefficient by an F_p scalar.
        """
        if self.nvars != 1:
            raise ValueError("linear substitution starts from a univariate series")
        coeffs = {}
        for (e,), coeff in self.coeffs.items():
            if e < 0:
                raise LaurentUnderflow("cannot expand negative power of a linear form")
            for j in range(e + 1):
                scal = (binom_mod_p(e, j, p) * pow(c_scalar, j, p)) % p
                if scal == 0:
                    continue
                key = (j, e - j)
                term = scalar_mul(coeff, scal)
                coeffs[key] = coeffs[key] + term if key in coeffs else term
        return TruncatedSeries(out_nvars, coeffs, self.truncation, 0)

    # -- access --------------------------------------------------------------

    def coefficient(self, *exps):
        return self.coeffs.get(tuple(exps), None)

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries) and self.nvars == other.nvars
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return f"TruncatedSeries({self.nvars} vars, {len(self.coeffs)} terms, trunc={self.truncation})"


def _is_zero(c) -> bool:
    if isinstance(c, int):
        return c == 0
    z = getattr(c, "is_zero", None)
    if z is not None:
        return z() if callable(z) else bool(z)
    return not c
