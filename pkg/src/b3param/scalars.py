"""Exact scalar backends.

Three fields are provided, all exact:

* ``PrimeField(p)`` -- residues mod a prime ``p = 1 (mod 6)``; elements are
  ``flint.nmod`` values.
* ``EisensteinField()`` -- the cyclotomic field Q(rho), rho^2 + rho + 1 = 0;
  elements are :class:`EisensteinNumber` with :class:`fractions.Fraction` parts.
* ``RationalField()`` -- plain Q, elements are ``Fraction``.  It carries no
  cube root of unity and is used for the linear-systems side only.

``DualField(base)`` adjoins ``eps`` with ``eps^2 = 0`` to any of them, which
gives exact forward-mode derivatives.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction
from functools import lru_cache

import flint

from .errors import BadResidue, FieldError, NotPrime

DEFAULT_PRIME = 2305843009213693951  # 2**61 - 1


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


def encode_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def decode_rational(text: str) -> Fraction:
    return Fraction(text.strip())


class EisensteinNumber:
    """``re + rho_coeff * rho`` with rational coordinates."""

    __slots__ = ("re", "rho_coeff")

    def __init__(self, re=0, rho_coeff=0):
        object.__setattr__(self, "re", _frac(re))
        object.__setattr__(self, "rho_coeff", _frac(rho_coeff))

    def __setattr__(self, name, value):
        raise AttributeError("EisensteinNumber is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, EisensteinNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return EisensteinNumber(other, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return EisensteinNumber(self.re + other.re, self.rho_coeff + other.rho_coeff)

    __radd__ = __add__

    def __neg__(self):
        return EisensteinNumber(-self.re, -self.rho_coeff)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return EisensteinNumber(self.re - other.re, self.rho_coeff - other.rho_coeff)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.rho_coeff, other.re, other.rho_coeff
        bd = b * d
        # rho^2 = -1 - rho
        return EisensteinNumber(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def conjugate(self):
        # complex conjugation sends rho to rho^2 = -1 - rho
        return EisensteinNumber(self.re - self.rho_coeff, -self.rho_coeff)

    def norm(self) -> Fraction:
        a, b = self.re, self.rho_coeff
        return a * a - a * b + b * b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(rho)")
        c = self.conjugate()
        return EisensteinNumber(c.re / n, c.rho_coeff / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = EisensteinNumber(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.re == other.re and self.rho_coeff == other.rho_coeff

    def __hash__(self):
        if self.rho_coeff == 0:
            return hash(self.re)
        return hash((self.re, self.rho_coeff))

    def __bool__(self):
        return bool(self.re) or bool(self.rho_coeff)

    def __repr__(self):
        return f"EisensteinNumber({self.re}, {self.rho_coeff})"

    def __str__(self):
        return encode_eisenstein(self)


def encode_eisenstein(x: EisensteinNumber) -> str:
    return f"{encode_rational(x.re)}+{encode_rational(x.rho_coeff)}*r"


_EIS_RE = re.compile(r"^\s*([^+]+)\+(.+)\*r\s*$")


def decode_eisenstein(text: str) -> EisensteinNumber:
    m = _EIS_RE.match(text)
    if m is None:
        # a bare rational is accepted too
        return EisensteinNumber(decode_rational(text), 0)
    return EisensteinNumber(decode_rational(m.group(1)), decode_rational(m.group(2)))


class DualNumber:
    """``value + derivative * eps`` with ``eps^2 = 0``.

    Works over any element type supporting ``+ - * /`` (nmod, Fraction,
    EisensteinNumber).
    """

    __slots__ = ("value", "derivative")

    def __init__(self, value, derivative=0):
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "derivative", derivative)

    def __setattr__(self, name, value):
        raise AttributeError("DualNumber is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, DualNumber):
            return other
        return DualNumber(other, 0 * other)

    def __add__(self, other):
        other = self._coerce(other)
        return DualNumber(self.value + other.value, self.derivative + other.derivative)

    __radd__ = __add__

    def __neg__(self):
        return DualNumber(-self.value, -self.derivative)

    def __sub__(self, other):
        other = self._coerce(other)
        return DualNumber(self.value - other.value, self.derivative - other.derivative)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        return DualNumber(
            self.value * other.value,
            self.value * other.derivative + self.derivative * other.value,
        )

    __rmul__ = __mul__

    def inverse(self):
        if not self.value:
            raise ZeroDivisionError("dual number with zero value part is not invertible")
        inv = 1 / self.value
        return DualNumber(inv, -(inv * inv) * self.derivative)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = DualNumber(1 + 0 * self.value, 0 * self.value)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, DualNumber):
            other = DualNumber(other, 0)
        return self.value == other.value and self.derivative == other.derivative

    def __hash__(self):
        return hash((self.value, self.derivative))

    def __bool__(self):
        return bool(self.value) or bool(self.derivative)

    def __repr__(self):
        return f"DualNumber({self.value}, {self.derivative})"


# --------------------------------------------------------------------------
# field descriptors


class Field:
    """Common interface of the scalar backends."""

    spec: str
    characteristic: int
    is_prime = False

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def __call__(self, x):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return not x

    def is_unit(self, x) -> bool:
        return bool(x)

    def inv(self, x):
        return 1 / x

    @property
    def has_rho(self) -> bool:
        return True

    @property
    def rho(self):
        raise FieldError(f"{self.spec} has no primitive cube root of unity")

    def random(self, rng):
        raise NotImplementedError

    def encode(self, x) -> str:
        raise NotImplementedError

    def decode(self, text: str):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Field) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec}>"


class PrimeField(Field):
    is_prime = True

    def __init__(self, p: int, cube_root: int):
        self.p = p
        self.modulus = p
        self.characteristic = p
        self.cube_root = cube_root
        self.spec = f"fp:{p}"

    def __call__(self, x):
        if isinstance(x, flint.nmod):
            if x.modulus() != self.p:
                raise FieldError("element belongs to a different prime field")
            return x
        if isinstance(x, Fraction):
            return flint.nmod(x.numerator, self.p) / x.denominator
        return flint.nmod(int(x), self.p)

    @property
    def rho(self):
        return flint.nmod(self.cube_root, self.p)

    def random(self, rng):
        return flint.nmod(rng.below(self.p), self.p)

    def random_nonzero(self, rng):
        return flint.nmod(1 + rng.below(self.p - 1), self.p)

    def encode(self, x) -> str:
        return str(int(self(x)))

    def decode(self, text: str):
        return flint.nmod(int(text), self.p)


class EisensteinField(Field):
    """Q(rho).  Random elements have small integer coordinates."""

    characteristic = 0
    spec = "qrho"

    def __init__(self, bound: int = 50):
        self.bound = bound

    def __call__(self, x):
        if isinstance(x, EisensteinNumber):
            return x
        return EisensteinNumber(x, 0)

    @property
    def rho(self):
        return EisensteinNumber(0, 1)

    def random(self, rng):
        b = self.bound
        return EisensteinNumber(rng.randint(-b, b), rng.randint(-b, b))

    def random_nonzero(self, rng):
        while True:
            x = self.random(rng)
            if x:
                return x

    def encode(self, x) -> str:
        return encode_eisenstein(self(x))

    def decode(self, text: str):
        return decode_eisenstein(text)


class RationalField(Field):
    characteristic = 0
    spec = "q"

    def __init__(self, bound: int = 50):
        self.bound = bound

    def __call__(self, x):
        return _frac(x)

    @property
    def has_rho(self) -> bool:
        return False

    def random(self, rng):
        return Fraction(rng.randint(-self.bound, self.bound))

    def random_nonzero(self, rng):
        while True:
            x = self.random(rng)
            if x:
                return x

    def encode(self, x) -> str:
        return encode_rational(self(x))

    def decode(self, text: str):
        return decode_rational(text)


class DualField(Field):
    """``base[eps] / (eps^2)``; units are the elements with a nonzero value part."""

    def __init__(self, base: Field):
        if isinstance(base, DualField):
            raise FieldError("nested dual numbers are not supported")
        self.base = base
        self.characteristic = base.characteristic
        self.spec = f"dual({base.spec})"

    def __call__(self, x):
        if isinstance(x, DualNumber):
            return x
        return DualNumber(self.base(x), self.base.zero)

    def is_unit(self, x) -> bool:
        return bool(self(x).value)

    def inv(self, x):
        return self(x).inverse()

    @property
    def has_rho(self) -> bool:
        return self.base.has_rho

    @property
    def rho(self):
        return DualNumber(self.base.rho, self.base.zero)

    def random(self, rng):
        return DualNumber(self.base.random(rng), self.base.random(rng))

    def encode(self, x) -> str:
        x = self(x)
        return f"{self.base.encode(x.value)}|{self.base.encode(x.derivative)}"

    def decode(self, text: str):
        v, d = text.split("|")
        return DualNumber(self.base.decode(v), self.base.decode(d))


# --------------------------------------------------------------------------
# construction helpers


def is_prime(n: int) -> bool:
    return n >= 2 and flint.fmpz(n).is_prime()


def primitive_cube_root(p: int) -> int:
    """Smaller of the two primitive cube roots of unity mod ``p``."""
    g = 2
    while True:
        r = pow(g, (p - 1) // 3, p)
        if r != 1:
            return min(r, r * r % p)
        g += 1


@lru_cache(maxsize=None)
def make_prime_field(p: int) -> PrimeField:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p % 6 != 1:
        raise BadResidue(f"{p} mod 6 = {p % 6}; need p = 1 (mod 6)")
    return PrimeField(p, primitive_cube_root(p))


def rho_of(field: Field):
    return field.rho


def default_prime() -> int:
    env = os.environ.get("BRAID_DEFAULT_PRIME")
    return int(env) if env else DEFAULT_PRIME


def default_field() -> PrimeField:
    return make_prime_field(default_prime())


def parse_field(spec: str) -> Field:
    """``fp:P``, ``fp`` (default prime), ``qrho`` or ``q``."""
    spec = spec.strip()
    if spec == "qrho":
        return EisensteinField()
    if spec == "q":
        return RationalField()
    if spec == "fp":
        return default_field()
    if spec.startswith("fp:"):
        return make_prime_field(int(spec[3:]))
    if spec.startswith("dual(") and spec.endswith(")"):
        return DualField(parse_field(spec[5:-1]))
    raise FieldError(f"unknown field spec {spec!r}")
