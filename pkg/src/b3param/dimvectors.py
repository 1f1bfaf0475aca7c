"""Dimension vectors of components and of the local quiver.

A component of the semisimple representation variety is labelled by
``sigma = (a, b; x, y, z)``: eigenvalue multiplicities of ``s`` (``a`` for +1,
``b`` for -1) and of ``t`` (``x, y, z`` for 1, rho^2, rho).  The local quiver
at the semisimple point ``M0`` has nine vertices; its dimension vector ``tau``
records how many copies of each simple factor ``M0`` contains.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConstraintViolation, UnsupportedComponent


@dataclass(frozen=True)
class SigmaVector:
    a: int
    b: int
    x: int
    y: int
    z: int

    @property
    def n(self) -> int:
        return self.a + self.b

    def as_tuple(self):
        return (self.a, self.b, self.x, self.y, self.z)

    def __str__(self):
        return f"{self.a},{self.b}:{self.x},{self.y},{self.z}"


TAU_LABELS = ("a1", "a2", "a3", "a4", "a5", "a6", "b_alpha", "b_beta", "b_gamma")


@dataclass(frozen=True)
class TauVector:
    a1: int
    a2: int
    a3: int
    a4: int
    a5: int
    a6: int
    b_alpha: int
    b_beta: int
    b_gamma: int

    def as_tuple(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a5, self.a6,
                self.b_alpha, self.b_beta, self.b_gamma)

    def as_dict(self):
        return dict(zip(TAU_LABELS, self.as_tuple()))

    def __str__(self):
        t = self.as_tuple()
        return "(" + ",".join(map(str, t[:6])) + " | " + ",".join(map(str, t[6:])) + ")"


@dataclass(frozen=True)
class CaseGreater:
    """``a > b``."""
    d: int
    e: int
    f: int
    g: int
    h: int

    name = "a>b"


@dataclass(frozen=True)
class CaseEqualOdd:
    """``a = b`` and ``c = x + y + 1 - a`` odd."""
    c: int
    d: int
    e: int
    f: int
    g: int
    h: int

    name = "a=b,c odd"


@dataclass(frozen=True)
class CaseEqualEven:
    """``a = b`` and ``c = x + y + 1 - a`` even."""
    c: int
    e: int
    f: int
    g: int
    h: int

    name = "a=b,c even"


ComponentCase = CaseGreater | CaseEqualOdd | CaseEqualEven


def validate_sigma(a, b, x, y, z) -> SigmaVector:
    values = dict(a=a, b=b, x=x, y=y, z=z)
    for name, v in values.items():
        if not isinstance(v, int) or v < 0:
            raise ConstraintViolation(f"{name} = {v!r} is not a nonnegative integer")
    if a + b != x + y + z:
        raise ConstraintViolation(f"a+b = {a + b} != x+y+z = {x + y + z}")
    if a + b == 0:
        raise ConstraintViolation("n = 0")
    if b > a:
        raise ConstraintViolation(f"b <= a fails ({b} > {a})")
    if x != max(x, y, z):
        raise ConstraintViolation(f"x = max(x,y,z) fails (x={x}, y={y}, z={z})")
    if x > b:
        raise ConstraintViolation(f"x <= b fails ({x} > {b})")
    return SigmaVector(a, b, x, y, z)


def parse_sigma(text: str) -> SigmaVector:
    """``"a,b:x,y,z"`` (``;`` accepted in place of ``:``)."""
    text = text.strip().strip("()").replace(";", ":")
    try:
        left, right = text.split(":")
        a, b = (int(v) for v in left.split(","))
        x, y, z = (int(v) for v in right.split(","))
    except ValueError:
        raise ConstraintViolation(f"cannot parse sigma {text!r}; expected a,b:x,y,z") from None
    return validate_sigma(a, b, x, y, z)


def n_sigma(sigma: SigmaVector) -> int:
    n = sigma.n
    return 1 + n * n - sum(v * v for v in sigma.as_tuple())


def enumerate_components(n: int) -> list[SigmaVector]:
    """Every admissible sigma with ``a + b = n``, in descending lexicographic order."""
    out = []
    for a in range(n, -1, -1):
        b = n - a
        if b > a:
            continue
        for x in range(min(b, n), -1, -1):
            for y in range(x, -1, -1):
                z = n - x - y
                if 0 <= z <= x:
                    out.append(SigmaVector(a, b, x, y, z))
    return out


def tau_for(sigma: SigmaVector) -> tuple[TauVector, ComponentCase]:
    a, b, x, y, z = sigma.as_tuple()
    if a > b:
        d = a - b
        e = d - 1
        f, g, h = b - z, b - y, b - x
        case = CaseGreater(d, e, f, g, h)
        tau = (d, e, e, 0, 1, 1, f, g, h)
        named = dict(d=d, e=e, f=f, g=g, h=h)
    else:
        c = x + y + 1 - a
        g, h = a - y - 1, a - x
        if c % 2:
            d = (c - 1) // 2
            e, f = d + 1, d - 1
            case = CaseEqualOdd(c, d, e, f, g, h)
            tau = (e, e, 1, d, f, 0, 0, g, h)
            named = dict(c=c, d=d, e=e, f=f, g=g, h=h)
        else:
            e = c // 2
            f = e - 1
            case = CaseEqualEven(c, e, f, g, h)
            tau = (e, e, 1, e, f, 0, 0, g, h)
            named = dict(c=c, e=e, f=f, g=g, h=h)
    negative = [f"{k} = {v}" for k, v in named.items() if v < 0]
    if negative:
        reason = ", ".join(negative)
        raise UnsupportedComponent(f"sigma {sigma}: {reason}", reason=reason)
    tv = TauVector(*tau)
    assert check_tau_type(tv, sigma)
    return tv, case


def sigma_of_tau(tau: TauVector) -> SigmaVector:
    """The sigma a semisimple point with multiplicities ``tau`` lies in (unvalidated)."""
    a1, a2, a3, a4, a5, a6, ba, bb, bg = tau.as_tuple()
    common = ba + bb + bg
    return SigmaVector(
        a1 + a3 + a5 + common,
        a2 + a4 + a6 + common,
        a1 + a4 + ba + bb,
        a2 + a5 + ba + bg,
        a3 + a6 + bb + bg,
    )


def check_tau_type(tau: TauVector, sigma: SigmaVector) -> bool:
    # every two-dimensional simple contributes one to both a and b
    return sigma_of_tau(tau).as_tuple() == sigma.as_tuple()
