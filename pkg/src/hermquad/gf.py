"""Exact arithmetic in GF(q) and GF(q^2) = GF(q)[e], q odd.

GF(q) is built as GF(p)[t]/(m(t)) with ``m`` the least monic irreducible
polynomial of degree ``k``.  Its elements are stored as integer codes
``sum(c_i * p**i)``.  GF(q^2) uses the basis {1, e} with e^2 = nu, nu a
primitive element of GF(q); an element x0 + x1*e has code ``x0 + q*x1``.

"Least" always refers to the documented element ordering: coefficient
vectors compared lexicographically, lowest degree first (and x0 before x1
in GF(q^2)).
"""

from __future__ import annotations

import functools
import itertools
import os
import re
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidField, SizeLimit

DEFAULT_MAX_Q = 128
MAX_Q_ENV = "HERMQUAD_MAX_Q"
# exhaustive square roots below this q, Tonelli-Shanks above
SQRT_EXHAUSTIVE_MAX_Q = 11


def max_q() -> int:
    raw = os.environ.get(MAX_Q_ENV)
    return int(raw) if raw else DEFAULT_MAX_Q


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def split_prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p**k, raising InvalidField otherwise."""
    if q < 2:
        raise InvalidField(f"q={q} is not a prime power")
    factors = _prime_factors(q)
    if len(factors) != 1:
        raise InvalidField(f"q={q} is not a prime power")
    p = factors[0]
    k = 0
    while q > 1:
        q //= p
        k += 1
    return p, k


# -- polynomials over GF(p), coefficient lists lowest degree first ----------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    m = _poly_trim(list(m))
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        _poly_trim(a)
    return a


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg//2."""
    deg = len(modulus) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _poly_mod(modulus, list(low) + [1], p) == []:
                return False
    return True


def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=k):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable


# -- elements ----------------------------------------------------------------

class FqElem:
    """Element of GF(q)."""

    __slots__ = ("field", "code")

    def __init__(self, field: "FieldParams", code: int):
        self.field = field
        self.code = int(code)

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.fq_coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FqElem):
            return other.code
        if isinstance(other, int):
            return self.field.int_code(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        f = self.field
        return FqElem(f, f._add[self.code * f.q + o])

    __radd__ = __add__

    def __neg__(self):
        return FqElem(self.field, self.field._neg[self.code])

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        f = self.field
        return FqElem(f, f._add[self.code * f.q + f._neg[o]])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        f = self.field
        return FqElem(f, f._mul[self.code * f.q + o])

    __rmul__ = __mul__

    def inverse(self) -> "FqElem":
        if self.code == 0:
            raise ZeroDivisionError("inverse of 0 in GF(q)")
        return FqElem(self.field, self.field._inv[self.code])

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * FqElem(self.field, o).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> "FqElem":
        f = self.field
        if n < 0:
            return self.inverse() ** (-n)
        acc, base = 1, self.code
        while n:
            if n & 1:
                acc = f._mul[acc * f.q + base]
            base = f._mul[base * f.q + base]
            n >>= 1
        return FqElem(f, acc)

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FqElem):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.int_code(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("Fq", self.field.q, self.code))

    def __repr__(self) -> str:
        return f"FqElem({self.field.format_fq(self.code)})"

    def __str__(self) -> str:
        return self.field.format_fq(self.code)


class Fq2Elem:
    """Element x0 + x1*e of GF(q^2)."""

    __slots__ = ("field", "code")

    def __init__(self, field: "FieldParams", code: int):
        self.field = field
        self.code = int(code)

    @property
    def x0(self) -> FqElem:
        return FqElem(self.field, self.code % self.field.q)

    @property
    def x1(self) -> FqElem:
        return FqElem(self.field, self.code // self.field.q)

    def _other(self, other) -> int:
        if isinstance(other, Fq2Elem):
            return other.code
        if isinstance(other, FqElem):
            return other.code
        if isinstance(other, int):
            return self.field.int_code(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fq2Elem(self.field, self.field.add2(self.code, o))

    __radd__ = __add__

    def __neg__(self):
        return Fq2Elem(self.field, self.field.neg2(self.code))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        f = self.field
        return Fq2Elem(f, f.add2(self.code, f.neg2(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fq2Elem(self.field, self.field.mul2(self.code, o))

    __rmul__ = __mul__

    def inverse(self) -> "Fq2Elem":
        return Fq2Elem(self.field, self.field.inv2(self.code))

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        f = self.field
        return Fq2Elem(f, f.mul2(self.code, f.inv2(o)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> "Fq2Elem":
        return Fq2Elem(self.field, self.field.pow2(self.code, n))

    def frobenius(self) -> "Fq2Elem":
        return Fq2Elem(self.field, self.field.frob2(self.code))

    def norm(self) -> FqElem:
        return FqElem(self.field, self.field.norm2(self.code))

    def trace(self) -> FqElem:
        f = self.field
        c0 = self.code % f.q
        return FqElem(f, f._add[c0 * f.q + c0])

    def in_base_field(self) -> bool:
        return self.code < self.field.q

    def __bool__(self) -> bool:
        return self.code != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Fq2Elem):
            return self.field is other.field and self.code == other.code
        if isinstance(other, FqElem):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field.int_code(other)
        return NotImplemented

    def __hash__(self) -> int:
        # GF(q) elements hash like their embedding
        if self.code < self.field.q:
            return hash(("Fq", self.field.q, self.code))
        return hash(("Fq2", self.field.q, self.code))

    def __repr__(self) -> str:
        return f"Fq2Elem({self.field.format_fq2(self.code)})"

    def __str__(self) -> str:
        return self.field.format_fq2(self.code)


# -- the field context ---------------------------------------------------------

class FieldParams:
    """GF(q) and GF(q^2) for one odd prime power q, with lookup tables.

    Built by :func:`field_setup`; instances are cached and immutable.
    """

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.q = q = p**k
        self.modulus = least_irreducible(p, k)
        self._build_fq_tables()
        self.fq_order = tuple(sorted(range(q), key=self.fq_coeffs))
        self._rank = [0] * q
        for i, c in enumerate(self.fq_order):
            self._rank[c] = i
        self.fq2_order = tuple(
            c0 + q * c1 for c0 in self.fq_order for c1 in self.fq_order
        )
        self.nu_code = self._least_primitive_fq()
        self.eps_code = q  # 0 + 1*e
        self.beta_code = self._least_primitive_fq2()
        self._build_fq2_tables()

    # construction ----------------------------------------------------------

    def fq_coeffs(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def fq_from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + (c % self.p)
        return code

    def _build_fq_tables(self) -> None:
        p, q = self.p, self.q
        polys = [list(self.fq_coeffs(c)) for c in range(q)]
        add = [0] * (q * q)
        mul = [0] * (q * q)
        for i in range(q):
            for j in range(q):
                add[i * q + j] = self.fq_from_coeffs(
                    [(x + y) % p for x, y in zip(polys[i], polys[j])]
                )
                if j >= i:
                    prod = _poly_mod(_poly_mul(_poly_trim(polys[i][:]),
                                               _poly_trim(polys[j][:]), p),
                                     self.modulus, p)
                    prod = prod + [0] * (self.k - len(prod))
                    mul[i * q + j] = mul[j * q + i] = self.fq_from_coeffs(prod)
        self._add = add
        self._mul = mul
        self._neg = [self.fq_from_coeffs([(-x) % p for x in polys[i]]) for i in range(q)]
        inv = [0] * q
        for i in range(1, q):
            for j in range(1, q):
                if mul[i * q + j] == 1:
                    inv[i] = j
                    break
        self._inv = inv
        sq = [-1] * q
        sq[0] = 0
        for i in range(1, q):
            sq[mul[i * q + i]] = 1
        self._chi = sq

    def _fq_order_of(self, code: int) -> int:
        q = self.q
        acc, n = code, 1
        while acc != 1:
            acc = self._mul[acc * q + code]
            n += 1
        return n

    def _least_primitive_fq(self) -> int:
        for c in self.fq_order:
            if c and self._fq_order_of(c) == self.q - 1:
                return c
        raise AssertionError("GF(q) has no primitive element")  # unreachable

    def _mul2_raw(self, a: int, b: int) -> int:
        q, add, mul = self.q, self._add, self._mul
        a0, a1 = a % q, a // q
        b0, b1 = b % q, b // q
        r0 = add[mul[a0 * q + b0] * q + mul[mul[a1 * q + b1] * q + self.nu_code]]
        r1 = add[mul[a0 * q + b1] * q + mul[a1 * q + b0]]
        return r0 + q * r1

    def _pow2_raw(self, a: int, n: int) -> int:
        acc = 1
        while n:
            if n & 1:
                acc = self._mul2_raw(acc, a)
            a = self._mul2_raw(a, a)
            n >>= 1
        return acc

    def _least_primitive_fq2(self) -> int:
        q = self.q
        order = q * q - 1
        cofactors = [order // r for r in _prime_factors(order)]
        half = (q + 1) // 2
        for c in self.fq2_order:
            if c == 0:
                continue
            if any(self._pow2_raw(c, m) == 1 for m in cofactors):
                continue
            if self._pow2_raw(c, half) == self.eps_code:
                return c
        raise AssertionError("no primitive beta with beta^((q+1)/2) = e")

    def _build_fq2_tables(self) -> None:
        n = self.q * self.q - 1
        exp = [0] * (2 * n)
        log = [-1] * (self.q * self.q)
        acc = 1
        for i in range(n):
            exp[i] = acc
            log[acc] = i
            acc = self._mul2_raw(acc, self.beta_code)
        for i in range(n, 2 * n):
            exp[i] = exp[i - n]
        self._exp = exp
        self._log = log

    # GF(q^2) code arithmetic -------------------------------------------------

    def add2(self, a: int, b: int) -> int:
        q, add = self.q, self._add
        return add[(a % q) * q + b % q] + q * add[(a // q) * q + b // q]

    def neg2(self, a: int) -> int:
        q = self.q
        return self._neg[a % q] + q * self._neg[a // q]

    def mul2(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv2(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in GF(q^2)")
        n = self.q * self.q - 1
        return self._exp[(n - self._log[a]) % n]

    def pow2(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if n == 0 else 0
        order = self.q * self.q - 1
        return self._exp[(self._log[a] * n) % order]

    def frob2(self, a: int) -> int:
        q = self.q
        return a % q + q * self._neg[a // q]

    def norm2(self, a: int) -> int:
        q, mul = self.q, self._mul
        a0, a1 = a % q, a // q
        t = mul[mul[a1 * q + a1] * q + self.nu_code]
        return self._add[mul[a0 * q + a0] * q + self._neg[t]]

    # constructors and views ----------------------------------------------------

    def int_code(self, n: int) -> int:
        """Code of the integer n (n * 1) in GF(q)."""
        return n % self.p

    def fq(self, value) -> FqElem:
        if isinstance(value, FqElem):
            return value
        if isinstance(value, int):
            return FqElem(self, self.int_code(value))
        return FqElem(self, self.fq_from_coeffs(value))

    def fq_code(self, code: int) -> FqElem:
        return FqElem(self, code)

    def fq2(self, x0=0, x1=0) -> Fq2Elem:
        return Fq2Elem(self, self.fq(x0).code + self.q * self.fq(x1).code)

    def fq2_code(self, code: int) -> Fq2Elem:
        return Fq2Elem(self, code)

    @property
    def nu(self) -> FqElem:
        return FqElem(self, self.nu_code)

    @property
    def eps(self) -> Fq2Elem:
        return Fq2Elem(self, self.eps_code)

    @property
    def beta(self) -> Fq2Elem:
        return Fq2Elem(self, self.beta_code)

    @property
    def zero(self) -> Fq2Elem:
        return Fq2Elem(self, 0)

    @property
    def one(self) -> Fq2Elem:
        return Fq2Elem(self, 1)

    def fq_elements(self) -> Iterator[FqElem]:
        return (FqElem(self, c) for c in self.fq_order)

    def fq2_elements(self) -> Iterator[Fq2Elem]:
        return (Fq2Elem(self, c) for c in self.fq2_order)

    def order_key(self, x: Fq2Elem | FqElem) -> int:
        """Position of an element in the documented ordering."""
        if isinstance(x, FqElem):
            return self._rank[x.code]
        return self._rank[x.code % self.q] * self.q + self._rank[x.code // self.q]

    # text encoding -------------------------------------------------------------

    def format_fq(self, code: int) -> str:
        if self.k == 1:
            return str(code)
        return ",".join(str(c) for c in self.fq_coeffs(code))

    def format_fq2(self, code: int) -> str:
        return f"{self.format_fq(code % self.q)}+{self.format_fq(code // self.q)}*e"

    def parse_fq(self, text: str) -> FqElem:
        parts = [s.strip() for s in text.split(",")]
        if not all(re.fullmatch(r"-?\d+", s) for s in parts):
            raise ValueError(f"malformed GF(q) element: {text!r}")
        if self.k == 1:
            if len(parts) != 1:
                raise ValueError(f"malformed GF(q) element: {text!r}")
            return FqElem(self, int(parts[0]) % self.p)
        return FqElem(self, self.fq_from_coeffs([int(s) for s in parts]))

    def parse_fq2(self, text: str) -> Fq2Elem:
        """Inverse of :meth:`format_fq2`; also accepts a bare GF(q) value."""
        s = text.replace(" ", "")
        m = re.fullmatch(r"(.+?)\+(.+)\*e", s)
        if m:
            x0, x1 = self.parse_fq(m.group(1)), self.parse_fq(m.group(2))
        else:
            x0, x1 = self.parse_fq(s), FqElem(self, 0)
        return Fq2Elem(self, x0.code + self.q * x1.code)

    def describe(self) -> dict:
        """JSON-ready summary embedded in reports."""
        return {
            "p": self.p,
            "k": self.k,
            "q": self.q,
            "modulus": list(self.modulus),
            "nu": self.format_fq(self.nu_code),
            "beta": self.format_fq2(self.beta_code),
        }

    def __repr__(self) -> str:
        return f"FieldParams(p={self.p}, k={self.k})"

    def __reduce__(self):
        return (field_setup, (self.p, self.k))


@functools.lru_cache(maxsize=None)
def _cached_field(p: int, k: int) -> FieldParams:
    return FieldParams(p, k)


def field_setup(p: int, k: int = 1) -> FieldParams:
    """Build (or fetch from cache) the field pair GF(q), GF(q^2) for q = p**k."""
    if p % 2 == 0 or not _is_prime(p):
        raise InvalidField(f"p={p} must be an odd prime")
    if k < 1:
        raise InvalidField(f"degree k={k} must be >= 1")
    if p**k > max_q():
        raise SizeLimit(f"q={p**k} exceeds bound {max_q()} (set {MAX_Q_ENV} to raise it)")
    return _cached_field(p, k)


def field_for_q(q: int) -> FieldParams:
    p, k = split_prime_power(q)
    return field_setup(p, k)


# -- module-level operations ---------------------------------------------------

def frobenius(x: Fq2Elem) -> Fq2Elem:
    return x.frobenius()


def norm(x: Fq2Elem) -> FqElem:
    return x.norm()


def trace(x: Fq2Elem) -> FqElem:
    return x.trace()


def is_square_fq(x: FqElem) -> bool:
    return x.field._chi[x.code] >= 0


def quadratic_character_fq(x: FqElem) -> int:
    """1 for nonzero squares, -1 for nonsquares, 0 for zero."""
    return x.field._chi[x.code]


def is_square_fq2(x: Fq2Elem) -> bool:
    f = x.field
    return x.code == 0 or f.pow2(x.code, (f.q * f.q - 1) // 2) == 1


def sqrt_fq2(x: Fq2Elem) -> Fq2Elem | None:
    """A square root of x in GF(q^2), or None if x is a nonsquare.

    Small fields search exhaustively and return the least root; larger ones
    use Tonelli-Shanks.
    """
    f = x.field
    if x.code == 0:
        return f.zero
    if f.q <= SQRT_EXHAUSTIVE_MAX_Q:
        for c in f.fq2_order:
            if f.mul2(c, c) == x.code:
                return Fq2Elem(f, c)
        return None
    return _tonelli_shanks(x)


def _tonelli_shanks(x: Fq2Elem) -> Fq2Elem | None:
    f = x.field
    order = f.q * f.q - 1
    if f.pow2(x.code, order // 2) != 1:
        return None
    s, t = 0, order
    while t % 2 == 0:
        s += 1
        t //= 2
    z = next(c for c in f.fq2_order if c and f.pow2(c, order // 2) != 1)
    m = s
    c = f.pow2(z, t)
    r = f.pow2(x.code, (t + 1) // 2)
    u = f.pow2(x.code, t)
    while u != 1:
        i, tt = 0, u
        while tt != 1:
            tt = f.mul2(tt, tt)
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = f.mul2(b, b)
        m = i
        c = f.mul2(b, b)
        r = f.mul2(r, b)
        u = f.mul2(u, c)
    return Fq2Elem(f, r)


class VectorOps:
    """Elementwise GF(q^2) arithmetic on numpy arrays of codes."""

    def __init__(self, field: FieldParams):
        self.field = field
        self.q = field.q
        self._exp = np.asarray(field._exp, dtype=np.int64)
        self._log = np.asarray(field._log, dtype=np.int64)
        self._add = np.asarray(field._add, dtype=np.int64).reshape(field.q, field.q)
        self._neg = np.asarray(field._neg, dtype=np.int64)
        self._mulq = np.asarray(field._mul, dtype=np.int64).reshape(field.q, field.q)

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[np.maximum(self._log[a], 0) + np.maximum(self._log[b], 0)]
        return np.where((a == 0) | (b == 0), 0, out)

    def add(self, a, b):
        q = self.q
        return self._add[a % q, b % q] + q * self._add[a // q, b // q]

    def neg(self, a):
        q = self.q
        return self._neg[a % q] + q * self._neg[a // q]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale_int(self, n: int, a):
        return self.mul(self.field.int_code(n), a)

    def norm(self, a):
        """x0^2 - nu x1^2 as GF(q) codes."""
        q, m = self.q, self._mulq
        a0, a1 = a % q, a // q
        t = m[m[a1, a1], self.field.nu_code]
        return self._add[m[a0, a0], self._neg[t]]

    def is_square(self, a):
        a = np.asarray(a, dtype=np.int64)
        return (a == 0) | (self._log[a] % 2 == 0)
