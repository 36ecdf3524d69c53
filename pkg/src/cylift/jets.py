"""Truncated multivariate Taylor arithmetic (forward-mode jets).

A Jet stores the Taylor coefficients of a smooth function at a point, up to
a fixed total order, in ``nvars`` real variables.  Coefficients are complex
so the same machinery differentiates complex-valued functions of real chart
coordinates.  Arithmetic is exact on polynomial data up to rounding, which
is what makes exterior-derivative residual checks trustworthy.

Evaluator code throughout the package is written against the generic
wrappers (`sqrt`, `log`, `exp`, ...) so a single code path serves plain
floats and jets of any order.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

__all__ = [
    "Jet",
    "variables",
    "taylor_expand",
    "value_of",
    "sqrt",
    "exp",
    "log",
    "sin",
    "cos",
    "power",
]


@lru_cache(maxsize=None)
def _basis(nvars: int, order: int):
    """Monomial exponent tuples of total degree <= order, graded lex."""
    monos = [tuple([0] * nvars)]
    for deg in range(1, order + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            monos.append(tuple(e))
    # combinations_with_replacement already yields each multiset once
    index = {m: i for i, m in enumerate(monos)}
    return monos, index


@lru_cache(maxsize=None)
def _mul_table(nvars: int, order: int):
    """Index triples (ia, ib, iout) with mono[ia] + mono[ib] = mono[iout]."""
    monos, index = _basis(nvars, order)
    ia, ib, iout = [], [], []
    for i, ma in enumerate(monos):
        da = sum(ma)
        for j, mb in enumerate(monos):
            if da + sum(mb) > order:
                continue
            out = tuple(a + b for a, b in zip(ma, mb))
            ia.append(i)
            ib.append(j)
            iout.append(index[out])
    return np.array(ia), np.array(ib), np.array(iout)


@lru_cache(maxsize=None)
def _deriv_table(nvars: int, order: int, var: int):
    """Pairs (isrc, idst, factor): d/dx_var maps mono isrc to idst*factor."""
    monos, index = _basis(nvars, order)
    lower_monos, lower_index = _basis(nvars, order - 1) if order > 0 else ([], {})
    isrc, idst, fac = [], [], []
    for i, m in enumerate(monos):
        if m[var] == 0:
            continue
        out = list(m)
        out[var] -= 1
        out = tuple(out)
        if sum(out) <= order - 1:
            isrc.append(i)
            idst.append(lower_index[out])
            fac.append(m[var])
    return np.array(isrc), np.array(idst), np.array(fac, dtype=np.complex128)


class Jet:
    """Taylor polynomial of a function at a point, truncated at `order`."""

    __slots__ = ("nvars", "order", "coeffs")

    def __init__(self, nvars: int, order: int, coeffs: np.ndarray):
        self.nvars = nvars
        self.order = order
        self.coeffs = coeffs

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, value, nvars: int, order: int) -> "Jet":
        monos, _ = _basis(nvars, order)
        c = np.zeros(len(monos), dtype=np.complex128)
        c[0] = value
        return cls(nvars, order, c)

    @classmethod
    def variable(cls, value, var: int, nvars: int, order: int) -> "Jet":
        monos, index = _basis(nvars, order)
        c = np.zeros(len(monos), dtype=np.complex128)
        c[0] = value
        if order >= 1:
            e = [0] * nvars
            e[var] = 1
            c[index[tuple(e)]] = 1.0
        return cls(nvars, order, c)

    # -- inspection -------------------------------------------------------

    @property
    def value(self):
        return self.coeffs[0]

    def partial(self, var: int):
        """First partial derivative value at the base point."""
        monos, index = _basis(self.nvars, self.order)
        e = [0] * self.nvars
        e[var] = 1
        return self.coeffs[index[tuple(e)]]

    def second_partial(self, i: int, j: int):
        """Second partial derivative value at the base point."""
        monos, index = _basis(self.nvars, self.order)
        e = [0] * self.nvars
        e[i] += 1
        e[j] += 1
        factor = 2.0 if i == j else 1.0
        return self.coeffs[index[tuple(e)]] * factor

    def derivative(self, var: int) -> "Jet":
        """The jet of d(self)/dx_var, one order lower."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        monos, _ = _basis(self.nvars, self.order - 1)
        out = np.zeros(len(monos), dtype=np.complex128)
        isrc, idst, fac = _deriv_table(self.nvars, self.order, var)
        if len(isrc):
            np.add.at(out, idst, self.coeffs[isrc] * fac)
        return Jet(self.nvars, self.order - 1, out)

    def truncate(self, order: int) -> "Jet":
        if order == self.order:
            return self
        if order > self.order:
            raise ValueError("cannot raise jet order by truncation")
        monos, _ = _basis(self.nvars, order)
        return Jet(self.nvars, order, self.coeffs[: len(monos)].copy())

    def __repr__(self):
        return f"Jet(nvars={self.nvars}, order={self.order}, value={self.value})"

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ValueError("jet variable-count mismatch")
            if other.order == self.order:
                return self, other
            if other.order > self.order:
                return self, other.truncate(self.order)
            return self.truncate(other.order), other
        return self, Jet.constant(other, self.nvars, self.order)

    def __add__(self, other):
        a, b = self._coerce(other)
        return Jet(a.nvars, a.order, a.coeffs + b.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return Jet(a.nvars, a.order, a.coeffs - b.coeffs)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        return Jet(a.nvars, a.order, b.coeffs - a.coeffs)

    def __neg__(self):
        return Jet(self.nvars, self.order, -self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.nvars, self.order, self.coeffs * other)
        a, b = self._coerce(other)
        ia, ib, iout = _mul_table(a.nvars, a.order)
        out = np.zeros_like(a.coeffs)
        np.add.at(out, iout, a.coeffs[ia] * b.coeffs[ib])
        return Jet(a.nvars, a.order, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.nvars, self.order, self.coeffs / other)
        return self * other._reciprocal()

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def _nilpotent(self):
        n = self.coeffs.copy()
        n[0] = 0.0
        return Jet(self.nvars, self.order, n)

    def compose(self, derivs) -> "Jet":
        """Sum_k derivs[k]/k! * (self - value)^k, derivs[k] = f^(k)(value)."""
        out = Jet.constant(derivs[0], self.nvars, self.order)
        if self.order == 0:
            return out
        n = self._nilpotent()
        term = Jet.constant(1.0, self.nvars, self.order)
        for k in range(1, min(len(derivs), self.order + 1)):
            term = term * n
            out = out + term * (derivs[k] / math.factorial(k))
        return out

    def _reciprocal(self):
        a = self.value
        if a == 0:
            raise ZeroDivisionError("jet with zero value")
        derivs = [(-1) ** k * math.factorial(k) / a ** (k + 1) for k in range(self.order + 1)]
        return self.compose(derivs)

    def __pow__(self, p):
        if isinstance(p, int):
            if p < 0:
                return self._reciprocal() ** (-p)
            out = Jet.constant(1.0, self.nvars, self.order)
            base = self
            k = p
            while k:
                if k & 1:
                    out = out * base
                base = base * base
                k >>= 1
            return out
        return power(self, p)


# -- generic elementary functions (floats, complex, or jets) ---------------


def variables(values, order: int):
    """Coordinate jets (x_i = value_i + eps_i) for a point."""
    values = list(values)
    m = len(values)
    return [Jet.variable(v, i, m, order) for i, v in enumerate(values)]


def value_of(x):
    return x.value if isinstance(x, Jet) else x


def conj(x):
    """Complex conjugate; for jets of real variables this conjugates
    coefficients, i.e. the jet of the conjugated function."""
    if isinstance(x, Jet):
        return Jet(x.nvars, x.order, np.conj(x.coeffs))
    return np.conj(x)


def taylor_expand(fn, coords, extra_order: int):
    """Evaluate fn on fresh coordinate jets expanded `extra_order` deeper.

    `coords` may be plain scalars or coordinate jets of order q; the result
    is fn as a jet of order q + extra_order at the same base point.  Valid
    only when incoming jets are coordinate seeds, which is how every caller
    in this package uses them.
    """
    if coords and isinstance(coords[0], Jet):
        q = coords[0].order
        base = [complex(c.value).real for c in coords]
    else:
        q = 0
        base = [float(np.real(c)) for c in coords]
    return fn(variables(base, q + extra_order))


def _unary(x, fval, derivs_fn):
    if isinstance(x, Jet):
        a = x.value
        return x.compose(derivs_fn(a, x.order))
    return fval(x)


def sqrt(x):
    def derivs(a, order):
        out = []
        c = 1.0
        for k in range(order + 1):
            out.append(c * a ** (0.5 - k))
            c *= 0.5 - k
        return out

    return _unary(x, np.sqrt, derivs)


def power(x, alpha):
    if isinstance(alpha, int):
        return x ** alpha if isinstance(x, Jet) else x ** alpha

    def derivs(a, order):
        out = []
        c = 1.0
        for k in range(order + 1):
            out.append(c * a ** (alpha - k))
            c *= alpha - k
        return out

    if isinstance(x, Jet):
        return _unary(x, None, derivs)
    return x ** alpha


def exp(x):
    def derivs(a, order):
        e = np.exp(a)
        return [e] * (order + 1)

    return _unary(x, np.exp, derivs)


def log(x):
    def derivs(a, order):
        out = [np.log(a)]
        for k in range(1, order + 1):
            out.append((-1) ** (k - 1) * math.factorial(k - 1) / a ** k)
        return out

    return _unary(x, np.log, derivs)


def sin(x):
    def derivs(a, order):
        table = [np.sin(a), np.cos(a), -np.sin(a), -np.cos(a)]
        return [table[k % 4] for k in range(order + 1)]

    return _unary(x, np.sin, derivs)


def cos(x):
    def derivs(a, order):
        table = [np.cos(a), -np.sin(a), -np.cos(a), np.sin(a)]
        return [table[k % 4] for k in range(order + 1)]

    return _unary(x, np.cos, derivs)
