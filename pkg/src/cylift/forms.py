"""Pointwise exterior algebra over real chart coordinates.

Forms carry complex coefficients indexed by strictly increasing
multi-indices.  Differentiation of form fields comes in two independent
flavours: exact forward-mode jets (the default instrument) and central
differences with Richardson refinement (the cross-check).

Model-provided fields may internally re-expand the chart potential from
the incoming coordinate values; such fields must only be differentiated
through `exterior_derivative` / `exterior_derivative_field`, which feed
them genuine coordinate jets.  Hand-written fields built from plain `jets`
arithmetic compose freely (e.g. under `pullback_field`).
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import jets as jm
from .jets import Jet


class DimensionError(ValueError):
    pass


@lru_cache(maxsize=None)
def _indices(m: int, k: int):
    idx = list(combinations(range(m), k))
    lookup = {I: pos for pos, I in enumerate(idx)}
    return idx, lookup


def _merge_sign(I, J):
    """Sign of sorting the concatenation I+J; 0 if they intersect."""
    if set(I) & set(J):
        return 0, None
    merged = I + J
    inversions = 0
    for a in range(len(merged)):
        for b in range(a + 1, len(merged)):
            if merged[a] > merged[b]:
                inversions += 1
    return (-1) ** inversions, tuple(sorted(merged))


@lru_cache(maxsize=None)
def _wedge_table(m: int, ka: int, kb: int):
    ia_idx, _ = _indices(m, ka)
    ib_idx, _ = _indices(m, kb)
    _, out_lookup = _indices(m, ka + kb)
    table = []
    for a, I in enumerate(ia_idx):
        for b, J in enumerate(ib_idx):
            sign, out = _merge_sign(I, J)
            if sign:
                table.append((a, b, out_lookup[out], sign))
    return table


class AlternatingForm:
    """Degree-k alternating tensor at a point of an m-dimensional chart."""

    __slots__ = ("degree", "dim", "coeffs")

    def __init__(self, degree: int, dim: int, coeffs=None):
        if degree < 0 or dim < 0:
            raise DimensionError("degree and dimension must be nonnegative")
        self.degree = degree
        self.dim = dim
        n = math.comb(dim, degree) if degree <= dim else 0
        if coeffs is None:
            coeffs = np.zeros(max(n, 0), dtype=np.complex128)
        else:
            coeffs = np.asarray(coeffs)
            if coeffs.shape != (n,):
                raise DimensionError(
                    f"degree-{degree} form in dim {dim} needs {n} coefficients"
                )
        self.coeffs = coeffs

    # ------------------------------------------------------------------

    @classmethod
    def scalar(cls, value, dim: int) -> "AlternatingForm":
        c = np.empty(1, dtype=object)
        c[0] = value
        out = cls(0, dim)
        out.coeffs = _tighten(c)
        return out

    @classmethod
    def covector(cls, components, dim: int) -> "AlternatingForm":
        c = np.empty(dim, dtype=object)
        for i, v in enumerate(components):
            c[i] = v
        out = cls(1, dim)
        out.coeffs = _tighten(c)
        return out

    def indices(self):
        return _indices(self.dim, self.degree)[0]

    def coefficient(self, multi_index):
        _, lookup = _indices(self.dim, self.degree)
        return self.coeffs[lookup[tuple(multi_index)]]

    def numeric(self) -> np.ndarray:
        return np.array([complex(jm.value_of(c)) for c in self.coeffs])

    def max_abs(self) -> float:
        if len(self.coeffs) == 0:
            return 0.0
        return float(np.max(np.abs(self.numeric())))

    def conjugate(self) -> "AlternatingForm":
        out = AlternatingForm(self.degree, self.dim)
        out.coeffs = np.array([np.conj(c) if not isinstance(c, Jet) else
                               Jet(c.nvars, c.order, np.conj(c.coeffs))
                               for c in self.coeffs], dtype=object)
        out.coeffs = _tighten(out.coeffs)
        return out

    # ------------------------------------------------------------------

    def _check(self, other):
        if self.dim != other.dim:
            raise DimensionError("ambient dimension mismatch")

    def __add__(self, other):
        self._check(other)
        if self.degree != other.degree:
            raise DimensionError("cannot add forms of different degree")
        out = AlternatingForm(self.degree, self.dim)
        out.coeffs = _tighten(self.coeffs + other.coeffs)
        return out

    def __sub__(self, other):
        return self + (other * (-1.0))

    def __mul__(self, scalar):
        out = AlternatingForm(self.degree, self.dim)
        if isinstance(scalar, Jet) or self.coeffs.dtype == object:
            prods = np.empty(len(self.coeffs), dtype=object)
            for i, c in enumerate(self.coeffs):
                prods[i] = c * scalar
            out.coeffs = _tighten(prods)
        else:
            out.coeffs = _tighten(self.coeffs * scalar)
        return out

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)


def _tighten(coeffs):
    """Use complex128 storage when no jets are present."""
    if any(isinstance(c, Jet) for c in coeffs):
        out = np.empty(len(coeffs), dtype=object)
        for i, c in enumerate(coeffs):
            out[i] = c
        return out
    return np.asarray([complex(c) for c in coeffs], dtype=np.complex128)


def wedge(a: AlternatingForm, b: AlternatingForm) -> AlternatingForm:
    if a.dim != b.dim:
        raise DimensionError("ambient dimension mismatch")
    deg = a.degree + b.degree
    if deg > a.dim:
        return _zero_like(deg, a.dim)
    out = np.zeros(math.comb(a.dim, deg), dtype=object)
    for ia, ib, iout, sign in _wedge_table(a.dim, a.degree, b.degree):
        out[iout] = out[iout] + sign * (a.coeffs[ia] * b.coeffs[ib])
    form = AlternatingForm(deg, a.dim)
    form.coeffs = _tighten(out)
    return form


def _zero_like(degree, dim):
    """Zero form of the stated degree; degree > dim has no components."""
    return AlternatingForm(degree, dim)


def evaluate_form(omega: AlternatingForm, vectors) -> complex:
    """Evaluate a k-form on k tangent vectors (components over the chart)."""
    k = omega.degree
    if len(vectors) != k:
        raise DimensionError(f"degree-{k} form needs {k} vectors")
    if k == 0:
        return omega.coeffs[0]
    total = 0.0
    for pos, I in enumerate(omega.indices()):
        c = omega.coeffs[pos]
        if not isinstance(c, Jet) and c == 0:
            continue
        rows = [[vectors[j][i] for j in range(k)] for i in I]
        total = total + c * _det(rows)
    return total


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = 0.0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


# ---------------------------------------------------------------------------
# Fields and maps
# ---------------------------------------------------------------------------


class FormField:
    """Smooth assignment of a degree-k form to each chart point."""

    def __init__(self, degree: int, dim: int, evaluator):
        self.degree = degree
        self.dim = dim
        self.evaluator = evaluator

    def __call__(self, point) -> AlternatingForm:
        return self.evaluator(list(point))


class SmoothMap:
    """Map between charts with jet-based Jacobian support."""

    def __init__(self, dim_in: int, dim_out: int, evaluator):
        self.dim_in = dim_in
        self.dim_out = dim_out
        self.evaluator = evaluator

    def __call__(self, point):
        return self.evaluator(list(point))

    def value(self, point) -> np.ndarray:
        return np.array([complex(jm.value_of(y)).real for y in self(point)])

    def jacobian(self, point) -> np.ndarray:
        xs = jm.variables([float(np.real(p)) for p in point], 1)
        ys = self.evaluator(xs)
        J = np.zeros((self.dim_out, self.dim_in))
        for a, y in enumerate(ys):
            if isinstance(y, Jet):
                for i in range(self.dim_in):
                    J[a, i] = complex(y.partial(i)).real
        return J


def identity_map(dim: int) -> SmoothMap:
    return SmoothMap(dim, dim, lambda xs: list(xs))


# ---------------------------------------------------------------------------
# Exterior derivative
# ---------------------------------------------------------------------------


def _d_coeffs_from_jets(form: AlternatingForm, reduce_to_scalar: bool):
    m = form.dim
    k = form.degree
    out_idx, _ = _indices(m, k + 1)
    _, in_lookup = _indices(m, k)
    out = np.zeros(len(out_idx), dtype=object)
    for pos, J in enumerate(out_idx):
        acc = 0.0
        for t in range(k + 1):
            var = J[t]
            sub = J[:t] + J[t + 1:]
            c = form.coeffs[in_lookup[sub]]
            if isinstance(c, Jet):
                dc = c.derivative(var)
                dc = dc.value if reduce_to_scalar else dc
            else:
                dc = 0.0
            acc = acc + ((-1) ** t) * dc
        out[pos] = acc
    result = AlternatingForm(k + 1, m)
    result.coeffs = _tighten(out)
    return result


def exterior_derivative_field(field: FormField) -> FormField:
    """d of a form field; the evaluator accepts floats or coordinate jets."""

    def ev(coords):
        if coords and isinstance(coords[0], Jet):
            q = coords[0].order
            base = [complex(c.value).real for c in coords]
        else:
            q = 0
            base = [float(np.real(c)) for c in coords]
        xs = jm.variables(base, q + 1)
        w = field.evaluator(xs)
        return _d_coeffs_from_jets(w, reduce_to_scalar=(q == 0))

    return FormField(field.degree + 1, field.dim, ev)


def _cd_derivative(field: FormField, point, var: int, h: float) -> np.ndarray:
    p_plus = list(point)
    p_minus = list(point)
    p_plus[var] += h
    p_minus[var] -= h
    return (field(p_plus).numeric() - field(p_minus).numeric()) / (2.0 * h)


def _d_central(field: FormField, point, h: float, richardson: bool):
    m = field.dim
    k = field.degree
    out_idx, _ = _indices(m, k + 1)
    _, in_lookup = _indices(m, k)

    def build(step):
        partials = [_cd_derivative(field, point, v, step) for v in range(m)]
        out = np.zeros(len(out_idx), dtype=np.complex128)
        for pos, J in enumerate(out_idx):
            for t in range(k + 1):
                var = J[t]
                sub = J[:t] + J[t + 1:]
                out[pos] += ((-1) ** t) * partials[var][in_lookup[sub]]
        return out

    coarse = build(h)
    if not richardson:
        result = AlternatingForm(k + 1, m)
        result.coeffs = coarse
        return result
    fine = build(h / 2.0)
    result = AlternatingForm(k + 1, m)
    result.coeffs = (4.0 * fine - coarse) / 3.0
    return result


def exterior_derivative(field: FormField, point, scheme: str = "jet",
                        h: float = 1e-5, richardson: bool = True) -> AlternatingForm:
    """Exterior derivative of a form field at a point.

    scheme "jet" is exact to rounding; "central" is the independent
    finite-difference cross-check (step h, Richardson-refined by default).
    """
    if scheme == "jet":
        return exterior_derivative_field(field)(point)
    if scheme == "central":
        if h <= 0:
            raise ValueError("central-difference step must be positive")
        return _d_central(field, list(point), h, richardson)
    raise ValueError(f"unknown differentiation scheme {scheme!r}")


# ---------------------------------------------------------------------------
# Pullback
# ---------------------------------------------------------------------------


def pullback(phi: SmoothMap, omega: AlternatingForm, point) -> AlternatingForm:
    """phi^* omega at `point`, omega living at phi(point)."""
    k = omega.degree
    if k > phi.dim_in:
        return _zero_like(k, phi.dim_in)
    if k == 0:
        out = AlternatingForm(0, phi.dim_in)
        out.coeffs = omega.coeffs.copy()
        return out
    J = phi.jacobian(point)
    out_idx, _ = _indices(phi.dim_in, k)
    coeffs = np.zeros(len(out_idx), dtype=np.complex128)
    src = omega.numeric()
    for spos, S in enumerate(omega.indices()):
        c = src[spos]
        if c == 0:
            continue
        block = J[list(S), :]
        for dpos, D in enumerate(out_idx):
            coeffs[dpos] += c * np.linalg.det(block[:, list(D)])
    out = AlternatingForm(k, phi.dim_in)
    out.coeffs = coeffs
    return out


def pullback_field(phi: SmoothMap, field: FormField) -> FormField:
    """phi^* of a form field.

    Composes evaluators directly, so differentiating the result through
    jets requires `field` to be jet-transparent (built from plain jet
    arithmetic).  Pointwise evaluation is always valid.
    """

    def ev(coords):
        ys = phi.evaluator(list(coords))
        w = field.evaluator(list(ys))
        k = w.degree
        if k > phi.dim_in:
            return _zero_like(k, phi.dim_in)
        if k == 0:
            out = AlternatingForm(0, phi.dim_in)
            out.coeffs = w.coeffs
            return out
        if coords and isinstance(coords[0], Jet):
            jac_rows = ys
        else:
            xs = jm.variables([float(np.real(c)) for c in coords], 1)
            jac_rows = phi.evaluator(xs)
        jac = [[_partial(y, i) for i in range(phi.dim_in)] for y in jac_rows]
        out_idx, _ = _indices(phi.dim_in, k)
        coeffs = np.zeros(len(out_idx), dtype=object)
        for spos, S in enumerate(w.indices()):
            c = w.coeffs[spos]
            for dpos, D in enumerate(out_idx):
                rows = [[jac[s][d] for d in D] for s in S]
                coeffs[dpos] = coeffs[dpos] + c * _det(rows)
        out = AlternatingForm(k, phi.dim_in)
        out.coeffs = _tighten(coeffs)
        return out

    return FormField(field.degree, phi.dim_in, ev)


def _partial(y, var):
    if isinstance(y, Jet):
        if y.order >= 2:
            return y.derivative(var)
        return y.partial(var)
    return 0.0


# ---------------------------------------------------------------------------
# Metric operations
# ---------------------------------------------------------------------------


def metric_dual(v, g: np.ndarray) -> AlternatingForm:
    """The 1-form g(v, .) of a tangent vector."""
    g = np.asarray(g, dtype=float)
    _require_positive(g)
    comps = g @ np.asarray(v, dtype=complex)
    out = AlternatingForm(1, g.shape[0])
    out.coeffs = comps.astype(np.complex128)
    return out


def sharp(alpha: AlternatingForm, g: np.ndarray) -> np.ndarray:
    """Tangent vector recovering alpha under metric_dual."""
    g = np.asarray(g, dtype=float)
    _require_positive(g)
    return np.linalg.solve(g, alpha.numeric())


def _require_positive(g):
    eigs = np.linalg.eigvalsh(g)
    if eigs.min() <= 1e-10:
        raise np.linalg.LinAlgError(
            f"metric not positive definite (min eigenvalue {eigs.min():.3e})"
        )


def form_inner(a: AlternatingForm, b: AlternatingForm, g: np.ndarray) -> complex:
    """Hermitian inner product on degree-k forms induced by g.

    Normalised so that the wedge of a g-orthonormal real coframe has norm
    one; a unitary complex coframe leg dx + i dy then has norm sqrt(2).
    """
    if a.degree != b.degree or a.dim != b.dim:
        raise DimensionError("form type mismatch")
    g = np.asarray(g, dtype=float)
    _require_positive(g)
    ginv = np.linalg.inv(g)
    k = a.degree
    if k == 0:
        return complex(a.coeffs[0]) * np.conj(complex(b.coeffs[0]))
    av = a.numeric()
    bv = b.numeric()
    total = 0.0 + 0.0j
    idx = a.indices()
    for pa, I in enumerate(idx):
        if av[pa] == 0:
            continue
        for pb, J in enumerate(idx):
            if bv[pb] == 0:
                continue
            gram = ginv[np.ix_(list(I), list(J))]
            total += av[pa] * np.conj(bv[pb]) * np.linalg.det(gram)
    return total


def form_norm(omega: AlternatingForm, g: np.ndarray) -> float:
    val = form_inner(omega, omega, g).real
    return math.sqrt(max(val, 0.0))


# ---------------------------------------------------------------------------
# Convenience constructors
# ---------------------------------------------------------------------------


def coordinate_form(dim: int, var: int) -> AlternatingForm:
    out = AlternatingForm(1, dim)
    c = np.zeros(dim, dtype=np.complex128)
    c[var] = 1.0
    out.coeffs = c
    return out


def dz_wedge(n: int, dim: int | None = None) -> AlternatingForm:
    """dz^1 ^ ... ^ dz^n over real coordinates (x1, y1, ..., xn, yn, ...)."""
    m = dim if dim is not None else 2 * n
    out = AlternatingForm.scalar(1.0, m)
    for j in range(n):
        dz = coordinate_form(m, 2 * j) + 1j * coordinate_form(m, 2 * j + 1)
        out = wedge(out, dz)
    return out
