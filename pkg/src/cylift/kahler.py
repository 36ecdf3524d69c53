"""Kahler-Einstein model geometries from potentials in a single affine chart.

Chart coordinates are (x1, y1, ..., xn, yn) with z^k = x^k + i y^k.  The
real metric convention is g0 = 2 Re(g_{j kbar} dz^j dzbar^k) and the Kahler
form is  w = i g_{j kbar} dz^j ^ dzbar^k, so that g0(x, y) = w(x, Jy) holds
with no extra factor.  Under this convention the Fubini-Study potential
(1/2) log(1 + |z|^2) has measured Einstein constant 2(n+1); constructors
certify the constant numerically instead of trusting the algebra.
"""

from __future__ import annotations

import numpy as np

from . import jets as jm
from .jets import Jet
from .forms import AlternatingForm, FormField, coordinate_form, wedge, _tighten


class ModelIntegrityError(RuntimeError):
    pass


class DomainError(ValueError):
    pass


def _order_of(coords):
    return coords[0].order if coords and isinstance(coords[0], Jet) else 0


def _scalarize(x, q):
    if isinstance(x, Jet) and q == 0:
        return x.value
    return x


def _jet_det(entries):
    n = len(entries)
    if n == 1:
        return entries[0][0]
    if n == 2:
        return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]
    total = 0.0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = entries[0][j] * _jet_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def hermitian_entries(potential, coords):
    """g_{j kbar} = d^2 K / dz^j dzbar^k at the order of `coords`.

    Returns an n x n nested list; entries are complex numbers for scalar
    coordinates and jets of matching order otherwise.
    """
    q = _order_of(coords)
    K = jm.taylor_expand(potential, coords, 2)
    n = len(coords) // 2
    out = []
    for j in range(n):
        row = []
        dxj = K.derivative(2 * j)
        dyj = K.derivative(2 * j + 1)
        for k in range(n):
            e = 0.25 * (dxj.derivative(2 * k) + dyj.derivative(2 * k + 1)
                        + 1j * dxj.derivative(2 * k + 1) - 1j * dyj.derivative(2 * k))
            row.append(_scalarize(e, q))
        out.append(row)
    return out


def log_det_hermitian(potential, coords):
    """log det g_{j kbar} at the order of `coords` (+2 spare derivatives).

    The two extra orders let callers take one complex Hessian of the
    result, which is exactly what the Ricci form needs.
    """
    q = _order_of(coords)
    K = jm.taylor_expand(potential, coords, 4)
    n = len(coords) // 2
    entries = []
    for j in range(n):
        row = []
        dxj = K.derivative(2 * j)
        dyj = K.derivative(2 * j + 1)
        for k in range(n):
            row.append(0.25 * (dxj.derivative(2 * k) + dyj.derivative(2 * k + 1)
                               + 1j * dxj.derivative(2 * k + 1)
                               - 1j * dyj.derivative(2 * k)))
        entries.append(row)
    return jm.log(_jet_det(entries))  # order q + 2


def complex_hessian(scalar_jet, n):
    """d^2 / dz^j dzbar^k of an order >= 2 jet in 2n real variables."""
    out = np.zeros((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            out[j, k] = 0.25 * (scalar_jet.second_partial(2 * j, 2 * k)
                                + scalar_jet.second_partial(2 * j + 1, 2 * k + 1)
                                + 1j * scalar_jet.second_partial(2 * j, 2 * k + 1)
                                - 1j * scalar_jet.second_partial(2 * j + 1, 2 * k))
    return out


def _two_form_from_hermitian(entries, factor, dim):
    """factor * sum_{jk} H_{jk} dz^j ^ dzbar^k as an AlternatingForm."""
    n = len(entries)
    total = None
    for j in range(n):
        dz = coordinate_form(dim, 2 * j) + 1j * coordinate_form(dim, 2 * j + 1)
        for k in range(n):
            h = entries[j][k]
            if not isinstance(h, Jet) and h == 0:
                continue
            dzb = coordinate_form(dim, 2 * k) - 1j * coordinate_form(dim, 2 * k + 1)
            term = wedge(dz, dzb) * (factor * h)
            total = term if total is None else total + term
    if total is None:
        total = AlternatingForm(2, dim)
    return total


class KahlerModel:
    """A chart-based Kahler geometry defined by a real potential."""

    def __init__(self, name, n, potential, declared_c, sample_radius,
                 domain_check=None, scale=None):
        self.name = name
        self.n = n
        self.dim = 2 * n
        self.potential = potential
        self.declared_c = declared_c
        self.sample_radius = sample_radius
        self.domain_check = domain_check
        self.scale = scale

    # -- point sampling --------------------------------------------------

    def random_points(self, count, seed):
        rng = np.random.default_rng(seed)
        pts = []
        while len(pts) < count:
            p = rng.uniform(-self.sample_radius, self.sample_radius, self.dim)
            if self.domain_check is None or self.domain_check(p):
                pts.append(p)
        return pts

    def check_domain(self, p):
        if self.domain_check is not None and not self.domain_check(p):
            raise DomainError(f"point outside the {self.name} chart domain")

    # -- tensors -----------------------------------------------------------

    def hermitian_metric(self, p):
        self.check_domain(p)
        return np.array(hermitian_entries(self.potential, list(p)),
                        dtype=np.complex128)

    def metric_at(self, p):
        """Real metric g0 and complex structure J of the chart."""
        h = self.hermitian_metric(p)
        m = self.dim
        dz = np.zeros((self.n, m), dtype=np.complex128)
        for j in range(self.n):
            dz[j, 2 * j] = 1.0
            dz[j, 2 * j + 1] = 1.0j
        G = 2.0 * np.real(np.einsum("jk,ja,kb->ab", h, dz, np.conj(dz)))
        G = 0.5 * (G + G.T)
        eigs = np.linalg.eigvalsh(G)
        if eigs.min() <= 1e-10:
            raise ModelIntegrityError(
                f"{self.name}: metric not positive definite at {p} "
                f"(min eigenvalue {eigs.min():.3e})")
        J = np.zeros((m, m))
        for j in range(self.n):
            J[2 * j + 1, 2 * j] = 1.0
            J[2 * j, 2 * j + 1] = -1.0
        return G, J

    def kahler_form_at(self, p):
        self.check_domain(p)
        return _two_form_from_hermitian(
            hermitian_entries(self.potential, list(p)), 1j, self.dim)

    def kahler_form_field(self):
        def ev(coords):
            return _two_form_from_hermitian(
                hermitian_entries(self.potential, coords), 1j, self.dim)
        return FormField(2, self.dim, ev)

    def ricci_entries(self, coords):
        """Hermitian entries of the Ricci form at the order of `coords`."""
        q = _order_of(coords)
        v = log_det_hermitian(self.potential, coords)  # order q + 2
        n = self.n
        out = []
        for j in range(n):
            row = []
            dxj = v.derivative(2 * j)
            dyj = v.derivative(2 * j + 1)
            for k in range(n):
                e = -0.25 * (dxj.derivative(2 * k) + dyj.derivative(2 * k + 1)
                             + 1j * dxj.derivative(2 * k + 1)
                             - 1j * dyj.derivative(2 * k))
                row.append(_scalarize(e, q))
            out.append(row)
        return out

    def ricci_form_at(self, p):
        """Ricci form rho = -i ddbar log det g_{j kbar}."""
        self.check_domain(p)
        return _two_form_from_hermitian(self.ricci_entries(list(p)), 1j, self.dim)

    def ricci_form_field(self):
        def ev(coords):
            return _two_form_from_hermitian(self.ricci_entries(coords), 1j, self.dim)
        return FormField(2, self.dim, ev)

    # -- measurements ------------------------------------------------------

    def einstein_constant(self, sample_count=100, seed=0):
        """Least-squares fit of Ricci against the Kahler form.

        Returns (c, max_deviation); a large deviation is reported, not
        raised, so non-Einstein inputs surface as data.
        """
        if sample_count < 10:
            raise ValueError("sample_count must be at least 10")
        num = 0.0
        den = 0.0
        rows = []
        for p in self.random_points(sample_count, seed):
            rho = self.ricci_form_at(p).numeric()
            w = self.kahler_form_at(p).numeric()
            num += float(np.real(np.vdot(w, rho)))
            den += float(np.real(np.vdot(w, w)))
            rows.append((rho, w))
        c = num / den if den > 0 else 0.0
        max_dev = max(float(np.max(np.abs(rho - c * w))) for rho, w in rows)
        return c, max_dev

    def compatibility_residual(self, sample_count=100, seed=0):
        """sup |g0(x, y) - w(x, Jy)| over random points and vectors."""
        rng = np.random.default_rng(seed)
        worst = 0.0
        for p in self.random_points(sample_count, seed):
            G, J = self.metric_at(p)
            w = self.kahler_form_at(p)
            x = rng.standard_normal(self.dim)
            y = rng.standard_normal(self.dim)
            from .forms import evaluate_form
            lhs = float(x @ G @ y)
            rhs = complex(evaluate_form(w, [x, J @ y])).real
            worst = max(worst, abs(lhs - rhs))
        return worst

    def certify(self, tol=1e-6, sample_count=12, seed=7):
        c, dev = self.einstein_constant(sample_count, seed)
        if abs(c - self.declared_c) > tol or dev > tol:
            raise ModelIntegrityError(
                f"{self.name}: measured Einstein constant {c:.9f} "
                f"(deviation {dev:.2e}) does not certify against "
                f"declared {self.declared_c}")
        return c, dev


# ---------------------------------------------------------------------------
# Shipped models
# ---------------------------------------------------------------------------


def fubini_study(n, scale=0.5, certify=True):
    """CP^n in the dense affine chart; Einstein constant 2(n+1) at scale 1/2."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def potential(c):
        s = 0.0
        for v in c:
            s = s + v * v
        return scale * jm.log(1.0 + s)

    model = KahlerModel("fubini_study", n, potential,
                        declared_c=(n + 1) / scale,
                        sample_radius=1.5, scale=scale)
    if certify:
        model.certify()
    return model


def flat_torus(n, scale=0.5, certify=True):
    """Flat model on the fundamental domain of C^n / (2 pi Z)^{2n}."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def potential(c):
        s = 0.0
        for v in c:
            s = s + v * v
        return scale * s

    model = KahlerModel("flat_torus", n, potential, declared_c=0.0,
                        sample_radius=np.pi, scale=scale)
    if certify:
        model.certify(tol=1e-10)
    return model


def complex_hyperbolic(n, scale=0.5, certify=True):
    """Unit-ball model; Einstein constant -2(n+1) at scale 1/2."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def potential(c):
        s = 0.0
        for v in c:
            s = s + v * v
        if float(np.real(jm.value_of(s))) >= 1.0:
            raise DomainError("complex_hyperbolic chart requires |z| < 1")
        return -scale * jm.log(1.0 - s)

    model = KahlerModel("complex_hyperbolic", n, potential,
                        declared_c=-(n + 1) / scale,
                        sample_radius=0.8,
                        domain_check=lambda p: float(np.dot(p, p)) < 1.0,
                        scale=scale)
    if certify:
        model.certify()
    return model


MODEL_FACTORIES = {
    "fubini_study": fubini_study,
    "flat_torus": flat_torus,
    "complex_hyperbolic": complex_hyperbolic,
}
