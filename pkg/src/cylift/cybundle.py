"""Total space of the canonical line bundle with its Calabi-Yau structure.

The bundle is charted by (base chart) x C via u = w dz^1 ^ ... ^ dz^n, with
fiber radius r = |w| h(p)^(1/2) where h = |dz^1^...^dz^n|^2 under the base
metric; equivalently h = 1/det(g_{j kbar}).

The connection 1-form gamma is defined by the tautological structure
equation on the unit circle bundle B,

    d Upsilon_0 = -i gamma ^ Upsilon_0      (restricted to B),

which determines gamma uniquely:

    gamma = -d(arg w) + (i/2)(del - delbar) log h.

Its curvature is then d gamma = -c w  (w the Kahler form, c the Einstein
constant); both identities are certified numerically at construction.
With eta0 = dr - i r gamma the metric and its fundamental 2-form are

    g  = f^(-2) eta0.eta0bar + f^(2/n) g0,
    Pi = (i/2) f^(-2) eta0 ^ eta0bar + f^(2/n) w,

and d Pi = 0 holds exactly when  -c r + (2/n) f^(2/n + 1) f' = 0, whose
positive solutions are

    f(r) = ( c (n+1)/2 r^2 + c' )^(n/(2n+2)).

For c >= 0, c' > 0 this lives on the whole bundle; for c < 0 the domain is
r < sqrt(-2c'/(c(n+1))).  The resulting metric is Ricci-flat (checked
through the full Riemannian curvature tensor) and the holomorphic volume
form Upsilon = d Upsilon_0 has constant length sqrt(2) and comass 2^(-n/2).
"""

from __future__ import annotations

import math

import numpy as np

from . import jets as jm
from .jets import Jet
from .forms import (
    AlternatingForm,
    FormField,
    SmoothMap,
    coordinate_form,
    dz_wedge,
    exterior_derivative_field,
    form_inner,
    form_norm,
    pullback,
    wedge,
    _tighten,
    _indices,
)
from .kahler import DomainError, KahlerModel, _order_of, _scalarize


class CertificationError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Profile function
# ---------------------------------------------------------------------------


class Profile:
    """Radial profile of the bundle metric.

    The shipped closed form solves the Kahler ODE
    -c r + (2/n) f^(2/n+1) df/dr = 0 identically; `exponent` and `fudge`
    exist so tests can break it deliberately.
    """

    def __init__(self, n, c, cprime, exponent=None, fudge=1.0):
        if n < 1:
            raise ValueError("n must be >= 1")
        if cprime <= 0:
            raise ValueError("c' must be positive")
        self.n = n
        self.c = float(c)
        self.cprime = float(cprime)
        self.exponent = n / (2.0 * n + 2.0) if exponent is None else float(exponent)
        self.fudge = float(fudge)

    @property
    def domain_bound(self):
        """Positive endpoint of the r-domain, or None when unbounded."""
        if self.c >= 0:
            return None
        return math.sqrt(-2.0 * self.cprime / (self.c * (self.n + 1)))

    def in_domain(self, r):
        r = float(np.real(jm.value_of(r)))
        if r < 0:
            return False
        bound = self.domain_bound
        return bound is None or r < bound

    def radicand(self, r):
        return self.cprime + 0.5 * self.c * (self.n + 1) * (r * r)

    def __call__(self, r):
        if not self.in_domain(r):
            bound = self.domain_bound
            detail = (f"[0, {bound:g})" if bound is not None else "[0, oo)")
            raise DomainError(
                f"r={float(np.real(jm.value_of(r))):g} outside profile domain {detail}")
        return self.fudge * jm.power(self.radicand(r), self.exponent)

    def ode_residual(self, r):
        """Left side of the Kahler condition -c r + (2/n) f^(2/n+1) f'."""
        rj = jm.variables([float(r)], 1)[0]
        f = self(rj)
        fp = complex(f.derivative(0).value)
        f0 = complex(f.value)
        n = self.n
        return (-self.c * float(r) + (2.0 / n) * f0 ** (2.0 / n + 1.0) * fp).real


# ---------------------------------------------------------------------------
# Bundle geometry
# ---------------------------------------------------------------------------


class CYBundle:
    """Canonical-bundle total space over a Kahler-Einstein model.

    Coordinates are (x1, y1, ..., xn, yn, wx, wy).  All evaluators accept
    plain floats or coordinate jets; potential-derived quantities are
    re-expanded internally to whatever depth the caller's order requires.
    """

    def __init__(self, model: KahlerModel, profile: Profile | None = None,
                 cprime: float = 1.0, certify: bool = True,
                 certify_samples: int = 6, certify_tol: float = 1e-8,
                 seed: int = 11):
        self.model = model
        self.n = model.n
        self.dim = 2 * model.n + 2
        if profile is None:
            profile = Profile(model.n, model.declared_c, cprime)
        self.profile = profile
        self.certificate = None
        if certify:
            self.certificate = self.certify_connection(
                certify_samples, certify_tol, seed)

    # -- shared jet kitchen -------------------------------------------------

    def _ingredients(self, coords):
        """All local data at the order of `coords`.

        Returns r, f, the components of dr and gamma, the base Hermitian
        entries, and the base point dimension bookkeeping.  Scalar inputs
        yield scalar outputs.
        """
        q = _order_of(coords)
        m = self.dim
        nb = 2 * self.n
        vals = [complex(jm.value_of(c)).real for c in coords]
        xs = jm.variables(vals, q + 3)
        K = self.model.potential(xs[:nb])            # order q+3
        herm1 = self._hermitian_from(K)              # order q+1
        v = jm.log(_det_nested(herm1))               # order q+1
        h = jm.exp(-v)
        wx, wy = xs[nb], xs[nb + 1]
        w2 = wx * wx + wy * wy
        r = jm.sqrt(w2 * h)                          # order q+1

        def down(x):
            if isinstance(x, Jet) and x.order > q:
                x = x.truncate(q)
            return _scalarize(x, q)

        dr = [down(r.derivative(a)) for a in range(m)]
        gamma = []
        for j in range(self.n):
            gamma.append(down(-0.5 * v.derivative(2 * j + 1)))  # dx^j
            gamma.append(down(0.5 * v.derivative(2 * j)))       # dy^j
        gamma.append(down(wy / w2))     # dwx   (from -d psi)
        gamma.append(down(-wx / w2))    # dwy
        r_q = down(r)
        herm = [[down(e) for e in row] for row in herm1]
        return {"r": r_q, "dr": dr, "gamma": gamma, "hermitian": herm,
                "h": down(h), "order": q}

    def _hermitian_from(self, K):
        n = self.n
        out = []
        for j in range(n):
            dxj = K.derivative(2 * j)
            dyj = K.derivative(2 * j + 1)
            row = []
            for k in range(n):
                row.append(0.25 * (dxj.derivative(2 * k)
                                   + dyj.derivative(2 * k + 1)
                                   + 1j * dxj.derivative(2 * k + 1)
                                   - 1j * dyj.derivative(2 * k)))
            out.append(row)
        return out

    # -- scalar quantities ----------------------------------------------------

    def hermitian_h(self, p):
        """Squared base-metric norm of dz^1 ^ ... ^ dz^n at a base point."""
        data = self._ingredients(list(p) + [1.0, 0.0])
        return float(np.real(data["h"]))

    def radius(self, u):
        wx, wy = float(u[-2]), float(u[-1])
        h = self.hermitian_h(u[:-2])
        return math.sqrt((wx * wx + wy * wy) * h)

    def point(self, p, r, psi):
        """Total-space coordinates for base p, fiber radius r, angle psi."""
        h = self.hermitian_h(p)
        rho = r / math.sqrt(h)
        return list(p) + [rho * math.cos(psi), rho * math.sin(psi)]

    def random_total_points(self, count, seed, rmin=None, rmax=None):
        rng = np.random.default_rng(seed)
        bound = self.profile.domain_bound
        if rmax is None:
            rmax = 2.5 if bound is None else 0.9 * bound
        if rmin is None:
            rmin = 0.15 if bound is None else 0.1 * bound
        pts = []
        for p in self.model.random_points(count, seed):
            r = rng.uniform(rmin, rmax)
            psi = rng.uniform(0.0, 2.0 * np.pi)
            pts.append(self.point(p, r, psi))
        return pts

    # -- forms -----------------------------------------------------------------

    def gamma_form_field(self) -> FormField:
        """Connection 1-form on the punctured total space."""

        def ev(coords):
            data = self._ingredients(coords)
            return AlternatingForm.covector(data["gamma"], self.dim)

        return FormField(1, self.dim, ev)

    def gamma_base_components(self, p):
        """Base part of gamma in the trivialization (the potential 1-form);
        identically zero when the Hermitian norm h is constant."""
        data = self._ingredients(list(p) + [1.0, 0.0])
        return np.array([complex(c).real for c in data["gamma"][:2 * self.n]])

    def base_kahler_form(self, coords) -> AlternatingForm:
        """Pullback of the base Kahler form, as a form in all coordinates."""
        data = self._ingredients(coords)
        return _embedded_kahler(data["hermitian"], self.dim)

    def kahler_pullback_field(self) -> FormField:
        return FormField(2, self.dim, lambda c: self.base_kahler_form(c))

    def upsilon0_field(self) -> FormField:
        """Tautological (n,0)-form w dz^1 ^ ... ^ dz^n on the total space."""
        sigma = dz_wedge(self.n, self.dim)
        nb = 2 * self.n

        def ev(coords):
            w = coords[nb] + 1j * coords[nb + 1]
            return sigma * w

        return FormField(self.n, self.dim, ev)

    def upsilon_field(self) -> FormField:
        """Holomorphic volume form Upsilon = d Upsilon_0."""
        return exterior_derivative_field(self.upsilon0_field())

    def upsilon_closed_form(self) -> AlternatingForm:
        """Independent evaluation dw ^ dz^1 ^ ... ^ dz^n (constant form)."""
        nb = 2 * self.n
        dw = coordinate_form(self.dim, nb) + 1j * coordinate_form(self.dim, nb + 1)
        return wedge(dw, dz_wedge(self.n, self.dim))

    def eta0_at(self, u) -> AlternatingForm:
        """eta0 = dr - i r gamma; requires r > 0."""
        if self.radius(u) <= 1e-14:
            raise DomainError("eta0 is defined away from the zero section")
        data = self._ingredients([float(x) for x in u])
        dr = AlternatingForm.covector(data["dr"], self.dim)
        gam = AlternatingForm.covector(data["gamma"], self.dim)
        return dr + (-1j * data["r"]) * gam

    def complex_structure(self) -> np.ndarray:
        m = self.dim
        J = np.zeros((m, m))
        for j in range(self.n + 1):
            J[2 * j + 1, 2 * j] = 1.0
            J[2 * j, 2 * j + 1] = -1.0
        return J

    # -- metric and 2-form -------------------------------------------------

    def metric_entries(self, coords):
        """Entries of the bundle metric, at the order of `coords`."""
        data = self._ingredients(coords)
        f = self.profile(data["r"])
        r = data["r"]
        dr = data["dr"]
        gamma = data["gamma"]
        herm = data["hermitian"]
        m = self.dim
        nb = 2 * self.n
        finv2 = 1.0 / (f * f)
        fpow = jm.power(f, 2.0 / self.n)
        r2 = r * r
        G = [[None] * m for _ in range(m)]
        for a in range(m):
            for b in range(a, m):
                G[a][b] = finv2 * (dr[a] * dr[b] + r2 * (gamma[a] * gamma[b]))
        # base block: g0 = sum g_{jk} (dz^j x dzbar^k + dzbar^k x dz^j)
        dz = [[0.0] * nb for _ in range(self.n)]
        for j in range(self.n):
            dz[j][2 * j] = 1.0
            dz[j][2 * j + 1] = 1.0j
        for a in range(nb):
            for b in range(a, nb):
                acc = 0.0
                for j in range(self.n):
                    for k in range(self.n):
                        za = dz[j][a]
                        zbb = np.conj(dz[k][b])
                        zba = np.conj(dz[k][a])
                        zb = dz[j][b]
                        coef = za * zbb + zba * zb
                        if coef != 0:
                            acc = acc + herm[j][k] * coef
                G[a][b] = G[a][b] + fpow * acc
        for a in range(m):
            for b in range(a):
                G[a][b] = G[b][a]
        return G

    def metric_at(self, u) -> np.ndarray:
        if not self.profile.in_domain(self.radius(u)):
            raise DomainError("point outside the profile domain")
        G = self.metric_entries([float(x) for x in u])
        M = np.array([[complex(jm.value_of(x)).real for x in row] for row in G])
        return 0.5 * (M + M.T)

    def two_form_field(self) -> FormField:
        """Pi = (i/2) f^-2 eta0 ^ eta0bar + f^(2/n) w
             = -r f^-2 dr ^ gamma + f^(2/n) w."""

        def ev(coords):
            data = self._ingredients(coords)
            f = self.profile(data["r"])
            dr = AlternatingForm.covector(data["dr"], self.dim)
            gam = AlternatingForm.covector(data["gamma"], self.dim)
            finv2 = 1.0 / (f * f)
            fpow = jm.power(f, 2.0 / self.n)
            first = wedge(dr, gam) * (-1.0 * data["r"] * finv2)
            base = _embedded_kahler(data["hermitian"], self.dim)
            return first + base * fpow

        return FormField(2, self.dim, ev)

    def two_form_at(self, u) -> AlternatingForm:
        return self.two_form_field()([float(x) for x in u])

    def holomorphic_volume_at(self, u) -> AlternatingForm:
        return self.upsilon_field()([float(x) for x in u])

    def volume_norm(self, u) -> float:
        return form_norm(self.holomorphic_volume_at(u), self.metric_at(u))

    # -- parametrizations ------------------------------------------------------

    def circle_bundle_map(self) -> SmoothMap:
        """(base, psi) -> unit circle bundle B in total-space coordinates."""
        nb = 2 * self.n
        n = self.n
        potential = self.model.potential

        def ev(params):
            q = _order_of(params)
            vals = [complex(jm.value_of(c)).real for c in params]
            xs = jm.variables(vals, q + 3)
            K = potential(xs[:nb])
            herm = _hermitian_of(K, n)
            v = jm.log(_det_nested(herm))            # order q+1
            rho = jm.exp(0.5 * v)                    # h^(-1/2)
            psi = xs[nb]
            out = list(xs[:nb]) + [rho * jm.cos(psi), rho * jm.sin(psi)]
            if q == 0:
                return [jm.value_of(y) for y in out]
            return [y.truncate(q) if isinstance(y, Jet) and y.order > q else y
                    for y in out]

        return SmoothMap(nb + 1, nb + 2, ev)

    def cone_map(self) -> SmoothMap:
        """(r, base, psi) -> total space, scaling the unit circle bundle."""
        nb = 2 * self.n
        n = self.n
        potential = self.model.potential

        def ev(params):
            q = _order_of(params)
            vals = [complex(jm.value_of(c)).real for c in params]
            xs = jm.variables(vals, q + 3)
            r = xs[0]
            base = xs[1:nb + 1]
            psi = xs[nb + 1]
            K = potential(base)
            herm = _hermitian_of(K, n)
            v = jm.log(_det_nested(herm))
            rho = r * jm.exp(0.5 * v)
            out = list(base) + [rho * jm.cos(psi), rho * jm.sin(psi)]
            if q == 0:
                return [jm.value_of(y) for y in out]
            return [y.truncate(q) if isinstance(y, Jet) and y.order > q else y
                    for y in out]

        return SmoothMap(nb + 2, nb + 2, ev)

    # -- certificates ------------------------------------------------------------

    def structure_equation_residual(self, sample_count=20, seed=11):
        """sup | P*( d Upsilon_0 + i gamma ^ Upsilon_0 ) | over B samples."""
        ups0 = self.upsilon0_field()
        dups0 = exterior_derivative_field(ups0)
        gam = self.gamma_form_field()
        P = self.circle_bundle_map()
        rng = np.random.default_rng(seed)
        worst = 0.0
        for p in self.model.random_points(sample_count, seed):
            psi = rng.uniform(0, 2 * np.pi)
            params = list(p) + [psi]
            tot = P.value(params)
            lhs = dups0(tot) + 1j * wedge(gam(tot), ups0(tot))
            worst = max(worst, pullback(P, lhs, params).max_abs())
        return worst

    def curvature_residual(self, sample_count=20, seed=12):
        """sup | d gamma + c w |  on the punctured total space."""
        dgam = exterior_derivative_field(self.gamma_form_field())
        c = self.model.declared_c
        worst = 0.0
        for u in self.random_total_points(sample_count, seed):
            w = self.base_kahler_form([float(x) for x in u])
            worst = max(worst, (dgam(u) + c * w).max_abs())
        return worst

    def certify_connection(self, sample_count=6, tol=1e-8, seed=11):
        res9 = self.structure_equation_residual(sample_count, seed)
        if res9 > tol:
            raise CertificationError(
                f"tautological structure equation failed: residual {res9:.3e}")
        res10 = self.curvature_residual(sample_count, seed + 1)
        if res10 > tol:
            raise CertificationError(
                f"connection curvature certificate failed: residual {res10:.3e}")
        return res9, res10

    def volume_decomposition_residual(self, sample_count=20, seed=13):
        """sup | Q*(Upsilon) - eta0 ^ Upsilon_0 | on R+ x B."""
        Q = self.cone_map()
        ups = self.upsilon_field()
        ups0 = self.upsilon0_field()
        gam = self.gamma_form_field()
        PB = self.circle_bundle_map()
        nb = 2 * self.n
        rng = np.random.default_rng(seed)
        bound = self.profile.domain_bound
        rmax = 2.0 if bound is None else 0.85 * bound
        worst = 0.0
        for p in self.model.random_points(sample_count, seed):
            r = rng.uniform(0.2, rmax)
            psi = rng.uniform(0, 2 * np.pi)
            params = [r] + list(p) + [psi]
            tot = Q.value(params)
            lhs = pullback(Q, ups(tot), params)
            bparams = list(p) + [psi]
            btot = PB.value(bparams)
            ups0_B = _promote(pullback(PB, ups0(btot), bparams), offset=1)
            gam_B = _promote(pullback(PB, gam(btot), bparams), offset=1)
            dr = coordinate_form(nb + 2, 0)
            eta0 = dr + (-1j * r) * gam_B
            rhs = wedge(eta0, ups0_B)
            worst = max(worst, (lhs - rhs).max_abs())
        return worst

    # -- curvature of the bundle metric -------------------------------------

    def ricci_tensor_at(self, u) -> np.ndarray:
        return riemannian_ricci(self.metric_entries, [float(x) for x in u],
                                self.dim)

    def ricci_residual(self, sample_count=20, seed=5, rmin=None, rmax=None):
        """(max |Ric_ab|, skipped count) over sampled points."""
        worst = 0.0
        skipped = 0
        for u in self.random_total_points(sample_count, seed, rmin, rmax):
            if not self.profile.in_domain(self.radius(u)):
                skipped += 1
                continue
            ric = self.ricci_tensor_at(u)
            worst = max(worst, float(np.max(np.abs(ric))))
        return worst, skipped

    # -- coframe bookkeeping -----------------------------------------------------

    def unitary_coframe(self, p) -> np.ndarray:
        """U with eta^j = sum_k U[j,k] dz^k a unitary base coframe
        (each complex leg of squared norm 2)."""
        G, _ = self.model.metric_at(p)
        n = self.n
        dzs = [coordinate_form(2 * n, 2 * j) + 1j * coordinate_form(2 * n, 2 * j + 1)
               for j in range(n)]
        M = np.zeros((n, n), dtype=np.complex128)
        for a in range(n):
            for b in range(n):
                M[a, b] = form_inner(dzs[a], dzs[b], G)
        L = np.linalg.cholesky(M)
        return math.sqrt(2.0) * np.linalg.inv(L)


# ---------------------------------------------------------------------------
# module-level conveniences
# ---------------------------------------------------------------------------


def hermitian_h(model: KahlerModel, p) -> float:
    """|dz^1 ^ ... ^ dz^n|^2 under the base metric (= 1/det g_{j kbar})."""
    return CYBundle(model, certify=False).hermitian_h(p)


def connection_gamma(model: KahlerModel, certify=True, tol=1e-8,
                     sample_count=6):
    """Certified canonical-bundle connection over `model`.

    Returns (bundle, (structure_residual, curvature_residual)).
    """
    bundle = CYBundle(model, certify=False)
    res = (None, None)
    if certify:
        res = bundle.certify_connection(sample_count, tol)
    return bundle, res


def tautological_upsilon0(bundle: CYBundle, u) -> AlternatingForm:
    return bundle.upsilon0_field()([float(x) for x in u])


def _hermitian_of(K, n):
    out = []
    for j in range(n):
        dxj = K.derivative(2 * j)
        dyj = K.derivative(2 * j + 1)
        row = []
        for k in range(n):
            row.append(0.25 * (dxj.derivative(2 * k) + dyj.derivative(2 * k + 1)
                               + 1j * dxj.derivative(2 * k + 1)
                               - 1j * dyj.derivative(2 * k)))
        out.append(row)
    return out


def _det_nested(entries):
    n = len(entries)
    if n == 1:
        return entries[0][0]
    if n == 2:
        return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]
    total = 0.0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = entries[0][j] * _det_nested(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


def _embedded_kahler(hermitian, dim):
    """i sum g_{j kbar} dz^j ^ dzbar^k as a form in `dim` coordinates."""
    n = len(hermitian)
    total = None
    for j in range(n):
        dz = coordinate_form(dim, 2 * j) + 1j * coordinate_form(dim, 2 * j + 1)
        for k in range(n):
            dzb = coordinate_form(dim, 2 * k) - 1j * coordinate_form(dim, 2 * k + 1)
            term = wedge(dz, dzb) * (1j * hermitian[j][k])
            total = term if total is None else total + term
    return total


def _promote(form: AlternatingForm, offset: int) -> AlternatingForm:
    """Reindex a form into a chart with `offset` new leading coordinates."""
    new_dim = form.dim + offset
    out = AlternatingForm(form.degree, new_dim)
    _, lookup = _indices(new_dim, form.degree)
    coeffs = np.zeros(math.comb(new_dim, form.degree), dtype=object)
    for pos, I in enumerate(form.indices()):
        target = tuple(i + offset for i in I)
        coeffs[lookup[target]] = form.coeffs[pos]
    out.coeffs = _tighten(coeffs)
    return out


def riemannian_ricci(metric_fn, point, m) -> np.ndarray:
    """Ricci tensor of a metric given by an entry evaluator over a chart.

    metric_fn(coords) must return an m x m nested list of entries and
    support coordinate jets; two derivative orders are extracted here.
    """
    xs = jm.variables([float(x) for x in point], 2)
    Gj = metric_fn(xs)
    G0 = np.zeros((m, m))
    dG = np.zeros((m, m, m))       # dG[c, a, b] = d_c G_ab
    d2G = np.zeros((m, m, m, m))   # d2G[c, d, a, b]
    for a in range(m):
        for b in range(m):
            e = Gj[a][b]
            if not isinstance(e, Jet):
                G0[a, b] = float(np.real(e))
                continue
            G0[a, b] = float(np.real(e.value))
            for c in range(m):
                dG[c, a, b] = float(np.real(e.partial(c)))
                for d in range(c, m):
                    val = float(np.real(e.second_partial(c, d)))
                    d2G[c, d, a, b] = val
                    d2G[d, c, a, b] = val
    G0 = 0.5 * (G0 + G0.T)
    Ginv = np.linalg.inv(G0)
    Gam = np.zeros((m, m, m))
    for a in range(m):
        for b in range(m):
            for c in range(m):
                s = 0.0
                for d in range(m):
                    s += Ginv[a, d] * (dG[b, d, c] + dG[c, b, d] - dG[d, b, c])
                Gam[a, b, c] = 0.5 * s
    dGinv = -np.einsum("ae,cef,fb->cab", Ginv, dG, Ginv)
    dGam = np.zeros((m, m, m, m))  # dGam[e, a, b, c] = d_e Gamma^a_bc
    for e in range(m):
        for a in range(m):
            for b in range(m):
                for c in range(m):
                    s = 0.0
                    for d in range(m):
                        s += dGinv[e, a, d] * (dG[b, d, c] + dG[c, b, d]
                                               - dG[d, b, c])
                        s += Ginv[a, d] * (d2G[e, b, d, c] + d2G[e, c, b, d]
                                           - d2G[e, d, b, c])
                    dGam[e, a, b, c] = 0.5 * s
    # R^a_{bcd} = d_c Gam^a_{db} - d_d Gam^a_{cb}
    #             + Gam^a_{ce} Gam^e_{db} - Gam^a_{de} Gam^e_{cb}
    Ric = np.zeros((m, m))
    for b in range(m):
        for d in range(m):
            s = 0.0
            for a in range(m):
                s += dGam[a, a, d, b] - dGam[d, a, a, b]
                for e in range(m):
                    s += Gam[a, a, e] * Gam[e, d, b] - Gam[a, d, e] * Gam[e, a, b]
            Ric[b, d] = s
    return Ric
