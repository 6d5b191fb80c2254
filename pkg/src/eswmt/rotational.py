"""
Special catenoids: rotational surfaces with H = f(q) built by integrating the generatrix
in arc length ell with turning angle theta,

    rho' = cos(theta),  z' = sin(theta),  theta' = kappa_m,  kappa_p = sin(theta)/rho,

where the meridian curvature kappa_m solves the Weingarten relation pointwise.
The curve starts at the neck (tau, 0, pi/2) and rises with theta decreasing towards 0.
"""

# Modules
import logging
import warnings
import numpy as np
from scipy.interpolate import CubicHermiteSpline
from . import newton_opt
from .errors import (GeneratrixError, StiffIntegrationError, RootBracketError,
                     EswmtWarning)
from .profile import admissible_tau_range
from .surface_kernel import ParametricPatch, integrate_field, curvatures

logger = logging.getLogger('eswmt.rotational')

STATE = ('ell', 'rho', 'z', 'theta', 'kappa_m', 'kappa_p', 'sigma', 'area')
COLUMNS = STATE + ('H', 'K', 'q', 'residual')  # table columns; the last four derived

# ========================================================================================


def meridian_from_parallel(p, kappa_p, hint=None, tol=None, maxiter=None, trace=None):
    """
    Root of g(x) = (x + kappa_p)/2 - f(((x - kappa_p)/2)^2).

    g is strictly increasing for elliptic f (0 < g' < 1), so a bracket found by doubling
    the search step holds exactly one root, which safeguarded Newton then polishes.
    """
    tol = newton_opt['tol'] if tol is None else tol
    maxiter = newton_opt['maxiter'] if maxiter is None else maxiter
    kp = float(kappa_p)
    if not np.isfinite(kp):
        raise RootBracketError('root bracketing failure: kappa_p = {0!r}'.format(kp))

    def g(x):
        d = 0.5 * (x - kp)
        return 0.5 * (x + kp) - float(p.eval(d * d))

    def dg(x):
        d = 0.5 * (x - kp)
        if d == 0.0:
            return 0.5
        return 0.5 - float(p.deriv(d * d)) * d

    x0 = -kp if hint is None else float(hint)
    g0 = g(x0)
    if g0 == 0.0:
        return x0
    step = 1e-3 * max(1.0, abs(kp), abs(x0))
    lo = hi = x0
    glo = ghi = g0
    for i in range(newton_opt['max_expand']):
        if g0 < 0.0:
            lo, glo = hi, ghi
            hi = x0 + step
            ghi = g(hi)
            if ghi >= 0.0:
                break
        else:
            hi, ghi = lo, glo
            lo = x0 - step
            glo = g(lo)
            if glo <= 0.0:
                break
        step *= 2.0
    else:
        raise RootBracketError('root bracketing failure for kappa_p = {0!r} after {1} '
                               'expansions'.format(kp, newton_opt['max_expand']))
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi

    x = x0 if lo < x0 < hi else 0.5 * (lo + hi)
    dx_old = dx = hi - lo
    fx, dfx = g(x), dg(x)
    for i in range(maxiter):
        if trace is not None:
            trace.append(x)
        if ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > 0.0 \
                or abs(2.0 * fx) > abs(dx_old * dfx):
            dx_old, dx = dx, 0.5 * (hi - lo)
            x = lo + dx
        else:
            dx_old, dx = dx, fx / dfx
            x = x - dx
        if abs(dx) < tol * (1.0 + abs(x)):
            break
        fx, dfx = g(x), dg(x)
        if fx == 0.0:
            break
        if fx < 0.0:
            lo = x
        else:
            hi = x
    else:
        raise RootBracketError('meridian curvature did not converge for kappa_p = '
                               '{0!r}'.format(kp))
    return x


# ========================================================================================


class Generatrix(object):
    """Arc-length samples of the profile curve of a rotational ESWMT surface"""

    def __init__(self, tau, data, profile, full=False, settings=None):
        self.tau = float(tau)
        self.data = {k: np.asarray(data[k], dtype=float) for k in STATE}
        self.profile = profile
        self.full = full
        self.settings = settings  # integrator keywords, None when read from a table
        self.profile_id = profile.label

    def __len__(self):
        return self.data['ell'].size

    def __getattr__(self, name):
        data = self.__dict__.get('data')
        if data is not None and name in data:
            return data[name]
        raise AttributeError(name)

    @property
    def H(self):
        return 0.5 * (self.kappa_m + self.kappa_p)

    @property
    def q(self):
        return (0.5 * (self.kappa_m - self.kappa_p))**2

    @property
    def K(self):
        return self.kappa_m * self.kappa_p

    def residual(self):
        """sup |H - f(q)| over the samples"""
        return float(np.max(np.abs(self.H - np.asarray(self.profile.eval(self.q)))))

    def table(self):
        """All table columns, the state plus H, K, q and the pointwise H - f(q)"""
        cols = dict(self.data)
        cols.update({'H': self.H, 'K': self.K, 'q': self.q,
                     'residual': self.H - np.asarray(self.profile.eval(self.q))})
        return cols

    def upper(self):
        """Samples with ell >= 0"""
        if not self.full:
            return self
        keep = self.ell >= 0.0
        return Generatrix(self.tau, {k: v[keep] for k, v in self.data.items()},
                          self.profile, settings=self.settings)

    def spline(self, key):
        slopes = {'rho': np.cos(self.theta), 'z': np.sin(self.theta),
                  'theta': self.kappa_m, 'sigma': 1.0 / self.rho,
                  'area': 2.0 * np.pi * self.rho}
        return CubicHermiteSpline(self.ell, self.data[key], slopes[key])

    def interpolate(self, ell):
        """Generatrix at arbitrary arc lengths; kappa_m is re-solved at each point"""
        ell = np.asarray(ell, dtype=float)
        if np.any(ell < self.ell[0] - 1e-12) or np.any(ell > self.ell[-1] + 1e-12):
            raise GeneratrixError('arc lengths outside the sampled range [{0}, {1}]'
                                  .format(self.ell[0], self.ell[-1]))
        data = {'ell': ell}
        for key in ('rho', 'z', 'theta', 'sigma', 'area'):
            data[key] = self.spline(key)(ell)
        # node values exactly
        idx = np.searchsorted(self.ell, ell)
        idx = np.clip(idx, 0, len(self) - 1)
        hit = self.ell[idx] == ell
        for key in ('rho', 'z', 'theta', 'sigma', 'area'):
            data[key][hit] = self.data[key][idx[hit]]
        data['kappa_p'] = np.sin(data['theta']) / data['rho']
        km = np.empty_like(ell)
        hints = np.interp(ell, self.ell, self.kappa_m)
        for i in range(ell.size):
            if hit[i]:
                km[i] = self.kappa_m[idx[i]]
            else:
                km[i] = meridian_from_parallel(self.profile, data['kappa_p'][i], hints[i])
        data['kappa_m'] = km
        return Generatrix(self.tau, data, self.profile, full=np.any(ell < 0.0))

    def resample(self, ell):
        """
        Generatrix whose samples are integrator nodes at the requested arc lengths, so
        that no interpolation error enters derivatives taken across them. Tables without
        integrator settings, and arc lengths on the lower branch, are interpolated.
        """
        ell = np.asarray(ell, dtype=float)
        if self.settings is None or np.any(ell < 0.0) or not np.max(ell) > 0.0:
            return self.interpolate(ell)
        g = integrate_generatrix(self.profile, self.tau, float(np.max(ell)), ell_out=ell,
                                 **self.settings)
        idx = np.searchsorted(g.ell, ell)
        return Generatrix(self.tau, {k: v[idx] for k, v in g.data.items()}, self.profile,
                          settings=self.settings)

    def _upper_branch(self, key, slope):
        up = self.upper()
        sl = slice(1, None)  # the neck has a vertical tangent
        return CubicHermiteSpline(up.rho[sl], up.data[key][sl], slope(up)[sl])

    def height_at_radius(self, rho, end='top'):
        """z on the upper (top) or mirrored lower (bottom) branch as a function of rho"""
        rho = np.asarray(rho, dtype=float)
        up = self.upper()
        if np.any(rho < up.rho[1]) or np.any(rho > up.rho[-1]):
            raise GeneratrixError('radius outside sampled range [{0:.6g}, {1:.6g}]'
                                  .format(up.rho[1], up.rho[-1]))
        z = self._upper_branch('z', lambda g: np.tan(g.theta))(rho)
        return z if end == 'top' else -z

    def area_at_radius(self, rho):
        """Area of one half from the neck out to the parallel of radius rho"""
        rho = np.asarray(rho, dtype=float)
        return self._upper_branch('area',
                                  lambda g: 2.0 * np.pi * g.rho / np.cos(g.theta))(rho)

    def tail_behavior(self):
        """'proper' when z keeps growing like log(rho), 'strip' when it saturates"""
        up = self.upper()
        slope = up.rho[-1] * np.tan(up.theta[-1])  # dz/dlog(rho)
        kind = 'proper' if slope >= 0.5 * self.tau else 'strip'
        if kind == 'strip':
            warnings.warn('generatrix tail saturates in height (dz/dlog rho = {0:.3g})'
                          .format(slope), EswmtWarning)
        return kind, float(slope)

    def check_invariants(self, tol=1e-8):
        """Neck minimum, convexity of rho(z), Weingarten residual and arc length"""
        up = self.upper()
        drho = np.diff(up.rho)
        dz = np.diff(up.z)
        with np.errstate(divide='ignore', invalid='ignore'):
            slopes = drho / dz
        slopes = slopes[np.isfinite(slopes)]
        # drho/dz non-decreasing in z
        second = np.diff(slopes) / (1.0 + np.abs(slopes[1:]))
        # unit speed: increments of rho and z against the integrals of cos and sin theta,
        # by the end-corrected trapezoid rule (exact for cubics, theta' = kappa_m)
        h = np.diff(up.ell)
        c, s, k = np.cos(up.theta), np.sin(up.theta), up.kappa_m

        def integral(g, dg):
            return 0.5 * h * (g[:-1] + g[1:]) + h * h / 12.0 * (dg[:-1] - dg[1:])

        speed = np.maximum(np.abs(np.diff(up.rho) - integral(c, -s * k)),
                           np.abs(np.diff(up.z) - integral(s, c * k))) / h
        return {'neck': bool(up.rho[0] == self.tau and np.all(up.rho >= self.tau)),
                'convex': bool(second.size == 0 or np.min(second) >= -tol),
                'min_second_difference': float(np.min(second)) if second.size else 0.0,
                'residual': self.residual(),
                'arclength_defect': float(np.max(speed)) if h.size else 0.0}

    def as_dict(self):
        return {k: v.tolist() for k, v in self.data.items()}


# ========================================================================================


def _rhs(p, state):
    """Derivative of (rho, z, theta, sigma, area); state['hint'] warm-starts the root"""
    def f(y):
        rho, theta = y[0], y[2]
        km = meridian_from_parallel(p, np.sin(theta) / rho, state.get('hint'))
        state['hint'] = km
        return np.array([np.cos(theta), np.sin(theta), km, 1.0 / rho,
                         2.0 * np.pi * rho])
    return f


def _rk4(f, y, h):
    half_h = 0.5 * h
    k1 = f(y)
    k2 = f(y + half_h * k1)
    k3 = f(y + half_h * k2)
    k4 = f(y + h * k3)
    return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_generatrix(p, tau, ell_max, step=None, tol=1e-11, h0=1e-2, h_max=0.5,
                         rel_step=0.05, h_min=1e-12, ell_out=None, max_steps=1000000):
    """
    Half generatrix on [0, ell_max] from the neck at radius tau.

    Keyword arguments:
    step -- fixed RK4 step; None selects step doubling with local error tol
    h_max, rel_step -- the step never exceeds h_max nor rel_step * rho
    ell_out -- if given, only these arc lengths (plus the neck) are recorded and the
               integrator lands on each of them exactly
    """
    lo, hi = admissible_tau_range(p)
    if not (lo < tau < hi) or not np.isfinite(tau):
        raise GeneratrixError('neck radius tau = {0!r} outside admissible range '
                              '({1:g}, {2:g})'.format(tau, lo, hi))
    if not ell_max > 0.0:
        raise GeneratrixError('ell_max must be positive, got {0!r}'.format(ell_max))
    targets = None
    if ell_out is not None:
        targets = np.unique(np.asarray(ell_out, dtype=float))
        targets = targets[targets > 0.0]
        if targets.size == 0 or targets[-1] > ell_max * (1.0 + 1e-14):
            raise GeneratrixError('output arc lengths must lie in (0, ell_max]')
        ell_max = targets[-1]

    state = {}
    f = _rhs(p, state)
    y = np.array([tau, 0.0, 0.5 * np.pi, 0.0, 0.0])
    km0 = meridian_from_parallel(p, 1.0 / tau)
    state['hint'] = km0
    rows = [(0.0, tau, 0.0, 0.5 * np.pi, km0, 1.0 / tau, 0.0, 0.0)]

    ell = 0.0
    h = step if step is not None else h0
    it = 0
    n_target = 0
    while ell < ell_max * (1.0 - 1e-15):
        it += 1
        if it > max_steps:
            raise StiffIntegrationError('stiff integration failure: more than {0} steps'
                                        .format(max_steps))
        h_cap = h if step is not None else min(h, h_max, rel_step * y[0])
        end = targets[n_target] if targets is not None else ell_max
        landing = ell + h_cap >= end * (1.0 - 1e-14)
        h_try = end - ell if landing else h_cap

        if step is not None:
            y_new = _rk4(f, y, h_try)
            accepted = True
        else:
            y1 = _rk4(f, y, h_try)
            y2 = _rk4(f, _rk4(f, y, 0.5 * h_try), 0.5 * h_try)
            err = np.max(np.abs(y2 - y1) / (15.0 * (1.0 + np.abs(y2))))
            accepted = err <= tol
            factor = 4.0 if err == 0.0 else min(4.0, max(0.1, 0.9 * (tol / err)**0.2))
            if accepted:
                y_new = y2 + (y2 - y1) / 15.0
                if not landing:
                    h = h_try * factor
            else:
                h = h_try * factor
                if h < h_min:
                    raise StiffIntegrationError('stiff integration failure: step '
                                                'underflow at ell = {0:.6g}'.format(ell))
                continue

        if accepted:
            ell = end if landing else ell + h_try
            y = y_new
            if not (y[0] > 0.0 and 0.0 < y[2] < np.pi):
                raise GeneratrixError('profile degeneration at ell = {0:.6g}: '
                                      'rho = {1:.6g}, theta = {2:.6g}'
                                      .format(ell, y[0], y[2]))
            if targets is None or landing:
                kp = np.sin(y[2]) / y[0]
                km = meridian_from_parallel(p, kp, state.get('hint'))
                rows.append((ell, y[0], y[1], y[2], km, kp, y[3], y[4]))
            if landing and targets is not None:
                n_target += 1
                if n_target == targets.size:
                    break

    data = dict(zip(STATE, np.array(rows).T))
    logger.debug('generatrix {0} tau={1:g}: {2} samples, {3} steps, rho_end = {4:.6g}'
                 .format(p.label, tau, len(rows), it, y[0]))
    return Generatrix(tau, data, p, settings=dict(step=step, tol=tol, h0=h0, h_max=h_max,
                                                  rel_step=rel_step, h_min=h_min,
                                                  max_steps=max_steps))


def mirror_extend(g):
    """Full generatrix from the half starting at the neck; the neck is not duplicated"""
    if g.full or g.ell[0] != 0.0 or abs(g.theta[0] - 0.5 * np.pi) > 1e-15:
        raise GeneratrixError('not a neck-anchored generatrix')
    flip = {'ell': -1.0, 'rho': 1.0, 'z': -1.0, 'kappa_m': 1.0, 'kappa_p': 1.0,
            'sigma': -1.0, 'area': -1.0}
    data = {}
    for key in STATE:
        tail = g.data[key][:0:-1]
        lower = np.pi - tail if key == 'theta' else flip[key] * tail
        data[key] = np.concatenate((lower, g.data[key]))
    return Generatrix(g.tau, data, g.profile, full=True, settings=g.settings)


def revolve(g, n_theta=64, ell=None, conformal=False):
    """
    Surface of revolution X(u, phi) = (rho cos phi, rho sin phi, z) with analytic forms.

    u is arc length, or the conformal coordinate sigma (d sigma = d ell/rho) when
    conformal is set. phi covers [0, 2 pi) and the patch is periodic in phi.
    """
    if n_theta < 8:
        raise GeneratrixError('revolve needs n_theta >= 8, got {0}'.format(n_theta))
    if ell is not None:
        g = g.interpolate(ell)
    phi = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    return _rotational_patch(g, phi, conformal, periodic_v=True)


def band_patch(g, ell, phi, conformal=True):
    """Rotational patch over arc lengths ell and an arbitrary (non-closing) phi range"""
    return _rotational_patch(g.resample(ell), np.asarray(phi, dtype=float), conformal,
                             periodic_v=False)


def _rotational_patch(g, phi, conformal, periodic_v):
    rho, z, th = g.rho[:, None], g.z[:, None], g.theta[:, None]
    cp, sp = np.cos(phi)[None, :], np.sin(phi)[None, :]
    X = np.stack(np.broadcast_arrays(rho * cp, rho * sp, z + 0.0 * cp), axis=-1)
    N = np.stack(np.broadcast_arrays(-np.sin(th) * cp, -np.sin(th) * sp,
                                     np.cos(th) + 0.0 * cp), axis=-1)
    ones = np.ones((g.rho.size, phi.size))
    scale = rho**2 if conformal else 1.0
    forms = {'E': scale * ones, 'F': 0.0 * rho * ones, 'G': rho**2 * ones,
             'L': g.kappa_m[:, None] * scale * ones, 'M': 0.0 * rho * ones,
             'Nn': g.kappa_p[:, None] * rho**2 * ones, 'N': N}
    u = g.sigma if conformal else g.ell
    if np.any(np.diff(u) <= 0.0):
        raise GeneratrixError('rotational patch needs strictly increasing samples')
    patch = ParametricPatch.from_forms(u, phi, X, forms, periodic_v=periodic_v,
                                       label='rotational {0}'.format(g.profile_id))
    patch.meta.update({'rotational': True, 'conformal': conformal, 'tau': g.tau,
                       'profile': g.profile.as_dict(), 'ell': g.ell, 'rho': g.rho,
                       'theta': g.theta})
    patch.generatrix = g
    return patch


def band_total_curvature(g, l1, l2, n=2001, n_theta=16):
    """
    Total curvature of the band l1 <= ell <= l2.

    Returns the exact turning-angle value 2 pi (cos theta(l1) - cos theta(l2)) and the
    value of the 2-D quadrature of K dA over the revolved band.
    """
    if l2 < l1:
        raise GeneratrixError('band needs l1 <= l2')
    if l1 == l2:
        return 0.0, 0.0
    ends = g.interpolate(np.array([l1, l2]))
    exact = 2.0 * np.pi * (np.cos(ends.theta[0]) - np.cos(ends.theta[1]))
    patch = revolve(g, n_theta, ell=np.linspace(l1, l2, n | 1))
    quadrature = integrate_field(patch, curvatures(patch)['K'])
    return float(exact), float(quadrature)


def comparison_catenoid_check(g, tail_fraction=0.5, tol=1e-10):
    """
    Checks that the tail stays on the axis side of a catenoid of neck tau:
    rho(z) <= tau cosh((z - z0)/tau) with z0 fitted at the start of the tail.
    """
    up = g.upper()
    tail = up.ell >= (1.0 - tail_fraction) * up.ell[-1]
    w = up.z[tail] - g.tau * np.arccosh(np.maximum(up.rho[tail] / g.tau, 1.0))
    z0 = float(w[0])
    margin = float(np.min(w - z0))
    return {'z0': z0, 'margin': margin, 'passes': margin >= -tol,
            'gap_end': float(w[-1] - z0)}
