"""
Weingarten profiles f for surfaces with H = f(H^2 - K), and the numerical gate
deciding whether a profile is elliptic of minimal type.
"""

# Modules
import logging
import warnings
import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator
from scipy.optimize import minimize_scalar
from . import quad_opt
from .errors import ProfileError, InconclusiveLimit, EswmtWarning

logger = logging.getLogger('eswmt.profile')

# ========================================================================================


class WeingartenProfile(object):
    """Parent class for Weingarten functions f(t), t = q = H^2 - K >= 0"""
    name = None

    def __init__(self, label=None):
        self.label = label if label is not None else self.name
        self.analytic_hint = None  # closed-form tag usable by test oracles
        self.params = {}

    def __repr__(self):
        return '{0}({1})'.format(self.__class__.__name__, self.label)

    def eval(self, t):
        """f(t) for t >= 0"""
        raise NotImplementedError

    def deriv(self, t):
        """f'(t) for t > 0"""
        raise NotImplementedError

    def phi_closed(self, r):
        """Closed form of phi(r) = int_0^r 2 f'(s^2) ds, if the profile has one"""
        raise NotImplementedError

    def has_closed_phi(self):
        try:
            self.phi_closed(1.0)
        except NotImplementedError:
            return False
        return True

    def as_dict(self):
        """Serializable spec accepted by make_profile()"""
        spec = {'name': self.name}
        spec.update(self.params)
        return spec


class Zero(WeingartenProfile):
    """f = 0: minimal surfaces"""
    name = 'zero'

    def __init__(self):
        super(Zero, self).__init__()
        self.analytic_hint = 'minimal'

    def eval(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))[()]

    def deriv(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))[()]

    def phi_closed(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))[()]


class Rational(WeingartenProfile):
    """f(t) = a t/(1+t), elliptic for 0 <= a < 8/(3 sqrt 3)"""
    name = 'rational'

    def __init__(self, a=1.0):
        super(Rational, self).__init__('rational({0:g})'.format(a))
        self.a = float(a)
        self.params = {'a': self.a}
        self.analytic_hint = 'rational'

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        return (self.a * t / (1.0 + t))[()]

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        return (self.a / (1.0 + t)**2)[()]

    def phi_closed(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide='ignore', invalid='ignore'):
            frac = np.where(r > 1.0, 1.0 / (r + 1.0 / r), r / (1.0 + r * r))
        return (self.a * (np.arctan(r) + frac))[()]


class SquareRoot(WeingartenProfile):
    """f(t) = c sqrt(t); not Lipschitz at 0"""
    name = 'sqrt'

    def __init__(self, c=0.5):
        super(SquareRoot, self).__init__('sqrt({0:g})'.format(c))
        self.c = float(c)
        self.params = {'c': self.c}

    def eval(self, t):
        return (self.c * np.sqrt(np.asarray(t, dtype=float)))[()]

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide='ignore'):
            return (0.5 * self.c / np.sqrt(t))[()]


class Saturating(WeingartenProfile):
    """
    f(t) = sqrt(t) - L + L exp(-sqrt(t)/L).

    sqrt(t) - f(t) tends to L, so only the weaker existence hypotheses hold and the
    neck radius must exceed 1/L.
    """
    name = 'saturating'

    def __init__(self, L=1.0):
        super(Saturating, self).__init__('saturating({0:g})'.format(L))
        if L <= 0.0:
            raise ProfileError('saturating profile needs L > 0, got {0}'.format(L))
        self.L = float(L)
        self.params = {'L': self.L}

    def eval(self, t):
        x = np.sqrt(np.asarray(t, dtype=float)) / self.L
        series = x * x * (0.5 - x / 6.0 + x * x / 24.0)
        return (self.L * np.where(x < 1e-4, series, np.expm1(-x) + x))[()]

    def deriv(self, t):
        x = np.sqrt(np.asarray(t, dtype=float)) / self.L
        with np.errstate(divide='ignore', invalid='ignore'):
            ratio = np.where(x > 0.0, -np.expm1(-x) / x, 1.0)
        return (0.5 * ratio / self.L)[()]


class Table(WeingartenProfile):
    """Monotone cubic interpolation of user (t, f) pairs, constant past the last knot"""
    name = 'custom-table'

    def __init__(self, t, f, label=None):
        t = np.asarray(t, dtype=float)
        f = np.asarray(f, dtype=float)
        if t.ndim != 1 or t.shape != f.shape or t.size < 2:
            raise ProfileError('profile table needs two equal-length columns')
        if t[0] != 0.0:
            t = np.concatenate(([0.0], t))
            f = np.concatenate(([0.0], f))
        if f[0] != 0.0:
            raise ProfileError('profile table must have f(0) = 0')
        if np.any(np.diff(t) <= 0.0):
            raise ProfileError('profile table abscissae must increase strictly')
        super(Table, self).__init__(label or 'custom-table({0} knots)'.format(t.size))
        self.t_knots = t
        self.f_knots = f
        self._interp = PchipInterpolator(t, f, extrapolate=False)
        self._dinterp = self._interp.derivative()
        self.params = {'t': t.tolist(), 'f': f.tolist()}

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= self.t_knots[-1], self.f_knots[-1], self._interp(t))[()]

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= self.t_knots[-1], 0.0, self._dinterp(t))[()]


_registry = {cls.name: cls for cls in (Zero, Rational, SquareRoot, Saturating, Table)}


def make_profile(spec):
    """
    Builds a profile from a spec: a dict with 'name' plus parameters, or a string such
    as 'zero', 'rational(0.5)'.
    """
    if isinstance(spec, WeingartenProfile):
        return spec
    if isinstance(spec, str):
        name, _, rest = spec.partition('(')
        spec = {'name': name.strip()}
        if rest:
            args = [float(a) for a in rest.rstrip(')').split(',') if a.strip()]
            keys = {'rational': ['a'], 'sqrt': ['c'], 'saturating': ['L']}
            spec.update(zip(keys.get(spec['name'], []), args))
    spec = dict(spec)
    name = spec.pop('name', None)
    if name not in _registry:
        raise ProfileError('unknown profile "{0}"; valid profiles are {1}'.format(
            name, ', '.join(sorted(_registry))))
    cls = _registry[name]
    if cls is Table:
        if 'table' in spec:
            data = np.loadtxt(spec['table'], comments='#', delimiter=None, ndmin=2)
            return Table(data[:, 0], data[:, 1])
        return Table(spec['t'], spec['f'])
    try:
        return cls(**spec)
    except TypeError:
        raise ProfileError('bad parameters {0} for profile "{1}"'.format(spec, name))

# ========================================================================================


class Sampling(object):
    """Log-spaced grid over [t_min, t_max]"""

    def __init__(self, t_min=1e-8, t_max=1e8, num=1000):
        if not 0.0 < t_min < t_max or num < 10:
            raise ProfileError('bad sampling spec t_min={0} t_max={1} num={2}'.format(
                t_min, t_max, num))
        self.t_min = float(t_min)
        self.t_max = float(t_max)
        self.num = int(num)

    def grid(self):
        return np.logspace(np.log10(self.t_min), np.log10(self.t_max), self.num)

    def as_dict(self):
        return {'t_min': self.t_min, 't_max': self.t_max, 'num': self.num}


class GrowthLimit(object):
    """Estimate of lim (sqrt(t) - f(t)) as t -> infinity"""

    def __init__(self, status, value, t, d):
        self.status = status  # 'diverges', 'converges' or 'inconclusive'
        self.value = value
        self.t = t
        self.d = d

    @property
    def diverges(self):
        return self.status == 'diverges'

    def as_dict(self):
        return {'status': self.status, 'value': self.value}


class ProfileReport(object):
    """Outcome of validate_profile()"""

    def __init__(self, label):
        self.label = label
        self.conditions = {}  # condition name -> bool
        self.witness = {}     # condition name -> offending t
        self.inconclusive = []
        self.sup_ellipticity = None
        self.t_sup_ellipticity = None
        self.c_bar = None
        self.lipschitz_constant = None
        self.growth_limit = None

    @property
    def passes(self):
        return all(self.conditions.values()) and not self.inconclusive

    def as_dict(self):
        return {'label': self.label,
                'passes': self.passes,
                'conditions': dict(self.conditions),
                'witness': dict(self.witness),
                'inconclusive': list(self.inconclusive),
                'sup_ellipticity': self.sup_ellipticity,
                't_sup_ellipticity': self.t_sup_ellipticity,
                'c_bar': self.c_bar,
                'lipschitz_constant': self.lipschitz_constant,
                'growth_limit': self.growth_limit.as_dict()}


def _checked(func, t, what):
    values = np.asarray(func(t), dtype=float)
    bad = ~np.isfinite(values)
    if np.any(bad):
        t_bad = np.atleast_1d(t)[np.atleast_1d(bad)][0]
        raise ProfileError('profile evaluation failure: {0} not finite at t = {1!r}'
                           .format(what, t_bad))
    return values


def _monotone(values):
    tol = 1e-12 * max(1.0, np.max(np.abs(values)))
    d = np.diff(values)
    return bool(np.all(d >= -tol) or np.all(d <= tol))


def _refine_max(func, t, values):
    """Refines a sampled maximum of func by bounded minimization in log t"""
    i = int(np.argmax(values))
    if i == 0 or i == t.size - 1:
        return values[i], t[i]
    res = minimize_scalar(lambda s: -func(np.exp(s)),
                          bounds=(np.log(t[i - 1]), np.log(t[i + 1])),
                          method='bounded', options={'xatol': 1e-12})
    if -res.fun > values[i]:
        return float(-res.fun), float(np.exp(res.x))
    return float(values[i]), float(t[i])


def _growth_tail(p, t0=1.0, factor=10.0, count=17, threshold=1e3, tol=1e-8):
    t = t0 * factor**np.arange(count)
    d = np.sqrt(t) - _checked(p.eval, t, 'f')
    inc = np.diff(d)
    last = inc[-4:]
    if d[-1] > threshold and np.all(last > 0.0):
        return GrowthLimit('diverges', np.inf, t, d)
    mags = np.abs(last)
    if np.all(np.diff(mags) <= tol) and mags[-1] <= tol * max(1.0, abs(d[-1])):
        return GrowthLimit('converges', float(d[-1]), t, d)
    return GrowthLimit('inconclusive', float(d[-1]), t, d)


def _limsup_verdict(p, gl, sampled):
    """
    limsup of 4 t f'^2 below 1, read off the growth tail. A convergent sqrt(t) - f(t)
    forces the limit 1; otherwise the tail samples decide and must agree with the grid.
    """
    if gl.status == 'inconclusive':
        raise InconclusiveLimit('inconclusive limit: sqrt(t) - f(t) tail {0}'.format(
            np.array2string(gl.d[-4:], precision=6)))
    if gl.status == 'converges':
        return False
    tail = gl.t[-4:]
    verdict = bool(np.max(4.0 * tail * _checked(p.deriv, tail, "f'")**2) < 1.0)
    if verdict != bool(np.max(sampled) < 1.0):
        raise InconclusiveLimit('inconclusive limit: grid and growth tail disagree on '
                                'limsup 4 t f\'^2 < 1 ({0} on the tail)'.format(verdict))
    return verdict


def validate_profile(p, sampling=None, lip_slope_tol=1e-2):
    """
    Checks the ellipticity conditions on a log-spaced grid.

    Conditions: f(0) = 0, 4 t f'(t)^2 < 1, f >= 0, f Lipschitz at 0, liminf of
    4 t f'^2 at 0 below 1, limsup at infinity below 1. Limits are read off the first
    and last decade of the grid; a non-monotone tail makes the condition inconclusive.
    """
    sampling = sampling or Sampling()
    t = sampling.grid()
    report = ProfileReport(p.label)
    f0 = float(p.eval(0.0))
    f = _checked(p.eval, t, 'f')
    df = _checked(p.deriv, t, "f'")

    report.conditions['f0'] = (f0 == 0.0)
    if f0 != 0.0:
        report.witness['f0'] = 0.0

    def ellipticity(s):
        return 4.0 * s * float(p.deriv(s))**2
    ell = 4.0 * t * df**2
    sup, t_sup = _refine_max(ellipticity, t, ell)
    report.sup_ellipticity = sup
    report.t_sup_ellipticity = t_sup
    report.conditions['ellipticity'] = sup < 1.0
    if sup >= 1.0:
        report.witness['ellipticity'] = t_sup

    report.conditions['nonnegative'] = bool(np.all(f >= 0.0))
    if not report.conditions['nonnegative']:
        report.witness['nonnegative'] = float(t[np.argmin(f)])

    # f(t)/t must stay bounded as t -> 0: its log-log slope over the first two decades
    small = t <= max(1e-2, t[0] * 100.0)
    report.lipschitz_constant = float(np.max(f[small] / t[small]))
    near = t <= t[0] * 100.0
    ratio = f[near] / t[near]
    positive = ratio > 0.0
    slope = 0.0
    if np.count_nonzero(positive) > 2:
        slope = np.polyfit(np.log(t[near][positive]), np.log(ratio[positive]), 1)[0]
    report.conditions['lipschitz'] = bool(slope > -lip_slope_tol)
    if not report.conditions['lipschitz']:
        report.witness['lipschitz'] = float(t[0])
        report.lipschitz_constant = np.inf

    first = t <= t[0] * 10.0
    report.conditions['liminf_zero'] = bool(np.min(ell[first]) < 1.0)
    if not _monotone(ell[first]):
        report.inconclusive.append('liminf_zero')
    last = t >= t[-1] / 10.0
    report.growth_limit = _growth_tail(p)
    report.conditions['limsup_infinity'] = _limsup_verdict(p, report.growth_limit,
                                                             ell[last])
    if not report.conditions['limsup_infinity']:
        report.witness['limsup_infinity'] = float(t[last][np.argmax(ell[last])])
    if not _monotone(ell[last]):
        report.inconclusive.append('limsup_infinity')

    def envelope(s):
        return float(p.eval(s)) / np.sqrt(s)
    c_bar, _ = _refine_max(envelope, t, f / np.sqrt(t))
    report.c_bar = max(0.0, c_bar)

    logger.debug('{0}: sup 4tf\'^2 = {1:.12g} at t = {2:.6g}, c_bar = {3:.6g}, '
                 'growth {4}'.format(p.label, sup, t_sup, report.c_bar,
                                     report.growth_limit.status))
    return report


def sqrt_envelope_constant(p, sampling=None):
    """Smallest c with f(t) <= c sqrt(t) on the grid"""
    t = (sampling or Sampling()).grid()
    ratio = _checked(p.eval, t, 'f') / np.sqrt(t)
    c_bar, t_c = _refine_max(lambda s: float(p.eval(s)) / np.sqrt(s), t, ratio)
    if c_bar >= 1.0:
        raise ProfileError('no sub-square-root envelope: sup f(t)/sqrt(t) = {0:.6g} at '
                           't = {1:.6g}'.format(c_bar, t_c))
    return max(0.0, c_bar)


def growth_limit(p):
    """lim (sqrt(t) - f(t)); raises InconclusiveLimit on an oscillating tail"""
    gl = _growth_tail(p)
    if gl.status == 'inconclusive':
        raise InconclusiveLimit('inconclusive limit: sqrt(t) - f(t) tail {0}'.format(
            np.array2string(gl.d[-4:], precision=6)))
    return gl


def admissible_tau_range(p):
    """Open interval of neck radii for which a special catenoid exists"""
    gl = growth_limit(p)
    if gl.diverges:
        return (0.0, np.inf)
    if gl.value <= 0.0:
        raise ProfileError('no admissible neck radius: growth limit {0:.6g}'.format(
            gl.value))
    warnings.warn('{0}: finite growth limit {1:.6g}, weak-hypotheses mode'.format(
        p.label, gl.value), EswmtWarning)
    return (1.0 / gl.value, np.inf)


def _phi_quad(p, r):
    if r == 0.0:
        return 0.0
    res = quad(lambda s: 2.0 * float(p.deriv(s * s)), 0.0, r, **quad_opt)
    if len(res) > 3:
        raise ProfileError('phi quadrature failure at r = {0!r}: {1}'.format(r, res[3]))
    return res[0]


def adapted_phi(p, r, method='auto'):
    """
    phi(r) = int_0^r 2 f'(s^2) ds.

    method is 'quad', 'closed' or 'auto' (closed form when the profile has one).
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0) or np.any(np.isnan(r)):
        raise ProfileError('adapted phi needs r >= 0')
    if method == 'auto':
        method = 'closed' if p.has_closed_phi() else 'quad'
    if method == 'closed':
        try:
            return p.phi_closed(r)
        except NotImplementedError:
            raise ProfileError('{0} has no closed-form phi'.format(p.label))
    flat, inverse = np.unique(r.ravel(), return_inverse=True)
    values = np.array([_phi_quad(p, ri) for ri in flat])
    return values[inverse].reshape(r.shape)[()]
