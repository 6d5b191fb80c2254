"""
Global invariants of complete surfaces: total curvature with tails, the Jorge-Meeks and
Shiohama identities, end expansions, area growth and the second fundamental form budget.
"""

# Modules
import logging
import numpy as np
from scipy import linalg
from scipy.integrate import simpson
from .errors import ConfigError, EndFitError, TailFitError
from .rotational import Generatrix, band_total_curvature
from .surface_kernel import (ParametricPatch, curvatures, geodesic_curvature_boundary,
                             integrate_field)
from .weierstrass import WeierstrassData, fit_power_tail, metric_curvature

logger = logging.getLogger('eswmt.analysis')

TAIL_MODES = ('turning-angle', 'radial-decay', 'none')

# ========================================================================================


class CurvatureBudget(object):
    """Truncated total curvature plus tail; topology is supplied by the caller"""

    def __init__(self, quadrature, tail, mode, genus=None, ends=None,
                 truncated_exact=None):
        self.quadrature = float(quadrature)
        self.tail = float(tail)
        self.mode = mode
        self.genus = genus
        self.ends = ends
        self.truncated_exact = truncated_exact

    @property
    def total(self):
        return self.quadrature + self.tail

    @property
    def jm_target(self):
        if self.genus is None or self.ends is None:
            return None
        return 4.0 * np.pi * (1 - self.genus - self.ends)

    @property
    def deficit(self):
        target = self.jm_target
        return None if target is None else abs(self.total - target)

    def as_dict(self):
        out = {'quadrature': self.quadrature, 'tail': self.tail, 'total': self.total,
               'mode': self.mode, 'genus': self.genus, 'ends': self.ends,
               'jm_target': self.jm_target, 'deficit': self.deficit}
        if self.truncated_exact is not None:
            out['truncated_exact'] = self.truncated_exact
        return out


def _truncation(g, radius):
    up = g.upper()
    if radius is None:
        return up, float(up.ell[-1])
    if radius > up.rho[-1] or radius < g.tau:
        raise TailFitError('truncation radius {0:g} outside sampled range [{1:g}, {2:g}]'
                           .format(radius, g.tau, up.rho[-1]))
    return up, float(np.interp(radius, up.rho, up.ell))


def _radial_samples(g, count=4):
    """Ring densities 2 pi rho K d ell/d rho at the last samples of the upper branch"""
    up = g.upper()
    idx = np.unique(np.linspace(len(up) // 2, len(up) - 1, count).astype(int))
    w = 2.0 * np.pi * up.rho[idx] * up.K[idx] / np.cos(up.theta[idx])
    return up.rho[idx], w


def total_curvature(surface, radius=None, tail='turning-angle', n=2001, n_theta=16):
    """
    Total curvature of a generatrix (both halves), of Weierstrass data, or of a patch.

    Rotational surfaces integrate K dA over the band out to radius and add per end
    2 pi (cos theta_R - 1) (turning-angle) or a fitted power-law tail (radial-decay).
    """
    if tail not in TAIL_MODES:
        raise TailFitError('unknown tail mode "{0}"; valid modes are {1}'.format(
            tail, ', '.join(TAIL_MODES)))
    if isinstance(surface, Generatrix):
        up, ell_R = _truncation(surface, radius)
        exact, quad = band_total_curvature(up, 0.0, ell_R, n=n, n_theta=n_theta)
        theta_R = float(up.interpolate(np.array([ell_R])).theta[0])
        if tail == 'turning-angle':
            per_end = 2.0 * np.pi * (np.cos(theta_R) - 1.0)
        elif tail == 'radial-decay':
            r, w = _radial_samples(surface)
            per_end = fit_power_tail(r, w, outer=True)
        else:
            per_end = 0.0
        budget = CurvatureBudget(2.0 * quad, 2.0 * per_end, tail,
                                 truncated_exact=2.0 * exact)
    elif isinstance(surface, WeierstrassData):
        if tail == 'turning-angle':
            raise TailFitError('turning-angle tails need a rotational surface')
        mc = metric_curvature(surface, radius=radius or 1e3)
        tail_value = mc.tail if tail == 'radial-decay' else 0.0
        budget = CurvatureBudget(mc.quadrature, tail_value, tail)
    elif isinstance(surface, ParametricPatch):
        if tail != 'none':
            raise TailFitError('tail fit failed: a bare patch carries no radial '
                               'structure')
        budget = CurvatureBudget(integrate_field(surface, curvatures(surface)['K']), 0.0,
                                 tail)
    else:
        raise TypeError('cannot take the total curvature of {0!r}'.format(surface))
    logger.debug('total curvature {0:.10f} (tail {1:.3e}, {2})'.format(
        budget.total, budget.tail, tail))
    return budget


def jorge_meeks_check(budget, genus, ends, tol=1e-3):
    """Compares the total curvature with 4 pi (1 - genus - ends)"""
    if genus < 0 or ends < 1:
        raise ConfigError('need genus >= 0 and ends >= 1, got genus {0} and {1} ends'
                          .format(genus, ends))
    budget.genus, budget.ends = int(genus), int(ends)
    total = abs(budget.total)
    if total < 4.0 * np.pi - tol:
        regime = 'plane regime'
    elif total < 8.0 * np.pi - tol:
        regime = 'plane or special catenoid regime'
    else:
        regime = 'outside the classified range'
    report = {'target': budget.jm_target, 'total': budget.total,
              'deficit': budget.deficit, 'passes': budget.deficit <= tol,
              'regime': regime}
    if genus + ends >= 2:
        alike = ['({0},{1})'.format(g, genus + ends - g) for g in range(genus + ends)]
        report['flag'] = ('topology must be supplied by caller; the formula only sees '
                          'genus + ends and cannot distinguish ' + ' from '.join(alike))
    logger.debug('Jorge-Meeks: target {0:.9f}, deficit {1:.3e}'.format(
        report['target'], report['deficit']))
    return report


def shiohama_check(total, euler_characteristic, area_constants, tol=1e-3):
    """int K dA = 2 pi (chi - sum c_i)"""
    rhs = 2.0 * np.pi * (euler_characteristic - float(np.sum(area_constants)))
    return {'lhs': float(total), 'rhs': rhs, 'defect': abs(float(total) - rhs),
            'passes': abs(float(total) - rhs) <= tol}


def gauss_bonnet_check(patch, chi=0, tol=1e-3):
    """int K dA + boundary geodesic curvature = 2 pi chi on an annular patch"""
    interior = integrate_field(patch, curvatures(patch)['K'])
    boundary = geodesic_curvature_boundary(patch)
    defect = abs(interior + boundary - 2.0 * np.pi * chi)
    return {'interior': interior, 'boundary': boundary, 'defect': defect,
            'passes': defect <= tol}

# ========================================================================================


class EndFit(object):
    """Height of an end as beta log r + a0 + (a1 x1 + a2 x2)/r^2"""

    def __init__(self, r0, r1, coefficients, residual, inner_beta, outer_beta):
        self.r0, self.r1 = float(r0), float(r1)
        self.beta, self.a0, self.a1, self.a2 = (float(c) for c in coefficients)
        self.residual = float(residual)
        self.inner_beta = float(inner_beta)
        self.outer_beta = float(outer_beta)

    @property
    def stability(self):
        return abs(self.inner_beta - self.outer_beta) / max(abs(self.beta), 1e-8)

    @property
    def sign(self):
        if abs(self.beta) <= 1e-8 * max(1.0, abs(self.a0)):
            return 'bounded'
        return 'positive' if self.beta > 0.0 else 'negative'

    def as_dict(self):
        return {'annulus': [self.r0, self.r1], 'beta': self.beta, 'a0': self.a0,
                'a1': self.a1, 'a2': self.a2, 'residual': self.residual,
                'inner_beta': self.inner_beta, 'outer_beta': self.outer_beta,
                'stability': self.stability, 'sign': self.sign}


def _end_lstsq(x1, x2, height):
    r = np.hypot(x1, x2)
    A = np.column_stack((np.log(r), np.ones_like(r), x1 / r**2, x2 / r**2))
    if np.linalg.cond(A) > 1e12:
        raise EndFitError('annulus too thin: end basis is ill-conditioned')
    coef, resid, rank, sv = linalg.lstsq(A, height)
    if rank < 4:
        raise EndFitError('annulus too thin: rank {0} end basis'.format(rank))
    return coef, float(np.linalg.norm(A @ coef - height) / np.sqrt(r.size))


def fit_end_expansion(x1, x2, height, stability=0.05):
    """Least squares end fit; the inner and outer half annuli are refitted for beta"""
    x1, x2, height = (np.ravel(np.asarray(a, dtype=float)) for a in (x1, x2, height))
    r = np.hypot(x1, x2)
    r0, r1 = float(r.min()), float(r.max())
    if r1 < 10.0 * r0 * (1.0 - 1e-12):
        raise EndFitError('annulus too thin: samples cover {0:.3g} decades, need 1'
                          .format(np.log10(r1 / r0)))
    coef, residual = _end_lstsq(x1, x2, height)
    split = np.sqrt(r0 * r1)
    inner = r <= split
    outer = ~inner
    beta_in = _end_lstsq(x1[inner], x2[inner], height[inner])[0][0]
    beta_out = _end_lstsq(x1[outer], x2[outer], height[outer])[0][0]
    fit = EndFit(r0, r1, coef, residual, beta_in, beta_out)
    if fit.sign != 'bounded' and fit.stability > stability:
        logger.warning('end fit unstable: inner beta {0:.6g}, outer beta {1:.6g}'.format(
            beta_in, beta_out))
    return fit


def end_samples(g, r0, r1, n_r=64, n_t=32, which='top'):
    """Samples (x1, x2, height) of the top or bottom end over r0 <= r <= r1"""
    r = np.geomspace(r0, r1, n_r)
    t = np.linspace(0.0, 2.0 * np.pi, n_t, endpoint=False)
    R, T = np.meshgrid(r, t, indexing='ij')
    z = g.height_at_radius(r, end=which)
    return R * np.cos(T), R * np.sin(T), np.broadcast_to(z[:, None], R.shape).copy()


def opposite_growth(top, bottom, tol=0.05):
    """The two ends of a two-ended surface grow in opposite vertical directions"""
    same = abs(abs(top.beta) - abs(bottom.beta)) <= tol * max(abs(top.beta), 1e-300)
    return {'beta_top': top.beta, 'beta_bottom': bottom.beta,
            'opposite': bool(top.beta * bottom.beta < 0.0), 'equal_magnitude': same}


def growth_sign_check(x1, x2, height, a0=None):
    """
    Eventual sign of height - a0 over the outer half of the sampled exterior region:
    'positive', 'negative', 'bounded' (inf and sup both finite) or 'indeterminate'.
    """
    x1, x2, height = (np.ravel(np.asarray(a, dtype=float)) for a in (x1, x2, height))
    r = np.hypot(x1, x2)
    if a0 is None:
        try:
            a0 = _end_lstsq(x1, x2, height)[0][1]
        except EndFitError:
            a0 = float(np.median(height))
    h = height - a0
    outer = r >= np.sqrt(r.min() * r.max())
    ho, ro = h[outer], r[outer]
    report = {'a0': float(a0), 'inf': float(ho.min()), 'sup': float(ho.max())}
    scale = 1e-10 * max(1.0, abs(a0))
    if np.all(ho > scale):
        report['sign'] = 'positive'
    elif np.all(ho < -scale):
        report['sign'] = 'negative'
    else:
        near = np.abs(ho[ro <= np.quantile(ro, 0.25)]).max()
        far = np.abs(ho[ro >= np.quantile(ro, 0.75)]).max()
        bounded = far <= scale or far <= 1.1 * near
        report['sign'] = 'bounded' if bounded else 'indeterminate'
    return report


def area_growth_constant(end, radii, r0=None):
    """
    Ratios c(R) = (A(R) - A(r0) + pi r0^2)/(pi R^2), where A(R) is the area of the end
    over r0 <= r <= R, and their Richardson extrapolation (4 c(2R) - c(R))/3. end is
    a Generatrix or a callable R -> A(R).
    """
    radii = np.sort(np.asarray(radii, dtype=float))
    if isinstance(end, Generatrix):
        r0 = r0 or float(end.upper().rho[1])
        area = end.area_at_radius
    else:
        if r0 is None:
            raise EndFitError('area growth of a callable end needs r0')
        area = end
    base = float(area(np.array([r0]))[0])
    ratios = (np.asarray(area(radii), dtype=float) - base + np.pi * r0**2) / \
        (np.pi * radii**2)
    steps = np.diff(ratios)
    if np.any(steps > 1e-14) and np.any(steps < -1e-14):
        raise EndFitError('inconclusive: area ratios are not monotone')
    doubled = np.isclose(radii[1:], 2.0 * radii[:-1])
    extrapolated = (4.0 * ratios[1:] - ratios[:-1]) / 3.0
    estimate = float(extrapolated[doubled][-1]) if np.any(doubled) else float(ratios[-1])
    return {'radii': radii.tolist(), 'ratios': ratios.tolist(),
            'extrapolated': extrapolated[doubled].tolist(), 'estimate': estimate}

# ========================================================================================


def second_form_budget(surface, c_bar, outer_fraction=0.05, tol=1e-12):
    """
    int H^2 dA, int K dA and int |II|^2 dA = int (4 H^2 - 2 K) dA, with the check
    (1 - c^2) int H^2 <= -c^2 int K and the decay of |II| on the outermost band.

    On a generatrix both integrals carry tails past the last sample: the turning-angle
    tail for K and a power-law fit in rho of the H^2 density for H^2. A bare patch gets
    neither.
    """
    if isinstance(surface, Generatrix):
        up = surface.upper()
        dA = 2.0 * np.pi * up.rho
        band = up.ell >= (1.0 - outer_fraction) * up.ell[-1]
        # H^2 dA per unit rho on the outer band; one tail per end
        w = up.H[band]**2 * dA[band] / np.cos(up.theta[band])
        tail_H2 = 2.0 * fit_power_tail(up.rho[band], w, outer=True)
        int_H2 = 2.0 * float(simpson(up.H**2 * dA, x=up.ell)) + tail_H2
        int_K = total_curvature(surface, tail='turning-angle').total
        ii = np.sqrt(up.kappa_m**2 + up.kappa_p**2)
        outer, neck = float(np.max(ii[band])), float(ii[0])
    else:
        c = curvatures(surface)
        tail_H2 = 0.0
        int_H2 = integrate_field(surface, c['H']**2)
        int_K = integrate_field(surface, c['K'])
        ii = np.sqrt(4.0 * c['H']**2 - 2.0 * c['K'])
        outer, neck = float(np.max(ii[-1])), float(np.max(ii[0]))
    lhs = (1.0 - c_bar**2) * int_H2
    rhs = -c_bar**2 * int_K
    return {'int_H2': int_H2, 'int_K': int_K, 'int_II2': 4.0 * int_H2 - 2.0 * int_K,
            'H2_tail': tail_H2, 'lhs': lhs, 'rhs': rhs, 'margin': rhs - lhs,
            'holds': lhs <= rhs + tol,
            'outer_II': outer, 'neck_II': neck,
            'decay': outer / neck if neck > 0.0 else 0.0}
