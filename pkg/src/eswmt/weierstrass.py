"""
Minimal immersions from Weierstrass data (h, G):

    Phi = (h (1 - G^2)/2, i h (1 + G^2)/2, h G),   X = Re int Phi dz.

h is the holomorphic factor and G the meromorphic Gauss map.
"""

# Modules
import logging
import numpy as np
from .errors import TailFitError, WeierstrassError
from .surface_kernel import ParametricPatch

logger = logging.getLogger('eswmt.weierstrass')

_LOC_TOL = 1e-12
NULL_TOL = 1e-12
NULL_FLOOR = 1e-30  # absolute floor for the null test where Phi vanishes

# ========================================================================================


class WeierstrassData(object):
    """
    Holomorphic data of a minimal surface.

    Keyword arguments:
    h, G, dG -- vectorized callables of a complex array
    domain -- {'kind': 'disk', 'radius': R} or {'kind': 'annulus', 'r_min': a, 'r_max': b}
    poles_of_G, zeros_of_h -- lists of (location, order)
    excluded -- isolated singularities of h kept out of the domain
    """

    def __init__(self, h, G, dG, domain, poles_of_G=(), zeros_of_h=(), excluded=(),
                 label='custom'):
        self.h = h
        self.G = G
        self.dG = dG
        self.domain = dict(domain)
        self.poles_of_G = [(complex(z), int(m)) for z, m in poles_of_G]
        self.zeros_of_h = [(complex(z), int(n)) for z, n in zeros_of_h]
        self.excluded = [complex(z) for z in excluded]
        self.label = label

    def __repr__(self):
        return 'WeierstrassData({0})'.format(self.label)


def _const(c):
    return lambda z: np.full_like(np.asarray(z, dtype=complex), c)


def preset(name, **domain):
    """Named data sets: enneper, catenoid, helicoid-assoc, branch, plane"""
    annulus = {'kind': 'annulus', 'r_min': 0.2, 'r_max': 5.0}
    disk = {'kind': 'disk', 'radius': 1.0}
    if name == 'enneper':
        data = WeierstrassData(_const(1.0), lambda z: np.asarray(z, dtype=complex),
                               _const(1.0), disk, label=name)
    elif name == 'catenoid':
        data = WeierstrassData(lambda z: 1.0 / np.asarray(z, dtype=complex)**2,
                               lambda z: np.asarray(z, dtype=complex), _const(1.0),
                               annulus, excluded=[0.0], label=name)
    elif name == 'helicoid-assoc':
        data = WeierstrassData(lambda z: 1j / np.asarray(z, dtype=complex)**2,
                               lambda z: np.asarray(z, dtype=complex), _const(1.0),
                               annulus, excluded=[0.0], label=name)
    elif name == 'branch':
        data = WeierstrassData(lambda z: np.asarray(z, dtype=complex)**4,
                               lambda z: 1.0 / np.asarray(z, dtype=complex),
                               lambda z: -1.0 / np.asarray(z, dtype=complex)**2,
                               disk, poles_of_G=[(0.0, 1)], zeros_of_h=[(0.0, 4)],
                               label=name)
    elif name == 'plane':
        data = WeierstrassData(_const(1.0), _const(0.0), _const(0.0), disk, label=name)
    else:
        raise WeierstrassError('unknown Weierstrass preset "{0}"; valid presets are '
                               'enneper, catenoid, helicoid-assoc, branch, plane'
                               .format(name))
    data.domain.update(domain)
    return data


def _order_at(points, z):
    for loc, order in points:
        if abs(loc - z) < _LOC_TOL:
            return order
    return 0


def _raw_phi(data, z):
    h = data.h(z)
    G = data.G(z)
    return np.stack((0.5 * h * (1.0 - G * G), 0.5j * h * (1.0 + G * G), h * G))


def make_phi(data, z):
    """Phi at the points z; poles of G covered by zeros of h take the limit value"""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    with np.errstate(all='ignore'):
        phi = _raw_phi(data, z)
    for loc, m in data.poles_of_G:
        at = np.abs(z - loc) < _LOC_TOL
        if not np.any(at):
            continue
        n = _order_at(data.zeros_of_h, loc)
        if n < 2 * m:
            raise WeierstrassError('irregular point at z = {0}'.format(loc))
        if n > 2 * m:
            # branch point: Phi vanishes to order n - 2m
            phi[:, at] = 0.0
            continue
        # removable: mean value over a small circle
        ring = loc + 1e-3 * np.exp(2j * np.pi * np.arange(8) / 8.0)
        phi[:, at] = np.mean(_raw_phi(data, ring), axis=1)[:, None]
    if not np.all(np.isfinite(phi)):
        bad = z[~np.all(np.isfinite(phi), axis=0)][0]
        raise WeierstrassError('irregular point at z = {0}'.format(bad))
    null = null_residual(phi)
    if np.any(null > NULL_TOL):
        raise WeierstrassError('null condition violated: max |(Phi,Phi)| = {0:.3e}'
                               .format(float(np.max(np.abs(np.sum(phi * phi, axis=0))))))
    return phi


def null_residual(phi):
    """|(Phi,Phi)| relative to |Phi|^2, floored where Phi vanishes"""
    null = np.abs(np.sum(phi * phi, axis=0))
    scale = np.sum(np.abs(phi)**2, axis=0)
    return null / np.maximum(scale, NULL_FLOOR / NULL_TOL)


def _fmt(z):
    return '{0:g}'.format(z.real) if z.imag == 0.0 else '{0:g}'.format(z)


def regularity_check(data):
    """Classifies declared poles of G and zeros of h as regular, branch or irregular"""
    report = {'regular': True, 'branch_points': [], 'irregular_points': [],
              'excluded': [complex(z) for z in data.excluded]}
    for loc, m in data.poles_of_G:
        n = _order_at(data.zeros_of_h, loc)
        if n < 2 * m:
            report['irregular_points'].append((loc, m, n))
        elif n > 2 * m:
            report['branch_points'].append((loc, m, n))
    for loc, n in data.zeros_of_h:
        if _order_at(data.poles_of_G, loc) == 0:
            report['branch_points'].append((loc, 0, n))
    report['regular'] = not (report['branch_points'] or report['irregular_points'])
    where = 'C' if not data.excluded else 'C minus {{{0}}}'.format(
        ', '.join(_fmt(z) for z in data.excluded))
    if report['irregular_points']:
        report['summary'] = 'irregular at ' + ', '.join(
            _fmt(p[0]) for p in report['irregular_points'])
    elif report['branch_points']:
        report['summary'] = 'branch point at ' + ', '.join(
            _fmt(p[0]) for p in report['branch_points'])
    else:
        report['summary'] = 'regular on ' + where
    logger.debug('{0}: {1}'.format(data.label, report['summary']))
    return report

# ========================================================================================


def _chart(data):
    """Chart w -> z(w) and dz/dw; the annulus uses log-polar w = log r + i t"""
    if data.domain['kind'] == 'annulus':
        return np.exp, np.exp
    return (lambda w: w), (lambda w: np.ones_like(w))


def _segment_integrals(data, wa, wb, n):
    """int Phi dz along straight chart segments wa -> wb, n-point Gauss-Legendre"""
    x, wts = np.polynomial.legendre.leggauss(n)
    z_of, dz_of = _chart(data)
    d = wb - wa
    nodes = 0.5 * (wa + wb)[..., None] + 0.5 * d[..., None] * x
    phi = make_phi(data, z_of(nodes).ravel()).reshape((3,) + nodes.shape)
    vals = phi * dz_of(nodes)[None]
    return 0.5 * d[None] * np.sum(vals * wts, axis=-1)


def _check_domain(data, u, v):
    if data.domain['kind'] == 'annulus':
        return
    for z in data.excluded:
        if u[0] <= z.real <= u[-1] and v[0] <= z.imag <= v[-1]:
            raise WeierstrassError('path through singularity at z = {0}'.format(z))


def default_grid(data, n=101, nt=128):
    """Chart grid (u, v) covering the data's domain"""
    dom = data.domain
    if dom['kind'] == 'annulus':
        s = np.linspace(np.log(dom['r_min']), np.log(dom['r_max']), n)
        return s, np.linspace(0.0, 2.0 * np.pi, nt, endpoint=False)
    half = dom['radius'] / np.sqrt(2.0)
    x = np.linspace(-half, half, n)
    return x, x.copy()


def core_period(data, radius=None, panels=64, n=16):
    """Re of the loop integral of Phi around |z| = radius"""
    dom = data.domain
    radius = radius or np.sqrt(dom['r_min'] * dom['r_max'])
    t = np.linspace(0.0, 2.0 * np.pi, panels + 1)
    x, wts = np.polynomial.legendre.leggauss(n)
    mid = 0.5 * (t[:-1] + t[1:])[:, None]
    half = 0.5 * np.diff(t)[:, None]
    nodes = radius * np.exp(1j * (mid + half * x))
    phi = make_phi(data, nodes.ravel()).reshape((3,) + nodes.shape)
    loop = np.sum(phi * 1j * nodes[None] * half[None] * wts, axis=(1, 2))
    return np.real(loop)


def _prefix_paths(Iu, Iv, i0, j0):
    """
    Immersion by prefix sums: path A runs along u at row j0 then along v; path B runs
    along v at column i0 then along u.
    """
    nu, nv = Iu.shape[1] + 1, Iv.shape[2] + 1
    cu = np.concatenate((np.zeros((3, 1, nv)), np.cumsum(Iu, axis=1)), axis=1)
    cv = np.concatenate((np.zeros((3, nu, 1)), np.cumsum(Iv, axis=2)), axis=2)
    A = (cu[:, :, j0] - cu[:, i0:i0 + 1, j0])[:, :, None] + (cv - cv[:, :, j0:j0 + 1])
    B = (cv[:, i0, :] - cv[:, i0:i0 + 1, j0])[:, None, :] + (cu - cu[:, i0:i0 + 1, :])
    return A, B


def integrate_immersion(data, grid=None, basepoint=(0, 0), n_gauss=8):
    """
    X = Re int Phi dz on a chart grid, from the grid node basepoint = (i0, j0).

    Returns (patch, period). period is the real period around the core loop of an
    annulus, or None on a simply connected domain, where patch.meta carries the
    discrepancy between the two staircase paths instead.
    """
    u, v = grid if grid is not None else default_grid(data)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_domain(data, u, v)
    i0, j0 = basepoint
    U, V = np.meshgrid(u, v, indexing='ij')
    W = U + 1j * V
    results = []
    for n in (n_gauss, 2 * n_gauss):
        Iu = _segment_integrals(data, W[:-1, :], W[1:, :], n)
        Iv = _segment_integrals(data, W[:, :-1], W[:, 1:], n)
        results.append(_prefix_paths(Iu, Iv, i0, j0))
    (A, B), (A2, B2) = results
    quad_err = float(np.max(np.abs(A2 - A)))
    X = np.moveaxis(np.real(A2), 0, -1)
    meta = {'quadrature_error': quad_err, 'basepoint': (i0, j0)}
    period = None
    periodic = False
    if data.domain['kind'] == 'annulus':
        period = core_period(data)
        periodic = bool(np.max(np.abs(period)) < 1e-8)
        meta['period'] = period
        meta['chart'] = 'log-polar'
    else:
        meta['path_discrepancy'] = float(np.max(np.abs(np.real(A2 - B2))))
        meta['chart'] = 'cartesian'
    patch = ParametricPatch(u, v, X, periodic_v=periodic and _closes(v),
                            label='weierstrass {0}'.format(data.label))
    patch.meta.update(meta)
    patch.weierstrass = data
    logger.debug('{0}: immersion on {1}x{2} grid, quadrature error {3:.2e}'.format(
        data.label, u.size, v.size, quad_err))
    return patch, period


def _closes(v):
    return abs(v[-1] + (v[1] - v[0]) - v[0] - 2.0 * np.pi) < 1e-12

# ========================================================================================


class MetricCurvature(object):
    """Conformal factor, Gauss curvature and total curvature of Weierstrass data"""

    def __init__(self, lam, K, quadrature, tail, total):
        self.lam = lam
        self.K = K
        self.quadrature = quadrature
        self.tail = tail
        self.total = total

    def as_dict(self):
        return {'quadrature': self.quadrature, 'tail': self.tail, 'total': self.total}


def _curvature_density(data, z):
    """K lambda-hat = -4 |G'|^2/(1 + |G|^2)^2, the pulled-back sphere area with sign"""
    G = data.G(z)
    dG = data.dG(z)
    with np.errstate(over='ignore', invalid='ignore'):
        dens = -4.0 * np.abs(dG)**2 / (1.0 + np.abs(G)**2)**2
    return np.where(np.isfinite(dens), dens, 0.0)


def _radial_density(data, r, nt):
    """w(r) = r int_0^{2 pi} K lambda-hat dt (periodic trapezoid)"""
    t = 2.0 * np.pi * np.arange(nt) / nt
    z = np.asarray(r)[..., None] * np.exp(1j * t)
    return np.asarray(r) * np.sum(_curvature_density(data, z), axis=-1) * 2.0 * np.pi / nt


def fit_power_tail(r, w, outer=True):
    """
    Fits w ~ A r^alpha from samples and integrates it beyond the last (outer) or below
    the first (inner) sample radius.
    """
    r = np.asarray(r, dtype=float)
    w = np.asarray(w, dtype=float)
    if np.all(w == 0.0):
        return 0.0
    if np.any(w == 0.0) or np.any(np.sign(w) != np.sign(w[0])):
        raise TailFitError('tail fit failed: samples change sign or vanish')
    alpha, logA = np.polyfit(np.log(r), np.log(np.abs(w)), 1)
    A = np.sign(w[0]) * np.exp(logA)
    if outer:
        if alpha >= -1.0:
            raise TailFitError('tail fit failed: radial decay exponent {0:.3g} is not '
                               'integrable'.format(alpha))
        R = r.max()
        return float(-A * R**(alpha + 1.0) / (alpha + 1.0))
    if alpha <= -1.0:
        raise TailFitError('tail fit failed: inner exponent {0:.3g} is not '
                           'integrable'.format(alpha))
    r0 = r.min()
    return float(A * r0**(alpha + 1.0) / (alpha + 1.0))


def metric_curvature(data, grid=None, radius=1e3, r_inner=1e-3, panels=60, n=16,
                     nt=128):
    """
    lambda-hat = (|h| (1 + |G|^2)/2)^2 and K = -(4 |G'|/(|h| (1 + |G|^2)^2))^2 on a
    cartesian grid, plus the total curvature over the plane (or punctured plane):
    Gauss-Legendre panels in r up to radius, with power-law tails beyond.
    """
    lam = K = None
    if grid is not None:
        X, Y = np.meshgrid(grid[0], grid[1], indexing='ij')
        z = X + 1j * Y
        with np.errstate(all='ignore'):
            h = data.h(z)
            G = data.G(z)
            dG = data.dG(z)
            lam = (np.abs(h) * (1.0 + np.abs(G)**2) / 2.0)**2
            K = -(4.0 * np.abs(dG) / (np.abs(h) * (1.0 + np.abs(G)**2)**2))**2
    punctured = data.domain['kind'] == 'annulus' or bool(data.excluded)
    edges = np.geomspace(r_inner, radius, panels + 1)
    if not punctured:
        edges = np.concatenate(([0.0], edges))
    x, wts = np.polynomial.legendre.leggauss(n)
    mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
    half = 0.5 * np.diff(edges)[:, None]
    nodes = mid + half * x
    quadrature = float(np.sum(_radial_density(data, nodes, nt) * half * wts))
    radii = radius / 2.0**np.arange(4)
    tail = fit_power_tail(radii, _radial_density(data, radii, nt), outer=True)
    if punctured:
        radii = r_inner * 2.0**np.arange(4)
        tail += fit_power_tail(radii, _radial_density(data, radii, nt), outer=False)
    total = quadrature + tail
    logger.debug('{0}: total curvature {1:.9f} (tail {2:.3e})'.format(
        data.label, total, tail))
    return MetricCurvature(lam, K, quadrature, tail, total)
