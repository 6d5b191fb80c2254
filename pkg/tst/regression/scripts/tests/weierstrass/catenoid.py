# Regression test for the catenoid and its conjugate from Weierstrass data
#
# h = 1/z^2, G = z on the annulus 0.2 < |z| < 5 gives the catenoid in closed form with
# zero real period; h = i/z^2 gives the associate helicoid, whose vertical period is 2 pi.

# Modules
import logging
import numpy as np
import scripts.utils.eswmt  # noqa
from eswmt.kenmotsu import align_and_compare, gauss_map_stereo
from eswmt.surface_kernel import curvatures
from eswmt.weierstrass import default_grid, integrate_immersion, preset
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_results = {}


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)


def run(**kwargs):
    data = preset('catenoid')
    grid = default_grid(data, 121, 128)
    patch, period = integrate_immersion(data, grid)
    S, T = patch.mesh()
    closed = np.stack((-np.cosh(S) * np.cos(T), -np.cosh(S) * np.sin(T), S), axis=-1)
    _results['period'] = period
    _results['periodic'] = patch.periodic_v
    _results['closed'] = align_and_compare(closed, patch.X)
    _results['quadrature_error'] = patch.meta['quadrature_error']
    G = gauss_map_stereo(patch)
    _results['gauss_map'] = float(np.max(np.abs(G - np.exp(S + 1j * T))[2:-2]))
    _results['H'] = float(np.max(np.abs(curvatures(patch)['H'][2:-2])))
    _results['helicoid_period'] = integrate_immersion(preset('helicoid-assoc'), grid)[1]
    wide = preset('catenoid', r_min=0.1, r_max=10.0)
    _results['wide'] = integrate_immersion(wide, default_grid(wide, 61, 64))[1]


def analyze():
    analyze_status = True
    if np.max(np.abs(_results['period'])) > 1e-8 or not _results['periodic']:
        logger.warning('catenoid period {0}'.format(_results['period']))
        analyze_status = False
    if np.max(np.abs(_results['wide'])) > 1e-8:
        analyze_status = False
    if _results['closed']['hausdorff'] > 1e-6 or _results['quadrature_error'] > 1e-10:
        logger.warning('catenoid differs from closed form by {0}'.format(
            _results['closed']['hausdorff']))
        analyze_status = False
    if _results['gauss_map'] > 0.02:
        logger.warning('stereographic Gauss map off by {0}'.format(_results['gauss_map']))
        analyze_status = False
    if _results['H'] > 1e-2:
        logger.warning('catenoid mean curvature {0}'.format(_results['H']))
        analyze_status = False
    hp = _results['helicoid_period']
    if abs(abs(hp[2]) - 2.0 * np.pi) > 1e-6 or np.max(np.abs(hp[:2])) > 1e-8:
        logger.warning('helicoid period {0}'.format(hp))
        analyze_status = False
    return analyze_status
