# Regression test for Enneper's surface
#
# h = 1, G = z on the disk: the two staircase integration paths must agree, H must
# vanish at second order under refinement, and the total curvature over the plane
# from the metric with a power-law tail is -4 pi.

# Modules
import logging
import numpy as np
import scripts.utils.eswmt  # noqa
import scripts.utils.comparison as comparison
from eswmt.surface_kernel import curvatures
from eswmt.weierstrass import integrate_immersion, metric_curvature, preset
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_nxs = [21, 41, 81]
_results = {}


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)


def run(**kwargs):
    data = preset('enneper')
    patch = integrate_immersion(data)[0]
    _results['paths'] = patch.meta['path_discrepancy']
    U, V = patch.mesh()
    exact = np.stack((U - U**3 / 3.0 + U * V**2, -V - U**2 * V + V**3 / 3.0,
                      U**2 - V**2), axis=-1)
    exact = 0.5 * (exact - exact[0, 0])
    _results['closed'] = float(np.max(np.abs(patch.X - exact)))
    _results['H'] = []
    for n in _nxs:
        x = np.linspace(-0.7, 0.7, n)
        p = integrate_immersion(data, (x, x), basepoint=(n // 2, n // 2))[0]
        _results['H'].append(float(np.max(np.abs(curvatures(p)['H'][2:-2, 2:-2]))))
    x = np.linspace(-0.5, 0.5, 11)
    mc = metric_curvature(data, grid=(x, x))
    _results['total'] = mc.total
    X, Y = np.meshgrid(x, x, indexing='ij')
    _results['K'] = float(np.max(np.abs(mc.K + 16.0 / (1.0 + X**2 + Y**2)**4)))


def analyze():
    analyze_status = True
    if _results['paths'] > 1e-9 or _results['closed'] > 1e-12:
        logger.warning('path discrepancy {0}, closed form {1}'.format(
            _results['paths'], _results['closed']))
        analyze_status = False
    orders = comparison.observed_order(_results['H'])
    if np.any(orders < 1.8):
        logger.warning('mean curvature {0} not vanishing at second order'.format(
            _results['H']))
        analyze_status = False
    if abs(_results['total'] + 4.0 * np.pi) > 1e-3:
        logger.warning('Enneper total curvature {0}'.format(_results['total']))
        analyze_status = False
    if _results['K'] > 1e-12:
        analyze_status = False
    return analyze_status
