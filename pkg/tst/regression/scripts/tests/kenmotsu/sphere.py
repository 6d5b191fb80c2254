# Regression test for Kenmotsu data of the unit sphere
#
# In the chart w = x + iy the inward-normal sphere has G = conj(w) and H = 1. The
# Beltrami quotient is undefined there (G_z = 0), but the recovery reproduces the sphere.
# Also checks the two stereographic projections against each other.

# Modules
import logging
import numpy as np
import scripts.utils.eswmt  # noqa
from eswmt.errors import KenmotsuError
from eswmt.kenmotsu import KenmotsuField, align_and_compare, beltrami_mu, \
    gauss_map_stereo, integrability_residual, normal_from_gauss, recover_immersion
from eswmt.surface_kernel import fundamental_forms, sphere_conformal_patch, sphere_patch
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_results = {}


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)


def run(**kwargs):
    x = np.linspace(-0.8, 0.8, 161)
    W = np.add.outer(x, 1j * x)
    field = KenmotsuField(x, x, np.conj(W), 1.0, label='sphere')
    try:
        beltrami_mu(field)
    except KenmotsuError as err:
        _results['mu'] = str(err)
    _results['integrability'] = integrability_residual(field)['sup']
    patch = sphere_conformal_patch(x, x)
    rec = recover_immersion(field)
    _results['compare'] = align_and_compare(patch.X, rec.X)
    centred = rec.X - rec.X[80, 80] + patch.X[80, 80]
    _results['radius'] = np.linalg.norm(centred, axis=-1)
    band = sphere_patch(np.linspace(0.0, 2.0 * np.pi, 33), np.linspace(0.5, 1.5, 17))
    north, south = gauss_map_stereo(band), gauss_map_stereo(band, pole='south')
    _results['poles'] = float(np.max(np.abs(north * south - 1.0)))
    _results['inverse'] = float(np.max(np.abs(normal_from_gauss(north)
                                              - fundamental_forms(band)['N'])))
    cap = sphere_patch(np.linspace(0.0, 2.0 * np.pi, 9),
                       np.linspace(np.pi - 0.2, np.pi - 1e-6, 5))
    try:
        gauss_map_stereo(cap)
    except KenmotsuError as err:
        _results['pole'] = str(err)


def analyze():
    analyze_status = True
    if 'degenerate Gauss map chart' not in _results.get('mu', ''):
        logger.warning('Beltrami quotient accepted G = conj(w)')
        analyze_status = False
    if _results['integrability'] > 1e-12:
        analyze_status = False
    if _results['compare']['hausdorff'] > 1e-4:
        logger.warning('recovered sphere off by {0}'.format(
            _results['compare']['hausdorff']))
        analyze_status = False
    if np.max(np.abs(_results['radius'] - 1.0)) > 1e-4:
        logger.warning('recovered sphere is not unit: {0}'.format(_results['radius']))
        analyze_status = False
    if _results['poles'] > 1e-12 or _results['inverse'] > 1e-12:
        analyze_status = False
    if 'switch projection pole' not in _results.get('pole', ''):
        analyze_status = False
    return analyze_status
