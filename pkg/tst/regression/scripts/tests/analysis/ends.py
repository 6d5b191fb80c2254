# Regression test for end expansions, growth signs and area growth
#
# The catenoid end z = arccosh r = log 2r - 1/(4 r^2) + ... has beta = 1 and a0 = log 2.
# Special catenoid ends are logarithmic too, and the two ends grow in opposite vertical
# directions with equal rates. A saddle x1 x2/r changes sign at every radius.

# Modules
import logging
import numpy as np
import scripts.utils.eswmt  # noqa
from eswmt.analysis import area_growth_constant, end_samples, fit_end_expansion, \
    growth_sign_check, opposite_growth
from eswmt.errors import EndFitError
from eswmt.profile import Rational, Zero
from eswmt.rotational import integrate_generatrix
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_a_values = [0.25, 0.5, 1.0]
_r0, _r1 = 10.0, 1000.0
_results = {}


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)


def run(**kwargs):
    cat = integrate_generatrix(Zero(), 1.0, 1.1 * _r1 + 10.0)
    x1, x2, h = end_samples(cat, _r0, _r1)
    _results['catenoid'] = fit_end_expansion(x1, x2, h)
    low = end_samples(cat, _r0, _r1, which='bottom')
    _results['catenoid_bottom'] = fit_end_expansion(*low)
    _results['signs'] = {'catenoid': growth_sign_check(x1, x2, h)['sign'],
                         'bottom': growth_sign_check(*low)['sign'],
                         'saddle': growth_sign_check(x1, x2, x1 * x2 / np.hypot(x1, x2),
                                                     a0=0.0)['sign'],
                         'bounded': growth_sign_check(x1, x2, x1 / np.hypot(x1, x2),
                                                      a0=0.0)['sign']}
    radii = _r1 / 2.0**np.arange(3, -1, -1)
    _results['area'] = area_growth_constant(cat, radii)

    _results['special'] = []
    for a in _a_values:
        g = integrate_generatrix(Rational(a), 1.0, 1.1 * _r1 + 10.0)
        top = fit_end_expansion(*end_samples(g, _r0, _r1, which='top'))
        bottom = fit_end_expansion(*end_samples(g, _r0, _r1, which='bottom'))
        _results['special'].append((top, opposite_growth(top, bottom)))

    errors = []
    for call in (lambda: fit_end_expansion(*end_samples(cat, _r0, 5.0 * _r0)),
                 lambda: area_growth_constant(lambda R: np.pi * R**2, radii)):
        try:
            call()
        except EndFitError as err:
            errors.append(str(err))
    _results['errors'] = errors
    # an exactly planar end needs no radius cut-off
    plane = area_growth_constant(lambda R: np.pi * np.asarray(R)**2, radii, r0=_r0)
    _results['plane_area'] = plane['estimate']


def analyze():
    analyze_status = True
    fit = _results['catenoid']
    if abs(fit.beta - 1.0) > 1e-3 or abs(fit.a0 - np.log(2.0)) > 1e-2 or \
            fit.stability > 0.05 or fit.sign != 'positive':
        logger.warning('catenoid end fit: {0}'.format(fit.as_dict()))
        analyze_status = False
    if abs(fit.a1) > 1e-6 or abs(fit.a2) > 1e-6:
        logger.warning('catenoid end is not centred: a1 {0}, a2 {1}'.format(fit.a1,
                                                                           fit.a2))
        analyze_status = False
    bottom = _results['catenoid_bottom']
    if abs(bottom.beta + 1.0) > 1e-3 or bottom.sign != 'negative':
        analyze_status = False
    expected = {'catenoid': 'positive', 'bottom': 'negative', 'saddle': 'indeterminate',
                'bounded': 'bounded'}
    if _results['signs'] != expected:
        logger.warning('growth signs {0}'.format(_results['signs']))
        analyze_status = False
    area = _results['area']
    if abs(area['estimate'] - 1.0) > 0.02 or np.any(np.array(area['ratios']) < 1.0):
        logger.warning('catenoid area ratios {0}'.format(area['ratios']))
        analyze_status = False
    for a, (top, opp) in zip(_a_values, _results['special']):
        if top.beta <= 0.0 or not opp['opposite'] or not opp['equal_magnitude']:
            logger.warning('a = {0}: beta {1}, {2}'.format(a, top.beta, opp))
            analyze_status = False
    if len(_results['errors']) != 2 or 'annulus too thin' not in _results['errors'][0]:
        logger.warning('end fit errors {0}'.format(_results['errors']))
        analyze_status = False
    if abs(_results['plane_area'] - 1.0) > 1e-12:
        analyze_status = False
    return analyze_status
