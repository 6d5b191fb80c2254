# Regression test for the pointwise meridian curvature solve
#
# kappa_m solves (kappa_m + kappa_p)/2 = f(((kappa_m - kappa_p)/2)^2). The residual must
# vanish to round-off for parallel curvatures of either sign, the zero profile must give
# kappa_m = -kappa_p exactly, and a non-finite input is a bracketing failure.

# Modules
import logging
import numpy as np
import scripts.utils.eswmt  # noqa
from eswmt.errors import RootBracketError
from eswmt.profile import Rational, Zero
from eswmt.rotational import meridian_from_parallel
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_kps = [-1.0, 0.0, 0.3, 2.0, 50.0]
_results = {}


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)


def run(**kwargs):
    p = Rational(1.0)
    residuals, steps = [], []
    for kp in _kps:
        trace = []
        x = meridian_from_parallel(p, kp, trace=trace)
        d = 0.5 * (x - kp)
        residuals.append(abs(0.5 * (x + kp) - float(p.eval(d * d))) / (1.0 + abs(kp)))
        steps.append(len(trace))
    _results['residuals'] = residuals
    _results['steps'] = steps
    _results['zero'] = [meridian_from_parallel(Zero(), kp) + kp for kp in _kps]
    try:
        meridian_from_parallel(p, np.nan)
    except RootBracketError as err:
        _results['nan'] = str(err)


def analyze():
    analyze_status = True
    for kp, res, n in zip(_kps, _results['residuals'], _results['steps']):
        if res > 1e-12 or n > 50:
            logger.warning('kappa_p = {0}: residual {1:.3g} after {2} steps'.format(
                kp, res, n))
            analyze_status = False
    if any(v != 0.0 for v in _results['zero']):
        logger.warning('zero profile gives kappa_m + kappa_p = {0}'.format(
            _results['zero']))
        analyze_status = False
    if 'root bracketing failure' not in _results.get('nan', ''):
        logger.warning('non-finite kappa_p not rejected')
        analyze_status = False
    return analyze_status
