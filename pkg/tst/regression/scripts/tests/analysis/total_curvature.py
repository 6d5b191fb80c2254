# Regression test for total curvature budgets and the Jorge-Meeks formula
#
# The plane has total curvature 0 = 4 pi (1 - 0 - 1). The catenoid and every special
# catenoid have genus 0 and two ends, so -4 pi; so does Enneper's surface with one end
# of multiplicity three, which the formula cannot tell apart from two simple ends.

# Modules
import logging
import numpy as np
import scripts.utils.eswmt  # noqa
from eswmt.analysis import jorge_meeks_check, total_curvature
from eswmt.errors import ConfigError, TailFitError
from eswmt.profile import Rational, Zero
from eswmt.rotational import integrate_generatrix
from eswmt.surface_kernel import plane_patch
from eswmt.weierstrass import preset
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_cases = [(a, tau) for a in (0.25, 1.0) for tau in (0.5, 1.0, 2.0)]
_results = {}


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)


def run(**kwargs):
    x = np.linspace(-1.0, 1.0, 11)
    plane = total_curvature(plane_patch(x, x), tail='none')
    _results['plane'] = (plane.total, jorge_meeks_check(plane, 0, 1))

    cat = integrate_generatrix(Zero(), 1.0, 20.0)
    _results['catenoid'] = {mode: total_curvature(cat, tail=mode)
                            for mode in ('turning-angle', 'radial-decay', 'none')}
    _results['catenoid_jm'] = jorge_meeks_check(_results['catenoid']['turning-angle'],
                                                0, 2)
    _results['special'] = []
    for a, tau in _cases:
        budget = total_curvature(integrate_generatrix(Rational(a), tau, 20.0))
        _results['special'].append((budget, jorge_meeks_check(budget, 0, 2)))

    enneper = total_curvature(preset('enneper'), tail='radial-decay')
    _results['enneper'] = (enneper, jorge_meeks_check(enneper, 0, 2))

    errors = []
    for call in (lambda: total_curvature(cat, tail='exact'),
                 lambda: total_curvature(plane_patch(x, x), tail='radial-decay'),
                 lambda: total_curvature(preset('enneper'), tail='turning-angle'),
                 lambda: total_curvature(cat, radius=1e6)):
        try:
            call()
        except TailFitError as err:
            errors.append(str(err))
    _results['errors'] = errors
    for label, genus, ends in (('no_ends', 0, 0), ('negative_genus', -1, 2)):
        try:
            jorge_meeks_check(plane, genus, ends)
        except ConfigError as err:
            _results[label] = err.exit_code


def analyze():
    analyze_status = True
    total, jm = _results['plane']
    if total != 0.0 or not jm['passes'] or 'flag' in jm:
        logger.warning('plane: total {0}, report {1}'.format(total, jm))
        analyze_status = False
    if jm['regime'] != 'plane regime':
        analyze_status = False

    budgets = _results['catenoid']
    for mode in ('turning-angle', 'radial-decay'):
        if abs(budgets[mode].total + 4.0 * np.pi) > 1e-3:
            logger.warning('catenoid {0} total {1}'.format(mode, budgets[mode].total))
            analyze_status = False
    none = budgets['none']
    if none.tail != 0.0 or none.total <= -4.0 * np.pi or \
            abs(none.quadrature - budgets['turning-angle'].quadrature) > 1e-12:
        logger.warning('catenoid without tail: {0}'.format(none.as_dict()))
        analyze_status = False
    if abs(none.quadrature - none.truncated_exact) > 1e-6:
        analyze_status = False
    jm = _results['catenoid_jm']
    if not jm['passes'] or abs(jm['target'] + 4.0 * np.pi) > 1e-15:
        analyze_status = False
    if '(0,2) from (1,1)' not in jm.get('flag', ''):
        logger.warning('missing topology flag: {0}'.format(jm.get('flag')))
        analyze_status = False
    if jm['regime'] != 'plane or special catenoid regime':
        analyze_status = False

    for (a, tau), (budget, jm) in zip(_cases, _results['special']):
        if not jm['passes']:
            logger.warning('a = {0}, tau = {1}: total {2}, deficit {3}'.format(
                a, tau, budget.total, jm['deficit']))
            analyze_status = False
        if budget.tail >= 0.0:
            analyze_status = False

    enneper, jm = _results['enneper']
    if not jm['passes']:
        logger.warning('Enneper total {0}'.format(enneper.total))
        analyze_status = False

    if len(_results['errors']) != 4:
        logger.warning('tail errors raised: {0}'.format(_results['errors']))
        analyze_status = False
    elif 'unknown tail mode' not in _results['errors'][0] or \
            'outside sampled range' not in _results['errors'][3]:
        analyze_status = False
    for label in ('no_ends', 'negative_genus'):
        if _results.get(label) != 2:
            logger.warning('{0}: expected a configuration error'.format(label))
            analyze_status = False
    return analyze_status
