# Regression test for the generatrix integrator on the minimal catenoid
#
# With f = 0 the generatrix of neck tau is rho = tau cosh(z/tau). Checks the adaptive
# integrator against it on |z| <= 3 tau and the fixed-step RK4 convergence order. In arc
# length the curve is rho = sqrt(tau^2 + ell^2), z = tau asinh(ell/tau); the mean L1
# distance of both coordinates from it is checked too.

# Modules
import logging
import numpy as np
import scripts.utils.eswmt  # noqa
import scripts.utils.comparison as comparison
from eswmt.profile import Zero
from eswmt.rotational import integrate_generatrix, mirror_extend
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_taus = [0.5, 1.0, 2.0]
_steps = [0.2, 0.1, 0.05]
_errors = {}


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)


def _rel_error(g):
    return comparison.max_rel_diff(g.rho, g.tau * np.cosh(g.z / g.tau))


def _l1_error(g):
    ell = np.linspace(g.ell[0], g.ell[-1], 20001)
    rho = np.sqrt(g.tau**2 + ell**2)
    z = g.tau * np.arcsinh(ell / g.tau)
    return (comparison.l1_diff(g.ell, g.rho, ell, rho)
            + comparison.l1_diff(g.ell, g.z, ell, z)) / (ell[-1] - ell[0])


def run(**kwargs):
    for tau in _taus:
        g = mirror_extend(integrate_generatrix(Zero(), tau, tau * np.sinh(3.0)))
        _errors[tau] = _rel_error(g)
        _errors[('l1', tau)] = _l1_error(g)
    _errors['steps'] = [_rel_error(integrate_generatrix(Zero(), 1.0, np.sinh(3.0),
                                                        step=h)) for h in _steps]


def analyze():
    analyze_status = True
    for tau in _taus:
        if _errors[tau] > 1e-6 or np.isnan(_errors[tau]):
            logger.warning('tau = {0}: relative error {1}'.format(tau, _errors[tau]))
            analyze_status = False
        if _errors[('l1', tau)] > 1e-5:
            logger.warning('tau = {0}: mean L1 error {1}'.format(tau,
                                                                 _errors[('l1', tau)]))
            analyze_status = False
    orders = comparison.observed_order(_errors['steps'])
    # halving the step must gain at least a factor 8
    if np.any(orders < 3.0):
        logger.warning('fixed step errors {0}, orders {1}'.format(_errors['steps'],
                                                                  orders))
        analyze_status = False
    return analyze_status
