# Regression test for profiles whose tail cannot be classified
#
# sqrt(t) - f(t) tends to 1 + sin(log t)/2, which neither converges nor diverges. The
# growth limit, the limsup condition and the neck radius range must all refuse to
# answer rather than report a verdict.

# Modules
import logging
import numpy as np
import scripts.utils.eswmt  # noqa
from eswmt.errors import InconclusiveLimit
from eswmt.profile import WeingartenProfile, admissible_tau_range, growth_limit, \
    validate_profile
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_results = {}


class Wobbling(WeingartenProfile):
    """f(t) = t/(1+t) (sqrt(t) - 1 - sin(log(1+t))/2)"""
    name = 'wobbling'

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        g = np.sqrt(t) - 1.0 - 0.5 * np.sin(np.log1p(t))
        return (t / (1.0 + t) * g)[()]

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        g = np.sqrt(t) - 1.0 - 0.5 * np.sin(np.log1p(t))
        dg = 0.5 / np.sqrt(t) - 0.5 * np.cos(np.log1p(t)) / (1.0 + t)
        return (g / (1.0 + t)**2 + t / (1.0 + t) * dg)[()]


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)


def run(**kwargs):
    p = Wobbling()
    cases = {'growth': lambda: growth_limit(p),
             'validate': lambda: validate_profile(p),
             'tau': lambda: admissible_tau_range(p)}
    for label, call in cases.items():
        try:
            _results[label] = call()
        except InconclusiveLimit as err:
            _results[label] = str(err)


def analyze():
    analyze_status = True
    for label in ('growth', 'validate', 'tau'):
        outcome = _results[label]
        if not isinstance(outcome, str) or 'inconclusive limit' not in outcome:
            logger.warning('{0}: expected an inconclusive limit, got {1!r}'.format(
                label, outcome))
            analyze_status = False
    return analyze_status
