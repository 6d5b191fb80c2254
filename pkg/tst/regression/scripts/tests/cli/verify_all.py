# Regression test for the full acceptance run of the command line tool
#
# `eswmt verify all` runs every check group (here at the reduced resolution of
# inputs/verify/eswmt.quick, on four threads) and must pass all of them. The same run
# on a single thread must produce the same checks.

# Modules
import logging
import os
import scripts.utils.eswmt as eswmt
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_input = 'verify/eswmt.quick'
_groups = ['profile/', 'catenoid/', 'weingarten/', 'jm/', 'codazzi/', 'kenmotsu/',
           'end/', 'second_form/', 'gauss_bonnet/', 'weierstrass/', 'io/']
_results = {}


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)
    eswmt.make_workdir()


def run(**kwargs):
    eswmt.run('verify', 'all', ['--timings'], input_filename=_input)
    _results['threaded'] = eswmt.read_report('verify', prefix='quick')
    _results['artifacts'] = [os.path.exists(eswmt.output(name, prefix='quick'))
                             for name in ('generatrix.csv', 'catenoid.obj', 'patch.h5')]
    eswmt.run('verify', 'all', ['run/threads=1', 'output/prefix=serial'],
              input_filename=_input)
    _results['serial'] = eswmt.read_report('verify', prefix='serial')


def analyze():
    analyze_status = True
    rep = _results['threaded']
    failed = eswmt.failed_checks(rep)
    if failed or not rep['passed']:
        logger.warning('failed checks: {0}'.format(', '.join(failed)))
        analyze_status = False
    names = [c['name'] for c in rep['checks']]
    for group in _groups:
        if not any(name.startswith(group) for name in names):
            logger.warning('no checks from group {0}'.format(group))
            analyze_status = False
    if 'suite' not in rep.get('timings', {}) or rep['config']['run']['threads'] != 4:
        analyze_status = False
    if not all(_results['artifacts']):
        logger.warning('missing artifacts {0}'.format(_results['artifacts']))
        analyze_status = False
    serial = _results['serial']
    if [c['name'] for c in serial['checks']] != names or not serial['passed']:
        logger.warning('serial and threaded runs differ')
        analyze_status = False
    if 'timings' in serial:
        analyze_status = False
    return analyze_status
