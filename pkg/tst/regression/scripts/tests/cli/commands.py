# Regression test for the eswmt command line tool
#
# Builds a special catenoid from an input file, feeds its artifacts back to the verify
# and fit commands, and checks the exit statuses: 0 when every check passes, 2 for a
# configuration error, 3 for a failed check and 4 for an unusable output location.
# Setting up the tool's log leaves the root logger and third-party loggers alone.

# Modules
import argparse
import logging
import os
import numpy as np
import scripts.utils.eswmt as eswmt
from eswmt.cli import log_init
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_input = 'catenoid/eswmt.rational'
_results = {}


def _log_levels():
    """Effective levels after log_init, with the runner's own log restored"""
    root = logging.getLogger()
    ours = logging.getLogger('eswmt')
    saved = (root.level, list(root.handlers), ours.level, list(ours.handlers),
             ours.propagate)
    try:
        log_init(argparse.Namespace(loglevel=logging.INFO, verbose=False, logfile=None))
        return {'root': root.level == saved[0] and root.handlers == saved[1],
                'h5py': logging.getLogger('h5py._conv').isEnabledFor(logging.DEBUG),
                'eswmt': logging.getLogger('eswmt.profile').isEnabledFor(logging.DEBUG)}
    finally:
        root.setLevel(saved[0])
        ours.setLevel(saved[2])
        ours.handlers = saved[3]
        ours.propagate = saved[4]


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)
    eswmt.make_workdir()


def run(**kwargs):
    eswmt.run('profile', 'check', ['--profile', 'rational(0.5)', '--logfile',
                                   'profile.log', '--timings'])
    _results['profile'] = eswmt.read_report('profile')
    with open(os.path.join(eswmt.work_dir, 'profile.log')) as f:
        _results['log'] = f.read()
    eswmt.run('profile', 'check', ['--profile', 'sqrt(0.5)'], expect=3)
    _results['sqrt'] = eswmt.read_report('profile')

    eswmt.run('catenoid', 'build', ['catenoid/lmax=150'], input_filename=_input)
    _results['catenoid'] = eswmt.read_report('catenoid', prefix='rational')
    _results['artifacts'] = [os.path.exists(eswmt.output(name, prefix='rational'))
                             for name in ('generatrix.csv', 'catenoid.obj',
                                          'catenoid.h5', 'catenoid.json')]
    surface = ['--surface', 'rational_generatrix.csv']
    eswmt.run('verify', 'jm', surface, input_filename=_input)
    _results['jm'] = eswmt.read_report('jm', prefix='rational')
    eswmt.run('fit', 'end', surface + ['--annulus', '10,100'], input_filename=_input)
    _results['end'] = eswmt.read_report('end', prefix='rational')
    eswmt.run('fit', 'end', surface + ['--annulus', '10,100', '--end', 'bottom'],
              input_filename=_input)
    _results['bottom'] = eswmt.read_report('end', prefix='rational')
    eswmt.run('verify', 'codazzi', ['--input', 'rational_catenoid.h5'],
              input_filename=_input)
    _results['codazzi'] = eswmt.read_report('codazzi', prefix='rational')

    eswmt.run('verify', 'jm', surface + ['--genus', '-1'], input_filename=_input,
              expect=2)
    eswmt.run('fit', 'end', ['--surface', 'rational_catenoid.h5'], input_filename=_input,
              expect=2)
    _results['levels'] = _log_levels()

    eswmt.run('weierstrass', 'build', ['--preset', 'enneper'])
    _results['enneper'] = eswmt.read_report('weierstrass')
    eswmt.run('kenmotsu', 'roundtrip', ['--band', '0.5,2'])
    _results['kenmotsu'] = eswmt.read_report('kenmotsu')

    _results['exits'] = {
        'override': eswmt.run('catenoid', 'build', ['catenoid/neck=1'], expect=None),
        'tau': eswmt.run('catenoid', 'build', ['--profile', 'saturating(1)', '--tau',
                                               '0.5'], expect=None),
        'choice': eswmt.run('weierstrass', 'build', ['--preset', 'scherk'],
                            expect=None),
        'directory': eswmt.run('profile', 'check', ['output/directory=nowhere'],
                               expect=None),
        'config': eswmt.run('profile', 'check', ['-c', 'missing.cfg'], expect=None)}


def analyze():
    analyze_status = True
    rep = _results['profile']
    if not rep['passed'] or rep['results']['admissible_tau'][0] != 0.0 or \
            'timings' not in rep or rep['config']['profile']['name'] != 'rational':
        logger.warning('profile check report {0}'.format(rep))
        analyze_status = False
    if 'Summary: 6 out of 6 checks passed' not in _results['log']:
        logger.warning('log file lacks the summary line')
        analyze_status = False
    if eswmt.failed_checks(_results['sqrt']) != ['profile/lipschitz']:
        logger.warning('sqrt profile failures {0}'.format(
            eswmt.failed_checks(_results['sqrt'])))
        analyze_status = False

    rep = _results['catenoid']
    if not rep['passed'] or not all(_results['artifacts']):
        logger.warning('catenoid build: failed {0}, artifacts {1}'.format(
            eswmt.failed_checks(rep), _results['artifacts']))
        analyze_status = False
    if abs(rep['results']['total_curvature']['total'] + 4.0 * np.pi) > 1e-3 or \
            rep['results']['tail'][0] != 'proper':
        analyze_status = False
    jm = _results['jm']
    if not jm['passed'] or abs(jm['results']['jm']['target'] + 4.0 * np.pi) > 1e-12:
        logger.warning('verify jm report {0}'.format(jm['results']))
        analyze_status = False
    top, bottom = _results['end']['results']['fit'], _results['bottom']['results']['fit']
    if top['beta'] <= 0.0 or abs(top['beta'] + bottom['beta']) > 1e-6 * top['beta']:
        logger.warning('end fits: top beta {0}, bottom beta {1}'.format(
            top['beta'], bottom['beta']))
        analyze_status = False
    if not _results['codazzi']['passed']:
        logger.warning('verify codazzi failed {0}'.format(
            eswmt.failed_checks(_results['codazzi'])))
        analyze_status = False
    rep = _results['enneper']
    if not rep['passed'] or \
            abs(rep['results']['total_curvature']['total'] + 4.0 * np.pi) > 1e-3:
        analyze_status = False
    if not _results['kenmotsu']['passed']:
        analyze_status = False
    if _results['levels'] != {'root': True, 'h5py': False, 'eswmt': True}:
        logger.warning('log levels after log_init {0}'.format(_results['levels']))
        analyze_status = False
    expected = {'override': 2, 'tau': 2, 'choice': 2, 'directory': 4, 'config': 4}
    if _results['exits'] != expected:
        logger.warning('exit statuses {0}, expected {1}'.format(_results['exits'],
                                                                expected))
        analyze_status = False
    return analyze_status
