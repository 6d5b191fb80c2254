# Functions for driving the eswmt package and its command line tool during testing

# Modules
import json
import logging
import os
import shutil
import subprocess
import sys
from .log_pipe import LogPipe

# Global variables
eswmt_rel_path = '../../'
work_dir = 'bin'
global_run_args = []
global_silent = False


# Make the package importable by the in-process tests
def add_source_path():
    src = os.path.abspath(os.path.join(eswmt_rel_path, 'src'))
    if src not in sys.path:
        sys.path.insert(0, src)


add_source_path()


def make_workdir():
    os.makedirs(work_dir, exist_ok=True)


def clean():
    shutil.rmtree(work_dir, ignore_errors=True)


# Function for running the command line tool from the bin/ directory
def run(group, action, arguments=(), input_filename=None, expect=0):
    """
    Runs `python -m eswmt group action` with block/key=value arguments and returns the
    exit status; raises EswmtTestError unless it equals expect (None accepts any).
    """
    make_workdir()
    command = [sys.executable, '-m', 'eswmt', group, action]
    if input_filename is not None:
        command += ['-c', os.path.join('..', eswmt_rel_path, 'inputs', input_filename)]
    command += ['output/directory=.'] + list(arguments) + global_run_args
    env = dict(os.environ)
    src = os.path.abspath(os.path.join(eswmt_rel_path, 'src'))
    env['PYTHONPATH'] = os.pathsep.join(filter(None, [src, env.get('PYTHONPATH')]))
    out_log = open(os.devnull, 'w') if global_silent else LogPipe('eswmt.run',
                                                                  logging.INFO)
    try:
        logging.getLogger('eswmt.run').debug('Executing: ' + ' '.join(command))
        ret = subprocess.call(command, stdout=out_log, stderr=out_log, cwd=work_dir,
                              env=env)
    finally:
        out_log.close()
    if expect is not None and ret != expect:
        raise EswmtTestError('Return code {0} (expected {1}) from command \'{2}\''
                             .format(ret, expect, ' '.join(command)))
    return ret


def output(name, prefix='eswmt'):
    return os.path.join(work_dir, '{0}_{1}'.format(prefix, name))


def read_report(name, prefix='eswmt'):
    with open(output(name + '.json', prefix), 'r') as infile:
        return json.load(infile)


def failed_checks(report):
    return [c['name'] for c in report['checks'] if not c['passed']]


# General exception class for these functions
class EswmtTestError(RuntimeError):
    pass
