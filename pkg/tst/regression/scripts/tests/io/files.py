# Regression test for artifact files
#
# Generatrix tables, OBJ meshes, HDF5 patches and JSON reports are written atomically
# and read back without loss: a patch read from HDF5 carries the stored fundamental
# forms, so its curvatures match the original bit for bit. Generatrix tables carry H, K
# and q next to the state along with the residual H - f(q).

# Modules
import json
import logging
import os
import numpy as np
import scripts.utils.eswmt as eswmt
import eswmt.eswmt_read as eswmt_read
from eswmt.eswmt_read import atomic_write, generatrix_csv, patch_h5, \
    write_generatrix_csv, write_json, write_obj, write_patch_h5
from eswmt.errors import EswmtIOError
from eswmt.profile import Rational
from eswmt.rotational import COLUMNS, STATE, integrate_generatrix, mirror_extend, \
    revolve
from eswmt.surface_kernel import curvatures
logger = logging.getLogger('eswmt' + __name__[7:])  # set logger name based on module
_results = {}


def _path(name):
    return os.path.join(eswmt.work_dir, name)


def prepare(**kwargs):
    logger.debug('Running test ' + __name__)
    eswmt.make_workdir()
    with open(_path('wrong.csv'), 'w') as f:
        f.write('ell,rho\n0,1\n')
    with open(_path('keep.txt'), 'w') as f:
        f.write('old\n')
    with open(_path('nan.csv'), 'w') as f:
        row = ['0'] * (len(COLUMNS) - 1) + ['nan']
        f.write(','.join(COLUMNS) + '\n' + ','.join(row) + '\n')


def run(**kwargs):
    p = Rational(1.0)
    g = mirror_extend(integrate_generatrix(p, 1.0, 5.0))
    write_generatrix_csv(_path('g.csv'), g)
    back = generatrix_csv(_path('g.csv'), p)
    _results['csv'] = max(float(np.max(np.abs(back.data[k] - g.data[k])))
                          for k in STATE)
    _results['csv_tau'] = (back.tau, back.full)
    raw = generatrix_csv(_path('g.csv'))
    _results['csv_raw'] = sorted(raw.keys())
    _results['csv_derived'] = max(float(np.max(np.abs(raw[k] - getattr(g, k))))
                                  for k in ('H', 'K', 'q'))
    _results['csv_residual'] = float(np.max(np.abs(raw['residual'])))

    patch = revolve(g, n_theta=16, ell=np.linspace(-2.0, 2.0, 41))
    write_obj(_path('g.obj'), patch)
    with open(_path('g.obj')) as f:
        lines = f.read().splitlines()
    _results['obj'] = {kind: sum(1 for line in lines if line.startswith(kind + ' '))
                       for kind in ('v', 'vn', 'f')}

    write_patch_h5(_path('g.h5'), patch)
    read = patch_h5(_path('g.h5'))
    _results['h5'] = {
        'X': float(np.max(np.abs(read.X - patch.X))),
        'H': float(np.max(np.abs(curvatures(read)['H'] - curvatures(patch)['H']))),
        'label': read.label == patch.label,
        'periodic': read.periodic_v,
        'meta': (read.meta.get('rotational'), read.meta.get('tau'))}

    write_json(_path('r.json'), {'flag': np.bool_(True), 'n': np.int64(3),
                                 'x': np.float64(0.5), 'a': np.arange(3),
                                 'z': 1.0 + 2.0j})
    with open(_path('r.json')) as f:
        _results['json'] = json.load(f)

    try:
        with atomic_write(_path('keep.txt')) as out:
            out.write('new\n')
            raise KeyboardInterrupt
    except KeyboardInterrupt:
        pass
    with open(_path('keep.txt')) as f:
        _results['keep'] = f.read()
    _results['leftovers'] = [n for n in os.listdir(eswmt.work_dir)
                             if n.startswith('.tmp_')]

    errors = []
    for call in (lambda: generatrix_csv(_path('wrong.csv')),
                 lambda: generatrix_csv(_path('missing.csv')),
                 lambda: patch_h5(_path('missing.h5')),
                 lambda: write_json(os.path.join(eswmt.work_dir, 'no', 'r.json'), {})):
        try:
            call()
        except EswmtIOError as err:
            errors.append(str(err))
    _results['errors'] = errors

    eswmt_read.check_nan_flag = True
    try:
        generatrix_csv(_path('nan.csv'))
        _results['nan'] = None
    except FloatingPointError as err:
        _results['nan'] = str(err)
    finally:
        eswmt_read.check_nan_flag = False


def analyze():
    analyze_status = True
    if _results['csv'] > 0.0:
        logger.warning('generatrix table changed on round trip by {0}'.format(
            _results['csv']))
        analyze_status = False
    if _results['csv_tau'] != (1.0, True) or _results['csv_raw'] != sorted(COLUMNS):
        analyze_status = False
    if _results['csv_derived'] > 0.0 or _results['csv_residual'] > 1e-8:
        logger.warning('derived columns off by {0}, residual {1}'.format(
            _results['csv_derived'], _results['csv_residual']))
        analyze_status = False
    nv = 41 * 16
    if _results['obj'] != {'v': nv, 'vn': nv, 'f': 40 * 16}:
        logger.warning('OBJ counts {0}'.format(_results['obj']))
        analyze_status = False
    h5 = _results['h5']
    if h5['X'] != 0.0 or h5['H'] != 0.0 or not h5['label'] or not h5['periodic'] or \
            h5['meta'] != (True, 1.0):
        logger.warning('HDF5 round trip {0}'.format(h5))
        analyze_status = False
    if _results['json'] != {'flag': True, 'n': 3, 'x': 0.5, 'a': [0, 1, 2],
                            'z': [1.0, 2.0]}:
        logger.warning('JSON report {0}'.format(_results['json']))
        analyze_status = False
    if _results['keep'] != 'old\n' or _results['leftovers']:
        logger.warning('interrupted write left {0!r} and {1}'.format(
            _results['keep'], _results['leftovers']))
        analyze_status = False
    if len(_results['errors']) != 4 or 'expected columns' not in _results['errors'][0]:
        logger.warning('file errors {0}'.format(_results['errors']))
        analyze_status = False
    if _results['nan'] != 'NaN encountered':
        logger.warning('NaN check did not trigger')
        analyze_status = False
    return analyze_status
