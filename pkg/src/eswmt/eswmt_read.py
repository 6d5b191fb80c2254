"""
Read and write eswmt configuration files, generatrix tables, meshes and patches.
"""

# Python modules
import contextlib
import csv
import json
import os
import tempfile

# Other Python modules
import numpy as np

# eswmt modules
from .errors import ConfigError, EswmtIOError
from .profile import make_profile
from .rotational import COLUMNS, Generatrix
from .surface_kernel import ParametricPatch, fundamental_forms

check_nan_flag = False

DEFAULTS = {
    'profile': {'name': 'rational', 'a': 1.0, 'c': 0.5, 'L': 1.0, 'table': '',
                't_min': 1e-8, 't_max': 1e8, 'num': 1000},
    'catenoid': {'tau': 1.0, 'lmax': 20.0, 'h0': 1e-2, 'tol': 1e-11, 'h_max': 0.5,
                 'rel_step': 0.05, 'n_theta': 64},
    'weierstrass': {'preset': 'enneper', 'r_min': 0.2, 'r_max': 5.0, 'nr': 121,
                    'nt': 128, 'radius': 100.0},
    'kenmotsu': {'l1': 0.5, 'l2': 2.0, 'phi_max': 0.5 * np.pi, 'n': 401},
    'codazzi': {'exclusion': 2, 'n': 161},
    'end': {'r0': 10.0, 'r1': 1000.0, 'n_r': 64, 'n_t': 32, 'which': 'top'},
    'tolerances': {'residual': 1e-8, 'identity': 1e-10, 'jm': 1e-3, 'hausdorff': 1e-4},
    'output': {'prefix': 'eswmt', 'directory': '.'},
    'run': {'threads': 1},
}

MINIMUMS = {('catenoid', 'n_theta'): 8, ('weierstrass', 'nr'): 8,
            ('weierstrass', 'nt'): 8, ('kenmotsu', 'n'): 9, ('codazzi', 'n'): 9,
            ('end', 'n_r'): 8, ('end', 'n_t'): 4, ('profile', 'num'): 10,
            ('run', 'threads'): 1}


# ========================================================================================

def check_nan(data):
    """Check input NumPy array for the presence of any NaN entries"""
    if np.isnan(data).any():
        raise FloatingPointError('NaN encountered')
    return


def typecast(x):
    """Interprets an input string as int, then float, then leaves it as a string"""
    for kind in (int, float):
        try:
            return kind(x)
        except ValueError:
            pass
    return x


def athinput(filename):
    """Reads a <block> / key = value input file into a dictionary of dictionaries"""
    try:
        with open(filename, 'r') as infile:
            # remove comments, extra whitespace, and empty lines
            lines = filter(None, [i.split('#')[0].strip() for i in infile.readlines()])
    except OSError as err:
        raise EswmtIOError('cannot read input file {0}: {1}'.format(filename, err))
    data = {}
    text = '\n'.join(lines)
    if text and not text.startswith('<'):
        raise ConfigError('{0}: key outside of any <block>'.format(filename))
    # split into blocks, first element will be empty
    for block in text.split('<')[1:]:
        info = list(filter(None, block.split('\n')))
        name = info.pop(0).strip()
        if not name.endswith('>'):
            raise ConfigError('{0}: malformed block header "<{1}"'.format(filename, name))
        entries = {}
        for line in info:
            if '=' not in line:
                raise ConfigError('{0}: expected key = value in <{1}, got "{2}"'.format(
                    filename, name, line))
            key, value = (i.strip() for i in line.split('=', 1))
            entries[key] = typecast(value)
        data[name[:-1]] = entries
    return data


def read_config(filename):
    """athinput-style text, or JSON with the same block/key nesting"""
    if str(filename).endswith('.json'):
        try:
            with open(filename, 'r') as infile:
                data = json.load(infile)
        except OSError as err:
            raise EswmtIOError('cannot read input file {0}: {1}'.format(filename, err))
        except ValueError as err:
            raise ConfigError('{0}: invalid JSON: {1}'.format(filename, err))
        if not isinstance(data, dict) or not all(isinstance(v, dict)
                                                 for v in data.values()):
            raise ConfigError('{0}: JSON config must map blocks to key/value objects'
                              .format(filename))
        return data
    return athinput(filename)


class RunConfig(object):
    """Validated configuration: defaults overlaid with a file and block/key=value pairs"""

    def __init__(self, data=None, overrides=()):
        self.data = {block: dict(keys) for block, keys in DEFAULTS.items()}
        for block, keys in (data or {}).items():
            for key, value in keys.items():
                self.set(block, key, value)
        for item in overrides:
            self.override(item)
        self.validate()

    @classmethod
    def from_file(cls, filename=None, overrides=()):
        return cls(read_config(filename) if filename else None, overrides)

    def set(self, block, key, value):
        if block not in DEFAULTS:
            raise ConfigError('unknown block <{0}>; valid blocks are {1}'.format(
                block, ', '.join(sorted(DEFAULTS))))
        if key not in DEFAULTS[block]:
            raise ConfigError('unknown key "{0}" in <{1}>; valid keys are {2}'.format(
                key, block, ', '.join(sorted(DEFAULTS[block]))))
        default = DEFAULTS[block][key]
        if isinstance(default, str):
            value = str(value)
        if isinstance(default, float) and isinstance(value, int):
            value = float(value)
        if isinstance(default, (int, float)) and not isinstance(value, (int, float)):
            raise ConfigError('<{0}> {1} must be numeric, got "{2}"'.format(
                block, key, value))
        if isinstance(default, int) and not isinstance(default, bool) and \
                isinstance(value, float):
            raise ConfigError('<{0}> {1} must be an integer, got {2}'.format(
                block, key, value))
        self.data[block][key] = value

    def override(self, item):
        """Applies one block/key=value override"""
        try:
            path, value = item.split('=', 1)
            block, key = path.strip().split('/')
        except ValueError:
            raise ConfigError('override "{0}" is not of the form block/key=value'.format(
                item))
        self.set(block, key, typecast(value.strip()))

    def validate(self):
        for key, value in self.data['tolerances'].items():
            if not value > 0.0:
                raise ConfigError('tolerance {0} must be positive, got {1}'.format(
                    key, value))
        for (block, key), least in MINIMUMS.items():
            if self.data[block][key] < least:
                raise ConfigError('<{0}> {1} = {2} is below the minimum {3}'.format(
                    block, key, self.data[block][key], least))
        if self.data['end']['which'] not in ('top', 'bottom'):
            raise ConfigError('<end> which must be top or bottom')

    def __getitem__(self, block):
        return self.data[block]

    def profile(self):
        """WeingartenProfile named in <profile>"""
        block = self.data['profile']
        name = block['name']
        spec = {'name': name}
        spec.update({'rational': {'a': block['a']}, 'sqrt': {'c': block['c']},
                     'saturating': {'L': block['L']},
                     'custom-table': {'table': block['table']}}.get(name, {}))
        return make_profile(spec)

    def output_path(self, suffix):
        out = self.data['output']
        return os.path.join(out['directory'], '{0}_{1}'.format(out['prefix'], suffix))

    def as_dict(self):
        return {block: dict(keys) for block, keys in self.data.items()}


# ========================================================================================

@contextlib.contextmanager
def atomic_write(filename, mode='w'):
    """Writes to a temporary file in the target directory and renames it on success"""
    directory = os.path.dirname(os.path.abspath(filename))
    try:
        handle = tempfile.NamedTemporaryFile(mode=mode, dir=directory, delete=False,
                                             prefix='.tmp_', suffix=os.path.basename(
                                                 filename))
    except OSError as err:
        raise EswmtIOError('cannot write {0}: {1}'.format(filename, err))
    try:
        with handle:
            yield handle
        os.replace(handle.name, filename)
    except BaseException:
        if os.path.exists(handle.name):
            os.remove(handle.name)
        raise


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError('{0!r} is not JSON serializable'.format(obj))


def write_json(filename, report):
    with atomic_write(filename) as out:
        json.dump(report, out, sort_keys=True, indent=2, default=_jsonable)
        out.write('\n')


def write_generatrix_csv(filename, g):
    """State columns followed by H, K, q and the residual H - f(q)"""
    table = g.table()
    with atomic_write(filename) as out:
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(COLUMNS)
        for row in np.column_stack([table[k] for k in COLUMNS]):
            writer.writerow(['%.17g' % x for x in row])


def generatrix_csv(filename, profile=None):
    """
    Reads a generatrix table; returns a Generatrix when a profile is given, otherwise
    the dict of all columns. The derived columns are recomputed by the Generatrix.
    """
    try:
        with open(filename, 'r') as infile:
            reader = csv.reader(infile)
            header = next(reader)
            rows = [[float(x) for x in row] for row in reader if row]
    except (OSError, StopIteration) as err:
        raise EswmtIOError('cannot read generatrix file {0}: {1}'.format(filename, err))
    if tuple(header) != COLUMNS:
        raise EswmtIOError('{0}: expected columns {1}'.format(filename,
                                                              ', '.join(COLUMNS)))
    table = np.array(rows, dtype=float).reshape(-1, len(COLUMNS))
    if check_nan_flag:
        check_nan(table)
    data = {k: table[:, i] for i, k in enumerate(COLUMNS)}
    if profile is None:
        return data
    tau = float(data['rho'][np.argmin(np.abs(data['ell']))])
    return Generatrix(tau, data, profile, full=bool(np.any(data['ell'] < 0.0)))


def write_obj(filename, patch):
    """Quad mesh with per-vertex normals; the third coordinate is the axis"""
    N = fundamental_forms(patch)['N']
    nu, nv = patch.shape
    idx = np.arange(nu * nv).reshape(nu, nv) + 1
    cols = nv if patch.periodic_v else nv - 1
    with atomic_write(filename) as out:
        out.write('# eswmt {0}\n'.format(patch.label))
        for x in patch.X.reshape(-1, 3):
            out.write('v %.17g %.17g %.17g\n' % tuple(x))
        for n in N.reshape(-1, 3):
            out.write('vn %.17g %.17g %.17g\n' % tuple(n))
        for i in range(nu - 1):
            for j in range(cols):
                k = (j + 1) % nv
                quad = (idx[i, j], idx[i + 1, j], idx[i + 1, k], idx[i, k])
                out.write('f ' + ' '.join('{0}//{0}'.format(a) for a in quad) + '\n')


PATCH_FORMS = ('E', 'F', 'G', 'L', 'M', 'Nn', 'N')


def write_patch_h5(filename, patch):
    """Grid, samples and fundamental forms of a patch, with its metadata as attributes"""
    import h5py
    forms = fundamental_forms(patch)
    with atomic_write(filename, 'w+b') as out:
        with h5py.File(out, 'w') as f:
            f.create_dataset('u', data=patch.u)
            f.create_dataset('v', data=patch.v)
            f.create_dataset('X', data=patch.X)
            group = f.create_group('forms')
            for key in PATCH_FORMS:
                group.create_dataset(key, data=forms[key])
            f.attrs['label'] = patch.label
            f.attrs['periodic_v'] = bool(patch.periodic_v)
            meta = {k: v for k, v in patch.meta.items()
                    if not isinstance(v, np.ndarray)}
            f.attrs['meta'] = json.dumps(meta, sort_keys=True, default=_jsonable)


def patch_h5(filename):
    """Reads a patch written by write_patch_h5; stored forms are reused verbatim"""
    import h5py
    try:
        with h5py.File(filename, 'r') as f:
            u = np.array(f['u'])
            v = np.array(f['v'])
            X = np.array(f['X'])
            forms = {key: np.array(f['forms'][key]) for key in PATCH_FORMS}
            label = str(f.attrs['label'])
            periodic = bool(f.attrs['periodic_v'])
            meta = json.loads(f.attrs['meta'])
    except (OSError, KeyError) as err:
        raise EswmtIOError('cannot read patch file {0}: {1}'.format(filename, err))
    if check_nan_flag:
        check_nan(X)
    patch = ParametricPatch.from_forms(u, v, X, forms, periodic_v=periodic, label=label)
    patch.meta.update(meta)
    return patch
