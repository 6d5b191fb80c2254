"""
Gridded immersions, fundamental forms and curvature fields.

Orientation: N = X_u x X_v / |X_u x X_v| and L = <X_uu, N>, so the unit sphere charted by
(azimuth, polar angle) has H = K = 1 and the minimal catenoid has meridian curvature < 0
above its neck.
"""

# Modules
import logging
import numpy as np
from scipy.integrate import simpson
from .errors import ImmersionError

logger = logging.getLogger('eswmt.surface_kernel')

UMBILIC_TOL = 1e-10

# ========================================================================================


class ParametricPatch(object):
    """Immersion X sampled on a rectangular (u, v) lattice"""

    def __init__(self, u, v, X, derivs=None, periodic_v=False, label=''):
        self.u = np.asarray(u, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.X = np.asarray(X, dtype=float)
        if self.X.shape != (self.u.size, self.v.size, 3):
            raise ImmersionError('patch samples have shape {0}, expected {1}'.format(
                self.X.shape, (self.u.size, self.v.size, 3)))
        self.derivs = derivs  # callable (U, V) -> Xu, Xv, Xuu, Xuv, Xvv
        self.periodic_v = periodic_v
        self.label = label
        self.meta = {}
        self.forms = None
        self.fields = None

    @property
    def shape(self):
        return self.X.shape[:2]

    @property
    def du(self):
        return self.u[1] - self.u[0]

    @property
    def dv(self):
        return self.v[1] - self.v[0]

    def mesh(self):
        return np.meshgrid(self.u, self.v, indexing='ij')

    def __getattr__(self, name):
        # curvature and form fields read as attributes once populated
        for store in ('fields', 'forms'):
            data = self.__dict__.get(store)
            if data is not None and name in data:
                return data[name]
        raise AttributeError(name)

    @classmethod
    def from_forms(cls, u, v, X, forms, **kwargs):
        """Patch whose fundamental forms are already known in closed form"""
        patch = cls(u, v, X, **kwargs)
        patch.forms = _validated(dict(forms), patch)
        return patch


def _dot(a, b):
    return np.einsum('...i,...i->...', a, b)


def _validated(forms, patch):
    det = forms['E'] * forms['G'] - forms['F']**2
    bad = ~(det > 0.0)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise ImmersionError('immersion degeneracy at (u,v) = ({0:.6g}, {1:.6g})'.format(
            patch.u[i], patch.v[j]))
    forms['det'] = det
    return forms


def forms_from_derivatives(Xu, Xv, Xuu, Xuv, Xvv):
    """First and second fundamental form coefficients and the unit normal"""
    n = np.cross(Xu, Xv)
    norm = np.sqrt(_dot(n, n))
    with np.errstate(invalid='ignore', divide='ignore'):
        N = n / norm[..., None]
    return {'E': _dot(Xu, Xu), 'F': _dot(Xu, Xv), 'G': _dot(Xv, Xv),
            'L': _dot(Xuu, N), 'M': _dot(Xuv, N), 'Nn': _dot(Xvv, N), 'N': N}


def _grid_derivatives(patch):
    X = patch.X
    if patch.periodic_v:
        # wrap so that central differences hold across the seam
        Xw = np.concatenate((X[:, -2:], X, X[:, :2]), axis=1)
        Xu = np.gradient(X, patch.u, axis=0, edge_order=2)
        Xv = np.gradient(Xw, patch.dv, axis=1)[:, 2:-2]
        Xuw = np.concatenate((Xu[:, -2:], Xu, Xu[:, :2]), axis=1)
        Xvw = np.gradient(Xw, patch.dv, axis=1)
        Xuu = np.gradient(Xu, patch.u, axis=0, edge_order=2)
        Xuv = np.gradient(Xuw, patch.dv, axis=1)[:, 2:-2]
        Xvv = np.gradient(Xvw, patch.dv, axis=1)[:, 2:-2]
        return Xu, Xv, Xuu, Xuv, Xvv
    Xu, Xv = np.gradient(X, patch.u, patch.v, axis=(0, 1), edge_order=2)
    Xuu, Xuv = np.gradient(Xu, patch.u, patch.v, axis=(0, 1), edge_order=2)
    Xvv = np.gradient(Xv, patch.v, axis=1, edge_order=2)
    return Xu, Xv, Xuu, Xuv, Xvv


def fundamental_forms(patch):
    """Populates E, F, G, L, M, Nn and N; analytic closures win over finite differences"""
    if patch.forms is not None:
        return patch.forms
    if patch.derivs is not None:
        U, V = patch.mesh()
        derivs = patch.derivs(U, V)
    else:
        if min(patch.shape) < 3:
            raise ImmersionError('finite differences need at least 3x3 samples')
        derivs = _grid_derivatives(patch)
    patch.forms = _validated(forms_from_derivatives(*derivs), patch)
    return patch.forms


def curvatures(patch):
    """H, K, q = H^2 - K, k1 >= k2 from the fundamental forms"""
    if patch.fields is not None:
        return patch.fields
    fm = fundamental_forms(patch)
    E, F, G, L, M, Nn, det = (fm[k] for k in ('E', 'F', 'G', 'L', 'M', 'Nn', 'det'))
    H = (E * Nn - 2.0 * F * M + G * L) / (2.0 * det)
    K = (L * Nn - M * M) / det
    q = np.maximum(H * H - K, 0.0)
    s = np.sqrt(q)
    patch.fields = {'H': H, 'K': K, 'q': q, 'k1': H + s, 'k2': H - s}
    return patch.fields


def umbilic_mask(patch, tol=UMBILIC_TOL):
    """Numerically umbilic points: q < tol max(1, H^2)"""
    c = curvatures(patch)
    return c['q'] < tol * np.maximum(1.0, c['H']**2)


def weingarten_residual(patch, p):
    """sup |H - f(q)| and the residual grid"""
    c = curvatures(patch)
    res = c['H'] - np.asarray(p.eval(c['q']))
    return float(np.max(np.abs(res))), res


def umbilic_coincidence(patch, tol=UMBILIC_TOL):
    """K <= tol everywhere, and K vanishes exactly where q does"""
    c = curvatures(patch)
    flat = np.abs(c['K']) <= tol
    umbilic = c['q'] <= tol
    return {'nonpositive': bool(np.all(c['K'] <= tol)),
            'max_K': float(np.max(c['K'])),
            'mismatch': int(np.count_nonzero(flat != umbilic))}


def conformal_factor(patch, tol=1e-8):
    """lambda with I = 2 lambda |dz|^2, or None when the chart is not conformal"""
    fm = fundamental_forms(patch)
    scale = np.abs(fm['E'])
    if np.all(np.abs(fm['F']) <= tol * scale) and \
            np.all(np.abs(fm['E'] - fm['G']) <= tol * scale):
        return 0.5 * fm['E']
    return None


class HopfField(object):
    """Q = II(d/dz, d/dz) on a conformal patch with I = 2 lambda |dz|^2"""

    def __init__(self, Q, lam, residual):
        self.Q = Q
        self.lam = lam
        self.residual = residual  # sup | |Q|/lambda - sqrt(q) |


def hopf_differential(patch, tol=1e-8):
    lam = conformal_factor(patch, tol)
    if lam is None:
        raise ImmersionError('conformal chart required for the Hopf differential')
    fm = fundamental_forms(patch)
    c = curvatures(patch)
    Q = 0.25 * ((fm['L'] - fm['Nn']) - 2j * fm['M'])
    residual = float(np.max(np.abs(np.abs(Q) / lam - np.sqrt(c['q']))))
    return HopfField(Q, lam, residual)


def cauchy_riemann_residual(field, patch, margin=1):
    """sup |d field / d zbar| over interior samples"""
    Fu, Fv = np.gradient(field, patch.u, patch.v, axis=(0, 1), edge_order=2)
    dzbar = 0.5 * (Fu + 1j * Fv)
    return float(np.max(np.abs(dzbar[margin:-margin, margin:-margin])))


def area_element(patch):
    return np.sqrt(fundamental_forms(patch)['det'])


def integrate_field(patch, values):
    """Integral of values dA; Simpson in u, periodic rectangle rule or Simpson in v"""
    integrand = values * area_element(patch)
    if patch.periodic_v:
        inner = np.sum(integrand, axis=1) * patch.dv
    else:
        inner = simpson(integrand, x=patch.v, axis=1)
    return float(simpson(inner, x=patch.u))


def geodesic_curvature_boundary(patch):
    """
    Integral of k_g ds over both u-boundaries of an annular patch periodic in v,
    boundary oriented with the patch to its left. Needs an orthogonal chart.
    """
    if not patch.periodic_v:
        raise ImmersionError('boundary term needs a patch periodic in v')
    fm = fundamental_forms(patch)
    if np.max(np.abs(fm['F'])) > 1e-8 * np.max(fm['E']):
        raise ImmersionError('boundary term needs an orthogonal chart (F = 0)')
    E, G = fm['E'], fm['G']
    Gu = np.gradient(G, patch.u, axis=0, edge_order=2)
    kg_ds = Gu / (2.0 * np.sqrt(E * G))
    return float(np.sum(kg_ds[-1] - kg_ds[0]) * patch.dv)

# ========================================================================================
# Closed-form patches used as oracles


def plane_patch(u, v, height=0.0):
    """Plane z = height with unit normal (0, 0, -1)"""
    U, V = np.meshgrid(u, v, indexing='ij')
    X = np.stack((U, -V, np.full_like(U, height)), axis=-1)

    def derivs(U, V):
        one = np.ones(U.shape + (1,))
        zero = np.zeros(U.shape + (3,))
        return (one * [1.0, 0.0, 0.0], one * [0.0, -1.0, 0.0], zero, zero, zero)
    return ParametricPatch(u, v, X, derivs=derivs, label='plane')


def sphere_patch(u, v, analytic=True):
    """Unit sphere in (azimuth u, polar angle v); normal points inwards, H = 1"""
    U, V = np.meshgrid(u, v, indexing='ij')
    X = np.stack((np.sin(V) * np.cos(U), np.sin(V) * np.sin(U), np.cos(V)), axis=-1)

    def derivs(U, V):
        su, cu, sv, cv = np.sin(U), np.cos(U), np.sin(V), np.cos(V)
        z = np.zeros_like(U)
        Xu = np.stack((-sv * su, sv * cu, z), axis=-1)
        Xv = np.stack((cv * cu, cv * su, -sv), axis=-1)
        Xuu = np.stack((-sv * cu, -sv * su, z), axis=-1)
        Xuv = np.stack((-cv * su, cv * cu, z), axis=-1)
        Xvv = np.stack((-sv * cu, -sv * su, -cv), axis=-1)
        return Xu, Xv, Xuu, Xuv, Xvv
    return ParametricPatch(u, v, X, derivs=derivs if analytic else None, label='sphere')


def sphere_conformal_patch(x, y):
    """
    Unit sphere in a conformal chart w = x + iy with inward normal.

    The Gauss map projected from the north pole is conj(w).
    """
    U, V = np.meshgrid(x, y, indexing='ij')
    r2 = U * U + V * V
    X = np.stack((-2.0 * U, 2.0 * V, 1.0 - r2), axis=-1) / (1.0 + r2)[..., None]
    return ParametricPatch(x, y, X, label='sphere-conformal')


def catenoid_patch(s, t, analytic=True, periodic_v=False):
    """Unit catenoid (cosh s cos t, cosh s sin t, s); conformal, I = cosh^2 s |dz|^2"""
    S, T = np.meshgrid(s, t, indexing='ij')
    X = np.stack((np.cosh(S) * np.cos(T), np.cosh(S) * np.sin(T), S), axis=-1)

    def derivs(S, T):
        ch, sh, ct, st = np.cosh(S), np.sinh(S), np.cos(T), np.sin(T)
        z = np.zeros_like(S)
        Xs = np.stack((sh * ct, sh * st, np.ones_like(S)), axis=-1)
        Xt = np.stack((-ch * st, ch * ct, z), axis=-1)
        Xss = np.stack((ch * ct, ch * st, z), axis=-1)
        Xst = np.stack((-sh * st, sh * ct, z), axis=-1)
        Xtt = np.stack((-ch * ct, -ch * st, z), axis=-1)
        return Xs, Xt, Xss, Xst, Xtt
    return ParametricPatch(s, t, X, derivs=derivs if analytic else None,
                           periodic_v=periodic_v, label='catenoid')
