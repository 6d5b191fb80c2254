"""
Adapted Codazzi pair of a Weingarten surface.

    I_f  = (cosh phi - H sinh phi/sqrt q) I + (sinh phi/sqrt q) II
    II_f = (sqrt q sinh phi - H cosh phi) I + cosh phi II

with phi = phi(sqrt q). The pair has H_f = 0, K_f = -q (as det II_f/det I_f) and the
same umbilic points as (I, II).
"""

# Modules
import logging
import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.ndimage import binary_dilation
from .errors import CodazziError
from .profile import adapted_phi
from .surface_kernel import (cauchy_riemann_residual, curvatures, fundamental_forms,
                             umbilic_mask)

logger = logging.getLogger('eswmt.codazzi')

SERIES_CUT = 1e-6

# ========================================================================================


class AdaptedPair(object):
    """Coefficients of (I_f, II_f) on the grid of a base patch"""

    def __init__(self, patch, profile, phi, If, IIf, mask):
        self.patch = patch
        self.profile = profile
        self.phi = phi
        self.If = If    # {'E', 'F', 'G'}
        self.IIf = IIf  # {'L', 'M', 'Nn'}
        self.mask = mask

    @property
    def det(self):
        return self.If['E'] * self.If['G'] - self.If['F']**2

    def matrices(self):
        """I_f and II_f as stacked 2x2 arrays"""
        E, F, G = (self.If[k] for k in ('E', 'F', 'G'))
        L, M, Nn = (self.IIf[k] for k in ('L', 'M', 'Nn'))
        first = np.stack((np.stack((E, F), -1), np.stack((F, G), -1)), -2)
        second = np.stack((np.stack((L, M), -1), np.stack((M, Nn), -1)), -2)
        return first, second


def _sinh_ratio(p, r, phi):
    """sinh(phi(r))/r with the removable singularity at r = 0 handled by series"""
    out = np.empty_like(r)
    big = r >= SERIES_CUT
    out[big] = np.sinh(phi[big]) / r[big]
    if np.any(~big):
        slope = float(adapted_phi(p, np.array([SERIES_CUT]))[0]) / SERIES_CUT
        x2 = (slope * r[~big])**2
        out[~big] = slope * (1.0 + x2 / 6.0 + x2**2 / 120.0 + x2**3 / 5040.0)
    return out


def adapted_pair(patch, p, method='auto'):
    """Builds (I_f, II_f); on numerically umbilic points I_f = I and II_f = 0"""
    fm = fundamental_forms(patch)
    c = curvatures(patch)
    H, q = c['H'], c['q']
    r = np.sqrt(q)
    phi = np.reshape(adapted_phi(p, r.ravel(), method), r.shape)
    ratio = _sinh_ratio(p, r, phi)
    cosh = np.cosh(phi)
    a = cosh - H * ratio
    d = r * np.sinh(phi) - H * cosh
    If = {'E': a * fm['E'] + ratio * fm['L'], 'F': a * fm['F'] + ratio * fm['M'],
          'G': a * fm['G'] + ratio * fm['Nn']}
    IIf = {'L': d * fm['E'] + cosh * fm['L'], 'M': d * fm['F'] + cosh * fm['M'],
           'Nn': d * fm['G'] + cosh * fm['Nn']}
    mask = umbilic_mask(patch)
    if np.any(mask):
        for key, base in (('E', 'E'), ('F', 'F'), ('G', 'G')):
            If[key] = np.where(mask, fm[base], If[key])
        for key in IIf:
            IIf[key] = np.where(mask, 0.0, IIf[key])
    det = If['E'] * If['G'] - If['F']**2
    if np.any(det[~mask] <= 0.0):
        raise CodazziError('adapted metric I_f is not positive definite')
    logger.debug('adapted pair on {0}: {1} umbilic samples'.format(
        patch.label, int(np.count_nonzero(mask))))
    return AdaptedPair(patch, p, phi, If, IIf, mask)


def pair_invariants(pair, tol=1e-10):
    """H_f, K_f = det II_f/det I_f, q_f and their sup-norm residuals"""
    E, F, G = (pair.If[k] for k in ('E', 'F', 'G'))
    L, M, Nn = (pair.IIf[k] for k in ('L', 'M', 'Nn'))
    det = pair.det
    Hf = (E * Nn - 2.0 * F * M + G * L) / (2.0 * det)
    Kf = (L * Nn - M * M) / det
    qf = Hf * Hf - Kf
    q = curvatures(pair.patch)['q']
    mask_f = qf < tol * np.maximum(1.0, Hf**2)
    return {'H_f': Hf, 'K_f': Kf, 'q_f': qf,
            'H_f_residual': float(np.max(np.abs(Hf))),
            'K_f_residual': float(np.max(np.abs(Kf + q))),
            'q_f_residual': float(np.max(np.abs(qf - q))),
            'umbilic_mismatch': int(np.count_nonzero(mask_f != pair.mask))}

# ========================================================================================


def _periodic_gradient(F, h, axis):
    pad = [(0, 0)] * F.ndim
    pad[axis] = (1, 1)
    Fw = np.pad(F, pad, mode='wrap')
    sl = [slice(None)] * F.ndim
    sl[axis] = slice(1, -1)
    return np.gradient(Fw, h, axis=axis)[tuple(sl)]


def _grad(F, u, v, periodic_v):
    Fu = np.gradient(F, u, axis=0, edge_order=2)
    if periodic_v:
        Fv = _periodic_gradient(F, v[1] - v[0], 1)
    else:
        Fv = np.gradient(F, v, axis=1, edge_order=2)
    return Fu, Fv


def intrinsic_curvature(E, F, G, u, v, periodic_v=False):
    """Gaussian curvature of E du^2 + 2F du dv + G dv^2 (Brioschi formula)"""
    det = E * G - F * F
    if np.any(det <= 0.0):
        raise CodazziError('degenerate metric: EG - F^2 <= 0')
    Eu, Ev = _grad(E, u, v, periodic_v)
    Fu, Fv = _grad(F, u, v, periodic_v)
    Gu, Gv = _grad(G, u, v, periodic_v)
    Evv = _grad(Ev, u, v, periodic_v)[1]
    Guu = _grad(Gu, u, v, periodic_v)[0]
    Fuv = _grad(Fu, u, v, periodic_v)[1]
    A = np.empty(E.shape + (3, 3))
    A[..., 0, 0] = -0.5 * Evv + Fuv - 0.5 * Guu
    A[..., 0, 1] = 0.5 * Eu
    A[..., 0, 2] = Fu - 0.5 * Ev
    A[..., 1, 0] = Fv - 0.5 * Gu
    A[..., 1, 1] = E
    A[..., 1, 2] = F
    A[..., 2, 0] = 0.5 * Gv
    A[..., 2, 1] = F
    A[..., 2, 2] = G
    B = np.zeros_like(A)
    B[..., 0, 1] = B[..., 1, 0] = 0.5 * Ev
    B[..., 0, 2] = B[..., 2, 0] = 0.5 * Gu
    B[..., 1:, 1:] = A[..., 1:, 1:]
    return (np.linalg.det(A) - np.linalg.det(B)) / det**2


def _rotational_profile(pair):
    """Column of an orthogonal metric and scalar depending on u only, or None"""
    if not pair.patch.meta.get('rotational'):
        return None
    if np.max(np.abs(pair.If['F'])) > 0.0:
        return None
    return pair.If['E'][:, 0], pair.If['G'][:, 0]


def _ii_norm_log(pair):
    first, second = pair.matrices()
    S = np.linalg.solve(first, second)
    norm2 = np.einsum('...ij,...ji->...', S, S)
    with np.errstate(divide='ignore'):
        return 0.5 * np.log(norm2)


def laplace_beltrami(f, E, F, G, u, v, periodic_v=False):
    """Divergence form Laplacian of f in the metric (E, F, G)"""
    det = E * G - F * F
    sq = np.sqrt(det)
    fu, fv = _grad(f, u, v, periodic_v)
    Ju = sq * (G * fu - F * fv) / det
    Jv = sq * (E * fv - F * fu) / det
    return (_grad(Ju, u, v, periodic_v)[0] + _grad(Jv, u, v, periodic_v)[1]) / sq


def simons_residual(pair, exclusion=2, margin=2):
    """
    Delta^{I_f} ln|II_f| - 2 K(I_f) off a dilated neighbourhood of the umbilic mask,
    with K(I_f) the intrinsic curvature. Rotational pairs use the reduction to a
    second order operator in the meridian coordinate.
    """
    excluded = binary_dilation(pair.mask, iterations=exclusion) if exclusion > 0 and \
        np.any(pair.mask) else pair.mask.copy()
    if np.count_nonzero(excluded) > 0.5 * excluded.size:
        raise CodazziError('Simons test inapplicable: umbilic neighbourhood covers '
                           '{0:.0%} of the patch'.format(
                               np.count_nonzero(excluded) / float(excluded.size)))
    patch = pair.patch
    u, v = patch.u, patch.v
    logii = _ii_norm_log(pair)
    rot = _rotational_profile(pair)
    if rot is not None:
        E, G = rot
        f = logii[:, 0]
        sq = np.sqrt(E * G)
        fu = np.gradient(f, u, edge_order=2)
        lap = np.gradient(sq * fu / E, u, edge_order=2) / sq
        root_g = np.sqrt(G)
        Kint = -np.gradient(np.gradient(root_g, u, edge_order=2) / np.sqrt(E), u,
                            edge_order=2) / sq
        res = np.broadcast_to((lap - 2.0 * Kint)[:, None], logii.shape)
    else:
        E, F, G = (pair.If[k] for k in ('E', 'F', 'G'))
        lap = laplace_beltrami(logii, E, F, G, u, v, patch.periodic_v)
        Kint = intrinsic_curvature(E, F, G, u, v, patch.periodic_v)
        res = lap - 2.0 * Kint
    keep = ~excluded
    keep[:margin] = keep[-margin:] = False
    if not patch.periodic_v and rot is None:
        keep[:, :margin] = keep[:, -margin:] = False
    weights = np.sqrt(pair.det) * np.abs(np.gradient(u))[:, None] * \
        np.abs(np.gradient(v))[None, :]
    vals = res[keep]
    return {'sup': float(np.max(np.abs(vals))),
            'l2': float(np.sqrt(np.sum(vals**2 * weights[keep]))),
            'excluded_fraction': float(np.count_nonzero(excluded)) / excluded.size,
            'field': res}

# ========================================================================================


def metric_comparability(pair):
    """C = max(lambda_max, 1/lambda_min) of I_f relative to I; equals exp|phi|"""
    fm = fundamental_forms(pair.patch)
    first = np.stack((np.stack((fm['E'], fm['F']), -1),
                      np.stack((fm['F'], fm['G']), -1)), -2)
    If = pair.matrices()[0]
    ev = np.real(np.linalg.eigvals(np.linalg.solve(first, If)))
    C = np.maximum(ev.max(axis=-1), 1.0 / ev.min(axis=-1))
    return {'field': C, 'sup': float(np.max(C)), 'closed_form': np.exp(np.abs(pair.phi))}


def area_element_ratio(pair):
    """det I_f/det I, identically 1"""
    return pair.det / fundamental_forms(pair.patch)['det']


def hopf_residual(pair, margin=2):
    """
    Derivative of the (2,0)-part Q_f of II_f in an I_f-conformal coordinate. For a
    rotational pair the coordinate is w = int sqrt(E_f/G_f) du + i v and Q_f depends on
    Re w alone, so holomorphy means Q_f is constant.
    """
    patch = pair.patch
    rot = _rotational_profile(pair)
    if rot is not None:
        E, G = rot
        w = cumulative_simpson(np.sqrt(E / G), x=patch.u, initial=0.0)
        dwdu2 = E / G
        Qf = 0.25 * (pair.IIf['L'][:, 0] / dwdu2 - pair.IIf['Nn'][:, 0])
        dQ = np.gradient(Qf, w, edge_order=2)[margin:-margin]
        scale = max(float(np.max(np.abs(Qf))), 1e-300)
        return {'residual': float(np.max(np.abs(dQ))) / scale, 'Q_f': Qf,
                'coordinate': w}
    fE, fF, fG = (pair.If[k] for k in ('E', 'F', 'G'))
    if np.max(np.abs(fF)) > 1e-8 * np.max(fE) or \
            np.max(np.abs(fE - fG)) > 1e-8 * np.max(fE):
        raise CodazziError('Hopf residual needs a rotational pair or an '
                           'I_f-conformal chart')
    Qf = 0.25 * ((pair.IIf['L'] - pair.IIf['Nn']) - 2j * pair.IIf['M'])
    scale = max(float(np.max(np.abs(Qf))), 1e-300)
    return {'residual': cauchy_riemann_residual(Qf, patch, margin) / scale, 'Q_f': Qf}


def curvature_discrepancy(pair, margin=2):
    """Intrinsic K(I_f) minus the extrinsic value -q"""
    patch = pair.patch
    q = curvatures(patch)['q']
    rot = _rotational_profile(pair)
    if rot is not None:
        E, G = rot
        u = patch.u
        Kint = -np.gradient(np.gradient(np.sqrt(G), u, edge_order=2) / np.sqrt(E), u,
                            edge_order=2) / np.sqrt(E * G)
        Kint = np.broadcast_to(Kint[:, None], q.shape)
    else:
        Kint = intrinsic_curvature(pair.If['E'], pair.If['F'], pair.If['G'], patch.u,
                                   patch.v, patch.periodic_v)
    diff = Kint - (-q)
    inner = diff[margin:-margin]
    return {'field': diff, 'sup': float(np.max(np.abs(inner))), 'intrinsic': Kint}
