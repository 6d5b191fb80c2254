"""
Gauss map, Beltrami coefficient and Kenmotsu recovery on conformal grids.

With z = u + i v conformal and G the stereographic projection of N from the north pole,

    x_z = -(1/H) conj(G_zbar) xi(G)/(1 + |G|^2)^2,   xi = (1 - G^2, i (1 + G^2), 2 G),

and x = 2 Re int x_z dz.
"""

# Modules
import logging
import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.spatial import KDTree
from scipy.spatial.transform import Rotation
from .errors import KenmotsuError
from .rotational import band_patch
from .surface_kernel import (ParametricPatch, conformal_factor, curvatures,
                             fundamental_forms, hopf_differential, umbilic_mask)

logger = logging.getLogger('eswmt.kenmotsu')

POLE_TOL = 1e-8

# ========================================================================================


def gauss_map_stereo(patch, pole='north'):
    """G = (N1 + i N2)/(1 - N3), or (N1 - i N2)/(1 + N3) = 1/G from the south pole"""
    N = fundamental_forms(patch)['N']
    if pole == 'north':
        denom = 1.0 - N[..., 2]
        num = N[..., 0] + 1j * N[..., 1]
    elif pole == 'south':
        denom = 1.0 + N[..., 2]
        num = N[..., 0] - 1j * N[..., 1]
    else:
        raise KenmotsuError('projection pole must be north or south, got {0}'.format(
            pole))
    if np.any(denom < POLE_TOL):
        i, j = np.argwhere(denom < POLE_TOL)[0]
        raise KenmotsuError('normal at projection pole near (u,v) = ({0:.6g}, {1:.6g}): '
                            'switch projection pole'.format(patch.u[i], patch.v[j]))
    return num / denom


def normal_from_gauss(G, pole='north'):
    """Inverse stereographic projection"""
    G = np.asarray(G, dtype=complex)
    s = 1.0 + np.abs(G)**2
    if pole == 'north':
        return np.stack((2.0 * G.real / s, 2.0 * G.imag / s, (s - 2.0) / s), axis=-1)
    return np.stack((2.0 * G.real / s, -2.0 * G.imag / s, (2.0 - s) / s), axis=-1)


class KenmotsuField(object):
    """Gauss map G and mean curvature H sampled on a conformal (u, v) grid"""

    def __init__(self, u, v, G, H, periodic_v=False, source=None, label=''):
        self.u = np.asarray(u, dtype=float)
        self.v = np.asarray(v, dtype=float)
        self.G = np.asarray(G, dtype=complex)
        self.H = np.asarray(H, dtype=float) * np.ones(self.G.shape)
        self.periodic_v = periodic_v
        self.source = source  # patch the data were extracted from, if any
        self.label = label

    @property
    def shape(self):
        return self.G.shape

    @property
    def du(self):
        return self.u[1] - self.u[0]

    @property
    def dv(self):
        return self.v[1] - self.v[0]

    @classmethod
    def from_patch(cls, patch, pole='north', tol=1e-8):
        if conformal_factor(patch, tol) is None:
            raise KenmotsuError('Kenmotsu data need a conformal chart')
        G = gauss_map_stereo(patch, pole)
        return cls(patch.u, patch.v, G, curvatures(patch)['H'],
                   periodic_v=patch.periodic_v, source=patch, label=patch.label)

    @classmethod
    def from_band(cls, g, l1, l2, phi_max=0.5 * np.pi, n=401, n_phi=None):
        """Band l1 <= ell <= l2 of a generatrix, sampled uniformly in (sigma, phi)"""
        ell = uniform_sigma_samples(g, l1, l2, n)
        phi = np.linspace(0.0, phi_max, n_phi or n)
        return cls.from_patch(band_patch(g, ell, phi, conformal=True))

    def wirtinger(self, F):
        """(F_z, F_zbar) by second-order differences"""
        Fu = np.gradient(F, self.u, axis=0, edge_order=2)
        if self.periodic_v:
            Fw = np.concatenate((F[:, -1:], F, F[:, :1]), axis=1)
            Fv = np.gradient(Fw, self.dv, axis=1)[:, 1:-1]
        else:
            Fv = np.gradient(F, self.v, axis=1, edge_order=2)
        return 0.5 * (Fu - 1j * Fv), 0.5 * (Fu + 1j * Fv)

    def laplacian(self, F):
        """F_{z zbar} = (F_uu + F_vv)/4"""
        return self.wirtinger(self.wirtinger(F)[1])[0]

    def angle_function(self, nu=(0.0, 0.0, 1.0)):
        """<N, nu> from the Gauss map"""
        return np.einsum('...i,i->...', normal_from_gauss(self.G), np.asarray(nu, float))


def uniform_sigma_samples(g, l1, l2, n):
    """Arc lengths at which the conformal coordinate sigma is uniformly spaced"""
    sig = g.spline('sigma')
    rho = g.spline('rho')
    target = np.linspace(float(sig(l1)), float(sig(l2)), n)
    ell = np.interp(target, g.sigma, g.ell)
    for _ in range(4):
        # d sigma/d ell = 1/rho
        ell = np.clip(ell - (sig(ell) - target) * rho(ell), l1, l2)
    ell[0], ell[-1] = l1, l2
    return ell

# ========================================================================================


def beltrami_mu(field, tol=1e-8):
    """
    mu = G_zbar/G_z as a masked array; masked where |G_z| is below tol relative to the
    largest first derivative. mu = 0 at numerically umbilic points of the source patch.
    """
    Gz, Gzb = field.wirtinger(field.G)
    scale = max(float(np.max(np.abs(Gz))), float(np.max(np.abs(Gzb))), 1e-300)
    valid = np.abs(Gz) > tol * scale
    lost = np.count_nonzero(~valid) / float(valid.size)
    if lost > 0.1:
        raise KenmotsuError('degenerate Gauss map chart: |G_z| vanishes on {0:.0%} '
                            'of the grid'.format(lost))
    with np.errstate(divide='ignore', invalid='ignore'):
        mu = np.where(valid, Gzb / np.where(valid, Gz, 1.0), 0.0)
    if field.source is not None:
        mu = np.where(umbilic_mask(field.source), 0.0, mu)
    return np.ma.masked_array(mu, mask=~valid)


def beltrami_identity(field, mu, profile, margin=2):
    """
    Compares |mu| with f(q)/sqrt(q) and the phase of mu with H lambda/Q, both over
    interior, non-umbilic samples.
    """
    if field.source is None:
        raise KenmotsuError('Beltrami identity needs the source patch')
    patch = field.source
    c = curvatures(patch)
    hopf = hopf_differential(patch)
    keep = ~np.ma.getmaskarray(mu) & ~umbilic_mask(patch)
    inner = np.zeros_like(keep)
    inner[margin:-margin, margin:-margin] = True
    keep &= inner
    sq = np.sqrt(c['q'][keep])
    target = np.asarray(profile.eval(c['q'][keep])) / sq
    m = np.ma.getdata(mu)[keep]
    mu8 = c['H'][keep] * hopf.lam[keep] / hopf.Q[keep]
    return {'modulus': float(np.max(np.abs(np.abs(m) - target))),
            'hopf_modulus': float(np.max(np.abs(np.abs(mu8) - target))),
            'phase': float(np.max(np.abs(m - mu8))),
            'samples': int(np.count_nonzero(keep))}


def dilatation(mu):
    """Gamma = (1 + ||mu||)/(1 - ||mu||) over unmasked samples"""
    norm = float(np.max(np.abs(np.ma.compressed(np.ma.asarray(mu)))))
    if norm >= 1.0:
        raise KenmotsuError('not quasiconformal: ||mu|| = {0:.6g}'.format(norm))
    return (1.0 + norm) / (1.0 - norm)


def dilatation_field(mu):
    """Local dilatation (1 + |mu|)/(1 - |mu|)"""
    a = np.ma.abs(mu)
    return (1.0 + a) / (1.0 - a)


def mori_bound_check(z, Gz, gamma=None, mu=None, pairs=4000, seed=0):
    """
    Samples pairs of points of a quasiconformal self-map of the unit disk fixing 0 and
    reports the worst ratio |G(z) - G(w)|/(16 |z - w|^(1/Gamma)).
    """
    z = np.ravel(np.asarray(z, dtype=complex))
    Gz = np.ravel(np.asarray(Gz, dtype=complex))
    # polar grids repeat the centre and the seam
    first = np.unique(np.round(z, 12), return_index=True)[1]
    z, Gz = z[first], Gz[first]
    if gamma is None:
        gamma = 1.0 if mu is None else dilatation(mu)
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise KenmotsuError('Mori bound needs samples in the unit disk')
    origin = np.argmin(np.abs(z))
    rng = np.random.default_rng(seed)
    i = rng.integers(0, z.size, pairs)
    j = rng.integers(0, z.size, pairs)
    gap = np.abs(z[i] - z[j])
    keep = gap > 0.0
    i, j, gap = i[keep], j[keep], gap[keep]
    if i.size == 0:
        raise KenmotsuError('Mori bound needs at least two distinct samples')
    ratio = np.abs(Gz[i] - Gz[j]) / (16.0 * gap**(1.0 / gamma))
    report = {'gamma': float(gamma), 'pairs': int(i.size),
              'worst_ratio': float(np.nanmax(ratio)),
              'violations': int(np.count_nonzero(ratio > 1.0)),
              'normalization': float(abs(Gz[origin]))}
    logger.debug('Mori bound: worst ratio {0:.4g} over {1} pairs'.format(
        report['worst_ratio'], report['pairs']))
    return report

# ========================================================================================


def integrability_residual(field, margin=2):
    """
    H (G_{z zbar} - 2 conj(G) G_z G_zbar/(1 + |G|^2)) - H_z G_zbar on interior samples.
    Returns sup and discrete L2 norms and the residual grid.
    """
    G, H = field.G, field.H
    Gz, Gzb = field.wirtinger(G)
    Hz = field.wirtinger(H.astype(complex))[0]
    Gzzb = field.laplacian(G)
    res = H * (Gzzb - 2.0 * np.conj(G) * Gz * Gzb / (1.0 + np.abs(G)**2)) - Hz * Gzb
    rows = slice(margin, -margin)
    cols = slice(None) if field.periodic_v else slice(margin, -margin)
    inner = res[rows, cols]
    l2 = np.sqrt(np.sum(np.abs(inner)**2) * field.du * field.dv)
    return {'sup': float(np.max(np.abs(inner))), 'l2': float(l2), 'field': res}


def kenmotsu_integrand(field):
    """x_z on the grid"""
    G, H = field.G, field.H
    if np.any(np.abs(H) < 1e-8 * max(1.0, float(np.max(np.abs(H))))):
        raise KenmotsuError('mean curvature vanishes: Kenmotsu recovery undefined')
    Gzb = field.wirtinger(G)[1]
    xi = np.stack((1.0 - G * G, 1j * (1.0 + G * G), 2.0 * G), axis=-1)
    scale = -np.conj(Gzb) / (H * (1.0 + np.abs(G)**2)**2)
    return scale[..., None] * xi


def recover_immersion(field, basepoint=(0, 0)):
    """
    x = 2 Re int x_z dz: along u on row j0 from the basepoint, then along v.
    The result is unique up to a rigid motion.
    """
    xz = kenmotsu_integrand(field)
    xu = 2.0 * xz.real
    xv = -2.0 * xz.imag
    i0, j0 = basepoint
    first = cumulative_simpson(xu[:, j0], x=field.u, axis=0, initial=0.0)
    first -= first[i0]
    rows = cumulative_simpson(xv, x=field.v, axis=1, initial=0.0)
    X = first[:, None, :] + rows - rows[:, j0:j0 + 1]
    patch = ParametricPatch(field.u, field.v, X, periodic_v=False,
                            label='kenmotsu recovery {0}'.format(field.label))
    logger.debug('recovered immersion on {0}x{1} grid'.format(*field.shape))
    return patch


def align_and_compare(A, B):
    """
    Rigid (Kabsch) alignment of the point set B onto A, then the symmetric Hausdorff
    distance. A and B must list corresponding points.
    """
    a = np.reshape(np.asarray(A, dtype=float), (-1, 3))
    b = np.reshape(np.asarray(B, dtype=float), (-1, 3))
    if a.shape != b.shape:
        raise KenmotsuError('alignment needs corresponding point sets')
    ca, cb = a.mean(axis=0), b.mean(axis=0)
    rot, rssd = Rotation.align_vectors(a - ca, b - cb)
    moved = rot.apply(b - cb) + ca
    # nearest neighbours by tree
    hausdorff = max(float(np.max(KDTree(moved).query(a)[0])),
                    float(np.max(KDTree(a).query(moved)[0])))
    return {'hausdorff': float(hausdorff),
            'rms': float(np.sqrt(np.mean(np.sum((a - moved)**2, axis=1)))),
            'rotation_angle': float(rot.magnitude()),
            'aligned': moved}
