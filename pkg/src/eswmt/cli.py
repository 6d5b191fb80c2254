"""
Command line front end.

Usage: eswmt <group> <action> [-c CONFIG] [options] [block/key=value ...]

Groups and actions:
  profile check       validate a Weingarten profile
  catenoid build      integrate, mirror and revolve a special catenoid
  weierstrass build   minimal immersion from a Weierstrass preset
  kenmotsu roundtrip  extract (G, H) from a catenoid band and recover the immersion
  verify codazzi      adapted Codazzi pair identities and the Simons residual
  verify jm           total curvature against the Jorge-Meeks formula
  verify all          the full acceptance suite
  fit end             asymptotic expansion of one end

Exit status: 0 success, 2 configuration error, 3 numerical failure or failed check,
4 I/O failure.
"""

# Python modules
import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from timeit import default_timer as timer

# Other Python modules
import numpy as np

# eswmt modules
from . import __version__
from . import analysis, codazzi, eswmt_read, kenmotsu, weierstrass
from .errors import ConfigError, EswmtError, EswmtIOError, KenmotsuError
from .profile import (Rational, Sampling, Saturating, SquareRoot, Zero,
                      admissible_tau_range, make_profile, sqrt_envelope_constant,
                      validate_profile)
from .rotational import (Generatrix, integrate_generatrix, mirror_extend, revolve,
                         comparison_catenoid_check)
from .surface_kernel import (curvatures, plane_patch, umbilic_coincidence,
                             weingarten_residual)

logger = logging.getLogger('eswmt')

ACCEPTANCE_A = (0.25, 0.5, 1.0)
ACCEPTANCE_TAU = (0.5, 1.0, 2.0)


# ========================================================================================

class Report(object):
    """Named checks with numeric evidence, results and provenance"""

    def __init__(self, command, config=None):
        self.command = command
        self.config = config
        self.checks = []
        self.results = {}
        self.timings = {}

    def check(self, name, value, target=None, tolerance=None, passed=None):
        """Records one check; passes on |value - target| <= tolerance unless given"""
        if passed is None:
            passed = bool(abs(value - target) <= tolerance)
        self.checks.append({'name': name, 'value': value, 'target': target,
                            'tolerance': tolerance, 'passed': bool(passed)})
        if passed:
            logger.info('  {0}: {1} ... ok'.format(name, _short(value)))
        else:
            logger.warning('  {0}: {1} (target {2}, tolerance {3}) ... FAILED'.format(
                name, _short(value), _short(target), _short(tolerance)))
        return bool(passed)

    def merge(self, other):
        self.checks.extend(other.checks)
        self.results.update(other.results)
        self.timings.update(other.timings)

    @property
    def passed(self):
        return all(c['passed'] for c in self.checks)

    def as_dict(self, timings=False):
        out = {'command': self.command, 'version': __version__,
               'config': self.config.as_dict() if self.config is not None else None,
               'checks': self.checks, 'results': self.results,
               'passed': self.passed}
        if timings:
            out['timings'] = self.timings
        return out


def _short(x):
    if isinstance(x, (float, np.floating)):
        return '{0:.6g}'.format(x)
    return x


class CriticalExceptionFilter(logging.Filter):
    """Filter out critical exceptions"""
    def filter(self, record):
        return not record.exc_info or record.levelno != logging.CRITICAL


def log_init(args):
    """Initialize log"""
    logger.setLevel(logging.DEBUG)  # handlers filter; other loggers keep the root level
    logger.propagate = False  # don't use default handler
    for handler in list(logger.handlers):
        if not isinstance(handler, logging.NullHandler):
            logger.removeHandler(handler)
    c_handler = logging.StreamHandler()  # console/terminal handler
    c_handler.setLevel(args.loglevel)
    c_handler.addFilter(CriticalExceptionFilter())  # let stderr print errors to screen
    c_handler.setFormatter(logging.Formatter('%(message)s'))  # only show the message
    if args.verbose:
        c_handler.setLevel(0)
        c_handler.setFormatter(logging.Formatter('%(levelname)s:%(name)s: %(message)s'))
    logger.addHandler(c_handler)
    # setup logfile
    if args.logfile:
        f_handler = logging.FileHandler(args.logfile)
        f_handler.setLevel(0)  # log everything
        f_handler.setFormatter(
            logging.Formatter('%(asctime)s|%(levelname)s:%(name)s: %(message)s'))
        logger.addHandler(f_handler)
    logging.captureWarnings(True)
    logging.getLogger('py.warnings').parent = logger


# ========================================================================================
# Builders shared by the commands

def _check_tau(p, tau):
    lo, hi = admissible_tau_range(p)
    if not (lo < tau < hi):
        raise ConfigError('neck radius tau = {0!r} outside admissible range '
                          '({1:g}, {2:g})'.format(tau, lo, hi))


def _generatrix(cfg, p, tau, ell_max=None):
    c = cfg['catenoid']
    _check_tau(p, tau)
    return integrate_generatrix(p, tau, ell_max or c['lmax'], tol=c['tol'], h0=c['h0'],
                                h_max=c['h_max'], rel_step=c['rel_step'])


def _sampling(cfg):
    s = cfg['profile']
    return Sampling(s['t_min'], s['t_max'], s['num'])


def _write_report(cfg, report, args, name):
    path = cfg.output_path(name + '.json')
    eswmt_read.write_json(path, report.as_dict(timings=args.timings))
    logger.info('report written to {0}'.format(path))


def _timed(report, name, func, *args):
    t0 = timer()
    out = func(*args)
    report.timings[name] = timer() - t0
    logger.debug('{0} took {1:.3g} s'.format(name, report.timings[name]))
    return out


# ========================================================================================
# Acceptance groups; each fills its own Report so they can run on separate threads

def group_profile(cfg):
    rep = Report('profile')
    s = _sampling(cfg)
    good = validate_profile(Rational(1.0), s)
    rep.check('profile/rational(1)/admissible', good.passes, passed=good.passes)
    rep.check('profile/rational(1)/sup_ellipticity', good.sup_ellipticity, 27.0 / 64.0,
              1e-6)
    steep = validate_profile(Rational(1.6), s)
    rep.check('profile/rational(1.6)/rejected', not steep.conditions['ellipticity'],
              passed=not steep.passes and not steep.conditions['ellipticity'])
    rep.check('profile/rational(1.6)/sup_ellipticity', steep.sup_ellipticity, 1.08, 1e-6)
    root = validate_profile(SquareRoot(0.5), s)
    rep.check('profile/sqrt(0.5)/lipschitz_rejected', not root.conditions['lipschitz'],
              passed=not root.conditions['lipschitz'])
    slow = validate_profile(Saturating(1000.0), s)
    rep.check('profile/saturating(1000)/limsup_rejected',
              not slow.conditions['limsup_infinity'],
              passed=not slow.passes and slow.growth_limit.status == 'converges')
    rep.results['profile'] = good.as_dict()
    return rep


def group_catenoid(cfg):
    rep = Report('catenoid')
    zero = Zero()
    length = np.sinh(3.0)  # z = 3 on the unit catenoid
    errors = []
    for step in (0.1, 0.05):
        g = integrate_generatrix(zero, 1.0, length, step=step)
        errors.append(float(np.max(np.abs(g.rho - np.cosh(g.z)) / np.cosh(g.z))))
    g = _generatrix(cfg, zero, 1.0, length)
    err = float(np.max(np.abs(g.rho - np.cosh(g.z)) / np.cosh(g.z)))
    rep.check('catenoid/relative_error', err, 0.0, 1e-6)
    rep.check('catenoid/step_halving_gain', errors[0] / errors[1], 8.0, None,
              passed=errors[0] / errors[1] >= 8.0)
    return rep


def group_weingarten(cfg):
    rep = Report('weingarten')
    tol = cfg['tolerances']
    worst_res = worst_K = 0.0
    for a in ACCEPTANCE_A:
        p = Rational(a)
        for tau in ACCEPTANCE_TAU:
            g = _generatrix(cfg, p, tau)
            patch = revolve(mirror_extend(g), n_theta=16)
            res = weingarten_residual(patch, p)[0]
            worst_res = max(worst_res, res)
            worst_K = max(worst_K, float(np.max(curvatures(patch)['K'])))
            inv = g.check_invariants(tol['residual'])
            rep.check('weingarten/a={0:g},tau={1:g}/shape'.format(a, tau),
                      inv['neck'] and inv['convex'], passed=inv['neck'] and inv['convex'])
    rep.check('weingarten/sup_residual', worst_res, 0.0, tol['residual'])
    rep.check('weingarten/max_K', worst_K, 0.0, 1e-10, passed=worst_K <= 1e-10)
    g = _generatrix(cfg, Rational(1.0), 1.0)
    cmp = comparison_catenoid_check(g)
    rep.check('weingarten/comparison_catenoid', cmp['margin'], 0.0, 1e-10,
              passed=cmp['passes'])
    rep.check('weingarten/tail', g.tail_behavior()[0], 'proper', None,
              passed=g.tail_behavior()[0] == 'proper')
    return rep


def group_jorge_meeks(cfg):
    rep = Report('jorge-meeks')
    jm = cfg['tolerances']['jm']
    x = np.linspace(-1.0, 1.0, 11)
    plane = analysis.total_curvature(plane_patch(x, x), tail='none')
    res = analysis.jorge_meeks_check(plane, 0, 1, jm)
    rep.check('jm/plane', plane.total, 0.0, 0.0,
              passed=plane.total == 0.0 and res['passes'])
    shio = analysis.shiohama_check(plane.total, 1, [1.0])
    rep.check('jm/plane_shiohama', shio['defect'], 0.0, jm)
    budget = analysis.total_curvature(_generatrix(cfg, Zero(), 1.0))
    res = analysis.jorge_meeks_check(budget, 0, 2, jm)
    rep.check('jm/catenoid', budget.total, -4.0 * np.pi, jm, passed=res['passes'])
    for a in ACCEPTANCE_A:
        for tau in ACCEPTANCE_TAU:
            budget = analysis.total_curvature(_generatrix(cfg, Rational(a), tau))
            res = analysis.jorge_meeks_check(budget, 0, 2, jm)
            rep.check('jm/a={0:g},tau={1:g}'.format(a, tau), budget.total, -4.0 * np.pi,
                      jm, passed=res['passes'])
            rep.check('jm/a={0:g},tau={1:g}/quadrature'.format(a, tau), budget.quadrature,
                      budget.truncated_exact, jm)
    enneper = weierstrass.metric_curvature(weierstrass.preset('enneper'))
    rep.check('jm/enneper_quadrature', enneper.total, -4.0 * np.pi, jm)
    rep.results['jm'] = res
    return rep


def _exact_band(cfg, p, l1, l2, n):
    """Revolved band whose samples are integrator nodes, so no spline enters"""
    c = cfg['catenoid']
    ell = np.linspace(l1, l2, n)
    g = integrate_generatrix(p, 1.0, l2, tol=c['tol'], h0=c['h0'], h_max=c['h_max'],
                             rel_step=c['rel_step'], ell_out=ell)
    return revolve(g, n_theta=16, ell=ell)


def _simons_orders(cfg, p, l1, l2, n):
    values = []
    for k in (1, 2, 4):
        patch = _exact_band(cfg, p, l1, l2, k * (n - 1) + 1)
        pair = codazzi.adapted_pair(patch, p)
        values.append(codazzi.simons_residual(pair, cfg['codazzi']['exclusion'])['sup'])
    return values


def group_codazzi(cfg):
    rep = Report('codazzi')
    tol = cfg['tolerances']['identity']
    n = cfg['codazzi']['n']
    k = cfg['kenmotsu']
    l1, l2 = k['l1'], k['l2']
    for a in ACCEPTANCE_A:
        p = Rational(a)
        g = _generatrix(cfg, p, 1.0)
        patch = revolve(g, n_theta=16, ell=np.linspace(l1, l2, n))
        pair = codazzi.adapted_pair(patch, p)
        inv = codazzi.pair_invariants(pair, tol)
        rep.check('codazzi/a={0:g}/H_f'.format(a), inv['H_f_residual'], 0.0, tol)
        rep.check('codazzi/a={0:g}/K_f_plus_q'.format(a), inv['K_f_residual'], 0.0, tol)
        rep.check('codazzi/a={0:g}/umbilic_mismatch'.format(a), inv['umbilic_mismatch'],
                  0, 0)
        ratio = codazzi.area_element_ratio(pair)
        rep.check('codazzi/a={0:g}/area_element'.format(a),
                  float(np.max(np.abs(ratio - 1.0))), 0.0, tol)
    p = Rational(1.0)
    for label, prof in (('catenoid', Zero()), ('a=1', p)):
        sup = _simons_orders(cfg, prof, l1, l2, n)
        gains = [sup[0] / sup[1], sup[1] / sup[2]]
        rep.check('codazzi/{0}/simons_refinement'.format(label), min(gains), 3.5, None,
                  passed=min(gains) >= 3.5)
    inner = codazzi.adapted_pair(_exact_band(cfg, p, l1, l2, n), p)
    outer = codazzi.adapted_pair(_exact_band(cfg, p, 10.0, 12.0, n), p)
    c_in = codazzi.metric_comparability(inner)['sup']
    c_out = codazzi.metric_comparability(outer)['sup']
    rep.check('codazzi/comparability_decreases', c_out, 1.0, c_in - 1.0,
              passed=1.0 <= c_out < c_in)
    hopf = codazzi.hopf_residual(inner)
    rep.check('codazzi/hopf_residual', hopf['residual'], 0.0, 1e-4)
    disc = codazzi.curvature_discrepancy(inner)
    rep.results['codazzi'] = {'intrinsic_minus_extrinsic': disc['sup'],
                              'comparability_inner': c_in, 'comparability_outer': c_out}
    return rep


def group_kenmotsu(cfg):
    rep = Report('kenmotsu')
    k = cfg['kenmotsu']
    p = Rational(1.0)
    g = _generatrix(cfg, p, 1.0, max(k['l2'], 16.0) + 1.0)
    field = kenmotsu.KenmotsuField.from_band(g, k['l1'], k['l2'], k['phi_max'], k['n'])
    rec = kenmotsu.recover_immersion(field)
    cmp = kenmotsu.align_and_compare(field.source.X, rec.X)
    rep.check('kenmotsu/roundtrip_hausdorff', cmp['hausdorff'], 0.0,
              cfg['tolerances']['hausdorff'])
    sups = []
    for m in ((k['n'] - 1) // 4 + 1, (k['n'] - 1) // 2 + 1, k['n']):
        coarse = kenmotsu.KenmotsuField.from_band(g, k['l1'], k['l2'], k['phi_max'], m)
        sups.append(kenmotsu.integrability_residual(coarse)['l2'])
    gain = min(sups[0] / sups[1], sups[1] / sups[2])
    rep.check('kenmotsu/integrability_refinement', gain, 3.0, None, passed=gain >= 3.0)
    minimal = kenmotsu.KenmotsuField.from_band(_generatrix(cfg, Zero(), 1.0, 3.0),
                                               k['l1'], k['l2'], k['phi_max'], 33)
    try:
        kenmotsu.recover_immersion(minimal)
    except KenmotsuError as err:
        raised = 'mean curvature vanishes' in str(err)
    else:
        raised = False
    rep.check('kenmotsu/minimal_rejected', raised, True, None, passed=raised)

    # quasiconformality of the Gauss map
    mu = kenmotsu.beltrami_mu(field)
    sup_mu = float(np.max(np.abs(mu.compressed())))
    rep.check('kenmotsu/sup_mu', sup_mu, 0.5, 1e-3, passed=sup_mu <= 0.5 + 1e-3)
    gamma = kenmotsu.dilatation(mu)
    rep.check('kenmotsu/dilatation', gamma, 3.0, 1e-2, passed=gamma <= 3.0 + 1e-2)
    ident = kenmotsu.beltrami_identity(field, mu, p)
    h = max(field.du, field.dv)
    rep.check('kenmotsu/beltrami_modulus', ident['modulus'], 0.0, 10.0 * h * h)
    gammas = []
    for l1, l2 in ((2.0, 4.0), (4.0, 8.0), (8.0, 16.0)):
        band = kenmotsu.KenmotsuField.from_band(g, l1, l2, k['phi_max'], 101)
        gammas.append(kenmotsu.dilatation(kenmotsu.beltrami_mu(band)))
    decreasing = gamma > gammas[0] > gammas[1] > gammas[2] >= 1.0
    rep.check('kenmotsu/outer_dilatation', gammas[-1], 1.0, gamma - 1.0,
              passed=decreasing)
    r, t = np.meshgrid(np.linspace(0.0, 1.0, 41), np.linspace(0.0, 2.0 * np.pi, 64),
                       indexing='ij')
    z = r * np.exp(1j * t)
    conformal = kenmotsu.mori_bound_check(z, z)
    rep.check('kenmotsu/mori_conformal', conformal['worst_ratio'], 1.0 / 16.0, 1e-12,
              passed=conformal['worst_ratio'] <= 1.0 / 16.0 + 1e-12)
    stretch = kenmotsu.mori_bound_check(z, (z + 0.5 * np.conj(z)) / 1.5, gamma=3.0)
    rep.check('kenmotsu/mori_stretch', stretch['violations'], 0, 0)
    rep.results['kenmotsu'] = {'hausdorff': cmp['hausdorff'], 'gamma': gamma,
                               'outer_gamma': gammas, 'integrability_l2': sups,
                               'beltrami': ident}
    return rep


def group_ends(cfg):
    rep = Report('ends')
    e = cfg['end']
    ell_max = 1.1 * e['r1'] + 10.0
    cat = _generatrix(cfg, Zero(), 1.0, ell_max)
    fit = analysis.fit_end_expansion(*analysis.end_samples(cat, e['r0'], e['r1'],
                                                           e['n_r'], e['n_t']))
    rep.check('end/catenoid_beta', fit.beta, 1.0, 0.01)
    rep.check('end/catenoid_a0', fit.a0, np.log(2.0), 0.02 * np.log(2.0))
    rep.check('end/catenoid_stability', fit.stability, 0.0, 0.05)
    x1, x2, h = analysis.end_samples(cat, e['r0'], e['r1'], e['n_r'], e['n_t'])
    sign = analysis.growth_sign_check(x1, x2, h)['sign']
    rep.check('end/catenoid_sign', sign, 'positive', None, passed=sign == 'positive')
    saddle = analysis.growth_sign_check(x1, x2, x1 * x2 / np.hypot(x1, x2), a0=0.0)
    rep.check('end/saddle_indeterminate', saddle['sign'], 'indeterminate', None,
              passed=saddle['sign'] == 'indeterminate')
    radii = e['r1'] / 2.0**np.arange(3, -1, -1)
    area = analysis.area_growth_constant(cat, radii)
    rep.check('end/catenoid_area_ratio', area['estimate'], 1.0, 0.02)
    rep.results['catenoid_end'] = fit.as_dict()
    for a in ACCEPTANCE_A:
        p = Rational(a)
        g = _generatrix(cfg, p, 1.0, ell_max)
        top = analysis.fit_end_expansion(*analysis.end_samples(g, e['r0'], e['r1'],
                                                               e['n_r'], e['n_t'], 'top'))
        bottom = analysis.fit_end_expansion(
            *analysis.end_samples(g, e['r0'], e['r1'], e['n_r'], e['n_t'], 'bottom'))
        opp = analysis.opposite_growth(top, bottom)
        rep.check('end/a={0:g}/opposite_growth'.format(a), opp['opposite'], True, None,
                  passed=opp['opposite'] and opp['equal_magnitude'])
    # two ends, each with area constant c: int K = 2 pi (chi - 2c)
    c = analysis.area_growth_constant(g, radii)['estimate']
    budget = analysis.total_curvature(g)
    shio = analysis.shiohama_check(budget.total, 0, [c, c], tol=0.05 * 4.0 * np.pi)
    rep.check('end/shiohama', shio['lhs'], shio['rhs'], 0.05 * 4.0 * np.pi)
    return rep


def group_second_form(cfg):
    rep = Report('second-form')
    cat = analysis.second_form_budget(_generatrix(cfg, Zero(), 1.0), 0.0)
    rep.check('second_form/catenoid_II2', cat['int_II2'], 8.0 * np.pi, 0.08 * np.pi)
    rep.check('second_form/catenoid_inequality', cat['margin'], 0.0, None,
              passed=cat['holds'])
    p = Rational(1.0)
    c_bar = sqrt_envelope_constant(p, _sampling(cfg))
    mt = analysis.second_form_budget(_generatrix(cfg, p, 1.0), c_bar)
    rep.check('second_form/a=1_inequality', mt['margin'], 0.0, None,
              passed=mt['holds'] and mt['margin'] > 0.0)
    rep.check('second_form/a=1_decay', mt['decay'], 0.0, 1e-2, passed=mt['decay'] < 1e-2)
    rep.results['second_form'] = {'catenoid': cat, 'a=1': mt, 'c_bar': c_bar}
    return rep


def group_gauss_bonnet(cfg):
    rep = Report('gauss-bonnet')
    for a in ACCEPTANCE_A:
        for tau in ACCEPTANCE_TAU:
            g = mirror_extend(_generatrix(cfg, Rational(a), tau, 10.0))
            for L in (2.0, 8.0):
                patch = revolve(g, n_theta=16, ell=np.linspace(-L, L, 2001))
                gb = analysis.gauss_bonnet_check(patch, chi=0)
                rep.check('gauss_bonnet/a={0:g},tau={1:g},L={2:g}'.format(a, tau, L),
                          gb['defect'], 0.0, 1e-3)
    return rep


def group_weierstrass(cfg):
    rep = Report('weierstrass')
    w = cfg['weierstrass']
    domain = {'r_min': w['r_min'], 'r_max': w['r_max']}
    data = weierstrass.preset('catenoid', **domain)
    grid = weierstrass.default_grid(data, w['nr'], w['nt'])
    patch, period = weierstrass.integrate_immersion(data, grid)
    rep.check('weierstrass/catenoid_period', float(np.max(np.abs(period))), 0.0, 1e-8)
    S, T = patch.mesh()
    closed = np.stack((-np.cosh(S) * np.cos(T), -np.cosh(S) * np.sin(T), S), axis=-1)
    cmp = kenmotsu.align_and_compare(closed, patch.X)
    rep.check('weierstrass/catenoid_closed_form', cmp['hausdorff'], 0.0, 1e-6)
    G = kenmotsu.gauss_map_stereo(patch)
    gerr = float(np.max(np.abs(G - np.exp(S + 1j * T))[2:-2]))
    h = max(patch.du, patch.dv)
    rep.check('weierstrass/gauss_map', gerr, 0.0, 10.0 * h * h)
    helicoid = weierstrass.preset('helicoid-assoc', **domain)
    period = weierstrass.integrate_immersion(helicoid, grid)[1]
    rep.check('weierstrass/helicoid_period', abs(period[2]), 2.0 * np.pi, 1e-6)
    enneper = weierstrass.preset('enneper')
    patch = weierstrass.integrate_immersion(enneper)[0]
    rep.check('weierstrass/enneper_paths', patch.meta['path_discrepancy'], 0.0, 1e-9)
    sups = []
    for n in (41, 81):
        x = np.linspace(-0.7, 0.7, n)
        coarse = weierstrass.integrate_immersion(enneper, (x, x), basepoint=(n // 2,
                                                                             n // 2))[0]
        sups.append(float(np.max(np.abs(curvatures(coarse)['H'][2:-2, 2:-2]))))
    rep.check('weierstrass/enneper_minimal', sups[0] / sups[1], 3.5, None,
              passed=sups[0] / sups[1] >= 3.5)
    reg = weierstrass.regularity_check(weierstrass.preset('branch'))
    rep.check('weierstrass/branch_point', reg['summary'], 'branch point at 0', None,
              passed=bool(reg['branch_points']) and not reg['irregular_points'])
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1.0, 1.0, 100) + 1j * rng.uniform(-1.0, 1.0, 100)
    null = []
    for name in ('enneper', 'catenoid', 'helicoid-assoc', 'branch'):
        at = np.append(pts, 0.0) if name == 'branch' else pts
        phi = weierstrass.make_phi(weierstrass.preset(name), at)
        null.append(float(np.max(weierstrass.null_residual(phi))))
    rep.check('weierstrass/null_condition', max(null), 0.0, weierstrass.NULL_TOL)
    flat = weierstrass.metric_curvature(weierstrass.preset('plane'))
    rep.check('weierstrass/plane_total', flat.total, 0.0, 0.0)
    return rep


GROUPS = (group_profile, group_catenoid, group_weingarten, group_jorge_meeks,
          group_codazzi, group_kenmotsu, group_ends, group_second_form,
          group_gauss_bonnet, group_weierstrass)


# ========================================================================================
# Commands

def cmd_profile_check(cfg, args):
    p = make_profile(args.profile) if args.profile else cfg.profile()
    rep = Report('profile check', cfg)
    result = _timed(rep, 'validate', validate_profile, p, _sampling(cfg))
    for name, ok in sorted(result.conditions.items()):
        rep.check('profile/' + name, ok, True, None, passed=ok)
    rep.results['profile'] = result.as_dict()
    try:
        rep.results['admissible_tau'] = list(admissible_tau_range(p))
    except EswmtError as err:
        rep.results['admissible_tau'] = str(err)
    _write_report(cfg, rep, args, 'profile')
    return rep


def cmd_catenoid_build(cfg, args):
    p = make_profile(args.profile) if args.profile else cfg.profile()
    tau = args.tau if args.tau is not None else cfg['catenoid']['tau']
    _check_tau(p, tau)
    rep = Report('catenoid build', cfg)
    g = _timed(rep, 'integrate', _generatrix, cfg, p, tau)
    full = mirror_extend(g)
    inv = g.check_invariants(cfg['tolerances']['residual'])
    rep.check('catenoid/residual', inv['residual'], 0.0, cfg['tolerances']['residual'])
    rep.check('catenoid/neck', inv['neck'], True, None, passed=inv['neck'])
    rep.check('catenoid/convex', inv['convex'], True, None, passed=inv['convex'])
    rep.check('catenoid/arclength', inv['arclength_defect'], 0.0, 1e-6)
    budget = analysis.total_curvature(g)
    rep.results['total_curvature'] = budget.as_dict()
    rep.results['tail'] = g.tail_behavior()
    rep.results['comparison_catenoid'] = comparison_catenoid_check(g)
    patch = revolve(full, cfg['catenoid']['n_theta'])
    rep.results['umbilic_coincidence'] = umbilic_coincidence(patch)
    eswmt_read.write_generatrix_csv(cfg.output_path('generatrix.csv'), full)
    eswmt_read.write_obj(cfg.output_path('catenoid.obj'), patch)
    eswmt_read.write_patch_h5(cfg.output_path('catenoid.h5'), patch)
    _write_report(cfg, rep, args, 'catenoid')
    return rep


def cmd_weierstrass_build(cfg, args):
    w = cfg['weierstrass']
    name = args.preset or w['preset']
    data = weierstrass.preset(name)
    if data.domain['kind'] == 'annulus':
        data.domain.update(r_min=w['r_min'], r_max=w['r_max'])
    rep = Report('weierstrass build', cfg)
    reg = weierstrass.regularity_check(data)
    rep.results['regularity'] = reg
    patch, period = _timed(rep, 'integrate', weierstrass.integrate_immersion, data,
                           weierstrass.default_grid(data, w['nr'], w['nt']))
    rep.results['period'] = period
    rep.results['quadrature_error'] = patch.meta['quadrature_error']
    if period is None:
        rep.check('weierstrass/path_discrepancy', patch.meta['path_discrepancy'], 0.0,
                  1e-9)
    if not reg['irregular_points']:
        mc = _timed(rep, 'metric', weierstrass.metric_curvature, data, None, w['radius'])
        rep.results['total_curvature'] = mc.as_dict()
    eswmt_read.write_obj(cfg.output_path('weierstrass.obj'), patch)
    eswmt_read.write_patch_h5(cfg.output_path('weierstrass.h5'), patch)
    _write_report(cfg, rep, args, 'weierstrass')
    return rep


def cmd_kenmotsu_roundtrip(cfg, args):
    p = make_profile(args.profile) if args.profile else cfg.profile()
    tau = args.tau if args.tau is not None else cfg['catenoid']['tau']
    k = cfg['kenmotsu']
    l1, l2 = (float(x) for x in args.band.split(',')) if args.band else (k['l1'], k['l2'])
    rep = Report('kenmotsu roundtrip', cfg)
    g = _generatrix(cfg, p, tau, l2 + 1.0)
    field = kenmotsu.KenmotsuField.from_band(g, l1, l2, k['phi_max'], k['n'])
    rec = _timed(rep, 'recover', kenmotsu.recover_immersion, field)
    cmp = kenmotsu.align_and_compare(field.source.X, rec.X)
    rep.check('kenmotsu/roundtrip_hausdorff', cmp['hausdorff'], 0.0,
              cfg['tolerances']['hausdorff'])
    integ = kenmotsu.integrability_residual(field)
    rep.results['integrability'] = {'sup': integ['sup'], 'l2': integ['l2']}
    mu = kenmotsu.beltrami_mu(field)
    rep.results['dilatation'] = kenmotsu.dilatation(mu)
    rep.results['beltrami'] = kenmotsu.beltrami_identity(field, mu, p)
    eswmt_read.write_obj(cfg.output_path('kenmotsu.obj'), rec)
    _write_report(cfg, rep, args, 'kenmotsu')
    return rep


def cmd_verify_codazzi(cfg, args):
    rep = Report('verify codazzi', cfg)
    if args.input:
        patch = eswmt_read.patch_h5(args.input)
        p = make_profile(patch.meta['profile']) if 'profile' in patch.meta \
            else cfg.profile()
    else:
        p = cfg.profile()
        g = _generatrix(cfg, p, cfg['catenoid']['tau'])
        k = cfg['kenmotsu']
        patch = revolve(g, 16, ell=np.linspace(k['l1'], k['l2'], cfg['codazzi']['n']))
    tol = cfg['tolerances']['identity']
    pair = codazzi.adapted_pair(patch, p)
    inv = codazzi.pair_invariants(pair, tol)
    rep.check('codazzi/H_f', inv['H_f_residual'], 0.0, tol)
    rep.check('codazzi/K_f_plus_q', inv['K_f_residual'], 0.0, tol)
    rep.check('codazzi/umbilic_mismatch', inv['umbilic_mismatch'], 0, 0)
    try:
        simons = codazzi.simons_residual(pair, cfg['codazzi']['exclusion'])
        rep.results['simons'] = {'sup': simons['sup'], 'l2': simons['l2'],
                                 'excluded_fraction': simons['excluded_fraction']}
    except EswmtError as err:
        rep.results['simons'] = str(err)
    rep.results['curvature_discrepancy'] = codazzi.curvature_discrepancy(pair)['sup']
    rep.results['comparability'] = codazzi.metric_comparability(pair)['sup']
    _write_report(cfg, rep, args, 'codazzi')
    return rep


def _surface(cfg, path):
    """A generatrix CSV (with the configured profile) or an HDF5 patch"""
    if path is None:
        return _generatrix(cfg, cfg.profile(), cfg['catenoid']['tau'])
    if path.endswith('.csv'):
        g = eswmt_read.generatrix_csv(path, cfg.profile())
        return g.upper() if g.full else g
    return eswmt_read.patch_h5(path)


def cmd_verify_jm(cfg, args):
    rep = Report('verify jm', cfg)
    surface = _surface(cfg, args.surface)
    tail = 'turning-angle' if not hasattr(surface, 'X') else 'none'
    budget = analysis.total_curvature(surface, tail=tail)
    res = analysis.jorge_meeks_check(budget, args.genus, args.ends,
                                     cfg['tolerances']['jm'])
    rep.check('jm/total_curvature', budget.total, res['target'], cfg['tolerances']['jm'],
              passed=res['passes'])
    rep.results['budget'] = budget.as_dict()
    rep.results['jm'] = res
    _write_report(cfg, rep, args, 'jm')
    return rep


def cmd_fit_end(cfg, args):
    rep = Report('fit end', cfg)
    e = cfg['end']
    r0, r1 = (float(x) for x in args.annulus.split(',')) if args.annulus \
        else (e['r0'], e['r1'])
    which = args.end or e['which']
    if args.surface:
        g = _surface(cfg, args.surface)
        if not isinstance(g, Generatrix):
            raise ConfigError('fit end needs a rotational surface; {0} is a patch, pass '
                              'a generatrix table (.csv)'.format(args.surface))
    else:
        g = _generatrix(cfg, cfg.profile(), cfg['catenoid']['tau'], 1.1 * r1 + 10.0)
    samples = analysis.end_samples(g, r0, r1, e['n_r'], e['n_t'], which)
    fit = analysis.fit_end_expansion(*samples)
    rep.check('end/stability', fit.stability, 0.0, 0.05)
    rep.results['fit'] = fit.as_dict()
    rep.results['growth_sign'] = analysis.growth_sign_check(*samples, a0=fit.a0)
    _write_report(cfg, rep, args, 'end')
    return rep


def cmd_verify_all(cfg, args):
    rep = Report('verify all', cfg)
    threads = cfg['run']['threads']
    t0 = timer()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda grp: grp(cfg), GROUPS))
    else:
        parts = [grp(cfg) for grp in GROUPS]
    for grp, part in zip(GROUPS, parts):
        rep.merge(part)
    rep.timings['suite'] = timer() - t0

    # artifacts and the file round trip
    p = cfg.profile()
    g = _generatrix(cfg, p, cfg['catenoid']['tau'])
    k = cfg['kenmotsu']
    patch = revolve(g, 16, ell=np.linspace(k['l1'], k['l2'], cfg['codazzi']['n']))
    eswmt_read.write_generatrix_csv(cfg.output_path('generatrix.csv'), mirror_extend(g))
    eswmt_read.write_obj(cfg.output_path('catenoid.obj'),
                         revolve(mirror_extend(g), cfg['catenoid']['n_theta']))
    h5 = cfg.output_path('patch.h5')
    eswmt_read.write_patch_h5(h5, patch)
    before = codazzi.pair_invariants(codazzi.adapted_pair(patch, p))
    again = eswmt_read.patch_h5(h5)
    after = codazzi.pair_invariants(codazzi.adapted_pair(again, make_profile(
        again.meta['profile'])))
    same = all(before[key] == after[key] for key in
               ('H_f_residual', 'K_f_residual', 'q_f_residual'))
    rep.check('io/patch_roundtrip', same, True, None, passed=same)
    _write_report(cfg, rep, args, 'verify')
    return rep


COMMANDS = {('profile', 'check'): cmd_profile_check,
            ('catenoid', 'build'): cmd_catenoid_build,
            ('weierstrass', 'build'): cmd_weierstrass_build,
            ('kenmotsu', 'roundtrip'): cmd_kenmotsu_roundtrip,
            ('verify', 'codazzi'): cmd_verify_codazzi,
            ('verify', 'jm'): cmd_verify_jm,
            ('verify', 'all'): cmd_verify_all,
            ('fit', 'end'): cmd_fit_end}


# ========================================================================================

def build_parser():
    parser = argparse.ArgumentParser(
        prog='eswmt', description='Special catenoids and ESWMT surface checks')
    parser.add_argument('--version', action='version', version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', type=str, default=None,
                        help='configuration file (<block> / key = value, or .json)')
    common.add_argument('overrides', nargs='*', default=[],
                        help='block/key=value settings overriding the configuration')
    common.add_argument('-d', '--debug',
                        help='print debugging information',
                        action='store_const',
                        dest='loglevel',
                        const=logging.DEBUG,
                        default=logging.INFO)
    common.add_argument('-v', '--verbose', default=False, action='store_true',
                        help='print all output, timestamps and logging information')
    common.add_argument('--logfile', type=str, default=None,
                        help='set filename of logfile')
    common.add_argument('--timings', default=False, action='store_true',
                        help='include wall-clock timings in the JSON report')

    groups = parser.add_subparsers(dest='group')
    groups.required = True
    actions = {}
    for group, action in COMMANDS:
        if group not in actions:
            sub = groups.add_parser(group)
            actions[group] = sub.add_subparsers(dest='action')
            actions[group].required = True
        actions[group].add_parser(action, parents=[common])
    sub = actions['profile'].choices['check']
    sub.add_argument('--profile', type=str, default=None, help="e.g. 'rational(0.5)'")
    sub = actions['catenoid'].choices['build']
    sub.add_argument('--profile', type=str, default=None)
    sub.add_argument('--tau', type=float, default=None)
    sub = actions['weierstrass'].choices['build']
    sub.add_argument('--preset', default=None,
                     choices=['enneper', 'catenoid', 'helicoid-assoc', 'branch', 'plane'])
    sub = actions['kenmotsu'].choices['roundtrip']
    sub.add_argument('--profile', type=str, default=None)
    sub.add_argument('--tau', type=float, default=None)
    sub.add_argument('--band', type=str, default=None, help='l1,l2')
    sub = actions['verify'].choices['codazzi']
    sub.add_argument('--input', type=str, default=None, help='HDF5 patch file')
    sub = actions['verify'].choices['jm']
    sub.add_argument('--surface', type=str, default=None,
                     help='generatrix .csv or patch .h5')
    sub.add_argument('--genus', type=int, default=0)
    sub.add_argument('--ends', type=int, default=2)
    sub = actions['fit'].choices['end']
    sub.add_argument('--surface', type=str, default=None, help='generatrix .csv')
    sub.add_argument('--end', choices=['top', 'bottom'], default=None)
    sub.add_argument('--annulus', type=str, default=None, help='R0,R1')
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    log_init(args)
    try:
        logger.debug('args: ' + str(vars(args)))
        cfg = eswmt_read.RunConfig.from_file(args.config, args.overrides)
        if not os.path.isdir(cfg['output']['directory']):
            raise EswmtIOError('output directory {0} does not exist'.format(
                cfg['output']['directory']))
        report = COMMANDS[(args.group, args.action)](cfg, args)
    except EswmtError as err:
        logger.error('{0}: {1}'.format(type(err).__name__, err))
        return err.exit_code
    except FloatingPointError as err:
        logger.error('FloatingPointError: {0}'.format(err))
        return 3
    except OSError as err:
        logger.error('OSError: {0}'.format(err))
        return 4
    n = len(report.checks)
    ok = sum(c['passed'] for c in report.checks)
    logger.info('Summary: {0} out of {1} checks passed'.format(ok, n))
    return 0 if report.passed else 3


if __name__ == '__main__':
    sys.exit(main())
