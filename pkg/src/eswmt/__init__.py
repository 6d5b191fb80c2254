"""
Toolkit for elliptic special Weingarten surfaces of minimal type.

Builds the rotational special catenoids, minimal surfaces from Weierstrass data and
Kenmotsu recoveries, and checks the curvature identities they must satisfy.
"""

import logging

__version__ = '0.3.0'

quad_opt = dict(epsabs=1e-13, epsrel=1e-12, limit=200, full_output=1)  # integrate.quad
newton_opt = dict(tol=1e-14, maxiter=100, max_expand=60)  # guarded Newton in rotational

logging.getLogger('eswmt').addHandler(logging.NullHandler())
