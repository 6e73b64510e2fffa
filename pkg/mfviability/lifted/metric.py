"""
The metric W_p on L(m).

For atomic bases the plan constraints of Gamma(beta_1, beta_2) force every
plan to be diagonal in the base point, so W_p^p decomposes into a
base-weighted sum of fiberwise W_p^p values. ``lifted_metric`` computes that
sum; ``lifted_metric_joint_oracle`` solves the undecomposed LP and is kept as
an independent check.
"""
import logging

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from ..config import setting
from ..errors import BaseMismatchError, InstanceTooLargeError, MFViabilityError
from ..measures import exact_emd, merge_support
from ..geometry import distance_array

logger = logging.getLogger(__name__)

SUPPORTED_P = (1, 2)


def same_base(beta1, beta2, tol=None):
    if tol is None:
        tol = setting('plan_tolerance')
    b1, b2 = beta1.base, beta2.base
    if b1.dim != b2.dim or b1.size != b2.size:
        return False
    return (np.max(np.abs(b1.weights - b2.weights)) <= tol and
            np.max(distance_array(b1.atoms, b2.atoms)) <= tol)


def _check(beta1, beta2, p):
    if p not in SUPPORTED_P:
        raise ValueError("lifted metric supports p in {}, got {}".format(SUPPORTED_P, p))
    if not same_base(beta1, beta2):
        raise BaseMismatchError()


def _velocity_cost(v1, v2, p):
    return np.linalg.norm(v1[:, None, :] - v2[None, :, :], axis=-1) ** p


def lifted_metric(beta1, beta2, p=1):
    """
    W_p(beta1, beta2) = [sum_i m_i W_p^p(fiber_i(beta1), fiber_i(beta2))]^(1/p)
    :param p: 1 or 2
    """
    _check(beta1, beta2, p)
    total = 0.0
    for m_i, (v1, w1), (v2, w2) in zip(beta1.base.weights, beta1.fibers, beta2.fibers):
        value, _ = exact_emd(w1, w2, _velocity_cost(v1, v2, p))
        total += m_i * value
    return float(total ** (1.0 / p))


def lifted_metric_joint_oracle(beta1, beta2, p=1):
    """
    Solve the LP over plans gamma on T^d x R^d x R^d with the Gamma marginal
    constraints stated directly: variables gamma(x_i, a, b) for every base
    atom and every pair of velocities drawn from the whole supports.
    """
    _check(beta1, beta2, p)
    cap = setting('joint_oracle_max_support')
    size = max(beta1.support_size, beta2.support_size)
    if size > cap:
        raise InstanceTooLargeError(size, cap)

    _, vel1, mass1 = beta1.support()
    _, vel2, mass2 = beta2.support()
    union1, _, _ = merge_support(vel1, mass1, periodic=False)
    union2, _, _ = merge_support(vel2, mass2, periodic=False)
    n, na, nb = beta1.base.size, union1.shape[0], union2.shape[0]

    def marginal(beta, union):
        table = np.zeros((n, union.shape[0]))
        for i, (v, w) in enumerate(beta.fibers):
            dist = np.linalg.norm(v[:, None, :] - union[None, :, :], axis=-1)
            table[i, np.argmin(dist, axis=1)] += beta.base.weights[i] * w
        return table

    b1 = marginal(beta1, union1)
    b2 = marginal(beta2, union2)

    # variable (i, a, b) lives at i * na * nb + a * nb + b
    idx = np.arange(n * na * nb).reshape(n, na, nb)
    rows_a = np.repeat(np.arange(n * na), nb)
    rows_b = n * na + (np.arange(n)[:, None, None] * nb +
                       np.arange(nb)[None, None, :]).repeat(na, axis=1).reshape(-1)
    cols = idx.reshape(-1)
    data = np.ones(cols.shape[0])
    a_eq = sparse.csr_matrix(
        (np.concatenate([data, data]),
         (np.concatenate([rows_a, rows_b]), np.concatenate([cols, cols]))),
        shape=(n * na + n * nb, n * na * nb))
    b_eq = np.concatenate([b1.reshape(-1), b2.reshape(-1)])
    cost = np.broadcast_to(_velocity_cost(union1, union2, p), (n, na, nb)).reshape(-1)

    result = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method='highs-ds',
                     options={'primal_feasibility_tolerance': 1e-10,
                              'dual_feasibility_tolerance': 1e-10})
    if result.status != 0:
        raise MFViabilityError("joint lifted LP failed: {}".format(result.message))
    logger.debug("joint lifted LP: %d variables, value %.12g", cost.shape[0], result.fun)
    return float(max(result.fun, 0.0) ** (1.0 / p))
