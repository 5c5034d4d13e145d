"""Matrix oracles in a truncated single-mode Fock space.

These are independent of the contraction rule in ``boson_algebra``: every factor
is exponentiated as an explicit matrix and the vacuum element is read off.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import expm


def ladder(cutoff: int) -> np.ndarray:
    """Annihilation operator truncated to occupations 0..cutoff-1."""
    return np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), 1)


def single_mode_expectation(factors, commutator_scale: float = 1.0, cutoff: int = 64,
                            normal_ordered: bool = True) -> complex:
    """<0| prod_i F_i |0> for one branch-1 mode.

    ``factors`` is a sequence of ``(c_ann, c_cre)``: coefficients on rho_1(-p)
    and rho_1(p), with rho_1(-p) = sqrt(k) a and rho_1(p) = sqrt(k) a^+.
    Normal-ordered factors are exp(c_cre rho_1(p)) exp(c_ann rho_1(-p)); otherwise
    exp(c_cre rho_1(p) + c_ann rho_1(-p)).
    """
    a = ladder(cutoff).astype(complex)
    ad = a.conj().T
    root = np.sqrt(commutator_scale)
    state = np.zeros(cutoff, dtype=complex)
    state[0] = 1.0
    mats = []
    for c_ann, c_cre in factors:
        if normal_ordered:
            mats.append(expm(c_cre * root * ad) @ expm(c_ann * root * a))
        else:
            mats.append(expm(c_cre * root * ad + c_ann * root * a))
    out = state.copy()
    for m in reversed(mats):
        out = m @ out
    return complex(state.conj() @ out)
