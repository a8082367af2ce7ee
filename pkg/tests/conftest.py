"""Shared helpers for the test suite."""

import numpy as np
import pytest

from beambranch import (
    NonlocalEvaluator,
    assemble_operator,
    build_problem,
    principal_eigenpair,
    second_difference_eigenvalue,
)

EPS = np.finfo(float).eps


def make_problem(p="constant:0", a="constant:100", f="constant:1",
                 rho=1.0, sigma=2.0, n=199):
    cfg = {
        "n": str(n), "rho": str(rho), "sigma": str(sigma),
        "p": p, "a": a, "f": f,
    }
    return build_problem(cfg)


def make_setup(**kwargs):
    """Problem plus assembled operator and interaction evaluator."""
    spec = make_problem(**kwargs)
    fact = assemble_operator(spec)
    ev = NonlocalEvaluator.from_spec(spec)
    return spec, fact, ev


def fourth_difference_floor(n, sup_norm=1.0, safety=4.0):
    """Double-precision evaluation floor of the raw fourth-difference residual:
    a safety multiple of ||L_h||_inf * eps * ||u||_inf."""
    return safety * 16.0 * (n + 1) ** 4 * EPS * max(sup_norm, 1.0)


def exact_branch_amplitude(lam, p, a, n):
    """Closed-form amplitude of the constant-coefficient branch with unit kernel,
    rho = 1, sigma = 2: lambda A^2 = 2 (a lambda - mu1^2 - p mu1)."""
    mu1 = second_difference_eigenvalue(n, 1)
    return np.sqrt(2.0 * (a * lam - mu1 * mu1 - p * mu1) / lam)


@pytest.fixture(scope="session")
def bench199():
    """Constant benchmark instance at n = 199 with its principal pair."""
    spec, fact, ev = make_setup()
    pair = principal_eigenpair(fact, spec.a.samples)
    return spec, fact, ev, pair
