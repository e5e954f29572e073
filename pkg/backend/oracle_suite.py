"""On-demand self checks: product-space decomposition and dense vs closed-form agreement."""

import logging
import math
from typing import List, Optional

import numpy as np

from config.settings import settings

from .entangle_core import analyze, entanglement_e
from .errors import DegenerateFrameError, ProductSpaceLimitError
from .models import CheckResult, CollectiveState, FrameAngles, SqueezedVacuumParams
from .product_oracle import (
    collective_rotated_variances,
    embed_symmetric,
    individual_rotated_variances,
    pairwise_corr,
    product_coherent_state,
    separability_residual,
    swap_residual,
)
from .spin_algebra import from_amplitudes, make_sector
from .squeezed_vacuum import (
    build_state,
    closed_form_report,
    lambda_residual,
    oracle_report,
    report_discrepancy,
)
from .wigner import delta_consistency

logger = logging.getLogger(__name__)

_RANDOM_STATES = 50
_PRODUCT_DIRECTIONS = 100
_DENSE_N = (2, 4, 10, 51, 100)
_DENSE_XI = (0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 3.0)


def _symmetric_samples(n_atoms: int, rng: np.random.Generator) -> List[CollectiveState]:
    sector = make_sector(n_atoms)
    states = [
        from_amplitudes(
            sector,
            rng.normal(size=sector.dim) + 1j * rng.normal(size=sector.dim),
            normalize=True,
        )
        for _ in range(_RANDOM_STATES)
    ]
    for two_m in sector.two_m_values:
        states.append(build_state(SqueezedVacuumParams(n_atoms=n_atoms, two_m=two_m, xi=0.7)))
    return states


def _product_checks(n_atoms: int, rng: np.random.Generator, fault: float) -> List[CheckResult]:
    swap = decomposition = quarter = collective = 0.0
    for state in _symmetric_samples(n_atoms, rng):
        try:
            report = analyze(state)
        except DegenerateFrameError:
            continue
        embedded = embed_symmetric(state)
        angles = report.angles
        swap = max(swap, swap_residual(embedded))

        corr_x, corr_y = pairwise_corr(embedded, angles)
        corr_x += fault
        individual = individual_rotated_variances(embedded, angles)
        total_x, total_y = collective_rotated_variances(embedded, angles)
        decomposition = max(
            decomposition,
            abs(total_x - sum(v[0] for v in individual) - corr_x),
            abs(total_y - sum(v[1] for v in individual) - corr_y),
        )
        quarter = max(quarter, max(abs(v - 0.25) for pair in individual for v in pair))
        collective = max(
            collective,
            abs(total_x - report.var_xp),
            abs(total_y - report.var_yp),
            abs(entanglement_e(corr_x, corr_y) - report.e_param),
        )

    separable = 0.0
    residual = 0.0
    for _ in range(_PRODUCT_DIRECTIONS):
        theta, phi = math.acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, 2 * math.pi)
        product = product_coherent_state(n_atoms, theta, phi)
        corr_x, corr_y = pairwise_corr(product, FrameAngles(theta=theta, phi=phi))
        separable = max(separable, entanglement_e(corr_x, corr_y))
        residual = max(residual, separability_residual(product))

    tol = settings.product_tol
    return [
        CheckResult(name=f"product N={n_atoms}: permutation symmetry", residual=swap, tolerance=1e-12),
        CheckResult(name=f"product N={n_atoms}: decomposition", residual=decomposition, tolerance=tol),
        CheckResult(name=f"product N={n_atoms}: individual 1/4", residual=quarter, tolerance=tol),
        CheckResult(name=f"product N={n_atoms}: collective match", residual=collective, tolerance=tol),
        CheckResult(name=f"product N={n_atoms}: separable E", residual=separable, tolerance=tol),
        CheckResult(name=f"product N={n_atoms}: factorization", residual=residual, tolerance=1e-12),
    ]


def _dense_checks() -> List[CheckResult]:
    worst = 0.0
    for n_atoms in _DENSE_N:
        for two_m in range(-n_atoms, n_atoms + 1, 2):
            for xi in _DENSE_XI:
                params = SqueezedVacuumParams(n_atoms=n_atoms, two_m=two_m, xi=xi)
                try:
                    closed = closed_form_report(params)
                except DegenerateFrameError:
                    continue
                worst = max(worst, report_discrepancy(closed, oracle_report(params)))

    anchor = SqueezedVacuumParams(n_atoms=100, two_m=20, xi=1.0)
    return [
        CheckResult(
            name=f"dense vs closed form N={','.join(map(str, _DENSE_N))}",
            residual=worst,
            tolerance=settings.oracle_rel_tol,
        ),
        CheckResult(name="lambda eigenrelation N=100", residual=lambda_residual(anchor), tolerance=1e-8),
        CheckResult(
            name="delta consistency N=100",
            residual=delta_consistency(anchor.two_j, anchor.two_m, anchor.xi),
            tolerance=1e-10,
        ),
    ]


def run_oracle_suite(max_n_product: int = 4, inject_fault: Optional[bool] = None) -> List[CheckResult]:
    """Run every check; inject_fault corrupts the pairwise sum to prove failures are caught."""
    if max_n_product < 1 or max_n_product > settings.product_max_atoms:
        raise ProductSpaceLimitError(
            f"max_n_product must be in 1..{settings.product_max_atoms}, got {max_n_product}"
        )
    if inject_fault is None:
        inject_fault = settings.oracle_inject_fault
    fault = 1.0 if inject_fault else 0.0

    rng = np.random.default_rng(20240601)
    results = []
    for n_atoms in range(1, max_n_product + 1):
        results.extend(_product_checks(n_atoms, rng, fault))
    results.extend(_dense_checks())

    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.warning(f"Oracle suite: {len(failed)} checks failed: {', '.join(failed)}")
    else:
        logger.info(f"Oracle suite: all {len(results)} checks passed")
    return results
