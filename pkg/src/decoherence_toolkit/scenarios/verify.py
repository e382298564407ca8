"""
Verification Scenario Module

Cross-checks the closed-form spin-bath results against the brute-force oracle on random (configuration,
observable, time) triples, and checks the conservation laws the oracle must obey.

Random blocks are rescaled to unit operator norm, so every expectation value lies in [-1, 1] and the absolute
tolerance is meaningful at every N.
"""

import logging
import math
from functools import partial

import numpy as np

from decoherence_toolkit.errors import CapacityError
from decoherence_toolkit.scenarios.base import BaseScenario, ScenarioResult
from decoherence_toolkit.schemas import (
    ComplexAmplitude,
    EnvSpin,
    HermitianBlock2,
    RunConfig,
    RunSummary,
    SpinBathConfig,
    VerificationRecord,
)
from decoherence_toolkit.services import AnalyticService, FullState, OracleService, SpinBathModelService
from decoherence_toolkit.services.oracle_service import MAX_ORACLE_SPINS

logger = logging.getLogger(__name__)

VERIFY_OPERATIONS = (
    "overlap_r",
    "expectation_full",
    "expectation_s0",
    "expectation_single_env",
    "reduced_state",
    "purity",
    "unitarity",
    "interaction_energy",
    "energy_conservation",
)
UNITARITY_TOLERANCE = 1e-12
TIME_RANGE = 20.0


def _random_qubit(rng: np.random.Generator) -> tuple[complex, complex]:
    x = rng.uniform(-1.0, 1.0, size=4)
    u, v = complex(x[0], x[1]), complex(x[2], x[3])
    norm = math.sqrt(abs(u) ** 2 + abs(v) ** 2)
    return u / norm, v / norm


def _random_block(rng: np.random.Generator) -> HermitianBlock2:
    d0, d1, re, im = rng.uniform(-1.0, 1.0, size=4)
    block = HermitianBlock2(d0=d0, d1=d1, off=ComplexAmplitude(re=re, im=im))
    scale = float(np.max(np.abs(np.linalg.eigvalsh(block.matrix()))))
    return HermitianBlock2(
        d0=d0 / scale, d1=d1 / scale, off=ComplexAmplitude(re=re / scale, im=im / scale)
    )


def random_config(rng: np.random.Generator, n: int) -> SpinBathConfig:
    """Random normalised configuration with couplings uniform on [-1, 1]"""
    a, b = _random_qubit(rng)
    spins = []
    for _ in range(n):
        alpha, beta = _random_qubit(rng)
        spins.append(
            EnvSpin(
                alpha=ComplexAmplitude.from_complex(alpha),
                beta=ComplexAmplitude.from_complex(beta),
                g=float(rng.uniform(-1.0, 1.0)),
            )
        )
    return SpinBathConfig(a=ComplexAmplitude.from_complex(a), b=ComplexAmplitude.from_complex(b), spins=tuple(spins))


def _oracle_energy(state: FullState, config: SpinBathConfig) -> float:
    terms = SpinBathModelService.interaction_terms(config)
    return config.hbar * sum(OracleService.expectation(state, term) for term in terms)


def verify_size(n: int, trials: int, tolerance: float, seed: int) -> list[VerificationRecord]:
    """
    Compare closed forms and oracle at one environment size

    Args:
        n: Number of environment spins, at most MAX_ORACLE_SPINS
        trials: Random triples to draw
        tolerance: Absolute tolerance for every operation but ``unitarity``
        seed: Run seed; the generator is seeded with (seed, n)

    Returns:
        list[VerificationRecord]: One record per operation, in VERIFY_OPERATIONS order
    """
    rng = np.random.default_rng([seed, n])
    worst = dict.fromkeys(VERIFY_OPERATIONS, 0.0)
    counts = dict.fromkeys(VERIFY_OPERATIONS, 0)

    for _ in range(trials):
        config = random_config(rng, n)
        t = float(rng.uniform(-TIME_RANGE, TIME_RANGE))
        full = SpinBathModelService.observable_full(_random_block(rng), [_random_block(rng) for _ in range(n)])
        s = _random_block(rng)

        initial = OracleService.build_initial(config)
        state = OracleService.evolve(initial, config, t)
        energy = _oracle_energy(state, config)
        analytic_rho = AnalyticService.reduced_state(config, t).matrix()
        deviations = {
            "overlap_r": abs(AnalyticService.overlap_r(config, t).value - OracleService.overlap(state, config).value),
            "expectation_full": abs(
                AnalyticService.expectation_full(config, full, t) - OracleService.expectation(state, full)
            ),
            "expectation_s0": abs(
                AnalyticService.expectation_s0(config, s, t)
                - OracleService.expectation(state, SpinBathModelService.observable_system_only(s, n))
            ),
            "reduced_state": float(np.max(np.abs(analytic_rho - OracleService.density_matrix(state)))),
            "purity": abs(AnalyticService.purity(config, t) - OracleService.purity(state)),
            "unitarity": abs(OracleService.norm(state) - 1.0),
            "interaction_energy": abs(AnalyticService.interaction_energy(config, t) - energy),
            "energy_conservation": abs(energy - _oracle_energy(initial, config)),
        }
        if n > 0:
            j = int(rng.integers(n))
            e = _random_block(rng)
            deviations["expectation_single_env"] = abs(
                AnalyticService.expectation_single_env(config, j, e, t)
                - OracleService.expectation(state, SpinBathModelService.observable_single_env(j, e, n))
            )

        for op, deviation in deviations.items():
            # NaN must fail the comparison, not vanish from it
            worst[op] = max(worst[op], math.inf if math.isnan(deviation) else deviation)
            counts[op] += 1

    records = [
        VerificationRecord(
            operation=op,
            n_env=n,
            trials=counts[op],
            max_abs_deviation=worst[op],
            tolerance=UNITARITY_TOLERANCE if op == "unitarity" else tolerance,
        )
        for op in VERIFY_OPERATIONS
        if counts[op]
    ]
    logger.debug("Verified N=%d: worst deviation %.3g", n, max(r.max_abs_deviation for r in records))
    return records


class VerifyScenario(BaseScenario):
    """
    Oracle verification scenario

    Each environment size runs in its own worker thread with its own generator, so the records do not depend
    on scheduling. The summary holds the overall pass flag and the worst record relative to its tolerance.
    """

    name: str = "verify"
    description: str = "Closed forms against the brute-force oracle on random triples"

    async def _run(self, config: RunConfig) -> ScenarioResult:
        section = config.verify
        if max(section.sizes) > MAX_ORACLE_SPINS:
            raise CapacityError(
                f"Oracle holds at most {MAX_ORACLE_SPINS} environment spins, got verify.sizes={section.sizes}"
            )
        logger.info("Verifying sizes %s with %d trials each", section.sizes, section.trials)

        sizes = list(dict.fromkeys(section.sizes))
        blocks = await self.in_threads(
            {
                str(n): partial(verify_size, n, section.trials, section.tolerance, config.seed)
                for n in sizes
            }
        )
        records = [record for n in sizes for record in blocks[str(n)]]

        worst = max(records, key=lambda r: r.max_abs_deviation / r.tolerance)
        passed = all(r.passed for r in records)
        if not passed:
            logger.warning(
                "Verification failed: %s at N=%d deviates by %.3g",
                worst.operation,
                worst.n_env,
                worst.max_abs_deviation,
            )

        summary = RunSummary(
            scenario=self.name,
            seed=config.seed,
            verification={
                "passed": passed,
                "sizes": sizes,
                "trials": section.trials,
                "worst": worst.model_dump(),
            },
        )
        return ScenarioResult(summary=summary, verification=records)
