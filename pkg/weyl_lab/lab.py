"""Unified facade running experiments end to end."""

import logging
import math
import os
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Literal

from dotenv import load_dotenv

from .analysis import (
    concentration_report,
    gap_report,
    ld_profile,
    ld_upper_profile,
    weyl_fit,
)
from .cache_backend import FileCache, NullCache, SpectrumCache
from .classical import (
    box_dimension,
    gap_criterion,
    pressure,
    rate_function,
    trapped_set_sample,
)
from .exceptions import DomainError
from .models import (
    CapSpec,
    DampingField,
    Direction,
    ExperimentConfig,
    MapKind,
    OpenMapSpec,
    QuantumMapSpec,
    SpectrumRecord,
    SweepConfig,
)
from .parsers.config import normalize_config
from .quantum_maps import map_spectrum, spec_metadata
from .reports import (
    Report,
    concentration_rows,
    dimension_rows,
    gap_rows,
    pressure_rows,
    profile_rows,
    rate_rows,
    spectrum_rows,
    to_document,
)
from .resonances import (
    hamiltonian_spectrum,
    resonance_rows,
    resonances_from_spectrum,
    stable_resonances,
)
from .transfer_matrix import transfer_matrix_bound_states, transfer_matrix_resonances
from .utils import DEFAULT_CELL_CAP, env_int, params_hash

logger = logging.getLogger(__name__)

# Default perturbations for the resonance plateau check
DEFAULT_ETA = 0.01
DEFAULT_THETA = 0.3
THETA_STEP = 0.05

# Config fields that describe where and how a run executes, not what it computes
RUN_FIELDS = {"output", "csv", "threads"}


class Laboratory:
    """Runs experiment configs: builds maps and Hamiltonians, computes spectra, analyses them.

    Spectrum ladders are computed on a thread pool, one task per spectrum,
    and merged in ladder order, so results never depend on completion order
    or on the number of threads.
    """

    def __init__(
        self,
        threads: int | None = None,
        cell_cap: int | None = None,
        cache_backend: SpectrumCache | None = None,
    ):
        """Initialize the laboratory.

        Args:
            threads: Worker threads for spectrum ladders (default: WCL_THREADS env var,
                else the number of logical cores)
            cell_cap: Enumeration cap for classical computations (default: WCL_CELL_CAP
                env var, else 10^7)
            cache_backend: Spectrum cache (default: FileCache in WCL_CACHE_DIR when set,
                else NullCache)
        """
        load_dotenv()
        self.threads = threads or env_int("WCL_THREADS", os.cpu_count() or 1)
        self._threads_given = threads is not None
        self.cell_cap = cell_cap or env_int("WCL_CELL_CAP", DEFAULT_CELL_CAP)
        self._cache_backend = cache_backend

    @property
    def cache(self) -> SpectrumCache:
        """Spectrum cache (lazy initialization).

        Returns:
            SpectrumCache instance
        """
        if self._cache_backend is None:
            cache_dir = os.environ.get("WCL_CACHE_DIR")
            self._cache_backend = FileCache(cache_dir) if cache_dir else NullCache()
        return self._cache_backend

    # Spectra

    def spectrum(
        self, spec: QuantumMapSpec, eig_method: Literal["lapack", "qr"] = "lapack"
    ) -> SpectrumRecord:
        """Spectrum of one quantized map, served from the cache when possible."""
        key = params_hash({**spec_metadata(spec), "eig_method": eig_method})
        cached = self.cache.get(key)
        if cached is not None:
            return cached
        record = map_spectrum(spec, method=eig_method)
        self.cache.set(key, record)
        return record

    def spectra(
        self, specs: Sequence[QuantumMapSpec], eig_method: Literal["lapack", "qr"] = "lapack"
    ) -> list[SpectrumRecord]:
        """Spectra of several maps, returned in the order of ``specs``.

        Args:
            specs: Map specifications (one task each)
            eig_method: Eigenvalue back-end

        Returns:
            One record per spec, same order
        """
        if self.threads == 1 or len(specs) <= 1:
            return [self.spectrum(spec, eig_method) for spec in specs]
        logger.debug(f"Computing {len(specs)} spectra on {self.threads} threads")
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            return list(executor.map(lambda spec: self.spectrum(spec, eig_method), specs))

    def _ladder_specs(
        self,
        config: ExperimentConfig,
        ladder: Sequence[int],
        kind: MapKind,
    ) -> list[QuantumMapSpec]:
        open_map = self._map_for(config, kind)
        return [
            QuantumMapSpec(
                open_map=open_map,
                N=n,
                kind=kind,
                damping=config.damping if kind == MapKind.DAMPED else None,
                phases=config.phases,
            )
            for n in ladder
        ]

    @staticmethod
    def _map_for(config: ExperimentConfig, kind: MapKind) -> OpenMapSpec:
        if kind == MapKind.DAMPED:
            if config.damping is None:
                raise DomainError("damped maps need a damping field")
            return OpenMapSpec.closed(config.damping.branch_count)
        if config.open_map is None:
            raise DomainError("open maps need open_map")
        return config.open_map

    # Experiments

    def run(self, config: ExperimentConfig) -> Report:
        """Run one experiment.

        Args:
            config: Validated experiment config

        Returns:
            Report with the result document and CSV rows

        Raises:
            WCLError: Any domain, capacity or numerical failure of the computation
        """
        handlers = {
            "classical-dim": self._classical_dim,
            "pressure": self._pressure,
            "rate-function": self._rate_function,
            "baker-spectrum": self._baker_spectrum,
            "damped-spectrum": self._damped_spectrum,
            "weyl-fit": self._weyl_fit,
            "gap-report": self._gap_report,
            "concentration": self._concentration,
            "ld-profile": self._ld_profile,
            "resonance-1d": self._resonance_1d,
        }
        logger.info(f"Running {config.command}")
        logger.debug(f"Config {normalize_config(config)}")
        result, rows = handlers[config.command](config)
        return Report(
            command=config.command,
            config=config.model_dump(mode="json", exclude_none=True, exclude=RUN_FIELDS),
            result=to_document(result),
            rows=rows,
        )

    def sweep(self, sweep: SweepConfig) -> list[Report]:
        """Run every experiment of a sweep, in config order.

        The sweep's ``threads`` applies only when the laboratory was built without one.
        """
        if sweep.threads is not None and not self._threads_given:
            self.threads = sweep.threads
        return [self.run(config) for config in sweep.experiments]

    def _classical_dim(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        first, last = config.depths
        sample = trapped_set_sample(config.open_map, last, config.direction, cap=self.cell_cap)
        estimate = box_dimension(sample, (first, last))
        factor = 2.0 if config.direction == Direction.FULL else 1.0
        result = {
            "estimate": estimate,
            "direction": config.direction,
            "expected": factor * config.open_map.partial_dimension,
        }
        return result, dimension_rows(estimate)

    def _pressure(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        estimate = pressure(
            config.open_map,
            config.weight_s,
            damping=config.damping,
            beta=config.beta,
            T=config.T,
            cap=self.cell_cap,
        )
        result: dict[str, Any] = {"estimate": estimate, "error": estimate.error}
        if config.damping is None:
            result["gap_criterion"] = gap_criterion(config.open_map)
        return result, pressure_rows([estimate])

    def _rate_function(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        open_map = config.open_map or OpenMapSpec.closed(config.damping.branch_count)
        rate_fn = rate_function(
            open_map,
            config.damping,
            config.alphas,
            method="empirical" if config.empirical_T is not None else "auto",
            T=config.empirical_T,
            cap=self.cell_cap,
        )
        return rate_fn, rate_rows(rate_fn)

    def _baker_spectrum(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        (spec,) = self._ladder_specs(config, [config.N], MapKind.OPEN)
        record = self.spectrum(spec, config.eig_method)
        return record, spectrum_rows(record)

    def _damped_spectrum(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        (spec,) = self._ladder_specs(config, [config.N], MapKind.DAMPED)
        record = self.spectrum(spec, config.eig_method)
        return record, spectrum_rows(record)

    def _weyl_fit(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        records = self.spectra(
            self._ladder_specs(config, config.N_ladder, MapKind.OPEN), config.eig_method
        )
        profile = weyl_fit(records, config.r)
        return profile, profile_rows([profile])

    def _gap_report(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        ladder = sorted(config.N_ladder)
        if config.fast and len(ladder) > 2:
            # drop the largest N
            ladder = ladder[:-1]
        if config.damping is not None:
            kind = MapKind.DAMPED
            estimate = pressure(
                OpenMapSpec.closed(config.damping.branch_count),
                0.5,
                damping=config.damping,
                beta=1.0,
                T=config.T,
                cap=self.cell_cap,
            )
        else:
            kind = MapKind.OPEN
            estimate = pressure(config.open_map, 0.5, T=config.T, cap=self.cell_cap)
        records = self.spectra(self._ladder_specs(config, ladder, kind), config.eig_method)
        report = gap_report(records, estimate)
        return report, gap_rows(report)

    def _damped_ladder(self, config: ExperimentConfig) -> list[SpectrumRecord]:
        return self.spectra(
            self._ladder_specs(config, config.N_ladder, MapKind.DAMPED), config.eig_method
        )

    def _concentration(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        report = concentration_report(
            self._damped_ladder(config), config.damping, config.epsilons
        )
        return report, concentration_rows(report)

    def _ld_profile(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        damping: DampingField = config.damping
        rate_fn = rate_function(
            OpenMapSpec.closed(damping.branch_count),
            damping,
            config.alphas,
            method="empirical" if config.empirical_T is not None else "auto",
            T=config.empirical_T,
            cap=self.cell_cap,
        )
        records = self._damped_ladder(config)
        lower = ld_profile(records, rate_fn, config.alphas)
        upper_alphas = [a for a in config.alphas if a > rate_fn.b_mean]
        upper = ld_upper_profile(records, rate_fn, upper_alphas) if upper_alphas else []
        result = {"rate_function": rate_fn, "lower_tail": lower, "upper_tail": upper}
        return result, profile_rows(lower + upper)

    def _resonance_1d(self, config: ExperimentConfig) -> tuple[Any, list[dict]]:
        potential = config.potential
        hbar = config.hbar or (config.grid.hbar if config.grid is not None else None)
        if hbar is None:
            raise DomainError("resonance-1d needs hbar (directly or through the grid)")
        window = config.window or (0.0, potential.max_height)

        if config.method == "oracle":
            if config.search_box is None:
                raise DomainError("the oracle method needs search_box")
            found = transfer_matrix_resonances(potential, hbar, config.search_box)
            bound = transfer_matrix_bound_states(potential, hbar)
            result = {"resonances": found, "bound_states": bound, "hbar": hbar}
            return result, resonance_rows(found, None)

        grid = config.grid
        if config.hbar is not None:
            grid = grid.model_copy(update={"hbar": hbar})
        if config.method == "cap":
            onset = config.cap_onset if config.cap_onset is not None else potential.support_radius
            eta = config.eta if config.eta is not None else DEFAULT_ETA
            runs = [
                hamiltonian_spectrum(
                    grid,
                    potential,
                    "cap",
                    cap=CapSpec(strength=strength, onset=onset),
                    eig_method=config.eig_method,
                )
                for strength in (eta, 2.0 * eta)
            ]
        else:
            theta = config.theta if config.theta is not None else DEFAULT_THETA
            perturbed = min(theta + THETA_STEP, math.pi / 4 - 1e-6)
            runs = [
                hamiltonian_spectrum(
                    grid, potential, "scaling", theta=angle, eig_method=config.eig_method
                )
                for angle in (theta, perturbed)
            ]
        first, second = runs

        candidates = resonances_from_spectrum(first, window, hbar, config.max_width)
        stable = stable_resonances(
            candidates, resonances_from_spectrum(second, window, hbar, config.max_width)
        )
        result = {
            "resonances": stable,
            "candidates": len(candidates),
            "warnings": first.builder.get("warnings", []),
            "hbar": hbar,
        }
        logger.info(f"{len(stable)} of {len(candidates)} resonances stable under perturbation")
        return result, resonance_rows(stable, grid.n)
